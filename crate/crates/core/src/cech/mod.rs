//! Čech cocycles on a cover nerve with values in a finite crossed module.
//!
//! Cochains live on strictly increasing simplices; the relations are
//! instantiated on increasing index patterns only:
//!
//! * 0-cocycles `(g_i, h_ij)`: `g_i = d(h_ij) g_j` on edges and
//!   `h_ij h_jk = h_ik` on triangles.
//! * 1-cocycles `(g_ij, h_ijk)`: `g_ij g_jk = d(h_ijk) g_ik` on triangles
//!   and `h_ijk h_ikl = ^{g_ij}h_jkl h_ijl` on tetrahedra.

mod classes;
mod classical;
mod equiv;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossed::CrossedModule;
use crate::nerve::Nerve;

pub use classes::{h0, h1, Classes, DEFAULT_BUDGET};
pub use classical::{
    classical_cech, classical_nonabelian_h0, classical_nonabelian_h1, coboundary, compare_hyper, ClassicalCohomology,
    HyperEntry, HyperReport, NonabelianClasses,
};
pub use equiv::{apply0, apply1, equiv0, equiv1, verify_witness0, verify_witness1};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("missing assignment: {0}")]
    MissingAssignment(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("input is not a cocycle")]
    InvalidCocycle,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("search budget exceeded after {examined} candidates ({} partial classes)", partial.len())]
    BudgetExceeded { examined: u64, partial: Vec<Vec<usize>> },
    #[error("bijection mismatch: {0}")]
    MismatchDetected(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroCocycle {
    /// `g[i]` in `G^0`, one per vertex.
    pub g: Vec<usize>,
    /// `h[e]` in `G^{-1}`, one per edge in nerve order.
    pub h: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneCocycle {
    /// `g[e]` in `G^0`, one per edge.
    pub g: Vec<usize>,
    /// `h[t]` in `G^{-1}`, one per triangle.
    pub h: Vec<usize>,
}

impl ZeroCocycle {
    pub fn identity(nerve: &Nerve) -> Self {
        ZeroCocycle { g: vec![0; nerve.vertices()], h: vec![0; nerve.edges().len()] }
    }

    /// Flattened `g` followed by `h`.
    pub fn key(&self) -> Vec<usize> {
        self.g.iter().chain(&self.h).copied().collect()
    }
}

impl OneCocycle {
    pub fn identity(nerve: &Nerve) -> Self {
        OneCocycle { g: vec![0; nerve.edges().len()], h: vec![0; nerve.triangles().len()] }
    }

    pub fn key(&self) -> Vec<usize> {
        self.g.iter().chain(&self.h).copied().collect()
    }
}

/// `k[i]` in `G^{-1}` for each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness0 {
    pub k: Vec<usize>,
}

/// `l[i]` in `G^0` for each vertex and `k[e]` in `G^{-1}` for each edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness1 {
    pub l: Vec<usize>,
    pub k: Vec<usize>,
}

impl Witness0 {
    pub fn identity(nerve: &Nerve) -> Self {
        Witness0 { k: vec![0; nerve.vertices()] }
    }

    pub fn inverse(&self, cm: &CrossedModule) -> Self {
        Witness0 { k: self.k.iter().map(|&k| cm.gm1().inv(k)).collect() }
    }

    /// `self` after `first`.
    pub fn compose(&self, cm: &CrossedModule, first: &Self) -> Self {
        let g = cm.gm1();
        Witness0 { k: self.k.iter().zip(&first.k).map(|(&a, &b)| g.mul(a, b)).collect() }
    }
}

impl Witness1 {
    pub fn identity(nerve: &Nerve) -> Self {
        Witness1 { l: vec![0; nerve.vertices()], k: vec![0; nerve.edges().len()] }
    }

    /// `(l_i^{-1}, ^{l_i^{-1}} k_ij^{-1})`.
    pub fn inverse(&self, cm: &CrossedModule, nerve: &Nerve) -> Self {
        let l: Vec<usize> = self.l.iter().map(|&l| cm.g0().inv(l)).collect();
        let k = nerve
            .edges()
            .iter()
            .zip(&self.k)
            .map(|(&[i, _], &k)| cm.act(l[i], cm.gm1().inv(k)))
            .collect();
        Witness1 { l, k }
    }

    /// `self` after `first`: `(l'_i l_i, k'_ij ^{l'_i}k_ij)`.
    pub fn compose(&self, cm: &CrossedModule, nerve: &Nerve, first: &Self) -> Self {
        let l = self.l.iter().zip(&first.l).map(|(&a, &b)| cm.g0().mul(a, b)).collect();
        let k = nerve
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &[i, _])| cm.gm1().mul(self.k[e], cm.act(self.l[i], first.k[e])))
            .collect();
        Witness1 { l, k }
    }
}

/// A failed relation on one simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub simplex: Vec<usize>,
    pub relation: &'static str,
}

fn check_len(what: &str, got: usize, want: usize) -> Result<(), CechError> {
    if got != want {
        return Err(CechError::MissingAssignment(format!("{what}: {got} values for {want} simplices")));
    }
    Ok(())
}

fn check_range(what: &str, vals: &[usize], size: usize) -> Result<(), CechError> {
    if let Some(&v) = vals.iter().find(|&&v| v >= size) {
        return Err(CechError::InvalidElement(format!("{what}: {v} is not below {size}")));
    }
    Ok(())
}

pub(crate) fn shape0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle) -> Result<(), CechError> {
    check_len("g", c.g.len(), nerve.vertices())?;
    check_len("h", c.h.len(), nerve.edges().len())?;
    check_range("g", &c.g, cm.g0().size())?;
    check_range("h", &c.h, cm.gm1().size())
}

pub(crate) fn shape1(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle) -> Result<(), CechError> {
    check_len("g", c.g.len(), nerve.edges().len())?;
    check_len("h", c.h.len(), nerve.triangles().len())?;
    check_range("g", &c.g, cm.g0().size())?;
    check_range("h", &c.h, cm.gm1().size())
}

/// Every relation of a 0-cocycle that fails.
pub fn failures0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle) -> Result<Vec<Failure>, CechError> {
    shape0(cm, nerve, c)?;
    let (g0, gm1) = (cm.g0(), cm.gm1());
    let mut out = Vec::new();
    for (e, &[i, j]) in nerve.edges().iter().enumerate() {
        if c.g[i] != g0.mul(cm.d(c.h[e]), c.g[j]) {
            out.push(Failure { simplex: vec![i, j], relation: "g_i = d(h_ij) g_j" });
        }
    }
    for &[i, j, k] in nerve.triangles() {
        let e = |a, b| nerve.edge_index(a, b).unwrap();
        if gm1.mul(c.h[e(i, j)], c.h[e(j, k)]) != c.h[e(i, k)] {
            out.push(Failure { simplex: vec![i, j, k], relation: "h_ij h_jk = h_ik" });
        }
    }
    Ok(out)
}

pub fn check0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle) -> Result<bool, CechError> {
    Ok(failures0(cm, nerve, c)?.is_empty())
}

/// Every relation of a 1-cocycle that fails.
pub fn failures1(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle) -> Result<Vec<Failure>, CechError> {
    shape1(cm, nerve, c)?;
    let (g0, gm1) = (cm.g0(), cm.gm1());
    let e = |a, b| nerve.edge_index(a, b).unwrap();
    let t = |a, b, c| nerve.triangle_index(a, b, c).unwrap();
    let mut out = Vec::new();
    for (ti, &[i, j, k]) in nerve.triangles().iter().enumerate() {
        let lhs = g0.mul(c.g[e(i, j)], c.g[e(j, k)]);
        let rhs = g0.mul(cm.d(c.h[ti]), c.g[e(i, k)]);
        if lhs != rhs {
            out.push(Failure { simplex: vec![i, j, k], relation: "g_ij g_jk = d(h_ijk) g_ik" });
        }
    }
    for &[i, j, k, l] in nerve.tetrahedra() {
        let lhs = gm1.mul(c.h[t(i, j, k)], c.h[t(i, k, l)]);
        let rhs = gm1.mul(cm.act(c.g[e(i, j)], c.h[t(j, k, l)]), c.h[t(i, j, l)]);
        if lhs != rhs {
            out.push(Failure { simplex: vec![i, j, k, l], relation: "h_ijk h_ikl = ^{g_ij}h_jkl h_ijl" });
        }
    }
    Ok(out)
}

pub fn check1(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle) -> Result<bool, CechError> {
    Ok(failures1(cm, nerve, c)?.is_empty())
}

pub(crate) fn simplex_key(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn keyed(nerve: &Nerve, dim: usize, vals: &[usize]) -> BTreeMap<String, usize> {
    nerve.simplices(dim).iter().zip(vals).map(|(s, &v)| (simplex_key(s), v)).collect()
}

fn unkeyed(nerve: &Nerve, dim: usize, what: &str, map: &BTreeMap<String, usize>) -> Result<Vec<usize>, CechError> {
    let simplices = nerve.simplices(dim);
    let mut out = Vec::with_capacity(simplices.len());
    for s in &simplices {
        let key = simplex_key(s);
        out.push(*map.get(&key).ok_or_else(|| CechError::MissingAssignment(format!("{what} at {key}")))?);
    }
    if let Some(extra) = map.keys().find(|k| !simplices.iter().any(|s| &simplex_key(s) == *k)) {
        return Err(CechError::MissingAssignment(format!("{what} given on {extra}, which is not a simplex")));
    }
    Ok(out)
}

/// Wire form keyed by simplex tuples, `{"g": {"0": 1}, "h": {"0,1": 0}}`
/// for 0-cocycles and `{"g": {"0,1": ..}, "h": {"0,1,2": ..}}` for
/// 1-cocycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleJson {
    #[serde(default)]
    pub g: BTreeMap<String, usize>,
    #[serde(default)]
    pub h: BTreeMap<String, usize>,
}

impl ZeroCocycle {
    pub fn to_json(&self, nerve: &Nerve) -> CocycleJson {
        CocycleJson { g: keyed(nerve, 0, &self.g), h: keyed(nerve, 1, &self.h) }
    }

    pub fn from_json(nerve: &Nerve, j: &CocycleJson) -> Result<Self, CechError> {
        Ok(ZeroCocycle { g: unkeyed(nerve, 0, "g", &j.g)?, h: unkeyed(nerve, 1, "h", &j.h)? })
    }
}

impl OneCocycle {
    pub fn to_json(&self, nerve: &Nerve) -> CocycleJson {
        CocycleJson { g: keyed(nerve, 1, &self.g), h: keyed(nerve, 2, &self.h) }
    }

    pub fn from_json(nerve: &Nerve, j: &CocycleJson) -> Result<Self, CechError> {
        Ok(OneCocycle { g: unkeyed(nerve, 1, "g", &j.g)?, h: unkeyed(nerve, 2, "h", &j.h)? })
    }
}
