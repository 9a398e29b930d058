//! WKB descent data on a cover nerve.
//!
//! Chart maps are identities and the transitions are inner,
//! `φ_ij = ad(Q_ij)`. A datum is valid when
//!
//! * `ad(Q_ij) ad(Q_jk) = ad(P_ijk) ad(Q_ik)` on the generators
//!   `x_i`, `u_i τ` (triangles), and
//! * `P_ijk P_ikl = ad(Q_ij)(P_jkl) P_ijl` (tetrahedra).
//!
//! Its characteristic class is the central defect
//! `c_ijk = Q_ij Q_jk (P_ijk Q_ik)^{-1}`, a 2-cocycle with values in `k*`.

mod bridge;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cech::simplex_key;
use crate::nerve::{Nerve, NerveError, NerveJson};
use crate::series::TauSeries;
use crate::wkb::{HalfFormJson, HalfFormOperator, WkbError, WkbSymbol, WkbSymbolJson};

pub use bridge::{bridge_backward, bridge_forward, bridge_verify, Bridge, BridgeError, BridgeReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("missing assignment: {0}")]
    MissingAssignment(String),
    #[error("invalid generator data: {0}")]
    InvalidGenerator(String),
    #[error("transition on edge {edge:?} is not invertible")]
    NotInvertible { edge: [usize; 2] },
    #[error("twist on triangle {triangle:?} is not in W^(sqrt v,*)")]
    NotUnitary { triangle: [usize; 3] },
    #[error("data are known to depth {available}, {needed} requested")]
    DepthInsufficient { needed: usize, available: usize },
    #[error("datum fails {failed} descent checks")]
    InvalidDatum { failed: usize },
    #[error("defect on triangle {triangle:?} is not a scalar")]
    NonCentralDefect { triangle: [usize; 3] },
    #[error("defect on triangle {triangle:?} is central but not in k*")]
    DefectOutsideKStar { triangle: [usize; 3] },
    #[error("extracted class fails the cocycle identity on {tetrahedron:?}")]
    CocycleIdentityFails { tetrahedron: [usize; 4] },
    #[error(transparent)]
    Wkb(#[from] WkbError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
}

/// Inner descent datum: `q[e]` per edge, `p[t]` per triangle, in nerve order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WkbDescentDatum {
    nerve: Nerve,
    q: Vec<WkbSymbol>,
    p: Vec<HalfFormOperator>,
}

impl WkbDescentDatum {
    pub fn new(nerve: Nerve, q: Vec<WkbSymbol>, p: Vec<HalfFormOperator>) -> Result<Self, DescentError> {
        if q.len() != nerve.edges().len() {
            return Err(DescentError::MissingAssignment(format!(
                "{} transitions for {} edges",
                q.len(),
                nerve.edges().len()
            )));
        }
        if p.len() != nerve.triangles().len() {
            return Err(DescentError::MissingAssignment(format!(
                "{} twists for {} triangles",
                p.len(),
                nerve.triangles().len()
            )));
        }
        let dims: Vec<usize> = q.iter().map(WkbSymbol::dim).chain(p.iter().map(|h| h.op().dim())).collect();
        let Some(&n) = dims.first() else {
            return Err(DescentError::InvalidGenerator("nerve has no edges, so no chart dimension".into()));
        };
        if n == 0 {
            return Err(DescentError::InvalidGenerator("charts of dimension 0 have no generators".into()));
        }
        if let Some(&m) = dims.iter().find(|&&m| m != n) {
            return Err(DescentError::InvalidGenerator(format!("chart dimensions {n} and {m} disagree")));
        }
        for (e, s) in q.iter().enumerate() {
            if s.is_zero() || !s.is_invertible()? {
                return Err(DescentError::NotInvertible { edge: nerve.edges()[e] });
            }
        }
        for (t, h) in p.iter().enumerate() {
            if !h.wstar_check() {
                return Err(DescentError::NotUnitary { triangle: nerve.triangles()[t] });
            }
        }
        Ok(WkbDescentDatum { nerve, q, p })
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn dim(&self) -> usize {
        self.q.first().map(WkbSymbol::dim).unwrap_or_else(|| self.p[0].op().dim())
    }

    pub fn q(&self) -> &[WkbSymbol] {
        &self.q
    }

    pub fn p(&self) -> &[HalfFormOperator] {
        &self.p
    }

    /// Depth to which every operator is known.
    pub fn depth(&self) -> usize {
        self.q.iter().map(WkbSymbol::depth).chain(self.p.iter().map(|h| h.op().depth())).min().unwrap_or(0)
    }

    fn edge(&self, i: usize, j: usize) -> &WkbSymbol {
        &self.q[self.nerve.edge_index(i, j).expect("edge of the nerve")]
    }

    fn twist(&self, i: usize, j: usize, k: usize) -> WkbSymbol {
        self.p[self.nerve.triangle_index(i, j, k).expect("triangle of the nerve")].to_flat().into_op()
    }

    fn need(&self, depth: usize) -> Result<(), DescentError> {
        let available = self.depth();
        if depth == 0 || depth > available {
            return Err(DescentError::DepthInsufficient { needed: depth.max(1), available });
        }
        Ok(())
    }
}

/// One relation instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexCheck {
    pub simplex: Vec<usize>,
    pub relation: &'static str,
    /// Generator the automorphism relation was tested on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    pub ok: bool,
    /// `lhs - rhs` on the checked window, when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub valid: bool,
    pub depth: usize,
    pub checks: Vec<SimplexCheck>,
}

impl DescentReport {
    pub fn failures(&self) -> impl Iterator<Item = &SimplexCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

/// Compares `lhs` and `rhs` on the window of the given `depth` below `top`.
fn compare(lhs: &WkbSymbol, rhs: &WkbSymbol, top: i64, depth: usize) -> Result<Option<String>, DescentError> {
    let floor = top - depth as i64 + 1;
    let known = lhs.floor().max(rhs.floor());
    if known > floor {
        return Err(DescentError::DepthInsufficient { needed: depth, available: (top - known + 1).max(0) as usize });
    }
    let (l, r) = (lhs.truncate(floor), rhs.truncate(floor));
    if l.eq_on_window(&r) {
        Ok(None)
    } else {
        Ok(Some(l.sub(&r)?.to_string()))
    }
}

/// Checks both descent relations to `depth`.
pub fn validate_descent(d: &WkbDescentDatum, depth: usize) -> Result<DescentReport, DescentError> {
    d.need(depth)?;
    let n = d.dim();
    let nerve = &d.nerve;
    let mut checks = Vec::new();
    let generators: Vec<(String, WkbSymbol, i64)> = (0..n)
        .map(|i| (format!("x{i}"), WkbSymbol::x(n, i, depth), 0))
        .chain((0..n).map(|i| (format!("u{i}τ"), WkbSymbol::u_tau(n, i, depth), 1)))
        .collect();
    for &[i, j, k] in nerve.triangles() {
        let (qij, qjk, qik) = (d.edge(i, j), d.edge(j, k), d.edge(i, k));
        let p = d.twist(i, j, k);
        for (name, x, top) in &generators {
            let lhs = qij.ad_apply(&qjk.ad_apply(x)?)?;
            let rhs = p.ad_apply(&qik.ad_apply(x)?)?;
            let residual = compare(&lhs, &rhs, *top, depth)?;
            checks.push(SimplexCheck {
                simplex: vec![i, j, k],
                relation: "ad(Q_ij) ad(Q_jk) = ad(P_ijk) ad(Q_ik)",
                generator: Some(name.clone()),
                ok: residual.is_none(),
                residual,
            });
        }
    }
    for &[i, j, k, l] in nerve.tetrahedra() {
        let lhs = d.twist(i, j, k).star(&d.twist(i, k, l))?;
        let rhs = d.edge(i, j).ad_apply(&d.twist(j, k, l))?.star(&d.twist(i, j, l))?;
        let residual = compare(&lhs, &rhs, 0, depth)?;
        checks.push(SimplexCheck {
            simplex: vec![i, j, k, l],
            relation: "P_ijk P_ikl = ad(Q_ij)(P_jkl) P_ijl",
            generator: None,
            ok: residual.is_none(),
            residual,
        });
    }
    let valid = checks.iter().all(|c| c.ok);
    Ok(DescentReport { valid, depth, checks })
}

/// The `k*`-valued 2-cocycle of a valid datum, one series per triangle.
pub fn extract_class(d: &WkbDescentDatum, depth: usize) -> Result<Vec<TauSeries>, DescentError> {
    let report = validate_descent(d, depth)?;
    if !report.valid {
        return Err(DescentError::InvalidDatum { failed: report.failures().count() });
    }
    let floor = -(depth as i64) + 1;
    let nerve = &d.nerve;
    let mut c = Vec::with_capacity(nerve.triangles().len());
    for &[i, j, k] in nerve.triangles() {
        let triangle = [i, j, k];
        let left = d.edge(i, j).star(d.edge(j, k))?;
        let right = d.twist(i, j, k).star(d.edge(i, k))?;
        let defect = left.star(&right.invert()?)?;
        if defect.floor() > floor {
            return Err(DescentError::DepthInsufficient {
                needed: depth,
                available: (1 - defect.floor()).max(0) as usize,
            });
        }
        let s = defect.truncate(floor).scalar().ok_or(DescentError::NonCentralDefect { triangle })?;
        if !s.kstar_check() {
            return Err(DescentError::DefectOutsideKStar { triangle });
        }
        c.push(s);
    }
    for &[i, j, k, l] in nerve.tetrahedra() {
        let at = |a, b, e| &c[nerve.triangle_index(a, b, e).expect("face")];
        let lhs = at(i, j, k).mul(at(i, k, l));
        let rhs = at(j, k, l).mul(at(i, j, l));
        if !lhs.eq_on_window(&rhs) {
            return Err(DescentError::CocycleIdentityFails { tetrahedron: [i, j, k, l] });
        }
    }
    Ok(c)
}

/// Wire form: the nerve plus operators keyed by `"i,j"` and `"i,j,k"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescentJson {
    pub nerve: NerveJson,
    pub q: BTreeMap<String, WkbSymbolJson>,
    pub p: BTreeMap<String, HalfFormJson>,
}

fn pick<T: Clone>(map: &BTreeMap<String, T>, simplices: &[Vec<usize>], what: &str) -> Result<Vec<T>, DescentError> {
    if let Some(extra) = map.keys().find(|k| !simplices.iter().any(|s| &simplex_key(s) == *k)) {
        return Err(DescentError::MissingAssignment(format!("{what} {extra} is not a simplex of the nerve")));
    }
    simplices
        .iter()
        .map(|s| {
            let key = simplex_key(s);
            map.get(&key).cloned().ok_or_else(|| DescentError::MissingAssignment(format!("{what} {key}")))
        })
        .collect()
}

impl TryFrom<DescentJson> for WkbDescentDatum {
    type Error = DescentError;

    fn try_from(j: DescentJson) -> Result<Self, DescentError> {
        let nerve = Nerve::try_from(j.nerve)?;
        let q = pick(&j.q, &nerve.simplices(1), "transition")?
            .into_iter()
            .map(WkbSymbol::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        let p = pick(&j.p, &nerve.simplices(2), "twist")?
            .into_iter()
            .map(HalfFormOperator::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        WkbDescentDatum::new(nerve, q, p)
    }
}

impl From<&WkbDescentDatum> for DescentJson {
    fn from(d: &WkbDescentDatum) -> Self {
        let key = |dim: usize| d.nerve.simplices(dim).into_iter().map(|s| simplex_key(&s));
        DescentJson {
            nerve: NerveJson::from(&d.nerve),
            q: key(1).zip(&d.q).map(|(k, s)| (k, WkbSymbolJson::from(s))).collect(),
            p: key(2).zip(&d.p).map(|(k, h)| (k, HalfFormJson::from(h))).collect(),
        }
    }
}

#[cfg(test)]
mod tests;
