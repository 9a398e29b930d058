//! Classical simplicial cohomology of a nerve with constant coefficients,
//! by brute force, and the comparison with crossed-module cohomology for
//! `G[0]` and `G[1]`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::crossed::CrossedModule;
use crate::group::FiniteGroup;
use crate::nerve::Nerve;

use super::classes::{h0, h1};
use super::{CechError, OneCocycle, ZeroCocycle};

/// Largest cochain space enumerated by [`classical_cech`].
const CLASSICAL_LIMIT: u64 = 1 << 24;

/// `δf(σ) = Σ_j (-1)^j f(∂_j σ)` from degree `degree` to `degree + 1`,
/// written multiplicatively in the abelian group `g`.
pub fn coboundary(g: &FiniteGroup, nerve: &Nerve, degree: usize, f: &[usize]) -> Vec<usize> {
    nerve
        .simplices(degree + 1)
        .iter()
        .map(|s| {
            let mut acc = 0;
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect();
                let x = f[nerve.simplex_index(&face).expect("face closure")];
                acc = g.mul(acc, if j % 2 == 0 { x } else { g.inv(x) });
            }
            acc
        })
        .collect()
}

/// Every cochain on `count` simplices, in lexicographic order.
fn all_cochains(size: usize, count: usize) -> Result<Vec<Vec<usize>>, CechError> {
    let total = (size as u64).checked_pow(count as u32).filter(|&t| t <= CLASSICAL_LIMIT);
    let Some(total) = total else {
        return Err(CechError::BudgetExceeded { examined: 0, partial: Vec::new() });
    };
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0; count];
    loop {
        out.push(cur.clone());
        let mut pos = count;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < size {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// `H^degree(nerve; G)` for abelian `G`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalCohomology {
    pub degree: usize,
    /// Invariant factors `d_1 | d_2 | ...`; empty for the trivial group.
    pub invariants: Vec<usize>,
    pub order: usize,
    /// Lexicographically least cocycle of each class, zero first.
    pub reps: Vec<Vec<usize>>,
    #[serde(skip)]
    class_of: HashMap<Vec<usize>, usize>,
}

impl ClassicalCohomology {
    pub fn class_of(&self, cocycle: &[usize]) -> Option<usize> {
        self.class_of.get(cocycle).copied()
    }
}

pub fn classical_cech(g: &FiniteGroup, nerve: &Nerve, degree: usize) -> Result<ClassicalCohomology, CechError> {
    if !g.is_abelian() {
        return Err(CechError::NotAbelian);
    }
    let n = nerve.simplices(degree).len();
    let cocycles: Vec<Vec<usize>> = all_cochains(g.size(), n)?
        .into_iter()
        .filter(|f| coboundary(g, nerve, degree, f).iter().all(|&x| x == 0))
        .collect();
    let boundaries: Vec<Vec<usize>> = if degree == 0 {
        vec![vec![0; n]]
    } else {
        let below = nerve.simplices(degree - 1).len();
        let set: HashSet<Vec<usize>> =
            all_cochains(g.size(), below)?.iter().map(|f| coboundary(g, nerve, degree - 1, f)).collect();
        let mut v: Vec<_> = set.into_iter().collect();
        v.sort_unstable();
        v
    };
    let add = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect() };
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut class_of: HashMap<Vec<usize>, usize> = HashMap::new();
    for z in &cocycles {
        if class_of.contains_key(z) {
            continue;
        }
        for b in &boundaries {
            class_of.insert(add(z, b), reps.len());
        }
        reps.push(z.clone());
    }
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| class_of[&add(a, b)]).collect())
        .collect();
    let names = (0..reps.len()).map(|i| format!("c{i}")).collect();
    let quotient = FiniteGroup::from_table(table, names).map_err(|e| CechError::MismatchDetected(e.to_string()))?;
    let invariants = quotient.abelian_invariants().expect("quotient of an abelian group");
    Ok(ClassicalCohomology { degree, invariants, order: reps.len(), reps, class_of })
}

/// Locally constant maps `vertex -> G`: the classical `H^0` for any `G`.
pub fn classical_nonabelian_h0(g: &FiniteGroup, nerve: &Nerve) -> Vec<Vec<usize>> {
    let comps = nerve.components();
    let mut out = Vec::new();
    let mut cur = vec![0; comps.len()];
    loop {
        let mut f = vec![0; nerve.vertices()];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                f[v] = cur[c];
            }
        }
        out.push(f);
        let mut pos = comps.len();
        loop {
            if pos == 0 {
                out.sort_unstable();
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < g.size() {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// Classical nonabelian `H^1`: `g_ij g_jk = g_ik` modulo
/// `g_ij -> l_i g_ij l_j^{-1}`, by enumeration of every `l`.
#[derive(Debug, Clone, Serialize)]
pub struct NonabelianClasses {
    pub reps: Vec<Vec<usize>>,
    #[serde(skip)]
    class_of: HashMap<Vec<usize>, usize>,
}

impl NonabelianClasses {
    pub fn class_of(&self, cocycle: &[usize]) -> Option<usize> {
        self.class_of.get(cocycle).copied()
    }
}

pub fn classical_nonabelian_h1(g: &FiniteGroup, nerve: &Nerve) -> Result<NonabelianClasses, CechError> {
    let e = |a, b| nerve.edge_index(a, b).unwrap();
    let is_cocycle = |f: &[usize]| {
        nerve.triangles().iter().all(|&[i, j, k]| g.mul(f[e(i, j)], f[e(j, k)]) == f[e(i, k)])
    };
    let gauges = all_cochains(g.size(), nerve.vertices())?;
    let mut reps = Vec::new();
    let mut class_of = HashMap::new();
    for f in all_cochains(g.size(), nerve.edges().len())? {
        if !is_cocycle(&f) || class_of.contains_key(&f) {
            continue;
        }
        for l in &gauges {
            let moved: Vec<usize> = nerve
                .edges()
                .iter()
                .zip(&f)
                .map(|(&[i, j], &x)| g.mul(g.mul(l[i], x), g.inv(l[j])))
                .collect();
            class_of.insert(moved, reps.len());
        }
        reps.push(f);
    }
    Ok(NonabelianClasses { reps, class_of })
}

/// One comparison `H^i(G[p]) ~ H^{i+p}(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperEntry {
    pub label: String,
    pub crossed_classes: usize,
    pub classical_classes: usize,
    /// `(crossed class, classical class)`.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperReport {
    pub group_order: usize,
    pub abelian: bool,
    pub entries: Vec<HyperEntry>,
}

/// Checks that `forward` (crossed class -> classical class) is a bijection
/// inverted by `backward`.
fn match_classes(
    label: &str,
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
) -> Result<HyperEntry, CechError> {
    let fail = |why: String| CechError::MismatchDetected(format!("{label}: {why}"));
    let mut pairs = Vec::with_capacity(forward.len());
    let mut hit = vec![false; backward.len()];
    for (a, b) in forward.iter().enumerate() {
        let b = b.ok_or_else(|| fail(format!("class {a} maps to no classical class")))?;
        if hit[b] {
            return Err(fail(format!("classical class {b} hit twice")));
        }
        hit[b] = true;
        pairs.push((a, b));
    }
    if forward.len() != backward.len() {
        return Err(fail(format!("{} classes against {}", forward.len(), backward.len())));
    }
    for (b, a) in backward.iter().enumerate() {
        let a = a.ok_or_else(|| fail(format!("classical class {b} has no preimage")))?;
        if forward[a] != Some(b) {
            return Err(fail(format!("maps are not inverse at classical class {b}")));
        }
    }
    Ok(HyperEntry { label: label.into(), crossed_classes: forward.len(), classical_classes: backward.len(), pairs })
}

/// Explicit bijections `H^i(G[0]) ~ H^i(G)` (`i = 0, 1`) and, for abelian
/// `G`, `H^i(G[1]) ~ H^{i+1}(G)`. Crossed-module classes are computed by
/// [`h0`] / [`h1`], classical ones independently.
pub fn compare_hyper(g: &FiniteGroup, nerve: &Nerve, budget: u64) -> Result<HyperReport, CechError> {
    let abelian = g.is_abelian();
    let mut entries = Vec::new();

    let g0 = CrossedModule::make_g0(g);
    let a0 = h0(&g0, nerve, budget)?;
    let embed0 = |f: &Vec<usize>| ZeroCocycle { g: f.clone(), h: vec![0; nerve.edges().len()] };
    let a1 = h1(&g0, nerve, budget)?;
    let embed1 = |f: &Vec<usize>| OneCocycle { g: f.clone(), h: vec![0; nerve.triangles().len()] };
    if abelian {
        let c0 = classical_cech(g, nerve, 0)?;
        let fwd = a0.reps.iter().map(|c| c0.class_of(&c.g)).collect();
        let back = c0.reps.iter().map(|f| a0.class_of(&embed0(f))).collect();
        entries.push(match_classes("H^0(G[0]) ~ H^0(G)", fwd, back)?);
        let c1 = classical_cech(g, nerve, 1)?;
        let fwd = a1.reps.iter().map(|c| c1.class_of(&c.g)).collect();
        let back = c1.reps.iter().map(|f| a1.class_of(&embed1(f))).collect();
        entries.push(match_classes("H^1(G[0]) ~ H^1(G)", fwd, back)?);
    } else {
        let s0 = classical_nonabelian_h0(g, nerve);
        let fwd = a0.reps.iter().map(|c| s0.iter().position(|f| *f == c.g)).collect();
        let back = s0.iter().map(|f| a0.class_of(&embed0(f))).collect();
        entries.push(match_classes("H^0(G[0]) ~ H^0(G)", fwd, back)?);
        let n1 = classical_nonabelian_h1(g, nerve)?;
        let fwd = a1.reps.iter().map(|c| n1.class_of(&c.g)).collect();
        let back = n1.reps.iter().map(|f| a1.class_of(&embed1(f))).collect();
        entries.push(match_classes("H^1(G[0]) ~ H^1(G)", fwd, back)?);
    }

    if abelian {
        let g1 = CrossedModule::make_g1(g).expect("abelian");
        let b0 = h0(&g1, nerve, budget)?;
        let c1 = classical_cech(g, nerve, 1)?;
        let fwd = b0.reps.iter().map(|c| c1.class_of(&c.h)).collect();
        let back = c1
            .reps
            .iter()
            .map(|f| b0.class_of(&ZeroCocycle { g: vec![0; nerve.vertices()], h: f.clone() }))
            .collect();
        entries.push(match_classes("H^0(G[1]) ~ H^1(G)", fwd, back)?);

        let b1 = h1(&g1, nerve, budget)?;
        let c2 = classical_cech(g, nerve, 2)?;
        let fwd = b1.reps.iter().map(|c| c2.class_of(&c.h)).collect();
        let back = c2
            .reps
            .iter()
            .map(|f| b1.class_of(&OneCocycle { g: vec![0; nerve.edges().len()], h: f.clone() }))
            .collect();
        entries.push(match_classes("H^1(G[1]) ~ H^2(G)", fwd, back)?);
    }
    Ok(HyperReport { group_order: g.size(), abelian, entries })
}
