//! Enumeration of cohomology classes.
//!
//! Cocycles are generated by backtracking in lexicographic order of
//! `(g, h)`. The first cocycle of a class met this way is its least
//! element, so it becomes the representative, and the whole class is then
//! swept by breadth-first search over elementary gauge moves.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::crossed::CrossedModule;
use crate::group::FiniteGroup;
use crate::nerve::Nerve;

use super::equiv::{apply0, apply1};
use super::{CechError, OneCocycle, Witness0, Witness1, ZeroCocycle};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Classes of cocycles: representatives (the trivial class first), and
/// the class of every cocycle.
#[derive(Debug, Clone)]
pub struct Classes<C> {
    pub reps: Vec<C>,
    class_of: HashMap<C, usize>,
    /// Multiplication of classes by pointwise product, when both groups
    /// are abelian and the action is trivial.
    pub group_table: Option<Vec<Vec<usize>>>,
    pub examined: u64,
}

impl<C: Eq + Hash> Classes<C> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, c: &C) -> Option<usize> {
        self.class_of.get(c).copied()
    }

    pub fn cocycle_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn group(&self) -> Option<FiniteGroup> {
        let t = self.group_table.clone()?;
        let names = (0..t.len()).map(|i| format!("c{i}")).collect();
        FiniteGroup::from_table(t, names).ok()
    }
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Sweeps the classes of `cocycles` (given in increasing order) under the
/// elementary gauge moves.
fn sweep<C, M>(cocycles: Vec<C>, moves: &[M], act: impl Fn(&C, &M) -> C, budget: &mut Budget) -> Result<Classes<C>, Vec<C>>
where
    C: Clone + Eq + Hash,
{
    let mut reps: Vec<C> = Vec::new();
    let mut class_of: HashMap<C, usize> = HashMap::new();
    for c in cocycles {
        if class_of.contains_key(&c) {
            continue;
        }
        let idx = reps.len();
        reps.push(c.clone());
        class_of.insert(c.clone(), idx);
        let mut queue = VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            for m in moves {
                if !budget.tick() {
                    return Err(reps);
                }
                let y = act(&x, m);
                if !class_of.contains_key(&y) {
                    class_of.insert(y.clone(), idx);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(Classes { reps, class_of, group_table: None, examined: budget.used })
}

fn pointwise_table<C: Eq + Hash>(classes: &Classes<C>, mul: impl Fn(&C, &C) -> C) -> Option<Vec<Vec<usize>>> {
    let n = classes.reps.len();
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = classes.class_of(&mul(&classes.reps[a], &classes.reps[b]))?;
        }
    }
    Some(table)
}

fn abelian_trivial(cm: &CrossedModule) -> bool {
    cm.gm1().is_abelian() && cm.g0().is_abelian() && cm.is_trivial_action()
}

fn budget_error<C>(budget: &Budget, partial: Vec<C>, key: impl Fn(&C) -> Vec<usize>) -> CechError {
    CechError::BudgetExceeded { examined: budget.used, partial: partial.iter().map(key).collect() }
}

/// All 0-cocycles in increasing order.
fn zero_cocycles(cm: &CrossedModule, nerve: &Nerve, budget: &mut Budget) -> Option<Vec<ZeroCocycle>> {
    struct Ctx<'a> {
        cm: &'a CrossedModule,
        nerve: &'a Nerve,
        /// triangles `(ij, jk, ik)` completed when edge `e` is assigned
        closing: Vec<Vec<(usize, usize, usize)>>,
    }
    impl Ctx<'_> {
        // variables: g_0..g_{n-1}, then h_e in edge order
        fn rec(&self, pos: usize, c: &mut ZeroCocycle, out: &mut Vec<ZeroCocycle>, budget: &mut Budget) -> bool {
            let (g0, gm1) = (self.cm.g0(), self.cm.gm1());
            let nv = self.nerve.vertices();
            if pos == nv + self.nerve.edges().len() {
                out.push(c.clone());
                return true;
            }
            if pos < nv {
                for x in g0.elements() {
                    if !budget.tick() {
                        return false;
                    }
                    c.g[pos] = x;
                    if !self.rec(pos + 1, c, out, budget) {
                        return false;
                    }
                }
                return true;
            }
            let e = pos - nv;
            let [i, j] = self.nerve.edges()[e];
            for x in self.cm.fibre(g0.mul(c.g[i], g0.inv(c.g[j]))) {
                if !budget.tick() {
                    return false;
                }
                c.h[e] = x;
                let ok = self.closing[e].iter().all(|&(ij, jk, ik)| gm1.mul(c.h[ij], c.h[jk]) == c.h[ik]);
                if ok && !self.rec(pos + 1, c, out, budget) {
                    return false;
                }
            }
            true
        }
    }
    let mut closing = vec![Vec::new(); nerve.edges().len()];
    for &[i, j, k] in nerve.triangles() {
        let e = |a, b| nerve.edge_index(a, b).unwrap();
        let last = e(i, j).max(e(j, k)).max(e(i, k));
        closing[last].push((e(i, j), e(j, k), e(i, k)));
    }
    let ctx = Ctx { cm, nerve, closing };
    let mut out = Vec::new();
    let mut c = ZeroCocycle::identity(nerve);
    ctx.rec(0, &mut c, &mut out, budget).then_some(out)
}

/// All 1-cocycles in increasing order.
fn one_cocycles(cm: &CrossedModule, nerve: &Nerve, budget: &mut Budget) -> Option<Vec<OneCocycle>> {
    let ne = nerve.edges().len();
    let e = |a, b| nerve.edge_index(a, b).unwrap();
    let t = |a, b, c| nerve.triangle_index(a, b, c).unwrap();
    let mut tri_edges = Vec::new();
    let mut tri_closing = vec![Vec::new(); ne];
    for (ti, &[i, j, k]) in nerve.triangles().iter().enumerate() {
        let es = (e(i, j), e(j, k), e(i, k));
        tri_edges.push(es);
        tri_closing[es.0.max(es.1).max(es.2)].push(ti);
    }
    let mut tet_closing = vec![Vec::new(); nerve.triangles().len()];
    for &[i, j, k, l] in nerve.tetrahedra() {
        let ts = (t(i, j, k), t(i, k, l), t(j, k, l), t(i, j, l), e(i, j));
        tet_closing[ts.0.max(ts.1).max(ts.2).max(ts.3)].push(ts);
    }
    struct Ctx<'a> {
        cm: &'a CrossedModule,
        ne: usize,
        nt: usize,
        tri_edges: Vec<(usize, usize, usize)>,
        tri_closing: Vec<Vec<usize>>,
        tet_closing: Vec<Vec<(usize, usize, usize, usize, usize)>>,
    }
    impl Ctx<'_> {
        fn target(&self, c: &OneCocycle, ti: usize) -> usize {
            let g0 = self.cm.g0();
            let (ij, jk, ik) = self.tri_edges[ti];
            g0.mul(g0.mul(c.g[ij], c.g[jk]), g0.inv(c.g[ik]))
        }

        fn rec(&self, pos: usize, c: &mut OneCocycle, out: &mut Vec<OneCocycle>, budget: &mut Budget) -> bool {
            let (g0, gm1) = (self.cm.g0(), self.cm.gm1());
            if pos == self.ne + self.nt {
                out.push(c.clone());
                return true;
            }
            if pos < self.ne {
                for x in g0.elements() {
                    if !budget.tick() {
                        return false;
                    }
                    c.g[pos] = x;
                    let feasible = self.tri_closing[pos]
                        .iter()
                        .all(|&ti| self.cm.d_map().contains(&self.target(c, ti)));
                    if feasible && !self.rec(pos + 1, c, out, budget) {
                        return false;
                    }
                }
                return true;
            }
            let ti = pos - self.ne;
            for x in self.cm.fibre(self.target(c, ti)) {
                if !budget.tick() {
                    return false;
                }
                c.h[ti] = x;
                let ok = self.tet_closing[ti].iter().all(|&(ijk, ikl, jkl, ijl, ij)| {
                    gm1.mul(c.h[ijk], c.h[ikl]) == gm1.mul(self.cm.act(c.g[ij], c.h[jkl]), c.h[ijl])
                });
                if ok && !self.rec(pos + 1, c, out, budget) {
                    return false;
                }
            }
            true
        }
    }
    let ctx = Ctx { cm, ne, nt: nerve.triangles().len(), tri_edges, tri_closing, tet_closing };
    let mut out = Vec::new();
    let mut c = OneCocycle::identity(nerve);
    ctx.rec(0, &mut c, &mut out, budget).then_some(out)
}

/// `H^0(nerve; cm)`: 0-cocycles modulo `k`-gauge, one lexicographically
/// least representative per class.
pub fn h0(cm: &CrossedModule, nerve: &Nerve, budget: u64) -> Result<Classes<ZeroCocycle>, CechError> {
    let mut b = Budget { limit: budget, used: 0 };
    let all = zero_cocycles(cm, nerve, &mut b).ok_or_else(|| budget_error(&b, Vec::new(), ZeroCocycle::key))?;
    let mut moves = Vec::new();
    for v in 0..nerve.vertices() {
        for x in cm.gm1().elements().skip(1) {
            let mut w = Witness0::identity(nerve);
            w.k[v] = x;
            moves.push(w);
        }
    }
    let mut classes = sweep(all, &moves, |c, w| apply0(cm, nerve, c, w), &mut b)
        .map_err(|partial| budget_error(&b, partial, ZeroCocycle::key))?;
    if abelian_trivial(cm) {
        let (g0, gm1) = (cm.g0(), cm.gm1());
        classes.group_table = pointwise_table(&classes, |a, b| ZeroCocycle {
            g: a.g.iter().zip(&b.g).map(|(&x, &y)| g0.mul(x, y)).collect(),
            h: a.h.iter().zip(&b.h).map(|(&x, &y)| gm1.mul(x, y)).collect(),
        });
    }
    Ok(classes)
}

/// `H^1(nerve; cm)` as a pointed set; the trivial class comes first.
pub fn h1(cm: &CrossedModule, nerve: &Nerve, budget: u64) -> Result<Classes<OneCocycle>, CechError> {
    let mut b = Budget { limit: budget, used: 0 };
    let all = one_cocycles(cm, nerve, &mut b).ok_or_else(|| budget_error(&b, Vec::new(), OneCocycle::key))?;
    let mut moves = Vec::new();
    for v in 0..nerve.vertices() {
        for x in cm.g0().elements().skip(1) {
            let mut w = Witness1::identity(nerve);
            w.l[v] = x;
            moves.push(w);
        }
    }
    for e in 0..nerve.edges().len() {
        for x in cm.gm1().elements().skip(1) {
            let mut w = Witness1::identity(nerve);
            w.k[e] = x;
            moves.push(w);
        }
    }
    let mut classes = sweep(all, &moves, |c, w| apply1(cm, nerve, c, w), &mut b)
        .map_err(|partial| budget_error(&b, partial, OneCocycle::key))?;
    if abelian_trivial(cm) {
        let (g0, gm1) = (cm.g0(), cm.gm1());
        classes.group_table = pointwise_table(&classes, |a, b| OneCocycle {
            g: a.g.iter().zip(&b.g).map(|(&x, &y)| g0.mul(x, y)).collect(),
            h: a.h.iter().zip(&b.h).map(|(&x, &y)| gm1.mul(x, y)).collect(),
        });
    }
    Ok(classes)
}
