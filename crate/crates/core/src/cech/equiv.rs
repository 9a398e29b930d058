//! Gauge transformations of cocycles and witness search.

use crate::crossed::CrossedModule;
use crate::nerve::Nerve;

use super::{check0, check1, shape0, shape1, CechError, OneCocycle, Witness0, Witness1, ZeroCocycle};

/// The 0-cocycle reached from `c` through `w`:
/// `g'_i = d(k_i) g_i`, `h'_ij = k_i h_ij k_j^{-1}`.
pub fn apply0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle, w: &Witness0) -> ZeroCocycle {
    let (g0, gm1) = (cm.g0(), cm.gm1());
    let g = c.g.iter().zip(&w.k).map(|(&g, &k)| g0.mul(cm.d(k), g)).collect();
    let h = nerve
        .edges()
        .iter()
        .zip(&c.h)
        .map(|(&[i, j], &h)| gm1.mul(gm1.mul(w.k[i], h), gm1.inv(w.k[j])))
        .collect();
    ZeroCocycle { g, h }
}

/// The 1-cocycle reached from `c` through `w`:
/// `g'_ij = d(k_ij) l_i g_ij l_j^{-1}` and
/// `h'_ijk = ^{g'_ij}k_jk k_ij ^{l_i}h_ijk k_ik^{-1}`.
pub fn apply1(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle, w: &Witness1) -> OneCocycle {
    let (g0, gm1) = (cm.g0(), cm.gm1());
    let g: Vec<usize> = nerve
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[i, j])| {
            let inner = g0.mul(g0.mul(w.l[i], c.g[e]), g0.inv(w.l[j]));
            g0.mul(cm.d(w.k[e]), inner)
        })
        .collect();
    let e = |a, b| nerve.edge_index(a, b).unwrap();
    let h = nerve
        .triangles()
        .iter()
        .enumerate()
        .map(|(t, &[i, j, k])| {
            let a = cm.act(g[e(i, j)], w.k[e(j, k)]);
            let b = gm1.mul(a, w.k[e(i, j)]);
            let c2 = gm1.mul(b, cm.act(w.l[i], c.h[t]));
            gm1.mul(c2, gm1.inv(w.k[e(i, k)]))
        })
        .collect();
    OneCocycle { g, h }
}

/// `g'_i = d(k_i) g_i` and `h'_ij k_j = k_i h_ij`.
pub fn verify_witness0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle, c2: &ZeroCocycle, w: &Witness0) -> bool {
    let (g0, gm1) = (cm.g0(), cm.gm1());
    w.k.len() == nerve.vertices()
        && w.k.iter().all(|&k| k < gm1.size())
        && (0..nerve.vertices()).all(|i| c2.g[i] == g0.mul(cm.d(w.k[i]), c.g[i]))
        && nerve
            .edges()
            .iter()
            .enumerate()
            .all(|(e, &[i, j])| gm1.mul(c2.h[e], w.k[j]) == gm1.mul(w.k[i], c.h[e]))
}

/// `g'_ij l_j = d(k_ij) l_i g_ij` and
/// `h'_ijk k_ik = ^{g'_ij}k_jk k_ij ^{l_i}h_ijk`.
pub fn verify_witness1(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle, c2: &OneCocycle, w: &Witness1) -> bool {
    if w.l.len() != nerve.vertices()
        || w.k.len() != nerve.edges().len()
        || w.l.iter().any(|&l| l >= cm.g0().size())
        || w.k.iter().any(|&k| k >= cm.gm1().size())
    {
        return false;
    }
    let edges_ok = nerve.edges().iter().enumerate().all(|(e, &[i, j])| edge_ok(cm, c, c2, &w.l, w.k[e], e, i, j));
    edges_ok && (0..nerve.triangles().len()).all(|t| triangle_ok(cm, nerve, c, c2, &w.l, &w.k, t))
}

#[allow(clippy::too_many_arguments)]
fn edge_ok(cm: &CrossedModule, c: &OneCocycle, c2: &OneCocycle, l: &[usize], k: usize, e: usize, i: usize, j: usize) -> bool {
    let g0 = cm.g0();
    g0.mul(c2.g[e], l[j]) == g0.mul(cm.d(k), g0.mul(l[i], c.g[e]))
}

fn triangle_ok(cm: &CrossedModule, nerve: &Nerve, c: &OneCocycle, c2: &OneCocycle, l: &[usize], k: &[usize], t: usize) -> bool {
    let gm1 = cm.gm1();
    let [i, j, kk] = nerve.triangles()[t];
    let e = |a, b| nerve.edge_index(a, b).unwrap();
    let (ij, jk, ik) = (e(i, j), e(j, kk), e(i, kk));
    let lhs = gm1.mul(c2.h[t], k[ik]);
    let rhs = gm1.mul(gm1.mul(cm.act(c2.g[ij], k[jk]), k[ij]), cm.act(l[i], c.h[t]));
    lhs == rhs
}

/// A witness from `c` to `c2`, or `None` when the cocycles are not
/// equivalent. Each component is solved from its root: `k_root` ranges
/// over a fibre of `d` and the tree edges force the remaining `k_i`.
pub fn equiv0(cm: &CrossedModule, nerve: &Nerve, c: &ZeroCocycle, c2: &ZeroCocycle) -> Result<Option<Witness0>, CechError> {
    shape0(cm, nerve, c)?;
    shape0(cm, nerve, c2)?;
    if !check0(cm, nerve, c)? || !check0(cm, nerve, c2)? {
        return Err(CechError::InvalidCocycle);
    }
    let (g0, gm1) = (cm.g0(), cm.gm1());
    let forest = nerve.spanning_forest();
    let mut k = vec![0; nerve.vertices()];
    for comp in nerve.components() {
        let root = comp[0];
        let mut found = false;
        for kr in cm.fibre(g0.mul(c2.g[root], g0.inv(c.g[root]))) {
            k[root] = kr;
            for &v in &comp[1..] {
                let (p, e) = forest.parent[v].unwrap();
                k[v] = if p < v {
                    // h'_pv k_v = k_p h_pv
                    gm1.mul(gm1.mul(gm1.inv(c2.h[e]), k[p]), c.h[e])
                } else {
                    // h'_vp k_p = k_v h_vp
                    gm1.mul(gm1.mul(c2.h[e], k[p]), gm1.inv(c.h[e]))
                };
            }
            let local = |v: &usize| c2.g[*v] == g0.mul(cm.d(k[*v]), c.g[*v]);
            let edges_ok = nerve.edges().iter().enumerate().all(|(e, &[i, j])| {
                !comp.contains(&i) || gm1.mul(c2.h[e], k[j]) == gm1.mul(k[i], c.h[e])
            });
            if comp.iter().all(local) && edges_ok {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    let w = Witness0 { k };
    debug_assert!(verify_witness0(cm, nerve, c, c2, &w));
    Ok(Some(w))
}

enum Step {
    Root(usize),
    /// tree edge `e` fixing `l[child]` from `l[parent]`
    Tree { e: usize, child: usize, parent: usize },
    /// edge whose endpoints are both fixed: `k_e` ranges over a fibre
    Free { e: usize },
}

struct Search<'a> {
    cm: &'a CrossedModule,
    nerve: &'a Nerve,
    c: &'a OneCocycle,
    c2: &'a OneCocycle,
    steps: Vec<Step>,
    /// triangles whose three edges are all fixed once step `s` is done
    ready: Vec<Vec<usize>>,
    l: Vec<usize>,
    k: Vec<usize>,
    budget: u64,
    examined: u64,
}

impl Search<'_> {
    fn run(&mut self, s: usize) -> Result<bool, CechError> {
        if s == self.steps.len() {
            return Ok(true);
        }
        let (g0, gm1) = (self.cm.g0(), self.cm.gm1());
        let candidates: Vec<(usize, usize)> = match self.steps[s] {
            Step::Root(_) => g0.elements().map(|x| (x, 0)).collect(),
            Step::Tree { .. } => gm1.elements().map(|x| (0, x)).collect(),
            Step::Free { e } => {
                let [i, j] = self.nerve.edges()[e];
                // d(k_ij) = g'_ij l_j g_ij^{-1} l_i^{-1}
                let target = g0.mul(
                    g0.mul(g0.mul(self.c2.g[e], self.l[j]), g0.inv(self.c.g[e])),
                    g0.inv(self.l[i]),
                );
                self.cm.fibre(target).into_iter().map(|x| (0, x)).collect()
            }
        };
        for (lx, kx) in candidates {
            self.examined += 1;
            if self.examined > self.budget {
                return Err(CechError::BudgetExceeded { examined: self.examined, partial: Vec::new() });
            }
            match self.steps[s] {
                Step::Root(v) => self.l[v] = lx,
                Step::Tree { e, child, parent } => {
                    self.k[e] = kx;
                    let [i, j] = self.nerve.edges()[e];
                    let (c, c2, d) = (self.c.g[e], self.c2.g[e], self.cm.d(kx));
                    if child == j {
                        // l_j = g'_ij^{-1} d(k_ij) l_i g_ij
                        self.l[j] = g0.mul(g0.mul(g0.mul(g0.inv(c2), d), self.l[parent]), c);
                    } else {
                        // l_i = d(k_ij)^{-1} g'_ij l_j g_ij^{-1}
                        debug_assert_eq!(child, i);
                        self.l[i] = g0.mul(g0.mul(g0.mul(g0.inv(d), c2), self.l[parent]), g0.inv(c));
                    }
                }
                Step::Free { e } => self.k[e] = kx,
            }
            let ok = self.ready[s]
                .iter()
                .all(|&t| triangle_ok(self.cm, self.nerve, self.c, self.c2, &self.l, &self.k, t));
            if ok && self.run(s + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// A witness from `c` to `c2`, or `None` when none exists. The search
/// gauge-fixes along a breadth-first spanning forest: `l` is free only at
/// roots, tree edges choose `k` and thereby force `l` of the child, and
/// the remaining `k_ij` range over fibres of `d`. Triangle relations prune
/// as soon as their edges are fixed.
pub fn equiv1(
    cm: &CrossedModule,
    nerve: &Nerve,
    c: &OneCocycle,
    c2: &OneCocycle,
    budget: u64,
) -> Result<Option<Witness1>, CechError> {
    shape1(cm, nerve, c)?;
    shape1(cm, nerve, c2)?;
    if !check1(cm, nerve, c)? || !check1(cm, nerve, c2)? {
        return Err(CechError::InvalidCocycle);
    }
    let forest = nerve.spanning_forest();
    let mut pos = vec![usize::MAX; nerve.vertices()];
    for (p, &v) in forest.order.iter().enumerate() {
        pos[v] = p;
    }
    let mut steps = Vec::new();
    let mut edge_step = vec![usize::MAX; nerve.edges().len()];
    for &v in &forest.order {
        match forest.parent[v] {
            None => steps.push(Step::Root(v)),
            Some((parent, e)) => {
                edge_step[e] = steps.len();
                steps.push(Step::Tree { e, child: v, parent });
            }
        }
        // non-tree edges back to vertices already placed
        for (e, &[i, j]) in nerve.edges().iter().enumerate() {
            let other = if i == v { j } else if j == v { i } else { continue };
            if edge_step[e] == usize::MAX && pos[other] < pos[v] {
                edge_step[e] = steps.len();
                steps.push(Step::Free { e });
            }
        }
    }
    let mut ready = vec![Vec::new(); steps.len()];
    for (t, &[i, j, k]) in nerve.triangles().iter().enumerate() {
        let e = |a, b| nerve.edge_index(a, b).unwrap();
        let s = [e(i, j), e(j, k), e(i, k)].iter().map(|&x| edge_step[x]).max().unwrap();
        ready[s].push(t);
    }
    let mut search = Search {
        cm,
        nerve,
        c,
        c2,
        steps,
        ready,
        l: vec![0; nerve.vertices()],
        k: vec![0; nerve.edges().len()],
        budget,
        examined: 0,
    };
    if !search.run(0)? {
        return Ok(None);
    }
    let w = Witness1 { l: search.l, k: search.k };
    if !verify_witness1(cm, nerve, c, c2, &w) {
        return Err(CechError::MismatchDetected("search produced an invalid witness".into()));
    }
    Ok(Some(w))
}
