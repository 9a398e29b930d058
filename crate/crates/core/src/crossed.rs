//! Finite crossed modules `d: G^{-1} -> G^0` and their 2-group arrows.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, FiniteGroupJson, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossedError {
    #[error("malformed tables: {0}")]
    MalformedTables(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("arrows are not composable")]
    NotComposable,
}

impl From<GroupError> for CrossedError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::NotAbelian => CrossedError::NotAbelian,
            GroupError::MalformedTables(s) => CrossedError::MalformedTables(s),
            GroupError::UnknownFixture(s) => CrossedError::MalformedTables(format!("unknown group {s:?}")),
        }
    }
}

/// One failed axiom with the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// `d(a b) != d(a) d(b)`
    DHomomorphism { a: usize, b: usize },
    /// `act(g, -)` is not a bijective homomorphism
    Automorphism { g: usize },
    /// `act(g1 g2, h) != act(g1, act(g2, h))`, or the identity acts
    Action { g1: usize, g2: usize, h: usize },
    /// `d(act(g, h)) != g d(h) g^{-1}`
    Equivariance { g: usize, h: usize },
    /// `act(d(h1), h) != h1 h h1^{-1}`
    Peiffer { h1: usize, h: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DHomomorphism { a, b } => write!(f, "d is not a homomorphism at ({a}, {b})"),
            Violation::Automorphism { g } => write!(f, "action of {g} is not an automorphism"),
            Violation::Action { g1, g2, h } => write!(f, "not an action at ({g1}, {g2}, {h})"),
            Violation::Equivariance { g, h } => write!(f, "equivariance fails at ({g}, {h})"),
            Violation::Peiffer { h1, h } => write!(f, "Peiffer identity fails at ({h1}, {h})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    gm1: FiniteGroup,
    g0: FiniteGroup,
    d: Vec<usize>,
    /// `act[g][h] = ^g h`
    act: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// Checks only the shapes of the tables; see [`CrossedModule::validate`]
    /// for the axioms.
    pub fn new(gm1: FiniteGroup, g0: FiniteGroup, d: Vec<usize>, act: Vec<Vec<usize>>) -> Result<Self, CrossedError> {
        let (n1, n0) = (gm1.size(), g0.size());
        if d.len() != n1 || d.iter().any(|&x| x >= n0) {
            return Err(CrossedError::MalformedTables(format!("d must map {n1} elements into 0..{n0}")));
        }
        if act.len() != n0 || act.iter().any(|row| row.len() != n1 || row.iter().any(|&x| x >= n1)) {
            return Err(CrossedError::MalformedTables(format!("act must be a {n0} x {n1} table into 0..{n1}")));
        }
        Ok(CrossedModule { gm1, g0, d, act })
    }

    /// `[G^{-1} -> G^0]` with trivial action.
    pub fn with_trivial_action(gm1: FiniteGroup, g0: FiniteGroup, d: Vec<usize>) -> Result<Self, CrossedError> {
        let act = vec![gm1.elements().collect(); g0.size()];
        Self::new(gm1, g0, d, act)
    }

    /// `G[0] = [1 -> G]`.
    pub fn make_g0(g: &FiniteGroup) -> Self {
        Self::with_trivial_action(FiniteGroup::trivial(), g.clone(), vec![0]).expect("shapes")
    }

    /// `G[1] = [G -> 1]`, a crossed module only for abelian `G`.
    pub fn make_g1(g: &FiniteGroup) -> Result<Self, CrossedError> {
        if !g.is_abelian() {
            return Err(CrossedError::NotAbelian);
        }
        Ok(Self::collapse(g))
    }

    /// `[G -> 1]` without the abelian check.
    pub fn collapse(g: &FiniteGroup) -> Self {
        Self::with_trivial_action(g.clone(), FiniteGroup::trivial(), vec![0; g.size()]).expect("shapes")
    }

    /// `[G -> G/Z(G)]`: `d` is the quotient map and `G/Z` acts by
    /// conjugation through least-index coset representatives.
    pub fn make_central(g: &FiniteGroup) -> Self {
        let (quot, proj, reps) = g.quotient(&g.center()).expect("the center is normal");
        let act = reps.iter().map(|&r| g.elements().map(|h| g.conj(r, h)).collect()).collect();
        Self::new(g.clone(), quot, proj, act).expect("shapes")
    }

    pub fn gm1(&self) -> &FiniteGroup {
        &self.gm1
    }

    pub fn g0(&self) -> &FiniteGroup {
        &self.g0
    }

    pub fn d(&self, h: usize) -> usize {
        self.d[h]
    }

    pub fn d_map(&self) -> &[usize] {
        &self.d
    }

    pub fn act(&self, g: usize, h: usize) -> usize {
        self.act[g][h]
    }

    pub fn act_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// Elements of `G^{-1}` mapping to `g`, in increasing order.
    pub fn fibre(&self, g: usize) -> Vec<usize> {
        self.gm1.elements().filter(|&h| self.d[h] == g).collect()
    }

    pub fn is_trivial_action(&self) -> bool {
        self.act.iter().all(|row| row.iter().enumerate().all(|(h, &x)| h == x))
    }

    /// Exhaustive axiom check; empty when valid.
    pub fn validate(&self) -> Vec<Violation> {
        let (h1g, g0) = (&self.gm1, &self.g0);
        let mut out = Vec::new();
        'hom: for a in h1g.elements() {
            for b in h1g.elements() {
                if self.d[h1g.mul(a, b)] != g0.mul(self.d[a], self.d[b]) {
                    out.push(Violation::DHomomorphism { a, b });
                    break 'hom;
                }
            }
        }
        for g in g0.elements() {
            let row = &self.act[g];
            let mut hit = vec![false; h1g.size()];
            row.iter().for_each(|&x| hit[x] = true);
            let bij = hit.iter().all(|&x| x);
            let hom = h1g
                .elements()
                .all(|a| h1g.elements().all(|b| row[h1g.mul(a, b)] == h1g.mul(row[a], row[b])));
            if !bij || !hom {
                out.push(Violation::Automorphism { g });
                break;
            }
        }
        'action: for g1 in g0.elements() {
            for g2 in g0.elements() {
                for h in h1g.elements() {
                    let unit_ok = self.act[0][h] == h;
                    if !unit_ok || self.act[g0.mul(g1, g2)][h] != self.act[g1][self.act[g2][h]] {
                        out.push(Violation::Action { g1, g2, h });
                        break 'action;
                    }
                }
            }
        }
        'eq: for g in g0.elements() {
            for h in h1g.elements() {
                if self.d[self.act[g][h]] != g0.conj(g, self.d[h]) {
                    out.push(Violation::Equivariance { g, h });
                    break 'eq;
                }
            }
        }
        'peiffer: for h1 in h1g.elements() {
            for h in h1g.elements() {
                if self.act[self.d[h1]][h] != h1g.conj(h1, h) {
                    out.push(Violation::Peiffer { h1, h });
                    break 'peiffer;
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.gm1.elements().filter(|&h| self.d[h] == 0).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im: Vec<usize> = self.d.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    pub fn kernel_is_central(&self) -> bool {
        let g = &self.gm1;
        self.kernel().iter().all(|&k| g.elements().all(|h| g.mul(k, h) == g.mul(h, k)))
    }

    pub fn image_is_normal(&self) -> bool {
        self.g0.is_normal_subgroup(&self.image())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.g0.size()
    }

    /// The arrow `g -> d(h) g` with witness `h`.
    pub fn arrow(&self, src: usize, witness: usize) -> Arrow {
        Arrow { src, witness, dst: self.g0.mul(self.d[witness], src) }
    }

    pub fn identity_arrow(&self, g: usize) -> Arrow {
        Arrow { src: g, witness: 0, dst: g }
    }

    pub fn is_arrow(&self, a: &Arrow) -> bool {
        a.src < self.g0.size() && a.witness < self.gm1.size() && self.arrow(a.src, a.witness).dst == a.dst
    }

    /// `a2 ∘ a1`, witness `h2 h1`.
    pub fn compose(&self, a2: &Arrow, a1: &Arrow) -> Result<Arrow, CrossedError> {
        if a1.dst != a2.src {
            return Err(CrossedError::NotComposable);
        }
        Ok(Arrow { src: a1.src, witness: self.gm1.mul(a2.witness, a1.witness), dst: a2.dst })
    }

    /// `(g1 -> g1') ⊗ (g2 -> g2') = g1 g2 -> g1' g2'` with witness
    /// `h1 ^{g1}h2`.
    pub fn tensor(&self, a1: &Arrow, a2: &Arrow) -> Arrow {
        Arrow {
            src: self.g0.mul(a1.src, a2.src),
            witness: self.gm1.mul(a1.witness, self.act[a1.src][a2.witness]),
            dst: self.g0.mul(a1.dst, a2.dst),
        }
    }

    pub fn inverse(&self, a: &Arrow) -> Arrow {
        Arrow { src: a.dst, witness: self.gm1.inv(a.witness), dst: a.src }
    }
}

/// A morphism `src -> dst` of the associated 2-group,
/// `dst = d(witness) src`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub witness: usize,
    pub dst: usize,
}

/// Wire form: `{"Gm1": group, "G0": group, "d": [...], "act": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossedModuleJson {
    #[serde(rename = "Gm1")]
    pub gm1: FiniteGroupJson,
    #[serde(rename = "G0")]
    pub g0: FiniteGroupJson,
    pub d: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

impl From<&CrossedModule> for CrossedModuleJson {
    fn from(c: &CrossedModule) -> Self {
        CrossedModuleJson {
            gm1: FiniteGroupJson::from(&c.gm1),
            g0: FiniteGroupJson::from(&c.g0),
            d: c.d.clone(),
            act: c.act.clone(),
        }
    }
}

impl TryFrom<CrossedModuleJson> for CrossedModule {
    type Error = CrossedError;

    fn try_from(j: CrossedModuleJson) -> Result<Self, CrossedError> {
        let gm1 = FiniteGroup::try_from(j.gm1)?;
        let g0 = FiniteGroup::try_from(j.g0)?;
        CrossedModule::new(gm1, g0, j.d, j.act)
    }
}

impl Serialize for CrossedModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CrossedModuleJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CrossedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        CrossedModule::try_from(CrossedModuleJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
