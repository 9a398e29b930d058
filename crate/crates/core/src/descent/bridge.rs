//! Finite analog of `H^1(X; k*[1]) = H^2(X; k*)`: for a finite group `G`
//! with center `Z`, 1-cocycles with values in `[G -> G/Z]` correspond to
//! classical 2-cocycles with values in `Z`.
//!
//! Forward: lift each `g_ij` to its least-index coset representative `ĝ_ij`
//! and set `z_ijk = h_ijk ĝ_ik (ĝ_ij ĝ_jk)^{-1}`. The cocycle relation
//! `g_ij g_jk = d(h_ijk) g_ik` says exactly that `z_ijk` is central.
//! Backward: `z` becomes `(g ≡ 1, h = z)`.

use serde::Serialize;
use thiserror::Error;

use crate::cech::{check1, classical_cech, coboundary, equiv1, h1, CechError, OneCocycle, Witness1};
use crate::crossed::CrossedModule;
use crate::group::FiniteGroup;
use crate::nerve::Nerve;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error("no lift for the class of edge {edge:?}")]
    LiftFailure { edge: [usize; 2] },
    #[error("value on triangle {triangle:?} is not central")]
    NotCentral { triangle: [usize; 3] },
    #[error("values do not form a classical 2-cocycle")]
    NotCocycle,
    #[error("center element index {0} out of range")]
    InvalidElement(usize),
    #[error(transparent)]
    Cech(#[from] CechError),
}

/// The central crossed module of `G` together with the center and the
/// coset lifts.
#[derive(Debug, Clone)]
pub struct Bridge {
    group: FiniteGroup,
    cm: CrossedModule,
    center: FiniteGroup,
    /// Center element index -> element of `G`.
    embed: Vec<usize>,
    /// `G/Z` element -> least-index representative in `G`.
    lift: Vec<usize>,
}

impl Bridge {
    pub fn new(g: &FiniteGroup) -> Self {
        let cm = CrossedModule::make_central(g);
        let (_, _, lift) = g.quotient(&g.center()).expect("the center is normal");
        let (center, embed) = g.subgroup(&g.center()).expect("the center is a subgroup");
        Bridge { group: g.clone(), cm, center, embed, lift }
    }

    pub fn crossed_module(&self) -> &CrossedModule {
        &self.cm
    }

    pub fn center(&self) -> &FiniteGroup {
        &self.center
    }

    /// 1-cocycle over `[G -> G/Z]` to a classical `Z`-valued 2-cocycle.
    pub fn forward(&self, nerve: &Nerve, c: &OneCocycle) -> Result<Vec<usize>, BridgeError> {
        if !check1(&self.cm, nerve, c)? {
            return Err(CechError::InvalidCocycle.into());
        }
        let g = &self.group;
        let lift = |e: usize| -> Result<usize, BridgeError> {
            self.lift.get(c.g[e]).copied().ok_or(BridgeError::LiftFailure { edge: nerve.edges()[e] })
        };
        let mut z = Vec::with_capacity(nerve.triangles().len());
        for (t, &[i, j, k]) in nerve.triangles().iter().enumerate() {
            let e = |a, b| nerve.edge_index(a, b).expect("face");
            let (gij, gjk, gik) = (lift(e(i, j))?, lift(e(j, k))?, lift(e(i, k))?);
            let x = g.mul(g.mul(c.h[t], gik), g.inv(g.mul(gij, gjk)));
            let idx = self.embed.iter().position(|&y| y == x).ok_or(BridgeError::NotCentral { triangle: [i, j, k] })?;
            z.push(idx);
        }
        if coboundary(&self.center, nerve, 2, &z).iter().any(|&v| v != 0) {
            return Err(BridgeError::NotCocycle);
        }
        Ok(z)
    }

    /// Classical `Z`-valued 2-cocycle to the 1-cocycle `(1, z)`.
    pub fn backward(&self, nerve: &Nerve, z: &[usize]) -> Result<OneCocycle, BridgeError> {
        if z.len() != nerve.triangles().len() {
            return Err(CechError::MissingAssignment(format!("{} values for {} triangles", z.len(), nerve.triangles().len())).into());
        }
        let h = z
            .iter()
            .map(|&v| self.embed.get(v).copied().ok_or(BridgeError::InvalidElement(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let c = OneCocycle { g: vec![0; nerve.edges().len()], h };
        if !check1(&self.cm, nerve, &c)? {
            return Err(BridgeError::NotCocycle);
        }
        Ok(c)
    }

    /// Compares `H^1(nerve; [G -> G/Z])` with `H^2(nerve; Z)` through both
    /// maps, class by class.
    pub fn verify(&self, nerve: &Nerve, budget: u64) -> Result<BridgeReport, BridgeError> {
        let crossed = h1(&self.cm, nerve, budget)?;
        let classical = classical_cech(&self.center, nerve, 2)?;
        let mut forward = Vec::with_capacity(crossed.len());
        let mut witnesses = Vec::with_capacity(crossed.len());
        let mut round_trips = true;
        for c in &crossed.reps {
            let z = self.forward(nerve, c)?;
            forward.push(classical.class_of(&z).ok_or(BridgeError::NotCocycle)?);
            let back = self.backward(nerve, &z)?;
            match equiv1(&self.cm, nerve, c, &back, budget)? {
                Some(w) => witnesses.push(w),
                None => round_trips = false,
            }
        }
        let mut backward = Vec::with_capacity(classical.reps.len());
        for z in &classical.reps {
            let c = self.backward(nerve, z)?;
            round_trips &= self.forward(nerve, &c)? == *z;
            let class = crossed
                .class_of(&c)
                .ok_or_else(|| CechError::MismatchDetected("backward image was not enumerated".into()))?;
            backward.push(class);
        }
        let inverse = forward.iter().enumerate().all(|(a, &b)| backward.get(b) == Some(&a))
            && backward.iter().enumerate().all(|(b, &a)| forward.get(a) == Some(&b));
        let verified = round_trips && inverse && crossed.len() == classical.order;
        Ok(BridgeReport {
            group_order: self.group.size(),
            center_order: self.center.size(),
            crossed_classes: crossed.len(),
            classical_classes: classical.order,
            forward,
            backward,
            witnesses,
            verified,
            examined: crossed.examined,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub group_order: usize,
    pub center_order: usize,
    pub crossed_classes: usize,
    pub classical_classes: usize,
    /// Crossed class -> classical class.
    pub forward: Vec<usize>,
    /// Classical class -> crossed class.
    pub backward: Vec<usize>,
    /// Gauge witnesses from each crossed representative to its round trip.
    pub witnesses: Vec<Witness1>,
    pub verified: bool,
    pub examined: u64,
}

pub fn bridge_forward(g: &FiniteGroup, nerve: &Nerve, c: &OneCocycle) -> Result<Vec<usize>, BridgeError> {
    Bridge::new(g).forward(nerve, c)
}

pub fn bridge_backward(g: &FiniteGroup, nerve: &Nerve, z: &[usize]) -> Result<OneCocycle, BridgeError> {
    Bridge::new(g).backward(nerve, z)
}

pub fn bridge_verify(g: &FiniteGroup, nerve: &Nerve, budget: u64) -> Result<BridgeReport, BridgeError> {
    Bridge::new(g).verify(nerve, budget)
}
