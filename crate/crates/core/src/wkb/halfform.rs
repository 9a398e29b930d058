use serde::{Deserialize, Serialize};

use crate::coeff::{ratfn_from_json, ratfn_to_json, RatFnJson};
use crate::ratfn::RatFn;

use super::{WkbError, WkbSymbol, WkbSymbolJson};

/// An operator written against the half-density `g`, with volume form
/// `θ = g² dx`. Two representatives `(g1, P1)` and `(g2, P2)` describe the
/// same section when `P2 = r P1 r^{-1}` with `r = g1 / g2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfFormOperator {
    g: RatFn,
    op: WkbSymbol,
}

impl HalfFormOperator {
    pub fn new(g: RatFn, op: WkbSymbol) -> Result<Self, WkbError> {
        if g.is_zero() {
            return Err(WkbError::InvalidDensity);
        }
        if g.nvars() != op.dim() {
            return Err(WkbError::DimensionMismatch { left: g.nvars(), right: op.dim() });
        }
        Ok(HalfFormOperator { g, op })
    }

    /// Representative for the flat density `dx`.
    pub fn flat(op: WkbSymbol) -> Self {
        let g = RatFn::one(op.dim());
        HalfFormOperator { g, op }
    }

    pub fn density(&self) -> &RatFn {
        &self.g
    }

    pub fn op(&self) -> &WkbSymbol {
        &self.op
    }

    pub fn into_op(self) -> WkbSymbol {
        self.op
    }

    /// Formal adjoint with respect to `θ = g² dx`:
    /// `P^{*θ} = g^{-2} ∘ P^{*dx} ∘ g²`.
    pub fn adjoint(&self) -> Self {
        let flat = self.op.adjoint_flat();
        if self.g.is_one() {
            return HalfFormOperator { g: self.g.clone(), op: flat };
        }
        let g2 = self.g.mul(&self.g);
        let g2_inv = g2.recip().expect("density is nonzero");
        let right = flat.exact_factor(&g2);
        let left = flat.exact_factor(&g2_inv);
        let op = left
            .star(&flat.star(&right).expect("same chart"))
            .expect("same chart");
        HalfFormOperator { g: self.g.clone(), op }
    }

    /// Same section written against the half-density `g2`.
    pub fn transport(&self, g2: &RatFn) -> Result<Self, WkbError> {
        if g2.is_zero() {
            return Err(WkbError::InvalidDensity);
        }
        if g2.nvars() != self.op.dim() {
            return Err(WkbError::DimensionMismatch { left: self.op.dim(), right: g2.nvars() });
        }
        if *g2 == self.g {
            return Ok(self.clone());
        }
        let ratio = self.g.mul(&g2.recip().expect("nonzero"));
        let ratio_inv = ratio.recip().expect("nonzero");
        let r = self.op.exact_factor(&ratio);
        let r_inv = self.op.exact_factor(&ratio_inv);
        let op = r.star(&self.op.star(&r_inv)?)?;
        Ok(HalfFormOperator { g: g2.clone(), op })
    }

    pub fn to_flat(&self) -> Self {
        self.transport(&RatFn::one(self.op.dim())).expect("one is a valid density")
    }

    /// Composition, computed in the density of `self`.
    pub fn star(&self, other: &Self) -> Result<Self, WkbError> {
        let other = other.transport(&self.g)?;
        Ok(HalfFormOperator { g: self.g.clone(), op: self.op.star(&other.op)? })
    }

    /// Equality as sections, on the common known window.
    pub fn eq_section(&self, other: &Self) -> bool {
        match other.transport(&self.g) {
            Ok(o) => self.op.eq_on_window(&o.op),
            Err(_) => false,
        }
    }

    /// Membership in `W^{√v,*}`: order 0, `σ_0 = 1` and `P P^* = 1`.
    pub fn wstar_check(&self) -> bool {
        let Ok((m, p)) = self.op.principal_symbol() else {
            return false;
        };
        if m != 0 || !p.constant_value().is_some_and(|c| num_traits::One::is_one(&c)) {
            return false;
        }
        let adj = self.adjoint();
        match self.op.star(&adj.op) {
            Ok(prod) => prod.is_one_on_window(),
            Err(_) => false,
        }
    }
}

/// Wire form: `{"g": {"num", "den"}, "op": <symbol>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfFormJson {
    pub g: RatFnJson,
    pub op: WkbSymbolJson,
}

impl From<&HalfFormOperator> for HalfFormJson {
    fn from(h: &HalfFormOperator) -> Self {
        HalfFormJson { g: ratfn_to_json(&h.g), op: WkbSymbolJson::from(&h.op) }
    }
}

impl TryFrom<HalfFormJson> for HalfFormOperator {
    type Error = WkbError;

    fn try_from(j: HalfFormJson) -> Result<Self, WkbError> {
        let op = WkbSymbol::try_from(j.op)?;
        let g = ratfn_from_json(op.dim(), &j.g).map_err(WkbError::Malformed)?;
        HalfFormOperator::new(g, op)
    }
}

impl Serialize for HalfFormOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HalfFormJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HalfFormOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = HalfFormJson::deserialize(d)?;
        HalfFormOperator::try_from(j).map_err(serde::de::Error::custom)
    }
}
