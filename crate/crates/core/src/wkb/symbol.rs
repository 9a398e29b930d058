use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffFn, MonomialJson};
use crate::poly::Exponents;
use crate::ratfn::RatFn;
use crate::rational::{inv_factorial, Rational};
use crate::series::TauSeries;

use super::WkbError;

/// Total symbol `Σ_{floor <= j <= order} p_j(x, u) τ^j` on a chart of
/// `T*C^n`.
///
/// Coefficients below `floor` are unknown, everything above the order is
/// exactly zero. A zero symbol keeps its floor so products stay sound.
#[derive(Clone, PartialEq, Eq)]
pub struct WkbSymbol {
    n: usize,
    floor: i64,
    terms: BTreeMap<i64, CoeffFn>,
}

impl WkbSymbol {
    /// Symbol of declared `order` and `depth`; leading zero terms are
    /// stripped, so the resulting order may be lower.
    pub fn new<I>(n: usize, order: i64, depth: usize, terms: I) -> Result<Self, WkbError>
    where
        I: IntoIterator<Item = (i64, CoeffFn)>,
    {
        if depth == 0 {
            return Err(WkbError::ZeroDepth);
        }
        let floor = order - depth as i64 + 1;
        let mut map: BTreeMap<i64, CoeffFn> = BTreeMap::new();
        for (j, p) in terms {
            if j < floor || j > order {
                return Err(WkbError::OutOfWindow { exp: j, floor, top: order });
            }
            if p.dim() != n {
                return Err(WkbError::DimensionMismatch { left: n, right: p.dim() });
            }
            let e = map.entry(j).or_insert_with(|| CoeffFn::zero(n));
            *e = e.add(&p);
        }
        Ok(Self::from_parts(n, floor, map))
    }

    pub(crate) fn from_parts(n: usize, floor: i64, mut terms: BTreeMap<i64, CoeffFn>) -> Self {
        terms.retain(|&j, p| j >= floor && !p.is_zero());
        WkbSymbol { n, floor, terms }
    }

    pub fn zero_with_floor(n: usize, floor: i64) -> Self {
        WkbSymbol { n, floor, terms: BTreeMap::new() }
    }

    /// `p τ^exp`, known down to `exp - depth + 1`.
    pub fn monomial(p: CoeffFn, exp: i64, depth: usize) -> Self {
        let n = p.dim();
        let floor = exp - depth.max(1) as i64 + 1;
        Self::from_parts(n, floor, BTreeMap::from([(exp, p)]))
    }

    /// Order-zero symbol `p`.
    pub fn function(p: CoeffFn, depth: usize) -> Self {
        Self::monomial(p, 0, depth)
    }

    pub fn one(n: usize, depth: usize) -> Self {
        Self::function(CoeffFn::one(n), depth)
    }

    /// Generator `x_i`.
    pub fn x(n: usize, i: usize, depth: usize) -> Self {
        Self::function(CoeffFn::x(n, i), depth)
    }

    /// Generator `u_i τ`, the symbol of `∂/∂x_i`.
    pub fn u_tau(n: usize, i: usize, depth: usize) -> Self {
        Self::monomial(CoeffFn::u(n, i), 1, depth)
    }

    /// Embeds a scalar series of `k` as a symbol with constant coefficients.
    pub fn from_scalar(n: usize, s: &TauSeries) -> Self {
        let terms = s.terms().map(|(j, c)| (j, CoeffFn::constant(n, c.clone()))).collect();
        Self::from_parts(n, s.floor(), terms)
    }

    /// The scalar series if every coefficient is a constant.
    pub fn scalar(&self) -> Option<TauSeries> {
        let mut m = BTreeMap::new();
        for (j, p) in &self.terms {
            m.insert(*j, p.constant_value()?);
        }
        Some(TauSeries::from_parts(self.floor, m))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest known exponent: the order, or `floor` for the zero symbol.
    pub fn top(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(self.floor)
    }

    pub(crate) fn eff_top(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(self.floor - 1)
    }

    pub fn depth(&self) -> usize {
        (self.top() - self.floor + 1) as usize
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &CoeffFn)> {
        self.terms.iter().map(|(j, p)| (*j, p))
    }

    /// Coefficient of `τ^j`, `None` below the window.
    pub fn coeff(&self, j: i64) -> Option<CoeffFn> {
        if j < self.floor {
            return None;
        }
        Some(self.terms.get(&j).cloned().unwrap_or_else(|| CoeffFn::zero(self.n)))
    }

    pub fn order(&self) -> Result<i64, WkbError> {
        self.terms.keys().next_back().copied().ok_or(WkbError::ZeroOperator)
    }

    pub fn principal_symbol(&self) -> Result<(i64, CoeffFn), WkbError> {
        self.terms
            .iter()
            .next_back()
            .map(|(j, p)| (*j, p.clone()))
            .ok_or(WkbError::ZeroOperator)
    }

    /// Coefficient of `τ^m`, i.e. the image of the order-`m` part in
    /// `F_m / F_{m-1}`; zero when `m` is above the order.
    pub fn symbol_of_order(&self, m: i64) -> Result<CoeffFn, WkbError> {
        if m < self.floor {
            return Err(WkbError::BelowTruncation { m, floor: self.floor });
        }
        Ok(self.terms.get(&m).cloned().unwrap_or_else(|| CoeffFn::zero(self.n)))
    }

    /// The symbol map `σ_m: F_m -> F_m / F_{m-1}`, defined only on
    /// operators of order at most `m`.
    pub fn sigma(&self, m: i64) -> Result<CoeffFn, WkbError> {
        if let Some(order) = self.terms.keys().next_back() {
            if *order > m {
                return Err(WkbError::OrderTooHigh { order: *order, m });
            }
        }
        self.symbol_of_order(m)
    }

    pub fn truncate(&self, floor: i64) -> Self {
        Self::from_parts(self.n, floor.max(self.floor), self.terms.clone())
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        self.truncate(self.top() - depth as i64 + 1)
    }

    fn check_dim(&self, other: &Self) -> Result<(), WkbError> {
        if self.n != other.n {
            Err(WkbError::DimensionMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, WkbError> {
        self.check_dim(other)?;
        let mut m = self.terms.clone();
        for (j, p) in &other.terms {
            let e = m.entry(*j).or_insert_with(|| CoeffFn::zero(self.n));
            *e = e.add(p);
        }
        Ok(Self::from_parts(self.n, self.floor.max(other.floor), m))
    }

    pub fn neg(&self) -> Self {
        WkbSymbol {
            n: self.n,
            floor: self.floor,
            terms: self.terms.iter().map(|(j, p)| (*j, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WkbError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_parts(self.n, self.floor, self.terms.iter().map(|(j, p)| (*j, p.scale(c))).collect())
    }

    /// Equality of all coefficients on the common known window.
    pub fn eq_on_window(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        let floor = self.floor.max(other.floor);
        self.terms.range(floor..).eq(other.terms.range(floor..))
    }

    /// True iff the symbol equals `1` wherever it is known.
    pub fn is_one_on_window(&self) -> bool {
        let mut it = self.terms.range(self.floor..);
        match (it.next(), it.next()) {
            (None, _) => self.floor > 0,
            (Some((0, p)), None) => p.constant_value().is_some_and(|c| c.is_one()),
            _ => false,
        }
    }

    /// Lowest exponent at which the product of `self` and `other` is still
    /// determined by the known coefficients.
    pub(crate) fn product_floor(&self, other: &Self) -> i64 {
        (self.eff_top() + other.floor).max(other.eff_top() + self.floor)
    }

    /// Leibniz product `Σ_α τ^{-|α|}/α! ∂_u^α P ∂_x^α Q`.
    pub fn star(&self, other: &Self) -> Result<Self, WkbError> {
        self.check_dim(other)?;
        let floor = self.product_floor(other);
        Ok(self.star_to(other, floor))
    }

    /// Leibniz product keeping every term of exponent `>= floor`.
    pub(crate) fn star_to(&self, other: &Self, floor: i64) -> Self {
        let n = self.n;
        let mut out: BTreeMap<i64, CoeffFn> = BTreeMap::new();
        let mut du_cache: HashMap<(i64, Exponents), CoeffFn> = HashMap::new();
        let mut dx_cache: HashMap<(i64, Exponents), CoeffFn> = HashMap::new();
        for (&jp, p) in &self.terms {
            let degs = p.u_degrees();
            for (&jq, q) in &other.terms {
                let budget = jp + jq - floor;
                if budget < 0 {
                    continue;
                }
                for alpha in multi_indices(&degs, budget as u32) {
                    let k: u32 = alpha.iter().sum();
                    let dp = derive_u(&mut du_cache, jp, p, &alpha);
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = derive_x(&mut dx_cache, jq, q, &alpha);
                    if dq.is_zero() {
                        continue;
                    }
                    let mut weight = Rational::one();
                    for &a in &alpha {
                        weight *= inv_factorial(a);
                    }
                    let term = dp.mul(&dq).scale(&weight);
                    let e = out.entry(jp + jq - k as i64).or_insert_with(|| CoeffFn::zero(n));
                    *e = e.add(&term);
                }
            }
        }
        Self::from_parts(n, floor, out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, WkbError> {
        self.star(other)?.sub(&other.star(self)?)
    }

    /// The principal symbol is a unit of the coefficient ring: free of `u`
    /// and a nonzero rational function of `x`.
    pub fn is_invertible(&self) -> Result<bool, WkbError> {
        let (_, p) = self.principal_symbol()?;
        Ok(p.x_only().is_some_and(|f| !f.is_zero()))
    }

    /// Two-sided inverse to the depth of `self`, solved order by order.
    pub fn invert(&self) -> Result<Self, WkbError> {
        let (m, p) = self.principal_symbol()?;
        let lead_inv = p
            .x_only()
            .and_then(|f| f.recip())
            .ok_or(WkbError::NotInvertible)?;
        let n = self.n;
        let depth = self.depth() as i64;
        let check_floor = -depth + 1;
        // residual = 1 - self ★ (partial inverse), tracked down to check_floor
        let mut residual: BTreeMap<i64, CoeffFn> = BTreeMap::from([(0, CoeffFn::one(n))]);
        let mut inv: BTreeMap<i64, CoeffFn> = BTreeMap::new();
        for k in 0..depth {
            let r = match residual.remove(&(-k)) {
                Some(r) => r,
                None => continue,
            };
            let q = r.mul_ratfn(&lead_inv);
            let exp = -m - k;
            let piece = WkbSymbol::from_parts(n, exp - depth, BTreeMap::from([(exp, q.clone())]));
            let prod = self.star_to(&piece, check_floor);
            for (j, c) in prod.terms {
                let e = residual.entry(j).or_insert_with(|| CoeffFn::zero(n));
                *e = e.sub(&c);
            }
            residual.retain(|_, c| !c.is_zero());
            inv.insert(exp, q);
        }
        Ok(Self::from_parts(n, -m - depth + 1, inv))
    }

    /// `ad(P)(Q) = P Q P^{-1}`.
    pub fn ad_apply(&self, q: &Self) -> Result<Self, WkbError> {
        let inv = self.invert()?;
        self.star(q)?.star(&inv)
    }

    /// Star exponential `Σ_k A^{★k} / k!` of a symbol of negative order, at
    /// the given depth.
    pub fn star_exp(&self, depth: usize) -> Result<Self, WkbError> {
        if self.eff_top() >= 0 {
            return Err(WkbError::ExpNeedsNegativeOrder);
        }
        let floor = -(depth.max(1) as i64) + 1;
        let arg = self.truncate(floor);
        let mut acc = Self::one(self.n, depth);
        let mut power = Self::one(self.n, depth);
        let mut k = 1u32;
        loop {
            power = power.star(&arg)?.truncate(floor);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&inv_factorial(k)))?;
            k += 1;
        }
        Ok(acc.truncate(arg.floor))
    }

    /// Formal adjoint for the flat density `dx`:
    /// `Σ_α τ^{-|α|}/α! ∂_x^α ∂_u^α [σ(x, u; -τ)]`.
    ///
    /// τ is the symbol of `∂_t`, so it is transposed too. On differential
    /// operators (u-degree equal to τ-degree) this is the same as
    /// substituting `u -> -u`; on scalars it gives `s(τ) -> s(-τ)`.
    pub fn adjoint_flat(&self) -> Self {
        let n = self.n;
        let mut out: BTreeMap<i64, CoeffFn> = BTreeMap::new();
        for (&j, p) in &self.terms {
            let flipped = if j % 2 == 0 { p.clone() } else { p.neg() };
            let degs = flipped.u_degrees();
            let budget = (j - self.floor).max(0) as u32;
            for alpha in multi_indices(&degs, budget) {
                let k: u32 = alpha.iter().sum();
                let mut d = flipped.clone();
                for (i, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        d = d.d_u(i).d_x(i);
                    }
                }
                if d.is_zero() {
                    continue;
                }
                let mut weight = Rational::one();
                for &a in &alpha {
                    weight *= inv_factorial(a);
                }
                let e = out.entry(j - k as i64).or_insert_with(|| CoeffFn::zero(n));
                *e = e.add(&d.scale(&weight));
            }
        }
        Self::from_parts(n, self.floor, out)
    }

    /// Exact x-only factor `f` as an order-zero symbol whose window does not
    /// restrict products with `self`.
    pub(crate) fn exact_factor(&self, f: &RatFn) -> Self {
        let floor = (self.floor - self.eff_top()).min(0);
        Self::from_parts(self.n, floor, BTreeMap::from([(0, CoeffFn::from_ratfn(f.clone()))]))
    }
}

/// All multi-indices `α <= bound` (componentwise) with `|α| <= total`.
fn multi_indices(bound: &[u32], total: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; bound.len()];
    fn rec(i: usize, left: u32, bound: &[u32], cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == bound.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=bound[i].min(left) {
            cur[i] = a;
            rec(i + 1, left - a, bound, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, total, bound, &mut cur, &mut out);
    out
}

fn derive_u(cache: &mut HashMap<(i64, Exponents), CoeffFn>, j: i64, p: &CoeffFn, alpha: &[u32]) -> CoeffFn {
    derive(cache, j, p, alpha, CoeffFn::d_u)
}

fn derive_x(cache: &mut HashMap<(i64, Exponents), CoeffFn>, j: i64, q: &CoeffFn, alpha: &[u32]) -> CoeffFn {
    derive(cache, j, q, alpha, CoeffFn::d_x)
}

fn derive(
    cache: &mut HashMap<(i64, Exponents), CoeffFn>,
    j: i64,
    f: &CoeffFn,
    alpha: &[u32],
    d: fn(&CoeffFn, usize) -> CoeffFn,
) -> CoeffFn {
    let Some(i) = alpha.iter().position(|&a| a > 0) else {
        return f.clone();
    };
    let key = (j, alpha.to_vec());
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let mut lower = alpha.to_vec();
    lower[i] -= 1;
    let prev = derive(cache, j, f, &lower, d);
    let v = if prev.is_zero() { prev } else { d(&prev, i) };
    cache.insert(key, v.clone());
    v
}

impl fmt::Debug for WkbSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WkbSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.terms.iter().rev() {
            write!(f, "[{p}]τ^{j} + ")?;
        }
        write!(f, "O(τ^{})", self.floor - 1)
    }
}

/// Wire form: `{"n", "order", "depth", "terms": {"<j>": [monomials]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WkbSymbolJson {
    pub n: usize,
    pub order: i64,
    pub depth: usize,
    pub terms: BTreeMap<String, Vec<MonomialJson>>,
}

impl From<&WkbSymbol> for WkbSymbolJson {
    fn from(s: &WkbSymbol) -> Self {
        WkbSymbolJson {
            n: s.n,
            order: s.top(),
            depth: s.depth(),
            terms: s.terms.iter().map(|(j, p)| (j.to_string(), p.to_json())).collect(),
        }
    }
}

impl TryFrom<WkbSymbolJson> for WkbSymbol {
    type Error = WkbError;

    fn try_from(j: WkbSymbolJson) -> Result<Self, WkbError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for (k, monos) in &j.terms {
            let e: i64 = k.parse().map_err(|_| WkbError::Malformed(format!("bad exponent {k:?}")))?;
            let p = CoeffFn::from_json(j.n, monos).map_err(WkbError::Malformed)?;
            terms.push((e, p));
        }
        WkbSymbol::new(j.n, j.order, j.depth, terms)
    }
}

impl Serialize for WkbSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WkbSymbolJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WkbSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WkbSymbolJson::deserialize(d)?;
        WkbSymbol::try_from(j).map_err(serde::de::Error::custom)
    }
}
