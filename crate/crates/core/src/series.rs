//! Truncated formal Laurent series in `τ` with exact rational coefficients.
//!
//! A [`TauSeries`] stores the coefficients of `τ^j` for `floor <= j <= top`.
//! Everything below `floor` is unknown; everything above `top` is exactly
//! zero. The depth of a series is `top - floor + 1`. Binary operations
//! return the coarsest window on which the result is still exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, inv_factorial, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("depth must be positive")]
    ZeroDepth,
    #[error("exponent {exp} lies outside the window [{floor}, {top}]")]
    OutOfWindow { exp: i64, floor: i64, top: i64 },
    #[error("exponential needs a series with top degree below zero")]
    ExpNeedsNegativeOrder,
    #[error("malformed series: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct TauSeries {
    floor: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl TauSeries {
    /// Builds a series with `top` and `depth` as declared window; leading
    /// zeros are stripped afterwards.
    pub fn new<I>(top: i64, depth: usize, coeffs: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        if depth == 0 {
            return Err(SeriesError::ZeroDepth);
        }
        let floor = top - depth as i64 + 1;
        let mut map = BTreeMap::new();
        for (exp, c) in coeffs {
            if exp < floor || exp > top {
                return Err(SeriesError::OutOfWindow { exp, floor, top });
            }
            if !c.is_zero() {
                *map.entry(exp).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Self::from_parts(floor, map))
    }

    /// Canonical constructor: drops zeros and anything below `floor`.
    pub(crate) fn from_parts(floor: i64, mut coeffs: BTreeMap<i64, Rational>) -> Self {
        coeffs.retain(|&e, c| e >= floor && !c.is_zero());
        TauSeries { floor, coeffs }
    }

    pub fn zero_with_floor(floor: i64) -> Self {
        TauSeries { floor, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: Rational, depth: usize) -> Self {
        Self::monomial(c, 0, depth)
    }

    pub fn one(depth: usize) -> Self {
        Self::constant(Rational::one(), depth)
    }

    /// `c τ^exp` known exactly down to `exp - depth + 1`.
    pub fn monomial(c: Rational, exp: i64, depth: usize) -> Self {
        let depth = depth.max(1) as i64;
        let mut m = BTreeMap::new();
        m.insert(exp, c);
        Self::from_parts(exp - depth + 1, m)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent that is still known exactly.
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Highest nonzero exponent; for the zero series this is `floor`.
    pub fn top_degree(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(self.floor)
    }

    pub fn depth(&self) -> usize {
        (self.top_degree() - self.floor + 1) as usize
    }

    /// Effective top for window arithmetic (`floor - 1` for zero).
    fn eff_top(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(self.floor - 1)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    /// Coefficient of `τ^exp`, or `None` when `exp` is below the window.
    pub fn coeff(&self, exp: i64) -> Option<Rational> {
        if exp < self.floor {
            return None;
        }
        Some(self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Raises the floor; the window only ever shrinks.
    pub fn truncate(&self, floor: i64) -> Self {
        Self::from_parts(floor.max(self.floor), self.coeffs.clone())
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        self.truncate(self.top_degree() - depth as i64 + 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let mut m = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            *m.entry(*e).or_insert_with(Rational::zero) += c;
        }
        Self::from_parts(floor, m)
    }

    pub fn neg(&self) -> Self {
        TauSeries {
            floor: self.floor,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_parts(self.floor, self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect())
    }

    /// Cauchy product; output depth is the smaller input depth.
    pub fn mul(&self, other: &Self) -> Self {
        let floor = (self.eff_top() + other.floor).max(other.eff_top() + self.floor);
        let mut m: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in other.coeffs.range(floor - ea..) {
                *m.entry(ea + eb).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Self::from_parts(floor, m)
    }

    /// Multiplicative inverse with the same depth as `self`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let (&top, lead) = self
            .coeffs
            .iter()
            .next_back()
            .ok_or(SeriesError::ZeroLeadingCoefficient)?;
        let depth = self.depth() as i64;
        let lead_inv = lead.recip();
        let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
        // b_{-top-k} = -(1/a_top) * sum_{i=1..k} a_{top-i} b_{-top-k+i}
        for k in 0..depth {
            let exp = -top - k;
            let c = if k == 0 {
                lead_inv.clone()
            } else {
                let mut acc = Rational::zero();
                for i in 1..=k {
                    if let (Some(a), Some(b)) = (self.coeffs.get(&(top - i)), out.get(&(exp + i))) {
                        acc += a * b;
                    }
                }
                -(acc * &lead_inv)
            };
            out.insert(exp, c);
        }
        Ok(Self::from_parts(-top - depth + 1, out))
    }

    /// `s(τ) ↦ s(-τ)`.
    pub fn substitute_neg_tau(&self) -> Self {
        TauSeries {
            floor: self.floor,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Equality of coefficients on the common known window.
    pub fn eq_on_window(&self, other: &Self) -> bool {
        let floor = self.floor.max(other.floor);
        let a = self.coeffs.range(floor..);
        let b = other.coeffs.range(floor..);
        a.eq(b)
    }

    /// True iff the series equals `1` everywhere it is known.
    pub fn is_one_on_window(&self) -> bool {
        let mut it = self.coeffs.iter();
        match (it.next(), it.next()) {
            (None, _) => self.floor > 0,
            (Some((0, c)), None) => c.is_one(),
            _ => false,
        }
    }

    /// Membership in `k*`: leading term `1` at `τ^0` and `s(τ)s(-τ) = 1`
    /// to the available depth.
    pub fn kstar_check(&self) -> bool {
        if self.is_zero() || self.top_degree() != 0 {
            return false;
        }
        if !self.coeffs[&0].is_one() {
            return false;
        }
        self.mul(&self.substitute_neg_tau()).is_one_on_window()
    }

    /// Truncated exponential `Σ a^k / k!` of a series of negative order,
    /// returned at the given depth with top degree `0`.
    pub fn exp(&self, depth: usize) -> Result<Self, SeriesError> {
        if self.eff_top() >= 0 {
            return Err(SeriesError::ExpNeedsNegativeOrder);
        }
        let floor = -(depth.max(1) as i64) + 1;
        let arg = self.truncate(floor);
        let mut acc = Self::one(depth);
        let mut power = Self::one(depth);
        let mut k = 1u32;
        loop {
            power = power.mul(&arg).truncate(floor);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&inv_factorial(k)));
            k += 1;
        }
        Ok(acc.truncate(floor.max(self.floor)))
    }
}

impl fmt::Debug for TauSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TauSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(τ^{})", self.floor - 1);
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                write!(f, "{}", format_rational(&c.abs()))?;
            } else {
                write!(f, "{}", format_rational(c))?;
            }
            if *e != 0 {
                write!(f, "τ^{e}")?;
            }
        }
        write!(f, " + O(τ^{})", self.floor - 1)
    }
}

/// Wire form: `{"top": m, "depth": N, "coeffs": {"<exp>": "p/q"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauSeriesJson {
    pub top: i64,
    pub depth: usize,
    pub coeffs: BTreeMap<String, String>,
}

impl From<&TauSeries> for TauSeriesJson {
    fn from(s: &TauSeries) -> Self {
        TauSeriesJson {
            top: s.top_degree(),
            depth: s.depth(),
            coeffs: s.coeffs.iter().map(|(e, c)| (e.to_string(), format_rational(c))).collect(),
        }
    }
}

impl TryFrom<TauSeriesJson> for TauSeries {
    type Error = SeriesError;

    fn try_from(j: TauSeriesJson) -> Result<Self, SeriesError> {
        let mut coeffs = Vec::with_capacity(j.coeffs.len());
        for (k, v) in &j.coeffs {
            let e: i64 = k
                .parse()
                .map_err(|_| SeriesError::Malformed(format!("bad exponent {k:?}")))?;
            let c = parse_rational(v)
                .ok_or_else(|| SeriesError::Malformed(format!("bad rational {v:?}")))?;
            coeffs.push((e, c));
        }
        TauSeries::new(j.top, j.depth, coeffs)
    }
}

impl Serialize for TauSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TauSeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TauSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TauSeriesJson::deserialize(d)?;
        TauSeries::try_from(j).map_err(serde::de::Error::custom)
    }
}
