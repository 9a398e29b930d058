//! Coefficient functions of total symbols: polynomials in the fibre
//! variables `u_1..u_n` whose coefficients are rational functions of
//! `x_1..x_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::{Exponents, Poly};
use crate::ratfn::RatFn;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffFn {
    n: usize,
    terms: BTreeMap<Exponents, RatFn>,
}

impl CoeffFn {
    pub fn zero(n: usize) -> Self {
        CoeffFn { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_ratfn(RatFn::one(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::from_ratfn(RatFn::constant(n, c))
    }

    pub fn from_ratfn(f: RatFn) -> Self {
        let n = f.nvars();
        Self::monomial(vec![0; n], f)
    }

    pub fn from_x_poly(p: Poly) -> Self {
        Self::from_ratfn(RatFn::from_poly(p))
    }

    /// `f(x) u^exps`.
    pub fn monomial(u_exps: Exponents, f: RatFn) -> Self {
        let n = u_exps.len();
        let mut out = Self::zero(n);
        if !f.is_zero() {
            out.terms.insert(u_exps, f);
        }
        out
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::from_ratfn(RatFn::var(n, i))
    }

    pub fn u(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, RatFn::one(n))
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, RatFn)>,
    {
        let mut out = Self::zero(n);
        for (e, f) in terms {
            out.add_term(e, f);
        }
        out
    }

    fn add_term(&mut self, e: Exponents, f: RatFn) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&f);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &RatFn)> {
        self.terms.iter()
    }

    /// The `x`-only part if the function does not depend on `u`.
    pub fn x_only(&self) -> Option<RatFn> {
        match self.terms.len() {
            0 => Some(RatFn::zero(self.n)),
            1 => {
                let (e, f) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| f.clone())
            }
            _ => None,
        }
    }

    /// The value if the function is a constant.
    pub fn constant_value(&self) -> Option<Rational> {
        self.x_only().and_then(|f| f.constant_value())
    }

    /// Largest exponent of each `u_i` appearing.
    pub fn u_degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.n];
        for e in self.terms.keys() {
            for (a, &b) in d.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        d
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, f) in &other.terms {
            out.add_term(e.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        CoeffFn { n: self.n, terms: self.terms.iter().map(|(e, f)| (e.clone(), f.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        CoeffFn { n: self.n, terms: self.terms.iter().map(|(e, f)| (e.clone(), f.scale(c))).collect() }
    }

    pub fn mul_ratfn(&self, g: &RatFn) -> Self {
        let mut out = Self::zero(self.n);
        for (e, f) in &self.terms {
            out.add_term(e.clone(), f.mul(g));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, fa) in &self.terms {
            for (eb, fb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, fa.mul(fb));
            }
        }
        out
    }

    pub fn d_x(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, f) in &self.terms {
            out.add_term(e.clone(), f.derivative(i));
        }
        out
    }

    pub fn d_u(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, f) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, f.scale(&Rational::from_integer(e[i].into())));
            }
        }
        out
    }
}

impl fmt::Debug for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, r)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("u{j}") } else { format!("u{j}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{r}")?;
            } else {
                write!(f, "({r})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial wire form: `[[exponents, "p/q"], ...]`.
pub type PolyJson = Vec<(Vec<u32>, String)>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RatFnJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialJson {
    pub u_exps: Vec<u32>,
    pub num: PolyJson,
    pub den: PolyJson,
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    p.terms().map(|(e, c)| (e.clone(), format_rational(c))).collect()
}

pub fn poly_from_json(n: usize, j: &PolyJson) -> Result<Poly, String> {
    let mut terms = Vec::with_capacity(j.len());
    for (e, c) in j {
        let c = parse_rational(c).ok_or_else(|| format!("bad rational {c:?}"))?;
        if e.len() != n {
            return Err(format!("exponent vector {e:?} has wrong length (expected {n})"));
        }
        terms.push((e.clone(), c));
    }
    Poly::from_terms(n, terms).ok_or_else(|| "bad polynomial".to_string())
}

pub fn ratfn_to_json(f: &RatFn) -> RatFnJson {
    RatFnJson { num: poly_to_json(f.num()), den: poly_to_json(f.den()) }
}

pub fn ratfn_from_json(n: usize, j: &RatFnJson) -> Result<RatFn, String> {
    let num = poly_from_json(n, &j.num)?;
    let den = poly_from_json(n, &j.den)?;
    RatFn::new(num, den).ok_or_else(|| "zero denominator".to_string())
}

impl CoeffFn {
    pub fn to_json(&self) -> Vec<MonomialJson> {
        self.terms
            .iter()
            .map(|(e, f)| MonomialJson {
                u_exps: e.clone(),
                num: poly_to_json(f.num()),
                den: poly_to_json(f.den()),
            })
            .collect()
    }

    pub fn from_json(n: usize, monos: &[MonomialJson]) -> Result<Self, String> {
        let mut out = Self::zero(n);
        for m in monos {
            if m.u_exps.len() != n {
                return Err(format!("u_exps {:?} has wrong length (expected {n})", m.u_exps));
            }
            let f = ratfn_from_json(n, &RatFnJson { num: m.num.clone(), den: m.den.clone() })?;
            out.add_term(m.u_exps.clone(), f);
        }
        Ok(out)
    }
}
