//! Sparse multivariate polynomials over `Q` with exact division and GCD.
//!
//! Terms are keyed by exponent vectors compared lexicographically, so the
//! last entry of the map is the leading term in lex order with the first
//! variable most significant.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, Rational};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Option<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return None;
            }
            p.add_term(e, c);
        }
        Some(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial has degree zero (including `0`).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn mul_term(&self, e: &[u32], c: &Rational) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (ea.iter().zip(e).map(|(a, b)| a + b).collect(), ca * c))
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[v].into()));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Scales so the leading coefficient is `1`.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Quotient if `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (le, lc) = divisor.leading_term()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(le).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = re.iter().zip(le).map(|(a, b)| a - b).collect();
            let c = rc / lc;
            rem = rem.sub(&divisor.mul_term(&e, &c));
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Coefficients as a polynomial in variable `v`, keyed by degree.
    fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = std::mem::replace(&mut e2[v], 0);
            out.entry(d).or_insert_with(|| Poly::zero(self.nvars)).add_term(e2, c.clone());
        }
        out
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(v).values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    fn pseudo_rem(&self, b: &Self, v: usize) -> Self {
        let db = b.degree_in(v);
        let bc = b.coeffs_in(v);
        let lb = &bc[&db];
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeffs_in(v).remove(&dr).unwrap();
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - db;
            r = r.mul(lb).sub(&lr.mul(&b.mul_term(&shift, &Rational::one())));
        }
        r
    }

    fn vars_used(&self) -> Vec<bool> {
        let mut used = vec![false; self.nvars];
        for e in self.terms.keys() {
            for (u, &k) in used.iter_mut().zip(e) {
                *u |= k > 0;
            }
        }
        used
    }
}

/// Monic greatest common divisor (`0` only when both inputs are `0`).
///
/// Work is steered by the smaller argument: contents are accumulated
/// starting from it with early exit, and the first remainder step cuts the
/// larger one down to its size before any content of it is taken.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.constant_value().is_some() || b.constant_value().is_some() {
        return Poly::one(a.nvars);
    }
    let (a, b) = if a.terms.len() < b.terms.len() { (b, a) } else { (a, b) };
    if a.terms.len() == 1 {
        let (ea, _) = a.leading_term().unwrap();
        let (eb, _) = b.leading_term().unwrap();
        let e = ea.iter().zip(eb).map(|(x, y)| *x.min(y)).collect();
        return Poly::monomial(e, Rational::one());
    }
    let ua = a.vars_used();
    let ub = b.vars_used();
    // a variable only one side uses: the gcd lives in the coefficients
    if let Some(va) = (0..a.nvars).find(|&i| ua[i] && !ub[i]) {
        return gcd_with_coeffs(b, a, va);
    }
    if let Some(vb) = (0..a.nvars).find(|&i| ub[i] && !ua[i]) {
        return gcd_with_coeffs(a, b, vb);
    }
    let v = (0..a.nvars).find(|&i| ua[i]).unwrap();
    let cb = b.content_in(v);
    let c = gcd_with_coeffs(&cb, a, v);
    let mut p = b.div_exact(&cb).expect("content divides");
    // `p` is primitive in `v`, so `gcd(a, p) = gcd(p, prem(a, p))`
    let mut q = a.pseudo_rem(&p, v);
    if !q.is_zero() {
        q = q.primitive_in(v).monic();
    }
    while !q.is_zero() {
        if q.degree_in(v) == 0 {
            // constant in v: the primitive parts are coprime
            return c.monic();
        }
        let r = p.pseudo_rem(&q, v);
        p = q;
        // primitive in v removes polynomial content, monic the numeric one;
        // without the latter the remainder sequence blows up over Q
        q = if r.is_zero() { r } else { r.primitive_in(v).monic() };
    }
    c.mul(&p.primitive_in(v)).monic()
}

/// `gcd(seed, coefficients of a in v)`, stopping once it reaches `1`.
fn gcd_with_coeffs(seed: &Poly, a: &Poly, v: usize) -> Poly {
    let mut g = seed.monic();
    for c in a.coeffs_in(v).values() {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "x")
    }
}

pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, var: &str) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (e, c)) in p.terms.iter().rev().enumerate() {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| if k == 1 { format!("{var}{j}") } else { format!("{var}{j}^{k}") })
            .collect();
        let neg = c.is_negative();
        if i > 0 {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        } else if neg {
            write!(f, "-")?;
        }
        let a = c.abs();
        if mono.is_empty() {
            write!(f, "{}", format_rational(&a))?;
        } else if a.is_one() {
            write!(f, "{}", mono.join("*"))?;
        } else {
            write!(f, "{}*{}", format_rational(&a), mono.join("*"))?;
        }
    }
    Ok(())
}
