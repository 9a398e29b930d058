//! Independent oracles and random generators shared by the integration
//! tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wkb_cech::nerve::Nerve;
use wkb_cech::rational::rat;
use wkb_cech::{CoeffFn, Poly, RatFn, Rational, WkbSymbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------
// Differential-operator oracle.
//
// A symbol acts on polynomials in x with Laurent coefficients in λ,
// standing for f(x) e^{λ t}: τ acts as λ and u^b τ^j c(x) as
// c(x) λ^{j-|b|} ∂^b. Composition of these operators is composition in
// t-translation invariant differential operators, and the transpose for
// ∫∫ · dx dt sends the λ-sector to the (-λ)-sector.

/// `Σ c x^xe λ^l`, keyed by `(xe, l)`.
pub type LPoly = BTreeMap<(Vec<u32>, i64), Rational>;

#[derive(Debug, Clone)]
pub struct OracleTerm {
    pub j: i64,
    pub u: Vec<u32>,
    pub x: Vec<u32>,
    pub c: Rational,
}

/// Reads a symbol with polynomial coefficients into oracle terms.
pub fn oracle_terms(s: &WkbSymbol) -> Vec<OracleTerm> {
    let mut out = Vec::new();
    for (j, p) in s.terms() {
        for (u, f) in p.terms() {
            assert!(f.den().is_one(), "oracle needs polynomial coefficients");
            for (x, c) in f.num().terms() {
                out.push(OracleTerm { j, u: u.clone(), x: x.clone(), c: c.clone() });
            }
        }
    }
    out
}

fn add_to(out: &mut LPoly, key: (Vec<u32>, i64), c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&key);
    }
}

/// `∂^b x^e = (falling factorials) x^{e-b}`.
fn derive_monomial(e: &[u32], b: &[u32]) -> Option<(Vec<u32>, Rational)> {
    let mut coeff = Rational::one();
    let mut exps = Vec::with_capacity(e.len());
    for (&ei, &bi) in e.iter().zip(b) {
        if bi > ei {
            return None;
        }
        for k in 0..bi {
            coeff *= rat((ei - k) as i64);
        }
        exps.push(ei - bi);
    }
    Some((exps, coeff))
}

fn signed(c: &Rational, odd: bool) -> Rational {
    if odd {
        -c.clone()
    } else {
        c.clone()
    }
}

/// Applies the operator with τ evaluated at `sign · λ`.
pub fn apply(terms: &[OracleTerm], sign: i64, f: &LPoly) -> LPoly {
    let mut out = LPoly::new();
    for t in terms {
        let b: u32 = t.u.iter().sum();
        let shift = t.j - b as i64;
        for ((e, l), a) in f {
            let Some((de, dc)) = derive_monomial(e, &t.u) else { continue };
            let exps: Vec<u32> = de.iter().zip(&t.x).map(|(p, q)| p + q).collect();
            let c = signed(&(dc * a * &t.c), sign < 0 && shift.rem_euclid(2) == 1);
            add_to(&mut out, (exps, l + shift), c);
        }
    }
    out
}

/// Transpose with respect to `∫ · dx` of the operator at τ = λ:
/// `(c x^a λ^s ∂^b)^T g = (-1)^{|b|} λ^s ∂^b (c x^a g)`.
pub fn apply_transpose(terms: &[OracleTerm], f: &LPoly) -> LPoly {
    let mut out = LPoly::new();
    for t in terms {
        let b: u32 = t.u.iter().sum();
        let shift = t.j - b as i64;
        for ((e, l), a) in f {
            let prod: Vec<u32> = e.iter().zip(&t.x).map(|(p, q)| p + q).collect();
            let Some((de, dc)) = derive_monomial(&prod, &t.u) else { continue };
            let c = signed(&(dc * a * &t.c), b % 2 == 1);
            add_to(&mut out, (de, l + shift), c);
        }
    }
    out
}

/// `x^e` with λ-power 0.
pub fn monomial(e: Vec<u32>) -> LPoly {
    LPoly::from([((e, 0), Rational::one())])
}

/// All exponent vectors in `n` variables of total degree `<= d`.
pub fn basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(i + 1, n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------
// Random symbols.

fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    let num = r.gen_range(-4i64..=4);
    let den = *[1i64, 1, 2, 3].get(r.gen_range(0..4)).unwrap();
    Rational::new(num.into(), den.into())
}

fn x_poly(r: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..r.gen_range(1..=3) {
        let e: Vec<u32> = (0..n).map(|_| r.gen_range(0..=max_deg)).collect();
        p = p.add(&Poly::monomial(e, small_rational(r)));
    }
    p
}

/// Coefficient `Σ f(x) u^b` with u-degree at most `max_u` per variable.
pub fn random_coeff(r: &mut ChaCha8Rng, n: usize, max_u: u32, rational: bool) -> CoeffFn {
    let mut terms = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let u: Vec<u32> = (0..n).map(|_| r.gen_range(0..=max_u)).collect();
        let num = x_poly(r, n, 2);
        let f = if rational && r.gen_bool(0.3) {
            // 1 + x_0^2 never vanishes on the reals and keeps things exact
            let den = Poly::one(n).add(&Poly::var(n, 0).pow(2));
            RatFn::new(num, den).expect("nonzero denominator")
        } else {
            RatFn::from_poly(num)
        };
        terms.push((u, f));
    }
    CoeffFn::from_terms(n, terms)
}

/// Symbol of order `top` (possibly lower after cancellation), known to
/// `depth`, with terms in `[top - spread, top]`.
pub fn random_symbol(r: &mut ChaCha8Rng, n: usize, top: i64, spread: i64, depth: usize, max_u: u32, rational: bool) -> WkbSymbol {
    let mut terms = Vec::new();
    for k in 0..=spread {
        if k == 0 || r.gen_bool(0.75) {
            terms.push((top - k, random_coeff(r, n, max_u, rational)));
        }
    }
    WkbSymbol::new(n, top, depth, terms).expect("terms inside the window")
}

/// Symbol with a unit principal part `c · g(x)` of order `top`.
pub fn random_invertible(r: &mut ChaCha8Rng, n: usize, top: i64, depth: usize) -> WkbSymbol {
    let mut c = small_rational(r);
    if c.is_zero() {
        c = rat(2);
    }
    let lead = if r.gen_bool(0.5) {
        RatFn::constant(n, c)
    } else {
        RatFn::new(Poly::one(n).add(&Poly::var(n, 0).pow(2)).scale(&c), Poly::one(n).add(&Poly::var(n, n - 1).pow(4)))
            .expect("nonzero")
    };
    let rest = random_symbol(r, n, top - 1, depth as i64 - 2, depth - 1, 2, true);
    let lead = WkbSymbol::monomial(CoeffFn::from_ratfn(lead), top, depth);
    lead.add(&rest).expect("same chart")
}

// ---------------------------------------------------------------------
// Classical cohomology over F_p by linear algebra.

/// Matrix of `δ: C^k -> C^{k+1}` over `F_p`, rows indexed by
/// `(k+1)`-simplices.
pub fn coboundary_matrix(nerve: &Nerve, k: usize, p: i64) -> Vec<Vec<i64>> {
    let rows = nerve.simplices(k + 1);
    let cols = nerve.simplices(k);
    rows.iter()
        .map(|s| {
            let mut row = vec![0i64; cols.len()];
            for j in 0..s.len() {
                let mut face = s.clone();
                face.remove(j);
                let c = cols.iter().position(|f| *f == face).expect("face closure");
                row[c] = (row[c] + if j % 2 == 0 { 1 } else { p - 1 }) % p;
            }
            row
        })
        .collect()
}

pub fn rank_mod_p(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let inv = |a: i64| (1..p).find(|&b| a * b % p == 1).expect("p prime");
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] % p != 0) else { continue };
        m.swap(rank, pivot);
        let f = inv(m[rank][col]);
        for v in m[rank].iter_mut() {
            *v = *v * f % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..ncols {
                    m[r][c] = ((m[r][c] - factor * m[rank][c]) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `|H^k(nerve; Z/p)|`.
pub fn cohomology_order(nerve: &Nerve, k: usize, p: i64) -> usize {
    let n_k = nerve.simplices(k).len();
    let rank_out = if nerve.simplices(k + 1).is_empty() { 0 } else { rank_mod_p(coboundary_matrix(nerve, k, p), p) };
    let rank_in = if k == 0 { 0 } else { rank_mod_p(coboundary_matrix(nerve, k - 1, p), p) };
    (p as usize).pow((n_k - rank_out - rank_in) as u32)
}
