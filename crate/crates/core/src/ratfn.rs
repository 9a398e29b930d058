//! Reduced quotients of polynomials in `x_1..x_n`.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Zero;

use crate::poly::{gcd, write_poly, Poly};
use crate::rational::Rational;

/// `num / den` with `gcd(num, den) = 1` and monic `den`.
///
/// The denominator is also kept as a product of pairwise coprime monic
/// factors, so reducing after an operation needs only trial division and
/// gcds against those small factors, never against the expanded product.
#[derive(Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
    base: Vec<(Poly, u32)>,
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFn {}

impl Hash for RatFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Splits factors until they are pairwise coprime, tracking one exponent
/// per operand so that each operand is still the product over the result.
fn refine<const K: usize>(mut list: Vec<(Poly, [u32; K])>) -> Vec<(Poly, [u32; K])> {
    'outer: loop {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].0 == list[j].0 {
                    let (_, ej) = list.swap_remove(j);
                    for (a, b) in list[i].1.iter_mut().zip(ej) {
                        *a += b;
                    }
                    continue 'outer;
                }
                let g = gcd(&list[i].0, &list[j].0);
                if g.is_one() {
                    continue;
                }
                let (fj, ej) = list.swap_remove(j);
                let (fi, ei) = list.swap_remove(i);
                let mut eg = ei;
                for (a, b) in eg.iter_mut().zip(ej) {
                    *a += b;
                }
                for (f, e) in [(fi.div_exact(&g).unwrap(), ei), (fj.div_exact(&g).unwrap(), ej), (g, eg)] {
                    if f.constant_value().is_none() {
                        list.push((f.monic(), e));
                    }
                }
                continue 'outer;
            }
        }
        return list;
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() || num.nvars() != den.nvars() {
            return None;
        }
        let n = num.nvars();
        if let Some(c) = den.constant_value() {
            return Some(Self::from_poly(num.scale(&c.recip())));
        }
        let lc = den.leading_term().unwrap().1.recip();
        Some(Self::normalize(num.scale(&lc), vec![(den.scale(&lc), 1)], n))
    }

    /// Cancels `num` against a coprime monic factor base.
    fn normalize(mut num: Poly, mut base: Vec<(Poly, u32)>, n: usize) -> Self {
        base.retain(|(_, e)| *e > 0);
        if num.is_zero() {
            return Self::zero(n);
        }
        loop {
            let mut split = None;
            for (i, (f, e)) in base.iter_mut().enumerate() {
                while *e > 0 {
                    match num.div_exact(f) {
                        Some(q) => {
                            num = q;
                            *e -= 1;
                        }
                        None => break,
                    }
                }
                if *e > 0 {
                    let g = gcd(&num, f);
                    if !g.is_one() {
                        split = Some((i, g));
                        break;
                    }
                }
            }
            let Some((i, g)) = split else {
                base.retain(|(_, e)| *e > 0);
                break;
            };
            let (f, e) = base.swap_remove(i);
            let h = f.div_exact(&g).unwrap().monic();
            let parts = refine(vec![(g, [e]), (h, [e])]);
            base.extend(parts.into_iter().map(|(p, [e])| (p, e)));
        }
        base.sort_by(|a, b| a.0.terms().cmp(b.0.terms()));
        let mut den = Poly::one(n);
        for (f, e) in &base {
            for _ in 0..*e {
                den = den.mul(f);
            }
        }
        RatFn { num, den, base }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFn { num: p, den: Poly::one(n), base: Vec::new() }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_poly(Poly::zero(n))
    }

    pub fn one(n: usize) -> Self {
        Self::from_poly(Poly::one(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(n, c))
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(n, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn joint(&self, other: &Self) -> Vec<(Poly, [u32; 2])> {
        let list = self.base.iter().map(|(f, e)| (f.clone(), [*e, 0]));
        refine(list.chain(other.base.iter().map(|(f, e)| (f.clone(), [0, *e]))).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.nvars();
        if self.base == other.base {
            if self.base.is_empty() {
                return Self::from_poly(self.num.add(&other.num));
            }
            return Self::normalize(self.num.add(&other.num), self.base.clone(), n);
        }
        let joint = self.joint(other);
        let (mut a, mut b) = (self.num.clone(), other.num.clone());
        let mut base = Vec::new();
        for (f, [x, y]) in joint {
            let m = x.max(y);
            for _ in x..m {
                a = a.mul(&f);
            }
            for _ in y..m {
                b = b.mul(&f);
            }
            base.push((f, m));
        }
        Self::normalize(a.add(&b), base, n)
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone(), base: self.base.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFn { num: self.num.scale(c), den: self.den.clone(), base: self.base.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.base.is_empty() && other.base.is_empty() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let base = self.joint(other).into_iter().map(|(f, [x, y])| (f, x + y)).collect();
        Self::normalize(self.num.mul(&other.num), base, self.nvars())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Self::new(self.den.clone(), self.num.clone())
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        if self.base.is_empty() {
            return Self::from_poly(self.num.derivative(v));
        }
        // (n / prod f^e)' = (n' P - n sum e f' P / f) / (prod f^e * P), P = prod f
        let n = self.nvars();
        let mut radical = Poly::one(n);
        for (f, _) in &self.base {
            radical = radical.mul(f);
        }
        let mut num = self.num.derivative(v).mul(&radical);
        for (f, e) in &self.base {
            let df = f.derivative(v);
            if df.is_zero() {
                continue;
            }
            let cof = radical.div_exact(f).unwrap();
            num = num.sub(&self.num.mul(&df).mul(&cof).scale(&crate::rational::rat(i64::from(*e))));
        }
        let base = self.base.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        Self::normalize(num, base, n)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at a rational point, `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write_poly(f, &self.num, "x")
        } else {
            write!(f, "(")?;
            write_poly(f, &self.num, "x")?;
            write!(f, ")/(")?;
            write_poly(f, &self.den, "x")?;
            write!(f, ")")
        }
    }
}
