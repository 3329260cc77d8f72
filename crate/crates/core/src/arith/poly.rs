//! Dense univariate polynomials over an exact field, coefficients in
//! ascending order with no trailing zeros.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::rational::Rational;

#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

pub type QPoly = Poly<Rational>;

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monomial c*x^k.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add_ref(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub_ref(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Evaluation at a value of a possibly larger ring, given the embedding.
    pub fn eval_with<T: Clone>(&self, x: &T, embed: impl Fn(&F) -> T, add: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T, zero: T) -> T {
        let mut acc = zero;
        for c in self.coeffs.iter().rev() {
            acc = add(&mul(&acc, x), &embed(c));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&F::from_int(i as i64)))
                .collect(),
        )
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let inv = d.lc().inv_ref();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut qc = vec![F::zero(); r.len() - dd];
        for k in (0..qc.len()).rev() {
            let c = r[k + dd].mul_ref(&inv);
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub_ref(&c.mul_ref(b));
                }
            }
            qc[k] = c;
        }
        r.truncate(dd);
        (Self::new(qc), Self::new(r))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().inv_ref())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree decomposition (Yun): monic factors `s[i]` such that the
    /// monic part of `self` equals the product of `s[i]^(i+1)`.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = fp.exact_div(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            out.push(a);
        }
        while out.last().is_some_and(|p| p.is_constant()) {
            out.pop();
        }
        out
    }

    /// The squarefree part (product of distinct monic irreducible factors).
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one();
        }
        self.exact_div(&self.gcd(&self.derivative())).expect("gcd divides").monic()
    }

    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

/// Resultant of two polynomials over a field, by the Euclidean algorithm.
/// Uses the actual degrees, so Res(a, b) = lc(a)^deg(b) * prod b(roots of a).
pub fn resultant<F: Field>(a: &Poly<F>, b: &Poly<F>) -> F {
    if a.is_zero() || b.is_zero() {
        return F::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = F::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            return acc.mul_ref(&pow_f(&b.lc(), da));
        }
        if da == 0 {
            return acc.mul_ref(&pow_f(&a.lc(), db));
        }
        if da < db {
            if (da * db) % 2 == 1 {
                acc = acc.neg_ref();
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // Res(a,b) = (-1)^(da db) Res(b,a) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        let r = a.rem(&b);
        if r.is_zero() {
            return F::zero();
        }
        let dr = r.degree().unwrap();
        if (da * db) % 2 == 1 {
            acc = acc.neg_ref();
        }
        acc = acc.mul_ref(&pow_f(&b.lc(), da - dr));
        a = b;
        b = r;
    }
}

fn pow_f<F: Field>(x: &F, e: usize) -> F {
    let mut acc = F::one();
    for _ in 0..e {
        acc = acc.mul_ref(x);
    }
    acc
}

/// Lagrange interpolation through (x_i, y_i) with distinct x_i.
pub fn interpolate<F: Field>(xs: &[F], ys: &[F]) -> Poly<F> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Poly::one();
        let mut den = F::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::new(vec![xj.neg_ref(), F::one()]));
                den = den.mul_ref(&xi.sub_ref(xj));
            }
        }
        acc = acc.add(&basis.scale(&yi.div_ref(&den)));
    }
    acc
}

impl QPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_int(v)).collect())
    }

    /// Integer coefficients of the primitive multiple with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.iter().map(|c| c / &g * &sign).collect()
    }

    pub fn from_big_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|v| Rational::from_int(v.clone())).collect())
    }

    /// Number of distinct real roots in the half-open interval (lo, +inf),
    /// by a Sturm sequence.
    pub fn count_real_roots_above(&self, lo: &Rational) -> usize {
        let p = self.squarefree_part();
        if p.is_constant() {
            return 0;
        }
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let sign_changes = |vals: Vec<i32>| {
            let nz: Vec<i32> = vals.into_iter().filter(|s| *s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_lo = sign_changes(seq.iter().map(|s| s.eval(lo).signum()).collect());
        let at_inf = sign_changes(seq.iter().map(|s| s.lc().signum()).collect());
        at_lo - at_inf
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}
