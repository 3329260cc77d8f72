//! Square classes in Q*/(Q*)^2 and linear algebra over F_2 on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// The class of a nonzero rational modulo squares, stored as its signed
/// squarefree kernel together with the F_2 exponent vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareClass {
    kernel: BigInt,
    primes: Vec<BigUint>,
}

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        super::json_int::serialize(&self.kernel, s)
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let k = super::json_int::deserialize(d)?;
        SquareClass::from_kernel(&k).map_err(serde::de::Error::custom)
    }
}

/// A coordinate of the F_2 exponent vector: the sign, or one prime.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coord {
    Sign,
    Prime(BigUint),
}

impl SquareClass {
    /// Class of a nonzero integer.
    pub fn of_integer(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::InvalidInput("square class of zero".into()));
        }
        let primes: Vec<BigUint> = factorize(n.magnitude())
            .into_iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| p)
            .collect();
        let mag: BigUint = primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        let sign = if n.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus };
        Ok(SquareClass { kernel: BigInt::from_biguint(sign, mag), primes })
    }

    /// Class of a nonzero rational p/q, which is the class of p*q.
    pub fn of_rational(r: &Rational) -> Result<Self> {
        Self::of_integer(&(r.numer() * r.denom()))
    }

    /// Rebuild from a kernel that is claimed to be squarefree.
    pub fn from_kernel(d: &BigInt) -> Result<Self> {
        let c = Self::of_integer(d)?;
        if &c.kernel != d {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(c)
    }

    pub fn kernel(&self) -> &BigInt {
        &self.kernel
    }

    pub fn is_negative(&self) -> bool {
        self.kernel.sign() == Sign::Minus
    }

    /// Odd-exponent primes in increasing order.
    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn is_trivial(&self) -> bool {
        self.kernel.is_one()
    }

    pub fn support(&self) -> BTreeSet<Coord> {
        let mut s: BTreeSet<Coord> = self.primes.iter().cloned().map(Coord::Prime).collect();
        if self.is_negative() {
            s.insert(Coord::Sign);
        }
        s
    }

    /// Product of two classes.
    pub fn mul(&self, other: &Self) -> Self {
        let s: BTreeSet<Coord> = self.support().symmetric_difference(&other.support()).cloned().collect();
        Self::from_support(&s)
    }

    fn from_support(s: &BTreeSet<Coord>) -> Self {
        let mut primes = Vec::new();
        let mut neg = false;
        for c in s {
            match c {
                Coord::Sign => neg = true,
                Coord::Prime(p) => primes.push(p.clone()),
            }
        }
        let mag: BigUint = primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        SquareClass { kernel: BigInt::from_biguint(sign, mag), primes }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kernel)
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.kernel)
    }
}

/// Prime factorisation of a positive integer, in increasing prime order.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, usize)> {
    let mut out = BTreeMap::new();
    split_into(n.clone(), 1, &mut out);
    out.into_iter().collect()
}

// num-prime's generic driver can stall on inputs with a large cubed prime
// factor, so perfect powers are peeled off here before Pollard rho.
fn split_into(mut n: BigUint, mult: usize, out: &mut BTreeMap<BigUint, usize>) {
    if n.is_zero() || n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        for (p, e) in num_prime::nt_funcs::factorize64(small) {
            *out.entry(BigUint::from(p)).or_default() += e * mult;
        }
        return;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(bp.clone()).or_default() += mult;
        }
    }
    if n.bits() <= 64 {
        return split_into(n, mult, out);
    }
    if num_prime::nt_funcs::is_prime(&n, None).probably() {
        *out.entry(n).or_default() += mult;
        return;
    }
    for k in 2..=(n.bits() as u32) {
        let r = n.nth_root(k);
        if r.pow(k) == n {
            return split_into(r, mult * k as usize, out);
        }
    }
    let mut offset = 1u32;
    loop {
        let (d, _) = num_prime::factor::pollard_rho(&n, BigUint::from(2u32), BigUint::from(offset), 1 << 22);
        if let Some(d) = d {
            if !d.is_one() && d != n {
                let rest = &n / &d;
                split_into(d, mult, out);
                split_into(rest, mult, out);
                return;
            }
        }
        offset += 1;
    }
}

/// Signed squarefree kernel of a nonzero integer.
pub fn squarefree_kernel(n: &BigInt) -> Result<BigInt> {
    Ok(SquareClass::of_integer(n)?.kernel)
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero() && factorize(n.magnitude()).iter().all(|(_, e)| *e == 1)
}

/// An F_2-linearly independent family of square classes kept in echelon
/// form, so membership of the span is a reduction.
#[derive(Clone, Debug, Default)]
pub struct SquareClassBasis {
    members: Vec<SquareClass>,
    // echelon rows keyed by their largest coordinate
    rows: Vec<(Coord, BTreeSet<Coord>)>,
}

impl SquareClassBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[SquareClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn reduce(&self, c: &SquareClass) -> BTreeSet<Coord> {
        let mut v = c.support();
        for (pivot, row) in &self.rows {
            if v.contains(pivot) {
                v = v.symmetric_difference(row).cloned().collect();
            }
        }
        v
    }

    /// Whether `c` is a product of members (the trivial class always is).
    pub fn in_span(&self, c: &SquareClass) -> bool {
        self.reduce(c).is_empty()
    }

    /// Adds `c` if it is independent of the current members.
    pub fn try_insert(&mut self, c: SquareClass) -> bool {
        let v = self.reduce(&c);
        let Some(pivot) = v.iter().next_back().cloned() else {
            return false;
        };
        // keep rows fully reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if row.contains(&pivot) {
                *row = row.symmetric_difference(&v).cloned().collect();
            }
        }
        self.rows.push((pivot, v));
        self.rows.sort_by(|a, b| b.0.cmp(&a.0));
        self.members.push(c);
        true
    }

    /// Non-mutating form: the extended basis, or `None` when `c` is dependent.
    pub fn extend(&self, c: &SquareClass) -> Option<SquareClassBasis> {
        let mut next = self.clone();
        next.try_insert(c.clone()).then_some(next)
    }
}

/// True when the given classes are F_2-independent.
pub fn classes_independent(classes: &[SquareClass]) -> bool {
    let mut b = SquareClassBasis::new();
    classes.iter().all(|c| b.try_insert(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use proptest::prelude::*;

    fn cls(n: i64) -> SquareClass {
        SquareClass::of_integer(&BigInt::from(n)).unwrap()
    }

    #[test]
    fn kernels() {
        assert_eq!(cls(12).kernel(), &BigInt::from(3));
        assert_eq!(cls(-50).kernel(), &BigInt::from(-2));
        assert_eq!(cls(1).kernel(), &BigInt::from(1));
        assert_eq!(cls(-1).kernel(), &BigInt::from(-1));
        assert_eq!(SquareClass::of_rational(&q(857, 4)).unwrap().kernel(), &BigInt::from(857));
        assert_eq!(SquareClass::of_rational(&q(3, 8)).unwrap().kernel(), &BigInt::from(6));
        assert!(SquareClass::of_integer(&BigInt::zero()).is_err());
        assert!(SquareClass::from_kernel(&BigInt::from(12)).is_err());
    }

    #[test]
    fn large_kernel() {
        // (2^61-1)^3 * 3^2
        let p = BigInt::from((1u64 << 61) - 1);
        let n = &p * &p * &p * 9;
        assert_eq!(squarefree_kernel(&n).unwrap(), p);
        // (2^61-1)^3 * (2^31-1) * 5^2
        let r = BigInt::from((1u64 << 31) - 1);
        let n = &p * &p * &p * &r * 25;
        assert_eq!(squarefree_kernel(&n).unwrap(), &p * &r);
        let f = factorize(&(BigUint::from(1000003u64 * 998244353u64) * BigUint::from(1000000007u64)));
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn independence() {
        assert!(classes_independent(&[cls(2), cls(3), cls(5)]));
        assert!(!classes_independent(&[cls(2), cls(3), cls(6)]));
        assert!(!classes_independent(&[cls(2), cls(8)]));
        assert!(!classes_independent(&[cls(1)]));
        assert!(classes_independent(&[cls(-1), cls(-2), cls(3)]));
        assert!(!classes_independent(&[cls(-1), cls(-3), cls(3)]));
    }

    #[test]
    fn extend_is_pure() {
        let b = SquareClassBasis::new().extend(&cls(3)).unwrap();
        assert!(b.extend(&cls(12)).is_none());
        let b2 = b.extend(&cls(10)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b2.len(), 2);
        assert!(b2.in_span(&cls(30)));
    }

    // brute-force span membership by enumerating all subset products
    fn brute_independent(v: &[i64]) -> bool {
        let n = v.len();
        for mask in 1u32..(1 << n) {
            let mut acc = cls(1);
            for (i, x) in v.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = acc.mul(&cls(*x));
                }
            }
            if acc.is_trivial() {
                return false;
            }
        }
        true
    }

    proptest! {
        #[test]
        fn matches_subset_products(v in proptest::collection::vec(
            prop_oneof![-60i64..-1, 1i64..60], 1..6)) {
            let classes: Vec<_> = v.iter().map(|x| cls(*x)).collect();
            prop_assert_eq!(classes_independent(&classes), brute_independent(&v));
        }

        #[test]
        fn order_independent(mut v in proptest::collection::vec(1i64..200, 1..7), seed in any::<u64>()) {
            let a = classes_independent(&v.iter().map(|x| cls(*x)).collect::<Vec<_>>());
            let k = (seed as usize) % v.len();
            v.rotate_left(k);
            v.reverse();
            let b = classes_independent(&v.iter().map(|x| cls(*x)).collect::<Vec<_>>());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn kernel_is_class_invariant(a in 1i64..500, s in 1i64..40, neg in any::<bool>()) {
            let a = if neg { -a } else { a };
            prop_assert_eq!(cls(a).kernel().clone(), cls(a * s * s).kernel().clone());
            prop_assert!(is_squarefree(cls(a).kernel()));
        }
    }
}
