//! Number backends for Q_p.
//!
//! Exact rationals ([`Rational`]) carry every closed-form formula of the
//! library; they are viewed as elements of Q_p through the dense embedding
//! Q ⊂ Q_p. Truncated p-adic expansions ([`PadicApprox`]) are only needed
//! where a square root may leave Q.

mod approx;
mod literal;

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use approx::{hensel_sqrt, hensel_sqrt_rational, to_approx, PadicApprox};
pub use literal::{format_proj, format_rational, parse_padic, parse_proj, parse_rational};

/// Exact rational number; zero is `0/1` and the denominator is positive.
pub type Rational = BigRational;

/// Builds `n/d` from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// p-adic valuation; `Infinity` is the valuation of zero and compares greater
/// than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// A point of the projective line Q_p ∪ {∞}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint<T = Rational> {
    Finite(T),
    Infinity,
}

impl<T> ProjPoint<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_proj(self))
    }
}

impl From<Rational> for ProjPoint {
    fn from(x: Rational) -> Self {
        ProjPoint::Finite(x)
    }
}

/// Coset of Q_p^× modulo squares, with representatives {1, u, p, up}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareClass {
    One,
    U,
    P,
    UP,
}

impl SquareClass {
    fn from_parts(non_residue: bool, odd: bool) -> Self {
        match (non_residue, odd) {
            (false, false) => SquareClass::One,
            (true, false) => SquareClass::U,
            (false, true) => SquareClass::P,
            (true, true) => SquareClass::UP,
        }
    }

    fn parts(self) -> (bool, bool) {
        match self {
            SquareClass::One => (false, false),
            SquareClass::U => (true, false),
            SquareClass::P => (false, true),
            SquareClass::UP => (true, true),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SquareClass::One => "One",
            SquareClass::U => "U",
            SquareClass::P => "P",
            SquareClass::UP => "UP",
        }
    }
}

/// Klein four-group law.
impl Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, rhs: SquareClass) -> SquareClass {
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        SquareClass::from_parts(a ^ c, b ^ d)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An odd prime together with its canonical units.
///
/// `u` is the smallest positive quadratic non-residue mod p and
/// `v = -1` for p ≡ 3 (mod 4), `v = -u` for p ≡ 1 (mod 4). In both cases
/// `v` is a non-square unit, which is what makes every form of the catalog
/// anisotropic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeCtx {
    p: u64,
    u: u64,
    v: i64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl PrimeCtx {
    /// Canonical units for an odd prime `p`.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p as i128));
        }
        let u = (2..p)
            .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
            .expect("every odd prime has a non-residue");
        let v = if p % 4 == 3 { -1 } else { -(u as i64) };
        Ok(PrimeCtx { p, u, v })
    }

    /// Same as [`PrimeCtx::new`] but accepts any signed input, rejecting
    /// non-positive values as non-primes.
    pub fn from_signed(p: i128) -> Result<Self> {
        if p <= 0 || p > u64::MAX as i128 {
            return Err(Error::NotOddPrime(p));
        }
        Self::new(p as u64)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn p_int(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn p_rat(&self) -> Rational {
        Rational::from_integer(self.p_int())
    }

    pub fn u_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.u))
    }

    pub fn v_rat(&self) -> Rational {
        int(self.v)
    }

    /// `p^k` for any integer `k`.
    pub fn p_pow(&self, k: i64) -> Rational {
        let base = BigInt::from(self.p).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Rational::from_integer(base)
        } else {
            Rational::new(BigInt::one(), base)
        }
    }

    fn int_valuation(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let p = self.p_int();
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    }

    /// Exact p-adic valuation.
    pub fn valuation(&self, x: &Rational) -> Valuation {
        if x.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.int_valuation(x.numer()) - self.int_valuation(x.denom()))
        }
    }

    /// Valuation of a value known to be nonzero.
    pub(crate) fn val(&self, x: &Rational) -> i64 {
        self.valuation(x)
            .finite()
            .expect("valuation of a nonzero value")
    }

    /// `|x|_p = p^{-v_p(x)}`, with `|0|_p = 0`.
    pub fn abs_p(&self, x: &Rational) -> Rational {
        match self.valuation(x) {
            Valuation::Finite(v) => self.p_pow(-v),
            Valuation::Infinity => Rational::zero(),
        }
    }

    /// Splits a nonzero `x` as `p^k * w` with `w` a p-adic unit.
    pub fn unit_part(&self, x: &Rational) -> (i64, Rational) {
        let k = self.val(x);
        (k, x * self.p_pow(-k))
    }

    /// Residue of a rational lying in Z_p, as an integer in `[0, p)`.
    pub fn residue(&self, x: &Rational) -> Option<u64> {
        self.residue_mod(x, 1)
            .map(|r| r.to_u64().expect("residue below p"))
    }

    /// Residue of an element of Z_p modulo `p^k`; `None` when `x` is not
    /// p-integral.
    pub fn residue_mod(&self, x: &Rational, k: u32) -> Option<BigUint> {
        if x.is_zero() {
            return Some(BigUint::zero());
        }
        if self.int_valuation(x.denom()) > 0 {
            return None;
        }
        let modulus = BigInt::from(self.p).pow(k);
        let inv = x
            .denom()
            .modinv(&modulus)
            .expect("denominator coprime to p");
        let r = (x.numer() * inv).mod_floor(&modulus);
        Some(r.to_biguint().expect("non-negative residue"))
    }

    /// Euler criterion on a p-adic unit.
    fn is_residue_unit(&self, w: &Rational) -> bool {
        let r = self.residue(w).expect("unit is p-integral");
        pow_mod(r, (self.p - 1) / 2, self.p) == 1
    }

    /// Class of `x` in Q_p^×/(Q_p^×)²: parity of the valuation and the
    /// quadratic character of the unit part.
    pub fn square_class(&self, x: &Rational) -> Result<SquareClass> {
        if x.is_zero() {
            return Err(Error::Zero("square class of zero"));
        }
        let (k, w) = self.unit_part(x);
        Ok(SquareClass::from_parts(!self.is_residue_unit(&w), k.rem_euclid(2) == 1))
    }
}

/// Positive rational square root when both numerator and denominator are
/// perfect squares.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(x.numer())?, root(x.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(ctx(3).valuation(&int(9)), Valuation::Finite(2));
        assert_eq!(ctx(3).valuation(&rat(1, 3)), Valuation::Finite(-1));
        assert_eq!(ctx(5).valuation(&int(10)), Valuation::Finite(1));
        assert_eq!(ctx(5).valuation(&int(0)), Valuation::Infinity);
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinity);
    }

    #[test]
    fn absolute_values() {
        assert_eq!(ctx(3).abs_p(&int(9)), rat(1, 9));
        assert_eq!(ctx(7).abs_p(&int(0)), int(0));
        assert_eq!(ctx(3).abs_p(&rat(10, 9)), int(9));
    }

    #[test]
    fn square_classes() {
        let c = ctx(3);
        assert_eq!(c.square_class(&int(4)).unwrap(), SquareClass::One);
        assert_eq!(c.square_class(&int(2)).unwrap(), SquareClass::U);
        assert_eq!(c.square_class(&int(3)).unwrap(), SquareClass::P);
        assert_eq!(ctx(5).square_class(&int(10)).unwrap(), SquareClass::UP);
        assert_eq!(c.square_class(&int(0)), Err(Error::Zero("square class of zero")));
    }

    #[test]
    fn canonical_units() {
        let c3 = ctx(3);
        assert_eq!((c3.u(), c3.v()), (2, -1));
        let c7 = ctx(7);
        assert_eq!((c7.u(), c7.v()), (3, -1));
        let c5 = ctx(5);
        assert_eq!((c5.u(), c5.v()), (2, -2));
        assert_eq!(PrimeCtx::new(9), Err(Error::NotOddPrime(9)));
        assert_eq!(PrimeCtx::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(PrimeCtx::from_signed(-3), Err(Error::NotOddPrime(-3)));
    }

    #[test]
    fn v_is_never_a_square() {
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 97, 101] {
            let c = ctx(p);
            assert_eq!(c.square_class(&c.v_rat()).unwrap(), SquareClass::U, "p = {p}");
            assert_eq!(c.square_class(&c.u_rat()).unwrap(), SquareClass::U, "p = {p}");
        }
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&int(0)), Some(int(0)));
        assert_eq!(rational_sqrt(&int(-4)), None);
    }

    #[test]
    fn residues() {
        let c = ctx(3);
        assert_eq!(c.residue(&rat(1, 2)), Some(2));
        assert_eq!(c.residue(&rat(1, 3)), None);
        assert_eq!(c.residue_mod(&int(-1), 3), Some(BigUint::from(26u32)));
    }
}
