use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{format_rational, int, Rational};

/// `a + b√v` in the quadratic extension Q_p(√v). Since `v` is not a square in
/// Q_p this is a field and the norm `a² - v b²` vanishes only at zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QExtElem {
    pub a: Rational,
    pub b: Rational,
    v: i64,
}

impl QExtElem {
    pub fn new(a: Rational, b: Rational, v: i64) -> Self {
        QExtElem { a, b, v }
    }

    pub fn from_base(a: Rational, v: i64) -> Self {
        Self::new(a, Rational::zero(), v)
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.v)
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(self.v) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::new(&self.a / &n, -&self.b / &n, self.v))
    }
}

impl fmt::Display for QExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < Rational::zero() { '-' } else { '+' };
        write!(
            f,
            "{} {sign} {}√{}",
            format_rational(&self.a),
            format_rational(&self.b.abs()),
            self.v
        )
    }
}

impl Add for QExtElem {
    type Output = QExtElem;

    fn add(self, o: QExtElem) -> QExtElem {
        debug_assert_eq!(self.v, o.v);
        QExtElem::new(self.a + o.a, self.b + o.b, self.v)
    }
}

impl Sub for QExtElem {
    type Output = QExtElem;

    fn sub(self, o: QExtElem) -> QExtElem {
        debug_assert_eq!(self.v, o.v);
        QExtElem::new(self.a - o.a, self.b - o.b, self.v)
    }
}

impl Mul for QExtElem {
    type Output = QExtElem;

    fn mul(self, o: QExtElem) -> QExtElem {
        debug_assert_eq!(self.v, o.v);
        let v = int(self.v);
        QExtElem::new(
            &self.a * &o.a + v * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            self.v,
        )
    }
}

impl Neg for QExtElem {
    type Output = QExtElem;

    fn neg(self) -> QExtElem {
        QExtElem::new(-self.a, -self.b, self.v)
    }
}
