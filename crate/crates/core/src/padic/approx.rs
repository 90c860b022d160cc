use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{pow_mod, PrimeCtx, Rational, SquareClass, Valuation};
use crate::error::{Error, Result};

/// A p-adic number known to `precision` significant digits:
/// `p^valuation * mantissa + O(p^(valuation + precision))`, or an exact zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    p: u64,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Known {
        valuation: i64,
        mantissa: BigUint,
        precision: u32,
    },
}

fn p_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

impl PadicApprox {
    pub fn zero(p: u64) -> Self {
        PadicApprox { p, repr: Repr::Zero }
    }

    /// Normalizing constructor: strips factors of p from the mantissa, which
    /// raises the valuation and uses up significant digits.
    pub fn new(p: u64, valuation: i64, mantissa: BigUint, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionExhausted);
        }
        let mut m = mantissa % p_pow(p, precision);
        if m.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        let pb = BigUint::from(p);
        let mut valuation = valuation;
        let mut precision = precision;
        while (&m % &pb).is_zero() {
            m /= &pb;
            valuation += 1;
            precision -= 1;
        }
        Ok(PadicApprox {
            p,
            repr: Repr::Known {
                valuation,
                mantissa: m,
                precision,
            },
        })
    }

    /// Builds `p^valuation * Σ d_i p^i` from little-endian digits.
    pub fn from_digits(p: u64, valuation: i64, digits: &[u64]) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(Error::Parse(format!("digit out of range for p = {p}")));
        }
        let mantissa = digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * p + d);
        Self::new(p, valuation, mantissa, digits.len() as u32)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinity,
            Repr::Known { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// Number of significant digits; `None` for the exact zero.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Known { precision, .. } => Some(*precision),
        }
    }

    pub fn mantissa(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Known { mantissa, .. } => Some(mantissa),
        }
    }

    /// Exponent of the first unknown digit.
    pub fn absolute_precision(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinity,
            Repr::Known {
                valuation,
                precision,
                ..
            } => Valuation::Finite(valuation + *precision as i64),
        }
    }

    /// Little-endian base-p digits of the mantissa, exactly `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero => Vec::new(),
            Repr::Known {
                mantissa,
                precision,
                ..
            } => {
                let pb = BigUint::from(self.p);
                let mut m = mantissa.clone();
                (0..*precision)
                    .map(|_| {
                        let (q, r) = m.div_rem(&pb);
                        m = q;
                        r.to_u64().expect("digit below p")
                    })
                    .collect()
            }
        }
    }

    /// The rational `p^valuation * mantissa` (the truncated expansion).
    pub fn to_rational(&self) -> Rational {
        match &self.repr {
            Repr::Zero => Rational::zero(),
            Repr::Known {
                valuation,
                mantissa,
                ..
            } => {
                let m = Rational::from_integer(BigInt::from(mantissa.clone()));
                let scale = BigInt::from(self.p).pow(valuation.unsigned_abs() as u32);
                if *valuation >= 0 {
                    m * Rational::from_integer(scale)
                } else {
                    m / Rational::from_integer(scale)
                }
            }
        }
    }

    /// True when `x` agrees with this value to every known digit.
    pub fn agrees_with(&self, x: &Rational) -> bool {
        let ctx = self.ctx();
        match self.absolute_precision() {
            Valuation::Infinity => x.is_zero(),
            abs => ctx.valuation(&(x - self.to_rational())) >= abs,
        }
    }

    /// Equality up to the smaller of the two absolute precisions.
    pub fn approx_eq(&self, other: &PadicApprox) -> bool {
        if self.p != other.p {
            return false;
        }
        let abs = self.absolute_precision().min(other.absolute_precision());
        let diff = self.to_rational() - other.to_rational();
        self.ctx().valuation(&diff) >= abs
    }

    fn ctx(&self) -> PrimeCtx {
        PrimeCtx::new(self.p).expect("approximations are built over odd primes")
    }

    fn check_prime(&self, other: &PadicApprox) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn neg(&self) -> PadicApprox {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Known {
                valuation,
                mantissa,
                precision,
            } => {
                let modulus = p_pow(self.p, *precision);
                PadicApprox {
                    p: self.p,
                    repr: Repr::Known {
                        valuation: *valuation,
                        mantissa: &modulus - mantissa,
                        precision: *precision,
                    },
                }
            }
        }
    }

    /// Sum; the result keeps only the digits known in both operands, so
    /// cancellation costs precision.
    pub fn add(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.check_prime(other)?;
        let (
            Repr::Known {
                valuation: v1,
                mantissa: m1,
                precision: n1,
            },
            Repr::Known {
                valuation: v2,
                mantissa: m2,
                precision: n2,
            },
        ) = (&self.repr, &other.repr)
        else {
            return Ok(if self.is_zero() { other.clone() } else { self.clone() });
        };
        let base = (*v1).min(*v2);
        let abs = (v1 + *n1 as i64).min(v2 + *n2 as i64);
        let width = (abs - base) as u32;
        let modulus = p_pow(self.p, width);
        let s = (m1 * p_pow(self.p, (v1 - base) as u32) + m2 * p_pow(self.p, (v2 - base) as u32))
            % &modulus;
        Self::new(self.p, base, s, width)
    }

    pub fn sub(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.check_prime(other)?;
        match (&self.repr, &other.repr) {
            (
                Repr::Known {
                    valuation: v1,
                    mantissa: m1,
                    precision: n1,
                },
                Repr::Known {
                    valuation: v2,
                    mantissa: m2,
                    precision: n2,
                },
            ) => {
                let n = (*n1).min(*n2);
                Self::new(self.p, v1 + v2, m1 * m2, n)
            }
            _ => Ok(Self::zero(self.p)),
        }
    }

    pub fn inv(&self) -> Result<PadicApprox> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Known {
                valuation,
                mantissa,
                precision,
            } => {
                let modulus = p_pow(self.p, *precision);
                let inv = mantissa
                    .modinv(&modulus)
                    .expect("mantissa is a unit");
                Self::new(self.p, -valuation, inv, *precision)
            }
        }
    }

    pub fn div(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.mul(&other.inv()?)
    }

    /// Square class of a nonzero value; needs one known digit.
    pub fn square_class(&self) -> Result<SquareClass> {
        match &self.repr {
            Repr::Zero => Err(Error::Zero("square class of zero")),
            Repr::Known {
                valuation,
                mantissa,
                ..
            } => {
                let r = (mantissa % self.p).to_u64().expect("residue below p");
                let nr = pow_mod(r, (self.p - 1) / 2, self.p) != 1;
                Ok(SquareClass::from_parts(nr, valuation.rem_euclid(2) == 1))
            }
        }
    }
}

impl fmt::Display for PadicApprox {
    /// `p^v * [d0,d1,...]`, or `0` for the exact zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation() {
            Valuation::Infinity => f.write_str("0"),
            Valuation::Finite(v) => {
                let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
                write!(f, "{}^{} * [{}]", self.p, v, digits.join(","))
            }
        }
    }
}

/// Expansion of `x` to `n` significant digits.
pub fn to_approx(x: &Rational, ctx: &PrimeCtx, n: u32) -> Result<PadicApprox> {
    if x.is_zero() {
        return Ok(PadicApprox::zero(ctx.p()));
    }
    let (k, w) = ctx.unit_part(x);
    let m = ctx.residue_mod(&w, n).expect("unit part is p-integral");
    PadicApprox::new(ctx.p(), k, m, n)
}

/// Square root mod p of a quadratic residue `a`.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if a == 0 {
        return 0;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("non-residue exists");
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    r
}

/// Canonical square root by Hensel lifting.
///
/// The result `r` satisfies `r² ≡ a` to the precision of `a`; of the two roots
/// the one whose leading digit lies in `1..=(p-1)/2` is returned. The other
/// root is `-r`.
pub fn hensel_sqrt(a: &PadicApprox) -> Result<PadicApprox> {
    let p = a.p();
    let Repr::Known {
        valuation,
        mantissa,
        precision,
    } = &a.repr
    else {
        return Ok(a.clone());
    };
    let class = a.square_class()?;
    if class != SquareClass::One {
        return Err(Error::NotASquare(class));
    }
    let n = *precision;
    let modulus = p_pow(p, n);
    let r0 = tonelli_shanks((mantissa % p).to_u64().expect("residue below p"), p);
    let mut r = BigUint::from(r0);
    let mut known = 1u32;
    // Newton step r <- r - (r^2 - a) / (2r), doubling the known digits.
    while known < n {
        known = (2 * known).min(n);
        let m = p_pow(p, known);
        let a_k = mantissa % &m;
        let two_r = (&r * 2u32) % &m;
        let inv = two_r.modinv(&m).expect("2r is a unit");
        let r2 = (&r * &r) % &m;
        let delta = ((r2 + &m - a_k) % &m * inv) % &m;
        r = (&r + &m - delta) % &m;
    }
    r %= &modulus;
    let lead = (&r % p).to_u64().expect("digit below p");
    if lead > (p - 1) / 2 {
        r = &modulus - r;
    }
    debug_assert!((&r * &r) % &modulus == mantissa % &modulus);
    PadicApprox::new(p, valuation / 2, r, n)
}

/// [`hensel_sqrt`] of an exact rational expanded to `n` digits.
pub fn hensel_sqrt_rational(a: &Rational, ctx: &PrimeCtx, n: u32) -> Result<PadicApprox> {
    hensel_sqrt(&to_approx(a, ctx, n)?)
}
