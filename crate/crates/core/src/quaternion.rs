//! The division quaternion algebra H_p over Q_p.
//!
//! H_p has basis `1, i, j, k = ij` with `i² = v`, `j² = -p` and `ji = -ij`.
//! Its reduced norm is the anisotropic quaternary form
//! `q0² - v q1² + p q2² - vp q3²`, so every nonzero quaternion is invertible.
//! Conjugation by `ξ` fixes the scalars and acts on the pure quaternions
//! (trace zero) by a rotation, which is how rotations of Q_p³ arise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Mat, QExtElem, QuadForm};
use crate::padic::{format_rational, int, parse_rational, PrimeCtx, Rational};

/// `e_a · e_b = coeff · e_c` for the basis `(1, i, j, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    table: [[(Rational, usize); 4]; 4],
}

impl StructureConstants {
    pub fn new(ctx: &PrimeCtx) -> Self {
        let (p, v) = (ctx.p_rat(), ctx.v_rat());
        let one = int(1);
        let t = |c: Rational, e: usize| (c, e);
        let table = [
            [t(one.clone(), 0), t(one.clone(), 1), t(one.clone(), 2), t(one.clone(), 3)],
            // i·1, i·i = v, i·j = k, i·k = v j
            [t(one.clone(), 1), t(v.clone(), 0), t(one.clone(), 3), t(v.clone(), 2)],
            // j·1, j·i = -k, j·j = -p, j·k = p i
            [t(one.clone(), 2), t(-&one, 3), t(-&p, 0), t(p.clone(), 1)],
            // k·1, k·i = -v j, k·j = -p i, k·k = vp
            [t(one, 3), t(-&v, 2), t(-&p, 1), t(v * p, 0)],
        ];
        StructureConstants { table }
    }

    pub fn get(&self, a: usize, b: usize) -> (&Rational, usize) {
        let (c, e) = &self.table[a][b];
        (c, *e)
    }
}

/// `q0 + q1 i + q2 j + q3 k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quat {
    q: [Rational; 4],
    ctx: PrimeCtx,
}

impl Quat {
    pub fn new(ctx: &PrimeCtx, q0: Rational, q1: Rational, q2: Rational, q3: Rational) -> Self {
        Quat {
            q: [q0, q1, q2, q3],
            ctx: *ctx,
        }
    }

    pub fn from_coeffs(ctx: &PrimeCtx, q: [Rational; 4]) -> Self {
        Quat { q, ctx: *ctx }
    }

    pub fn from_i64(ctx: &PrimeCtx, q: [i64; 4]) -> Self {
        Self::from_coeffs(ctx, q.map(int))
    }

    pub fn scalar(ctx: &PrimeCtx, x: Rational) -> Self {
        let z = Rational::zero;
        Self::new(ctx, x, z(), z(), z())
    }

    pub fn one(ctx: &PrimeCtx) -> Self {
        Self::scalar(ctx, int(1))
    }

    pub fn i(ctx: &PrimeCtx) -> Self {
        Self::from_i64(ctx, [0, 1, 0, 0])
    }

    pub fn j(ctx: &PrimeCtx) -> Self {
        Self::from_i64(ctx, [0, 0, 1, 0])
    }

    pub fn k(ctx: &PrimeCtx) -> Self {
        Self::from_i64(ctx, [0, 0, 0, 1])
    }

    pub fn ctx(&self) -> &PrimeCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Quat) -> Quat {
        Quat {
            q: std::array::from_fn(|a| &self.q[a] + &o.q[a]),
            ctx: self.ctx,
        }
    }

    pub fn scale(&self, s: &Rational) -> Quat {
        Quat {
            q: std::array::from_fn(|a| &self.q[a] * s),
            ctx: self.ctx,
        }
    }

    /// Product under the structure constants of H_p.
    pub fn mul(&self, o: &Quat) -> Quat {
        let table = StructureConstants::new(&self.ctx);
        let mut out: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        for a in 0..4 {
            if self.q[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if o.q[b].is_zero() {
                    continue;
                }
                let (c, e) = table.get(a, b);
                out[e] += c * &self.q[a] * &o.q[b];
            }
        }
        Quat {
            q: out,
            ctx: self.ctx,
        }
    }

    /// Standard involution `q0 - q1 i - q2 j - q3 k`.
    pub fn conj(&self) -> Quat {
        let [q0, q1, q2, q3] = &self.q;
        Quat::new(&self.ctx, q0.clone(), -q1, -q2, -q3)
    }

    /// Reduced norm `q0² - v q1² + p q2² - vp q3²`.
    pub fn nrd(&self) -> Rational {
        QuadForm::Quaternary
            .eval(&self.ctx, &self.q)
            .expect("four coefficients")
    }

    /// Reduced trace `2 q0`.
    pub fn trd(&self) -> Rational {
        int(2) * &self.q[0]
    }

    pub fn is_pure(&self) -> bool {
        self.q[0].is_zero()
    }

    pub fn has_unit_norm(&self) -> bool {
        self.nrd().is_one()
    }

    pub fn inv(&self) -> Result<Quat> {
        if self.is_zero() {
            return Err(Error::Zero("inverse of the zero quaternion"));
        }
        Ok(self.conj().scale(&(int(1) / self.nrd())))
    }

    /// Left multiplication as a 2×2 matrix over Q_p(√v) in the right
    /// Q_p(√v)-basis `{1, j}`.
    pub fn left_regular(&self) -> Mat<QExtElem> {
        let [q0, q1, q2, q3] = &self.q;
        let v = self.ctx.v();
        let p = self.ctx.p_rat();
        let e = |a: &Rational, b: &Rational| QExtElem::new(a.clone(), b.clone(), v);
        Mat::from_rows(vec![
            vec![e(q0, q1), e(&(-&p * q2), &(-&p * q3))],
            vec![e(q2, &-q3), e(q0, &-q1)],
        ])
        .expect("2x2")
    }

    /// Matrix `K_p(ξ)` of `η ↦ ξ η ξ⁻¹` on the pure quaternions, in the
    /// basis `(i, j, k)`.
    pub fn conj_action_matrix(&self) -> Result<Mat> {
        if self.is_zero() {
            return Err(Error::Zero("conjugation by the zero quaternion"));
        }
        // The action is scale invariant, so work with integer coefficients.
        let den = self.q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let [q0, q1, q2, q3] = self.q.clone().map(|x| (x * Rational::from_integer(den.clone())).to_integer());
        let (p, v) = (BigInt::from(self.ctx.p()), BigInt::from(self.ctx.v()));
        let vp = &v * &p;
        let two = BigInt::from(2);
        let (s0, s1, s2, s3) = (&q0 * &q0, &q1 * &q1, &q2 * &q2, &q3 * &q3);
        let n = &s0 - &v * &s1 + &p * &s2 - &vp * &s3;
        let rows = [
            [
                &s0 - &v * &s1 - &p * &s2 + &vp * &s3,
                &two * &p * (&q1 * &q2 - &q0 * &q3),
                &two * &p * (&q0 * &q2 - &v * &q1 * &q3),
            ],
            [
                -&two * &v * (&q0 * &q3 + &q1 * &q2),
                &s0 + &v * &s1 + &p * &s2 + &vp * &s3,
                &two * &v * (&q0 * &q1 - &p * &q2 * &q3),
            ],
            [
                -&two * (&q0 * &q2 + &v * &q1 * &q3),
                &two * (&q0 * &q1 + &p * &q2 * &q3),
                &s0 + &v * &s1 - &p * &s2 - &vp * &s3,
            ],
        ];
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| Rational::new(x, n.clone())).collect())
                .collect(),
        )
    }

    /// True when `o = λ ξ` for a nonzero scalar `λ`.
    pub fn proportional(&self, o: &Quat) -> Result<bool> {
        if self.is_zero() || o.is_zero() {
            return Err(Error::Zero("proportionality with the zero quaternion"));
        }
        Ok((0..4).all(|a| (a + 1..4).all(|b| &self.q[a] * &o.q[b] == &self.q[b] * &o.q[a])))
    }

    /// JSON form `[q0, q1, q2, q3]` with rational literals as strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.q
                .iter()
                .map(|x| serde_json::Value::String(format_rational(x)))
                .collect(),
        )
    }

    pub fn from_json(ctx: &PrimeCtx, v: &serde_json::Value) -> Result<Quat> {
        let bad = || Error::Parse("quaternion must be an array of four numbers".into());
        let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(bad)?;
        let q = arr
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        let q: [Rational; 4] = q.try_into().map_err(|_| bad())?;
        Ok(Quat::from_coeffs(ctx, q))
    }

    /// Parses `q0 + q1 i + q2 j + q3 k`; terms may appear in any order or be
    /// omitted, and a bare unit means coefficient 1.
    pub fn parse(ctx: &PrimeCtx, s: &str) -> Result<Quat> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quaternion literal".into()));
        }
        let mut q: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        let chars: Vec<char> = compact.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let mut negative = false;
            let mut saw_sign = false;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                negative ^= chars[pos] == '-';
                saw_sign = true;
                pos += 1;
            }
            if pos > 0 && !saw_sign {
                return Err(Error::Parse(format!("expected `+` or `-` in `{s}`")));
            }
            let start = pos;
            while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                pos += 1;
            }
            let term: String = chars[start..pos].iter().collect();
            let (coef, unit) = match term.chars().last() {
                Some('i') => (&term[..term.len() - 1], 1),
                Some('j') => (&term[..term.len() - 1], 2),
                Some('k') => (&term[..term.len() - 1], 3),
                Some(_) => (term.as_str(), 0),
                None => return Err(Error::Parse(format!("dangling sign in `{s}`"))),
            };
            let coef = match coef.strip_suffix('*').unwrap_or(coef) {
                "" if unit > 0 => int(1),
                c => parse_rational(c)?,
            };
            q[unit] += if negative { -coef } else { coef };
        }
        Ok(Quat::from_coeffs(ctx, q))
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.q[0]))?;
        for (x, unit) in self.q[1..].iter().zip(["i", "j", "k"]) {
            let sign = if x < &Rational::zero() { '-' } else { '+' };
            write!(f, " {sign} {} {unit}", format_rational(&x.abs()))?;
        }
        Ok(())
    }
}
