//! Rotation groups SO(2)_{p,d} and SO(3)_p.
//!
//! A rotation of the plane with form `x² + d y²` is parametrized by a point
//! `α` of the projective line:
//!
//! ```text
//! R_d(α) = [[c, -d s], [s, c]],  c = (1 - dα²)/(1 + dα²),  s = 2α/(1 + dα²)
//! ```
//!
//! with `R_d(∞) = -I`. SO(3)_p is the special orthogonal group of
//! `A₊ = diag(1, -v, p)`; its three coordinate-plane subgroups are copies of
//! SO(2)_{p,d} for `d = -v` (z), `p` (y) and `-p/v` (x).

mod cardano;
mod rot3;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{FormParam, Mat, QuadForm};
use crate::padic::{format_proj, int, parse_proj, PadicApprox, PrimeCtx, ProjPoint, Rational};

pub use cardano::{
    angles_to_quat, axis_matrix, cardano_matrix, cardano_twin, decompose_cardano, Axis,
    Decomposition,
};
pub use rot3::{quat_to_rotation, rotation_to_quat, Rot3};

/// An element of SO(2)_{p,d} together with its parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct So2Elem {
    d: FormParam,
    param: ProjPoint,
    matrix: Mat,
}

impl So2Elem {
    pub fn form(&self) -> FormParam {
        self.d
    }

    pub fn param(&self) -> &ProjPoint {
        &self.param
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
}

/// `(c, s)` of `R_d(α)`; `(-1, 0)` at infinity.
pub(crate) fn cos_sin(d: &Rational, alpha: &ProjPoint) -> (Rational, Rational) {
    match alpha {
        ProjPoint::Infinity => (-Rational::one(), Rational::zero()),
        ProjPoint::Finite(a) => {
            let da2 = d * a * a;
            let den = Rational::one() + &da2;
            ((Rational::one() - da2) / &den, int(2) * a / den)
        }
    }
}

pub fn so2_make(ctx: &PrimeCtx, d: FormParam, alpha: ProjPoint) -> So2Elem {
    let dv = d.value(ctx);
    let (c, s) = cos_sin(&dv, &alpha);
    let matrix = Mat::from_rows(vec![vec![c.clone(), -(&dv * &s)], vec![s, c]]).expect("2x2");
    So2Elem {
        d,
        param: alpha,
        matrix,
    }
}

/// Parameter of `R_d(α) R_d(β)`, namely `(α + β)/(1 - dαβ)`.
pub fn so2_compose(ctx: &PrimeCtx, d: FormParam, alpha: &ProjPoint, beta: &ProjPoint) -> ProjPoint {
    let dv = d.value(ctx);
    match (alpha, beta) {
        (ProjPoint::Infinity, ProjPoint::Infinity) => ProjPoint::Finite(Rational::zero()),
        (ProjPoint::Infinity, ProjPoint::Finite(x)) | (ProjPoint::Finite(x), ProjPoint::Infinity) => {
            if x.is_zero() {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(-(Rational::one() / (dv * x)))
            }
        }
        (ProjPoint::Finite(a), ProjPoint::Finite(b)) => {
            let den = Rational::one() - dv * a * b;
            if den.is_zero() {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite((a + b) / den)
            }
        }
    }
}

/// `α` with `R_d(α) = (c, s)`: `s/(1 + c)`, or `∞` when `c = -1`.
pub(crate) fn param_from_cos_sin(c: &Rational, s: &Rational) -> ProjPoint {
    let den = Rational::one() + c;
    if den.is_zero() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(s / den)
    }
}

/// Inverse of [`so2_make`]; fails when `m` is not in SO(2)_{p,d}.
pub fn so2_param(ctx: &PrimeCtx, d: FormParam, m: &Mat) -> Result<ProjPoint> {
    if !QuadForm::Binary(d).is_special_isometry(ctx, m) {
        return Err(Error::NotInGroup(format!("not a rotation of x² + ({d}) y²")));
    }
    Ok(param_from_cos_sin(m.get(0, 0), m.get(1, 0)))
}

/// Nautical angles `(α, β, γ)` of `R_z(α) R_y(β) R_x(γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Angles<T = Rational> {
    pub alpha: ProjPoint<T>,
    pub beta: ProjPoint<T>,
    pub gamma: ProjPoint<T>,
}

impl<T> Angles<T> {
    pub fn new(alpha: ProjPoint<T>, beta: ProjPoint<T>, gamma: ProjPoint<T>) -> Self {
        Angles { alpha, beta, gamma }
    }

    pub fn as_array(&self) -> [&ProjPoint<T>; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|x| !x.is_infinite())
    }
}

impl Angles {
    pub fn finite(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        Angles::new(alpha.into(), beta.into(), gamma.into())
    }

    pub fn zero() -> Self {
        Self::finite(Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `(α, β, γ)` as rationals; fails on an infinite coordinate.
    pub fn finite_values(&self) -> Result<[Rational; 3]> {
        let f = |x: &ProjPoint| x.finite().cloned().ok_or(Error::InfiniteCoordinate);
        Ok([f(&self.alpha)?, f(&self.beta)?, f(&self.gamma)?])
    }
}

impl FromStr for Angles {
    type Err = Error;

    /// `a,b,c` with rational literals or `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Parse(format!("expected three angles `a,b,c`, got `{s}`")));
        };
        Ok(Angles::new(parse_proj(a)?, parse_proj(b)?, parse_proj(c)?))
    }
}

impl fmt::Display for Angles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.as_array().map(format_proj);
        write!(f, "{a},{b},{c}")
    }
}

impl fmt::Display for Angles<PadicApprox> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.as_array().map(|x| match x {
            ProjPoint::Finite(x) => x.to_string(),
            ProjPoint::Infinity => "inf".to_string(),
        });
        write!(f, "{a}; {b}; {c}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    fn fin(x: Rational) -> ProjPoint {
        ProjPoint::Finite(x)
    }

    #[test]
    fn so2_examples() {
        let c = ctx(3);
        for d in FormParam::ALL {
            assert!(so2_make(&c, d, fin(int(0))).matrix().is_identity());
            assert_eq!(
                so2_make(&c, d, ProjPoint::Infinity).matrix(),
                &Mat::identity(2).scale(&int(-1))
            );
        }
        let m = so2_make(&c, FormParam::MinusV, fin(int(1)));
        assert_eq!(m.matrix(), &Mat::from_i64(&[&[0, -1], &[1, 0]]).unwrap());
        assert!(QuadForm::Binary(FormParam::MinusV).is_special_isometry(&c, m.matrix()));
    }

    #[test]
    fn composition_matches_matrix_product() {
        let c = ctx(5);
        let pts = [
            fin(int(0)),
            fin(int(1)),
            fin(rat(-2, 3)),
            fin(rat(1, 5)),
            fin(int(7)),
            ProjPoint::Infinity,
        ];
        for d in FormParam::ALL {
            for a in &pts {
                for b in &pts {
                    let prod = so2_make(&c, d, a.clone())
                        .matrix()
                        .mul(so2_make(&c, d, b.clone()).matrix())
                        .unwrap();
                    let composed = so2_compose(&c, d, a, b);
                    assert_eq!(so2_make(&c, d, composed).matrix(), &prod, "{d} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn composition_conventions() {
        let c = ctx(3);
        let d = FormParam::MinusV;
        assert_eq!(so2_compose(&c, d, &fin(int(1)), &fin(int(1))), ProjPoint::Infinity);
        assert_eq!(
            so2_compose(&c, d, &ProjPoint::Infinity, &fin(int(0))),
            ProjPoint::Infinity
        );
        assert_eq!(
            so2_compose(&c, d, &ProjPoint::Infinity, &ProjPoint::Infinity),
            fin(int(0))
        );
        assert_eq!(
            so2_compose(&c, d, &ProjPoint::Infinity, &fin(int(2))),
            fin(rat(-1, 2))
        );
    }

    #[test]
    fn param_round_trip() {
        let c = ctx(7);
        for d in FormParam::ALL {
            for a in [fin(int(0)), fin(rat(3, 7)), fin(int(-49)), ProjPoint::Infinity] {
                let m = so2_make(&c, d, a.clone());
                assert_eq!(so2_param(&c, d, m.matrix()).unwrap(), a);
            }
        }
        let bad = Mat::from_i64(&[&[1, 1], &[0, 1]]).unwrap();
        assert!(so2_param(&c, FormParam::P, &bad).is_err());
    }

    #[test]
    fn angle_literals() {
        let a: Angles = "1,-1/2,inf".parse().unwrap();
        assert_eq!(a.gamma, ProjPoint::Infinity);
        assert_eq!(a.to_string(), "1,-1/2,inf");
        assert!("1,2".parse::<Angles>().is_err());
        assert!(a.finite_values().is_err());
    }
}
