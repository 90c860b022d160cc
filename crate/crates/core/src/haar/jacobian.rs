//! Jacobian of the chart `(α, β, γ) ↦ (x1, x2, x3)` with
//!
//! ```text
//! x1 = ((p/v)βγ - α)/(1 - pαβγ),  x2 = (β - αγ)/(1 - pαβγ),
//! x3 = (γ/v - αβ)/(1 - pαβγ),
//! ```
//!
//! i.e. the quaternion of the angles in the `q0 = 1` chart. The Haar weight on
//! SO(3)_p is `|det J|_p / |Q₊⁽⁴⁾(1, x)|_p²`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Mat, QuadForm};
use crate::padic::{PrimeCtx, Rational};
use crate::rotation::Angles;

/// The chart point `(x1, x2, x3)`.
pub fn chart_point(ctx: &PrimeCtx, angles: &Angles) -> Result<[Rational; 3]> {
    let [a, b, g] = angles.finite_values()?;
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let q0 = Rational::one() - &p * &a * &b * &g;
    if q0.is_zero() {
        return Err(Error::SingularLocus);
    }
    Ok([
        (&p / &v * &b * &g - &a) / &q0,
        (&b - &a * &g) / &q0,
        (&g / &v - &a * &b) / &q0,
    ])
}

/// The nine partial derivatives `∂x_i/∂(α, β, γ)_j`, written with
/// `D = -1 + pαβγ`.
///
/// The sign of the first term of `J₃₁` is the one obtained by differentiating
/// `x3`; the printed literature value has it flipped.
pub fn jacobian_matrix(ctx: &PrimeCtx, angles: &Angles) -> Result<Mat> {
    let [a, b, g] = angles.finite_values()?;
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let dd = -Rational::one() + &p * &a * &b * &g;
    if dd.is_zero() {
        return Err(Error::SingularLocus);
    }
    let d2 = &dd * &dd;
    let one = Rational::one();
    let u1 = &v * &a - &p * &b * &g; // vα - pβγ
    let u2 = &b - &a * &g; // β - αγ
    let u3 = &v * &a * &b - &g; // vαβ - γ
    let rows = vec![
        vec![
            -(&p * &b * &g * &u1) / (&v * &d2) + &one / &dd,
            -(&p * &a * &g * &u1) / (&v * &d2) - &p * &g / (&v * &dd),
            -(&p * &a * &b * &u1) / (&v * &d2) - &p * &b / (&v * &dd),
        ],
        vec![
            &p * &b * &g * &u2 / &d2 + &g / &dd,
            &p * &a * &g * &u2 / &d2 - &one / &dd,
            &p * &a * &b * &u2 / &d2 + &a / &dd,
        ],
        vec![
            -(&p * &b * &u3 * &g) / (&v * &d2) + &b / &dd,
            -(&p * &a * &u3 * &g) / (&v * &d2) + &a / &dd,
            -(&p * &a * &b * &u3) / (&v * &d2) - &one / (&v * &dd),
        ],
    ];
    Mat::from_rows(rows)
}

/// `-(pβ² - 1)(vα² - 1)(v - pγ²) / (v² (pαβγ - 1)⁴)`.
pub fn jacobian_det_closed(ctx: &PrimeCtx, angles: &Angles) -> Result<Rational> {
    let [a, b, g] = angles.finite_values()?;
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let one = Rational::one();
    let dd = &p * &a * &b * &g - &one;
    if dd.is_zero() {
        return Err(Error::SingularLocus);
    }
    let num = (&p * &b * &b - &one) * (&v * &a * &a - &one) * (&v - &p * &g * &g);
    Ok(-num / (&v * &v * dd.pow(4)))
}

/// The four mutually consistent forms of the SO(3)_p Haar weight at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianWeight {
    /// `|det J|_p` from the nine entries.
    pub direct: Rational,
    /// `|det J|_p` from the closed form.
    pub closed: Rational,
    /// `direct / |Q₊⁽⁴⁾(1, x1, x2, x3)|_p²`.
    pub quotient: Rational,
    /// `|(1 - pβ²)/(1 + pβ²) / ((1 - vα²)(1 + pβ²)(1 - (p/v)γ²))|_p`.
    pub weight: Rational,
}

impl JacobianWeight {
    pub fn is_consistent(&self) -> bool {
        self.direct == self.closed && self.quotient == self.weight
    }
}

pub fn jacobian_weight(ctx: &PrimeCtx, angles: &Angles) -> Result<JacobianWeight> {
    let [a, b, g] = angles.finite_values()?;
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let one = Rational::one();
    let direct = ctx.abs_p(&jacobian_matrix(ctx, angles)?.det());
    let closed = ctx.abs_p(&jacobian_det_closed(ctx, angles)?);
    let [x1, x2, x3] = chart_point(ctx, angles)?;
    let q = QuadForm::Quaternary.eval(ctx, &[one.clone(), x1, x2, x3])?;
    let q_abs = ctx.abs_p(&q);
    let quotient = &direct / (&q_abs * &q_abs);
    let pb2 = &p * &b * &b;
    let w = (&one - &pb2)
        / ((&one + &pb2)
            * (&one - &v * &a * &a)
            * (&one + &pb2)
            * (&one - &p / &v * &g * &g));
    Ok(JacobianWeight {
        direct,
        closed,
        quotient,
        weight: ctx.abs_p(&w),
    })
}
