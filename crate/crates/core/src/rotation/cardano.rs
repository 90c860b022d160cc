//! Nautical angles: `R(α, β, γ) = R_z(α) R_y(β) R_x(γ)`.
//!
//! The map from angle triples to SO(3)_p is 2-to-1 away from the axes: the
//! triple `(1/(vα), 1/(pβ), v/(pγ))` gives the same rotation (see
//! [`cardano_twin`]). Decomposition returns the representative with
//! `β ∈ Z_p`, which corresponds to `cos β ≡ 1 (mod p)`.

use std::fmt;

use num_traits::{One, Zero};

use super::{cos_sin, param_from_cos_sin, Angles, Rot3};
use crate::error::{Error, Result};
use crate::linalg::{FormParam, Mat};
use crate::padic::{
    hensel_sqrt_rational, rational_sqrt, to_approx, PadicApprox, PrimeCtx, ProjPoint, Rational,
    Valuation,
};
use crate::quaternion::Quat;

/// Reference axis of a coordinate-plane rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Z,
    Y,
    X,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

    /// The binary form whose rotation group is this axis subgroup.
    pub fn form(self) -> FormParam {
        match self {
            Axis::Z => FormParam::MinusV,
            Axis::Y => FormParam::P,
            Axis::X => FormParam::MinusPOverV,
        }
    }

    /// Coordinates of the rotated plane.
    fn plane(self) -> (usize, usize) {
        match self {
            Axis::Z => (0, 1),
            Axis::Y => (0, 2),
            Axis::X => (1, 2),
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "z" => Ok(Axis::Z),
            "y" => Ok(Axis::Y),
            "x" => Ok(Axis::X),
            other => Err(Error::Parse(format!("unknown axis `{other}`"))),
        }
    }
}

/// `R_d(α)` embedded in the coordinate plane of `axis`.
pub fn axis_matrix(ctx: &PrimeCtx, axis: Axis, alpha: &ProjPoint) -> Mat {
    let d = axis.form().value(ctx);
    let (c, s) = cos_sin(&d, alpha);
    let (a, b) = axis.plane();
    let mut rows = Mat::identity(3).rows();
    rows[a][a] = c.clone();
    rows[a][b] = -(&d * &s);
    rows[b][a] = s;
    rows[b][b] = c;
    Mat::from_rows(rows).expect("3x3")
}

pub fn cardano_matrix(ctx: &PrimeCtx, angles: &Angles) -> Rot3 {
    let rz = axis_matrix(ctx, Axis::Z, &angles.alpha);
    let ry = axis_matrix(ctx, Axis::Y, &angles.beta);
    let rx = axis_matrix(ctx, Axis::X, &angles.gamma);
    let m = rz.mul(&ry).and_then(|t| t.mul(&rx)).expect("3x3");
    Rot3::from_trusted(ctx, m)
}

/// Quaternion of the axis rotation: `1 - αi`, `1 + βj`, `1 + (γ/v)k`, or the
/// bare unit `i`, `j`, `k` at infinity.
fn axis_quat(ctx: &PrimeCtx, axis: Axis, x: &ProjPoint) -> Quat {
    let z = Rational::zero;
    match (axis, x) {
        (Axis::Z, ProjPoint::Infinity) => Quat::i(ctx),
        (Axis::Y, ProjPoint::Infinity) => Quat::j(ctx),
        (Axis::X, ProjPoint::Infinity) => Quat::k(ctx),
        (Axis::Z, ProjPoint::Finite(a)) => Quat::new(ctx, Rational::one(), -a, z(), z()),
        (Axis::Y, ProjPoint::Finite(b)) => Quat::new(ctx, Rational::one(), z(), b.clone(), z()),
        (Axis::X, ProjPoint::Finite(g)) => {
            Quat::new(ctx, Rational::one(), z(), z(), g / ctx.v_rat())
        }
    }
}

/// A quaternion `ξ` with `T_p(ξ) = R(α, β, γ)`.
///
/// For finite angles this is `(1 - pαβγ, (p/v)βγ - α, β - αγ, γ/v - αβ)`,
/// which is never zero; infinite coordinates go through the product of the
/// axis quaternions.
pub fn angles_to_quat(ctx: &PrimeCtx, angles: &Angles) -> Quat {
    match angles.finite_values() {
        Ok([a, b, g]) => {
            let (p, v) = (ctx.p_rat(), ctx.v_rat());
            Quat::new(
                ctx,
                Rational::one() - &p * &a * &b * &g,
                &p / &v * &b * &g - &a,
                &b - &a * &g,
                &g / &v - &a * &b,
            )
        }
        Err(_) => Axis::ALL
            .iter()
            .zip(angles.as_array())
            .map(|(&axis, x)| axis_quat(ctx, axis, x))
            .reduce(|acc, q| acc.mul(&q))
            .expect("three factors"),
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decomposition::Exact(a) => a.fmt(f),
            Decomposition::Approx(a) => a.fmt(f),
        }
    }
}

/// `λ ↦ c/(kλ)` on the projective line, exchanging 0 and ∞.
fn reciprocal(x: &ProjPoint, c: &Rational) -> ProjPoint {
    match x {
        ProjPoint::Infinity => ProjPoint::Finite(Rational::zero()),
        ProjPoint::Finite(x) if x.is_zero() => ProjPoint::Infinity,
        ProjPoint::Finite(x) => ProjPoint::Finite(c / x),
    }
}

/// The other angle triple with the same rotation: `(1/(vα), 1/(pβ), v/(pγ))`.
///
/// It comes from the opposite sign of `cos β`; both blocks `R_z` and `R_x`
/// then flip by `-I`, which is the parameter change `α ↦ -1/(dα)`.
pub fn cardano_twin(ctx: &PrimeCtx, angles: &Angles) -> Angles {
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    Angles::new(
        reciprocal(&angles.alpha, &(Rational::one() / &v)),
        reciprocal(&angles.beta, &(Rational::one() / &p)),
        reciprocal(&angles.gamma, &(&v / &p)),
    )
}

/// Result of [`decompose_cardano`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    /// `cos β` was rational; the angles are exact.
    Exact(Angles),
    /// `cos β` needed a Hensel square root; the angles are p-adic
    /// approximations.
    Approx(Angles<PadicApprox>),
}

impl Decomposition {
    pub fn is_exact(&self) -> bool {
        matches!(self, Decomposition::Exact(_))
    }

    pub fn exact(&self) -> Option<&Angles> {
        match self {
            Decomposition::Exact(a) => Some(a),
            Decomposition::Approx(_) => None,
        }
    }

    /// The exact angles, or the truncated expansions of the approximate ones.
    pub fn to_rational(&self) -> Angles {
        match self {
            Decomposition::Exact(a) => a.clone(),
            Decomposition::Approx(a) => {
                let f = |x: &ProjPoint<PadicApprox>| match x {
                    ProjPoint::Finite(x) => ProjPoint::Finite(x.to_rational()),
                    ProjPoint::Infinity => ProjPoint::Infinity,
                };
                Angles::new(f(&a.alpha), f(&a.beta), f(&a.gamma))
            }
        }
    }
}

/// Angles `(α, β, γ)` with `cardano_matrix(α, β, γ) = R`, on the branch
/// `β ∈ Z_p`.
///
/// `sin β = R₃₁` and `cos β = ±√(1 - p R₃₁²)`; the sign with `cos β ≡ 1 (mod
/// p)` is taken. When that root is rational the result is exact and verified
/// by equality; otherwise it is computed to `precision` digits and the exact
/// rotation of the truncated angles must agree with `R` to the precision of
/// the angles.
pub fn decompose_cardano(r: &Rot3, precision: u32) -> Result<Decomposition> {
    let ctx = r.ctx();
    let m = r.matrix();
    let s_beta = m.get(2, 0).clone();
    let radicand = Rational::one() - ctx.p_rat() * &s_beta * &s_beta;
    match rational_sqrt(&radicand) {
        Some(root) => decompose_exact(r, &s_beta, root).map(Decomposition::Exact),
        None => decompose_approx(r, &s_beta, &radicand, precision).map(Decomposition::Approx),
    }
}

fn decompose_exact(r: &Rot3, s_beta: &Rational, root: Rational) -> Result<Angles> {
    let ctx = r.ctx();
    let m = r.matrix();
    // root² ≡ 1 (mod p), so exactly one of ±root is ≡ 1.
    let c_beta = if ctx.residue(&root) == Some(1) { root } else { -root };
    let beta = param_from_cos_sin(&c_beta, s_beta);
    let alpha = param_from_cos_sin(&(m.get(0, 0) / &c_beta), &(m.get(1, 0) / &c_beta));
    let gamma = param_from_cos_sin(&(m.get(2, 2) / &c_beta), &(m.get(2, 1) / &c_beta));
    let angles = Angles::new(alpha, beta, gamma);
    if cardano_matrix(ctx, &angles) != *r {
        return Err(Error::NoConsistentBranch(format!(
            "angles {angles} do not reproduce the rotation"
        )));
    }
    Ok(angles)
}

/// Parameter from approximate `(c, s)` of `R_d`: `s/(1 + c)` when `1 + c` is
/// a unit, else `(1 - c)/(d s)`, which is the same number.
fn approx_param(
    c: &PadicApprox,
    s: &PadicApprox,
    d: &PadicApprox,
    one: &PadicApprox,
) -> Result<ProjPoint<PadicApprox>> {
    if let Ok(den) = one.add(c) {
        if den.valuation() == Valuation::Finite(0) {
            return Ok(ProjPoint::Finite(s.div(&den)?));
        }
    }
    let ds = d.mul(s)?;
    if ds.is_zero() {
        return Ok(ProjPoint::Infinity);
    }
    Ok(ProjPoint::Finite(one.sub(c)?.div(&ds)?))
}

fn decompose_approx(
    r: &Rot3,
    s_beta: &Rational,
    radicand: &Rational,
    n: u32,
) -> Result<Angles<PadicApprox>> {
    let ctx = r.ctx();
    let m = r.matrix();
    let ap = |x: &Rational| to_approx(x, ctx, n);
    let one = ap(&Rational::one())?;
    // The canonical Hensel root has leading digit 1 here.
    let c_beta = hensel_sqrt_rational(radicand, ctx, n)?;
    let s_beta = ap(s_beta)?;
    let beta = ProjPoint::Finite(s_beta.div(&one.add(&c_beta)?)?);
    let entry = |i, j| ap(m.get(i, j)).and_then(|x| x.div(&c_beta));
    let alpha = approx_param(
        &entry(0, 0)?,
        &entry(1, 0)?,
        &ap(&FormParam::MinusV.value(ctx))?,
        &one,
    )?;
    let gamma = approx_param(
        &entry(2, 2)?,
        &entry(2, 1)?,
        &ap(&FormParam::MinusPOverV.value(ctx))?,
        &one,
    )?;
    let angles = Angles::new(alpha, beta, gamma);
    verify_approx(r, &angles)?;
    Ok(angles)
}

/// The rotation of the truncated angles must agree with `r` to the absolute
/// precision of the least precise angle.
fn verify_approx(r: &Rot3, angles: &Angles<PadicApprox>) -> Result<()> {
    let ctx = r.ctx();
    let target = angles
        .as_array()
        .iter()
        .filter_map(|x| x.finite())
        .map(PadicApprox::absolute_precision)
        .min()
        .unwrap_or(Valuation::Infinity);
    let truncated = Decomposition::Approx(angles.clone()).to_rational();
    let m = cardano_matrix(ctx, &truncated).matrix().clone();
    let worst = m
        .rows()
        .iter()
        .flatten()
        .zip(r.matrix().rows().iter().flatten())
        .map(|(a, b)| ctx.valuation(&(a - b)))
        .min()
        .unwrap_or(Valuation::Infinity);
    if worst >= target {
        Ok(())
    } else {
        Err(Error::NoConsistentBranch(format!(
            "approximate angles agree only to p^{worst}, expected p^{target}"
        )))
    }
}
