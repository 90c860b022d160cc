//! Images of balls under the left translation `α ↦ (α₀ + α)/(1 - dα₀α)` of
//! SO(2)_{p,d}.

use num_traits::{One, Zero};

use super::region::{complement_of_ball, BallQp, RegionQp};
use crate::error::{Error, Result};
use crate::linalg::FormParam;
use crate::padic::{PrimeCtx, ProjPoint, Rational, Valuation};

/// `x ↦ (a x + b)/(c x + e)` with `ae - bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub e: Rational,
}

impl Mobius {
    /// Left translation by `R_d(α₀)`; at `α₀ = ∞` it is `x ↦ -1/(dx)`.
    pub fn translation(ctx: &PrimeCtx, d: FormParam, alpha0: &ProjPoint) -> Mobius {
        let dv = d.value(ctx);
        match alpha0 {
            ProjPoint::Finite(a0) => Mobius {
                a: Rational::one(),
                b: a0.clone(),
                c: -(dv * a0),
                e: Rational::one(),
            },
            ProjPoint::Infinity => Mobius {
                a: Rational::zero(),
                b: -Rational::one(),
                c: dv,
                e: Rational::zero(),
            },
        }
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.e - &self.b * &self.c
    }

    pub fn apply(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Infinity if self.c.is_zero() => ProjPoint::Infinity,
            ProjPoint::Infinity => ProjPoint::Finite(&self.a / &self.c),
            ProjPoint::Finite(x) => {
                let den = &self.c * x + &self.e;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite((&self.a * x + &self.b) / den)
                }
            }
        }
    }

    /// Exact image of a ball, up to the single point ∞.
    ///
    /// With `f(x) - f(x₀) = det·(x - x₀)/((cx + e)(cx₀ + e))`, a ball missing
    /// the pole maps onto a ball whose radius exponent shifts by
    /// `v(det) - 2v(cx₀ + e)`. A ball containing the pole `x*` maps onto
    /// `a/c + {w : v(w) ≤ v(det) - 2v(c) - k}`, the complement of a ball.
    pub fn image_of_ball(&self, ctx: &PrimeCtx, ball: &BallQp) -> Result<RegionQp> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let x0 = &ball.center;
        if self.c.is_zero() {
            let slope = &self.a / &self.e;
            let center = (&self.a * x0 + &self.b) / &self.e;
            return Ok(RegionQp::ball(BallQp::new(center, ball.k + ctx.val(&slope))));
        }
        let pole = -(&self.e / &self.c);
        if ball.contains(ctx, &pole) {
            let radius = ctx.val(&det) - 2 * ctx.val(&self.c) - ball.k + 1;
            let around = BallQp::new(&self.a / &self.c, radius);
            return Ok(complement_of_ball(ctx, &around));
        }
        let den = &self.c * x0 + &self.e;
        let center = (&self.a * x0 + &self.b) / &den;
        let k = ball.k + ctx.val(&det) - 2 * ctx.val(&den);
        Ok(RegionQp::ball(BallQp::new(center, k)))
    }
}

/// Image of `ball` under left translation by `R_d(α₀)` in the parameter.
pub fn mobius_image(ctx: &PrimeCtx, d: FormParam, alpha0: &ProjPoint, ball: &BallQp) -> Result<RegionQp> {
    Mobius::translation(ctx, d, alpha0).image_of_ball(ctx, ball)
}

/// `∫_ball |f'(x)|_p dx`, summed over subdivisions until `|f'|_p` is
/// constant on each sub-ball; used as an independent check of the image
/// radius. `|f'(x)|_p = |det|_p / |cx + e|_p²` is constant on a ball that
/// misses the pole.
pub fn derivative_mass(ctx: &PrimeCtx, f: &Mobius, ball: &BallQp, max_depth: i64) -> Option<Rational> {
    let det_v = ctx.val(&f.det());
    let mut stack = vec![ball.clone()];
    let mut total = Rational::zero();
    while let Some(b) = stack.pop() {
        let den = &f.c * &b.center + &f.e;
        let pole_inside = !f.c.is_zero() && b.contains(ctx, &-(&f.e / &f.c));
        let den_v = ctx.valuation(&den);
        let constant = !pole_inside
            && (f.c.is_zero()
                || matches!(den_v, Valuation::Finite(w) if w < ctx.val(&f.c) + b.k));
        if constant {
            let w = den_v.finite().expect("pole excluded");
            total += ctx.p_pow(-(det_v - 2 * w)) * ctx.p_pow(-b.k);
        } else if b.k - ball.k >= max_depth {
            return None;
        } else {
            stack.extend(b.children(ctx));
        }
    }
    Some(total)
}
