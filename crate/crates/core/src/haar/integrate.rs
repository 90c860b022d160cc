//! Exact Haar integration in angle coordinates.
//!
//! On SO(2)_{p,d} the Haar measure in the parameter `σ` is
//! `dσ / |1 + dσ²|_p`. The density is a power of p and locally constant, so
//! integrals over balls and shells are finite sums of `p^(e - k)` terms. On
//! SO(3)_p the density factorizes over the three nautical angles.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::region::{BallQp, Piece, RegionQp, ShellQp};
use crate::error::{Error, Result};
use crate::linalg::FormParam;
use crate::padic::{int, PrimeCtx, ProjPoint, Rational, Valuation};
use crate::quaternion::Quat;
use crate::rotation::{Angles, Axis};

/// `1 / |1 + dσ²|_p`.
pub fn so2_density(ctx: &PrimeCtx, d: FormParam, sigma: &ProjPoint) -> Result<Rational> {
    let s = sigma.finite().ok_or(Error::InfiniteCoordinate)?;
    let w = Rational::one() + d.value(ctx) * s * s;
    Ok(ctx.p_pow(ctx.val(&w)))
}

/// Product of the per-axis densities with `d = -v, p, -p/v`.
pub fn so3_density(ctx: &PrimeCtx, angles: &Angles) -> Result<Rational> {
    Axis::ALL
        .iter()
        .zip(angles.as_array())
        .map(|(axis, x)| so2_density(ctx, axis.form(), x))
        .product()
}

/// `v_p(1 + dc²)` when the density is provably constant on the ball, i.e.
/// `v(1 + dc²) < min(v(2dc) + k, v(d) + 2k)`: every `σ = c + ε` then has
/// `1 + dσ² = (1 + dc²) + d(2cε + ε²)` with a strictly smaller correction.
fn constant_valuation(ctx: &PrimeCtx, d: &Rational, ball: &BallQp) -> Option<i64> {
    let c = &ball.center;
    let e = ctx.val(&(Rational::one() + d * c * c));
    let linear = match ctx.valuation(&(int(2) * d * c)) {
        Valuation::Finite(w) => Some(w + ball.k),
        Valuation::Infinity => None,
    };
    let quadratic = ctx.val(d) + 2 * ball.k;
    let bound = linear.map_or(quadratic, |l| l.min(quadratic));
    (e < bound).then_some(e)
}

/// Integral of the SO(2)_{p,d} density over a ball, splitting into children
/// until the constancy certificate holds. Terminates because `1 + dσ²` has no
/// zero in Q_p.
pub fn integrate_ball(ctx: &PrimeCtx, d: FormParam, ball: &BallQp) -> Rational {
    let dv = d.value(ctx);
    let mut stack = vec![ball.clone()];
    let mut total = Rational::zero();
    while let Some(b) = stack.pop() {
        match constant_valuation(ctx, &dv, &b) {
            Some(e) => total += ctx.p_pow(e - b.k),
            None => stack.extend(b.children(ctx)),
        }
    }
    total
}

/// On shell `k` the term `dσ²` has valuation `v(d) - 2k < 0`, so
/// `|1 + dσ²|_p = |dσ²|_p` there.
fn shell_density(ctx: &PrimeCtx, d: FormParam, shell: &ShellQp) -> Rational {
    let dominant = d.valuation() - 2 * shell.k;
    assert!(dominant < 0, "shells have k ≥ 1 and v(d) ≤ 1");
    let representative = ProjPoint::Finite(ctx.p_pow(-shell.k));
    so2_density(ctx, d, &representative).expect("finite point")
}

fn integrate_shell(ctx: &PrimeCtx, d: FormParam, shell: &ShellQp) -> Rational {
    shell_density(ctx, d, shell) * shell.additive_mass(ctx)
}

/// Shells `k ≥ K`: the shell masses form a geometric series with ratio `1/p`.
fn integrate_tail(ctx: &PrimeCtx, d: FormParam, from: i64) -> Rational {
    let first = integrate_shell(ctx, d, &ShellQp { k: from });
    let next = integrate_shell(ctx, d, &ShellQp { k: from + 1 });
    let ratio = &next / &first;
    debug_assert_eq!(ratio, Rational::one() / ctx.p_rat());
    first / (Rational::one() - ratio)
}

pub fn integrate_piece(ctx: &PrimeCtx, d: FormParam, piece: &Piece) -> Rational {
    match piece {
        Piece::Ball(b) => integrate_ball(ctx, d, b),
        Piece::Shell(s) => integrate_shell(ctx, d, s),
        Piece::Zp => integrate_ball(ctx, d, &BallQp::zp()),
        Piece::Tail(k) => integrate_tail(ctx, d, *k),
    }
}

/// Unnormalized Haar mass of `{R_d(σ) : σ ∈ region}`.
pub fn integrate_so2(ctx: &PrimeCtx, d: FormParam, region: &RegionQp) -> Rational {
    region
        .pieces()
        .iter()
        .map(|piece| integrate_piece(ctx, d, piece))
        .sum()
}

/// [`integrate_so2`] with the pieces spread over `threads` workers. Balls are
/// split into children first so that a single large ball is shared too. The
/// result is the same for every thread count.
pub fn integrate_so2_threads(
    ctx: &PrimeCtx,
    d: FormParam,
    region: &RegionQp,
    threads: usize,
) -> Rational {
    let threads = threads.max(1);
    if threads == 1 {
        return integrate_so2(ctx, d, region);
    }
    let mut work: Vec<Piece> = region.pieces().to_vec();
    for _ in 0..4 {
        if work.len() >= 4 * threads {
            break;
        }
        work = work
            .into_iter()
            .flat_map(|piece| match piece {
                Piece::Ball(b) => b.children(ctx).into_iter().map(Piece::Ball).collect(),
                other => vec![other],
            })
            .collect();
    }
    let chunk = work.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = work
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|piece| integrate_piece(ctx, d, piece))
                        .sum::<Rational>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("integration worker panicked"))
            .sum()
    })
}

/// Groups whose total Haar mass can be requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupTag {
    So2(FormParam),
    So3,
}

impl FromStr for GroupTag {
    type Err = Error;

    /// `so2:-v`, `so2:p`, `so2:up`, `so2:-p/v` or `so3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "so3" {
            return Ok(GroupTag::So3);
        }
        s.strip_prefix("so2:")
            .and_then(|d| d.parse::<FormParam>().ok())
            .map(GroupTag::So2)
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::So2(d) => write!(f, "so2:{d}"),
            GroupTag::So3 => f.write_str("so3"),
        }
    }
}

/// Total unnormalized mass, integrated over Z_p and all shells:
/// `1 + 1/p` for `d = -v`, `2` for the ramified `d`, and `4(1 + 1/p)` for
/// SO(3)_p.
pub fn total_mass(ctx: &PrimeCtx, tag: GroupTag) -> Rational {
    match tag {
        GroupTag::So2(d) => integrate_so2(ctx, d, &RegionQp::all()),
        GroupTag::So3 => Axis::ALL
            .iter()
            .map(|axis| integrate_so2(ctx, axis.form(), &RegionQp::all()))
            .product(),
    }
}

/// Mass of the box `α ∈ regions[0], β ∈ regions[1], γ ∈ regions[2]`;
/// divided by the total mass when `normalized`.
pub fn integrate_so3(ctx: &PrimeCtx, regions: [&RegionQp; 3], normalized: bool) -> Rational {
    let mass: Rational = Axis::ALL
        .iter()
        .zip(regions)
        .map(|(axis, r)| integrate_so2(ctx, axis.form(), r))
        .product();
    if normalized {
        mass / total_mass(ctx, GroupTag::So3)
    } else {
        mass
    }
}

/// Normalized Haar integral over one axis subgroup of the step function
/// taking `value` on `region` for each pair, and 0 elsewhere.
pub fn axis_integral(ctx: &PrimeCtx, axis: Axis, steps: &[(RegionQp, Rational)]) -> Result<Rational> {
    for (i, (a, _)) in steps.iter().enumerate() {
        if steps[i + 1..].iter().any(|(b, _)| !a.is_disjoint_from(ctx, b)) {
            return Err(Error::MalformedRegion(
                "step function regions must be disjoint".into(),
            ));
        }
    }
    let d = axis.form();
    let sum: Rational = steps
        .iter()
        .map(|(r, value)| value * integrate_so2(ctx, d, r))
        .sum();
    Ok(sum / total_mass(ctx, GroupTag::So2(d)))
}

/// Haar density `1 / |nrd(ξ)|_p²` of H_p^×.
pub fn hquat_density(xi: &Quat) -> Result<Rational> {
    if xi.is_zero() {
        return Err(Error::Zero("density at the zero quaternion"));
    }
    let ctx = xi.ctx();
    Ok(ctx.p_pow(2 * ctx.val(&xi.nrd())))
}
