//! Haar-random sampling in angle coordinates.
//!
//! An SO(2)_{p,d} parameter is drawn by first picking Z_p or a shell with the
//! probability of its Haar mass, then drawing base-p digits uniformly inside
//! it. On shells the density is constant, so uniform digits are exact; on Z_p
//! it is constant for every catalog `d`. The point ∞ has mass zero and is
//! never returned.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integrate::{integrate_so2, total_mass, GroupTag};
use super::region::{Piece, RegionQp, ShellQp};
use crate::linalg::FormParam;
use crate::padic::{PrimeCtx, ProjPoint, Rational};
use crate::rotation::{cardano_matrix, Angles, Axis, Rot3};

/// Samples draw in batches of this size; batch `b` uses the ChaCha8 stream
/// `b` of the seed, so output does not depend on the thread count.
pub const BATCH_SIZE: usize = 64;

#[derive(Debug, Clone)]
pub struct So2Sampler {
    ctx: PrimeCtx,
    digits: u32,
    /// `P(Z_p) = zp_num / zp_den`.
    zp_num: u64,
    zp_den: u64,
    total: Rational,
    d: FormParam,
}

impl So2Sampler {
    /// Piece probabilities come from the exact integrator.
    pub fn new(ctx: &PrimeCtx, d: FormParam, digits: u32) -> Self {
        let total = total_mass(ctx, GroupTag::So2(d));
        let zp = integrate_so2(ctx, d, &RegionQp::zp()) / &total;
        let small = |x: &BigInt| x.to_u64().expect("piece probabilities have small terms");
        So2Sampler {
            ctx: *ctx,
            digits: digits.max(1),
            zp_num: small(zp.numer()),
            zp_den: small(zp.denom()),
            total,
            d,
        }
    }

    pub fn zp_probability(&self) -> Rational {
        Rational::new(self.zp_num.into(), self.zp_den.into())
    }

    pub fn shell_probability(&self, k: i64) -> Rational {
        let shell = ShellQp::new(k).expect("shell index ≥ 1");
        integrate_so2(&self.ctx, self.d, &RegionQp::new(&self.ctx, vec![Piece::Shell(shell)]).expect("one piece"))
            / &self.total
    }

    /// `None` for Z_p, `Some(k)` for shell `k`. Given "not Z_p", shell `k`
    /// has probability `(1 - 1/p) p^-(k-1)`: each further shell is entered
    /// with probability `1/p`.
    pub fn sample_piece<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<i64> {
        if rng.random_range(0..self.zp_den) < self.zp_num {
            return None;
        }
        let mut k = 1;
        while rng.random_range(0..self.ctx.p()) == 0 {
            k += 1;
        }
        Some(k)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        let p = self.ctx.p();
        let piece = self.sample_piece(rng);
        let mut mantissa = BigInt::zero();
        let mut scale = BigInt::one();
        for i in 0..self.digits {
            let lo = if i == 0 && piece.is_some() { 1 } else { 0 };
            mantissa += &scale * rng.random_range(lo..p);
            scale *= p;
        }
        let x = Rational::from_integer(mantissa);
        match piece {
            None => x,
            Some(k) => x * self.ctx.p_pow(-k),
        }
    }
}

/// One Haar-random SO(2)_{p,d} parameter with `n` digits.
pub fn sample_so2_param<R: Rng + ?Sized>(ctx: &PrimeCtx, d: FormParam, rng: &mut R, n: u32) -> Rational {
    So2Sampler::new(ctx, d, n).sample(rng)
}

/// Independent per-axis samplers for the nautical angles.
#[derive(Debug, Clone)]
pub struct So3Sampler {
    ctx: PrimeCtx,
    axes: [So2Sampler; 3],
}

impl So3Sampler {
    pub fn new(ctx: &PrimeCtx, digits: u32) -> Self {
        So3Sampler {
            ctx: *ctx,
            axes: Axis::ALL.map(|a| So2Sampler::new(ctx, a.form(), digits)),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Angles, Rot3) {
        let [a, b, g] = self
            .axes
            .each_ref()
            .map(|s| ProjPoint::Finite(s.sample(rng)));
        let angles = Angles::new(a, b, g);
        let r = cardano_matrix(&self.ctx, &angles);
        (angles, r)
    }
}

pub fn sample_so3<R: Rng + ?Sized>(ctx: &PrimeCtx, rng: &mut R, n: u32) -> (Angles, Rot3) {
    So3Sampler::new(ctx, n).sample(rng)
}

/// `count` Haar-random rotations from `seed`, spread over `threads` workers.
/// Identical for every thread count.
pub fn sample_batch(
    ctx: &PrimeCtx,
    digits: u32,
    count: usize,
    seed: u64,
    threads: usize,
) -> Vec<(Angles, Rot3)> {
    let sampler = So3Sampler::new(ctx, digits);
    let batches = count.div_ceil(BATCH_SIZE);
    let run = |b: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let n = BATCH_SIZE.min(count - b * BATCH_SIZE);
        (0..n).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>()
    };
    let threads = threads.clamp(1, batches.max(1));
    if threads == 1 {
        return (0..batches).flat_map(run).collect();
    }
    let mut slots: Vec<Vec<(Angles, Rot3)>> = vec![Vec::new(); batches];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let run = &run;
                s.spawn(move || {
                    (t..batches)
                        .step_by(threads)
                        .map(|b| (b, run(b)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (b, v) in h.join().expect("sampling worker panicked") {
                slots[b] = v;
            }
        }
    });
    slots.into_iter().flatten().collect()
}
