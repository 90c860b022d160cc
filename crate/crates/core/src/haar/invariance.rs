//! Statistical check of left invariance: the residues mod p of Haar samples
//! `R` and of their translates `g·R` should follow the same distribution.

use std::collections::{BTreeMap, BTreeSet};

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::sample::sample_batch;
use crate::error::{Error, Result};
use crate::padic::PrimeCtx;
use crate::rotation::Rot3;

/// Orbits whose expected count per cell falls below this are left out.
pub const MIN_EXPECTED: f64 = 5.0;

type Pattern = [u64; 9];

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub samples: usize,
    /// Residue patterns seen among the samples.
    pub cells: usize,
    /// Cells in orbits too sparse to test.
    pub excluded_cells: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl InvarianceReport {
    pub fn rejected_at(&self, significance: f64) -> bool {
        self.p_value < significance
    }
}

/// `ḡ · r` for 3x3 residue patterns mod p.
fn act(g: &Pattern, r: &Pattern, p: u64) -> Pattern {
    std::array::from_fn(|k| {
        let (i, j) = (k / 3, k % 3);
        (0..3).map(|m| g[3 * i + m] * r[3 * m + j]).sum::<u64>() % p
    })
}

/// Chi-square test that the residue pattern of `R` and of `g·R` share one
/// distribution.
///
/// Reduction mod p is multiplicative, so the pattern of `g·R` is `ḡ·R̄`. The
/// two distributions agree exactly when the pattern probabilities are
/// constant on the orbits of `R̄ ↦ ḡ·R̄`. Conditioning on orbit totals, each
/// orbit contributes a Pearson goodness-of-fit term against the uniform
/// split, with `|orbit| - 1` degrees of freedom. For `g = I` every orbit is a
/// single cell and the statistic is 0.
pub fn invariance_report(g: &Rot3, samples: &[Rot3]) -> Result<InvarianceReport> {
    let p = g.ctx().p();
    let gbar = g.residues();
    let mut counts: BTreeMap<Pattern, u64> = BTreeMap::new();
    for r in samples {
        let a = r.residues();
        let b = g.compose(r)?.residues();
        if act(&gbar, &a, p) != b {
            return Err(Error::NotInGroup("reduction mod p is not multiplicative".into()));
        }
        *counts.entry(a).or_default() += 1;
    }

    let mut seen: BTreeSet<Pattern> = BTreeSet::new();
    let (mut statistic, mut dof, mut excluded_cells) = (0.0, 0, 0);
    for &start in counts.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = vec![start];
        let mut next = act(&gbar, &start, p);
        while next != start {
            orbit.push(next);
            next = act(&gbar, &next, p);
        }
        seen.extend(orbit.iter().copied());
        let observed: Vec<f64> = orbit
            .iter()
            .map(|c| counts.get(c).copied().unwrap_or(0) as f64)
            .collect();
        let expected = observed.iter().sum::<f64>() / orbit.len() as f64;
        if expected < MIN_EXPECTED {
            excluded_cells += orbit.iter().filter(|c| counts.contains_key(*c)).count();
            continue;
        }
        statistic += observed
            .iter()
            .map(|o| (o - expected) * (o - expected) / expected)
            .sum::<f64>();
        dof += orbit.len() - 1;
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    Ok(InvarianceReport {
        samples: samples.len(),
        cells: counts.len(),
        excluded_cells,
        statistic,
        dof,
        p_value,
    })
}

/// [`invariance_report`] on `n` fresh Haar samples drawn from `seed`.
pub fn invariance_check(
    ctx: &PrimeCtx,
    g: &Rot3,
    n: usize,
    digits: u32,
    seed: u64,
    threads: usize,
) -> Result<InvarianceReport> {
    let samples: Vec<Rot3> = sample_batch(ctx, digits, n, seed, threads)
        .into_iter()
        .map(|(_, r)| r)
        .collect();
    invariance_report(g, &samples)
}
