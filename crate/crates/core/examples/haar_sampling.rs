//! Draws Haar-distributed rotations and checks that translating them by a
//! fixed rotation leaves the residue statistics unchanged.

use padic_so3::haar::{invariance_check, sample_batch};
use padic_so3::padic::int;
use padic_so3::rotation::cardano_matrix;
use padic_so3::{Angles, PrimeCtx};

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(5)?;
    for (angles, r) in sample_batch(&ctx, 8, 3, 42, 1) {
        println!("{angles}\n{r}\n");
    }

    let g = cardano_matrix(&ctx, &Angles::finite(int(1), int(0), int(0)));
    let report = invariance_check(&ctx, &g, 10_000, 4, 42, 1)?;
    println!(
        "chi-square {:.2} on {} dof, p-value {:.3} ({} residue patterns)",
        report.statistic,
        report.dof,
        report.p_value,
        report.cells
    );
    Ok(())
}
