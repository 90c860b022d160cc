//! The Jacobian of the angle chart and the Haar weight it induces.

use padic_so3::haar::{jacobian_det_closed, jacobian_matrix, jacobian_weight, so3_density};
use padic_so3::padic::{int, rat};
use padic_so3::{Angles, PrimeCtx};

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(7)?;
    for angles in [
        Angles::zero(),
        Angles::finite(int(1), int(2), int(3)),
        Angles::finite(rat(1, 7), int(14), rat(-3, 49)),
    ] {
        let j = jacobian_matrix(&ctx, &angles)?;
        let w = jacobian_weight(&ctx, &angles)?;
        println!("angles {angles}");
        println!("  det J = {} (closed form {})", j.det(), jacobian_det_closed(&ctx, &angles)?);
        println!("  |det J|_p / |Q(1,x)|_p² = {}, weight = {}", w.quotient, w.weight);
        println!("  density = {}", so3_density(&ctx, &angles)?);
    }
    Ok(())
}
