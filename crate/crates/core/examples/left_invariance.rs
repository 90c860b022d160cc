//! A left translation of SO(2)_{p,d} moves a ball by a Möbius map. Its image is
//! again a finite union of balls and shells with the same Haar mass.

use padic_so3::haar::{integrate_so2, mobius_image, BallQp, RegionQp};
use padic_so3::padic::{int, rat};
use padic_so3::{FormParam, PrimeCtx, ProjPoint};

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(5)?;
    let cases = [
        (FormParam::MinusV, ProjPoint::Finite(int(2)), BallQp::new(int(1), 1)),
        (FormParam::P, ProjPoint::Finite(rat(1, 5)), BallQp::new(int(3), -1)),
        (FormParam::MinusPOverV, ProjPoint::Infinity, BallQp::new(int(0), 2)),
    ];
    for (d, a0, ball) in cases {
        let image = mobius_image(&ctx, d, &a0, &ball)?;
        let before = integrate_so2(&ctx, d, &RegionQp::ball(ball.clone()));
        let after = integrate_so2(&ctx, d, &image);
        println!("d = {d}, α₀ = {a0}: {ball} -> {image}");
        println!("  mass {before} -> {after}");
    }
    Ok(())
}
