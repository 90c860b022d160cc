//! Rotations of the binary forms x² + d y² and their composition law.

use padic_so3::padic::{int, rat};
use padic_so3::rotation::{so2_compose, so2_make, so2_param};
use padic_so3::{FormParam, PrimeCtx, ProjPoint};

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(3)?;
    for d in FormParam::ALL {
        let a = ProjPoint::Finite(int(2));
        let b = ProjPoint::Finite(rat(1, 3));
        let ra = so2_make(&ctx, d, a.clone());
        let rb = so2_make(&ctx, d, b.clone());
        let sum = so2_compose(&ctx, d, &a, &b);
        let product = ra.matrix().mul(rb.matrix())?;
        println!(
            "d = {d} ({}): R(2) R(1/3) = R({}), parameter read back {}",
            d.value(&ctx),
            sum,
            so2_param(&ctx, d, &product)?
        );
    }
    println!("R(inf) =\n{}", so2_make(&ctx, FormParam::P, ProjPoint::Infinity).matrix());
    Ok(())
}
