use padic_so3::padic::{hensel_sqrt_rational, int, rational_sqrt};
use padic_so3::PrimeCtx;

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(5)?;

    // 9/4 has a rational root; -1 and 6 only have 5-adic ones.
    for a in [int(9) / int(4), int(-1), int(6)] {
        match rational_sqrt(&a) {
            Some(r) => println!("sqrt({a}) = {r} exactly"),
            None => {
                let r = hensel_sqrt_rational(&a, &ctx, 12)?;
                let back = r.mul(&r)?;
                println!("sqrt({a}) = {r}, squared back {back}");
            }
        }
    }

    match hensel_sqrt_rational(&int(2), &ctx, 12) {
        Ok(r) => println!("unexpected root {r}"),
        Err(e) => println!("sqrt(2): {e}"),
    }
    Ok(())
}
