//! Valuations, square classes and p-adic expansions of rationals.

use padic_so3::padic::{parse_rational, to_approx};
use padic_so3::PrimeCtx;

fn main() -> padic_so3::Result<()> {
    for p in [3, 5, 7, 13] {
        let ctx = PrimeCtx::new(p)?;
        println!("p = {p}: u = {}, v = {}", ctx.u(), ctx.v());
        for s in ["2", "10", "-1", "45/7", "1/49"] {
            let x = parse_rational(s)?;
            println!(
                "  {s:>5}: v_p = {}, |x|_p = {}, class {}, {}",
                ctx.valuation(&x),
                ctx.abs_p(&x),
                ctx.square_class(&x)?,
                to_approx(&x, &ctx, 6)?
            );
        }
    }
    Ok(())
}
