//! Exact Haar integrals over ultrametric regions.

use padic_so3::haar::{integrate_so2, integrate_so3, total_mass, GroupTag, RegionQp};
use padic_so3::{FormParam, PrimeCtx};

fn main() -> padic_so3::Result<()> {
    for p in [3, 5, 7] {
        let ctx = PrimeCtx::new(p)?;
        let masses: Vec<String> = FormParam::ALL
            .iter()
            .map(|&d| format!("{d}: {}", total_mass(&ctx, GroupTag::So2(d))))
            .collect();
        println!("p = {p}: SO(2) masses {}; SO(3) mass {}", masses.join(", "), total_mass(&ctx, GroupTag::So3));

        let zp = RegionQp::zp();
        println!("  normalized mass of Z_p³: {}", integrate_so3(&ctx, [&zp, &zp, &zp], true));

        let region = RegionQp::parse(&ctx, "ball:1,2,shell:1,tail:3")?;
        println!(
            "  mass of {region} for d = p: {}",
            integrate_so2(&ctx, FormParam::P, &region)
        );
    }
    Ok(())
}
