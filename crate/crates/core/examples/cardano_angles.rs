//! Nautical angles R = R_z(α) R_y(β) R_x(γ): construction, the quaternion of a
//! triple and exact recovery of the angles from the matrix.
//!
//! Each rotation off the singular locus has two angle triples. Decomposition
//! returns the one with β in Z_p; `cardano_twin` gives the other.

use padic_so3::padic::{int, rat};
use padic_so3::rotation::{
    angles_to_quat, cardano_matrix, cardano_twin, decompose_cardano, quat_to_rotation,
};
use padic_so3::{Angles, PrimeCtx};

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(3)?;
    let angles = Angles::finite(int(2), rat(3, 5), int(-1));
    let r = cardano_matrix(&ctx, &angles);
    println!("R({angles}) =\n{r}\n");

    let xi = angles_to_quat(&ctx, &angles);
    println!("quaternion {xi}, T(ξ) = R: {}", quat_to_rotation(&xi)? == r);

    let found = decompose_cardano(&r, 16)?;
    println!("decomposed: {found} (exact: {})", found.is_exact());

    let twin = cardano_twin(&ctx, &angles);
    println!("twin {twin} gives the same matrix: {}", cardano_matrix(&ctx, &twin) == r);

    let wide = Angles::finite(int(1), rat(1, 3), int(1));
    let back = decompose_cardano(&cardano_matrix(&ctx, &wide), 16)?;
    println!("{wide} decomposes to its twin {}", back);

    // Angles may be infinite; the JSON form pipes into the CLI.
    let inf: Angles = "inf,0,1".parse()?;
    println!("{}", cardano_matrix(&ctx, &inf).to_json());
    Ok(())
}
