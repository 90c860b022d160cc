//! The quaternion algebra H_p with i² = v, j² = -p: products, reduced norm
//! and trace, inverses and the conjugation action on pure quaternions.

use padic_so3::linalg::QExtElem;
use padic_so3::quaternion::Quat;
use padic_so3::PrimeCtx;

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(7)?;
    let (i, j, k) = (Quat::i(&ctx), Quat::j(&ctx), Quat::k(&ctx));
    println!("i² = {}, j² = {}, k² = {}", i.mul(&i), j.mul(&j), k.mul(&k));
    println!("ij = {}, ji = {}", i.mul(&j), j.mul(&i));

    let x = Quat::parse(&ctx, "1 + 2i - 1/3j + k")?;
    let y = Quat::from_i64(&ctx, [2, 0, 1, -1]);
    println!("x = {x}, y = {y}");
    println!("nrd(x) = {}, nrd(y) = {}, nrd(xy) = {}", x.nrd(), y.nrd(), x.mul(&y).nrd());
    println!("trd(x) = {}", x.trd());
    println!("x⁻¹ = {}, x x⁻¹ = {}", x.inv()?, x.mul(&x.inv()?));

    let det = x.left_regular().det_cofactor();
    println!("det of the 2x2 representation = {det}");
    assert_eq!(det, QExtElem::from_base(x.nrd(), ctx.v()));

    println!("K(x) =\n{}", x.conj_action_matrix()?);
    Ok(())
}
