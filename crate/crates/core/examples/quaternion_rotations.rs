use padic_so3::quaternion::Quat;
use padic_so3::rotation::{quat_to_rotation, rotation_to_quat};
use padic_so3::padic::int;
use padic_so3::PrimeCtx;

fn main() -> padic_so3::Result<()> {
    let ctx = PrimeCtx::new(5)?;
    let x = Quat::from_i64(&ctx, [1, 1, 2, 0]);
    let y = Quat::from_i64(&ctx, [3, 0, -1, 1]);

    let (rx, ry) = (quat_to_rotation(&x)?, quat_to_rotation(&y)?);
    let rxy = quat_to_rotation(&x.mul(&y))?;
    println!("T(x) =\n{rx}\n");
    println!("T(xy) = T(x) T(y): {}", rxy == rx.compose(&ry)?);
    println!("T(3x) = T(x): {}", quat_to_rotation(&x.scale(&int(3)))? == rx);

    let back = rotation_to_quat(&rx)?;
    println!("preimage of T(x): {back} (proportional to x: {})", back.proportional(&x)?);

    // Pure quaternions give the involutions.
    let ti = quat_to_rotation(&Quat::i(&ctx))?;
    println!("T(i) =\n{ti}\ninvolution: {}", ti.is_involution());
    Ok(())
}
