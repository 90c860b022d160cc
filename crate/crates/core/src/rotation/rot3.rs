use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{lambda_matrix, Mat, QuadForm};
use crate::padic::{int, PrimeCtx, Rational};
use crate::quaternion::Quat;

/// A certified element of SO(3)_p: `Mᵀ A₊ M = A₊` and `det M = 1` hold
/// exactly, and every entry lies in Z_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rot3 {
    m: Mat,
    ctx: PrimeCtx,
}

impl Rot3 {
    pub fn certify(ctx: &PrimeCtx, m: Mat) -> Result<Rot3> {
        if m.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: m.dim(),
            });
        }
        if !QuadForm::Ternary.is_special_isometry(ctx, &m) {
            return Err(Error::NotInGroup("Mᵀ A₊ M ≠ A₊ or det M ≠ 1".into()));
        }
        // Implied by the isometry condition since A₊ is anisotropic.
        debug_assert!(m.rows().iter().flatten().all(|x| ctx.residue(x).is_some()));
        Ok(Rot3 { m, ctx: *ctx })
    }

    /// Wraps a matrix known to be a rotation by construction.
    pub(crate) fn from_trusted(ctx: &PrimeCtx, m: Mat) -> Rot3 {
        Rot3 { m, ctx: *ctx }
    }

    pub fn identity(ctx: &PrimeCtx) -> Rot3 {
        Rot3 {
            m: Mat::identity(3),
            ctx: *ctx,
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn ctx(&self) -> &PrimeCtx {
        &self.ctx
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Rot3) -> Result<Rot3> {
        if self.ctx != other.ctx {
            return Err(Error::PrimeMismatch(self.ctx.p(), other.ctx.p()));
        }
        Ok(Rot3::from_trusted(&self.ctx, self.m.mul(&other.m)?))
    }

    /// `A₊⁻¹ Mᵀ A₊`.
    pub fn inverse(&self) -> Rot3 {
        let a = QuadForm::Ternary.gram(&self.ctx);
        let a_inv = Mat::diag(
            QuadForm::Ternary
                .diagonal(&self.ctx)
                .iter()
                .map(|x| Rational::one() / x)
                .collect(),
        );
        let m = a_inv
            .mul(&self.m.transpose())
            .and_then(|t| t.mul(&a))
            .expect("3x3");
        Rot3 { m, ctx: self.ctx }
    }

    /// `R² = I` and `R ≠ I`.
    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.m.mul(&self.m).expect("3x3").is_identity()
    }

    /// Entries reduced modulo p, row-major.
    pub fn residues(&self) -> [u64; 9] {
        std::array::from_fn(|k| {
            self.ctx
                .residue(self.m.get(k / 3, k % 3))
                .expect("entries of a certified rotation are p-integral")
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.m.to_json()
    }

    pub fn from_json(ctx: &PrimeCtx, v: &serde_json::Value) -> Result<Rot3> {
        Rot3::certify(ctx, Mat::from_json(v)?)
    }
}

impl fmt::Display for Rot3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

/// `T_p(ξ) = Λ K_p(ξ) Λ⁻¹`. `Λ` reverses the basis and scales it by
/// `(-vp, p, -v)`, so entry `(i, j)` is `λ_i K[2-i][2-j] / λ_j`.
pub fn quat_to_rotation(xi: &Quat) -> Result<Rot3> {
    let ctx = xi.ctx();
    let k = xi.conj_action_matrix()?;
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let scale = [-(&v * &p), p, -v];
    let rows = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| k.get(2 - i, 2 - j) * &scale[i] / &scale[j])
                .collect()
        })
        .collect();
    Ok(Rot3::from_trusted(ctx, Mat::from_rows(rows)?))
}

/// A quaternion `ξ` with `T_p(ξ) = R`, scaled so that its first nonzero
/// coefficient is 1.
///
/// With `K = Λ⁻¹ R Λ` and `N = nrd(ξ)`, every product `q_a q_b / N` is linear
/// in the entries of `K`; a nonzero row of that Gram matrix is `ξ` up to scale.
pub fn rotation_to_quat(r: &Rot3) -> Result<Quat> {
    let ctx = r.ctx();
    let lambda = lambda_matrix(ctx);
    let k = lambda.inverse()?.mul(r.matrix())?.mul(&lambda)?;
    let kk = |i: usize, j: usize| k.get(i - 1, j - 1).clone();
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let pv = &p * &v;
    let four = int(4);
    let one = Rational::one();
    let half = |x: Rational| x / int(2);

    let a = (&one + kk(1, 1) + kk(2, 2) + kk(3, 3)) / &four;
    let b = (kk(2, 2) + kk(3, 3) - &one - kk(1, 1)) / &four;
    let c = half(&one + kk(2, 2)) - &a;
    let e = &a - half(&one + kk(3, 3));

    let g01 = (kk(2, 3) + &v * kk(3, 2)) / (&four * &v);
    let g02 = (kk(1, 3) - &p * kk(3, 1)) / (&four * &p);
    let g03 = -(&v * kk(1, 2) + &p * kk(2, 1)) / (&four * &pv);
    let g12 = (&v * kk(1, 2) - &p * kk(2, 1)) / (&four * &pv);
    let g13 = -(kk(1, 3) + &p * kk(3, 1)) / (&four * &pv);
    let g23 = -(kk(2, 3) - &v * kk(3, 2)) / (&four * &pv);

    let gram = [
        [a, g01.clone(), g02.clone(), g03.clone()],
        [g01, b / &v, g12.clone(), g13.clone()],
        [g02, g12, c / &p, g23.clone()],
        [g03, g13, g23, e / &pv],
    ];
    let row = (0..4)
        .find(|&i| !gram[i][i].is_zero())
        .ok_or_else(|| Error::NotInGroup("no quaternion preimage".into()))?;
    let d = gram[row][row].clone();
    let q: [Rational; 4] = std::array::from_fn(|j| &gram[row][j] / &d);
    let xi = Quat::from_coeffs(ctx, q);
    if quat_to_rotation(&xi)? != *r {
        return Err(Error::NotInGroup("quaternion preimage does not reproduce R".into()));
    }
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    /// Closed-form entries of `T_p(ξ)`, written out independently of `Λ` and
    /// `K_p`.
    fn closed_form(xi: &Quat) -> Mat {
        let c = xi.ctx();
        let [q0, q1, q2, q3] = xi.coeffs().clone();
        let (p, v) = (c.p_rat(), c.v_rat());
        let two = int(2);
        let (s0, s1, s2, s3) = (&q0 * &q0, &q1 * &q1, &q2 * &q2, &q3 * &q3);
        let vp = &v * &p;
        let rows = vec![
            vec![
                &s0 + &v * &s1 - &p * &s2 - &vp * &s3,
                -&two * &v * (&q0 * &q1 + &p * &q2 * &q3),
                -&two * &p * (&q0 * &q2 + &v * &q1 * &q3),
            ],
            vec![
                &two * (&p * &q2 * &q3 - &q0 * &q1),
                &s0 + &v * &s1 + &p * &s2 + &vp * &s3,
                &two * &p * (&q1 * &q2 + &q0 * &q3),
            ],
            vec![
                &two * (&q0 * &q2 - &v * &q1 * &q3),
                &two * &v * (&q0 * &q3 - &q1 * &q2),
                &s0 - &v * &s1 - &p * &s2 + &vp * &s3,
            ],
        ];
        let n = xi.nrd();
        Mat::from_rows(rows).unwrap().map(|x| x / &n)
    }

    fn sample_quats(c: &PrimeCtx) -> Vec<Quat> {
        let vals = [rat(0, 1), rat(1, 1), rat(-2, 3), rat(5, 1), rat(1, 9), rat(-7, 4)];
        let mut out = Vec::new();
        for (n, a) in vals.iter().enumerate() {
            for b in &vals {
                let q = [a.clone(), b.clone(), vals[(n + 2) % 6].clone(), vals[(n + 5) % 6].clone()];
                if q.iter().any(|x| !x.is_zero()) {
                    out.push(Quat::from_coeffs(c, q));
                }
            }
        }
        out
    }

    #[test]
    fn matches_closed_form() {
        for p in [3, 5, 7] {
            let c = ctx(p);
            for xi in sample_quats(&c) {
                assert_eq!(quat_to_rotation(&xi).unwrap().matrix(), &closed_form(&xi), "{xi}");
            }
        }
    }

    #[test]
    fn identity_and_axes() {
        let c = ctx(3);
        assert!(quat_to_rotation(&Quat::one(&c)).unwrap().is_identity());
        let ri = quat_to_rotation(&Quat::i(&c)).unwrap();
        assert_eq!(ri.matrix(), &Mat::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]).unwrap());
        assert!(ri.is_involution());
        assert!(!Rot3::identity(&c).is_involution());
        assert!(quat_to_rotation(&Quat::from_i64(&c, [0; 4])).is_err());
    }

    #[test]
    fn preimage_round_trip() {
        for p in [3, 5, 7] {
            let c = ctx(p);
            for xi in sample_quats(&c) {
                let r = quat_to_rotation(&xi).unwrap();
                let back = rotation_to_quat(&r).unwrap();
                assert!(back.proportional(&xi).unwrap(), "{xi} vs {back}");
                assert_eq!(r.is_involution(), xi.is_pure());
            }
        }
    }

    #[test]
    fn inverse_and_closure() {
        let c = ctx(5);
        let qs = sample_quats(&c);
        for w in qs.windows(2) {
            let r = quat_to_rotation(&w[0]).unwrap();
            let s = quat_to_rotation(&w[1]).unwrap();
            assert!(r.compose(&r.inverse()).unwrap().is_identity());
            assert_eq!(r.compose(&s).unwrap(), quat_to_rotation(&w[0].mul(&w[1])).unwrap());
        }
    }

    #[test]
    fn rejects_non_rotations() {
        let c = ctx(3);
        let refl = Mat::diag(vec![int(1), int(1), int(-1)]);
        assert!(Rot3::certify(&c, refl).is_err());
        assert!(Rot3::certify(&c, Mat::identity(2)).is_err());
    }
}
