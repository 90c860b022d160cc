use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::Mat;
use crate::error::{Error, Result};
use crate::padic::{int, PrimeCtx, Rational};

/// Parameter `d` of a binary form `x² + d y²`. `-d` is never a square, so
/// every `A_d` is anisotropic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormParam {
    /// `d = -v`, the z axis.
    MinusV,
    /// `d = p`, the y axis.
    P,
    /// `d = up`.
    UP,
    /// `d = -p/v`, the x axis.
    MinusPOverV,
}

impl FormParam {
    pub const ALL: [FormParam; 4] = [
        FormParam::MinusV,
        FormParam::P,
        FormParam::UP,
        FormParam::MinusPOverV,
    ];

    pub fn value(self, ctx: &PrimeCtx) -> Rational {
        match self {
            FormParam::MinusV => -ctx.v_rat(),
            FormParam::P => ctx.p_rat(),
            FormParam::UP => ctx.u_rat() * ctx.p_rat(),
            FormParam::MinusPOverV => -ctx.p_rat() / ctx.v_rat(),
        }
    }

    /// `v_p(d)`: 0 for `-v`, 1 otherwise.
    pub fn valuation(self) -> i64 {
        match self {
            FormParam::MinusV => 0,
            _ => 1,
        }
    }

    /// Looks a concrete value of `d` up in the catalog.
    pub fn from_value(d: &Rational, ctx: &PrimeCtx) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.value(ctx) == *d)
            .ok_or_else(|| Error::OutsideCatalog(crate::padic::format_rational(d)))
    }

    pub fn tag(self) -> &'static str {
        match self {
            FormParam::MinusV => "-v",
            FormParam::P => "p",
            FormParam::UP => "up",
            FormParam::MinusPOverV => "-p/v",
        }
    }
}

impl fmt::Display for FormParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FormParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.tag() == s.trim())
            .ok_or_else(|| Error::OutsideCatalog(s.to_string()))
    }
}

/// The catalog of diagonal anisotropic forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadForm {
    /// `A_d = diag(1, d)`.
    Binary(FormParam),
    /// `A₊ = diag(1, -v, p)`.
    Ternary,
    /// `A₊⁽⁴⁾ = diag(1, -v, p, -vp)`, the reduced norm.
    Quaternary,
    /// `A′ = diag(-v, p, -vp)`, the reduced norm on pure quaternions.
    PureQuaternion,
}

impl QuadForm {
    pub fn diagonal(self, ctx: &PrimeCtx) -> Vec<Rational> {
        let (p, v) = (ctx.p_rat(), ctx.v_rat());
        match self {
            QuadForm::Binary(d) => vec![int(1), d.value(ctx)],
            QuadForm::Ternary => vec![int(1), -&v, p],
            QuadForm::Quaternary => vec![int(1), -&v, p.clone(), -(v * p)],
            QuadForm::PureQuaternion => vec![-&v, p.clone(), -(v * p)],
        }
    }

    pub fn dim(self) -> usize {
        match self {
            QuadForm::Binary(_) => 2,
            QuadForm::Ternary | QuadForm::PureQuaternion => 3,
            QuadForm::Quaternary => 4,
        }
    }

    pub fn gram(self, ctx: &PrimeCtx) -> Mat {
        Mat::diag(self.diagonal(ctx))
    }

    pub fn eval(self, ctx: &PrimeCtx, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self
            .diagonal(ctx)
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, xi)| acc + a * xi * xi))
    }

    /// `Mᵀ A M = A` and `det M = 1`, exactly.
    pub fn is_special_isometry(self, ctx: &PrimeCtx, m: &Mat) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        let a = self.gram(ctx);
        let lhs = m
            .transpose()
            .mul(&a)
            .and_then(|t| t.mul(m))
            .expect("dimensions checked");
        lhs == a && m.det() == int(1)
    }
}

/// The change of basis `Λ` carrying `-vp·A′` to `A₊`:
/// `Λ = ((0, 0, -vp), (0, p, 0), (-v, 0, 0))`.
pub fn lambda_matrix(ctx: &PrimeCtx) -> Mat {
    let (p, v) = (ctx.p_rat(), ctx.v_rat());
    let z = Rational::zero;
    Mat::from_rows(vec![
        vec![z(), z(), -(&v * &p)],
        vec![z(), p, z()],
        vec![-v, z(), z()],
    ])
    .expect("3x3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

    #[test]
    fn evaluations() {
        let c = PrimeCtx::new(3).unwrap();
        assert_eq!(QuadForm::Ternary.eval(&c, &[int(1), int(0), int(0)]).unwrap(), int(1));
        assert_eq!(QuadForm::Ternary.eval(&c, &[int(0), int(1), int(1)]).unwrap(), int(4));
        assert!(QuadForm::Ternary.eval(&c, &[int(1)]).is_err());
    }

    #[test]
    fn identity_and_reflection() {
        let c = PrimeCtx::new(5).unwrap();
        for f in [QuadForm::Ternary, QuadForm::PureQuaternion] {
            assert!(f.is_special_isometry(&c, &Mat::identity(3)));
        }
        let refl = Mat::diag(vec![int(1), int(1), int(-1)]);
        assert!(!QuadForm::Ternary.is_special_isometry(&c, &refl));
        assert!(!QuadForm::Ternary.is_special_isometry(&c, &Mat::identity(2)));
    }

    #[test]
    fn lambda_conjugates_forms() {
        let c3 = PrimeCtx::new(3).unwrap();
        assert_eq!(
            lambda_matrix(&c3),
            Mat::from_i64(&[&[0, 0, 3], &[0, 3, 0], &[1, 0, 0]]).unwrap()
        );
        for p in [3, 5, 7] {
            let c = PrimeCtx::new(p).unwrap();
            let l = lambda_matrix(&c);
            let lhs = l
                .transpose()
                .mul(&QuadForm::Ternary.gram(&c))
                .unwrap()
                .mul(&l)
                .unwrap();
            let scale = -(c.v_rat() * c.p_rat());
            assert_eq!(lhs, QuadForm::PureQuaternion.gram(&c).scale(&scale));
            let v = c.v_rat();
            assert_eq!(l.det(), -(c.p_rat() * c.p_rat() * &v * &v));
        }
    }

    #[test]
    fn catalog_lookup() {
        let c = PrimeCtx::new(5).unwrap();
        assert_eq!(FormParam::from_value(&int(2), &c).unwrap(), FormParam::MinusV);
        assert_eq!(FormParam::from_value(&rat(5, 2), &c).unwrap(), FormParam::MinusPOverV);
        assert!(FormParam::from_value(&int(1), &c).is_err());
        assert_eq!("-p/v".parse::<FormParam>().unwrap(), FormParam::MinusPOverV);
    }

    #[test]
    fn forms_are_anisotropic() {
        const K: i64 = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let forms = [
            QuadForm::Binary(FormParam::MinusV),
            QuadForm::Binary(FormParam::P),
            QuadForm::Binary(FormParam::UP),
            QuadForm::Binary(FormParam::MinusPOverV),
            QuadForm::Ternary,
            QuadForm::Quaternary,
            QuadForm::PureQuaternion,
        ];
        for p in PRIMES {
            let c = PrimeCtx::new(p).unwrap();
            for f in forms {
                for _ in 0..400 {
                    let x: Vec<Rational> = (0..f.dim())
                        .map(|_| rat(rng.random_range(-K..=K), rng.random_range(1..=K)))
                        .collect();
                    if x.iter().all(Zero::is_zero) {
                        continue;
                    }
                    assert!(!f.eval(&c, &x).unwrap().is_zero(), "{f:?} p={p} x={x:?}");
                }
            }
        }
    }
}
