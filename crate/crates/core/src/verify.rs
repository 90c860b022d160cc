//! Randomized identity suites behind `padic-so3 verify`, plus the random
//! generators they share with the examples.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::haar::{
    integrate_so2, integrate_so3, invariance_check, jacobian_weight, mobius_image, so3_density,
    total_mass, BallQp, GroupTag, RegionQp,
};
use crate::linalg::{FormParam, Mat, QExtElem, QuadForm};
use crate::padic::{int, PrimeCtx, ProjPoint, Rational};
use crate::quaternion::Quat;
use crate::rotation::{
    angles_to_quat, cardano_matrix, decompose_cardano, quat_to_rotation, rotation_to_quat, Angles,
    Decomposition,
};

/// A random nonzero-or-zero rational `p^s · n/m` with `|n|, m ≤ bound` and
/// `|s| ≤ spread`.
pub fn random_rational<R: Rng + ?Sized>(ctx: &PrimeCtx, rng: &mut R, bound: i64, spread: i64) -> Rational {
    let n = rng.random_range(-bound..=bound);
    let m = rng.random_range(1..=bound);
    let s = rng.random_range(-spread..=spread);
    Rational::new(BigInt::from(n), BigInt::from(m)) * ctx.p_pow(s)
}

pub fn random_quat<R: Rng + ?Sized>(ctx: &PrimeCtx, rng: &mut R) -> Quat {
    loop {
        let q: [Rational; 4] = std::array::from_fn(|_| random_rational(ctx, rng, 12, 2));
        if q.iter().any(|x| !x.is_zero()) {
            return Quat::from_coeffs(ctx, q);
        }
    }
}

/// Finite angles off the locus `1 - pαβγ = 0`.
pub fn random_angles<R: Rng + ?Sized>(ctx: &PrimeCtx, rng: &mut R) -> Angles {
    loop {
        let [a, b, g] = std::array::from_fn(|_| random_rational(ctx, rng, 12, 2));
        if !(Rational::one() - ctx.p_rat() * &a * &b * &g).is_zero() {
            return Angles::finite(a, b, g);
        }
    }
}

pub fn random_ball<R: Rng + ?Sized>(ctx: &PrimeCtx, rng: &mut R) -> BallQp {
    BallQp::new(random_rational(ctx, rng, 20, 2), rng.random_range(-3..=4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Iso,
    Jacobian,
    Measure,
    Invariance,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "iso" => Ok(Suite::Iso),
            "jacobian" => Ok(Suite::Jacobian),
            "measure" => Ok(Suite::Measure),
            "invariance" => Ok(Suite::Invariance),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite `{other}`"))),
        }
    }
}

/// Outcome of one identity over all its cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Some(c) => write!(f, "FAIL {}: {}", self.name, c),
        }
    }
}

/// Runs `check` on `cases` generated inputs and keeps the first failure.
fn check<T, G, C>(name: &str, cases: usize, mut gen: G, check: C) -> Check
where
    G: FnMut() -> T,
    C: Fn(&T) -> std::result::Result<(), String>,
{
    let counterexample = (0..cases).find_map(|_| check(&gen()).err());
    Check {
        name: name.to_string(),
        cases,
        counterexample,
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Settings shared by the suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub samples: usize,
    pub precision: u32,
    pub seed: u64,
    pub threads: usize,
}

pub fn run_suite<R: Rng>(ctx: &PrimeCtx, suite: Suite, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    match suite {
        Suite::Algebra => algebra(ctx, cfg.samples, rng),
        Suite::Iso => iso(ctx, cfg, rng),
        Suite::Jacobian => jacobian(ctx, cfg.samples, rng),
        Suite::Measure => measure(ctx, cfg.samples, rng),
        Suite::Invariance => invariance(ctx, cfg),
        Suite::All => [Suite::Algebra, Suite::Iso, Suite::Jacobian, Suite::Measure, Suite::Invariance]
            .into_iter()
            .flat_map(|s| run_suite(ctx, s, cfg, rng))
            .collect(),
    }
}

fn algebra<R: Rng>(ctx: &PrimeCtx, n: usize, rng: &mut R) -> Vec<Check> {
    let mut pair = || (random_quat(ctx, rng), random_quat(ctx, rng));
    let mut out = vec![check("nrd(xy) = nrd(x) nrd(y)", n, &mut pair, |(x, y)| {
        ensure(x.mul(y).nrd() == x.nrd() * y.nrd(), || format!("x = {x}, y = {y}"))
    })];
    out.push(check("trd(x + y) = trd(x) + trd(y)", n, &mut pair, |(x, y)| {
        ensure(x.add(y).trd() == x.trd() + y.trd(), || format!("x = {x}, y = {y}"))
    }));
    out.push(check("conj(xy) = conj(y) conj(x)", n, &mut pair, |(x, y)| {
        ensure(x.mul(y).conj() == y.conj().mul(&x.conj()), || format!("x = {x}, y = {y}"))
    }));
    let mut single = || random_quat(ctx, rng);
    out.push(check("x x⁻¹ = x⁻¹ x = 1", n, &mut single, |x| {
        let inv = x.inv().map_err(|e| e.to_string())?;
        let one = Quat::one(x.ctx());
        ensure(x.mul(&inv) == one && inv.mul(x) == one, || format!("x = {x}"))
    }));
    out.push(check("det(left regular) = nrd", n, &mut single, |x| {
        let det = x.left_regular().det_cofactor();
        ensure(det == QExtElem::from_base(x.nrd(), x.ctx().v()), || format!("x = {x}"))
    }));
    out.push(check("nrd = Q₊⁽⁴⁾(q)", n, &mut single, |x| {
        let q = QuadForm::Quaternary.eval(x.ctx(), x.coeffs()).map_err(|e| e.to_string())?;
        ensure(q == x.nrd(), || format!("x = {x}"))
    }));
    let k = Quat::k(ctx);
    out.push(Check {
        name: "k² = vp".into(),
        cases: 1,
        counterexample: (k.mul(&k) != Quat::scalar(ctx, ctx.v_rat() * ctx.p_rat()))
            .then(|| format!("k² = {}", k.mul(&k))),
    });
    out
}

fn iso<R: Rng>(ctx: &PrimeCtx, cfg: &VerifyConfig, rng: &mut R) -> Vec<Check> {
    let n = cfg.samples;
    let a_plus = QuadForm::Ternary.gram(ctx);
    let a_pure = QuadForm::PureQuaternion.gram(ctx);
    let mut pair = || (random_quat(ctx, rng), random_quat(ctx, rng));
    let t = |x: &Quat| quat_to_rotation(x).map_err(|e| e.to_string());
    let mut out = vec![check("T(xy) = T(x) T(y)", n, &mut pair, |(x, y)| {
        let lhs = t(&x.mul(y))?;
        let rhs = t(x)?.compose(&t(y)?).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("x = {x}, y = {y}"))
    })];
    let mut scaled = || {
        let x = random_quat(ctx, rng);
        let mut l = random_rational(ctx, rng, 9, 3);
        if l.is_zero() {
            l = int(1);
        }
        (x, l)
    };
    out.push(check("T(λx) = T(x)", n, &mut scaled, |(x, l)| {
        ensure(t(&x.scale(l))? == t(x)?, || format!("x = {x}, λ = {l}"))
    }));
    let mut single = || random_quat(ctx, rng);
    out.push(check("T(x)ᵀ A₊ T(x) = A₊, det = 1", n, &mut single, |x| {
        let m = t(x)?.matrix().clone();
        let lhs = m.transpose().mul(&a_plus).and_then(|l| l.mul(&m)).map_err(|e| e.to_string())?;
        ensure(lhs == a_plus && m.det() == int(1), || format!("x = {x}"))
    }));
    out.push(check("K(x)ᵀ A′ K(x) = A′", n, &mut single, |x| {
        let k = x.conj_action_matrix().map_err(|e| e.to_string())?;
        let lhs = k.transpose().mul(&a_pure).and_then(|l| l.mul(&k)).map_err(|e| e.to_string())?;
        ensure(lhs == a_pure, || format!("x = {x}"))
    }));
    out.push(check("rotation_to_quat(T(x)) ∝ x", n, &mut single, |x| {
        let back = rotation_to_quat(&t(x)?).map_err(|e| e.to_string())?;
        ensure(back.proportional(x).unwrap_or(false), || format!("x = {x}, got {back}"))
    }));
    let mut angles = || random_angles(ctx, rng);
    out.push(check("T(angles_to_quat(a)) = R(a)", n, &mut angles, |a| {
        ensure(t(&angles_to_quat(ctx, a))? == cardano_matrix(ctx, a), || format!("angles {a}"))
    }));
    let precision = cfg.precision;
    out.push(check("cardano_matrix(decompose(R)) = R", n, &mut angles, |a| {
        let r = cardano_matrix(ctx, a);
        match decompose_cardano(&r, precision).map_err(|e| e.to_string())? {
            Decomposition::Exact(b) => ensure(cardano_matrix(ctx, &b) == r, || format!("angles {a} gave {b}")),
            Decomposition::Approx(b) => Err(format!("angles {a} gave approximate {b}")),
        }
    }));
    out
}

fn jacobian<R: Rng>(ctx: &PrimeCtx, n: usize, rng: &mut R) -> Vec<Check> {
    let mut angles = || random_angles(ctx, rng);
    let mut out = vec![check("|det J| = closed form, quotient = weight", n, &mut angles, |a| {
        let w = jacobian_weight(ctx, a).map_err(|e| e.to_string())?;
        ensure(w.is_consistent(), || format!("angles {a}: {w:?}"))
    })];
    out.push(check("weight = factorized density", n, &mut angles, |a| {
        let w = jacobian_weight(ctx, a).map_err(|e| e.to_string())?;
        let dens = so3_density(ctx, a).map_err(|e| e.to_string())?;
        ensure(w.weight == dens, || format!("angles {a}"))
    }));
    let mut beta = || random_rational(ctx, rng, 50, 10);
    out.push(check("|(1 - pβ²)/(1 + pβ²)|_p = 1", n, &mut beta, |b| {
        let pb2 = ctx.p_rat() * b * b;
        let q = (Rational::one() - &pb2) / (Rational::one() + pb2);
        ensure(ctx.abs_p(&q) == int(1), || format!("β = {b}"))
    }));
    out
}

fn measure<R: Rng>(ctx: &PrimeCtx, n: usize, rng: &mut R) -> Vec<Check> {
    let p = ctx.p_rat();
    let mut out = Vec::new();
    let mut constant = |name: String, got: Rational, want: Rational| {
        out.push(Check {
            name,
            cases: 1,
            counterexample: (got != want).then(|| format!("got {got}, expected {want}")),
        })
    };
    for d in FormParam::ALL {
        let want = if d == FormParam::MinusV {
            (&p + int(1)) / &p
        } else {
            int(2)
        };
        let got = total_mass(ctx, GroupTag::So2(d));
        constant(format!("mass SO(2) d = {d}"), got, want);
    }
    constant(
        "mass SO(3)".into(),
        total_mass(ctx, GroupTag::So3),
        int(4) * (&p + int(1)) / &p,
    );
    let zp = RegionQp::zp();
    constant(
        "normalized mass of Z_p³".into(),
        integrate_so3(ctx, [&zp, &zp, &zp], true),
        &p / (int(4) * (&p + int(1))),
    );
    let mut case = || {
        let d = FormParam::ALL[rng.random_range(0..4)];
        let a0 = if rng.random_range(0..10) == 0 {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(random_rational(ctx, rng, 20, 2))
        };
        (d, a0, random_ball(ctx, rng))
    };
    out.push(check("translation preserves Haar mass", n, &mut case, |(d, a0, ball)| {
        let image = mobius_image(ctx, *d, a0, ball).map_err(|e| e.to_string())?;
        let before = integrate_so2(ctx, *d, &RegionQp::ball(ball.clone()));
        let after = integrate_so2(ctx, *d, &image);
        ensure(before == after, || format!("d = {d}, α₀ = {a0:?}, ball = {ball:?}"))
    }));
    out
}

/// Fixed translations: a z rotation, the involution `T(i)` and a generic
/// rotation.
pub fn invariance_elements(ctx: &PrimeCtx) -> Vec<(String, crate::rotation::Rot3)> {
    vec![
        (
            "R(1,0,0)".into(),
            cardano_matrix(ctx, &Angles::finite(int(1), int(0), int(0))),
        ),
        ("T(i)".into(), quat_to_rotation(&Quat::i(ctx)).expect("nonzero")),
        (
            "R(1,2,3)".into(),
            cardano_matrix(ctx, &Angles::finite(int(1), int(2), int(3))),
        ),
    ]
}

/// Residue patterns only see the leading digits of the angles.
const INVARIANCE_DIGITS: u32 = 4;

fn invariance(ctx: &PrimeCtx, cfg: &VerifyConfig) -> Vec<Check> {
    invariance_elements(ctx)
        .into_iter()
        .map(|(name, g)| {
            let digits = cfg.precision.min(INVARIANCE_DIGITS);
            let counterexample =
                match invariance_check(ctx, &g, cfg.samples, digits, cfg.seed, cfg.threads) {
                    Ok(rep) if !rep.rejected_at(1e-3) => None,
                    Ok(rep) => Some(format!(
                        "chi-square {:.2} on {} dof, p-value {:.2e}",
                        rep.statistic, rep.dof, rep.p_value
                    )),
                    Err(e) => Some(e.to_string()),
                };
            Check {
                name: format!("residues of g·R match R for g = {name}"),
                cases: cfg.samples,
                counterexample,
            }
        })
        .collect()
}

/// `Mat` rows as rational literals, for counterexample messages.
pub fn describe(m: &Mat) -> String {
    m.to_json().to_string()
}
