//! Acceptance gate: one PASS/FAIL line per criterion. All comparisons are
//! exact rational equality except the statistical check, whose significance
//! level is pinned below.

use std::ops::{Add, Div, Mul, Sub};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_so3::haar::{
    integrate_so2, integrate_so3, invariance_check, jacobian_matrix, jacobian_weight, mobius_image,
    total_mass, BallQp, GroupTag, Mobius, RegionQp,
};
use padic_so3::linalg::{QExtElem, QuadForm};
use padic_so3::padic::int;
use padic_so3::quaternion::Quat;
use padic_so3::rotation::{
    cardano_matrix, cardano_twin, decompose_cardano, quat_to_rotation, Decomposition,
};
use padic_so3::{Angles, FormParam, Mat, PrimeCtx, ProjPoint, Rational};

const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
const SMALL_PRIMES: [u64; 3] = [3, 5, 7];

const MASS_BUDGET_PER_PRIME: Duration = Duration::from_secs(1);
const ISO_BUDGET: Duration = Duration::from_secs(10);
const INVARIANCE_BUDGET: Duration = Duration::from_secs(60);

const ISO_CASES: usize = 1_000;
const CARDANO_CASES: usize = 1_000;
const JACOBIAN_CASES: usize = 1_000;
const UNIT_QUOTIENT_CASES: usize = 10_000;
const UNIT_QUOTIENT_VALUATIONS: i64 = 10;
const MOBIUS_CASES: usize = 100;
const ALGEBRA_CASES: usize = 1_000;

const INVARIANCE_SAMPLES: usize = 10_000;
const INVARIANCE_DIGITS: u32 = 4;
const SIGNIFICANCE: f64 = 1e-3;

type Outcome = Result<String, String>;

fn ctx(p: u64) -> PrimeCtx {
    PrimeCtx::new(p).expect("odd prime")
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

/// `p^s · n/m` with `p ∤ n m`.
fn unit_times_power(rng: &mut ChaCha8Rng, p: u64, s: i64, bound: i64) -> Rational {
    let coprime = |rng: &mut ChaCha8Rng| loop {
        let x = rng.random_range(1..=bound);
        if x % p as i64 != 0 {
            return x;
        }
    };
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    let unit = Rational::new(BigInt::from(sign * coprime(rng)), BigInt::from(coprime(rng)));
    let pp = Rational::from_integer(BigInt::from(p));
    if s >= 0 {
        unit * pp.pow(s as i32)
    } else {
        unit / pp.pow((-s) as i32)
    }
}

/// Zero with probability 1/10, otherwise a unit times `p^s`, `s ∈ [lo, hi]`.
fn rational(rng: &mut ChaCha8Rng, p: u64, lo: i64, hi: i64) -> Rational {
    if rng.random_range(0..10) == 0 {
        return Rational::zero();
    }
    let s = rng.random_range(lo..=hi);
    unit_times_power(rng, p, s, 50)
}

fn quat(rng: &mut ChaCha8Rng, c: &PrimeCtx) -> Quat {
    loop {
        let q: [Rational; 4] = std::array::from_fn(|_| rational(rng, c.p(), -3, 3));
        if q.iter().any(|x| !x.is_zero()) {
            return Quat::from_coeffs(c, q);
        }
    }
}

/// Finite angles with `1 - pαβγ ≠ 0`; `β` is kept in Z_p when `beta_integral`.
fn angles(rng: &mut ChaCha8Rng, c: &PrimeCtx, beta_integral: bool) -> Angles {
    let p = c.p();
    loop {
        let a = rational(rng, p, -3, 3);
        let b = rational(rng, p, if beta_integral { 0 } else { -3 }, 3);
        let g = rational(rng, p, -3, 3);
        if !(Rational::one() - c.p_rat() * &a * &b * &g).is_zero() {
            return Angles::finite(a, b, g);
        }
    }
}

fn sq(m: &Mat, a: &Mat) -> Mat {
    m.transpose().mul(a).and_then(|t| t.mul(m)).expect("3x3")
}

fn criterion_1() -> Outcome {
    for p in PRIMES {
        let c = ctx(p);
        let start = Instant::now();
        let pr = Rational::from_integer(BigInt::from(p));
        let expected = [
            (FormParam::MinusV, (&pr + int(1)) / &pr),
            (FormParam::P, int(2)),
            (FormParam::MinusPOverV, int(2)),
        ];
        for (d, want) in expected {
            let got = total_mass(&c, GroupTag::So2(d));
            if got != want {
                return Err(format!("p = {p}, d = {d}: mass {got}, expected {want}"));
            }
        }
        let elapsed = start.elapsed();
        if elapsed > MASS_BUDGET_PER_PRIME {
            return Err(format!("p = {p}: took {elapsed:?}"));
        }
    }
    Ok(format!("(p+1)/p, 2, 2 for p in {PRIMES:?}"))
}

fn criterion_2() -> Outcome {
    for p in PRIMES {
        let c = ctx(p);
        let pr = Rational::from_integer(BigInt::from(p));
        let want = int(4) * (&pr + int(1)) / &pr;
        let got = total_mass(&c, GroupTag::So3);
        if got != want {
            return Err(format!("p = {p}: total {got}, expected {want}"));
        }
        let all = RegionQp::all();
        let normalized = integrate_so3(&c, [&all, &all, &all], true);
        if normalized != int(1) {
            return Err(format!("p = {p}: normalized total {normalized}"));
        }
    }
    Ok("4(p+1)/p and normalized total 1".into())
}

fn criterion_3() -> Outcome {
    for p in PRIMES {
        let c = ctx(p);
        // Density 1 on each axis ball Z_p, certified by the integrator.
        for d in [FormParam::MinusV, FormParam::P, FormParam::MinusPOverV] {
            let m = integrate_so2(&c, d, &RegionQp::zp());
            if m != int(1) {
                return Err(format!("p = {p}, d = {d}: mass of Z_p is {m}, not 1"));
            }
        }
        let zp = RegionQp::zp();
        let got = integrate_so3(&c, [&zp, &zp, &zp], true);
        let pr = Rational::from_integer(BigInt::from(p));
        let want = &pr / (int(4) * (&pr + int(1)));
        if got != want {
            return Err(format!("p = {p}: {got}, expected {want}"));
        }
    }
    Ok("normalized mass of Z_p³ is p/(4(p+1))".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    for p in PRIMES {
        let c = ctx(p);
        let mut r = rng(400 + p);
        let a_plus = QuadForm::Ternary.gram(&c);
        let a_pure = Mat::diag(vec![-c.v_rat(), c.p_rat(), -c.v_rat() * c.p_rat()]);
        let t = |x: &Quat| quat_to_rotation(x).map_err(|e| e.to_string());
        for _ in 0..ISO_CASES {
            let (x, y) = (quat(&mut r, &c), quat(&mut r, &c));
            let mut lambda = rational(&mut r, p, -3, 3);
            if lambda.is_zero() {
                lambda = int(1);
            }
            let tx = t(&x)?;
            let prod = tx.compose(&t(&y)?).map_err(|e| e.to_string())?;
            if t(&x.mul(&y))? != prod {
                return Err(format!("p = {p}: T(xy) ≠ T(x)T(y) for x = {x}, y = {y}"));
            }
            if t(&x.scale(&lambda))? != tx {
                return Err(format!("p = {p}: T(λx) ≠ T(x) for x = {x}, λ = {lambda}"));
            }
            let m = tx.matrix();
            if sq(m, &a_plus) != a_plus || m.det() != int(1) {
                return Err(format!("p = {p}: T(x) not special orthogonal for x = {x}"));
            }
            let k = x.conj_action_matrix().map_err(|e| e.to_string())?;
            if sq(&k, &a_pure) != a_pure {
                return Err(format!("p = {p}: K(x) does not preserve diag(-v, p, -vp), x = {x}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > ISO_BUDGET {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{ISO_CASES} quaternion pairs per prime, {elapsed:.2?}"))
}

fn criterion_5() -> Outcome {
    let mut twins = 0;
    for p in SMALL_PRIMES {
        let c = ctx(p);
        let mut r = rng(500 + p);
        for _ in 0..CARDANO_CASES {
            let a = angles(&mut r, &c, true);
            match decompose_cardano(&cardano_matrix(&c, &a), 32).map_err(|e| e.to_string())? {
                Decomposition::Exact(b) if b == a => {}
                other => return Err(format!("p = {p}: {a} decomposed to {other:?}")),
            }
        }
        // Off the canonical branch the same matrix has the twin triple.
        for _ in 0..CARDANO_CASES {
            let a = angles(&mut r, &c, false);
            let m = cardano_matrix(&c, &a);
            let b = match decompose_cardano(&m, 32).map_err(|e| e.to_string())? {
                Decomposition::Exact(b) => b,
                other => return Err(format!("p = {p}: {a} gave inexact {other:?}")),
            };
            if b != a {
                if b != cardano_twin(&c, &a) || cardano_matrix(&c, &b) != m {
                    return Err(format!("p = {p}: {a} decomposed to unrelated {b}"));
                }
                twins += 1;
            }
        }
    }
    Ok(format!(
        "{CARDANO_CASES} triples with β ∈ Z_p per prime recovered exactly; \
         {twins} of {} unrestricted triples returned their twin",
        CARDANO_CASES * SMALL_PRIMES.len()
    ))
}

/// Forward-mode dual numbers: an oracle for the Jacobian entries.
#[derive(Clone)]
struct Dual(Rational, Rational);

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual(&self.0 * &o.0, &self.0 * &o.1 + &self.1 * &o.0)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let q = &self.0 / &o.0;
        Dual(q.clone(), (&self.1 - &q * &o.1) / &o.0)
    }
}

fn derivative_column(c: &PrimeCtx, x: &[Rational; 3], j: usize) -> [Rational; 3] {
    let k = |x: Rational| Dual(x, Rational::zero());
    let var = |i: usize| Dual(x[i].clone(), if i == j { int(1) } else { int(0) });
    let (a, b, g) = (var(0), var(1), var(2));
    let (p, v) = (k(c.p_rat()), k(c.v_rat()));
    let q0 = k(int(1)) - p.clone() * a.clone() * b.clone() * g.clone();
    let x1 = (p / v.clone() * b.clone() * g.clone() - a.clone()) / q0.clone();
    let x2 = (b.clone() - a.clone() * g.clone()) / q0.clone();
    let x3 = (g / v - a * b) / q0;
    [x1.1, x2.1, x3.1]
}

fn criterion_6() -> Outcome {
    for p in SMALL_PRIMES {
        let c = ctx(p);
        let mut r = rng(600 + p);
        for _ in 0..JACOBIAN_CASES {
            let a = angles(&mut r, &c, false);
            let j = jacobian_matrix(&c, &a).map_err(|e| e.to_string())?;
            let x = a.finite_values().map_err(|e| e.to_string())?;
            for col in 0..3 {
                let want = derivative_column(&c, &x, col);
                for (row, w) in want.iter().enumerate() {
                    if j.get(row, col) != w {
                        return Err(format!("p = {p}: J[{row}][{col}] wrong at {a}"));
                    }
                }
            }
            let w = jacobian_weight(&c, &a).map_err(|e| e.to_string())?;
            if w.direct != w.closed {
                return Err(format!("p = {p}: |det J| {} vs closed form {} at {a}", w.direct, w.closed));
            }
            if w.quotient != w.weight {
                return Err(format!("p = {p}: quotient {} vs weight {} at {a}", w.quotient, w.weight));
            }
        }
    }
    Ok(format!(
        "{JACOBIAN_CASES} triples per prime; entries match dual-number derivatives \
         (J₃₁ with the sign of ∂x3/∂α)"
    ))
}

fn criterion_7() -> Outcome {
    for p in SMALL_PRIMES {
        let c = ctx(p);
        let mut r = rng(700 + p);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..UNIT_QUOTIENT_CASES {
            let s = r.random_range(-UNIT_QUOTIENT_VALUATIONS..=UNIT_QUOTIENT_VALUATIONS);
            seen.insert(s);
            let beta = unit_times_power(&mut r, p, s, 1_000);
            let pb2 = c.p_rat() * &beta * &beta;
            let q = (Rational::one() - &pb2) / (Rational::one() + pb2);
            if c.abs_p(&q) != int(1) {
                return Err(format!("p = {p}: |(1 - pβ²)/(1 + pβ²)|_p ≠ 1 at β = {beta}"));
            }
        }
        if seen.len() != (2 * UNIT_QUOTIENT_VALUATIONS + 1) as usize {
            return Err(format!("p = {p}: valuations not all covered"));
        }
    }
    Ok(format!(
        "{UNIT_QUOTIENT_CASES} values of β per prime, v(β) in ±{UNIT_QUOTIENT_VALUATIONS}"
    ))
}

fn criterion_8() -> Outcome {
    for p in PRIMES {
        let c = ctx(p);
        let mut r = rng(800 + p);
        for _ in 0..MOBIUS_CASES {
            let d = FormParam::ALL[r.random_range(0..FormParam::ALL.len())];
            let alpha0 = if r.random_range(0..8) == 0 {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(rational(&mut r, p, -3, 3))
            };
            let ball = BallQp::new(rational(&mut r, p, -2, 3), r.random_range(-3..=4));
            let image = mobius_image(&c, d, &alpha0, &ball).map_err(|e| e.to_string())?;
            let before = integrate_so2(&c, d, &RegionQp::ball(ball.clone()));
            let after = integrate_so2(&c, d, &image);
            if before != after {
                return Err(format!("p = {p}, d = {d}, α₀ = {alpha0:?}, {ball:?}: {before} vs {after}"));
            }
            // Spot check that the image really is the translated ball.
            let f = Mobius::translation(&c, d, &alpha0);
            for _ in 0..5 {
                let depth = ball.k + r.random_range(0..4);
                let offset = unit_times_power(&mut r, p, depth, 50);
                let x = &ball.center + offset;
                if let ProjPoint::Finite(y) = f.apply(&ProjPoint::Finite(x.clone())) {
                    if !image.contains(&c, &y) {
                        return Err(format!("p = {p}: image misses f({x}) = {y}"));
                    }
                }
            }
        }
    }
    Ok(format!("{MOBIUS_CASES} (d, α₀, ball) per prime"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut worst = 1.0f64;
    for p in SMALL_PRIMES {
        let c = ctx(p);
        let gs = [
            ("R(1,0,0)", cardano_matrix(&c, &Angles::finite(int(1), int(0), int(0)))),
            ("T(i)", quat_to_rotation(&Quat::i(&c)).map_err(|e| e.to_string())?),
            ("R(1,2,3)", cardano_matrix(&c, &Angles::finite(int(1), int(2), int(3)))),
        ];
        for (k, (name, g)) in gs.iter().enumerate() {
            let seed = 900 + 10 * p + k as u64;
            let rep = invariance_check(&c, g, INVARIANCE_SAMPLES, INVARIANCE_DIGITS, seed, 1)
                .map_err(|e| e.to_string())?;
            if rep.dof == 0 {
                return Err(format!("p = {p}, g = {name}: no testable cells"));
            }
            if rep.rejected_at(SIGNIFICANCE) {
                return Err(format!("p = {p}, g = {name}: {rep:?}"));
            }
            worst = worst.min(rep.p_value);
        }
    }
    let elapsed = start.elapsed();
    if elapsed > INVARIANCE_BUDGET {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "3 translations per prime, {INVARIANCE_SAMPLES} samples each, smallest p-value {worst:.4} \
         (threshold {SIGNIFICANCE}), {elapsed:.2?}"
    ))
}

fn criterion_10() -> Outcome {
    for p in PRIMES {
        let c = ctx(p);
        let mut r = rng(1000 + p);
        for _ in 0..ALGEBRA_CASES {
            let (x, y) = (quat(&mut r, &c), quat(&mut r, &c));
            if x.mul(&y).nrd() != x.nrd() * y.nrd() {
                return Err(format!("p = {p}: nrd not multiplicative at {x}, {y}"));
            }
            if x.add(&y).trd() != x.trd() + y.trd() {
                return Err(format!("p = {p}: trd not additive at {x}, {y}"));
            }
            let lambda = rational(&mut r, p, -3, 3);
            if x.scale(&lambda).trd() != &lambda * x.trd() {
                return Err(format!("p = {p}: trd not homogeneous at {x}"));
            }
            let inv = x.inv().map_err(|e| e.to_string())?;
            let one = Quat::one(&c);
            if x.mul(&inv) != one || inv.mul(&x) != one {
                return Err(format!("p = {p}: inverse law fails at {x}"));
            }
            let det = x.left_regular().det_cofactor();
            if det != QExtElem::from_base(x.nrd(), c.v()) {
                return Err(format!("p = {p}: det of left regular representation ≠ nrd at {x}"));
            }
        }
        let k = Quat::k(&c);
        if k.mul(&k) != Quat::scalar(&c, c.v_rat() * c.p_rat()) {
            return Err(format!("p = {p}: k² = {}", k.mul(&k)));
        }
    }
    Ok(format!("{ALGEBRA_CASES} cases per identity per prime"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("normalization constants of SO(2)", criterion_1),
        ("total mass of SO(3)", criterion_2),
        ("mass of Z_p³", criterion_3),
        ("quaternion isomorphism", criterion_4),
        ("Cardano round trip", criterion_5),
        ("Jacobian identity", criterion_6),
        ("unit quotient", criterion_7),
        ("exact left invariance", criterion_8),
        ("statistical left invariance", criterion_9),
        ("quaternion algebra", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
