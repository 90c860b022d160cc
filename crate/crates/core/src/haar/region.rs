//! Ultrametric regions of Q_p: balls, shells, Z_p and shell tails.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{format_rational, int, parse_rational, PrimeCtx, Rational, Valuation};

/// `center + p^k Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallQp {
    pub center: Rational,
    pub k: i64,
}

impl BallQp {
    pub fn new(center: Rational, k: i64) -> Self {
        BallQp { center, k }
    }

    pub fn zp() -> Self {
        Self::new(Rational::zero(), 0)
    }

    pub fn contains(&self, ctx: &PrimeCtx, x: &Rational) -> bool {
        ctx.valuation(&(x - &self.center)) >= Valuation::Finite(self.k)
    }

    /// Balls are either disjoint or nested.
    pub fn intersects(&self, ctx: &PrimeCtx, other: &BallQp) -> bool {
        ctx.valuation(&(&self.center - &other.center)) >= Valuation::Finite(self.k.min(other.k))
    }

    /// The `p` balls of radius `p^-(k+1)` partitioning this one.
    pub fn children(&self, ctx: &PrimeCtx) -> Vec<BallQp> {
        let step = ctx.p_pow(self.k);
        (0..ctx.p() as i64)
            .map(|j| BallQp::new(&self.center + int(j) * &step, self.k + 1))
            .collect()
    }

    /// Additive Haar mass `p^-k`, with `Z_p` of mass 1.
    pub fn additive_mass(&self, ctx: &PrimeCtx) -> Rational {
        ctx.p_pow(-self.k)
    }

    fn valuations(&self, ctx: &PrimeCtx) -> ValRange {
        match ctx.valuation(&self.center) {
            Valuation::Finite(w) if w < self.k => ValRange::point(w),
            _ => ValRange::at_least(self.k),
        }
    }
}

/// `{σ : |σ|_p = p^k}` for `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShellQp {
    pub k: i64,
}

impl ShellQp {
    pub fn new(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::MalformedRegion(format!("shell index {k} must be at least 1")));
        }
        Ok(ShellQp { k })
    }

    /// Additive Haar mass `p^k (1 - 1/p)`.
    pub fn additive_mass(&self, ctx: &PrimeCtx) -> Rational {
        ctx.p_pow(self.k) * (Rational::one() - Rational::one() / ctx.p_rat())
    }
}

/// Valuations `lo..=hi`; `None` bounds are infinite (`hi = None` includes 0).
#[derive(Debug, Clone, Copy)]
struct ValRange {
    lo: Option<i64>,
    hi: Option<i64>,
}

impl ValRange {
    fn point(w: i64) -> Self {
        ValRange {
            lo: Some(w),
            hi: Some(w),
        }
    }

    fn at_least(k: i64) -> Self {
        ValRange { lo: Some(k), hi: None }
    }

    fn at_most(k: i64) -> Self {
        ValRange { lo: None, hi: Some(k) }
    }

    fn meets(self, o: ValRange) -> bool {
        let lo = match (self.lo, o.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match (lo, hi) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        }
    }
}

/// One component of a region.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Piece {
    Ball(BallQp),
    Shell(ShellQp),
    /// All of Z_p.
    Zp,
    /// Shells `k ≥ K`.
    Tail(i64),
}

impl Piece {
    /// Valuations of the elements, for the pieces defined by valuation.
    fn valuations(&self) -> Option<ValRange> {
        match self {
            Piece::Ball(_) => None,
            Piece::Shell(s) => Some(ValRange::point(-s.k)),
            Piece::Zp => Some(ValRange::at_least(0)),
            Piece::Tail(k) => Some(ValRange::at_most(-k)),
        }
    }

    fn intersects(&self, ctx: &PrimeCtx, other: &Piece) -> bool {
        match (self, other) {
            (Piece::Ball(a), Piece::Ball(b)) => a.intersects(ctx, b),
            // A ball meets a set defined by valuations iff some valuation of
            // the ball is allowed: its elements all have valuation v(c) when
            // v(c) < k, and every valuation ≥ k otherwise.
            (Piece::Ball(b), o) | (o, Piece::Ball(b)) => {
                b.valuations(ctx).meets(o.valuations().expect("not a ball"))
            }
            (a, b) => a
                .valuations()
                .expect("not a ball")
                .meets(b.valuations().expect("not a ball")),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Ball(b) => write!(f, "ball:{},{}", format_rational(&b.center), b.k),
            Piece::Shell(s) => write!(f, "shell:{}", s.k),
            Piece::Zp => f.write_str("zp"),
            Piece::Tail(k) => write!(f, "tail:{k}"),
        }
    }
}

/// A finite union of pairwise disjoint pieces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionQp {
    pieces: Vec<Piece>,
}

impl RegionQp {
    pub fn new(ctx: &PrimeCtx, pieces: Vec<Piece>) -> Result<Self> {
        for piece in &pieces {
            if let Piece::Tail(k) = piece {
                if *k < 1 {
                    return Err(Error::MalformedRegion(format!("tail index {k} must be at least 1")));
                }
            }
            if let Piece::Shell(s) = piece {
                ShellQp::new(s.k)?;
            }
        }
        for (i, a) in pieces.iter().enumerate() {
            if let Some(b) = pieces[i + 1..].iter().find(|b| a.intersects(ctx, b)) {
                return Err(Error::MalformedRegion(format!("pieces `{a}` and `{b}` overlap")));
            }
        }
        Ok(RegionQp { pieces })
    }

    pub fn empty() -> Self {
        RegionQp { pieces: Vec::new() }
    }

    pub fn zp() -> Self {
        RegionQp {
            pieces: vec![Piece::Zp],
        }
    }

    /// Z_p together with every shell: all of Q_p.
    pub fn all() -> Self {
        RegionQp {
            pieces: vec![Piece::Zp, Piece::Tail(1)],
        }
    }

    pub fn ball(ball: BallQp) -> Self {
        RegionQp {
            pieces: vec![Piece::Ball(ball)],
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contains(&self, ctx: &PrimeCtx, x: &Rational) -> bool {
        let w = ctx.valuation(x);
        self.pieces.iter().any(|piece| match piece {
            Piece::Ball(b) => b.contains(ctx, x),
            Piece::Shell(s) => w == Valuation::Finite(-s.k),
            Piece::Zp => w >= Valuation::Finite(0),
            Piece::Tail(k) => w <= Valuation::Finite(-k),
        })
    }

    /// True when no piece of `self` meets a piece of `other`.
    pub fn is_disjoint_from(&self, ctx: &PrimeCtx, other: &RegionQp) -> bool {
        self.pieces
            .iter()
            .all(|a| other.pieces.iter().all(|b| !a.intersects(ctx, b)))
    }

    /// Parses `ball:c,k`, `shell:k`, `zp`, `tail:K` and `all`, separated by
    /// commas.
    pub fn parse(ctx: &PrimeCtx, s: &str) -> Result<Self> {
        let bad = |why: String| Error::MalformedRegion(why);
        let mut tokens = s.split(',').map(str::trim).filter(|t| !t.is_empty());
        let mut pieces = Vec::new();
        let int_of = |t: &str| -> Result<i64> {
            t.trim()
                .parse::<i64>()
                .map_err(|_| bad(format!("`{t}` is not an integer")))
        };
        while let Some(tok) = tokens.next() {
            if let Some(c) = tok.strip_prefix("ball:") {
                let center = parse_rational(c).map_err(|e| bad(e.to_string()))?;
                let k = tokens
                    .next()
                    .ok_or_else(|| bad(format!("`{tok}` needs a radius: ball:c,k")))?;
                pieces.push(Piece::Ball(BallQp::new(center, int_of(k)?)));
            } else if let Some(k) = tok.strip_prefix("shell:") {
                pieces.push(Piece::Shell(ShellQp::new(int_of(k)?)?));
            } else if let Some(k) = tok.strip_prefix("tail:") {
                pieces.push(Piece::Tail(int_of(k)?));
            } else if tok == "zp" {
                pieces.push(Piece::Zp);
            } else if tok == "all" {
                pieces.extend([Piece::Zp, Piece::Tail(1)]);
            } else {
                return Err(bad(format!("unknown region token `{tok}`")));
            }
        }
        RegionQp::new(ctx, pieces)
    }
}

impl fmt::Display for RegionQp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(Piece::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Display for BallQp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ball:{},{}", format_rational(&self.center), self.k)
    }
}

/// `{x : v(x) < w}` as pieces.
fn valuation_below(ctx: &PrimeCtx, w: i64) -> Vec<Piece> {
    if w <= 0 {
        return vec![Piece::Tail(1 - w)];
    }
    let mut out = vec![Piece::Tail(1)];
    for j in 0..w {
        out.extend(unit_shell_balls(ctx, j, None));
    }
    out
}

/// `{x : v(x) = j}` as the balls `t p^j + p^(j+1) Z_p`, `t = 1..p-1`, minus
/// the one with leading digit `skip`.
fn unit_shell_balls(ctx: &PrimeCtx, j: i64, skip: Option<u64>) -> Vec<Piece> {
    (1..ctx.p())
        .filter(|&t| Some(t) != skip)
        .map(|t| Piece::Ball(BallQp::new(int(t as i64) * ctx.p_pow(j), j + 1)))
        .collect()
}

/// `Q_p ∖ ball`, as a disjoint union.
pub fn complement_of_ball(ctx: &PrimeCtx, ball: &BallQp) -> RegionQp {
    let m = ball.k;
    let pieces = match ctx.valuation(&ball.center) {
        Valuation::Finite(w) if w < m => {
            // Everything off valuation w, the other leading digits at
            // valuation w, then the siblings along the chain
            // B(a, w+1) ⊃ B(a, w+2) ⊃ … ⊃ B(a, m).
            let a = &ball.center;
            let lead = ctx.residue(&(a * ctx.p_pow(-w))).expect("unit part");
            let mut out = valuation_below(ctx, w);
            out.push(Piece::Ball(BallQp::new(Rational::zero(), w + 1)));
            out.extend(unit_shell_balls(ctx, w, Some(lead)));
            for j in w + 1..m {
                let step = ctx.p_pow(j);
                let here = ctx.residue(&((a - a_mod(ctx, a, j)) / &step)).expect("p-integral");
                for t in (0..ctx.p()).filter(|&t| t != here) {
                    let c = a_mod(ctx, a, j) + int(t as i64) * &step;
                    out.push(Piece::Ball(BallQp::new(c, j + 1)));
                }
            }
            out
        }
        // The ball is p^m Z_p.
        _ => valuation_below(ctx, m),
    };
    RegionQp { pieces }
}

/// The representative of `a + p^j Z_p` with digits below `p^j` only, i.e.
/// `a` truncated to absolute precision `j`.
fn a_mod(ctx: &PrimeCtx, a: &Rational, j: i64) -> Rational {
    let w = ctx.val(a);
    if j <= w {
        return Rational::zero();
    }
    let unit = a * ctx.p_pow(-w);
    let r = ctx
        .residue_mod(&unit, (j - w) as u32)
        .expect("unit part is p-integral");
    Rational::from_integer(r.into()) * ctx.p_pow(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    #[test]
    fn literals() {
        let c = ctx(3);
        let r = RegionQp::parse(&c, "ball:1/3,2, shell:2,tail:5").unwrap();
        assert_eq!(r.pieces().len(), 3);
        assert_eq!(r.to_string(), "ball:1/3,2,shell:2,tail:5");
        assert_eq!(RegionQp::parse(&c, "all").unwrap(), RegionQp::all());
        for bad in ["ball:1", "shell:0", "tail:0", "disk:1", "zp,ball:1,0", "tail:2,shell:3"] {
            assert!(
                matches!(RegionQp::parse(&c, bad), Err(Error::MalformedRegion(_))),
                "{bad}"
            );
        }
        assert!(RegionQp::parse(&c, "zp,shell:1,tail:2").is_ok());
    }

    #[test]
    fn balls_nest_or_separate() {
        let c = ctx(5);
        let balls = [
            BallQp::new(int(0), 0),
            BallQp::new(int(1), 1),
            BallQp::new(int(6), 1),
            BallQp::new(int(6), 2),
            BallQp::new(rat(1, 5), -1),
            BallQp::new(rat(2, 25), 3),
        ];
        for a in &balls {
            for b in &balls {
                let meet = a.intersects(&c, b);
                let nested = (a.k <= b.k && a.contains(&c, &b.center))
                    || (b.k <= a.k && b.contains(&c, &a.center));
                assert_eq!(meet, nested, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn children_partition() {
        let c = ctx(3);
        let b = BallQp::new(rat(1, 3), -1);
        let kids = b.children(&c);
        assert_eq!(kids.len(), 3);
        let total: Rational = kids.iter().map(|k| k.additive_mass(&c)).sum();
        assert_eq!(total, b.additive_mass(&c));
        assert!(RegionQp::new(&c, kids.into_iter().map(Piece::Ball).collect()).is_ok());
    }

    #[test]
    fn complement_is_disjoint_and_covers() {
        for p in [3, 5] {
            let c = ctx(p);
            for ball in [
                BallQp::new(int(0), 2),
                BallQp::new(int(0), -2),
                BallQp::new(rat(7, 9), 3),
                BallQp::new(int(12), 4),
                BallQp::new(rat(-1, 2), 1),
            ] {
                let comp = complement_of_ball(&c, &ball);
                let comp = RegionQp::new(&c, comp.pieces().to_vec()).expect("disjoint");
                assert!(comp.is_disjoint_from(&c, &RegionQp::ball(ball.clone())));
                for n in -40..40 {
                    for x in [int(n), rat(n, p as i64), rat(n, (p * p) as i64), rat(n * p as i64, 7)] {
                        assert_ne!(ball.contains(&c, &x), comp.contains(&c, &x), "{ball:?} {x}");
                    }
                }
            }
        }
    }
}
