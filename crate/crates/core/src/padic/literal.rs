//! Textual number formats: `a/b`, `a`, `p^v * [d0,d1,...]` and `inf`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PadicApprox, ProjPoint, Rational};
use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// A rational literal or the token `inf`.
pub fn parse_proj(s: &str) -> Result<ProjPoint> {
    if s.trim() == "inf" {
        Ok(ProjPoint::Infinity)
    } else {
        parse_rational(s).map(ProjPoint::Finite)
    }
}

/// Parses `p^v * [d0,...,dN-1]` (or `0`) for the prime `p`.
pub fn parse_padic(s: &str, p: u64) -> Result<PadicApprox> {
    let s = s.trim();
    if s == "0" {
        return Ok(PadicApprox::zero(p));
    }
    let bad = |why: &str| Error::Parse(format!("invalid p-adic literal `{s}`: {why}"));
    let (head, body) = s.split_once('*').ok_or_else(|| bad("missing `*`"))?;
    let (base, exp) = head.trim().split_once('^').ok_or_else(|| bad("missing `^`"))?;
    let base: u64 = base.trim().parse().map_err(|_| bad("bad base"))?;
    if base != p {
        return Err(bad("base differs from the prime"));
    }
    let exp: i64 = exp.trim().parse().map_err(|_| bad("bad exponent"))?;
    let body = body
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| bad("digits must be bracketed"))?;
    let digits = body
        .split(',')
        .map(|d| d.trim().parse::<u64>().map_err(|_| bad("bad digit")))
        .collect::<Result<Vec<_>>>()?;
    if digits.is_empty() || digits[0] == 0 {
        return Err(bad("leading digit must be nonzero"));
    }
    PadicApprox::from_digits(p, exp, &digits)
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_proj(x: &ProjPoint) -> String {
    match x {
        ProjPoint::Finite(x) => format_rational(x),
        ProjPoint::Infinity => "inf".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, rat, Valuation};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn projective() {
        assert_eq!(parse_proj("inf").unwrap(), ProjPoint::Infinity);
        assert_eq!(format_proj(&parse_proj("2/3").unwrap()), "2/3");
    }

    #[test]
    fn padic_literals() {
        let a = parse_padic("3^2 * [1,0]", 3).unwrap();
        assert_eq!(a.valuation(), Valuation::Finite(2));
        assert_eq!(a.digits(), vec![1, 0]);
        assert_eq!(a.to_string(), "3^2 * [1,0]");
        assert!(parse_padic("5^0 * [1]", 3).is_err());
        assert!(parse_padic("3^0 * [0,1]", 3).is_err());
        assert!(parse_padic("3^0 * [1,3]", 3).is_err());
        assert!(parse_padic("0", 3).unwrap().is_zero());
    }
}
