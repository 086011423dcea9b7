//! Independent references for testing: exact partial sums of alternating
//! series and checked-in decimal expansions of π, e and √2.
//!
//! Nothing here is fast. The point is to share no code path with the
//! approximate machinery it checks.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::stream::Stream;

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Exact partial sums `S_k = Σ_{i<k} (−1)^i n_i/d_i` and `S_{k+1}`, ordered
/// as `(low, high)`. For an admissible series the limit lies in between.
pub fn oracle_alt_sum_bracket<A: crate::approx::AppRationals>(
    num: &Stream<A>,
    den: &Stream<A>,
    k: usize,
) -> Result<(Rational, Rational)> {
    let mut sum = Rational::zero();
    let mut s_k = Rational::zero();
    for (i, (n, d)) in num.iter().zip(den.iter()).take(k + 1).enumerate() {
        if i == k {
            s_k = sum.clone();
        }
        let d = d.to_rational();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let term = n.to_rational() / d;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(if s_k <= sum { (s_k, sum) } else { (sum, s_k) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitAsset {
    Pi,
    E,
    Sqrt2,
}

impl DigitAsset {
    fn raw(self) -> &'static str {
        match self {
            DigitAsset::Pi => include_str!("../assets/pi.txt"),
            DigitAsset::E => include_str!("../assets/e.txt"),
            DigitAsset::Sqrt2 => include_str!("../assets/sqrt2.txt"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DigitAsset::Pi => "pi",
            DigitAsset::E => "e",
            DigitAsset::Sqrt2 => "sqrt2",
        }
    }
}

impl FromStr for DigitAsset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(DigitAsset::Pi),
            "e" => Ok(DigitAsset::E),
            "sqrt2" => Ok(DigitAsset::Sqrt2),
            other => Err(Error::UnknownAsset(other.to_string())),
        }
    }
}

/// Parses an asset: a header `name digits=N`, then the expansion with its
/// decimal point. Returns the expansion.
pub fn parse_digit_asset(text: &str) -> Result<(String, usize, String)> {
    let bad = || Error::UnknownAsset(text.lines().next().unwrap_or("").to_string());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(bad)?;
    let (name, count) = header.split_once(" digits=").ok_or_else(bad)?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    let body: String = lines.flat_map(|l| l.chars()).filter(|c| !c.is_whitespace()).collect();
    let decimals = body.split_once('.').map(|(_, f)| f.len()).ok_or_else(bad)?;
    if decimals < count {
        return Err(bad());
    }
    Ok((name.to_string(), count, body))
}

/// The golden expansion of `name` (`pi`, `e` or `sqrt2`), e.g.
/// `"3.14159…"`, with at least 3100 decimals.
pub fn digits_file(name: &str) -> Result<String> {
    let asset: DigitAsset = name.parse()?;
    let (_, _, body) = parse_digit_asset(asset.raw())?;
    Ok(body)
}

/// Reads a decimal string `[-]int[.frac]` as `n · 10^-places`, padding or
/// truncating the fraction to `places` digits.
pub fn decimal_to_scaled(s: &str, places: usize) -> Option<BigInt> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut frac: String = frac.chars().take(places).collect();
    while frac.len() < places {
        frac.push('0');
    }
    let n: BigInt = format!("{int}{frac}").parse().ok()?;
    Some(if neg { -n } else { n })
}

/// Whether `candidate` and `reference`, both read to `places` decimals, differ
/// by at most one unit in the last place.
pub fn agrees_within_ulp(candidate: &str, reference: &str, places: usize) -> bool {
    match (decimal_to_scaled(candidate, places), decimal_to_scaled(reference, places)) {
        (Some(a), Some(b)) => (a - b).abs() <= BigInt::from(1),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::series::{factorials, odds, powers};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exp_minus_one_bracket() {
        let (lo, hi) = oracle_alt_sum_bracket(&powers(Dyadic::one()), &factorials::<Dyadic>(), 10).unwrap();
        // S_10 and S_11 differ by the term 1/10!.
        assert_eq!(&hi - &lo, q(1, 3_628_800));
        let reference = q(3_678_794_411, 10_000_000_000);
        assert!(lo <= reference && reference <= hi);
    }

    #[test]
    fn zero_series_bracket() {
        let zeros = powers(Dyadic::zero()).map(|_| Dyadic::zero());
        let (lo, hi) = oracle_alt_sum_bracket(&zeros, &odds::<Dyadic>(), 5).unwrap();
        assert!(lo.is_zero() && hi.is_zero());
    }

    #[test]
    fn leibniz_bracket() {
        let ones = powers(Dyadic::one());
        let (lo, hi) = oracle_alt_sum_bracket(&ones, &odds::<Dyadic>(), 3).unwrap();
        assert_eq!((lo, hi), (q(76, 105), q(13, 15)));
    }

    #[test]
    fn zero_denominator_errors() {
        let r = oracle_alt_sum_bracket(&powers(Dyadic::one()), &powers(Dyadic::zero()), 3);
        assert_eq!(r, Err(Error::DivisionByZero));
    }

    #[test]
    fn bracket_widths_shrink() {
        let x = Dyadic::new(-3, -2);
        let (num, den) = (powers(x.abs()), factorials::<Dyadic>());
        let widths: Vec<Rational> = (0..25)
            .map(|k| {
                let (lo, hi) = oracle_alt_sum_bracket(&num, &den, k).unwrap();
                hi - lo
            })
            .collect();
        assert!(widths.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn golden_prefixes() {
        assert!(digits_file("pi").unwrap().starts_with("3.14159265358979323846"));
        assert!(digits_file("e").unwrap().starts_with("2.71828182845904523536"));
        assert!(digits_file("sqrt2").unwrap().starts_with("1.41421356237309504880"));
        for name in ["pi", "e", "sqrt2"] {
            let body = digits_file(name).unwrap();
            assert!(body.len() >= 3102, "{name}");
        }
        assert!(matches!(digits_file("tau"), Err(Error::UnknownAsset(_))));
    }

    #[test]
    fn asset_format() {
        let (name, n, body) = parse_digit_asset("x digits=3\n1.2345\n").unwrap();
        assert_eq!((name.as_str(), n, body.as_str()), ("x", 3, "1.2345"));
        assert!(parse_digit_asset("x digits=9\n1.2345\n").is_err());
        assert!(parse_digit_asset("garbage").is_err());
    }

    #[test]
    fn ulp_comparison() {
        assert!(agrees_within_ulp("3.1416", "3.14159265", 4));
        assert!(agrees_within_ulp("3.1415", "3.14159265", 4));
        assert!(!agrees_within_ulp("3.1417", "3.14159265", 4));
        assert!(agrees_within_ulp("0.99999", "1.00000", 5));
        assert!(agrees_within_ulp("-0.5", "-0.49", 1));
        assert!(!agrees_within_ulp("abc", "1.0", 1));
    }
}
