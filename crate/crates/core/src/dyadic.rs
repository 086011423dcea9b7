//! Dyadic rationals `mant · 2^expo` over arbitrary-precision integers.
//!
//! Operations are exact. Nothing is normalized implicitly: `3·2^1` and
//! `6·2^0` are different representations of the same number and compare
//! equal. [`Dyadic::canonicalize`] strips trailing zero bits when a
//! canonical form is wanted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A precision exponent `k`, standing for the error radius `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prec(pub i64);

impl Prec {
    /// `2^k` as an exact rational.
    pub fn radius(self) -> BigRational {
        pow2_rational(self.0)
    }
}

impl std::ops::Add<i64> for Prec {
    type Output = Prec;
    fn add(self, rhs: i64) -> Prec {
        Prec(self.0 + rhs)
    }
}

impl std::ops::Sub<i64> for Prec {
    type Output = Prec;
    fn sub(self, rhs: i64) -> Prec {
        Prec(self.0 - rhs)
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.0)
    }
}

pub(crate) fn pow2_rational(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs() as usize;
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new_raw(BigInt::one(), p)
    }
}

fn gap_to_usize(gap: &BigInt) -> usize {
    gap.to_usize()
        .expect("exponent gap does not fit in memory")
}

/// Shifts `m` right by `n` bits, rounding toward zero.
pub(crate) fn shr_trunc(m: &BigInt, n: usize) -> BigInt {
    if m.is_negative() {
        -((-m) >> n)
    } else {
        m >> n
    }
}

#[derive(Clone)]
pub struct Dyadic {
    mant: BigInt,
    expo: BigInt,
}

impl Dyadic {
    pub fn new(mant: impl Into<BigInt>, expo: impl Into<BigInt>) -> Self {
        Dyadic { mant: mant.into(), expo: expo.into() }
    }

    pub fn zero() -> Self {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Self {
        Dyadic::new(1, 0)
    }

    /// Embeds an integer as `n · 2^0`.
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn expo(&self) -> &BigInt {
        &self.expo
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Sign {
        self.mant.sign()
    }

    /// Bit length of the mantissa's magnitude (0 for zero).
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Odd mantissa, or `0·2^0`. Idempotent and denotation-preserving.
    pub fn canonicalize(&self) -> Dyadic {
        match self.mant.trailing_zeros() {
            None => Dyadic::zero(),
            Some(0) => self.clone(),
            Some(tz) => Dyadic {
                mant: &self.mant >> tz as usize,
                expo: &self.expo + BigInt::from(tz),
            },
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        match self.expo.cmp(&other.expo) {
            Ordering::Equal => Dyadic { mant: &self.mant + &other.mant, expo: self.expo.clone() },
            Ordering::Less => {
                let gap = gap_to_usize(&(&other.expo - &self.expo));
                Dyadic { mant: &self.mant + (&other.mant << gap), expo: self.expo.clone() }
            }
            Ordering::Greater => {
                let gap = gap_to_usize(&(&self.expo - &other.expo));
                Dyadic { mant: (&self.mant << gap) + &other.mant, expo: other.expo.clone() }
            }
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, expo: &self.expo + &other.expo }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, expo: self.expo.clone() }
    }

    /// `self · 2^n`; negative `n` is allowed.
    pub fn shiftl(&self, n: i64) -> Dyadic {
        Dyadic { mant: self.mant.clone(), expo: &self.expo + n }
    }

    pub fn shiftl_big(&self, n: &BigInt) -> Dyadic {
        Dyadic { mant: self.mant.clone(), expo: &self.expo + n }
    }

    pub fn nat_pow(&self, n: u64) -> Dyadic {
        let e = u32::try_from(n).expect("exponent too large");
        Dyadic { mant: self.mant.pow(e), expo: &self.expo * n }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), expo: self.expo.clone() }
    }

    /// Exact comparison. Aligns exponents by shifting one mantissa; never
    /// builds a fraction.
    pub fn compare(&self, other: &Dyadic) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb || sa == Sign::NoSign {
            return sa.cmp(&sb);
        }
        // Same nonzero sign. Cheap magnitude check before shifting.
        let mag_a = &self.expo + BigInt::from(self.mant.bits());
        let mag_b = &other.expo + BigInt::from(other.mant.bits());
        let by_mag = mag_a.cmp(&mag_b);
        if by_mag != Ordering::Equal {
            return if sa == Sign::Plus { by_mag } else { by_mag.reverse() };
        }
        match self.expo.cmp(&other.expo) {
            Ordering::Equal => self.mant.cmp(&other.mant),
            Ordering::Less => {
                let gap = gap_to_usize(&(&other.expo - &self.expo));
                self.mant.cmp(&(&other.mant << gap))
            }
            Ordering::Greater => {
                let gap = gap_to_usize(&(&self.expo - &other.expo));
                (&self.mant << gap).cmp(&other.mant)
            }
        }
    }

    /// Some value within `2^k` of `self / y`. With `x = a·2^ex`,
    /// `y = b·2^ey` the quotient at exponent `k` has mantissa
    /// `a·2^(ex-ey-k) / b`, truncated: one integer division.
    pub fn app_div(&self, y: &Dyadic, k: Prec) -> Result<Dyadic> {
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let shift = &self.expo - &y.expo - BigInt::from(k.0);
        let shift = shift.to_i64().expect("division exponent gap out of range");
        let q = if shift >= 0 {
            (&self.mant << shift as usize) / &y.mant
        } else {
            &self.mant / (&y.mant << shift.unsigned_abs() as usize)
        };
        Ok(Dyadic::new(q, k.0))
    }

    /// Truncates toward zero at exponent `k`; unchanged if already coarser.
    pub fn app_approx(&self, k: Prec) -> Dyadic {
        let gap = BigInt::from(k.0) - &self.expo;
        match gap.to_i64() {
            Some(g) if g <= 0 => self.clone(),
            Some(g) if (g as u64) < self.mant_bits() => {
                Dyadic::new(shr_trunc(&self.mant, g as usize), k.0)
            }
            _ => Dyadic::new(0, k.0),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let e = self.expo.to_i64().expect("exponent out of range for rational conversion");
        BigRational::from_integer(self.mant.clone()) * pow2_rational(e)
    }

    /// Exact decimal expansion. Always terminates since `2^-n = 5^n / 10^n`.
    pub fn to_decimal_exact(&self) -> String {
        if !self.expo.is_negative() {
            return (&self.mant << gap_to_usize(&self.expo)).to_string();
        }
        let places = gap_to_usize(&-&self.expo);
        let scaled = &self.mant * num_traits::pow(BigInt::from(5), places);
        let s = format_fixed(&scaled, places);
        // Trim trailing zeros but keep at least one decimal.
        let trimmed = s.trim_end_matches('0');
        if trimmed.ends_with('.') {
            format!("{trimmed}0")
        } else {
            trimmed.to_string()
        }
    }

    /// Rounds to the nearest multiple of `10^-places` (ties away from zero)
    /// and formats with exactly `places` decimals.
    pub fn to_decimal_rounded(&self, places: usize) -> String {
        let scaled = &self.mant * num_traits::pow(BigInt::from(10), places);
        let n = if self.expo.is_negative() {
            let shift = gap_to_usize(&-&self.expo);
            let den = BigInt::one() << shift;
            let (q, r) = scaled.abs().div_rem(&den);
            let q = if (r << 1usize) >= den { q + 1 } else { q };
            if scaled.is_negative() { -q } else { q }
        } else {
            scaled << gap_to_usize(&self.expo)
        };
        format_fixed(&n, places)
    }
}

/// Formats `n · 10^-places` with exactly `places` decimals.
pub(crate) fn format_fixed(n: &BigInt, places: usize) -> String {
    let digits = n.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if n.is_negative() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.expo)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses the debug form `mant*2^expo`, e.g. `-3*2^-4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseDyadic(s.to_string());
        let (m, e) = s.trim().split_once("*2^").ok_or_else(bad)?;
        let mant = m.trim().parse::<BigInt>().map_err(|_| bad())?;
        let expo = e.trim().parse::<BigInt>().map_err(|_| bad())?;
        Ok(Dyadic { mant, expo })
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                Dyadic::$method(self, rhs)
            }
        }
        impl std::ops::$tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                Dyadic::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic::neg(self)
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic::neg(&self)
    }
}
