//! Real numbers as the completion of the dyadics.
//!
//! A [`Real`] is a function from a precision `2^k` to a dyadic within `2^k`
//! of the number it denotes. Any such function is regular:
//! `|x(k₁) − x(k₂)| ≤ 2^k₁ + 2^k₂`. Precisions are powers of two
//! throughout; [`Real::approx_within`] accepts an arbitrary positive
//! rational and rounds it down to one.
//!
//! Functions on reals are built by lifting uniformly continuous functions on
//! dyadics with [`bind`] (one argument) or [`map2`] (two arguments). Equality
//! of reals is undecidable, so there is no `PartialEq`.
//!
//! Approximations are memoized per precision. Operations with preconditions
//! that cannot be checked once and for all (division, square root) check
//! what they can when the real is built and panic if a later approximation
//! contradicts the caller's promise.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::approx::qdlog2;
use crate::dyadic::{Dyadic, Prec};
use crate::error::{Error, Result};

type ApproxFn = dyn Fn(Prec) -> Dyadic + Send + Sync;

#[derive(Clone)]
pub struct Real(Arc<Node>);

struct Node {
    approx: Box<ApproxFn>,
    cache: Option<Mutex<HashMap<i64, Dyadic>>>,
}

impl Real {
    /// Wraps an approximation function. `f(k)` must lie within `2^k` of
    /// the intended value for every `k`.
    pub fn new(f: impl Fn(Prec) -> Dyadic + Send + Sync + 'static) -> Real {
        Real(Arc::new(Node { approx: Box::new(f), cache: Some(Mutex::default()) }))
    }

    fn uncached(f: impl Fn(Prec) -> Dyadic + Send + Sync + 'static) -> Real {
        Real(Arc::new(Node { approx: Box::new(f), cache: None }))
    }

    /// A dyadic within `2^k` of this real.
    pub fn approx(&self, k: Prec) -> Dyadic {
        let Some(cache) = &self.0.cache else {
            return (self.0.approx)(k);
        };
        if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&k.0) {
            return hit.clone();
        }
        // Computed outside the lock; a racing thread computes the same value.
        let v = (self.0.approx)(k);
        cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .entry(k.0)
            .or_insert(v)
            .clone()
    }

    /// A dyadic within `eps` of this real.
    pub fn approx_within(&self, eps: &BigRational) -> Result<Dyadic> {
        Ok(self.approx(Prec(qdlog2(eps)?)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Real {
        unit(Dyadic::from_int(n))
    }

    pub fn from_rational(q: BigRational) -> Real {
        if q.is_integer() {
            return unit(Dyadic::from_int(q.to_integer()));
        }
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        Real::new(move |k| num.app_div(&den, k).expect("denominator is positive"))
    }

    /// `self · 2^n`, exact.
    pub fn shiftl(&self, n: i64) -> Real {
        let x = self.clone();
        Real::uncached(move |k| x.approx(k - n).shiftl(n))
    }

    /// An integer `b` with `|self| ≤ 2^b`, from one coarse approximation.
    fn magnitude_bound(&self) -> i64 {
        // |x| ≤ |x(0)| + 1.
        let bound = self.approx(Prec(0)).abs().add(&Dyadic::one());
        ceil_log2(&bound)
    }

    pub fn pow(&self, n: u64) -> Real {
        match n {
            0 => Real::from_int(1),
            1 => self.clone(),
            _ if n % 2 == 0 => real_square(&self.pow(n / 2)),
            _ => real_mul(self, &self.pow(n - 1)),
        }
    }
}

/// The least `b` with `x ≤ 2^b`, for positive `x`.
pub(crate) fn ceil_log2(x: &Dyadic) -> i64 {
    debug_assert!(x.signum() == num_bigint::Sign::Plus);
    let c = x.canonicalize();
    let bits = c.mant_bits() as i64;
    let e = i64::try_from(c.expo()).expect("exponent out of range");
    if bits == 1 {
        e
    } else {
        e + bits
    }
}

/// Largest `b` with `2^b ≤ x`, for positive `x`.
pub(crate) fn floor_log2(x: &Dyadic) -> i64 {
    debug_assert!(x.signum() == num_bigint::Sign::Plus);
    let e = i64::try_from(x.expo()).expect("exponent out of range");
    e + x.mant_bits() as i64 - 1
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Real").field(&self.approx(Prec(-20)).to_decimal_rounded(6)).finish()
    }
}

/// A function from dyadics into the reals with a modulus of uniform
/// continuity: if `|a − b| ≤ 2^modulus(k)` then `map(a)` and `map(b)` are
/// within `2^k`.
#[derive(Clone)]
pub struct UcFun {
    map: Arc<dyn Fn(&Dyadic) -> Real + Send + Sync>,
    modulus: Arc<dyn Fn(Prec) -> Prec + Send + Sync>,
}

impl UcFun {
    pub fn new(
        map: impl Fn(&Dyadic) -> Real + Send + Sync + 'static,
        modulus: impl Fn(Prec) -> Prec + Send + Sync + 'static,
    ) -> UcFun {
        UcFun { map: Arc::new(map), modulus: Arc::new(modulus) }
    }

    /// A 1-Lipschitz function on dyadics.
    pub fn lipschitz(map: impl Fn(&Dyadic) -> Real + Send + Sync + 'static) -> UcFun {
        UcFun::new(map, |k| k)
    }

    pub fn apply(&self, x: &Dyadic) -> Real {
        (self.map)(x)
    }

    pub fn modulus(&self, k: Prec) -> Prec {
        (self.modulus)(k)
    }
}

/// The embedding of a dyadic: every approximation is the point itself.
pub fn unit(x: Dyadic) -> Real {
    Real::uncached(move |_| x.clone())
}

/// Lifts `f` to the completion:
/// `bind(f, x)(k) = f(x(μ_f(k − 1)))(k − 1)`.
pub fn bind(f: &UcFun, x: &Real) -> Real {
    let (f, x) = (f.clone(), x.clone());
    Real::new(move |k| {
        let half = k - 1;
        f.apply(&x.approx(f.modulus(half))).approx(half)
    })
}

/// Lifts an exact binary dyadic operation. `schedule(k)` gives the
/// precisions at which to sample `x` and `y` so that `op` of the samples
/// lies within `2^k` of the true result.
pub fn map2(
    op: impl Fn(&Dyadic, &Dyadic) -> Dyadic + Send + Sync + 'static,
    schedule: impl Fn(Prec) -> (Prec, Prec) + Send + Sync + 'static,
    x: &Real,
    y: &Real,
) -> Real {
    let (x, y) = (x.clone(), y.clone());
    Real::new(move |k| {
        let (kx, ky) = schedule(k);
        op(&x.approx(kx), &y.approx(ky))
    })
}

pub fn real_add(x: &Real, y: &Real) -> Real {
    map2(Dyadic::add, |k| (k - 1, k - 1), x, y)
}

pub fn real_neg(x: &Real) -> Real {
    let x = x.clone();
    Real::uncached(move |k| x.approx(k).neg())
}

pub fn real_sub(x: &Real, y: &Real) -> Real {
    map2(Dyadic::sub, |k| (k - 1, k - 1), x, y)
}

/// Product. With `|x| ≤ 2^bx`, `|y| ≤ 2^by`, sampling `x` within
/// `2^(k-2-by)` and `y` within `2^(k-3-(bx+1))` keeps the product within
/// `2^(k-1)`; the result is then truncated at `2^(k-1)`.
pub fn real_mul(x: &Real, y: &Real) -> Real {
    let (x, y) = (x.clone(), y.clone());
    let bounds: Arc<OnceLock<(i64, i64)>> = Arc::default();
    Real::new(move |k| {
        let &(bx, by) = bounds.get_or_init(|| (x.magnitude_bound(), y.magnitude_bound()));
        // Sample x at most within 1 so |x̃| ≤ 2^(bx+1).
        let kx = (k - 2 - by).min(Prec(0));
        let ky = k - 3 - (bx + 1);
        let p = x.approx(kx).mul(&y.approx(ky));
        p.app_approx(k - 1)
    })
}

/// `x²`, sampling `x` once per precision.
pub fn real_square(x: &Real) -> Real {
    let x = x.clone();
    let bound: Arc<OnceLock<i64>> = Arc::default();
    Real::new(move |k| {
        let b = *bound.get_or_init(|| x.magnitude_bound());
        // |x̃² − x²| = |x̃ − x|·|x̃ + x| ≤ δ·(2^(b+1) + δ) ≤ δ·2^(b+2) for δ ≤ 1.
        let kx = (k - 3 - b).min(Prec(0));
        let s = x.approx(kx);
        s.mul(&s).app_approx(k - 1)
    })
}

fn check_witness(approx: &Dyadic, w: i64, k: Prec) -> Result<()> {
    // |x| ≥ 2^w and |x − x̃| ≤ 2^k imply |x̃| ≥ 2^w − 2^k.
    let floor = Dyadic::new(1, w).sub(&Dyadic::new(1, k.0));
    if approx.abs() < floor {
        Err(Error::WitnessViolated { witness: w, approx: approx.to_string() })
    } else {
        Ok(())
    }
}

/// `1/x`, given a witness `w` with `2^w ≤ |x|`.
///
/// The witness is checked against one approximation up front; an
/// approximation contradicting it later panics.
pub fn real_inv(x: &Real, w: i64) -> Result<Real> {
    check_witness(&x.approx(Prec(w - 2)), w, Prec(w - 2))?;
    let x = x.clone();
    let one = Dyadic::one();
    Ok(Real::new(move |k| {
        // Sampling within δ ≤ 2^(w-1) keeps |x̃| ≥ 2^(w-1), and then
        // |1/x̃ − 1/x| ≤ δ / 2^(2w-1); δ = 2^(k+2w-2) makes that 2^(k-1).
        let kx = (k + (2 * w - 2)).min(Prec(w - 1));
        let s = x.approx(kx);
        if let Err(e) = check_witness(&s, w, kx) {
            panic!("real_inv: {e}");
        }
        one.app_div(&s, k - 1).expect("witness keeps the divisor nonzero")
    }))
}

/// The same real with approximations truncated to the precision asked
/// for, so mantissas stay proportional to the requested accuracy.
pub fn compress(x: &Real) -> Real {
    let x = x.clone();
    Real::new(move |k| x.approx(k - 1).app_approx(k - 1))
}

/// Decimal expansion with exactly `d` decimals (no point when `d = 0`),
/// within `10^-d` of `x`: an approximation within `10^-d / 2` is rounded
/// to the nearest multiple of `10^-d`.
pub fn real_to_decimal(x: &Real, d: usize) -> String {
    let half_ulp = BigRational::new(1.into(), BigInt::from(2) * num_traits::pow(BigInt::from(10), d));
    let k = qdlog2(&half_ulp).expect("positive");
    let s = x.approx(Prec(k)).to_decimal_rounded(d);
    // No negative zero.
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl std::ops::Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        real_add(self, rhs)
    }
}

impl std::ops::Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        real_sub(self, rhs)
    }
}

impl std::ops::Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        real_mul(self, rhs)
    }
}

impl std::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        real_neg(self)
    }
}

impl From<Dyadic> for Real {
    fn from(x: Dyadic) -> Real {
        unit(x)
    }
}
