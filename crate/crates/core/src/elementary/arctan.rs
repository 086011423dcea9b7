use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::real::{bind, compress, real_add, real_neg, real_sub, Real, UcFun};
use crate::series::{odds, powers, sum_alternating, AltSeries};

/// `arctan(n/d)` for `0 ≤ n/d < 1`, from
/// `Σ (−1)^i n^(2i+1) / (d^(2i+1) · (2i+1))`.
///
/// Numerators and denominators are kept apart as two streams, so `n/d` is
/// never divided out.
pub fn arctan_small(n: &Dyadic, d: &Dyadic) -> Result<Real> {
    if !d.mant().is_positive() {
        return Err(Error::Domain(format!("arctan_small: denominator {d} is not positive")));
    }
    if n.mant().is_negative() || n >= d {
        return Err(Error::Domain(format!("arctan_small: {n}/{d} outside [0, 1)")));
    }
    let (n, d) = (n.clone(), d.clone());
    let num = powers(n.mul(&n)).map(move |p| p.mul(&n));
    let dd = d.clone();
    let den = powers(d.mul(&d))
        .map(move |p| p.mul(&dd))
        .zip_with(&odds(), |p, o| p.mul(o));
    Ok(sum_alternating(AltSeries::new(num, den), 1))
}

/// The Machin-like combination
/// `176·arctan(1/57) + 28·arctan(1/239) − 48·arctan(1/682) + 96·arctan(1/12943)`.
///
/// Each term gets an eighth of the error budget; truncating the sum takes
/// the other half. Above 2000 bits the four terms are evaluated on separate
/// threads.
pub fn pi() -> Real {
    static PI: OnceLock<Real> = OnceLock::new();
    PI.get_or_init(|| {
        let terms: Vec<(i64, Real)> = [(176, 57), (28, 239), (-48, 682), (96, 12943)]
            .into_iter()
            .map(|(c, inv)| {
                let t = arctan_small(&Dyadic::one(), &Dyadic::from_int(inv)).expect("1/inv < 1");
                (c, t)
            })
            .collect();
        Real::new(move |k| {
            let sample = |(c, t): &(i64, Real)| {
                let weight = 64 - (c.unsigned_abs() - 1).leading_zeros() as i64;
                t.approx(k - 3 - weight).mul(&Dyadic::from_int(*c))
            };
            let parts: Vec<Dyadic> = if -k.0 > 2000 {
                std::thread::scope(|s| {
                    let handles: Vec<_> =
                        terms.iter().map(|term| s.spawn(move || sample(term))).collect();
                    handles.into_iter().map(|h| h.join().expect("pi term panicked")).collect()
                })
            } else {
                terms.iter().map(sample).collect()
            };
            parts.iter().fold(Dyadic::zero(), |acc, p| acc.add(p)).app_approx(k - 1)
        })
    })
    .clone()
}

/// `a = num / den` as an integer pair with `den > 0`.
fn as_fraction(a: &Dyadic) -> (BigInt, BigInt) {
    let e = a.expo().to_i64().expect("exponent out of range");
    if e >= 0 {
        (a.mant() << e as usize, BigInt::from(1))
    } else {
        (a.mant().clone(), BigInt::from(1) << e.unsigned_abs() as usize)
    }
}

/// `arctan` at a dyadic point, reduced so the series argument is at most
/// 1/2 in magnitude:
///
/// - `|a| < 1/2`: the series directly,
/// - `1/2 ≤ a ≤ 2`: `π/4 + arctan((a−1)/(a+1))`,
/// - `a > 2`: `π/2 − arctan(1/a)`,
/// - `a < 0`: `−arctan(−a)`.
pub fn arctan_point(a: &Dyadic) -> Real {
    if a.mant().is_negative() {
        return real_neg(&arctan_point(&a.neg()));
    }
    let (n, d) = as_fraction(a);
    let small = |n: BigInt, d: BigInt| {
        let neg = n.is_negative();
        let t = arctan_small(&Dyadic::from_int(n.abs()), &Dyadic::from_int(d)).expect("reduced argument in [0, 1)");
        if neg { real_neg(&t) } else { t }
    };
    if &n << 1usize < d {
        small(n, d)
    } else if n <= &d << 1usize {
        real_add(&pi().shiftl(-2), &small(&n - &d, &n + &d))
    } else {
        real_sub(&pi().shiftl(-1), &small(d, n))
    }
}

/// `arctan` on all of ℝ. It is 1-Lipschitz, so lifting needs no extra
/// precision.
pub fn arctan(x: &Real) -> Real {
    bind(&UcFun::lipschitz(arctan_point), &compress(x))
}
