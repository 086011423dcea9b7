//! Alternating series with approximate division.
//!
//! A series is given by two streams, numerators `n_i` and denominators
//! `d_i`, with terms `t_i = n_i / d_i` non-negative, decreasing and tending
//! to zero. The sum `Σ (−1)^i t_i` is approximated to `2^e` by
//!
//! 1. finding the least `k` with `|app_div(n_k, d_k, l) + 2^l| ≤ 2^(e−1)`
//!    where `l = e − (k + 1)`; this bounds the tail by `2^(e−1)`,
//! 2. summing the first `k` terms, each divided to precision `2^l`, so the
//!    accumulated division error is at most `k · 2^l ≤ 2^(e−2)`.
//!
//! Only shifts, integer divisions and additions happen; no rational
//! arithmetic.

use crate::approx::AppRationals;
use crate::dyadic::{Dyadic, Prec};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::stream::Stream;

/// `1, a, a², …`, one multiplication per element.
pub fn powers<A: AppRationals>(a: A) -> Stream<A> {
    Stream::unfold(A::one(), move |p, _| p.mul(&a))
}

/// `0!, 1!, 2!, …`
pub fn factorials<A: AppRationals>() -> Stream<A> {
    Stream::unfold(A::one(), |p, i| p.mul(&A::from_int(i.into())))
}

/// `1, 3, 5, …`
pub fn odds<A: AppRationals>() -> Stream<A> {
    let two = A::from_int(2.into());
    Stream::unfold(A::one(), move |p, _| p.add(&two))
}

#[derive(Clone, Debug)]
pub struct AltSeries<A> {
    pub num: Stream<A>,
    pub den: Stream<A>,
}

impl<A: AppRationals> AltSeries<A> {
    pub fn new(num: Stream<A>, den: Stream<A>) -> Self {
        AltSeries { num, den }
    }

    fn terms(&self) -> impl Iterator<Item = (A, A)> {
        self.num.iter().zip(self.den.iter())
    }
}

/// The number of terms needed for precision `2^e`: the least `k` passing
/// the tail test, found by walking the streams.
pub fn find_cutoff<A: AppRationals>(s: &AltSeries<A>, e: Prec) -> Result<usize> {
    let half_eps = A::one().shiftl(e.0 - 1);
    for (k, (n, d)) in s.terms().enumerate() {
        let l = division_prec(e, k);
        let q = n.app_div(&d, l)?;
        let bound = q.add(&A::one().shiftl(l.0)).abs();
        if bound.compare(&half_eps).is_le() {
            return Ok(k);
        }
    }
    unreachable!("streams are infinite")
}

fn division_prec(e: Prec, k: usize) -> Prec {
    e - (k as i64 + 1)
}

/// `sign0 · Σ_{i<k} (−1)^i app_div(n_i, d_i, l)` with `k` from
/// [`find_cutoff`]; within `2^e` of the infinite sum.
pub fn alt_sum_approx<A: AppRationals>(s: &AltSeries<A>, sign0: i8, e: Prec) -> Result<A> {
    let k = find_cutoff(s, e)?;
    let l = division_prec(e, k);
    let mut acc = A::zero();
    for (i, (n, d)) in s.terms().take(k).enumerate() {
        let q = n.app_div(&d, l)?;
        acc = if i % 2 == 0 { acc.add(&q) } else { acc.sub(&q) };
    }
    Ok(if sign0 < 0 { acc.neg() } else { acc })
}

/// The sum of an admissible alternating series as a real number.
///
/// Panics on approximation if a denominator needed for the requested
/// precision is zero; [`alt_sum_approx`] reports that as an error instead.
pub fn sum_alternating(s: AltSeries<Dyadic>, sign0: i8) -> Real {
    Real::new(move |e| match alt_sum_approx(&s, sign0, e) {
        Ok(v) => v,
        Err(Error::DivisionByZero) => panic!("alternating series has a zero denominator"),
        Err(err) => panic!("alternating series: {err}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m, e)
    }

    fn q(n: i64, den: i64) -> BigRational {
        BigRational::new(n.into(), den.into())
    }

    fn prefix(s: &Stream<Dyadic>, n: usize) -> Vec<BigRational> {
        s.iter().take(n).map(|x| x.to_rational()).collect()
    }

    fn exp_series(x: Dyadic) -> AltSeries<Dyadic> {
        AltSeries::new(powers(x.abs()), factorials())
    }

    fn leibniz() -> AltSeries<Dyadic> {
        AltSeries::new(Stream::unfold(Dyadic::one(), |p, _| p.clone()), odds())
    }

    #[test]
    fn stream_constructors() {
        assert_eq!(prefix(&powers(d(2, 0)), 4), [1, 2, 4, 8].map(|v| q(v, 1)));
        assert!(prefix(&powers(d(1, 0)), 20).iter().all(|v| *v == q(1, 1)));
        assert_eq!(prefix(&powers(d(0, 0)), 3), [1, 0, 0].map(|v| q(v, 1)));
        assert_eq!(prefix(&factorials(), 5), [1, 1, 2, 6, 24].map(|v| q(v, 1)));
        assert_eq!(factorials::<Dyadic>().nth(10), d(3_628_800, 0));
        assert_eq!(prefix(&odds(), 4), [1, 3, 5, 7].map(|v| q(v, 1)));
        assert_eq!(odds::<Dyadic>().nth(100), d(201, 0));
    }

    #[test]
    fn cutoff_for_exp_half() {
        // (1/2)^7/7! = 1/645120 < 2^-11; earlier terms are too big.
        let k = find_cutoff(&exp_series(d(-1, -1)), Prec(-10)).unwrap();
        assert!(k <= 7, "k = {k}");
        assert!(k >= 5, "k = {k}");
    }

    #[test]
    fn cutoff_zero_first_term() {
        let s = AltSeries::new(powers(d(0, 0)).map(|_| Dyadic::zero()), factorials());
        assert_eq!(find_cutoff(&s, Prec(-30)).unwrap(), 0);
    }

    #[test]
    fn cutoff_for_arctan_57() {
        // Terms (1/57)^(2i+1)/(2i+1).
        let n = powers(d(1, 0));
        let den = powers(d(57 * 57, 0))
            .map(|p| p.mul(&d(57, 0)))
            .zip_with(&odds(), |a, b| a.mul(b));
        let k = find_cutoff(&AltSeries::new(n, den), Prec(-40)).unwrap();
        assert!(k <= 4, "k = {k}");
    }

    /// Least k by exact arithmetic: the first index whose exact quotient,
    /// truncated as app_div does, plus slack passes the test.
    #[test]
    fn cutoff_is_minimal() {
        for m in [-1i64, -3, -5, -7, -8] {
            let x = d(m, -3);
            let s = exp_series(x.clone());
            for e in [-4i64, -10, -25, -40] {
                let k = find_cutoff(&s, Prec(e)).unwrap();
                for j in 0..k {
                    let l = e - (j as i64 + 1);
                    let t = s.num.nth(j).to_rational() / s.den.nth(j).to_rational();
                    let scaled = (t * Prec(-l).radius()).trunc() * Prec(l).radius();
                    assert!(scaled + Prec(l).radius() > Prec(e - 1).radius(), "j={j} passes");
                }
            }
        }
    }

    #[test]
    fn leibniz_quarter_pi() {
        let s = leibniz();
        let v = alt_sum_approx(&s, 1, Prec(-8)).unwrap().to_rational();
        let quarter_pi = q(785_398_163_397, 1_000_000_000_000);
        assert!(Signed::abs(&(v - quarter_pi)) <= q(1, 256) + q(1, 1_000_000_000_000));
    }

    #[test]
    fn zero_numerators_sum_to_zero() {
        let s = AltSeries::new(powers(d(0, 0)).map(|_| Dyadic::zero()), odds());
        let r = sum_alternating(s, 1);
        assert!(r.approx(Prec(-100)).is_zero());
    }

    #[test]
    fn exp_minus_one() {
        let r = sum_alternating(exp_series(d(-1, 0)), 1);
        let v = r.approx(Prec(-20)).to_rational();
        let reference = q(367_879_441_171, 1_000_000_000_000);
        assert!(Signed::abs(&(v - reference)) <= q(1, 1 << 20) + q(1, 1_000_000_000_000));
    }

    #[test]
    fn negative_first_term() {
        let pos = alt_sum_approx(&exp_series(d(-1, -1)), 1, Prec(-30)).unwrap();
        let neg = alt_sum_approx(&exp_series(d(-1, -1)), -1, Prec(-30)).unwrap();
        assert_eq!(pos, neg.neg());
    }

    #[test]
    fn zero_denominator_is_reported() {
        let s = AltSeries::new(powers(d(1, 0)), powers(d(0, 0)));
        assert_eq!(alt_sum_approx(&s, 1, Prec(-5)), Err(Error::DivisionByZero));
    }
}
