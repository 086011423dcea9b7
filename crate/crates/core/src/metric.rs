//! Metric spaces given by a ball relation instead of a distance function.
//!
//! `ball(ε, x, y)` holds when `x` and `y` are within `ε`. On the base
//! spaces here (rationals and dyadics) this is `|x − y| ≤ ε`, decided
//! exactly. Both are prelength spaces, which the completion lifting in
//! [`crate::real`] relies on; that is an assumption, not something checked.

use num_rational::BigRational;
use num_traits::Signed;

use crate::dyadic::{Dyadic, Prec};

pub trait Ball {
    fn ball(eps: &BigRational, x: &Self, y: &Self) -> bool;

    /// `ball(2^k, x, y)`.
    fn ball_pow2(k: Prec, x: &Self, y: &Self) -> bool {
        Self::ball(&k.radius(), x, y)
    }
}

impl Ball for BigRational {
    fn ball(eps: &BigRational, x: &Self, y: &Self) -> bool {
        (x - y).abs() <= *eps
    }
}

impl Ball for Dyadic {
    fn ball(eps: &BigRational, x: &Self, y: &Self) -> bool {
        x.sub(y).abs().to_rational() <= *eps
    }

    fn ball_pow2(k: Prec, x: &Self, y: &Self) -> bool {
        x.sub(y).abs() <= Dyadic::new(1, k.0)
    }
}
