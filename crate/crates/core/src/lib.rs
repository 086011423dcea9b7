//! Exact real arithmetic on top of dyadic rationals.
//!
//! A [`Real`] is a function that, asked for precision `2^k`, returns a
//! [`Dyadic`] within `2^k` of the number it stands for. Arithmetic,
//! [`exp`], [`arctan`], [`pi`] and [`sqrt`] build new reals from old ones,
//! each with an explicit error budget in powers of two.
//!
//! ```
//! use exact_reals::{exp, pi, real_sub, real_to_decimal};
//!
//! let x = real_sub(&exp(&pi()), &pi());
//! assert_eq!(real_to_decimal(&x, 10), "19.9990999792");
//! ```
//!
//! The guide in `book/` walks through the pieces; its code blocks are
//! compiled and run as doctests of this crate.

pub mod approx;
pub mod dyadic;
pub mod elementary;
mod error;
pub mod metric;
pub mod oracle;
pub mod real;
pub mod series;
pub mod stream;

pub use approx::{int_embed, qclog2, qdlog2, AppRationals};
pub use dyadic::{Dyadic, Prec};
pub use elementary::{
    arctan, arctan_small, exp, exp_small, pi, sqrt, sqrt_in_1_4, sqrt_step, SqrtState,
};
pub use error::{Error, Result};
pub use metric::Ball;
pub use real::{
    bind, compress, map2, real_add, real_inv, real_mul, real_neg, real_square, real_sub,
    real_to_decimal, unit, Real, UcFun,
};
pub use series::{factorials, find_cutoff, odds, powers, sum_alternating, AltSeries};
pub use stream::Stream;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dyadics.md")]
    mod dyadics {}
    #[doc = include_str!("../../../book/src/approximate-rationals.md")]
    mod approximate_rationals {}
    #[doc = include_str!("../../../book/src/completion.md")]
    mod completion {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/elementary.md")]
    mod elementary {}
    #[doc = include_str!("../../../book/src/square-root.md")]
    mod square_root {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
