//! Transcendental functions and square roots built on the series engine.

mod arctan;
mod exp;
mod sqrt;

pub use arctan::{arctan, arctan_point, arctan_small, pi};
pub use exp::{exp, exp_small, exp_small_point, reduction_depth};
pub use sqrt::{sqrt, sqrt_in_1_4, sqrt_point, sqrt_step, SqrtState};
