//! Turning an [`Expr`] into a [`Real`] and printing it.
//!
//! Subtrees without `pi` or function calls are folded to exact rationals
//! first, so literals such as `1/57` or `3^5` cost nothing and divisions by
//! them need no witness. Dividing by (or taking the square root of) a
//! genuinely real subexpression needs a lower bound `2^w ≤ |x|`: either the
//! `--witness` flag or one certified from approximations of `x`.

use std::panic::{catch_unwind, AssertUnwindSafe};

use exact_reals::{
    arctan, exp, pi, qdlog2, real_add, real_inv, real_mul, real_neg, real_sub, real_to_decimal,
    sqrt, Prec, Real,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::expr::{parse, BinOp, Expr, Func, ParseError};

/// How far down the certified witness search looks, in bits below 1.
pub const WITNESS_SEARCH_DEPTH: i64 = 256;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    /// A user-asserted bound `2^w ≤ |x|` for every divisor and `sqrt`
    /// argument that is not an exact rational.
    pub witness: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },

    #[error(
        "cannot certify that the {what} at position {pos} is nonzero: no approximation down to \
         2^-{depth} separates it from 0; if it is, pass --witness k with 2^k <= |{what}|"
    )]
    NoWitness { what: &'static str, pos: usize, depth: i64 },

    #[error("domain error at position {pos}: {msg}")]
    Domain { pos: usize, msg: String },

    #[error("at position {pos}: {source}")]
    Core { pos: usize, source: exact_reals::Error },

    #[error("evaluation failed: {0}")]
    Aborted(String),
}

enum Value {
    Exact(BigRational),
    Real(Real),
}

impl Value {
    fn into_real(self) -> Real {
        match self {
            Value::Exact(q) => Real::from_rational(q),
            Value::Real(x) => x,
        }
    }
}

/// The sign of `x` and a witness `2^w ≤ |x|`, certified by finding an
/// approximation with `|x̃(p)| ≥ 2^(p+1)`.
fn certify(x: &Real) -> Option<(bool, i64)> {
    let coarse = x.approx(Prec(0));
    let mut p = match qdlog2(&coarse.abs().to_rational()) {
        Ok(b) if b >= 1 => b - 1,
        _ => 0,
    };
    while p >= -WITNESS_SEARCH_DEPTH {
        let a = x.approx(Prec(p));
        if a.abs() >= exact_reals::Dyadic::new(1, p + 1) {
            return Some((a.mant().is_positive(), p));
        }
        p -= 1;
    }
    None
}

fn witness_for(x: &Real, what: &'static str, pos: usize, opts: &Options) -> Result<(bool, i64), EvalError> {
    if let Some(w) = opts.witness {
        // The sign still has to come from somewhere: one approximation
        // inside the asserted gap decides it.
        let a = x.approx(Prec(w - 2));
        return Ok((a.mant().is_positive(), w));
    }
    certify(x).ok_or(EvalError::NoWitness { what, pos, depth: WITNESS_SEARCH_DEPTH })
}

fn to_value(e: &Expr, opts: &Options) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Num { value, .. } => Value::Exact(value.clone()),
        Expr::Pi { .. } => Value::Real(pi()),
        Expr::Neg { arg, .. } => match to_value(arg, opts)? {
            Value::Exact(q) => Value::Exact(-q),
            Value::Real(x) => Value::Real(real_neg(&x)),
        },
        Expr::Pow { base, exp, .. } => match to_value(base, opts)? {
            Value::Exact(q) => {
                let n = i32::try_from(*exp).map_err(|_| EvalError::Domain {
                    pos: e.pos(),
                    msg: format!("exponent {exp} is too large"),
                })?;
                Value::Exact(num_traits::pow::Pow::pow(&q, n))
            }
            Value::Real(x) => Value::Real(x.pow(*exp)),
        },
        Expr::Bin { op, lhs, rhs, pos } => {
            let (l, r) = (to_value(lhs, opts)?, to_value(rhs, opts)?);
            match (op, l, r) {
                (BinOp::Div, _, Value::Exact(q)) if q.is_zero() => {
                    return Err(EvalError::DivisionByZero { pos: *pos })
                }
                (op, Value::Exact(a), Value::Exact(b)) => Value::Exact(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }),
                (BinOp::Div, l, Value::Exact(q)) => {
                    Value::Real(real_mul(&l.into_real(), &Real::from_rational(q.recip())))
                }
                (BinOp::Div, l, Value::Real(d)) => {
                    let (_, w) = witness_for(&d, "divisor", rhs.start(), opts)?;
                    let inv = real_inv(&d, w).map_err(|source| EvalError::Core { pos: rhs.start(), source })?;
                    Value::Real(real_mul(&l.into_real(), &inv))
                }
                (op, l, r) => {
                    let (l, r) = (l.into_real(), r.into_real());
                    Value::Real(match op {
                        BinOp::Add => real_add(&l, &r),
                        BinOp::Sub => real_sub(&l, &r),
                        _ => real_mul(&l, &r),
                    })
                }
            }
        }
        Expr::Call { func, arg, pos } => {
            let v = to_value(arg, opts)?;
            match func {
                Func::Exp => Value::Real(exp(&v.into_real())),
                Func::Arctan => Value::Real(arctan(&v.into_real())),
                Func::Sqrt => sqrt_value(v, *pos, arg.start(), opts)?,
            }
        }
    })
}

fn sqrt_value(v: Value, pos: usize, arg_pos: usize, opts: &Options) -> Result<Value, EvalError> {
    let negative = || EvalError::Domain { pos, msg: "square root of a negative number".to_string() };
    let (x, w) = match v {
        Value::Exact(q) if q.is_zero() => return Ok(Value::Exact(q)),
        Value::Exact(q) if q.is_negative() => return Err(negative()),
        Value::Exact(q) => {
            let w = qdlog2(&q).expect("positive");
            (Real::from_rational(q), w)
        }
        Value::Real(x) => {
            let (positive, w) = witness_for(&x, "sqrt argument", arg_pos, opts)?;
            if !positive {
                return Err(negative());
            }
            (x, w)
        }
    };
    let root = sqrt(&x, w).map_err(|source| EvalError::Core { pos: arg_pos, source })?;
    Ok(Value::Real(root))
}

/// The real an expression denotes.
pub fn to_real(e: &Expr, opts: &Options) -> Result<Real, EvalError> {
    Ok(to_value(e, opts)?.into_real())
}

/// `e` with `digits` decimals, within `10^-digits` of its value.
///
/// A witness that holds at the precision it was checked but is contradicted
/// later surfaces as [`EvalError::Aborted`] instead of a panic.
pub fn eval_expr(e: &Expr, digits: usize, opts: &Options) -> Result<String, EvalError> {
    catch_unwind(AssertUnwindSafe(|| {
        let x = to_real(e, opts)?;
        Ok(real_to_decimal(&x, digits))
    }))
    .unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "internal error".to_string());
        Err(EvalError::Aborted(msg))
    })
}

/// Parses and evaluates `src`.
///
/// ```
/// use exact_reals_cli::{eval, Options};
///
/// assert_eq!(eval("1+2*3", 2, &Options::default()).unwrap(), "7.00");
/// assert_eq!(eval("176*arctan(1/57)", 5, &Options::default()).unwrap(), "3.08740");
/// ```
pub fn eval(src: &str, digits: usize, opts: &Options) -> Result<String, EvalError> {
    eval_expr(&parse(src)?, digits, opts)
}

/// Whether `e` is an exact rational literal expression, i.e. needs no real
/// arithmetic at all.
pub fn is_exact(e: &Expr) -> bool {
    match e {
        Expr::Num { .. } => true,
        Expr::Pi { .. } | Expr::Call { .. } => false,
        Expr::Neg { arg, .. } => is_exact(arg),
        Expr::Pow { base, .. } => is_exact(base),
        Expr::Bin { lhs, rhs, .. } => is_exact(lhs) && is_exact(rhs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, d: usize) -> String {
        eval(src, d, &Options::default()).unwrap()
    }

    /// Within one unit in the last place of a reference expansion, which
    /// is all the decimal contract promises.
    fn close(got: &str, reference: &str) {
        let d = got.split_once('.').map_or(0, |(_, f)| f.len());
        assert!(exact_reals::oracle::agrees_within_ulp(got, reference, d), "{got} vs {reference}");
    }

    #[test]
    fn literals_and_arithmetic() {
        assert_eq!(ev("0", 5), "0.00000");
        assert_eq!(ev("0", 0), "0");
        assert_eq!(ev("1/3", 10), "0.3333333333");
        assert_eq!(ev("2/3", 10), "0.6666666667");
        assert_eq!(ev("-2^2", 1), "-4.0");
        assert_eq!(ev("(-2)^2", 1), "4.0");
        assert_eq!(ev("0.1+0.2", 20), "0.30000000000000000000");
        assert_eq!(ev("1-1/3*3", 3), "0.000");
    }

    #[test]
    fn transcendental_values() {
        assert_eq!(ev("pi", 20), "3.14159265358979323846");
        assert_eq!(ev("exp(1)", 20), "2.71828182845904523536");
        assert_eq!(ev("exp(0)", 5), "1.00000");
        assert_eq!(ev("sqrt(2)", 20), "1.41421356237309504880");
        assert_eq!(ev("sqrt(0)", 3), "0.000");
        assert_eq!(ev("arctan(1)*4", 15), "3.141592653589793");
        assert_eq!(ev("-arctan(-1)*4", 15), "3.141592653589793");
    }

    #[test]
    fn real_divisors_are_certified() {
        assert_eq!(ev("pi/pi", 10), "1.0000000000");
        close(&ev("1/exp(1)", 20), "0.3678794411714423215955237701");
        assert_eq!(ev("sqrt(pi)", 20), "1.77245385090551602730");
        assert_eq!(ev("sqrt(pi-3)", 10), "0.3762879929");
    }

    #[test]
    fn refusals() {
        let opts = Options::default();
        assert_eq!(eval("1/0", 3, &opts), Err(EvalError::DivisionByZero { pos: 1 }));
        assert_eq!(eval("1/(2-2)", 3, &opts), Err(EvalError::DivisionByZero { pos: 1 }));
        assert!(matches!(
            eval("1/(pi-pi)", 3, &opts),
            Err(EvalError::NoWitness { what: "divisor", pos: 3, .. })
        ));
        assert!(matches!(eval("sqrt(-1)", 3, &opts), Err(EvalError::Domain { pos: 0, .. })));
        assert!(matches!(eval("sqrt(3-pi)", 3, &opts), Err(EvalError::Domain { pos: 0, .. })));
        assert!(matches!(eval("2 $", 3, &opts), Err(EvalError::Parse(_))));
    }

    #[test]
    fn witness_flag() {
        let opts = Options { witness: Some(-3) };
        close(&eval("1/(pi-3)", 8, &opts).unwrap(), "7.0625133059310457697930");
        // 2^2 ≤ |pi - 3| is false and gets caught.
        let bad = Options { witness: Some(2) };
        assert!(matches!(eval("1/(pi-3)", 8, &bad), Err(EvalError::Core { pos: 3, .. })));
    }

    #[test]
    fn exactness() {
        assert!(is_exact(&parse("1/3+2^5").unwrap()));
        assert!(!is_exact(&parse("1/3+pi").unwrap()));
    }
}
