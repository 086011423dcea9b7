//! Wolfram's digit-by-digit square root.
//!
//! Starting from `(r, s) = (a, 0)` for `1 ≤ a ≤ 4`, each step is
//!
//! ```text
//! if s + 1 ≤ r { (4(r − s − 1), 2(s + 2)) } else { (4r, 2s) }
//! ```
//!
//! and after `n` steps `s² + 4r = 4·4ⁿ·a`, `r ≤ 2s + 4` and `r ≤ 2^(3+n)`.
//! The first and last give `|√a − s/2^(n+1)| ≤ 2^(3−n)`: one bit per step.

use crate::approx::AppRationals;
use crate::dyadic::{Dyadic, Prec};
use crate::error::{Error, Result};
use crate::real::{bind, floor_log2, Real, UcFun};

#[derive(Clone, Debug, PartialEq)]
pub struct SqrtState<A> {
    /// Residual.
    pub r: A,
    /// Partial root, scaled by `2^(n+1)`.
    pub s: A,
    pub n: u64,
}

impl<A: AppRationals> SqrtState<A> {
    pub fn start(a: &A) -> Self {
        SqrtState { r: a.clone(), s: A::zero(), n: 0 }
    }

    /// `s² + 4r = 4·4ⁿ·a`, `r ≤ 2s + 4` and `r ≤ 2^(3+n)`, checked exactly.
    pub fn invariants_hold(&self, a: &A) -> bool {
        let four = A::from_int(4.into());
        let n = i64::try_from(self.n).expect("step count");
        let lhs = self.s.mul(&self.s).add(&four.mul(&self.r));
        let rhs = a.shiftl(2 + 2 * n);
        let inv1 = lhs.compare(&rhs).is_eq();
        let inv2 = self.r.compare(&self.s.shiftl(1).add(&four)).is_le();
        let bound = self.r.compare(&A::one().shiftl(3 + n)).is_le();
        inv1 && inv2 && bound
    }

    /// `s / 2^(n+1)`, within `2^(3−n)` of `√a`.
    pub fn root(&self) -> A {
        self.s.shiftl(-(self.n as i64 + 1))
    }
}

/// One step of the iteration. Only `r` and `s` are needed.
pub fn sqrt_step<A: AppRationals>(st: &SqrtState<A>) -> SqrtState<A> {
    let s1 = st.s.add(&A::one());
    if s1.compare(&st.r).is_le() {
        SqrtState {
            r: st.r.sub(&s1).shiftl(2),
            s: st.s.add(&A::from_int(2.into())).shiftl(1),
            n: st.n + 1,
        }
    } else {
        SqrtState { r: st.r.shiftl(2), s: st.s.shiftl(1), n: st.n + 1 }
    }
}

/// `√a` within `2^p` for `1 ≤ a ≤ 4`, after `max(0, 3 − p)` steps.
pub fn sqrt_in_1_4<A: AppRationals>(a: &A, p: Prec) -> Result<A> {
    let one = A::one();
    let four = A::from_int(4.into());
    if a.compare(&one).is_lt() || a.compare(&four).is_gt() {
        return Err(Error::Domain(format!("sqrt_in_1_4: {a:?} outside [1, 4]")));
    }
    let steps = (3 - p.0).max(0) as u64;
    let mut st = SqrtState::start(a);
    for _ in 0..steps {
        st = sqrt_step(&st);
    }
    Ok(st.root())
}

/// `√q` within `2^p` for a positive dyadic: `q = a·4^j` exactly with
/// `a ∈ [1, 4)`, so `√q = √a · 2^j`.
pub fn sqrt_point(q: &Dyadic, p: Prec) -> Result<Dyadic> {
    if q.signum() != num_bigint::Sign::Plus {
        return Err(Error::Domain(format!("sqrt_point: {q} is not positive")));
    }
    let j = floor_log2(q).div_euclid(2);
    let a = q.shiftl(-2 * j);
    Ok(sqrt_in_1_4(&a, p - j)?.shiftl(j))
}

fn check_positive_witness(approx: &Dyadic, w: i64, k: Prec) -> Result<()> {
    let floor = Dyadic::new(1, w).sub(&Dyadic::new(1, k.0));
    if *approx < floor {
        Err(Error::WitnessViolated { witness: w, approx: approx.to_string() })
    } else {
        Ok(())
    }
}

/// `√x`, given a witness `w` with `2^w ≤ x`.
///
/// On `[2^(w−1), ∞)` the square root has Lipschitz constant at most
/// `2^(−1−⌊(w−1)/2⌋)`; that fixes how precisely `x` is sampled. The witness
/// is checked once up front; a later contradicting approximation panics.
pub fn sqrt(x: &Real, w: i64) -> Result<Real> {
    check_positive_witness(&x.approx(Prec(w - 2)), w, Prec(w - 2))?;
    let lip = (w - 1).div_euclid(2);
    let modulus = move |k: Prec| (k + lip).min(Prec(w - 1));
    let point = move |q: &Dyadic| {
        let q = q.clone();
        Real::new(move |k| match sqrt_point(&q, k) {
            Ok(v) => v,
            Err(e) => panic!("sqrt: {e}"),
        })
    };
    let f = UcFun::new(point, modulus);
    // Sample one bit finer and truncate there so the loop sees no surplus
    // mantissa bits.
    let x = x.clone();
    let trimmed = Real::new(move |k| {
        let v = x.approx(k - 1);
        if let Err(e) = check_positive_witness(&v, w, k - 1) {
            panic!("sqrt: {e}");
        }
        v.app_approx(k - 1)
    });
    Ok(bind(&f, &trimmed))
}
