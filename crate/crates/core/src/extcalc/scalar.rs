//! Exact scalars for the symbolic oracle: rationals and Gaussian rationals.
//!
//! Sign conventions in exterior calculus are too easy to lose in floating
//! point; every coefficient here is exact.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// Exact rational number.
pub type Rat = BigRational;

/// Gaussian rational `re + im*i`.
pub type Scalar = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

pub fn s_int(n: i64) -> Scalar {
    Scalar::new(rint(n), rint(0))
}

pub fn s_rat(n: i64, d: i64) -> Scalar {
    Scalar::new(rat(n, d), rint(0))
}

pub fn s_real(r: Rat) -> Scalar {
    Scalar::new(r, rint(0))
}

/// The imaginary unit.
pub fn s_i() -> Scalar {
    Scalar::new(rint(0), rint(1))
}

pub fn s_conj(s: &Scalar) -> Scalar {
    Scalar::new(s.re.clone(), -s.im.clone())
}

pub fn s_is_zero(s: &Scalar) -> bool {
    s.re.is_zero() && s.im.is_zero()
}

pub fn s_to_f64(s: &Scalar) -> (f64, f64) {
    (rat_to_f64(&s.re), rat_to_f64(&s.im))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text for a scalar: `3`, `-5/2`, `i`, `-2i`, `(1+i)`, `(3/2-2i)`.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.im.is_zero() {
        return fmt_rat(&s.re);
    }
    let im_part = |out: &mut String, im: &Rat, leading: bool| {
        if im.is_one() {
            if !leading {
                out.push('+');
            }
            out.push('i');
        } else if (-im.clone()).is_one() {
            out.push_str("-i");
        } else {
            if !leading && im.is_positive() {
                out.push('+');
            }
            let _ = write!(out, "{}i", fmt_rat(im));
        }
    };
    if s.re.is_zero() {
        let mut out = String::new();
        im_part(&mut out, &s.im, true);
        return out;
    }
    let mut out = String::from("(");
    out.push_str(&fmt_rat(&s.re));
    im_part(&mut out, &s.im, false);
    out.push(')');
    out
}
