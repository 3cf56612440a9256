//! Exact arithmetic substrate: integer polynomials, real algebraic numbers,
//! small number fields, roots of unity and outward-rounded complex balls.

mod algebraic;
mod ball;
mod cyclo;
mod numfield;
mod poly;
mod roots;
mod unity;

pub use algebraic::RealAlgebraic;
pub use ball::{ComplexBall, RealBall, DEFAULT_PRECISION, MAX_PRECISION};
pub use cyclo::CycloExpr;
pub use numfield::{NfElem, NumberField};
pub use poly::IntPoly;
pub use roots::{
    cubic_discriminant, exact_cbrt, exact_sqrt, isolate_real_roots, rational_roots, IsolatedRoot,
};
pub use unity::{cyclotomic_poly, two_cos_minimal_poly, RootOfUnity};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_bigint::Sign;
use num_traits::{Signed, ToPrimitive, Zero};

/// Nearest-ish `f64` of a rational, robust to huge numerators and denominators.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer().abs();
    let d = r.denom();
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        (n >> (-shift) as u64) / d
    };
    let mag = scaled.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(shift as i32));
    if r.numer().sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

/// Twelve-significant-digit rendering used for every non-authoritative
/// decimal approximation in reports.
pub fn approx_string(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}
