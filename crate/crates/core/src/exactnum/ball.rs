//! Fixed-point midpoint-radius balls with outward rounding.
//!
//! A [`RealBall`] at precision `p` stores integers `mid` and `rad >= 0` and
//! denotes the interval `[(mid - rad) 2^-p, (mid + rad) 2^-p]`. Every
//! operation returns a ball that contains the exact result for all inputs in
//! the argument balls. Mixed-precision operands are aligned to the finer one.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::RealAlgebraic;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    // `>>` on negative BigInt rounds toward negative infinity.
    x >> s
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

impl RealBall {
    pub fn exact_int(n: i64, prec: u32) -> Self {
        RealBall {
            mid: BigInt::from(n) << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact_int(0, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::one() << prec);
        let mid = scaled.round().to_integer();
        let rad = if scaled.is_integer() { BigInt::zero() } else { BigInt::one() };
        RealBall { mid, rad, prec }
    }

    /// Smallest representable ball containing the rational interval `[lo, hi]`.
    pub fn from_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        let scale = BigRational::from_integer(BigInt::one() << prec);
        let a = lo * &scale;
        let b = hi * &scale;
        let mid = ((&a + &b) / BigRational::from_integer(2.into())).floor().to_integer();
        let m = BigRational::from_integer(mid.clone());
        let up = (&b - &m).ceil().to_integer();
        let down = (&m - &a).ceil().to_integer();
        RealBall {
            mid,
            rad: up.max(down).max(BigInt::zero()),
            prec,
        }
    }

    pub fn from_algebraic(x: &RealAlgebraic, prec: u32) -> Self {
        if let Some(r) = x.to_rational() {
            return Self::from_rational(&r, prec);
        }
        let (a, b) = x.dyadic_enclosure(prec + 1);
        let den = BigInt::one() << (prec + 1);
        Self::from_interval(&BigRational::new(a, den.clone()), &BigRational::new(b, den), prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Re-express at precision `prec`, rounding outward if it is coarser.
    pub fn with_precision(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = prec - self.prec;
            return RealBall {
                mid: &self.mid << s,
                rad: &self.rad << s,
                prec,
            };
        }
        let s = self.prec - prec;
        let half = BigInt::one() << (s - 1);
        let mid = floor_shr(&(&self.mid + &half), s);
        let err = (&self.mid - (&mid << s)).abs() + &self.rad;
        RealBall {
            mid,
            rad: ceil_shr(&err, s),
            prec,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.prec)
    }

    pub fn mid_f64(&self) -> f64 {
        super::rat_to_f64(&BigRational::new(self.mid.clone(), BigInt::one() << self.prec))
    }

    /// Upper bound on the radius as an `f64` (rounded up by one ulp-ish margin).
    pub fn rad_f64(&self) -> f64 {
        let r = super::rat_to_f64(&BigRational::new(self.rad.clone(), BigInt::one() << self.prec));
        r * (1.0 + f64::EPSILON * 4.0)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lower() <= *r && *r <= self.upper()
    }

    /// `Some(sign)` when the ball excludes zero.
    pub fn sign(&self) -> Option<Sign> {
        if self.contains_zero() {
            None
        } else {
            Some(self.mid.sign())
        }
    }

    /// Largest absolute value of any point in the ball.
    pub fn mag_upper(&self) -> BigRational {
        BigRational::new(self.mid.abs() + &self.rad, BigInt::one() << self.prec)
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RealBall {
            mid: a.mid + b.mid,
            rad: a.rad + b.rad,
            prec: a.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let prod = &a.mid * &b.mid;
        let mid = floor_shr(&prod, p);
        let trunc = if (&mid << p) == prod { 0 } else { 1 };
        let err = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        RealBall {
            mid,
            rad: ceil_shr(&err, p) + trunc,
            prec: p,
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        RealBall {
            mid: &self.mid * n,
            rad: &self.rad * n.unsigned_abs(),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::Domain("reciprocal of a ball containing zero".into()));
        }
        let (lo, hi) = (self.lower(), self.upper());
        let one = BigRational::one();
        // 1/x is monotone on an interval that excludes zero.
        Ok(Self::from_interval(&(&one / &hi), &(&one / &lo), self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Whether the two balls are disjoint.
    pub fn disjoint(&self, other: &Self) -> bool {
        !self.sub(other).contains_zero()
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:.3e}]", self.mid_f64(), self.rad_f64())
    }
}

/// Rectangular complex ball: independent real and imaginary balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: RealBall) -> Self {
        let p = re.precision();
        ComplexBall {
            re,
            im: RealBall::zero(p),
        }
    }

    pub fn exact_int(n: i64, prec: u32) -> Self {
        Self::from_real(RealBall::exact_int(n, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.with_precision(prec),
            im: self.im.with_precision(prec),
        }
    }

    /// Upper bound on the Euclidean radius of the enclosing disc.
    pub fn radius(&self) -> f64 {
        self.re.rad_f64().hypot(self.im.rad_f64()) * (1.0 + f64::EPSILON * 4.0)
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Upper bound on `|z|` over the ball.
    pub fn abs_upper(&self) -> f64 {
        let r = super::rat_to_f64(&self.re.mag_upper());
        let i = super::rat_to_f64(&self.im.mag_upper());
        r.hypot(i) * (1.0 + f64::EPSILON * 4.0)
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexBall {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        ComplexBall {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn mul_real(&self, r: &RealBall) -> Self {
        ComplexBall {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        ComplexBall {
            re: self.re.mul_int(n),
            im: self.im.mul_int(n),
        }
    }

    pub fn norm_sqr(&self) -> RealBall {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr().inv()?;
        Ok(self.conj().mul_real(&n))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Whether `|self - other| <= tol` is certain (tolerance test on balls).
    pub fn within(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).abs_upper() <= tol
    }

    /// Whether `|self - other| > tol` is certain.
    pub fn beyond(&self, other: &Self, tol: f64) -> bool {
        let d = self.sub(other);
        let (re, im) = d.mid_f64();
        re.hypot(im) - d.radius() > tol * (1.0 + 1e-12)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.mid_f64();
        write!(f, "({re} {:+}i) +/- {:.3e}", im, self.radius())
    }
}

/// Enclosure of `atan(1/x)` for an integer `x >= 2` at working precision `w`,
/// returned as (mid, error bound in ulps).
fn atan_inv(x: u32, w: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << w) / x; // 1/x^(2k+1), truncated
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // Each truncated division errs by under one ulp; the alternating tail is
    // below the first omitted term, which truncated to zero.
    (sum, BigInt::from(2 * k + 2))
}

/// Ball containing pi.
pub fn pi_ball(prec: u32) -> RealBall {
    let w = prec + GUARD_BITS;
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let mid = a * 16 - b * 4;
    let rad = ea * 16 + eb * 4;
    RealBall { mid, rad, prec: w }.with_precision(prec)
}

/// Sine and cosine of a point ball `x` with `|x| <= 1`, at the ball's precision.
fn sin_cos_small(x: &RealBall) -> (RealBall, RealBall) {
    let p = x.prec;
    let one = BigInt::one() << p;
    let mut s = BigInt::zero();
    let mut c = BigInt::zero();
    let mut term = one.clone(); // x^j / j!
    let mut j: u32 = 0;
    let mut steps: u64 = 0;
    while !term.is_zero() {
        let add = j % 4 < 2;
        let slot = if j % 2 == 0 { &mut c } else { &mut s };
        if add {
            *slot += &term;
        } else {
            *slot -= &term;
        }
        j += 1;
        term = floor_shr(&(&term * &x.mid), p) / j;
        steps += 1;
    }
    // The j-th computed term is off by at most 2j ulps (|x| <= 1 keeps
    // propagated errors from growing); the dropped tail is bounded likewise.
    let trunc = BigInt::from(steps) * BigInt::from(steps + 4) + 2u32;
    // Both functions are 1-Lipschitz, so the input radius passes through.
    let rad = trunc + &x.rad;
    (
        RealBall {
            mid: s,
            rad: rad.clone(),
            prec: p,
        },
        RealBall { mid: c, rad, prec: p },
    )
}

/// `(cos, sin)` of `2 pi t` for a rational turn `t`, as balls at precision `prec`.
pub(crate) fn cos_sin_turn(t: &BigRational, prec: u32) -> (RealBall, RealBall) {
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let eighth = BigRational::new(1.into(), 8.into());
    let mut t = t - t.floor();
    let mut sin_sign = 1;
    if t > half {
        t = &one - &t;
        sin_sign = -1;
    }
    let mut cos_sign = 1;
    if t > quarter {
        t = &half - &t;
        cos_sign = -1;
    }
    let mut swap = false;
    if t > eighth {
        t = &quarter - &t;
        swap = true;
    }
    let exact = |n: i64| RealBall::exact_int(n, prec);
    let (c, s) = if t.is_zero() {
        (exact(1), exact(0))
    } else {
        let w = prec + GUARD_BITS;
        let x = pi_ball(w).mul(&RealBall::from_rational(&(&t * BigRational::from_integer(2.into())), w));
        let (s, c) = sin_cos_small(&x);
        (c.with_precision(prec), s.with_precision(prec))
    };
    let (c, s) = if swap { (s, c) } else { (c, s) };
    let c = if cos_sign < 0 { c.neg() } else { c };
    let s = if sin_sign < 0 { s.neg() } else { s };
    (c, s)
}
