use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use super::roots::{isolate_irrational, rational_roots, Sturm};
use super::{approx_string, rat_to_f64};
use crate::error::{Error, Result};

/// A real algebraic number given by its minimal polynomial and an isolating
/// interval with rational endpoints.
///
/// Rationals have a degree-1 minimal polynomial and a degenerate interval
/// `[r, r]`. Irrational values have an open interval `(lo, hi)` whose
/// endpoints are not roots and which contains exactly one root.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

impl RealAlgebraic {
    pub fn from_rational(r: BigRational) -> Self {
        RealAlgebraic {
            poly: IntPoly::linear_with_root(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Trusted constructor: `poly` is irreducible, primitive with positive
    /// leading coefficient and has exactly one root in `(lo, hi)`.
    pub(crate) fn from_isolating(poly: IntPoly, lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(poly.degree().unwrap_or(0) >= 2);
        RealAlgebraic { poly, lo, hi }
    }

    /// Checked constructor for polynomials of degree at most 3.
    pub fn new(poly: &IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        let poly = poly.primitive();
        match poly.degree() {
            None | Some(0) => Err(Error::Domain("constant polynomial has no root".into())),
            Some(1) => {
                let r = -BigRational::new(poly.coeff(0), poly.coeff(1));
                if lo <= r && r <= hi {
                    Ok(Self::from_rational(r))
                } else {
                    Err(Error::Domain(format!("root of {poly} not in [{lo}, {hi}]")))
                }
            }
            Some(d) if d <= 3 => {
                if !rational_roots(&poly)?.is_empty() {
                    return Err(Error::Domain(format!("{poly} is reducible over the rationals")));
                }
                if lo >= hi || Sturm::new(&poly).count(&lo, &hi) != 1 {
                    return Err(Error::Domain(format!(
                        "({lo}, {hi}) does not isolate a single root of {poly}"
                    )));
                }
                Ok(RealAlgebraic { poly, lo, hi })
            }
            Some(d) => Err(Error::Domain(format!(
                "cannot certify irreducibility of degree {d} polynomial {poly}"
            ))),
        }
    }

    /// The `index`-th real root (ascending) of an irreducible polynomial.
    /// Irreducibility is the caller's responsibility.
    pub(crate) fn root_of_irreducible(poly: &IntPoly, index: usize) -> Option<Self> {
        let poly = poly.primitive();
        if poly.degree() == Some(1) {
            return (index == 0)
                .then(|| Self::from_rational(-BigRational::new(poly.coeff(0), poly.coeff(1))));
        }
        let (lo, hi) = isolate_irrational(&poly).into_iter().nth(index)?;
        Some(Self::from_isolating(poly, lo, hi))
    }

    pub fn minimal_poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.lo.clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Algebraic integers are exactly the values whose primitive minimal
    /// polynomial is monic.
    pub fn is_algebraic_integer(&self) -> bool {
        self.poly.leading().is_some_and(|l| l.is_one())
    }

    fn bisect(&mut self) {
        if self.is_rational() {
            return;
        }
        let m = super::roots::split_point(&self.poly, &self.lo, &self.hi);
        let sl = self.poly.eval(&self.lo).signum();
        let sm = self.poly.eval(&m).signum();
        if sl == sm {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    /// Same value with an isolating interval no wider than `width`.
    pub fn refined(&self, width: &BigRational) -> Self {
        let mut out = self.clone();
        while &out.hi - &out.lo > *width {
            out.bisect();
        }
        out
    }

    /// Integers `(a, b)` with `b - a <= 1` and the value in `[a/2^bits, b/2^bits]`.
    ///
    /// Bisects over numerators with the fixed denominator `2^bits`, evaluating
    /// the homogenized polynomial in integers.
    pub(crate) fn dyadic_enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        if let Some(r) = self.to_rational() {
            let x = r * BigRational::from_integer(scale);
            return (x.floor().to_integer(), x.ceil().to_integer());
        }
        let d = self.poly.degree().unwrap();
        let coeffs = self.poly.coeffs();
        // s^(d-i) for the homogenized Horner scheme
        let mut pows = vec![BigInt::one(); d + 1];
        for i in 1..=d {
            pows[i] = &pows[i - 1] * &scale;
        }
        let sign = |num: &BigInt| {
            let mut acc = coeffs[d].clone();
            for i in (0..d).rev() {
                acc = acc * num + &coeffs[i] * &pows[d - i];
            }
            acc.signum()
        };
        let s_lo = self.poly.eval(&self.lo).numer().signum();
        let lo_n = (&self.lo * BigRational::from_integer(scale.clone())).ceil().to_integer();
        let hi_n = (&self.hi * BigRational::from_integer(scale)).floor().to_integer();
        if lo_n > hi_n {
            // the isolating interval already lies inside one dyadic cell
            return (hi_n, lo_n);
        }
        if sign(&lo_n) != s_lo {
            return (&lo_n - 1, lo_n);
        }
        if sign(&hi_n) == s_lo {
            return (hi_n.clone(), hi_n + 1);
        }
        let (mut a, mut b) = (lo_n, hi_n);
        while &b - &a > BigInt::one() {
            let m: BigInt = (&a + &b) >> 1;
            if sign(&m) == s_lo {
                a = m;
            } else {
                b = m;
            }
        }
        (a, b)
    }

    fn refined_bits(&self, bits: u32) -> Self {
        self.refined(&BigRational::new(BigInt::one(), BigInt::one() << bits))
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.to_rational() {
            return rat_to_f64(&r);
        }
        let r = self.refined_bits(64);
        rat_to_f64(&((&r.lo + &r.hi) / BigRational::from_integer(2.into())))
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if let Some(v) = self.to_rational() {
            return v.cmp(r);
        }
        let mut cur = self.clone();
        loop {
            if *r <= cur.lo {
                return Ordering::Greater;
            }
            if *r >= cur.hi {
                return Ordering::Less;
            }
            cur.bisect();
        }
    }

    pub fn signum(&self) -> Ordering {
        self.cmp_rational(&BigRational::zero())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    /// `c * self` for a rational `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::from_integer(0);
        }
        if let Some(r) = self.to_rational() {
            return Self::from_rational(r * c);
        }
        let poly = self.poly.scale_roots(c);
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_positive() {
            Self::from_isolating(poly, a, b)
        } else {
            Self::from_isolating(poly, b, a)
        }
    }

    /// `self + s` for a rational `s`.
    pub fn add_rational(&self, s: &BigRational) -> Self {
        if let Some(r) = self.to_rational() {
            return Self::from_rational(r + s);
        }
        Self::from_isolating(self.poly.shift_roots(s), &self.lo + s, &self.hi + s)
    }

    pub fn approx(&self) -> String {
        approx_string(self.to_f64())
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        if self.poly != other.poly {
            return false;
        }
        if self.is_rational() {
            return self.lo == other.lo;
        }
        let lo = std::cmp::max(&self.lo, &other.lo);
        let hi = std::cmp::min(&self.hi, &other.hi);
        lo < hi && Sturm::new(&self.poly).count(lo, hi) == 1
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Some(r) = other.to_rational() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.to_rational() {
            return other.cmp_rational(&r).reverse();
        }
        if self == other {
            return Ordering::Equal;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.bisect();
            b.bisect();
        }
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(
                f,
                "root of {} in ({}, {}) ~ {}",
                self.poly,
                self.lo,
                self.hi,
                self.approx()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::roots::isolate_real_roots;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt2() -> RealAlgebraic {
        RealAlgebraic::new(&IntPoly::from_i64(&[-2, 0, 1]), q(1, 1), q(2, 1)).unwrap()
    }

    #[test]
    fn equality_survives_refinement() {
        let a = sqrt2();
        let b = a.refined(&q(1, 1000));
        assert_eq!(a, b);
        assert_ne!(a, a.neg());
        assert_eq!(a.neg().neg(), a);
    }

    #[test]
    fn overlapping_intervals_of_different_roots_are_not_equal() {
        // x^3 - 3x + 1 has roots near -1.879, 0.347, 1.532.
        let p = IntPoly::from_i64(&[1, -3, 0, 1]);
        let a = RealAlgebraic::new(&p, q(0, 1), q(1, 1)).unwrap();
        let b = RealAlgebraic::new(&p, q(1, 2), q(2, 1)).unwrap();
        assert_ne!(a, b);
        assert!(a < b);
    }

    #[test]
    fn ordering_against_rationals() {
        let s = sqrt2();
        assert_eq!(s.cmp_rational(&q(7, 5)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&q(3, 2)), Ordering::Less);
        assert!(RealAlgebraic::from_integer(1) < s);
        assert!(s < RealAlgebraic::from_integer(2));
        assert_eq!(s.neg().signum(), Ordering::Less);
    }

    #[test]
    fn scaling_and_shifting() {
        let half = sqrt2().scale(&q(1, 2));
        assert_eq!(half.minimal_poly(), &IntPoly::from_i64(&[-1, 0, 2]));
        assert!(!half.is_algebraic_integer());
        assert!((half.to_f64() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let shifted = sqrt2().add_rational(&q(1, 1));
        assert!((shifted.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!(shifted.is_algebraic_integer());
    }

    #[test]
    fn checked_constructor_rejects_bad_data() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert!(RealAlgebraic::new(&p, q(-2, 1), q(2, 1)).is_err());
        assert!(RealAlgebraic::new(&IntPoly::from_i64(&[-1, 0, 1]), q(0, 1), q(2, 1)).is_err());
        let r = RealAlgebraic::new(&IntPoly::from_i64(&[-3, 2]), q(0, 1), q(2, 1)).unwrap();
        assert_eq!(r.to_rational(), Some(q(3, 2)));
    }

    #[test]
    fn rational_roots_embed_as_degree_one() {
        let roots = isolate_real_roots(&IntPoly::from_i64(&[0, -2, 0, 1]), &q(1, 4)).unwrap();
        assert_eq!(roots[1].value, RealAlgebraic::from_integer(0));
        assert_eq!(roots[1].value.degree(), 1);
    }
}
