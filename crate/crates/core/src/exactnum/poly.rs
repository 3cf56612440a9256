//! Dense univariate polynomials with integer coefficients, plus the handful of
//! rational-coefficient helpers (division, gcd) needed to manipulate them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with arbitrary-precision integer coefficients, lowest degree first.
///
/// Trailing zero coefficients are trimmed, so the leading coefficient is
/// nonzero unless the polynomial is zero (empty coefficient vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    /// The monic linear polynomial `x - r` scaled to integers: `den*x - num`.
    pub fn linear_with_root(r: &BigRational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divide out the content only; the sign of every coefficient is preserved.
    pub fn sign_preserving_primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Clear denominators by a positive factor and remove the content.
    /// Roots and coefficient signs are preserved.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        Self::new(ints).sign_preserving_primitive()
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = rat_gcd(&self.to_rationals(), &other.to_rationals());
        Self::from_rationals(&g).primitive()
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = rat_divrem(&self.to_rationals(), &g.to_rationals());
        Self::from_rationals(&q).primitive()
    }

    /// Exact quotient over the rationals, if `other` divides `self`.
    /// The quotient is returned scaled to a primitive integer polynomial.
    pub fn divide(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = rat_divrem(&self.to_rationals(), &other.to_rationals());
        if r.is_empty() {
            Some(Self::from_rationals(&q))
        } else {
            None
        }
    }

    /// Polynomial whose roots are `c` times the roots of `self` (`c != 0`).
    pub fn scale_roots(&self, c: &BigRational) -> Self {
        let d = self.coeffs.len();
        let coeffs: Vec<BigRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| BigRational::from_integer(a.clone()) * pow_rat(c, d - 1 - i))
            .collect();
        Self::from_rationals(&coeffs).primitive()
    }

    /// Polynomial whose roots are the roots of `self` shifted by `s`.
    pub fn shift_roots(&self, s: &BigRational) -> Self {
        // p(x - s) by repeated Horner composition.
        let lin = vec![-s.clone(), BigRational::one()];
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            acc = rat_mul(&acc, &lin);
            if acc.is_empty() {
                acc.push(BigRational::zero());
            }
            acc[0] += BigRational::from_integer(c.clone());
            rat_trim(&mut acc);
        }
        Self::from_rationals(&acc).primitive()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

pub(crate) fn pow_rat(c: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

pub(crate) fn rat_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rat_trim(&mut out);
    out
}

/// Euclidean division over the rationals. Panics if `b` is zero.
pub(crate) fn rat_divrem(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut b = b.to_vec();
    rat_trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    rat_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        rat_trim(&mut r);
    }
    rat_trim(&mut q);
    (q, r)
}

pub(crate) fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    rat_trim(&mut x);
    rat_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rat_divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(IntPoly::from_i64(&[1, -1, -2, 1]).to_string(), "x^3 - 2*x^2 - x + 1");
        assert_eq!(IntPoly::from_i64(&[0, -2, 0, 1]).to_string(), "x^3 - 2*x");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn squarefree_part_strips_repeated_factor() {
        // (x-1)^2 (x+1)
        let p = IntPoly::from_i64(&[1, -1, -1, 1]);
        assert_eq!(p.squarefree_part(), IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn scaling_and_shifting_roots() {
        let p = IntPoly::from_i64(&[-2, 0, 1]); // roots ±√2
        assert_eq!(p.scale_roots(&q(1, 2)), IntPoly::from_i64(&[-1, 0, 2]));
        // roots 1 ± √2 -> x^2 - 2x - 1
        assert_eq!(p.shift_roots(&q(1, 1)), IntPoly::from_i64(&[-1, -2, 1]));
    }

    #[test]
    fn divide_detects_non_divisors() {
        let p = IntPoly::from_i64(&[0, -2, 0, 1]);
        assert_eq!(p.divide(&IntPoly::from_i64(&[0, 1])), Some(IntPoly::from_i64(&[-2, 0, 1])));
        assert_eq!(p.divide(&IntPoly::from_i64(&[-1, 1])), None);
    }
}
