//! Rational roots, cubic discriminants and Sturm-sequence real root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::RealAlgebraic;
use super::poly::{rat_divrem, IntPoly};
use crate::error::{Error, Result};

/// All rational roots of `p`, repeated according to multiplicity, ascending.
pub fn rational_roots(p: &IntPoly) -> Result<Vec<BigRational>> {
    if p.is_zero() {
        return Err(Error::Domain("rational_roots of the zero polynomial".into()));
    }
    let mut roots = Vec::new();
    let mut rest = p.primitive();
    // x | p
    while rest.coeff(0).is_zero() && rest.degree().unwrap_or(0) > 0 {
        roots.push(BigRational::zero());
        rest = IntPoly::new(rest.coeffs()[1..].to_vec());
    }
    if rest.degree().unwrap_or(0) > 0 {
        let nums = positive_divisors(&rest.coeff(0).abs());
        let dens = positive_divisors(&rest.leading().unwrap().abs());
        let mut candidates: Vec<BigRational> = Vec::new();
        for a in &nums {
            for b in &dens {
                if a.gcd(b).is_one() {
                    let r = BigRational::new(a.clone(), b.clone());
                    candidates.push(-r.clone());
                    candidates.push(r);
                }
            }
        }
        for r in candidates {
            loop {
                if rest.degree().unwrap_or(0) == 0 || !rest.eval(&r).is_zero() {
                    break;
                }
                roots.push(r.clone());
                rest = rest
                    .divide(&IntPoly::linear_with_root(&r))
                    .expect("root implies linear factor");
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let e = n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Discriminant of a monic cubic `x^3 + a x^2 + b x + c`.
pub fn cubic_discriminant(p: &IntPoly) -> Result<BigInt> {
    if p.degree() != Some(3) || !p.leading().is_some_and(|l| l.is_one()) {
        return Err(Error::Domain(format!("cubic_discriminant needs a monic cubic, got {p}")));
    }
    let a = p.coeff(2);
    let b = p.coeff(1);
    let c = p.coeff(0);
    Ok(BigInt::from(18) * &a * &b * &c - BigInt::from(4) * &a * &a * &a * &c + &a * &a * &b * &b
        - BigInt::from(4) * &b * &b * &b
        - BigInt::from(27) * &c * &c)
}

/// Exact square root of a nonnegative perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact cube root of a perfect cube (any sign).
pub fn exact_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub(crate) struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub(crate) fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative().sign_preserving_primitive()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = rat_divrem(&seq[n - 2].to_rationals(), &seq[n - 1].to_rationals());
            if r.is_empty() {
                break;
            }
            let neg: Vec<BigRational> = r.into_iter().map(|c| -c).collect();
            seq.push(IntPoly::from_rationals(&neg));
        }
        Sturm { seq }
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.eval(x).cmp(&BigRational::zero())))
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub(crate) fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Strict upper bound on the absolute value of every complex root.
pub(crate) fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = BigRational::from_integer(p.leading().unwrap().abs());
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| BigRational::from_integer(c.abs()) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    max + BigRational::one()
}

/// A split point strictly inside `(a, b)` at which `p` does not vanish.
pub(crate) fn split_point(p: &IntPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let width = b - a;
    let mut denom = BigInt::from(2);
    loop {
        // Try the midpoint first, then nearby dyadic offsets.
        let mut num = BigInt::one();
        while num < denom {
            let m = a + &width * BigRational::new(num.clone(), denom.clone());
            if !p.eval(&m).is_zero() {
                return m;
            }
            num += 2;
        }
        denom *= 2;
    }
}

/// Isolating intervals `(lo, hi)` for the real roots of a squarefree
/// polynomial with no rational roots, ascending. Every endpoint is a non-root.
pub(crate) fn isolate_irrational(p: &IntPoly) -> Vec<(BigRational, BigRational)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(p);
    let bound = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let m = split_point(p, &a, &b);
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// A real root together with its multiplicity in the input polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub value: RealAlgebraic,
    pub multiplicity: usize,
}

/// All real roots of `p`, ascending, each with an isolating interval of
/// width at most `width` and its multiplicity.
///
/// Rational roots are stripped first; the remaining factor of the squarefree
/// part has no rational root, so for degree 2 or 3 it is irreducible and is
/// the minimal polynomial of each of its roots. Larger irrational factors
/// would need factorization and are rejected.
pub fn isolate_real_roots(p: &IntPoly, width: &BigRational) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::Domain("isolate_real_roots of the zero polynomial".into()));
    }
    if !width.is_positive() {
        return Err(Error::Domain("isolation width must be positive".into()));
    }
    let rational = rational_roots(p)?;
    let mut out: Vec<IsolatedRoot> = Vec::new();
    let mut rest = p.squarefree_part();
    let mut i = 0;
    while i < rational.len() {
        let r = &rational[i];
        let mult = rational.iter().filter(|s| *s == r).count();
        out.push(IsolatedRoot {
            value: RealAlgebraic::from_rational(r.clone()),
            multiplicity: mult,
        });
        rest = rest
            .divide(&IntPoly::linear_with_root(r))
            .expect("rational root divides squarefree part");
        i += mult;
    }
    let rest = rest.primitive();
    let deg = rest.degree().unwrap_or(0);
    if deg > 3 {
        return Err(Error::Domain(format!(
            "irrational factor {rest} has degree {deg} > 3; minimal polynomials need factorization"
        )));
    }
    if deg >= 2 {
        let mut mult = 0;
        let mut q = p.clone();
        while let Some(next) = q.divide(&rest) {
            mult += 1;
            q = next;
        }
        for (lo, hi) in isolate_irrational(&rest) {
            out.push(IsolatedRoot {
                value: RealAlgebraic::from_isolating(rest.clone(), lo, hi),
                multiplicity: mult,
            });
        }
    }
    for r in &mut out {
        r.value = r.value.refined(width);
    }
    out.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(out)
}
