//! Arithmetic in a real number field `Q(a)` with a fixed real embedding.
//!
//! Elements are polynomials in the generator of degree below the field
//! degree, with rational coefficients. Degree-1 fields represent `Q` itself.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::RealAlgebraic;
use super::ball::RealBall;
use super::poly::{rat_divrem, rat_mul, rat_trim, IntPoly};
use super::rat_to_f64;
use super::roots::Sturm;
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: IntPoly,
    generator: RealAlgebraic,
}

impl NumberField {
    /// The field generated by `generator`, embedded in the reals at it.
    pub fn new(generator: RealAlgebraic) -> Arc<Self> {
        Arc::new(NumberField {
            modulus: generator.minimal_poly().clone(),
            generator,
        })
    }

    pub fn rationals() -> Arc<Self> {
        Self::new(RealAlgebraic::from_integer(0))
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(1)
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn generator_value(&self) -> &RealAlgebraic {
        &self.generator
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl NfElem {
    fn reduce(field: &Arc<NumberField>, mut c: Vec<BigRational>) -> Self {
        rat_trim(&mut c);
        let d = field.degree();
        if c.len() > d {
            let (_, r) = rat_divrem(&c, &field.modulus.to_rationals());
            c = r;
        }
        c.resize(d, BigRational::zero());
        NfElem {
            field: field.clone(),
            coeffs: c,
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        Self::reduce(field, vec![r])
    }

    pub fn from_integer(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree() == 1 {
            let r = field.generator.to_rational().expect("degree-1 generator is rational");
            return Self::from_rational(field, r);
        }
        Self::reduce(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Coordinates in the power basis `1, a, a^2, ...`.
    pub fn coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "number field mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        NfElem {
            field: self.field.clone(),
            coeffs: c,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        Self::reduce(&self.field, rat_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    /// Matrix of multiplication by `self` in the power basis (column j is
    /// `self * a^j`).
    fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = Self::from_integer(&self.field, 1);
        let gen = Self::reduce(&self.field, vec![BigRational::zero(), BigRational::one()]);
        for _ in 0..d {
            cols.push(self.mul(&basis).coeffs);
            basis = basis.mul(&gen);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in a number field".into()));
        }
        let m = self.mult_matrix();
        let d = m.len();
        let mut rhs = vec![BigRational::zero(); d];
        rhs[0] = BigRational::one();
        let sol = solve_linear(m, rhs).ok_or_else(|| Error::Domain("singular multiplication matrix".into()))?;
        Ok(NfElem {
            field: self.field.clone(),
            coeffs: sol,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_integer(&self.field, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Characteristic polynomial of multiplication by `self` (Faddeev-LeVerrier).
    pub fn char_poly(&self) -> IntPoly {
        let a = self.mult_matrix();
        let n = a.len();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = mat_mul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = mat_mul(&a, &m);
            let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        IntPoly::from_rationals(&coeffs).primitive()
    }

    pub fn minimal_poly(&self) -> IntPoly {
        self.char_poly().squarefree_part()
    }

    /// The embedded real value as an exact [`RealAlgebraic`].
    pub fn to_real_algebraic(&self) -> RealAlgebraic {
        if let Some(r) = self.to_rational() {
            return RealAlgebraic::from_rational(r);
        }
        let mp = self.minimal_poly();
        let sturm = Sturm::new(&mp);
        let mut gen = self.field.generator.clone();
        loop {
            let (glo, ghi) = gen.interval();
            let (lo, hi) = horner_interval(&self.coeffs, glo, ghi);
            if lo < hi && sturm.count(&lo, &hi) == 1 {
                return RealAlgebraic::from_isolating(mp, lo, hi);
            }
            let (glo, ghi) = gen.interval();
            let w = (ghi - glo) / BigRational::from_integer(4.into());
            gen = gen.refined(&w);
        }
    }

    /// Ball enclosure of the embedded value.
    pub fn to_ball(&self, prec: u32) -> RealBall {
        if let Some(r) = self.to_rational() {
            return RealBall::from_rational(&r, prec);
        }
        let w = prec + 16;
        let g = RealBall::from_algebraic(&self.field.generator, w);
        self.coeffs
            .iter()
            .rev()
            .fold(RealBall::zero(w), |acc, c| acc.mul(&g).add(&RealBall::from_rational(c, w)))
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.to_rational() {
            return rat_to_f64(&r);
        }
        let g = self.field.generator.to_f64();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * g + rat_to_f64(c))
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*a"),
                _ => format!("({c})*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Gaussian elimination over the rationals; `None` if singular.
pub(crate) fn solve_linear(
    mut m: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let p = m[col][col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..n {
                    let v = &f * &m[col][c];
                    m[r][c] -= v;
                }
                let v = &f * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Enclosure of `sum c_i t^i` for `t` in `[lo, hi]`.
fn horner_interval(
    coeffs: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in coeffs.iter().rev() {
        let products = [&a * lo, &a * hi, &b * lo, &b * hi];
        let min = products.iter().min().unwrap().clone();
        let max = products.iter().max().unwrap().clone();
        a = min + c;
        b = max + c;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt2_field() -> Arc<NumberField> {
        NumberField::new(
            RealAlgebraic::new(&IntPoly::from_i64(&[-2, 0, 1]), q(1, 1), q(2, 1)).unwrap(),
        )
    }

    #[test]
    fn arithmetic_in_q_sqrt2() {
        let f = sqrt2_field();
        let a = NfElem::generator(&f);
        assert_eq!(a.mul(&a), NfElem::from_integer(&f, 2));
        let one_plus = a.add(&NfElem::from_integer(&f, 1));
        let inv = one_plus.inv().unwrap();
        assert_eq!(inv.mul(&one_plus), NfElem::from_integer(&f, 1));
        // 1/(1+√2) = √2 - 1
        assert!((inv.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn minimal_polynomials_and_embedding() {
        let f = sqrt2_field();
        let a = NfElem::generator(&f);
        let x = a.add(&NfElem::from_integer(&f, 1)); // 1 + √2
        assert_eq!(x.minimal_poly(), IntPoly::from_i64(&[-1, -2, 1]));
        let r = x.to_real_algebraic();
        assert!((r.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let two = a.mul(&a);
        assert_eq!(two.to_real_algebraic(), RealAlgebraic::from_integer(2));
        let neg = a.neg().to_real_algebraic();
        assert!(neg < RealAlgebraic::from_integer(0));
    }

    #[test]
    fn cubic_field_embedding_picks_the_right_conjugate() {
        // x^3 - 3x + 1, middle root ~0.347
        let p = IntPoly::from_i64(&[1, -3, 0, 1]);
        let g = RealAlgebraic::new(&p, q(0, 1), q(1, 1)).unwrap();
        let f = NumberField::new(g);
        let a = NfElem::generator(&f);
        let sq = a.mul(&a).to_real_algebraic();
        let expect = 0.347_296_355_333_860_7_f64.powi(2);
        assert!((sq.to_f64() - expect).abs() < 1e-12);
        assert_eq!(a.char_poly(), p);
    }

    #[test]
    fn rational_field() {
        let f = NumberField::rationals();
        let h = NfElem::from_rational(&f, q(1, 2));
        assert_eq!(h.inv().unwrap().to_rational(), Some(q(2, 1)));
        assert_eq!(h.minimal_poly(), IntPoly::from_i64(&[-1, 2]));
        assert!(NfElem::from_integer(&f, 0).inv().is_err());
    }
}
