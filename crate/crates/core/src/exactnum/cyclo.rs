//! Exact expressions in `F(zeta_N)` for a real number field `F`.
//!
//! Elements are polynomials in `zeta_N` with coefficients in `F`, reduced
//! modulo the `N`-th cyclotomic polynomial. `Phi_N` may factor over `F`, so a
//! zero reduced representative certifies that the value is zero but a nonzero
//! representative does not prove the converse. `decide_zero` closes the gap
//! with a norm bound: a nonzero algebraic integer has norm at least 1, so a
//! nonzero value cannot be smaller than an explicit bound.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{ComplexBall, RealBall};
use super::numfield::{NfElem, NumberField};
use super::unity::{cyclotomic_poly, RootOfUnity};

#[derive(Clone, Debug)]
pub struct CycloExpr {
    field: Arc<NumberField>,
    order: u32,
    modulus: Vec<BigInt>,
    coeffs: Vec<NfElem>,
}

impl CycloExpr {
    pub fn zero(field: &Arc<NumberField>, order: u32) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.degree().unwrap();
        CycloExpr {
            field: field.clone(),
            order,
            modulus: phi.coeffs().to_vec(),
            coeffs: vec![NfElem::from_integer(field, 0); deg],
        }
    }

    pub fn constant(c: &NfElem, order: u32) -> Self {
        let mut out = Self::zero(c.field(), order);
        out.coeffs[0] = c.clone();
        out
    }

    /// The root of unity `r`, whose order must divide `order`.
    pub fn root(field: &Arc<NumberField>, r: RootOfUnity, order: u32) -> Self {
        assert!(order % r.q() == 0, "{r} is not an {order}-th root of unity");
        let e = (r.p() * (order / r.q())) as usize;
        let mut raw = vec![NfElem::from_integer(field, 0); e + 1];
        raw[e] = NfElem::from_integer(field, 1);
        let mut out = Self::zero(field, order);
        out.coeffs = out.reduce(raw);
        out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn reduce(&self, mut c: Vec<NfElem>) -> Vec<NfElem> {
        let d = self.modulus.len() - 1;
        // Phi_N is monic: eliminate the top coefficient repeatedly.
        while c.len() > d {
            let top = c.pop().unwrap();
            let shift = c.len() - d;
            for (j, m) in self.modulus[..d].iter().enumerate() {
                let f = BigRational::from_integer(m.clone());
                c[shift + j] = c[shift + j].sub(&top.scale(&f));
            }
        }
        c.resize(d, NfElem::from_integer(&self.field, 0));
        c
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        CycloExpr {
            coeffs,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        CycloExpr {
            coeffs: self.coeffs.iter().map(NfElem::neg).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let n = self.coeffs.len();
        let mut raw = vec![NfElem::from_integer(&self.field, 0); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] = raw[i + j].add(&a.mul(b));
                }
            }
        }
        CycloExpr {
            coeffs: self.reduce(raw),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &NfElem) -> Self {
        CycloExpr {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            ..self.clone()
        }
    }

    /// True when the reduced representative vanishes, which proves the value is 0.
    pub fn is_certified_zero(&self) -> bool {
        self.coeffs.iter().all(NfElem::is_zero)
    }

    /// `Some(true)` if the value is zero, `Some(false)` if not, `None` when
    /// `prec` bits do not suffice.
    pub fn decide_zero(&self, prec: u32) -> Option<bool> {
        if self.is_certified_zero() {
            return Some(true);
        }
        let v = self.value(prec);
        if v.excludes_zero() {
            return Some(false);
        }
        let t = self.nonzero_lower_bound();
        (v.norm_sqr().upper() < &t * &t).then_some(true)
    }

    /// Lower bound on `|value|` valid whenever the value is nonzero.
    ///
    /// With `a` the leading coefficient of the generator's minimal polynomial,
    /// `h = a g` is an algebraic integer. Clearing denominators of the
    /// coordinates in powers of `h` and `zeta` gives an algebraic integer whose
    /// conjugates are bounded through the house of `h`.
    fn nonzero_lower_bound(&self) -> BigRational {
        let one = BigRational::one();
        let deg_f = self.field.degree();
        let (a, house_h) = if deg_f == 1 {
            (BigRational::one(), BigRational::one())
        } else {
            let m = self.field.modulus().coeffs();
            let lead = BigRational::from_integer(m[deg_f].abs());
            let max = m[..deg_f].iter().map(|c| c.abs()).max().unwrap_or_default();
            let house_g = &one + BigRational::from_integer(max) / &lead;
            (lead.clone(), lead * house_g)
        };
        let mut denom = BigInt::one();
        let mut house = BigRational::zero();
        for c in &self.coeffs {
            let mut a_pow = BigRational::one();
            let mut h_pow = BigRational::one();
            for r in c.coords() {
                let s = r / &a_pow;
                denom = denom.lcm(s.denom());
                house += s.abs() * &h_pow;
                a_pow *= &a;
                h_pow *= &house_h;
            }
        }
        let l = BigRational::from_integer(denom);
        let b = (&l * house).max(one.clone());
        let degree = deg_f * (self.modulus.len() - 1);
        let mut b_pow = one.clone();
        for _ in 1..degree {
            b_pow *= &b;
        }
        one / (l * b_pow)
    }

    pub fn value(&self, prec: u32) -> ComplexBall {
        // powers of one zeta lose about one ulp per step
        let w = prec + 16 + (32 - self.order.leading_zeros());
        let zeta = RootOfUnity::new(1, self.order).value(w);
        let mut pow = ComplexBall::exact_int(1, w);
        let mut acc = ComplexBall::from_real(RealBall::zero(w));
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = acc.add(&pow.mul_real(&c.to_ball(w)));
            }
            pow = pow.mul(&zeta);
        }
        acc
    }
}
