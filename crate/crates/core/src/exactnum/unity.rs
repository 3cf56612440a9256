use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::algebraic::RealAlgebraic;
use super::ball::{cos_sin_turn, ComplexBall, RealBall};
use super::poly::IntPoly;

/// `exp(2 pi i p/q)` with `0 <= p < q` and `gcd(p, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    p: u32,
    q: u32,
}

impl RootOfUnity {
    /// Reduces `p/q` modulo 1 and to lowest terms. Panics if `q == 0`.
    pub fn new(p: i64, q: u32) -> Self {
        assert!(q >= 1, "root of unity needs q >= 1");
        let qi = q as i64;
        let p = p.rem_euclid(qi);
        let g = p.gcd(&qi).max(1);
        RootOfUnity {
            p: (p / g) as u32,
            q: (qi / g) as u32,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { p: 0, q: 1 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Multiplicative order.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn turn(&self) -> BigRational {
        BigRational::new(self.p.into(), self.q.into())
    }

    pub fn inv(&self) -> Self {
        Self::new(-(self.p as i64), self.q)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let q = self.q.lcm(&other.q);
        let p = self.p as i64 * (q / self.q) as i64 + other.p as i64 * (q / other.q) as i64;
        Self::new(p, q)
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new((self.p as i64 * e).rem_euclid(self.q as i64), self.q)
    }

    /// All roots of unity of order at most `max_order`, sorted by `(q, p)`.
    pub fn all_up_to(max_order: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for q in 1..=max_order {
            for p in 0..q {
                if p.gcd(&q) == 1 {
                    out.push(RootOfUnity { p, q });
                }
            }
        }
        out
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let a = 2.0 * std::f64::consts::PI * self.p as f64 / self.q as f64;
        match (self.p, self.q) {
            (0, 1) => (1.0, 0.0),
            (1, 2) => (-1.0, 0.0),
            (1, 4) => (0.0, 1.0),
            (3, 4) => (0.0, -1.0),
            _ => (a.cos(), a.sin()),
        }
    }

    /// Ball containing the value with radius at most `2^(1 - prec)`.
    pub fn value(&self, prec: u32) -> ComplexBall {
        let (c, s) = cos_sin_turn(&self.turn(), prec);
        ComplexBall::new(c, s)
    }

    /// `2 cos(2 pi p/q) = theta + theta^-1` as an exact real algebraic number.
    pub fn two_cos(&self) -> RealAlgebraic {
        let psi = two_cos_minimal_poly(self.q);
        // 2cos is decreasing in the reduced turn j = min(p, q - p) on [0, q/2],
        // so the ascending root index counts larger admissible j.
        let j = self.p.min(self.q - self.p);
        let index = (j + 1..=self.q / 2).filter(|&i| i.gcd(&self.q) == 1).count();
        RealAlgebraic::root_of_irreducible(&psi, index).expect("2cos root index in range")
    }

    pub fn two_cos_ball(&self, prec: u32) -> RealBall {
        let (c, _) = cos_sin_turn(&self.turn(), prec);
        c.mul_int(2)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2pi i {}/{})", self.p, self.q)
    }
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn x_pow_minus_one(d: u32) -> IntPoly {
    let mut c = vec![BigInt::zero(); d as usize + 1];
    c[0] = BigInt::from(-1);
    c[d as usize] = BigInt::one();
    IntPoly::new(c)
}

/// The `n`-th cyclotomic polynomial, via `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic_poly(n: u32) -> IntPoly {
    assert!(n >= 1);
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = IntPoly::from_i64(&[1]);
    let mut den = IntPoly::from_i64(&[1]);
    for &d in &divisors {
        match mobius(n / d) {
            1 => num = num.mul(&x_pow_minus_one(d)),
            -1 => den = den.mul(&x_pow_minus_one(d)),
            _ => {}
        }
    }
    let q = num.divide(&den).expect("cyclotomic product divides exactly");
    // `divide` returns a primitive polynomial; restore the monic normalisation.
    q.primitive()
}

/// Minimal polynomial of `2 cos(2 pi / q)`.
pub fn two_cos_minimal_poly(q: u32) -> IntPoly {
    match q {
        1 => return IntPoly::from_i64(&[-2, 1]),
        2 => return IntPoly::from_i64(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic_poly(q);
    let h = phi.degree().unwrap() / 2;
    // phi(x) / x^h = a_h + sum_j a_{h+j} (x^j + x^-j), and
    // x^j + x^-j = V_j(x + 1/x) with V_0 = 2, V_1 = z, V_{j+1} = z V_j - V_{j-1}.
    let z = IntPoly::from_i64(&[0, 1]);
    let mut v_prev = IntPoly::from_i64(&[2]);
    let mut v_cur = z.clone();
    let mut acc: Vec<BigInt> = vec![phi.coeff(h)];
    for j in 1..=h {
        let c = phi.coeff(h + j);
        let term = &v_cur;
        if acc.len() < term.coeffs().len() {
            acc.resize(term.coeffs().len(), BigInt::zero());
        }
        for (i, t) in term.coeffs().iter().enumerate() {
            acc[i] += &c * t;
        }
        let next = z.mul(&v_cur);
        let mut nc: Vec<BigInt> = next.coeffs().to_vec();
        for (i, t) in v_prev.coeffs().iter().enumerate() {
            nc[i] -= t;
        }
        v_prev = v_cur;
        v_cur = IntPoly::new(nc);
    }
    IntPoly::new(acc).primitive()
}
