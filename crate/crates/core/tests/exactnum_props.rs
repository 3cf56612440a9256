use nalgebra::{Matrix3, Rotation3, Schur};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use rank3ribbon::exactnum::{isolate_real_roots, rational_roots, IntPoly, RealAlgebraic, RealBall};

fn width() -> BigRational {
    BigRational::new(1.into(), BigInt::from(1u64 << 40))
}

/// Real eigenvalues of the companion matrix of `x^3 + b x^2 + c x + d`
/// after dividing by the leading coefficient.
///
/// Unbounded Francis iteration can cycle forever on some companion matrices
/// (a nilpotent Jordan block never deflates), so it is capped, and a stalled
/// matrix is retried after a scalar shift and an orthogonal change of basis.
fn float_real_roots(a: i64, b: i64, c: i64, d: i64) -> Vec<f64> {
    let (b, c, d) = (b as f64 / a as f64, c as f64 / a as f64, d as f64 / a as f64);
    let m = Matrix3::new(0.0, 0.0, -d, 1.0, 0.0, -c, 0.0, 1.0, -b);
    let eig = (0..8)
        .find_map(|turn| {
            let shift = 0.37 * turn as f64;
            let r = Rotation3::from_euler_angles(0.3 * turn as f64, 0.7, 1.1).into_inner();
            let shifted = r * (m + Matrix3::identity() * shift) * r.transpose();
            Schur::try_new(shifted, f64::EPSILON, 10_000).map(|s| (shift, s.complex_eigenvalues()))
        })
        .expect("Schur decomposition converges after a shift");
    let mut roots: Vec<f64> = eig
        .1
        .iter()
        .filter(|z| z.im.abs() < 1e-4)
        .map(|z| z.re - eig.0)
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// A root of multiplicity k perturbs companion eigenvalues by about
/// eps^(1/k), while a nonzero root of a cubic with coefficients in [-9, 9]
/// has modulus >= 1/10.
fn sign(x: f64) -> i32 {
    if x.abs() < 1e-4 {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cubic_isolation_matches_companion_oracle(
        a in (-9i64..=9).prop_filter("cubic", |a| *a != 0),
        b in -9i64..=9, c in -9i64..=9, d in -9i64..=9,
    ) {
        let p = IntPoly::from_i64(&[d, c, b, a]);
        let exact = isolate_real_roots(&p, &width()).unwrap();
        let mut expanded: Vec<f64> = Vec::new();
        for r in &exact {
            for _ in 0..r.multiplicity {
                expanded.push(r.value.to_f64());
            }
        }
        let oracle = float_real_roots(a, b, c, d);
        prop_assert_eq!(expanded.len(), oracle.len(), "{} vs {:?}", p, oracle);
        for (x, y) in expanded.iter().zip(&oracle) {
            prop_assert!((x - y).abs() < 1e-3, "{}: {} vs {}", p, x, y);
            prop_assert_eq!(sign(*x), sign(*y));
        }
    }
}

proptest! {
    #[test]
    fn ball_arithmetic_contains_exact_value(a in rational(), b in rational(), c in rational(), prec in 24u32..200) {
        let ba = RealBall::from_rational(&a, prec);
        let bb = RealBall::from_rational(&b, prec);
        let bc = RealBall::from_rational(&c, prec);
        let exact = (&a + &b) * &c - &a * &a;
        let ball = ba.add(&bb).mul(&bc).sub(&ba.sqr());
        prop_assert!(ball.contains_rational(&exact));
        if !b.is_zero() {
            let q = &a / &b + &c;
            prop_assert!(ba.div(&bb).unwrap().add(&bc).contains_rational(&q));
        }
    }

    #[test]
    fn refinement_keeps_the_value(n in 2i64..500, k in 1u32..60) {
        prop_assume!((n as f64).sqrt().fract() != 0.0);
        let p = IntPoly::from_i64(&[-n, 0, 1]);
        let roots = isolate_real_roots(&p, &BigRational::from_integer(1.into())).unwrap();
        prop_assert_eq!(roots.len(), 2);
        for r in roots {
            let fine = r.value.refined(&BigRational::new(1.into(), BigInt::from(2).pow(k)));
            prop_assert_eq!(&fine, &r.value);
            let (lo, hi) = fine.interval();
            prop_assert!(hi - lo <= BigRational::new(1.into(), BigInt::from(2).pow(k)));
            let probe = BigRational::new(BigInt::from(n / 2), 1.into());
            prop_assert_eq!(fine.cmp_rational(&probe), r.value.cmp_rational(&probe));
        }
    }

    #[test]
    fn rational_roots_are_isolated_roots(p in -20i64..20, q in 1i64..10, b in -9i64..9, c in -9i64..9) {
        // (q x - p)(x^2 + b x + c)
        let poly = IntPoly::from_i64(&[-p, q]).mul(&IntPoly::from_i64(&[c, b, 1]));
        let isolated: Vec<RealAlgebraic> = isolate_real_roots(&poly, &width())
            .unwrap()
            .into_iter()
            .map(|r| r.value)
            .collect();
        let rats = rational_roots(&poly).unwrap();
        prop_assert!(rats.contains(&BigRational::new(p.into(), q.into())));
        for r in rats {
            let v = RealAlgebraic::from_rational(r.clone());
            prop_assert_eq!(v.degree(), 1);
            prop_assert!(isolated.contains(&v), "{} missing from isolation of {}", r, poly);
            prop_assert!(poly.eval(&r).abs().is_zero());
        }
    }
}
