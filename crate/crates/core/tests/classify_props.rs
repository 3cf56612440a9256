use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use serde_json::{json, Value};

use rank3ribbon::characters::{galois_type, solve_characters, GaloisTag};
use rank3ribbon::classify::{
    audit_case3b_grid, audit_t_minus_one_family, case1_filter, case2_equations, case2_filter, case3a_filter,
    case3b_filter, case3b_grid_sides, classify_all, enumerate_star_solutions, landau_bound, ClassifyConfig,
};
use rank3ribbon::fusion::{make_rank3_ring, Rank3Params};
use rank3ribbon::premodular::FilterStatus;

const ADMISSIBLE: [&str; 4] = ["K(Rep(Z/3))", "K(0,1,0,0)", "K(0,1,0,1)", "K(1,1,0,1)"];

fn non_empty(v: &Value) -> bool {
    match v {
        Value::Object(m) => !m.is_empty(),
        Value::Array(a) => !a.is_empty(),
        Value::Null => false,
        _ => true,
    }
}

#[test]
fn filters_are_sound_up_to_twenty() {
    let report = classify_all(&ClassifyConfig::new(20)).unwrap();
    assert_eq!(report.admissible_names(), ADMISSIBLE);
    for r in &report.rings {
        if ADMISSIBLE.contains(&r.name.as_str()) {
            continue;
        }
        for v in [&r.symmetric, &r.nonmodular, &r.modular] {
            assert_ne!(v.status, FilterStatus::Pass, "{}", r.name);
            assert!(!v.summary.is_empty(), "{}", r.name);
            if v.status == FilterStatus::Fail {
                assert!(non_empty(&v.certificate), "{}: {}", r.name, v.summary);
            }
        }
        assert_eq!(r.modular.status, FilterStatus::Fail, "{}: modular branch must decide", r.name);
    }
    assert!(report
        .rings
        .iter()
        .filter(|r| r.galois.tag == GaloisTag::S3)
        .all(|r| !r.modular.passed() && r.modular.summary.contains("not abelian")));
}

#[test]
fn galois_dispatch_is_total() {
    for p in enumerate_star_solutions(20) {
        let sys = solve_characters(&make_rank3_ring(&p).unwrap()).unwrap();
        let tag = galois_type(&sys).tag;
        let applicable = [
            case1_filter(&sys).unwrap().status,
            case2_filter(&sys).status,
            case3a_filter(&sys).status,
            case3b_filter(&sys).unwrap().status,
        ]
        .iter()
        .filter(|s| **s != FilterStatus::NotApplicable)
        .count();
        let expected = if tag == GaloisTag::S3 { 0 } else { 1 };
        assert_eq!(applicable, expected, "{p}: {tag}");
    }
}

#[test]
fn case_two_certificate_for_the_c3_ring() {
    let v = case2_equations(&Rank3Params::new(1, 1, 1, 0));
    assert!(v.passed());
    let c = &v.certificate["orientations"][0];
    assert_eq!(c["orientation"], json!([1, 1, 1, 0]));
    assert_eq!(c["lambda"], "1");
    assert_eq!(c["eq1"], json!(["1", "1"]));
    assert_eq!(c["eq2"], json!(["2", "2"]));
    assert_eq!(c["eq3"], json!(["-1", "-1"]));
    assert_eq!(c["vieta_sum"], -3);
}

#[test]
fn case_three_b_audits() {
    assert!(audit_case3b_grid(50, 50));
    assert!(audit_t_minus_one_family(50));
}

#[test]
fn branch_verdicts_match_witnesses_up_to_ten() {
    let mut cfg = ClassifyConfig::new(10);
    cfg.witness_all = true;
    let report = classify_all(&cfg).unwrap();
    for r in &report.rings {
        let found = r.witnesses.as_ref().unwrap().len();
        assert_eq!(r.admissible(), found > 0, "{}: {found} witnesses", r.name);
    }
}

fn unit_fraction_oracle(r: usize, limit: u64) -> u64 {
    fn go(r: usize, start: u64, limit: u64, acc: &mut Vec<u64>, best: &mut u64) {
        if acc.len() == r {
            let prod: u64 = acc.iter().product();
            let sum: u64 = acc.iter().map(|c| prod / c).sum();
            if sum == prod {
                *best = (*best).max(*acc.last().unwrap());
            }
            return;
        }
        for c in start..=limit {
            acc.push(c);
            go(r, c, limit, acc, best);
            acc.pop();
        }
    }
    let mut best = 0;
    go(r, 1, limit, &mut Vec::new(), &mut best);
    best
}

#[test]
fn landau_matches_brute_force() {
    for (r, limit) in [(1, 10), (2, 10), (3, 20), (4, 50)] {
        assert_eq!(landau_bound(r as u32).unwrap(), unit_fraction_oracle(r, limit), "r = {r}");
    }
}

#[test]
fn star_enumeration_matches_direct_loop() {
    for bound in 0..=8u32 {
        let mut direct = BTreeSet::new();
        for k in 0..=bound {
            for l in 0..=bound {
                for m in 0..=bound {
                    for n in 0..=bound {
                        if k * k + l * l == l * m + k * n + 1 {
                            direct.insert((k, l, m, n).min((l, k, n, m)));
                        }
                    }
                }
            }
        }
        let got: Vec<(u32, u32, u32, u32)> =
            enumerate_star_solutions(bound).iter().map(|p| (p.k, p.l, p.m, p.n)).collect();
        assert_eq!(got, direct.into_iter().collect::<Vec<_>>(), "bound {bound}");
    }
}

proptest! {
    #[test]
    fn grid_identity_never_holds(s in 1i64..2000, t in 2i64..2000, neg in any::<bool>()) {
        let t = if neg { -t } else { t };
        let (lhs, rhs) = case3b_grid_sides(s, t);
        prop_assert!(lhs > BigRational::from_integer(2.into()));
        prop_assert!(rhs <= BigRational::from_integer(1.into()));
    }
}
