//! One line per acceptance criterion. Criterion 9 is not computable and is
//! reported red; the rest must hold.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rank3ribbon::characters::{char_poly_x, galois_type, solve_characters, CharacterSystem, GaloisTag};
use rank3ribbon::classify::{
    audit_case3b_grid, audit_rank3_rings, audit_star_associativity, case2_equations, classify_all,
    enumerate_star_solutions, landau_bound, ClassifyConfig, LIMITATION,
};
use rank3ribbon::exactnum::{cubic_discriminant, ComplexBall};
use rank3ribbon::fusion::{global_fp_dim, make_rank3_ring, Rank3Params};
use rank3ribbon::premodular::{
    build_s_matrix, classify_s_matrix, search_ribbon_data, SearchConfig, StructureClass, Twists,
};
use rank3ribbon::Execution;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const EXPECTED: [&str; 4] = ["K(Rep(Z/3))", "K(0,1,0,0)", "K(0,1,0,1)", "K(1,1,0,1)"];

fn p(k: u32, l: u32, m: u32, n: u32) -> Rank3Params {
    Rank3Params::new(k, l, m, n)
}

fn system(q: Rank3Params) -> CharacterSystem {
    solve_characters(&make_rank3_ring(&q).unwrap()).unwrap()
}

fn criterion_1_and_2() -> (Outcome, Outcome, rank3ribbon::classify::ClassificationReport) {
    let start = Instant::now();
    let report = classify_all(&ClassifyConfig::new(20)).unwrap();
    let elapsed = start.elapsed();
    let admissible = report.admissible_names();
    let c1 = outcome(
        admissible == EXPECTED && elapsed < Duration::from_secs(60),
        format!("admissible {admissible:?} in {:.1}s", elapsed.as_secs_f64()),
    );
    let survivors = report.modular_survivors();
    let ising_alias = report
        .rings
        .iter()
        .find(|r| r.name == "K(0,1,0,0)")
        .is_some_and(|r| r.aliases == ["K(1,0,0,0)"]);
    let header_notes = report.header_json()["assumptions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|a| a.as_str().unwrap().contains("K(1,0,0,0) is K(0,1,0,0)"));
    let c2 = outcome(
        survivors == EXPECTED && ising_alias && header_notes,
        format!("modular survivors {survivors:?}; K(1,0,0,0) listed as alias of K(0,1,0,0)"),
    );
    (c1, c2, report)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut cfg = ClassifyConfig::new(2);
    cfg.witness_all = true;
    let report = classify_all(&cfg).unwrap();
    let ring = report.rings.iter().find(|r| r.name == "K(0,1,0,2)").unwrap();
    let all_fail = !ring.symmetric.passed() && !ring.nonmodular.passed() && !ring.modular.passed();
    let search = search_ribbon_data(&system(p(0, 1, 0, 2)), &SearchConfig::default()).unwrap();
    let elapsed = start.elapsed();
    outcome(
        all_fail && search.is_empty() && ring.witnesses.as_ref().is_some_and(Vec::is_empty) && elapsed.as_secs() < 30,
        format!(
            "branches fail ({}; {}); {} witnesses at twist order 60",
            ring.nonmodular.summary,
            ring.modular.summary,
            search.len()
        ),
    )
}

fn near(b: &ComplexBall, re: f64, im: f64, tol: f64) -> bool {
    let (x, y) = b.mid_f64();
    (x - re).abs() <= tol && (y - im).abs() <= tol
}

fn criterion_4() -> Outcome {
    let cfg = SearchConfig {
        max_twist_order: 16,
        ..SearchConfig::default()
    };
    let ws = search_ribbon_data(&system(p(0, 1, 0, 0)), &cfg).unwrap();
    let ok = !ws.is_empty()
        && ws.iter().all(|w| {
            let [_, tx, ty] = w.twists.theta;
            let y = w.dims.y.to_c64().0;
            let s = &w.smatrix;
            let shape = [[1.0, 1.0, y], [1.0, 1.0, -y], [y, -y, 0.0]];
            (tx.p(), tx.q()) == (1, 2)
                && ty.q() == 16
                && w.structure_class == StructureClass::Modular
                && (0..3).all(|i| (0..3).all(|j| near(s.entry(i, j), shape[i][j], 0.0, 1e-9)))
                && s.entry(2, 2).abs_upper() < 1e-9
        });
    outcome(ok, format!("{} witnesses, all theta_X = -1, theta_Y of order 16, modular", ws.len()))
}

fn criterion_5() -> Outcome {
    let sys = system(p(0, 1, 0, 1));
    let d = sys
        .chars
        .iter()
        .find(|c| c.x.to_integer() == Some(1.into()) && c.y.to_integer() == Some(2.into()))
        .unwrap();
    let s = build_s_matrix(&sys.ring, d, &Twists::all_trivial(), 128).unwrap();
    let class = classify_s_matrix(&s, 1e-9).unwrap();
    let worst = s.minors().iter().map(ComplexBall::abs_upper).fold(0.0, f64::max);
    outcome(
        class == StructureClass::Symmetric && worst < 1e-9,
        format!("class {class}, largest 2x2 minor bound {worst:e}"),
    )
}

fn criterion_6() -> Outcome {
    let v = case2_equations(&p(1, 1, 1, 0));
    let c = &v.certificate["orientations"][0];
    let disc = cubic_discriminant(&char_poly_x(&p(1, 1, 1, 0))).unwrap();
    let tag = galois_type(&system(p(1, 1, 1, 0))).tag;
    let ok = v.passed()
        && c["lambda"] == "1"
        && c["eq1"][0] == c["eq1"][1]
        && c["eq2"][0] == c["eq2"][1]
        && c["eq3"][0] == c["eq3"][1]
        && disc == BigInt::from(49)
        && tag == GaloisTag::C3;
    outcome(
        ok,
        format!("lambda {}, eq2 {}, eq3 {}, discriminant {disc}, type {tag}", c["lambda"], c["eq2"], c["eq3"]),
    )
}

fn criterion_7() -> Outcome {
    let bound = landau_bound(3).unwrap();
    let global = global_fp_dim(&make_rank3_ring(&p(0, 1, 0, 1)).unwrap());
    let six = BigRational::from_integer(6.into());
    outcome(
        bound == 6 && global.to_rational() == Some(six),
        format!("landau_bound(3) = {bound}, global FP dim of K(0,1,0,1) = {}", global.approx()),
    )
}

fn vieta_exact(q: Rank3Params) -> bool {
    let sys = system(q);
    let prec = 256;
    let mut px = ComplexBall::exact_int(1, prec);
    let mut py = ComplexBall::exact_int(1, prec);
    for c in &sys.chars {
        px = px.mul(&c.ball(1, prec));
        py = py.mul(&c.ball(2, prec));
    }
    // Both products are rational integers (symmetric in the roots of a monic
    // integer cubic), so a ball of radius < 1/2 pins them down.
    px.radius() < 0.5
        && py.radius() < 0.5
        && near(&px, -(q.l as f64), 0.0, 0.5)
        && near(&py, -(q.k as f64), 0.0, 0.5)
}

fn float_characters_agree(q: Rank3Params) -> bool {
    let ring = make_rank3_ring(&q).unwrap();
    let sys = solve_characters(&ring).unwrap();
    let lx = ring.mult_matrix(1);
    let ly = ring.mult_matrix(2);
    sys.chars.iter().all(|c| {
        let v = [1.0, c.x.to_c64().0, c.y.to_c64().0];
        let scale = v.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        (0..3).all(|i| {
            let ax: f64 = (0..3).map(|j| lx[i][j] as f64 * v[j]).sum();
            let ay: f64 = (0..3).map(|j| ly[i][j] as f64 * v[j]).sum();
            (ax - v[1] * v[i]).abs() < 1e-9 * scale * scale && (ay - v[2] * v[i]).abs() < 1e-9 * scale * scale
        })
    })
}

fn criterion_8(report_rings: &[(String, GaloisTag, bool)]) -> Outcome {
    let assoc = audit_star_associativity(10, Execution::default());
    let sols = enumerate_star_solutions(10);
    let chars = sols.iter().all(|&q| float_characters_agree(q));
    let vieta = sols.iter().all(|&q| vieta_exact(q));
    let grid = audit_case3b_grid(50, 50);
    let families = audit_rank3_rings(1, Execution::default()).matches();
    let s3_ok = report_rings
        .iter()
        .filter(|(_, tag, _)| *tag == GaloisTag::S3)
        .all(|(_, _, modular)| !modular);
    let s3_count = report_rings.iter().filter(|(_, tag, _)| *tag == GaloisTag::S3).count();
    outcome(
        assoc.agrees() && assoc.checked == 11u64.pow(4) && chars && vieta && grid && families && s3_ok,
        format!(
            "star<=>assoc {} over {}; characters {chars}; vieta {vieta}; grid {grid}; families {families}; {s3_count} S3 rings, none modular",
            assoc.agrees(),
            assoc.checked
        ),
    )
}

fn criterion_9() -> (Outcome, bool) {
    let report = classify_all(&ClassifyConfig::new(1)).unwrap();
    let stated = report.header_json()["limitation"] == LIMITATION
        && report.render_table().starts_with(LIMITATION)
        && LIMITATION.contains("exactly 7");
    (
        outcome(
            false,
            format!("count of 7 categories is not computable from rings and data; limitation stated in header: {stated}"),
        ),
        stated,
    )
}

#[test]
fn acceptance_criteria() {
    let (c1, c2, report) = criterion_1_and_2();
    let tags: Vec<(String, GaloisTag, bool)> = report
        .rings
        .iter()
        .map(|r| (r.name.clone(), r.galois.tag, r.modular.passed()))
        .collect();
    let (c9, limitation_stated) = criterion_9();
    let results = [
        c1,
        c2,
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&tags),
        c9,
    ];
    for (i, r) in results.iter().enumerate() {
        let mark = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {mark}: {}", i + 1, r.detail);
    }
    for (i, r) in results.iter().take(8).enumerate() {
        assert!(r.pass, "criterion {} failed: {}", i + 1, r.detail);
    }
    assert!(limitation_stated);
}
