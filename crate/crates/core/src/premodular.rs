//! S-matrices of candidate ribbon data, their classification, the search for
//! data-level witnesses, and the filter for the non-modular, non-symmetric case.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::characters::{CharValue, Character, CharacterSystem};
use crate::error::{Error, Result};
use crate::exactnum::{
    approx_string, BigInt, ComplexBall, CycloExpr, NfElem, RealAlgebraic, RootOfUnity, DEFAULT_PRECISION,
    MAX_PRECISION,
};
use crate::exec::Execution;
use crate::fusion::{canonicalize, FusionRing, Rank3Params};

/// Tolerance of the floating-point prefilter that precedes ball verification.
const PREFILTER_TOL: f64 = 1e-6;

/// Largest twist order tried by the exact relation in [`nonmodular_filter`].
pub const NONMODULAR_TWIST_ORDER: u32 = 60;

/// Twists of the three simple objects; the unit's twist is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Twists {
    pub theta: [RootOfUnity; 3],
}

impl Twists {
    pub fn new(x: RootOfUnity, y: RootOfUnity) -> Self {
        Twists {
            theta: [RootOfUnity::one(), x, y],
        }
    }

    pub fn all_trivial() -> Self {
        Self::new(RootOfUnity::one(), RootOfUnity::one())
    }

    /// Least common multiple of the twist orders.
    pub fn order(&self) -> u32 {
        self.theta.iter().fold(1, |acc, t| acc.lcm(&t.q()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.theta
                .iter()
                .map(|t| json!({"p": t.p(), "q": t.q()}))
                .collect(),
        )
    }
}

fn cmp_turn(a: &RootOfUnity, b: &RootOfUnity) -> Ordering {
    (a.p() as u64 * b.q() as u64).cmp(&(b.p() as u64 * a.q() as u64))
}

/// Twists compare lexicographically by turn `p/q`.
impl Ord for Twists {
    fn cmp(&self, other: &Self) -> Ordering {
        self.theta
            .iter()
            .zip(&other.theta)
            .map(|(a, b)| cmp_turn(a, b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Twists {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Twists {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.theta.iter().map(|t| format!("{}/{}", t.p(), t.q())).collect();
        write!(f, "theta turns ({})", t.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StructureClass {
    Symmetric,
    ProperPremodular,
    Modular,
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
struct Source {
    ring: FusionRing,
    dims: Character,
    twists: Twists,
}

/// The matrix `S~_ij = theta_i^-1 theta_j^-1 sum_k N_{i*j}^k theta_k d_k` in
/// ball arithmetic.
#[derive(Clone, Debug)]
pub struct SMatrix {
    entries: Vec<Vec<ComplexBall>>,
    precision: u32,
    source: Option<Source>,
}

impl SMatrix {
    /// A matrix without generating data. Classification cannot escalate
    /// precision or fall back to exact arithmetic for it.
    pub fn from_entries(entries: Vec<Vec<ComplexBall>>) -> Self {
        assert!(entries.len() == 3 && entries.iter().all(|r| r.len() == 3));
        let precision = entries[0][0].precision();
        SMatrix {
            entries,
            precision,
            source: None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &ComplexBall {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<ComplexBall>] {
        &self.entries
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..3).all(|i| (i + 1..3).all(|j| self.entries[i][j].within(&self.entries[j][i], tol)))
    }

    pub fn det(&self) -> ComplexBall {
        let e = &self.entries;
        let minor = |a: usize, b: usize| e[1][a].mul(&e[2][b]).sub(&e[1][b].mul(&e[2][a]));
        e[0][0]
            .mul(&minor(1, 2))
            .sub(&e[0][1].mul(&minor(0, 2)))
            .add(&e[0][2].mul(&minor(0, 1)))
    }

    /// All nine 2x2 minors.
    pub fn minors(&self) -> Vec<ComplexBall> {
        let e = &self.entries;
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let mut out = Vec::with_capacity(9);
        for &(r1, r2) in &pairs {
            for &(c1, c2) in &pairs {
                out.push(e[r1][c1].mul(&e[r2][c2]).sub(&e[r1][c2].mul(&e[r2][c1])));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|z| {
                            let (re, im) = z.mid_f64();
                            json!({
                                "approx": [approx_string(re), approx_string(im)],
                                "radius": format!("{:.1e}", z.radius()),
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        json!({"precision_bits": self.precision, "entries": rows})
    }
}

fn check_dims(dims: &Character) -> Result<()> {
    for i in 0..3 {
        if let CharValue::Real(r) = dims.value(i) {
            if r.signum() == Ordering::Equal {
                return Err(Error::ZeroDimension(i));
            }
        }
    }
    Ok(())
}

pub fn build_s_matrix(
    ring: &FusionRing,
    dims: &Character,
    twists: &Twists,
    precision_bits: u32,
) -> Result<SMatrix> {
    check_dims(dims)?;
    let w = precision_bits + 16;
    let d: Vec<ComplexBall> = (0..3).map(|k| dims.ball(k, w)).collect();
    let th: Vec<ComplexBall> = twists.theta.iter().map(|t| t.value(w)).collect();
    let th_inv: Vec<ComplexBall> = twists.theta.iter().map(|t| t.inv().value(w)).collect();
    let td: Vec<ComplexBall> = (0..3).map(|k| th[k].mul(&d[k])).collect();
    let mut entries = vec![Vec::with_capacity(3); 3];
    for (i, row) in entries.iter_mut().enumerate() {
        for j in 0..3 {
            let mut acc = ComplexBall::exact_int(0, w);
            for (k, v) in td.iter().enumerate() {
                let c = ring.n(ring.dual(i), j, k);
                if c > 0 {
                    acc = acc.add(&v.mul_int(c as i64));
                }
            }
            row.push(acc.mul(&th_inv[i]).mul(&th_inv[j]));
        }
    }
    Ok(SMatrix {
        entries,
        precision: precision_bits,
        source: Some(Source {
            ring: ring.clone(),
            dims: dims.clone(),
            twists: *twists,
        }),
    })
}

/// Decide the structure class.
///
/// Numerical rank 1 (every 2x2 minor within `tol` of 0) is symmetric and a
/// determinant ball excluding 0 is modular. Otherwise the determinant is
/// evaluated exactly in `F(zeta_N)` and precision is doubled until its zero
/// test is decided.
pub fn classify_s_matrix(s: &SMatrix, tol: f64) -> Result<StructureClass> {
    let mut cur = s.clone();
    let mut exact_det: Option<CycloExpr> = None;
    loop {
        if cur.minors().iter().all(|m| m.abs_upper() <= tol) {
            return Ok(StructureClass::Symmetric);
        }
        if cur.det().excludes_zero() {
            return Ok(StructureClass::Modular);
        }
        let Some(src) = cur.source.clone() else {
            return Err(Error::Undecidable {
                bits: cur.precision,
                detail: "determinant ball contains 0 and the matrix has no generating data".into(),
            });
        };
        let det = exact_det
            .get_or_insert_with(|| ExactData::new(&src.ring, &src.dims, &src.twists).det());
        match det.decide_zero(cur.precision) {
            Some(true) => return Ok(StructureClass::ProperPremodular),
            Some(false) => return Ok(StructureClass::Modular),
            None => {}
        }
        if cur.precision >= MAX_PRECISION {
            return Err(Error::Undecidable {
                bits: cur.precision,
                detail: format!("determinant of S~ for {}", src.twists),
            });
        }
        let next = (cur.precision * 2).min(MAX_PRECISION);
        cur = build_s_matrix(&src.ring, &src.dims, &src.twists, next)?;
    }
}

/// Index of the character matching row `i` divided by `d_i`, if any.
fn row_character(
    s: &SMatrix,
    i: usize,
    dims: &Character,
    system: &CharacterSystem,
    tol: f64,
) -> Option<usize> {
    let prec = s.precision + 16;
    let d = dims.ball(i, prec);
    let row: Vec<ComplexBall> = (0..3)
        .map(|j| s.entries[i][j].div(&d))
        .collect::<Result<_>>()
        .ok()?;
    system
        .chars
        .iter()
        .position(|c| (0..3).all(|j| row[j].within(&c.ball(j, prec), tol)))
}

/// Every row divided by its dimension is, within `tol`, a character.
pub fn verify_row_characters(
    s: &SMatrix,
    dims: &Character,
    system: &CharacterSystem,
    tol: f64,
) -> bool {
    (0..3).all(|i| row_character(s, i, dims, system, tol).is_some())
}

/// Exact counterpart of an S-matrix in `F(zeta_N)`.
struct ExactData {
    d: Vec<CycloExpr>,
    theta: Vec<CycloExpr>,
    theta_inv: Vec<CycloExpr>,
    s: Vec<Vec<CycloExpr>>,
    zero: CycloExpr,
}

impl ExactData {
    fn new(ring: &FusionRing, dims: &Character, twists: &Twists) -> Self {
        let mut order = twists.order();
        for v in dims.values() {
            if let CharValue::Unity(u) = v {
                order = order.lcm(&u.q());
            }
        }
        let f = dims.field();
        let d: Vec<CycloExpr> = (0..3).map(|k| dims.cyclo(k, order)).collect();
        let theta: Vec<CycloExpr> = twists
            .theta
            .iter()
            .map(|&t| CycloExpr::root(&f, t, order))
            .collect();
        let theta_inv: Vec<CycloExpr> = twists
            .theta
            .iter()
            .map(|t| CycloExpr::root(&f, t.inv(), order))
            .collect();
        let td: Vec<CycloExpr> = (0..3).map(|k| theta[k].mul(&d[k])).collect();
        let s = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut acc = CycloExpr::zero(&f, order);
                        for (k, v) in td.iter().enumerate() {
                            let c = ring.n(ring.dual(i), j, k);
                            if c > 0 {
                                acc = acc.add(&v.scale(&NfElem::from_integer(&f, c as i64)));
                            }
                        }
                        acc.mul(&theta_inv[i]).mul(&theta_inv[j])
                    })
                    .collect()
            })
            .collect();
        ExactData {
            d,
            theta,
            theta_inv,
            s,
            zero: CycloExpr::zero(&f, order),
        }
    }

    fn det(&self) -> CycloExpr {
        let e = &self.s;
        let minor = |a: usize, b: usize| e[1][a].mul(&e[2][b]).sub(&e[1][b].mul(&e[2][a]));
        e[0][0]
            .mul(&minor(1, 2))
            .sub(&e[0][1].mul(&minor(0, 2)))
            .add(&e[0][2].mul(&minor(0, 1)))
    }

    /// `S~` is symmetric and each row over its dimension is multiplicative:
    /// `S_ia S_ib = d_i sum_c N_ab^c S_ic` and `S_i0 = d_i`.
    fn rows_are_characters(&self, ring: &FusionRing, prec: u32) -> Result<bool> {
        for i in 0..3 {
            for j in i + 1..3 {
                if !exact_zero(&self.s[i][j].sub(&self.s[j][i]), prec)? {
                    return Ok(false);
                }
            }
        }
        for i in 0..3 {
            let row = &self.s[i];
            if !exact_zero(&row[0].sub(&self.d[i]), prec)? {
                return Ok(false);
            }
            for a in 1..3 {
                for b in a..3 {
                    let mut rhs = self.zero.clone();
                    for (c, v) in row.iter().enumerate() {
                        for _ in 0..ring.n(a, b, c) {
                            rhs = rhs.add(v);
                        }
                    }
                    if !exact_zero(&row[a].mul(&row[b]).sub(&self.d[i].mul(&rhs)), prec)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Frobenius-Schur indicators `nu_2(k) = D^-2 sum_ij N_ij^k d_i d_j (theta_i/theta_j)^2`
    /// are `+-1` for self-dual `k` and 0 otherwise.
    fn frobenius_schur_ok(&self, ring: &FusionRing, prec: u32) -> Result<bool> {
        let mut dim2 = self.zero.clone();
        for i in 0..3 {
            dim2 = dim2.add(&self.d[i].mul(&self.d[ring.dual(i)]));
        }
        let sq: Vec<CycloExpr> = self.theta.iter().map(|t| t.mul(t)).collect();
        let sq_inv: Vec<CycloExpr> = self.theta_inv.iter().map(|t| t.mul(t)).collect();
        for k in 0..3 {
            let mut sum = self.zero.clone();
            for i in 0..3 {
                for j in 0..3 {
                    let c = ring.n(i, j, k);
                    if c == 0 {
                        continue;
                    }
                    let term = self.d[i].mul(&self.d[j]).mul(&sq[i]).mul(&sq_inv[j]);
                    for _ in 0..c {
                        sum = sum.add(&term);
                    }
                }
            }
            let ok = if ring.dual(k) == k {
                exact_zero(&sum.sub(&dim2), prec)? || exact_zero(&sum.add(&dim2), prec)?
            } else {
                exact_zero(&sum, prec)?
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Objects `i` with `S~_ij = d_i d_j` for all `j`.
    fn transparent(&self, prec: u32) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..3 {
            let mut all = true;
            for j in 0..3 {
                if !exact_zero(&self.s[i][j].sub(&self.d[i].mul(&self.d[j])), prec)? {
                    all = false;
                    break;
                }
            }
            if all {
                out.push(i);
            }
        }
        Ok(out)
    }
}

fn exact_zero(e: &CycloExpr, prec: u32) -> Result<bool> {
    let mut p = prec.max(DEFAULT_PRECISION);
    loop {
        if let Some(z) = e.decide_zero(p) {
            return Ok(z);
        }
        if p >= MAX_PRECISION {
            return Err(Error::Undecidable {
                bits: p,
                detail: "exact zero test in a cyclotomic extension".into(),
            });
        }
        p = (p * 2).min(MAX_PRECISION);
    }
}

/// Ball version of the indicator test, used to discard candidates before
/// exact arithmetic.
fn frobenius_schur_plausible(
    ring: &FusionRing,
    dims: &Character,
    twists: &Twists,
    prec: u32,
    tol: f64,
) -> bool {
    let w = prec + 16;
    let d: Vec<ComplexBall> = (0..3).map(|k| dims.ball(k, w)).collect();
    let sq: Vec<ComplexBall> = twists.theta.iter().map(|t| t.pow(2).value(w)).collect();
    let sq_inv: Vec<ComplexBall> = twists.theta.iter().map(|t| t.pow(-2).value(w)).collect();
    let mut dim2 = ComplexBall::exact_int(0, w);
    for i in 0..3 {
        dim2 = dim2.add(&d[i].mul(&d[ring.dual(i)]));
    }
    (0..3).all(|k| {
        let mut sum = ComplexBall::exact_int(0, w);
        for i in 0..3 {
            for j in 0..3 {
                let c = ring.n(i, j, k);
                if c > 0 {
                    sum = sum.add(&d[i].mul(&d[j]).mul(&sq[i]).mul(&sq_inv[j]).mul_int(c as i64));
                }
            }
        }
        if ring.dual(k) == k {
            !(sum.beyond(&dim2, tol) && sum.beyond(&dim2.neg(), tol))
        } else {
            !sum.beyond(&ComplexBall::exact_int(0, w), tol)
        }
    })
}

fn integral_fp_dim(d: &CharValue, fp: &CharValue) -> bool {
    match (d.to_integer(), fp.to_integer()) {
        (Some(a), Some(b)) => a.magnitude() == b.magnitude(),
        _ => false,
    }
}

/// Necessary conditions beyond symmetry and the row identities.
///
/// Symmetric data need integer dimensions equal to `+-FPdim` (Deligne).
/// Modular data need Frobenius-Schur indicators in `{0, +-1}`. Properly
/// premodular data need a transparent subcategory with integer dimensions,
/// and a transparent boson fixing a simple `j` forces `d_j/2` to be an
/// algebraic integer (de-equivariantization splits `j` in two).
fn class_conditions(
    ex: &ExactData,
    system: &CharacterSystem,
    dims: &Character,
    twists: &Twists,
    class: StructureClass,
    prec: u32,
) -> Result<bool> {
    let ring = &system.ring;
    let fp = system.fp();
    match class {
        StructureClass::Symmetric => {
            Ok((0..3).all(|i| integral_fp_dim(&dims.value(i), &fp.value(i))))
        }
        StructureClass::Modular => ex.frobenius_schur_ok(ring, prec),
        StructureClass::ProperPremodular => {
            let t = ex.transparent(prec)?;
            if t.len() < 2 || !t.iter().all(|&i| integral_fp_dim(&dims.value(i), &dims.value(i))) {
                return Ok(false);
            }
            for &g in &t[1..] {
                let invertible = fp.value(g).to_integer() == Some(1.into());
                let d = dims.value(g).to_integer();
                let theta = twists.theta[g];
                let boson = match d {
                    Some(v) if v == 1.into() => theta == RootOfUnity::one(),
                    Some(v) if v == (-1).into() => theta == RootOfUnity::new(1, 2),
                    _ => false,
                };
                if !(invertible && boson) {
                    continue;
                }
                for j in (1..3).filter(|&j| j != g && ring.n(g, j, j) > 0) {
                    let half = BigRational::new(1.into(), 2.into());
                    let ok = dims
                        .value(j)
                        .as_real()
                        .is_some_and(|v| v.scale(&half).is_algebraic_integer());
                    if !ok {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// A dimension character and twists whose S-matrix passes every check.
#[derive(Clone, Debug)]
pub struct PremodularDatum {
    pub ring: FusionRing,
    /// Index of `dims` in the character system.
    pub dims_index: usize,
    pub dims: Character,
    pub twists: Twists,
    pub smatrix: SMatrix,
    pub structure_class: StructureClass,
}

impl PremodularDatum {
    pub fn to_json(&self) -> Value {
        json!({
            "dims": {
                "character": self.dims_index,
                "values": self.dims.values().iter().map(CharValue::to_json).collect::<Vec<_>>(),
            },
            "twists": self.twists.to_json(),
            "structure_class": self.structure_class.to_string(),
            "smatrix": self.smatrix.to_json(),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_twist_order: u32,
    pub tol: f64,
    pub precision_bits: u32,
    pub exec: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_twist_order: 60,
            tol: 1e-9,
            precision_bits: DEFAULT_PRECISION,
            exec: Execution::default(),
        }
    }
}

type C = Complex64;

fn c64((re, im): (f64, f64)) -> C {
    C::new(re, im)
}

fn float_values(c: &Character) -> [C; 3] {
    [0, 1, 2].map(|i| c64(c.value(i).to_c64()))
}

fn float_theta(t: &Twists) -> [C; 3] {
    t.theta.map(|r| c64(r.to_c64()))
}

fn float_s(ring: &FusionRing, d: &[C; 3], th: &[C; 3]) -> [[C; 3]; 3] {
    let mut s = [[C::default(); 3]; 3];
    for (i, row) in s.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let mut acc = C::default();
            for k in 0..3 {
                let c = ring.n(ring.dual(i), j, k);
                if c > 0 {
                    acc += th[k] * d[k] * c as f64;
                }
            }
            *e = acc * th[i].conj() * th[j].conj();
        }
    }
    s
}

fn float_accepts(ring: &FusionRing, chars: &[[C; 3]], d: &[C; 3], t: &Twists, tol: f64) -> bool {
    let s = float_s(ring, d, &float_theta(t));
    let symmetric = (0..3).all(|i| (0..i).all(|j| (s[i][j] - s[j][i]).norm() <= tol));
    symmetric
        && (0..3).all(|i| {
            chars
                .iter()
                .any(|c| (0..3).all(|j| (s[i][j] / d[i] - c[j]).norm() <= tol))
        })
}

/// Float screen: a clearly non-degenerate matrix must have indicators near
/// `{0, +-1}`.
fn float_indicators_plausible(ring: &FusionRing, d: &[C; 3], t: &Twists) -> bool {
    let th = float_theta(t);
    let s = float_s(ring, d, &th);
    let det = s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1])
        - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0])
        + s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
    if det.norm() < PREFILTER_TOL {
        return true;
    }
    let dim2: C = (0..3).map(|i| d[i] * d[ring.dual(i)]).sum();
    (0..3).all(|k| {
        let mut nu = C::default();
        for i in 0..3 {
            for j in 0..3 {
                let c = ring.n(i, j, k) as f64;
                nu += d[i] * d[j] * (th[i] * th[j].conj()).powu(2) * c;
            }
        }
        nu /= dim2;
        if ring.dual(k) == k {
            (nu - 1.0).norm() < PREFILTER_TOL || (nu + 1.0).norm() < PREFILTER_TOL
        } else {
            nu.norm() < PREFILTER_TOL
        }
    })
}

/// The root of unity of order at most `max_order` nearest to `z`, if `z` is
/// one to prefilter accuracy.
fn identify_root(z: C, max_order: u32) -> Option<RootOfUnity> {
    if !z.is_finite() || (z.norm() - 1.0).abs() > PREFILTER_TOL {
        return None;
    }
    let t = (z.arg() / std::f64::consts::TAU).rem_euclid(1.0);
    (1..=max_order).find_map(|q| {
        let p = (t * q as f64).round();
        ((t - p / q as f64).abs() < PREFILTER_TOL).then(|| RootOfUnity::new(p as i64, q))
    })
}

/// Twists for one value `r` of the scanned twist that pass the float prefilter.
///
/// For `K(k,l,m,n)` the `(X,Y)` entry of row `X` gives
/// `d_X c_Y = k d_X theta_Y^-1 + l d_Y theta_X^-1` for the matching character
/// `c`, so one twist determines the other. Other rings scan all pairs.
fn twist_candidates(
    ring: &FusionRing,
    chars: &[[C; 3]],
    d: &[C; 3],
    r: RootOfUnity,
    roots: &[RootOfUnity],
    max_order: u32,
) -> Vec<Twists> {
    let mut out = Vec::new();
    let scanned = c64(r.to_c64());
    match ring.params() {
        Some(p) if p.k != 0 => {
            for c in chars {
                let inv_y = (d[1] * c[2] - p.l as f64 * d[2] * scanned.conj()) / (p.k as f64 * d[1]);
                if let Some(y) = identify_root(inv_y.inv(), max_order) {
                    out.push(Twists::new(r, y));
                }
            }
        }
        Some(p) if p.l != 0 => {
            for c in chars {
                let inv_x = (d[1] * c[2] - p.k as f64 * d[1] * scanned.conj()) / (p.l as f64 * d[2]);
                if let Some(x) = identify_root(inv_x.inv(), max_order) {
                    out.push(Twists::new(x, r));
                }
            }
        }
        _ => out.extend(roots.iter().map(|&y| Twists::new(r, y))),
    }
    out.retain(|t| float_accepts(ring, chars, d, t, PREFILTER_TOL));
    out
}

/// Dimension candidates: no zero value, and `d_i = d_{i*}` (sphericality).
fn admissible_dims(ring: &FusionRing, c: &Character) -> bool {
    check_dims(c).is_ok() && (0..3).all(|i| c.value(i) == c.value(ring.dual(i)))
}

fn verify_candidate(
    system: &CharacterSystem,
    dims_index: usize,
    twists: &Twists,
    cfg: &SearchConfig,
) -> Result<Option<PremodularDatum>> {
    let ring = &system.ring;
    let dims = &system.chars[dims_index];
    let prec = cfg.precision_bits;
    let s = build_s_matrix(ring, dims, twists, prec)?;
    if !s.is_symmetric(cfg.tol) || !verify_row_characters(&s, dims, system, cfg.tol) {
        return Ok(None);
    }
    let class = classify_s_matrix(&s, cfg.tol)?;
    if class == StructureClass::Modular && !frobenius_schur_plausible(ring, dims, twists, prec, cfg.tol) {
        return Ok(None);
    }
    let ex = ExactData::new(ring, dims, twists);
    if !ex.rows_are_characters(ring, prec)? {
        return Ok(None);
    }
    if !class_conditions(&ex, system, dims, twists, class, prec)? {
        return Ok(None);
    }
    Ok(Some(PremodularDatum {
        ring: ring.clone(),
        dims_index,
        dims: dims.clone(),
        twists: *twists,
        smatrix: s,
        structure_class: class,
    }))
}

/// All ribbon-data witnesses with twist orders up to `cfg.max_twist_order`,
/// sorted by dimension character and then by twist turns.
///
/// Candidates come from a float prefilter; each is then checked in ball
/// arithmetic at `cfg.tol`, re-verified exactly in `F(zeta_N)`, and must
/// meet the class conditions listed at [`PremodularDatum`] construction.
pub fn search_ribbon_data(
    system: &CharacterSystem,
    cfg: &SearchConfig,
) -> Result<Vec<PremodularDatum>> {
    if cfg.max_twist_order == 0 {
        return Err(Error::Domain("max_twist_order must be at least 1".into()));
    }
    let ring = &system.ring;
    let roots = RootOfUnity::all_up_to(cfg.max_twist_order);
    let chars: Vec<[C; 3]> = system.chars.iter().map(float_values).collect();
    let mut candidates: Vec<(usize, Twists)> = Vec::new();
    for (a, dims) in system.chars.iter().enumerate() {
        if !admissible_dims(ring, dims) {
            continue;
        }
        let found = cfg.exec.map(&roots, |&r| {
            twist_candidates(ring, &chars, &chars[a], r, &roots, cfg.max_twist_order)
        });
        candidates.extend(
            found
                .into_iter()
                .flatten()
                .filter(|t| float_indicators_plausible(ring, &chars[a], t))
                .map(|t| (a, t)),
        );
    }
    candidates.sort();
    candidates.dedup();
    let checked = cfg
        .exec
        .map(&candidates, |(a, t)| verify_candidate(system, *a, t, cfg));
    let mut out = Vec::new();
    for c in checked {
        out.extend(c?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FilterStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for FilterStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of an exact filter with a human summary and structured values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterVerdict {
    pub status: FilterStatus,
    pub summary: String,
    pub certificate: Value,
}

impl FilterVerdict {
    pub fn new(status: FilterStatus, summary: impl Into<String>, certificate: Value) -> Self {
        FilterVerdict {
            status,
            summary: summary.into(),
            certificate,
        }
    }

    pub fn not_applicable(summary: impl Into<String>) -> Self {
        Self::new(FilterStatus::NotApplicable, summary, json!({}))
    }

    pub fn passed(&self) -> bool {
        self.status == FilterStatus::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.to_string(),
            "summary": self.summary,
            "certificate": self.certificate,
        })
    }
}

fn algebraic_json(x: &RealAlgebraic) -> Value {
    CharValue::Real(x.clone()).to_json()
}

fn totient(q: u32) -> u32 {
    (1..=q).filter(|i| i.gcd(&q) == 1).count() as u32
}

/// A root of unity `theta` of order at most [`NONMODULAR_TWIST_ORDER`] with
/// `theta + theta^-1 = target`, compared through exact minimal polynomials.
fn twist_with_two_cos(target: &RealAlgebraic) -> Option<RootOfUnity> {
    let deg = target.degree() as u32;
    (1..=NONMODULAR_TWIST_ORDER)
        .filter(|&q| if q <= 2 { deg == 1 } else { totient(q) / 2 == deg })
        .find_map(|q| {
            (0..=q / 2)
                .filter(|&p| p.gcd(&q) == 1)
                .map(|p| RootOfUnity::new(p as i64, q))
                .find(|r| r.two_cos() == *target)
        })
}

/// Filter for rings that carry neither symmetric nor modular structure.
///
/// Such a ring contains `Rep(Z/2)`, so it is `K(0,1,0,n)` with
/// `X^2 = 1`, `XY = Y`, `Y^2 = 1+X+nY`. The ribbon relations give
/// `n d_Y = -2(theta_Y + theta_Y^-1)`, which needs `n y+ <= 4` for the
/// positive root `y+` of `y^2 = 2 + ny`, and an actual root of unity.
pub fn nonmodular_filter(params: &Rank3Params, system: &CharacterSystem) -> FilterVerdict {
    let canon = canonicalize(params);
    if (canon.k, canon.l, canon.m) != (0, 1, 0) {
        return FilterVerdict::not_applicable(format!(
            "{canon} has no Rep(Z/2) subring of the form K(0,1,0,n)"
        ));
    }
    let n = canon.n;
    let y_index = if *params == canon { 2 } else { 1 };
    let mut dy: Vec<RealAlgebraic> = system
        .chars
        .iter()
        .filter_map(|c| c.value(y_index).as_real().cloned())
        .filter(|v| v.signum() != Ordering::Equal)
        .collect();
    dy.sort();
    dy.reverse();
    let Some(y_plus) = dy.first().cloned() else {
        return FilterVerdict::new(FilterStatus::Fail, "no nonzero value for d_Y", json!({}));
    };
    let n_rat = BigRational::from_integer(n.into());
    let ny = y_plus.scale(&n_rat);
    let mut cert = json!({
        "n": n,
        "y_plus": algebraic_json(&y_plus),
        "n_y_plus": algebraic_json(&ny),
        "bound": 4,
    });
    if ny.cmp_rational(&BigRational::from_integer(4.into())) == Ordering::Greater {
        return FilterVerdict::new(
            FilterStatus::Fail,
            format!("n*y+ = {} > 4 = max |2(theta + theta^-1)|", ny.approx()),
            cert,
        );
    }
    let scale = BigRational::new(BigInt::from(-(n as i64)), BigInt::from(2));
    for d in &dy {
        if let Some(theta) = twist_with_two_cos(&d.scale(&scale)) {
            cert["d_Y"] = algebraic_json(d);
            cert["theta_Y"] = json!({"p": theta.p(), "q": theta.q()});
            return FilterVerdict::new(
                FilterStatus::Pass,
                format!("n*d_Y = -2(theta_Y + theta_Y^-1) holds with d_Y = {}, theta_Y = {theta}", d.approx()),
                cert,
            );
        }
    }
    FilterVerdict::new(
        FilterStatus::Fail,
        format!(
            "no root of unity of order <= {NONMODULAR_TWIST_ORDER} satisfies n*d_Y = -2(theta_Y + theta_Y^-1)"
        ),
        cert,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::solve_characters;
    use crate::exactnum::RealBall;
    use crate::fusion::{make_rank3_ring, make_z3_ring};

    fn system(k: u32, l: u32, m: u32, n: u32) -> CharacterSystem {
        solve_characters(&make_rank3_ring(&Rank3Params::new(k, l, m, n)).unwrap()).unwrap()
    }

    fn char_near(sys: &CharacterSystem, x: f64, y: f64) -> usize {
        sys.chars
            .iter()
            .position(|c| (c.x.to_c64().0 - x).abs() < 1e-9 && (c.y.to_c64().0 - y).abs() < 1e-9)
            .unwrap()
    }

    fn turn(p: i64, q: u32) -> RootOfUnity {
        RootOfUnity::new(p, q)
    }

    fn assert_matrix(s: &SMatrix, expect: [[(f64, f64); 3]; 3]) {
        for i in 0..3 {
            for j in 0..3 {
                let (re, im) = s.entry(i, j).mid_f64();
                let (er, ei) = expect[i][j];
                assert!((re - er).abs() < 1e-12 && (im - ei).abs() < 1e-12, "({i},{j}): {re}+{im}i");
            }
        }
    }

    fn cfg(q: u32) -> SearchConfig {
        SearchConfig {
            max_twist_order: q,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn rep_s3_matrix_is_symmetric() {
        let sys = system(0, 1, 0, 1);
        let d = &sys.chars[char_near(&sys, 1.0, 2.0)];
        let s = build_s_matrix(&sys.ring, d, &Twists::all_trivial(), 128).unwrap();
        let r = |v: f64| (v, 0.0);
        assert_matrix(&s, [[r(1.0), r(1.0), r(2.0)], [r(1.0), r(1.0), r(2.0)], [r(2.0), r(2.0), r(4.0)]]);
        assert_eq!(classify_s_matrix(&s, 1e-9).unwrap(), StructureClass::Symmetric);
        assert!(verify_row_characters(&s, d, &sys, 1e-9));
    }

    #[test]
    fn ising_matrix_is_modular() {
        let sys = system(0, 1, 0, 0);
        let y = 2f64.sqrt();
        let d = &sys.chars[char_near(&sys, 1.0, y)];
        let t = Twists::new(turn(1, 2), turn(1, 16));
        let s = build_s_matrix(&sys.ring, d, &t, 128).unwrap();
        let r = |v: f64| (v, 0.0);
        assert_matrix(&s, [[r(1.0), r(1.0), r(y)], [r(1.0), r(1.0), r(-y)], [r(y), r(-y), r(0.0)]]);
        assert!(s.is_symmetric(1e-9));
        assert_eq!(classify_s_matrix(&s, 1e-9).unwrap(), StructureClass::Modular);
        assert!(verify_row_characters(&s, d, &sys, 1e-9));
        // flipping one sign breaks the homomorphism property
        let mut e = s.entries().to_vec();
        e[2][1] = e[2][1].neg();
        assert!(!verify_row_characters(&SMatrix::from_entries(e), d, &sys, 1e-9));
    }

    #[test]
    fn degenerate_non_symmetric_is_proper_premodular() {
        let sys = system(0, 1, 0, 1);
        let d = &sys.chars[char_near(&sys, 1.0, 2.0)];
        let s = build_s_matrix(&sys.ring, d, &Twists::new(RootOfUnity::one(), turn(1, 3)), 128).unwrap();
        assert_eq!(classify_s_matrix(&s, 1e-9).unwrap(), StructureClass::ProperPremodular);
        // Ising ring, theta_X = 1, theta_Y = i: rows 0 and X coincide
        let sys = system(0, 1, 0, 0);
        let d = &sys.chars[char_near(&sys, 1.0, 2f64.sqrt())];
        let s = build_s_matrix(&sys.ring, d, &Twists::new(RootOfUnity::one(), turn(1, 4)), 128).unwrap();
        assert_eq!(classify_s_matrix(&s, 1e-9).unwrap(), StructureClass::ProperPremodular);
    }

    #[test]
    fn sourceless_degenerate_matrix_is_undecidable() {
        let one = ComplexBall::exact_int(1, 64);
        let s = SMatrix::from_entries(vec![
            vec![one.clone(), one.clone(), one.clone()],
            vec![one.clone(), one.clone(), one.clone()],
            vec![one.clone(), one.clone(), ComplexBall::exact_int(2, 64)],
        ]);
        assert_eq!(s.det().mid_f64(), (0.0, 0.0));
        assert!(matches!(classify_s_matrix(&s, 1e-9), Err(Error::Undecidable { .. })));
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let sys = system(0, 1, 0, 0);
        let d = &sys.chars[char_near(&sys, -1.0, 0.0)];
        let err = build_s_matrix(&sys.ring, d, &Twists::all_trivial(), 64).unwrap_err();
        assert_eq!(err, Error::ZeroDimension(2));
    }

    #[test]
    fn unit_row_is_the_dimension_vector() {
        let sys = system(1, 1, 0, 1);
        for d in &sys.chars {
            let s = build_s_matrix(&sys.ring, d, &Twists::new(turn(2, 7), turn(3, 7)), 128).unwrap();
            for j in 0..3 {
                assert!(s.entry(0, j).within(&d.ball(j, 128), 1e-30));
            }
        }
    }

    #[test]
    fn ising_witnesses() {
        let sys = system(0, 1, 0, 0);
        let w = search_ribbon_data(&sys, &cfg(16)).unwrap();
        assert_eq!(w.len(), 16);
        let mut dims = std::collections::BTreeSet::new();
        for datum in &w {
            assert_eq!(datum.twists.theta[1], turn(1, 2));
            assert_eq!(datum.twists.theta[2].q(), 16);
            assert_eq!(datum.structure_class, StructureClass::Modular);
            dims.insert(datum.dims_index);
        }
        assert_eq!(dims.len(), 2);
    }

    #[test]
    fn rep_s3_symmetric_witness() {
        let sys = system(0, 1, 0, 1);
        let w = search_ribbon_data(&sys, &cfg(3)).unwrap();
        let fp = char_near(&sys, 1.0, 2.0);
        let sym = w
            .iter()
            .find(|d| d.twists == Twists::all_trivial() && d.dims_index == fp)
            .unwrap();
        assert_eq!(sym.structure_class, StructureClass::Symmetric);
        assert!(w.iter().any(|d| d.structure_class == StructureClass::ProperPremodular));
    }

    #[test]
    fn no_witness_for_n_two() {
        let sys = system(0, 1, 0, 2);
        assert!(search_ribbon_data(&sys, &cfg(60)).unwrap().is_empty());
    }

    #[test]
    fn z3_witnesses() {
        let sys = solve_characters(&make_z3_ring()).unwrap();
        let w = search_ribbon_data(&sys, &cfg(6)).unwrap();
        let omega = turn(1, 3);
        let modular = w.iter().find(|d| d.twists == Twists::new(omega, omega)).unwrap();
        assert_eq!(modular.structure_class, StructureClass::Modular);
        let trivial = w.iter().find(|d| d.twists == Twists::all_trivial()).unwrap();
        assert_eq!(trivial.structure_class, StructureClass::Symmetric);
        assert!(w.iter().all(|d| d.dims_index == 0));
    }

    #[test]
    fn solved_candidates_match_a_full_scan() {
        for (k, l, m, n) in [(0, 1, 0, 0), (0, 1, 0, 1), (1, 1, 0, 1), (2, 1, 2, 1)] {
            let sys = system(k, l, m, n);
            let roots = RootOfUnity::all_up_to(12);
            let chars: Vec<[C; 3]> = sys.chars.iter().map(float_values).collect();
            for d in &chars {
                let mut solved: Vec<Twists> = roots
                    .iter()
                    .flat_map(|&r| twist_candidates(&sys.ring, &chars, d, r, &roots, 12))
                    .collect();
                let mut scanned = Vec::new();
                for &x in &roots {
                    for &y in &roots {
                        let t = Twists::new(x, y);
                        if float_accepts(&sys.ring, &chars, d, &t, PREFILTER_TOL) {
                            scanned.push(t);
                        }
                    }
                }
                solved.sort();
                solved.dedup();
                scanned.sort();
                assert_eq!(solved, scanned, "K({k},{l},{m},{n})");
            }
        }
    }

    #[test]
    fn search_is_thread_independent() {
        let sys = system(1, 1, 0, 1);
        let par = search_ribbon_data(&sys, &cfg(30)).unwrap();
        let seq = search_ribbon_data(
            &sys,
            &SearchConfig {
                exec: Execution::Sequential,
                ..cfg(30)
            },
        )
        .unwrap();
        let key = |w: &[PremodularDatum]| -> Vec<(usize, Twists)> {
            w.iter().map(|d| (d.dims_index, d.twists)).collect()
        };
        assert!(!par.is_empty());
        assert_eq!(key(&par), key(&seq));
    }

    #[test]
    fn nonmodular_filter_examples() {
        let v = nonmodular_filter(&Rank3Params::new(0, 1, 0, 0), &system(0, 1, 0, 0));
        assert!(v.passed());
        assert_eq!(v.certificate["theta_Y"], json!({"p": 1, "q": 4}));

        let v = nonmodular_filter(&Rank3Params::new(0, 1, 0, 1), &system(0, 1, 0, 1));
        assert!(v.passed());
        assert_eq!(v.certificate["theta_Y"], json!({"p": 1, "q": 3}));
        assert_eq!(v.certificate["d_Y"]["approx"], "2");

        let v = nonmodular_filter(&Rank3Params::new(0, 1, 0, 2), &system(0, 1, 0, 2));
        assert_eq!(v.status, FilterStatus::Fail);
        assert!(v.summary.starts_with("n*y+ = 5.46410161514"), "{}", v.summary);

        // the swapped labelling reads d_Y off X
        let v = nonmodular_filter(&Rank3Params::new(1, 0, 1, 0), &system(1, 0, 1, 0));
        assert!(v.passed());

        let v = nonmodular_filter(&Rank3Params::new(1, 1, 0, 1), &system(1, 1, 0, 1));
        assert_eq!(v.status, FilterStatus::NotApplicable);
    }

    #[test]
    fn twist_ordering_is_by_turn() {
        let a = Twists::new(turn(1, 3), RootOfUnity::one());
        let b = Twists::new(turn(1, 2), RootOfUnity::one());
        assert!(a < b);
        assert_eq!(Twists::new(turn(1, 2), turn(1, 3)).order(), 6);
        let _ = RealBall::zero(8);
    }
}
