//! Based rings of rank 3.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{isolate_real_roots, IntPoly, RealAlgebraic};
use crate::exec::Execution;

/// `N[i][j][k]`: multiplicity of `b_k` in `b_i b_j`.
pub type StructureConstants = Vec<Vec<Vec<u32>>>;

/// Parameters of `K(k,l,m,n)`: `X^2 = 1+mX+kY`, `Y^2 = 1+lX+nY`, `XY = YX = kX+lY`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rank3Params {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub n: u32,
}

impl Rank3Params {
    pub fn new(k: u32, l: u32, m: u32, n: u32) -> Self {
        Rank3Params { k, l, m, n }
    }

    pub fn tuple(&self) -> [u32; 4] {
        [self.k, self.l, self.m, self.n]
    }

    fn star_sides(&self) -> (u64, u64) {
        let [k, l, m, n] = self.tuple().map(u64::from);
        (k * k + l * l, l * m + k * n + 1)
    }

    pub fn satisfies_star(&self) -> bool {
        let (a, b) = self.star_sides();
        a == b
    }

    pub fn check_star(&self) -> Result<()> {
        let (lhs, rhs) = self.star_sides();
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::StarViolation {
                k: self.k,
                l: self.l,
                m: self.m,
                n: self.n,
                lhs,
                rhs,
            })
        }
    }

    /// The relabeled parameters `(l,k,n,m)` describing the same ring with X and Y swapped.
    pub fn swapped(&self) -> Self {
        Rank3Params::new(self.l, self.k, self.n, self.m)
    }
}

impl fmt::Display for Rank3Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({},{},{},{})", self.k, self.l, self.m, self.n)
    }
}

impl std::str::FromStr for Rank3Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Domain(format!("expected k,l,m,n, got {s:?}")));
        }
        let mut v = [0u32; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::Domain(format!("not a nonnegative integer: {p:?}")))?;
        }
        Ok(Rank3Params::new(v[0], v[1], v[2], v[3]))
    }
}

/// Multiplication table of `K(k,l,m,n)` without checking associativity.
pub fn rank3_table(p: &Rank3Params) -> StructureConstants {
    let mut n = vec![vec![vec![0u32; 3]; 3]; 3];
    for j in 0..3 {
        n[0][j][j] = 1;
        n[j][0][j] = 1;
    }
    n[1][1] = vec![1, p.m, p.k];
    n[2][2] = vec![1, p.l, p.n];
    n[1][2] = vec![0, p.k, p.l];
    n[2][1] = vec![0, p.k, p.l];
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FusionRing {
    rank: usize,
    labels: Vec<String>,
    dual: Vec<usize>,
    #[serde(rename = "N")]
    n: StructureConstants,
}

impl FusionRing {
    /// Builds a ring after checking every based-ring axiom.
    pub fn new(labels: Vec<String>, dual: Vec<usize>, n: StructureConstants) -> Result<Self> {
        let rank = dual.len();
        if labels.len() != rank || n.len() != rank {
            return Err(Error::InvalidRing("label, dual and tensor sizes disagree".into()));
        }
        let report = check_based_axioms(&n, &dual);
        if !report.all_pass() {
            return Err(Error::InvalidRing(format!("axioms fail: {report}")));
        }
        Ok(FusionRing {
            rank,
            labels,
            dual,
            n,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.n[i][j][k]
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.n
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual.iter().enumerate().all(|(i, &d)| i == d)
    }

    /// Matrix of left multiplication by `b_i`: entry `[k][j] = N_{ij}^k`.
    pub fn mult_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|k| (0..self.rank).map(|j| self.n[i][j][k] as i64).collect())
            .collect()
    }

    /// Recover `(k,l,m,n)` when the ring is a self-dual `K(k,l,m,n)` table.
    pub fn params(&self) -> Option<Rank3Params> {
        if self.rank != 3 || !self.is_self_dual() {
            return None;
        }
        let p = Rank3Params::new(self.n[1][1][2], self.n[2][2][1], self.n[1][1][1], self.n[2][2][2]);
        (rank3_table(&p) == self.n).then_some(p)
    }

    pub fn is_z3(&self) -> bool {
        self.rank == 3 && self.n == make_z3_ring().n && self.dual == vec![0, 2, 1]
    }

    /// The ring with basis elements permuted: new index `i` is old `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let r = self.rank;
        let inv = {
            let mut v = vec![0; r];
            for (new, &old) in perm.iter().enumerate() {
                v[old] = new;
            }
            v
        };
        let n = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.n[perm[i]][perm[j]][perm[k]]).collect())
                    .collect()
            })
            .collect();
        FusionRing {
            rank: r,
            labels: perm.iter().map(|&o| self.labels[o].clone()).collect(),
            dual: (0..r).map(|i| inv[self.dual[perm[i]]]).collect(),
            n,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("ring serializes")
    }
}

impl fmt::Display for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rank;
        let mut lines = Vec::new();
        for i in 1..r {
            for j in i..r {
                let terms: Vec<String> = (0..r)
                    .filter(|&k| self.n[i][j][k] > 0)
                    .map(|k| match self.n[i][j][k] {
                        1 => self.labels[k].clone(),
                        c => format!("{c}{}", self.labels[k]),
                    })
                    .collect();
                let rhs = if terms.is_empty() { "0".into() } else { terms.join("+") };
                lines.push(format!("{}*{} = {}", self.labels[i], self.labels[j], rhs));
            }
        }
        write!(f, "{}", lines.join(", "))
    }
}

pub fn make_rank3_ring(params: &Rank3Params) -> Result<FusionRing> {
    params.check_star()?;
    FusionRing::new(
        vec!["1".into(), "X".into(), "Y".into()],
        vec![0, 1, 2],
        rank3_table(params),
    )
}

/// The group ring of Z/3 with basis `1, g, g^2`.
pub fn make_z3_ring() -> FusionRing {
    let mut n = vec![vec![vec![0u32; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            n[i][j][(i + j) % 3] = 1;
        }
    }
    FusionRing {
        rank: 3,
        labels: vec!["1".into(), "g".into(), "g2".into()],
        dual: vec![0, 2, 1],
        n,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub unit: bool,
    pub duality: bool,
    pub involution: bool,
    pub associativity: bool,
    /// `N_{ij}^k = N_{j*i*}^{k*}`: duality reverses products.
    pub anti_involution: bool,
    pub first_violation: Option<Violation>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.unit && self.duality && self.involution && self.associativity && self.anti_involution
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unit={} duality={} involution={} associativity={} anti_involution={}",
            self.unit, self.duality, self.involution, self.associativity, self.anti_involution
        )?;
        if let Some(v) = &self.first_violation {
            write!(f, " (first violation: {} at {:?})", v.axiom, v.indices)?;
        }
        Ok(())
    }
}

/// Checks the based-ring axioms exhaustively; violations are report content.
pub fn check_based_axioms(n: &StructureConstants, dual: &[usize]) -> AxiomReport {
    let r = dual.len();
    let mut first: Option<Violation> = None;
    let mut note = |axiom: &'static str, idx: Vec<usize>| {
        if first.is_none() {
            first = Some(Violation { axiom, indices: idx });
        }
    };
    let shape_ok = n.len() == r && n.iter().all(|a| a.len() == r && a.iter().all(|b| b.len() == r));
    if !shape_ok || r == 0 {
        note("shape", vec![]);
        return AxiomReport {
            unit: false,
            duality: false,
            involution: false,
            associativity: false,
            anti_involution: false,
            first_violation: first,
        };
    }

    let mut involution = dual[0] == 0;
    if !involution {
        note("involution", vec![0]);
    }
    for i in 0..r {
        if dual[i] >= r || dual[dual[i]] != i {
            if involution {
                note("involution", vec![i]);
            }
            involution = false;
            break;
        }
    }

    let mut unit = true;
    'unit: for j in 0..r {
        for k in 0..r {
            let e = u32::from(j == k);
            if n[0][j][k] != e || n[j][0][k] != e {
                note("unit", vec![j, k]);
                unit = false;
                break 'unit;
            }
        }
    }

    let mut duality = true;
    'dual: for i in 0..r {
        for j in 0..r {
            let want = u32::from(dual.get(i) == Some(&j));
            if n[i][j][0] != want {
                note("duality", vec![i, j]);
                duality = false;
                break 'dual;
            }
        }
    }

    let mut associativity = true;
    'assoc: for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for s in 0..r {
                    let lhs: u64 = (0..r).map(|t| n[i][j][t] as u64 * n[t][k][s] as u64).sum();
                    let rhs: u64 = (0..r).map(|t| n[j][k][t] as u64 * n[i][t][s] as u64).sum();
                    if lhs != rhs {
                        note("associativity", vec![i, j, k, s]);
                        associativity = false;
                        break 'assoc;
                    }
                }
            }
        }
    }

    let mut anti_involution = involution;
    if involution {
        'anti: for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if n[i][j][k] != n[dual[j]][dual[i]][dual[k]] {
                        note("anti_involution", vec![i, j, k]);
                        anti_involution = false;
                        break 'anti;
                    }
                }
            }
        }
    }

    AxiomReport {
        unit,
        duality,
        involution,
        associativity,
        anti_involution,
        first_violation: first,
    }
}

/// Lexicographic minimum over the X/Y swap orbit.
pub fn canonicalize(params: &Rank3Params) -> Rank3Params {
    (*params).min(params.swapped())
}

/// Every rank-3 based ring with structure constants at most `coeff_bound`,
/// up to exchanging the two non-unit basis elements, sorted.
///
/// Unit rows and the `N_{ij}^0` column are forced by the axioms; the eight
/// entries `N_{ij}^k` with `i, j, k` non-unit are searched.
pub fn enumerate_rank3_based_rings(coeff_bound: u32, exec: Execution) -> Vec<FusionRing> {
    let base = coeff_bound as usize + 1;
    let total = base.pow(8);
    let duals: [Vec<usize>; 2] = [vec![0, 1, 2], vec![0, 2, 1]];
    let mut out = Vec::new();
    for dual in &duals {
        let chunks: Vec<usize> = (0..base).collect();
        let found = exec.map(&chunks, |&first| {
            let mut local = Vec::new();
            for rest in 0..total / base {
                let code = first * (total / base) + rest;
                let n = decode(code, base, dual);
                if check_based_axioms(&n, dual).all_pass() {
                    let ring = FusionRing {
                        rank: 3,
                        labels: labels_for(dual),
                        dual: dual.clone(),
                        n,
                    };
                    let other = ring.relabeled(&[0, 2, 1]);
                    let other = FusionRing {
                        labels: ring.labels.clone(),
                        ..other
                    };
                    local.push(ring.min(other));
                }
            }
            local
        });
        out.extend(found.into_iter().flatten());
    }
    out.sort();
    out.dedup();
    out
}

fn labels_for(dual: &[usize]) -> Vec<String> {
    if dual[1] == 1 {
        vec!["1".into(), "X".into(), "Y".into()]
    } else {
        vec!["1".into(), "g".into(), "g2".into()]
    }
}

fn decode(mut code: usize, base: usize, dual: &[usize]) -> StructureConstants {
    let mut n = vec![vec![vec![0u32; 3]; 3]; 3];
    for j in 0..3 {
        n[0][j][j] = 1;
        n[j][0][j] = 1;
    }
    for i in 1..3 {
        for j in 1..3 {
            n[i][j][0] = u32::from(dual[i] == j);
            for k in 1..3 {
                n[i][j][k] = (code % base) as u32;
                code /= base;
            }
        }
    }
    n
}

/// Characteristic polynomial of an integer matrix (Faddeev-LeVerrier).
pub(crate) fn int_char_poly(a: &[Vec<i64>]) -> IntPoly {
    let r = a.len();
    let am: Vec<Vec<BigInt>> = a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| &x[i][k] * &y[k][j]).sum()).collect())
            .collect()
    };
    let mut coeffs = vec![BigInt::from(0); r + 1];
    coeffs[r] = BigInt::from(1);
    let mut m = vec![vec![BigInt::from(0); r]; r];
    for k in 1..=r {
        let mut next = mul(&am, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[r - k + 1];
        }
        m = next;
        let prod = mul(&am, &m);
        let tr: BigInt = (0..r).map(|i| prod[i][i].clone()).sum();
        coeffs[r - k] = -tr / BigInt::from(k);
    }
    IntPoly::new(coeffs)
}

fn largest_real_eigenvalue(a: &[Vec<i64>]) -> RealAlgebraic {
    let p = int_char_poly(a);
    let roots = isolate_real_roots(&p, &BigRational::new(1.into(), 1024.into()))
        .expect("characteristic polynomial of a rank-3 ring has small irreducible factors");
    roots.last().expect("odd degree has a real root").value.clone()
}

/// Frobenius-Perron dimension of each basis element: the largest real
/// eigenvalue of its multiplication matrix.
pub fn fp_dimensions(ring: &FusionRing) -> Vec<RealAlgebraic> {
    (0..ring.rank())
        .map(|i| largest_real_eigenvalue(&ring.mult_matrix(i)))
        .collect()
}

/// `sum_i FPdim(b_i)^2`, the Perron-Frobenius eigenvalue of `sum_i L_i L_{i*}`.
pub fn global_fp_dim(ring: &FusionRing) -> RealAlgebraic {
    let r = ring.rank();
    let mut acc = vec![vec![0i64; r]; r];
    for i in 0..r {
        let a = ring.mult_matrix(i);
        let b = ring.mult_matrix(ring.dual(i));
        for (x, row) in acc.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell += (0..r).map(|t| a[x][t] * b[t][y]).sum::<i64>();
            }
        }
    }
    largest_real_eigenvalue(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u32, l: u32, m: u32, n: u32) -> Rank3Params {
        Rank3Params::new(k, l, m, n)
    }

    #[test]
    fn rep_s3_table() {
        let r = make_rank3_ring(&p(0, 1, 0, 1)).unwrap();
        assert_eq!(r.to_string(), "X*X = 1, X*Y = Y, Y*Y = 1+X+Y");
        assert_eq!(r.params(), Some(p(0, 1, 0, 1)));
    }

    #[test]
    fn star_violation_is_refused() {
        match make_rank3_ring(&p(1, 1, 2, 0)) {
            Err(Error::StarViolation { lhs, rhs, .. }) => assert_eq!((lhs, rhs), (2, 3)),
            other => panic!("{other:?}"),
        }
        let r = make_rank3_ring(&p(1, 0, 0, 0)).unwrap();
        assert_eq!(r.to_string(), "X*X = 1+Y, X*Y = X, Y*Y = 1");
    }

    #[test]
    fn z3_ring() {
        let z = make_z3_ring();
        assert!(check_based_axioms(z.structure_constants(), z.duals()).all_pass());
        assert_eq!(z.duals(), &[0, 2, 1]);
        assert_eq!(z.n(1, 2, 0), 1);
        assert!(z.is_z3());
        assert_eq!(z.params(), None);
    }

    #[test]
    fn axiom_failures_are_reported() {
        let bad = rank3_table(&p(1, 1, 2, 0));
        let rep = check_based_axioms(&bad, &[0, 1, 2]);
        assert!(!rep.associativity && rep.unit && rep.duality);
        assert_eq!(rep.first_violation.unwrap().axiom, "associativity");

        let mut no_unit = rank3_table(&p(0, 1, 0, 0));
        no_unit[1][1] = vec![0, 0, 0];
        let rep = check_based_axioms(&no_unit, &[0, 1, 2]);
        assert!(!rep.duality);
        assert!(check_based_axioms(&rank3_table(&p(0, 1, 0, 0)), &[0, 1, 2]).all_pass());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize(&p(1, 0, 0, 0)), p(0, 1, 0, 0));
        assert_eq!(canonicalize(&p(0, 1, 0, 1)), p(0, 1, 0, 1));
        assert_eq!(canonicalize(&p(1, 1, 1, 0)), p(1, 1, 0, 1));
    }

    #[test]
    fn relabeling_matches_swap() {
        let a = make_rank3_ring(&p(2, 1, 2, 1)).unwrap();
        let b = make_rank3_ring(&p(2, 1, 2, 1).swapped()).unwrap();
        assert_eq!(a.relabeled(&[0, 2, 1]).structure_constants(), b.structure_constants());
        let z = make_z3_ring();
        assert_eq!(z.relabeled(&[0, 2, 1]).duals(), &[0, 2, 1]);
    }

    #[test]
    fn fp_dimensions_of_small_rings() {
        let dims = fp_dimensions(&make_rank3_ring(&p(0, 1, 0, 1)).unwrap());
        let ints: Vec<_> = dims.iter().map(|d| d.to_integer().unwrap()).collect();
        assert_eq!(ints, vec![1.into(), 1.into(), 2.into()]);
        let ising = fp_dimensions(&make_rank3_ring(&p(0, 1, 0, 0)).unwrap());
        assert_eq!(ising[2].minimal_poly(), &IntPoly::from_i64(&[-2, 0, 1]));
        assert!(ising[2] > RealAlgebraic::from_integer(1));
        let z = fp_dimensions(&make_z3_ring());
        assert!(z.iter().all(|d| *d == RealAlgebraic::from_integer(1)));
    }

    #[test]
    fn global_dimensions() {
        let g = |r: &FusionRing| global_fp_dim(r).to_integer().unwrap();
        assert_eq!(g(&make_rank3_ring(&p(0, 1, 0, 1)).unwrap()), 6.into());
        assert_eq!(g(&make_z3_ring()), 3.into());
        assert_eq!(g(&make_rank3_ring(&p(0, 1, 0, 0)).unwrap()), 4.into());
    }

    #[test]
    fn enumeration_at_bound_zero_and_one() {
        assert!(enumerate_rank3_based_rings(0, Execution::Sequential).is_empty());
        let one = enumerate_rank3_based_rings(1, Execution::Sequential);
        let z3: Vec<_> = one.iter().filter(|r| !r.is_self_dual()).collect();
        assert_eq!(z3.len(), 1);
        assert!(z3[0].is_z3());
        let mut ks: Vec<_> = one.iter().filter_map(|r| r.params()).map(|q| canonicalize(&q)).collect();
        ks.sort();
        assert_eq!(ks, vec![p(0, 1, 0, 0), p(0, 1, 0, 1), p(1, 1, 0, 1)]);
    }

    #[test]
    fn json_layout() {
        let j = make_z3_ring().to_json().to_string();
        assert!(j.starts_with(r#"{"rank":3,"labels":["1","g","g2"],"dual":[0,2,1],"N":[[[1,0,0]"#));
    }

    #[test]
    fn params_parse() {
        assert_eq!("0, 1,0,2".parse::<Rank3Params>().unwrap(), p(0, 1, 0, 2));
        assert!("0,1,0".parse::<Rank3Params>().is_err());
        assert!("0,1,0,-1".parse::<Rank3Params>().is_err());
    }
}
