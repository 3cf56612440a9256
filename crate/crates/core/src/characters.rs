//! Characters of rank-3 based rings and the Galois action on them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{
    approx_string, cubic_discriminant, exact_sqrt, isolate_real_roots, ComplexBall, CycloExpr,
    IntPoly, NfElem, NumberField, RealAlgebraic, RealBall, RootOfUnity,
};
use crate::fusion::{int_char_poly, FusionRing, Rank3Params};

/// A character value: a real algebraic number, or a root of unity for the
/// non-self-dual ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharValue {
    Real(RealAlgebraic),
    Unity(RootOfUnity),
}

impl CharValue {
    pub fn ball(&self, prec: u32) -> ComplexBall {
        match self {
            CharValue::Real(r) => ComplexBall::from_real(RealBall::from_algebraic(r, prec)),
            CharValue::Unity(u) => u.value(prec),
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        match self {
            CharValue::Real(r) => (r.to_f64(), 0.0),
            CharValue::Unity(u) => u.to_c64(),
        }
    }

    pub fn as_real(&self) -> Option<&RealAlgebraic> {
        match self {
            CharValue::Real(r) => Some(r),
            CharValue::Unity(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        match self {
            CharValue::Real(r) => r.is_rational(),
            CharValue::Unity(u) => u.q() <= 2,
        }
    }

    pub fn to_integer(&self) -> Option<num_bigint::BigInt> {
        match self {
            CharValue::Real(r) => r.to_integer(),
            CharValue::Unity(u) => match u.q() {
                1 => Some(1.into()),
                2 => Some((-1).into()),
                _ => None,
            },
        }
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CharValue::Real(a), CharValue::Real(b)) => a.cmp(b),
            (CharValue::Unity(a), CharValue::Unity(b)) => a.cmp(b),
            (CharValue::Real(_), CharValue::Unity(_)) => Ordering::Less,
            (CharValue::Unity(_), CharValue::Real(_)) => Ordering::Greater,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CharValue::Real(r) => {
                let (lo, hi) = r.interval();
                json!({
                    "minpoly": r.minimal_poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "interval": [lo.to_string(), hi.to_string()],
                    "approx": approx_string(r.to_f64()),
                })
            }
            CharValue::Unity(u) => {
                let (re, im) = u.to_c64();
                json!({
                    "turn": {"p": u.p(), "q": u.q()},
                    "approx": [approx_string(re), approx_string(im)],
                })
            }
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Real(r) => match r.to_rational() {
                Some(q) => write!(f, "{q}"),
                None => write!(f, "{}", r.approx()),
            },
            CharValue::Unity(u) => write!(f, "{u}"),
        }
    }
}

/// A ring homomorphism to the complex numbers, given by its values on the
/// two non-unit basis elements.
#[derive(Clone, Debug)]
pub struct Character {
    pub x: CharValue,
    pub y: CharValue,
    /// Exact values `(x, y)` in a common real number field (self-dual rings).
    exact: Option<(NfElem, NfElem)>,
}

impl Character {
    fn real(x: NfElem, y: NfElem) -> Self {
        Character {
            x: CharValue::Real(x.to_real_algebraic()),
            y: CharValue::Real(y.to_real_algebraic()),
            exact: Some((x, y)),
        }
    }

    /// Value on basis element `i` (0 is the unit).
    pub fn value(&self, i: usize) -> CharValue {
        match i {
            0 => CharValue::Real(RealAlgebraic::from_integer(1)),
            1 => self.x.clone(),
            2 => self.y.clone(),
            _ => panic!("rank-3 character index {i}"),
        }
    }

    pub fn values(&self) -> [CharValue; 3] {
        [self.value(0), self.value(1), self.value(2)]
    }

    pub fn ball(&self, i: usize, prec: u32) -> ComplexBall {
        self.value(i).ball(prec)
    }

    /// The field of definition for self-dual rings.
    pub fn field(&self) -> Arc<NumberField> {
        match &self.exact {
            Some((x, _)) => x.field().clone(),
            None => NumberField::rationals(),
        }
    }

    pub fn exact_values(&self) -> Option<(&NfElem, &NfElem)> {
        self.exact.as_ref().map(|(x, y)| (x, y))
    }

    /// Value on basis element `i` as an element of `F(zeta_order)`.
    pub fn cyclo(&self, i: usize, order: u32) -> CycloExpr {
        let f = self.field();
        match (&self.exact, i) {
            (_, 0) => CycloExpr::constant(&NfElem::from_integer(&f, 1), order),
            (Some((x, _)), 1) => CycloExpr::constant(x, order),
            (Some((_, y)), 2) => CycloExpr::constant(y, order),
            (None, _) => match self.value(i) {
                CharValue::Unity(u) => CycloExpr::root(&f, u, order),
                CharValue::Real(r) => {
                    let q = r.to_rational().expect("rational value without a field");
                    CycloExpr::constant(&NfElem::from_rational(&f, q), order)
                }
            },
            _ => unreachable!(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.values().iter().all(|v| match v {
            CharValue::Real(r) => r.signum() == Ordering::Greater,
            CharValue::Unity(u) => u.p() == 0,
        })
    }

    pub fn all_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    /// Degree of the field generated by the character values.
    pub fn degree(&self) -> usize {
        match &self.exact {
            Some((x, _)) => x.field().degree(),
            None => {
                let q = match &self.x {
                    CharValue::Unity(u) => u.q(),
                    CharValue::Real(_) => 1,
                };
                match q {
                    1 | 2 => 1,
                    _ => 2,
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"x": self.x.to_json(), "y": self.y.to_json()})
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug)]
pub struct CharacterSystem {
    pub ring: FusionRing,
    /// Exactly three characters, FP character first.
    pub chars: Vec<Character>,
}

impl CharacterSystem {
    pub fn fp(&self) -> &Character {
        &self.chars[0]
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.chars.iter().map(Character::to_json).collect())
    }
}

pub fn char_poly_x(p: &Rank3Params) -> IntPoly {
    let (k, l, m) = (p.k as i64, p.l as i64, p.m as i64);
    IntPoly::from_i64(&[l, m * l - k * k - 1, -(m + l), 1])
}

pub fn char_poly_y(p: &Rank3Params) -> IntPoly {
    let (k, l, n) = (p.k as i64, p.l as i64, p.n as i64);
    IntPoly::from_i64(&[k, n * k - l * l - 1, -(n + k), 1])
}

fn nf_int(f: &Arc<NumberField>, n: u32) -> NfElem {
    NfElem::from_integer(f, n as i64)
}

fn satisfies_relations(p: &Rank3Params, x: &NfElem, y: &NfElem) -> bool {
    let f = x.field();
    let one = nf_int(f, 1);
    let lhs1 = x.mul(x);
    let rhs1 = one.add(&x.mul(&nf_int(f, p.m))).add(&y.mul(&nf_int(f, p.k)));
    let lhs2 = y.mul(y);
    let rhs2 = one.add(&x.mul(&nf_int(f, p.l))).add(&y.mul(&nf_int(f, p.n)));
    let lhs3 = x.mul(y);
    let rhs3 = x.mul(&nf_int(f, p.k)).add(&y.mul(&nf_int(f, p.l)));
    lhs1 == rhs1 && lhs2 == rhs2 && lhs3 == rhs3
}

fn width() -> BigRational {
    BigRational::new(1.into(), (1u64 << 40).into())
}

/// Pairs each root of the X-polynomial with `y = kx/(x - l)`. Returns `None`
/// when that closed form does not apply (a repeated x-root, `k = 0`, or
/// `x = l`), in which case the generic-element route is needed.
pub fn characters_by_pairing(p: &Rank3Params) -> Result<Option<Vec<Character>>> {
    if p.k == 0 {
        return Ok(None);
    }
    let roots = isolate_real_roots(&char_poly_x(p), &width())?;
    if roots.len() != 3 || roots.iter().any(|r| r.multiplicity != 1) {
        return Ok(None);
    }
    let l = RealAlgebraic::from_integer(p.l as i64);
    let mut out = Vec::new();
    for r in roots {
        if r.value == l {
            return Ok(None);
        }
        let f = NumberField::new(r.value);
        let x = NfElem::generator(&f);
        let y = x.mul(&nf_int(&f, p.k)).div(&x.sub(&nf_int(&f, p.l)))?;
        if !satisfies_relations(p, &x, &y) {
            return Err(Error::DegenerateSystem(format!(
                "paired value fails the relations of {p}"
            )));
        }
        out.push(Character::real(x, y));
    }
    Ok(Some(out))
}

/// Characters as joint eigenvectors: each eigenvalue `z` of `L_X + c L_Y`
/// (for the first `c >= 0` with a squarefree characteristic polynomial)
/// determines the character through the kernel of `L_Z^T - z` over `Q(z)`.
pub fn characters_by_generic_element(ring: &FusionRing) -> Result<Vec<Character>> {
    let mx = ring.mult_matrix(1);
    let my = ring.mult_matrix(2);
    for c in 0..8i64 {
        // Transposed: characters are row eigenvectors of the left multiplications.
        let mz: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| mx[j][i] + c * my[j][i]).collect())
            .collect();
        let cp = int_char_poly(&mz);
        if cp.squarefree_part().degree() != Some(3) {
            continue;
        }
        let roots = isolate_real_roots(&cp, &width())?;
        if roots.len() != 3 {
            return Err(Error::DegenerateSystem(format!(
                "L_X + {c} L_Y has non-real eigenvalues"
            )));
        }
        let mut out = Vec::new();
        for r in roots {
            let f = NumberField::new(r.value);
            let z = NfElem::generator(&f);
            let a: Vec<Vec<NfElem>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let e = NfElem::from_integer(&f, mz[i][j]);
                            if i == j {
                                e.sub(&z)
                            } else {
                                e
                            }
                        })
                        .collect()
                })
                .collect();
            let w = kernel_vector(&a).ok_or_else(|| {
                Error::DegenerateSystem("eigenspace is not one-dimensional".into())
            })?;
            if w[0].is_zero() {
                return Err(Error::DegenerateSystem("eigenvector vanishes at the unit".into()));
            }
            let inv = w[0].inv()?;
            let x = w[1].mul(&inv);
            let y = w[2].mul(&inv);
            out.push(Character::real(x, y));
        }
        return Ok(out);
    }
    Err(Error::DegenerateSystem(
        "no separating element X + cY with c < 8".into(),
    ))
}

/// A nonzero kernel vector of a rank-2 3x3 matrix: the cross product of two
/// independent rows.
fn kernel_vector(a: &[Vec<NfElem>]) -> Option<Vec<NfElem>> {
    for (r, s) in [(0, 1), (0, 2), (1, 2)] {
        let u = &a[r];
        let v = &a[s];
        let w = vec![
            u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
            u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
            u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
        ];
        if w.iter().any(|e| !e.is_zero()) {
            return Some(w);
        }
    }
    None
}

fn z3_characters() -> Vec<Character> {
    (0..3)
        .map(|a| Character {
            x: CharValue::Unity(RootOfUnity::new(a, 3)),
            y: CharValue::Unity(RootOfUnity::new(2 * a, 3)),
            exact: None,
        })
        .collect()
}

fn order_characters(mut chars: Vec<Character>) -> Result<Vec<Character>> {
    let fp = chars
        .iter()
        .position(Character::is_positive)
        .ok_or(Error::NoPositiveCharacter)?;
    let first = chars.remove(fp);
    chars.sort_by(|a, b| a.x.cmp_key(&b.x).then_with(|| a.y.cmp_key(&b.y)));
    chars.insert(0, first);
    Ok(chars)
}

pub fn solve_characters(ring: &FusionRing) -> Result<CharacterSystem> {
    if ring.rank() != 3 {
        return Err(Error::InvalidRing(format!("rank {} is not 3", ring.rank())));
    }
    let chars = if ring.is_z3() {
        z3_characters()
    } else {
        let p = ring.params().ok_or_else(|| {
            Error::InvalidRing("not a K(k,l,m,n) table or the Z/3 ring".into())
        })?;
        match characters_by_pairing(&p)? {
            Some(c) => c,
            None => characters_by_generic_element(ring)?,
        }
    };
    for i in 0..chars.len() {
        for j in 0..i {
            if chars[i] == chars[j] {
                return Err(Error::DegenerateSystem(format!(
                    "characters {j} and {i} coincide"
                )));
            }
        }
    }
    if chars.len() != 3 {
        return Err(Error::DegenerateSystem(format!("found {} characters", chars.len())));
    }
    if let Some(p) = ring.params() {
        for c in &chars {
            let (x, y) = c.exact_values().expect("self-dual characters are exact");
            if !satisfies_relations(&p, x, y) {
                return Err(Error::DegenerateSystem(format!("{c} fails the relations")));
            }
        }
    }
    Ok(CharacterSystem {
        ring: ring.clone(),
        chars: order_characters(chars)?,
    })
}

/// Index of the everywhere-positive character.
pub fn fp_character(system: &CharacterSystem) -> Result<usize> {
    system
        .chars
        .iter()
        .position(Character::is_positive)
        .ok_or(Error::NoPositiveCharacter)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GaloisTag {
    Trivial,
    C2FixingFP,
    C2MovingFP,
    C3,
    S3,
}

impl fmt::Display for GaloisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisType {
    pub tag: GaloisTag,
    /// Partition of character indices (0 = FP) into Galois orbits.
    pub orbits: Vec<Vec<usize>>,
}

/// Orbits are read off the fields of definition: conjugate characters share
/// the minimal polynomial of their field generator, and the orbit size is the
/// field degree. A cubic orbit is C3 exactly when that cubic's discriminant
/// is a square.
pub fn galois_type(system: &CharacterSystem) -> GaloisType {
    if system.ring.is_z3() {
        return GaloisType {
            tag: GaloisTag::C2FixingFP,
            orbits: vec![vec![0], vec![1, 2]],
        };
    }
    let keys: Vec<IntPoly> = system
        .chars
        .iter()
        .map(|c| c.field().generator_value().minimal_poly().clone())
        .collect();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let rational = system.chars[i].degree() == 1;
        match orbits
            .iter_mut()
            .find(|o| !rational && keys[o[0]] == *key && system.chars[o[0]].degree() > 1)
        {
            Some(o) => o.push(i),
            None => orbits.push(vec![i]),
        }
    }
    let tag = match orbits.len() {
        3 => GaloisTag::Trivial,
        2 => {
            if orbits.iter().any(|o| o == &vec![0]) {
                GaloisTag::C2FixingFP
            } else {
                GaloisTag::C2MovingFP
            }
        }
        _ => {
            let gen = keys[0].clone();
            let square = cubic_discriminant(&gen)
                .ok()
                .and_then(|d| exact_sqrt(&d))
                .is_some();
            if square {
                GaloisTag::C3
            } else {
                GaloisTag::S3
            }
        }
    };
    GaloisType { tag, orbits }
}
