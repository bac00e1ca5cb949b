//! Quivers, Cartan matrices, dimension vectors and the conicity / goodness
//! classifiers.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("edge {0} is a loop at vertex {1}")]
    SelfLoop(usize, String),
    #[error("edge {0} refers to unknown vertex {1:?}")]
    UnknownVertex(usize, String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("quiver has no vertices")]
    Empty,
    #[error("{what} has length {got}, expected {expected}")]
    Shape {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("{what} has a negative entry")]
    Negative { what: &'static str },
    #[error("m = {m:?} is not within 0 <= m <= v = {v:?}")]
    MOutOfRange { m: Vec<i64>, v: Vec<i64> },
    #[error("invalid quiver json: {0}")]
    Json(String),
}

/// A finite quiver without loops. Vertex order is the order of `names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    source: String,
    target: String,
}

impl Quiver {
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, QuiverError> {
        if names.is_empty() {
            return Err(QuiverError::Empty);
        }
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(QuiverError::DuplicateVertex(n.clone()));
            }
        }
        for (a, &(s, t)) in edges.iter().enumerate() {
            for x in [s, t] {
                if x >= names.len() {
                    return Err(QuiverError::UnknownVertex(a, x.to_string()));
                }
            }
            if s == t {
                return Err(QuiverError::SelfLoop(a, names[s].clone()));
            }
        }
        Ok(Quiver { names, edges })
    }

    /// Vertices named `0..n` with the given edges.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self, QuiverError> {
        Self::new((0..n).map(|k| k.to_string()).collect(), edges.to_vec())
    }

    pub fn a1() -> Self {
        Self::numbered(1, &[]).unwrap()
    }

    pub fn a2() -> Self {
        Self::numbered(2, &[(0, 1)]).unwrap()
    }

    /// Kronecker quiver `0 => 1`, the affine sl2 quiver.
    pub fn affine_sl2() -> Self {
        Self::numbered(2, &[(0, 1), (0, 1)]).unwrap()
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "A1" | "a1" => Some(Self::a1()),
            "A2" | "a2" => Some(Self::a2()),
            "affine-sl2" | "affine_sl2" | "kronecker" => Some(Self::affine_sl2()),
            _ => None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, QuiverError> {
        let raw: QuiverJson =
            serde_json::from_str(s).map_err(|e| QuiverError::Json(e.to_string()))?;
        let idx = |name: &str, a: usize| {
            raw.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| QuiverError::UnknownVertex(a, name.to_string()))
        };
        let mut edges = Vec::new();
        for (a, e) in raw.edges.iter().enumerate() {
            edges.push((idx(&e.source, a)?, idx(&e.target, a)?));
        }
        Self::new(raw.vertices.clone(), edges)
    }

    pub fn to_json(&self) -> String {
        let raw = QuiverJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(s, t)| EdgeJson {
                    source: self.names[s].clone(),
                    target: self.names[t].clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges leaving `i`.
    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied().filter(move |&(s, _)| s == i)
    }

    /// Edges entering `i`.
    pub fn in_edges(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied().filter(move |&(_, t)| t == i)
    }

    /// The same quiver with edge `a` reversed.
    pub fn flip_edge(&self, a: usize) -> Self {
        let mut q = self.clone();
        let (s, t) = q.edges[a];
        q.edges[a] = (t, s);
        q
    }

    pub fn cartan(&self) -> CartanMatrix {
        let n = self.n();
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(s, t) in &self.edges {
            c[s][t] -= 1;
            c[t][s] -= 1;
        }
        CartanMatrix { entries: c }
    }
}

/// Symmetric generalized Cartan matrix `2 Id - adjacency`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn from_rows(entries: Vec<Vec<i64>>) -> Self {
        CartanMatrix { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x . (C y)`
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        dot(x, &self.apply(y))
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Framing `w` and gauge dimensions `v`, both nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DimData {
    pub w: Vec<i64>,
    pub v: Vec<i64>,
}

impl DimData {
    pub fn new(w: Vec<i64>, v: Vec<i64>) -> Result<Self, QuiverError> {
        if w.len() != v.len() {
            return Err(QuiverError::Shape {
                what: "v",
                got: v.len(),
                expected: w.len(),
            });
        }
        if w.iter().any(|&x| x < 0) {
            return Err(QuiverError::Negative { what: "w" });
        }
        if v.iter().any(|&x| x < 0) {
            return Err(QuiverError::Negative { what: "v" });
        }
        Ok(DimData { w, v })
    }

    /// Checks that the vectors fit the quiver.
    pub fn for_quiver(q: &Quiver, w: Vec<i64>, v: Vec<i64>) -> Result<Self, QuiverError> {
        if w.len() != q.n() {
            return Err(QuiverError::Shape {
                what: "w",
                got: w.len(),
                expected: q.n(),
            });
        }
        Self::new(w, v)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuPairing {
    pub values: Vec<i64>,
    pub dominant: bool,
}

/// `w - C v`, the pairings of mu with the simple roots.
pub fn mu_pairing(d: &DimData, c: &CartanMatrix) -> MuPairing {
    let cv = c.apply(&d.v);
    let values: Vec<i64> = d.w.iter().zip(&cv).map(|(a, b)| a - b).collect();
    let dominant = values.iter().all(|&x| x >= 0);
    MuPairing { values, dominant }
}

/// Checks `0 <= m <= v` componentwise.
pub fn check_m(m: &[i64], v: &[i64]) -> Result<(), QuiverError> {
    if m.len() != v.len() || m.iter().zip(v).any(|(&a, &b)| a < 0 || a > b) {
        return Err(QuiverError::MOutOfRange {
            m: m.to_vec(),
            v: v.to_vec(),
        });
    }
    Ok(())
}

/// `m . (w - C v) + m . (C m)`
pub fn two_delta_minuscule(d: &DimData, c: &CartanMatrix, m: &[i64]) -> Result<i64, QuiverError> {
    check_m(m, &d.v)?;
    Ok(dot(m, &mu_pairing(d, c).values) + c.pair(m, m))
}

/// Outcome of an exhaustive check over the box `0 < u <= v''`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCheck {
    pub holds: bool,
    /// Minimum of the quadratic form over the box; `None` for an empty box.
    pub min_value: Option<i64>,
    /// Lexicographically least minimizer.
    pub min_at: Option<Vec<i64>>,
    /// The minimizer, reported only when the check fails.
    pub witness: Option<Vec<i64>>,
}

/// Number of points of the box `0 <= u <= v''` (including zero).
pub fn box_size(vpp: &[i64]) -> u128 {
    vpp.iter().map(|&x| (x.max(0) as u128) + 1).product()
}

fn box_minimum(d: &DimData, c: &CartanMatrix) -> Option<(i64, Vec<i64>)> {
    let vpp = &d.v;
    let total = box_size(vpp);
    if total <= 1 {
        return None;
    }
    let mu = mu_pairing(d, c).values;
    let decode = |mut k: u128| -> Vec<i64> {
        let mut u = vec![0i64; vpp.len()];
        for i in (0..vpp.len()).rev() {
            let b = vpp[i] as u128 + 1;
            u[i] = (k % b) as i64;
            k /= b;
        }
        u
    };
    // index order is lexicographic order, so (value, index) gives the tie-break
    let best = (1..total as u64)
        .into_par_iter()
        .map(|k| {
            let u = decode(k as u128);
            (dot(&u, &mu) + c.pair(&u, &u), k)
        })
        .min()
        .expect("nonempty box");
    Some((best.0, decode(best.1 as u128)))
}

fn box_check(d: &DimData, c: &CartanMatrix, threshold: i64) -> BoxCheck {
    match box_minimum(d, c) {
        None => BoxCheck {
            holds: true,
            min_value: None,
            min_at: None,
            witness: None,
        },
        Some((val, at)) => {
            let holds = val >= threshold;
            BoxCheck {
                holds,
                min_value: Some(val),
                witness: if holds { None } else { Some(at.clone()) },
                min_at: Some(at),
            }
        }
    }
}

/// `u . (w - C v'') + u . (C u) >= 1` for all `0 < u <= v''`, where `d`
/// carries `(w, v'')`.
pub fn check_conicity(d: &DimData, c: &CartanMatrix) -> BoxCheck {
    box_check(d, c, 1)
}

/// As [`check_conicity`] with threshold 2.
pub fn check_good(d: &DimData, c: &CartanMatrix) -> BoxCheck {
    box_check(d, c, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Finite,
    Affine,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineData {
    pub kind: Kind,
    /// Primitive positive kernel vector, affine type only.
    pub marks: Option<Vec<i64>>,
}

impl AffineData {
    /// `a . (w - C v)` in affine type.
    pub fn level(&self, d: &DimData, c: &CartanMatrix) -> Option<i64> {
        self.marks
            .as_ref()
            .map(|a| dot(a, &mu_pairing(d, c).values))
    }
}

fn to_rational(c: &CartanMatrix) -> Vec<Vec<Rational>> {
    c.rows()
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

/// Positive definiteness through leading principal minors (exact).
fn positive_definite(c: &CartanMatrix) -> bool {
    let mut a = to_rational(c);
    let n = a.len();
    for k in 0..n {
        // after eliminating the first k pivots, a[k][k] = D_k / D_{k-1}
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / a[k][k].clone();
            for j in k..n {
                let t = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    true
}

/// Symmetric elimination: `Some(corank)` if positive semidefinite.
fn semidefinite_corank(c: &CartanMatrix) -> Option<usize> {
    let mut a = to_rational(c);
    let n = a.len();
    let mut corank = 0;
    for k in 0..n {
        if a[k][k].is_negative() {
            return None;
        }
        if a[k][k].is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return None;
            }
            corank += 1;
            continue;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / a[k][k].clone();
            for j in k..n {
                let t = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    Some(corank)
}

/// Basis of the rational kernel, scaled to primitive integer vectors.
fn kernel_basis(c: &CartanMatrix) -> Vec<Vec<i64>> {
    let mut a = to_rational(c);
    let n = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rational::from_integer(1.into()) / a[row][col].clone();
        for j in 0..n {
            a[row][j] = a[row][j].clone() * inv.clone();
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = f.clone() * a[row][j].clone();
                    a[r][j] = a[r][j].clone() - t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::from_integer(1.into());
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][f].clone();
            }
            primitive_integer(&x)
        })
        .collect()
}

fn primitive_integer(x: &[Rational]) -> Vec<i64> {
    use crate::Scalar;
    let k = Rational::primitive_factor(x.iter());
    x.iter()
        .map(|c| {
            let v = c.clone() * k.clone();
            i64::try_from(v.to_integer()).expect("small kernel vector")
        })
        .collect()
}

/// Finite, affine or indefinite type of a symmetric Cartan matrix.
///
/// Affine means positive semidefinite of corank one with a strictly positive
/// kernel vector; anything else that is not positive definite (including
/// decomposable semidefinite matrices) is reported as indefinite.
pub fn affine_classify(c: &CartanMatrix) -> AffineData {
    if positive_definite(c) {
        return AffineData {
            kind: Kind::Finite,
            marks: None,
        };
    }
    if semidefinite_corank(c) == Some(1) {
        let ker = kernel_basis(c);
        if ker.len() == 1 {
            let mut a = ker[0].clone();
            if a.iter().all(|&x| x <= 0) {
                a.iter_mut().for_each(|x| *x = -*x);
            }
            if a.iter().all(|&x| x > 0) {
                return AffineData {
                    kind: Kind::Affine,
                    marks: Some(a),
                };
            }
        }
    }
    AffineData {
        kind: Kind::Indefinite,
        marks: None,
    }
}

/// What the finite/affine trichotomy predicts for a dominant pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    Good,
    ConicalNotGood,
    NotConical,
}

impl Prediction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Prediction::Good => "good",
            Prediction::ConicalNotGood => "conical-not-good",
            Prediction::NotConical => "not-conical",
        }
    }

    pub fn agrees_with(&self, conical: bool, good: bool) -> bool {
        match self {
            Prediction::Good => conical && good,
            Prediction::ConicalNotGood => conical && !good,
            Prediction::NotConical => !conical && !good,
        }
    }
}

/// The trichotomy prediction for `(w, v'')`. Applies only when `mu` is
/// dominant and `v'' != 0`, and only in finite or affine type.
pub fn predict(d: &DimData, c: &CartanMatrix, ty: &AffineData) -> Option<Prediction> {
    if d.v.iter().all(|&x| x == 0) || !mu_pairing(d, c).dominant {
        return None;
    }
    match ty.kind {
        Kind::Finite => Some(Prediction::Good),
        Kind::Affine => {
            let level = ty.level(d, c).expect("affine marks");
            Some(match level {
                l if l >= 2 => Prediction::Good,
                1 => Prediction::ConicalNotGood,
                _ => Prediction::NotConical,
            })
        }
        Kind::Indefinite => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(w: &[i64], v: &[i64]) -> DimData {
        DimData::new(w.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(Quiver::a1().cartan().rows(), &[vec![2]]);
        assert_eq!(Quiver::a2().cartan().rows(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(Quiver::affine_sl2().cartan().rows(), &[vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn rejects_loops_and_negative_dims() {
        assert!(matches!(Quiver::numbered(1, &[(0, 0)]), Err(QuiverError::SelfLoop(..))));
        assert!(DimData::new(vec![-1], vec![0]).is_err());
        assert!(DimData::new(vec![1], vec![0, 1]).is_err());
    }

    #[test]
    fn mu_pairing_examples() {
        let c1 = Quiver::a1().cartan();
        let ca = Quiver::affine_sl2().cartan();
        assert_eq!(mu_pairing(&dd(&[2], &[1]), &c1), MuPairing { values: vec![0], dominant: true });
        assert_eq!(mu_pairing(&dd(&[1, 0], &[1, 1]), &ca).values, vec![1, 0]);
        let z = mu_pairing(&dd(&[0, 0], &[1, 1]), &ca);
        assert_eq!(z.values, vec![0, 0]);
        assert!(z.dominant);
    }

    #[test]
    fn two_delta_examples() {
        let c1 = Quiver::a1().cartan();
        let ca = Quiver::affine_sl2().cartan();
        assert_eq!(two_delta_minuscule(&dd(&[2], &[1]), &c1, &[1]), Ok(2));
        assert_eq!(two_delta_minuscule(&dd(&[2], &[1]), &c1, &[0]), Ok(0));
        assert_eq!(two_delta_minuscule(&dd(&[1, 0], &[1, 1]), &ca, &[1, 1]), Ok(1));
        assert!(two_delta_minuscule(&dd(&[2], &[1]), &c1, &[2]).is_err());
    }

    #[test]
    fn conicity_examples() {
        let c1 = Quiver::a1().cartan();
        let ca = Quiver::affine_sl2().cartan();
        let r = check_conicity(&dd(&[2], &[1]), &c1);
        assert!(r.holds);
        assert_eq!(r.min_value, Some(2));
        let r = check_conicity(&dd(&[1, 0], &[1, 1]), &ca);
        assert!(r.holds);
        assert_eq!((r.min_value, r.min_at), (Some(1), Some(vec![1, 1])));
        let r = check_conicity(&dd(&[0, 0], &[1, 1]), &ca);
        assert!(!r.holds);
        assert_eq!((r.min_value, r.witness), (Some(0), Some(vec![1, 1])));
    }

    #[test]
    fn goodness_examples() {
        let c1 = Quiver::a1().cartan();
        let ca = Quiver::affine_sl2().cartan();
        assert!(check_good(&dd(&[2], &[1]), &c1).holds);
        let r = check_good(&dd(&[1, 0], &[1, 1]), &ca);
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![1, 1]));
        let r = check_good(&dd(&[2, 0], &[1, 1]), &ca);
        assert!(r.holds);
        assert_eq!(r.min_value, Some(2));
        assert!(check_good(&dd(&[0], &[0]), &c1).holds);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // A1 x A1 with no edge: u = (1,0) and (0,1) both give 2
        let c = Quiver::numbered(2, &[]).unwrap().cartan();
        let r = check_good(&dd(&[0, 0], &[1, 1]), &c);
        assert_eq!(r.min_at, Some(vec![0, 1]));
    }

    #[test]
    fn type_classification() {
        assert_eq!(affine_classify(&Quiver::a2().cartan()).kind, Kind::Finite);
        let aff = affine_classify(&Quiver::affine_sl2().cartan());
        assert_eq!(aff.kind, Kind::Affine);
        assert_eq!(aff.marks, Some(vec![1, 1]));
        let three = Quiver::numbered(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(affine_classify(&three.cartan()).kind, Kind::Indefinite);
        // affine D4-tilde: star with four leaves, marks (2,1,1,1,1)
        let d4 = Quiver::numbered(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let t = affine_classify(&d4.cartan());
        assert_eq!(t.marks, Some(vec![2, 1, 1, 1, 1]));
        let level = t.level(&dd(&[1, 0, 0, 0, 0], &[0; 5]), &d4.cartan());
        assert_eq!(level, Some(2));
    }

    #[test]
    fn kronecker_level_is_w_sum() {
        let q = Quiver::affine_sl2();
        let c = q.cartan();
        let t = affine_classify(&c);
        for w in [[0, 0], [1, 0], [2, 3]] {
            assert_eq!(t.level(&dd(&w, &[1, 1]), &c), Some(w[0] + w[1]));
        }
    }

    #[test]
    fn json_roundtrip() {
        let q = Quiver::affine_sl2();
        let s = q.to_json();
        assert_eq!(s, r#"{"vertices":["0","1"],"edges":[{"source":"0","target":"1"},{"source":"0","target":"1"}]}"#);
        assert_eq!(Quiver::from_json(&s).unwrap(), q);
        assert!(Quiver::from_json(r#"{"vertices":["a"],"edges":[{"source":"a","target":"a"}]}"#).is_err());
    }
}
