//! Exact projective geometry: points, subspaces, complete flags, circuits,
//! relative position and the flag sequences attached to point sequences.

mod linalg;
mod subspace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use linalg::RationalMatrix;
pub use subspace::Subspace;

use crate::exact::{self, GenericRng, Rational};
use crate::words::CyclicWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("not a complete flag: {0}")]
    NotComplete(String),
    #[error("window starting at point {0} is not in general position")]
    WindowDegenerate(usize),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("relative position {0} is not a product of commuting simple reflections")]
    NotCommutingProduct(Permutation),
    #[error("points do not span the ambient space")]
    NotSpanning,
    #[error("zero vector is not a projective point")]
    ZeroPoint,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("move precondition failed: {0}")]
    MovePrecondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitClass {
    Free,
    Circuit,
    Degenerate,
}

/// Compares the rank of `k` points with `k` (free) and `k - 1` (circuit).
pub fn circuit_classify(points: &[Vec<Rational>]) -> Result<CircuitClass, FlagError> {
    let Some(first) = points.first() else {
        return Ok(CircuitClass::Free);
    };
    let n = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(FlagError::AmbientMismatch(n, p.len()));
    }
    let r = RationalMatrix::from_rows(points, n).rank();
    let k = points.len();
    Ok(if r == k {
        CircuitClass::Free
    } else if r + 1 == k {
        CircuitClass::Circuit
    } else {
        CircuitClass::Degenerate
    })
}

/// A permutation of `{1, .., n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn longest(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &w) in self.0.iter().enumerate() {
            inv[w - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Indices `i` of disjoint transpositions `s_i` whose product is `self`.
    pub fn commuting_generators(&self) -> Option<Vec<u32>> {
        let w = &self.0;
        let mut out = Vec::new();
        let mut i = 0;
        while i < w.len() {
            if w[i] == i + 1 {
                i += 1;
            } else if i + 1 < w.len() && w[i] == i + 2 && w[i + 1] == i + 1 {
                out.push(i as u32 + 1);
                i += 2;
            } else {
                return None;
            }
        }
        Some(out)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Complete flag `F_1 < F_2 < .. < F_{n-1}` in `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    ambient: usize,
    chain: Vec<Subspace>,
}

impl Flag {
    pub fn new(chain: Vec<Subspace>) -> Result<Self, FlagError> {
        let ambient = chain
            .first()
            .map(Subspace::ambient)
            .ok_or_else(|| FlagError::NotComplete("empty chain".into()))?;
        if chain.len() + 1 != ambient {
            return Err(FlagError::NotComplete(format!(
                "{} subspaces in dimension {ambient}",
                chain.len()
            )));
        }
        for (i, s) in chain.iter().enumerate() {
            if s.ambient() != ambient {
                return Err(FlagError::AmbientMismatch(ambient, s.ambient()));
            }
            if s.dim() != i + 1 {
                return Err(FlagError::NotComplete(format!("F_{} has dimension {}", i + 1, s.dim())));
            }
            if i > 0 && !chain[i - 1].is_subspace_of(s) {
                return Err(FlagError::NotComplete(format!("F_{} is not inside F_{}", i, i + 1)));
            }
        }
        Ok(Flag { ambient, chain })
    }

    /// `F_i = span(v_1, .., v_i)`.
    pub fn from_basis(vectors: &[Vec<Rational>]) -> Result<Self, FlagError> {
        let n = vectors.first().map_or(0, Vec::len);
        let chain = (1..n).map(|i| Subspace::span(n, &vectors[..i])).collect();
        Flag::new(chain)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    /// `F_i` for `0 <= i <= n`, with `F_0 = 0` and `F_n` the ambient space.
    pub fn level(&self, i: usize) -> Subspace {
        match i {
            0 => Subspace::zero(self.ambient),
            i if i >= self.ambient => Subspace::full(self.ambient),
            i => self.chain[i - 1].clone(),
        }
    }

    pub fn image(&self, t: &RationalMatrix) -> Flag {
        Flag {
            ambient: self.ambient,
            chain: self.chain.iter().map(|s| s.image(t)).collect(),
        }
    }
}

/// The permutation `w` with `#{k <= i : w(k) <= j} = dim(F_i ∩ G_j)`.
pub fn relative_position(f: &Flag, g: &Flag) -> Result<Permutation, FlagError> {
    if f.ambient != g.ambient {
        return Err(FlagError::AmbientMismatch(f.ambient, g.ambient));
    }
    let n = f.ambient;
    let fl: Vec<Subspace> = (0..=n).map(|i| f.level(i)).collect();
    let gl: Vec<Subspace> = (0..=n).map(|j| g.level(j)).collect();
    let mut d = vec![vec![0i64; n + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            d[i][j] = fl[i].intersection(&gl[j]).dim() as i64;
        }
    }
    let mut w = vec![0usize; n];
    for i in 1..=n {
        for j in 1..=n {
            if d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1 {
                w[i - 1] = j;
            }
        }
    }
    Ok(Permutation(w))
}

/// Flags attached to a cyclic point sequence, with the monodromy relating the
/// end of the period to its start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSequence {
    pub flags: Vec<Flag>,
    pub monodromy: RationalMatrix,
}

impl FlagSequence {
    pub fn word(&self) -> Result<CyclicWord, FlagError> {
        let mut flags = self.flags.clone();
        if let Some(first) = flags.first() {
            let wrapped = first.image(&self.monodromy);
            flags.push(wrapped);
        }
        word_from_path(&flags)
    }
}

/// Builds `F_{2i}` and `F_{2i+1}` for every point `p_i` of a cyclic sequence.
///
/// Both start at `p_i` and grow by one neighbouring point at a time:
/// `F_{2i+1}` takes `p_{i+1}` first and then alternates left and right,
/// `F_{2i}` takes `p_{i-1}` first.
pub fn flags_from_points(points: &[Vec<Rational>]) -> Result<FlagSequence, FlagError> {
    let n = points.first().map_or(0, Vec::len);
    let m = points.len();
    if n < 2 || m < n {
        return Err(FlagError::TooFewPoints {
            needed: n.max(2),
            got: m,
        });
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(FlagError::AmbientMismatch(n, p.len()));
    }
    for start in 0..m {
        let window: Vec<Vec<Rational>> = (0..n).map(|k| points[(start + k) % m].clone()).collect();
        if circuit_classify(&window)? != CircuitClass::Free {
            return Err(FlagError::WindowDegenerate(start));
        }
    }
    let at = |i: i64| &points[i.rem_euclid(m as i64) as usize];
    let grow = |i: usize, right_first: bool| -> Result<Flag, FlagError> {
        let i = i as i64;
        let mut chosen = vec![at(i)];
        let (mut lo, mut hi) = (i, i);
        let mut right = right_first;
        let mut chain = vec![Subspace::span(n, chosen.iter().copied())];
        while chain.len() < n - 1 {
            if right {
                hi += 1;
                chosen.push(at(hi));
            } else {
                lo -= 1;
                chosen.push(at(lo));
            }
            right = !right;
            chain.push(Subspace::span(n, chosen.iter().copied()));
        }
        Flag::new(chain)
    };
    let mut flags = Vec::with_capacity(2 * m);
    for i in 0..m {
        flags.push(grow(i, false)?);
        flags.push(grow(i, true)?);
    }
    Ok(FlagSequence {
        flags,
        monodromy: RationalMatrix::identity(n),
    })
}

/// Concatenates the relative positions of cyclically adjacent flags.
///
/// A constant sequence yields the empty word, which callers should treat as
/// degenerate.
pub fn word_from_flag_sequence(flags: &[Flag]) -> Result<CyclicWord, FlagError> {
    let mut path = flags.to_vec();
    if let Some(first) = flags.first() {
        path.push(first.clone());
    }
    word_from_path(&path)
}

fn word_from_path(path: &[Flag]) -> Result<CyclicWord, FlagError> {
    let n = path.first().map_or(2, Flag::ambient);
    let mut letters = Vec::new();
    for pair in path.windows(2) {
        let w = relative_position(&pair[0], &pair[1])?;
        let gens = w.commuting_generators().ok_or(FlagError::NotCommutingProduct(w))?;
        letters.extend(gens);
    }
    Ok(CyclicWord::new(letters, n).expect("generators are below the rank"))
}

/// Labelled projective points spanning their ambient space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationJson", into = "ConfigurationJson")]
pub struct PointConfiguration {
    labels: Vec<String>,
    points: Vec<Vec<Rational>>,
}

impl PointConfiguration {
    pub fn new(labels: Vec<String>, points: Vec<Vec<Rational>>) -> Result<Self, FlagError> {
        assert_eq!(labels.len(), points.len(), "one label per point");
        let n = points.first().map_or(0, Vec::len);
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(FlagError::AmbientMismatch(n, p.len()));
        }
        if points.iter().any(|p| subspace::is_zero_vector(p)) {
            return Err(FlagError::ZeroPoint);
        }
        let mut seen = BTreeSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(FlagError::DuplicateLabel(dup.clone()));
        }
        if n == 0 || RationalMatrix::from_rows(&points, n).rank() != n {
            return Err(FlagError::NotSpanning);
        }
        Ok(PointConfiguration { labels, points })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the ambient vector space.
    pub fn ambient(&self) -> usize {
        self.points[0].len()
    }

    /// Dimension of the projective space.
    pub fn dimension(&self) -> usize {
        self.ambient() - 1
    }

    pub fn index_of(&self, label: &str) -> Result<usize, FlagError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| FlagError::UnknownLabel(label.into()))
    }

    pub fn point(&self, label: &str) -> Result<&Vec<Rational>, FlagError> {
        Ok(&self.points[self.index_of(label)?])
    }

    pub fn select(&self, labels: &[&str]) -> Result<Vec<Vec<Rational>>, FlagError> {
        labels.iter().map(|l| self.point(l).cloned()).collect()
    }

    /// Maximal sets of at least three points lying on a common line, as label sets.
    pub fn collinear_groups(&self) -> Vec<BTreeSet<String>> {
        let n = self.ambient();
        let mut lines: BTreeMap<Vec<Vec<Rational>>, BTreeSet<String>> = BTreeMap::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let line = Subspace::span(n, [&self.points[i], &self.points[j]]);
                if line.dim() != 2 {
                    continue;
                }
                let key = line.basis().to_vec();
                if lines.contains_key(&key) {
                    continue;
                }
                let members = (0..self.len())
                    .filter(|&k| line.contains(&self.points[k]))
                    .map(|k| self.labels[k].clone())
                    .collect();
                lines.insert(key, members);
            }
        }
        let mut groups: Vec<BTreeSet<String>> = lines.into_values().filter(|g| g.len() >= 3).collect();
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        groups
    }

    /// Whether some invertible `T` and nonzero scalars `λ_k` satisfy
    /// `T p_k = λ_k q_k` for all points, matched by position.
    pub fn projectively_equivalent(&self, other: &PointConfiguration) -> bool {
        let (n, k) = (self.ambient(), self.len());
        if other.ambient() != n || other.len() != k {
            return false;
        }
        // unknowns: T row-major (n*n), then λ_1..λ_k
        let unknowns = n * n + k;
        let mut rows = Vec::with_capacity(n * k);
        for (idx, (p, q)) in self.points.iter().zip(&other.points).enumerate() {
            for r in 0..n {
                let mut row = vec![Rational::zero(); unknowns];
                for c in 0..n {
                    row[r * n + c] = p[c].clone();
                }
                row[n * n + idx] = -q[r].clone();
                rows.push(row);
            }
        }
        let kernel = RationalMatrix::from_rows(&rows, unknowns).kernel();
        if kernel.is_empty() {
            return false;
        }
        let mut rng = GenericRng::new(0x5eed);
        for _ in 0..4 {
            let coeffs = rng.vector(kernel.len());
            let mut sol = vec![Rational::zero(); unknowns];
            for (c, v) in coeffs.iter().zip(&kernel) {
                for (s, x) in sol.iter_mut().zip(v) {
                    *s += c * x;
                }
            }
            let t = RationalMatrix::from_fn(n, n, |i, j| sol[i * n + j].clone());
            if sol[n * n..].iter().all(|l| !l.is_zero()) && !t.determinant().is_zero() {
                return true;
            }
        }
        false
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    dimension: usize,
    points: BTreeMap<String, Vec<String>>,
    order: Vec<String>,
}

impl From<PointConfiguration> for ConfigurationJson {
    fn from(c: PointConfiguration) -> Self {
        let dimension = c.dimension();
        let points = c
            .labels
            .iter()
            .zip(&c.points)
            .map(|(l, p)| (l.clone(), p.iter().map(exact::to_string).collect()))
            .collect();
        ConfigurationJson {
            dimension,
            points,
            order: c.labels,
        }
    }
}

impl TryFrom<ConfigurationJson> for PointConfiguration {
    type Error = String;
    fn try_from(j: ConfigurationJson) -> Result<Self, String> {
        let mut points = Vec::with_capacity(j.order.len());
        for l in &j.order {
            let coords = j.points.get(l).ok_or_else(|| format!("missing point `{l}`"))?;
            let p: Option<Vec<Rational>> = coords.iter().map(|t| exact::parse(t)).collect();
            points.push(p.ok_or_else(|| format!("bad coordinate for `{l}`"))?);
        }
        PointConfiguration::new(j.order, points).map_err(|e| e.to_string())
    }
}

/// Result of the move-2 point transport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move2Result {
    /// The points at `X` and `Y` are replaced by `X'` and `Y'`; labels are kept.
    pub config: PointConfiguration,
    /// Label sets of `a'`, `b'`, `c'`, `d'`.
    pub circuits: [Vec<String>; 4],
}

/// Replaces `X, Y` by `X' = <d \ {X,Y}> ∩ XY` and `Y' = <b \ {X,Y}> ∩ XY`.
pub fn move2_points(
    config: &PointConfiguration,
    circuits: [&[&str]; 4],
    x: &str,
    y: &str,
) -> Result<Move2Result, FlagError> {
    let [a, b, c, d] = circuits;
    if x == y {
        return Err(FlagError::MovePrecondition("X and Y coincide".into()));
    }
    let n = config.ambient();
    let (px, py) = (config.point(x)?, config.point(y)?);
    let line = Subspace::span(n, [px, py]);
    if line.dim() != 2 {
        return Err(FlagError::MovePrecondition(
            "points X and Y coincide, line XY undefined".into(),
        ));
    }
    let check = |set: &[&str], must: &[&str], name: &str| -> Result<(), FlagError> {
        for m in must {
            if !set.contains(m) {
                return Err(FlagError::MovePrecondition(format!("{name} does not contain {m}")));
            }
        }
        if circuit_classify(&config.select(set)?)? != CircuitClass::Circuit {
            return Err(FlagError::MovePrecondition(format!("{name} is not a circuit")));
        }
        Ok(())
    };
    check(a, &[x], "a")?;
    check(b, &[x, y], "b")?;
    check(c, &[y], "c")?;
    check(d, &[x, y], "d")?;
    let meet = |set: &[&str], name: &str| -> Result<Vec<Rational>, FlagError> {
        let rest: Vec<&str> = set.iter().copied().filter(|l| *l != x && *l != y).collect();
        let span = Subspace::span(n, &config.select(&rest)?);
        let cut = span.intersection(&line);
        cut.point().cloned().ok_or_else(|| {
            FlagError::MovePrecondition(format!("<{name} \\ {{X,Y}}> meets XY in dimension {}", cut.dim()))
        })
    };
    let x_new = meet(d, "d")?;
    let y_new = meet(b, "b")?;
    let mut points = config.points.clone();
    points[config.index_of(x)?] = x_new;
    points[config.index_of(y)?] = y_new;
    let out = PointConfiguration::new(config.labels.clone(), points)?;

    let owned = |s: &[&str]| -> BTreeSet<String> { s.iter().map(|l| l.to_string()).collect() };
    let (xs, ys) = (x.to_string(), y.to_string());
    let mut a2 = owned(a);
    a2.insert(ys.clone());
    let mut b2 = owned(b);
    b2.remove(&xs);
    let mut c2 = owned(c);
    c2.insert(xs.clone());
    let mut d2 = owned(d);
    d2.remove(&ys);
    let circuits = [a2, b2, c2, d2].map(|s| s.into_iter().collect());
    Ok(Move2Result { config: out, circuits })
}
