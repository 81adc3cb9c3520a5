//! Planar bipartite graphs, graph connections and their point configurations.

mod connection;
mod dynkin;
mod moves;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use connection::{
    configuration_dimension, configuration_dimension_with, configuration_from_connection,
    connection_from_configuration, connection_from_monodromies, face_monodromies, gauge_fix, is_minimal,
    random_connection, DimensionMode, GraphConnection,
};
pub use dynkin::dynkin_to_bipartite;
pub use moves::{apply_move, transport_move2, MoveId};

use crate::flags::FlagError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BipartiteError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no planar embedding found: {0}")]
    NoEmbedding(String),
    #[error("connection matrix has rank {rank} < {black} black vertices")]
    RankDeficient { rank: usize, black: usize },
    #[error("neighbourhood of black vertex `{0}` is not a circuit")]
    NotCircuit(String),
    #[error("relation at black vertex `{black}` vanishes on `{white}`")]
    ZeroCoefficient { black: String, white: String },
    #[error("move pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("move would create a double edge between `{0}` and `{1}`")]
    MultiEdge(String, String),
    #[error(transparent)]
    Geometry(#[from] FlagError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    White(usize),
    Black(usize),
}

/// Directed edge: `edge` traversed from its white end when `from_white`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub from_white: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
}

/// Bipartite graph with a rotation system (counterclockwise edge order at
/// every vertex) describing a planar embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    white: Vec<String>,
    black: Vec<String>,
    /// `(white, black)` index pairs.
    edges: Vec<(usize, usize)>,
    rot_white: Vec<Vec<usize>>,
    rot_black: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Validates labels, simple edges, rotations, connectivity and genus 0.
    pub fn new(
        white: Vec<String>,
        black: Vec<String>,
        edges: Vec<(usize, usize)>,
        rot_white: Vec<Vec<usize>>,
        rot_black: Vec<Vec<usize>>,
    ) -> Result<Self, BipartiteError> {
        let g = BipartiteGraph {
            white,
            black,
            edges,
            rot_white,
            rot_black,
        };
        g.validate_structure()?;
        let chi = g.euler_characteristic();
        if chi != 2 {
            return Err(BipartiteError::Invalid(format!(
                "rotation system has Euler characteristic {chi}, not 2"
            )));
        }
        Ok(g)
    }

    fn validate_structure(&self) -> Result<(), BipartiteError> {
        let invalid = |m: String| Err(BipartiteError::Invalid(m));
        let mut labels = BTreeSet::new();
        for l in self.white.iter().chain(&self.black) {
            if !labels.insert(l) {
                return invalid(format!("duplicate label `{l}`"));
            }
        }
        if self.rot_white.len() != self.white.len() || self.rot_black.len() != self.black.len() {
            return invalid("one rotation per vertex required".into());
        }
        let mut pairs = BTreeSet::new();
        for &(w, b) in &self.edges {
            if w >= self.white.len() || b >= self.black.len() {
                return invalid(format!("edge ({w}, {b}) out of range"));
            }
            if !pairs.insert((w, b)) {
                return invalid(format!("double edge {} - {}", self.white[w], self.black[b]));
            }
        }
        let check = |rot: &[Vec<usize>], labels: &[String], end: &dyn Fn(usize) -> usize| {
            for (v, r) in rot.iter().enumerate() {
                let mut got: Vec<usize> = r.clone();
                got.sort_unstable();
                let want: Vec<usize> = (0..self.edges.len()).filter(|&e| end(e) == v).collect();
                if got != want {
                    return Err(BipartiteError::Invalid(format!(
                        "rotation at `{}` does not list its edges",
                        labels[v]
                    )));
                }
            }
            Ok(())
        };
        check(&self.rot_white, &self.white, &|e| self.edges[e].0)?;
        check(&self.rot_black, &self.black, &|e| self.edges[e].1)?;
        if !self.is_connected() {
            return invalid("graph is disconnected".into());
        }
        Ok(())
    }

    /// Searches all rotation systems for a planar one (small graphs only).
    pub fn embed(white: Vec<String>, black: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, BipartiteError> {
        const LIMIT: u64 = 2_000_000;
        let incident = |pick: &dyn Fn(&(usize, usize)) -> usize, n: usize| -> Vec<Vec<usize>> {
            let mut r = vec![Vec::new(); n];
            for (e, p) in edges.iter().enumerate() {
                r[pick(p)].push(e);
            }
            r
        };
        let base = BipartiteGraph {
            rot_white: incident(&|p| p.0, white.len()),
            rot_black: incident(&|p| p.1, black.len()),
            white,
            black,
            edges,
        };
        base.validate_structure()?;
        let options: Vec<Vec<Vec<usize>>> = base
            .rot_white
            .iter()
            .chain(&base.rot_black)
            .map(|r| cyclic_orders(r))
            .collect();
        let total: u64 = options.iter().map(|o| o.len() as u64).product();
        if total > LIMIT {
            return Err(BipartiteError::NoEmbedding(format!(
                "{total} rotation systems exceed the search limit"
            )));
        }
        let nw = base.white.len();
        let mut choice = vec![0usize; options.len()];
        loop {
            let mut g = base.clone();
            for (k, &c) in choice.iter().enumerate() {
                let r = options[k][c].clone();
                if k < nw {
                    g.rot_white[k] = r;
                } else {
                    g.rot_black[k - nw] = r;
                }
            }
            if g.euler_characteristic() == 2 {
                return Ok(g);
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Err(BipartiteError::NoEmbedding("graph is not planar".into()));
                }
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Builds a graph from counterclockwise neighbour lists keyed by label.
    pub fn from_neighbour_rotations(
        white: Vec<String>,
        black: Vec<String>,
        rotations: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, BipartiteError> {
        let windex: BTreeMap<&str, usize> = white.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let bindex: BTreeMap<&str, usize> = black.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let get = |l: &str| {
            rotations
                .get(l)
                .ok_or_else(|| BipartiteError::UnknownVertex(l.to_string()))
        };
        let mut edges = Vec::new();
        let mut edge_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut rot_white = Vec::with_capacity(white.len());
        for (w, l) in white.iter().enumerate() {
            let mut r = Vec::new();
            for nb in get(l)? {
                let b = *bindex
                    .get(nb.as_str())
                    .ok_or_else(|| BipartiteError::UnknownVertex(nb.clone()))?;
                if edge_of.contains_key(&(w, b)) {
                    return Err(BipartiteError::MultiEdge(l.clone(), nb.clone()));
                }
                edge_of.insert((w, b), edges.len());
                r.push(edges.len());
                edges.push((w, b));
            }
            rot_white.push(r);
        }
        let mut rot_black = Vec::with_capacity(black.len());
        for (b, l) in black.iter().enumerate() {
            let mut r = Vec::new();
            for nb in get(l)? {
                let w = *windex
                    .get(nb.as_str())
                    .ok_or_else(|| BipartiteError::UnknownVertex(nb.clone()))?;
                let e = edge_of
                    .get(&(w, b))
                    .ok_or_else(|| BipartiteError::Invalid(format!("`{l}` lists `{nb}` but not conversely")))?;
                r.push(*e);
            }
            rot_black.push(r);
        }
        BipartiteGraph::new(white, black, edges, rot_white, rot_black)
    }

    /// Counterclockwise neighbour labels for every vertex.
    pub fn neighbour_rotations(&self) -> BTreeMap<String, Vec<String>> {
        let mut out = BTreeMap::new();
        for (w, r) in self.rot_white.iter().enumerate() {
            out.insert(
                self.white[w].clone(),
                r.iter().map(|&e| self.black[self.edges[e].1].clone()).collect(),
            );
        }
        for (b, r) in self.rot_black.iter().enumerate() {
            out.insert(
                self.black[b].clone(),
                r.iter().map(|&e| self.white[self.edges[e].0].clone()).collect(),
            );
        }
        out
    }

    pub fn white_labels(&self) -> &[String] {
        &self.white
    }

    pub fn black_labels(&self) -> &[String] {
        &self.black
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn white_count(&self) -> usize {
        self.white.len()
    }

    pub fn black_count(&self) -> usize {
        self.black.len()
    }

    pub fn label(&self, v: Vertex) -> &str {
        match v {
            Vertex::White(i) => &self.white[i],
            Vertex::Black(i) => &self.black[i],
        }
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex, BipartiteError> {
        if let Some(i) = self.white.iter().position(|l| l == label) {
            return Ok(Vertex::White(i));
        }
        if let Some(i) = self.black.iter().position(|l| l == label) {
            return Ok(Vertex::Black(i));
        }
        Err(BipartiteError::UnknownVertex(label.to_string()))
    }

    pub fn rotation(&self, v: Vertex) -> &[usize] {
        match v {
            Vertex::White(i) => &self.rot_white[i],
            Vertex::Black(i) => &self.rot_black[i],
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation(v).len()
    }

    pub fn other_end(&self, edge: usize, v: Vertex) -> Vertex {
        let (w, b) = self.edges[edge];
        match v {
            Vertex::White(_) => Vertex::Black(b),
            Vertex::Black(_) => Vertex::White(w),
        }
    }

    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        self.rotation(v).iter().map(|&e| self.other_end(e, v)).collect()
    }

    /// White neighbours of each black vertex, in rotation order.
    pub fn black_neighbourhoods(&self) -> Vec<Vec<usize>> {
        self.rot_black
            .iter()
            .map(|r| r.iter().map(|&e| self.edges[e].0).collect())
            .collect()
    }

    pub fn dart_source(&self, d: Dart) -> Vertex {
        let (w, b) = self.edges[d.edge];
        if d.from_white {
            Vertex::White(w)
        } else {
            Vertex::Black(b)
        }
    }

    pub fn dart_target(&self, d: Dart) -> Vertex {
        let (w, b) = self.edges[d.edge];
        if d.from_white {
            Vertex::Black(b)
        } else {
            Vertex::White(w)
        }
    }

    /// Next dart around the face: arriving at `v` from `u`, leave along the
    /// edge following `u` in the rotation at `v`.
    pub fn next_dart(&self, d: Dart) -> Dart {
        let v = self.dart_target(d);
        let rot = self.rotation(v);
        let pos = rot.iter().position(|&e| e == d.edge).expect("edge in rotation");
        let e = rot[(pos + 1) % rot.len()];
        Dart {
            edge: e,
            from_white: matches!(v, Vertex::White(_)),
        }
    }

    pub fn faces(&self) -> Vec<Face> {
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for from_white in [true, false] {
                let start = Dart { edge: e, from_white };
                if seen.contains(&start) {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = start;
                loop {
                    seen.insert(d);
                    darts.push(d);
                    d = self.next_dart(d);
                    if d == start {
                        break;
                    }
                }
                faces.push(Face { darts });
            }
        }
        faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = (self.white.len() + self.black.len()) as i64;
        v - self.edges.len() as i64 + self.faces().len() as i64
    }

    pub fn face_labels(&self, face: &Face) -> Vec<String> {
        face.darts
            .iter()
            .map(|&d| self.label(self.dart_source(d)).to_string())
            .collect()
    }

    fn is_connected(&self) -> bool {
        let total = self.white.len() + self.black.len();
        if total == 0 {
            return true;
        }
        let start = if self.white.is_empty() {
            Vertex::Black(0)
        } else {
            Vertex::White(0)
        };
        self.bfs_tree(start).1.len() == total
    }

    /// Breadth-first spanning tree: tree edges and visit order.
    pub fn bfs_tree(&self, root: Vertex) -> (Vec<usize>, Vec<Vertex>) {
        let mut seen = BTreeSet::from([root]);
        let mut order = vec![root];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in self.rotation(v) {
                let u = self.other_end(e, v);
                if seen.insert(u) {
                    tree.push(e);
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        (tree, order)
    }

    pub fn to_json(&self) -> GraphJson {
        let mut rotations = BTreeMap::new();
        for (w, r) in self.rot_white.iter().enumerate() {
            rotations.insert(self.white[w].clone(), r.clone());
        }
        for (b, r) in self.rot_black.iter().enumerate() {
            rotations.insert(self.black[b].clone(), r.clone());
        }
        GraphJson {
            white: self.white.clone(),
            black: self.black.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(w, b)| [self.white[w].clone(), self.black[b].clone()])
                .collect(),
            rotations,
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self, BipartiteError> {
        let windex: BTreeMap<&str, usize> = j.white.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let bindex: BTreeMap<&str, usize> = j.black.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut edges = Vec::with_capacity(j.edges.len());
        for [w, b] in &j.edges {
            let wi = *windex
                .get(w.as_str())
                .ok_or_else(|| BipartiteError::UnknownVertex(w.clone()))?;
            let bi = *bindex
                .get(b.as_str())
                .ok_or_else(|| BipartiteError::UnknownVertex(b.clone()))?;
            edges.push((wi, bi));
        }
        if j.rotations.is_empty() {
            return Self::embed(j.white.clone(), j.black.clone(), edges);
        }
        let rot = |l: &String| {
            j.rotations
                .get(l)
                .cloned()
                .ok_or_else(|| BipartiteError::Invalid(format!("no rotation for `{l}`")))
        };
        let rot_white = j.white.iter().map(rot).collect::<Result<_, _>>()?;
        let rot_black = j.black.iter().map(rot).collect::<Result<_, _>>()?;
        Self::new(j.white.clone(), j.black.clone(), edges, rot_white, rot_black)
    }
}

/// All cyclic orders of a list, with the first element fixed.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        return vec![items.to_vec()];
    }
    let (head, rest) = (items[0], &items[1..]);
    let mut out = Vec::new();
    permutations(rest.to_vec(), 0, &mut |p| {
        let mut v = vec![head];
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permutations(mut v: Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(&v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v.clone(), k + 1, f);
        v.swap(k, i);
    }
}

/// Serialized form: labels, edges as label pairs, rotations as edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub white: Vec<String>,
    pub black: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub rotations: BTreeMap<String, Vec<usize>>,
}

impl Serialize for BipartiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        BipartiteGraph::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} white, {} black, {} edges",
            self.white.len(),
            self.black.len(),
            self.edges.len()
        )
    }
}
