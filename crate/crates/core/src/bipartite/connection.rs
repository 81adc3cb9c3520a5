use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BipartiteError, BipartiteGraph, Vertex};
use crate::exact::{self, GenericRng, Rational};
use crate::flags::{PointConfiguration, RationalMatrix};

/// Nonzero rational weight on every edge, indexed like `graph.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphConnection {
    graph: BipartiteGraph,
    entries: Vec<Rational>,
}

impl GraphConnection {
    pub fn new(graph: BipartiteGraph, entries: Vec<Rational>) -> Result<Self, BipartiteError> {
        if entries.len() != graph.edges().len() {
            return Err(BipartiteError::Invalid(format!(
                "{} weights for {} edges",
                entries.len(),
                graph.edges().len()
            )));
        }
        if entries.iter().any(Zero::is_zero) {
            return Err(BipartiteError::Invalid("zero edge weight".into()));
        }
        Ok(GraphConnection { graph, entries })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `|W| x |B|` matrix of the map `C^B -> C^W`.
    pub fn matrix(&self) -> RationalMatrix {
        let g = &self.graph;
        let mut m = RationalMatrix::zeros(g.white_count(), g.black_count());
        for (e, &(w, b)) in g.edges().iter().enumerate() {
            m[(w, b)] = self.entries[e].clone();
        }
        m
    }

    /// Multiplies every weight at `v` by `lambda`; face monodromies are unchanged.
    pub fn rescale(&mut self, v: Vertex, lambda: &Rational) {
        for &e in self.graph.rotation(v).to_vec().iter() {
            self.entries[e] = &self.entries[e] * lambda;
        }
    }

    pub fn to_json(&self) -> ConnectionJson {
        let g = &self.graph;
        ConnectionJson {
            graph: g.to_json(),
            weights: g
                .edges()
                .iter()
                .zip(&self.entries)
                .map(|(&(w, b), q)| {
                    [
                        g.white_labels()[w].clone(),
                        g.black_labels()[b].clone(),
                        exact::to_string(q),
                    ]
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ConnectionJson) -> Result<Self, BipartiteError> {
        let graph = BipartiteGraph::from_json(&j.graph)?;
        let by_pair: BTreeMap<(&str, &str), &str> = j
            .weights
            .iter()
            .map(|[w, b, q]| ((w.as_str(), b.as_str()), q.as_str()))
            .collect();
        let mut entries = Vec::new();
        for &(w, b) in graph.edges() {
            let key = (graph.white_labels()[w].as_str(), graph.black_labels()[b].as_str());
            let text = by_pair
                .get(&key)
                .ok_or_else(|| BipartiteError::Invalid(format!("no weight on edge {} - {}", key.0, key.1)))?;
            entries.push(exact::parse(text).ok_or_else(|| BipartiteError::Invalid(format!("bad weight `{text}`")))?);
        }
        GraphConnection::new(graph, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub graph: super::GraphJson,
    /// `[white, black, weight]` triples.
    pub weights: Vec<[String; 3]>,
}

pub fn random_connection(graph: &BipartiteGraph, seed: u64) -> GraphConnection {
    let mut rng = GenericRng::new(seed);
    let entries = rng.vector(graph.edges().len());
    GraphConnection {
        graph: graph.clone(),
        entries,
    }
}

/// Points are the columns of a basis of the left kernel of `M`: the images of
/// the white basis vectors in the cokernel.
pub fn configuration_from_connection(conn: &GraphConnection) -> Result<PointConfiguration, BipartiteError> {
    let m = conn.matrix();
    let rank = m.rank();
    let black = m.cols();
    if rank < black {
        return Err(BipartiteError::RankDeficient { rank, black });
    }
    let k = m.transpose().kernel();
    if k.is_empty() {
        return Err(BipartiteError::Invalid("cokernel is zero".into()));
    }
    let points = (0..m.rows())
        .map(|w| k.iter().map(|row| row[w].clone()).collect())
        .collect();
    Ok(PointConfiguration::new(conn.graph.white_labels().to_vec(), points)?)
}

/// Weights at each black vertex are the unique relation among its white
/// neighbours' points.
pub fn connection_from_configuration(
    graph: &BipartiteGraph,
    config: &PointConfiguration,
) -> Result<GraphConnection, BipartiteError> {
    let mut entries = vec![Rational::zero(); graph.edges().len()];
    for (b, label) in graph.black_labels().iter().enumerate() {
        let rot = graph.rotation(Vertex::Black(b));
        let pts: Vec<Vec<Rational>> = rot
            .iter()
            .map(|&e| config.point(&graph.white_labels()[graph.edges()[e].0]).cloned())
            .collect::<Result<_, _>>()?;
        let relations = RationalMatrix::from_columns(&pts, config.ambient()).kernel();
        let [rel] = relations.as_slice() else {
            return Err(BipartiteError::NotCircuit(label.clone()));
        };
        for (&e, c) in rot.iter().zip(rel) {
            if c.is_zero() {
                let white = graph.white_labels()[graph.edges()[e].0].clone();
                return Err(BipartiteError::ZeroCoefficient {
                    black: label.clone(),
                    white,
                });
            }
            entries[e] = c.clone();
        }
    }
    GraphConnection::new(graph.clone(), entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DimensionMode {
    /// Largest rank seen over all trials.
    #[default]
    Max,
    /// Most frequent rank over all trials.
    Majority,
}

fn distinct_neighbourhoods(graph: &BipartiteGraph) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = graph
        .black_neighbourhoods()
        .into_iter()
        .map(|mut n| {
            n.sort_unstable();
            n
        })
        .collect();
    set.into_iter().collect()
}

fn generic_rank(whites: usize, neighbourhoods: &[Vec<usize>], rng: &mut GenericRng) -> usize {
    let mut m = RationalMatrix::zeros(whites, neighbourhoods.len());
    for (b, nb) in neighbourhoods.iter().enumerate() {
        for &w in nb {
            m[(w, b)] = rng.nonzero();
        }
    }
    m.rank()
}

fn dimension_of(whites: usize, neighbourhoods: &[Vec<usize>], trials: usize, seed: u64, mode: DimensionMode) -> i64 {
    let ranks: Vec<usize> = (0..trials.max(1) as u64)
        .map(|t| generic_rank(whites, neighbourhoods, &mut GenericRng::derived(seed, t)))
        .collect();
    let rank = match mode {
        DimensionMode::Max => *ranks.iter().max().expect("at least one trial"),
        DimensionMode::Majority => {
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for &r in &ranks {
                *count.entry(r).or_default() += 1;
            }
            let best = *count.values().max().expect("at least one trial");
            *count.iter().rev().find(|(_, &c)| c == best).expect("nonempty").0
        }
    };
    whites as i64 - rank as i64 - 1
}

/// Projective dimension of the configuration of a generic connection. Black
/// vertices with identical neighbourhoods impose one condition.
pub fn configuration_dimension(graph: &BipartiteGraph, trials: usize) -> i64 {
    configuration_dimension_with(graph, trials, 0, DimensionMode::Max)
}

pub fn configuration_dimension_with(graph: &BipartiteGraph, trials: usize, seed: u64, mode: DimensionMode) -> i64 {
    dimension_of(graph.white_count(), &distinct_neighbourhoods(graph), trials, seed, mode)
}

/// True when deleting any black vertex raises the configuration dimension.
pub fn is_minimal(graph: &BipartiteGraph, trials: usize) -> bool {
    let all = graph.black_neighbourhoods();
    let base = configuration_dimension(graph, trials);
    (0..all.len()).all(|b| {
        let mut rest = all.clone();
        rest.remove(b);
        let set: BTreeSet<Vec<usize>> = rest
            .into_iter()
            .map(|mut n| {
                n.sort_unstable();
                n
            })
            .collect();
        let rest: Vec<Vec<usize>> = set.into_iter().collect();
        dimension_of(graph.white_count(), &rest, trials, 0, DimensionMode::Max) > base
    })
}

/// Product around each face of `M(e)` on white-to-black darts and `M(e)^-1`
/// on black-to-white darts, in the order of `graph.faces()`.
pub fn face_monodromies(conn: &GraphConnection) -> Vec<Rational> {
    conn.graph
        .faces()
        .iter()
        .map(|f| {
            f.darts.iter().fold(Rational::one(), |acc, d| {
                let m = &conn.entries[d.edge];
                if d.from_white {
                    acc * m
                } else {
                    acc / m
                }
            })
        })
        .collect()
}

/// Gauge-equivalent connection with weight 1 on the breadth-first spanning tree
/// rooted at the first white vertex.
pub fn gauge_fix(conn: &GraphConnection) -> GraphConnection {
    let mut out = conn.clone();
    let g = conn.graph.clone();
    if g.white_count() == 0 {
        return out;
    }
    let (tree, order) = g.bfs_tree(Vertex::White(0));
    for (e, v) in tree.iter().zip(&order[1..]) {
        let lambda = out.entries[*e].recip();
        out.rescale(*v, &lambda);
    }
    out
}

/// Inverse of `face_monodromies` up to gauge: the result has weight 1 on the
/// spanning tree used by `gauge_fix`.
pub fn connection_from_monodromies(
    graph: &BipartiteGraph,
    monodromies: &[Rational],
) -> Result<GraphConnection, BipartiteError> {
    let faces = graph.faces();
    if monodromies.len() != faces.len() {
        return Err(BipartiteError::Invalid(format!(
            "{} monodromies for {} faces",
            monodromies.len(),
            faces.len()
        )));
    }
    if monodromies.iter().any(Zero::is_zero) {
        return Err(BipartiteError::Invalid("zero monodromy".into()));
    }
    let product = monodromies.iter().fold(Rational::one(), |a, m| a * m);
    if !product.is_one() {
        return Err(BipartiteError::Invalid("face monodromies must multiply to 1".into()));
    }
    let mut entries = vec![Rational::one(); graph.edges().len()];
    if graph.white_count() == 0 {
        return GraphConnection::new(graph.clone(), entries);
    }
    let (tree, _) = graph.bfs_tree(Vertex::White(0));
    let tree: BTreeSet<usize> = tree.into_iter().collect();
    let free: Vec<usize> = (0..graph.edges().len()).filter(|e| !tree.contains(e)).collect();
    let n = free.len();
    debug_assert_eq!(n + 1, faces.len());
    if n > 0 {
        // exponent of each free edge in each face but the last
        let a = RationalMatrix::from_fn(n, n, |f, k| {
            let s: i64 = faces[f]
                .darts
                .iter()
                .filter(|d| d.edge == free[k])
                .map(|d| if d.from_white { 1 } else { -1 })
                .sum();
            exact::int(s)
        });
        let inv = a
            .inverse()
            .ok_or_else(|| BipartiteError::Invalid("face system is singular".into()))?;
        for (k, &e) in free.iter().enumerate() {
            let mut value = Rational::one();
            for (f, m) in monodromies.iter().enumerate().take(n) {
                let p = &inv[(k, f)];
                if !exact::is_integer(p) {
                    return Err(BipartiteError::Invalid("face system is not unimodular".into()));
                }
                let p: i32 = p.to_integer().try_into().expect("small exponent");
                value *= num_traits::pow::Pow::pow(m, p);
            }
            entries[e] = value;
        }
    }
    GraphConnection::new(graph.clone(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::dynkin_to_bipartite;
    use crate::bipartite::tests::{claw, labels, whiskered_square};
    use crate::flags::{circuit_classify, CircuitClass};
    use crate::poly::DynkinType;

    #[test]
    fn claw_is_minimal_line() {
        let g = claw();
        assert_eq!(configuration_dimension(&g, 3), 1);
        assert!(is_minimal(&g, 3));
    }

    #[test]
    fn duplicated_black_is_not_minimal() {
        let g = dynkin_to_bipartite(DynkinType::a(2)).unwrap();
        let mut white = g.white_labels().to_vec();
        let mut black = g.black_labels().to_vec();
        let mut edges = g.edges().to_vec();
        let nb = g.black_neighbourhoods();
        let b = (0..nb.len()).find(|&b| nb[b].len() == 3).unwrap();
        black.push("dup".into());
        for &w in &nb[b] {
            edges.push((w, black.len() - 1));
        }
        white.truncate(g.white_count());
        let dup = BipartiteGraph::embed(white, black, edges).unwrap();
        assert!(is_minimal(&g, 3));
        assert!(!is_minimal(&dup, 3));
        assert_eq!(configuration_dimension(&dup, 3), configuration_dimension(&g, 3));
    }

    #[test]
    fn full_column_rank_matches_minimality() {
        for t in [DynkinType::a(2), DynkinType::a(4), DynkinType::d(4), DynkinType::e(6)] {
            let g = dynkin_to_bipartite(t).unwrap();
            let conn = random_connection(&g, 5);
            assert_eq!(conn.matrix().rank(), g.black_count());
            assert!(is_minimal(&g, 3), "{t}");
        }
    }

    #[test]
    fn black_neighbourhoods_are_circuits() {
        let g = dynkin_to_bipartite(DynkinType::e(8)).unwrap();
        let config = configuration_from_connection(&random_connection(&g, 11)).unwrap();
        assert_eq!(config.dimension(), 2);
        for nb in g.black_neighbourhoods() {
            let pts: Vec<_> = nb.iter().map(|&w| config.points()[w].clone()).collect();
            assert_eq!(circuit_classify(&pts).unwrap(), CircuitClass::Circuit);
        }
    }

    #[test]
    fn configuration_round_trip() {
        let g = whiskered_square();
        for seed in 0..5 {
            let conn = random_connection(&g, seed);
            let config = configuration_from_connection(&conn).unwrap();
            let back = connection_from_configuration(&g, &config).unwrap();
            let again = configuration_from_connection(&back).unwrap();
            assert!(config.projectively_equivalent(&again));
            assert_eq!(face_monodromies(&conn), face_monodromies(&back));
        }
    }

    #[test]
    fn monodromy_round_trip() {
        for g in [whiskered_square(), dynkin_to_bipartite(DynkinType::e(7)).unwrap()] {
            let conn = random_connection(&g, 2);
            let mono = face_monodromies(&conn);
            assert!(mono.iter().fold(Rational::one(), |a, m| a * m).is_one());
            let fixed = gauge_fix(&conn);
            assert_eq!(face_monodromies(&fixed), mono);
            assert_eq!(connection_from_monodromies(&g, &mono).unwrap(), fixed);
        }
    }

    #[test]
    fn rank_deficient_connection_is_rejected() {
        let g = BipartiteGraph::embed(
            labels(&["1", "2"]),
            labels(&["a", "b"]),
            vec![(0, 0), (1, 0), (0, 1), (1, 1)],
        )
        .unwrap();
        let conn = GraphConnection::new(g, vec![exact::int(1); 4]).unwrap();
        assert!(matches!(
            configuration_from_connection(&conn),
            Err(BipartiteError::RankDeficient { .. })
        ));
    }

    #[test]
    fn seeds_change_entries_not_dimension() {
        let g = dynkin_to_bipartite(DynkinType::d(5)).unwrap();
        let dims: BTreeSet<i64> = (0..10)
            .map(|seed| {
                let conn = random_connection(&g, seed);
                g.white_count() as i64 - conn.matrix().rank() as i64 - 1
            })
            .collect();
        assert_eq!(dims, BTreeSet::from([2]));
        assert_ne!(random_connection(&g, 0).entries(), random_connection(&g, 1).entries());
    }

    #[test]
    fn a3_round_trip_from_configuration() {
        let g = dynkin_to_bipartite(DynkinType::a(3)).unwrap();
        let seeded = configuration_from_connection(&random_connection(&g, 21)).unwrap();
        let conn = connection_from_configuration(&g, &seeded).unwrap();
        assert!(configuration_from_connection(&conn)
            .unwrap()
            .projectively_equivalent(&seeded));
    }

    #[test]
    fn three_points_on_a_line() {
        let g = claw();
        let pts = [[1, 0], [0, 1], [1, 1]].map(|p| p.map(exact::int).to_vec()).to_vec();
        let config = PointConfiguration::new(labels(&["1", "2", "3"]), pts).unwrap();
        let conn = gauge_fix(&connection_from_configuration(&g, &config).unwrap());
        // a tree: every weight is gauged to 1
        assert!(conn.entries().iter().all(One::is_one));
        // p1 + p2 - p3 = 0
        let raw = connection_from_configuration(&g, &config).unwrap();
        let e = raw.entries();
        assert_eq!(&e[0] / &e[2], exact::int(-1));
        assert_eq!(&e[1] / &e[2], exact::int(-1));
    }

    #[test]
    fn json_round_trip() {
        let conn = random_connection(&claw(), 9);
        let text = serde_json::to_string(&conn.to_json()).unwrap();
        let back = GraphConnection::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, conn);
    }
}
