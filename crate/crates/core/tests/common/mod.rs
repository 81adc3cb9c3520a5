#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stokesflag::bipartite::BipartiteGraph;
use stokesflag::poly::DynkinType;

pub const PRIME: u64 = 2_147_483_647;

pub fn dynkin_types() -> Vec<DynkinType> {
    let mut out: Vec<DynkinType> = (1..=6).map(DynkinType::a).collect();
    out.extend((4..=7).map(DynkinType::d));
    out.extend((6..=8).map(DynkinType::e));
    out
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A square face `X b Y d` with leaves on its four blacks.
pub fn whiskered_square() -> BipartiteGraph {
    let rot: BTreeMap<String, Vec<String>> = [
        ("X", vec!["d", "a", "b"]),
        ("Y", vec!["b", "c", "d"]),
        ("a", vec!["X", "A1", "A2"]),
        ("b", vec!["Y", "X", "B1", "B2"]),
        ("c", vec!["C1", "Y", "C2"]),
        ("d", vec!["D2", "D1", "X", "Y"]),
        ("A1", vec!["a"]),
        ("A2", vec!["a"]),
        ("B1", vec!["b"]),
        ("B2", vec!["b"]),
        ("C1", vec!["c"]),
        ("C2", vec!["c"]),
        ("D1", vec!["d"]),
        ("D2", vec!["d"]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), labels(&v)))
    .collect();
    let white = labels(&["X", "Y", "A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2"]);
    let black = labels(&["a", "b", "c", "d"]);
    BipartiteGraph::from_neighbour_rotations(white, black, &rot).expect("whiskered square is planar")
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

/// Rank over `F_p` by Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = pow_mod(m[r][c], PRIME - 2);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] * inv % PRIME;
                for j in c..cols {
                    m[i][j] = (m[i][j] + PRIME - f * m[r][j] % PRIME) % PRIME;
                }
            }
        }
        r += 1;
    }
    r
}

/// White-by-black matrix with independent random nonzero weights mod p,
/// optionally without one black column.
fn random_matrix(g: &BipartiteGraph, seed: u64, skip: Option<usize>) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![0u64; g.black_count()]; g.white_count()];
    for &(w, b) in g.edges() {
        m[w][b] = rng.gen_range(1..PRIME);
    }
    if let Some(b) = skip {
        for row in &mut m {
            row.remove(b);
        }
    }
    m
}

/// `|W| - rank - 1` for one random evaluation mod p.
pub fn dimension_mod_p(g: &BipartiteGraph, seed: u64) -> i64 {
    g.white_count() as i64 - rank_mod_p(random_matrix(g, seed, None)) as i64 - 1
}

/// Deleting any black vertex must raise the dimension.
pub fn minimal_mod_p(g: &BipartiteGraph, seed: u64) -> bool {
    let full = rank_mod_p(random_matrix(g, seed, None));
    (0..g.black_count()).all(|b| rank_mod_p(random_matrix(g, seed, Some(b))) < full)
}
