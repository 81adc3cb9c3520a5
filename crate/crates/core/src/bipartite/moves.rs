use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::connection::{configuration_from_connection, connection_from_configuration, GraphConnection};
use super::{BipartiteError, BipartiteGraph, Vertex};
use crate::flags::move2_points;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveId {
    /// Contract a two-valent black vertex, merging its white neighbours.
    One,
    /// Contract a two-valent white vertex, merging its black neighbours.
    OnePrime,
    /// Flip a square face with two trivalent white corners.
    Two,
    /// Flip a square face with two trivalent black corners.
    TwoPrime,
}

impl FromStr for MoveId {
    type Err = BipartiteError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" => Ok(MoveId::One),
            "1'" | "1p" => Ok(MoveId::OnePrime),
            "2" => Ok(MoveId::Two),
            "2'" | "2p" => Ok(MoveId::TwoPrime),
            other => Err(BipartiteError::PatternMismatch(format!("unknown move `{other}`"))),
        }
    }
}

impl fmt::Display for MoveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveId::One => "1",
            MoveId::OnePrime => "1'",
            MoveId::Two => "2",
            MoveId::TwoPrime => "2'",
        })
    }
}

type Rotations = BTreeMap<String, Vec<String>>;

fn is_white(v: Vertex) -> bool {
    matches!(v, Vertex::White(_))
}

/// Rotation at `v` read starting just after `from`, without `from`.
fn after(rot: &[String], from: &str) -> Vec<String> {
    let p = rot.iter().position(|x| x == from).expect("neighbour in rotation");
    (1..rot.len()).map(|k| rot[(p + k) % rot.len()].clone()).collect()
}

fn successor(rot: &[String], of: &str) -> Option<String> {
    let p = rot.iter().position(|x| x == of)?;
    Some(rot[(p + 1) % rot.len()].clone())
}

fn rebuild(graph: &BipartiteGraph, rot: &Rotations, removed: &[&str]) -> Result<BipartiteGraph, BipartiteError> {
    let keep = |ls: &[String]| ls.iter().filter(|l| !removed.contains(&l.as_str())).cloned().collect();
    BipartiteGraph::from_neighbour_rotations(keep(graph.white_labels()), keep(graph.black_labels()), rot)
}

/// Applies a move at `location`: one vertex label for moves 1 and 1', or
/// `P,R` naming the two trivalent corners of the square for moves 2 and 2'.
pub fn apply_move(graph: &BipartiteGraph, id: MoveId, location: &str) -> Result<BipartiteGraph, BipartiteError> {
    match id {
        MoveId::One | MoveId::OnePrime => contract(graph, location.trim(), id == MoveId::One),
        MoveId::Two | MoveId::TwoPrime => {
            let (p, r) = location
                .split_once(',')
                .ok_or_else(|| BipartiteError::PatternMismatch(format!("expected `P,R`, got `{location}`")))?;
            flip(graph, p.trim(), r.trim(), id == MoveId::Two).map(|(g, _)| g)
        }
    }
}

fn contract(graph: &BipartiteGraph, centre: &str, black_centre: bool) -> Result<BipartiteGraph, BipartiteError> {
    let v = graph.vertex(centre)?;
    if is_white(v) == black_centre {
        let want = if black_centre { "black" } else { "white" };
        return Err(BipartiteError::PatternMismatch(format!("`{centre}` is not {want}")));
    }
    let mut rot = graph.neighbour_rotations();
    let nb = rot[centre].clone();
    let [u, y] = nb.as_slice() else {
        return Err(BipartiteError::PatternMismatch(format!(
            "`{centre}` has degree {}, not 2",
            nb.len()
        )));
    };
    let (us, ys) = (after(&rot[u], centre), after(&rot[y], centre));
    for x in &ys {
        for l in rot.get_mut(x).expect("neighbour").iter_mut() {
            if l == y {
                *l = u.clone();
            }
        }
    }
    let mut merged: Vec<String> = us.iter().chain(&ys).cloned().collect();
    // a neighbour shared by both ends closes a digon; keep one of its two edges
    for shared in us.iter().filter(|x| ys.contains(x)) {
        let digon = |list: &[String], x: &String| {
            let n = list.len();
            (0..n).find(|&i| list[i] == *x && list[(i + 1) % n] == *x)
        };
        let (Some(i), Some(j)) = (digon(&merged, shared), digon(&rot[shared], u)) else {
            return Err(BipartiteError::MultiEdge(u.clone(), shared.clone()));
        };
        merged.remove(i);
        rot.get_mut(shared).expect("neighbour").remove(j);
    }
    rot.insert(u.clone(), merged);
    rot.remove(centre);
    rot.remove(y);
    rebuild(graph, &rot, &[centre, y])
}

/// Labels `[A, Q1, C, Q2]` of the square flip at `(P, R)`.
fn flip(
    graph: &BipartiteGraph,
    p: &str,
    r: &str,
    white_corners: bool,
) -> Result<(BipartiteGraph, [String; 4]), BipartiteError> {
    let mismatch = |m: String| Err(BipartiteError::PatternMismatch(m));
    for x in [p, r] {
        let v = graph.vertex(x)?;
        if is_white(v) != white_corners {
            let want = if white_corners { "white" } else { "black" };
            return mismatch(format!("`{x}` is not {want}"));
        }
        if graph.degree(v) != 3 {
            return mismatch(format!("`{x}` is not trivalent"));
        }
    }
    if p == r {
        return mismatch("the two corners coincide".into());
    }
    let mut rot = graph.neighbour_rotations();
    let (rp, rr) = (rot[p].clone(), rot[r].clone());
    let common: Vec<&String> = rp.iter().filter(|x| rr.contains(x)).collect();
    if common.len() != 2 {
        return mismatch(format!("`{p}` and `{r}` share {} neighbours, not 2", common.len()));
    }
    let a = rp.iter().find(|x| !rr.contains(x)).expect("third neighbour").clone();
    let c = rr.iter().find(|x| !rp.contains(x)).expect("third neighbour").clone();
    // rot(P) = [Q2, A, Q1], rot(R) = [Q1, C, Q2]
    let q1 = successor(&rp, &a).expect("neighbour");
    let q2 = successor(&rp, &q1).expect("neighbour");
    if successor(&rr, &q1).as_ref() != Some(&c) {
        return mismatch(format!("rotations at `{p}` and `{r}` do not bound a square"));
    }
    if successor(&rot[&q2], p).as_deref() != Some(r) || successor(&rot[&q1], r).as_deref() != Some(p) {
        return mismatch(format!("`{p} {q1} {r} {q2}` is not a face"));
    }
    if a == c {
        return Err(BipartiteError::MultiEdge(a, format!("{p}/{r}")));
    }
    rot.insert(p.to_string(), vec![q2.clone(), a.clone(), c.clone()]);
    rot.insert(r.to_string(), vec![q1.clone(), c.clone(), a.clone()]);
    let splice = |list: &mut Vec<String>, at: &str, with: [&str; 2]| {
        let k = list.iter().position(|x| x == at).expect("neighbour");
        list.splice(k..=k, with.map(String::from));
    };
    splice(rot.get_mut(&a).expect("A"), p, [r, p]);
    splice(rot.get_mut(&c).expect("C"), r, [p, r]);
    rot.get_mut(&q2).expect("Q2").retain(|x| x != r);
    rot.get_mut(&q1).expect("Q1").retain(|x| x != p);
    let g = rebuild(graph, &rot, &[])?;
    Ok((g, [a, q1, c, q2]))
}

/// Move 2 together with the induced connection: the points are moved by the
/// projective construction and the weights recomputed from the new circuits.
pub fn transport_move2(conn: &GraphConnection, p: &str, r: &str) -> Result<GraphConnection, BipartiteError> {
    let graph = conn.graph();
    let (moved, [a, q1, c, q2]) = flip(graph, p, r, true)?;
    let config = configuration_from_connection(conn)?;
    let rot = graph.neighbour_rotations();
    let circuit = |l: &String| -> Vec<&str> { rot[l].iter().map(String::as_str).collect() };
    let (ca, cb, cc, cd) = (circuit(&a), circuit(&q1), circuit(&c), circuit(&q2));
    let result = move2_points(&config, [&ca, &cb, &cc, &cd], p, r)?;
    connection_from_configuration(&moved, &result.config)
}
