use std::collections::{BTreeMap, VecDeque};

use super::{BipartiteError, BipartiteGraph};
use crate::poly::{DynkinFamily, DynkinType};

/// Dynkin diagram as a plane tree: counterclockwise neighbour lists.
fn plane_tree(t: DynkinType) -> Vec<Vec<usize>> {
    let n = t.rank();
    let arms = match t.family() {
        DynkinFamily::A => {
            return (0..n)
                .map(|i| {
                    let mut adj = Vec::new();
                    if i > 0 {
                        adj.push(i - 1);
                    }
                    if i + 1 < n {
                        adj.push(i + 1);
                    }
                    adj
                })
                .collect();
        }
        // long, medium, short
        DynkinFamily::D => [n - 3, 1, 1],
        DynkinFamily::E => [n - 4, 2, 1],
    };
    let mut adj = vec![Vec::new()];
    for len in arms {
        let mut prev = 0;
        for _ in 0..len {
            let v = adj.len();
            adj.push(vec![prev]);
            adj[prev].push(v);
            prev = v;
        }
    }
    adj
}

/// Bipartite graph obtained by surrounding every node by a polygon (a `2k`-gon
/// for valency `k > 2`, a square otherwise) whose even sides cross the tree
/// edges, gluing polygons along crossed sides and hanging a white leaf on
/// each two-valent black corner of a leaf polygon.
pub fn dynkin_to_bipartite(t: DynkinType) -> Result<BipartiteGraph, BipartiteError> {
    let adj = plane_tree(t);
    let nodes = adj.len();
    let sides: Vec<usize> = adj.iter().map(|a| 2 * a.len().max(2)).collect();
    let offset: Vec<usize> = sides
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let corner = |v: usize, s: usize| offset[v] + s % sides[v];

    let mut colour = vec![usize::MAX; nodes];
    colour[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if colour[u] == usize::MAX {
                colour[u] = 1 - colour[v];
                queue.push_back(u);
            }
        }
    }

    let total: usize = sides.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for v in 0..nodes {
        for (j, &u) in adj[v].iter().enumerate() {
            if u < v {
                continue;
            }
            let jj = adj[u].iter().position(|&x| x == v).expect("symmetric adjacency");
            for (a, b) in [
                (corner(v, 2 * j), corner(u, 2 * jj + 1)),
                (corner(v, 2 * j + 1), corner(u, 2 * jj)),
            ] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut members: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for v in 0..nodes {
        for s in 0..sides[v] {
            let r = find(&mut parent, corner(v, s));
            members.entry(r).or_default().push((v, s));
        }
    }
    let is_white = |v: usize, s: usize| s.is_multiple_of(2) == (colour[v] == 0);
    let has_pendant = |class: &Vec<(usize, usize)>| {
        let &(v, s) = &class[0];
        class.len() == 1 && !is_white(v, s) && adj[v].len() <= 1
    };

    let mut label: BTreeMap<usize, String> = BTreeMap::new();
    let mut pendant: BTreeMap<usize, String> = BTreeMap::new();
    let (mut white, mut black) = (Vec::new(), Vec::new());
    let branch = adj[0].len() == 3;
    if branch {
        let names = ["C", "A", "B"];
        for (k, s) in (0..6).filter(|&s| is_white(0, s)).enumerate() {
            let r = find(&mut parent, corner(0, s));
            label.insert(r, names[k].to_string());
            white.push(names[k].to_string());
        }
    }
    let (mut nw, mut nb) = (0, 0);
    for v in 0..nodes {
        for s in 0..sides[v] {
            let r = find(&mut parent, corner(v, s));
            if label.contains_key(&r) {
                continue;
            }
            if is_white(v, s) {
                nw += 1;
                label.insert(r, nw.to_string());
                white.push(nw.to_string());
            } else {
                nb += 1;
                label.insert(r, format!("b{nb}"));
                black.push(format!("b{nb}"));
                if has_pendant(&members[&r]) {
                    nw += 1;
                    pendant.insert(r, nw.to_string());
                    white.push(nw.to_string());
                }
            }
        }
    }

    let mut rot: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut class_label = |v: usize, s: usize| label[&find(&mut parent, corner(v, s))].clone();
    for (r, class) in &members {
        let me = label[r].clone();
        let list = match *class.as_slice() {
            [(v, s)] => {
                let mut l = vec![class_label(v, s + 1), class_label(v, s + sides[v] - 1)];
                if let Some(p) = pendant.get(r) {
                    l.push(p.clone());
                    rot.insert(p.clone(), vec![me.clone()]);
                }
                l
            }
            [p, q] => {
                // p is the corner whose outgoing side is the glued one
                let ((v, s), (u, t)) = if class_label(p.0, p.1 + 1) == class_label(q.0, q.1 + sides[q.0] - 1) {
                    (p, q)
                } else {
                    (q, p)
                };
                vec![
                    class_label(v, s + 1),
                    class_label(v, s + sides[v] - 1),
                    class_label(u, t + 1),
                ]
            }
            _ => {
                return Err(BipartiteError::Invalid(format!(
                    "corner `{me}` lies on more than two polygons"
                )))
            }
        };
        rot.insert(me, list);
    }
    BipartiteGraph::from_neighbour_rotations(white, black, &rot)
}
