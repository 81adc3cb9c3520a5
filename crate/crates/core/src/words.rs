//! Cyclic positive words in the generators `s_1 .. s_{n-1}`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter s{letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: u32, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("need at least 3 polygon sides, got {0}")]
    TooFewSides(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// A periodic word, considered up to rotation.
///
/// Equality and hashing use the minimal rotation, so `[2,1,1]` and `[1,1,2]`
/// compare equal. The empty word is allowed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicWord {
    letters: Vec<u32>,
    rank: usize,
}

impl CyclicWord {
    pub fn new(letters: Vec<u32>, rank: usize) -> Result<Self, WordError> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l as usize >= rank) {
            return Err(WordError::LetterOutOfRange { letter: bad, rank });
        }
        Ok(CyclicWord { letters, rank })
    }

    pub fn empty(rank: usize) -> Self {
        CyclicWord {
            letters: Vec::new(),
            rank,
        }
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn canonical(&self) -> CyclicWord {
        CyclicWord {
            letters: min_rotation(&self.letters),
            rank: self.rank,
        }
    }

    /// Letter counts, indexed by generator `s_1 .. s_{n-1}`.
    pub fn abelianization(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rank.saturating_sub(1)];
        for &l in &self.letters {
            counts[l as usize - 1] += 1;
        }
        counts
    }

    /// The word under `s_i -> s_{n-i}`.
    pub fn dual(&self) -> CyclicWord {
        let n = self.rank as u32;
        CyclicWord {
            letters: self.letters.iter().map(|&l| n - l).collect(),
            rank: self.rank,
        }
    }

    /// Cycle type (sorted descending) of the product of the transpositions `(i, i+1)`.
    ///
    /// Rotation conjugates the product and braid moves fix it, so this is a
    /// class invariant.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.rank).collect();
        for &l in &self.letters {
            perm.swap(l as usize - 1, l as usize);
        }
        let mut seen = vec![false; self.rank];
        let mut out = Vec::new();
        for start in 0..self.rank {
            if seen[start] {
                continue;
            }
            let (mut len, mut i) = (0, start);
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Parses e.g. `(s2 s1^2)^4`, `s1^8`, `1 2 1` or `e`. The rank defaults to
    /// one more than the largest letter.
    pub fn parse(text: &str, rank: Option<usize>) -> Result<Self, WordError> {
        let letters = WordParser {
            src: text.as_bytes(),
            pos: 0,
        }
        .parse()?;
        let rank = rank.unwrap_or_else(|| letters.iter().max().map_or(2, |&m| m as usize + 1));
        CyclicWord::new(letters, rank)
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.letters.len() == other.letters.len()
            && min_rotation(&self.letters) == min_rotation(&other.letters)
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        min_rotation(&self.letters).hash(state);
    }
}

pub fn canonicalize(word: &CyclicWord) -> CyclicWord {
    word.canonical()
}

pub fn abelianization(word: &CyclicWord) -> Vec<usize> {
    word.abelianization()
}

fn min_rotation(w: &[u32]) -> Vec<u32> {
    let n = w.len();
    let best = (0..n)
        .min_by(|&i, &j| w[i..].iter().chain(&w[..i]).cmp(w[j..].iter().chain(&w[..j])))
        .unwrap_or(0);
    w[best..].iter().chain(&w[..best]).copied().collect()
}

/// Renders with the shortest period, e.g. `(s2 s1^2)^4`; the empty word is `e`.
impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.letters;
        if w.is_empty() {
            return f.write_str("e");
        }
        let n = w.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p]))
            .unwrap_or(n);
        let block = &w[..period];
        let mut runs: Vec<(u32, usize)> = Vec::new();
        for &l in block {
            match runs.last_mut() {
                Some((last, k)) if *last == l => *k += 1,
                _ => runs.push((l, 1)),
            }
        }
        let body: Vec<String> = runs
            .iter()
            .map(|&(l, k)| if k == 1 { format!("s{l}") } else { format!("s{l}^{k}") })
            .collect();
        let reps = n / period;
        match (reps, body.len()) {
            (1, _) => f.write_str(&body.join(" ")),
            (_, 1) if runs[0].1 == 1 => write!(f, "{}^{reps}", body[0]),
            _ => write!(f, "({})^{reps}", body.join(" ")),
        }
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl WordParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, WordError> {
        Err(WordError::Parse(format!("{msg} at byte {}", self.pos)))
    }

    fn skip(&mut self) {
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_whitespace() || *c == b',' || *c == b'[' || *c == b']')
        {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn parse(&mut self) -> Result<Vec<u32>, WordError> {
        let out = self.sequence()?;
        self.skip();
        if self.pos < self.src.len() {
            return self.err("unexpected input");
        }
        Ok(out)
    }

    fn sequence(&mut self) -> Result<Vec<u32>, WordError> {
        let mut out = Vec::new();
        loop {
            self.skip();
            let atom = match self.src.get(self.pos) {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    self.skip();
                    if self.src.get(self.pos) != Some(&b')') {
                        return self.err("expected `)`");
                    }
                    self.pos += 1;
                    inner
                }
                Some(b's') => {
                    self.pos += 1;
                    let Some(l) = self.number() else {
                        return self.err("expected generator index");
                    };
                    vec![l]
                }
                Some(c) if c.is_ascii_digit() => vec![self.number().expect("digit present")],
                Some(b'e') => {
                    self.pos += 1;
                    Vec::new()
                }
                _ => break,
            };
            let reps = if self.src.get(self.pos) == Some(&b'^') {
                self.pos += 1;
                match self.number() {
                    Some(k) => k as usize,
                    None => return self.err("expected exponent"),
                }
            } else {
                1
            };
            for _ in 0..reps {
                out.extend_from_slice(&atom);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// `s_i s_{i+1} s_i <-> s_{i+1} s_i s_{i+1}` starting at a position.
    Braid,
    /// `s_i s_j <-> s_j s_i` with `|i - j| >= 2`.
    Commute,
}

/// One step of an equivalence witness: the rule, its cyclic position in the
/// previous canonical word, and the canonical result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub rule: MoveKind,
    pub position: usize,
    pub result: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Inequivalence {
    LengthMismatch { left: usize, right: usize },
    CycleTypeMismatch { left: Vec<usize>, right: Vec<usize> },
    ClosureExhausted { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Equivalence {
    Yes { witness: Vec<WitnessStep> },
    No { certificate: Inequivalence },
    Unknown { explored: usize },
}

pub const DEFAULT_NODE_LIMIT: usize = 5_000_000;

fn neighbours(w: &[u32]) -> Vec<(MoveKind, usize, Vec<u32>)> {
    let n = w.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for k in 0..n {
        let (i, j) = (w[k], w[(k + 1) % n]);
        if i.abs_diff(j) >= 2 {
            let mut v = w.to_vec();
            v[k] = j;
            v[(k + 1) % n] = i;
            out.push((MoveKind::Commute, k, min_rotation(&v)));
        }
        if n >= 3 && i.abs_diff(j) == 1 && w[(k + 2) % n] == i {
            let mut v = w.to_vec();
            v[k] = j;
            v[(k + 1) % n] = i;
            v[(k + 2) % n] = j;
            out.push((MoveKind::Braid, k, min_rotation(&v)));
        }
    }
    out
}

/// Breadth-first search of the move closure of `w1` for `w2`.
pub fn braid_equivalent(w1: &CyclicWord, w2: &CyclicWord, node_limit: usize) -> Result<Equivalence, WordError> {
    if w1.rank != w2.rank {
        return Err(WordError::RankMismatch(w1.rank, w2.rank));
    }
    if w1.len() != w2.len() {
        return Ok(Equivalence::No {
            certificate: Inequivalence::LengthMismatch {
                left: w1.len(),
                right: w2.len(),
            },
        });
    }
    let (c1, c2) = (w1.cycle_type(), w2.cycle_type());
    if c1 != c2 {
        return Ok(Equivalence::No {
            certificate: Inequivalence::CycleTypeMismatch { left: c1, right: c2 },
        });
    }
    let start = min_rotation(&w1.letters);
    let target = min_rotation(&w2.letters);
    let mut parent: Parents = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        if w == target {
            return Ok(Equivalence::Yes {
                witness: trace(&parent, w),
            });
        }
        for (rule, pos, v) in neighbours(&w) {
            if parent.contains_key(&v) {
                continue;
            }
            if parent.len() >= node_limit {
                return Ok(Equivalence::Unknown { explored: parent.len() });
            }
            parent.insert(v.clone(), Some((w.clone(), rule, pos)));
            queue.push_back(v);
        }
    }
    Ok(Equivalence::No {
        certificate: Inequivalence::ClosureExhausted { size: parent.len() },
    })
}

type Parents = HashMap<Vec<u32>, Option<(Vec<u32>, MoveKind, usize)>>;

fn trace(parent: &Parents, mut w: Vec<u32>) -> Vec<WitnessStep> {
    let mut steps = Vec::new();
    while let Some(Some((prev, rule, position))) = parent.get(&w) {
        steps.push(WitnessStep {
            rule: *rule,
            position: *position,
            result: w.clone(),
        });
        w = prev.clone();
    }
    steps.reverse();
    steps
}

/// All canonical words reachable from `w`, or `None` past `node_limit`.
pub fn closure(w: &CyclicWord, node_limit: usize) -> Option<Vec<CyclicWord>> {
    let start = min_rotation(&w.letters);
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for (_, _, v) in neighbours(&x) {
            if seen.insert(v.clone()) {
                if seen.len() > node_limit {
                    return None;
                }
                queue.push_back(v);
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort();
    Some(
        out.into_iter()
            .map(|letters| CyclicWord { letters, rank: w.rank })
            .collect(),
    )
}

/// Rank-3 word of a polygon with `k_i` marked points on side `i`:
/// the product of `s2 s1^(k_i + 1)` over the sides.
pub fn polygon_config_word(marked: &[u32]) -> Result<CyclicWord, WordError> {
    if marked.len() < 3 {
        return Err(WordError::TooFewSides(marked.len()));
    }
    if marked.contains(&0) {
        return Err(WordError::Invalid("each side needs at least one marked point".into()));
    }
    let mut letters = Vec::new();
    for &k in marked {
        letters.push(2);
        letters.extend(std::iter::repeat_n(1, k as usize + 1));
    }
    CyclicWord::new(letters, 3)
}

/// `m` repetitions of `(s1 s3 s5 ...)(s2 s4 ...)` in rank `n_points`.
pub fn ngon_rotation_word(n_points: usize, m: usize) -> Result<CyclicWord, WordError> {
    if n_points < 2 || m < 1 {
        return Err(WordError::Invalid(format!(
            "need n >= 2 and m >= 1, got ({n_points}, {m})"
        )));
    }
    let odd = (1..n_points as u32).step_by(2);
    let even = (2..n_points as u32).step_by(2);
    let block: Vec<u32> = odd.chain(even).collect();
    CyclicWord::new(block.repeat(m), n_points)
}
