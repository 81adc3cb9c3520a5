//! Growth diagrams and the rotation sweep producing Stokes words.
//!
//! Each upward side `(a, b)` of the Newton polygon contributes `b` points
//! rotating with angular speed `(b - a)/b`. Points of a faster speed class sit
//! on a much larger circle (radius scale `64^level`), so the dominance order of
//! real projections only depends on phases.
//!
//! A hull edge with no support point strictly inside it is binomial: all of
//! its `g * b` points (for `g` sides) share one radius and are equally spaced,
//! i.e. they are the roots of a single binomial equation. Other edges get one
//! radius and phase per side.

use std::f64::consts::TAU;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, GenericRng, Rational};
use crate::lattice::NewtonPolygon;
use crate::words::CyclicWord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("Newton polygon has no upward side")]
    NoUpwardSides,
    #[error("degenerate diagram near t = {t:.6}: {detail}")]
    Degenerate { t: f64, detail: String },
    #[error("word changed when doubling resolution: {coarse} vs {fine}")]
    Unstable { coarse: String, fine: String },
    #[error("sweep found {found} crossings, expected {expected}")]
    CrossingCount { expected: String, found: usize },
    #[error("resolution {resolution} is below 4 x {crossings} crossings")]
    InsufficientResolution { resolution: usize, crossings: usize },
    #[error("diagram still degenerate after {0} seeds")]
    RetriesExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPoint {
    #[serde(with = "exact::serde_str")]
    pub radius: Rational,
    /// Fraction of a full turn, in `[0, 1)`.
    #[serde(with = "exact::serde_str")]
    pub phase: Rational,
    #[serde(with = "exact::serde_str")]
    pub speed: Rational,
    /// Index into the polygon's boundary sides.
    pub side: usize,
}

impl GrowthPoint {
    /// Real projection at time `t` (one period is `t` in `[0, 1)`).
    pub fn projection(&self, t: f64) -> f64 {
        let (r, w, phi) = (
            exact::to_f64(&self.radius),
            exact::to_f64(&self.speed),
            exact::to_f64(&self.phase),
        );
        r * (TAU * (w * t + phi)).cos()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthDiagram {
    pub points: Vec<GrowthPoint>,
    pub n: usize,
}

const PHASE_BITS: u32 = 20;
const LEVEL_SCALE: i64 = 64;

/// Places the rotating points of every upward side, generically from `seed`.
pub fn build_growth_diagram(polygon: &NewtonPolygon, seed: u64) -> Result<GrowthDiagram, GrowthError> {
    build_with_rng(polygon, &mut GenericRng::new(seed))
}

fn build_with_rng(polygon: &NewtonPolygon, rng: &mut GenericRng) -> Result<GrowthDiagram, GrowthError> {
    let edges = polygon.edges();
    let mut first_side = Vec::with_capacity(edges.len());
    let mut count = 0usize;
    for e in &edges {
        first_side.push(count);
        count += e.multiplicity as usize;
    }
    let upward: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].primitive.b > 0).collect();
    if upward.is_empty() {
        return Err(GrowthError::NoUpwardSides);
    }
    let speed_of = |i: usize| {
        let (a, b) = (edges[i].primitive.a, edges[i].primitive.b);
        exact::ratio(b - a, b)
    };
    let levels: Vec<Rational> = upward.iter().map(|&i| speed_of(i)).sorted().dedup().collect();

    let mut radii: Vec<Rational> = Vec::new();
    let mut draw_radius = |rng: &mut GenericRng, level: usize| loop {
        let r = exact::int(LEVEL_SCALE.pow(level as u32)) * (Rational::one() + rng.unit(PHASE_BITS));
        if !radii.contains(&r) {
            radii.push(r.clone());
            return r;
        }
    };
    let static_lo = exact::ratio(5, 16);
    let static_hi = exact::ratio(11, 16);
    let draw_phase = |rng: &mut GenericRng, speed: &Rational| {
        if speed.is_zero() {
            // static points project to the negative half-axis
            rng.in_range(&static_lo, &static_hi, PHASE_BITS)
        } else {
            rng.unit(PHASE_BITS)
        }
    };

    let mut points = Vec::new();
    for &i in &upward {
        let e = &edges[i];
        let speed = speed_of(i);
        let level = levels.iter().position(|w| *w == speed).expect("speed level present");
        let (g, b) = (e.multiplicity, e.primitive.b);
        if e.binomial {
            let r = draw_radius(rng, level);
            let phi = draw_phase(rng, &speed);
            for k in 0..g * b {
                points.push(GrowthPoint {
                    radius: r.clone(),
                    phase: frac(&phi + exact::ratio(k, g * b)),
                    speed: speed.clone(),
                    side: first_side[i] + (k % g) as usize,
                });
            }
        } else {
            for s in 0..g {
                let r = draw_radius(rng, level);
                let phi = draw_phase(rng, &speed);
                for j in 0..b {
                    points.push(GrowthPoint {
                        radius: r.clone(),
                        phase: frac(&phi + exact::ratio(j, b)),
                        speed: speed.clone(),
                        side: first_side[i] + s as usize,
                    });
                }
            }
        }
    }
    let n = points.len();
    Ok(GrowthDiagram { points, n })
}

fn frac(q: Rational) -> Rational {
    let f = &q - q.floor();
    if f.is_negative() {
        f + Rational::one()
    } else {
        f
    }
}

/// Predicted number of crossings per period: `2|w|` for a pair of equal
/// speed `w`, and `2|w|` of the outer point for a pair of distinct speeds.
pub fn expected_crossings(diagram: &GrowthDiagram) -> Rational {
    let mut total = Rational::zero();
    for (p, q) in diagram.points.iter().tuple_combinations() {
        let w = if p.speed == q.speed || p.radius >= q.radius {
            &p.speed
        } else {
            &q.speed
        };
        total += exact::int(2) * w.abs();
    }
    total
}

/// One period of the word, canonicalized.
///
/// The sweep is repeated at twice the resolution and both words must agree;
/// the length is certified against [`expected_crossings`].
pub fn extract_stokes_word(diagram: &GrowthDiagram, resolution: usize) -> Result<CyclicWord, GrowthError> {
    let expected = expected_crossings(diagram);
    if !exact::is_integer(&expected) {
        return Err(GrowthError::CrossingCount {
            expected: expected.to_string(),
            found: 0,
        });
    }
    let expected = expected.to_integer().to_usize().unwrap_or(usize::MAX);
    if resolution < 4 * expected {
        return Err(GrowthError::InsufficientResolution {
            resolution,
            crossings: expected,
        });
    }
    let coarse = sweep(diagram, resolution)?;
    let fine = sweep(diagram, 2 * resolution)?;
    if coarse != fine {
        return Err(GrowthError::Unstable {
            coarse: coarse.to_string(),
            fine: fine.to_string(),
        });
    }
    if coarse.len() != expected {
        return Err(GrowthError::CrossingCount {
            expected: expected.to_string(),
            found: coarse.len(),
        });
    }
    Ok(coarse.canonical())
}

const SIMULTANEOUS: f64 = 1e-9;

fn sweep(diagram: &GrowthDiagram, resolution: usize) -> Result<CyclicWord, GrowthError> {
    let pts = &diagram.points;
    let n = pts.len();
    let rank = n.max(1);
    if n < 2 {
        return Ok(CyclicWord::empty(rank));
    }
    let step = 1.0 / resolution as f64;
    let t0 = SWEEP_OFFSET * step;
    let mut events: Vec<(f64, usize, usize)> = Vec::new();
    for (i, j) in (0..n).tuple_combinations() {
        let f = |t: f64| pts[i].projection(t) - pts[j].projection(t);
        let mut prev = f(t0);
        for k in 1..=resolution {
            let t = t0 + k as f64 * step;
            let v = f(t);
            if (prev < 0.0) != (v < 0.0) {
                let (mut lo, mut hi) = (t - step, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (f(mid) < 0.0) == (prev < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                events.push((0.5 * (lo + hi), i, j));
            }
            prev = v;
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let ascending = |t: f64| -> Vec<usize> {
        let proj: Vec<f64> = pts.iter().map(|p| p.projection(t)).collect();
        (0..n).sorted_by(|&a, &b| proj[a].total_cmp(&proj[b])).collect()
    };
    let mut order = ascending(t0);
    let mut position = vec![0usize; n];
    for (k, &p) in order.iter().enumerate() {
        position[p] = k;
    }
    let mut letters = Vec::with_capacity(events.len());
    let mut g = 0;
    while g < events.len() {
        let mut h = g + 1;
        while h < events.len() && events[h].0 - events[h - 1].0 < SIMULTANEOUS {
            h += 1;
        }
        let t = events[g].0;
        let mut slots: Vec<usize> = Vec::new();
        for &(_, i, j) in &events[g..h] {
            let (pi, pj) = (position[i], position[j]);
            if pi.abs_diff(pj) != 1 {
                return Err(GrowthError::Degenerate {
                    t,
                    detail: format!("points {i} and {j} are not adjacent"),
                });
            }
            slots.push(pi.min(pj));
        }
        slots.sort_unstable();
        if slots.windows(2).any(|w| w[1] <= w[0] + 1) {
            return Err(GrowthError::Degenerate {
                t,
                detail: "overlapping simultaneous crossings".into(),
            });
        }
        for &s in &slots {
            order.swap(s, s + 1);
            position[order[s]] = s;
            position[order[s + 1]] = s + 1;
            letters.push(s as u32 + 1);
        }
        g = h;
    }
    if order != ascending(t0 + 1.0) {
        return Err(GrowthError::Degenerate {
            t: t0 + 1.0,
            detail: "missed a crossing".into(),
        });
    }
    Ok(CyclicWord::new(letters, rank).expect("letters below point count"))
}

pub const MAX_ATTEMPTS: u64 = 5;

/// Fraction of a step by which samples are shifted off rational times.
const SWEEP_OFFSET: f64 = 0.2971;

/// Builds a diagram and extracts its word, re-seeding on genericity failures.
///
/// Attempt `k` draws from stream `k` of `seed`; the attempt that succeeded is
/// returned alongside the result.
pub fn stokes_word_with_retries(
    polygon: &NewtonPolygon,
    seed: u64,
    resolution: usize,
) -> Result<(GrowthDiagram, CyclicWord, u64), GrowthError> {
    for attempt in 0..MAX_ATTEMPTS {
        let diagram = build_with_rng(polygon, &mut GenericRng::derived(seed, attempt))?;
        match extract_stokes_word(&diagram, resolution) {
            Ok(word) => return Ok((diagram, word, attempt)),
            Err(e @ (GrowthError::InsufficientResolution { .. } | GrowthError::NoUpwardSides)) => return Err(e),
            Err(_) => continue,
        }
    }
    Err(GrowthError::RetriesExhausted(MAX_ATTEMPTS as usize))
}
