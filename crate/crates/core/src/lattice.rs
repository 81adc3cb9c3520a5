//! Newton polygon geometry.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::LaurentPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("support is empty")]
    EmptySupport,
    #[error("degenerate Newton polygon: hull has dimension {0}")]
    Degenerate(usize),
    #[error("symbol does not depend on p")]
    NoPDependence,
}

/// Exponent pair `(a, b)` of the monomial `x^a p^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    pub fn transpose(self) -> Self {
        LatticePoint { a: self.b, b: self.a }
    }

    fn sub(self, o: Self) -> Self {
        LatticePoint::new(self.a - o.a, self.b - o.b)
    }

    fn add(self, o: Self) -> Self {
        LatticePoint::new(self.a + o.a, self.b + o.b)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((a, b): (i64, i64)) -> Self {
        LatticePoint { a, b }
    }
}

impl From<LatticePoint> for (i64, i64) {
    fn from(p: LatticePoint) -> Self {
        (p.a, p.b)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

fn cross(o: LatticePoint, p: LatticePoint, q: LatticePoint) -> i128 {
    let (u, v) = (p.sub(o), q.sub(o));
    u.a as i128 * v.b as i128 - u.b as i128 * v.a as i128
}

/// Unit lattice step along the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub vector: LatticePoint,
}

impl Side {
    pub fn is_upward(&self) -> bool {
        self.vector.b > 0
    }

    /// Angular speed `(b_s - a_s)/b_s` as a reduced pair `(num, den)`.
    pub fn speed(&self) -> (i64, i64) {
        let (a, b) = (self.vector.a, self.vector.b);
        let g = (b - a).gcd(&b).max(1);
        ((b - a) / g, b / g)
    }
}

/// A full hull edge: `multiplicity` consecutive sides with the same primitive vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullEdge {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub primitive: LatticePoint,
    pub multiplicity: i64,
    /// No support point lies strictly between the endpoints.
    pub binomial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    AffinePlane,
    AtInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactificationPoint {
    pub side: usize,
    pub x_order: i64,
    pub p_order: i64,
    pub location: Location,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<LatticePoint>,
    support: BTreeSet<LatticePoint>,
}

/// Convex hull of a polynomial's support.
pub fn newton_polygon(poly: &LaurentPolynomial) -> Result<NewtonPolygon, LatticeError> {
    NewtonPolygon::from_support(poly.support())
}

impl NewtonPolygon {
    /// Builds the hull; collinear supports are rejected with their dimension.
    pub fn from_support<I: IntoIterator<Item = LatticePoint>>(points: I) -> Result<Self, LatticeError> {
        let support: BTreeSet<LatticePoint> = points.into_iter().collect();
        if support.is_empty() {
            return Err(LatticeError::EmptySupport);
        }
        let vertices = convex_hull(&support);
        match vertices.len() {
            1 => Err(LatticeError::Degenerate(0)),
            2 => Err(LatticeError::Degenerate(1)),
            _ => Ok(NewtonPolygon { vertices, support }),
        }
    }

    /// Counterclockwise, starting from the lexicographically smallest vertex.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn support(&self) -> &BTreeSet<LatticePoint> {
        &self.support
    }

    pub fn edges(&self) -> Vec<HullEdge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (from, to) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let d = to.sub(from);
                let g = d.a.gcd(&d.b);
                let primitive = LatticePoint::new(d.a / g, d.b / g);
                let binomial = (1..g).all(|k| {
                    let p = LatticePoint::new(from.a + k * primitive.a, from.b + k * primitive.b);
                    !self.support.contains(&p)
                });
                HullEdge {
                    from,
                    to,
                    primitive,
                    multiplicity: g,
                    binomial,
                }
            })
            .collect()
    }

    pub fn sides(&self) -> Vec<Side> {
        let mut out = Vec::new();
        for e in self.edges() {
            let mut at = e.from;
            for _ in 0..e.multiplicity {
                let next = at.add(e.primitive);
                out.push(Side {
                    from: at,
                    to: next,
                    vector: e.primitive,
                });
                at = next;
            }
        }
        out
    }

    /// Twice the area (shoelace).
    pub fn double_area(&self) -> i128 {
        let o = self.vertices[0];
        self.vertices.windows(2).map(|w| cross(o, w[0], w[1])).sum()
    }

    pub fn boundary_points(&self) -> i64 {
        self.edges().iter().map(|e| e.multiplicity).sum()
    }

    /// Interior lattice points, by Pick's theorem.
    pub fn genus(&self) -> u64 {
        let twice_interior = self.double_area() - self.boundary_points() as i128 + 2;
        (twice_interior / 2) as u64
    }

    pub fn compactification_points(&self) -> Vec<CompactificationPoint> {
        self.sides()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (x_order, p_order) = (-s.vector.b, s.vector.a);
                let location = if x_order < 0 || p_order < 0 {
                    Location::AtInfinity
                } else {
                    Location::AffinePlane
                };
                CompactificationPoint {
                    side: i,
                    x_order,
                    p_order,
                    location,
                }
            })
            .collect()
    }

    pub fn points_at_infinity(&self) -> usize {
        self.compactification_points()
            .iter()
            .filter(|c| c.location == Location::AtInfinity)
            .count()
    }

    pub fn homology_rank(&self) -> u64 {
        2 * self.genus() + self.points_at_infinity() as u64 - 1
    }

    pub fn upward_sides(&self) -> Vec<Side> {
        self.sides().into_iter().filter(Side::is_upward).collect()
    }

    pub fn to_json(&self) -> PolygonJson {
        let points = self.compactification_points();
        PolygonJson {
            vertices: self.vertices.clone(),
            sides: self
                .sides()
                .iter()
                .zip(points)
                .map(|(s, c)| SideJson {
                    vec: s.vector,
                    at_infinity: c.location == Location::AtInfinity,
                })
                .collect(),
        }
    }
}

fn convex_hull(points: &BTreeSet<LatticePoint>) -> Vec<LatticePoint> {
    let pts: Vec<LatticePoint> = points.iter().copied().collect();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn boundary_sides(polygon: &NewtonPolygon) -> Vec<Side> {
    polygon.sides()
}

pub fn genus(polygon: &NewtonPolygon) -> u64 {
    polygon.genus()
}

pub fn classify_compactification(polygon: &NewtonPolygon) -> Vec<CompactificationPoint> {
    polygon.compactification_points()
}

pub fn homology_rank(polygon: &NewtonPolygon) -> u64 {
    polygon.homology_rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorProfile {
    pub order: u64,
    pub trivial_local_system: bool,
}

/// Order of the differential operator and whether its leading coefficient is constant.
pub fn operator_profile(poly: &LaurentPolynomial) -> Result<OperatorProfile, LatticeError> {
    let support = poly.support();
    let order = support.iter().map(|m| m.b).max().ok_or(LatticeError::EmptySupport)?;
    if order < 1 {
        return Err(LatticeError::NoPDependence);
    }
    let top: Vec<_> = support.iter().filter(|m| m.b == order).collect();
    let trivial = top.len() == 1 && top[0].a == 0;
    Ok(OperatorProfile {
        order: order as u64,
        trivial_local_system: trivial,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideJson {
    pub vec: LatticePoint,
    pub at_infinity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<LatticePoint>,
    pub sides: Vec<SideJson>,
}
