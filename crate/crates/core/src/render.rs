//! SVG pictures of Newton polygons and growth diagrams, DOT for graphs.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write;

use crate::bipartite::BipartiteGraph;
use crate::exact;
use crate::growth::GrowthDiagram;
use crate::lattice::NewtonPolygon;

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    )
}

/// Lattice grid, hull and boundary sides; sides at infinity drawn in red.
pub fn polygon_svg(polygon: &NewtonPolygon) -> String {
    let vs = polygon.vertices();
    let (amin, amax) = (
        vs.iter().map(|v| v.a).min().unwrap_or(0),
        vs.iter().map(|v| v.a).max().unwrap_or(0),
    );
    let (bmin, bmax) = (
        vs.iter().map(|v| v.b).min().unwrap_or(0),
        vs.iter().map(|v| v.b).max().unwrap_or(0),
    );
    let width = (amax - amin) as f64 * UNIT + 2.0 * MARGIN;
    let height = (bmax - bmin) as f64 * UNIT + 2.0 * MARGIN;
    let x = |a: i64| MARGIN + (a - amin) as f64 * UNIT;
    let y = |b: i64| height - MARGIN - (b - bmin) as f64 * UNIT;

    let mut s = header(width, height);
    for a in amin..=amax {
        for b in bmin..=bmax {
            let _ = writeln!(
                s,
                "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"1.5\" fill=\"#bbb\"/>",
                x(a),
                y(b)
            );
        }
    }
    let pts: Vec<String> = vs.iter().map(|v| format!("{:.1},{:.1}", x(v.a), y(v.b))).collect();
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"#eef\" stroke=\"none\"/>",
        pts.join(" ")
    );
    let infinite: BTreeSet<usize> = polygon
        .compactification_points()
        .iter()
        .filter(|c| c.location == crate::lattice::Location::AtInfinity)
        .map(|c| c.side)
        .collect();
    for (k, side) in polygon.sides().iter().enumerate() {
        let colour = if infinite.contains(&k) { "#c22" } else { "#226" };
        let _ = writeln!(
            s,
            "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{colour}\" stroke-width=\"2.5\"/>",
            x(side.from.a),
            y(side.from.b),
            x(side.to.a),
            y(side.to.b)
        );
    }
    for p in polygon.support() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#000\"/>",
            x(p.a),
            y(p.b)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Points on rings ordered by radius, at their phase, labelled by speed.
pub fn growth_svg(diagram: &GrowthDiagram) -> String {
    let mut radii: Vec<_> = diagram.points.iter().map(|p| p.radius.clone()).collect();
    radii.sort();
    radii.dedup();
    let ring = |r: &exact::Rational| 50.0 + 40.0 * radii.iter().position(|x| x == r).unwrap_or(0) as f64;
    let outer = 50.0 + 40.0 * radii.len() as f64;
    let size = 2.0 * (outer + MARGIN);
    let c = size / 2.0;

    let mut s = header(size, size);
    let _ = writeln!(
        s,
        "  <line x1=\"{:.1}\" y1=\"{c:.1}\" x2=\"{:.1}\" y2=\"{c:.1}\" stroke=\"#999\"/>",
        MARGIN,
        size - MARGIN
    );
    let _ = writeln!(s, "  <circle cx=\"{c:.1}\" cy=\"{c:.1}\" r=\"3\" fill=\"#000\"/>");
    for r in &radii {
        let _ = writeln!(
            s,
            "  <circle cx=\"{c:.1}\" cy=\"{c:.1}\" r=\"{:.1}\" fill=\"none\" stroke=\"#ddd\"/>",
            ring(r)
        );
    }
    for p in &diagram.points {
        let angle = TAU * exact::to_f64(&p.phase);
        let r = ring(&p.radius);
        let (px, py) = (c + r * angle.cos(), c - r * angle.sin());
        let _ = writeln!(s, "  <circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"5\" fill=\"#226\"/>");
        let _ = writeln!(
            s,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>",
            px + 7.0,
            py - 7.0,
            exact::to_string(&p.speed)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph; white vertices are labelled circles, black ones small dots.
pub fn graph_dot(graph: &BipartiteGraph) -> String {
    let mut s = String::from("graph bipartite {\n  layout=neato;\n  overlap=false;\n");
    for w in graph.white_labels() {
        let _ = writeln!(
            s,
            "  {} [shape=circle, style=filled, fillcolor=white, label={}];",
            quote(w),
            quote(w)
        );
    }
    for b in graph.black_labels() {
        let _ = writeln!(
            s,
            "  {} [shape=circle, style=filled, fillcolor=black, fontcolor=white, width=0.25, label={}];",
            quote(b),
            quote(b)
        );
    }
    for &(w, b) in graph.edges() {
        let _ = writeln!(
            s,
            "  {} -- {};",
            quote(&graph.white_labels()[w]),
            quote(&graph.black_labels()[b])
        );
    }
    s.push_str("}\n");
    s
}
