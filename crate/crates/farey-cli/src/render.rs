//! SVG renderer for the Farey tessellation in the disk model.
//!
//! Vertices are slopes placed on the unit circle by the Cayley transform
//! of the upper half plane (`x = p/q` on the real line, `1/0` at the point
//! `(1, 0)`); edges are geodesics, drawn as polyline approximations of the
//! circular arcs orthogonal to the boundary. Output is deterministic:
//! vertices and edges are kept in sorted order and floats are printed with
//! fixed precision, so golden-file comparisons are byte-exact.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use farey_core::Slope;
use num_traits::ToPrimitive;

/// Default cap on the mediant recursion depth.
pub const MAX_DEPTH: u32 = 10;

const SIZE: f64 = 800.0;
const RADIUS: f64 = 380.0;
const ARC_SEGMENTS: usize = 24;

/// Triangle frontier expansion by mediants.
///
/// Depth 0 is the base triangle `0/1, 1/0, 1/1`; each further step
/// reflects every frontier triangle across its outward edges, labeling the
/// new vertex by the mediant (vector sum or difference) of the edge's
/// endpoints. Returns the vertex set and edge set, both sorted.
pub fn tessellation(depth: u32) -> (Vec<Slope>, Vec<(Slope, Slope)>) {
    let base = [
        Slope::zero(),
        Slope::infinity(),
        Slope::integer(1),
    ];
    let mut edges: BTreeSet<(Slope, Slope)> = BTreeSet::new();
    let mut add_edge = |a: &Slope, b: &Slope| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        edges.insert((a.clone(), b.clone()));
    };
    add_edge(&base[0], &base[1]);
    add_edge(&base[1], &base[2]);
    add_edge(&base[0], &base[2]);

    // frontier entries: (edge endpoints, opposite vertex of the triangle)
    let mut frontier: Vec<(Slope, Slope, Slope)> = vec![
        (base[0].clone(), base[1].clone(), base[2].clone()),
        (base[1].clone(), base[2].clone(), base[0].clone()),
        (base[0].clone(), base[2].clone(), base[1].clone()),
    ];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (a, b, c) in frontier {
            let m = mediant_away_from(&a, &b, &c);
            add_edge(&a, &m);
            add_edge(&b, &m);
            next.push((a.clone(), m.clone(), b.clone()));
            next.push((b.clone(), m.clone(), a.clone()));
        }
        frontier = next;
    }

    let mut vertices: BTreeSet<Slope> = BTreeSet::new();
    for (a, b) in &edges {
        vertices.insert(a.clone());
        vertices.insert(b.clone());
    }
    (vertices.into_iter().collect(), edges.into_iter().collect())
}

/// The mediant of `a` and `b` on the far side of edge `(a, b)` from `c`:
/// the vector sum or difference, whichever is not `c`.
fn mediant_away_from(a: &Slope, b: &Slope, c: &Slope) -> Slope {
    let sum = Slope::new(a.x() + b.x(), a.y() + b.y()).expect("mediant of a Farey edge");
    if &sum != c {
        sum
    } else {
        Slope::new(a.x() - b.x(), a.y() - b.y()).expect("mediant of a Farey edge")
    }
}

fn boundary_point(s: &Slope) -> (f64, f64) {
    // Cayley transform of x = p/q; 1/0 lands at (1, 0)
    let q = s.q().to_f64().unwrap_or(0.0);
    let p = s.p().to_f64().unwrap_or(0.0);
    if q == 0.0 {
        return (1.0, 0.0);
    }
    let x = p / q;
    let d = x * x + 1.0;
    ((x * x - 1.0) / d, -2.0 * x / d)
}

fn to_screen(p: (f64, f64)) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * p.0, SIZE / 2.0 - RADIUS * p.1)
}

/// Samples the hyperbolic geodesic between two boundary points.
fn geodesic_points(a: (f64, f64), b: (f64, f64)) -> Vec<(f64, f64)> {
    let det = a.0 * b.1 - a.1 * b.0;
    if det.abs() < 1e-9 {
        // antipodal (or equal) endpoints: the geodesic is a diameter
        return vec![a, b];
    }
    // center c of the circle through a and b orthogonal to the unit
    // circle solves c·a = 1, c·b = 1
    let cx = (b.1 - a.1) / det;
    let cy = (a.0 - b.0) / det;
    let r = (cx * cx + cy * cy - 1.0).sqrt();
    let a0 = (a.1 - cy).atan2(a.0 - cx);
    let a1 = (b.1 - cy).atan2(b.0 - cx);
    let mut delta = a1 - a0;
    while delta > core::f64::consts::PI {
        delta -= 2.0 * core::f64::consts::PI;
    }
    while delta < -core::f64::consts::PI {
        delta += 2.0 * core::f64::consts::PI;
    }
    (0..=ARC_SEGMENTS)
        .map(|i| {
            let t = a0 + delta * (i as f64) / (ARC_SEGMENTS as f64);
            (cx + r * t.cos(), cy + r * t.sin())
        })
        .collect()
}

fn fmt_pt(p: (f64, f64)) -> String {
    let s = to_screen(p);
    format!("{:.3},{:.3}", s.0, s.1)
}

/// Renders the tessellation to an SVG document.
///
/// `highlight` slopes are drawn as marked, labeled vertices (they need not
/// be vertices of the recursion).
pub fn render_farey(depth: u32, highlight: &[Slope]) -> Result<String> {
    if depth > MAX_DEPTH {
        bail!("depth {} exceeds the configured maximum {}", depth, MAX_DEPTH);
    }
    let (_, edges) = tessellation(depth);
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        SIZE as u64
    )?;
    writeln!(
        svg,
        "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{:.1}\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>",
        SIZE / 2.0,
        SIZE / 2.0,
        RADIUS
    )?;
    for (a, b) in &edges {
        let pts = geodesic_points(boundary_point(a), boundary_point(b));
        let path: Vec<String> = pts.into_iter().map(fmt_pt).collect();
        writeln!(
            svg,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1\"/>",
            path.join(" ")
        )?;
    }
    let mut sorted: Vec<&Slope> = highlight.iter().collect();
    sorted.sort();
    sorted.dedup();
    for h in sorted {
        let p = boundary_point(h);
        let (sx, sy) = to_screen(p);
        writeln!(
            svg,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"5\" fill=\"#c00\"/>",
            sx, sy
        )?;
        let (lx, ly) = (
            SIZE / 2.0 + (RADIUS + 22.0) * p.0,
            SIZE / 2.0 - (RADIUS + 22.0) * p.1,
        );
        writeln!(
            svg,
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"14\" text-anchor=\"middle\" fill=\"#c00\">{}</text>",
            lx, ly, h
        )?;
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}
