//! SVG drawings of realized lunes in stereographic projection.

use std::fmt::Write;

use crate::combinatorics::{CombinatorialSubdivision, VertexClass};
use crate::realizer::Realization;
use crate::sphere::SpherePoint;
use crate::vec3::Vec3;

/// Samples per great-arc edge.
pub const ARC_SEGMENTS: usize = 64;

const SIZE: f64 = 640.0;

/// Projection from the point antipodal to the middle of the lune's equator,
/// onto the plane through the origin orthogonal to it.
struct Projection {
    center: Vec3,
    right: Vec3,
    up: Vec3,
    scale: f64,
}

impl Projection {
    fn new(delta: f64) -> Self {
        let (s, c) = (delta / 2.0).sin_cos();
        Projection {
            center: Vec3::new(c, s, 0.0),
            right: Vec3::new(-s, c, 0.0),
            up: Vec3::new(0.0, 0.0, 1.0),
            // the poles land at height ±1
            scale: SIZE * 0.42,
        }
    }

    fn map(&self, p: Vec3) -> (f64, f64) {
        let w = 1.0 + p.dot(self.center);
        let (x, y) = (p.dot(self.right) / w, p.dot(self.up) / w);
        (SIZE / 2.0 + self.scale * x, SIZE / 2.0 - self.scale * y)
    }
}

fn arc_points(a: SpherePoint, b: SpherePoint) -> impl Iterator<Item = Vec3> {
    (0..=ARC_SEGMENTS).map(move |i| {
        let t = i as f64 / ARC_SEGMENTS as f64;
        (a.vec() * (1.0 - t) + b.vec() * t)
            .normalized()
            .unwrap_or(a.vec())
    })
}

fn class_name(c: VertexClass) -> &'static str {
    match c {
        VertexClass::Pole => "pole",
        VertexClass::Side => "side",
        VertexClass::Full => "full",
        VertexClass::Hanging => "hanging",
    }
}

/// Draws `r` as an SVG document. Unverified layouts carry a watermark.
pub fn render_svg(s: &CombinatorialSubdivision, r: &Realization, verified: bool) -> String {
    let proj = Projection::new(r.delta);
    let pos = &r.positions;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !verified {
        let _ = writeln!(
            out,
            r##"<text class="watermark" x="{0}" y="{0}" font-size="56" fill="#d33" fill-opacity="0.18" text-anchor="middle" transform="rotate(-30 {0} {0})">not verified</text>"##,
            SIZE / 2.0
        );
    }
    let _ = writeln!(
        out,
        r#"<g class="edges" stroke="black" stroke-width="1.2" fill="none">"#
    );
    for (u, v) in s.edges() {
        let pts: Vec<String> = arc_points(pos[u], pos[v])
            .map(|p| {
                let (x, y) = proj.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline data-edge="{u}-{v}" points="{}"/>"#,
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="12" text-anchor="middle">"#
    );
    for (i, face) in s.faces().iter().enumerate() {
        let c = face
            .corners
            .iter()
            .fold(Vec3::ZERO, |acc, &v| acc + pos[v].vec())
            .normalized()
            .unwrap_or(Vec3::new(0.0, 0.0, 1.0));
        let (x, y) = proj.map(c);
        let _ = writeln!(
            out,
            r##"<text class="face-label" x="{x:.2}" y="{y:.2}" fill="#555">f{i}</text>"##
        );
    }
    let (pa, pb) = s.poles();
    for v in 0..s.num_vertices() {
        let (x, y) = proj.map(pos[v].vec());
        let class = class_name(s.class(v));
        let label = if v == pa {
            format!("A ({v})")
        } else if v == pb {
            format!("B ({v})")
        } else {
            format!("{v}")
        };
        let _ = writeln!(
            out,
            r#"<circle class="vertex {class}" cx="{x:.2}" cy="{y:.2}" r="4"/><text class="vertex-label" x="{x:.2}" y="{:.2}">{label}</text>"#,
            y - 8.0
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<style>.pole{{fill:#c00}}.side{{fill:#06c}}.full{{fill:#000}}.hanging{{fill:#fff;stroke:#000}}</style>"#
    );
    let _ = writeln!(out, "</svg>");
    out
}
