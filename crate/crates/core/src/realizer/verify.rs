use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::penalty::{check_shape, side_chains};
use super::{Realization, RealizeError};
use crate::combinatorics::{CombinatorialSubdivision, VertexClass};
use crate::sphere::{arc_length, ccw_angle_at, signed_triangle_area, SpherePoint};
use crate::vec3::Vec3;

/// Tolerance on angle sums around vertices.
pub const ANGLE_SUM_TOL: f64 = 1e-9;
/// Tolerance on the total face area against the lune area.
pub const AREA_SUM_TOL: f64 = 1e-7;
/// Tolerance on boundary vertices lying on their meridians.
pub const MERIDIAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    /// Poles, side vertices or `delta` off the lune parameterization.
    Parameterization,
    /// Coincident or antipodal points where an arc or angle is needed.
    Degenerate,
    CornerAngle,
    SideLength,
    ShortEdge,
    HangingOffArc,
    Orientation,
    AngleSum,
    AreaSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Lune,
    Vertex(usize),
    Edge(usize, usize),
    Face(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub element: Element,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub max_corner_angle: f64,
    pub max_side_length: f64,
    pub min_edge_length: f64,
    pub max_angle_sum_residual: f64,
    /// `Σ face areas − 2·delta`.
    pub area_sum_residual: f64,
}

impl VerificationReport {
    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// Distance from `p` to the half-plane of the meridian at longitude `lon`.
fn meridian_distance(p: SpherePoint, lon: f64) -> f64 {
    let (s, c) = lon.sin_cos();
    let normal = Vec3::new(-s, c, 0.0);
    let toward = Vec3::new(c, s, 0.0);
    let v = p.vec();
    let off = v.dot(normal).abs().min(1.0).asin();
    if v.dot(toward) < -MERIDIAN_TOL {
        off.max(PI / 2.0)
    } else {
        off
    }
}

/// Checks `r` as a realization of `s` with strict margin `eps`.
pub fn verify_realization(
    s: &CombinatorialSubdivision,
    r: &Realization,
    eps: f64,
) -> Result<VerificationReport, RealizeError> {
    check_shape(s, r)?;
    let pos = &r.positions;
    let mut violations = Vec::new();
    let mut push = |code, element, value| {
        violations.push(Violation {
            code,
            element,
            value,
        })
    };

    // parameterization
    if !(r.delta > 0.0 && r.delta < FRAC_PI_2) {
        push(ViolationCode::Parameterization, Element::Lune, r.delta);
    }
    let (pa, pb) = s.poles();
    for (v, target) in [(pa, SpherePoint::NORTH), (pb, SpherePoint::SOUTH)] {
        let d = pos[v].vec().distance(target.vec());
        if d > MERIDIAN_TOL {
            push(ViolationCode::Parameterization, Element::Vertex(v), d);
        }
    }
    for (chain, lon) in side_chains(s).iter().zip([0.0, r.delta]) {
        for &v in &chain[1..chain.len() - 1] {
            let d = meridian_distance(pos[v], lon);
            if d > MERIDIAN_TOL {
                push(ViolationCode::Parameterization, Element::Vertex(v), d);
            }
        }
        for w in chain.windows(2) {
            let gap = pos[w[1]].colatitude() - pos[w[0]].colatitude();
            if gap <= 0.0 {
                push(
                    ViolationCode::Parameterization,
                    Element::Edge(w[0], w[1]),
                    gap,
                );
            }
        }
    }

    // (1) corner angles, (5) angle sums
    let n = s.num_vertices();
    let mut angle_sum = vec![0.0; n];
    let mut owner_angle = vec![None; n];
    let mut max_corner = 0.0f64;
    for (fi, face) in s.faces().iter().enumerate() {
        for &v in &face.walk {
            let (prev, next) = face.walk_neighbors(v).expect("on walk");
            let a = match ccw_angle_at(pos[v], pos[next], pos[prev]) {
                Ok(a) => a,
                Err(_) => {
                    push(ViolationCode::Degenerate, Element::Face(fi), 0.0);
                    continue;
                }
            };
            angle_sum[v] += a;
            if face.is_corner(v) {
                max_corner = max_corner.max(a);
                if a >= FRAC_PI_2 - eps {
                    push(ViolationCode::CornerAngle, Element::Face(fi), a);
                }
            } else {
                owner_angle[v] = Some(a);
            }
        }
    }

    // (2) lengths
    let mut max_side = 0.0f64;
    let mut min_edge = f64::INFINITY;
    for (u, v) in s.edges() {
        match arc_length(pos[u], pos[v]) {
            Ok(l) => {
                min_edge = min_edge.min(l);
                max_side = max_side.max(l);
                if l <= eps {
                    push(ViolationCode::ShortEdge, Element::Edge(u, v), l);
                }
                if l >= FRAC_PI_2 - eps {
                    push(ViolationCode::SideLength, Element::Edge(u, v), l);
                }
            }
            Err(_) => push(ViolationCode::Degenerate, Element::Edge(u, v), 0.0),
        }
    }
    for face in s.faces() {
        for side in face.sides().iter().filter(|side| side.len() > 2) {
            let (u, v) = (side[0], side[side.len() - 1]);
            match arc_length(pos[u], pos[v]) {
                Ok(l) => {
                    max_side = max_side.max(l);
                    if l >= FRAC_PI_2 - eps {
                        push(ViolationCode::SideLength, Element::Edge(u, v), l);
                    }
                }
                Err(_) => push(ViolationCode::Degenerate, Element::Edge(u, v), 0.0),
            }
        }
    }

    // (3) hanging vertices on the arc between their owner-side neighbours
    for (&h, &f) in s.hanging_owner() {
        let (u, w) = s.faces()[f].walk_neighbors(h).expect("owner walk");
        let (pu, pw, ph) = (pos[u].vec(), pos[w].vec(), pos[h].vec());
        let off = match pu.cross(pw).normalized() {
            Some(nrm) => {
                let d = ph.dot(nrm).abs().min(1.0).asin();
                let chord = pu.dot(pw);
                let between = ph.dot(pu) > chord && ph.dot(pw) > chord;
                if between {
                    d
                } else {
                    d.max(eps + 1.0)
                }
            }
            None => f64::INFINITY,
        };
        if off > eps.max(MERIDIAN_TOL) {
            push(ViolationCode::HangingOffArc, Element::Vertex(h), off);
        }
    }

    // (4) orientation
    for (fi, face) in s.faces().iter().enumerate() {
        let c = &face.corners;
        let area: f64 = (1..c.len() - 1)
            .map(|i| signed_triangle_area(pos[c[0]], pos[c[i]], pos[c[i + 1]]))
            .sum();
        if area <= 0.0 {
            push(ViolationCode::Orientation, Element::Face(fi), area);
        }
    }

    // (5) angle sums
    let mut max_residual = 0.0f64;
    for v in 0..n {
        let target = match s.class(v) {
            VertexClass::Pole => r.delta,
            VertexClass::Side => PI,
            VertexClass::Full | VertexClass::Hanging => 2.0 * PI,
        };
        let mut res = (angle_sum[v] - target).abs();
        if s.class(v) == VertexClass::Hanging {
            let owner = owner_angle[v].map_or(f64::INFINITY, |a| (a - PI).abs());
            res = res.max(owner);
        }
        max_residual = max_residual.max(res);
        if res > ANGLE_SUM_TOL {
            push(ViolationCode::AngleSum, Element::Vertex(v), res);
        }
    }

    // (6) total area, fanned over each walk
    let total: f64 = s
        .faces()
        .iter()
        .map(|f| {
            let w = &f.walk;
            (1..w.len() - 1)
                .map(|i| signed_triangle_area(pos[w[0]], pos[w[i]], pos[w[i + 1]]))
                .sum::<f64>()
        })
        .sum();
    let area_residual = total - 2.0 * r.delta;
    if area_residual.abs() > AREA_SUM_TOL {
        push(ViolationCode::AreaSum, Element::Lune, area_residual);
    }

    Ok(VerificationReport {
        pass: violations.is_empty(),
        violations,
        max_corner_angle: max_corner,
        max_side_length: max_side,
        min_edge_length: min_edge,
        max_angle_sum_residual: max_residual,
        area_sum_residual: area_residual,
    })
}
