use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::{Realization, RealizeError};
use crate::combinatorics::{CombinatorialSubdivision, LuneSide};
use crate::sphere::{arc_length_unchecked, signed_triangle_area, SpherePoint};
use crate::vec3::Vec3;

/// Bounds on the free lune angle.
pub const DELTA_MIN: f64 = 0.05;
pub const DELTA_MAX: f64 = FRAC_PI_2 - 0.01;

/// Thresholds of the penalty terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub margin: f64,
    pub angle_min: f64,
    pub len_min: f64,
    pub area_min: f64,
}

impl PenaltyWeights {
    pub fn nominal(margin: f64) -> Self {
        PenaltyWeights {
            margin,
            angle_min: 0.05,
            len_min: 0.05,
            area_min: 1e-4,
        }
    }

    /// Tighter thresholds used while optimizing, so that a minimizer of the
    /// working penalty sits strictly inside the nominal feasible set.
    pub(crate) fn working(margin: f64) -> Self {
        let n = Self::nominal(margin);
        PenaltyWeights {
            margin: n.margin + 0.01,
            angle_min: n.angle_min + 0.01,
            len_min: n.len_min + 0.01,
            area_min: 2.0 * n.area_min,
        }
    }
}

/// Per-term contributions; each is a sum of squared violations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PenaltyBreakdown {
    /// Corner angles above `π/2 − margin`.
    pub corner_max: f64,
    /// Corner angles below `angle_min`.
    pub corner_min: f64,
    /// Edges outside `[len_min, π/2 − margin]` and side vertices out of order.
    pub edge_length: f64,
    /// Faces with area below `area_min`, including negatively oriented ones.
    pub orientation: f64,
    /// Squared bend of hanging vertices inside their owner faces.
    pub hanging: f64,
    /// Lune angle outside its admissible range.
    pub delta: f64,
}

impl PenaltyBreakdown {
    pub fn total(&self) -> f64 {
        self.corner_max
            + self.corner_min
            + self.edge_length
            + self.orientation
            + self.hanging
            + self.delta
    }
}

#[inline]
fn hinge(x: f64) -> f64 {
    if x > 0.0 {
        x * x
    } else {
        0.0
    }
}

/// Counter-clockwise angle at `v` from the arc towards `next` to the arc
/// towards `prev`; this is the interior angle of a counter-clockwise face.
/// Degenerate configurations give 0.
pub(crate) fn interior_angle(v: Vec3, next: Vec3, prev: Vec3) -> f64 {
    let t1 = next - v * v.dot(next);
    let t2 = prev - v * v.dot(prev);
    if t1.norm_squared() < 1e-30 || t2.norm_squared() < 1e-30 {
        return 0.0;
    }
    let a = t1.cross(t2).dot(v).atan2(t1.dot(t2));
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

pub(crate) fn check_shape(
    s: &CombinatorialSubdivision,
    r: &Realization,
) -> Result<(), RealizeError> {
    if r.positions.len() != s.num_vertices() {
        return Err(RealizeError::ParameterMismatch(format!(
            "{} positions for {} vertices",
            r.positions.len(),
            s.num_vertices()
        )));
    }
    if !r.delta.is_finite() {
        return Err(RealizeError::ParameterMismatch(
            "delta is not finite".into(),
        ));
    }
    Ok(())
}

/// Boundary chains from pole A to pole B along each side.
pub(crate) fn side_chains(s: &CombinatorialSubdivision) -> [Vec<usize>; 2] {
    let (a, b) = s.poles();
    let mut side_a = vec![a];
    side_a.extend(s.side_vertices(LuneSide::A));
    side_a.push(b);
    let mut side_b = vec![a];
    side_b.extend(s.side_vertices(LuneSide::B).into_iter().rev());
    side_b.push(b);
    [side_a, side_b]
}

/// Squared-hinge penalty of `r` against the acuteness constraints. The total
/// is zero exactly when every constraint holds.
pub fn penalty(
    s: &CombinatorialSubdivision,
    r: &Realization,
    margin: f64,
) -> Result<(f64, PenaltyBreakdown), RealizeError> {
    check_shape(s, r)?;
    let b = penalty_with(s, r, &PenaltyWeights::nominal(margin));
    Ok((b.total(), b))
}

pub(crate) fn penalty_with(
    s: &CombinatorialSubdivision,
    r: &Realization,
    w: &PenaltyWeights,
) -> PenaltyBreakdown {
    let p = |v: usize| r.positions[v].vec();
    let max_angle = FRAC_PI_2 - w.margin;
    let mut out = PenaltyBreakdown::default();

    for face in s.faces() {
        for &c in &face.corners {
            let (prev, next) = face.walk_neighbors(c).expect("corner on walk");
            let a = interior_angle(p(c), p(next), p(prev));
            out.corner_max += hinge(a - max_angle);
            out.corner_min += hinge(w.angle_min - a);
        }
        for side in face.sides() {
            let (u, v) = (side[0], side[side.len() - 1]);
            if side.len() > 2 {
                let l = arc_length_unchecked(r.positions[u], r.positions[v]);
                out.edge_length += hinge(l - max_angle);
            }
        }
        let area = corner_area(face.corners.as_slice(), &r.positions);
        out.orientation += hinge(w.area_min - area);
    }

    for (u, v) in s.edges() {
        let l = arc_length_unchecked(r.positions[u], r.positions[v]);
        out.edge_length += hinge(w.len_min - l) + hinge(l - max_angle);
    }
    for chain in side_chains(s) {
        for pair in chain.windows(2) {
            let gap = r.positions[pair[1]].colatitude() - r.positions[pair[0]].colatitude();
            out.edge_length += hinge(w.len_min - gap);
        }
    }

    for (&h, &f) in s.hanging_owner() {
        let (prev, next) = s.faces()[f].walk_neighbors(h).expect("owner walk");
        let dev = PI - interior_angle(p(h), p(next), p(prev));
        out.hanging += dev * dev;
    }

    out.delta = hinge(DELTA_MIN - r.delta) + hinge(r.delta - DELTA_MAX);
    out
}

/// Signed area of the polygon on `corners`, fanned from the first corner.
pub(crate) fn corner_area(corners: &[usize], pos: &[SpherePoint]) -> f64 {
    let c0 = pos[corners[0]];
    corners[1..]
        .windows(2)
        .map(|w| signed_triangle_area(c0, pos[w[0]], pos[w[1]]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{Face, Vertex, VertexClass};

    /// A lune of angle `delta` cut by one interior vertex on the equator
    /// into four faces: two pole triangles and two side triangles.
    fn star() -> CombinatorialSubdivision {
        use LuneSide::*;
        use VertexClass::*;
        let v = |id, class, side| Vertex { id, class, side };
        CombinatorialSubdivision::new(
            vec![
                v(0, Pole, None),
                v(1, Side, Some(A)),
                v(2, Pole, None),
                v(3, Side, Some(B)),
                v(4, Full, None),
            ],
            vec![
                Face::triangle(0, 1, 4),
                Face::triangle(1, 2, 4),
                Face::triangle(2, 3, 4),
                Face::triangle(3, 0, 4),
            ],
            Default::default(),
        )
        .unwrap()
    }

    #[test]
    fn interior_angle_of_octant() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        let z = Vec3::new(0.0, 0.0, 1.0);
        // x, y, z is counter-clockwise seen from outside
        assert!((interior_angle(x, y, z) - FRAC_PI_2).abs() < 1e-15);
        assert!((interior_angle(x, z, y) - 3.0 * FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn octant_corners_pay_the_margin() {
        let s = star();
        let delta = FRAC_PI_2 - 0.2;
        let r = Realization {
            delta,
            positions: vec![
                SpherePoint::NORTH,
                SpherePoint::from_lon_colat(0.0, FRAC_PI_2),
                SpherePoint::SOUTH,
                SpherePoint::from_lon_colat(delta, FRAC_PI_2),
                SpherePoint::from_lon_colat(delta / 2.0, FRAC_PI_2),
            ],
        };
        let (_, b) = penalty(&s, &r, 0.01).unwrap();
        // the equatorial corners are right angles, eight of them
        let expected = 8.0 * 0.01f64.powi(2);
        assert!((b.corner_max - expected).abs() < 1e-12, "{b:?}");
        assert_eq!(b.orientation, 0.0);
        assert_eq!(b.hanging, 0.0);
    }

    #[test]
    fn flipped_face_costs_orientation() {
        let s = star();
        let delta = 1.0;
        let mut r = Realization {
            delta,
            positions: vec![
                SpherePoint::NORTH,
                SpherePoint::from_lon_colat(0.0, 1.4),
                SpherePoint::SOUTH,
                SpherePoint::from_lon_colat(delta, 1.7),
                SpherePoint::from_lon_colat(0.5, 1.55),
            ],
        };
        assert_eq!(penalty(&s, &r, 0.0).unwrap().1.orientation, 0.0);
        r.positions[4] = SpherePoint::from_lon_colat(-0.3, 1.55);
        assert!(penalty(&s, &r, 0.0).unwrap().1.orientation > 0.0);
    }

    #[test]
    fn wrong_vertex_count_is_rejected() {
        let r = Realization {
            delta: 1.0,
            positions: vec![SpherePoint::NORTH],
        };
        assert!(matches!(
            penalty(&star(), &r, 0.01),
            Err(RealizeError::ParameterMismatch(_))
        ));
    }
}
