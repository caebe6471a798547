//! Counting identities, boundary and degree predicates, and constraint
//! selections for the enumerator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CombError, CombinatorialSubdivision, CountSignature, LuneSide, VertexClass};

/// All `(f, h, s)` with `2f + h + s = r`, `f ≥ 2`, `s ≥ 4`, `h ≥ 0`, sorted
/// lexicographically by `(f, h, s)`.
pub fn signature_solutions(r: usize) -> Vec<CountSignature> {
    let mut out = Vec::new();
    let mut f = 2;
    while 2 * f + 4 <= r {
        for h in 0..=(r - 2 * f - 4) {
            let s = r - 2 * f - h;
            out.push(CountSignature { r, f, h, s });
        }
        f += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountIdentityReport {
    pub v: usize,
    pub e: usize,
    pub r: usize,
    pub f: usize,
    pub h: usize,
    pub s: usize,
    /// `v − e + (r + 1) = 2`
    pub euler: bool,
    /// `2e − s − 2 = 3r + h`
    pub edge_count: bool,
    /// `r = 2f + h + s`
    pub face_count: bool,
}

impl CountIdentityReport {
    pub fn pass(&self) -> bool {
        self.euler && self.edge_count && self.face_count
    }
}

pub fn verify_count_identities(s: &CombinatorialSubdivision) -> CountIdentityReport {
    let sig = s.signature();
    let (v, e, r) = (s.num_vertices(), s.num_edges(), s.num_faces());
    CountIdentityReport {
        v,
        e,
        r,
        f: sig.f,
        h: sig.h,
        s: sig.s,
        euler: v + r + 1 == e + 2,
        edge_count: 2 * e == 3 * r + sig.h + sig.s + 2,
        face_count: r == 2 * sig.f + sig.h + sig.s,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub side_a: usize,
    pub side_b: usize,
    /// Boundary reads pole A, side A, pole B, side B counter-clockwise.
    pub order_ok: bool,
    pub deficient: Vec<LuneSide>,
    pub pass: bool,
}

/// At least two side vertices on each side of the lune.
pub fn verify_boundary(s: &CombinatorialSubdivision) -> BoundaryReport {
    let side_a = s.side_vertices(LuneSide::A).len();
    let side_b = s.side_vertices(LuneSide::B).len();
    let mut deficient = Vec::new();
    if side_a < 2 {
        deficient.push(LuneSide::A);
    }
    if side_b < 2 {
        deficient.push(LuneSide::B);
    }
    let (_, pole_b) = s.poles();
    let mut order_ok = true;
    let mut past_b = false;
    for &v in &s.boundary()[1..] {
        if v == pole_b {
            past_b = true;
            continue;
        }
        let want = if past_b { LuneSide::B } else { LuneSide::A };
        order_ok &= s.vertices()[v].side == Some(want);
    }
    BoundaryReport {
        side_a,
        side_b,
        order_ok,
        pass: deficient.is_empty() && order_ok,
        deficient,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeViolation {
    pub vertex: usize,
    pub class: VertexClass,
    pub degree: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub violations: Vec<DegreeViolation>,
    pub pass: bool,
}

impl DegreeReport {
    pub fn count_class(&self, class: VertexClass, degree: usize) -> usize {
        self.violations
            .iter()
            .filter(|v| v.class == class && v.degree == degree)
            .count()
    }
}

/// Minimum degree forced by acute angles.
pub fn required_degree(class: VertexClass) -> usize {
    match class {
        VertexClass::Pole => 2,
        VertexClass::Side | VertexClass::Hanging => 4,
        VertexClass::Full => 5,
    }
}

pub fn verify_degrees(s: &CombinatorialSubdivision) -> DegreeReport {
    degree_violations(s, true, true)
}

fn degree_violations(s: &CombinatorialSubdivision, full: bool, side_hanging: bool) -> DegreeReport {
    let violations: Vec<DegreeViolation> = s
        .vertices()
        .iter()
        .filter(|v| match v.class {
            VertexClass::Pole => true,
            VertexClass::Full => full,
            VertexClass::Side | VertexClass::Hanging => side_hanging,
        })
        .filter_map(|v| {
            let degree = s.degree(v.id);
            let required = required_degree(v.class);
            (degree < required).then_some(DegreeViolation {
                vertex: v.id,
                class: v.class,
                degree,
                required,
            })
        })
        .collect();
    DegreeReport {
        pass: violations.is_empty(),
        violations,
    }
}

/// Which structural predicates a candidate must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub triangular_faces: bool,
    pub boundary_two_per_side: bool,
    pub degree_bounds_full: bool,
    pub degree_bounds_side_hanging: bool,
    pub count_identity: bool,
}

impl ConstraintSet {
    pub const fn full() -> Self {
        Self {
            triangular_faces: true,
            boundary_two_per_side: true,
            degree_bounds_full: true,
            degree_bounds_side_hanging: true,
            count_identity: true,
        }
    }

    /// Counting identity, triangular faces and the full-vertex degree bound,
    /// with the side/hanging degree bound and the boundary count relaxed.
    pub const fn relaxed_figure1() -> Self {
        Self {
            triangular_faces: true,
            boundary_two_per_side: false,
            degree_bounds_full: true,
            degree_bounds_side_hanging: false,
            count_identity: true,
        }
    }

    /// Only the triangular-face restriction.
    pub const fn triangles_only() -> Self {
        Self {
            triangular_faces: true,
            boundary_two_per_side: false,
            degree_bounds_full: false,
            degree_bounds_side_hanging: false,
            count_identity: false,
        }
    }

    /// All 16 selections that keep triangular faces on.
    pub fn all_triangular() -> Vec<Self> {
        (0..16u8)
            .map(|m| Self {
                triangular_faces: true,
                boundary_two_per_side: m & 1 != 0,
                degree_bounds_full: m & 2 != 0,
                degree_bounds_side_hanging: m & 4 != 0,
                count_identity: m & 8 != 0,
            })
            .collect()
    }

    /// Whether any selected predicate distinguishes poles from side vertices.
    /// When none does, candidates differing only in where the poles sit are
    /// the same network.
    pub fn pole_sensitive(&self) -> bool {
        self.boundary_two_per_side || self.degree_bounds_side_hanging
    }

    /// `self` enforces at least everything `other` does.
    pub fn implies(&self, other: &ConstraintSet) -> bool {
        let le = |a: bool, b: bool| a || !b;
        le(self.triangular_faces, other.triangular_faces)
            && le(self.boundary_two_per_side, other.boundary_two_per_side)
            && le(self.degree_bounds_full, other.degree_bounds_full)
            && le(
                self.degree_bounds_side_hanging,
                other.degree_bounds_side_hanging,
            )
            && le(self.count_identity, other.count_identity)
    }

    /// Names of the selected predicates that `s` violates.
    pub fn violations(&self, s: &CombinatorialSubdivision) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.triangular_faces && !s.is_triangular() {
            out.push("triangular_faces");
        }
        if self.boundary_two_per_side && !verify_boundary(s).pass {
            out.push("boundary_two_per_side");
        }
        if self.degree_bounds_full && !degree_violations(s, true, false).pass {
            out.push("degree_bounds_full");
        }
        if self.degree_bounds_side_hanging && !degree_violations(s, false, true).pass {
            out.push("degree_bounds_side_hanging");
        }
        if self.count_identity {
            let sig = s.signature();
            if !(sig.satisfies_identity() && sig.f >= 2 && sig.s >= 4) {
                out.push("count_identity");
            }
        }
        out
    }

    pub fn is_satisfied(&self, s: &CombinatorialSubdivision) -> bool {
        self.violations(s).is_empty()
    }

    /// Key used to compare candidates under this selection: the pole-marked
    /// canonical code when poles matter, the network code otherwise.
    pub fn candidate_key(&self, s: &CombinatorialSubdivision) -> Vec<u8> {
        if self.pole_sensitive() {
            s.canonical_code()
        } else {
            s.network_code()
        }
    }
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self::full()
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::full() {
            return f.write_str("full");
        }
        if *self == Self::relaxed_figure1() {
            return f.write_str("relaxed-figure1");
        }
        let mut names = Vec::new();
        if self.triangular_faces {
            names.push("triangular");
        }
        if self.boundary_two_per_side {
            names.push("boundary");
        }
        if self.degree_bounds_full {
            names.push("degree-full");
        }
        if self.degree_bounds_side_hanging {
            names.push("degree-side-hanging");
        }
        if self.count_identity {
            names.push("count");
        }
        f.write_str(&names.join(","))
    }
}

impl FromStr for ConstraintSet {
    type Err = CombError;

    /// `full`, `relaxed-figure1`, `none`, or a comma list of `triangular`,
    /// `boundary`, `degree-full`, `degree-side-hanging`, `count`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "full" => return Ok(Self::full()),
            "relaxed-figure1" => return Ok(Self::relaxed_figure1()),
            "none" => return Ok(Self::triangles_only()),
            _ => {}
        }
        let mut c = ConstraintSet {
            triangular_faces: false,
            boundary_two_per_side: false,
            degree_bounds_full: false,
            degree_bounds_side_hanging: false,
            count_identity: false,
        };
        for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match name {
                "triangular" => c.triangular_faces = true,
                "boundary" => c.boundary_two_per_side = true,
                "degree-full" => c.degree_bounds_full = true,
                "degree-side-hanging" => c.degree_bounds_side_hanging = true,
                "count" => c.count_identity = true,
                other => {
                    return Err(CombError::UnsupportedConstraints(format!(
                        "unknown constraint '{other}'"
                    )))
                }
            }
        }
        Ok(c)
    }
}
