//! Tetrahedra, tilings of a tetrahedron by tetrahedra, and the spherical
//! link of a tiling around a point.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sphere::{angle_at, signed_triangle_area, SpherePoint};
use crate::vec3::Vec3;

/// Relative tolerance for volumes and similarity.
pub const REL_TOL: f64 = 1e-9;
/// Default margin for acuteness classification.
pub const ACUTE_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TetraError {
    #[error("tetrahedron {0} is degenerate")]
    DegenerateTetrahedron(String),
    #[error("no tile touches the point")]
    NoIncidentTile,
    #[error("tiling check failed: {0}")]
    InvalidTiling(String),
    #[error("bound argument must be at least 2, got {0}")]
    InvalidBound(usize),
    #[error("invalid tiling JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// The six edges as vertex index pairs.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 3]; 4]", into = "[[f64; 3]; 4]")]
pub struct Tetrahedron {
    pub v: [Vec3; 4],
}

impl From<[[f64; 3]; 4]> for Tetrahedron {
    fn from(a: [[f64; 3]; 4]) -> Self {
        Tetrahedron {
            v: a.map(Vec3::from),
        }
    }
}

impl From<Tetrahedron> for [[f64; 3]; 4] {
    fn from(t: Tetrahedron) -> Self {
        t.v.map(Vec3::to_array)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DihedralAngle {
    pub edge: (usize, usize),
    pub angle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetAngle {
    /// Index of the vertex opposite the facet.
    pub facet: usize,
    pub vertex: usize,
    pub angle: f64,
    pub flagged: bool,
}

impl Tetrahedron {
    pub fn new(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Self {
        Tetrahedron::from([a, b, c, d])
    }

    pub fn signed_volume(&self) -> f64 {
        let [a, b, c, d] = self.v;
        Vec3::triple(b - a, c - a, d - a) / 6.0
    }

    pub fn volume(&self) -> f64 {
        self.signed_volume().abs()
    }

    fn raw_diameter(&self) -> f64 {
        EDGES
            .iter()
            .map(|&(i, j)| self.v[i].distance(self.v[j]))
            .fold(0.0, f64::max)
    }

    pub fn check(&self) -> Result<(), TetraError> {
        let d = self.raw_diameter();
        let ok = self
            .v
            .iter()
            .all(|p| p.to_array().iter().all(|x| x.is_finite()))
            && d > 0.0
            && self.volume() > 1e-12 * d.powi(3);
        if ok {
            Ok(())
        } else {
            Err(TetraError::DegenerateTetrahedron(format!("{:?}", self.v)))
        }
    }

    /// Longest edge length.
    pub fn diameter(&self) -> Result<f64, TetraError> {
        self.check()?;
        Ok(self.raw_diameter())
    }

    /// Vertex pair of a longest edge; the first in [`EDGES`] order on ties.
    pub fn longest_edge(&self) -> (usize, usize) {
        let mut best = EDGES[0];
        for &(i, j) in &EDGES[1..] {
            if self.v[i].distance(self.v[j]) > self.v[best.0].distance(self.v[best.1]) {
                best = (i, j);
            }
        }
        best
    }

    /// Interior dihedral angle along each edge, in [`EDGES`] order.
    pub fn dihedral_angles(&self) -> Result<[DihedralAngle; 6], TetraError> {
        self.check()?;
        Ok(EDGES.map(|(i, j)| {
            let (k, l) = other_two(i, j);
            let e = (self.v[j] - self.v[i])
                .normalized()
                .expect("non-degenerate");
            let perp = |p: Vec3| {
                let w = p - self.v[i];
                w - e * w.dot(e)
            };
            let (a, b) = (perp(self.v[k]), perp(self.v[l]));
            DihedralAngle {
                edge: (i, j),
                angle: a.cross(b).norm().atan2(a.dot(b)),
            }
        }))
    }

    pub fn is_acute(&self) -> Result<bool, TetraError> {
        self.is_acute_with(ACUTE_EPS)
    }

    pub fn is_acute_with(&self, eps: f64) -> Result<bool, TetraError> {
        Ok(self
            .dihedral_angles()?
            .iter()
            .all(|d| d.angle < FRAC_PI_2 - eps))
    }

    /// The twelve planar angles of the four facets; right or obtuse ones are
    /// flagged.
    pub fn facet_acuteness(&self) -> Result<Vec<FacetAngle>, TetraError> {
        self.check()?;
        let mut out = Vec::with_capacity(12);
        for facet in 0..4 {
            let idx: Vec<usize> = (0..4).filter(|&x| x != facet).collect();
            for (n, &v) in idx.iter().enumerate() {
                let a = self.v[idx[(n + 1) % 3]] - self.v[v];
                let b = self.v[idx[(n + 2) % 3]] - self.v[v];
                let angle = a.cross(b).norm().atan2(a.dot(b));
                out.push(FacetAngle {
                    facet,
                    vertex: v,
                    angle,
                    flagged: angle >= FRAC_PI_2,
                });
            }
        }
        Ok(out)
    }

    /// Sorted edge lengths.
    pub fn edge_sextuple(&self) -> [f64; 6] {
        let mut e = EDGES.map(|(i, j)| self.v[i].distance(self.v[j]));
        e.sort_by(f64::total_cmp);
        e
    }

    /// Unit outward normal and offset of the facet opposite `k`, so that
    /// `n·x − d` is the signed distance (positive outside).
    fn facet_plane(&self, k: usize) -> (Vec3, f64) {
        let idx: Vec<usize> = (0..4).filter(|&x| x != k).collect();
        let (a, b, c) = (self.v[idx[0]], self.v[idx[1]], self.v[idx[2]]);
        let mut n = (b - a).cross(c - a).normalized().expect("non-degenerate");
        if n.dot(self.v[k] - a) > 0.0 {
            n = -n;
        }
        (n, n.dot(a))
    }

    pub fn transformed(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        Tetrahedron { v: self.v.map(f) }
    }
}

fn other_two(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// Parent tetrahedron subdivided into tiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetTiling {
    pub parent: Tetrahedron,
    pub tiles: Vec<Tetrahedron>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub pass: bool,
    pub tile_count: usize,
    /// Tiles with a vertex outside the parent.
    pub outside: Vec<usize>,
    /// `(Σ tile volumes − parent volume) / parent volume`.
    pub volume_residual: f64,
    /// Pairs with positive intersection volume, with that volume.
    pub overlapping: Vec<(usize, usize, f64)>,
}

/// Containment, volume and disjointness checks.
pub fn verify_tiling(t: &TetTiling) -> Result<TilingReport, TetraError> {
    t.parent.check()?;
    for tile in &t.tiles {
        tile.check()?;
    }
    let diam = t.parent.raw_diameter();
    let tol = 1e-9 * diam;
    let planes: Vec<(Vec3, f64)> = (0..4).map(|k| t.parent.facet_plane(k)).collect();
    let outside: Vec<usize> = t
        .tiles
        .iter()
        .enumerate()
        .filter(|(_, tile)| {
            tile.v
                .iter()
                .any(|p| planes.iter().any(|&(n, d)| n.dot(*p) - d > tol))
        })
        .map(|(i, _)| i)
        .collect();
    let pv = t.parent.volume();
    let sum: f64 = t.tiles.iter().map(Tetrahedron::volume).sum();
    let volume_residual = (sum - pv) / pv;
    let mut overlapping = Vec::new();
    for i in 0..t.tiles.len() {
        for j in i + 1..t.tiles.len() {
            let v = intersection_volume(&t.tiles[i], &t.tiles[j]);
            if v > REL_TOL * pv {
                overlapping.push((i, j, v));
            }
        }
    }
    Ok(TilingReport {
        pass: t.tiles.len() >= 2
            && outside.is_empty()
            && volume_residual.abs() <= REL_TOL
            && overlapping.is_empty(),
        tile_count: t.tiles.len(),
        outside,
        volume_residual,
        overlapping,
    })
}

/// Volume of the intersection of two tetrahedra, by clipping one against the
/// facet planes of the other.
pub fn intersection_volume(a: &Tetrahedron, b: &Tetrahedron) -> f64 {
    let mut poly: Vec<Vec<Vec3>> = (0..4)
        .map(|k| (0..4).filter(|&x| x != k).map(|x| a.v[x]).collect())
        .collect();
    let scale = a.raw_diameter().max(b.raw_diameter());
    for k in 0..4 {
        let (n, d) = b.facet_plane(k);
        poly = clip(poly, n, d, 1e-12 * scale);
        if poly.is_empty() {
            return 0.0;
        }
    }
    convex_volume(&poly)
}

/// Keeps the part of a convex polyhedron (as facet polygons) with
/// `n·x ≤ d`.
fn clip(faces: Vec<Vec<Vec3>>, n: Vec3, d: f64, tol: f64) -> Vec<Vec<Vec3>> {
    let side = |p: &Vec3| n.dot(*p) - d;
    let all = || faces.iter().flatten();
    if all().all(|p| side(p) <= tol) {
        return faces;
    }
    if all().all(|p| side(p) >= -tol) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cut = Vec::new();
    for face in faces {
        let mut kept = Vec::new();
        let k = face.len();
        for i in 0..k {
            let (p, q) = (face[i], face[(i + 1) % k]);
            let (sp, sq) = (n.dot(p) - d, n.dot(q) - d);
            if sp <= tol {
                kept.push(p);
                if sp.abs() <= tol {
                    cut.push(p);
                }
            }
            if (sp > tol && sq < -tol) || (sp < -tol && sq > tol) {
                let x = p + (q - p) * (sp / (sp - sq));
                kept.push(x);
                cut.push(x);
            }
        }
        if kept.len() >= 3 {
            out.push(kept);
        }
    }
    let mut unique: Vec<Vec3> = Vec::new();
    for p in cut {
        if !unique.iter().any(|q| q.distance(p) <= tol) {
            unique.push(p);
        }
    }
    if unique.len() >= 3 {
        out.push(order_in_plane(unique, n));
    }
    out
}

fn order_in_plane(mut pts: Vec<Vec3>, n: Vec3) -> Vec<Vec3> {
    let c = pts.iter().fold(Vec3::ZERO, |s, &p| s + p) * (1.0 / pts.len() as f64);
    let u = pts
        .iter()
        .map(|&p| p - c)
        .find(|w| w.norm() > 0.0)
        .and_then(Vec3::normalized);
    let Some(u) = u else { return pts };
    let w = n.cross(u);
    pts.sort_by(|&p, &q| {
        let ap = (p - c).dot(w).atan2((p - c).dot(u));
        let aq = (q - c).dot(w).atan2((q - c).dot(u));
        ap.total_cmp(&aq)
    });
    pts
}

fn convex_volume(faces: &[Vec<Vec3>]) -> f64 {
    let pts: Vec<Vec3> = faces.iter().flatten().copied().collect();
    let c = pts.iter().fold(Vec3::ZERO, |s, &p| s + p) * (1.0 / pts.len() as f64);
    faces
        .iter()
        .map(|f| {
            (1..f.len() - 1)
                .map(|i| Vec3::triple(f[0] - c, f[i] - c, f[i + 1] - c).abs() / 6.0)
                .sum::<f64>()
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub tiling: TilingReport,
    /// Tiles whose shape differs from the parent's.
    pub dissimilar: Vec<usize>,
    /// Distinct tile sizes, as ratios of tile to parent diameter.
    pub scales: Vec<f64>,
    pub pass: bool,
}

fn proportional(a: &[f64; 6], b: &[f64; 6]) -> bool {
    let (sa, sb) = (a[5], b[5]);
    a.iter()
        .zip(b)
        .all(|(x, y)| (x / sa - y / sb).abs() <= REL_TOL)
}

fn similarity(t: &TetTiling, congruent: bool) -> Result<SimilarityReport, TetraError> {
    let tiling = verify_tiling(t)?;
    if !tiling.pass {
        return Err(TetraError::InvalidTiling(format!("{tiling:?}")));
    }
    let p = t.parent.edge_sextuple();
    let dissimilar: Vec<usize> = t
        .tiles
        .iter()
        .enumerate()
        .filter(|(_, tile)| !proportional(&tile.edge_sextuple(), &p))
        .map(|(i, _)| i)
        .collect();
    let mut scales: Vec<f64> = Vec::new();
    for tile in &t.tiles {
        let s = tile.edge_sextuple()[5] / p[5];
        if !scales.iter().any(|&x| (x - s).abs() <= REL_TOL * s) {
            scales.push(s);
        }
    }
    scales.sort_by(f64::total_cmp);
    let pass = dissimilar.is_empty() && (!congruent || scales.len() == 1);
    Ok(SimilarityReport {
        tiling,
        dissimilar,
        scales,
        pass,
    })
}

/// Every tile similar to the parent, mirror images allowed.
pub fn verify_gentiling(t: &TetTiling) -> Result<SimilarityReport, TetraError> {
    similarity(t, false)
}

/// Every tile similar to the parent and all tiles congruent to each other.
pub fn verify_reptiling(t: &TetTiling) -> Result<SimilarityReport, TetraError> {
    similarity(t, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Triangle,
    Diangle,
    Hemisphere,
    FullSphere,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkFace {
    pub kind: LinkKind,
    /// Triangle: directions of the three incident edges. Diangle: the two
    /// poles along the edge. Hemisphere: the inward facet normal.
    pub corners: Vec<SpherePoint>,
    pub tile: usize,
    /// Dihedral angle of a diangle.
    pub angle: Option<f64>,
    pub solid_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSubdivision {
    pub center: [f64; 3],
    pub faces: Vec<LinkFace>,
}

impl LinkSubdivision {
    pub fn total_solid_angle(&self) -> f64 {
        self.faces.iter().map(|f| f.solid_angle).sum()
    }
}

/// Where a point sits relative to a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contact {
    Outside,
    Vertex(usize),
    Edge(usize, usize),
    /// Facet opposite the given vertex.
    Facet(usize),
    Interior,
}

/// Classifies `p` against `t` with distance tolerance `tol`; vertices take
/// precedence over edges over facets.
pub fn contact(t: &Tetrahedron, p: Vec3, tol: f64) -> Contact {
    let dist: Vec<f64> = (0..4)
        .map(|k| {
            let (n, d) = t.facet_plane(k);
            n.dot(p) - d
        })
        .collect();
    if dist.iter().any(|&x| x > tol) {
        return Contact::Outside;
    }
    let on: Vec<usize> = (0..4).filter(|&k| dist[k] > -tol).collect();
    match on.as_slice() {
        [] => Contact::Interior,
        [k] => Contact::Facet(*k),
        [k, l] => {
            let (i, j) = other_two(*k, *l);
            Contact::Edge(i, j)
        }
        _ => {
            let i = (0..4)
                .min_by(|&a, &b| t.v[a].distance(p).total_cmp(&t.v[b].distance(p)))
                .unwrap();
            Contact::Vertex(i)
        }
    }
}

fn direction(from: Vec3, to: Vec3) -> SpherePoint {
    SpherePoint::from_vec(to - from).expect("distinct points")
}

/// The subdivision of a small sphere around `v` induced by the tiles that
/// touch it.
pub fn vertex_link(t: &TetTiling, v: [f64; 3]) -> Result<LinkSubdivision, TetraError> {
    let p = Vec3::from(v);
    let tol = 1e-9 * t.parent.raw_diameter();
    let mut faces = Vec::new();
    for (idx, tile) in t.tiles.iter().enumerate() {
        let face = match contact(tile, p, tol) {
            Contact::Outside => continue,
            Contact::Vertex(i) => {
                let c: Vec<SpherePoint> = (0..4)
                    .filter(|&x| x != i)
                    .map(|x| direction(tile.v[i], tile.v[x]))
                    .collect();
                let solid = signed_triangle_area(c[0], c[1], c[2]).abs();
                LinkFace {
                    kind: LinkKind::Triangle,
                    corners: c,
                    tile: idx,
                    angle: None,
                    solid_angle: solid,
                }
            }
            Contact::Edge(i, j) => {
                let angle = tile
                    .dihedral_angles()?
                    .iter()
                    .find(|d| d.edge == (i.min(j), i.max(j)))
                    .expect("edge listed")
                    .angle;
                LinkFace {
                    kind: LinkKind::Diangle,
                    corners: vec![direction(p, tile.v[j]), direction(p, tile.v[i])],
                    tile: idx,
                    angle: Some(angle),
                    solid_angle: 2.0 * angle,
                }
            }
            Contact::Facet(k) => {
                let (n, _) = tile.facet_plane(k);
                LinkFace {
                    kind: LinkKind::Hemisphere,
                    corners: vec![SpherePoint::from_vec(-n).expect("unit normal")],
                    tile: idx,
                    angle: None,
                    solid_angle: 2.0 * PI,
                }
            }
            Contact::Interior => LinkFace {
                kind: LinkKind::FullSphere,
                corners: Vec::new(),
                tile: idx,
                angle: None,
                solid_angle: 4.0 * PI,
            },
        };
        faces.push(face);
    }
    if faces.is_empty() {
        return Err(TetraError::NoIncidentTile);
    }
    Ok(LinkSubdivision { center: v, faces })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PremiseReport {
    pub parent_acute: bool,
    pub non_acute_tiles: Vec<usize>,
    /// Tiles whose diameter is not smaller than the parent's.
    pub oversized_tiles: Vec<usize>,
}

impl PremiseReport {
    pub fn hold(&self) -> bool {
        self.parent_acute && self.non_acute_tiles.is_empty() && self.oversized_tiles.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkCheck {
    pub vertex: [f64; 3],
    pub face_count: usize,
    pub valid: bool,
    pub problems: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem1Outcome {
    /// Some premise fails; nothing is claimed about the face count.
    PremiseViolated,
    /// Premises hold and every link has at least nine valid faces.
    Consistent,
    /// Premises hold but a link is invalid or too small, or `r < 9`.
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub r: usize,
    pub premises: PremiseReport,
    /// Whether the premises were assumed rather than checked.
    pub forced: bool,
    pub links: Vec<LinkCheck>,
    pub outcome: Theorem1Outcome,
}

impl Theorem1Report {
    pub fn contradiction(&self) -> bool {
        self.outcome == Theorem1Outcome::Contradiction
    }
}

/// Checks the lower bound on acute tilings of an acute tetrahedron by
/// smaller tiles, through the links of tile vertices on the parent's
/// longest edge.
pub fn theorem1_check(t: &TetTiling) -> Result<Theorem1Report, TetraError> {
    theorem1_run(t, false)
}

/// As [`theorem1_check`] but treating the premises as satisfied, so that the
/// link analysis runs on any valid tiling.
pub fn theorem1_check_forced(t: &TetTiling) -> Result<Theorem1Report, TetraError> {
    theorem1_run(t, true)
}

fn theorem1_run(t: &TetTiling, forced: bool) -> Result<Theorem1Report, TetraError> {
    let tiling = verify_tiling(t)?;
    if !tiling.pass {
        return Err(TetraError::InvalidTiling(format!("{tiling:?}")));
    }
    let pd = t.parent.raw_diameter();
    let mut non_acute_tiles = Vec::new();
    let mut oversized_tiles = Vec::new();
    for (i, tile) in t.tiles.iter().enumerate() {
        if !tile.is_acute()? {
            non_acute_tiles.push(i);
        }
        if tile.raw_diameter() >= pd * (1.0 - REL_TOL) {
            oversized_tiles.push(i);
        }
    }
    let premises = PremiseReport {
        parent_acute: t.parent.is_acute()?,
        non_acute_tiles,
        oversized_tiles,
    };
    let r = t.tiles.len();
    let mut report = Theorem1Report {
        r,
        premises,
        forced,
        links: Vec::new(),
        outcome: Theorem1Outcome::PremiseViolated,
    };
    if !forced && !report.premises.hold() {
        return Ok(report);
    }

    let (i, j) = t.parent.longest_edge();
    let (a, b) = (t.parent.v[i], t.parent.v[j]);
    let delta = t
        .parent
        .dihedral_angles()?
        .iter()
        .find(|d| d.edge == (i, j))
        .expect("edge listed")
        .angle;
    let tol = 1e-9 * pd;
    let mut on_edge: Vec<Vec3> = Vec::new();
    for tile in &t.tiles {
        for &p in &tile.v {
            let s = (p - a).dot(b - a) / (b - a).norm_squared();
            let off = (p - (a + (b - a) * s)).norm();
            let interior = s * pd > tol && (1.0 - s) * pd > tol;
            if off <= tol && interior && !on_edge.iter().any(|q| q.distance(p) <= tol) {
                on_edge.push(p);
            }
        }
    }
    on_edge.sort_by(|p, q| (*p - a).norm().total_cmp(&(*q - a).norm()));

    for p in on_edge {
        let link = vertex_link(t, p.to_array())?;
        let mut problems = Vec::new();
        for f in &link.faces {
            match f.kind {
                LinkKind::Triangle => {
                    let c = &f.corners;
                    let angles = [
                        angle_at(c[0], c[1], c[2]),
                        angle_at(c[1], c[2], c[0]),
                        angle_at(c[2], c[0], c[1]),
                    ];
                    if angles.iter().any(|x| x.map_or(true, |x| x >= FRAC_PI_2)) {
                        problems.push(format!("tile {} gives a non-acute triangle", f.tile));
                    }
                }
                LinkKind::Diangle => {
                    if f.angle.is_none_or(|x| x >= FRAC_PI_2) {
                        problems.push(format!("tile {} gives a non-acute diangle", f.tile));
                    }
                }
                LinkKind::Hemisphere | LinkKind::FullSphere => {
                    problems.push(format!(
                        "tile {} touches the edge with a {:?}",
                        f.tile, f.kind
                    ));
                }
            }
        }
        let residual = link.total_solid_angle() - 2.0 * delta;
        if residual.abs() > REL_TOL {
            problems.push(format!("link faces miss the edge lune by {residual:e}"));
        }
        if link.faces.len() < 9 {
            problems.push(format!("link has {} faces", link.faces.len()));
        }
        report.links.push(LinkCheck {
            vertex: p.to_array(),
            face_count: link.faces.len(),
            valid: problems.is_empty(),
            problems,
        });
    }
    let consistent = r >= 9 && !report.links.is_empty() && report.links.iter().all(|l| l.valid);
    report.outcome = if consistent {
        Theorem1Outcome::Consistent
    } else {
        Theorem1Outcome::Contradiction
    };
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub gentile: usize,
    pub reptile: usize,
    pub improved_reptile: usize,
}

fn cube_at_least(x: usize) -> usize {
    (1..).map(|k: usize| k.pow(3)).find(|&c| c >= x).unwrap()
}

/// Tile-count bounds implied by a minimal count `b` of acute pieces: any
/// gentiling needs at least `b` tiles, a reptiling a cube number at least
/// `b`, and at least `3b` under the conditional strengthening.
pub fn bounds(b: usize) -> Result<Bounds, TetraError> {
    if b < 2 {
        return Err(TetraError::InvalidBound(b));
    }
    Ok(Bounds {
        gentile: b,
        reptile: cube_at_least(b),
        improved_reptile: cube_at_least(3 * b),
    })
}

/// The cube-corner orthoscheme `0 ≤ z ≤ y ≤ x ≤ 2` cut into its eight
/// half-size copies by the Kuhn subdivision of the unit grid.
pub fn kuhn_reptiling() -> TetTiling {
    let parent = Tetrahedron::new([0.0; 3], [2.0, 0.0, 0.0], [2.0, 2.0, 0.0], [2.0, 2.0, 2.0]);
    TetTiling {
        parent,
        tiles: kuhn_tiles(&parent),
    }
}

/// Kuhn simplices of the doubled orthoscheme that fall inside it, mapped
/// through the affine map taking the standard parent to `onto`.
fn kuhn_tiles(onto: &Tetrahedron) -> Vec<Tetrahedron> {
    let e = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    // standard parent vertices 0, 2e0, 2(e0+e1), 2(e0+e1+e2) as barycentric basis
    let to_onto = |p: Vec3| {
        let (x, y, z) = (p.x / 2.0, p.y / 2.0, p.z / 2.0);
        onto.v[0] * (1.0 - x) + onto.v[1] * (x - y) + onto.v[2] * (y - z) + onto.v[3] * z
    };
    let mut tiles = Vec::new();
    for cube in 0..8 {
        let c = Vec3::new(
            (cube & 1) as f64,
            ((cube >> 1) & 1) as f64,
            ((cube >> 2) & 1) as f64,
        );
        for p in perms {
            let v0 = c;
            let v1 = v0 + e[p[0]];
            let v2 = v1 + e[p[1]];
            let v3 = v2 + e[p[2]];
            let m = (v0 + v1 + v2 + v3) * 0.25;
            if m.x > m.y && m.y > m.z {
                tiles.push(
                    Tetrahedron {
                        v: [v0, v1, v2, v3],
                    }
                    .transformed(to_onto),
                );
            }
        }
    }
    tiles
}

/// The Kuhn reptiling with its first tile cut again into eight, giving
/// fifteen similar tiles of two sizes.
pub fn kuhn_two_scale_gentiling() -> TetTiling {
    let base = kuhn_reptiling();
    let mut tiles = kuhn_tiles(&base.tiles[0]);
    tiles.extend_from_slice(&base.tiles[1..]);
    TetTiling {
        parent: base.parent,
        tiles,
    }
}
