//! Combinatorial subdivisions of a lune into faces with three corners.
//!
//! A subdivision is stored as a half-edge map of a closed disk whose outer
//! cycle is the lune boundary. Every interior face lists its boundary walk in
//! counter-clockwise order together with its corners; a walk vertex that is
//! not a corner is a hanging vertex owned by that face.

mod canonical;
mod enumerate;
mod predicates;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{enumerate_candidates, enumerate_with_cap, DEFAULT_CAP};
pub use predicates::{
    signature_solutions, verify_boundary, verify_count_identities, verify_degrees, BoundaryReport,
    ConstraintSet, CountIdentityReport, DegreeReport, DegreeViolation,
};

#[derive(Debug, Error)]
pub enum CombError {
    #[error("malformed map: {0}")]
    MalformedMap(String),
    #[error("face count {r} exceeds the enumeration cap {cap}")]
    CapExceeded { r: usize, cap: usize },
    #[error("face count must be at least {min}, got {r}")]
    FaceCountTooSmall { r: usize, min: usize },
    #[error("unsupported constraint selection: {0}")]
    UnsupportedConstraints(String),
    #[error("invalid subdivision JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn malformed<T>(msg: impl Into<String>) -> Result<T, CombError> {
    Err(CombError::MalformedMap(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Pole,
    Side,
    Full,
    Hanging,
}

impl VertexClass {
    pub fn is_boundary(self) -> bool {
        matches!(self, VertexClass::Pole | VertexClass::Side)
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexClass::Pole => "pole",
            VertexClass::Side => "side",
            VertexClass::Full => "full",
            VertexClass::Hanging => "hanging",
        };
        f.write_str(s)
    }
}

/// One of the two half great circles bounding the lune.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LuneSide {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub class: VertexClass,
    pub side: Option<LuneSide>,
}

/// An interior face: its counter-clockwise boundary walk and the subset of
/// walk vertices that are corners.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub corners: Vec<usize>,
    pub walk: Vec<usize>,
}

impl Face {
    /// A face whose walk consists of its three corners only.
    pub fn triangle(a: usize, b: usize, c: usize) -> Self {
        Face {
            corners: vec![a, b, c],
            walk: vec![a, b, c],
        }
    }

    pub fn is_corner(&self, v: usize) -> bool {
        self.corners.contains(&v)
    }

    /// Walk neighbours `(predecessor, successor)` of `v`, if `v` is on the walk.
    pub fn walk_neighbors(&self, v: usize) -> Option<(usize, usize)> {
        let k = self.walk.len();
        let i = self.walk.iter().position(|&w| w == v)?;
        Some((self.walk[(i + k - 1) % k], self.walk[(i + 1) % k]))
    }

    /// Corner-to-corner chains of the walk, in walk order, each starting and
    /// ending at a corner.
    pub fn sides(&self) -> Vec<Vec<usize>> {
        let k = self.walk.len();
        let Some(start) = self.walk.iter().position(|v| self.corners.contains(v)) else {
            return Vec::new();
        };
        let mut sides = Vec::new();
        let mut cur = vec![self.walk[start]];
        for step in 1..=k {
            let v = self.walk[(start + step) % k];
            cur.push(v);
            if self.corners.contains(&v) {
                sides.push(std::mem::replace(&mut cur, vec![v]));
            }
        }
        sides
    }
}

/// Directed edge record. `face` is `None` for darts of the outer face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub prev: usize,
    pub face: Option<usize>,
}

/// Counts `(r, f, h, s)`: faces, full, hanging and side vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountSignature {
    pub r: usize,
    pub f: usize,
    pub h: usize,
    pub s: usize,
}

impl CountSignature {
    pub fn satisfies_identity(&self) -> bool {
        self.r == 2 * self.f + self.h + self.s
    }
}

impl fmt::Display for CountSignature {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "(r={}, f={}, h={}, s={})",
            self.r, self.f, self.h, self.s
        )
    }
}

/// A lune subdivided into faces, stored as a half-edge map of the disk.
#[derive(Clone, Debug)]
pub struct CombinatorialSubdivision {
    vertices: Vec<Vertex>,
    faces: Vec<Face>,
    hanging_owner: BTreeMap<usize, usize>,
    half_edges: Vec<HalfEdge>,
    /// Outgoing darts of each vertex in counter-clockwise order.
    rotation: Vec<Vec<usize>>,
    /// Boundary vertices in counter-clockwise order, starting at pole A.
    boundary: Vec<usize>,
    dart_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for CombinatorialSubdivision {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.faces == other.faces
            && self.hanging_owner == other.hanging_owner
    }
}

impl CombinatorialSubdivision {
    /// Builds and validates a subdivision. Vertex ids must be `0..n`.
    pub fn new(
        vertices: Vec<Vertex>,
        faces: Vec<Face>,
        hanging_owner: BTreeMap<usize, usize>,
    ) -> Result<Self, CombError> {
        let n = vertices.len();
        if n < 3 {
            return malformed("fewer than three vertices");
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return malformed(format!("vertex ids must be 0..{n}, found {} at {i}", v.id));
            }
        }
        if faces.is_empty() {
            return malformed("no faces");
        }

        let mut half_edges: Vec<HalfEdge> = Vec::new();
        let mut dart_index: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, face) in faces.iter().enumerate() {
            let k = face.walk.len();
            if k < 3 {
                return malformed(format!("face {fi} has a walk of length {k}"));
            }
            let mut seen = vec![false; n];
            for &w in &face.walk {
                if w >= n {
                    return malformed(format!("face {fi} references unknown vertex {w}"));
                }
                if std::mem::replace(&mut seen[w], true) {
                    return malformed(format!("face {fi} visits vertex {w} twice"));
                }
            }
            if face.corners.len() < 2 {
                return malformed(format!("face {fi} has fewer than two corners"));
            }
            let ordered: Vec<usize> = face
                .walk
                .iter()
                .copied()
                .filter(|v| face.corners.contains(v))
                .collect();
            if ordered.len() != face.corners.len() || !is_rotation(&ordered, &face.corners) {
                return malformed(format!(
                    "face {fi}: corners are not an ordered subset of the walk"
                ));
            }
            let base = half_edges.len();
            for i in 0..k {
                let (a, b) = (face.walk[i], face.walk[(i + 1) % k]);
                if dart_index.insert((a, b), base + i).is_some() {
                    return malformed(format!(
                        "directed edge {a}->{b} appears twice; faces are not consistently oriented"
                    ));
                }
                half_edges.push(HalfEdge {
                    origin: a,
                    twin: usize::MAX,
                    next: base + (i + 1) % k,
                    prev: base + (i + k - 1) % k,
                    face: Some(fi),
                });
            }
        }

        // Twins; unmatched darts get an outer twin.
        let inner = half_edges.len();
        let mut outer_out: Vec<Option<usize>> = vec![None; n];
        for d in 0..inner {
            let a = half_edges[d].origin;
            let b = half_edges[half_edges[d].next].origin;
            if let Some(&t) = dart_index.get(&(b, a)) {
                half_edges[d].twin = t;
            } else {
                let t = half_edges.len();
                half_edges.push(HalfEdge {
                    origin: b,
                    twin: d,
                    next: usize::MAX,
                    prev: usize::MAX,
                    face: None,
                });
                half_edges[d].twin = t;
                dart_index.insert((b, a), t);
                if outer_out[b].replace(t).is_some() {
                    return malformed(format!("boundary is pinched at vertex {b}"));
                }
            }
        }
        let outer_count = half_edges.len() - inner;
        if outer_count < 3 {
            return malformed("boundary cycle has fewer than three edges");
        }
        for d in inner..half_edges.len() {
            let target = half_edges[half_edges[d].twin].origin;
            let nxt = outer_out[target]
                .ok_or_else(|| CombError::MalformedMap(format!("boundary breaks at {target}")))?;
            half_edges[d].next = nxt;
            half_edges[nxt].prev = d;
        }

        // Single boundary component; the outer walk runs clockwise.
        let mut outer_walk = Vec::new();
        let mut d = inner;
        loop {
            outer_walk.push(half_edges[d].origin);
            d = half_edges[d].next;
            if d == inner || outer_walk.len() > outer_count {
                break;
            }
        }
        if outer_walk.len() != outer_count {
            return malformed("boundary consists of more than one cycle");
        }
        let mut ccw_boundary: Vec<usize> = outer_walk.into_iter().rev().collect();

        // Umbrellas: the darts around each vertex form one cyclic sequence.
        let mut out_degree = vec![0usize; n];
        let mut any_dart = vec![usize::MAX; n];
        for (d, he) in half_edges.iter().enumerate() {
            out_degree[he.origin] += 1;
            any_dart[he.origin] = d;
        }
        let mut rotation = vec![Vec::new(); n];
        for v in 0..n {
            if out_degree[v] == 0 {
                return malformed(format!("vertex {v} is not on any face"));
            }
            let start = any_dart[v];
            let mut d = start;
            loop {
                rotation[v].push(d);
                d = half_edges[half_edges[d].prev].twin;
                if d == start || rotation[v].len() > out_degree[v] {
                    break;
                }
            }
            if rotation[v].len() != out_degree[v] {
                return malformed(format!("vertex {v} is not a manifold vertex"));
            }
        }

        // Connectivity and disk topology.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &rotation[v] {
                let w = half_edges[half_edges[d].twin].origin;
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return malformed("map is not connected");
        }
        let e = half_edges.len() / 2;
        if n + faces.len() != e + 1 {
            return malformed(format!(
                "Euler characteristic {} is not that of a disk",
                n as i64 - e as i64 + faces.len() as i64
            ));
        }

        // Vertex classes against the boundary.
        let mut on_boundary = vec![false; n];
        for &b in &ccw_boundary {
            on_boundary[b] = true;
        }
        let poles: Vec<usize> = (0..n)
            .filter(|&v| vertices[v].class == VertexClass::Pole)
            .collect();
        if poles.len() != 2 {
            return malformed(format!("expected exactly 2 poles, found {}", poles.len()));
        }
        for v in &vertices {
            match (v.class, on_boundary[v.id]) {
                (VertexClass::Pole | VertexClass::Side, false) => {
                    return malformed(format!(
                        "{} vertex {} is not on the boundary",
                        v.class, v.id
                    ))
                }
                (VertexClass::Full | VertexClass::Hanging, true) => {
                    return malformed(format!("{} vertex {} lies on the boundary", v.class, v.id))
                }
                _ => {}
            }
            match (v.class, v.side) {
                (VertexClass::Side, None) => {
                    return malformed(format!("side vertex {} has no side assignment", v.id))
                }
                (VertexClass::Side, Some(_)) => {}
                (_, Some(_)) => {
                    return malformed(format!(
                        "{} vertex {} carries a side assignment",
                        v.class, v.id
                    ))
                }
                _ => {}
            }
        }
        if dart_index.contains_key(&(poles[0], poles[1])) {
            return malformed("an edge joins the two poles, which are antipodal");
        }

        // Corner structure and hanging ownership.
        for (fi, face) in faces.iter().enumerate() {
            for &w in &face.walk {
                if face.corners.contains(&w) {
                    continue;
                }
                if vertices[w].class != VertexClass::Hanging {
                    return malformed(format!(
                        "{} vertex {w} is a non-corner vertex of face {fi}",
                        vertices[w].class
                    ));
                }
                if hanging_owner.get(&w) != Some(&fi) {
                    return malformed(format!(
                        "hanging vertex {w} is a non-corner of face {fi} but not owned by it"
                    ));
                }
            }
        }
        for v in vertices.iter().filter(|v| v.class == VertexClass::Hanging) {
            let Some(&fi) = hanging_owner.get(&v.id) else {
                return malformed(format!("hanging vertex {} has no owner", v.id));
            };
            if fi >= faces.len() || faces[fi].is_corner(v.id) || !faces[fi].walk.contains(&v.id) {
                return malformed(format!(
                    "hanging vertex {} is not a non-corner of face {fi}",
                    v.id
                ));
            }
        }
        for &v in hanging_owner.keys() {
            if v >= n || vertices[v].class != VertexClass::Hanging {
                return malformed(format!("ownership entry for non-hanging vertex {v}"));
            }
        }

        // Start the boundary at pole A.
        let succ_side = |p: usize| {
            let i = ccw_boundary.iter().position(|&b| b == p).unwrap();
            vertices[ccw_boundary[(i + 1) % ccw_boundary.len()]].side
        };
        let pole_a = match (succ_side(poles[0]), succ_side(poles[1])) {
            (Some(LuneSide::A), s) if s != Some(LuneSide::A) => poles[0],
            (s, Some(LuneSide::A)) if s != Some(LuneSide::A) => poles[1],
            _ => poles[0],
        };
        let i = ccw_boundary.iter().position(|&b| b == pole_a).unwrap();
        ccw_boundary.rotate_left(i);

        Ok(Self {
            vertices,
            faces,
            hanging_owner,
            half_edges,
            rotation,
            boundary: ccw_boundary,
            dart_index,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn hanging_owner(&self) -> &BTreeMap<usize, usize> {
        &self.hanging_owner
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    /// Boundary vertices counter-clockwise from pole A.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.vertices[v].class
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Outgoing darts of `v` in counter-clockwise order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn dart(&self, from: usize, to: usize) -> Option<usize> {
        self.dart_index.get(&(from, to)).copied()
    }

    pub fn target(&self, d: usize) -> usize {
        self.half_edges[self.half_edges[d].twin].origin
    }

    /// Neighbours of `v` in counter-clockwise order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.rotation[v].iter().map(|&d| self.target(d)).collect()
    }

    /// Undirected edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es: Vec<(usize, usize)> = self
            .half_edges
            .iter()
            .enumerate()
            .filter_map(|(d, he)| {
                let t = self.target(d);
                (he.origin < t).then_some((he.origin, t))
            })
            .collect();
        es.sort_unstable();
        es
    }

    pub fn poles(&self) -> (usize, usize) {
        let a = self.boundary[0];
        let b = self
            .boundary
            .iter()
            .copied()
            .find(|&v| v != a && self.class(v) == VertexClass::Pole)
            .expect("validated: two poles");
        (a, b)
    }

    pub fn count_class(&self, class: VertexClass) -> usize {
        self.vertices.iter().filter(|v| v.class == class).count()
    }

    pub fn signature(&self) -> CountSignature {
        CountSignature {
            r: self.num_faces(),
            f: self.count_class(VertexClass::Full),
            h: self.count_class(VertexClass::Hanging),
            s: self.count_class(VertexClass::Side),
        }
    }

    /// Side vertices assigned to `side`, in counter-clockwise boundary order.
    pub fn side_vertices(&self, side: LuneSide) -> Vec<usize> {
        self.boundary
            .iter()
            .copied()
            .filter(|&v| self.vertices[v].side == Some(side))
            .collect()
    }

    /// Whether every face has exactly three corners.
    pub fn is_triangular(&self) -> bool {
        self.faces.iter().all(|f| f.corners.len() == 3)
    }

    /// Symmetry- and relabeling-invariant code; equal codes mean the two
    /// subdivisions are related by a relabeling and a lune symmetry.
    pub fn canonical_code(&self) -> Vec<u8> {
        canonical::canonical_code(self)
    }

    /// Code of the underlying network with the pole marks forgotten.
    pub fn network_code(&self) -> Vec<u8> {
        canonical::network_code(self)
    }

    /// Relabeled copy in canonical form: pole A is vertex 0 and labels follow
    /// the breadth-first order that produced [`Self::canonical_code`].
    pub fn canonical_form(&self) -> CombinatorialSubdivision {
        canonical::canonical_form(self)
    }

    /// Image under one of the four lune symmetries: `swap_poles` exchanges the
    /// roles of the poles, `mirror` reverses orientation.
    pub fn apply_symmetry(&self, swap_poles: bool, mirror: bool) -> CombinatorialSubdivision {
        canonical::apply_symmetry(self, swap_poles, mirror)
    }

    /// Copy with vertices renamed by `perm` (old id `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Result<CombinatorialSubdivision, CombError> {
        let n = self.num_vertices();
        if perm.len() != n {
            return malformed("permutation length mismatch");
        }
        let mut vertices = vec![self.vertices[0]; n];
        for v in &self.vertices {
            vertices[perm[v.id]] = Vertex {
                id: perm[v.id],
                ..*v
            };
        }
        let faces = self
            .faces
            .iter()
            .map(|f| Face {
                corners: f.corners.iter().map(|&c| perm[c]).collect(),
                walk: f.walk.iter().map(|&c| perm[c]).collect(),
            })
            .collect();
        let owner = self
            .hanging_owner
            .iter()
            .map(|(&v, &f)| (perm[v], f))
            .collect();
        CombinatorialSubdivision::new(vertices, faces, owner)
    }

    pub fn to_json(&self) -> SubdivisionJson {
        let sig = self.signature();
        SubdivisionJson {
            r: sig.r,
            signature: SignatureJson {
                f: sig.f,
                h: sig.h,
                s: sig.s,
            },
            vertices: self.vertices.clone(),
            faces: self.faces.clone(),
            hanging_owner: self.hanging_owner.clone(),
        }
    }

    pub fn from_json(json: SubdivisionJson) -> Result<Self, CombError> {
        let r = json.r;
        let declared = json.signature;
        let s = Self::new(json.vertices, json.faces, json.hanging_owner)?;
        let sig = s.signature();
        if sig.r != r || sig.f != declared.f || sig.h != declared.h || sig.s != declared.s {
            return malformed(format!(
                "declared r={r}, f={}, h={}, s={} but the map has {sig}",
                declared.f, declared.h, declared.s
            ));
        }
        Ok(s)
    }
}

fn is_rotation(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureJson {
    pub f: usize,
    pub h: usize,
    pub s: usize,
}

/// Interchange form of a subdivision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionJson {
    pub r: usize,
    pub signature: SignatureJson,
    pub vertices: Vec<Vertex>,
    pub faces: Vec<Face>,
    pub hanging_owner: BTreeMap<usize, usize>,
}

impl Serialize for CombinatorialSubdivision {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CombinatorialSubdivision {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = SubdivisionJson::deserialize(deserializer)?;
        CombinatorialSubdivision::from_json(json).map_err(serde::de::Error::custom)
    }
}
