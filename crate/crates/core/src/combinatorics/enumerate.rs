//! Exhaustive enumeration of lune subdivisions with a given face count.
//!
//! For every admissible count signature the search starts from the boundary
//! cycle `0..nb` and repeatedly fills the face adjacent to the root edge of an
//! open region. That face runs from the root edge back through the region,
//! touching the region boundary at increasing positions and creating fresh
//! interior vertices in between; whatever it does not cover splits off as new
//! open regions. A target map determines the face at each step, so every map
//! rooted at the edge `0→1` is produced exactly once. Hanging ownership and
//! pole placement are chosen once the map is complete, and isomorphic results
//! are merged by canonical code.

use std::collections::BTreeMap;

use super::predicates::required_degree;
use super::{
    signature_solutions, CombError, CombinatorialSubdivision, ConstraintSet, CountSignature, Face,
    LuneSide, Vertex, VertexClass,
};

/// Largest face count accepted by [`enumerate_candidates`].
pub const DEFAULT_CAP: usize = 12;

/// All canonical subdivisions with exactly `r` triangular faces that satisfy
/// `constraints`, sorted by canonical code.
pub fn enumerate_candidates(
    r: usize,
    constraints: ConstraintSet,
) -> Result<Vec<CombinatorialSubdivision>, CombError> {
    enumerate_with_cap(r, constraints, DEFAULT_CAP)
}

pub fn enumerate_with_cap(
    r: usize,
    constraints: ConstraintSet,
    cap: usize,
) -> Result<Vec<CombinatorialSubdivision>, CombError> {
    if r > cap {
        return Err(CombError::CapExceeded { r, cap });
    }
    if r < 2 {
        return Err(CombError::FaceCountTooSmall { r, min: 2 });
    }
    if !constraints.triangular_faces {
        return Err(CombError::UnsupportedConstraints(
            "only subdivisions into faces with three corners are enumerated".into(),
        ));
    }
    let mut found = BTreeMap::new();
    for sig in signatures(r, &constraints) {
        let nb = sig.s + 2;
        let n_int = sig.f + sig.h;
        if nb + n_int > 64 {
            continue;
        }
        let mut search = Search {
            r,
            nb,
            n_int,
            h: sig.h,
            constraints,
            found: &mut found,
            raw_maps: 0,
            count_only: false,
        };
        search.run();
    }
    Ok(found.into_values().collect())
}

/// Number of disk maps with boundary `0..boundary` (rooted at the edge
/// `0→1`), `interior` interior vertices and `faces` faces, before hanging
/// ownership is assigned. Only structural requirements apply.
#[cfg(test)]
pub(crate) fn rooted_map_count(boundary: usize, interior: usize, faces: usize) -> u64 {
    let h = (boundary + 2 * interior) as i64 - 2 - faces as i64;
    if h < 0 || boundary < 3 || boundary + interior > 64 {
        return 0;
    }
    let mut found = BTreeMap::new();
    let mut search = Search {
        r: faces,
        nb: boundary,
        n_int: interior,
        h: h as usize,
        constraints: ConstraintSet::triangles_only(),
        found: &mut found,
        raw_maps: 0,
        count_only: true,
    };
    search.run();
    search.raw_maps
}

/// Signatures to search. Without the counting constraint every split of `r`
/// is tried, keeping at least one side vertex per lune side.
fn signatures(r: usize, c: &ConstraintSet) -> Vec<CountSignature> {
    if c.count_identity {
        return signature_solutions(r);
    }
    let mut out = Vec::new();
    for f in 0..=r / 2 {
        for h in 0..=(r - 2 * f) {
            let s = r - 2 * f - h;
            if s >= 2 {
                out.push(CountSignature { r, f, h, s });
            }
        }
    }
    out
}

#[derive(Clone)]
struct State {
    faces: Vec<Vec<usize>>,
    regions: Vec<Vec<usize>>,
    adj: Vec<u64>,
    n_vertices: usize,
    open: Vec<u8>,
    noncorners: usize,
    /// Finalised boundary vertices below the side degree bound.
    low_boundary: usize,
    /// Finalised interior vertices below the full degree bound.
    forced_hanging: usize,
}

impl State {
    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }
}

/// One stretch of the new face: from the current touch position to boundary
/// position `to`, through `fresh` new vertices.
#[derive(Clone, Copy)]
struct Segment {
    to: usize,
    fresh: usize,
}

struct Search<'a> {
    r: usize,
    nb: usize,
    n_int: usize,
    h: usize,
    constraints: ConstraintSet,
    found: &'a mut BTreeMap<Vec<u8>, CombinatorialSubdivision>,
    /// Completed maps before ownership and pole placement.
    raw_maps: u64,
    count_only: bool,
}

impl Search<'_> {
    fn run(&mut self) {
        let total = self.nb + self.n_int;
        let mut st = State {
            faces: Vec::with_capacity(self.r),
            regions: vec![(0..self.nb).collect()],
            adj: vec![0; total],
            n_vertices: self.nb,
            open: vec![0; total],
            noncorners: 0,
            low_boundary: 0,
            forced_hanging: 0,
        };
        for i in 0..self.nb {
            st.link(i, (i + 1) % self.nb);
            st.open[i] = 1;
        }
        self.extend(st);
    }

    fn extend(&mut self, mut st: State) {
        let Some(region) = st.regions.pop() else {
            if st.faces.len() == self.r && st.n_vertices == self.nb + self.n_int {
                self.raw_maps += 1;
                if !self.count_only {
                    self.finish(&st);
                }
            }
            return;
        };
        let mut segs = Vec::new();
        self.choose_segments(&st, &region, 1, 2, &mut segs);
    }

    /// Extends the partial face path currently at region position `at`;
    /// `size` counts face vertices so far.
    fn choose_segments(
        &mut self,
        st: &State,
        region: &[usize],
        at: usize,
        size: usize,
        segs: &mut Vec<Segment>,
    ) {
        let m = region.len();
        let max_size = 3 + (self.h - st.noncorners);
        let fresh_used: usize = segs.iter().map(|s| s.fresh).sum();
        let fresh_left = self.nb + self.n_int - st.n_vertices - fresh_used;
        for to in (at + 1)..=m {
            let target = region[to % m];
            // vertices added by this segment besides `target`
            let touch = usize::from(to != m);
            for fresh in 0..=fresh_left {
                if size + fresh + touch > max_size {
                    break;
                }
                if fresh == 0 && to != at + 1 && st.adjacent(region[at], target) {
                    continue;
                }
                segs.push(Segment { to, fresh });
                if to == m {
                    if size + fresh >= 3 {
                        self.place_face(st, region, segs);
                    }
                } else {
                    self.choose_segments(st, region, to, size + fresh + 1, segs);
                }
                segs.pop();
            }
        }
    }

    fn place_face(&mut self, parent: &State, region: &[usize], segs: &[Segment]) {
        let m = region.len();
        let mut st = parent.clone();
        let (u, v) = (region[0], region[1]);
        let mut walk = vec![u, v];
        let mut new_regions = Vec::new();
        let mut at = 1usize;
        for seg in segs {
            let from = region[at];
            let target = region[seg.to % m];
            let mut path = Vec::with_capacity(seg.fresh);
            for _ in 0..seg.fresh {
                let x = st.n_vertices;
                st.n_vertices += 1;
                path.push(x);
            }
            let mut prev = from;
            for &x in &path {
                st.link(prev, x);
                walk.push(x);
                prev = x;
            }
            st.link(prev, target);
            if seg.to != m {
                walk.push(target);
            }
            if !(seg.fresh == 0 && seg.to == at + 1) {
                let mut nr: Vec<usize> = (at..=seg.to).map(|i| region[i % m]).collect();
                nr.extend(path.iter().rev());
                new_regions.push(nr);
            }
            at = seg.to;
        }

        let size = walk.len();
        let interior_on_face = walk.iter().filter(|&&x| x >= self.nb).count();
        if size > 3 && interior_on_face < size - 3 {
            return;
        }
        st.noncorners += size - 3;
        if st.noncorners > self.h {
            return;
        }

        for &x in region {
            st.open[x] -= 1;
        }
        for nr in &new_regions {
            for &x in nr {
                st.open[x] += 1;
            }
        }
        st.faces.push(walk);
        st.regions.extend(new_regions);
        if st.faces.len() + st.regions.len() > self.r {
            return;
        }

        for &x in region {
            if st.open[x] == 0 && !self.finalise(&mut st, x) {
                return;
            }
        }
        self.extend(st);
    }

    /// Degree checks for a vertex that can receive no more edges.
    fn finalise(&self, st: &mut State, x: usize) -> bool {
        let d = st.degree(x);
        let c = &self.constraints;
        if x < self.nb {
            if c.degree_bounds_side_hanging && d < required_degree(VertexClass::Side) {
                st.low_boundary += 1;
                return st.low_boundary <= 2;
            }
            return true;
        }
        if d < 3 {
            return false;
        }
        if c.degree_bounds_side_hanging && d < required_degree(VertexClass::Hanging) {
            return false;
        }
        if c.degree_bounds_full && d < required_degree(VertexClass::Full) {
            st.forced_hanging += 1;
            return st.forced_hanging <= self.h;
        }
        true
    }

    fn finish(&mut self, st: &State) {
        let mut owner = vec![usize::MAX; st.n_vertices];
        let mut assignments = Vec::new();
        self.assign_owners(st, 0, &mut owner, &mut assignments);
        for owner in assignments {
            self.place_poles(st, &owner);
        }
    }

    /// Chooses the non-corner vertices of every face whose walk is longer
    /// than three.
    fn assign_owners(
        &self,
        st: &State,
        face: usize,
        owner: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if face == st.faces.len() {
            out.push(owner.clone());
            return;
        }
        let walk = &st.faces[face];
        let need = walk.len() - 3;
        if need == 0 {
            self.assign_owners(st, face + 1, owner, out);
            return;
        }
        let options: Vec<usize> = walk
            .iter()
            .copied()
            .filter(|&x| x >= self.nb && owner[x] == usize::MAX)
            .collect();
        let mut pick = Vec::with_capacity(need);
        choose(&options, need, 0, &mut pick, &mut |chosen| {
            for &x in chosen {
                owner[x] = face;
            }
            self.assign_owners(st, face + 1, owner, out);
            for &x in chosen {
                owner[x] = usize::MAX;
            }
        });
    }

    fn place_poles(&mut self, st: &State, owner: &[usize]) {
        let nb = self.nb;
        let c = self.constraints;
        let n = st.n_vertices;
        let classes: Vec<VertexClass> = (0..n)
            .map(|x| match (x < nb, owner[x] != usize::MAX) {
                (true, _) => VertexClass::Side,
                (false, true) => VertexClass::Hanging,
                (false, false) => VertexClass::Full,
            })
            .collect();
        for x in nb..n {
            let need = match classes[x] {
                VertexClass::Hanging if c.degree_bounds_side_hanging => 4,
                VertexClass::Full if c.degree_bounds_full => 5,
                _ => 3,
            };
            if st.degree(x) < need {
                return;
            }
        }

        let faces: Vec<Face> = st
            .faces
            .iter()
            .enumerate()
            .map(|(fi, w)| Face {
                corners: w.iter().copied().filter(|&x| owner[x] != fi).collect(),
                walk: w.clone(),
            })
            .collect();
        let hanging_owner: BTreeMap<usize, usize> = (nb..n)
            .filter(|&x| owner[x] != usize::MAX)
            .map(|x| (x, owner[x]))
            .collect();

        let mut placements = Vec::new();
        for a in 0..nb {
            for b in (a + 2)..nb {
                let (side_a, side_b) = (b - a - 1, nb - (b - a) - 1);
                if side_b == 0 || st.adjacent(a, b) {
                    continue;
                }
                if c.boundary_two_per_side && (side_a < 2 || side_b < 2) {
                    continue;
                }
                if c.degree_bounds_side_hanging
                    && (0..nb).any(|x| x != a && x != b && st.degree(x) < 4)
                {
                    continue;
                }
                placements.push((a, b, side_a.min(side_b)));
            }
        }
        if placements.is_empty() {
            return;
        }

        let build = |a: usize, b: usize| {
            let vertices: Vec<Vertex> = (0..n)
                .map(|x| {
                    let (class, side) = if x == a || x == b {
                        (VertexClass::Pole, None)
                    } else if x < nb {
                        let side = if x > a && x < b {
                            LuneSide::A
                        } else {
                            LuneSide::B
                        };
                        (VertexClass::Side, Some(side))
                    } else {
                        (classes[x], None)
                    };
                    Vertex { id: x, class, side }
                })
                .collect();
            CombinatorialSubdivision::new(vertices, faces.clone(), hanging_owner.clone())
                .expect("enumerated maps are well formed")
        };

        if c.pole_sensitive() {
            for &(a, b, _) in &placements {
                let s = build(a, b);
                if !c.is_satisfied(&s) {
                    continue;
                }
                let key = s.canonical_code();
                self.found.entry(key).or_insert_with(|| s.canonical_form());
            }
        } else {
            let first = build(placements[0].0, placements[0].1);
            if !c.is_satisfied(&first) {
                return;
            }
            let key = first.network_code();
            if self.found.contains_key(&key) {
                return;
            }
            // Representative: most balanced sides, then smallest canonical code.
            let best_balance = placements.iter().map(|p| p.2).max().unwrap();
            let rep = placements
                .iter()
                .filter(|p| p.2 == best_balance)
                .map(|&(a, b, _)| build(a, b).canonical_form())
                .min_by_key(|s| s.canonical_code())
                .unwrap();
            self.found.insert(key, rep);
        }
    }
}

/// Calls `f` with every `k`-subset of `items` (in order).
fn choose(
    items: &[usize],
    k: usize,
    start: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - pick.len() {
            break;
        }
        pick.push(items[i]);
        choose(items, k, i + 1, pick, f);
        pick.pop();
    }
}
