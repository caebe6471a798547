//! Canonical codes by breadth-first relabeling from a boundary root.
//!
//! A root is a boundary dart plus an orientation. Walking the rotation system
//! breadth first from the root assigns labels in discovery order, and the
//! emitted code determines the rooted map completely (including vertex
//! classes, hanging ownership and the outer face). Minimising over the roots
//! allowed by the lune symmetry group gives the canonical code.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use super::{CombinatorialSubdivision, Face, LuneSide, Vertex, VertexClass};

const NO_WEDGE: u8 = 0xFE;

struct Root {
    dart: usize,
    mirrored: bool,
}

/// Outcome of one breadth-first traversal.
struct Traversal {
    code: Vec<u8>,
    /// `label[v]` is the new name of vertex `v`.
    label: Vec<usize>,
}

fn class_tag(class: VertexClass, mark_poles: bool) -> u8 {
    match class {
        VertexClass::Pole if mark_poles => 0,
        VertexClass::Pole | VertexClass::Side => 1,
        VertexClass::Full => 2,
        VertexClass::Hanging => 3,
    }
}

fn traverse(s: &CombinatorialSubdivision, root: &Root, mark_poles: bool) -> Traversal {
    let n = s.num_vertices();
    let he = s.half_edges();
    let mut label = vec![usize::MAX; n];
    // position of the start dart in each rotation
    let mut start = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    let r0 = he[root.dart].origin;
    label[r0] = 0;
    start[r0] = s.rotation(r0).iter().position(|&d| d == root.dart).unwrap();
    queue.push_back(r0);

    let mut code = Vec::with_capacity(8 * n);
    code.push(n as u8);
    code.push(s.num_faces() as u8);

    while let Some(x) = queue.pop_front() {
        order.push(x);
        let rot = s.rotation(x);
        let d = rot.len();
        let sx = start[x];
        let at = |i: usize| {
            if root.mirrored {
                rot[(sx + d - i % d) % d]
            } else {
                rot[(sx + i) % d]
            }
        };
        let owner = s.hanging_owner().get(&x).copied();
        let mut outer_wedge = NO_WEDGE;
        let mut owner_wedge = NO_WEDGE;
        let mut nbrs = Vec::with_capacity(d);
        for i in 0..d {
            let dart = at(i);
            let y = s.target(dart);
            if label[y] == usize::MAX {
                label[y] = queue.len() + order.len();
                let back = he[dart].twin;
                start[y] = s.rotation(y).iter().position(|&b| b == back).unwrap();
                queue.push_back(y);
            }
            nbrs.push(label[y] as u8);
            // wedge i lies between traversal positions i and i + 1
            let wedge_face = if root.mirrored {
                he[at(i + 1)].face
            } else {
                he[dart].face
            };
            match wedge_face {
                None => outer_wedge = i as u8,
                Some(f) if Some(f) == owner => owner_wedge = i as u8,
                _ => {}
            }
        }
        code.push(class_tag(s.class(x), mark_poles));
        code.push(d as u8);
        code.push(outer_wedge);
        code.push(owner_wedge);
        code.extend_from_slice(&nbrs);
    }
    Traversal { code, label }
}

/// Boundary dart leaving `v` along the counter-clockwise boundary, or along
/// the clockwise boundary when `mirrored`.
fn boundary_dart(s: &CombinatorialSubdivision, v: usize, mirrored: bool) -> usize {
    let b = s.boundary();
    let i = b.iter().position(|&x| x == v).unwrap();
    let k = b.len();
    let w = if mirrored {
        b[(i + k - 1) % k]
    } else {
        b[(i + 1) % k]
    };
    s.dart(v, w).unwrap()
}

fn pole_roots(s: &CombinatorialSubdivision) -> Vec<Root> {
    let (a, b) = s.poles();
    let mut roots = Vec::with_capacity(4);
    for p in [a, b] {
        for mirrored in [false, true] {
            roots.push(Root {
                dart: boundary_dart(s, p, mirrored),
                mirrored,
            });
        }
    }
    roots
}

fn best(s: &CombinatorialSubdivision, roots: Vec<Root>, mark_poles: bool) -> (Root, Traversal) {
    roots
        .into_iter()
        .map(|r| {
            let t = traverse(s, &r, mark_poles);
            (r, t)
        })
        .min_by(|a, b| a.1.code.cmp(&b.1.code))
        .expect("at least one root")
}

pub(super) fn canonical_code(s: &CombinatorialSubdivision) -> Vec<u8> {
    best(s, pole_roots(s), true).1.code
}

pub(super) fn network_code(s: &CombinatorialSubdivision) -> Vec<u8> {
    let roots = s
        .boundary()
        .iter()
        .flat_map(|&v| {
            [false, true].map(|mirrored| Root {
                dart: boundary_dart(s, v, mirrored),
                mirrored,
            })
        })
        .collect();
    best(s, roots, false).1.code
}

/// Relabels by `label`, reversing orientation when `mirrored`. The root pole
/// becomes pole A.
fn rebuild(
    s: &CombinatorialSubdivision,
    root_pole: usize,
    label: &[usize],
    mirrored: bool,
) -> CombinatorialSubdivision {
    let n = s.num_vertices();
    let b = s.boundary();
    let k = b.len();
    let i0 = b.iter().position(|&x| x == root_pole).unwrap();
    let walk: Vec<usize> = (0..k)
        .map(|i| {
            if mirrored {
                b[(i0 + k - i) % k]
            } else {
                b[(i0 + i) % k]
            }
        })
        .collect();
    let mut side = vec![None; n];
    let mut current = LuneSide::A;
    for &v in &walk[1..] {
        match s.class(v) {
            VertexClass::Pole => current = LuneSide::B,
            _ => side[v] = Some(current),
        }
    }

    let mut vertices = vec![
        Vertex {
            id: 0,
            class: VertexClass::Pole,
            side: None
        };
        n
    ];
    for v in 0..n {
        vertices[label[v]] = Vertex {
            id: label[v],
            class: s.class(v),
            side: side[v],
        };
    }

    let faces: Vec<Face> = s
        .faces()
        .iter()
        .map(|f| {
            let mut w: Vec<usize> = f.walk.iter().map(|&v| label[v]).collect();
            let mut c: Vec<usize> = f.corners.iter().map(|&v| label[v]).collect();
            if mirrored {
                w.reverse();
                c.reverse();
            }
            let m = *c.iter().min().unwrap();
            let wi = w.iter().position(|&x| x == m).unwrap();
            w.rotate_left(wi);
            let ci = c.iter().position(|&x| x == m).unwrap();
            c.rotate_left(ci);
            Face {
                corners: c,
                walk: w,
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| faces[a].cmp(&faces[b]));
    let mut new_of_old = vec![0usize; faces.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    let faces: Vec<Face> = order.iter().map(|&i| faces[i].clone()).collect();
    let owner: BTreeMap<usize, usize> = s
        .hanging_owner()
        .iter()
        .map(|(&v, &f)| (label[v], new_of_old[f]))
        .collect();
    CombinatorialSubdivision::new(vertices, faces, owner).expect("relabeling preserves validity")
}

pub(super) fn canonical_form(s: &CombinatorialSubdivision) -> CombinatorialSubdivision {
    let (root, t) = best(s, pole_roots(s), true);
    let pole = s.half_edges()[root.dart].origin;
    rebuild(s, pole, &t.label, root.mirrored)
}

pub(super) fn apply_symmetry(
    s: &CombinatorialSubdivision,
    swap_poles: bool,
    mirror: bool,
) -> CombinatorialSubdivision {
    let (a, b) = s.poles();
    let pole = if swap_poles { b } else { a };
    let identity: Vec<usize> = (0..s.num_vertices()).collect();
    rebuild(s, pole, &identity, mirror)
}
