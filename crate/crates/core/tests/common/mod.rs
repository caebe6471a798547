//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use lune_forge_core::tetra::{TetTiling, Tetrahedron, EDGES};
use lune_forge_core::vec3::Vec3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn regular() -> Tetrahedron {
    let s3 = 3f64.sqrt();
    Tetrahedron::new(
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, s3 / 2.0, 0.0],
        [0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()],
    )
}

pub fn jittered(rng: &mut ChaCha8Rng, size: f64) -> Tetrahedron {
    let mut t = regular();
    for p in &mut t.v {
        *p = *p
            + Vec3::new(
                rng.gen_range(-size..size),
                rng.gen_range(-size..size),
                rng.gen_range(-size..size),
            );
    }
    t
}

fn split_edge(t: &Tetrahedron, rng: &mut ChaCha8Rng) -> Vec<Tetrahedron> {
    let (i, j) = EDGES[rng.gen_range(0..6)];
    let s = rng.gen_range(0.25..0.75);
    let m = t.v[i] * (1.0 - s) + t.v[j] * s;
    let mut a = *t;
    let mut b = *t;
    a.v[j] = m;
    b.v[i] = m;
    vec![a, b]
}

fn facet_star(t: &Tetrahedron, rng: &mut ChaCha8Rng) -> Vec<Tetrahedron> {
    let k = rng.gen_range(0..4);
    let idx: Vec<usize> = (0..4).filter(|&x| x != k).collect();
    let w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = w.iter().sum();
    let p = idx
        .iter()
        .zip(&w)
        .fold(Vec3::ZERO, |acc, (&i, &wi)| acc + t.v[i] * (wi / total));
    idx.iter()
        .map(|&i| {
            let mut c = *t;
            c.v[i] = p;
            c
        })
        .collect()
}

fn interior_star(t: &Tetrahedron, rng: &mut ChaCha8Rng) -> Vec<Tetrahedron> {
    let w: Vec<f64> = (0..4).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = w.iter().sum();
    let p = (0..4).fold(Vec3::ZERO, |acc, i| acc + t.v[i] * (w[i] / total));
    (0..4)
        .map(|i| {
            let mut c = *t;
            c.v[i] = p;
            c
        })
        .collect()
}

/// A random tiling with `target` tiles, grown by splitting a random tile
/// with an edge split, a facet star or an interior star.
pub fn synthetic_tiling(rng: &mut ChaCha8Rng, target: usize) -> TetTiling {
    let parent = if rng.gen_bool(0.5) {
        jittered(rng, 0.1)
    } else {
        jittered(rng, 0.4)
    };
    let mut tiles = vec![parent];
    while tiles.len() < target {
        let room = target - tiles.len();
        let pick = rng.gen_range(0..tiles.len());
        let piece = tiles.swap_remove(pick);
        let parts = match rng.gen_range(0..3) {
            2 if room >= 3 => interior_star(&piece, rng),
            1 if room >= 2 => facet_star(&piece, rng),
            _ => split_edge(&piece, rng),
        };
        tiles.extend(parts);
    }
    TetTiling { parent, tiles }
}
