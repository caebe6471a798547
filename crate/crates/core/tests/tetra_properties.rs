use std::f64::consts::FRAC_PI_2;

mod common;

use common::{jittered, synthetic_tiling};

use lune_forge_core::tetra::{
    bounds, kuhn_reptiling, kuhn_two_scale_gentiling, theorem1_check, theorem1_check_forced,
    verify_gentiling, verify_reptiling, verify_tiling, Tetrahedron, Theorem1Outcome,
};
use lune_forge_core::vec3::Vec3;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dihedral angle along edge `(i, j)` from the three face angles at `i`,
/// using only edge lengths and the spherical cosine rule.
fn face_angle_dihedral(t: &Tetrahedron, i: usize, j: usize) -> f64 {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
    let d = |a: usize, b: usize| t.v[a].distance(t.v[b]);
    let face = |a: usize, b: usize| {
        let (x, y, z) = (d(i, a), d(i, b), d(a, b));
        ((x * x + y * y - z * z) / (2.0 * x * y)).acos()
    };
    let (opposite, b, c) = (face(k, l), face(j, k), face(j, l));
    ((opposite.cos() - b.cos() * c.cos()) / (b.sin() * c.sin())).acos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dihedrals_match_face_angle_oracle(seed in any::<u64>()) {
        let t = jittered(&mut ChaCha8Rng::seed_from_u64(seed), 0.3);
        prop_assume!(t.volume() > 1e-3);
        for d in t.dihedral_angles().unwrap() {
            let oracle = face_angle_dihedral(&t, d.edge.0, d.edge.1);
            prop_assert!((d.angle - oracle).abs() < 1e-7, "{:?} vs {}", d, oracle);
        }
    }

    #[test]
    fn acute_tetrahedra_have_acute_facets(seed in any::<u64>()) {
        let t = jittered(&mut ChaCha8Rng::seed_from_u64(seed), 0.15);
        prop_assume!(t.is_acute().unwrap());
        prop_assert!(t.facet_acuteness().unwrap().iter().all(|f| !f.flagged));
    }

    #[test]
    fn similar_copies_keep_their_angles(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let t = jittered(&mut ChaCha8Rng::seed_from_u64(seed), 0.2);
        prop_assume!(t.volume() > 1e-3);
        let moved = t.transformed(|p| Vec3::new(-p.y, p.x, p.z) * scale + Vec3::new(3.0, -1.0, 2.0));
        for (a, b) in t.dihedral_angles().unwrap().iter().zip(moved.dihedral_angles().unwrap()) {
            prop_assert!((a.angle - b.angle).abs() < 1e-9);
        }
        prop_assert!((moved.volume() - t.volume() * scale.powi(3)).abs() < 1e-9 * moved.volume().max(1.0));
    }
}

#[test]
fn dihedral_sum_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let t = jittered(&mut rng, 0.3);
        if t.volume() < 1e-3 {
            continue;
        }
        let sum: f64 = t.dihedral_angles().unwrap().iter().map(|d| d.angle).sum();
        assert!(sum > 2.0 * std::f64::consts::PI && sum < 3.0 * std::f64::consts::PI);
    }
}

#[test]
fn synthetic_tilings_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let target = rng.gen_range(2..=8);
        let t = synthetic_tiling(&mut rng, target);
        let report = verify_tiling(&t).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.tile_count, target);
    }
}

#[test]
fn small_tilings_never_look_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut premise_failures = 0;
    for _ in 0..150 {
        let target = rng.gen_range(2..=8);
        let t = synthetic_tiling(&mut rng, target);
        let honest = theorem1_check(&t).unwrap();
        assert_ne!(honest.outcome, Theorem1Outcome::Consistent);
        if honest.outcome == Theorem1Outcome::PremiseViolated {
            assert!(!honest.premises.hold());
            premise_failures += 1;
        } else {
            assert!(honest.contradiction());
        }
        let forced = theorem1_check_forced(&t).unwrap();
        assert!(forced.forced);
        assert!(forced.contradiction(), "r={} {:?}", forced.r, forced.links);
    }
    assert!(premise_failures > 0);
}

#[test]
fn corrupted_tilings_are_refused() {
    let mut t = kuhn_reptiling();
    t.tiles.pop();
    let report = verify_tiling(&t).unwrap();
    assert!(!report.pass);
    assert!(report.volume_residual < 0.0);
    assert!(theorem1_check(&t).is_err());

    let mut t = kuhn_reptiling();
    let first = t.tiles[0];
    t.tiles[1] = first;
    let report = verify_tiling(&t).unwrap();
    assert!(!report.pass);
    assert!(!report.overlapping.is_empty());

    let mut t = kuhn_reptiling();
    t.tiles[0] = t.tiles[0].transformed(|p| p * 1.5);
    assert!(!verify_tiling(&t).unwrap().pass);
}

#[test]
fn kuhn_fixtures() {
    let rep = verify_reptiling(&kuhn_reptiling()).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.scales.len(), 1);
    assert!((rep.scales[0] - 0.5).abs() < 1e-12);

    let gen = kuhn_two_scale_gentiling();
    assert_eq!(gen.tiles.len(), 15);
    assert!(verify_gentiling(&gen).unwrap().pass);
    let as_rep = verify_reptiling(&gen).unwrap();
    assert!(!as_rep.pass);
    assert_eq!(as_rep.scales.len(), 2);

    // the orthoscheme has right dihedrals, so the honest check stops at the premises
    let honest = theorem1_check(&kuhn_reptiling()).unwrap();
    assert_eq!(honest.outcome, Theorem1Outcome::PremiseViolated);
    assert!(!honest.premises.parent_acute);
}

#[test]
fn right_dihedrals_are_not_acute() {
    let t = Tetrahedron::new([0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 1.0, 1.0]);
    assert!(!t.is_acute().unwrap());
    let right = t
        .dihedral_angles()
        .unwrap()
        .iter()
        .filter(|d| (d.angle - FRAC_PI_2).abs() < 1e-12)
        .count();
    assert_eq!(right, 3);
}

#[test]
fn bounds_table() {
    let rows: Vec<_> = (2..=12)
        .map(|b| {
            let x = bounds(b).unwrap();
            (x.gentile, x.reptile, x.improved_reptile)
        })
        .collect();
    assert_eq!(rows[7], (9, 27, 27));
    assert_eq!(rows[8], (10, 27, 64));
    for (b, (g, r, i)) in (2..).zip(rows) {
        assert_eq!(g, b);
        assert!(r >= b && (2..=5usize).any(|k| k.pow(3) == r));
        assert!(i >= 3 * b && i >= r);
    }
    assert!(bounds(1).is_err());
}
