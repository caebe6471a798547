use std::collections::BTreeSet;
use std::sync::OnceLock;

use lune_forge_core::combinatorics::{verify_count_identities, verify_degrees};
use lune_forge_core::{
    enumerate_candidates, signature_solutions, CombinatorialSubdivision, ConstraintSet, VertexClass,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn keys(sel: &ConstraintSet, candidates: &[CombinatorialSubdivision]) -> BTreeSet<Vec<u8>> {
    candidates.iter().map(|s| sel.candidate_key(s)).collect()
}

#[test]
fn outputs_satisfy_their_selection() {
    for r in 2..=7 {
        for sel in ConstraintSet::all_triangular() {
            for s in enumerate_candidates(r, sel).unwrap() {
                assert_eq!(s.num_faces(), r);
                assert!(
                    sel.is_satisfied(&s),
                    "r={r} {sel}: {:?}",
                    sel.violations(&s)
                );
            }
        }
    }
}

#[test]
fn stronger_selections_give_subsets() {
    for r in 2..=7 {
        let sels = ConstraintSet::all_triangular();
        let results: Vec<_> = sels
            .iter()
            .map(|&sel| enumerate_candidates(r, sel).unwrap())
            .collect();
        for (i, a) in sels.iter().enumerate() {
            for (j, b) in sels.iter().enumerate() {
                if a.implies(b) {
                    let strong = keys(b, &results[i]);
                    let weak = keys(b, &results[j]);
                    assert!(strong.is_subset(&weak), "r={r}: {a} not within {b}");
                }
            }
        }
    }
}

#[test]
fn outputs_are_canonical_and_distinct() {
    for r in [8, 9, 10] {
        for sel in [ConstraintSet::full(), ConstraintSet::relaxed_figure1()] {
            let out = enumerate_candidates(r, sel).unwrap();
            let mut seen = BTreeSet::new();
            for s in &out {
                assert_eq!(s.canonical_form().canonical_code(), s.canonical_code());
                assert!(
                    seen.insert(sel.candidate_key(s)),
                    "duplicate at r={r} {sel}"
                );
            }
            let sorted: Vec<_> = out.iter().map(|s| sel.candidate_key(s)).collect();
            let mut expected = sorted.clone();
            expected.sort();
            assert_eq!(sorted, expected);
        }
    }
}

#[test]
fn signatures_come_from_the_count_solutions() {
    for r in 8..=10 {
        let allowed: BTreeSet<_> = signature_solutions(r).into_iter().collect();
        for s in enumerate_candidates(r, ConstraintSet::full()).unwrap() {
            assert!(allowed.contains(&s.signature()));
            assert!(verify_count_identities(&s).pass());
            assert!(verify_degrees(&s).pass);
        }
    }
}

#[test]
fn hanging_vertices_lie_inside_their_owner_side() {
    for r in 6..=10 {
        for s in enumerate_candidates(r, ConstraintSet::relaxed_figure1()).unwrap() {
            let hanging = s.count_class(VertexClass::Hanging);
            assert_eq!(s.hanging_owner().len(), hanging);
            for (&h, &f) in s.hanging_owner() {
                let face = &s.faces()[f];
                assert!(face.walk.contains(&h));
                assert!(!face.is_corner(h));
                for (g, other) in s.faces().iter().enumerate() {
                    if g != f && other.walk.contains(&h) {
                        assert!(other.is_corner(h));
                    }
                }
            }
        }
    }
}

#[test]
fn full_constraints_at_small_counts() {
    assert!(enumerate_candidates(8, ConstraintSet::full())
        .unwrap()
        .is_empty());
    assert!(enumerate_candidates(9, ConstraintSet::full())
        .unwrap()
        .is_empty());
    let ten: Vec<_> = enumerate_candidates(10, ConstraintSet::full())
        .unwrap()
        .iter()
        .map(|s| (s.signature().f, s.signature().h, s.signature().s))
        .collect();
    assert_eq!(ten.len(), 2);
    assert!(ten.contains(&(2, 0, 6)));
    assert!(ten.contains(&(2, 2, 4)));
}

fn corpus() -> &'static [CombinatorialSubdivision] {
    static CORPUS: OnceLock<Vec<CombinatorialSubdivision>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = enumerate_candidates(10, ConstraintSet::full()).unwrap();
        out.extend(enumerate_candidates(8, ConstraintSet::relaxed_figure1()).unwrap());
        out.extend(enumerate_candidates(7, ConstraintSet::triangles_only()).unwrap());
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_code_ignores_labels(pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let all = corpus();
        let s = &all[pick.index(all.len())];
        let mut perm: Vec<usize> = (0..s.num_vertices()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let t = s.relabeled(&perm).unwrap();
        prop_assert_eq!(t.canonical_code(), s.canonical_code());
        prop_assert_eq!(t.signature(), s.signature());
    }

    #[test]
    fn canonical_code_is_symmetry_invariant(
        pick in any::<prop::sample::Index>(),
        swap in any::<bool>(),
        mirror in any::<bool>(),
    ) {
        let all = corpus();
        let s = &all[pick.index(all.len())];
        let t = s.apply_symmetry(swap, mirror);
        prop_assert_eq!(t.canonical_code(), s.canonical_code());
        prop_assert_eq!(t.network_code(), s.network_code());
        prop_assert!(verify_count_identities(&t).pass() == verify_count_identities(s).pass());
    }

    #[test]
    fn json_round_trip(pick in any::<prop::sample::Index>()) {
        let all = corpus();
        let s = &all[pick.index(all.len())];
        let text = serde_json::to_string(s).unwrap();
        let back: CombinatorialSubdivision = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.canonical_code(), s.canonical_code());
    }
}
