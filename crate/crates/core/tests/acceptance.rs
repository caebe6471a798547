//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

mod common;

use common::synthetic_tiling;
use lune_forge_core::combinatorics::{verify_count_identities, verify_degrees};
use lune_forge_core::realizer::{
    search_order, solve, verify_realization, Realization, SolverConfig, Status, ViolationCode,
};
use lune_forge_core::sphere::{
    angle_at, arc_length, ccw_angle_at, supplementary_side, SphericalTriangleMetrics,
};
use lune_forge_core::tetra::{
    bounds, theorem1_check, theorem1_check_forced, Bounds, Tetrahedron, Theorem1Outcome,
};
use lune_forge_core::{
    enumerate_candidates, signature_solutions, CombinatorialSubdivision, ConstraintSet,
    SpherePoint, VertexClass,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SIDE_TOL: f64 = 1e-9;
const ANGLE_SUM_TOL: f64 = 1e-9;
const AREA_SUM_TOL: f64 = 1e-7;
const DIHEDRAL_ORACLE_TOL: f64 = 1e-9;
const RIGHT_ANGLE_TOL: f64 = 1e-12;
const VERIFY_EPS: f64 = 0.005;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;
type Signatures = &'static [(usize, usize, usize)];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn signature_arithmetic() -> Outcome {
    let expected: [(usize, Signatures); 4] = [
        (7, &[]),
        (8, &[(2, 0, 4)]),
        (9, &[(2, 0, 5), (2, 1, 4)]),
        (10, &[(2, 0, 6), (2, 1, 5), (2, 2, 4), (3, 0, 4)]),
    ];
    let start = Instant::now();
    let got: Vec<Vec<(usize, usize, usize)>> = expected
        .iter()
        .map(|(r, _)| {
            signature_solutions(*r)
                .iter()
                .map(|s| (s.f, s.h, s.s))
                .collect()
        })
        .collect();
    let elapsed = start.elapsed();
    for ((r, want), got) in expected.iter().zip(&got) {
        ensure(got.as_slice() == *want, || format!("r={r}: {got:?}"))?;
    }
    ensure(elapsed < Duration::from_millis(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("r = 7..10 exact in {elapsed:?}"))
}

fn count_selections() -> Vec<ConstraintSet> {
    ConstraintSet::all_triangular()
        .into_iter()
        .filter(|c| c.count_identity)
        .collect()
}

fn minimal_face_count() -> Outcome {
    let full8 = enumerate_candidates(8, ConstraintSet::full()).map_err(|e| e.to_string())?;
    ensure(full8.is_empty(), || {
        format!("{} candidates at r=8", full8.len())
    })?;
    let sels = count_selections();
    for r in 2..=7 {
        for sel in &sels {
            let n = enumerate_candidates(r, *sel)
                .map_err(|e| e.to_string())?
                .len();
            ensure(n == 0, || format!("{n} candidates at r={r} under {sel}"))?;
        }
    }
    Ok(format!(
        "r=8 full empty; r≤7 empty under {} count selections",
        sels.len()
    ))
}

fn figure_one() -> Outcome {
    let found =
        enumerate_candidates(8, ConstraintSet::relaxed_figure1()).map_err(|e| e.to_string())?;
    ensure(found.len() == 1, || format!("{} candidates", found.len()))?;
    let degrees = verify_degrees(&found[0]);
    let low = degrees.count_class(VertexClass::Side, 3);
    ensure(low >= 2, || format!("{low} side vertices of degree 3"))?;
    Ok(format!("1 candidate, {low} side vertices of degree 3"))
}

fn count_identities() -> Outcome {
    let per_selection = ConstraintSet::all_triangular()
        .into_par_iter()
        .map(|sel| {
            let top = if sel.count_identity { 10 } else { 7 };
            let mut checked = 0usize;
            for r in 2..=top {
                for s in enumerate_candidates(r, sel).map_err(|e| e.to_string())? {
                    let rep = verify_count_identities(&s);
                    ensure(rep.pass(), || format!("{sel} r={r}: {rep:?}"))?;
                    checked += 1;
                }
            }
            Ok(checked)
        })
        .collect::<Result<Vec<usize>, String>>()?;
    let checked: usize = per_selection.iter().sum();
    Ok(format!(
        "{checked} candidates over 16 selections (r ≤ 10 with the count bounds, r ≤ 7 without)"
    ))
}

fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    SpherePoint::from_lon_colat(rng.gen_range(0.0..2.0 * PI), z.acos())
}

fn spherical_core() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut triangles = 0;
    while triangles < 1000 {
        let (p, q, r) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        let Ok(m) = SphericalTriangleMetrics::measure(p, q, r) else {
            continue;
        };
        let sizes = [m.alpha, m.beta, m.gamma, m.a, m.b, m.c];
        if !sizes.iter().all(|&x| x > 0.05 && x < PI - 0.05) {
            continue;
        }
        let a = supplementary_side(m.alpha, m.beta, m.gamma).map_err(|e| e.to_string())?;
        worst = worst.max((a - m.a).abs());
        triangles += 1;
    }
    ensure(worst < SIDE_TOL, || format!("side error {worst:e}"))?;

    let mut longest = 0.0f64;
    for _ in 0..1000 {
        let alpha = rng.gen_range(0.02..FRAC_PI_2);
        let beta = rng.gen_range((FRAC_PI_2 - alpha + 0.01).max(0.02)..FRAC_PI_2);
        let gamma = rng.gen_range((PI - alpha - beta).max(0.0) + 1e-9..FRAC_PI_2);
        let a = supplementary_side(alpha, beta, gamma).map_err(|e| e.to_string())?;
        longest = longest.max(a);
    }
    ensure(longest < FRAC_PI_2, || {
        format!("acute triple gave side {longest}")
    })?;
    Ok(format!(
        "side error {worst:.1e} over 1000 triangles; longest acute side {longest:.4}"
    ))
}

fn realized(s: &CombinatorialSubdivision) -> Result<Realization, String> {
    let report = solve(s, &SolverConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.status == Status::Realized, || "not realized".into())?;
    Realization::from_json(&report.best_realization).map_err(|e| e.to_string())
}

fn verifier_soundness() -> Outcome {
    let cands = enumerate_candidates(10, ConstraintSet::full()).map_err(|e| e.to_string())?;
    let plain = &cands[0];
    let good = realized(plain)?;
    let rep = verify_realization(plain, &good, VERIFY_EPS).map_err(|e| e.to_string())?;
    ensure(rep.pass, || {
        format!("certificate fails: {:?}", rep.violations)
    })?;

    let v = (0..plain.num_vertices())
        .find(|&v| plain.class(v) == VertexClass::Full)
        .ok_or("no full vertex")?;
    let (_, face) = plain
        .faces()
        .iter()
        .enumerate()
        .find(|(_, f)| f.corners.contains(&v))
        .ok_or("no face at the full vertex")?;
    let rest: Vec<usize> = face.corners.iter().copied().filter(|&c| c != v).collect();
    let (b, c) = (good.positions[rest[0]].vec(), good.positions[rest[1]].vec());

    // corner forced to at least π/2
    let mut wide = good.clone();
    let mid = (b + c).normalized().ok_or("antipodal corners")?;
    let start = good.positions[v].vec();
    let (prev, next) = face.walk_neighbors(v).ok_or("walk")?;
    let mut t = 0.0;
    loop {
        let p = &wide.positions;
        let a = ccw_angle_at(p[v], p[next], p[prev]).unwrap_or(0.0);
        if a >= FRAC_PI_2 {
            break;
        }
        t += 0.01;
        ensure(t < 1.0, || "corner never opened".into())?;
        wide.positions[v] = SpherePoint::from_vec(start * (1.0 - t) + mid * t).ok_or("zero")?;
    }
    let rep = verify_realization(plain, &wide, VERIFY_EPS).map_err(|e| e.to_string())?;
    ensure(!rep.pass && rep.has(ViolationCode::CornerAngle), || {
        format!("{:?}", rep.violations)
    })?;

    // face orientation flipped
    let mut flipped = good.clone();
    let n = b.cross(c).normalized().ok_or("degenerate edge")?;
    flipped.positions[v] = SpherePoint::from_vec(start - n * (2.0 * start.dot(n))).ok_or("zero")?;
    let rep = verify_realization(plain, &flipped, VERIFY_EPS).map_err(|e| e.to_string())?;
    ensure(!rep.pass && rep.has(ViolationCode::Orientation), || {
        format!("{:?}", rep.violations)
    })?;

    // hanging vertex moved 0.05 off its arc
    let hanging = cands
        .iter()
        .find(|s| s.signature().h > 0)
        .ok_or("no candidate with hanging vertices")?;
    let mut off = realized(hanging)?;
    let (&h, &owner) = hanging.hanging_owner().iter().next().ok_or("no owner")?;
    let (u, w) = hanging.faces()[owner].walk_neighbors(h).ok_or("walk")?;
    let n = off.positions[u]
        .vec()
        .cross(off.positions[w].vec())
        .normalized()
        .ok_or("degenerate side")?;
    let (sn, cs) = 0.05f64.sin_cos();
    off.positions[h] = SpherePoint::from_vec(off.positions[h].vec() * cs + n * sn).ok_or("zero")?;
    let rep = verify_realization(hanging, &off, VERIFY_EPS).map_err(|e| e.to_string())?;
    ensure(!rep.pass && rep.has(ViolationCode::HangingOffArc), || {
        format!("{:?}", rep.violations)
    })?;

    Ok("certificate passes; corner_angle, orientation, hanging_off_arc raised".into())
}

/// Certificate measurements recomputed from unsigned angles and arc lengths.
struct Recomputed {
    max_corner: f64,
    max_edge: f64,
    angle_residual: f64,
    area_residual: f64,
}

fn recompute(s: &CombinatorialSubdivision, r: &Realization) -> Result<Recomputed, String> {
    let p = &r.positions;
    let n = s.num_vertices();
    let mut sums = vec![0.0; n];
    let mut max_corner = 0.0f64;
    let mut area = 0.0;
    for face in s.faces() {
        let k = face.walk.len();
        let mut total = 0.0;
        for (i, &v) in face.walk.iter().enumerate() {
            let (prev, next) = (face.walk[(i + k - 1) % k], face.walk[(i + 1) % k]);
            let a = angle_at(p[v], p[prev], p[next]).map_err(|e| e.to_string())?;
            if face.is_corner(v) {
                max_corner = max_corner.max(a);
            }
            sums[v] += a;
            total += a;
        }
        area += total - (k as f64 - 2.0) * PI;
    }
    let mut angle_residual = 0.0f64;
    for (v, sum) in sums.iter().enumerate() {
        let target = match s.class(v) {
            VertexClass::Pole => r.delta,
            VertexClass::Side => PI,
            VertexClass::Full | VertexClass::Hanging => 2.0 * PI,
        };
        angle_residual = angle_residual.max((sum - target).abs());
    }
    let mut max_edge = 0.0f64;
    for (u, v) in s.edges() {
        max_edge = max_edge.max(arc_length(p[u], p[v]).map_err(|e| e.to_string())?);
    }
    Ok(Recomputed {
        max_corner,
        max_edge,
        angle_residual,
        area_residual: (area - 2.0 * r.delta).abs(),
    })
}

fn ten_face_realization() -> Outcome {
    let config = SolverConfig::default();
    let start = Instant::now();
    let report = search_order(10, &config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let cands = enumerate_candidates(10, ConstraintSet::full()).map_err(|e| e.to_string())?;
    let mut good = 0;
    let mut detail = String::new();
    for c in &report.candidates {
        if c.report.status != Status::Realized {
            continue;
        }
        let s = &cands[c.index];
        let r = Realization::from_json(&c.report.best_realization).map_err(|e| e.to_string())?;
        let m = recompute(s, &r)?;
        if m.max_corner <= FRAC_PI_2 - config.margin
            && m.max_edge < FRAC_PI_2
            && m.angle_residual < ANGLE_SUM_TOL
            && m.area_residual < AREA_SUM_TOL
        {
            good += 1;
            if detail.is_empty() {
                detail = format!(
                    "worst corner {:.4}, longest edge {:.4}, angle residual {:.1e}, area residual {:.1e}",
                    m.max_corner, m.max_edge, m.angle_residual, m.area_residual
                );
            }
        }
    }
    ensure(good >= 1, || "no realized candidate".into())?;
    ensure(elapsed < Duration::from_secs(600), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{good}/{} realized in {elapsed:.1?}; {detail}",
        report.candidates.len()
    ))
}

fn nine_face_search() -> Outcome {
    let config = SolverConfig::default();
    let a = search_order(9, &config).map_err(|e| e.to_string())?;
    let b = search_order(9, &config).map_err(|e| e.to_string())?;
    let (ja, jb) = (
        serde_json::to_string(&a).map_err(|e| e.to_string())?,
        serde_json::to_string(&b).map_err(|e| e.to_string())?,
    );
    ensure(ja == jb, || "reports differ".into())?;
    let expected = enumerate_candidates(9, ConstraintSet::full())
        .map_err(|e| e.to_string())?
        .len();
    ensure(a.candidates.len() == expected, || {
        format!("{} of {expected} candidates", a.candidates.len())
    })?;
    Ok(format!(
        "{} candidates, Realized: {}, Undetermined: {}; reports identical",
        a.candidates.len(),
        a.realized,
        a.undetermined
    ))
}

/// Dihedral angle along `(i, j)`: π minus the angle between the outward
/// normals of the two facets meeting there.
fn normal_dihedral(t: &Tetrahedron, i: usize, j: usize) -> f64 {
    let outward = |k: usize| {
        let idx: Vec<usize> = (0..4).filter(|&x| x != k).collect();
        let (a, b, c) = (t.v[idx[0]], t.v[idx[1]], t.v[idx[2]]);
        let n = (b - a).cross(c - a).normalized().unwrap();
        if n.dot(t.v[k] - a) > 0.0 {
            -n
        } else {
            n
        }
    };
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
    PI - outward(k).dot(outward(l)).clamp(-1.0, 1.0).acos()
}

fn tetra_module() -> Outcome {
    let regular = common::regular();
    let target = (1.0f64 / 3.0).acos();
    for d in regular.dihedral_angles().map_err(|e| e.to_string())? {
        let oracle = normal_dihedral(&regular, d.edge.0, d.edge.1);
        ensure((d.angle - oracle).abs() < DIHEDRAL_ORACLE_TOL, || {
            format!("{d:?} vs {oracle}")
        })?;
        ensure((oracle - target).abs() < DIHEDRAL_ORACLE_TOL, || {
            format!("oracle {oracle}")
        })?;
    }
    ensure(regular.is_acute().map_err(|e| e.to_string())?, || {
        "regular not acute".into()
    })?;

    let ortho = Tetrahedron::new([0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 1.0, 1.0]);
    let right = ortho
        .dihedral_angles()
        .map_err(|e| e.to_string())?
        .iter()
        .any(|d| (d.angle - FRAC_PI_2).abs() < RIGHT_ANGLE_TOL);
    ensure(right, || "no right dihedral".into())?;
    ensure(!ortho.is_acute().map_err(|e| e.to_string())?, || {
        "orthoscheme acute".into()
    })?;

    let b9 = bounds(9).map_err(|e| e.to_string())?;
    let b10 = bounds(10).map_err(|e| e.to_string())?;
    let row = |b: Bounds| (b.gentile, b.reptile, b.improved_reptile);
    ensure(row(b9) == (9, 27, 27), || format!("{b9:?}"))?;
    ensure(row(b10) == (10, 27, 64), || format!("{b10:?}"))?;
    Ok("regular acute at arccos(1/3); orthoscheme right; bounds (9,27,27) (10,27,64)".into())
}

fn theorem_harness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut premise, mut contradiction) = (0, 0);
    for _ in 0..120 {
        let target = rng.gen_range(2..=8);
        let t = synthetic_tiling(&mut rng, target);
        let honest = theorem1_check(&t).map_err(|e| e.to_string())?;
        match honest.outcome {
            Theorem1Outcome::PremiseViolated => {
                ensure(!honest.premises.hold(), || {
                    "premise violation not named".into()
                })?;
                premise += 1;
            }
            Theorem1Outcome::Contradiction => contradiction += 1,
            Theorem1Outcome::Consistent => {
                return Err(format!("consistent with r={}", honest.r));
            }
        }
        let forced = theorem1_check_forced(&t).map_err(|e| e.to_string())?;
        ensure(forced.contradiction(), || {
            format!("forced run passed with r={}", forced.r)
        })?;
    }
    Ok(format!(
        "120 tilings: {premise} premise violations, {contradiction} contradictions, forced runs all flagged"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("signature arithmetic", signature_arithmetic),
        ("no candidates below nine faces", minimal_face_count),
        ("relaxed eight-face network", figure_one),
        ("count identities", count_identities),
        ("spherical core oracles", spherical_core),
        ("verifier soundness", verifier_soundness),
        ("ten-face realization", ten_face_realization),
        ("nine-face search", nine_face_search),
        ("tetrahedron checks and bounds", tetra_module),
        ("link-count harness", theorem_harness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS {name}: {detail} [{elapsed:.1?}]",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
