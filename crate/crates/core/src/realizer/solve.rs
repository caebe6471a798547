use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::BFGS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::penalty::{interior_angle, penalty_with, side_chains, PenaltyBreakdown, PenaltyWeights};
use super::verify::{verify_realization, VerificationReport};
use super::{Realization, RealizationJson, RealizeError};
use crate::combinatorics::{
    enumerate_candidates, CombinatorialSubdivision, ConstraintSet, CountSignature, VertexClass,
};
use crate::sphere::SpherePoint;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "value")]
pub enum DeltaMode {
    Free,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub margin: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: u64,
    /// Central-difference step for the gradient.
    pub fd_step: f64,
    /// Gradient norm below which a restart stops.
    pub grad_tol: f64,
    pub delta_mode: DeltaMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            margin: 0.01,
            restarts: 64,
            seed: 42,
            max_iterations: 400,
            fd_step: 1e-6,
            grad_tol: 1e-12,
            delta_mode: DeltaMode::Free,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Realized,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub status: Status,
    pub best_penalty: f64,
    pub breakdown: PenaltyBreakdown,
    pub best_realization: RealizationJson,
    /// Largest corner angle of the best realization.
    pub worst_angle: f64,
    /// Restart that produced the best realization.
    pub restart: usize,
    pub restarts_run: usize,
    pub verification: Option<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub index: usize,
    pub candidate_code: String,
    pub signature: CountSignature,
    pub report: FeasibilityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub r: usize,
    pub config: SolverConfig,
    pub candidates: Vec<CandidateReport>,
    pub realized: usize,
    pub undetermined: usize,
}

/// How each vertex position is derived from the parameter vector.
#[derive(Clone, Copy, Debug)]
enum Slot {
    Fixed(SpherePoint),
    /// Colatitude parameter on longitude 0.
    SideA(usize),
    /// Colatitude parameter on longitude `delta`.
    SideB(usize),
    /// Longitude and colatitude parameters at `i` and `i + 1`.
    Free(usize),
    /// Hanging vertex on the arc between two other vertices, at a fraction
    /// given by the logistic of parameter `t`.
    OnArc {
        t: usize,
        ends: (usize, usize),
    },
}

struct Layout {
    slots: Vec<Slot>,
    /// Evaluation order; arc endpoints come before the vertices on them.
    order: Vec<usize>,
    dim: usize,
    delta: Option<usize>,
    fixed_delta: f64,
}

impl Layout {
    fn new(s: &CombinatorialSubdivision, mode: DeltaMode) -> Self {
        let n = s.num_vertices();
        let (_, pb) = s.poles();
        let mut slots = vec![Slot::Fixed(SpherePoint::NORTH); n];
        slots[pb] = Slot::Fixed(SpherePoint::SOUTH);
        let mut dim = 0;
        let [side_a, side_b] = side_chains(s);
        for (chain, is_a) in [(&side_a, true), (&side_b, false)] {
            for &v in &chain[1..chain.len() - 1] {
                slots[v] = if is_a {
                    Slot::SideA(dim)
                } else {
                    Slot::SideB(dim)
                };
                dim += 1;
            }
        }

        // hanging vertices sit on the corner-to-corner side of their owner
        let mut arc_of = std::collections::BTreeMap::new();
        for (&h, &f) in s.hanging_owner() {
            let side = s.faces()[f]
                .sides()
                .into_iter()
                .find(|side| side.contains(&h))
                .expect("hanging vertex on owner walk");
            arc_of.insert(h, (side[0], side[side.len() - 1]));
        }
        let mut order: Vec<usize> = (0..n).filter(|v| !arc_of.contains_key(v)).collect();
        let mut placed = vec![false; n];
        for &v in &order {
            placed[v] = true;
        }
        let mut pending: Vec<usize> = arc_of.keys().copied().collect();
        loop {
            let before = pending.len();
            pending.retain(|&h| {
                let (a, b) = arc_of[&h];
                if placed[a] && placed[b] {
                    placed[h] = true;
                    order.push(h);
                    false
                } else {
                    true
                }
            });
            if pending.is_empty() || pending.len() == before {
                break;
            }
        }
        for (&h, &ends) in &arc_of {
            if !pending.contains(&h) {
                slots[h] = Slot::OnArc { t: dim, ends };
                dim += 1;
            }
        }
        // cyclic dependencies fall back to free placement
        for v in 0..n {
            let free = matches!(s.class(v), VertexClass::Full) || pending.contains(&v);
            if free {
                slots[v] = Slot::Free(dim);
                dim += 2;
            }
        }
        order.extend(pending);
        let (delta, fixed_delta) = match mode {
            DeltaMode::Free => {
                dim += 1;
                (Some(dim - 1), 0.0)
            }
            DeltaMode::Fixed(d) => (None, d),
        };
        Layout {
            slots,
            order,
            dim,
            delta,
            fixed_delta,
        }
    }

    fn realize(&self, x: &[f64]) -> Realization {
        let delta = self.delta.map_or(self.fixed_delta, |i| x[i]);
        let mut positions = vec![SpherePoint::NORTH; self.slots.len()];
        for &v in &self.order {
            positions[v] = match self.slots[v] {
                Slot::Fixed(p) => p,
                Slot::SideA(i) => SpherePoint::from_lon_colat(0.0, x[i]),
                Slot::SideB(i) => SpherePoint::from_lon_colat(delta, x[i]),
                Slot::Free(i) => SpherePoint::from_lon_colat(x[i], x[i + 1]),
                Slot::OnArc { t, ends } => {
                    let s = 1.0 / (1.0 + (-x[t]).exp());
                    let p = positions[ends.0].vec() * (1.0 - s) + positions[ends.1].vec() * s;
                    SpherePoint::from_vec(p).unwrap_or(positions[ends.0])
                }
            };
        }
        Realization { delta, positions }
    }
}

struct Problem<'a> {
    s: &'a CombinatorialSubdivision,
    layout: &'a Layout,
    weights: PenaltyWeights,
    step: f64,
    best: RefCell<(f64, Vec<f64>)>,
}

impl Problem<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let f = penalty_with(self.s, &self.layout.realize(x), &self.weights).total();
        let mut best = self.best.borrow_mut();
        if f < best.0 {
            *best = (f, x.to_vec());
        }
        f
    }
}

/// Borrowing handle so the best point survives a failed run.
struct Objective<'p, 'a>(&'p Problem<'a>);

impl CostFunction for Objective<'_, '_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> Result<f64, argmin::core::Error> {
        Ok(self.0.eval(x))
    }
}

impl Gradient for Objective<'_, '_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, x: &Vec<f64>) -> Result<Vec<f64>, argmin::core::Error> {
        let mut y = x.clone();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            let h = self.0.step;
            y[i] = x[i] + h;
            let fp = self.0.eval(&y);
            y[i] = x[i] - h;
            let fm = self.0.eval(&y);
            y[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        Ok(g)
    }
}

fn check_candidate(s: &CombinatorialSubdivision) -> Result<(), RealizeError> {
    let v = ConstraintSet::full().violations(s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(RealizeError::InvalidCandidate(v.join(", ")))
    }
}

/// Starting parameters: boundary vertices evenly spaced along their
/// meridians, interior vertices at a Tutte embedding with random edge
/// weights, which places them inside the lune without crossings.
fn start_params(
    s: &CombinatorialSubdivision,
    layout: &Layout,
    mode: DeltaMode,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let n = s.num_vertices();
    let delta = match mode {
        DeltaMode::Free => PI / 3.0,
        DeltaMode::Fixed(d) => d,
    };
    let mut x = vec![0.0; layout.dim];
    if let Some(i) = layout.delta {
        x[i] = delta;
    }

    // planar chart: (colatitude, offset) with the lune mapped onto the convex
    // region |offset| < sin(colatitude)
    let mut plane = vec![(0.0f64, 0.0f64); n];
    let mut fixed = vec![false; n];
    let (pa, pb) = s.poles();
    plane[pb] = (PI, 0.0);
    fixed[pa] = true;
    fixed[pb] = true;
    for (chain, sign) in side_chains(s).iter().zip([-1.0, 1.0]) {
        let k = chain.len() - 1;
        for (j, &v) in chain.iter().enumerate().take(k).skip(1) {
            let theta = PI * j as f64 / k as f64;
            plane[v] = (theta, sign * theta.sin());
            fixed[v] = true;
            if let Slot::SideA(i) | Slot::SideB(i) = layout.slots[v] {
                x[i] = theta;
            }
        }
    }
    for v in 0..n {
        if !fixed[v] {
            plane[v] = (PI / 2.0, 0.0);
        }
    }
    let edges = s.edges();
    let weights: Vec<f64> = edges.iter().map(|_| rng.gen_range(0.2..1.8)).collect();
    for _ in 0..500 {
        let mut acc = vec![(0.0, 0.0, 0.0); n];
        for (&(u, v), &w) in edges.iter().zip(&weights) {
            acc[u].0 += w * plane[v].0;
            acc[u].1 += w * plane[v].1;
            acc[u].2 += w;
            acc[v].0 += w * plane[u].0;
            acc[v].1 += w * plane[u].1;
            acc[v].2 += w;
        }
        for v in 0..n {
            if !fixed[v] {
                plane[v] = (acc[v].0 / acc[v].2, acc[v].1 / acc[v].2);
            }
        }
    }
    for v in 0..n {
        let (theta, off) = plane[v];
        let lon = delta * (0.5 + 0.5 * off / theta.sin().max(1e-9));
        match layout.slots[v] {
            Slot::Free(i) => {
                x[i] = lon;
                x[i + 1] = theta;
            }
            Slot::OnArc { t, ends } => {
                // fraction of the projection onto the arc
                let p = SpherePoint::from_lon_colat(lon, theta).vec();
                let (a, b) = (
                    plane_point(&plane, ends.0, delta),
                    plane_point(&plane, ends.1, delta),
                );
                let d = b - a;
                let frac = ((p - a).dot(d) / d.norm_squared().max(1e-18)).clamp(0.05, 0.95);
                x[t] = (frac / (1.0 - frac)).ln();
            }
            _ => {}
        }
    }
    x
}

fn plane_point(plane: &[(f64, f64)], v: usize, delta: f64) -> Vec3 {
    let (theta, off) = plane[v];
    let lon = delta * (0.5 + 0.5 * off / theta.sin().max(1e-9));
    SpherePoint::from_lon_colat(lon, theta).vec()
}

/// Seeded starting realization for `s`.
pub fn initialize(
    s: &CombinatorialSubdivision,
    config: &SolverConfig,
) -> Result<Realization, RealizeError> {
    check_candidate(s)?;
    Ok(heuristic_layout(s, config.seed, config.delta_mode))
}

/// The seeded starting layout without any constraint check; used to draw
/// candidates that the solver does not accept.
pub fn heuristic_layout(s: &CombinatorialSubdivision, seed: u64, mode: DeltaMode) -> Realization {
    let layout = Layout::new(s, mode);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    layout.realize(&start_params(s, &layout, mode, &mut rng))
}

fn max_corner_angle(s: &CombinatorialSubdivision, r: &Realization) -> f64 {
    let p = |v: usize| r.positions[v].vec();
    let mut worst = 0.0f64;
    for face in s.faces() {
        for &c in &face.corners {
            let (prev, next) = face.walk_neighbors(c).expect("corner on walk");
            worst = worst.max(interior_angle(p(c), p(next), p(prev)));
        }
    }
    worst
}

struct Attempt {
    penalty: f64,
    breakdown: PenaltyBreakdown,
    realization: Realization,
    restart: usize,
    verification: Option<VerificationReport>,
}

fn run_restart(
    s: &CombinatorialSubdivision,
    layout: &Layout,
    config: &SolverConfig,
    restart: usize,
) -> Attempt {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let x0 = start_params(s, layout, config.delta_mode, &mut rng);
    let problem = Problem {
        s,
        layout,
        weights: PenaltyWeights::working(config.margin),
        step: config.fd_step,
        best: RefCell::new((f64::INFINITY, x0.clone())),
    };
    problem.eval(&x0);
    let dim = x0.len();
    let identity: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let solver = BFGS::new(MoreThuenteLineSearch::new())
        .with_tolerance_grad(config.grad_tol)
        .and_then(|b| b.with_tolerance_cost(0.0))
        .expect("valid tolerances");
    // a failed line search still leaves the best point seen in `problem`
    let result = Executor::new(Objective(&problem), solver)
        .configure(|st| {
            st.param(x0)
                .inv_hessian(identity)
                .max_iters(config.max_iterations)
                .target_cost(0.0)
        })
        .run();
    if let Ok(res) = &result {
        if let Some(p) = res.state().get_best_param() {
            problem.eval(p);
        }
    }
    let x = problem.best.into_inner().1;
    let realization = layout.realize(&x);
    let breakdown = penalty_with(s, &realization, &PenaltyWeights::nominal(config.margin));
    let penalty = breakdown.total();
    let verification = (penalty <= 1e-12)
        .then(|| verify_realization(s, &realization, config.margin / 2.0).expect("shape matches"));
    Attempt {
        penalty,
        breakdown,
        realization,
        restart,
        verification,
    }
}

impl Attempt {
    fn realized(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| v.pass)
    }
}

/// Multistart minimization of the penalty. Restarts run in order and stop at
/// the first verified realization; otherwise the lowest penalty wins, ties
/// going to the earlier restart.
pub fn solve(
    s: &CombinatorialSubdivision,
    config: &SolverConfig,
) -> Result<FeasibilityReport, RealizeError> {
    check_candidate(s)?;
    if config.margin <= 0.0 || config.restarts == 0 {
        return Err(RealizeError::ParameterMismatch(
            "margin must be positive and restarts at least 1".into(),
        ));
    }
    if let DeltaMode::Fixed(d) = config.delta_mode {
        if !(d > 0.0 && d < FRAC_PI_2) {
            return Err(RealizeError::ParameterMismatch(format!(
                "fixed delta {d} outside (0, π/2)"
            )));
        }
    }
    let layout = Layout::new(s, config.delta_mode);
    let mut best: Option<Attempt> = None;
    let mut runs = 0;
    for restart in 0..config.restarts {
        let a = run_restart(s, &layout, config, restart);
        runs += 1;
        let done = a.realized();
        let better = match &best {
            None => true,
            Some(b) => done || (!b.realized() && a.penalty < b.penalty),
        };
        if better {
            best = Some(a);
        }
        if done {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let status = if best.realized() {
        Status::Realized
    } else {
        Status::Undetermined
    };
    Ok(FeasibilityReport {
        status,
        best_penalty: best.penalty,
        breakdown: best.breakdown,
        worst_angle: max_corner_angle(s, &best.realization),
        best_realization: best.realization.to_json(&s.canonical_code()),
        restart: best.restart,
        restarts_run: runs,
        verification: best.verification,
    })
}

/// Runs [`solve`] on every candidate with `r` faces under the full
/// constraints. Candidates are solved in parallel; the report order follows
/// the enumeration.
pub fn search_order(r: usize, config: &SolverConfig) -> Result<SearchReport, RealizeError> {
    let candidates = enumerate_candidates(r, ConstraintSet::full())?;
    let reports = candidates
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            Ok(CandidateReport {
                index,
                candidate_code: hex::encode(s.canonical_code()),
                signature: s.signature(),
                report: solve(s, config)?,
            })
        })
        .collect::<Result<Vec<_>, RealizeError>>()?;
    let realized = reports
        .iter()
        .filter(|c| c.report.status == Status::Realized)
        .count();
    Ok(SearchReport {
        r,
        config: *config,
        undetermined: reports.len() - realized,
        realized,
        candidates: reports,
    })
}
