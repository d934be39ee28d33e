//! Seeded property suite: every invariant of the library checked on a
//! deterministic corpus, each reported with its worst residual.
//!
//! A property evaluates a list of cases; each case yields a nonnegative
//! residual (the amount by which the property is violated) and the property
//! passes when the worst residual is within its tolerance. Cases that would
//! build an operator larger than the dimension cap are counted as skipped,
//! and a property whose cases are all skipped is reported as skipped rather
//! than failed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::corpus::{
    item_rng, random_classical_mixture, random_mixture, random_orthogonal_family, random_projection_any_rank,
    random_projection_pair, random_rep, random_two_block, CorpusRng,
};
use crate::distances::{
    atom_cost_hamming, atom_cost_l1_with_cap, birkhoff_gap_identity, build_cost_operator, check_comult_inequality,
    check_convolution_subadditivity, check_distance_one, check_triangle_operator, distance_tensor, distances,
    lower_bound_words, optimize_unitary, self_distance_tensor, tv_upper_bound_classical, DistanceConfig, Metric,
};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::linalg::{
    haar_unitary, hs_norm_sq, join, kron_with_cap, max_abs, meet, min_eigenvalue, pqp_power, principal_cosines,
    trace_norm, CMatrix, HermitianMatrix, ProjectionMatrix, DEFAULT_DIM_CAP, MEET_SV_TOL,
};
use crate::magic::MagicUnitary;
use crate::perm::Permutation;
use crate::states::{AtomicTrace, StateMixture, Word, WordCorpusConfig};
use crate::transport::{brute_force_ot, classical_w1, hamming, solve_ot, CostTable};

/// Tolerance-override alias covering every property that rests on an
/// eigen- or singular-value decomposition.
pub const EIGEN_GROUP: &str = "eigen";

/// Squarings used by the `(pqp)^k` cross-check, so `k = 2^24`.
const PQP_SQUARINGS: u32 = 24;
/// Pairs with a principal cosine in `(1 − 1e-6, 1 − MEET_SV_TOL)` (squared
/// on the left) are too slow for the iteration and are left out.
const PQP_ANGLE_CUTOFF: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dim_cap: usize,
    /// Per-property tolerance overrides; keys are property names or
    /// [`EIGEN_GROUP`]. A property name wins over the group alias.
    pub tolerances: BTreeMap<String, f64>,
    pub words: WordCorpusConfig,
    pub restarts: usize,
    pub steps: usize,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let d = DistanceConfig::default();
        SuiteConfig {
            seed: 0,
            dim_cap: DEFAULT_DIM_CAP,
            tolerances: BTreeMap::new(),
            words: d.words,
            restarts: d.restarts,
            steps: d.steps,
            exec: Execution::Auto,
        }
    }
}

impl SuiteConfig {
    fn distance_config(&self) -> DistanceConfig {
        DistanceConfig {
            dim_cap: self.dim_cap,
            restarts: self.restarts,
            steps: self.steps,
            seed: self.seed,
            words: WordCorpusConfig { seed: self.words.seed ^ self.seed, ..self.words },
            exec: self.exec,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub status: Status,
    /// Largest residual over evaluated cases; absent when nothing ran.
    pub worst: Option<f64>,
    pub tolerance: f64,
    pub cases: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub dim_cap: usize,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width text table, one line per property.
    pub fn to_table(&self) -> String {
        let width = self.properties.iter().map(|p| p.name.len()).max().unwrap_or(8);
        let mut out = format!(
            "{:<7} {:<width$} {:>12} {:>9} {:>6} {:>7}\n",
            "status", "property", "worst", "tol", "cases", "skipped"
        );
        for p in &self.properties {
            let status = match p.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            let worst = p.worst.map_or("-".to_string(), |w| format!("{w:.3e}"));
            out.push_str(&format!(
                "{status:<7} {:<width$} {worst:>12} {:>9.1e} {:>6} {:>7}\n",
                p.name, p.tolerance, p.cases, p.skipped
            ));
            if let Some(e) = &p.error {
                out.push_str(&format!("        error: {e}\n"));
            }
        }
        let verdict = if self.passed { "all properties pass" } else { "some properties FAIL" };
        out.push_str(&format!("seed {} dim_cap {}: {verdict}\n", self.seed, self.dim_cap));
        out
    }
}

type Case = Result<f64>;

struct Ctx {
    seed: u64,
    cap: usize,
    dist: DistanceConfig,
    exec: Execution,
}

impl Ctx {
    fn rng(&self, stream: u64, index: usize) -> CorpusRng {
        item_rng(self.seed, stream, index as u64)
    }

    /// `count` independent cases, each with its own seeded generator.
    fn cases(&self, stream: u64, count: usize, f: impl Fn(&mut CorpusRng, usize) -> Case + Sync) -> Vec<Case> {
        map_indices(count, self.exec, |k| f(&mut self.rng(stream, k), k))
    }
}

struct Property {
    name: &'static str,
    eigen: bool,
    tolerance: f64,
    run: fn(&Ctx) -> Vec<Case>,
}

const fn prop(name: &'static str, eigen: bool, tolerance: f64, run: fn(&Ctx) -> Vec<Case>) -> Property {
    Property { name, eigen, tolerance, run }
}

/// Sorted by name.
const PROPERTIES: &[Property] = &[
    prop("distances.birkhoff_gap", false, 1e-8, birkhoff_gap),
    prop("distances.classical_recovery", false, 1e-8, classical_recovery),
    prop("distances.comult_inequality", true, 1e-9, comult_inequality),
    prop("distances.convolution_subadditivity", false, 1e-8, convolution_subadditivity),
    prop("distances.cost_operator_psd", true, 1e-9, cost_operator_psd),
    prop("distances.distance_one", false, 1e-9, distance_one),
    prop("distances.distance_one_converse", false, 1e-8, distance_one_converse),
    prop("distances.hamming_cost_triangle", false, 1e-8, hamming_cost_triangle),
    prop("distances.optimizer_realignment", false, 1e-6, optimizer_realignment),
    prop("distances.pointwise_cost_chain", false, 1e-9, pointwise_cost_chain),
    prop("distances.report_chain", false, 1e-9, report_chain),
    prop("distances.self_distance", false, 1e-9, self_distance),
    prop("distances.self_distance_estimate", false, 1e-8, self_distance_estimate),
    prop("distances.tensor_symmetry", false, 1e-10, tensor_symmetry),
    prop("distances.tensor_triangle", false, 1e-8, tensor_triangle),
    prop("distances.triangle_operator", true, 1e-9, triangle_operator),
    prop("distances.tv_bound", false, 1e-8, tv_bound),
    prop("distances.word_bound_consistency", false, 1e-8, word_bound_consistency),
    prop("linalg.meet_lattice_axioms", true, 1e-7, meet_lattice_axioms),
    prop("linalg.min_versus_sum", true, 1e-8, min_versus_sum),
    prop("linalg.powers_stormer", true, 1e-9, powers_stormer),
    prop("linalg.pqp_entries", true, 1e-4, pqp_entries),
    prop("linalg.pqp_trace", true, 1e-6, pqp_trace),
    prop("linalg.tensor_versus_min", true, 1e-7, tensor_versus_min),
    prop("linalg.trace_identity", true, 1e-8, trace_identity),
    prop("magic.classical_convolution", false, 0.0, classical_convolution),
    prop("magic.convolution_coassociative", false, 1e-10, convolution_coassociative),
    prop("magic.corpus_validation", false, 1e-8, corpus_validation),
    prop("magic.row_orthogonality", false, 1e-7, row_orthogonality),
    prop("states.classical_word_values", false, 0.0, classical_word_values),
    prop("states.convolution_birkhoff", false, 1e-9, convolution_birkhoff),
    prop("states.omega_bistochastic", false, 1e-8, omega_bistochastic),
    prop("states.word_conjugation_invariance", false, 1e-10, word_conjugation_invariance),
    prop("transport.hamming_axioms", false, 1e-12, hamming_axioms),
    prop("transport.optimality_certificate", false, 1e-9, optimality_certificate),
    prop("transport.ot_triangle", false, 1e-8, ot_triangle),
    prop("transport.simplex_matches_brute_force", false, 1e-9, simplex_matches_brute_force),
];

/// Every property name, sorted.
pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|p| p.name).collect()
}

/// Names of the properties in the eigen group.
pub fn eigen_properties() -> Vec<&'static str> {
    PROPERTIES.iter().filter(|p| p.eigen).map(|p| p.name).collect()
}

fn resolve_tolerance(p: &Property, overrides: &BTreeMap<String, f64>) -> f64 {
    if let Some(&t) = overrides.get(p.name) {
        return t;
    }
    if p.eigen {
        if let Some(&t) = overrides.get(EIGEN_GROUP) {
            return t;
        }
    }
    p.tolerance
}

fn check_overrides(overrides: &BTreeMap<String, f64>) -> Result<()> {
    for (k, v) in overrides {
        if k != EIGEN_GROUP && !PROPERTIES.iter().any(|p| p.name == k) {
            return Err(Error::Parse(format!("unknown property {k:?}")));
        }
        if !(v.is_finite() && *v >= 0.0) {
            return Err(Error::Parse(format!("tolerance for {k} must be a nonnegative number")));
        }
    }
    Ok(())
}

fn summarize(p: &Property, tolerance: f64, cases: Vec<Case>) -> PropertyResult {
    let mut worst: Option<f64> = None;
    let (mut ran, mut skipped) = (0, 0);
    let mut error = None;
    for case in cases {
        match case {
            Ok(r) if r.is_nan() => {
                ran += 1;
                error.get_or_insert_with(|| "residual is NaN".to_string());
            }
            Ok(r) => {
                ran += 1;
                worst = Some(worst.map_or(r, |w: f64| w.max(r)));
            }
            Err(Error::DimensionOverflow { .. }) => skipped += 1,
            Err(e) => {
                error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let status = if error.is_some() {
        Status::Fail
    } else if ran == 0 {
        Status::Skipped
    } else if worst.is_some_and(|w| w <= tolerance) {
        Status::Pass
    } else {
        Status::Fail
    };
    PropertyResult { name: p.name.to_string(), status, worst, tolerance, cases: ran, skipped, error }
}

/// Runs the named properties (all of them when `names` is empty), in name
/// order.
pub fn run_properties(config: &SuiteConfig, names: &[&str]) -> Result<SuiteReport> {
    check_overrides(&config.tolerances)?;
    if config.dim_cap == 0 {
        return Err(Error::Parse("dim_cap must be at least 1".into()));
    }
    for name in names {
        if !PROPERTIES.iter().any(|p| p.name == *name) {
            return Err(Error::Parse(format!("unknown property {name:?}")));
        }
    }
    let ctx = Ctx { seed: config.seed, cap: config.dim_cap, dist: config.distance_config(), exec: config.exec };
    let properties: Vec<PropertyResult> = PROPERTIES
        .iter()
        .filter(|p| names.is_empty() || names.contains(&p.name))
        .map(|p| summarize(p, resolve_tolerance(p, &config.tolerances), (p.run)(&ctx)))
        .collect();
    let passed = properties.iter().all(|p| p.status != Status::Fail);
    Ok(SuiteReport { seed: config.seed, dim_cap: config.dim_cap, passed, properties })
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    run_properties(config, &[])
}

// ---------------------------------------------------------------------------
// shared corpus pieces

fn n_for(k: usize) -> usize {
    2 + k % 4
}

fn corpus_mixture(rng: &mut CorpusRng, n: usize) -> StateMixture {
    if rng.random_bool(0.25) {
        random_classical_mixture(n, 4, rng)
    } else {
        random_mixture(n, 3, 3, rng)
    }
}

fn corpus_pair(ctx: &Ctx, k: usize) -> (StateMixture, StateMixture) {
    let mut rng = ctx.rng(0x5041_4952, k);
    let n = n_for(k);
    (corpus_mixture(&mut rng, n), corpus_mixture(&mut rng, n))
}

const MIXTURE_PAIRS: usize = 100;

fn gap(x: f64) -> f64 {
    x.max(0.0)
}

// ---------------------------------------------------------------------------
// linalg

fn projection_dim(rng: &mut CorpusRng) -> usize {
    rng.random_range(1..=8)
}

fn meet_lattice_axioms(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5431, 200, |rng, _| {
        let dim = rng.random_range(1..=6);
        let (p, q) = random_projection_pair(dim, rng);
        let r = if rng.random_bool(0.5) { random_projection_any_rank(dim, rng) } else { p.clone() };
        let pq = meet(&p, &q)?;
        let commutative = max_abs(&(pq.as_matrix() - meet(&q, &p)?.as_matrix()));
        let idempotent = max_abs(&(meet(&p, &p)?.as_matrix() - p.as_matrix()));
        let left = meet(&pq, &r)?;
        let right = meet(&p, &meet(&q, &r)?)?;
        let associative = max_abs(&(left.as_matrix() - right.as_matrix()));
        Ok(commutative.max(idempotent).max(associative))
    })
}

fn trace_identity(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5432, 200, |rng, _| {
        let (p, q) = random_projection_pair(projection_dim(rng), rng);
        Ok((join(&p, &q)?.trace() + meet(&p, &q)?.trace() - p.trace() - q.trace()).abs())
    })
}

/// `None` for pairs excluded from the iteration cross-check.
fn pqp_case(rng: &mut CorpusRng) -> Result<Option<(ProjectionMatrix, HermitianMatrix)>> {
    let (p, q) = random_projection_pair(projection_dim(rng), rng);
    let slow = principal_cosines(&p, &q)?.iter().any(|&c| c * c > 1.0 - PQP_ANGLE_CUTOFF && c < 1.0 - MEET_SV_TOL);
    if slow {
        return Ok(None);
    }
    let iterate = HermitianMatrix::symmetrized(pqp_power(&p, &q, 1 << PQP_SQUARINGS)?);
    Ok(Some((meet(&p, &q)?, iterate)))
}

fn pqp_entries(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5433, 200, |rng, _| {
        Ok(pqp_case(rng)?.map_or(0.0, |(m, it)| max_abs(&(m.as_matrix() - it.as_matrix()))))
    })
}

fn pqp_trace(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5433, 200, |rng, _| {
        Ok(pqp_case(rng)?.map_or(0.0, |(m, it)| (m.trace() - crate::linalg::normalized_trace(&it)).abs()))
    })
}

fn tensor_versus_min(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4C41_5434, 200, |rng, _| {
        let (da, db) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let (p1, p2) = random_projection_pair(da, rng);
        let (q1, q2) = random_projection_pair(db, rng);
        let kp = |a: &ProjectionMatrix, b: &ProjectionMatrix| -> Result<ProjectionMatrix> {
            ProjectionMatrix::new(kron_with_cap(a.as_hermitian(), b.as_hermitian(), cap)?)
        };
        let lhs = meet(&kp(&p1, &q1)?, &kp(&p2, &q2)?)?;
        let rhs = kp(&meet(&p1, &p2)?, &meet(&q1, &q2)?)?;
        Ok(max_abs(&(lhs.as_matrix() - rhs.as_matrix())))
    })
}

fn family_sum(family: &[ProjectionMatrix], dim: usize) -> Result<ProjectionMatrix> {
    let sum = family.iter().fold(HermitianMatrix::zeros(dim), |acc, p| acc.add(p.as_hermitian()));
    ProjectionMatrix::new(sum)
}

fn family_from_columns(u: &CMatrix, order: &[usize], count: usize, rng: &mut CorpusRng) -> Vec<ProjectionMatrix> {
    let dim = u.nrows();
    let mut cuts: Vec<usize> = (0..count - 1).map(|_| rng.random_range(0..=dim)).collect();
    cuts.extend([0, dim]);
    cuts.sort_unstable();
    cuts.windows(2)
        .map(|w| {
            let basis = CMatrix::from_fn(dim, w[1] - w[0], |i, j| u[(i, order[w[0] + j])]);
            ProjectionMatrix::from_orthonormal_columns(dim, &basis)
        })
        .collect()
}

fn min_versus_sum(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5435, 200, |rng, _| {
        let dim = projection_dim(rng);
        let count = rng.random_range(2..=3);
        let (ps, qs) = if rng.random_bool(0.5) {
            (random_orthogonal_family(dim, count, rng), random_orthogonal_family(dim, count, rng))
        } else {
            // two families cut from one basis, so pairwise meets are nontrivial
            let u = haar_unitary(dim, rng);
            let mut order: Vec<usize> = (0..dim).collect();
            let ps = family_from_columns(&u, &order, count, rng);
            order.shuffle(rng);
            (ps, family_from_columns(&u, &order, count, rng))
        };
        let whole = meet(&family_sum(&ps, dim)?, &family_sum(&qs, dim)?)?;
        let mut parts = HermitianMatrix::zeros(dim);
        for (p, q) in ps.iter().zip(&qs) {
            parts = parts.add(meet(p, q)?.as_hermitian());
        }
        Ok(gap(-min_eigenvalue(&whole.as_hermitian().sub(&parts))?))
    })
}

fn powers_stormer(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4C41_5436, 200, |rng, _| {
        let dim = projection_dim(rng);
        let (p, q) = if rng.random_bool(0.5) {
            random_projection_pair(dim, rng)
        } else {
            (random_projection_any_rank(dim, rng), random_projection_any_rank(dim, rng))
        };
        let diff = p.as_hermitian().sub(q.as_hermitian());
        Ok(gap(hs_norm_sq(&diff) - trace_norm(&diff)?))
    })
}

// ---------------------------------------------------------------------------
// magic

fn corpus_rep(rng: &mut CorpusRng, k: usize) -> MagicUnitary {
    random_rep(n_for(k), 4, rng)
}

fn corpus_validation(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4D41_4731, 100, |rng, k| {
        let a = corpus_rep(rng, k);
        let b = random_rep(a.n(), 2, rng);
        let worst = a.validate().worst.max(a.direct_sum(&b)?.validate().worst);
        Ok(worst.max(a.convolve_with_cap(&b, cap)?.validate().worst))
    })
}

fn row_orthogonality(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4D41_4732, 100, |rng, k| Ok(corpus_rep(rng, k).validate().row_orthogonality))
}

fn convolution_coassociative(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4D41_4733, 50, |rng, k| {
        let n = n_for(k);
        let (a, b, c) = (random_rep(n, 2, rng), random_rep(n, 2, rng), random_rep(n, 2, rng));
        let left = a.convolve_with_cap(&b, cap)?.convolve_with_cap(&c, cap)?;
        let right = a.convolve_with_cap(&b.convolve_with_cap(&c, cap)?, cap)?;
        Ok(left.omega().iter().zip(right.omega()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    })
}

fn classical_convolution(ctx: &Ctx) -> Vec<Case> {
    let all = Permutation::all(3);
    map_indices(all.len() * all.len(), ctx.exec, |k| {
        let (s, t) = (&all[k / all.len()], &all[k % all.len()]);
        let conv = MagicUnitary::from_permutation(s).convolve(&MagicUnitary::from_permutation(t))?;
        let expected = MagicUnitary::from_permutation(&t.compose(s));
        Ok(if conv.approx_eq(&expected, 0.0) { 0.0 } else { 1.0 })
    })
}

// ---------------------------------------------------------------------------
// states

fn omega_bistochastic(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5354_4131, 100, |rng, k| Ok(corpus_mixture(rng, n_for(k)).birkhoff().residual()))
}

fn convolution_birkhoff(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x5354_4132, 50, |rng, k| {
        let n = n_for(k);
        let (phi, psi) = (random_mixture(n, 2, 2, rng), random_mixture(n, 2, 2, rng));
        let lhs = phi.convolve_with_cap(&psi, cap)?.birkhoff();
        let rhs = phi.birkhoff().matmul(&psi.birkhoff());
        Ok(lhs.entries.iter().zip(&rhs.entries).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    })
}

fn random_word(rng: &mut CorpusRng, n: usize, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    Word::new((0..len).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect())
}

fn word_conjugation_invariance(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5354_4133, 50, |rng, k| {
        let rep = corpus_rep(rng, k);
        let u = haar_unitary(rep.d(), rng);
        let (a, b) = (AtomicTrace::new(rep.clone()), AtomicTrace::new(rep.conjugate(&u)?));
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let w = random_word(rng, rep.n(), 4);
            worst = worst.max((a.evaluate_word(&w)? - b.evaluate_word(&w)?).norm());
        }
        Ok(worst)
    })
}

fn classical_word_values(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5354_4134, 50, |rng, k| {
        let n = n_for(k);
        let phi = random_classical_mixture(n, 4, rng);
        let measure: Vec<(f64, Permutation)> = phi
            .atoms()
            .iter()
            .map(|wa| (wa.weight, wa.atom.classical_permutation().expect("classical atom")))
            .collect();
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let w = random_word(rng, n, 3);
            let expected: f64 = measure
                .iter()
                .map(|(weight, s)| if w.letters.iter().all(|&(i, j)| s.apply(i) == j) { *weight } else { 0.0 })
                .sum();
            let got = phi.evaluate_word(&w)?;
            worst = worst.max((got.re - expected).abs()).max(got.im.abs());
        }
        Ok(worst)
    })
}

// ---------------------------------------------------------------------------
// transport

fn random_marginal(rng: &mut CorpusRng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> =
        (0..len).map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.0..1.0) }).collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / len as f64; len];
    }
    raw.into_iter().map(|w| w / total).collect()
}

fn random_ot_instance(rng: &mut CorpusRng) -> Result<(Vec<f64>, Vec<f64>, CostTable)> {
    let (m, k) = (rng.random_range(1..=4), rng.random_range(1..=4));
    let (mu, nu) = (random_marginal(rng, m), random_marginal(rng, k));
    let coarse = rng.random_bool(0.3);
    let cost = (0..m * k)
        .map(|_| if coarse { rng.random_range(0..4) as f64 / 3.0 } else { rng.random_range(0.0..1.0) })
        .collect();
    Ok((mu, nu, CostTable::new(m, k, cost)?))
}

fn simplex_matches_brute_force(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5452_4131, 500, |rng, _| {
        let (mu, nu, c) = random_ot_instance(rng)?;
        Ok((solve_ot(&mu, &nu, &c)?.cost - brute_force_ot(&mu, &nu, &c)?).abs())
    })
}

fn optimality_certificate(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5452_4131, 500, |rng, _| {
        let (mu, nu, c) = random_ot_instance(rng)?;
        let s = solve_ot(&mu, &nu, &c)?;
        let negative = s.plan.entries().iter().fold(0.0_f64, |w, &x| w.max(-x));
        Ok(s.certificate.max(s.plan.marginal_residual(&mu, &nu)).max(negative))
    })
}

fn ot_triangle(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x5452_4132, 100, |rng, k| {
        let n = 3 + k % 2;
        let ms: Vec<_> =
            (0..3).map(|_| random_classical_mixture(n, 4, rng).classical_measure().expect("classical")).collect();
        let d = |a: usize, b: usize| classical_w1(&ms[a], &ms[b]);
        Ok(gap(d(0, 2)? - d(0, 1)? - d(1, 2)?))
    })
}

fn hamming_axioms(ctx: &Ctx) -> Vec<Case> {
    let groups: Vec<Vec<Permutation>> = vec![Permutation::all(3), Permutation::all(4)];
    map_indices(groups.len(), ctx.exec, |g| {
        let all = &groups[g];
        let n = all[0].n() as f64;
        let mut worst: f64 = 0.0;
        for s in all {
            for t in all {
                let st = hamming(s, t)?;
                worst = worst.max((st - hamming(t, s)?).abs());
                worst = worst.max(if (st == 0.0) != (s == t) { 1.0 } else { 0.0 });
                worst = worst.max(if (st - 1.0 / n).abs() < 1e-12 { 1.0 } else { 0.0 });
                for u in all {
                    worst = worst.max(gap(hamming(s, u)? - st - hamming(t, u)?));
                }
            }
        }
        Ok(worst)
    })
}

// ---------------------------------------------------------------------------
// distances

fn classical_recovery(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4449_5331, 100, |rng, k| {
        let n = 3 + k % 2;
        let (phi, psi) = (random_classical_mixture(n, 6, rng), random_classical_mixture(n, 6, rng));
        let w1 =
            classical_w1(&phi.classical_measure().expect("classical"), &psi.classical_measure().expect("classical"))?;
        let reports = distances(&phi, &psi, &Metric::ALL, &ctx.dist)?;
        Ok(reports.iter().map(|r| (r.upper - w1).abs().max((r.lower - w1).abs())).fold(0.0, f64::max))
    })
}

fn tensor_symmetry(ctx: &Ctx) -> Vec<Case> {
    map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        Ok((distance_tensor(&phi, &psi, &cfg)?.upper - distance_tensor(&psi, &phi, &cfg)?.upper).abs())
    })
}

fn tensor_triangle(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4449_5332, 100, |rng, k| {
        let n = n_for(k);
        let m: Vec<StateMixture> = (0..3).map(|_| corpus_mixture(rng, n)).collect();
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        let d = |a: usize, b: usize| distance_tensor(&m[a], &m[b], &cfg).map(|r| r.upper);
        Ok(gap(d(0, 2)? - d(0, 1)? - d(1, 2)?))
    })
}

fn hamming_cost_triangle(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4449_5333, 200, |rng, k| {
        let n = n_for(k);
        let a: Vec<AtomicTrace> = (0..3).map(|_| AtomicTrace::new(random_rep(n, 4, rng))).collect();
        let c = |x: usize, y: usize| atom_cost_hamming(&a[x], &a[y]);
        Ok(gap(c(0, 2)? - c(0, 1)? - c(1, 2)?))
    })
}

fn two_block_fixture(rng: &mut CorpusRng) -> MagicUnitary {
    random_two_block(4, rng)
}

fn self_distance(ctx: &Ctx) -> Vec<Case> {
    let mut cases = map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, _) = corpus_pair(ctx, k);
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        Ok((distance_tensor(&phi, &phi, &cfg)?.upper - self_distance_tensor(&phi.dedupe())).abs())
    });
    // the rank-one two-block atom: 1 − (1/4)(8 · 1/4) = 1/2, and its even
    // mixture with the identity point mass: 1/4
    let tb = two_block_fixture(&mut ctx.rng(0x4449_5334, 0));
    let single = StateMixture::atom(tb.clone());
    let mix = StateMixture::new(vec![(0.5, tb), (0.5, MagicUnitary::from_images(&[0, 1, 2, 3]).expect("identity"))]);
    cases.push((|| {
        let mix = mix?;
        let d1 = distance_tensor(&single, &single, &ctx.dist)?.upper;
        let d2 = distance_tensor(&mix, &mix, &ctx.dist)?.upper;
        Ok([
            (self_distance_tensor(&single) - 0.5).abs(),
            (d1 - 0.5).abs(),
            (self_distance_tensor(&mix) - 0.25).abs(),
            (d2 - 0.25).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    })());
    cases
}

fn self_distance_estimate(ctx: &Ctx) -> Vec<Case> {
    map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        let d = distance_tensor(&phi, &psi, &cfg)?.upper;
        Ok(gap(0.5 * self_distance_tensor(&phi) + 0.5 * self_distance_tensor(&psi) - d))
    })
}

fn birkhoff_gap(ctx: &Ctx) -> Vec<Case> {
    let mut cases = map_indices(50, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        let (lhs, rhs) = birkhoff_gap_identity(&phi, &psi, &cfg)?;
        Ok((lhs - rhs).abs())
    });
    let tb = StateMixture::atom(two_block_fixture(&mut ctx.rng(0x4449_5335, 0)));
    let e = StateMixture::atom(MagicUnitary::from_images(&[0, 1, 2, 3]).expect("identity"));
    cases.push(birkhoff_gap_identity(&e, &tb, &ctx.dist).map(|(l, r)| (l - 0.25).abs().max((r - 0.25).abs())));
    cases
}

fn pointwise_cost_chain(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4449_5336, 200, |rng, k| {
        let n = n_for(k);
        let (a, b) = (AtomicTrace::new(random_rep(n, 4, rng)), AtomicTrace::new(random_rep(n, 4, rng)));
        Ok(gap(atom_cost_l1_with_cap(&a, &b, cap)? - atom_cost_hamming(&a, &b)?))
    })
}

fn all_reports(ctx: &Ctx, phi: &StateMixture, psi: &StateMixture) -> Result<[f64; 6]> {
    let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
    let r = distances(phi, psi, &Metric::ALL, &cfg)?;
    // (lower, upper) for tensor, free, l1
    Ok([r[0].lower, r[0].upper, r[1].lower, r[1].upper, r[2].lower, r[2].upper])
}

fn report_chain(ctx: &Ctx) -> Vec<Case> {
    map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        let [lt, ut, lf, uf, ll, ul] = all_reports(ctx, &phi, &psi)?;
        Ok([ll - ul, ul - uf, uf - ut, ut - 1.0, lf - uf, lt - ut, -ll].into_iter().map(gap).fold(0.0, f64::max))
    })
}

fn disjoint_fixtures(ctx: &Ctx) -> Vec<(StateMixture, StateMixture)> {
    let perm = |images: &[usize]| MagicUnitary::from_images(images).expect("bijection");
    let classical = |pairs: &[(f64, &[usize])]| {
        StateMixture::new(pairs.iter().map(|(w, im)| (*w, perm(im))).collect()).expect("weights sum to one")
    };
    let tb = two_block_fixture(&mut ctx.rng(0x4449_5337, 0));
    vec![
        (classical(&[(1.0, &[0, 1])]), classical(&[(1.0, &[1, 0])])),
        (classical(&[(0.5, &[0, 1, 2]), (0.5, &[1, 2, 0])]), classical(&[(1.0, &[2, 0, 1])])),
        (StateMixture::atom(tb.clone()), classical(&[(1.0, &[2, 3, 0, 1])])),
        (
            StateMixture::new(vec![(0.5, tb), (0.5, perm(&[0, 1, 2, 3]))]).expect("weights sum to one"),
            classical(&[(0.3, &[2, 3, 1, 0]), (0.7, &[3, 2, 0, 1])]),
        ),
    ]
}

fn distance_one(ctx: &Ctx) -> Vec<Case> {
    let fixtures = disjoint_fixtures(ctx);
    let mut cases: Vec<Case> = fixtures
        .iter()
        .map(|(phi, psi)| {
            let flag = if check_distance_one(phi, psi) { 0.0 } else { 1.0 };
            let values = all_reports(ctx, phi, psi)?;
            Ok(values.iter().map(|v| (v - 1.0).abs()).fold(flag, f64::max))
        })
        .collect();
    cases.extend(map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        if !check_distance_one(&phi, &psi) {
            return Ok(0.0);
        }
        Ok(all_reports(ctx, &phi, &psi)?.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max))
    }));
    cases
}

fn distance_one_converse(ctx: &Ctx) -> Vec<Case> {
    let fixtures = disjoint_fixtures(ctx);
    let check = |phi: &StateMixture, psi: &StateMixture| -> Case {
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        let upper = distance_tensor(phi, psi, &cfg)?.upper;
        Ok(if upper >= 1.0 { phi.birkhoff().inner(&psi.birkhoff()) } else { 0.0 })
    };
    let mut cases: Vec<Case> = fixtures.iter().map(|(a, b)| check(a, b)).collect();
    cases.extend(map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        check(&phi, &psi)
    }));
    cases
}

fn operator_rep(rng: &mut CorpusRng, n: usize, max_dim: usize) -> MagicUnitary {
    random_rep(n, max_dim, rng)
}

fn cost_operator_psd(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4F50_5231, 60, |rng, k| {
        let n = n_for(k);
        let (a, b) = (operator_rep(rng, n, 4), operator_rep(rng, n, 4));
        Ok(gap(-build_cost_operator(&a, &b, cap)?.min_eigenvalue))
    })
}

fn triangle_operator(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4F50_5232, 60, |rng, k| {
        let n = n_for(k);
        let (a, b, c) = (operator_rep(rng, n, 3), operator_rep(rng, n, 3), operator_rep(rng, n, 3));
        Ok(gap(-check_triangle_operator(&a, &b, &c, cap)?))
    })
}

fn comult_inequality(ctx: &Ctx) -> Vec<Case> {
    let cap = ctx.cap;
    ctx.cases(0x4F50_5233, 60, |rng, k| {
        let n = n_for(k);
        let reps: Vec<MagicUnitary> = (0..4).map(|_| operator_rep(rng, n, 2)).collect();
        Ok(gap(-check_comult_inequality(&reps[0], &reps[1], &reps[2], &reps[3], cap)?))
    })
}

fn word_bound_consistency(ctx: &Ctx) -> Vec<Case> {
    let mut cases = map_indices(MIXTURE_PAIRS, ctx.exec, |k| {
        let (phi, psi) = corpus_pair(ctx, k);
        let words = lower_bound_words(&phi, &psi, &ctx.dist.words)?;
        Ok(gap(words - all_reports(ctx, &phi, &psi)?[5]))
    });
    // the identity against the transposition in S_2 on the word u_11:
    // |1 − 0| / (2 · 2 · 1) = 1/4
    let e = StateMixture::atom(MagicUnitary::from_images(&[0, 1]).expect("identity"));
    let t = StateMixture::atom(MagicUnitary::from_images(&[1, 0]).expect("transposition"));
    let single = WordCorpusConfig { exhaustive_len: 1, sample_count: 0, seed: 0 };
    cases.push((|| {
        let bound = lower_bound_words(&e, &t, &single)?;
        let upper = all_reports(ctx, &e, &t)?[5];
        Ok((bound - 0.25).abs().max(gap(bound - upper)))
    })());
    cases
}

fn convolution_subadditivity(ctx: &Ctx) -> Vec<Case> {
    let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
    ctx.cases(0x4449_5338, 25, |rng, k| {
        let n = 3 + k % 2;
        let m: Vec<StateMixture> = (0..4).map(|_| random_mixture(n, 2, 2, rng)).collect();
        let mut worst: f64 = 0.0;
        for metric in Metric::ALL {
            let r = check_convolution_subadditivity(&m[0], &m[1], &m[2], &m[3], metric, &cfg)?;
            worst = worst.max(gap(r.lhs - r.rhs));
        }
        Ok(worst)
    })
}

fn tv_bound(ctx: &Ctx) -> Vec<Case> {
    ctx.cases(0x4449_5339, 50, |rng, k| {
        let n = 3 + k % 2;
        let (phi, psi) = (random_classical_mixture(n, 4, rng), random_classical_mixture(n, 4, rng));
        let cfg = DistanceConfig { exec: Execution::Sequential, ..ctx.dist };
        let free = distances(&phi, &psi, &[Metric::Free], &cfg)?[0].upper;
        Ok(gap(free - tv_upper_bound_classical(&phi, &psi)?))
    })
}

fn optimizer_realignment(ctx: &Ctx) -> Vec<Case> {
    let (restarts, steps) = (ctx.dist.restarts, ctx.dist.steps);
    ctx.cases(0x4449_5340, 20, |rng, k| {
        let a = random_rep(4 + k % 2, 4, rng);
        let v = haar_unitary(a.d(), rng);
        let (ta, tb) = (AtomicTrace::new(a.clone()), AtomicTrace::new(a.conjugate(&v)?));
        Ok(optimize_unitary(&ta, &tb, restarts, steps, rng.random())?.1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_sorted_and_unique() {
        let names = property_names();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn unknown_override_is_rejected() {
        let mut cfg = SuiteConfig::default();
        cfg.tolerances.insert("nope".into(), 1.0);
        assert!(matches!(run_suite(&cfg), Err(Error::Parse(_))));
        assert!(matches!(run_properties(&SuiteConfig::default(), &["nope"]), Err(Error::Parse(_))));
    }

    #[test]
    fn eigen_alias_resolution() {
        let mut overrides = BTreeMap::new();
        overrides.insert(EIGEN_GROUP.to_string(), 1e-14);
        overrides.insert("linalg.trace_identity".to_string(), 1e-3);
        let find = |name: &str| PROPERTIES.iter().find(|p| p.name == name).unwrap();
        assert_eq!(resolve_tolerance(find("linalg.trace_identity"), &overrides), 1e-3);
        assert_eq!(resolve_tolerance(find("linalg.powers_stormer"), &overrides), 1e-14);
        assert_eq!(resolve_tolerance(find("transport.ot_triangle"), &overrides), 1e-8);
    }

    #[test]
    fn summary_statuses() {
        let p = &PROPERTIES[0];
        assert_eq!(summarize(p, 1.0, vec![Ok(0.5)]).status, Status::Pass);
        assert_eq!(summarize(p, 0.1, vec![Ok(0.5)]).status, Status::Fail);
        let overflow = || Err(Error::DimensionOverflow { dim: 8, cap: 2 });
        let r = summarize(p, 1.0, vec![overflow(), overflow()]);
        assert_eq!((r.status, r.worst, r.skipped), (Status::Skipped, None, 2));
        assert_eq!(summarize(p, 1.0, vec![Ok(0.0), overflow()]).status, Status::Pass);
        assert_eq!(summarize(p, 1.0, vec![Ok(f64::NAN)]).status, Status::Fail);
        assert_eq!(summarize(p, 1.0, vec![Err(Error::NotClassical)]).status, Status::Fail);
    }

    #[test]
    fn small_properties_pass() {
        let cfg = SuiteConfig::default();
        let r = run_properties(&cfg, &["magic.classical_convolution", "transport.hamming_axioms"]).unwrap();
        assert!(r.passed, "{}", r.to_table());
        assert_eq!(r.properties.len(), 2);
    }
}
