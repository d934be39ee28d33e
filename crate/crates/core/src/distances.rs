//! The three quantum Hamming distances as certified estimates.
//!
//! * `tensor`: optimal transport between the presented atoms with the
//!   Hamming cost `1 − (1/n) Σ ω_a[i][j] ω_b[i][j]`. Exact whenever the
//!   presented atoms form the extreme decomposition of each state.
//! * `free` and `l1`: `[lower, upper]` sandwiches. Every upper bound is the
//!   cost of an explicit tracial coupling (diagonal for identical atoms,
//!   tensor embedding `P ⊗ 1, 1 ⊗ Q`, or a same-space coupling `P, uQu†`)
//!   glued by an optimal plan; lower bounds come from the word Lipschitz
//!   inequality, the distance-one criterion, and classical recovery.
//!
//! The module also houses the operator-level certificates: positivity of the
//! cost operator, the per-row triangle inequality, and the comultiplication
//! inequality.

use std::fmt;

use serde::Serialize;

use crate::corpus::{item_rng, random_rep};
use crate::error::{Error, Result};
use crate::exec::{map_indices, try_map_indices, Execution};
use crate::linalg::{
    c, eigh, gaussian_matrix, haar_unitary, kron_capped, meet, min_eigenvalue, polar_unitary, trace_norm, CMatrix,
    HermitianMatrix, DEFAULT_DIM_CAP,
};
use crate::magic::MagicUnitary;
use crate::perm::Permutation;
use crate::states::{word_corpus, AtomicTrace, StateMixture, Word, WordCorpusConfig};
use crate::transport::{classical_w1, solve_ot, CostTable, TransportPlan};

/// `Σ ω_φ ω_ψ` at or below this means disjoint Birkhoff supports.
pub const DISTANCE_ONE_TOL: f64 = 1e-10;
/// Lower bounds exceeding the upper bound by at most this are clamped.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Tensor,
    Free,
    L1,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Tensor, Metric::Free, Metric::L1];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Tensor => "tensor",
            Metric::Free => "free",
            Metric::L1 => "l1",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(Metric::Tensor),
            "free" => Ok(Metric::Free),
            "l1" => Ok(Metric::L1),
            other => Err(Error::Parse(format!("unknown metric {other:?}"))),
        }
    }
}

/// Knobs shared by every distance computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceConfig {
    pub dim_cap: usize,
    /// Random restarts of the same-space unitary search.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub steps: usize,
    pub seed: u64,
    pub words: WordCorpusConfig,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            dim_cap: DEFAULT_DIM_CAP,
            restarts: 8,
            steps: 200,
            seed: 0,
            words: WordCorpusConfig::default(),
            exec: Execution::Auto,
        }
    }
}

/// A `[lower, upper]` estimate of one distance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub metric: Metric,
    pub upper: f64,
    pub lower: f64,
    pub exact_for_presented_atoms: bool,
    pub plan: Option<TransportPlan>,
    pub witnesses: Vec<String>,
}

impl DistanceReport {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

// ---------------------------------------------------------------------------
// atom-level costs

fn same_n(a: &AtomicTrace, b: &AtomicTrace) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

/// `(τ_a ⊗ τ_b)(C_H) = 1 − (1/n) Σ_ij ω_a[i][j] ω_b[i][j]`.
pub fn atom_cost_hamming(a: &AtomicTrace, b: &AtomicTrace) -> Result<f64> {
    same_n(a, b)?;
    Ok(hamming_from_omegas(a.n(), a.omega(), b.omega()))
}

fn hamming_from_omegas(n: usize, a: &[f64], b: &[f64]) -> f64 {
    let overlap: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (1.0 - overlap / n as f64).clamp(0.0, 1.0)
}

/// `1 − (1/n) Σ_ij tr(X_ij ∧ Y_ij)` for two magic unitaries on one space.
pub fn coupling_cost_free(x: &MagicUnitary, y: &MagicUnitary) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::SizeMismatch { left: x.n(), right: y.n() });
    }
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch { left: x.d(), right: y.d() });
    }
    let n = x.n();
    let mut total = 0.0;
    for (p, q) in x.cells().iter().zip(y.cells()) {
        total += meet(p, q)?.trace();
    }
    Ok((1.0 - total / n as f64).clamp(0.0, 1.0))
}

/// `(1/2n) Σ_ij ‖X_ij − Y_ij‖_1` for two magic unitaries on one space.
pub fn coupling_cost_l1(x: &MagicUnitary, y: &MagicUnitary) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::SizeMismatch { left: x.n(), right: y.n() });
    }
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch { left: x.d(), right: y.d() });
    }
    let n = x.n();
    let mut total = 0.0;
    for (p, q) in x.cells().iter().zip(y.cells()) {
        total += trace_norm(&p.as_hermitian().sub(q.as_hermitian()))?;
    }
    Ok(total / (2.0 * n as f64))
}

/// `L^1` cost of the tensor-embedding coupling `P ⊗ 1, 1 ⊗ Q`.
pub fn atom_cost_l1(a: &AtomicTrace, b: &AtomicTrace) -> Result<f64> {
    atom_cost_l1_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn atom_cost_l1_with_cap(a: &AtomicTrace, b: &AtomicTrace, cap: usize) -> Result<f64> {
    same_n(a, b)?;
    let (x, y) = Coupling::TensorEmbedding.realize(a.rep(), b.rep(), cap)?;
    coupling_cost_l1(&x, &y)
}

/// Free cost of the same-space coupling `P, uQu†` (`u = 1` when absent).
pub fn atom_cost_meet_same_dim(a: &AtomicTrace, b: &AtomicTrace, u: Option<&CMatrix>) -> Result<f64> {
    same_n(a, b)?;
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch { left: a.d(), right: b.d() });
    }
    let y = match u {
        Some(u) => b.rep().conjugate(u)?,
        None => b.rep().clone(),
    };
    coupling_cost_free(a.rep(), &y)
}

/// Free cost of the tensor-embedding coupling; equals [`atom_cost_hamming`].
pub fn atom_cost_meet_tensor(a: &AtomicTrace, b: &AtomicTrace, cap: usize) -> Result<f64> {
    same_n(a, b)?;
    let (x, y) = Coupling::TensorEmbedding.realize(a.rep(), b.rep(), cap)?;
    coupling_cost_free(&x, &y)
}

/// A concrete tracial coupling of two atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    /// `α_1 = α_2 = π`; only for identical atoms.
    Diagonal,
    /// `α_1 = π_a ⊗ 1`, `α_2 = 1 ⊗ π_b` on `C^{d_a} ⊗ C^{d_b}`.
    TensorEmbedding,
    /// `α_1 = π_a`, `α_2 = u π_b u†` on `C^d`.
    SameSpace(CMatrix),
}

impl Coupling {
    pub fn label(&self) -> &'static str {
        match self {
            Coupling::Diagonal => "diagonal",
            Coupling::TensorEmbedding => "tensor-embedding",
            Coupling::SameSpace(_) => "same-space unitary",
        }
    }

    /// The two representations `(α_1, α_2)` on the common space.
    pub fn realize(&self, a: &MagicUnitary, b: &MagicUnitary, cap: usize) -> Result<(MagicUnitary, MagicUnitary)> {
        match self {
            Coupling::Diagonal => Ok((a.clone(), a.clone())),
            Coupling::TensorEmbedding => Ok((a.amplify_right(b.d(), cap)?, b.amplify_left(a.d(), cap)?)),
            Coupling::SameSpace(u) => Ok((a.clone(), b.conjugate(u)?)),
        }
    }
}

// ---------------------------------------------------------------------------
// same-space unitary search

/// Majorize-maximize ascent of the overlap `Σ tr(P_ij u Q_ij u†)`.
///
/// The overlap is a convex quadratic in `u`, so maximizing its linearization
/// over unitaries, the polar factor of `Σ P_ij u Q_ij`, never decreases it.
fn descend(a: &MagicUnitary, b: &MagicUnitary, start: CMatrix, steps: usize) -> Result<CMatrix> {
    let d = a.d();
    let mut u = start;
    for _ in 0..steps {
        let mut m = CMatrix::zeros(d, d);
        for (p, q) in a.cells().iter().zip(b.cells()) {
            m += p.as_matrix() * &u * q.as_matrix();
        }
        let next = polar_unitary(&m)?;
        // the surrogate only resolves alignment to about sqrt(eps), so stop
        // on the movement of u instead
        let moved = (&next - &u).norm();
        u = next;
        if moved < 1e-14 {
            break;
        }
    }
    Ok(u)
}

/// Start from the top eigenspace of `Σ conj(Q_ij) ⊗ P_ij`, whose quadratic
/// form on `vec(u)` is the overlap. Eigenvalue `n` means the space holds
/// exact intertwiners `P_ij X = X Q_ij`; a random element of it is
/// invertible when the reps are equivalent, and its polar factor aligns them.
fn spectral_start(a: &MagicUnitary, b: &MagicUnitary, seed: u64) -> Result<CMatrix> {
    let d = a.d();
    let mut k = CMatrix::zeros(d * d, d * d);
    for (p, q) in a.cells().iter().zip(b.cells()) {
        k += q.as_matrix().conjugate().kronecker(p.as_matrix());
    }
    let spec = eigh(&HermitianMatrix::symmetrized(k))?;
    let top = spec.values.last().copied().unwrap_or(0.0);
    let slack = 1e-9 * a.n() as f64;
    let mut rng = item_rng(seed, 0x5350_4543, 0);
    let weights = gaussian_matrix(d * d, 1, &mut rng);
    let mut vec_x = CMatrix::zeros(d * d, 1);
    for (j, &value) in spec.values.iter().enumerate() {
        if value >= top - slack {
            vec_x += spec.vectors.column(j) * weights[(j, 0)];
        }
    }
    polar_unitary(&CMatrix::from_column_slice(d, d, vec_x.as_slice()))
}

/// Searches same-space couplings `P, uQu†` for a small free cost.
///
/// Tries the identity, a start built from the top eigenspace of the
/// overlap form, then `restarts` Haar-random starting points, each followed
/// by at most `steps` polar iterations on the overlap `Σ tr(P_ij u Q_ij u†)`,
/// a smooth stand-in for the piecewise constant meet cost. Returns the best unitary and its free cost,
/// never worse than the identity.
pub fn optimize_unitary(
    a: &AtomicTrace,
    b: &AtomicTrace,
    restarts: usize,
    steps: usize,
    seed: u64,
) -> Result<(CMatrix, f64)> {
    same_n(a, b)?;
    let d = a.d();
    if d != b.d() {
        return Err(Error::DimensionMismatch { left: d, right: b.d() });
    }
    let identity = CMatrix::identity(d, d);
    let mut best_cost = coupling_cost_free(a.rep(), b.rep())?;
    let mut best = identity;
    if d == 1 || best_cost <= 0.0 {
        return Ok((best, best_cost));
    }
    for r in 0..=restarts {
        let start = if r == 0 {
            spectral_start(a.rep(), b.rep(), seed)?
        } else {
            haar_unitary(d, &mut item_rng(seed, 0x554E_4954, r as u64 - 1))
        };
        let u = descend(a.rep(), b.rep(), start, steps)?;
        let cost = coupling_cost_free(a.rep(), &b.rep().conjugate(&u)?)?;
        if cost < best_cost - 1e-12 {
            best_cost = cost;
            best = u;
        }
    }
    Ok((best, best_cost))
}

/// Cheapest free cost any same-space coupling can reach, from
/// `tr(P ∧ Q) ≤ min(tr P, tr Q)`.
fn same_space_floor(a: &AtomicTrace, b: &AtomicTrace) -> f64 {
    let overlap: f64 = a.omega().iter().zip(b.omega()).map(|(x, y)| x.min(*y)).sum();
    1.0 - overlap / a.n() as f64
}

// ---------------------------------------------------------------------------
// pair analysis

/// Per-metric cost of one atom pair together with the coupling achieving it.
#[derive(Clone, Debug)]
pub struct PairCosts {
    pub hamming: f64,
    pub free: f64,
    pub free_coupling: Coupling,
    pub l1: f64,
    pub l1_coupling: Coupling,
    /// Free cost of the tensor coupling before the unitary search, when the
    /// search improved on it.
    pub improved_from: Option<f64>,
}

fn pair_seed(seed: u64, a: usize, b: usize) -> u64 {
    seed ^ ((a as u64) << 32 | b as u64).wrapping_mul(0xA076_1D64_78BD_642F)
}

/// Evaluates every available coupling for one atom pair.
///
/// `metrics` limits the work: the unitary search runs when free or l1 is
/// requested, the trace-norm evaluation only when l1 is.
pub fn analyze_pair(
    a: &AtomicTrace,
    b: &AtomicTrace,
    config: &DistanceConfig,
    seed: u64,
    need_free: bool,
    need_l1: bool,
) -> Result<PairCosts> {
    let hamming = atom_cost_hamming(a, b)?;
    if a.is_identical(b) {
        return Ok(PairCosts {
            hamming,
            free: 0.0,
            free_coupling: Coupling::Diagonal,
            l1: 0.0,
            l1_coupling: Coupling::Diagonal,
            improved_from: None,
        });
    }
    let mut free = hamming;
    let mut free_coupling = Coupling::TensorEmbedding;
    let mut improved_from = None;
    if (need_free || need_l1) && a.d() == b.d() && same_space_floor(a, b) < hamming - 1e-12 {
        let (u, cost) = optimize_unitary(a, b, config.restarts, config.steps, seed)?;
        if cost < free - 1e-12 {
            improved_from = Some(free);
            free = cost;
            free_coupling = Coupling::SameSpace(u);
        }
    }
    let (mut l1, mut l1_coupling) = (f64::NAN, Coupling::TensorEmbedding);
    if need_l1 {
        l1 = atom_cost_l1_with_cap(a, b, config.dim_cap)?;
        if let Coupling::SameSpace(u) = &free_coupling {
            let same = coupling_cost_l1(a.rep(), &b.rep().conjugate(u)?)?;
            if same < l1 {
                l1 = same;
                l1_coupling = free_coupling.clone();
            }
        }
    }
    Ok(PairCosts { hamming, free, free_coupling, l1, l1_coupling, improved_from })
}

/// Cost tables over all atom pairs of two (deduplicated) mixtures.
#[derive(Clone, Debug)]
pub struct PairTable {
    pub rows: usize,
    pub cols: usize,
    pub pairs: Vec<PairCosts>,
}

impl PairTable {
    pub fn build(
        phi: &StateMixture,
        psi: &StateMixture,
        config: &DistanceConfig,
        need_free: bool,
        need_l1: bool,
    ) -> Result<Self> {
        if phi.n() != psi.n() {
            return Err(Error::SizeMismatch { left: phi.n(), right: psi.n() });
        }
        let (rows, cols) = (phi.len(), psi.len());
        let pairs = try_map_indices(rows * cols, config.exec, |idx| {
            let (i, j) = (idx / cols, idx % cols);
            analyze_pair(
                &phi.atoms()[i].atom,
                &psi.atoms()[j].atom,
                config,
                pair_seed(config.seed, i, j),
                need_free,
                need_l1,
            )
        })?;
        Ok(PairTable { rows, cols, pairs })
    }

    pub fn cost_table(&self, metric: Metric) -> Result<CostTable> {
        let cost = self
            .pairs
            .iter()
            .map(|p| match metric {
                Metric::Tensor => p.hamming,
                Metric::Free => p.free,
                Metric::L1 => p.l1,
            })
            .collect();
        CostTable::new(self.rows, self.cols, cost)
    }

    pub fn coupling(&self, metric: Metric, i: usize, j: usize) -> Coupling {
        let p = &self.pairs[i * self.cols + j];
        match metric {
            Metric::Tensor => Coupling::TensorEmbedding,
            Metric::Free => p.free_coupling.clone(),
            Metric::L1 => p.l1_coupling.clone(),
        }
    }
}

/// Hamming cost table between atoms, built in parallel or sequentially.
pub fn hamming_cost_table(phi: &StateMixture, psi: &StateMixture, exec: Execution) -> Result<CostTable> {
    if phi.n() != psi.n() {
        return Err(Error::SizeMismatch { left: phi.n(), right: psi.n() });
    }
    let cols = psi.len();
    let costs = map_indices(phi.len() * cols, exec, |idx| {
        hamming_from_omegas(phi.n(), phi.atoms()[idx / cols].atom.omega(), psi.atoms()[idx % cols].atom.omega())
    });
    CostTable::new(phi.len(), cols, costs)
}

// ---------------------------------------------------------------------------
// lower bounds

/// `max_w |φ(w) − ψ(w)| / (2 n ℓ(w))` over the configured word corpus,
/// together with the maximizing word.
pub fn lower_bound_words_detail(
    phi: &StateMixture,
    psi: &StateMixture,
    words: &WordCorpusConfig,
    exec: Execution,
) -> Result<(f64, Option<Word>)> {
    if phi.n() != psi.n() {
        return Err(Error::SizeMismatch { left: phi.n(), right: psi.n() });
    }
    let n = phi.n();
    let corpus = word_corpus(n, words);
    let values = try_map_indices(corpus.len(), exec, |k| {
        let w = &corpus[k];
        let gap = (phi.evaluate_word(w)? - psi.evaluate_word(w)?).norm();
        Ok::<_, Error>(gap / (2.0 * n as f64 * w.len() as f64))
    })?;
    let mut best = (0.0, None);
    for (k, v) in values.into_iter().enumerate() {
        if v > best.0 {
            best = (v, Some(corpus[k].clone()));
        }
    }
    Ok(best)
}

pub fn lower_bound_words(phi: &StateMixture, psi: &StateMixture, words: &WordCorpusConfig) -> Result<f64> {
    Ok(lower_bound_words_detail(phi, psi, words, Execution::Auto)?.0)
}

/// `Σ_ij ω(φ)_ij ω(ψ)_ij ≤ DISTANCE_ONE_TOL`: every distance equals one.
pub fn check_distance_one(phi: &StateMixture, psi: &StateMixture) -> bool {
    phi.n() == psi.n() && phi.birkhoff().inner(&psi.birkhoff()) <= DISTANCE_ONE_TOL
}

/// Lower bound valid for all three distances (each dominates `d_L1`).
fn common_lower_bound(phi: &StateMixture, psi: &StateMixture, config: &DistanceConfig) -> Result<(f64, Vec<String>)> {
    let mut witnesses = Vec::new();
    let (words, word) = lower_bound_words_detail(phi, psi, &config.words, config.exec)?;
    let mut lower = words;
    match word {
        Some(w) => witnesses.push(format!("lower: word bound {words:.12} at {:?}", w.letters)),
        None => witnesses.push("lower: word bound 0".to_string()),
    }
    if let (Some(m1), Some(m2)) = (phi.classical_measure(), psi.classical_measure()) {
        let w1 = classical_w1(&m1, &m2)?;
        witnesses.push(format!("lower: classical W1 {w1:.12} (both states classical)"));
        lower = lower.max(w1);
    }
    if check_distance_one(phi, psi) {
        witnesses.push("lower: disjoint Birkhoff supports force distance 1".to_string());
        lower = 1.0;
    }
    Ok((lower, witnesses))
}

fn finalize(
    metric: Metric,
    upper: f64,
    lower: f64,
    exact: bool,
    plan: TransportPlan,
    witnesses: Vec<String>,
) -> Result<DistanceReport> {
    let upper = upper.clamp(0.0, 1.0);
    let mut lower = lower.max(0.0);
    if lower > upper {
        if lower - upper > SANDWICH_SLACK {
            return Err(Error::Inconsistent(format!("{metric}: lower {lower} exceeds upper {upper}")));
        }
        lower = upper;
    }
    Ok(DistanceReport { metric, upper, lower, exact_for_presented_atoms: exact, plan: Some(plan), witnesses })
}

// ---------------------------------------------------------------------------
// distances

/// Computes the requested reports from one shared pass over atom pairs.
pub fn distances(
    phi: &StateMixture,
    psi: &StateMixture,
    metrics: &[Metric],
    config: &DistanceConfig,
) -> Result<Vec<DistanceReport>> {
    if phi.n() != psi.n() {
        return Err(Error::SizeMismatch { left: phi.n(), right: psi.n() });
    }
    let (phi, psi) = (phi.dedupe(), psi.dedupe());
    let need_free = metrics.contains(&Metric::Free);
    let need_l1 = metrics.contains(&Metric::L1);
    let table = PairTable::build(&phi, &psi, config, need_free, need_l1)?;
    let (lower, lower_witnesses) = common_lower_bound(&phi, &psi, config)?;
    let (mu, nu) = (phi.weights(), psi.weights());
    let mut out = Vec::with_capacity(metrics.len());
    for &metric in metrics {
        let costs = table.cost_table(metric)?;
        let solution = solve_ot(&mu, &nu, &costs)?;
        let mut witnesses = vec![format!(
            "upper: optimal plan over {}x{} presented atoms, certificate {:.1e}",
            table.rows, table.cols, solution.certificate
        )];
        let mut used: Vec<&'static str> = Vec::new();
        for i in 0..table.rows {
            for j in 0..table.cols {
                if solution.plan.get(i, j) > 0.0 {
                    let label = match metric {
                        Metric::Tensor => "tensor-product state",
                        _ => table.coupling(metric, i, j).label(),
                    };
                    if !used.contains(&label) {
                        used.push(label);
                    }
                }
            }
        }
        used.sort_unstable();
        witnesses.push(format!("upper: couplings used: {}", used.join(", ")));
        if metric == Metric::Free {
            for (k, p) in table.pairs.iter().enumerate() {
                if let Some(before) = p.improved_from {
                    witnesses.push(format!(
                        "upper: unitary search improved pair ({}, {}) from {before:.12} to {:.12}",
                        k / table.cols,
                        k % table.cols,
                        p.free
                    ));
                }
            }
        }
        witnesses.extend(lower_witnesses.iter().cloned());
        let exact = metric == Metric::Tensor;
        out.push(finalize(metric, solution.cost, lower, exact, solution.plan, witnesses)?);
    }
    Ok(out)
}

fn single(phi: &StateMixture, psi: &StateMixture, metric: Metric, config: &DistanceConfig) -> Result<DistanceReport> {
    Ok(distances(phi, psi, &[metric], config)?.remove(0))
}

pub fn distance_tensor(phi: &StateMixture, psi: &StateMixture, config: &DistanceConfig) -> Result<DistanceReport> {
    single(phi, psi, Metric::Tensor, config)
}

pub fn distance_free(phi: &StateMixture, psi: &StateMixture, config: &DistanceConfig) -> Result<DistanceReport> {
    single(phi, psi, Metric::Free, config)
}

/// The `l1` report. Runs the same unitary search as [`distance_free`] so the
/// pointwise chain `l1 ≤ free` holds between separately computed reports.
pub fn distance_l1(phi: &StateMixture, psi: &StateMixture, config: &DistanceConfig) -> Result<DistanceReport> {
    single(phi, psi, Metric::L1, config)
}

/// `1 − (1/n) Σ_a w_a Σ_ij ω_a[i][j]²`.
pub fn self_distance_tensor(phi: &StateMixture) -> f64 {
    let n = phi.n() as f64;
    let total: f64 = phi.atoms().iter().map(|wa| wa.weight * wa.atom.omega().iter().map(|x| x * x).sum::<f64>()).sum();
    (1.0 - total / n).max(0.0)
}

/// `(lhs, rhs)` of the Birkhoff gap identity
/// `d_t(φ, ψ) − ½ d_t(φ, φ) − ½ d_t(ψ, ψ) = ½ W_2(ω_*μ_φ, ω_*μ_ψ)²`,
/// with `W_2` for the normalized Hilbert–Schmidt metric on bistochastic
/// matrices.
pub fn birkhoff_gap_identity(phi: &StateMixture, psi: &StateMixture, config: &DistanceConfig) -> Result<(f64, f64)> {
    let tensor = distance_tensor(phi, psi, config)?;
    let lhs = tensor.upper - 0.5 * self_distance_tensor(phi) - 0.5 * self_distance_tensor(psi);
    let (phi, psi) = (phi.dedupe(), psi.dedupe());
    let n = phi.n() as f64;
    let cols = psi.len();
    let costs = map_indices(phi.len() * cols, config.exec, |idx| {
        let (a, b) = (&phi.atoms()[idx / cols].atom, &psi.atoms()[idx % cols].atom);
        a.omega().iter().zip(b.omega()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / n
    });
    let table = CostTable::new(phi.len(), cols, costs)?;
    let w2_squared = solve_ot(&phi.weights(), &psi.weights(), &table)?.cost;
    Ok((lhs, 0.5 * w2_squared))
}

/// `½ Σ_σ |μ_1(σ) − μ_2(σ)|` for two classical mixtures.
pub fn tv_upper_bound_classical(phi: &StateMixture, psi: &StateMixture) -> Result<f64> {
    let (Some(m1), Some(m2)) = (phi.classical_measure(), psi.classical_measure()) else {
        return Err(Error::NotClassical);
    };
    if phi.n() != psi.n() {
        return Err(Error::SizeMismatch { left: phi.n(), right: psi.n() });
    }
    let mut support: Vec<&Permutation> = m1.iter().chain(&m2).map(|(s, _)| s).collect();
    support.sort();
    support.dedup();
    let mass = |m: &[(Permutation, f64)], s: &Permutation| m.iter().find(|(t, _)| t == s).map_or(0.0, |(_, w)| *w);
    Ok(0.5 * support.iter().map(|s| (mass(&m1, s) - mass(&m2, s)).abs()).sum::<f64>())
}

// ---------------------------------------------------------------------------
// operator certificates

/// `C_H = 1 − (1/n) Σ_ij a_ij ⊗ b_ij` realized on `C^{a.d} ⊗ C^{b.d}`.
#[derive(Clone, Debug)]
pub struct CostOperatorRep {
    pub reps: Vec<MagicUnitary>,
    pub matrix: HermitianMatrix,
    pub min_eigenvalue: f64,
}

pub fn build_cost_operator(a: &MagicUnitary, b: &MagicUnitary, cap: usize) -> Result<CostOperatorRep> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { left: a.n(), right: b.n() });
    }
    let n = a.n();
    let dim = a.d() * b.d();
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    let mut acc = CMatrix::zeros(dim, dim);
    for (p, q) in a.cells().iter().zip(b.cells()) {
        acc += kron_capped(p.as_matrix(), q.as_matrix(), cap)?;
    }
    let matrix = HermitianMatrix::symmetrized(CMatrix::identity(dim, dim) - acc / c(n as f64, 0.0));
    let min = min_eigenvalue(&matrix)?;
    Ok(CostOperatorRep { reps: vec![a.clone(), b.clone()], matrix, min_eigenvalue: min })
}

fn kron3(x: &CMatrix, y: &CMatrix, z: &CMatrix, cap: usize) -> Result<CMatrix> {
    kron_capped(&kron_capped(x, y, cap)?, z, cap)
}

/// Minimum over rows `i` of `λ_min((1 − p12) + (1 − p23) − (1 − p13))`, where
/// `p12 = Σ_j a_ij ⊗ b_ij ⊗ 1`, `p23 = Σ_j 1 ⊗ b_ij ⊗ c_ij`,
/// `p13 = Σ_j a_ij ⊗ 1 ⊗ c_ij`. Nonnegative when the triangle inequality
/// `ι_13(C_H) ≤ ι_12(C_H) + ι_23(C_H)` holds row by row.
pub fn check_triangle_operator(a: &MagicUnitary, b: &MagicUnitary, c3: &MagicUnitary, cap: usize) -> Result<f64> {
    let n = a.n();
    for other in [b, c3] {
        if other.n() != n {
            return Err(Error::SizeMismatch { left: n, right: other.n() });
        }
    }
    let dim = a.d() * b.d() * c3.d();
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    let (ia, ib, ic) =
        (CMatrix::identity(a.d(), a.d()), CMatrix::identity(b.d(), b.d()), CMatrix::identity(c3.d(), c3.d()));
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let mut m = CMatrix::identity(dim, dim);
        for j in 0..n {
            let (x, y, z) = (a.cell(i, j).as_matrix(), b.cell(i, j).as_matrix(), c3.cell(i, j).as_matrix());
            m -= kron3(x, y, &ic, cap)?;
            m -= kron3(&ia, y, z, cap)?;
            m += kron3(x, &ib, z, cap)?;
        }
        worst = worst.min(min_eigenvalue(&HermitianMatrix::symmetrized(m))?);
    }
    Ok(worst)
}

/// `λ_min(ι_12(C_H) + ι_34(C_H) − Δ̃(C_H))` on `a ⊗ b ⊗ c ⊗ e`, with
/// `Δ̃(C_H) = 1 − (1/n) Σ_{ijkl} a_ik ⊗ b_il ⊗ c_kj ⊗ e_lj`.
pub fn check_comult_inequality(
    a: &MagicUnitary,
    b: &MagicUnitary,
    c3: &MagicUnitary,
    e: &MagicUnitary,
    cap: usize,
) -> Result<f64> {
    let n = a.n();
    for other in [b, c3, e] {
        if other.n() != n {
            return Err(Error::SizeMismatch { left: n, right: other.n() });
        }
    }
    let left = a.d() * b.d();
    let right = c3.d() * e.d();
    let dim = left * right;
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    let nf = c(n as f64, 0.0);
    // ι_12(C_H) + ι_34(C_H) − Δ̃(C_H)
    //   = 1 − (1/n)[Σ a⊗b ⊗ 1 + 1 ⊗ Σ c⊗e − Σ_{kl} X_kl ⊗ Y_kl]
    let mut ab = CMatrix::zeros(left, left);
    for (p, q) in a.cells().iter().zip(b.cells()) {
        ab += kron_capped(p.as_matrix(), q.as_matrix(), cap)?;
    }
    let mut ce = CMatrix::zeros(right, right);
    for (p, q) in c3.cells().iter().zip(e.cells()) {
        ce += kron_capped(p.as_matrix(), q.as_matrix(), cap)?;
    }
    let mut m = CMatrix::identity(dim, dim);
    m -= kron_capped(&ab, &CMatrix::identity(right, right), cap)? / nf;
    m -= kron_capped(&CMatrix::identity(left, left), &ce, cap)? / nf;
    for k in 0..n {
        for l in 0..n {
            let mut x = CMatrix::zeros(left, left);
            for i in 0..n {
                x += kron_capped(a.cell(i, k).as_matrix(), b.cell(i, l).as_matrix(), cap)?;
            }
            let mut y = CMatrix::zeros(right, right);
            for j in 0..n {
                y += kron_capped(c3.cell(k, j).as_matrix(), e.cell(l, j).as_matrix(), cap)?;
            }
            m += kron_capped(&x, &y, cap)? / nf;
        }
    }
    min_eigenvalue(&HermitianMatrix::symmetrized(m))
}

// ---------------------------------------------------------------------------
// convolution

/// Both sides of `d(φ_1 ∗ ψ_1, φ_2 ∗ ψ_2) ≤ d(φ_1, φ_2) + d(ψ_1, ψ_2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubadditivityCheck {
    pub metric: Metric,
    /// `min(induced, engine)`.
    pub lhs: f64,
    pub rhs: f64,
    /// Cost of the product plan glued from the convolved pairwise couplings.
    pub induced: f64,
    /// Upper bound computed directly on the convolved states.
    pub engine: f64,
}

/// Cost of convolved coupling `(X_1 ∗ X_2, Y_1 ∗ Y_2)` under `metric`.
fn convolved_coupling_cost(
    metric: Metric,
    first: (&AtomicTrace, &AtomicTrace, Coupling),
    second: (&AtomicTrace, &AtomicTrace, Coupling),
    cap: usize,
) -> Result<f64> {
    let (a, b, ab) = first;
    let (c3, d, cd) = second;
    if metric == Metric::Tensor {
        let n = a.n();
        let left = a.birkhoff().matmul(&c3.birkhoff());
        let right = b.birkhoff().matmul(&d.birkhoff());
        return Ok(hamming_from_omegas(n, &left.entries, &right.entries));
    }
    let (x1, y1) = ab.realize(a.rep(), b.rep(), cap)?;
    let (x2, y2) = cd.realize(c3.rep(), d.rep(), cap)?;
    let x = x1.convolve_with_cap(&x2, cap)?;
    let y = y1.convolve_with_cap(&y2, cap)?;
    match metric {
        Metric::Free => coupling_cost_free(&x, &y),
        Metric::L1 => coupling_cost_l1(&x, &y),
        Metric::Tensor => unreachable!(),
    }
}

/// Runs the convolution subadditivity harness for one metric.
///
/// The pairwise optimal plans `π_1`, `π_2` and their couplings induce the
/// product plan `π_1 ⊗ π_2` between the atoms of the two convolutions, each
/// entry realized by the convolution of the two pairwise couplings. Its cost
/// (`induced`) and the direct estimate on the convolved states (`engine`)
/// are both upper bounds on the left-hand side; `lhs` is the smaller one.
pub fn check_convolution_subadditivity(
    phi1: &StateMixture,
    phi2: &StateMixture,
    psi1: &StateMixture,
    psi2: &StateMixture,
    metric: Metric,
    config: &DistanceConfig,
) -> Result<SubadditivityCheck> {
    let (phi1, phi2, psi1, psi2) = (phi1.dedupe(), phi2.dedupe(), psi1.dedupe(), psi2.dedupe());
    let need_free = metric == Metric::Free;
    let need_l1 = metric == Metric::L1;
    let t1 = PairTable::build(&phi1, &phi2, config, need_free, need_l1)?;
    let t2 = PairTable::build(&psi1, &psi2, config, need_free, need_l1)?;
    let s1 = solve_ot(&phi1.weights(), &phi2.weights(), &t1.cost_table(metric)?)?;
    let s2 = solve_ot(&psi1.weights(), &psi2.weights(), &t2.cost_table(metric)?)?;
    let rhs = s1.cost + s2.cost;

    let mut terms = Vec::new();
    for i in 0..t1.rows {
        for j in 0..t1.cols {
            for k in 0..t2.rows {
                for l in 0..t2.cols {
                    let w = s1.plan.get(i, j) * s2.plan.get(k, l);
                    if w > 1e-15 {
                        terms.push((i, j, k, l, w));
                    }
                }
            }
        }
    }
    let costs = try_map_indices(terms.len(), config.exec, |t| {
        let (i, j, k, l, _) = terms[t];
        convolved_coupling_cost(
            metric,
            (&phi1.atoms()[i].atom, &phi2.atoms()[j].atom, t1.coupling(metric, i, j)),
            (&psi1.atoms()[k].atom, &psi2.atoms()[l].atom, t2.coupling(metric, k, l)),
            config.dim_cap,
        )
    })?;
    let induced: f64 = terms.iter().zip(&costs).map(|(t, c)| t.4 * c).sum();

    let conv1 = phi1.convolve_with_cap(&psi1, config.dim_cap)?;
    let conv2 = phi2.convolve_with_cap(&psi2, config.dim_cap)?;
    let engine = single(&conv1, &conv2, metric, config)?.upper;
    Ok(SubadditivityCheck { metric, lhs: induced.min(engine), rhs, induced, engine })
}

/// Draws a representation for operator-certificate corpora.
pub fn operator_corpus_rep(n: usize, max_dim: usize, seed: u64, index: u64) -> MagicUnitary {
    random_rep(n, max_dim, &mut item_rng(seed, 0x4F50, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_lifted_classical, seeded_rng};
    use crate::linalg::random_projection;
    use approx::assert_abs_diff_eq;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    fn delta(images: &[usize]) -> StateMixture {
        StateMixture::atom(MagicUnitary::from_images(images).unwrap())
    }

    fn atom(images: &[usize]) -> AtomicTrace {
        AtomicTrace::new(MagicUnitary::from_images(images).unwrap())
    }

    fn two_block(seed: u64) -> MagicUnitary {
        let mut rng = seeded_rng(seed);
        let p = random_projection(2, 1, &mut rng);
        let q = random_projection(2, 1, &mut rng);
        MagicUnitary::two_block(&p, &q).unwrap()
    }

    fn cfg() -> DistanceConfig {
        DistanceConfig::default()
    }

    #[test]
    fn hamming_cost_examples() {
        let a = atom(&[0, 1, 2, 3]);
        assert_eq!(atom_cost_hamming(&a, &a).unwrap(), 0.0);
        let b = atom(&[1, 0, 2, 3]);
        assert_abs_diff_eq!(atom_cost_hamming(&a, &b).unwrap(), 0.5, epsilon = 1e-15);
        // ω has eight 0.5 entries: 1 − (1/4)(8 · 0.25)
        let t = AtomicTrace::new(two_block(1));
        assert_abs_diff_eq!(atom_cost_hamming(&t, &t).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn classical_atom_costs_agree_with_hamming() {
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                let (a, b) = (
                    AtomicTrace::new(MagicUnitary::from_permutation(&s)),
                    AtomicTrace::new(MagicUnitary::from_permutation(&t)),
                );
                let h = crate::transport::hamming(&s, &t).unwrap();
                assert_abs_diff_eq!(atom_cost_hamming(&a, &b).unwrap(), h, epsilon = 1e-15);
                assert_abs_diff_eq!(atom_cost_l1(&a, &b).unwrap(), h, epsilon = 1e-12);
                assert_abs_diff_eq!(atom_cost_meet_same_dim(&a, &b, None).unwrap(), h, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn meet_cost_examples() {
        let t = AtomicTrace::new(two_block(2));
        assert_abs_diff_eq!(atom_cost_meet_same_dim(&t, &t, None).unwrap(), 0.0, epsilon = 1e-12);
        let other = AtomicTrace::new(two_block(3));
        assert_abs_diff_eq!(
            atom_cost_meet_tensor(&t, &other, 4096).unwrap(),
            atom_cost_hamming(&t, &other).unwrap(),
            epsilon = 1e-9
        );
        let small = atom(&[0, 1, 2, 3]);
        assert!(matches!(atom_cost_meet_same_dim(&t, &small, None), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn l1_cost_is_below_hamming() {
        let mut rng = seeded_rng(4);
        for _ in 0..20 {
            let a = AtomicTrace::new(random_rep(4, 4, &mut rng));
            let b = AtomicTrace::new(random_rep(4, 4, &mut rng));
            assert!(atom_cost_l1(&a, &b).unwrap() <= atom_cost_hamming(&a, &b).unwrap() + 1e-9);
        }
    }

    #[test]
    fn optimizer_realigns_conjugated_atom() {
        let mut rng = seeded_rng(5);
        let a = AtomicTrace::new(two_block(6));
        let v = haar_unitary(2, &mut rng);
        let b = AtomicTrace::new(a.rep().conjugate(&v).unwrap());
        let (_, identity_cost) = optimize_unitary(&a, &b, 0, 200, 1).unwrap();
        let (u, cost) = optimize_unitary(&a, &b, 8, 200, 1).unwrap();
        assert!(cost <= 1e-6, "cost {cost}");
        assert!(cost <= identity_cost);
        assert!(crate::linalg::unitarity_residual(&u) < 1e-10);

        let (u, cost) = optimize_unitary(&a, &a, 8, 200, 1).unwrap();
        assert_eq!(cost, 0.0);
        assert_eq!(u, CMatrix::identity(2, 2));

        let s = AtomicTrace::new(random_lifted_classical(4, &mut rng));
        let t = AtomicTrace::new(random_lifted_classical(4, &mut rng));
        let (_, cost) = optimize_unitary(&s, &t, 4, 50, 2).unwrap();
        assert_abs_diff_eq!(cost, atom_cost_hamming(&s, &t).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn tensor_distance_examples() {
        let phi = StateMixture::classical(&[(0.4, perm(&[0, 1, 2])), (0.6, perm(&[1, 2, 0]))]).unwrap();
        let r = distance_tensor(&phi, &phi, &cfg()).unwrap();
        assert_eq!(r.upper, 0.0);
        assert!(r.exact_for_presented_atoms);

        let psi = StateMixture::classical(&[(1.0, perm(&[0, 2, 1]))]).unwrap();
        let w1 = classical_w1(&phi.classical_measure().unwrap(), &psi.classical_measure().unwrap()).unwrap();
        let r = distance_tensor(&phi, &psi, &cfg()).unwrap();
        assert_abs_diff_eq!(r.upper, w1, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lower, w1, epsilon = 1e-12);

        let (a, b) = (two_block(7), two_block(8));
        let r = distance_tensor(&StateMixture::atom(a.clone()), &StateMixture::atom(b.clone()), &cfg()).unwrap();
        assert_abs_diff_eq!(
            r.upper,
            atom_cost_hamming(&AtomicTrace::new(a), &AtomicTrace::new(b)).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn l1_and_free_examples() {
        let t = StateMixture::atom(two_block(9));
        assert_eq!(distance_l1(&t, &t, &cfg()).unwrap().upper, 0.0);
        assert_eq!(distance_free(&t, &t, &cfg()).unwrap().upper, 0.0);

        let phi = StateMixture::classical(&[(0.5, perm(&[0, 1, 2])), (0.5, perm(&[1, 0, 2]))]).unwrap();
        let psi = StateMixture::classical(&[(0.3, perm(&[2, 1, 0])), (0.7, perm(&[0, 1, 2]))]).unwrap();
        let w1 = classical_w1(&phi.classical_measure().unwrap(), &psi.classical_measure().unwrap()).unwrap();
        for r in distances(&phi, &psi, &Metric::ALL, &cfg()).unwrap() {
            assert_abs_diff_eq!(r.upper, w1, epsilon = 1e-9);
            assert_abs_diff_eq!(r.lower, w1, epsilon = 1e-9);
        }

        let (e, s) = (delta(&[0, 1, 2]), delta(&[1, 2, 0]));
        for r in distances(&e, &s, &Metric::ALL, &cfg()).unwrap() {
            assert_eq!(r.upper, 1.0);
            assert_eq!(r.lower, 1.0);
        }
        let free = distance_free(&delta(&[0, 1, 2]), &delta(&[1, 0, 2]), &cfg()).unwrap();
        assert_abs_diff_eq!(free.upper, 2.0 / 3.0, epsilon = 1e-12);
        assert!(!free.exact_for_presented_atoms);
    }

    #[test]
    fn free_distance_finds_conjugated_copy() {
        let a = two_block(10);
        let mut rng = seeded_rng(11);
        let b = a.conjugate(&haar_unitary(2, &mut rng)).unwrap();
        let (phi, psi) = (StateMixture::atom(a), StateMixture::atom(b));
        let reports = distances(&phi, &psi, &Metric::ALL, &cfg()).unwrap();
        assert_abs_diff_eq!(reports[0].upper, 0.5, epsilon = 1e-12);
        assert!(reports[1].upper < 1e-6);
        assert!(reports[2].upper <= reports[1].upper + 1e-12);
        assert!(reports[1].witnesses.iter().any(|w| w.contains("improved")));
    }

    #[test]
    fn word_bound_examples() {
        let (e, t) = (delta(&[0, 1]), delta(&[1, 0]));
        assert_eq!(lower_bound_words(&e, &e, &WordCorpusConfig::default()).unwrap(), 0.0);
        let single = WordCorpusConfig { exhaustive_len: 1, sample_count: 0, seed: 0 };
        assert_abs_diff_eq!(lower_bound_words(&e, &t, &single).unwrap(), 0.25, epsilon = 1e-15);
        let none = WordCorpusConfig { exhaustive_len: 0, sample_count: 0, seed: 0 };
        assert_eq!(lower_bound_words(&e, &t, &none).unwrap(), 0.0);
    }

    #[test]
    fn self_distance_examples() {
        let phi = StateMixture::classical(&[(0.2, perm(&[0, 1, 2])), (0.8, perm(&[2, 0, 1]))]).unwrap();
        assert_eq!(self_distance_tensor(&phi), 0.0);
        let t = two_block(12);
        assert_abs_diff_eq!(self_distance_tensor(&StateMixture::atom(t.clone())), 0.5, epsilon = 1e-12);
        let mix = StateMixture::new(vec![(0.5, t), (0.5, MagicUnitary::from_images(&[0, 1, 2, 3]).unwrap())]).unwrap();
        assert_abs_diff_eq!(self_distance_tensor(&mix), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(distance_tensor(&mix, &mix, &cfg()).unwrap().upper, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn birkhoff_gap_examples() {
        let t = StateMixture::atom(two_block(13));
        assert_eq!(birkhoff_gap_identity(&t, &t, &cfg()).unwrap(), (0.0, 0.0));
        let e = delta(&[0, 1, 2, 3]);
        let (lhs, rhs) = birkhoff_gap_identity(&e, &t, &cfg()).unwrap();
        assert_abs_diff_eq!(lhs, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn distance_one_examples() {
        assert!(check_distance_one(&delta(&[0, 1]), &delta(&[1, 0])));
        assert!(!check_distance_one(&delta(&[0, 1, 2]), &delta(&[1, 0, 2])));
        let t = StateMixture::atom(two_block(14));
        assert!(!check_distance_one(&t, &t));
    }

    #[test]
    fn cost_operator_examples() {
        let s = MagicUnitary::from_images(&[0, 1, 2]).unwrap();
        let t = MagicUnitary::from_images(&[1, 0, 2]).unwrap();
        let op = build_cost_operator(&s, &t, 4096).unwrap();
        assert_abs_diff_eq!(op.matrix.as_matrix()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-15);
        let op = build_cost_operator(&s, &s, 4096).unwrap();
        assert_abs_diff_eq!(op.matrix.as_matrix()[(0, 0)].re, 0.0, epsilon = 1e-15);
        let mut rng = seeded_rng(15);
        for _ in 0..10 {
            let (a, b) = (random_rep(4, 4, &mut rng), random_rep(4, 4, &mut rng));
            assert!(build_cost_operator(&a, &b, 4096).unwrap().min_eigenvalue >= -1e-9);
        }
        assert!(matches!(build_cost_operator(&two_block(1), &two_block(2), 3), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn triangle_and_comult_certificates() {
        let s = MagicUnitary::from_images(&[0, 1, 2]).unwrap();
        let t = MagicUnitary::from_images(&[1, 2, 0]).unwrap();
        let u = MagicUnitary::from_images(&[2, 1, 0]).unwrap();
        assert!(check_triangle_operator(&s, &t, &u, 4096).unwrap() >= 0.0);
        assert!(check_comult_inequality(&s, &t, &u, &s, 4096).unwrap() >= 0.0);

        let tb = two_block(16);
        assert!(check_triangle_operator(&tb, &tb, &tb, 4096).unwrap() >= -1e-9);
        assert!(check_comult_inequality(&tb, &tb, &tb, &tb, 4096).unwrap() >= -1e-9);
        let e = MagicUnitary::from_images(&[0, 1, 2, 3]).unwrap();
        assert!(check_comult_inequality(&tb, &e, &two_block(17), &e, 4096).unwrap() >= -1e-9);
        assert!(matches!(check_comult_inequality(&tb, &tb, &tb, &tb, 15), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn subadditivity_examples() {
        let phi1 = StateMixture::classical(&[(0.5, perm(&[0, 1, 2])), (0.5, perm(&[1, 0, 2]))]).unwrap();
        let phi2 = delta(&[0, 2, 1]);
        let psi1 = delta(&[1, 2, 0]);
        let psi2 = StateMixture::classical(&[(0.3, perm(&[1, 2, 0])), (0.7, perm(&[2, 1, 0]))]).unwrap();
        for metric in Metric::ALL {
            let r = check_convolution_subadditivity(&phi1, &phi2, &psi1, &psi2, metric, &cfg()).unwrap();
            assert!(r.lhs <= r.rhs + 1e-8, "{metric}: {r:?}");
        }
        let t = StateMixture::atom(two_block(18));
        let r = check_convolution_subadditivity(&t, &t, &t, &t, Metric::Tensor, &cfg()).unwrap();
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-12);
        assert!(r.lhs <= r.rhs + 1e-8);
        for metric in [Metric::Free, Metric::L1] {
            let r = check_convolution_subadditivity(&t, &t, &t, &t, metric, &cfg()).unwrap();
            assert_eq!(r.rhs, 0.0);
            assert!(r.lhs <= 1e-9);
        }
    }

    #[test]
    fn tv_bound_examples() {
        let e = delta(&[0, 1, 2]);
        assert_eq!(tv_upper_bound_classical(&e, &e).unwrap(), 0.0);
        assert_eq!(tv_upper_bound_classical(&e, &delta(&[1, 0, 2])).unwrap(), 1.0);
        let half = StateMixture::classical(&[(0.5, perm(&[0, 1, 2])), (0.5, perm(&[1, 0, 2]))]).unwrap();
        assert_abs_diff_eq!(tv_upper_bound_classical(&half, &e).unwrap(), 0.5, epsilon = 1e-15);
        let t = StateMixture::atom(two_block(19));
        assert_eq!(tv_upper_bound_classical(&t, &t), Err(Error::NotClassical));
    }

    #[test]
    fn same_space_floor_bounds_meet_cost() {
        let mut rng = seeded_rng(20);
        for _ in 0..10 {
            let a = AtomicTrace::new(random_rep(4, 2, &mut rng));
            let b = AtomicTrace::new(random_rep(4, 2, &mut rng));
            if a.d() == b.d() {
                let u = haar_unitary(a.d(), &mut rng);
                assert!(same_space_floor(&a, &b) <= atom_cost_meet_same_dim(&a, &b, Some(&u)).unwrap() + 1e-12);
            }
        }
    }
}
