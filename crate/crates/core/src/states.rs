//! Tracial states on `C(S_n^+)` modelled as finite convex combinations of
//! atomic traces `tr_d ∘ π`, where `π` is a magic unitary representation.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, DEFAULT_DIM_CAP};
use crate::magic::MagicUnitary;
use crate::perm::Permutation;

/// Tolerance on mixture weights summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;
/// Weights below this are dropped by [`normalize`].
pub const WEIGHT_DROP: f64 = 1e-12;
/// Reps equal entrywise within this are the same atom.
pub const ATOM_IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for 0/1 omega entries and scalar cells in [`StateMixture::is_classical`].
pub const CLASSICAL_TOL: f64 = 1e-8;

/// An `n × n` doubly stochastic matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BistochasticMatrix {
    pub n: usize,
    pub entries: Vec<f64>,
}

impl BistochasticMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn matmul(&self, other: &BistochasticMatrix) -> BistochasticMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        BistochasticMatrix { n, entries }
    }

    /// Worst deviation of any row or column sum from one, or of any entry
    /// below zero.
    pub fn residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| self.get(i, j)).sum();
            let col: f64 = (0..n).map(|j| self.get(j, i)).sum();
            worst = worst.max((row - 1.0).abs()).max((col - 1.0).abs());
        }
        for &x in &self.entries {
            worst = worst.max(-x);
        }
        worst
    }

    /// Frobenius inner product `Σ_ij A_ij B_ij`.
    pub fn inner(&self, other: &BistochasticMatrix) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }
}

/// The trace `tr_d ∘ π` induced by a magic unitary, with its Birkhoff table.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicTrace {
    rep: MagicUnitary,
    omega: Vec<f64>,
}

impl AtomicTrace {
    pub fn new(rep: MagicUnitary) -> Self {
        let omega = rep.omega();
        AtomicTrace { rep, omega }
    }

    pub fn rep(&self) -> &MagicUnitary {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn d(&self) -> usize {
        self.rep.d()
    }

    /// `ω[i][j] = tr_d(P_ij)`, row-major.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn birkhoff(&self) -> BistochasticMatrix {
        BistochasticMatrix { n: self.n(), entries: self.omega.clone() }
    }

    /// Same representation up to [`ATOM_IDENTITY_TOL`]; unitary equivalence is
    /// not detected.
    pub fn is_identical(&self, other: &AtomicTrace) -> bool {
        self.rep.approx_eq(&other.rep, ATOM_IDENTITY_TOL)
    }

    /// The permutation this atom is a point mass at, if it factors through
    /// `C(S_n)`.
    pub fn classical_permutation(&self) -> Option<Permutation> {
        let n = self.n();
        if self.omega.iter().any(|&w| w.abs() > CLASSICAL_TOL && (w - 1.0).abs() > CLASSICAL_TOL) {
            return None;
        }
        if !self.rep.is_scalar(CLASSICAL_TOL) {
            return None;
        }
        let images: Vec<usize> = (0..n)
            .map(|i| (0..n).find(|&j| (self.omega[i * n + j] - 1.0).abs() <= CLASSICAL_TOL))
            .collect::<Option<_>>()?;
        Permutation::new(images).ok()
    }

    /// `tr_d(P_{i_1 j_1} ⋯ P_{i_ℓ j_ℓ})`.
    pub fn evaluate_word(&self, word: &Word) -> Result<C64> {
        let n = self.n();
        for &(i, j) in &word.letters {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
        }
        let d = self.d();
        let Some((&(i0, j0), rest)) = word.letters.split_first() else {
            return Ok(C64::new(1.0, 0.0));
        };
        let mut acc: CMatrix = self.rep.cell(i0, j0).as_matrix().clone();
        for &(i, j) in rest {
            acc = &acc * self.rep.cell(i, j).as_matrix();
        }
        let tr = (0..d).map(|k| acc[(k, k)]).sum::<C64>() / C64::new(d as f64, 0.0);
        Ok(tr)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAtom {
    pub weight: f64,
    pub atom: AtomicTrace,
}

/// A convex combination `Σ_a w_a τ_a` of atomic traces sharing `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMixture {
    n: usize,
    atoms: Vec<WeightedAtom>,
}

/// Rescales raw nonnegative weights to sum one, dropping atoms whose
/// rescaled weight is below [`WEIGHT_DROP`].
pub fn normalize(atoms: Vec<(f64, MagicUnitary)>) -> Result<StateMixture> {
    if atoms.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if let Some(&(w, _)) = atoms.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
    }
    let total: f64 = atoms.iter().map(|(w, _)| w).sum();
    if total <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    let kept: Vec<(f64, MagicUnitary)> =
        atoms.into_iter().map(|(w, r)| (w / total, r)).filter(|(w, _)| *w >= WEIGHT_DROP).collect();
    let total: f64 = kept.iter().map(|(w, _)| w).sum();
    StateMixture::new(kept.into_iter().map(|(w, r)| (w / total, r)).collect())
}

impl StateMixture {
    /// Requires nonnegative weights summing to one within [`WEIGHT_SUM_TOL`].
    pub fn new(atoms: Vec<(f64, MagicUnitary)>) -> Result<Self> {
        let Some(first) = atoms.first() else {
            return Err(Error::EmptyMixture);
        };
        let n = first.1.n();
        for (w, rep) in &atoms {
            if rep.n() != n {
                return Err(Error::SizeMismatch { left: n, right: rep.n() });
            }
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
            }
        }
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        let atoms =
            atoms.into_iter().map(|(weight, rep)| WeightedAtom { weight, atom: AtomicTrace::new(rep) }).collect();
        Ok(StateMixture { n, atoms })
    }

    /// The point mass at a single representation.
    pub fn atom(rep: MagicUnitary) -> Self {
        let n = rep.n();
        StateMixture { n, atoms: vec![WeightedAtom { weight: 1.0, atom: AtomicTrace::new(rep) }] }
    }

    /// `Σ_σ μ(σ) δ_σ` from a list of (weight, permutation) pairs.
    pub fn classical(measure: &[(f64, Permutation)]) -> Result<Self> {
        normalize(measure.iter().map(|(w, s)| (*w, MagicUnitary::from_permutation(s))).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[WeightedAtom] {
        &self.atoms
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.weight).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.atoms.iter().map(|a| a.atom.d()).max().unwrap_or(0)
    }

    /// Merges identical atoms by adding their weights; first occurrence order
    /// is kept.
    pub fn dedupe(&self) -> StateMixture {
        let mut out: Vec<WeightedAtom> = Vec::new();
        for wa in &self.atoms {
            match out.iter_mut().find(|o| o.atom.is_identical(&wa.atom)) {
                Some(o) => o.weight += wa.weight,
                None => out.push(wa.clone()),
            }
        }
        StateMixture { n: self.n, atoms: out }
    }

    /// `Σ_a w_a tr(P^a_{i_1 j_1} ⋯ P^a_{i_ℓ j_ℓ})`.
    pub fn evaluate_word(&self, word: &Word) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for wa in &self.atoms {
            acc += wa.atom.evaluate_word(word)? * wa.weight;
        }
        Ok(acc)
    }

    /// `ω(φ) = [φ(u_ij)] = Σ_a w_a ω_a`.
    pub fn birkhoff(&self) -> BistochasticMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for wa in &self.atoms {
            for (e, o) in entries.iter_mut().zip(wa.atom.omega()) {
                *e += wa.weight * o;
            }
        }
        BistochasticMatrix { n, entries }
    }

    /// True when every atom is a point mass on `S_n` (0/1 omega, scalar cells).
    pub fn is_classical(&self) -> bool {
        self.atoms.iter().all(|wa| wa.atom.classical_permutation().is_some())
    }

    /// The measure on `S_n`, aggregated per permutation and sorted; `None`
    /// unless [`Self::is_classical`].
    pub fn classical_measure(&self) -> Option<Vec<(Permutation, f64)>> {
        let mut out: Vec<(Permutation, f64)> = Vec::new();
        for wa in &self.atoms {
            let sigma = wa.atom.classical_permutation()?;
            match out.iter_mut().find(|(s, _)| *s == sigma) {
                Some((_, w)) => *w += wa.weight,
                None => out.push((sigma, wa.weight)),
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Some(out)
    }

    /// `φ ∗ ψ = (φ ⊗ ψ) ∘ Δ`, atom pairs in `(a, b)` lexicographic order.
    pub fn convolve(&self, other: &StateMixture) -> Result<StateMixture> {
        self.convolve_with_cap(other, DEFAULT_DIM_CAP)
    }

    pub fn convolve_with_cap(&self, other: &StateMixture, cap: usize) -> Result<StateMixture> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let mut atoms = Vec::with_capacity(self.len() * other.len());
        for a in &self.atoms {
            for b in &other.atoms {
                let rep = a.atom.rep().convolve_with_cap(b.atom.rep(), cap)?;
                atoms.push(WeightedAtom { weight: a.weight * b.weight, atom: AtomicTrace::new(rep) });
            }
        }
        Ok(StateMixture { n: self.n, atoms })
    }
}

pub fn convolve_states(phi: &StateMixture, psi: &StateMixture) -> Result<StateMixture> {
    phi.convolve(psi)
}

/// A monomial `u_{i_1 j_1} ⋯ u_{i_ℓ j_ℓ}` in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    pub letters: Vec<(usize, usize)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, usize)>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Which words the Lipschitz lower bound ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WordCorpusConfig {
    /// Every word of length `1..=exhaustive_len` is included.
    pub exhaustive_len: usize,
    /// Number of additional random words of length `exhaustive_len + 1`,
    /// drawn only when `n ≥ 4`.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for WordCorpusConfig {
    fn default() -> Self {
        WordCorpusConfig { exhaustive_len: 2, sample_count: 200, seed: 0 }
    }
}

/// Builds the word corpus for size `n`: exhaustive short words followed by
/// the seeded random sample. Never contains the empty word.
pub fn word_corpus(n: usize, config: &WordCorpusConfig) -> Vec<Word> {
    let mut words = Vec::new();
    let mut frontier = vec![Word::empty()];
    for _ in 0..config.exhaustive_len {
        let mut next = Vec::with_capacity(frontier.len() * n * n);
        for w in &frontier {
            for i in 0..n {
                for j in 0..n {
                    let mut letters = w.letters.clone();
                    letters.push((i, j));
                    next.push(Word::new(letters));
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    if n >= 4 && config.sample_count > 0 {
        let mut rng = crate::corpus::seeded_rng(config.seed ^ 0x5745_5244);
        let len = config.exhaustive_len + 1;
        for _ in 0..config.sample_count {
            let letters = (0..len).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
            words.push(Word::new(letters));
        }
    }
    words
}
