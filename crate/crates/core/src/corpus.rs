//! Seeded generators for test corpora: permutations, magic unitaries,
//! mixtures and projection families.
//!
//! Representations are drawn from classical permutation reps, two-block
//! reps built from Haar-random rank-one projections in dimension two, direct
//! sums of those, and random unitary conjugations of all of the above.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{haar_unitary, random_projection, ProjectionMatrix};
use crate::magic::MagicUnitary;
use crate::perm::Permutation;
use crate::states::StateMixture;

pub type CorpusRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child stream for item `index` of a corpus, so items do not depend on
/// how many draws earlier items made.
pub fn item_rng(seed: u64, stream: u64, index: u64) -> CorpusRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    rng
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle of 0..n")
}

/// `n = 4` two-block rep (padded with fixed points for `n > 4`) from two
/// independent Haar-random rank-one projections in `C^2`.
pub fn random_two_block<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MagicUnitary {
    let p = random_projection(2, 1, rng);
    let q = random_projection(2, 1, rng);
    MagicUnitary::two_block_padded(&p, &q, n).expect("n >= 4 and equal dims")
}

/// One representation of dimension at most `max_dim`.
pub fn random_rep<R: Rng + ?Sized>(n: usize, max_dim: usize, rng: &mut R) -> MagicUnitary {
    let nonclassical = n >= 4 && max_dim >= 2;
    let choice = rng.random_range(0..if max_dim >= 2 { 5 } else { 1 });
    let rep = match choice {
        0 => MagicUnitary::from_permutation(&random_permutation(n, rng)),
        1 => MagicUnitary::from_permutation(&random_permutation(n, rng)).amplify_right(2, max_dim).expect("within cap"),
        2 | 3 if nonclassical => random_two_block(n, rng),
        _ => {
            let half = max_dim / 2;
            let a = random_rep(n, half.max(1), rng);
            let b = random_rep(n, (max_dim - a.d()).max(1).min(half.max(1)), rng);
            if a.d() + b.d() <= max_dim {
                a.direct_sum(&b).expect("same n")
            } else {
                a
            }
        }
    };
    if rep.d() > 1 {
        let u = haar_unitary(rep.d(), rng);
        rep.conjugate(&u).expect("Haar unitary")
    } else {
        rep
    }
}

/// A classical rep lifted to dimension two and rotated; still a point mass.
pub fn random_lifted_classical<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MagicUnitary {
    let rep = MagicUnitary::from_permutation(&random_permutation(n, rng)).amplify_right(2, 2).expect("d = 2");
    rep.conjugate(&haar_unitary(2, rng)).expect("Haar unitary")
}

fn random_weights<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Point masses at up to `max_support` random permutations.
pub fn random_classical_mixture<R: Rng + ?Sized>(n: usize, max_support: usize, rng: &mut R) -> StateMixture {
    let len = rng.random_range(1..=max_support);
    let weights = random_weights(len, rng);
    let measure: Vec<(f64, Permutation)> = weights.into_iter().map(|w| (w, random_permutation(n, rng))).collect();
    StateMixture::classical(&measure).expect("positive weights")
}

/// Mixture of up to `max_atoms` reps from [`random_rep`].
pub fn random_mixture<R: Rng + ?Sized>(n: usize, max_atoms: usize, max_dim: usize, rng: &mut R) -> StateMixture {
    let len = rng.random_range(1..=max_atoms);
    let weights = random_weights(len, rng);
    let atoms = weights.into_iter().map(|w| (w, random_rep(n, max_dim, rng))).collect();
    crate::states::normalize(atoms).expect("positive weights")
}

/// Random projection of random rank in dimension `dim`.
pub fn random_projection_any_rank<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ProjectionMatrix {
    let rank = rng.random_range(0..=dim);
    random_projection(dim, rank, rng)
}

/// Pairs of projections with a planted common subspace, so meets are often
/// nontrivial.
pub fn random_projection_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (ProjectionMatrix, ProjectionMatrix) {
    let u = haar_unitary(dim, rng);
    let shared = rng.random_range(0..=dim / 2);
    let extra_p = rng.random_range(0..=(dim - shared));
    let extra_q = rng.random_range(0..=(dim - shared));
    let v = haar_unitary(dim, rng);
    let mut p_cols: Vec<_> = (0..shared).map(|k| u.column(k).into_owned()).collect();
    let mut q_cols = p_cols.clone();
    p_cols.extend((0..extra_p).map(|k| v.column(k).into_owned()));
    let w = haar_unitary(dim, rng);
    q_cols.extend((0..extra_q).map(|k| w.column(k).into_owned()));
    let to_proj = |cols: Vec<nalgebra::DVector<crate::linalg::C64>>| {
        let vecs: Vec<Vec<_>> = cols.iter().map(|c| c.iter().copied().collect()).collect();
        if vecs.is_empty() {
            ProjectionMatrix::zeros(dim)
        } else {
            ProjectionMatrix::onto_span(&vecs).expect("finite vectors")
        }
    };
    (to_proj(p_cols), to_proj(q_cols))
}

/// Mutually orthogonal family of `count` projections from one Haar basis.
pub fn random_orthogonal_family<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Vec<ProjectionMatrix> {
    let u = haar_unitary(dim, rng);
    let mut cuts: Vec<usize> = (0..count.saturating_sub(1)).map(|_| rng.random_range(0..=dim)).collect();
    cuts.push(0);
    cuts.push(dim);
    cuts.sort_unstable();
    cuts.windows(2)
        .map(|w| {
            let basis = u.columns(w[0], w[1] - w[0]).into_owned();
            ProjectionMatrix::from_orthonormal_columns(dim, &basis)
        })
        .collect()
}
