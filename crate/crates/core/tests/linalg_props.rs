use proptest::prelude::*;
use qhamming::corpus::{random_orthogonal_family, random_projection_pair, seeded_rng};
use qhamming::linalg::{
    eigh, join, kron, max_abs, meet, min_eigenvalue, normalized_trace, polar_unitary, random_projection, trace_norm,
    unitarity_residual, CMatrix, HermitianMatrix, ProjectionMatrix,
};

/// Meet by a different route: the range intersection is the eigenvalue-2
/// space of `p + q`.
fn meet_via_sum(p: &ProjectionMatrix, q: &ProjectionMatrix) -> CMatrix {
    let spec = eigh(&p.as_hermitian().add(q.as_hermitian())).unwrap();
    let dim = p.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &v) in spec.values.iter().enumerate() {
        if v > 2.0 - 1e-6 {
            let col = spec.vectors.column(k);
            out += col * col.adjoint();
        }
    }
    out
}

fn pair(seed: u64, dim: usize) -> (ProjectionMatrix, ProjectionMatrix) {
    random_projection_pair(dim, &mut seeded_rng(seed))
}

fn hs_normalized_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>() / m.nrows() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_matches_sum_eigenspace(seed in any::<u64>(), dim in 1usize..=8) {
        let (p, q) = pair(seed, dim);
        let m = meet(&p, &q).unwrap();
        prop_assert!(max_abs(&(m.as_matrix() - meet_via_sum(&p, &q))) < 1e-7);
    }

    #[test]
    fn meet_is_commutative_idempotent_associative(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = seeded_rng(seed);
        let (p, q) = random_projection_pair(dim, &mut rng);
        let r = random_projection(dim, dim - dim / 3, &mut rng);
        let pq = meet(&p, &q).unwrap();
        prop_assert!(max_abs(&(pq.as_matrix() - meet(&q, &p).unwrap().as_matrix())) < 1e-7);
        prop_assert!(max_abs(&(meet(&p, &p).unwrap().as_matrix() - p.as_matrix())) < 1e-7);
        let left = meet(&pq, &r).unwrap();
        let right = meet(&p, &meet(&q, &r).unwrap()).unwrap();
        prop_assert!(max_abs(&(left.as_matrix() - right.as_matrix())) < 1e-7);
    }

    #[test]
    fn trace_identity(seed in any::<u64>(), dim in 1usize..=8) {
        let (p, q) = pair(seed, dim);
        let tau = |x: &ProjectionMatrix| normalized_trace(x.as_hermitian());
        let lhs = tau(&join(&p, &q).unwrap()) + tau(&meet(&p, &q).unwrap());
        prop_assert!((lhs - tau(&p) - tau(&q)).abs() <= 1e-8);
    }

    #[test]
    fn meet_of_tensor_products(seed in any::<u64>(), d1 in 1usize..=3, d2 in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let (p1, p2) = random_projection_pair(d1, &mut rng);
        let (q1, q2) = random_projection_pair(d2, &mut rng);
        let k = |a: &ProjectionMatrix, b: &ProjectionMatrix| {
            ProjectionMatrix::new(kron(a.as_hermitian(), b.as_hermitian()).unwrap()).unwrap()
        };
        let lhs = meet(&k(&p1, &q1), &k(&p2, &q2)).unwrap();
        let rhs = k(&meet(&p1, &p2).unwrap(), &meet(&q1, &q2).unwrap());
        prop_assert!(max_abs(&(lhs.as_matrix() - rhs.as_matrix())) <= 1e-7);
    }

    #[test]
    fn meet_of_sums_dominates_sum_of_meets(seed in any::<u64>(), dim in 1usize..=8, parts in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let ps = random_orthogonal_family(dim, parts, &mut rng);
        let qs = random_orthogonal_family(dim, parts, &mut rng);
        // keep only part of each family so the sums are not the identity
        let sum = |fam: &[ProjectionMatrix]| {
            let m = fam.iter().take(parts.max(2) - 1).fold(CMatrix::zeros(dim, dim), |acc, p| acc + p.as_matrix());
            ProjectionMatrix::new(HermitianMatrix::symmetrized(m)).unwrap()
        };
        let mut gap = meet(&sum(&ps), &sum(&qs)).unwrap().as_matrix().clone();
        for (p, q) in ps.iter().zip(&qs).take(parts.max(2) - 1) {
            gap -= meet(p, q).unwrap().as_matrix();
        }
        prop_assert!(min_eigenvalue(&HermitianMatrix::symmetrized(gap)).unwrap() >= -1e-8);
    }

    #[test]
    fn hilbert_schmidt_below_trace_norm(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = seeded_rng(seed);
        let p = random_projection(dim, dim / 2, &mut rng);
        let q = random_projection(dim, dim.div_ceil(2), &mut rng);
        let diff = p.as_hermitian().sub(q.as_hermitian());
        let one = trace_norm(&diff).unwrap();
        prop_assert!(hs_normalized_sq(diff.as_matrix()) <= one + 1e-9);
    }

    #[test]
    fn polar_factor_is_unitary(seed in any::<u64>(), dim in 1usize..=6) {
        let g = qhamming::linalg::gaussian_matrix(dim, dim, &mut seeded_rng(seed));
        prop_assert!(unitarity_residual(&polar_unitary(&g).unwrap()) < 1e-10);
    }
}
