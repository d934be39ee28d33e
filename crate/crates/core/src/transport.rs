//! Exact discrete optimal transport.
//!
//! [`solve_ot`] is a transportation simplex: north-west-corner start, MODI
//! potentials on the spanning-tree basis, Bland's rule for both the entering
//! cell (lowest `(row, col)` with negative reduced cost) and the leaving cell
//! (lowest index among the blocking cells). [`brute_force_ot`] enumerates
//! every spanning-tree basic solution and is kept as an independent oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Marginals must each sum to one within this.
pub const MARGINAL_TOL: f64 = 1e-10;
/// Required complementary-slackness certificate.
pub const CERTIFICATE_TOL: f64 = 1e-9;
const REDUCED_COST_EPS: f64 = 1e-12;

/// A dense `rows × cols` cost matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostTable {
    rows: usize,
    cols: usize,
    cost: Vec<f64>,
}

impl CostTable {
    pub fn new(rows: usize, cols: usize, cost: Vec<f64>) -> Result<Self> {
        if cost.len() != rows * cols {
            return Err(Error::DimensionMismatch { left: rows * cols, right: cost.len() });
        }
        if let Some(&bad) = cost.iter().find(|x| !x.is_finite() || **x < -1e-9) {
            return Err(Error::InvalidWeights(format!("cost entry {bad} is negative or not finite")));
        }
        Ok(CostTable { rows, cols, cost })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(rows, cols, (0..rows * cols).map(|k| f(k / cols, k % cols)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.cost
    }
}

/// A coupling of two weight vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportPlan {
    rows: usize,
    cols: usize,
    plan: Vec<f64>,
}

impl Serialize for TransportPlan {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dense: Vec<&[f64]> = self.plan.chunks(self.cols.max(1)).collect();
        dense.serialize(serializer)
    }
}

impl TransportPlan {
    pub fn new(rows: usize, cols: usize, plan: Vec<f64>) -> Result<Self> {
        if plan.len() != rows * cols {
            return Err(Error::DimensionMismatch { left: rows * cols, right: plan.len() });
        }
        Ok(TransportPlan { rows, cols, plan })
    }

    /// The product coupling `μ ⊗ ν`.
    pub fn independent(mu: &[f64], nu: &[f64]) -> Self {
        let plan = mu.iter().flat_map(|a| nu.iter().map(move |b| a * b)).collect();
        TransportPlan { rows: mu.len(), cols: nu.len(), plan }
    }

    /// The identity coupling of `mu` with itself.
    pub fn diagonal(mu: &[f64]) -> Self {
        let m = mu.len();
        let mut plan = vec![0.0; m * m];
        for (i, &w) in mu.iter().enumerate() {
            plan[i * m + i] = w;
        }
        TransportPlan { rows: m, cols: m, plan }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.plan[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.plan
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    /// `⟨plan, c⟩`.
    pub fn cost(&self, c: &CostTable) -> f64 {
        self.plan.iter().zip(c.entries()).map(|(p, c)| p * c).sum()
    }

    /// Worst violation of nonnegativity or of either marginal.
    pub fn marginal_residual(&self, mu: &[f64], nu: &[f64]) -> f64 {
        let mut worst = self.plan.iter().fold(0.0_f64, |a, &x| a.max(-x));
        for (s, m) in self.row_sums().iter().zip(mu) {
            worst = worst.max((s - m).abs());
        }
        for (s, n) in self.col_sums().iter().zip(nu) {
            worst = worst.max((s - n).abs());
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OtSolution {
    pub plan: TransportPlan,
    pub cost: f64,
    pub row_potentials: Vec<f64>,
    pub col_potentials: Vec<f64>,
    /// `max(|primal − dual|, −min reduced cost)`.
    pub certificate: f64,
    pub pivots: usize,
}

fn check_weights(w: &[f64]) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::InvalidWeights("empty weight vector".into()));
    }
    if let Some(&bad) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidWeights(format!("weight {bad} is negative or not finite")));
    }
    Ok(w.iter().sum())
}

fn validated_marginals(mu: &[f64], nu: &[f64], c: &CostTable) -> Result<(Vec<f64>, Vec<f64>)> {
    if mu.len() != c.rows() {
        return Err(Error::DimensionMismatch { left: mu.len(), right: c.rows() });
    }
    if nu.len() != c.cols() {
        return Err(Error::DimensionMismatch { left: nu.len(), right: c.cols() });
    }
    let source_mass = check_weights(mu)?;
    let target_mass = check_weights(nu)?;
    if (source_mass - 1.0).abs() > MARGINAL_TOL || (target_mass - 1.0).abs() > MARGINAL_TOL {
        return Err(Error::InfeasibleMarginals { source_mass, target_mass });
    }
    Ok((mu.iter().map(|x| x / source_mass).collect(), nu.iter().map(|x| x / target_mass).collect()))
}

/// Basis of the transportation simplex: `m + k − 1` cells forming a spanning
/// tree of the bipartite graph rows ∪ cols.
struct Basis {
    m: usize,
    k: usize,
    cells: Vec<(usize, usize)>,
    flow: Vec<f64>,
    basic: Vec<bool>,
}

impl Basis {
    fn north_west(mu: &[f64], nu: &[f64]) -> Self {
        let (m, k) = (mu.len(), nu.len());
        let mut supply = mu.to_vec();
        let mut demand = nu.to_vec();
        let mut flow = vec![0.0; m * k];
        let mut basic = vec![false; m * k];
        let mut cells = Vec::with_capacity(m + k - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = supply[i].min(demand[j]);
            flow[i * k + j] = x;
            basic[i * k + j] = true;
            cells.push((i, j));
            supply[i] -= x;
            demand[j] -= x;
            if i == m - 1 && j == k - 1 {
                break;
            }
            if j == k - 1 || (i < m - 1 && supply[i] <= demand[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        // whatever rounding left over lands in the last cell
        let last = (m - 1) * k + (k - 1);
        flow[last] += supply[m - 1].max(0.0).min(demand[k - 1].max(0.0));
        Basis { m, k, cells, flow, basic }
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        // node ids: rows 0..m, cols m..m+k; edge payload = cell index in `cells`
        let mut adj = vec![Vec::new(); self.m + self.k];
        for (e, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push((self.m + j, e));
            adj[self.m + j].push((i, e));
        }
        adj
    }

    fn potentials(&self, c: &CostTable) -> (Vec<f64>, Vec<f64>) {
        let adj = self.adjacency();
        let total = self.m + self.k;
        let mut pot = vec![f64::NAN; total];
        let mut stack = vec![0usize];
        pot[0] = 0.0;
        while let Some(node) = stack.pop() {
            for &(next, e) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = self.cells[e];
                    pot[next] = c.get(i, j) - pot[node];
                    stack.push(next);
                }
            }
        }
        (pot[..self.m].to_vec(), pot[self.m..].to_vec())
    }

    /// Cells along the tree path from column `col` to row `row`, in order.
    fn tree_path(&self, col: usize, row: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let start = self.m + col;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.m + self.k];
        let mut seen = vec![false; self.m + self.k];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node == row {
                break;
            }
            for &(next, e) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, e));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = row;
        while let Some((prev, e)) = parent[node] {
            path.push(e);
            node = prev;
        }
        path.reverse();
        path
    }
}

/// Solves `min ⟨plan, c⟩` over couplings of `mu` and `nu`.
pub fn solve_ot(mu: &[f64], nu: &[f64], c: &CostTable) -> Result<OtSolution> {
    let (mu, nu) = validated_marginals(mu, nu, c)?;
    let (m, k) = (mu.len(), nu.len());
    let mut basis = Basis::north_west(&mu, &nu);
    let max_pivots = 10_000 + 50 * m * k * (m + k);
    let mut pivots = 0;
    loop {
        let (u, v) = basis.potentials(c);
        let entering = (0..m * k)
            .find(|&idx| !basis.basic[idx] && c.get(idx / k, idx % k) - u[idx / k] - v[idx % k] < -REDUCED_COST_EPS);
        let Some(entering) = entering else {
            return finish(basis, c, &mu, &nu, u, v, pivots);
        };
        if pivots >= max_pivots {
            return Err(Error::DegenerateCycle { pivots });
        }
        pivots += 1;
        let (ei, ej) = (entering / k, entering % k);
        // cycle: entering (+), then the tree path from column ej back to row
        // ei with alternating signs starting with (−)
        let path = basis.tree_path(ej, ei);
        let minus: Vec<usize> = path.iter().step_by(2).copied().collect();
        let theta = minus.iter().map(|&e| {
            let (i, j) = basis.cells[e];
            basis.flow[i * k + j]
        });
        let theta = theta.fold(f64::INFINITY, f64::min);
        let leaving = minus
            .iter()
            .copied()
            .filter(|&e| {
                let (i, j) = basis.cells[e];
                basis.flow[i * k + j] <= theta
            })
            .min_by_key(|&e| {
                let (i, j) = basis.cells[e];
                i * k + j
            })
            .expect("cycle has a blocking cell");
        for (pos, &e) in path.iter().enumerate() {
            let (i, j) = basis.cells[e];
            if pos % 2 == 0 {
                basis.flow[i * k + j] -= theta;
            } else {
                basis.flow[i * k + j] += theta;
            }
        }
        let (li, lj) = basis.cells[leaving];
        basis.flow[li * k + lj] = 0.0;
        basis.basic[li * k + lj] = false;
        basis.flow[entering] = theta;
        basis.basic[entering] = true;
        basis.cells[leaving] = (ei, ej);
    }
}

fn finish(
    basis: Basis,
    c: &CostTable,
    mu: &[f64],
    nu: &[f64],
    u: Vec<f64>,
    v: Vec<f64>,
    pivots: usize,
) -> Result<OtSolution> {
    let (m, k) = (basis.m, basis.k);
    let plan = TransportPlan { rows: m, cols: k, plan: basis.flow.iter().map(|&x| x.max(0.0)).collect() };
    let feasibility = plan.marginal_residual(mu, nu);
    if feasibility > 1e-8 {
        return Err(Error::Inconsistent(format!("transport plan violates marginals by {feasibility:.3e}")));
    }
    let cost = plan.cost(c);
    let dual: f64 =
        mu.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() + nu.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
    let min_reduced = (0..m * k).map(|idx| c.get(idx / k, idx % k) - u[idx / k] - v[idx % k]).fold(0.0_f64, f64::min);
    let certificate = (cost - dual).abs().max(-min_reduced);
    if certificate > CERTIFICATE_TOL {
        return Err(Error::Inconsistent(format!("optimality certificate {certificate:.3e} exceeds tolerance")));
    }
    Ok(OtSolution { plan, cost, row_potentials: u, col_potentials: v, certificate, pivots })
}

/// Minimum cost over all basic feasible solutions, enumerated as spanning
/// trees of the complete bipartite graph. Limited to `m, k ≤ 4`.
pub fn brute_force_ot(mu: &[f64], nu: &[f64], c: &CostTable) -> Result<f64> {
    let (m, k) = (c.rows(), c.cols());
    if m > 4 || k > 4 {
        return Err(Error::TooLarge { rows: m, cols: k });
    }
    let (mu, nu) = validated_marginals(mu, nu, c)?;
    let edges = m + k - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(edges);
    enumerate_subsets(m * k, edges, 0, &mut chosen, &mut |subset| {
        if let Some(cost) = tree_solution_cost(subset, &mu, &nu, c) {
            best = best.min(cost);
        }
    });
    Ok(best)
}

fn enumerate_subsets(total: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    let remaining = size - chosen.len();
    for idx in start..=(total - remaining) {
        chosen.push(idx);
        enumerate_subsets(total, size, idx + 1, chosen, f);
        chosen.pop();
    }
}

/// Cost of the unique flow supported on `cells` if they form a spanning tree
/// and that flow is nonnegative.
fn tree_solution_cost(cells: &[usize], mu: &[f64], nu: &[f64], c: &CostTable) -> Option<f64> {
    let (m, k) = (c.rows(), c.cols());
    let nodes = m + k;
    // acyclicity via union-find; m + k − 1 acyclic edges span
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &idx in cells {
        let (a, b) = (root(&mut parent, idx / k), root(&mut parent, m + idx % k));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    // peel leaves
    let mut residual: Vec<f64> = mu.iter().chain(nu).copied().collect();
    let mut alive = vec![true; cells.len()];
    let mut degree = vec![0usize; nodes];
    for &idx in cells {
        degree[idx / k] += 1;
        degree[m + idx % k] += 1;
    }
    let mut cost = 0.0;
    for _ in 0..cells.len() {
        let (e, leaf) = cells.iter().enumerate().filter(|&(e, _)| alive[e]).find_map(|(e, &idx)| {
            let (r, col) = (idx / k, m + idx % k);
            if degree[r] == 1 {
                Some((e, r))
            } else if degree[col] == 1 {
                Some((e, col))
            } else {
                None
            }
        })?;
        let idx = cells[e];
        let (r, col) = (idx / k, m + idx % k);
        let other = if leaf == r { col } else { r };
        let x = residual[leaf];
        if x < -1e-12 {
            return None;
        }
        residual[other] -= x;
        residual[leaf] = 0.0;
        cost += x * c.get(idx / k, idx % k);
        alive[e] = false;
        degree[r] -= 1;
        degree[col] -= 1;
    }
    Some(cost)
}

/// Normalized Hamming distance `(1/n) |{i : σ(i) ≠ σ'(i)}|`.
pub fn hamming(sigma: &Permutation, tau: &Permutation) -> Result<f64> {
    if sigma.n() != tau.n() {
        return Err(Error::SizeMismatch { left: sigma.n(), right: tau.n() });
    }
    let n = sigma.n();
    let moved = (0..n).filter(|&i| sigma.apply(i) != tau.apply(i)).count();
    Ok(moved as f64 / n as f64)
}

/// `W_1` on `S_n` with respect to the Hamming metric.
pub fn classical_w1(mu1: &[(Permutation, f64)], mu2: &[(Permutation, f64)]) -> Result<f64> {
    Ok(classical_w1_solution(mu1, mu2)?.cost)
}

pub fn classical_w1_solution(mu1: &[(Permutation, f64)], mu2: &[(Permutation, f64)]) -> Result<OtSolution> {
    let mut costs = Vec::with_capacity(mu1.len() * mu2.len());
    for (s, _) in mu1 {
        for (t, _) in mu2 {
            costs.push(hamming(s, t)?);
        }
    }
    let c = CostTable::new(mu1.len(), mu2.len(), costs)?;
    let a: Vec<f64> = mu1.iter().map(|(_, w)| *w).collect();
    let b: Vec<f64> = mu2.iter().map(|(_, w)| *w).collect();
    solve_ot(&a, &b, &c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn table(rows: usize, cols: usize, v: &[f64]) -> CostTable {
        CostTable::new(rows, cols, v.to_vec()).unwrap()
    }

    #[test]
    fn single_cell() {
        let s = solve_ot(&[1.0], &[1.0], &table(1, 1, &[0.37])).unwrap();
        assert_eq!(s.cost, 0.37);
        assert_eq!(s.plan.entries(), &[1.0]);
    }

    #[test]
    fn point_mass_forces_plan() {
        let s = solve_ot(&[1.0], &[0.5, 0.5], &table(1, 2, &[0.0, 2.0 / 3.0])).unwrap();
        assert_eq!(s.plan.entries(), &[0.5, 0.5]);
        assert_abs_diff_eq!(s.cost, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn two_by_two_oracle_cases() {
        let swap = table(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(brute_force_ot(&[0.5, 0.5], &[0.5, 0.5], &swap).unwrap(), 0.0);
        assert_eq!(solve_ot(&[0.5, 0.5], &[0.5, 0.5], &swap).unwrap().cost, 0.0);
        // both extreme plans enumerated by hand: the 0.4 excess must cross
        assert_abs_diff_eq!(brute_force_ot(&[0.7, 0.3], &[0.3, 0.7], &swap).unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(solve_ot(&[0.7, 0.3], &[0.3, 0.7], &swap).unwrap().cost, 0.4, epsilon = 1e-15);

        let diag_free = table(3, 3, &[0.0, 0.3, 0.9, 0.2, 0.0, 0.4, 0.8, 0.1, 0.0]);
        let w = [0.2, 0.5, 0.3];
        assert_eq!(brute_force_ot(&w, &w, &diag_free).unwrap(), 0.0);
        assert_eq!(solve_ot(&w, &w, &diag_free).unwrap().cost, 0.0);
    }

    #[test]
    fn rejects_bad_marginals() {
        let c = table(2, 2, &[0.0; 4]);
        assert!(matches!(solve_ot(&[0.5, 0.6], &[0.5, 0.5], &c), Err(Error::InfeasibleMarginals { .. })));
        assert!(matches!(solve_ot(&[1.5, -0.5], &[0.5, 0.5], &c), Err(Error::InvalidWeights(_))));
        assert!(matches!(solve_ot(&[1.0], &[0.5, 0.5], &c), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            brute_force_ot(&[0.2; 5], &[1.0], &CostTable::new(5, 1, vec![0.0; 5]).unwrap()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn zero_weights_and_degenerate_marginals() {
        let c = table(3, 3, &[0.5, 0.1, 0.9, 0.3, 0.7, 0.2, 0.4, 0.6, 0.8]);
        for (mu, nu) in [
            (vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5]),
            (vec![0.5, 0.5, 0.0], vec![0.5, 0.5, 0.0]),
            (vec![1.0 / 3.0; 3], vec![1.0 / 3.0; 3]),
        ] {
            let s = solve_ot(&mu, &nu, &c).unwrap();
            assert_abs_diff_eq!(s.cost, brute_force_ot(&mu, &nu, &c).unwrap(), epsilon = 1e-12);
            assert!(s.plan.marginal_residual(&mu, &nu) < 1e-12);
        }
    }

    #[test]
    fn hamming_examples() {
        let e = Permutation::identity(3);
        let t = Permutation::transposition(3, 0, 1);
        assert_eq!(hamming(&e, &e).unwrap(), 0.0);
        assert_abs_diff_eq!(hamming(&e, &t).unwrap(), 2.0 / 3.0);
        let cyc = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(hamming(&e, &cyc).unwrap(), 1.0);
        assert!(hamming(&e, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn hamming_is_a_metric_and_never_one_over_n() {
        for n in [3, 4] {
            let all = Permutation::all(n);
            for a in &all {
                for b in &all {
                    let ab = hamming(a, b).unwrap();
                    assert_eq!(ab, hamming(b, a).unwrap());
                    assert_eq!(ab == 0.0, a == b);
                    assert_ne!(ab, 1.0 / n as f64);
                    let fixed = a.inverse().compose(b).fixed_points();
                    assert_abs_diff_eq!(ab, 1.0 - fixed as f64 / n as f64, epsilon = 1e-15);
                    for c in &all {
                        assert!(hamming(a, c).unwrap() <= ab + hamming(b, c).unwrap() + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn classical_w1_examples() {
        let e = Permutation::identity(3);
        let t = Permutation::transposition(3, 0, 1);
        let mu = vec![(e.clone(), 0.5), (t.clone(), 0.5)];
        assert_eq!(classical_w1(&mu, &mu).unwrap(), 0.0);
        assert_abs_diff_eq!(classical_w1(&[(e.clone(), 1.0)], &[(t.clone(), 1.0)]).unwrap(), 2.0 / 3.0);
        assert_abs_diff_eq!(classical_w1(&[(e, 1.0)], &mu).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
    }

    fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, len).prop_map(|mut w| {
            w[0] += 1e-3;
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            w
        })
    }

    fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, CostTable)> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(m, k)| {
            (weights(m), weights(k), proptest::collection::vec(0.0f64..1.0, m * k))
                .prop_map(move |(a, b, c)| (a, b, CostTable::new(m, k, c).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn simplex_matches_enumeration((mu, nu, c) in instance()) {
            let s = solve_ot(&mu, &nu, &c).unwrap();
            let oracle = brute_force_ot(&mu, &nu, &c).unwrap();
            prop_assert!((s.cost - oracle).abs() <= 1e-9);
            prop_assert!(s.plan.marginal_residual(&mu, &nu) <= 1e-8);
            prop_assert!(s.certificate <= CERTIFICATE_TOL);
        }

        #[test]
        fn integer_costs_give_ties_without_cycling((mu, nu, c) in instance()) {
            // coarse costs create many degenerate pivots
            let coarse = CostTable::new(c.rows(), c.cols(), c.entries().iter().map(|x| (x * 3.0).floor()).collect()).unwrap();
            let s = solve_ot(&mu, &nu, &coarse).unwrap();
            prop_assert!((s.cost - brute_force_ot(&mu, &nu, &coarse).unwrap()).abs() <= 1e-9);
        }
    }
}
