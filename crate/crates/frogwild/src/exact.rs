//! Reference PageRank: power iteration, a dense linear-algebra oracle for
//! small instances, distribution evolution, and ranking utilities.
//!
//! The walk matrix combines uniform teleportation at rate `p_t` with the
//! out-edge transition structure of the graph; dangling vertices spread
//! their mass uniformly. Columns (indexed by source) sum to 1, so repeated
//! application preserves the simplex.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::DirectedGraph;
use crate::rank::RankVector;

/// Largest instance the dense oracle accepts.
pub const DENSE_ORACLE_MAX_N: usize = 2000;

/// Residual tolerance for oracle-grade power iteration.
pub const TOL_ORACLE: f64 = 1e-10;
/// Residual tolerance when the iteration serves as a runtime baseline.
pub const TOL_BASELINE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("teleport probability {0} outside (0, 1]")]
    BadTeleport(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("no convergence after {iterations} iterations (l1 residual {residual})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("graph has {n} vertices; the dense oracle accepts at most {DENSE_ORACLE_MAX_N}")]
    TooLarge { n: usize },
    #[error("reference distribution has a zero entry at index {index}")]
    ZeroReference { index: usize },
    #[error("k={k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
}

/// A converged (or capped) power-iteration result.
#[derive(Debug, Clone)]
pub struct PowerIteration {
    pub ranks: RankVector,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// One application of the walk matrix to `x`, written into `out`.
/// `p_t` may be 0 (pure edge-following) or 1 (pure teleport).
pub(crate) fn apply_walk_matrix(g: &DirectedGraph, x: &[f64], p_t: f64, out: &mut [f64]) {
    let n = g.n();
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(out.len(), n);

    let mut dangling_mass = 0.0;
    for &v in g.dangling() {
        dangling_mass += x[v as usize];
    }
    let background = (1.0 - p_t) * dangling_mass / n as f64 + p_t / n as f64;
    out.fill(background);
    for src in 0..n as u32 {
        let succ = g.out_edges(src);
        if succ.is_empty() {
            continue;
        }
        let share = (1.0 - p_t) * x[src as usize] / succ.len() as f64;
        for &dst in succ {
            out[dst as usize] += share;
        }
    }
    // Renormalize away accumulated rounding; the matrix preserves mass.
    let sum: f64 = out.iter().sum();
    for v in out.iter_mut() {
        *v /= sum;
    }
}

/// Runs power iteration from the uniform start until the l1 residual drops
/// to `tol` or `max_iters` applications have been spent. Never errors; the
/// outcome records whether it converged.
pub fn power_iterate(g: &DirectedGraph, p_t: f64, tol: f64, max_iters: usize) -> PowerIteration {
    let n = g.n();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iters {
        apply_walk_matrix(g, &x, p_t, &mut y);
        iterations += 1;
        residual = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut y);
        if residual <= tol {
            break;
        }
    }
    PowerIteration {
        ranks: RankVector::new(x).expect("power iterate stays on the simplex"),
        iterations,
        residual,
        converged: residual <= tol,
    }
}

/// PageRank by power iteration. Errors if the residual does not reach `tol`
/// within `max_iters`.
pub fn exact_pagerank(
    g: &DirectedGraph,
    p_t: f64,
    tol: f64,
    max_iters: usize,
) -> Result<PowerIteration, ExactError> {
    if !(p_t > 0.0 && p_t <= 1.0) {
        return Err(ExactError::BadTeleport(p_t));
    }
    if !(tol > 0.0) {
        return Err(ExactError::BadTolerance(tol));
    }
    let outcome = power_iterate(g, p_t, tol, max_iters);
    if outcome.converged {
        Ok(outcome)
    } else {
        Err(ExactError::NotConverged {
            iterations: outcome.iterations,
            residual: outcome.residual,
        })
    }
}

/// Solves the stationary equation directly by dense LU: the independent
/// brute-force route the iterative code is checked against.
pub fn dense_oracle(g: &DirectedGraph, p_t: f64) -> Result<RankVector, ExactError> {
    if !(p_t > 0.0 && p_t <= 1.0) {
        return Err(ExactError::BadTeleport(p_t));
    }
    let n = g.n();
    if n > DENSE_ORACLE_MAX_N {
        return Err(ExactError::TooLarge { n });
    }
    // (I - (1 - p_t) * P) x = (p_t / n) * 1, then normalize.
    let mut a = DMatrix::<f64>::identity(n, n);
    for src in 0..n as u32 {
        let succ = g.out_edges(src);
        if succ.is_empty() {
            let share = (1.0 - p_t) / n as f64;
            for row in 0..n {
                a[(row, src as usize)] -= share;
            }
        } else {
            let share = (1.0 - p_t) / succ.len() as f64;
            for &dst in succ {
                a[(dst as usize, src as usize)] -= share;
            }
        }
    }
    let b = DVector::from_element(n, p_t / n as f64);
    let x = a
        .lu()
        .solve(&b)
        .expect("strictly diagonally dominant system is solvable");
    RankVector::normalized(x.iter().copied().collect())
        .map_err(|_| ExactError::BadTeleport(p_t))
}

/// Applies the walk matrix `steps` times to `x`.
pub fn evolve_distribution(
    g: &DirectedGraph,
    x: &RankVector,
    p_t: f64,
    steps: usize,
) -> RankVector {
    assert_eq!(x.len(), g.n());
    assert!((0.0..=1.0).contains(&p_t), "p_t outside [0, 1]");
    let mut cur = x.values().to_vec();
    let mut next = vec![0.0; g.n()];
    for _ in 0..steps {
        apply_walk_matrix(g, &cur, p_t, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    RankVector::new(cur).expect("evolution stays on the simplex")
}

/// Chi-square contrast of `alpha` against `beta`:
/// sum_i (alpha_i - beta_i)^2 / beta_i. `beta` must be strictly positive.
pub fn chi2_contrast(alpha: &RankVector, beta: &RankVector) -> Result<f64, ExactError> {
    assert_eq!(alpha.len(), beta.len());
    if let Some(index) = beta.values().iter().position(|&b| b <= 0.0) {
        return Err(ExactError::ZeroReference { index });
    }
    Ok(alpha
        .values()
        .iter()
        .zip(beta.values())
        .map(|(&a, &b)| (a - b) * (a - b) / b)
        .sum())
}

/// The `k` vertices of largest value, ties broken by ascending vertex id.
pub fn top_k(v: &RankVector, k: usize) -> Result<Vec<u32>, ExactError> {
    let n = v.len();
    if k == 0 || k > n {
        return Err(ExactError::KOutOfRange { k, n });
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        v.get(b as usize)
            .partial_cmp(&v.get(a as usize))
            .expect("rank values are not NaN")
            .then(a.cmp(&b))
    });
    order.truncate(k);
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::rng::{Purpose, RngKey};
    use rand::Rng;

    fn two_cycle() -> DirectedGraph {
        DirectedGraph::from_edges(&[(0, 1), (1, 0)]).unwrap().0
    }

    fn five_vertex() -> DirectedGraph {
        DirectedGraph::from_edges(&[(0, 1), (1, 2), (2, 0), (3, 0), (4, 0)])
            .unwrap()
            .0
    }

    /// Random graph where every vertex gets 1..=4 out-edges; optionally a
    /// final vertex with none (dangling).
    pub(crate) fn random_graph(n: usize, seed: u64, with_dangling: bool) -> DirectedGraph {
        let mut rng = RngKey::new(seed).stream(Purpose::SuiteGraph, n as u64, 99, 0);
        let mut edges = Vec::new();
        let last = if with_dangling { n - 1 } else { n };
        for src in 0..last as u64 {
            let degree = rng.random_range(1..=4usize);
            for _ in 0..degree {
                edges.push((src, rng.random_range(0..n as u64)));
            }
        }
        if with_dangling {
            // An in-edge keeps the dangling vertex alive through densification.
            edges.push((0, (n - 1) as u64));
        }
        DirectedGraph::from_edges(&edges).unwrap().0
    }

    #[test]
    fn two_cycle_is_symmetric() {
        let pr = exact_pagerank(&two_cycle(), 0.15, 1e-12, 10_000).unwrap();
        assert!(pr.ranks.linf_distance(&RankVector::new(vec![0.5, 0.5]).unwrap()) < 1e-12);
    }

    #[test]
    fn full_teleport_is_uniform() {
        let g = five_vertex();
        let pr = exact_pagerank(&g, 1.0, 1e-12, 100).unwrap();
        assert!(pr.ranks.linf_distance(&RankVector::uniform(5)) < 1e-12);
    }

    #[test]
    fn five_vertex_matches_dense_oracle() {
        let g = five_vertex();
        let oracle = dense_oracle(&g, 0.15).unwrap();
        // Frozen from an independent dense solve of the stationary system.
        let expected = [
            0.33216715257531582,
            0.31234207968901845,
            0.29549076773566568,
            0.03,
            0.03,
        ];
        for (a, b) in oracle.values().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "oracle {a} vs frozen {b}");
        }
        let pr = exact_pagerank(&g, 0.15, 1e-12, 10_000).unwrap();
        assert!(pr.ranks.linf_distance(&oracle) < 1e-8);
    }

    #[test]
    fn oracle_handles_trivial_graphs() {
        let point = DirectedGraph::from_edges(&[(0, 0)]).unwrap().0;
        assert_eq!(dense_oracle(&point, 0.15).unwrap().values(), &[1.0]);
        let oracle = dense_oracle(&two_cycle(), 0.15).unwrap();
        assert!(oracle.linf_distance(&RankVector::new(vec![0.5, 0.5]).unwrap()) < 1e-14);
    }

    #[test]
    fn oracle_agrees_with_power_iteration_on_random_graph() {
        let g = random_graph(20, 7, true);
        let oracle = dense_oracle(&g, 0.15).unwrap();
        let pr = exact_pagerank(&g, 0.15, 1e-12, 100_000).unwrap();
        assert!(pr.ranks.linf_distance(&oracle) < 1e-9);
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let g = random_graph(30, 1, false);
        assert!(matches!(
            dense_oracle(&g, 0.15),
            Ok(_)
        ));
        // size guard
        let err = ExactError::TooLarge { n: 5000 };
        assert!(err.to_string().contains("2000"));
    }

    #[test]
    fn pagerank_has_teleport_floor() {
        let g = random_graph(40, 3, true);
        let pr = exact_pagerank(&g, 0.15, 1e-10, 100_000).unwrap();
        let floor = 0.15 / g.n() as f64 - 1e-12;
        for &v in pr.ranks.values() {
            assert!(v >= floor);
        }
    }

    #[test]
    fn nonconvergence_is_reported() {
        let g = random_graph(50, 11, false);
        match exact_pagerank(&g, 0.15, 1e-14, 2) {
            Err(ExactError::NotConverged { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 1e-14);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let g = five_vertex();
        let x = RankVector::indicator(5, 3);
        assert_eq!(evolve_distribution(&g, &x, 0.15, 0).values(), x.values());
    }

    #[test]
    fn evolve_fixes_stationary_vector() {
        let g = five_vertex();
        let pi = dense_oracle(&g, 0.15).unwrap();
        let evolved = evolve_distribution(&g, &pi, 0.15, 25);
        assert!(evolved.linf_distance(&pi) < 1e-9);
    }

    #[test]
    fn evolve_pure_cycle_shift() {
        let g = two_cycle();
        let x = RankVector::indicator(2, 0);
        let stepped = evolve_distribution(&g, &x, 0.0, 1);
        assert_eq!(stepped.values(), &[0.0, 1.0]);
    }

    #[test]
    fn chi2_contrast_examples() {
        let half = RankVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(chi2_contrast(&half, &half).unwrap(), 0.0);
        let point = RankVector::indicator(2, 0);
        assert!((chi2_contrast(&point, &half).unwrap() - 1.0).abs() < 1e-15);
        assert!(chi2_contrast(&half, &point).is_err());
    }

    #[test]
    fn chi2_uniform_against_stationary_respects_floor_bound() {
        // With min_i pi(i) >= c/n the contrast of the uniform start is at
        // most (1 - c) / c.
        let g = random_graph(20, 5, false);
        let pi = dense_oracle(&g, 0.15).unwrap();
        let c = g.n() as f64 * pi.min_value();
        assert!(c > 0.0 && c <= 1.0 + 1e-12);
        let contrast = chi2_contrast(&RankVector::uniform(g.n()), &pi).unwrap();
        assert!(contrast <= (1.0 - c) / c + 1e-12);
    }

    #[test]
    fn top_k_examples() {
        let v = RankVector::new(vec![0.1, 0.7, 0.2]).unwrap();
        assert_eq!(top_k(&v, 1).unwrap(), vec![1]);
        let u = RankVector::uniform(4);
        assert_eq!(top_k(&u, 2).unwrap(), vec![0, 1]);
        assert!(top_k(&v, 0).is_err());
        assert!(top_k(&v, 4).is_err());
    }

    #[test]
    fn top_k_on_oracle_ranks() {
        let g = five_vertex();
        let pi = dense_oracle(&g, 0.15).unwrap();
        assert_eq!(top_k(&pi, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn residual_is_monotone_under_iteration() {
        // Column-stochasticity makes the l1 residual nonincreasing; allow
        // tiny float slack and flag rather than fail hard elsewhere.
        let g = random_graph(60, 13, true);
        let n = g.n();
        let mut x = vec![1.0 / n as f64; n];
        let mut y = vec![0.0; n];
        let mut last = f64::INFINITY;
        for _ in 0..50 {
            apply_walk_matrix(&g, &x, 0.15, &mut y);
            let residual: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
            assert!(residual <= last + 1e-12, "residual grew: {last} -> {residual}");
            last = residual;
            std::mem::swap(&mut x, &mut y);
        }
    }
}
