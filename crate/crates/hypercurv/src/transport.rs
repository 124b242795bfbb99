//! Graph-side optimal transport: lazy random walks, the L¹-Wasserstein
//! distance and the Lin–Lu–Yau curvature.
//!
//! W₁ is computed twice on purpose: once as the primal transport LP with the
//! hop distance as cost, once as the dual 1-Lipschitz maximization. The two
//! values must agree to 1e-8 (Kantorovich–Rubinstein duality); disagreement
//! is reported as an LP failure rather than papered over.

use crate::error::SolverError;
use crate::hypergraph::{Hypergraph, MetricCache};
use crate::simplex::{self, Cmp, LpProblem, LpRow};

#[derive(Debug, Clone)]
pub struct ProbabilityMeasure(Vec<f64>);

impl ProbabilityMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self, SolverError> {
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(SolverError::InvalidArgument(
                "probability measures need nonnegative finite entries".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(SolverError::InvalidArgument(format!(
                "probability measure sums to {total}, expected 1"
            )));
        }
        Ok(Self(weights))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

/// The lazy random-walk measure m_x^λ: mass 1−λ at x and λ·w_xy/d_x at each
/// neighbor y. Requires a graph.
pub fn random_walk_measure(
    h: &Hypergraph,
    x: usize,
    lambda: f64,
) -> Result<ProbabilityMeasure, SolverError> {
    ensure_graph(h)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(SolverError::InvalidArgument(format!(
            "random walk laziness must lie in [0,1], got {lambda}"
        )));
    }
    let cache = h.metric();
    let mut m = vec![0.0; h.vertex_count()];
    m[x] = 1.0 - lambda;
    for e in h.edges() {
        let (a, b) = (e.vertices[0], e.vertices[1]);
        if a == x {
            m[b] += lambda * e.weight / cache.deg(x);
        } else if b == x {
            m[a] += lambda * e.weight / cache.deg(x);
        }
    }
    ProbabilityMeasure::new(m)
}

fn ensure_graph(h: &Hypergraph) -> Result<(), SolverError> {
    for (i, e) in h.edges().iter().enumerate() {
        if e.len() != 2 {
            return Err(SolverError::NotAGraph {
                edge: i,
                size: e.len(),
            });
        }
    }
    Ok(())
}

/// A transport plan with prescribed marginals.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub n: usize,
    /// Row-major n×n matrix; row marginals μ, column marginals ν.
    pub matrix: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct W1Result {
    /// The primal transport value (the value of record).
    pub value: f64,
    pub dual_value: f64,
    pub coupling: Coupling,
    /// A dual maximizer: a 1-Lipschitz potential attaining `dual_value`.
    pub dual_potential: Vec<f64>,
}

/// W₁(μ, ν) with the hop distance as ground cost.
pub fn w1(
    h: &Hypergraph,
    mu: &ProbabilityMeasure,
    nu: &ProbabilityMeasure,
) -> Result<W1Result, SolverError> {
    let cache = h.metric();
    let n = h.vertex_count();
    let primal = transport_primal(cache, mu.weights(), nu.weights())?;
    let dual = lipschitz_dual(cache, mu.weights(), nu.weights())?;
    let (value, coupling) = primal;
    let (dual_value, dual_potential) = dual;
    if (value - dual_value).abs() > 1e-8 {
        return Err(SolverError::Lp(format!(
            "primal/dual mismatch: {value} vs {dual_value}"
        )));
    }
    Ok(W1Result {
        value,
        dual_value,
        coupling: Coupling { n, matrix: coupling },
        dual_potential,
    })
}

fn transport_primal(
    cache: &MetricCache,
    mu: &[f64],
    nu: &[f64],
) -> Result<(f64, Vec<f64>), SolverError> {
    let n = cache.n();
    let var = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::with_capacity(2 * n);
    for (i, &mass) in mu.iter().enumerate().take(n) {
        rows.push(LpRow {
            coeffs: (0..n).map(|j| (var(i, j), 1.0)).collect(),
            cmp: Cmp::Eq,
            rhs: mass,
        });
    }
    for (j, &mass) in nu.iter().enumerate().take(n) {
        rows.push(LpRow {
            coeffs: (0..n).map(|i| (var(i, j), 1.0)).collect(),
            cmp: Cmp::Eq,
            rhs: mass,
        });
    }
    let objective: Vec<f64> = (0..n * n)
        .map(|k| -cache.dist_f(k / n, k % n))
        .collect();
    let sol = simplex::solve(&LpProblem {
        num_vars: n * n,
        objective,
        rows,
    })?;
    Ok((-sol.objective, sol.x))
}

fn lipschitz_dual(
    cache: &MetricCache,
    mu: &[f64],
    nu: &[f64],
) -> Result<(f64, Vec<f64>), SolverError> {
    let n = cache.n();
    if n == 1 {
        return Ok((0.0, vec![0.0]));
    }
    // Anchor f(0) = 0 (the objective is shift-invariant because Σ(μ−ν) = 0)
    // and shift to x_v = f(v) + d(v,0) >= 0; every rhs is then nonnegative.
    let anchor = 0usize;
    let vars: Vec<usize> = (0..n).filter(|&v| v != anchor).collect();
    let idx = |v: usize| vars.iter().position(|&w| w == v).unwrap();
    let mut rows = Vec::new();
    for &a in &vars {
        rows.push(LpRow {
            coeffs: vec![(idx(a), 1.0)],
            cmp: Cmp::Le,
            rhs: 2.0 * cache.dist_f(a, anchor),
        });
        for &b in &vars {
            if a != b {
                rows.push(LpRow {
                    coeffs: vec![(idx(a), 1.0), (idx(b), -1.0)],
                    cmp: Cmp::Le,
                    rhs: cache.dist_f(a, b) + cache.dist_f(a, anchor) - cache.dist_f(b, anchor),
                });
            }
        }
    }
    let objective: Vec<f64> = vars.iter().map(|&v| mu[v] - nu[v]).collect();
    let sol = simplex::solve(&LpProblem {
        num_vars: vars.len(),
        objective,
        rows,
    })?;
    // Undo the shift; the dropped constant rescales the objective by the
    // anchored-away mass, which cancels since Σ(μ−ν) = 0.
    let mut f = vec![0.0; n];
    let mut value = 0.0;
    for (k, &v) in vars.iter().enumerate() {
        f[v] = sol.x[k] - cache.dist_f(v, anchor);
        value += (mu[v] - nu[v]) * f[v];
    }
    Ok((value, f))
}

/// Lin–Lu–Yau curvature along (x, y): the stabilized value of
/// `(1 − W₁(m_x^λ, m_y^λ)/d(x,y)) / λ` along λ = 2^{−k}.
///
/// W₁ is piecewise linear in λ near zero, so consecutive estimates agree
/// exactly once λ is below the last breakpoint; stabilization is detected at
/// 1e-9 and k runs to 30 before giving up.
pub fn lly_curvature(h: &Hypergraph, x: usize, y: usize) -> Result<f64, SolverError> {
    ensure_graph(h)?;
    if x == y {
        return Err(SolverError::InvalidArgument(
            "curvature needs two distinct vertices".into(),
        ));
    }
    let d = h.metric().dist_f(x, y);
    let mut prev: Option<f64> = None;
    let mut estimates = Vec::new();
    for k in 1..=30 {
        let lambda = 0.5f64.powi(k);
        let mx = random_walk_measure(h, x, lambda)?;
        let my = random_walk_measure(h, y, lambda)?;
        let w = w1(h, &mx, &my)?.value;
        let kappa = (1.0 - w / d) / lambda;
        estimates.push((lambda, kappa));
        if let Some(p) = prev {
            if (p - kappa).abs() <= 1e-9 {
                return Ok(kappa);
            }
        }
        prev = Some(kappa);
    }
    Err(SolverError::NonStabilized { estimates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::hypergraph::Hypergraph;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn kn(n: usize) -> Hypergraph {
        FamilySpec::CompleteGraph { n }.generate().unwrap()
    }

    fn cn(n: usize) -> Hypergraph {
        FamilySpec::Cycle { n }.generate().unwrap()
    }

    #[test]
    fn walk_measure_cases() {
        let h = kn(3);
        let m = random_walk_measure(&h, 0, 0.0).unwrap();
        assert_eq!(m.weights(), &[1.0, 0.0, 0.0]);
        let m = random_walk_measure(&h, 0, 0.3).unwrap();
        assert_relative_eq!(m.weights()[0], 0.7);
        assert_relative_eq!(m.weights()[1], 0.15);
        assert_relative_eq!(m.weights()[2], 0.15);

        let k2 = Hypergraph::new(2, vec![(vec![0, 1], 1.0)]).unwrap();
        let m = random_walk_measure(&k2, 0, 1.0).unwrap();
        assert_eq!(m.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn walk_measure_rejects_hypergraphs() {
        let h = FamilySpec::OneRegular { n: 3, weight: 1.0 }.generate().unwrap();
        assert!(matches!(
            random_walk_measure(&h, 0, 0.5),
            Err(SolverError::NotAGraph { .. })
        ));
    }

    #[test]
    fn w1_identity_and_unit_distance() {
        let h = kn(3);
        let m = random_walk_measure(&h, 0, 0.25).unwrap();
        let r = w1(&h, &m, &m).unwrap();
        assert_relative_eq!(r.value, 0.0, epsilon = 1e-10);

        let k2 = Hypergraph::new(2, vec![(vec![0, 1], 1.0)]).unwrap();
        let dx = ProbabilityMeasure::new(vec![1.0, 0.0]).unwrap();
        let dy = ProbabilityMeasure::new(vec![0.0, 1.0]).unwrap();
        assert_relative_eq!(w1(&k2, &dx, &dy).unwrap().value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn k3_walk_distance() {
        let h = kn(3);
        let mx = random_walk_measure(&h, 0, 0.3).unwrap();
        let my = random_walk_measure(&h, 1, 0.3).unwrap();
        let r = w1(&h, &mx, &my).unwrap();
        assert_relative_eq!(r.value, 0.55, epsilon = 1e-9);
    }

    #[test]
    fn lly_on_complete_graphs() {
        for n in 3..=6 {
            let h = kn(n);
            let k = lly_curvature(&h, 0, 1).unwrap();
            assert_relative_eq!(k, n as f64 / (n as f64 - 1.0), epsilon = 1e-9);
        }
    }

    #[test]
    fn lly_on_cycles() {
        assert_relative_eq!(lly_curvature(&cn(4), 0, 1).unwrap(), 1.0, epsilon = 1e-9);
        assert_relative_eq!(lly_curvature(&cn(8), 0, 1).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn lly_is_symmetric() {
        let h = cn(5);
        let a = lly_curvature(&h, 0, 1).unwrap();
        let b = lly_curvature(&h, 1, 0).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn w1_metric_spot_checks() {
        let h = cn(6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut random_measure = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut w: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            for v in &mut w {
                *v /= s;
            }
            ProbabilityMeasure::new(w).unwrap()
        };
        for _ in 0..5 {
            let a = random_measure(&mut rng);
            let b = random_measure(&mut rng);
            let c = random_measure(&mut rng);
            let ab = w1(&h, &a, &b).unwrap().value;
            let ba = w1(&h, &b, &a).unwrap().value;
            let bc = w1(&h, &b, &c).unwrap().value;
            let ac = w1(&h, &a, &c).unwrap().value;
            assert_relative_eq!(ab, ba, epsilon = 1e-8);
            assert!(ac <= ab + bc + 1e-8);
        }
    }

    #[test]
    fn coupling_has_the_right_marginals() {
        let h = cn(5);
        let mx = random_walk_measure(&h, 0, 0.2).unwrap();
        let my = random_walk_measure(&h, 2, 0.2).unwrap();
        let r = w1(&h, &mx, &my).unwrap();
        for i in 0..5 {
            let row: f64 = (0..5).map(|j| r.coupling.matrix[i * 5 + j]).sum();
            let col: f64 = (0..5).map(|j| r.coupling.matrix[j * 5 + i]).sum();
            assert_relative_eq!(row, mx.weights()[i], epsilon = 1e-9);
            assert_relative_eq!(col, my.weights()[i], epsilon = 1e-9);
        }
    }
}
