//! Weighted 1-Lipschitz regions in potential coordinates.
//!
//! A function f is weighted 1-Lipschitz when its potential u = f/d satisfies
//! `u(a) − u(b) ≤ d(a,b)` for all pairs. All optimizations in this crate
//! anchor `u(y) = 0` (the objectives are invariant under adding constants to
//! u), which makes the region the compact polytope
//! `{u : u(y) = 0, |u(a) − u(b)| ≤ d(a,b)}`. Its constraint matrix is totally
//! unimodular and the distances are integers, so every polytope vertex is an
//! integer point; enumerating the integer points therefore covers all
//! vertices. With the anchor, `max u ≤ diam` holds automatically, so the
//! anchored region coincides with the tLip slice.

use crate::error::SolverError;
use crate::hypergraph::MetricCache;
use crate::simplex::{self, Cmp, LpProblem, LpRow};
use rand::Rng;

/// Which Lipschitz-type region a potential is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzRegion {
    /// Weighted 1-Lipschitz functions.
    Lip,
    /// Lip with max potential bounded by the diameter.
    TLip,
    /// Lip with the pairing equality u(x) − u(y) = d(x,y).
    LipXy { x: usize, y: usize },
    TLipXy { x: usize, y: usize },
    /// LipXy restricted to potentials taking only the two anchor values.
    TwoLevelXy { x: usize, y: usize },
}

impl LipschitzRegion {
    /// Membership of the potential vector `u`, decided from the distance
    /// matrix within `tol`.
    pub fn contains_potential(&self, cache: &MetricCache, u: &[f64], tol: f64) -> bool {
        let n = cache.n();
        for a in 0..n {
            for b in 0..n {
                if a != b && u[a] - u[b] > cache.dist_f(a, b) + tol {
                    return false;
                }
            }
        }
        match *self {
            LipschitzRegion::Lip => true,
            LipschitzRegion::TLip => {
                let max = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                max <= f64::from(cache.diam()) + tol
            }
            LipschitzRegion::LipXy { x, y } => (u[x] - u[y] - cache.dist_f(x, y)).abs() <= tol,
            LipschitzRegion::TLipXy { x, y } => {
                let max = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                max <= f64::from(cache.diam()) + tol
                    && (u[x] - u[y] - cache.dist_f(x, y)).abs() <= tol
            }
            LipschitzRegion::TwoLevelXy { x, y } => {
                (u[x] - u[y] - cache.dist_f(x, y)).abs() <= tol
                    && u.iter()
                        .all(|&uv| (uv - u[x]).abs() <= tol || (uv - u[y]).abs() <= tol)
            }
        }
    }

    pub fn contains_function(&self, cache: &MetricCache, f: &[f64], tol: f64) -> bool {
        self.contains_potential(cache, &cache.potential(f), tol)
    }
}

/// All integer points of the anchored Lipschitz polytope (u(y) = 0, and
/// u(x) = d(x,y) when `x_anchor` is set), in a deterministic order. Returns
/// the points and whether the enumeration was complete (false when `cap` was
/// hit, in which case callers should add sampled starts).
pub fn integer_potentials(
    cache: &MetricCache,
    y: usize,
    x_anchor: Option<usize>,
    cap: usize,
) -> (Vec<Vec<f64>>, bool) {
    let n = cache.n();
    // Assign in BFS-from-y order so intervals tighten early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (cache.dist(y, v), v));

    let mut out = Vec::new();
    let mut complete = true;
    let mut u = vec![0.0f64; n];
    let mut stack: Vec<(usize, i64)> = Vec::new(); // (depth, next value to try)

    // Iterative DFS over integer assignments.
    fn bounds(cache: &MetricCache, order: &[usize], u: &[f64], depth: usize) -> (i64, i64) {
        let v = order[depth];
        let mut lo = -(cache.dist(order[0], v) as i64);
        let mut hi = cache.dist(order[0], v) as i64;
        for &w in &order[..depth] {
            let d = cache.dist(v, w) as i64;
            let uw = u[w] as i64;
            lo = lo.max(uw - d);
            hi = hi.min(uw + d);
        }
        (lo, hi)
    }

    let fixed = |v: usize, x_anchor: Option<usize>| -> Option<i64> {
        if v == y {
            Some(0)
        } else if Some(v) == x_anchor {
            Some(cache.dist(v, y) as i64)
        } else {
            None
        }
    };

    let mut depth = 0usize;
    let mut next: i64 = i64::MIN;
    loop {
        if depth == n {
            out.push(u.clone());
            if out.len() >= cap {
                complete = false;
                break;
            }
            // backtrack
            match stack.pop() {
                Some((d, nv)) => {
                    depth = d;
                    next = nv;
                }
                None => break,
            }
            continue;
        }
        let v = order[depth];
        if let Some(val) = fixed(v, x_anchor) {
            let (lo, hi) = bounds(cache, &order, &u, depth);
            if next == i64::MIN && (lo..=hi).contains(&val) {
                u[v] = val as f64;
                depth += 1;
                continue;
            }
            // fixed value infeasible or returning here: backtrack
            match stack.pop() {
                Some((d, nv)) => {
                    depth = d;
                    next = nv;
                }
                None => break,
            }
            continue;
        }
        let (lo, hi) = bounds(cache, &order, &u, depth);
        let val = if next == i64::MIN { lo } else { next };
        if val > hi {
            match stack.pop() {
                Some((d, nv)) => {
                    depth = d;
                    next = nv;
                }
                None => break,
            }
            continue;
        }
        u[v] = val as f64;
        stack.push((depth, val + 1));
        next = i64::MIN;
        depth += 1;
    }
    (out, complete)
}

/// Feasible interval for coordinate `v` of an anchored potential, holding
/// every other coordinate fixed.
pub fn coordinate_interval(cache: &MetricCache, u: &[f64], v: usize) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (w, &uw) in u.iter().enumerate().take(cache.n()) {
        if w != v {
            let d = cache.dist_f(v, w);
            lo = lo.max(uw - d);
            hi = hi.min(uw + d);
        }
    }
    (lo, hi)
}

/// A vertex of the anchored Lipschitz polytope found by maximizing a random
/// linear objective with the simplex solver.
pub fn random_lip_vertex(
    cache: &MetricCache,
    y: usize,
    rng: &mut impl Rng,
) -> Result<Vec<f64>, SolverError> {
    let n = cache.n();
    // Shifted variables x_v = u_v + d(v,y) >= 0 for v != y; all constraint
    // right-hand sides are nonnegative by the triangle inequality, so the
    // slack basis is feasible from the start.
    let vars: Vec<usize> = (0..n).filter(|&v| v != y).collect();
    let idx = |v: usize| vars.iter().position(|&w| w == v).unwrap();
    let mut rows = Vec::new();
    for &a in &vars {
        rows.push(LpRow {
            coeffs: vec![(idx(a), 1.0)],
            cmp: Cmp::Le,
            rhs: 2.0 * cache.dist_f(a, y),
        });
        for &b in &vars {
            if a != b {
                rows.push(LpRow {
                    coeffs: vec![(idx(a), 1.0), (idx(b), -1.0)],
                    cmp: Cmp::Le,
                    rhs: cache.dist_f(a, b) + cache.dist_f(a, y) - cache.dist_f(b, y),
                });
            }
        }
    }
    let objective: Vec<f64> = vars.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sol = simplex::solve(&LpProblem {
        num_vars: vars.len(),
        objective,
        rows,
    })?;
    let mut u = vec![0.0; n];
    for (k, &v) in vars.iter().enumerate() {
        u[v] = sol.x[k] - cache.dist_f(v, y);
    }
    Ok(u)
}

/// A random feasible anchored potential, built by sampling coordinates
/// uniformly inside their running feasible intervals.
pub fn random_lip_point(cache: &MetricCache, y: usize, rng: &mut impl Rng) -> Vec<f64> {
    let n = cache.n();
    let mut u = vec![0.0; n];
    let mut assigned = vec![false; n];
    assigned[y] = true;
    let mut order: Vec<usize> = (0..n).filter(|&v| v != y).collect();
    order.sort_by_key(|&v| cache.dist(y, v));
    for v in order {
        let mut lo = -cache.dist_f(v, y);
        let mut hi = cache.dist_f(v, y);
        for w in 0..n {
            if assigned[w] && w != v {
                let d = cache.dist_f(v, w);
                lo = lo.max(u[w] - d);
                hi = hi.min(u[w] + d);
            }
        }
        u[v] = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        assigned[v] = true;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::hypergraph::Hypergraph;
    use rand::SeedableRng;

    #[test]
    fn k2_integer_points() {
        let h = Hypergraph::new(2, vec![(vec![0, 1], 1.0)]).unwrap();
        let (pts, complete) = integer_potentials(h.metric(), 1, None, 1000);
        assert!(complete);
        let mut xs: Vec<i64> = pts.iter().map(|u| u[0] as i64).collect();
        xs.sort();
        assert_eq!(xs, vec![-1, 0, 1]);

        let (pts, _) = integer_potentials(h.metric(), 1, Some(0), 1000);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0], vec![1.0, 0.0]);
    }

    #[test]
    fn triangle_points_avoid_mixed_extremes() {
        let h = FamilySpec::OneRegular { n: 3, weight: 1.0 }.generate().unwrap();
        let (pts, complete) = integer_potentials(h.metric(), 1, None, 1000);
        assert!(complete);
        // u in {-1,0,1}^2 with |u0 - u2| <= 1: 9 - 2 mixed-sign pairs.
        assert_eq!(pts.len(), 7);
        for u in &pts {
            assert!(LipschitzRegion::Lip.contains_potential(h.metric(), u, 1e-12));
        }
    }

    #[test]
    fn membership_flavors() {
        let h = FamilySpec::Cycle { n: 4 }.generate().unwrap();
        let cache = h.metric();
        let u = vec![1.0, 0.0, 1.0, 2.0];
        assert!(LipschitzRegion::Lip.contains_potential(cache, &u, 1e-12));
        assert!(LipschitzRegion::TLip.contains_potential(cache, &u, 1e-12));
        assert!(LipschitzRegion::LipXy { x: 3, y: 1 }.contains_potential(cache, &u, 1e-12));
        assert!(!LipschitzRegion::LipXy { x: 1, y: 0 }.contains_potential(cache, &u, 1e-12));
        assert!(!LipschitzRegion::TwoLevelXy { x: 3, y: 1 }.contains_potential(cache, &u, 1e-12));
        let two = vec![1.0, 0.0, 0.0, 1.0];
        assert!(LipschitzRegion::TwoLevelXy { x: 0, y: 1 }.contains_potential(cache, &two, 1e-12));
        let too_steep = vec![3.0, 0.0, 1.0, 2.0];
        assert!(!LipschitzRegion::Lip.contains_potential(cache, &too_steep, 1e-12));
    }

    #[test]
    fn sampled_vertices_are_feasible_integer_points() {
        let h = FamilySpec::Cycle { n: 5 }.generate().unwrap();
        let cache = h.metric();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = random_lip_vertex(cache, 0, &mut rng).unwrap();
            assert!(LipschitzRegion::Lip.contains_potential(cache, &u, 1e-7));
            for &uv in &u {
                assert!((uv - uv.round()).abs() < 1e-7, "vertex coordinate {uv}");
            }
            let p = random_lip_point(cache, 0, &mut rng);
            assert!(LipschitzRegion::Lip.contains_potential(cache, &p, 1e-9));
        }
    }

    #[test]
    fn interval_respects_all_pairs() {
        let h = FamilySpec::Cycle { n: 5 }.generate().unwrap();
        let cache = h.metric();
        let u = vec![0.0, 0.5, 0.0, -0.5, 0.0];
        let (lo, hi) = coordinate_interval(cache, &u, 2);
        assert!(lo <= 0.0 && hi >= 0.0);
        for probe in [lo, hi] {
            let mut v = u.clone();
            v[2] = probe;
            assert!(LipschitzRegion::Lip.contains_potential(cache, &v, 1e-9));
        }
    }
}
