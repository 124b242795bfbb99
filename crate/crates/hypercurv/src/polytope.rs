//! Base-polytope faces, the energy functional and the canonical (min-norm)
//! restriction of the set-valued hypergraph Laplacian.
//!
//! For a hyperedge e and a function f, the argmax face of the base polytope
//! `B_e = conv{δx − δy : x,y ∈ e}` consists of the points supported on the
//! potential-argmax set (top) and potential-argmin set (bottom) of e. An
//! element of `L f` is `Σ_e w_e α_e b_e` with `b_e` in the argmax face and
//! `α_e` the potential spread of e; the canonical restriction `L⁰f` is the
//! unique such element of minimal weighted norm.
//!
//! The min-norm problem is a convex quadratic over a product of simplices
//! (one per face side with two or more vertices). It is solved with pairwise
//! Frank-Wolfe steps certified by the Frank-Wolfe duality gap, followed by an
//! exact KKT polish on the discovered support; the polish is only accepted
//! when the full KKT system verifies, so the result is never worse than the
//! iterate it refines.

use crate::error::SolverError;
use crate::hypergraph::{Hypergraph, MetricCache};

/// Tie tolerance on potentials when forming argmax/argmin sets.
pub const TIE_TOL: f64 = 1e-9;

/// The argmax face of one hyperedge: spread, level sets and simplex weights.
#[derive(Debug, Clone)]
pub struct FaceSpec {
    pub edge: usize,
    /// α_e, the potential spread over the hyperedge; 0 when below [`TIE_TOL`].
    pub gap: f64,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    /// Nonnegative, sums to 1; aligned with `top`.
    pub top_weights: Vec<f64>,
    /// Nonnegative, sums to 1; aligned with `bottom`.
    pub bottom_weights: Vec<f64>,
}

impl FaceSpec {
    /// The encoded face point b_e = Σ λ_p δ_p − Σ μ_q δ_q (zero if gap = 0).
    pub fn point(&self, n: usize) -> Vec<f64> {
        let mut b = vec![0.0; n];
        if self.gap == 0.0 {
            return b;
        }
        for (&v, &w) in self.top.iter().zip(&self.top_weights) {
            b[v] += w;
        }
        for (&v, &w) in self.bottom.iter().zip(&self.bottom_weights) {
            b[v] -= w;
        }
        b
    }
}

/// An element of `L f` with the per-edge flows that realize it.
#[derive(Debug, Clone)]
pub struct LaplacianSelection {
    pub value: Vec<f64>,
    pub flows: Vec<FaceSpec>,
    pub norm: f64,
}

pub fn argmax_face(h: &Hypergraph, f: &[f64], edge: usize) -> FaceSpec {
    let cache = h.metric();
    let e = &h.edges()[edge];
    let u: Vec<f64> = e.vertices.iter().map(|&v| f[v] / cache.deg(v)).collect();
    let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let raw_gap = hi - lo;
    if raw_gap <= TIE_TOL {
        let all = e.vertices.clone();
        let w = vec![1.0 / all.len() as f64; all.len()];
        return FaceSpec {
            edge,
            gap: 0.0,
            top: all.clone(),
            bottom: all,
            top_weights: w.clone(),
            bottom_weights: w,
        };
    }
    let top: Vec<usize> = e
        .vertices
        .iter()
        .zip(&u)
        .filter(|(_, &uv)| uv >= hi - TIE_TOL)
        .map(|(&v, _)| v)
        .collect();
    let bottom: Vec<usize> = e
        .vertices
        .iter()
        .zip(&u)
        .filter(|(_, &uv)| uv <= lo + TIE_TOL)
        .map(|(&v, _)| v)
        .collect();
    let tw = vec![1.0 / top.len() as f64; top.len()];
    let bw = vec![1.0 / bottom.len() as f64; bottom.len()];
    FaceSpec {
        edge,
        gap: raw_gap,
        top,
        bottom,
        top_weights: tw,
        bottom_weights: bw,
    }
}

/// E(f) = ½ Σ_e w_e (max potential spread over e)².
pub fn energy(h: &Hypergraph, f: &[f64]) -> f64 {
    let cache = h.metric();
    let mut total = 0.0;
    for e in h.edges() {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for &v in &e.vertices {
            let u = f[v] / cache.deg(v);
            hi = hi.max(u);
            lo = lo.min(u);
        }
        let gap = hi - lo;
        total += 0.5 * e.weight * gap * gap;
    }
    total
}

#[derive(Debug, Clone)]
pub struct MinNormOptions {
    /// Frank-Wolfe duality-gap target certifying the quadratic solve.
    pub gap_tol: f64,
    pub max_iterations: usize,
    /// Attempt the exact KKT polish on the discovered support.
    pub polish: bool,
}

impl Default for MinNormOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-10,
            max_iterations: 1_000_000,
            polish: true,
        }
    }
}

/// The canonical restriction L⁰f with default solver options.
pub fn laplacian_l0(h: &Hypergraph, f: &[f64]) -> Result<LaplacianSelection, SolverError> {
    laplacian_l0_with(h, f, &MinNormOptions::default())
}

pub fn laplacian_l0_with(
    h: &Hypergraph,
    f: &[f64],
    opts: &MinNormOptions,
) -> Result<LaplacianSelection, SolverError> {
    let n = h.vertex_count();
    let mut faces: Vec<FaceSpec> = (0..h.edges().len())
        .map(|e| argmax_face(h, f, e))
        .collect();
    let (value, _gap) = min_norm_over_faces(h, &mut faces, None, opts)?;
    let norm = h.metric().norm(&value);
    Ok(LaplacianSelection {
        value: if faces.iter().all(|fa| fa.gap == 0.0) {
            vec![0.0; n]
        } else {
            value
        },
        flows: faces,
        norm,
    })
}

/// Distance from `target` to the set `{Σ_e w_e α_e b_e : b_e in the argmax
/// face of f}`; membership holds when the returned distance is ~0.
pub fn selection_distance(
    h: &Hypergraph,
    f: &[f64],
    target: &[f64],
    opts: &MinNormOptions,
) -> Result<f64, SolverError> {
    let mut faces: Vec<FaceSpec> = (0..h.edges().len())
        .map(|e| argmax_face(h, f, e))
        .collect();
    let (value, _gap) = min_norm_over_faces(h, &mut faces, Some(target), opts)?;
    let diff: Vec<f64> = value.iter().zip(target).map(|(a, b)| a - b).collect();
    Ok(h.metric().norm(&diff))
}

/// Vertex-extreme members of `L f` (all faces at simplex vertices, capped)
/// plus `samples` random convex combinations. Brute-force oracle support for
/// [`laplacian_l0`] on tiny instances.
pub fn laplacian_members(
    h: &Hypergraph,
    f: &[f64],
    samples: usize,
    rng: &mut impl rand::Rng,
) -> Vec<LaplacianSelection> {
    const EXTREME_CAP: usize = 512;
    let n = h.vertex_count();
    let cache = h.metric();
    let faces: Vec<FaceSpec> = (0..h.edges().len())
        .map(|e| argmax_face(h, f, e))
        .collect();
    let active: Vec<usize> = faces
        .iter()
        .enumerate()
        .filter(|(_, fa)| fa.gap > 0.0)
        .map(|(i, _)| i)
        .collect();

    type SideWeights = (Vec<f64>, Vec<f64>);
    let build = |choices: &dyn Fn(usize, &FaceSpec) -> SideWeights| {
        let mut flows = faces.clone();
        let mut value = vec![0.0; n];
        for (slot, &fi) in active.iter().enumerate() {
            let (tw, bw) = choices(slot, &faces[fi]);
            let coef = h.edges()[faces[fi].edge].weight * faces[fi].gap;
            for (&v, &w) in faces[fi].top.iter().zip(&tw) {
                value[v] += coef * w;
            }
            for (&v, &w) in faces[fi].bottom.iter().zip(&bw) {
                value[v] -= coef * w;
            }
            flows[fi].top_weights = tw;
            flows[fi].bottom_weights = bw;
        }
        let norm = cache.norm(&value);
        LaplacianSelection { value, flows, norm }
    };

    let mut members = Vec::new();
    if active.is_empty() {
        members.push(build(&|_, _| (Vec::new(), Vec::new())));
        return members;
    }

    // Extreme members: one (top vertex, bottom vertex) choice per active edge.
    let combos_per_edge: Vec<usize> = active
        .iter()
        .map(|&fi| faces[fi].top.len() * faces[fi].bottom.len())
        .collect();
    let total: usize = combos_per_edge
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c))
        .unwrap_or(usize::MAX);
    let count = total.min(EXTREME_CAP);
    for mut code in 0..count {
        let picks: Vec<(usize, usize)> = combos_per_edge
            .iter()
            .zip(&active)
            .map(|(&c, &fi)| {
                let pick = code % c;
                code /= c;
                let bl = faces[fi].bottom.len();
                (pick / bl, pick % bl)
            })
            .collect();
        members.push(build(&|slot, fa| {
            let (ti, bi) = picks[slot];
            let mut tw = vec![0.0; fa.top.len()];
            let mut bw = vec![0.0; fa.bottom.len()];
            tw[ti] = 1.0;
            bw[bi] = 1.0;
            (tw, bw)
        }));
    }

    for _ in 0..samples {
        let dirichlet = |k: usize, rng: &mut dyn rand::RngCore| -> Vec<f64> {
            let mut w: Vec<f64> = (0..k)
                .map(|_| -(rand::Rng::gen_range(rng, 1e-12..1.0f64)).ln())
                .collect();
            let s: f64 = w.iter().sum();
            for v in &mut w {
                *v /= s;
            }
            w
        };
        let random_choices: Vec<(Vec<f64>, Vec<f64>)> = active
            .iter()
            .map(|&fi| {
                (
                    dirichlet(faces[fi].top.len(), rng),
                    dirichlet(faces[fi].bottom.len(), rng),
                )
            })
            .collect();
        members.push(build(&|slot, _| random_choices[slot].clone()));
    }
    members
}

struct Block {
    coef: f64,
    verts: Vec<usize>,
    weights: Vec<f64>,
}

/// Minimize `½ ‖(Σ_e w_e α_e b_e) − target‖²` over the product of face
/// simplices; writes the optimal weights back into `faces` and returns the
/// optimal value vector with the achieved Frank-Wolfe gap.
fn min_norm_over_faces(
    h: &Hypergraph,
    faces: &mut [FaceSpec],
    target: Option<&[f64]>,
    opts: &MinNormOptions,
) -> Result<(Vec<f64>, f64), SolverError> {
    let n = h.vertex_count();
    let cache = h.metric();

    // Fixed contribution from singleton sides; variable blocks for the rest.
    let mut fixed = vec![0.0; n];
    if let Some(t) = target {
        for (fx, tv) in fixed.iter_mut().zip(t) {
            *fx -= tv;
        }
    }
    let mut blocks: Vec<Block> = Vec::new();
    let mut block_of_face: Vec<(Option<usize>, Option<usize>)> = vec![(None, None); faces.len()];
    for (fi, fa) in faces.iter().enumerate() {
        if fa.gap == 0.0 {
            continue;
        }
        let coef = h.edges()[fa.edge].weight * fa.gap;
        if fa.top.len() == 1 {
            fixed[fa.top[0]] += coef;
        } else {
            block_of_face[fi].0 = Some(blocks.len());
            blocks.push(Block {
                coef,
                verts: fa.top.clone(),
                weights: vec![1.0 / fa.top.len() as f64; fa.top.len()],
            });
        }
        if fa.bottom.len() == 1 {
            fixed[fa.bottom[0]] -= coef;
        } else {
            block_of_face[fi].1 = Some(blocks.len());
            blocks.push(Block {
                coef: -coef,
                verts: fa.bottom.clone(),
                weights: vec![1.0 / fa.bottom.len() as f64; fa.bottom.len()],
            });
        }
    }

    let residual = |blocks: &[Block]| -> Vec<f64> {
        let mut r = fixed.clone();
        for b in blocks {
            for (&v, &w) in b.verts.iter().zip(&b.weights) {
                r[v] += b.coef * w;
            }
        }
        r
    };

    let mut r = residual(&blocks);
    let mut achieved_gap = 0.0;
    if !blocks.is_empty() {
        let mut iterations = 0usize;
        loop {
            let mut total_gap = 0.0;
            let mut best: Option<(usize, usize, usize, f64)> = None;
            for (bi, b) in blocks.iter().enumerate() {
                let grad =
                    |i: usize| b.coef * r[b.verts[i]] / cache.deg(b.verts[i]);
                let mut fw = 0;
                let mut away = None;
                let mut dot = 0.0;
                for i in 0..b.verts.len() {
                    let g = grad(i);
                    dot += b.weights[i] * g;
                    if g < grad(fw) {
                        fw = i;
                    }
                    if b.weights[i] > 0.0 {
                        match away {
                            None => away = Some(i),
                            Some(a) if g > grad(a) => away = Some(i),
                            _ => {}
                        }
                    }
                }
                let away = away.expect("simplex weights sum to 1");
                total_gap += dot - grad(fw);
                let score = grad(away) - grad(fw);
                if best.is_none_or(|(.., s)| score > s) {
                    best = Some((bi, fw, away, score));
                }
            }
            achieved_gap = total_gap;
            if total_gap <= opts.gap_tol {
                break;
            }
            iterations += 1;
            if iterations > opts.max_iterations {
                return Err(SolverError::Budget {
                    gap: total_gap,
                    iterations,
                    target: opts.gap_tol,
                });
            }
            let (bi, fw, away, score) = best.expect("gap above tolerance");
            let b = &mut blocks[bi];
            let (vf, va) = (b.verts[fw], b.verts[away]);
            let denom = b.coef * b.coef * (1.0 / cache.deg(vf) + 1.0 / cache.deg(va));
            let step = (score / denom).min(b.weights[away]);
            b.weights[fw] += step;
            b.weights[away] -= step;
            r[vf] += b.coef * step;
            r[va] -= b.coef * step;
            if iterations.is_multiple_of(1024) {
                r = residual(&blocks);
            }
        }

        if opts.polish {
            if let Some(polished) = polish_blocks(cache, &fixed, &blocks) {
                blocks = polished;
                r = residual(&blocks);
            }
        }
    }

    // Write the final weights back into the faces.
    for (fi, fa) in faces.iter_mut().enumerate() {
        if let Some(bi) = block_of_face[fi].0 {
            fa.top_weights = blocks[bi].weights.clone();
        } else if fa.gap > 0.0 {
            fa.top_weights = vec![1.0];
        }
        if let Some(bi) = block_of_face[fi].1 {
            fa.bottom_weights = blocks[bi].weights.clone();
        } else if fa.gap > 0.0 {
            fa.bottom_weights = vec![1.0];
        }
    }

    let value: Vec<f64> = match target {
        Some(t) => r.iter().zip(t).map(|(rv, tv)| rv + tv).collect(),
        None => r.clone(),
    };
    Ok((value, achieved_gap))
}

/// Exact equality-KKT solve on the support found by Frank-Wolfe. Returns the
/// refined blocks only when the full KKT conditions verify.
fn polish_blocks(cache: &MetricCache, fixed: &[f64], blocks: &[Block]) -> Option<Vec<Block>> {
    use nalgebra::{DMatrix, DVector};

    let supports: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            (0..b.verts.len())
                .filter(|&i| b.weights[i] > 1e-12)
                .collect()
        })
        .collect();
    let m: usize = supports.iter().map(|s| s.len()).sum();
    let nb = blocks.len();
    let dim = m + nb;
    if dim > 400 {
        return None;
    }

    // Variable order: support weights block by block, then one multiplier per
    // block. Stationarity: coef_b r[v]/d_v = θ_b on the support; constraint:
    // weights sum to 1.
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    let mut offsets = Vec::with_capacity(nb);
    {
        let mut off = 0;
        for s in &supports {
            offsets.push(off);
            off += s.len();
        }
    }
    for (bi, b) in blocks.iter().enumerate() {
        for (si, &i) in supports[bi].iter().enumerate() {
            let row = offsets[bi] + si;
            let v = b.verts[i];
            for (bj, bb) in blocks.iter().enumerate() {
                for (sj, &j) in supports[bj].iter().enumerate() {
                    if bb.verts[j] == v {
                        a[(row, offsets[bj] + sj)] += b.coef * bb.coef / cache.deg(v);
                    }
                }
            }
            a[(row, m + bi)] = -1.0;
            rhs[row] = -b.coef * fixed[v] / cache.deg(v);
        }
        let crow = m + bi;
        for si in 0..supports[bi].len() {
            a[(crow, offsets[bi] + si)] = 1.0;
        }
        rhs[crow] = 1.0;
    }

    let sol = a.lu().solve(&rhs)?;

    let mut polished: Vec<Block> = blocks
        .iter()
        .map(|b| Block {
            coef: b.coef,
            verts: b.verts.clone(),
            weights: vec![0.0; b.verts.len()],
        })
        .collect();
    for (bi, s) in supports.iter().enumerate() {
        for (si, &i) in s.iter().enumerate() {
            let w = sol[offsets[bi] + si];
            if w < -1e-9 {
                return None;
            }
            polished[bi].weights[i] = w.max(0.0);
        }
        let sum: f64 = polished[bi].weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return None;
        }
        for w in &mut polished[bi].weights {
            *w /= sum;
        }
    }

    // Off-support KKT: gradients must not undercut the block multiplier.
    let mut r = fixed.to_vec();
    for b in &polished {
        for (&v, &w) in b.verts.iter().zip(&b.weights) {
            r[v] += b.coef * w;
        }
    }
    for (bi, b) in polished.iter().enumerate() {
        let theta = sol[m + bi];
        for (i, &v) in b.verts.iter().enumerate() {
            let g = b.coef * r[v] / cache.deg(v);
            if b.weights[i] <= 0.0 && g < theta - 1e-9 {
                return None;
            }
        }
    }
    Some(polished)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::hypergraph::Hypergraph;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn r31() -> Hypergraph {
        FamilySpec::OneRegular { n: 3, weight: 1.0 }.generate().unwrap()
    }

    fn k2() -> Hypergraph {
        Hypergraph::new(2, vec![(vec![0, 1], 1.0)]).unwrap()
    }

    fn scaled_degrees(h: &Hypergraph, c: f64) -> Vec<f64> {
        (0..h.vertex_count()).map(|v| c * h.metric().deg(v)).collect()
    }

    #[test]
    fn face_of_delta_on_a_triangle_edge() {
        let h = r31();
        let f = vec![1.0, 0.0, 0.0];
        let fa = argmax_face(&h, &f, 0);
        assert_relative_eq!(fa.gap, 1.0);
        assert_eq!(fa.top, vec![0]);
        assert_eq!(fa.bottom, vec![1, 2]);
    }

    #[test]
    fn face_of_constant_potential_is_degenerate() {
        let h = r31();
        let f = scaled_degrees(&h, 3.5);
        let fa = argmax_face(&h, &f, 0);
        assert_eq!(fa.gap, 0.0);
        assert_eq!(fa.top, fa.bottom);
        assert_eq!(fa.top, vec![0, 1, 2]);
    }

    #[test]
    fn face_of_two_level_potential() {
        // u two-valued {1, 0} with both levels present on the edge.
        let h = Hypergraph::new(4, vec![(vec![0, 1, 2, 3], 2.0)]).unwrap();
        let u = [1.0, 1.0, 0.0, 0.0];
        let f = h.metric().function_from_potential(&u);
        let fa = argmax_face(&h, &f, 0);
        assert_relative_eq!(fa.gap, 1.0);
        assert_eq!(fa.top, vec![0, 1]);
        assert_eq!(fa.bottom, vec![2, 3]);
    }

    #[test]
    fn energy_examples() {
        let h = k2();
        assert_relative_eq!(energy(&h, &[1.0, 0.0]), 0.5);
        let h = r31();
        assert_relative_eq!(energy(&h, &[1.0, 0.0, 0.0]), 0.5);
        assert_relative_eq!(energy(&h, &scaled_degrees(&h, -2.0)), 0.0);
    }

    #[test]
    fn min_norm_on_r31_splits_the_bottom() {
        let h = r31();
        let sel = laplacian_l0(&h, &[1.0, 0.0, 0.0]).unwrap();
        // 1-D oracle: minimize 1 + t^2 + (1-t)^2 over t in [0,1] -> t = 1/2.
        let oracle = (0..=1000)
            .map(|k| {
                let t = k as f64 / 1000.0;
                (1.0 + t * t + (1.0 - t) * (1.0 - t)).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(sel.value[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(sel.value[1], -0.5, epsilon = 1e-9);
        assert_relative_eq!(sel.value[2], -0.5, epsilon = 1e-9);
        assert!(sel.norm <= oracle + 1e-9);
    }

    #[test]
    fn min_norm_on_k2_is_the_single_point() {
        let h = k2();
        let sel = laplacian_l0(&h, &[1.0, 0.0]).unwrap();
        assert_relative_eq!(sel.value[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sel.value[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn min_norm_of_constant_potential_is_zero() {
        let h = r31();
        let sel = laplacian_l0(&h, &scaled_degrees(&h, 4.0)).unwrap();
        assert_eq!(sel.value, vec![0.0; 3]);
        assert_eq!(sel.norm, 0.0);
    }

    #[test]
    fn members_extremes_on_r31() {
        let h = r31();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let members = laplacian_members(&h, &[1.0, 0.0, 0.0], 0, &mut rng);
        let mut vals: Vec<Vec<i64>> = members
            .iter()
            .map(|m| m.value.iter().map(|v| (v * 1000.0).round() as i64).collect())
            .collect();
        vals.sort();
        assert_eq!(vals, vec![vec![1000, -1000, 0], vec![1000, 0, -1000]]);
    }

    #[test]
    fn members_unique_argmax_is_single() {
        // A graph with distinct potentials: every face is a single point.
        let h = Hypergraph::new(3, vec![(vec![0, 1], 1.0), (vec![1, 2], 1.0)]).unwrap();
        let f = vec![3.0, 1.0, 0.0];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let members = laplacian_members(&h, &f, 0, &mut rng);
        assert_eq!(members.len(), 1);
    }

    #[test]
    fn members_of_constant_potential_is_zero_only() {
        let h = r31();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let members = laplacian_members(&h, &scaled_degrees(&h, 1.0), 3, &mut rng);
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].value, vec![0.0; 3]);
    }

    #[test]
    fn conservation_and_orthogonality() {
        let h = Hypergraph::new(
            5,
            vec![(vec![0, 1, 2, 3, 4], 1.5), (vec![0, 2, 4], 0.7)],
        )
        .unwrap();
        let f = vec![2.0, -1.0, 0.5, 0.0, -0.3];
        let sel = laplacian_l0(&h, &f).unwrap();
        assert_relative_eq!(sel.value.iter().sum::<f64>(), 0.0, epsilon = 1e-9);
        for fa in &sel.flows {
            if fa.gap > 0.0 {
                let coef = h.edges()[fa.edge].weight * fa.gap;
                let top_sum: f64 = fa.top_weights.iter().sum();
                let bot_sum: f64 = fa.bottom_weights.iter().sum();
                assert_relative_eq!(coef * top_sum, coef, epsilon = 1e-9);
                assert_relative_eq!(coef * bot_sum, coef, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn selection_distance_detects_membership() {
        let h = r31();
        let f = vec![1.0, 0.0, 0.0];
        let sel = laplacian_l0(&h, &f).unwrap();
        let d = selection_distance(&h, &f, &sel.value, &MinNormOptions::default()).unwrap();
        assert!(d <= 1e-8, "distance {d}");
        let outside = vec![2.0, -1.0, -1.0];
        let d = selection_distance(&h, &f, &outside, &MinNormOptions::default()).unwrap();
        assert!(d > 0.1, "distance {d}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn scale_equivariance(
            f in proptest::collection::vec(-2.0f64..2.0, 5),
            c in -3.0f64..3.0,
        ) {
            let h = Hypergraph::new(
                5,
                vec![(vec![0, 1, 2, 3, 4], 1.0), (vec![1, 3], 2.0), (vec![0, 2, 4], 0.5)],
            ).unwrap();
            let scaled: Vec<f64> = f.iter().map(|v| c * v).collect();
            let a = laplacian_l0(&h, &scaled).unwrap();
            let b = laplacian_l0(&h, &f).unwrap();
            for (av, bv) in a.value.iter().zip(&b.value) {
                prop_assert!((av - c * bv).abs() < 1e-7, "{av} vs {}", c * bv);
            }
        }

        #[test]
        fn energy_is_convex(
            f in proptest::collection::vec(-2.0f64..2.0, 4),
            g in proptest::collection::vec(-2.0f64..2.0, 4),
        ) {
            let h = Hypergraph::new(4, vec![(vec![0, 1, 2, 3], 1.0), (vec![0, 1], 0.5)]).unwrap();
            let mid: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 0.5 * (a + b)).collect();
            let lhs = energy(&h, &mid);
            let rhs = 0.5 * energy(&h, &f) + 0.5 * energy(&h, &g);
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }
}
