//! Finite connected weighted hypergraphs and their metric caches.
//!
//! Vertices are dense indices `0..n`. A hyperedge is a nonempty vertex subset
//! with a strictly positive weight; size-1 hyperedges (loops) are allowed and
//! contribute to degrees but never to adjacency. Connectivity is a type
//! invariant: construction fails with [`HypergraphError::Disconnected`]
//! otherwise, so every built `Hypergraph` carries a complete distance matrix.

use crate::error::HypergraphError;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    /// Sorted, duplicate-free vertex indices.
    pub vertices: Vec<usize>,
    pub weight: f64,
}

impl Hyperedge {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Per-vertex weighted degrees, all-pairs hop distances, diameter and volume.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCache {
    n: usize,
    deg: Vec<f64>,
    dist: Vec<u32>,
    diam: u32,
    vol: f64,
}

impl MetricCache {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weighted degree d_v.
    pub fn deg(&self, v: usize) -> f64 {
        self.deg[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.deg
    }

    /// Hop distance d(x,y): one hop = sharing a hyperedge.
    pub fn dist(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn dist_f(&self, x: usize, y: usize) -> f64 {
        f64::from(self.dist(x, y))
    }

    pub fn diam(&self) -> u32 {
        self.diam
    }

    pub fn vol(&self) -> f64 {
        self.vol
    }

    /// Weighted inner product `<f,g> = Σ_v f(v) g(v) / d_v`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter()
            .zip(g)
            .zip(&self.deg)
            .map(|((a, b), d)| a * b / d)
            .sum()
    }

    /// Norm induced by [`MetricCache::inner`].
    pub fn norm(&self, f: &[f64]) -> f64 {
        self.inner(f, f).max(0.0).sqrt()
    }

    /// `<f, δx − δy> = f(x)/d_x − f(y)/d_y`.
    pub fn pairing(&self, f: &[f64], x: usize, y: usize) -> f64 {
        f[x] / self.deg[x] - f[y] / self.deg[y]
    }

    /// Potential u(v) = f(v)/d_v.
    pub fn potential(&self, f: &[f64]) -> Vec<f64> {
        f.iter().zip(&self.deg).map(|(a, d)| a / d).collect()
    }

    /// Inverse of [`MetricCache::potential`]: f(v) = d_v u(v).
    pub fn function_from_potential(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.deg).map(|(a, d)| a * d).collect()
    }
}

/// A finite connected weighted hypergraph.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    allow_multi: bool,
    metric: MetricCache,
}

impl Hypergraph {
    /// Builds and validates a hypergraph; multi-hyperedges are rejected.
    pub fn new(n: usize, edges: Vec<(Vec<usize>, f64)>) -> Result<Self, HypergraphError> {
        Self::build(n, edges, false)
    }

    /// Same as [`Hypergraph::new`] but coinciding hyperedges are permitted.
    pub fn new_multi(n: usize, edges: Vec<(Vec<usize>, f64)>) -> Result<Self, HypergraphError> {
        Self::build(n, edges, true)
    }

    fn build(
        n: usize,
        raw: Vec<(Vec<usize>, f64)>,
        allow_multi: bool,
    ) -> Result<Self, HypergraphError> {
        if n == 0 {
            return Err(HypergraphError::Validation(
                "vertex count must be at least 1".into(),
            ));
        }
        let mut edges = Vec::with_capacity(raw.len());
        for (verts, weight) in raw {
            if verts.is_empty() {
                return Err(HypergraphError::Validation("empty hyperedge".into()));
            }
            if weight <= 0.0 || !weight.is_finite() {
                return Err(HypergraphError::Validation(format!(
                    "hyperedge weight must be a positive finite number, got {weight}"
                )));
            }
            let mut verts = verts;
            verts.sort_unstable();
            if verts.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::Validation(format!(
                    "hyperedge {verts:?} lists a vertex twice"
                )));
            }
            if *verts.last().unwrap() >= n {
                return Err(HypergraphError::Validation(format!(
                    "hyperedge {verts:?} references a vertex >= {n}"
                )));
            }
            edges.push(Hyperedge {
                vertices: verts,
                weight,
            });
        }
        if !allow_multi {
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    if edges[i].vertices == edges[j].vertices {
                        return Err(HypergraphError::Validation(format!(
                            "duplicate hyperedge {:?} (pass allow_multi to permit)",
                            edges[i].vertices
                        )));
                    }
                }
            }
        }

        let metric = compute_metric(n, &edges)?;
        Ok(Self {
            n,
            edges,
            allow_multi,
            metric,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn allow_multi(&self) -> bool {
        self.allow_multi
    }

    /// The degree/distance/diameter/volume cache computed at construction.
    pub fn metric(&self) -> &MetricCache {
        &self.metric
    }

    /// True when every hyperedge has exactly two vertices.
    pub fn is_graph(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    /// Indices of the hyperedges containing `v` (the incidence set E_v).
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// The unweighted graph joining every pair co-contained in some hyperedge.
    pub fn clique_expansion(&self) -> Hypergraph {
        let mut pairs = std::collections::BTreeSet::new();
        for e in &self.edges {
            for (i, &a) in e.vertices.iter().enumerate() {
                for &b in &e.vertices[i + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        let edges = pairs.into_iter().map(|(a, b)| (vec![a, b], 1.0)).collect();
        Hypergraph::new(self.n, edges)
            .expect("clique expansion of a connected hypergraph is a connected graph")
    }
}

fn compute_metric(n: usize, edges: &[Hyperedge]) -> Result<MetricCache, HypergraphError> {
    let mut deg = vec![0.0; n];
    for e in edges {
        for &v in &e.vertices {
            deg[v] += e.weight;
        }
    }
    // n == 1 is trivially connected even with no edges; everywhere else a
    // zero-degree vertex is unreachable and re-reported as disconnection below.
    if n > 1 {
        if let Some(v) = deg.iter().position(|&d| d == 0.0) {
            let other = usize::from(v == 0);
            return Err(HypergraphError::Disconnected { x: other, y: v });
        }
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        for (i, &a) in e.vertices.iter().enumerate() {
            for &b in &e.vertices[i + 1..] {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }

    let unreached = u32::MAX;
    let mut dist = vec![unreached; n * n];
    let mut queue = std::collections::VecDeque::new();
    for src in 0..n {
        let row = &mut dist[src * n..(src + 1) * n];
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let dv = row[v];
            for &w in &adjacency[v] {
                if row[w] == unreached {
                    row[w] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        if let Some(y) = row.iter().position(|&d| d == unreached) {
            return Err(HypergraphError::Disconnected { x: src, y });
        }
    }

    let diam = dist.iter().copied().max().unwrap_or(0);
    let vol = deg.iter().sum();
    Ok(MetricCache {
        n,
        deg,
        dist,
        diam,
        vol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn triangle() -> Hypergraph {
        Hypergraph::new(3, vec![(vec![0, 1], 1.0), (vec![1, 2], 1.0), (vec![0, 2], 1.0)]).unwrap()
    }

    fn h2() -> Hypergraph {
        Hypergraph::new(3, vec![(vec![0, 1, 2], 1.0), (vec![0, 1], 1.0)]).unwrap()
    }

    #[test]
    fn triangle_distances_are_all_one() {
        let h = triangle();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(h.metric().dist(x, y), u32::from(x != y));
            }
        }
        assert_eq!(h.metric().diam(), 1);
    }

    #[test]
    fn cycle_opposite_vertices() {
        let edges = (0..6).map(|i| (vec![i, (i + 1) % 6], 1.0)).collect();
        let h = Hypergraph::new(6, edges).unwrap();
        assert_eq!(h.metric().dist(0, 3), 3);
        assert_eq!(h.metric().diam(), 3);
    }

    #[test]
    fn covering_hyperedge_gives_diameter_one() {
        // e_V plus a second edge: diameter stays 1.
        let h = Hypergraph::new(5, vec![(vec![0, 1, 2, 3, 4], 2.0), (vec![0, 2], 0.5)]).unwrap();
        assert_eq!(h.metric().diam(), 1);
    }

    #[test]
    fn degrees_and_volume() {
        let h = h2();
        assert_relative_eq!(h.metric().deg(0), 2.0);
        assert_relative_eq!(h.metric().deg(1), 2.0);
        assert_relative_eq!(h.metric().deg(2), 1.0);
        assert_relative_eq!(h.metric().vol(), 5.0);
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = Hypergraph::new(4, vec![(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap_err();
        assert!(matches!(err, HypergraphError::Disconnected { .. }));
    }

    #[test]
    fn loops_do_not_connect() {
        let err = Hypergraph::new(2, vec![(vec![0], 1.0), (vec![1], 1.0)]).unwrap_err();
        assert!(matches!(err, HypergraphError::Disconnected { .. }));
    }

    #[test]
    fn nonpositive_weight_is_rejected() {
        for w in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                Hypergraph::new(2, vec![(vec![0, 1], w)]),
                Err(HypergraphError::Validation(_))
            ));
        }
    }

    #[test]
    fn duplicate_edges_need_the_multi_flag() {
        let edges = vec![(vec![0, 1, 2], 1.0), (vec![2, 1, 0], 2.0)];
        assert!(Hypergraph::new(3, edges.clone()).is_err());
        let h = Hypergraph::new_multi(3, edges).unwrap();
        assert_relative_eq!(h.metric().deg(0), 3.0);
    }

    #[test]
    fn clique_expansion_of_single_hyperedge_is_complete() {
        let h = Hypergraph::new(4, vec![(vec![0, 1, 2, 3], 1.0)]).unwrap();
        let g = h.clique_expansion();
        assert_eq!(g.edges().len(), 6);
        assert!(g.is_graph());
    }

    #[test]
    fn clique_expansion_fixes_graphs() {
        let h = triangle();
        let g = h.clique_expansion();
        let mut a: Vec<_> = h.edges().iter().map(|e| e.vertices.clone()).collect();
        let mut b: Vec<_> = g.edges().iter().map(|e| e.vertices.clone()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn clique_expansion_of_h2_is_triangle() {
        let g = h2().clique_expansion();
        let mut b: Vec<_> = g.edges().iter().map(|e| e.vertices.clone()).collect();
        b.sort();
        assert_eq!(b, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn distances_match_bfs_on_clique_expansion() {
        let h = Hypergraph::new(
            6,
            vec![
                (vec![0, 1, 2], 1.5),
                (vec![2, 3], 0.5),
                (vec![3, 4, 5], 2.0),
                (vec![5], 1.0),
            ],
        )
        .unwrap();
        let g = h.clique_expansion();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(h.metric().dist(x, y), g.metric().dist(x, y));
            }
        }
    }

    #[test]
    fn inner_product_and_pairing() {
        let h = h2();
        let f = vec![2.0, 0.0, 1.0];
        let g = vec![1.0, 1.0, 1.0];
        // <f,g> = 2/2 + 0/2 + 1/1
        assert_relative_eq!(h.metric().inner(&f, &g), 2.0);
        assert_relative_eq!(h.metric().pairing(&f, 0, 2), 0.0);
        let u = h.metric().potential(&f);
        assert_eq!(u, vec![1.0, 0.0, 1.0]);
        assert_eq!(h.metric().function_from_potential(&u), f);
    }
}
