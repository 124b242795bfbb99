//! Generators for the hypergraph families used throughout the crate.

use crate::error::HypergraphError;
use crate::hypergraph::Hypergraph;

/// A named family instance.
///
/// The fig families share the vertex layout `x=0, y=1, p_1..p_A = 2..2+A,
/// q_1..q_B = 2+A..2+A+B` and always contain the covering hyperedge `e_V`
/// with weight `w_ev`; the second hyperedge `e` (weight `w_e`) is
/// `{x,y,p_*}` for Fig1, `{x,p_*}` for Fig2 and `{p_*}` for Fig3.
///
/// `CompleteHypergraph` is generated as all vertex subsets of cardinality
/// at least 2 with unit weight. That convention is documented rather than
/// canonical: other readings of "complete hypergraph" exist.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Unweighted complete graph K_n.
    CompleteGraph { n: usize },
    /// Unweighted cycle C_n.
    Cycle { n: usize },
    /// Unweighted complete hypergraph KH_n (all subsets of size >= 2).
    CompleteHypergraph { n: usize },
    /// 1-regular hypergraph R_{n,1}: a single hyperedge covering all vertices.
    OneRegular { n: usize, weight: f64 },
    Fig1 { a: usize, b: usize, w_ev: f64, w_e: f64 },
    Fig2 { a: usize, b: usize, w_ev: f64, w_e: f64 },
    Fig3 { a: usize, b: usize, w_ev: f64, w_e: f64 },
}

impl FamilySpec {
    pub fn vertex_count(&self) -> usize {
        match *self {
            FamilySpec::CompleteGraph { n }
            | FamilySpec::Cycle { n }
            | FamilySpec::CompleteHypergraph { n }
            | FamilySpec::OneRegular { n, .. } => n,
            FamilySpec::Fig1 { a, b, .. }
            | FamilySpec::Fig2 { a, b, .. }
            | FamilySpec::Fig3 { a, b, .. } => a + b + 2,
        }
    }

    /// The distinguished pair (x, y) for families that have one.
    pub fn anchor_pair(&self) -> (usize, usize) {
        (0, 1)
    }

    /// Human-readable vertex labels, used by the CLI as file comments.
    pub fn vertex_labels(&self) -> Vec<String> {
        match *self {
            FamilySpec::Fig1 { a, b, .. }
            | FamilySpec::Fig2 { a, b, .. }
            | FamilySpec::Fig3 { a, b, .. } => {
                let mut labels = vec!["x".to_string(), "y".to_string()];
                labels.extend((1..=a).map(|i| format!("p{i}")));
                labels.extend((1..=b).map(|j| format!("q{j}")));
                labels
            }
            _ => (0..self.vertex_count()).map(|v| format!("v{v}")).collect(),
        }
    }

    pub fn generate(&self) -> Result<Hypergraph, HypergraphError> {
        match *self {
            FamilySpec::CompleteGraph { n } => {
                if n < 2 {
                    return Err(HypergraphError::InvalidSpec(
                        "complete graph needs n >= 2".into(),
                    ));
                }
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        edges.push((vec![i, j], 1.0));
                    }
                }
                Hypergraph::new(n, edges)
            }
            FamilySpec::Cycle { n } => {
                if n < 3 {
                    return Err(HypergraphError::InvalidSpec("cycle needs n >= 3".into()));
                }
                let edges = (0..n).map(|i| (vec![i, (i + 1) % n], 1.0)).collect();
                Hypergraph::new(n, edges)
            }
            FamilySpec::CompleteHypergraph { n } => {
                if !(2..=16).contains(&n) {
                    return Err(HypergraphError::InvalidSpec(
                        "complete hypergraph supported for 2 <= n <= 16".into(),
                    ));
                }
                let mut edges = Vec::new();
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() >= 2 {
                        let verts = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                        edges.push((verts, 1.0));
                    }
                }
                Hypergraph::new(n, edges)
            }
            FamilySpec::OneRegular { n, weight } => {
                if n == 0 {
                    return Err(HypergraphError::InvalidSpec(
                        "1-regular hypergraph needs n >= 1".into(),
                    ));
                }
                if weight <= 0.0 || !weight.is_finite() {
                    return Err(HypergraphError::InvalidSpec(
                        "1-regular hypergraph needs a positive weight".into(),
                    ));
                }
                Hypergraph::new(n, vec![((0..n).collect(), weight)])
            }
            FamilySpec::Fig1 { a, b, w_ev, w_e } => {
                check_fig(a, b, w_ev, w_e, false)?;
                let n = a + b + 2;
                let e_v: Vec<usize> = (0..n).collect();
                let mut e: Vec<usize> = vec![0, 1];
                e.extend(2..2 + a);
                if b == 0 {
                    // e coincides with e_V as a set; this is the multi-hyperedge
                    // degenerate family.
                    Hypergraph::new_multi(n, vec![(e_v, w_ev), (e, w_e)])
                } else {
                    Hypergraph::new(n, vec![(e_v, w_ev), (e, w_e)])
                }
            }
            FamilySpec::Fig2 { a, b, w_ev, w_e } => {
                check_fig(a, b, w_ev, w_e, false)?;
                let n = a + b + 2;
                let e_v: Vec<usize> = (0..n).collect();
                let mut e: Vec<usize> = vec![0];
                e.extend(2..2 + a);
                Hypergraph::new(n, vec![(e_v, w_ev), (e, w_e)])
            }
            FamilySpec::Fig3 { a, b, w_ev, w_e } => {
                check_fig(a, b, w_ev, w_e, true)?;
                let n = a + b + 2;
                let e_v: Vec<usize> = (0..n).collect();
                let e: Vec<usize> = (2..2 + a).collect();
                Hypergraph::new(n, vec![(e_v, w_ev), (e, w_e)])
            }
        }
    }
}

fn check_fig(
    a: usize,
    b: usize,
    w_ev: f64,
    w_e: f64,
    need_p: bool,
) -> Result<(), HypergraphError> {
    if a + b < 1 {
        return Err(HypergraphError::InvalidSpec("fig families need A+B >= 1".into()));
    }
    if need_p && a < 1 {
        return Err(HypergraphError::InvalidSpec("fig3 needs A >= 1".into()));
    }
    if w_ev <= 0.0 || w_e <= 0.0 || !w_ev.is_finite() || !w_e.is_finite() {
        return Err(HypergraphError::InvalidSpec(
            "fig families need positive weights".into(),
        ));
    }
    Ok(())
}
