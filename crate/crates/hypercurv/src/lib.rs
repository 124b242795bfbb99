//! Discrete Ricci curvatures of weighted hypergraphs.
//!
//! The library computes, for finite connected weighted hypergraphs:
//!
//! - the Lin–Lu–Yau curvature of graphs, from lazy random walks and the
//!   L¹-Wasserstein distance (primal transport LP cross-checked against the
//!   dual 1-Lipschitz maximization);
//! - the Ikeda–Kitabeppu–Takai–Uehara (IKTU) curvature and its weak variant,
//!   built from the λ-Kantorovich differences of the set-valued hypergraph
//!   Laplacian and its resolvent;
//! - the Laplacian pairing quantity C(x,y), by exhaustive two-level
//!   enumeration on `{e_V, e}` structures, by closed forms for the standard
//!   one- and two-hyperedge families, and by a generic local-search upper
//!   bound elsewhere.
//!
//! Everything is built on the weighted inner product `<f,g> = Σ_v f(v)g(v)/d_v`
//! and the base polytopes `B_e = conv{δx − δy : x,y ∈ e}` of the hyperedges.

pub mod curvature;
pub mod error;
pub mod families;
pub mod format;
pub mod function;
pub mod hypergraph;
pub mod lipschitz;
pub mod polytope;
pub mod resolvent;
pub mod simplex;
pub mod transport;

pub use error::{HypergraphError, SolverError};
pub use families::FamilySpec;
pub use function::VertexFunction;
pub use hypergraph::{Hyperedge, Hypergraph, MetricCache};
pub use polytope::{FaceSpec, LaplacianSelection};
