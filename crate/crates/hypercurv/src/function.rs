//! Real-valued vertex functions.

use crate::hypergraph::MetricCache;

/// A function f on the vertex set, stored as a dense vector.
///
/// The weighted potential u(v) = f(v)/d_v is the quantity Lipschitz
/// conditions, level sets and argmax faces are defined on; conversions go
/// through [`MetricCache::potential`] / [`MetricCache::function_from_potential`].
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The characteristic function δ_x.
    pub fn delta(n: usize, x: usize) -> Self {
        let mut v = vec![0.0; n];
        v[x] = 1.0;
        Self(v)
    }

    /// f with potential u, i.e. f(v) = d_v u(v).
    pub fn from_potential(u: &[f64], cache: &MetricCache) -> Self {
        Self(cache.function_from_potential(u))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn potential(&self, cache: &MetricCache) -> Vec<f64> {
        cache.potential(&self.0)
    }
}

impl std::ops::Deref for VertexFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}
