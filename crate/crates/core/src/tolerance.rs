use crate::scalar::{real, Real};

/// Numerical thresholds shared across modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T: Real> {
    /// Structural assertions (group closure, equivariance, commutation).
    pub tol: T,
    /// Relative singular-value / deflation threshold for numerical rank.
    pub rank_tol: T,
    /// Clustering radius for eigenvalue pairs.
    pub cluster_tol: T,
    /// Target residual of the moment-map flow.
    pub flow_tol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            tol: real(1e-9),
            rank_tol: real(1e-8),
            cluster_tol: real(1e-6),
            flow_tol: real(1e-6),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn all_positive(&self) -> bool {
        [self.tol, self.rank_tol, self.cluster_tol, self.flow_tol].iter().all(|&x| x > T::zero())
    }
}
