use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weighting::WeightStrategy;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    /// Restart length.
    pub m: usize,
    /// Number of harmonic Ritz vectors kept at a restart; 0 disables
    /// deflation.
    pub k: usize,
    /// Relative residual tolerance.
    pub tol: T,
    /// Maximum number of cycles.
    pub maxit: usize,
    pub strategy: WeightStrategy<T>,
    /// Harmonic shift. Only 0 is supported.
    pub sigma: T,
    /// Evaluate the restart relation residual at every deflated restart
    /// and record it in the report.
    pub diagnostics: bool,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            m: 10,
            k: 0,
            tol: T::lit(1e-6),
            maxit: 2500,
            strategy: WeightStrategy::identity(),
            sigma: T::zero(),
            diagnostics: false,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_maxit(mut self, maxit: usize) -> Self {
        self.maxit = maxit;
        self
    }

    pub fn with_strategy(mut self, strategy: WeightStrategy<T>) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_diagnostics(mut self, on: bool) -> Self {
        self.diagnostics = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("restart length m must be >= 1".into()));
        }
        if self.k > 0 && self.k + 2 > self.m {
            return Err(Error::InvalidArgument(format!(
                "deflation count k = {} requires m >= k + 2 (m = {})",
                self.k, self.m
            )));
        }
        if !(self.tol > T::zero()) || !self.tol.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.maxit == 0 {
            return Err(Error::InvalidArgument("maxit must be >= 1".into()));
        }
        if self.sigma != T::zero() {
            return Err(Error::InvalidArgument("only the shift sigma = 0 is supported".into()));
        }
        if !(self.strategy.floor_rel > T::zero()) {
            return Err(Error::InvalidArgument("weight floor must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SolverConfig::<f64>::default();
        assert_eq!((c.tol, c.maxit, c.k), (1e-6, 2500, 0));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SolverConfig::<f64>::new(0, 0).validate().is_err());
        assert!(SolverConfig::<f64>::new(5, 4).validate().is_err());
        assert!(SolverConfig::<f64>::new(5, 3).validate().is_ok());
        assert!(SolverConfig::<f64>::new(5, 0).with_tol(0.0).validate().is_err());
        assert!(SolverConfig::<f64>::new(5, 0).with_maxit(0).validate().is_err());
        let mut c = SolverConfig::<f64>::new(5, 0);
        c.sigma = 0.5;
        assert!(c.validate().is_err());
    }
}
