use crate::numerics::DEFAULT_RANK_TOL;

/// Solver settings shared by every optimization in the crate.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Certified gap for the concave fidelity solve.
    pub tol: f64,
    pub max_iters: usize,
    /// Random starts for the nonconvex ascents.
    pub restarts: usize,
    pub seed: u64,
    /// Smoothing parameters `μ` for `F(P + μ1, Q + μ1)`, applied in order.
    pub smoothing_schedule: Vec<f64>,
    /// Worker threads for multistart; results do not depend on it.
    pub threads: usize,
    /// Relative threshold for Choi ranks.
    pub rank_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 20_000,
            restarts: 16,
            seed: 0,
            smoothing_schedule: vec![1e-4, 1e-6, 1e-8],
            threads: 1,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl SolverOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Runs `job(i)` for every restart index and returns the results in
    /// index order. Each job must seed itself from its index, so the output
    /// is identical for any thread count.
    pub(crate) fn multistart<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if self.threads <= 1 || count <= 1 {
            return (0..count).map(job).collect();
        }
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&job).collect()),
            Err(_) => (0..count).map(job).collect(),
        }
    }
}
