//! Space-time discretization on a uniform 1-D grid with reflecting
//! (zero-flux) ends.

mod nsfd;
mod simulate;
mod tridiag;

pub use nsfd::{
    assemble_i_system, assemble_s_system, assemble_v_system, fill_i_rhs, fill_v_rhs, nsfd_step, sfd_explicit_step,
    NsfdStepper,
};
pub use simulate::{
    simulate, simulate_observed, steady_residual, sup_norm_distance, ConvergenceReport, SimulationFailure,
    SimulationSettings, Trajectory, Verdict,
};
pub use tridiag::{solve_tridiagonal, TridiagonalSystem};

use crate::error::SolverError;

/// Uniform grid on `[a, b]` with `m` subintervals and `m + 1` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    m: usize,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self, SolverError> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(SolverError::InvalidGrid(format!("need finite a < b, got [{a}, {b}]")));
        }
        if m < 2 {
            return Err(SolverError::InvalidGrid(format!(
                "need at least 2 subintervals, got {m}"
            )));
        }
        Ok(Grid1D { a, b, m })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of subintervals.
    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn n_nodes(&self) -> usize {
        self.m + 1
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }

    pub fn node(&self, n: usize) -> f64 {
        self.a + n as f64 * self.dx()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(|n| self.node(n))
    }
}

/// Node values of the three fields at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub s: Vec<f64>,
    pub i: Vec<f64>,
    pub v: Vec<f64>,
}

impl FieldState {
    pub fn uniform(n_nodes: usize, s: f64, i: f64, v: f64) -> Self {
        FieldState {
            t: 0.0,
            s: vec![s; n_nodes],
            i: vec![i; n_nodes],
            v: vec![v; n_nodes],
        }
    }

    /// Samples initial profiles pointwise at the grid nodes.
    pub fn from_fn(grid: &Grid1D, s: impl Fn(f64) -> f64, i: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> Self {
        FieldState {
            t: 0.0,
            s: grid.nodes().map(&s).collect(),
            i: grid.nodes().map(&i).collect(),
            v: grid.nodes().map(&v).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn fields(&self) -> [(&'static str, &[f64]); 3] {
        [("S", &self.s), ("I", &self.i), ("V", &self.v)]
    }

    pub fn min_entry(&self) -> f64 {
        self.fields()
            .iter()
            .flat_map(|(_, f)| f.iter())
            .fold(f64::INFINITY, |m, x| m.min(*x))
    }

    pub fn all_positive(&self) -> bool {
        self.fields().iter().all(|(_, f)| f.iter().all(|x| *x > 0.0))
    }

    pub fn first_non_finite(&self) -> Option<(&'static str, usize)> {
        self.fields()
            .into_iter()
            .find_map(|(name, f)| f.iter().position(|x| !x.is_finite()).map(|n| (name, n)))
    }

    /// Largest absolute entry over all three fields.
    pub fn sup_norm(&self) -> f64 {
        self.fields()
            .iter()
            .flat_map(|(_, f)| f.iter())
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub(crate) fn check_shape(&self, n_nodes: usize) -> Result<(), SolverError> {
        for (_, f) in self.fields() {
            if f.len() != n_nodes {
                return Err(SolverError::ShapeMismatch {
                    expected: n_nodes,
                    got: f.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Implicit, positivity-preserving nonstandard scheme.
    Nsfd,
    /// Forward Euler with centred differences; contrast baseline only.
    ExplicitSfd,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Nsfd => f.write_str("nsfd"),
            Scheme::ExplicitSfd => f.write_str("sfd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub dt: f64,
    pub scheme: Scheme,
}

impl StepParams {
    pub fn new(dt: f64, scheme: Scheme) -> Result<Self, SolverError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SolverError::InvalidStep(format!("dt must be finite and > 0, got {dt}")));
        }
        Ok(StepParams { dt, scheme })
    }

    pub fn nsfd(dt: f64) -> Result<Self, SolverError> {
        Self::new(dt, Scheme::Nsfd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = Grid1D::new(0.0, 50.0, 100).unwrap();
        assert_eq!(g.n_nodes(), 101);
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.node(100), 50.0);
        assert!((g.dx() * g.cells() as f64 - 50.0).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_degenerate() {
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, f64::INFINITY, 10).is_err());
    }

    #[test]
    fn step_rejects_nonpositive_dt() {
        assert!(StepParams::nsfd(0.0).is_err());
        assert!(StepParams::nsfd(-1.0).is_err());
        assert!(StepParams::nsfd(f64::NAN).is_err());
    }

    #[test]
    fn from_fn_samples_nodes() {
        let g = Grid1D::new(0.0, 2.0, 2).unwrap();
        let st = FieldState::from_fn(&g, |_| 1.0, |x| x, |x| 2.0 * x);
        assert_eq!(st.i, vec![0.0, 1.0, 2.0]);
        assert_eq!(st.v, vec![0.0, 2.0, 4.0]);
        assert!(!st.all_positive());
        assert_eq!(st.min_entry(), 0.0);
    }
}
