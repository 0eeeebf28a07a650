use std::fmt;

use super::{sfd_explicit_step, FieldState, Grid1D, NsfdStepper, Scheme, StepParams};
use crate::error::SolverError;
use crate::model::{
    compute_r0, disease_free_equilibrium, endemic_equilibrium, Equilibrium, EquilibriumKind, IncidenceFunctions,
    ModelParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSettings {
    pub step: StepParams,
    /// Maximum simulated time (days).
    pub horizon: f64,
    /// Spacing of recorded snapshots (days).
    pub snapshot_every: f64,
    /// Early-stop threshold on [`steady_residual`].
    pub steady_tol: f64,
}

impl SimulationSettings {
    pub fn new(step: StepParams, horizon: f64) -> Self {
        SimulationSettings {
            step,
            horizon,
            snapshot_every: horizon,
            steady_tol: 1e-10,
        }
    }

    pub fn with_snapshot_every(mut self, every: f64) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn with_steady_tol(mut self, tol: f64) -> Self {
        self.steady_tol = tol;
        self
    }

    fn validate(&self) -> Result<(), SolverError> {
        let dt = self.step.dt;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SolverError::InvalidStep(format!("dt must be finite and > 0, got {dt}")));
        }
        if !(self.horizon.is_finite() && self.horizon >= dt) {
            return Err(SolverError::InvalidStep(format!(
                "horizon {} must be finite and >= dt {dt}",
                self.horizon
            )));
        }
        if !(self.snapshot_every.is_finite() && self.snapshot_every > 0.0) {
            return Err(SolverError::InvalidStep("snapshot_every must be > 0".into()));
        }
        if !(self.steady_tol >= 0.0) {
            return Err(SolverError::InvalidStep("steady_tol must be >= 0".into()));
        }
        Ok(())
    }

    fn total_steps(&self) -> usize {
        (self.horizon / self.step.dt - 1e-9).ceil() as usize
    }

    fn snapshot_stride(&self) -> usize {
        ((self.snapshot_every / self.step.dt).round() as usize).max(1)
    }
}

/// Outcome label of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    DiseaseFree,
    Endemic,
    NotConverged,
}

impl From<EquilibriumKind> for Verdict {
    fn from(kind: EquilibriumKind) -> Self {
        match kind {
            EquilibriumKind::DiseaseFree => Verdict::DiseaseFree,
            EquilibriumKind::Endemic => Verdict::Endemic,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::DiseaseFree => f.write_str("DiseaseFree"),
            Verdict::Endemic => f.write_str("Endemic"),
            Verdict::NotConverged => f.write_str("NotConverged"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub steps: usize,
    pub final_time: f64,
    /// True when the run stopped on the steady-state residual.
    pub converged: bool,
    pub final_residual: f64,
    pub nearest: Equilibrium,
    /// Relative sup-norm distance to `nearest`, see [`sup_norm_distance`].
    pub distance: f64,
    pub verdict: Verdict,
    /// First step (and its time) producing a nonpositive entry.
    pub first_nonpositive: Option<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    pub report: ConvergenceReport,
}

impl Trajectory {
    pub fn final_state(&self) -> &FieldState {
        self.snapshots
            .last()
            .expect("trajectory always holds the initial state")
    }
}

/// A step failed mid-run; `partial` holds everything up to the last good state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationFailure {
    pub step: usize,
    pub time: f64,
    pub error: SolverError,
    pub partial: Option<Box<Trajectory>>,
}

impl fmt::Display for SimulationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} (t = {}): {}", self.step, self.time, self.error)
    }
}

impl std::error::Error for SimulationFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<SolverError> for SimulationFailure {
    fn from(error: SolverError) -> Self {
        SimulationFailure {
            step: 0,
            time: 0.0,
            error,
            partial: None,
        }
    }
}

/// `max_n |X_n^{k+1} - X_n^k| / (dt·(1 + |X_n^k|))` over all three fields.
pub fn steady_residual(prev: &FieldState, next: &FieldState, dt: f64) -> f64 {
    prev.fields()
        .iter()
        .zip(next.fields().iter())
        .flat_map(|((_, a), (_, b))| a.iter().zip(b.iter()))
        .map(|(a, b)| (b - a).abs() / (dt * (1.0 + a.abs())))
        .fold(0.0, f64::max)
}

/// `max_n max(|S_n - S*|, |I_n - I*|, |V_n - V*|) / ‖E‖∞`.
pub fn sup_norm_distance(state: &FieldState, e: &Equilibrium) -> f64 {
    let target = e.components();
    let dev = state
        .fields()
        .iter()
        .zip(target)
        .flat_map(|((_, f), x)| f.iter().map(move |y| (y - x).abs()))
        .fold(0.0, f64::max);
    dev / e.sup_norm()
}

fn nearest_equilibrium(state: &FieldState, candidates: &[Equilibrium]) -> (Equilibrium, f64) {
    candidates
        .iter()
        .map(|e| (*e, sup_norm_distance(state, e)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("disease-free equilibrium always present")
}

enum Stepper {
    Nsfd(Box<NsfdStepper>),
    Sfd {
        params: ModelParams,
        inc: IncidenceFunctions,
        dt: f64,
        dx: f64,
    },
}

impl Stepper {
    fn step(&mut self, state: &FieldState) -> Result<FieldState, SolverError> {
        match self {
            Stepper::Nsfd(s) => s.step(state),
            Stepper::Sfd { params, inc, dt, dx } => sfd_explicit_step(state, params, inc, *dt, *dx),
        }
    }
}

pub fn simulate(
    initial: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    grid: &Grid1D,
    settings: &SimulationSettings,
) -> Result<Trajectory, SimulationFailure> {
    simulate_observed(initial, params, inc, grid, settings, |_, _| {})
}

/// Like [`simulate`], calling `observer(k, state)` for the initial state
/// (k = 0) and after every successful step.
pub fn simulate_observed(
    initial: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    grid: &Grid1D,
    settings: &SimulationSettings,
    mut observer: impl FnMut(usize, &FieldState),
) -> Result<Trajectory, SimulationFailure> {
    settings.validate()?;
    initial.check_shape(grid.n_nodes())?;
    let r0 = compute_r0(params, inc).map_err(SolverError::from)?;
    let mut equilibria = vec![disease_free_equilibrium(params).map_err(SolverError::from)?];
    if r0.total > 1.0 {
        if let Some(e) = endemic_equilibrium(params, inc).map_err(SolverError::from)? {
            equilibria.push(e);
        }
    }

    let dt = settings.step.dt;
    let mut stepper = match settings.step.scheme {
        Scheme::Nsfd => Stepper::Nsfd(Box::new(NsfdStepper::new(params, inc, grid.n_nodes(), dt, grid.dx())?)),
        Scheme::ExplicitSfd => Stepper::Sfd {
            params: *params,
            inc: inc.clone(),
            dt,
            dx: grid.dx(),
        },
    };

    let total = settings.total_steps();
    let stride = settings.snapshot_stride();
    let mut snapshots = vec![initial.clone()];
    let mut current = initial.clone();
    let mut first_nonpositive = None;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut steps = 0;
    observer(0, &current);

    let build = |snapshots: Vec<FieldState>, last: &FieldState, steps, residual, converged, first_nonpositive| {
        let (nearest, distance) = nearest_equilibrium(last, &equilibria);
        let verdict = if converged {
            Verdict::from(nearest.kind)
        } else {
            Verdict::NotConverged
        };
        Trajectory {
            snapshots,
            report: ConvergenceReport {
                steps,
                final_time: last.t,
                converged,
                final_residual: residual,
                nearest,
                distance,
                verdict,
                first_nonpositive,
            },
        }
    };

    for k in 1..=total {
        let next = match stepper.step(&current) {
            Ok(next) => next,
            Err(error) => {
                if snapshots.last().map(|s| s.t) != Some(current.t) {
                    snapshots.push(current.clone());
                }
                let partial = build(snapshots, &current, steps, residual, false, first_nonpositive);
                return Err(SimulationFailure {
                    step: k,
                    time: current.t + dt,
                    error,
                    partial: Some(Box::new(partial)),
                });
            }
        };
        if first_nonpositive.is_none() && !next.all_positive() && next.min_entry() < 0.0 {
            first_nonpositive = Some((k, next.t));
        }
        residual = steady_residual(&current, &next, dt);
        observer(k, &next);
        steps = k;
        current = next;
        converged = residual < settings.steady_tol;
        if converged || k == total {
            snapshots.push(current.clone());
            break;
        }
        if k % stride == 0 {
            snapshots.push(current.clone());
        }
    }

    Ok(build(
        snapshots,
        &current,
        steps,
        residual,
        converged,
        first_nonpositive,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_b() -> (ModelParams, IncidenceFunctions) {
        (ModelParams::reference(), IncidenceFunctions::linear(3e-10, 3e-10))
    }

    #[test]
    fn endemic_start_is_stationary() {
        let (p, inc) = scenario_b();
        let grid = Grid1D::new(0.0, 10.0, 20).unwrap();
        let e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        let init = FieldState::uniform(grid.n_nodes(), e.s, e.i, e.v);
        let settings = SimulationSettings::new(StepParams::nsfd(1.0).unwrap(), 50.0).with_snapshot_every(1.0);
        let mut max_dist: f64 = 0.0;
        let traj = simulate_observed(&init, &p, &inc, &grid, &settings, |_, st| {
            max_dist = max_dist.max(sup_norm_distance(st, &e));
        })
        .unwrap();
        assert!(max_dist < 1e-9);
        assert!(traj.report.converged);
        assert_eq!(traj.report.steps, 1);
        assert_eq!(traj.report.verdict, Verdict::Endemic);
    }

    #[test]
    fn horizon_shorter_than_dt_rejected() {
        let (p, inc) = scenario_b();
        let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
        let init = FieldState::uniform(5, 1.0, 1.0, 1.0);
        let settings = SimulationSettings::new(StepParams::nsfd(1.0).unwrap(), 0.5);
        let err = simulate(&init, &p, &inc, &grid, &settings).unwrap_err();
        assert!(matches!(err.error, SolverError::InvalidStep(_)));
    }

    #[test]
    fn snapshots_follow_stride() {
        let (p, inc) = scenario_b();
        let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
        let init = FieldState::uniform(5, 1e7, 1.0, 1.0);
        let settings = SimulationSettings::new(StepParams::nsfd(0.5).unwrap(), 10.0)
            .with_snapshot_every(2.0)
            .with_steady_tol(0.0);
        let traj = simulate(&init, &p, &inc, &grid, &settings).unwrap();
        let times: Vec<f64> = traj.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(traj.report.verdict, Verdict::NotConverged);
        assert_eq!(traj.report.steps, 20);
    }

    #[test]
    fn sfd_failure_keeps_partial_trajectory() {
        let (p, inc) = scenario_b();
        let grid = Grid1D::new(0.0, 50.0, 100).unwrap();
        let init = FieldState::from_fn(&grid, |_| 1e7, |x| 100.0 * x.exp(), |x| 100.0 * x.exp());
        let step = StepParams::new(1.0, Scheme::ExplicitSfd).unwrap();
        let settings = SimulationSettings::new(step, 1000.0);
        match simulate(&init, &p, &inc, &grid, &settings) {
            Err(fail) => {
                let partial = fail.partial.unwrap();
                assert!(partial.report.first_nonpositive.is_some());
                assert_eq!(partial.report.verdict, Verdict::NotConverged);
            }
            Ok(traj) => assert!(traj.report.first_nonpositive.is_some()),
        }
    }
}
