use super::{FieldState, TridiagonalSystem};
use crate::error::SolverError;
use crate::model::{IncidenceFunctions, ModelParams};

/// Backward-Euler diffusion matrix with ghost-node Neumann ends plus a
/// per-row reaction term `reaction(n)` (already multiplied by dt) on the
/// diagonal. `r` is `D·dt/dx²`.
fn neumann_system(n_nodes: usize, r: f64, reaction: impl Fn(usize) -> f64) -> TridiagonalSystem {
    let last = n_nodes - 1;
    let mut sub = vec![-r; n_nodes];
    let mut sup = vec![-r; n_nodes];
    sub[0] = 0.0;
    sup[last] = 0.0;
    let diag = (0..n_nodes)
        .map(|n| {
            let coupling = if n == 0 || n == last { r } else { 2.0 * r };
            1.0 + coupling + reaction(n)
        })
        .collect();
    TridiagonalSystem::new(sub, diag, sup, vec![0.0; n_nodes])
}

fn incidence_force(state: &FieldState, inc: &IncidenceFunctions) -> Vec<f64> {
    state.i.iter().zip(&state.v).map(|(&i, &v)| inc.force(i, v)).collect()
}

/// Susceptible update matrix `A^k` and right-hand side `S^k + Λ·dt`, with the
/// incidence evaluated at the old level.
pub fn assemble_s_system(
    state: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    dt: f64,
    dx: f64,
) -> TridiagonalSystem {
    let force = incidence_force(state, inc);
    assemble_s_with_force(state, &force, params, dt, dx)
}

fn assemble_s_with_force(
    state: &FieldState,
    force: &[f64],
    params: &ModelParams,
    dt: f64,
    dx: f64,
) -> TridiagonalSystem {
    let r = params.d1 * dt / (dx * dx);
    let mut sys = neumann_system(state.len(), r, |n| dt * (force[n] + params.d_s));
    for (rhs, s) in sys.rhs.iter_mut().zip(&state.s) {
        *rhs = s + params.lambda * dt;
    }
    debug_assert!(sys.check_dominance().is_ok());
    sys
}

/// Infected-cell matrix `B`. State independent; the right-hand side is left
/// zeroed for [`fill_i_rhs`].
pub fn assemble_i_system(params: &ModelParams, n_nodes: usize, dt: f64, dx: f64) -> TridiagonalSystem {
    let r = params.d2 * dt / (dx * dx);
    let loss = dt * params.infected_loss();
    neumann_system(n_nodes, r, |_| loss)
}

/// Virion matrix `C`. State independent; see [`fill_v_rhs`].
pub fn assemble_v_system(params: &ModelParams, n_nodes: usize, dt: f64, dx: f64) -> TridiagonalSystem {
    let r = params.d3 * dt / (dx * dx);
    let loss = dt * params.d_v;
    neumann_system(n_nodes, r, |_| loss)
}

/// `rhs[n] = I_n^k + dt·S_n^{k+1}·(f(V_n^k) + g(I_n^k))`.
pub fn fill_i_rhs(sys: &mut TridiagonalSystem, old: &FieldState, s_new: &[f64], inc: &IncidenceFunctions, dt: f64) {
    for (n, rhs) in sys.rhs.iter_mut().enumerate() {
        *rhs = old.i[n] + dt * s_new[n] * inc.force(old.i[n], old.v[n]);
    }
}

/// `rhs[n] = V_n^k + α·dt·I_n^{k+1}`.
pub fn fill_v_rhs(sys: &mut TridiagonalSystem, v_old: &[f64], i_new: &[f64], alpha: f64, dt: f64) {
    for ((rhs, v), i) in sys.rhs.iter_mut().zip(v_old).zip(i_new) {
        *rhs = v + alpha * dt * i;
    }
}

fn check_nonnegative(state: &FieldState) -> Result<(), SolverError> {
    if let Some((field, node)) = state.first_non_finite() {
        return Err(SolverError::NonFiniteState { field, node });
    }
    for (field, values) in state.fields() {
        if let Some(node) = values.iter().position(|x| *x < 0.0) {
            return Err(SolverError::NegativeState {
                field,
                node,
                value: values[node],
            });
        }
    }
    Ok(())
}

/// Reusable NSFD integrator for a fixed (params, grid, dt).
///
/// The infected and virion matrices do not depend on the state and are
/// assembled once; the susceptible matrix is rebuilt every step.
#[derive(Debug, Clone)]
pub struct NsfdStepper {
    params: ModelParams,
    inc: IncidenceFunctions,
    dt: f64,
    dx: f64,
    i_sys: TridiagonalSystem,
    v_sys: TridiagonalSystem,
    scratch: Vec<f64>,
}

impl NsfdStepper {
    pub fn new(
        params: &ModelParams,
        inc: &IncidenceFunctions,
        n_nodes: usize,
        dt: f64,
        dx: f64,
    ) -> Result<Self, SolverError> {
        params.validate()?;
        inc.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SolverError::InvalidStep(format!("dt must be finite and > 0, got {dt}")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(SolverError::InvalidGrid(format!("dx must be finite and > 0, got {dx}")));
        }
        if n_nodes < 3 {
            return Err(SolverError::InvalidGrid(format!(
                "need at least 3 nodes, got {n_nodes}"
            )));
        }
        let i_sys = assemble_i_system(params, n_nodes, dt, dx);
        let v_sys = assemble_v_system(params, n_nodes, dt, dx);
        i_sys.check_dominance()?;
        v_sys.check_dominance()?;
        Ok(NsfdStepper {
            params: *params,
            inc: inc.clone(),
            dt,
            dx,
            i_sys,
            v_sys,
            scratch: vec![0.0; n_nodes],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn i_system(&self) -> &TridiagonalSystem {
        &self.i_sys
    }

    pub fn v_system(&self) -> &TridiagonalSystem {
        &self.v_sys
    }

    /// Advances one step: S first, then I with the fresh S, then V with the fresh I.
    pub fn step(&mut self, state: &FieldState) -> Result<FieldState, SolverError> {
        let n_nodes = self.i_sys.len();
        state.check_shape(n_nodes)?;
        check_nonnegative(state)?;

        let force = incidence_force(state, &self.inc);
        let s_sys = assemble_s_with_force(state, &force, &self.params, self.dt, self.dx);
        let mut s = vec![0.0; n_nodes];
        s_sys.solve_into(&mut s, &mut self.scratch)?;

        for (n, rhs) in self.i_sys.rhs.iter_mut().enumerate() {
            *rhs = state.i[n] + self.dt * s[n] * force[n];
        }
        let mut i = vec![0.0; n_nodes];
        self.i_sys.solve_into(&mut i, &mut self.scratch)?;

        fill_v_rhs(&mut self.v_sys, &state.v, &i, self.params.alpha, self.dt);
        let mut v = vec![0.0; n_nodes];
        self.v_sys.solve_into(&mut v, &mut self.scratch)?;

        Ok(FieldState {
            t: state.t + self.dt,
            s,
            i,
            v,
        })
    }
}

/// One NSFD step from scratch. Prefer [`NsfdStepper`] inside loops.
pub fn nsfd_step(
    state: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    dt: f64,
    dx: f64,
) -> Result<FieldState, SolverError> {
    NsfdStepper::new(params, inc, state.len(), dt, dx)?.step(state)
}

/// Centred second difference with mirrored ghost nodes at both ends.
fn neumann_laplacian(x: &[f64], dx: f64) -> Vec<f64> {
    let n = x.len();
    let inv = 1.0 / (dx * dx);
    (0..n)
        .map(|k| {
            let left = if k == 0 { x[0] } else { x[k - 1] };
            let right = if k + 1 == n { x[n - 1] } else { x[k + 1] };
            (left - 2.0 * x[k] + right) * inv
        })
        .collect()
}

/// Forward-Euler step of the same semi-discrete system. No positivity
/// guarantee; negative entries are returned as-is, non-finite ones are errors.
pub fn sfd_explicit_step(
    state: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    dt: f64,
    dx: f64,
) -> Result<FieldState, SolverError> {
    let lap_s = neumann_laplacian(&state.s, dx);
    let lap_i = neumann_laplacian(&state.i, dx);
    let lap_v = neumann_laplacian(&state.v, dx);
    let n_nodes = state.len();
    let mut next = FieldState {
        t: state.t + dt,
        s: Vec::with_capacity(n_nodes),
        i: Vec::with_capacity(n_nodes),
        v: Vec::with_capacity(n_nodes),
    };
    for n in 0..n_nodes {
        let (s, i, v) = (state.s[n], state.i[n], state.v[n]);
        let infection = s * inc.force(i, v);
        next.s
            .push(s + dt * (params.d1 * lap_s[n] + params.lambda - infection - params.d_s * s));
        next.i
            .push(i + dt * (params.d2 * lap_i[n] + infection - params.infected_loss() * i));
        next.v
            .push(v + dt * (params.d3 * lap_v[n] + params.alpha * i - params.d_v * v));
    }
    if let Some((field, node)) = next.first_non_finite() {
        return Err(SolverError::NonFiniteState { field, node });
    }
    Ok(next)
}
