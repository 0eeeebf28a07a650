//! Independent oracles shared by the integration suites. Nothing here calls
//! into the solver paths being checked.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use viral_nsfd::solver::TridiagonalSystem;
use viral_nsfd::{FieldState, Grid1D, IncidenceFunctions, ModelParams};

/// Dense LU solve of the tridiagonal system.
pub fn dense_solve(sys: &TridiagonalSystem) -> Vec<f64> {
    let n = sys.len();
    let mut a = DMatrix::zeros(n, n);
    for k in 0..n {
        a[(k, k)] = sys.diag[k];
        if k > 0 {
            a[(k, k - 1)] = sys.sub[k];
        }
        if k + 1 < n {
            a[(k, k + 1)] = sys.sup[k];
        }
    }
    let b = DVector::from_column_slice(&sys.rhs);
    a.lu()
        .solve(&b)
        .expect("dominant matrix is nonsingular")
        .iter()
        .copied()
        .collect()
}

/// Strictly diagonally dominant system with mixed-sign entries.
pub fn random_dominant_system(rng: &mut ChaCha8Rng, n: usize) -> TridiagonalSystem {
    let sub: Vec<f64> = (0..n)
        .map(|k| if k == 0 { 0.0 } else { rng.random_range(-1.0..1.0) })
        .collect();
    let sup: Vec<f64> = (0..n)
        .map(|k| if k + 1 == n { 0.0 } else { rng.random_range(-1.0..1.0) })
        .collect();
    let diag = (0..n)
        .map(|k| {
            let off = sub[k].abs() + sup[k].abs();
            let mag = off + rng.random_range(0.05..2.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let rhs = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
    TridiagonalSystem::new(sub, diag, sup, rhs)
}

/// Implicit update of the diffusion-free three-equation system:
/// S first with incidence at the old level, then I, then V.
pub fn scalar_implicit_step(
    p: &ModelParams,
    inc: &IncidenceFunctions,
    (s, i, v): (f64, f64, f64),
    dt: f64,
) -> (f64, f64, f64) {
    let force = inc.f(v) + inc.g(i);
    let s_new = (s + p.lambda * dt) / (1.0 + dt * (force + p.d_s));
    let i_new = (i + dt * s_new * force) / (1.0 + dt * (p.gamma + p.d_i));
    let v_new = (v + p.alpha * dt * i_new) / (1.0 + dt * p.d_v);
    (s_new, i_new, v_new)
}

/// Σ_n (S_n + I_n).
pub fn total_cells(state: &FieldState) -> f64 {
    state.s.iter().chain(&state.i).sum()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

pub struct PositivityCase {
    pub params: ModelParams,
    pub inc: IncidenceFunctions,
    pub grid: Grid1D,
    pub dt: f64,
    pub initial: FieldState,
}

/// Random parameters, incidence, step sizes and positive initial data.
/// Loss rates are capped so 500 steps of decay cannot underflow to zero.
pub fn positivity_case(rng: &mut ChaCha8Rng) -> PositivityCase {
    let params = ModelParams {
        lambda: log_uniform(rng, 1e2, 1e7),
        d_s: log_uniform(rng, 0.01, 1.0),
        d_i: log_uniform(rng, 0.01, 0.15),
        d_v: log_uniform(rng, 0.5, 10.0),
        gamma: log_uniform(rng, 0.001, 0.1),
        alpha: log_uniform(rng, 1.0, 500.0),
        d1: log_uniform(rng, 0.01, 100.0),
        d2: log_uniform(rng, 0.01, 100.0),
        d3: log_uniform(rng, 0.01, 100.0),
    };
    let (b1, b2) = (log_uniform(rng, 1e-13, 1e-8), log_uniform(rng, 1e-13, 1e-8));
    let inc = if rng.random_bool(0.5) {
        IncidenceFunctions::linear(b1, b2)
    } else {
        IncidenceFunctions::saturating(b1, b2)
    };
    let dt = log_uniform(rng, 1e-3, 10.0);
    let dx = rng.random_range(0.1..5.0);
    let m = rng.random_range(2..=40);
    let grid = Grid1D::new(0.0, dx * m as f64, m).unwrap();
    let n = grid.n_nodes();
    let s = (0..n).map(|_| log_uniform(rng, 1e2, 1e8)).collect();
    let i = (0..n).map(|_| log_uniform(rng, 1e-2, 1e6)).collect();
    let v = (0..n).map(|_| log_uniform(rng, 1e-2, 1e8)).collect();
    PositivityCase {
        params,
        inc,
        grid,
        dt,
        initial: FieldState { t: 0.0, s, i, v },
    }
}
