//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! Three operations: threshold analysis (R0 and steady states), a
//! simulation on [0, 50] returning final profiles and per-step series, and
//! the PRCC tornado of R0. Errors cross the boundary as strings.

use viral_nsfd::diagnostics::{LyapunovFunctional, LyapunovSeries};
use viral_nsfd::model::{compute_r0, endemic_equilibrium, Incidence};
use viral_nsfd::sensitivity::{r0_sensitivity_study, SensitivitySpec};
use viral_nsfd::solver::{simulate_observed, SimulationSettings, Verdict};
use viral_nsfd::{FieldState, Grid1D, IncidenceFunctions, ModelParams, Scheme, StepParams};
use wasm_bindgen::prelude::*;

const DOMAIN: (f64, f64) = (0.0, 50.0);
const CELLS: usize = 100;
const MAX_STEPS: f64 = 20_000.0;

#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInput {
    pub lambda: f64,
    pub d_s: f64,
    pub d_i: f64,
    pub d_v: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Common value of D1 = D2 = D3.
    pub diffusion: f64,
    /// Saturating β·u/(1 + u) incidence instead of bilinear.
    pub saturating: bool,
}

impl Default for ModelInput {
    fn default() -> Self {
        Self::new()
    }
}

#[wasm_bindgen]
impl ModelInput {
    /// Reference rates with β1 = β2 = 3e-10 (persistent infection).
    #[wasm_bindgen(constructor)]
    pub fn new() -> ModelInput {
        let p = ModelParams::reference();
        ModelInput {
            lambda: p.lambda,
            d_s: p.d_s,
            d_i: p.d_i,
            d_v: p.d_v,
            gamma: p.gamma,
            alpha: p.alpha,
            beta1: 3e-10,
            beta2: 3e-10,
            diffusion: 1.0,
            saturating: false,
        }
    }
}

impl ModelInput {
    fn params(&self) -> ModelParams {
        ModelParams {
            lambda: self.lambda,
            d_s: self.d_s,
            d_i: self.d_i,
            d_v: self.d_v,
            gamma: self.gamma,
            alpha: self.alpha,
            d1: self.diffusion,
            d2: self.diffusion,
            d3: self.diffusion,
        }
    }

    fn incidence(&self) -> IncidenceFunctions {
        let make = if self.saturating {
            Incidence::saturating
        } else {
            Incidence::linear
        };
        IncidenceFunctions::new(make(self.beta1), make(self.beta2))
    }

    fn checked(&self) -> Result<(ModelParams, IncidenceFunctions), String> {
        let params = self.params();
        params.validate().map_err(|e| e.to_string())?;
        let inc = self.incidence();
        inc.validate().map_err(|e| e.to_string())?;
        Ok((params, inc))
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Analysis {
    r0: f64,
    r01: f64,
    r02: f64,
    s0: f64,
    endemic: Option<[f64; 3]>,
}

#[wasm_bindgen]
impl Analysis {
    #[wasm_bindgen(getter)]
    pub fn r0(&self) -> f64 {
        self.r0
    }

    #[wasm_bindgen(getter)]
    pub fn r01(&self) -> f64 {
        self.r01
    }

    #[wasm_bindgen(getter)]
    pub fn r02(&self) -> f64 {
        self.r02
    }

    #[wasm_bindgen(getter)]
    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// `[S*, I*, V*]`, or empty when R0 ≤ 1.
    pub fn endemic(&self) -> Vec<f64> {
        self.endemic.map(|e| e.to_vec()).unwrap_or_default()
    }
}

#[wasm_bindgen]
pub fn analyze(input: &ModelInput) -> Result<Analysis, String> {
    let (params, inc) = input.checked()?;
    let r0 = compute_r0(&params, &inc).map_err(|e| e.to_string())?;
    let endemic = endemic_equilibrium(&params, &inc).map_err(|e| e.to_string())?;
    Ok(Analysis {
        r0: r0.total,
        r01: r0.r01,
        r02: r0.r02,
        s0: params.s0(),
        endemic: endemic.map(|e| [e.s, e.i, e.v]),
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct SimulationView {
    nodes: Vec<f64>,
    final_state: FieldState,
    times: Vec<f64>,
    mean_i: Vec<f64>,
    lyapunov: Vec<f64>,
    lyapunov_kind: String,
    verdict: String,
    steps: usize,
    first_nonpositive: Option<usize>,
    failure: Option<String>,
}

#[wasm_bindgen]
impl SimulationView {
    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.clone()
    }

    pub fn s(&self) -> Vec<f64> {
        self.final_state.s.clone()
    }

    pub fn i(&self) -> Vec<f64> {
        self.final_state.i.clone()
    }

    pub fn v(&self) -> Vec<f64> {
        self.final_state.v.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn final_time(&self) -> f64 {
        self.final_state.t
    }

    /// Time of each recorded step, starting at 0.
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    /// Spatial mean of I at each recorded step.
    pub fn mean_i(&self) -> Vec<f64> {
        self.mean_i.clone()
    }

    /// Lyapunov values; shorter than `times` if a state left the domain.
    pub fn lyapunov(&self) -> Vec<f64> {
        self.lyapunov.clone()
    }

    /// "L" (disease-free functional) or "H" (endemic functional).
    #[wasm_bindgen(getter)]
    pub fn lyapunov_kind(&self) -> String {
        self.lyapunov_kind.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// First step with a negative entry, or -1.
    #[wasm_bindgen(getter)]
    pub fn first_nonpositive(&self) -> i64 {
        self.first_nonpositive.map_or(-1, |k| k as i64)
    }

    #[wasm_bindgen(getter)]
    pub fn failure(&self) -> Option<String> {
        self.failure.clone()
    }
}

/// Runs from S = 1e7, I = V = 100·e^(x/10) with M = 100 cells until the
/// steady residual drops below 1e-10 or `horizon` is reached.
#[wasm_bindgen]
pub fn simulate(input: &ModelInput, dt: f64, horizon: f64, explicit: bool) -> Result<SimulationView, String> {
    let (params, inc) = input.checked()?;
    if !(dt.is_finite() && dt > 0.0 && horizon.is_finite() && horizon >= dt) {
        return Err("need dt > 0 and horizon >= dt".into());
    }
    if horizon / dt > MAX_STEPS {
        return Err(format!("at most {MAX_STEPS} steps per run"));
    }
    let grid = Grid1D::new(DOMAIN.0, DOMAIN.1, CELLS).map_err(|e| e.to_string())?;
    let scheme = if explicit { Scheme::ExplicitSfd } else { Scheme::Nsfd };
    let step = StepParams::new(dt, scheme).map_err(|e| e.to_string())?;
    let settings = SimulationSettings::new(step, horizon).with_snapshot_every(horizon);
    let initial = FieldState::from_fn(
        &grid,
        |_| 1e7,
        |x| 100.0 * (x / 10.0).exp(),
        |x| 100.0 * (x / 10.0).exp(),
    );
    let functional = LyapunovFunctional::select(&params, &inc).ok();
    let mut series = functional.as_ref().map(|f| LyapunovSeries::new(f.kind()));
    let mut lyapunov_live = true;
    let mut times = Vec::new();
    let mut mean_i = Vec::new();
    let result = simulate_observed(&initial, &params, &inc, &grid, &settings, |_, state| {
        times.push(state.t);
        mean_i.push(state.i.iter().sum::<f64>() / state.len() as f64);
        if let (Some(f), Some(ser), true) = (&functional, series.as_mut(), lyapunov_live) {
            match f.eval(state, &params, &inc, dt) {
                Ok(v) => ser.push(state.t, v),
                Err(_) => lyapunov_live = false,
            }
        }
    });
    let (traj, failure) = match result {
        Ok(t) => (t, None),
        Err(f) => {
            let msg = format!("step {}: {}", f.step, f.error);
            (*f.partial.ok_or(msg.clone())?, Some(msg))
        }
    };
    let verdict = match (traj.report.verdict, &failure) {
        (_, Some(_)) | (Verdict::NotConverged, _) => "NotConverged",
        (Verdict::DiseaseFree, None) => "DiseaseFree",
        (Verdict::Endemic, None) => "Endemic",
    };
    Ok(SimulationView {
        nodes: grid.nodes().collect(),
        final_state: traj.final_state().clone(),
        times,
        mean_i,
        lyapunov: series.as_ref().map(|s| s.values.clone()).unwrap_or_default(),
        lyapunov_kind: functional
            .map(|f| {
                if f.kind() == viral_nsfd::EquilibriumKind::DiseaseFree {
                    "L"
                } else {
                    "H"
                }
            })
            .unwrap_or("")
            .to_string(),
        verdict: verdict.to_string(),
        steps: traj.report.steps,
        first_nonpositive: traj.report.first_nonpositive.map(|(k, _)| k),
        failure,
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct TornadoView {
    names: Vec<String>,
    prcc: Vec<f64>,
}

#[wasm_bindgen]
impl TornadoView {
    /// Parameter names sorted by decreasing |PRCC|.
    pub fn names(&self) -> Vec<String> {
        self.names.clone()
    }

    pub fn prcc(&self) -> Vec<f64> {
        self.prcc.clone()
    }
}

/// PRCC of R0 over beta1, beta2, alpha, d_V, gamma, d_I, each drawn from a
/// zero-truncated normal with sd = `sd_fraction`·nominal.
#[wasm_bindgen]
pub fn tornado(input: &ModelInput, samples: usize, sd_fraction: f64, seed: u32) -> Result<TornadoView, String> {
    let (params, inc) = input.checked()?;
    let spec = SensitivitySpec::around_nominal(&params, &inc, sd_fraction, samples, u64::from(seed));
    let study = r0_sensitivity_study(&spec, &params, &inc).map_err(|e| e.to_string())?;
    Ok(TornadoView {
        names: study.tornado.iter().map(|r| r.parameter.clone()).collect(),
        prcc: study.tornado.iter().map(|r| r.prcc).collect(),
    })
}
