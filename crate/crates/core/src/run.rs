//! Experiment drivers behind the CLI subcommands. Each writes only inside
//! the output directory it is given.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::thread;

use crate::config::RunConfig;
use crate::diagnostics::{check_monotone, LyapunovFunctional, LyapunovSeries};
use crate::error::{Error, SolverError};
use crate::model::{
    compute_r0, disease_free_equilibrium, endemic_equilibrium, residuals, IncidenceFunctions, ModelParams,
};
use crate::output::{write_lyapunov_csv, write_tornado_csv, write_trajectory_csv, RunSummary};
use crate::plot::{tornado_svg, LineChart};
use crate::sensitivity::{r0_sensitivity_study, SensitivitySpec, SensitivityStudy, SIGNIFICANCE_THRESHOLD};
use crate::solver::{
    simulate, simulate_observed, ConvergenceReport, FieldState, Scheme, SimulationFailure, Trajectory,
};

/// Slack on the monotonicity check of the Lyapunov series.
pub const LYAPUNOV_SLACK: f64 = 1e-9;

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn checked(config: &RunConfig) -> Result<(ModelParams, IncidenceFunctions), Error> {
    config.params.validate()?;
    let inc = config.incidence();
    inc.validate()?;
    Ok((config.params, inc))
}

#[derive(Debug)]
pub struct SimulateOutcome {
    pub summary: RunSummary,
    /// Full trajectory, or the part computed before a failure.
    pub trajectory: Option<Trajectory>,
    pub lyapunov: Option<LyapunovSeries>,
    pub files: Vec<PathBuf>,
    pub exit_code: i32,
}

fn profile_svg(state: &FieldState, grid_nodes: &[f64], field: usize) -> String {
    let (name, values) = state.fields()[field];
    LineChart::new(format!("{name} at t = {}", state.t), "x", name)
        .series(name, grid_nodes.iter().copied().zip(values.iter().copied()).collect())
        .render()
}

/// Runs one simulation and writes trajectory.csv, lyapunov.csv,
/// summary.txt and S.svg / I.svg / V.svg. A solver failure still produces
/// the summary (with the reason) and exit code 2.
pub fn run_simulate(config: &RunConfig, out_dir: &Path) -> Result<SimulateOutcome, Error> {
    let (params, inc) = checked(config)?;
    let r0 = compute_r0(&params, &inc)?;
    let disease_free = disease_free_equilibrium(&params)?;
    let endemic = endemic_equilibrium(&params, &inc)?;
    fs::create_dir_all(out_dir)?;

    let mut lyapunov_note = None;
    let functional = match LyapunovFunctional::select(&params, &inc) {
        Ok(f) => Some(f),
        Err(e) => {
            lyapunov_note = Some(e.to_string());
            None
        }
    };
    let mut series = functional.as_ref().map(|f| LyapunovSeries::new(f.kind()));
    let dt = config.dt;
    let result = simulate_observed(
        &config.initial_state(),
        &params,
        &inc,
        &config.grid,
        &config.settings(),
        |k, state| {
            let (Some(f), Some(ser)) = (&functional, series.as_mut()) else {
                return;
            };
            if lyapunov_note.is_some() {
                return;
            }
            match f.eval(state, &params, &inc, dt) {
                Ok(v) => ser.push(state.t, v),
                Err(e) => lyapunov_note = Some(format!("stopped at step {k}: {e}")),
            }
        },
    );
    let (trajectory, failure) = match result {
        Ok(t) => (Some(t), None),
        Err(SimulationFailure {
            partial,
            step,
            time,
            error,
        }) => (partial.map(|t| *t), Some(format!("step {step} (t = {time}): {error}"))),
    };

    let mut files = Vec::new();
    if let Some(traj) = &trajectory {
        let path = out_dir.join("trajectory.csv");
        write_trajectory_csv(create(&path)?, &config.grid, &traj.snapshots)?;
        files.push(path);
        let nodes: Vec<f64> = config.grid.nodes().collect();
        for (k, name) in ["S", "I", "V"].iter().enumerate() {
            let path = out_dir.join(format!("{name}.svg"));
            fs::write(&path, profile_svg(traj.final_state(), &nodes, k))?;
            files.push(path);
        }
    }
    let lyapunov = match &series {
        Some(ser) if !ser.is_empty() => {
            let path = out_dir.join("lyapunov.csv");
            write_lyapunov_csv(create(&path)?, ser)?;
            files.push(path);
            Some((ser.kind, check_monotone(ser, LYAPUNOV_SLACK)?))
        }
        _ => None,
    };

    let summary = RunSummary {
        r0,
        disease_free,
        endemic,
        scheme: config.scheme,
        dt,
        grid: config.grid,
        report: trajectory.as_ref().map(|t| t.report.clone()),
        lyapunov,
        lyapunov_note,
        failure,
    };
    let path = out_dir.join("summary.txt");
    fs::write(&path, summary.render())?;
    files.push(path);
    let exit_code = if summary.failure.is_some() { 2 } else { 0 };
    Ok(SimulateOutcome {
        summary,
        trajectory,
        lyapunov: series,
        files,
        exit_code,
    })
}

#[derive(Debug)]
pub struct SensitivityOutcome {
    pub study: SensitivityStudy,
    pub files: Vec<PathBuf>,
}

pub fn sensitivity_spec(config: &RunConfig) -> SensitivitySpec {
    SensitivitySpec::around_nominal(
        &config.params,
        &config.incidence(),
        config.sensitivity.sd_fraction,
        config.sensitivity.samples,
        config.seed,
    )
}

/// PRCC of R0 over the six rate parameters; writes tornado.csv and tornado.svg.
pub fn run_sensitivity(config: &RunConfig, out_dir: &Path) -> Result<SensitivityOutcome, Error> {
    let (params, inc) = checked(config)?;
    let study = r0_sensitivity_study(&sensitivity_spec(config), &params, &inc)?;
    fs::create_dir_all(out_dir)?;
    let csv = out_dir.join("tornado.csv");
    write_tornado_csv(create(&csv)?, &study.tornado)?;
    let svg = out_dir.join("tornado.svg");
    fs::write(&svg, tornado_svg(&study.tornado, SIGNIFICANCE_THRESHOLD, "PRCC of R0"))?;
    Ok(SensitivityOutcome {
        study,
        files: vec![csv, svg],
    })
}

/// `|a - b| / max(|a|, |b|, floor)`; zero when both vanish.
pub fn relative_discrepancy(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Node-wise relative discrepancy of two final states, per field. Entries
/// are compared against a floor of 1e-9 times the larger sup norm so that
/// components decaying to zero do not divide by round-off.
pub fn state_discrepancy(a: &FieldState, b: &FieldState) -> Vec<[f64; 3]> {
    let floor = 1e-9 * a.sup_norm().max(b.sup_norm());
    (0..a.len())
        .map(|n| {
            [
                relative_discrepancy(a.s[n], b.s[n], floor),
                relative_discrepancy(a.i[n], b.i[n], floor),
                relative_discrepancy(a.v[n], b.v[n], floor),
            ]
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DiffusionComparison {
    pub d_low: f64,
    pub d_high: f64,
    pub low: ConvergenceReport,
    pub high: ConvergenceReport,
    /// Per node, per field (S, I, V).
    pub nodes: Vec<[f64; 3]>,
    pub max_discrepancy: f64,
}

impl DiffusionComparison {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (d, r) in [(self.d_low, &self.low), (self.d_high, &self.high)] {
            let _ = writeln!(
                s,
                "D = {d}: verdict {}, steps {}, distance {:.3e}",
                r.verdict, r.steps, r.distance
            );
        }
        let _ = writeln!(s, "max relative discrepancy = {:.6e}", self.max_discrepancy);
        s
    }
}

fn run_pair(a: &RunConfig, b: &RunConfig) -> [Result<Trajectory, SimulationFailure>; 2] {
    let go = |c: &RunConfig| -> Result<Trajectory, SimulationFailure> {
        let (params, inc) = checked(c).map_err(|e| match e {
            Error::Model(m) => SimulationFailure::from(SolverError::Model(m)),
            other => SimulationFailure::from(SolverError::InvalidStep(other.to_string())),
        })?;
        simulate(&c.initial_state(), &params, &inc, &c.grid, &c.settings())
    };
    thread::scope(|scope| {
        let h = scope.spawn(|| go(b));
        let first = go(a);
        [first, h.join().expect("simulation thread panicked")]
    })
}

/// Runs D1 = D2 = D3 = `d_low` and `d_high` concurrently and compares the
/// final states node by node. Writes compare-diffusion.{csv,txt}.
pub fn run_compare_diffusion(
    config: &RunConfig,
    d_low: f64,
    d_high: f64,
    out_dir: &Path,
) -> Result<DiffusionComparison, Error> {
    let mut low = config.clone();
    low.params = config.params.with_diffusion(d_low, d_low, d_low);
    let mut high = config.clone();
    high.params = config.params.with_diffusion(d_high, d_high, d_high);
    checked(&low)?;
    checked(&high)?;
    let [a, b] = run_pair(&low, &high);
    let (a, b) = (
        a.map_err(|f| Error::Solver(f.error))?,
        b.map_err(|f| Error::Solver(f.error))?,
    );
    let nodes = state_discrepancy(a.final_state(), b.final_state());
    let max_discrepancy = nodes.iter().flatten().copied().fold(0.0, f64::max);
    let cmp = DiffusionComparison {
        d_low,
        d_high,
        low: a.report,
        high: b.report,
        nodes,
        max_discrepancy,
    };

    fs::create_dir_all(out_dir)?;
    let mut csv = String::from("x,S,I,V\n");
    for (n, d) in cmp.nodes.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            config.grid.node(n),
            d[0],
            d[1],
            d[2]
        );
    }
    fs::write(out_dir.join("compare-diffusion.csv"), csv)?;
    fs::write(out_dir.join("compare-diffusion.txt"), cmp.render())?;
    Ok(cmp)
}

#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub scheme: Scheme,
    pub report: Option<ConvergenceReport>,
    pub failure: Option<String>,
}

impl SchemeRun {
    fn from_result(scheme: Scheme, r: Result<Trajectory, SimulationFailure>) -> Self {
        match r {
            Ok(t) => SchemeRun {
                scheme,
                report: Some(t.report),
                failure: None,
            },
            Err(f) => SchemeRun {
                scheme,
                failure: Some(format!("step {} (t = {}): {}", f.step, f.time, f.error)),
                report: f.partial.map(|t| t.report),
            },
        }
    }

    pub fn first_nonpositive(&self) -> Option<(usize, f64)> {
        self.report.as_ref().and_then(|r| r.first_nonpositive)
    }
}

#[derive(Debug, Clone)]
pub struct SchemeComparison {
    pub nsfd: SchemeRun,
    pub sfd: SchemeRun,
}

impl SchemeComparison {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for run in [&self.nsfd, &self.sfd] {
            let _ = write!(s, "{}: ", run.scheme);
            match &run.report {
                Some(r) => {
                    let _ = write!(s, "verdict {}, steps {}", r.verdict, r.steps);
                }
                None => s.push_str("no steps taken"),
            }
            match run.first_nonpositive() {
                Some((k, t)) => {
                    let _ = write!(s, ", positivity violated at step {k} (t = {t})");
                }
                None => s.push_str(", positivity preserved"),
            }
            if let Some(f) = &run.failure {
                let _ = write!(s, ", failed at {f}");
            }
            s.push('\n');
        }
        s
    }
}

/// Same configuration under the NSFD scheme and the explicit standard
/// scheme, run concurrently. Writes compare-sfd.txt.
pub fn run_compare_sfd(config: &RunConfig, out_dir: &Path) -> Result<SchemeComparison, Error> {
    checked(config)?;
    let mut nsfd = config.clone();
    nsfd.scheme = Scheme::Nsfd;
    let mut sfd = config.clone();
    sfd.scheme = Scheme::ExplicitSfd;
    let [a, b] = run_pair(&nsfd, &sfd);
    let cmp = SchemeComparison {
        nsfd: SchemeRun::from_result(Scheme::Nsfd, a),
        sfd: SchemeRun::from_result(Scheme::ExplicitSfd, b),
    };
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("compare-sfd.txt"), cmp.render())?;
    Ok(cmp)
}

pub fn r0_report(config: &RunConfig) -> Result<String, Error> {
    let (params, inc) = checked(config)?;
    let r0 = compute_r0(&params, &inc)?;
    Ok(format!(
        "R0 = {:.6}\nR01 (virus-to-cell) = {:.6}\nR02 (cell-to-cell) = {:.6}\n",
        r0.total, r0.r01, r0.r02
    ))
}

pub fn equilibria_report(config: &RunConfig) -> Result<String, Error> {
    let (params, inc) = checked(config)?;
    let mut s = String::new();
    let e0 = disease_free_equilibrium(&params)?;
    let _ = writeln!(s, "E0: S = {:.10e}, I = {:.10e}, V = {:.10e}", e0.s, e0.i, e0.v);
    match endemic_equilibrium(&params, &inc)? {
        Some(e) => {
            let r = residuals(&e, &params, &inc);
            let _ = writeln!(s, "E*: S = {:.10e}, I = {:.10e}, V = {:.10e}", e.s, e.i, e.v);
            let _ = writeln!(s, "E* residuals: {:.3e}, {:.3e}, {:.3e}", r[0], r[1], r[2]);
        }
        None => s.push_str("E*: none (R0 <= 1)\n"),
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrepancy_floor_handles_zero() {
        assert_eq!(relative_discrepancy(0.0, 0.0, 0.0), 0.0);
        assert_eq!(relative_discrepancy(1e-20, 0.0, 1e-9), 1e-11);
        assert!((relative_discrepancy(2.0, 1.0, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reports_name_the_ratio() {
        let a = RunConfig::scenario_a();
        assert!(r0_report(&a).unwrap().starts_with("R0 = 0.210000"));
        assert!(equilibria_report(&a).unwrap().contains("E*: none"));
        let b = RunConfig::scenario_b();
        assert!(equilibria_report(&b).unwrap().contains("E*: S = 7.93650"));
    }
}
