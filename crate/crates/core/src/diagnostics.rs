//! Discrete Lyapunov functionals of the NSFD scheme.
//!
//! Both functionals are built from the Volterra kernel Φ(x) = x - 1 - ln x
//! and carry the 1/dt prefactor, so values are only comparable between runs
//! sharing the same dt.

use crate::error::DiagnosticsError;
use crate::model::{compute_r0, endemic_equilibrium, Equilibrium, EquilibriumKind, IncidenceFunctions, ModelParams};
use crate::solver::FieldState;

/// Φ(x) = x - 1 - ln x for x > 0.
pub fn volterra_phi(x: f64) -> Result<f64, DiagnosticsError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(DiagnosticsError::DomainError(x));
    }
    Ok(phi(x))
}

/// Φ without the domain check. Near x = 1 the direct formula cancels
/// catastrophically, so a short series in u = x - 1 is used there.
#[inline]
fn phi(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < 1e-2 {
        // u²/2 - u³/3 + u⁴/4 - ... ; truncation error below u¹¹/11
        let mut acc = 0.0;
        for j in (2..=10).rev() {
            let c = if j % 2 == 0 { 1.0 } else { -1.0 } / j as f64;
            acc = acc * u + c;
        }
        acc * u * u
    } else {
        u - u.ln_1p()
    }
}

/// Sum over nodes of Φ(x_n / x*) scaled by `weight`; rejects nonpositive entries.
fn weighted_phi_sum(values: &[f64], target: f64, weight: f64) -> Result<f64, DiagnosticsError> {
    let mut total = 0.0;
    for &x in values {
        if !(x > 0.0) {
            return Err(DiagnosticsError::DomainError(x));
        }
        total += phi(x / target);
    }
    Ok(weight * total)
}

/// Constants of the disease-free functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiseaseFreeConstants {
    pub s0: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl DiseaseFreeConstants {
    pub fn new(params: &ModelParams, inc: &IncidenceFunctions) -> Result<Self, DiagnosticsError> {
        params.validate()?;
        let s0 = params.s0();
        let rho0 = s0 * inc.cell.slope_at_zero();
        let rho1 = (params.infected_loss() - rho0) / params.alpha;
        if !(rho1 > 0.0) {
            return Err(DiagnosticsError::ConstantsUndefined { rho1 });
        }
        Ok(DiseaseFreeConstants {
            s0,
            rho0,
            rho1,
            rho2: params.d_v,
        })
    }
}

/// L^k = Σ_n (1/dt)[S0 Φ(S_n/S0) + (1 + ρ0 dt) I_n + ρ1 (1 + ρ2 dt) V_n].
pub fn lyapunov_disease_free(
    state: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    dt: f64,
) -> Result<f64, DiagnosticsError> {
    let c = DiseaseFreeConstants::new(params, inc)?;
    disease_free_value(state, &c, dt)
}

fn disease_free_value(state: &FieldState, c: &DiseaseFreeConstants, dt: f64) -> Result<f64, DiagnosticsError> {
    let s_part = weighted_phi_sum(&state.s, c.s0, c.s0)?;
    let i_sum: f64 = state.i.iter().sum();
    let v_sum: f64 = state.v.iter().sum();
    Ok((s_part + (1.0 + c.rho0 * dt) * i_sum + c.rho1 * (1.0 + c.rho2 * dt) * v_sum) / dt)
}

/// H^k = Σ_n (1/dt)[S* Φ(S_n/S*) + (I* + S* g(I*) dt) Φ(I_n/I*)
///                   + (S* f(V*)/d_V)(1 + d_V dt) Φ(V_n/V*)].
pub fn lyapunov_endemic(
    state: &FieldState,
    params: &ModelParams,
    inc: &IncidenceFunctions,
    e_star: &Equilibrium,
    dt: f64,
) -> Result<f64, DiagnosticsError> {
    for x in e_star.components() {
        if !(x > 0.0) {
            return Err(DiagnosticsError::DomainError(x));
        }
    }
    let (s, i, v) = (e_star.s, e_star.i, e_star.v);
    let s_part = weighted_phi_sum(&state.s, s, s)?;
    let i_part = weighted_phi_sum(&state.i, i, i + s * inc.g(i) * dt)?;
    let v_part = weighted_phi_sum(&state.v, v, s * inc.f(v) / params.d_v * (1.0 + params.d_v * dt))?;
    Ok((s_part + i_part + v_part) / dt)
}

/// The functional matching the threshold regime of a parameter set.
#[derive(Debug, Clone)]
pub enum LyapunovFunctional {
    DiseaseFree(DiseaseFreeConstants),
    Endemic(Equilibrium),
}

impl LyapunovFunctional {
    /// L^k when R0 ≤ 1, H^k when R0 > 1.
    pub fn select(params: &ModelParams, inc: &IncidenceFunctions) -> Result<Self, DiagnosticsError> {
        let r0 = compute_r0(params, inc)?;
        if r0.total <= 1.0 {
            Ok(LyapunovFunctional::DiseaseFree(DiseaseFreeConstants::new(params, inc)?))
        } else {
            let e = endemic_equilibrium(params, inc)?.expect("endemic state exists for R0 > 1");
            Ok(LyapunovFunctional::Endemic(e))
        }
    }

    pub fn kind(&self) -> EquilibriumKind {
        match self {
            LyapunovFunctional::DiseaseFree(_) => EquilibriumKind::DiseaseFree,
            LyapunovFunctional::Endemic(_) => EquilibriumKind::Endemic,
        }
    }

    pub fn eval(
        &self,
        state: &FieldState,
        params: &ModelParams,
        inc: &IncidenceFunctions,
        dt: f64,
    ) -> Result<f64, DiagnosticsError> {
        match self {
            LyapunovFunctional::DiseaseFree(c) => disease_free_value(state, c, dt),
            LyapunovFunctional::Endemic(e) => lyapunov_endemic(state, params, inc, e, dt),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: EquilibriumKind,
}

impl LyapunovSeries {
    pub fn new(kind: EquilibriumKind) -> Self {
        LyapunovSeries {
            times: Vec::new(),
            values: Vec::new(),
            kind,
        }
    }

    pub fn push(&mut self, t: f64, value: f64) {
        self.times.push(t);
        self.values.push(value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const MONOTONE_ABS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub passed: bool,
    /// Indices k + 1 where the value rose above the allowance.
    pub violations: Vec<usize>,
    /// Index and size of the largest excess over the allowance.
    pub worst: Option<(usize, f64)>,
}

/// Flags every k where `values[k+1] > values[k]·(1 + slack) + 1e-12`.
pub fn check_monotone(series: &LyapunovSeries, slack: f64) -> Result<MonotoneReport, DiagnosticsError> {
    if series.is_empty() {
        return Err(DiagnosticsError::EmptySeries);
    }
    let mut violations = Vec::new();
    let mut worst: Option<(usize, f64)> = None;
    for (k, pair) in series.values.windows(2).enumerate() {
        let allowed = pair[0] * (1.0 + slack) + MONOTONE_ABS_FLOOR;
        let excess = pair[1] - allowed;
        if excess > 0.0 || pair[1].is_nan() {
            violations.push(k + 1);
            if worst.is_none_or(|(_, w)| excess > w) {
                worst = Some((k + 1, excess));
            }
        }
    }
    Ok(MonotoneReport {
        passed: violations.is_empty(),
        violations,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::disease_free_equilibrium;
    use proptest::prelude::*;

    fn scenario(beta: f64) -> (ModelParams, IncidenceFunctions) {
        (ModelParams::reference(), IncidenceFunctions::linear(beta, beta))
    }

    #[test]
    fn phi_values() {
        assert_eq!(volterra_phi(1.0).unwrap(), 0.0);
        assert!((volterra_phi(2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!((volterra_phi(2.0).unwrap() - 0.30685).abs() < 1e-5);
        assert!((volterra_phi(std::f64::consts::E).unwrap() - 0.71828).abs() < 1e-5);
        assert!(matches!(volterra_phi(0.0), Err(DiagnosticsError::DomainError(_))));
        assert!(volterra_phi(-3.0).is_err());
    }

    #[test]
    fn phi_series_matches_direct_formula() {
        for &x in &[0.991, 0.995, 0.9999, 1.0001, 1.004, 1.0099] {
            let direct = x - 1.0 - f64::ln(x);
            assert!((phi(x) - direct).abs() <= 1e-12 * direct.max(1e-20), "{x}");
        }
        // tiny deviations resolve to u²/2 instead of rounding noise
        let u = 1e-9;
        assert!((phi(1.0 + u) / (0.5 * u * u) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn disease_free_functional_examples() {
        let (p, inc) = scenario(5e-12);
        let e0 = disease_free_equilibrium(&p).unwrap();
        let at_e0 = FieldState::uniform(11, e0.s, 0.0, 0.0);
        assert_eq!(lyapunov_disease_free(&at_e0, &p, &inc, 1.0).unwrap(), 0.0);

        let dt = 0.5;
        let c = 3.0;
        let st = FieldState::uniform(11, e0.s, c, 0.0);
        let rho0 = e0.s * 5e-12;
        let expected = 11.0 * (1.0 + rho0 * dt) * c / dt;
        let got = lyapunov_disease_free(&st, &p, &inc, dt).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn disease_free_constants_need_small_r02() {
        // R02 = S0 β2 / (γ + d_I) = 2
        let (p, _) = scenario(0.0);
        let inc = IncidenceFunctions::linear(1e-14, 1e-9);
        let err = DiseaseFreeConstants::new(&p, &inc).unwrap_err();
        assert!(matches!(err, DiagnosticsError::ConstantsUndefined { .. }));
    }

    #[test]
    fn endemic_functional_examples() {
        let (p, inc) = scenario(3e-10);
        let e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        let at = FieldState::uniform(9, e.s, e.i, e.v);
        assert_eq!(lyapunov_endemic(&at, &p, &inc, &e, 1.0).unwrap(), 0.0);

        let dt = 2.0;
        let st = FieldState::uniform(9, 2.0 * e.s, e.i, e.v);
        let expected = 9.0 * e.s * (1.0 - 2f64.ln()) / dt;
        let got = lyapunov_endemic(&st, &p, &inc, &e, dt).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);

        let mut bad = at.clone();
        bad.i[3] = 0.0;
        assert!(matches!(
            lyapunov_endemic(&bad, &p, &inc, &e, 1.0),
            Err(DiagnosticsError::DomainError(_))
        ));
    }

    #[test]
    fn functionals_positive_off_equilibrium() {
        let (p, inc) = scenario(3e-10);
        let e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        for field in 0..3 {
            let mut st = FieldState::uniform(7, e.s, e.i, e.v);
            let target = match field {
                0 => &mut st.s,
                1 => &mut st.i,
                _ => &mut st.v,
            };
            target[4] *= 1.0 + 1e-6;
            assert!(lyapunov_endemic(&st, &p, &inc, &e, 1.0).unwrap() > 0.0);
        }
        let (p, inc) = scenario(5e-12);
        let mut st = FieldState::uniform(7, p.s0(), 0.0, 0.0);
        st.s[2] *= 1.0 - 1e-6;
        assert!(lyapunov_disease_free(&st, &p, &inc, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn selection_follows_threshold() {
        let (p, inc) = scenario(5e-12);
        assert_eq!(
            LyapunovFunctional::select(&p, &inc).unwrap().kind(),
            EquilibriumKind::DiseaseFree
        );
        let (p, inc) = scenario(3e-10);
        assert_eq!(
            LyapunovFunctional::select(&p, &inc).unwrap().kind(),
            EquilibriumKind::Endemic
        );
    }

    fn series(values: &[f64]) -> LyapunovSeries {
        LyapunovSeries {
            times: (0..values.len()).map(|k| k as f64).collect(),
            values: values.to_vec(),
            kind: EquilibriumKind::DiseaseFree,
        }
    }

    #[test]
    fn monotone_checks() {
        assert!(check_monotone(&series(&[5.0, 4.0, 1.0, 0.5]), 1e-9).unwrap().passed);
        assert!(check_monotone(&series(&[2.0; 6]), 1e-9).unwrap().passed);
        let report = check_monotone(&series(&[5.0, 4.0, 4.04, 3.0]), 1e-9).unwrap();
        assert!(!report.passed);
        assert_eq!(report.violations, vec![2]);
        assert_eq!(report.worst.unwrap().0, 2);
        assert!(matches!(
            check_monotone(&series(&[]), 1e-9),
            Err(DiagnosticsError::EmptySeries)
        ));
    }

    proptest! {
        #[test]
        fn phi_nonnegative_and_convex(x in 1e-6f64..1e6, y in 1e-6f64..1e6) {
            let px = volterra_phi(x).unwrap();
            let py = volterra_phi(y).unwrap();
            prop_assert!(px >= 0.0 && py >= 0.0);
            let mid = volterra_phi(0.5 * (x + y)).unwrap();
            prop_assert!(mid <= 0.5 * (px + py) * (1.0 + 1e-12) + 1e-15);
            if (x - 1.0).abs() > 1e-6 {
                prop_assert!(px > 0.0);
            }
        }
    }
}
