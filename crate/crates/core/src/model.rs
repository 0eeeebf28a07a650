//! Model parameters, incidence functions, the basic reproduction number and
//! the steady states of the diffusive infection model
//!
//! ```text
//! S_t = D1 S_xx + Λ - S f(V) - S g(I) - d_S S
//! I_t = D2 I_xx + S f(V) + S g(I) - (γ + d_I) I
//! V_t = D3 V_xx + α I - d_V V
//! ```
//!
//! with homogeneous Neumann boundary conditions.

use std::fmt;
use std::sync::Arc;

use crate::error::ModelError;

/// Rate and diffusion constants. Rates are per day, diffusion in mm²/day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Recruitment rate of susceptible cells.
    pub lambda: f64,
    pub d_s: f64,
    pub d_i: f64,
    pub d_v: f64,
    /// Lysis rate of infected cells.
    pub gamma: f64,
    /// Virion production rate per infected cell.
    pub alpha: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl ModelParams {
    /// Shared rates of the two linear-incidence scenarios, with unit diffusion.
    pub fn reference() -> Self {
        ModelParams {
            lambda: 1e7,
            d_s: 0.1,
            d_i: 0.04,
            d_v: 5.0,
            gamma: 0.01,
            alpha: 100.0,
            d1: 1.0,
            d2: 1.0,
            d3: 1.0,
        }
    }

    pub fn with_diffusion(mut self, d1: f64, d2: f64, d3: f64) -> Self {
        self.d1 = d1;
        self.d2 = d2;
        self.d3 = d3;
        self
    }

    /// Rejects non-finite values, non-positive rates and negative diffusion.
    pub fn validate(&self) -> Result<(), ModelError> {
        let rates = [
            ("Lambda", self.lambda),
            ("d_S", self.d_s),
            ("d_I", self.d_i),
            ("d_V", self.d_v),
            ("gamma", self.gamma),
            ("alpha", self.alpha),
        ];
        for (name, value) in rates {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        for (name, value) in [("D1", self.d1), ("D2", self.d2), ("D3", self.d3)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and >= 0, got {value}"),
                });
            }
        }
        Ok(())
    }

    /// Susceptible level of the infection-free state, Λ / d_S.
    pub fn s0(&self) -> f64 {
        self.lambda / self.d_s
    }

    /// Total removal rate of infected cells, γ + d_I.
    pub fn infected_loss(&self) -> f64 {
        self.gamma + self.d_i
    }
}

/// A force-of-infection response x ↦ h(x) with h(0) = 0, nondecreasing and concave.
#[derive(Clone)]
pub enum Incidence {
    /// β x
    Linear { beta: f64 },
    /// β x / (1 + x)
    Saturating { beta: f64 },
    /// User-supplied response together with its exact slope at zero.
    Custom {
        func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        slope0: f64,
    },
}

impl Incidence {
    pub fn linear(beta: f64) -> Self {
        Incidence::Linear { beta }
    }

    pub fn saturating(beta: f64) -> Self {
        Incidence::Saturating { beta }
    }

    pub fn custom<F>(func: F, slope0: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Incidence::Custom {
            func: Arc::new(func),
            slope0,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Incidence::Linear { beta } => beta * x,
            Incidence::Saturating { beta } => beta * x / (1.0 + x),
            Incidence::Custom { func, .. } => func(x),
        }
    }

    pub fn slope_at_zero(&self) -> f64 {
        match self {
            Incidence::Linear { beta } | Incidence::Saturating { beta } => *beta,
            Incidence::Custom { slope0, .. } => *slope0,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Incidence::Linear { .. })
    }

    fn validate(&self, name: &'static str) -> Result<(), ModelError> {
        let slope = self.slope_at_zero();
        if !(slope.is_finite() && slope >= 0.0) {
            return Err(ModelError::InvalidParameter {
                name,
                reason: format!("slope at zero must be finite and >= 0, got {slope}"),
            });
        }
        let at_zero = self.eval(0.0);
        if at_zero != 0.0 {
            return Err(ModelError::InvalidParameter {
                name,
                reason: format!("incidence must vanish at zero, got {at_zero}"),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incidence::Linear { beta } => write!(f, "Linear {{ beta: {beta:e} }}"),
            Incidence::Saturating { beta } => write!(f, "Saturating {{ beta: {beta:e} }}"),
            Incidence::Custom { slope0, .. } => write!(f, "Custom {{ slope0: {slope0:e} }}"),
        }
    }
}

/// The pair (f, g): infection by free virions and by infected cells.
#[derive(Debug, Clone)]
pub struct IncidenceFunctions {
    pub virus: Incidence,
    pub cell: Incidence,
}

impl IncidenceFunctions {
    pub fn new(virus: Incidence, cell: Incidence) -> Self {
        IncidenceFunctions { virus, cell }
    }

    pub fn linear(beta1: f64, beta2: f64) -> Self {
        Self::new(Incidence::linear(beta1), Incidence::linear(beta2))
    }

    pub fn saturating(beta1: f64, beta2: f64) -> Self {
        Self::new(Incidence::saturating(beta1), Incidence::saturating(beta2))
    }

    #[inline]
    pub fn f(&self, v: f64) -> f64 {
        self.virus.eval(v)
    }

    #[inline]
    pub fn g(&self, i: f64) -> f64 {
        self.cell.eval(i)
    }

    /// Combined per-capita infection pressure f(V) + g(I).
    #[inline]
    pub fn force(&self, i: f64, v: f64) -> f64 {
        self.virus.eval(v) + self.cell.eval(i)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.virus.validate("beta1")?;
        self.cell.validate("beta2")
    }

    /// Checks the sector bounds h'(x)·x ≤ h(x) ≤ h'(0)·x and monotonicity of
    /// both responses on a geometric grid over (0, upper]. The derivative is
    /// only approximated by a one-sided difference; meant for screening
    /// user-supplied callbacks.
    pub fn check_sector_bounds(&self, upper: f64) -> Result<(), ModelError> {
        for (name, h) in [("beta1", &self.virus), ("beta2", &self.cell)] {
            let slope0 = h.slope_at_zero();
            let mut prev = 0.0;
            let mut x = upper * 1e-12;
            while x <= upper {
                let hx = h.eval(x);
                let tol = 1e-9 * (slope0 * x).abs().max(hx.abs()) + f64::MIN_POSITIVE;
                if hx > slope0 * x + tol || hx + tol < prev {
                    return Err(ModelError::InvalidParameter {
                        name,
                        reason: format!("incidence violates 0 <= h(x) <= h'(0) x or monotonicity at x = {x:e}"),
                    });
                }
                let step = x * 1e-6;
                let deriv = (h.eval(x + step) - hx) / step;
                if deriv * x > hx * (1.0 + 1e-4) + tol {
                    return Err(ModelError::InvalidParameter {
                        name,
                        reason: format!("incidence violates h'(x) x <= h(x) at x = {x:e}"),
                    });
                }
                prev = hx;
                x *= 1.5;
            }
        }
        Ok(())
    }
}

/// Virus-to-cell and cell-to-cell parts of the basic reproduction number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R0Breakdown {
    pub r01: f64,
    pub r02: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumKind {
    DiseaseFree,
    Endemic,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquilibriumKind::DiseaseFree => f.write_str("DiseaseFree"),
            EquilibriumKind::Endemic => f.write_str("Endemic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub s: f64,
    pub i: f64,
    pub v: f64,
}

impl Equilibrium {
    pub fn components(&self) -> [f64; 3] {
        [self.s, self.i, self.v]
    }

    /// Largest absolute component.
    pub fn sup_norm(&self) -> f64 {
        self.s.abs().max(self.i.abs()).max(self.v.abs())
    }
}

pub fn compute_r0(params: &ModelParams, inc: &IncidenceFunctions) -> Result<R0Breakdown, ModelError> {
    params.validate()?;
    inc.validate()?;
    let s0 = params.s0();
    let loss = params.infected_loss();
    let r01 = s0 * params.alpha * inc.virus.slope_at_zero() / (params.d_v * loss);
    let r02 = s0 * inc.cell.slope_at_zero() / loss;
    Ok(R0Breakdown {
        r01,
        r02,
        total: r01 + r02,
    })
}

pub fn disease_free_equilibrium(params: &ModelParams) -> Result<Equilibrium, ModelError> {
    params.validate()?;
    Ok(Equilibrium {
        kind: EquilibriumKind::DiseaseFree,
        s: params.s0(),
        i: 0.0,
        v: 0.0,
    })
}

/// G(I) = ((Λ - (γ+d_I) I) / d_S)·(f(α I / d_V) + g(I)) - (γ+d_I) I.
///
/// Its positive roots are the infected-cell levels of endemic steady states.
pub fn root_function(params: &ModelParams, inc: &IncidenceFunctions, i: f64) -> f64 {
    let loss = params.infected_loss();
    let s = (params.lambda - loss * i) / params.d_s;
    s * inc.force(i, params.alpha * i / params.d_v) - loss * i
}

/// Upper end of the bracket for the endemic root, Λ / (γ + d_I).
pub fn endemic_upper_bound(params: &ModelParams) -> f64 {
    params.lambda / params.infected_loss()
}

const BISECTION_REL_WIDTH: f64 = 1e-12;

/// Bisection for the unique sign change of G on (0, Λ/(γ+d_I)).
pub fn endemic_root_bisection(params: &ModelParams, inc: &IncidenceFunctions) -> Result<f64, ModelError> {
    let upper = endemic_upper_bound(params);
    let eps = 1e-12 * upper;
    let mut lo = eps;
    let mut hi = upper - eps;
    let g_lo = root_function(params, inc, lo);
    let g_hi = root_function(params, inc, hi);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        let r0 = compute_r0(params, inc).map(|r| r.total).unwrap_or(f64::NAN);
        return Err(ModelError::RootNotBracketed { upper, r0 });
    }
    while hi - lo > BISECTION_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if root_function(params, inc, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn endemic_from_infected(params: &ModelParams, i: f64) -> Equilibrium {
    Equilibrium {
        kind: EquilibriumKind::Endemic,
        s: (params.lambda - params.infected_loss() * i) / params.d_s,
        i,
        v: params.alpha * i / params.d_v,
    }
}

/// Closed-form endemic state for bilinear incidence (requires R0 > 1).
pub fn linear_endemic_closed_form(params: &ModelParams, r0: f64) -> Equilibrium {
    let i = params.lambda * (1.0 - 1.0 / r0) / params.infected_loss();
    Equilibrium {
        kind: EquilibriumKind::Endemic,
        s: params.lambda / (params.d_s * r0),
        i,
        v: params.alpha * i / params.d_v,
    }
}

/// The endemic steady state, present only when R0 > 1.
///
/// Bilinear incidence uses the closed form; anything else goes through
/// bisection on [`root_function`].
pub fn endemic_equilibrium(params: &ModelParams, inc: &IncidenceFunctions) -> Result<Option<Equilibrium>, ModelError> {
    let r0 = compute_r0(params, inc)?;
    if r0.total <= 1.0 {
        return Ok(None);
    }
    if inc.virus.is_linear() && inc.cell.is_linear() {
        let closed = linear_endemic_closed_form(params, r0.total);
        debug_assert!({
            let root = endemic_root_bisection(params, inc)?;
            (root - closed.i).abs() <= 1e-8 * closed.i
        });
        return Ok(Some(closed));
    }
    let i = endemic_root_bisection(params, inc)?;
    Ok(Some(endemic_from_infected(params, i)))
}

/// Normalized residuals of the three steady-state equations, each divided
/// by the magnitude of its largest term (zero when every term vanishes).
pub fn residuals(e: &Equilibrium, params: &ModelParams, inc: &IncidenceFunctions) -> [f64; 3] {
    let sf = e.s * inc.f(e.v);
    let sg = e.s * inc.g(e.i);
    let normalized = |terms: &[f64]| {
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            0.0
        } else {
            terms.iter().sum::<f64>().abs() / scale
        }
    };
    [
        normalized(&[params.lambda, -sf, -sg, -params.d_s * e.s]),
        normalized(&[sf, sg, -params.infected_loss() * e.i]),
        normalized(&[params.alpha * e.i, -params.d_v * e.v]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_a() -> (ModelParams, IncidenceFunctions) {
        (ModelParams::reference(), IncidenceFunctions::linear(5e-12, 5e-12))
    }

    fn scenario_b() -> (ModelParams, IncidenceFunctions) {
        (ModelParams::reference(), IncidenceFunctions::linear(3e-10, 3e-10))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn r0_scenario_a() {
        let (p, inc) = scenario_a();
        let r = compute_r0(&p, &inc).unwrap();
        assert!(rel(r.r01, 0.2) < 1e-12);
        assert!(rel(r.r02, 0.01) < 1e-12);
        assert!(rel(r.total, 0.21) < 1e-12);
        assert_eq!(r.total, r.r01 + r.r02);
    }

    #[test]
    fn r0_scenario_b() {
        let (p, inc) = scenario_b();
        let r = compute_r0(&p, &inc).unwrap();
        assert!(rel(r.total, 12.6) < 1e-12);
        assert!((r.total - 12.59).abs() <= 0.02);
    }

    #[test]
    fn r0_zero_slopes() {
        let r = compute_r0(&ModelParams::reference(), &IncidenceFunctions::linear(0.0, 0.0)).unwrap();
        assert_eq!(r.total, 0.0);
    }

    #[test]
    fn r0_rejects_bad_params() {
        let mut p = ModelParams::reference();
        p.d_v = -1.0;
        let err = compute_r0(&p, &IncidenceFunctions::linear(1e-10, 1e-10)).unwrap_err();
        assert!(matches!(err, ModelError::InvalidParameter { name: "d_V", .. }));
        let mut p = ModelParams::reference();
        p.d2 = f64::NAN;
        assert!(p.validate().is_err());
        let mut p = ModelParams::reference();
        p.d1 = 0.0;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn dfe_examples() {
        let (p, _) = scenario_a();
        let e = disease_free_equilibrium(&p).unwrap();
        assert_eq!((e.s, e.i, e.v), (1e8, 0.0, 0.0));
        let mut p = ModelParams::reference();
        p.lambda = 1.0;
        p.d_s = 1.0;
        assert_eq!(disease_free_equilibrium(&p).unwrap().s, 1.0);
        p.lambda = 5.0;
        p.d_s = 2.0;
        assert_eq!(disease_free_equilibrium(&p).unwrap().s, 2.5);
    }

    #[test]
    fn endemic_scenario_b() {
        let (p, inc) = scenario_b();
        let e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        assert_eq!(e.kind, EquilibriumKind::Endemic);
        // 1e8 / 12.6, 2e8 (1 - 1/12.6), 20 I*
        assert!(rel(e.s, 1e8 / 12.6) < 1e-12);
        assert!(rel(e.i, 2e8 * (1.0 - 1.0 / 12.6)) < 1e-12);
        assert!(rel(e.v, 20.0 * e.i) < 1e-12);
        assert!(rel(e.s, 7.9365e6) < 1e-4);
        assert!(rel(e.i, 1.8413e8) < 1e-4);
        assert!(rel(e.v, 3.6825e9) < 1e-4);
        let res = residuals(&e, &p, &inc);
        assert!(res.iter().all(|r| *r < 1e-10), "{res:?}");
    }

    #[test]
    fn endemic_absent_below_threshold() {
        let (p, inc) = scenario_a();
        assert!(endemic_equilibrium(&p, &inc).unwrap().is_none());
    }

    #[test]
    fn root_function_vanishes_at_zero() {
        for inc in [
            IncidenceFunctions::linear(3e-10, 1e-11),
            IncidenceFunctions::saturating(2e-3, 4e-9),
        ] {
            assert_eq!(root_function(&ModelParams::reference(), &inc, 0.0), 0.0);
        }
    }

    #[test]
    fn bisection_matches_closed_form() {
        let (p, inc) = scenario_b();
        let i = endemic_root_bisection(&p, &inc).unwrap();
        let closed = linear_endemic_closed_form(&p, 12.6);
        assert!(rel(i, closed.i) < 1e-10);
    }

    #[test]
    fn saturating_endemic_satisfies_residuals() {
        let p = ModelParams::reference();
        // f'(0) chosen so that R01 = 3
        let inc = IncidenceFunctions::saturating(3.0 * 5.0 * 0.05 / (1e8 * 100.0), 1e-10);
        let e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        let res = residuals(&e, &p, &inc);
        assert!(res.iter().all(|r| *r < 1e-10), "{res:?}");
        assert!(e.s > 0.0 && e.i > 0.0 && e.v > 0.0);
    }

    #[test]
    fn residuals_of_dfe_are_zero() {
        let (p, inc) = scenario_b();
        let e = disease_free_equilibrium(&p).unwrap();
        assert_eq!(residuals(&e, &p, &inc), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn perturbed_endemic_has_residual() {
        let (p, inc) = scenario_b();
        let mut e = endemic_equilibrium(&p, &inc).unwrap().unwrap();
        e.s *= 1.01;
        assert!(residuals(&e, &p, &inc)[0] > 0.0);
    }

    #[test]
    fn non_concave_incidence_not_bracketed() {
        // Convex response with zero slope at the origin: R0 from the slope
        // is 0 but the custom response can still be forced through the
        // bisection and must report the missing sign change.
        let p = ModelParams::reference();
        let inc = IncidenceFunctions::new(Incidence::custom(|v| 1e-30 * v * v, 0.0), Incidence::linear(0.0));
        let err = endemic_root_bisection(&p, &inc).unwrap_err();
        assert!(matches!(err, ModelError::RootNotBracketed { .. }));
    }

    #[test]
    fn sector_bounds_screening() {
        assert!(IncidenceFunctions::saturating(1e-3, 2e-3)
            .check_sector_bounds(1e6)
            .is_ok());
        assert!(IncidenceFunctions::linear(1e-3, 2e-3).check_sector_bounds(1e6).is_ok());
        let convex = IncidenceFunctions::new(Incidence::custom(|v| v * v, 0.0), Incidence::linear(1.0));
        assert!(convex.check_sector_bounds(10.0).is_err());
    }

    #[test]
    fn custom_must_vanish_at_zero() {
        let inc = IncidenceFunctions::new(Incidence::custom(|v| 1.0 + v, 1.0), Incidence::linear(1.0));
        assert!(compute_r0(&ModelParams::reference(), &inc).is_err());
    }
}
