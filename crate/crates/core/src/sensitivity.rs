//! Latin hypercube sampling and partial rank correlation coefficients (PRCC)
//! for the sensitivity of R0 to its rate parameters.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::SensitivityError;
use crate::model::{compute_r0, IncidenceFunctions, ModelParams};

/// |PRCC| above which a parameter is reported as significant.
pub const SIGNIFICANCE_THRESHOLD: f64 = 0.5;

/// The six parameters varied in the R0 study; Λ and d_S stay fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SensParam {
    Beta1,
    Beta2,
    Alpha,
    DeathV,
    Gamma,
    DeathI,
}

impl SensParam {
    pub const ALL: [SensParam; 6] = [
        SensParam::Beta1,
        SensParam::Beta2,
        SensParam::Alpha,
        SensParam::DeathV,
        SensParam::Gamma,
        SensParam::DeathI,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SensParam::Beta1 => "beta1",
            SensParam::Beta2 => "beta2",
            SensParam::Alpha => "alpha",
            SensParam::DeathV => "d_V",
            SensParam::Gamma => "gamma",
            SensParam::DeathI => "d_I",
        }
    }

    /// Nominal value taken from the model parameters and incidence slopes.
    pub fn nominal(&self, params: &ModelParams, inc: &IncidenceFunctions) -> f64 {
        match self {
            SensParam::Beta1 => inc.virus.slope_at_zero(),
            SensParam::Beta2 => inc.cell.slope_at_zero(),
            SensParam::Alpha => params.alpha,
            SensParam::DeathV => params.d_v,
            SensParam::Gamma => params.gamma,
            SensParam::DeathI => params.d_i,
        }
    }
}

impl fmt::Display for SensParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensParam {
    type Err = SensitivityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SensParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SensitivityError::InvalidSpec(format!("unknown parameter `{s}`")))
    }
}

/// Normal distribution truncated below at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDistribution {
    pub param: SensParam,
    pub mean: f64,
    pub sd: f64,
}

impl ParamDistribution {
    /// Quantile of the zero-truncated normal at probability `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        if self.sd == 0.0 {
            return self.mean;
        }
        let normal = Normal::new(self.mean, self.sd).expect("validated distribution");
        let below = normal.cdf(0.0);
        normal.inverse_cdf(below + u * (1.0 - below)).max(0.0)
    }

    /// CDF of the zero-truncated normal.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.sd == 0.0 {
            return if x >= self.mean { 1.0 } else { 0.0 };
        }
        let normal = Normal::new(self.mean, self.sd).expect("validated distribution");
        let below = normal.cdf(0.0);
        ((normal.cdf(x) - below) / (1.0 - below)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivitySpec {
    pub distributions: Vec<ParamDistribution>,
    pub n_samples: usize,
    pub seed: u64,
}

impl SensitivitySpec {
    /// All six parameters around their nominal values with sd = `sd_fraction`·mean.
    pub fn around_nominal(
        params: &ModelParams,
        inc: &IncidenceFunctions,
        sd_fraction: f64,
        n_samples: usize,
        seed: u64,
    ) -> Self {
        let distributions = SensParam::ALL
            .into_iter()
            .map(|param| {
                let mean = param.nominal(params, inc);
                ParamDistribution {
                    param,
                    mean,
                    sd: sd_fraction * mean,
                }
            })
            .collect();
        SensitivitySpec {
            distributions,
            n_samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SensitivityError> {
        if self.n_samples < 10 {
            return Err(SensitivityError::InvalidSpec(format!(
                "n_samples must be >= 10, got {}",
                self.n_samples
            )));
        }
        for (k, d) in self.distributions.iter().enumerate() {
            if !(d.mean.is_finite() && d.mean > 0.0) {
                return Err(SensitivityError::InvalidSpec(format!("{}: mean must be > 0", d.param)));
            }
            if !(d.sd.is_finite() && d.sd >= 0.0) {
                return Err(SensitivityError::InvalidSpec(format!("{}: sd must be >= 0", d.param)));
            }
            if self.distributions[..k].iter().any(|e| e.param == d.param) {
                return Err(SensitivityError::InvalidSpec(format!("{} listed twice", d.param)));
            }
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<String> {
        self.distributions.iter().map(|d| d.param.name().to_string()).collect()
    }
}

/// One draw per equiprobable stratum for each parameter, strata permuted
/// independently per column. Rows are samples, columns follow
/// `spec.distributions`.
pub fn lhs_sample(spec: &SensitivitySpec) -> Result<DMatrix<f64>, SensitivityError> {
    spec.validate()?;
    let n = spec.n_samples;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = DMatrix::zeros(n, spec.distributions.len());
    let mut strata: Vec<usize> = (0..n).collect();
    for (col, dist) in spec.distributions.iter().enumerate() {
        strata.shuffle(&mut rng);
        for (row, &stratum) in strata.iter().enumerate() {
            let jitter: f64 = rng.random_range(f64::EPSILON..1.0);
            let u = (stratum as f64 + jitter) / n as f64;
            out[(row, col)] = dist.quantile(u);
        }
    }
    Ok(out)
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = 0.5 * ((start + 1) + end) as f64;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let n = x.len() as f64;
    let mx = x.sum() / n;
    let my = y.sum() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y.iter()) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Residuals of the least-squares fit of `y` on the columns of `design`.
fn ols_residuals(design: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let qr = design.clone().qr();
    let qty = qr.q().transpose() * y;
    let coef = qr
        .r()
        .solve_upper_triangular(&qty)
        .unwrap_or_else(|| design.clone().svd(true, true).solve(y, 1e-12).expect("svd solve"));
    y - design * coef
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrccEntry {
    pub name: String,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrccResult {
    pub entries: Vec<PrccEntry>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TornadoRow {
    pub parameter: String,
    pub prcc: f64,
    pub abs_prcc: f64,
    pub significant: bool,
}

impl PrccResult {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.coefficient)
    }

    /// Rows sorted by |PRCC| descending (stable for equal magnitudes).
    pub fn tornado(&self) -> Vec<TornadoRow> {
        let mut rows: Vec<TornadoRow> = self
            .entries
            .iter()
            .map(|e| TornadoRow {
                parameter: e.name.clone(),
                prcc: e.coefficient,
                abs_prcc: e.coefficient.abs(),
                significant: e.coefficient.abs() > self.threshold,
            })
            .collect();
        rows.sort_by(|a, b| b.abs_prcc.total_cmp(&a.abs_prcc));
        rows
    }
}

/// PRCC of each sample column against `outputs`.
///
/// Every column and the output are rank-transformed; for column j, the ranks
/// of j and of the output are each regressed (with intercept) on the ranks
/// of all other columns, and the coefficient is the Pearson correlation of
/// the two residual series.
pub fn prcc(samples: &DMatrix<f64>, outputs: &[f64], names: &[String]) -> Result<PrccResult, SensitivityError> {
    let (n, p) = samples.shape();
    if outputs.len() != n {
        return Err(SensitivityError::Shape(format!(
            "{} outputs for {n} samples",
            outputs.len()
        )));
    }
    if names.len() != p {
        return Err(SensitivityError::Shape(format!(
            "{} names for {p} columns",
            names.len()
        )));
    }
    if n <= p + 2 {
        return Err(SensitivityError::Shape(format!(
            "need more than {} samples, got {n}",
            p + 2
        )));
    }
    let mut rank_cols = Vec::with_capacity(p);
    for (j, name) in names.iter().enumerate() {
        let col: Vec<f64> = samples.column(j).iter().copied().collect();
        if col.iter().all(|x| *x == col[0]) {
            return Err(SensitivityError::DegenerateColumn { name: name.clone() });
        }
        rank_cols.push(DVector::from_vec(average_ranks(&col)));
    }
    if outputs.iter().all(|y| *y == outputs[0]) {
        return Err(SensitivityError::DegenerateColumn { name: "output".into() });
    }
    let y_ranks = DVector::from_vec(average_ranks(outputs));

    let mut entries = Vec::with_capacity(p);
    for j in 0..p {
        let mut design = DMatrix::from_element(n, p, 1.0);
        for (c, k) in (0..p).filter(|&k| k != j).enumerate() {
            design.set_column(c + 1, &rank_cols[k]);
        }
        let rx = ols_residuals(&design, &rank_cols[j]);
        let ry = ols_residuals(&design, &y_ranks);
        entries.push(PrccEntry {
            name: names[j].clone(),
            coefficient: pearson(&rx, &ry),
        });
    }
    Ok(PrccResult {
        entries,
        threshold: SIGNIFICANCE_THRESHOLD,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityStudy {
    pub samples: DMatrix<f64>,
    pub outputs: Vec<f64>,
    pub result: PrccResult,
    pub tornado: Vec<TornadoRow>,
}

fn apply_sample(params: &mut ModelParams, slopes: &mut (f64, f64), param: SensParam, value: f64) {
    match param {
        SensParam::Beta1 => slopes.0 = value,
        SensParam::Beta2 => slopes.1 = value,
        SensParam::Alpha => params.alpha = value,
        SensParam::DeathV => params.d_v = value,
        SensParam::Gamma => params.gamma = value,
        SensParam::DeathI => params.d_i = value,
    }
}

/// PRCC of R0 with respect to the six rate parameters.
///
/// R0 depends on the incidence only through its slopes at zero, so every
/// row is evaluated with bilinear incidence carrying the sampled slopes.
pub fn r0_sensitivity_study(
    spec: &SensitivitySpec,
    params: &ModelParams,
    inc: &IncidenceFunctions,
) -> Result<SensitivityStudy, SensitivityError> {
    spec.validate()?;
    params.validate()?;
    inc.validate()?;
    let mut varied: Vec<SensParam> = spec.distributions.iter().map(|d| d.param).collect();
    varied.sort();
    if varied != SensParam::ALL {
        return Err(SensitivityError::InvalidSpec(
            "the R0 study varies exactly beta1, beta2, alpha, d_V, gamma, d_I".into(),
        ));
    }
    let samples = lhs_sample(spec)?;
    let base_slopes = (inc.virus.slope_at_zero(), inc.cell.slope_at_zero());
    let outputs = samples
        .row_iter()
        .map(|row| {
            let mut p = *params;
            let mut slopes = base_slopes;
            for (d, value) in spec.distributions.iter().zip(row.iter()) {
                apply_sample(&mut p, &mut slopes, d.param, *value);
            }
            compute_r0(&p, &IncidenceFunctions::linear(slopes.0, slopes.1)).map(|r| r.total)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let result = prcc(&samples, &outputs, &spec.names())?;
    let tornado = result.tornado();
    Ok(SensitivityStudy {
        samples,
        outputs,
        result,
        tornado,
    })
}
