//! Figure scenarios: time series of Λ for fixed parameter cases and a τ sweep.
//!
//! Every scenario uses 𝒜 = 1, Ω = 0.1, T = 300 and δ = 1 unless overridden.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::decoherence::{lambda_continuum, lambda_series, DecoherenceSeries};
use crate::error::{Error, Result};
use crate::model::{EnvConfig, EnvParams, SystemConfig, ZetaForm};
use crate::quadrature::QuadratureConfig;

pub const DEFAULT_POINTS: usize = 400;
pub const DEFAULT_ALPHA_SET: [f64; 4] = [0.0, 0.5, 0.8, 1.0];
pub const DEFAULT_TAU_SET: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_THETA_SET: [f64; 3] = [FRAC_PI_3, FRAC_PI_2, PI];
pub const FIG1_CASES: [(f64, f64); 4] = [(1.0, 0.0), (0.5, 0.0), (1.0, 2.0), (0.5, 2.0)];

/// `n` uniform points on `[0, end]`.
pub fn linspace(end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect(),
    }
}

/// One parameter case evaluated on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub label: String,
    pub sys: SystemConfig,
    pub env: EnvConfig,
    pub time_grid: Vec<f64>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        label: impl Into<String>,
        sys: SystemConfig,
        env: EnvConfig,
        time_grid: Vec<f64>,
    ) -> Result<Self> {
        validate_grid("t", &time_grid, true)?;
        Ok(Scenario {
            name: name.into(),
            label: label.into(),
            sys,
            env,
            time_grid,
        })
    }

    pub fn run(&self, cfg: &QuadratureConfig) -> Result<DecoherenceSeries> {
        lambda_series(&self.time_grid, &self.sys, &self.env, cfg)
    }

    fn sweep(&self, cfg: &QuadratureConfig) -> Result<SweepResult> {
        let series = self.run(cfg)?;
        Ok(SweepResult {
            label: self.label.clone(),
            axis_name: "t",
            axis: series.times,
            lambda: series.lambda,
            error_estimates: series.error_estimates,
            params: scenario_params(&self.sys, &self.env),
        })
    }
}

fn validate_grid(param: &'static str, grid: &[f64], from_zero: bool) -> Result<()> {
    let Some(&first) = grid.first() else {
        return Err(Error::domain(param, 0.0, "grid must not be empty"));
    };
    if from_zero && first != 0.0 {
        return Err(Error::domain(param, first, "grid must start at 0"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(param, f64::NAN, "grid must be finite"));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            param,
            w[1],
            "grid must be strictly increasing",
        ));
    }
    Ok(())
}

fn scenario_params(sys: &SystemConfig, env: &EnvConfig) -> Vec<(String, String)> {
    vec![
        ("alpha_s".into(), sys.alpha_s().to_string()),
        ("e1".into(), sys.e1().to_string()),
        ("tau".into(), env.tau().to_string()),
        ("zeta_form".into(), env.zeta_form().to_string()),
        ("zeta".into(), env.zeta().to_string()),
        ("theta".into(), env.theta().to_string()),
    ]
}

/// Λ values along one axis with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub label: String,
    pub axis_name: &'static str,
    pub axis: Vec<f64>,
    pub lambda: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub params: Vec<(String, String)>,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.lambda.last().copied()
    }

    /// Λ at the given axis value, if it lies on the grid.
    pub fn at(&self, x: f64) -> Option<f64> {
        self.axis
            .iter()
            .position(|&a| (a - x).abs() <= 1e-12 * x.abs().max(1.0))
            .map(|i| self.lambda[i])
    }
}

/// A figure: shared parameters plus one sweep per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: FigureName,
    pub params: Vec<(String, String)>,
    pub series: Vec<SweepResult>,
}

impl Figure {
    pub fn series(&self, label: &str) -> Option<&SweepResult> {
        self.series.iter().find(|s| s.label == label)
    }
}

fn base_params(env: &EnvParams, cfg: &QuadratureConfig) -> Vec<(String, String)> {
    vec![
        ("amp".into(), env.amp.to_string()),
        ("cutoff".into(), env.cutoff.to_string()),
        ("temperature".into(), env.temperature.describe()),
        ("delta".into(), env.delta.to_string()),
        ("rel_tol".into(), format!("{:e}", cfg.rel_tol)),
        ("abs_tol".into(), format!("{:e}", cfg.abs_tol)),
        ("max_subdivisions".into(), cfg.max_subdivisions.to_string()),
        (
            "truncation_factor".into(),
            cfg.truncation_factor.to_string(),
        ),
    ]
}

fn fig1_label(e1: f64, tau: f64) -> String {
    format!("E1={e1} tau={tau}")
}

/// The four (E₁, τ) cases at a fixed θ.
pub fn fig1(
    theta: f64,
    t_max: f64,
    n_points: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepResult>> {
    let grid = linspace(t_max, n_points);
    FIG1_CASES
        .iter()
        .map(|&(e1, tau)| {
            let env = EnvParams::default()
                .with_tau(tau)
                .with_theta(theta)
                .build()?;
            Scenario::new(
                "fig1",
                fig1_label(e1, tau),
                SystemConfig::from_e1(e1)?,
                env,
                grid.clone(),
            )?
            .sweep(cfg)
        })
        .collect()
}

/// Ordering of the fig1 curves at the end of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Ordering {
    /// Final Λ for each case in [`FIG1_CASES`] order.
    pub final_values: [f64; 4],
    /// Fully non-Hermitian case is the smallest and the Hermitian case the largest.
    pub extremes_hold: bool,
    /// `Λ(1,2) < Λ(0.5,0)`.
    pub middle_pair_holds: bool,
}

pub fn fig1_ordering(series: &[SweepResult]) -> Result<Fig1Ordering> {
    let mut final_values = [0.0; 4];
    for (slot, &(e1, tau)) in final_values.iter_mut().zip(FIG1_CASES.iter()) {
        let label = fig1_label(e1, tau);
        *slot = series
            .iter()
            .find(|s| s.label == label)
            .and_then(SweepResult::last)
            .ok_or(Error::domain("series", 0.0, "missing fig1 case"))?;
    }
    let [herm, sys_nh, env_nh, both_nh] = final_values;
    Ok(Fig1Ordering {
        final_values,
        extremes_hold: both_nh < sys_nh.min(env_nh) && herm > sys_nh.max(env_nh),
        middle_pair_holds: env_nh < sys_nh,
    })
}

/// One series per ζ-form at τ = 2, E₁ = 0.5.
pub fn fig2(
    forms: &[ZetaForm],
    tau: f64,
    e1: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepResult>> {
    forms
        .iter()
        .map(|&form| {
            let env = EnvParams::default()
                .with_tau(tau)
                .with_zeta_form(form)
                .build()?;
            Scenario::new(
                "fig2",
                form.name(),
                SystemConfig::from_e1(e1)?,
                env,
                grid.to_vec(),
            )?
            .sweep(cfg)
        })
        .collect()
}

/// One series per α_S at τ = 0.
pub fn fig3(alpha_set: &[f64], grid: &[f64], cfg: &QuadratureConfig) -> Result<Vec<SweepResult>> {
    let env = EnvParams::default().build()?;
    alpha_set
        .iter()
        .map(|&alpha| {
            Scenario::new(
                "fig3",
                format!("alpha_s={alpha}"),
                SystemConfig::new(alpha)?,
                env,
                grid.to_vec(),
            )?
            .sweep(cfg)
        })
        .collect()
}

/// One series per τ at E₁ = 1.
pub fn fig4(
    tau_set: &[f64],
    e1: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepResult>> {
    tau_set
        .iter()
        .map(|&tau| {
            let env = EnvParams::default().with_tau(tau).build()?;
            Scenario::new(
                "fig4",
                format!("tau={tau}"),
                SystemConfig::from_e1(e1)?,
                env,
                grid.to_vec(),
            )?
            .sweep(cfg)
        })
        .collect()
}

/// Λ(τ) at fixed t and E₁ = 1, one sweep per θ.
pub fn fig5(
    tau_grid: &[f64],
    theta_set: &[f64],
    t_fixed: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepResult>> {
    validate_grid("tau", tau_grid, false)?;
    let sys = SystemConfig::hermitian();
    theta_set
        .iter()
        .map(|&theta| {
            let results = tau_grid
                .par_iter()
                .map(|&tau| {
                    let env = EnvParams::default()
                        .with_tau(tau)
                        .with_theta(theta)
                        .build()?;
                    lambda_continuum(t_fixed, &sys, &env, cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepResult {
                label: format!("theta={theta}"),
                axis_name: "tau",
                axis: tau_grid.to_vec(),
                lambda: results.iter().map(|r| r.value).collect(),
                error_estimates: results.iter().map(|r| r.abs_error_estimate).collect(),
                params: vec![
                    ("theta".into(), theta.to_string()),
                    ("e1".into(), "1".into()),
                    ("t".into(), t_fixed.to_string()),
                    ("zeta_form".into(), ZetaForm::Quadratic.to_string()),
                ],
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureName {
    pub const ALL: [FigureName; 7] = [
        FigureName::Fig1a,
        FigureName::Fig1b,
        FigureName::Fig1c,
        FigureName::Fig2,
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureName::Fig1a => "fig1a",
            FigureName::Fig1b => "fig1b",
            FigureName::Fig1c => "fig1c",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
        }
    }

    /// Default horizon: t for time series, τ for fig5.
    pub fn default_extent(self) -> f64 {
        match self {
            FigureName::Fig1b | FigureName::Fig1c => 30.0,
            FigureName::Fig5 => 4.0,
            _ => 10.0,
        }
    }

    /// Evaluates the figure on `n_points` grid points up to `extent`.
    pub fn run(self, extent: f64, n_points: usize, cfg: &QuadratureConfig) -> Result<Figure> {
        let mut params = base_params(&EnvParams::default(), cfg);
        params.push(("n_points".into(), n_points.to_string()));
        let grid = linspace(extent, n_points);
        let series = match self {
            FigureName::Fig1a | FigureName::Fig1b | FigureName::Fig1c => {
                let theta = match self {
                    FigureName::Fig1a => FRAC_PI_2,
                    FigureName::Fig1b => FRAC_PI_3,
                    _ => PI,
                };
                params.push(("theta".into(), theta.to_string()));
                params.push(("t_max".into(), extent.to_string()));
                fig1(theta, extent, n_points, cfg)?
            }
            FigureName::Fig2 => {
                params.push(("tau".into(), "2".into()));
                params.push(("e1".into(), "0.5".into()));
                params.push(("t_max".into(), extent.to_string()));
                fig2(&ZetaForm::ALL, 2.0, 0.5, &grid, cfg)?
            }
            FigureName::Fig3 => {
                params.push(("tau".into(), "0".into()));
                params.push(("t_max".into(), extent.to_string()));
                fig3(&DEFAULT_ALPHA_SET, &grid, cfg)?
            }
            FigureName::Fig4 => {
                params.push(("e1".into(), "1".into()));
                params.push(("t_max".into(), extent.to_string()));
                fig4(&DEFAULT_TAU_SET, 1.0, &grid, cfg)?
            }
            FigureName::Fig5 => {
                params.push(("e1".into(), "1".into()));
                params.push(("t".into(), "10".into()));
                params.push(("tau_max".into(), extent.to_string()));
                fig5(&grid, &DEFAULT_THETA_SET, 10.0, cfg)?
            }
        };
        Ok(Figure {
            name: self,
            params,
            series,
        })
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                format!(
                    "unknown figure `{s}` (expected fig1a, fig1b, fig1c, fig2, fig3, fig4 or fig5)"
                )
            })
    }
}
