//! Adaptive Gauss–Kronrod integration over `[0, ∞)` for integrands damped by
//! an `exp(−ω/Ω)` envelope.
//!
//! The infinite range is truncated at `ω_max = truncation_factor·Ω`, doubled
//! until a caller-supplied majorant certifies that the dropped tail is below
//! `abs_tol`. The finite range is split into equal panels no wider than an
//! optional cap, then refined by bisecting the panel with the largest error
//! estimate until the total error meets the tolerance.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisections allowed on top of the initial panel partition.
    pub max_subdivisions: usize,
    pub truncation_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 200,
            truncation_factor: 60.0,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        crate::error::require_positive("rel_tol", self.rel_tol)?;
        crate::error::require_positive("abs_tol", self.abs_tol)?;
        crate::error::require_positive("truncation_factor", self.truncation_factor)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Upper bound `|f(ω)| ≤ Σ c_k·ω^{p_k}·exp(−ω/Ω)` valid for all ω beyond the
/// truncation point, plus an optional cap on panel width.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Envelope {
    terms: Vec<(i32, f64)>,
    max_panel_width: Option<f64>,
}

impl Envelope {
    /// Majorant `Σ_k coeffs[k]·ω^k·exp(−ω/Ω)`.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        Envelope {
            terms: coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as i32, c.abs()))
                .collect(),
            max_panel_width: None,
        }
    }

    /// Adds `coeff·ω^power·exp(−ω/Ω)` to the majorant; `power` may be negative.
    pub fn with_term(mut self, power: i32, coeff: f64) -> Self {
        self.terms.push((power, coeff.abs()));
        self
    }

    pub fn with_max_panel_width(mut self, width: f64) -> Self {
        self.max_panel_width = (width.is_finite() && width > 0.0).then_some(width);
        self
    }

    pub fn max_panel_width(&self) -> Option<f64> {
        self.max_panel_width
    }

    /// Bound on `∫_w^∞ |f(ω)| dω`.
    pub fn tail_bound(&self, cutoff: f64, w: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(p, c)| c * exp_power_tail(p, cutoff, w))
            .sum()
    }
}

/// `∫_w^∞ ω^p·exp(−ω/Ω) dω` for integer `p ≥ 0` (exact) or an upper bound
/// `w^p·Ω·exp(−w/Ω)` for `p < 0`.
fn exp_power_tail(p: i32, cutoff: f64, w: f64) -> f64 {
    let decay = (-w / cutoff).exp();
    if p < 0 {
        return w.powi(p) * cutoff * decay;
    }
    // Ω·e^{−w/Ω}·Σ_{k=0}^{p} p!/k!·w^k·Ω^{p−k}
    let sum: f64 = (0..=p)
        .map(|k| falling_ratio(p, k) * w.powi(k) * cutoff.powi(p - k))
        .sum();
    cutoff * decay * sum
}

/// `p!/k!`
fn falling_ratio(p: i32, k: i32) -> f64 {
    ((k + 1)..=p).map(f64::from).product()
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrates `f` over `[0, ∞)`.
pub fn integrate_cutoff<F>(
    f: F,
    cutoff: f64,
    envelope: &Envelope,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    crate::error::require_positive("cutoff", cutoff)?;

    let mut upper = cfg.truncation_factor * cutoff;
    let mut tail = envelope.tail_bound(cutoff, upper);
    let mut doublings = 0;
    while tail.is_nan() || tail > cfg.abs_tol {
        if doublings == 64 || !upper.is_finite() {
            return Err(Error::NonConvergence {
                subdivisions: 0,
                abs_error: tail,
                target: cfg.abs_tol,
            });
        }
        upper *= 2.0;
        tail = envelope.tail_bound(cutoff, upper);
        doublings += 1;
    }

    let result = integrate_interval(&f, 0.0, upper, envelope.max_panel_width, cfg)?;
    Ok(QuadratureResult {
        value: result.value,
        abs_error_estimate: result.abs_error_estimate + tail,
        evaluations: result.evaluations,
    })
}

/// Adaptive integration over the finite interval `[a, b]`.
pub fn integrate_interval<F>(
    f: &F,
    a: f64,
    b: f64,
    max_panel_width: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::domain(
            "interval",
            b - a,
            "must be finite and non-empty",
        ));
    }
    let n_initial = match max_panel_width {
        Some(w) => ((b - a) / w).ceil().max(1.0) as usize,
        None => 1,
    };
    let width = (b - a) / n_initial as f64;

    let mut evaluations = 0;
    let mut panels = Vec::with_capacity(n_initial + cfg.max_subdivisions);
    for i in 0..n_initial {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n_initial {
            b
        } else {
            a + width * (i + 1) as f64
        };
        panels.push(gauss_kronrod_21(f, lo, hi)?);
        evaluations += 21;
    }

    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&panels);
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a: lo, b: hi, .. } = panels[worst];
        let mid = 0.5 * (lo + hi);
        if subdivisions >= cfg.max_subdivisions || !(lo < mid && mid < hi) {
            return Err(Error::NonConvergence {
                subdivisions,
                abs_error: error,
                target,
            });
        }
        panels[worst] = gauss_kronrod_21(f, lo, mid)?;
        panels.insert(worst + 1, gauss_kronrod_21(f, mid, hi)?);
        evaluations += 42;
        subdivisions += 1;
    }
}

fn totals(panels: &[Panel]) -> (f64, f64) {
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// 21-point Kronrod rule with its embedded 10-point Gauss rule; the error
/// estimate uses the usual QUADPACK rescaling of `|K21 − G10|`.
fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> f64,
{
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { omega: x })
        }
    };
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = eval(center)?;
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut left = [0.0; 10];
    let mut right = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (fl, fr) = (eval(center - dx)?, eval(center + dx)?);
        left[j] = fl;
        right[j] = fr;
        kronrod += WGK[j] * (fl + fr);
        res_abs += WGK[j] * (fl.abs() + fr.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite trapezoid on `[0, upper]` with `n` intervals.
    fn trapezoid<F: Fn(f64) -> f64>(f: F, upper: f64, n: usize) -> f64 {
        let h = upper / n as f64;
        let inner: f64 = (1..n).map(|i| f(h * i as f64)).sum();
        h * (0.5 * (f(0.0) + f(upper)) + inner)
    }

    #[test]
    fn closed_form_integrals() {
        let cfg = QuadratureConfig::default();
        let cutoff = 0.1;
        let r = integrate_cutoff(
            |w| (-w / cutoff).exp(),
            cutoff,
            &Envelope::polynomial(&[1.0]),
            &cfg,
        )
        .unwrap();
        assert!((r.value - 0.1).abs() < 1e-12, "{r:?}");
        let r = integrate_cutoff(
            |w| w * (-w / cutoff).exp(),
            cutoff,
            &Envelope::polynomial(&[0.0, 1.0]),
            &cfg,
        )
        .unwrap();
        assert!((r.value - 0.01).abs() < 1e-12, "{r:?}");
        assert!(r.evaluations > 0 && r.abs_error_estimate >= 0.0);
        // ∫ ω² e^{−aω} sin²ω = 1/a³ − Re[(a − 2i)⁻³]
        let a = 1.0 / cutoff;
        let want = a.powi(-3) - num_complex::Complex64::new(a, -2.0).powi(-3).re;
        let r = integrate_cutoff(
            |w| w * w * (-w / cutoff).exp() * w.sin().powi(2),
            cutoff,
            &Envelope::polynomial(&[0.0, 0.0, 1.0]),
            &cfg,
        )
        .unwrap();
        assert!((r.value - want).abs() < 1e-12, "{} vs {want}", r.value);
    }

    #[test]
    fn oscillatory_against_trapezoid() {
        let cutoff = 0.1;
        let f = |w: f64| w * w * (-w / cutoff).exp() * w.sin().powi(2);
        let cfg = QuadratureConfig::default();
        let r = integrate_cutoff(f, cutoff, &Envelope::polynomial(&[0.0, 0.0, 1.0]), &cfg).unwrap();
        // the integrand is below 1e-20 beyond ω = 6
        let oracle = trapezoid(f, 6.0, 1_000_000);
        assert!((r.value - oracle).abs() < 1e-8, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn tail_bound_matches_incomplete_gamma() {
        // ∫_w^∞ ω² e^{−ω/Ω} = Ω e^{−w/Ω}(w² + 2wΩ + 2Ω²)
        let (c, w): (f64, f64) = (0.5, 3.0);
        let want = c * (-w / c).exp() * (w * w + 2.0 * w * c + 2.0 * c * c);
        let got = exp_power_tail(2, c, w);
        assert!((got - want).abs() <= 1e-15 * want);
        assert!((exp_power_tail(0, c, w) - c * (-w / c).exp()).abs() < 1e-18);
        // negative powers give an upper bound
        let bound = exp_power_tail(-1, c, w);
        let numeric = integrate_interval(
            &|x: f64| (-x / c).exp() / x,
            w,
            w + 60.0,
            None,
            &QuadratureConfig::default(),
        )
        .unwrap()
        .value;
        assert!(bound >= numeric);
    }

    #[test]
    fn truncation_extends_until_tail_is_small() {
        // A heavy polynomial majorant forces ω_max beyond 60Ω.
        let cutoff = 1.0;
        let f = |w: f64| w.powi(8) * (-w).exp();
        let env = Envelope::default().with_term(8, 1.0);
        let cfg = QuadratureConfig {
            truncation_factor: 5.0,
            ..QuadratureConfig::default()
        };
        let r = integrate_cutoff(f, cutoff, &env, &cfg).unwrap();
        assert!((r.value - 40320.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate_cutoff(
            |w| if w > 0.05 { f64::NAN } else { 1.0 },
            0.1,
            &Envelope::polynomial(&[1.0]),
            &QuadratureConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn budget_exhaustion_is_non_convergence() {
        let cfg = QuadratureConfig {
            max_subdivisions: 2,
            rel_tol: 1e-14,
            ..QuadratureConfig::default()
        };
        let f = |w: f64| (200.0 * w).sin().abs() * (-w / 0.1).exp();
        let err = integrate_cutoff(f, 0.1, &Envelope::polynomial(&[1.0]), &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn panel_cap_controls_initial_partition() {
        let cfg = QuadratureConfig::default();
        let f = |w: f64| (-w / 0.1).exp();
        let coarse = integrate_cutoff(f, 0.1, &Envelope::polynomial(&[1.0]), &cfg).unwrap();
        let capped = integrate_cutoff(
            f,
            0.1,
            &Envelope::polynomial(&[1.0]).with_max_panel_width(0.01),
            &cfg,
        )
        .unwrap();
        assert!(capped.evaluations >= 600 * 21);
        assert!(capped.evaluations > coarse.evaluations);
        assert!((capped.value - 0.1).abs() < 1e-13);
    }

    #[test]
    fn zero_integrand_is_exactly_zero() {
        let r = integrate_cutoff(
            |_| 0.0,
            0.1,
            &Envelope::polynomial(&[0.0]),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.abs_error_estimate, 0.0);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = QuadratureConfig {
            rel_tol: 0.0,
            ..QuadratureConfig::default()
        };
        let err = integrate_cutoff(|w| w, 0.1, &Envelope::default(), &cfg).unwrap_err();
        assert_eq!(err.param(), Some("rel_tol"));
    }
}
