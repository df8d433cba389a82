//! Masked-norm sweeps over `h` and fits of the decay exponent.

use serde::{Deserialize, Serialize};

use super::fast::{build_structured, DEFAULT_MAX_FAST_DIM};
use super::kernel::{grid_dimension, KernelSpec};
use super::mask::{mask, mask_by_sets};
use super::norm::{operator_norm, NormOptions};
use super::operator::build_dense;
use super::GridOperator;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::par;
use crate::regular::{embed_porous, CantorTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Masks are `Ω±(h^ρ)`.
    Raw,
    /// Both sets are first embedded into regular sets `X ⊇ Ω-`, `Y ⊇ Ω+`
    /// and the masks are `X(2h^ρ)`, `Y(2h^ρ)`.
    Embedded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Dense,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FupConfig {
    pub spec: KernelSpec,
    pub rho: f64,
    pub h_list: Vec<f64>,
    pub mode: Mode,
    /// Porosity constant handed to the embedding in [`Mode::Embedded`].
    pub nu: f64,
    pub oversample: f64,
    /// Larger grids get a reduced oversampling factor and a warning.
    pub max_dim: usize,
    pub engine: Engine,
    pub norm: NormOptions,
}

impl FupConfig {
    pub fn new(spec: KernelSpec, rho: f64, h_list: Vec<f64>) -> Self {
        FupConfig {
            spec,
            rho,
            h_list,
            mode: Mode::Raw,
            nu: 0.25,
            oversample: 8.0,
            max_dim: DEFAULT_MAX_FAST_DIM,
            engine: Engine::Structured,
            norm: NormOptions::with_tol(1e-9),
        }
    }
}

/// `2^{-min_exp}, …, 2^{-max_exp}`, from coarse to fine.
pub fn h_ladder(min_exp: i32, max_exp: i32) -> Vec<f64> {
    (min_exp..=max_exp).map(|e| 2f64.powi(-e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FupRow {
    pub h: f64,
    pub rho: f64,
    pub dim: usize,
    pub norm_masked: f64,
    pub norm_unmasked: f64,
    pub oversample: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FupReport {
    pub mode: Mode,
    pub rows: Vec<FupRow>,
    /// Fit of the masked norms.
    pub fit: DecayFit,
    /// Fit of the unmasked norms, the no-decay control.
    pub control_fit: DecayFit,
    pub warnings: Vec<String>,
}

impl FupReport {
    /// True when the masked norms strictly decrease as `h` decreases.
    pub fn strictly_decreasing(&self) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| b.h.total_cmp(&a.h));
        rows.windows(2).all(|w| w[1].norm_masked < w[0].norm_masked)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `(h, norm)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
    /// Slope of `log(norm)` against `log(h)`: norms behave like `C h^β`.
    pub beta: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub beta_stderr: f64,
    /// Points dropped because their norm was not positive.
    pub excluded_zero: usize,
}

/// Ordinary least squares of `log(norm)` on `log(h)`.
pub fn fit_beta(points: &[(f64, f64)]) -> Result<DecayFit> {
    const OP: &str = "fit_beta";
    if let Some(&(h, _)) = points.iter().find(|(h, _)| !(*h > 0.0 && h.is_finite())) {
        return Err(Error::invalid(OP, format!("h must be positive and finite, got {h}")));
    }
    let used: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, n)| n > 0.0 && n.is_finite()).collect();
    let excluded_zero = points.len() - used.len();
    if used.len() < 3 {
        return Err(Error::invalid(OP, format!("need at least 3 points with positive norm, got {}", used.len())));
    }
    let k = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid(OP, "all h values coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - beta * x).powi(2)).sum();
    let r_squared = if syy <= f64::EPSILON * ys.iter().map(|y| y * y).sum::<f64>() {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let beta_stderr = if used.len() > 2 {
        (ss_res / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(DecayFit {
        points: used,
        beta,
        intercept,
        r_squared,
        beta_stderr,
        excluded_zero,
    })
}

enum Masks {
    Raw { minus: IntervalSet, plus: IntervalSet },
    Embedded { x: CantorTree, y: CantorTree },
}

fn measure_row<A: GridOperator>(op: &A, masks: &Masks, rho: f64, opts: &NormOptions) -> Result<(f64, f64)> {
    let unmasked = operator_norm(op, opts)?;
    let masked = match masks {
        Masks::Raw { minus, plus } => operator_norm(&mask(op, minus, plus, rho)?, opts)?,
        Masks::Embedded { x, y } => {
            let s = 2.0 * op.h().powf(rho);
            operator_norm(&mask_by_sets(op, &x.neighborhood(s)?, &y.neighborhood(s)?)?, opts)?
        }
    };
    Ok((masked, unmasked))
}

/// Sweeps `h` over `cfg.h_list`, measuring `‖1_{Ω-(h^ρ)} B(h) 1_{Ω+(h^ρ)}‖`
/// and the unmasked norm, then fits both against `h`.
///
/// Rows are computed in parallel and returned in the order of `h_list`.
pub fn fup_experiment(omega_plus: &IntervalSet, omega_minus: &IntervalSet, cfg: &FupConfig) -> Result<FupReport> {
    const OP: &str = "fup_experiment";
    if !(cfg.rho > 0.0 && cfg.rho < 1.0) {
        return Err(Error::invalid(OP, format!("rho must lie in (0,1), got {}", cfg.rho)));
    }
    if cfg.h_list.is_empty() {
        return Err(Error::invalid(OP, "h_list is empty"));
    }
    if let Some(h) = cfg.h_list.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
        return Err(Error::invalid(OP, format!("h must lie in (0,1), got {h}")));
    }
    if !(cfg.oversample >= 1.0) {
        return Err(Error::invalid(OP, format!("oversample must be >= 1, got {}", cfg.oversample)));
    }
    cfg.spec.validate()?;

    let masks = match cfg.mode {
        Mode::Raw => Masks::Raw {
            minus: omega_minus.clone(),
            plus: omega_plus.clone(),
        },
        Mode::Embedded => {
            let alpha0 = cfg.h_list.iter().fold(f64::INFINITY, |a, h| a.min(h.powf(cfg.rho)));
            Masks::Embedded {
                x: embed_porous(omega_minus, cfg.nu, alpha0)?,
                y: embed_porous(omega_plus, cfg.nu, alpha0)?,
            }
        }
    };

    let mut warnings = Vec::new();
    let mut plan = Vec::with_capacity(cfg.h_list.len());
    for &h in &cfg.h_list {
        let longest = cfg.spec.x_window.len().max(cfg.spec.y_window.len());
        let dim = grid_dimension(cfg.spec.x_window, h, cfg.oversample).max(grid_dimension(cfg.spec.y_window, h, cfg.oversample));
        let mut oversample = cfg.oversample;
        if dim > cfg.max_dim {
            oversample = (cfg.max_dim as f64 * h / longest).floor();
            if oversample < 1.0 {
                return Err(Error::Resource {
                    op: OP,
                    msg: format!("h = {h} needs more than {} grid points", cfg.max_dim),
                });
            }
            warnings.push(format!(
                "h = {h}: oversample reduced from {} to {oversample} to respect the dimension cap {}",
                cfg.oversample, cfg.max_dim
            ));
        }
        plan.push((h, oversample));
    }

    let results = par::map_indexed(&plan, |_, &(h, oversample)| -> Result<FupRow> {
        let (masked, unmasked, dim) = match cfg.engine {
            Engine::Structured => {
                let op = build_structured(&cfg.spec, h, oversample, cfg.max_dim)?;
                let (a, b) = measure_row(&op, &masks, cfg.rho, &cfg.norm)?;
                (a, b, op.x_grid.n)
            }
            Engine::Dense => {
                let op = build_dense(&cfg.spec, h, oversample, cfg.max_dim)?;
                let (a, b) = measure_row(&op, &masks, cfg.rho, &cfg.norm)?;
                (a, b, op.x_grid.n)
            }
        };
        Ok(FupRow {
            h,
            rho: cfg.rho,
            dim,
            norm_masked: masked,
            norm_unmasked: unmasked,
            oversample,
        })
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let fit = fit_beta(&rows.iter().map(|r| (r.h, r.norm_masked)).collect::<Vec<_>>())?;
    let control_fit = fit_beta(&rows.iter().map(|r| (r.h, r.norm_unmasked)).collect::<Vec<_>>())?;
    Ok(FupReport {
        mode: cfg.mode,
        rows,
        fit,
        control_fit,
        warnings,
    })
}
