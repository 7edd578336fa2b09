use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{flag, integral_i, integrate_path, staple, ContourSpec, ContourValue, HalfPlane, Kernel};
use super::CausalityError;
use crate::par::{self, Execution};

/// Jordan structure of the doublet, fixing the logarithmic part of the H integrand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum LogMix {
    /// `x1' = x2' = 1`; `xip_sum = xi1' + xi2'`.
    Symmetric { xip_sum: f64 },
    /// `x1' = 0`, `x2' = 1`.
    Asymmetric { xip1: f64 },
}

impl LogMix {
    /// Coefficients `(c_v, c_t)` of `-g0 ln v` and `-g0 ln|t|`.
    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            LogMix::Symmetric { xip_sum } => (1.0 + xip_sum, 1.0),
            LogMix::Asymmetric { xip1 } => (xip1, 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Entry {
    G,
    H,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualizationTask {
    pub x: f64,
    pub xi_sum: f64,
    pub log_mix: LogMix,
    pub mass: f64,
    pub grid: Vec<(f64, f64)>,
    pub g0: f64,
    pub h0: f64,
}

pub fn default_grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for s in [1.0, -1.0] {
        for t in [0.5, 1.0, 2.0, 4.0] {
            for r in [0.0, 0.5, 1.0, 2.0] {
                g.push((s * t, r));
            }
        }
    }
    g
}

impl DualizationTask {
    pub fn symmetric(x: f64, xi_sum: f64) -> Self {
        DualizationTask {
            x,
            xi_sum,
            log_mix: LogMix::Symmetric { xip_sum: 0.0 },
            mass: 1.0,
            grid: default_grid(),
            g0: 1.0,
            h0: 0.5,
        }
    }

    pub fn asymmetric(x: f64, xi_sum: f64) -> Self {
        DualizationTask {
            log_mix: LogMix::Asymmetric { xip1: 0.0 },
            ..DualizationTask::symmetric(x, xi_sum)
        }
    }

    pub fn exponent(&self) -> f64 {
        self.x + self.xi_sum
    }

    pub fn validate(&self) -> Result<(), CausalityError> {
        if !(self.exponent() > 0.0) {
            return Err(CausalityError::Domain("x + xi must be positive".into()));
        }
        if !(self.mass > 0.0) {
            return Err(CausalityError::Domain("mass must be positive".into()));
        }
        Ok(())
    }

    /// `2^{-a} M^{a-1}`, the factor relating the dual integral to `I^{(n)}(a)`.
    pub fn prefactor(&self) -> f64 {
        let a = self.exponent();
        2f64.powf(-a) * self.mass.powf(a - 1.0)
    }
}

/// `|t|^{-x} int dzeta e^{-i M zeta} ghat((2 zeta t + i r^2)/|t|)` and its H analogue.
pub fn dualize_pointwise(task: &DualizationTask, spec: &ContourSpec, t: f64, r: f64, entry: Entry) -> Result<ContourValue, CausalityError> {
    task.validate()?;
    spec.validate()?;
    if t == 0.0 || !t.is_finite() {
        return Err(CausalityError::Domain("t must be nonzero".into()));
    }
    let s = t.signum();
    let kernel = Kernel {
        mass: task.mass,
        exponent: task.exponent(),
        log_power: 0,
        k: Complex64::new(2.0 * s, 0.0),
        z0: Complex64::new(0.0, -r * r / (2.0 * t)),
    };
    let pieces = if s > 0.0 {
        staple(spec, spec.epsilon, true)
    } else {
        staple(spec, -spec.epsilon, false)
    };
    let scale = t.abs().powf(-task.x);
    let (cv, ct) = task.log_mix.coefficients();
    let lt = t.abs().ln();
    let (g0, h0) = (task.g0, task.h0);
    let mut v = match entry {
        Entry::G => integrate_path(&kernel, &pieces, spec, |_, _| Complex64::new(g0 * scale, 0.0)),
        Entry::H => integrate_path(&kernel, &pieces, spec, |_, lv| (h0 - g0 * ct * lt - g0 * cv * lv) * scale),
    };
    flag(&mut v, spec.tolerance);
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridValue {
    pub t: f64,
    pub r: f64,
    pub g: ContourValue,
    pub h: ContourValue,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggregates {
    /// `max_{t<0} |G| / max_{t>0} |G|`.
    pub suppression: f64,
    /// Relative spread of `G / (t^{-x} e^{-M r^2/(2t)})` over `t > 0`.
    pub gaussian_spread: f64,
    pub g0_quadrature: [f64; 2],
    pub g0_identity: [f64; 2],
    pub g0_identity_rel: f64,
    /// Least-squares slope of `H t^x e^{M r^2/(2t)}` against `ln t`, over `G0`.
    pub h_slope_over_g0: [f64; 2],
    pub h0_identity_rel: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CausalityReport {
    pub task: DualizationTask,
    pub grid: Vec<GridValue>,
    pub aggregates: Aggregates,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Relative tolerance of the aggregates; points whose error exceeds a tenth of it are dropped.
pub const AGGREGATE_TOLERANCE: f64 = 1e-6;

pub fn causality_report(task: &DualizationTask, spec: &ContourSpec, exec: Execution) -> Result<CausalityReport, CausalityError> {
    task.validate()?;
    if task.grid.is_empty() {
        return Err(CausalityError::EmptyGrid);
    }
    if !task.grid.iter().any(|p| p.0 > 0.0) || !task.grid.iter().any(|p| p.0 < 0.0) {
        return Err(CausalityError::Domain("grid must cover both signs of t".into()));
    }
    let values = par::map(exec, &task.grid, |&(t, r)| -> Result<GridValue, CausalityError> {
        Ok(GridValue {
            t,
            r,
            g: dualize_pointwise(task, spec, t, r, Entry::G)?,
            h: dualize_pointwise(task, spec, t, r, Entry::H)?,
        })
    });
    let grid: Vec<GridValue> = values.into_iter().collect::<Result<_, _>>()?;
    let scale = grid.iter().map(|p| p.g.abs()).fold(0.0, f64::max);
    let cut = AGGREGATE_TOLERANCE / 10.0 * scale;
    let good: Vec<&GridValue> = grid.iter().filter(|p| p.g.err <= cut && p.h.err <= cut).collect();
    let mut agg = Aggregates {
        points_used: good.len(),
        points_dropped: grid.len() - good.len(),
        ..Default::default()
    };
    let pos: Vec<&&GridValue> = good.iter().filter(|p| p.t > 0.0).collect();
    let neg_max = good.iter().filter(|p| p.t < 0.0).map(|p| p.g.abs()).fold(0.0, f64::max);
    let pos_max = pos.iter().map(|p| p.g.abs()).fold(0.0, f64::max);
    agg.suppression = if pos_max > 0.0 { neg_max / pos_max } else { f64::INFINITY };

    let gauss = |t: f64, r: f64| t.powf(-task.x) * (-task.mass * r * r / (2.0 * t)).exp();
    let ratios: Vec<Complex64> = pos.iter().map(|p| p.g.value() / gauss(p.t, p.r)).collect();
    if ratios.is_empty() {
        return Err(CausalityError::EmptyGrid);
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    agg.gaussian_spread = ratios.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max) / mean.norm();
    let g0q = pos
        .iter()
        .position(|p| p.t == 1.0 && p.r == 0.0)
        .map_or(mean, |i| ratios[i]);
    agg.g0_quadrature = pair(g0q);

    let above = spec.with_half_plane(HalfPlane::Above);
    let a = task.exponent();
    let i0 = integral_i(0, a, &above)?.value();
    let i1 = integral_i(1, a, &above)?.value();
    let g0id = i0 * task.prefactor() * task.g0;
    agg.g0_identity = pair(g0id);
    agg.g0_identity_rel = (g0q - g0id).norm() / g0id.norm();

    let (cv, _) = task.log_mix.coefficients();
    let xs: Vec<f64> = pos.iter().map(|p| p.t.ln()).collect();
    let ys: Vec<Complex64> = pos.iter().map(|p| p.h.value() / gauss(p.t, p.r)).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<Complex64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: Complex64 = xs.iter().zip(&ys).map(|(x, y)| (y - ym) * (x - xm)).sum();
    let slope = sxy / sxx;
    agg.h_slope_over_g0 = pair(slope / g0q);
    let intercept = ym - slope * xm;
    let ln2m = (2.0 / task.mass).ln();
    let h0id = (i0 * (task.h0 - task.g0 * cv * ln2m) - i1 * task.g0 * cv) * task.prefactor();
    agg.h0_identity_rel = (intercept - h0id).norm() / h0id.norm().max(f64::MIN_POSITIVE);
    Ok(CausalityReport {
        task: task.clone(),
        grid,
        aggregates: agg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_times_vanish() {
        let task = DualizationTask::symmetric(0.8, 0.3);
        let s = ContourSpec::default();
        let plus = dualize_pointwise(&task, &s, 1.0, 1.0, Entry::G).unwrap();
        let minus = dualize_pointwise(&task, &s, -1.0, 1.0, Entry::G).unwrap();
        assert!(minus.abs() <= 1e-6 * plus.abs(), "{:?} {:?}", minus, plus);
    }

    #[test]
    fn zero_time_rejected() {
        let task = DualizationTask::symmetric(0.8, 0.3);
        assert!(dualize_pointwise(&task, &ContourSpec::default(), 0.0, 1.0, Entry::G).is_err());
    }

    #[test]
    fn gaussian_ratio_is_constant() {
        let task = DualizationTask::symmetric(0.8, 0.3);
        let s = ContourSpec::default();
        let f = |t: f64, r: f64| {
            dualize_pointwise(&task, &s, t, r, Entry::G).unwrap().value() / (t.powf(-0.8) * (-r * r / (2.0 * t)).exp())
        };
        let a = f(2.0, 1.0);
        let b = f(1.0, 0.5);
        assert!((a - b).norm() / b.norm() < 1e-6);
    }
}
