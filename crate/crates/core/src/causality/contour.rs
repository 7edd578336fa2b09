use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::{integrate, Estimate};
use super::CausalityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Offset of the line from the real axis.
    pub epsilon: f64,
    /// Horizontal half-width of the staple.
    pub l: f64,
    /// Depth of the vertical rays below the axis.
    pub tail_depth: f64,
    /// Initial panels per contour piece.
    pub nodes_per_segment: usize,
    pub half_plane: HalfPlane,
    /// Absolute quadrature tolerance per integral.
    pub tolerance: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            epsilon: 0.5,
            l: 20.0,
            tail_depth: 40.0,
            nodes_per_segment: 8,
            half_plane: HalfPlane::Below,
            tolerance: 1e-12,
        }
    }
}

impl ContourSpec {
    pub fn with_half_plane(mut self, h: HalfPlane) -> Self {
        self.half_plane = h;
        self
    }

    pub fn validate(&self) -> Result<(), CausalityError> {
        let bad = |m: &str| Err(CausalityError::Domain(m.to_string()));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad("epsilon must lie in (0, 1)");
        }
        if self.l <= 10.0 {
            return bad("L must exceed 10");
        }
        if self.tail_depth <= 0.0 || self.nodes_per_segment == 0 || self.tolerance <= 0.0 {
            return bad("tail depth, panels and tolerance must be positive");
        }
        Ok(())
    }
}

/// Integral with its quadrature and truncation error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourValue {
    pub re: f64,
    pub im: f64,
    /// Quadrature error plus discarded tail.
    pub err: f64,
    pub tail: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ContourValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

/// `e^{-i m z} v^{-a} (ln v)^n` with `v = k (z - z0)` on the principal branch;
/// lifted pieces add `2 pi i` to `ln v` wherever `Im v < 0`.
#[derive(Clone, Copy, Debug)]
pub struct Kernel {
    pub mass: f64,
    pub exponent: f64,
    pub log_power: u32,
    pub k: Complex64,
    pub z0: Complex64,
}

impl Kernel {
    pub fn plain(exponent: f64, log_power: u32) -> Kernel {
        Kernel {
            mass: 1.0,
            exponent,
            log_power,
            k: Complex64::new(1.0, 0.0),
            z0: Complex64::new(0.0, 0.0),
        }
    }

    pub fn log_v(&self, z: Complex64, lift: bool) -> Complex64 {
        let v = self.k * (z - self.z0);
        let mut l = v.ln();
        if lift && v.im < 0.0 {
            l.im += 2.0 * PI;
        }
        l
    }

    pub fn eval(&self, z: Complex64, log_v: Complex64) -> Complex64 {
        let e = (Complex64::new(0.0, -self.mass) * z - self.exponent * log_v).exp();
        e * log_v.powu(self.log_power)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Piece {
    /// Straight line; `tail` marks a ray truncated at its end.
    Line { from: Complex64, to: Complex64, lift: bool, tail: bool },
    /// Arc `rho e^{i theta}` around `z0`, with `ln v` continued along the arc.
    Arc { rho: f64, from: f64, to: f64 },
}

/// Integrate `weight(z) * kernel` along a chain of pieces.
pub fn integrate_path<W>(kernel: &Kernel, pieces: &[Piece], spec: &ContourSpec, weight: W) -> ContourValue
where
    W: Fn(Complex64, Complex64) -> Complex64,
{
    let tol = spec.tolerance / pieces.len() as f64;
    let mut total = Estimate {
        converged: true,
        ..Default::default()
    };
    let mut tail = 0.0;
    for p in pieces {
        let est = match *p {
            Piece::Line { from, to, lift, tail: t } => {
                let d = to - from;
                let f = |s: f64| {
                    let z = from + d * s;
                    let lv = kernel.log_v(z, lift);
                    kernel.eval(z, lv) * weight(z, lv) * d
                };
                if t {
                    let deep = if from.im < to.im { from } else { to };
                    let lv = kernel.log_v(deep, lift);
                    tail += (kernel.eval(deep, lv) * weight(deep, lv)).norm() / kernel.mass;
                }
                integrate(f, 0.0, 1.0, spec.nodes_per_segment, tol)
            }
            Piece::Arc { rho, from, to } => {
                let base = (kernel.k * rho).ln();
                let f = |th: f64| {
                    let e = Complex64::from_polar(1.0, th);
                    let z = kernel.z0 + e * rho;
                    let lv = Complex64::new(base.re, base.im + th);
                    kernel.eval(z, lv) * weight(z, lv) * Complex64::new(0.0, rho) * e
                };
                integrate(f, from, to, spec.nodes_per_segment, tol)
            }
        };
        total = total.combine(est);
    }
    ContourValue {
        re: total.value.re,
        im: total.value.im,
        err: total.error + tail,
        tail,
        converged: total.converged,
        warning: None,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Horizontal segment at height `h` closed by two rays falling to `-tail_depth`;
/// `lift_left` continues the left ray onto the sheet reached through the cut.
pub fn staple(spec: &ContourSpec, h: f64, lift_left: bool) -> Vec<Piece> {
    let (l, d) = (spec.l, spec.tail_depth);
    vec![
        Piece::Line { from: c(-l, -d), to: c(-l, h), lift: lift_left, tail: true },
        Piece::Line { from: c(-l, h), to: c(l, h), lift: false, tail: false },
        Piece::Line { from: c(l, h), to: c(l, -d), lift: false, tail: true },
    ]
}

const WRAP_RADIUS: f64 = 1.0;

/// Down the negative imaginary axis on both sides of the cut, joined by a clockwise arc.
pub fn cut_wrap(spec: &ContourSpec) -> Vec<Piece> {
    let (r, d) = (WRAP_RADIUS, spec.tail_depth);
    vec![
        Piece::Line { from: c(0.0, -d), to: c(0.0, -r), lift: true, tail: true },
        Piece::Arc { rho: r, from: 1.5 * PI, to: -0.5 * PI },
        Piece::Line { from: c(0.0, -r), to: c(0.0, -d), lift: false, tail: true },
    ]
}

/// Mark a value whose error estimate exceeds the requested tolerance.
pub fn flag(v: &mut ContourValue, tol: f64) {
    if !v.converged || v.err > tol {
        v.converged = false;
        v.warning = Some(format!("error estimate {:.3e} above tolerance {:.3e}", v.err, tol));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Staple,
    CutWrap,
}

fn check_x(x: f64) -> Result<(), CausalityError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CausalityError::Domain(format!("x must be positive, got {}", x)))
    }
}

/// `I_{+-}^{(n)}(x)`: below through the staple, above by wrapping the cut.
pub fn integral_i(n: u32, x: f64, spec: &ContourSpec) -> Result<ContourValue, CausalityError> {
    let scheme = match spec.half_plane {
        HalfPlane::Below => Scheme::Staple,
        HalfPlane::Above => Scheme::CutWrap,
    };
    integral_i_with(n, x, spec, scheme)
}

pub fn integral_i_with(n: u32, x: f64, spec: &ContourSpec, scheme: Scheme) -> Result<ContourValue, CausalityError> {
    check_x(x)?;
    spec.validate()?;
    let k = Kernel::plain(x, n);
    let pieces = match (spec.half_plane, scheme) {
        (HalfPlane::Below, Scheme::Staple) => staple(spec, -spec.epsilon, false),
        (HalfPlane::Above, Scheme::Staple) => staple(spec, spec.epsilon, true),
        (HalfPlane::Above, Scheme::CutWrap) => cut_wrap(spec),
        (HalfPlane::Below, Scheme::CutWrap) => {
            return Err(CausalityError::Domain("no cut to wrap below the axis".into()))
        }
    };
    let mut v = integrate_path(&k, &pieces, spec, |_, _| Complex64::new(1.0, 0.0));
    flag(&mut v, spec.tolerance);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_vanishes() {
        for x in [0.3, 1.5] {
            for n in [0, 1] {
                let v = integral_i(n, x, &ContourSpec::default()).unwrap();
                assert!(v.abs() < 1e-10, "{:?}", v);
            }
        }
    }

    #[test]
    fn above_schemes_agree() {
        let s = ContourSpec::default().with_half_plane(HalfPlane::Above);
        let a = integral_i_with(0, 1.0, &s, Scheme::CutWrap).unwrap();
        let b = integral_i_with(0, 1.0, &s, Scheme::Staple).unwrap();
        assert!(a.abs() > 0.1);
        assert!((a.value() - b.value()).norm() / a.abs() < 1e-9);
    }

    #[test]
    fn bad_inputs() {
        assert!(integral_i(0, 0.0, &ContourSpec::default()).is_err());
        let s = ContourSpec { l: 5.0, ..Default::default() };
        assert!(integral_i(0, 1.0, &s).is_err());
    }
}
