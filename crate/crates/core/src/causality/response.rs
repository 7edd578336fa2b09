use serde::{Deserialize, Serialize};

use super::CausalityError;

/// Parameters of the scaling form `R(t, s) = s^{-1-a} f_R(t/s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseForm {
    pub a: f64,
    pub a_prime: f64,
    /// `lambda_R / z`.
    pub lambda_over_z: f64,
    pub f0: f64,
}

impl ResponseForm {
    /// `f_R(y) = f0 y^{1 + a' - lambda_R/z} (y - 1)^{-1 - a'}` for `y > 1`, zero below.
    pub fn scaling_function(&self, y: f64) -> Result<f64, CausalityError> {
        let p = -1.0 - self.a_prime;
        if y < 1.0 {
            return Ok(0.0);
        }
        if y == 1.0 {
            return match p.partial_cmp(&0.0) {
                Some(std::cmp::Ordering::Less) => Err(CausalityError::Divergent { y }),
                Some(std::cmp::Ordering::Equal) => Ok(self.f0),
                _ => Ok(0.0),
            };
        }
        Ok(self.f0 * y.powf(1.0 + self.a_prime - self.lambda_over_z) * (y - 1.0).powf(p))
    }

    pub fn response(&self, t: f64, s: f64) -> Result<f64, CausalityError> {
        if !(s > 0.0) {
            return Err(CausalityError::Domain("waiting time s must be positive".into()));
        }
        Ok(s.powf(-1.0 - self.a) * self.scaling_function(t / s)?)
    }

    /// `max |s^{1+a} R(t, s) - f_R(t/s)|` over the samples.
    pub fn collapse_residual(&self, samples: &[(f64, f64)]) -> Result<f64, CausalityError> {
        let mut worst: f64 = 0.0;
        for &(t, s) in samples {
            let lhs = s.powf(1.0 + self.a) * self.response(t, s)?;
            worst = worst.max((lhs - self.scaling_function(t / s)?).abs());
        }
        Ok(worst)
    }
}

pub fn response_scaling(t: f64, s: f64, a: f64, a_prime: f64, lambda_over_z: f64, f0: f64) -> Result<f64, CausalityError> {
    ResponseForm { a, a_prime, lambda_over_z, f0 }.response(t, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: ResponseForm = ResponseForm { a: 0.0, a_prime: 0.0, lambda_over_z: 1.0, f0: 1.0 };

    #[test]
    fn direct_substitution() {
        assert_eq!(F.scaling_function(2.0).unwrap(), 1.0);
        assert_eq!(response_scaling(6.0, 3.0, 0.0, 0.0, 1.0, 1.0).unwrap(), 1.0 / 3.0);
        assert_eq!(F.scaling_function(0.5).unwrap(), 0.0);
    }

    #[test]
    fn divergence_is_signalled() {
        assert!(matches!(F.scaling_function(1.0), Err(CausalityError::Divergent { .. })));
        let g = ResponseForm { a_prime: -1.0, ..F };
        assert_eq!(g.scaling_function(1.0).unwrap(), 1.0);
    }

    #[test]
    fn collapse_on_one_ratio() {
        let samples = [(3.0, 1.0), (6.0, 2.0), (12.0, 4.0)];
        let f = ResponseForm { a: 0.3, a_prime: -0.4, lambda_over_z: 1.2, f0: 2.0 };
        assert_eq!(f.collapse_residual(&samples).unwrap(), 0.0);
    }
}
