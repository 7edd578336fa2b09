//! Exact rationals and Gaussian rationals `a + b i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(v: &Q) -> f64 {
    let n = v.numer().to_f64().unwrap_or(f64::NAN);
    let d = v.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Render a rational in the expression grammar (`3`, `-1/2`).
pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Integer value if `v` is integral and fits in `i64`.
pub fn q_as_i64(v: &Q) -> Option<i64> {
    if v.is_integer() {
        v.numer().to_i64()
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: Q,
    pub im: Q,
}

impl Gauss {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }

    pub fn zero() -> Self {
        Gauss::new(Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        Gauss::new(Q::one(), Q::zero())
    }

    pub fn i() -> Self {
        Gauss::new(Q::zero(), Q::one())
    }

    pub fn real(re: Q) -> Self {
        Gauss::new(re, Q::zero())
    }

    pub fn int(n: i64) -> Self {
        Gauss::real(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Gauss::real(q(n, d))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gauss::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Gauss::new(&self.re * k, &self.im * k)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Gauss::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }

    /// Grammar rendering; parenthesised when it has two parts.
    pub fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_q(&self.re),
            (true, false) => render_imag(&self.im),
            (false, false) => {
                let im = render_imag(&self.im.abs());
                let sign = if self.im.is_negative() { '-' } else { '+' };
                format!("({} {} {})", fmt_q(&self.re), sign, im)
            }
        }
    }
}

fn render_imag(im: &Q) -> String {
    if im.is_one() {
        "i".to_string()
    } else if *im == -Q::one() {
        "-i".to_string()
    } else {
        format!("{}*i", fmt_q(im))
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        Gauss::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = Gauss::i();
        assert_eq!(&i * &i, Gauss::int(-1));
    }

    #[test]
    fn inverse_round_trips() {
        let z = Gauss::new(q(3, 2), q(-1, 4));
        assert_eq!(&z * &z.inv().unwrap(), Gauss::one());
        assert!(Gauss::zero().inv().is_none());
    }

    #[test]
    fn render_forms() {
        assert_eq!(Gauss::ratio(-1, 2).render(), "-1/2");
        assert_eq!(Gauss::i().render(), "i");
        assert_eq!(Gauss::new(qi(1), q(-1, 2)).render(), "(1 - 1/2*i)");
    }
}
