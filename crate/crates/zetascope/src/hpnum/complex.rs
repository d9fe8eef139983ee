use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::HReal;

/// Complex scalar built from two [`HReal`] parts sharing one precision.
#[derive(Debug, Clone, PartialEq)]
pub struct HComplex {
    re: HReal,
    im: HReal,
}

impl HComplex {
    pub fn new(re: HReal, im: HReal) -> Self {
        let digits = re.precision_digits().max(im.precision_digits());
        HComplex {
            re: re.with_precision(digits),
            im: im.with_precision(digits),
        }
    }

    pub fn from_f64(re: f64, im: f64, digits: u32) -> Self {
        HComplex {
            re: HReal::from_f64(re, digits),
            im: HReal::from_f64(im, digits),
        }
    }

    pub fn from_real(re: HReal) -> Self {
        let digits = re.precision_digits();
        HComplex { re, im: HReal::zero(digits) }
    }

    pub fn zero(digits: u32) -> Self {
        HComplex { re: HReal::zero(digits), im: HReal::zero(digits) }
    }

    pub fn re(&self) -> &HReal {
        &self.re
    }

    pub fn im(&self) -> &HReal {
        &self.im
    }

    pub fn precision_digits(&self) -> u32 {
        self.re.precision_digits()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        HComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> HReal {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> HReal {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> HReal {
        self.im.atan2(&self.re)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HComplex { re: &self.re / &n, im: &(-&self.im) / &n }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        HComplex { re: &m * &c, im: &m * &s }
    }

    /// Principal-branch logarithm: ln|z| + i arg(z).
    pub fn ln(&self) -> Self {
        let half = HReal::from_f64(0.5, self.precision_digits());
        HComplex { re: &self.norm_sqr().ln() * &half, im: self.arg() }
    }

    pub fn scale(&self, k: &HReal) -> Self {
        HComplex { re: &self.re * k, im: &self.im * k }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for HComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add<&HComplex> for &HComplex {
    type Output = HComplex;
    fn add(self, rhs: &HComplex) -> HComplex {
        HComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&HComplex> for &HComplex {
    type Output = HComplex;
    fn sub(self, rhs: &HComplex) -> HComplex {
        HComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&HComplex> for &HComplex {
    type Output = HComplex;
    fn mul(self, rhs: &HComplex) -> HComplex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        HComplex::new(re, im)
    }
}

impl Div<&HComplex> for &HComplex {
    type Output = HComplex;
    fn div(self, rhs: &HComplex) -> HComplex {
        let n = rhs.norm_sqr();
        let re = &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &n;
        let im = &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &n;
        HComplex::new(re, im)
    }
}

impl Neg for &HComplex {
    type Output = HComplex;
    fn neg(self) -> HComplex {
        HComplex { re: -&self.re, im: -&self.im }
    }
}
