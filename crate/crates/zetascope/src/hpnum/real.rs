use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::{Float, Integer};

/// Minimum tracked precision in decimal digits.
pub const MIN_DIGITS: u32 = 30;

const LOG2_10: f64 = 3.321928094887362;

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (digits.max(MIN_DIGITS) as f64 * LOG2_10).ceil() as u32 + 4
}

/// Arbitrary-precision real scalar carrying an explicit decimal-digit precision.
///
/// Arithmetic between two values carries the larger of the two precisions.
#[derive(Debug, Clone)]
pub struct HReal {
    f: Float,
    digits: u32,
}

impl HReal {
    pub fn zero(digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        HReal { f: Float::new(digits_to_bits(digits)), digits }
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        HReal { f: Float::with_val(digits_to_bits(digits), x), digits }
    }

    pub fn from_u64(x: u64, digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        HReal { f: Float::with_val(digits_to_bits(digits), x), digits }
    }

    pub fn from_integer(x: &Integer, digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        HReal { f: Float::with_val(digits_to_bits(digits), x), digits }
    }

    /// Parses a decimal literal at the given precision.
    pub fn parse(s: &str, digits: u32) -> Option<Self> {
        let digits = digits.max(MIN_DIGITS);
        let inc = Float::parse(s).ok()?;
        Some(HReal { f: inc.complete(digits_to_bits(digits)), digits })
    }

    pub fn pi(digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        HReal { f: Float::with_val(digits_to_bits(digits), Constant::Pi), digits }
    }

    pub fn two_pi(digits: u32) -> Self {
        let pi = Self::pi(digits);
        &pi + &pi
    }

    /// 2*pi*e, the spacing scale constant.
    pub fn two_pi_e(digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        let bits = digits_to_bits(digits);
        let e = Float::with_val(bits, 1u32).exp();
        let pi = Float::with_val(bits, Constant::Pi);
        HReal { f: (2u32 * pi).complete(bits) * e, digits }
    }

    pub(crate) fn from_float(f: Float, digits: u32) -> Self {
        HReal { f, digits: digits.max(MIN_DIGITS) }
    }

    pub(crate) fn as_float(&self) -> &Float {
        &self.f
    }

    pub(crate) fn into_float(self) -> Float {
        self.f
    }

    pub fn precision_digits(&self) -> u32 {
        self.digits
    }

    /// Returns a copy rounded to a (possibly different) precision.
    pub fn with_precision(&self, digits: u32) -> Self {
        let digits = digits.max(MIN_DIGITS);
        let mut f = self.f.clone();
        f.set_prec(digits_to_bits(digits));
        HReal { f, digits }
    }

    pub fn to_f64(&self) -> f64 {
        self.f.to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.f.is_sign_negative() && !self.f.is_zero()
    }

    pub fn abs(&self) -> Self {
        HReal { f: self.f.clone().abs(), digits: self.digits }
    }

    pub fn floor(&self) -> Self {
        HReal { f: self.f.clone().floor(), digits: self.digits }
    }

    /// Fractional part with the sign of `self`.
    pub fn fract(&self) -> Self {
        HReal { f: self.f.clone().fract(), digits: self.digits }
    }

    pub fn floor_integer(&self) -> Integer {
        self.f
            .clone()
            .floor()
            .to_integer()
            .expect("floor of a finite value is an integer")
    }

    pub fn ln(&self) -> Self {
        HReal { f: self.f.clone().ln(), digits: self.digits }
    }

    pub fn exp(&self) -> Self {
        HReal { f: self.f.clone().exp(), digits: self.digits }
    }

    pub fn sqrt(&self) -> Self {
        HReal { f: self.f.clone().sqrt(), digits: self.digits }
    }

    pub fn square(&self) -> Self {
        HReal { f: self.f.clone().square(), digits: self.digits }
    }

    pub fn recip(&self) -> Self {
        HReal { f: self.f.clone().recip(), digits: self.digits }
    }

    pub fn sin(&self) -> Self {
        HReal { f: self.f.clone().sin(), digits: self.digits }
    }

    pub fn cos(&self) -> Self {
        HReal { f: self.f.clone().cos(), digits: self.digits }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let bits = self.f.prec();
        let (s, c) = self.f.clone().sin_cos(Float::new(bits));
        (
            HReal { f: s, digits: self.digits },
            HReal { f: c, digits: self.digits },
        )
    }

    /// atan2(self, x) in (-pi, pi].
    pub fn atan2(&self, x: &HReal) -> Self {
        let digits = self.digits.max(x.digits);
        let mut f = self.f.clone();
        f.set_prec(digits_to_bits(digits));
        HReal { f: f.atan2(&x.f), digits }
    }

    /// Decimal rendering with a fixed number of fractional digits, no exponent.
    pub fn to_fixed_string(&self, frac_digits: usize) -> String {
        if !self.f.is_finite() {
            return self.f.to_string();
        }
        let neg = self.f.is_sign_negative() && !self.f.is_zero();
        let a = self.f.clone().abs();
        let scale = Float::with_val(self.f.prec(), 10u32).pow(frac_digits as u32);
        let scaled = (&a * &scale).complete(self.f.prec());
        let n = scaled
            .round()
            .to_integer()
            .expect("finite value rounds to an integer");
        let s = n.to_string();
        let (int_part, frac_part) = if s.len() > frac_digits {
            let split = s.len() - frac_digits;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = frac_digits))
        };
        let sign = if neg { "-" } else { "" };
        if frac_digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Full-precision significant-digit rendering.
    pub fn to_sig_string(&self) -> String {
        let s = self.f.to_string_radix(10, Some(self.digits as usize));
        s
    }
}

use rug::ops::Pow;

impl PartialEq for HReal {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl PartialOrd for HReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.f.partial_cmp(&other.f)
    }
}

impl PartialEq<f64> for HReal {
    fn eq(&self, other: &f64) -> bool {
        self.f == *other
    }
}

impl PartialOrd<f64> for HReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.f.partial_cmp(other)
    }
}

impl fmt::Display for HReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sig_string())
    }
}

macro_rules! hreal_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&HReal> for &HReal {
            type Output = HReal;
            fn $method(self, rhs: &HReal) -> HReal {
                let digits = self.digits.max(rhs.digits);
                HReal {
                    f: (&self.f $op &rhs.f).complete(digits_to_bits(digits)),
                    digits,
                }
            }
        }
    };
}

hreal_binop!(Add, add, +);
hreal_binop!(Sub, sub, -);
hreal_binop!(Mul, mul, *);
hreal_binop!(Div, div, /);

macro_rules! hreal_scalar_op {
    ($scalar:ty) => {
        impl Mul<$scalar> for &HReal {
            type Output = HReal;
            fn mul(self, rhs: $scalar) -> HReal {
                HReal {
                    f: (&self.f * rhs).complete(self.f.prec()),
                    digits: self.digits,
                }
            }
        }
        impl Div<$scalar> for &HReal {
            type Output = HReal;
            fn div(self, rhs: $scalar) -> HReal {
                HReal {
                    f: (&self.f / rhs).complete(self.f.prec()),
                    digits: self.digits,
                }
            }
        }
        impl Add<$scalar> for &HReal {
            type Output = HReal;
            fn add(self, rhs: $scalar) -> HReal {
                HReal {
                    f: (&self.f + rhs).complete(self.f.prec()),
                    digits: self.digits,
                }
            }
        }
        impl Sub<$scalar> for &HReal {
            type Output = HReal;
            fn sub(self, rhs: $scalar) -> HReal {
                HReal {
                    f: (&self.f - rhs).complete(self.f.prec()),
                    digits: self.digits,
                }
            }
        }
    };
}

hreal_scalar_op!(f64);
hreal_scalar_op!(u64);
hreal_scalar_op!(i64);

impl Neg for &HReal {
    type Output = HReal;
    fn neg(self) -> HReal {
        HReal { f: (-&self.f).complete(self.f.prec()), digits: self.digits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_carries_max_of_operands() {
        let a = HReal::from_f64(1.5, 40);
        let b = HReal::from_f64(2.5, 80);
        assert_eq!((&a + &b).precision_digits(), 80);
        assert_eq!((&a * &b).precision_digits(), 80);
        assert_eq!(a.precision_digits(), 40);
    }

    #[test]
    fn minimum_precision_enforced() {
        let a = HReal::from_f64(1.0, 5);
        assert_eq!(a.precision_digits(), MIN_DIGITS);
    }

    #[test]
    fn fixed_rendering() {
        let x = HReal::parse("144176897509546973538.30142663", 40).unwrap();
        assert_eq!(x.to_fixed_string(3), "144176897509546973538.301");
        let y = HReal::from_f64(-0.25, 30);
        assert_eq!(y.to_fixed_string(2), "-0.25");
        let z = HReal::from_f64(0.0005, 30);
        assert_eq!(z.to_fixed_string(3), "0.001");
    }

    #[test]
    fn pi_and_two_pi_e() {
        let pi = HReal::pi(40);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let c = HReal::two_pi_e(40);
        assert!((c.to_f64() - 17.079468445347132).abs() < 1e-12);
    }

    #[test]
    fn atan2_quadrants() {
        let one = HReal::from_f64(1.0, 30);
        let neg = HReal::from_f64(-1.0, 30);
        let v = one.atan2(&neg).to_f64();
        assert!((v - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }
}
