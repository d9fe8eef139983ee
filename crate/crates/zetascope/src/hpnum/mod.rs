//! Arbitrary-precision scalar kernel and the special functions the
//! transcendental-equation machinery needs: Lambert W, the exponential
//! integral in its asymptotic regime, and the Riemann-Siegel theta expansion.

mod complex;
mod ei;
mod lambert;
mod real;
mod theta;

pub use complex::HComplex;
pub use ei::{ei_asymptotic_with_terms, exp_integral_ei, EI_MIN_ABS};
pub use lambert::lambert_w0;
pub use real::{HReal, MIN_DIGITS};
pub use theta::{riemann_siegel_theta, riemann_siegel_theta_extended, theta_derivative};

pub(crate) use real::digits_to_bits;

/// Rule fixing the working precision of a computation at height t:
/// decimal digits of the integer part of t, plus the trusted fractional
/// digits, plus guard digits for cancellation in theta(t) - (n - 3/2) pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub target_fractional_digits: u32,
    pub guard_digits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { target_fractional_digits: 12, guard_digits: 20 }
    }
}

impl PrecisionPolicy {
    pub fn new(target_fractional_digits: u32, guard_digits: u32) -> Self {
        PrecisionPolicy { target_fractional_digits, guard_digits }
    }

    /// Working precision for a value whose integer part has `int_digits` digits.
    pub fn working_digits(&self, int_digits: u32) -> u32 {
        (int_digits + self.target_fractional_digits + self.guard_digits).max(MIN_DIGITS)
    }

    /// Working precision for computations around the n-th zero; the ordinate's
    /// integer part never has more digits than n itself.
    pub fn working_digits_for_index(&self, n: &rug::Integer) -> u32 {
        let int_digits = n.to_string().trim_start_matches('-').len() as u32;
        self.working_digits(int_digits)
    }

    /// Precision for stored prime logarithms feeding phase reduction at
    /// height t: digits of t plus 15.
    pub fn log_digits(&self, int_digits: u32) -> u32 {
        (int_digits + 15).max(MIN_DIGITS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn policy_defaults() {
        let p = PrecisionPolicy::default();
        assert_eq!(p.target_fractional_digits, 12);
        assert_eq!(p.guard_digits, 20);
        assert_eq!(p.working_digits(1), 33);
        let googol = Integer::from(10u32).pow(100);
        assert_eq!(p.working_digits_for_index(&googol), 101 + 32);
    }

    #[test]
    fn precision_monotonicity() {
        // +10 digits moves results by less than 10^-target_fractional_digits
        let policy = PrecisionPolicy::default();
        let d0 = policy.working_digits(3);
        for f in [
            |t: &HReal| riemann_siegel_theta(t).unwrap(),
            |t: &HReal| theta_derivative(t).unwrap(),
            |t: &HReal| lambert_w0(t).unwrap(),
        ] {
            let a = f(&HReal::from_f64(137.0, d0));
            let b = f(&HReal::from_f64(137.0, d0 + 10));
            assert!((&a - &b).abs().to_f64() < 1e-12);
        }
    }
}
