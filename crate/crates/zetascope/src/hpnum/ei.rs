use super::complex::HComplex;
use super::real::HReal;
use crate::error::{Error, Result};

/// Smallest |z| accepted by the asymptotic evaluation.
pub const EI_MIN_ABS: f64 = 5.0;

/// Exponential integral Ei(z) by its large-|z| asymptotic series,
/// truncated at the smallest term:
///
///   Ei(z) = e^z/z * (1 + 1!/z + 2!/z^2 + ...) + i*pi*sgn(Im z)
///
/// The i*pi term is the continuation constant off the real axis; on the
/// real axis the principal-value (real) convention applies.
pub fn exp_integral_ei(z: &HComplex) -> Result<HComplex> {
    ei_impl(z, None)
}

/// Same series with the truncation point forced; for accuracy experiments.
pub fn ei_asymptotic_with_terms(z: &HComplex, terms: usize) -> Result<HComplex> {
    ei_impl(z, Some(terms))
}

fn ei_impl(z: &HComplex, forced_terms: Option<usize>) -> Result<HComplex> {
    let digits = z.precision_digits();
    let abs = z.abs().to_f64();
    if !abs.is_finite() || abs < EI_MIN_ABS {
        return Err(Error::domain(
            "exp_integral_ei",
            format!("|z| = {abs:.3} is below the asymptotic regime |z| >= {EI_MIN_ABS}"),
        ));
    }

    let one = HComplex::from_f64(1.0, 0.0, digits);
    let inv_z = z.recip();
    let mut term = one.clone();
    let mut sum = one;
    let mut last_mag = 1.0f64;
    let cap = forced_terms.unwrap_or_else(|| abs.floor() as usize + 1);
    for k in 1..=cap {
        let kf = HReal::from_u64(k as u64, digits);
        term = (&term * &inv_z).scale(&kf);
        let mag = term.abs().to_f64();
        if forced_terms.is_none() && mag >= last_mag {
            // past the smallest term; stop without adding
            break;
        }
        sum = &sum + &term;
        last_mag = mag;
    }

    let mut out = &(&z.exp() * &inv_z) * &sum;
    let im_sign = if z.im().is_zero() {
        0.0
    } else if z.im().is_sign_negative() {
        -1.0
    } else {
        1.0
    };
    if im_sign != 0.0 {
        let pi = HReal::pi(digits);
        out = &out + &HComplex::new(HReal::zero(digits), &pi * im_sign);
    }
    Ok(out)
}
