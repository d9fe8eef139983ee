use super::real::HReal;
use crate::error::{Error, Result};

/// Riemann-Siegel theta by its Stirling expansion:
///
///   theta(t) = (t/2) ln(t/(2 pi e)) - pi/8 + 1/(48 t)
///
/// valid for t >= 10 with absolute error O(1/t^3).
pub fn riemann_siegel_theta(t: &HReal) -> Result<HReal> {
    theta_impl(t, false)
}

/// Same expansion with the next Stirling correction 7/(5760 t^3) added;
/// serves as an internal accuracy oracle for the default truncation.
pub fn riemann_siegel_theta_extended(t: &HReal) -> Result<HReal> {
    theta_impl(t, true)
}

fn theta_impl(t: &HReal, extra_term: bool) -> Result<HReal> {
    if !(t.to_f64() >= 10.0) {
        return Err(Error::domain(
            "riemann_siegel_theta",
            format!("t = {} is below the asymptotic range t >= 10", t.to_f64()),
        ));
    }
    let digits = t.precision_digits();
    let pi = HReal::pi(digits);
    let c = HReal::two_pi_e(digits);
    let half_t = t / 2u64;
    let mut th = &(&half_t * &(&(t / &c)).ln()) - &(&pi / 8u64);
    th = &th + &(&(t * 48u64)).recip();
    if extra_term {
        let t3 = &(&t.square() * t) * 5760u64;
        th = &th + &(&t3.recip() * 7u64);
    }
    Ok(th)
}

/// The smooth phase-density approximation (1/2) ln(t/(2 pi e)) used to
/// normalize zero fluctuations. Note the exact derivative of
/// `riemann_siegel_theta` is this value plus 1/2 minus 1/(48 t^2).
pub fn theta_derivative(t: &HReal) -> Result<HReal> {
    let digits = t.precision_digits();
    let c = HReal::two_pi_e(digits);
    if t < &c {
        return Err(Error::domain(
            "theta_derivative",
            format!("t = {} is below 2 pi e", t.to_f64()),
        ));
    }
    Ok(&(&(t / &c)).ln() / 2u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_two_pi_e() {
        // log term vanishes: -pi/8 + 1/(48 * 2 pi e) = -pi/8 + 0.001220...
        let t = HReal::two_pi_e(40);
        let th = riemann_siegel_theta(&t).unwrap().to_f64();
        let expect = -std::f64::consts::PI / 8.0 + 1.0 / (48.0 * 2.0 * std::f64::consts::PI * std::f64::consts::E);
        assert!((th - expect).abs() < 1e-14);
    }

    #[test]
    fn value_at_100_against_extended_oracle() {
        let t = HReal::from_f64(100.0, 40);
        let th = riemann_siegel_theta(&t).unwrap();
        let ext = riemann_siegel_theta_extended(&t).unwrap();
        // next Stirling term is 7/(5760 t^3) ~ 1.2e-9: >= 6 digit agreement
        assert!((&th - &ext).abs().to_f64() < 1e-6);
        assert!((th.to_f64() - 87.9721649).abs() < 1e-6);
    }

    #[test]
    fn derivative_examples() {
        let digits = 40;
        let c = HReal::two_pi_e(digits);
        assert!(theta_derivative(&c).unwrap().to_f64().abs() < 1e-30);
        let e = HReal::from_f64(1.0, digits).exp();
        let t = &c * &e; // 2 pi e^2
        assert!((theta_derivative(&t).unwrap().to_f64() - 0.5).abs() < 1e-14);
        let t100 = HReal::from_f64(100.0, digits);
        assert!((theta_derivative(&t100).unwrap().to_f64() - 0.883648).abs() < 1e-6);
    }

    #[test]
    fn finite_difference_consistency() {
        // (theta(t+h) - theta(t-h))/2h equals the exact derivative
        // theta_derivative(t) + 1/2 - 1/(48 t^2); checked at 60 digits so the
        // cancellation at t = 1e6 leaves plenty of headroom.
        for t0 in [100.0f64, 1e3, 1e6] {
            let digits = 60;
            let t = HReal::from_f64(t0, digits);
            let h = &t * 1e-8f64;
            let hi = riemann_siegel_theta(&(&t + &h)).unwrap();
            let lo = riemann_siegel_theta(&(&t - &h)).unwrap();
            let fd = &(&hi - &lo) / &(&h * 2u64);
            let exact = &(&theta_derivative(&t).unwrap() + 0.5f64)
                - &(&t.square() * 48u64).recip();
            assert!(
                (&fd - &exact).abs().to_f64() < 1e-6,
                "t={t0}: fd={} exact={}",
                fd.to_f64(),
                exact.to_f64()
            );
        }
    }

    #[test]
    fn domain_errors() {
        let t = HReal::from_f64(5.0, 30);
        assert!(riemann_siegel_theta(&t).is_err());
        assert!(theta_derivative(&t).is_err());
    }
}
