use rug::ops::CompleteRound;
use rug::Float;

use super::real::{digits_to_bits, HReal};
use crate::error::{Error, Result};

/// Principal branch W0 of the Lambert W function, w*exp(w) = x, w >= -1.
///
/// Halley iteration; the seed is log(x) - log(log(x)) for large x, a
/// branch-point series near x = -1/e, and log(1+x) in between.
pub fn lambert_w0(x: &HReal) -> Result<HReal> {
    let digits = x.precision_digits();
    let bits = digits_to_bits(digits);
    let xf = x.as_float();

    let e = Float::with_val(bits, 1u32).exp();
    // ex + 1 < 0 means x < -1/e
    let ex1 = (xf * &e).complete(bits) + 1u32;
    if ex1 < 0u32 {
        return Err(Error::domain(
            "lambert_w0",
            format!("x = {} is below -1/e", x.to_f64()),
        ));
    }
    if ex1 == 0u32 {
        return Ok(HReal::from_f64(-1.0, digits));
    }
    if xf.is_zero() {
        return Ok(HReal::zero(digits));
    }

    let mut w: Float = if *xf > e {
        // log(x) - log(log(x)) + log(log(x))/log(x)
        let l1 = xf.clone().ln();
        let l2 = l1.clone().ln();
        (&l1 - &l2).complete(bits) + (&l2 / &l1).complete(bits)
    } else if *xf >= -0.2 {
        xf.clone().ln_1p()
    } else {
        // branch-point series in p = sqrt(2(ex+1))
        let p = (Float::with_val(bits, 2u32) * &ex1).sqrt();
        let p2 = p.clone().square();
        let p3 = (&p2 * &p).complete(bits);
        Float::with_val(bits, -1) + &p - p2 / 3u32 + p3 * 11u32 / 72u32
    };

    // relative step threshold 10^(-digits)
    let tol = Float::with_val(bits, 10u32).pow(-(digits as i32));
    let mut converged = false;
    for _ in 0..300 {
        let ew = w.clone().exp();
        let f = (&w * &ew).complete(bits) - xf;
        let wp1 = (&w + 1u32).complete(bits);
        // Halley: w -= f / (e^w (w+1) - (w+2) f / (2(w+1)))
        let denom = (&ew * &wp1).complete(bits)
            - ((&w + 2u32).complete(bits) * &f) / (wp1.clone() * 2u32);
        if denom.is_zero() {
            break;
        }
        let step = f / denom;
        w -= &step;
        let scale = w.clone().abs().max(&Float::with_val(bits, 1e-30f64));
        if step.abs() <= scale * &tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { op: "lambert_w0" });
    }
    Ok(HReal::from_float(w, digits))
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain Newton iteration on w e^w = x, independent of the Halley path.
    fn newton_oracle(x: f64) -> f64 {
        let mut w = if x > 1.0 { x.ln() } else { x / (1.0 + x.max(-0.9)) };
        for _ in 0..200 {
            let ew = w.exp();
            let f = w * ew - x;
            let df = ew * (1.0 + w);
            let step = f / df;
            w -= step;
            if step.abs() < 1e-15 * w.abs().max(1e-12) {
                break;
            }
        }
        w
    }

    #[test]
    fn fixed_points() {
        let zero = lambert_w0(&HReal::zero(40)).unwrap();
        assert!(zero.is_zero());
        let e = HReal::from_f64(1.0, 40).exp();
        let w = lambert_w0(&e).unwrap();
        assert!((w.to_f64() - 1.0).abs() < 1e-30_f64.max(1e-15));
    }

    #[test]
    fn first_zero_seed_argument() {
        // the argument that seeds the first zero: (1 - 11/8)/e = -0.375/e
        let x = -0.375 / std::f64::consts::E;
        let w = lambert_w0(&HReal::from_f64(x, 40)).unwrap().to_f64();
        let oracle = newton_oracle(x);
        assert!((w - oracle).abs() < 1e-12, "w={w} oracle={oracle}");
        assert!((w - (-0.1622)).abs() < 5e-4);
    }

    #[test]
    fn domain_error_below_branch_point() {
        let x = HReal::from_f64(-0.4, 30);
        assert!(matches!(
            lambert_w0(&x),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn near_branch_point() {
        let x = HReal::from_f64(-1.0 / std::f64::consts::E + 1e-6, 40);
        let w = lambert_w0(&x).unwrap();
        let check = (&w * &w.exp()) .to_f64();
        assert!((check - x.to_f64()).abs() < 1e-18);
    }

    #[test]
    fn roundtrip_random_sample() {
        // 100 points over [-1/e, 1000]
        let mut state = 0x1234_5678_u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let u = rnd();
            let x = -1.0 / std::f64::consts::E + u * (1000.0 + 1.0 / std::f64::consts::E);
            let hx = HReal::from_f64(x, 45);
            let w = lambert_w0(&hx).unwrap();
            let back = &w * &w.exp();
            let err = (&back - &hx).abs().to_f64();
            assert!(err <= 1e-40 * x.abs().max(1.0), "x={x} err={err}");
        }
    }
}
