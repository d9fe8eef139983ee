//! Prime-sum objects built on the finite Euler product: the cosine series
//! B_N(t), truncated products and their logarithms, the truncation-error
//! estimate, and the zeta argument a(t) computed from primes.
//!
//! Phases cos/sin(t log p) at huge t are computed by reducing t log p
//! modulo 2 pi in full working precision before any trigonometry; the
//! reduced phase is then cheap to evaluate. Every prime sum uses a fixed
//! chunked reduction (2^16-term chunks, chunk results combined left to
//! right) so parallel and serial runs agree bit for bit.

use rayon::prelude::*;
use rug::ops::{AssignRound, CompleteRound, Pow};
use rug::{Assign, Float, Integer};

use crate::error::{Error, Result};
use crate::hpnum::{digits_to_bits, exp_integral_ei, HComplex, HReal};
use crate::primes::PrimeTable;

/// Primes beyond this are never summed even when [t^2] allows more.
pub const PRACTICAL_PRIME_CAP: u64 = 100_000_000;

/// Fixed chunk size of the deterministic reduction tree.
pub const REDUCTION_CHUNK: usize = 1 << 16;

const TAU: f64 = std::f64::consts::TAU;

/// Truncation rule N_c(t) = [t^2] with the practical cap applied.
#[derive(Debug, Clone, Copy, Default)]
pub struct TruncationPolicy {
    /// Explicit prime-count request; `None` means "as many as allowed".
    pub requested: Option<u64>,
}

impl TruncationPolicy {
    pub fn new(requested: Option<u64>) -> Self {
        TruncationPolicy { requested }
    }

    /// Effective N = min(requested, [t^2], practical cap).
    pub fn effective_n(&self, t: &HReal) -> Result<u64> {
        let cap = truncation_cap(t)?;
        Ok(match self.requested {
            Some(r) => r.min(cap),
            None => cap,
        })
    }
}

/// Integer part of t^2, exactly, before any practical cap.
pub fn truncation_cap_exact(t: &HReal) -> Result<Integer> {
    if !(t.to_f64() > 1.0) {
        return Err(Error::domain(
            "truncation_cap",
            format!("t = {} must exceed 1", t.to_f64()),
        ));
    }
    Ok(t.square().floor_integer())
}

/// [t^2] saturated at the practical prime cap of 10^8.
pub fn truncation_cap(t: &HReal) -> Result<u64> {
    let exact = truncation_cap_exact(t)?;
    Ok(exact.to_u64().unwrap_or(u64::MAX).min(PRACTICAL_PRIME_CAP))
}

/// Deterministic chunked sum of f(0..n) in f64. Chunks of
/// `REDUCTION_CHUNK` terms are summed left to right internally and chunk
/// results are folded in chunk order, so the float rounding sequence does
/// not depend on the rayon thread count.
pub fn chunked_sum_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let n_chunks = n.div_ceil(REDUCTION_CHUNK);
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * REDUCTION_CHUNK;
            let hi = ((c + 1) * REDUCTION_CHUNK).min(n);
            let mut s = 0.0;
            for i in lo..hi {
                s += f(i);
            }
            s
        })
        .collect();
    partials.into_iter().sum()
}

fn chunked_fold_complex<F>(n: usize, bits: u32, product: bool, f: F) -> HComplex
where
    F: Fn(usize) -> HComplex + Sync,
{
    let n_chunks = n.div_ceil(REDUCTION_CHUNK);
    let digits = (bits as f64 / 3.3219) as u32;
    let unit = if product {
        HComplex::from_f64(1.0, 0.0, digits)
    } else {
        HComplex::zero(digits)
    };
    let partials: Vec<HComplex> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * REDUCTION_CHUNK;
            let hi = ((c + 1) * REDUCTION_CHUNK).min(n);
            let mut acc = unit.clone();
            for i in lo..hi {
                let term = f(i);
                acc = if product { &acc * &term } else { &acc + &term };
            }
            acc
        })
        .collect();
    partials.into_iter().fold(unit, |acc, p| {
        if product {
            &acc * &p
        } else {
            &acc + &p
        }
    })
}

/// Reduced phase (t log p) mod 2 pi as an f64 in [0, 2 pi), with the
/// reduction done at full precision.
fn reduce_phase_f64(t_over_2pi: &Float, log_p: &Float, scratch: &mut Float) -> f64 {
    scratch.assign_round(t_over_2pi * log_p, rug::float::Round::Nearest);
    scratch.fract_mut();
    let u = scratch.to_f64();
    u * TAU
}

/// Reduced phase at working precision, for terms evaluated in full MPFR.
fn reduce_phase_full(t_over_2pi: &Float, log_p: &Float, work_bits: u32) -> Float {
    let bits = t_over_2pi.prec().max(log_p.prec());
    let mut u = (t_over_2pi * log_p).complete(bits);
    u.fract_mut();
    let mut out = Float::new(work_bits);
    out.assign_round(&u, rug::float::Round::Nearest);
    out * TAU
}

fn t_over_2pi(t: &HReal, table: &PrimeTable) -> Float {
    let bits = t
        .as_float()
        .prec()
        .max(digits_to_bits(table.log_digits()))
        + 8;
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    (t.as_float() / two_pi).complete(bits)
}

/// B_n(t) = sum_{k<=n} cos(t log p_k), the actual term-by-term series.
pub fn b_n_series(t: &HReal, table: &PrimeTable, n: usize) -> HReal {
    assert!(n <= table.count(), "n exceeds the prime table");
    let t2p = t_over_2pi(t, table);
    let sum = chunked_sum_f64(n, |k| {
        let mut scratch = Float::new(t2p.prec());
        reduce_phase_f64(&t2p, table.log_float(k), &mut scratch).cos()
    });
    HReal::from_f64(sum, t.precision_digits())
}

/// Closed-form estimate of B_N from the prime number theorem:
/// (p_N / log p_N) * (t / (1 + t^2)) * sin(t log p_N).
pub fn b_n_pnt_estimate(t: &HReal, table: &PrimeTable, n: usize) -> Result<HReal> {
    if !(t.to_f64() >= 10.0) {
        return Err(Error::domain(
            "b_n_pnt_estimate",
            format!("t = {} below asymptotic regime t >= 10", t.to_f64()),
        ));
    }
    if n < 100 || n > table.count() {
        return Err(Error::domain(
            "b_n_pnt_estimate",
            format!("n = {n} outside [100, table.count]"),
        ));
    }
    let digits = t.precision_digits();
    let p = HReal::from_u64(table.prime(n - 1), digits);
    let log_p = table.log(n - 1).with_precision(digits);
    let t2p = t_over_2pi(t, table);
    let theta = HReal::from_float(
        reduce_phase_full(&t2p, table.log_float(n - 1), t.as_float().prec()),
        digits,
    );
    let amp = &(&p / &log_p) * &(t / &(&t.square() + 1u64));
    Ok(&amp * &theta.sin())
}

fn check_product_domain(s: &HComplex, table: &PrimeTable, n: usize) -> Result<()> {
    if !(s.re().to_f64() > 0.0) {
        return Err(Error::domain(
            "zeta_n_product",
            format!("Re(s) = {} must be positive", s.re().to_f64()),
        ));
    }
    if s.re().is_zero() && s.im().is_zero() {
        return Err(Error::domain("zeta_n_product", "s must be nonzero"));
    }
    if n > table.count() {
        return Err(Error::domain(
            "zeta_n_product",
            format!("n = {n} exceeds table count {}", table.count()),
        ));
    }
    Ok(())
}

/// p^{-sigma} at `bits`, exact when sigma is a small positive integer whose
/// power fits in u64.
fn real_prime_power(p: u64, sigma: &Float, bits: u32) -> Float {
    if let Some(k) = small_int_exponent(sigma) {
        if let Some(pk) = p.checked_pow(k) {
            return Float::with_val(bits, pk).recip();
        }
    }
    let lp = Float::with_val(bits, p).ln();
    (-(sigma * lp).complete(bits)).exp()
}

fn small_int_exponent(sigma: &Float) -> Option<u32> {
    if sigma.is_integer() {
        let v = sigma.to_f64();
        if v >= 1.0 && v <= 9.0 {
            return Some(v as u32);
        }
    }
    None
}

/// One Euler factor argument: z = p^{-s} at working precision, with the
/// phase reduced in full precision.
fn euler_term_z(
    s_re: &Float,
    t2p: &Float,
    table: &PrimeTable,
    k: usize,
    work_bits: u32,
    t_is_zero: bool,
) -> HComplex {
    let digits = (work_bits as f64 / 3.3219) as u32;
    let r = real_prime_power(table.prime(k), s_re, work_bits);
    if t_is_zero {
        return HComplex::new(
            HReal::from_float(r, digits),
            HReal::zero(digits),
        );
    }
    let theta = reduce_phase_full(t2p, table.log_float(k), work_bits);
    let (sin, cos) = theta.sin_cos(Float::new(work_bits));
    // p^{-s} = r e^{-i t log p}
    HComplex::new(
        HReal::from_float((&r * &cos).complete(work_bits), digits),
        HReal::from_float(-(r * sin), digits),
    )
}

/// Finite Euler product prod_{k<=n} (1 - p_k^{-s})^{-1} at working precision.
pub fn zeta_n_product(s: &HComplex, table: &PrimeTable, n: usize) -> Result<HComplex> {
    check_product_domain(s, table, n)?;
    let digits = s.precision_digits();
    let work_bits = digits_to_bits(digits);
    let t_is_zero = s.im().is_zero();
    let t2p = t_over_2pi(s.im(), table);
    let s_re = s.re().as_float().clone();
    let underflow = Float::with_val(32, 10u32).pow(-(digits as i32));

    // pole guard: any factor with |1 - p^{-s}| below 10^-digits
    let z0 = euler_term_z(&s_re, &t2p, table, 0, work_bits, t_is_zero);
    let one = HComplex::from_f64(1.0, 0.0, digits);
    if (&one - &z0).abs().as_float() < &underflow {
        return Err(Error::Pole {
            op: "zeta_n_product",
            detail: format!("|1 - 2^(-s)| underflows at s = {s}"),
        });
    }

    let value = chunked_fold_complex(n, work_bits, true, |k| {
        let z = euler_term_z(&s_re, &t2p, table, k, work_bits, t_is_zero);
        (&one - &z).recip()
    });
    Ok(value)
}

/// -sum_{k<=n} log(1 - p_k^{-s}), each term on the principal branch.
pub fn log_zeta_n(s: &HComplex, table: &PrimeTable, n: usize) -> Result<HComplex> {
    check_product_domain(s, table, n)?;
    let digits = s.precision_digits();
    let work_bits = digits_to_bits(digits);
    let t_is_zero = s.im().is_zero();
    let t2p = t_over_2pi(s.im(), table);
    let s_re = s.re().as_float().clone();
    let one = HComplex::from_f64(1.0, 0.0, digits);
    let value = chunked_fold_complex(n, work_bits, false, |k| {
        let z = euler_term_z(&s_re, &t2p, table, k, work_bits, t_is_zero);
        -&(&one - &z).ln()
    });
    Ok(value)
}

/// Closed-form truncation-error estimate
/// R_N(s) = N^{1-s} / ((s-1) log^s N), implied constant 1.
pub fn r_n_estimate(s: &HComplex, n: u64) -> Result<HComplex> {
    if n < 16 {
        return Err(Error::domain("r_n_estimate", format!("n = {n} below 16")));
    }
    let digits = s.precision_digits();
    let s_minus_1 = s - &HComplex::from_f64(1.0, 0.0, digits);
    if s_minus_1.abs().to_f64() < 1e-12 {
        return Err(Error::Pole {
            op: "r_n_estimate",
            detail: "s = 1".into(),
        });
    }
    let ln_n = HReal::from_u64(n, digits).ln();
    let ln_ln_n = ln_n.ln();
    // exp((1-s) ln N - s ln ln N) / (s - 1)
    let one_minus_s = -&s_minus_1;
    let exponent = &one_minus_s.scale(&ln_n) - &s.scale(&ln_ln_n);
    Ok(&exponent.exp() / &s_minus_1)
}

/// Argument of zeta on the critical line computed from primes alone:
/// a(t) = -(1/pi) Im sum_{k<=N} log(1 - p_k^{-(1/2 + delta + i t)}).
#[derive(Debug, Clone)]
pub struct ArgResult {
    /// a(t): smooth plus fluctuating part, in units of pi.
    pub value: HReal,
    /// Primes actually summed after the truncation cap.
    pub n_used: u64,
    pub delta: HReal,
    pub smooth_part: HReal,
    pub fluctuating_part: HReal,
}

/// The prime-sum side of the zeta argument. The requested n is clamped to
/// min(table.count, [t^2], practical cap); the clamped count is reported in
/// `n_used`. The smooth part comes from `a_pnt` for t >= 10 and is zero
/// below the Ei regime.
pub fn a_euler(t: &HReal, delta: &HReal, table: &PrimeTable, n: usize) -> Result<ArgResult> {
    if !(delta.to_f64() > 0.0) {
        return Err(Error::domain(
            "a_euler",
            format!("delta = {} must be positive", delta.to_f64()),
        ));
    }
    let n_eff = (n as u64)
        .min(truncation_cap(t)?)
        .min(table.count() as u64) as usize;
    let digits = t.precision_digits();
    let t2p = t_over_2pi(t, table);
    let sum = arg_prime_sum(&t2p, table, n_eff, delta.to_f64());
    let pi = HReal::pi(digits);
    let value = &HReal::from_f64(-sum, digits) / &pi;

    let smooth_part = if t.to_f64() >= 10.0 && n_eff >= 1 {
        let p_max = HReal::from_u64(table.prime(n_eff - 1), digits);
        a_pnt(t, &p_max)?
    } else {
        HReal::zero(digits)
    };
    let fluctuating_part = &value - &smooth_part;
    Ok(ArgResult {
        value,
        n_used: n_eff as u64,
        delta: delta.clone(),
        smooth_part,
        fluctuating_part,
    })
}

/// Sum over primes of Im log(1 - p^{-(1/2+delta+it)}) with full-precision
/// phase reduction; the trigonometry of the reduced phase runs in f64,
/// which resolves far below the 1e-8 pi residual target.
fn arg_prime_sum(t2p: &Float, table: &PrimeTable, n: usize, delta: f64) -> f64 {
    let sigma = 0.5 + delta;
    chunked_sum_f64(n, |k| {
        let mut scratch = Float::new(t2p.prec());
        let theta = reduce_phase_f64(t2p, table.log_float(k), &mut scratch);
        let r = (table.prime(k) as f64).powf(-sigma);
        let (sin, cos) = theta.sin_cos();
        (r * sin).atan2(1.0 - r * cos)
    })
}

/// Smooth part of a(t) from the prime number theorem:
/// (1/pi) Im( Ei((1/2 - i t) log p_max) - Ei((1/2 - i t) log 2) ).
pub fn a_pnt(t: &HReal, p_max: &HReal) -> Result<HReal> {
    if !(t.to_f64() >= 10.0) {
        return Err(Error::domain(
            "a_pnt",
            format!("t = {} below asymptotic regime t >= 10", t.to_f64()),
        ));
    }
    let digits = t.precision_digits();
    let half = HReal::from_f64(0.5, digits);
    let s = HComplex::new(half, -t);
    let hi = s.scale(&p_max.ln());
    let lo = s.scale(&HReal::from_u64(2, digits).ln());
    let v = &exp_integral_ei(&hi)? - &exp_integral_ei(&lo)?;
    Ok(&v.im().clone() / &HReal::pi(digits))
}

/// Precomputed phase state for fast repeated evaluation of the prime sums
/// at t = t_base + dt while a root finder moves dt around the seed.
///
/// The expensive full-precision reductions frac(t_base log p / 2 pi) are
/// done once; each evaluation then only needs f64 work per prime. dt stays
/// within a few mean zero spacings, so dt * log p carries no cancellation.
pub(crate) struct PhaseBaseline {
    us: Vec<f64>,
    mus: Vec<f64>,
    rs: Vec<f64>,
}

impl PhaseBaseline {
    pub(crate) fn build(t_base: &Float, table: &PrimeTable, n: usize, delta: f64) -> Self {
        assert!(n <= table.count());
        let bits = t_base.prec().max(digits_to_bits(table.log_digits())) + 8;
        let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
        let t2p = (t_base / two_pi).complete(bits);
        let sigma = 0.5 + delta;
        let n_chunks = n.div_ceil(REDUCTION_CHUNK);
        let per_chunk: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * REDUCTION_CHUNK;
                let hi = ((c + 1) * REDUCTION_CHUNK).min(n);
                let mut us = Vec::with_capacity(hi - lo);
                let mut mus = Vec::with_capacity(hi - lo);
                let mut rs = Vec::with_capacity(hi - lo);
                let mut scratch = Float::new(bits);
                for k in lo..hi {
                    scratch.assign_round(&t2p * table.log_float(k), rug::float::Round::Nearest);
                    scratch.fract_mut();
                    us.push(scratch.to_f64());
                    let p = table.prime(k) as f64;
                    mus.push(p.ln() / TAU);
                    rs.push(p.powf(-sigma));
                }
                (us, mus, rs)
            })
            .collect();
        let mut us = Vec::with_capacity(n);
        let mut mus = Vec::with_capacity(n);
        let mut rs = Vec::with_capacity(n);
        for (u, m, r) in per_chunk {
            us.extend(u);
            mus.extend(m);
            rs.extend(r);
        }
        PhaseBaseline { us, mus, rs }
    }

    pub(crate) fn len(&self) -> usize {
        self.us.len()
    }

    /// sum_k Im log(1 - p_k^{-(1/2+delta+i(t_base+dt))}).
    pub(crate) fn arg_sum(&self, dt: f64) -> f64 {
        let us = &self.us;
        let mus = &self.mus;
        let rs = &self.rs;
        chunked_sum_f64(self.len(), |k| {
            let u = us[k] + dt * mus[k];
            let theta = (u - u.floor()) * TAU;
            let (sin, cos) = theta.sin_cos();
            (rs[k] * sin).atan2(1.0 - rs[k] * cos)
        })
    }
}
