//! Evaluation of the Airy function Ai and its derivatives.
//!
//! Ai solves `y'' = x y` with the standard normalization
//! `Ai(0) = 3^(-2/3)/Γ(2/3)`. Two branches cover the real line:
//!
//! * `|x| <= 9`: Maclaurin series, two-term recurrences, accumulated in
//!   double-double arithmetic (see [`crate::dd`] for why f64 is not enough
//!   near the switch point);
//! * `|x| > 9`: Poincaré asymptotic expansions with optimal truncation —
//!   the exponentially decaying form on the positive axis, the sine/cosine
//!   pair on the negative axis.
//!
//! Below [`AI_DOMAIN_FLOOR`] the phase `(2/3)|x|^(3/2)` can no longer be
//! reduced accurately in f64 and the functions report a domain error
//! instead of degrading silently.

use num_complex::Complex64;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, WaveField};

/// Series/asymptotic switch point.
const X_SWITCH: f64 = 9.0;

/// Arguments below this are rejected: sin/cos argument reduction of the
/// oscillation phase loses the accuracy contract past |x| ~ 1e4.
pub const AI_DOMAIN_FLOOR: f64 = -1.0e4;

/// Ai(0) = 3^(-2/3)/Γ(2/3), double-double.
const AI_0: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
/// Ai'(0) = -3^(-1/3)/Γ(1/3), double-double.
const AIP_0: Dd = Dd { hi: -0.2588194037928068, lo: 2.522243111610832e-17 };

/// First (largest) zero of Ai on the negative axis.
pub const AI_FIRST_ZERO: f64 = -2.3381074104597670;

/// Location of the first extremum of Ai (the global maximum of Ai²).
pub const AI_FIRST_EXTREMUM: f64 = -1.0187929716474711;

/// Value and first derivative of Ai at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryEval {
    pub value: f64,
    pub derivative: f64,
}

fn check_domain(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Airy argument must be finite, got {x}")));
    }
    if x < AI_DOMAIN_FLOOR {
        return Err(Error::Domain(format!(
            "Airy argument {x} below supported floor {AI_DOMAIN_FLOOR}"
        )));
    }
    Ok(())
}

/// Airy function of the first kind.
pub fn ai(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x.abs() <= X_SWITCH {
        Ok(ai_series(x))
    } else if x > 0.0 {
        Ok(ai_asymptotic_pos(x))
    } else {
        Ok(ai_asymptotic_neg(x))
    }
}

/// Derivative Ai'(x).
pub fn ai_prime(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x.abs() <= X_SWITCH {
        Ok(ai_prime_series(x))
    } else if x > 0.0 {
        Ok(ai_prime_asymptotic_pos(x))
    } else {
        Ok(ai_prime_asymptotic_neg(x))
    }
}

/// Second derivative Ai''(x), computed from the same series/asymptotic
/// machinery as `ai` — not from the defining relation `Ai'' = x Ai` and not
/// from finite differences — so that the residual `|ai_second(x) - x*ai(x)|`
/// is a meaningful consistency check of the evaluator.
pub fn ai_second(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x.abs() <= X_SWITCH {
        Ok(ai_second_series(x))
    } else if x > 0.0 {
        Ok(ai_second_asymptotic_pos(x))
    } else {
        Ok(ai_second_asymptotic_neg(x))
    }
}

/// Value and derivative in one call.
pub fn airy_eval(x: f64) -> Result<AiryEval> {
    Ok(AiryEval { value: ai(x)?, derivative: ai_prime(x)? })
}

/// Samples the packet `Ai(b*(x_i - x_shift))` on `grid` (zero imaginary part).
pub fn ai_packet(b: f64, x_shift: f64, grid: &GridSpec) -> Result<WaveField> {
    if !(b > 0.0) {
        return Err(Error::Parameter(format!("ai_packet requires b > 0, got {b}")));
    }
    let amplitudes = grid
        .points()
        .map(|x| ai(b * (x - x_shift)).map(|v| Complex64::new(v, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    WaveField::new(*grid, amplitudes)
}

// ---------------------------------------------------------------------------
// Maclaurin branch, |x| <= X_SWITCH.
//
// Ai(x) = Ai(0) f(x) + Ai'(0) g(x) with
//   f = sum f_k x^{3k},     f_0 = 1, f_k = f_{k-1} / ((3k-1)(3k)),
//   g = sum g_k x^{3k+1},   g_0 = 1, g_k = g_{k-1} / ((3k)(3k+1)).
// ---------------------------------------------------------------------------

const MAX_SERIES_TERMS: usize = 90;

/// Runs both series recurrences, feeding each term through `absorb(k, f_term, g_term)`.
fn series_sweep(x: f64, mut absorb: impl FnMut(usize, Dd, Dd)) {
    let xd = Dd::from_f64(x);
    let x3 = xd.mul(xd).mul(xd);
    let mut f_term = Dd::from_f64(1.0);
    let mut g_term = xd;
    absorb(0, f_term, g_term);
    for k in 1..MAX_SERIES_TERMS {
        f_term = f_term.mul(x3).div_f64(((3 * k - 1) * (3 * k)) as f64);
        g_term = g_term.mul(x3).div_f64(((3 * k) * (3 * k + 1)) as f64);
        absorb(k, f_term, g_term);
        if f_term.hi.abs() < 1e-40 && g_term.hi.abs() < 1e-40 {
            break;
        }
    }
}

fn ai_series(x: f64) -> f64 {
    let mut f_sum = Dd::ZERO;
    let mut g_sum = Dd::ZERO;
    series_sweep(x, |_, f, g| {
        f_sum = f_sum.add(f);
        g_sum = g_sum.add(g);
    });
    AI_0.mul(f_sum).add(AIP_0.mul(g_sum)).to_f64()
}

fn ai_prime_series(x: f64) -> f64 {
    if x == 0.0 {
        return AIP_0.to_f64();
    }
    // f'(x) = sum f_k (3k) x^{3k-1}, g'(x) = sum g_k (3k+1) x^{3k}.
    let mut fp_sum = Dd::ZERO;
    let mut gp_sum = Dd::ZERO;
    series_sweep(x, |k, f, g| {
        if k > 0 {
            fp_sum = fp_sum.add(f.mul_f64((3 * k) as f64).div_f64(x));
        }
        gp_sum = gp_sum.add(g.mul_f64((3 * k + 1) as f64).div_f64(x));
    });
    AI_0.mul(fp_sum).add(AIP_0.mul(gp_sum)).to_f64()
}

fn ai_second_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // both second-derivative series start at x^1
    }
    // f''(x) = sum f_k (3k)(3k-1) x^{3k-2}, g''(x) = sum g_k (3k+1)(3k) x^{3k-1}.
    let x2 = x * x;
    let mut fpp_sum = Dd::ZERO;
    let mut gpp_sum = Dd::ZERO;
    series_sweep(x, |k, f, g| {
        if k > 0 {
            fpp_sum = fpp_sum.add(f.mul_f64((3 * k * (3 * k - 1)) as f64).div_f64(x2));
            gpp_sum = gpp_sum.add(g.mul_f64(((3 * k + 1) * 3 * k) as f64).div_f64(x2));
        }
    });
    AI_0.mul(fpp_sum).add(AIP_0.mul(gpp_sum)).to_f64()
}

// ---------------------------------------------------------------------------
// Asymptotic branch, |x| > X_SWITCH.
//
// With z = |x|, zeta = (2/3) z^{3/2} and the standard coefficients
//   u_0 = 1, u_{k+1} = u_k (6k+5)(6k+3)(6k+1) / (216 (2k+1)(k+1)),
//   v_k = u_k (6k+1)/(1-6k),
// the expansions used are
//   Ai(z)   =  e^{-zeta}/(2 sqrt(pi) z^{1/4}) * sum (-1)^k u_k zeta^{-k}
//   Ai'(z)  = -z^{1/4} e^{-zeta}/(2 sqrt(pi)) * sum (-1)^k v_k zeta^{-k}
//   Ai(-z)  =  [cos(th) P_u + sin(th) Q_u] / (sqrt(pi) z^{1/4})
//   Ai'(-z) =  z^{1/4} [sin(th) P_v - cos(th) Q_v] / sqrt(pi)
// with th = zeta - pi/4, P_c = sum (-1)^k c_{2k} zeta^{-2k} and
// Q_c = sum (-1)^k c_{2k+1} zeta^{-2k-1}. Sums are truncated at the
// smallest term (optimal truncation).
// ---------------------------------------------------------------------------

const N_ASYM: usize = 48;

/// First `N_ASYM` coefficients u_k (or v_k when `prime` is set).
fn asym_coefficients(prime: bool) -> [f64; N_ASYM] {
    let mut c = [0.0; N_ASYM];
    let mut u = 1.0_f64;
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = if prime && k > 0 { u * (6 * k + 1) as f64 / (1 - 6 * k as i64) as f64 } else { u };
        let kf = k as f64;
        u *= (6.0 * kf + 5.0) * (6.0 * kf + 3.0) * (6.0 * kf + 1.0)
            / (216.0 * (2.0 * kf + 1.0) * (kf + 1.0));
    }
    c
}

/// `sum (-1)^k c_k zeta^{-k}` truncated at the smallest term.
fn alternating_sum(zeta: f64, coeffs: &[f64]) -> f64 {
    let zinv = 1.0 / zeta;
    let mut total = 0.0;
    let mut zp = 1.0;
    let mut sign = 1.0;
    let mut prev = f64::INFINITY;
    for &c in coeffs {
        let t = c * zp;
        if t.abs() > prev {
            break; // divergence onset: stop at the optimal truncation point
        }
        total += sign * t;
        prev = t.abs();
        sign = -sign;
        zp *= zinv;
        if t.abs() < 1e-18 * total.abs() {
            break;
        }
    }
    total
}

/// Even/odd split sums for the oscillatory branch, with d/d(zeta) companions:
/// returns (P, Q, P', Q').
fn oscillatory_sums(zeta: f64, coeffs: &[f64]) -> (f64, f64, f64, f64) {
    let zinv = 1.0 / zeta;
    let zinv2 = zinv * zinv;

    let mut p = 0.0;
    let mut pp = 0.0;
    let mut zp = 1.0;
    let mut sign = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..coeffs.len() / 2 {
        let t = coeffs[2 * k] * zp;
        if t.abs() > prev {
            break;
        }
        p += sign * t;
        pp += sign * t * (-2.0 * k as f64) * zinv;
        prev = t.abs();
        sign = -sign;
        zp *= zinv2;
        if t.abs() < 1e-18 * p.abs() {
            break;
        }
    }

    let mut q = 0.0;
    let mut qp = 0.0;
    let mut zp = zinv;
    let mut sign = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..coeffs.len() / 2 - 1 {
        let t = coeffs[2 * k + 1] * zp;
        if t.abs() > prev {
            break;
        }
        q += sign * t;
        qp += sign * t * (-(2.0 * k as f64 + 1.0)) * zinv;
        prev = t.abs();
        sign = -sign;
        zp *= zinv2;
        if t.abs() < 1e-18 * q.abs() {
            break;
        }
    }

    (p, q, pp, qp)
}

const SQRT_PI: f64 = 1.7724538509055160273;

fn ai_asymptotic_pos(x: f64) -> f64 {
    let zeta = (2.0 / 3.0) * x.powf(1.5);
    let s = alternating_sum(zeta, &asym_coefficients(false));
    (-zeta).exp() / (2.0 * SQRT_PI * x.powf(0.25)) * s
}

fn ai_prime_asymptotic_pos(x: f64) -> f64 {
    let zeta = (2.0 / 3.0) * x.powf(1.5);
    let s = alternating_sum(zeta, &asym_coefficients(true));
    -x.powf(0.25) * (-zeta).exp() / (2.0 * SQRT_PI) * s
}

fn ai_second_asymptotic_pos(x: f64) -> f64 {
    // d/dz of the Ai' expansion: d(zeta)/dz = sqrt(z).
    let zeta = (2.0 / 3.0) * x.powf(1.5);
    let coeffs = asym_coefficients(true);
    let zinv = 1.0 / zeta;
    let mut s = 0.0;
    let mut sp = 0.0; // dS/d(zeta)
    let mut zp = 1.0;
    let mut sign = 1.0;
    let mut prev = f64::INFINITY;
    for (k, &c) in coeffs.iter().enumerate() {
        let t = c * zp;
        if t.abs() > prev {
            break;
        }
        s += sign * t;
        sp += sign * t * (-(k as f64)) * zinv;
        prev = t.abs();
        sign = -sign;
        zp *= zinv;
        if t.abs() < 1e-18 * s.abs() {
            break;
        }
    }
    let e = (-zeta).exp();
    // Ai'' = -(1/(2 sqrt(pi))) d/dz [ z^{1/4} e^{-zeta} S(zeta) ]
    -(0.25 * x.powf(-0.75) * e * s + x.powf(0.75) * e * (sp - s)) / (2.0 * SQRT_PI)
}

fn ai_asymptotic_neg(x: f64) -> f64 {
    let z = -x;
    let zeta = (2.0 / 3.0) * z.powf(1.5);
    let (p, q, _, _) = oscillatory_sums(zeta, &asym_coefficients(false));
    let th = zeta - std::f64::consts::FRAC_PI_4;
    (th.cos() * p + th.sin() * q) / (SQRT_PI * z.powf(0.25))
}

fn ai_prime_asymptotic_neg(x: f64) -> f64 {
    let z = -x;
    let zeta = (2.0 / 3.0) * z.powf(1.5);
    let (p, q, _, _) = oscillatory_sums(zeta, &asym_coefficients(true));
    let th = zeta - std::f64::consts::FRAC_PI_4;
    z.powf(0.25) * (th.sin() * p - th.cos() * q) / SQRT_PI
}

fn ai_second_asymptotic_neg(x: f64) -> f64 {
    // Ai''(x) = -d/dz Ai'(-z) with the P_v/Q_v sums differentiated in zeta.
    let z = -x;
    let zeta = (2.0 / 3.0) * z.powf(1.5);
    let (p, q, pp, qp) = oscillatory_sums(zeta, &asym_coefficients(true));
    let th = zeta - std::f64::consts::FRAC_PI_4;
    let (s, c) = th.sin_cos();
    let term = 0.25 * z.powf(-0.75) * (s * p - c * q) + z.powf(0.75) * (c * (p - qp) + s * (pp + q));
    -term / SQRT_PI
}
