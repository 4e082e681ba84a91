//! Exact symbolic algebra over normal-ordered polynomials in x and p with
//! `[x, p] = i*hbar`.
//!
//! Every expression is a finite sum of monomials `x^m p^n` (all x powers to
//! the left), stored as a map `(m, n) -> complex coefficient`. Products are
//! reduced to normal order with the closed-form reordering identity
//!
//! ```text
//! p^n x^m = sum_k k! C(n,k) C(m,k) (-i*hbar)^k x^(m-k) p^(n-k)
//! ```
//!
//! so commutators come out exact up to floating-point rounding of the
//! coefficients. Coefficients below 1e-15 in magnitude are dropped after
//! every rewrite; the zero operator is the empty map.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::physics::PhysicalConstants;

/// Coefficient magnitudes below this are pruned after every operation.
pub const COEFF_EPS: f64 = 1e-15;

/// Normal-ordered complex polynomial in x and p.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr {
    terms: BTreeMap<(u32, u32), Complex64>,
    hbar: f64,
}

impl OperatorExpr {
    pub fn zero(hbar: f64) -> OperatorExpr {
        OperatorExpr { terms: BTreeMap::new(), hbar }
    }

    pub fn scalar(value: Complex64, hbar: f64) -> OperatorExpr {
        OperatorExpr::monomial(0, 0, value, hbar)
    }

    pub fn identity(hbar: f64) -> OperatorExpr {
        OperatorExpr::scalar(Complex64::new(1.0, 0.0), hbar)
    }

    pub fn x(hbar: f64) -> OperatorExpr {
        OperatorExpr::monomial(1, 0, Complex64::new(1.0, 0.0), hbar)
    }

    pub fn p(hbar: f64) -> OperatorExpr {
        OperatorExpr::monomial(0, 1, Complex64::new(1.0, 0.0), hbar)
    }

    /// `coeff * x^m p^n`.
    pub fn monomial(m: u32, n: u32, coeff: Complex64, hbar: f64) -> OperatorExpr {
        let mut terms = BTreeMap::new();
        if coeff.norm() >= COEFF_EPS {
            terms.insert((m, n), coeff);
        }
        OperatorExpr { terms, hbar }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the expression is a multiple of the identity (or zero).
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|&(m, n)| m == 0 && n == 0)
    }

    /// Coefficient of `x^m p^n` (zero when absent).
    pub fn coeff(&self, m: u32, n: u32) -> Complex64 {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    /// Terms in normal order, sorted by `(m, n)` ascending.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Largest coefficient magnitude by which `self - other` differs.
    pub fn max_coeff_distance(&self, other: &OperatorExpr) -> f64 {
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys());
        keys.iter().map(|&(m, n)| (self.coeff(m, n) - other.coeff(m, n)).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> OperatorExpr {
        let mut out = OperatorExpr::zero(self.hbar);
        for (&key, &c) in &self.terms {
            let v = c * factor;
            if v.norm() >= COEFF_EPS {
                out.terms.insert(key, v);
            }
        }
        out
    }

    pub fn add(&self, other: &OperatorExpr) -> OperatorExpr {
        debug_assert_eq!(self.hbar, other.hbar, "mixed hbar in operator arithmetic");
        let mut out = self.clone();
        for (&key, &c) in &other.terms {
            let entry = out.terms.entry(key).or_insert_with(|| Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &OperatorExpr) -> OperatorExpr {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Normal-ordered product `self * other`.
    pub fn mul(&self, other: &OperatorExpr) -> OperatorExpr {
        debug_assert_eq!(self.hbar, other.hbar, "mixed hbar in operator arithmetic");
        let minus_i_hbar = Complex64::new(0.0, -self.hbar);
        let mut out = OperatorExpr::zero(self.hbar);
        for (&(m1, n1), &c1) in &self.terms {
            for (&(m2, n2), &c2) in &other.terms {
                // reorder p^n1 x^m2
                let kmax = n1.min(m2);
                let mut reorder = Complex64::new(1.0, 0.0); // k! C(n1,k) C(m2,k) (-i hbar)^k at k=0
                for k in 0..=kmax {
                    let coeff = c1 * c2 * reorder;
                    let key = (m1 + m2 - k, n1 + n2 - k);
                    let entry = out.terms.entry(key).or_insert_with(|| Complex64::new(0.0, 0.0));
                    *entry += coeff;
                    if k < kmax {
                        // (k+1)! C(n,k+1) C(m,k+1) = k! C(n,k) C(m,k) * (n-k)(m-k)/(k+1)
                        let step = (n1 - k) as f64 * (m2 - k) as f64 / (k + 1) as f64;
                        reorder *= minus_i_hbar * step;
                    }
                }
            }
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_EPS);
    }
}

impl fmt::Display for OperatorExpr {
    /// Renders terms sorted by `(m, n)` ascending, coefficients with 12
    /// significant digits, e.g. `(0.00000000000e0+1.00000000000e0i)·p` .
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(m, n), &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.11e}{}{:.11e}i)·{}", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs(), monomial_label(m, n))?;
        }
        Ok(())
    }
}

fn monomial_label(m: u32, n: u32) -> String {
    let mut parts = Vec::new();
    match m {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{m}")),
    }
    match n {
        0 => {}
        1 => parts.push("p".to_string()),
        _ => parts.push(format!("p^{n}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

/// Commutator `[a, b] = ab - ba` in normal order.
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> Result<OperatorExpr> {
    if a.hbar != b.hbar {
        return Err(Error::Parameter(format!(
            "commutator requires matching hbar, got {} and {}",
            a.hbar, b.hbar
        )));
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// Ordered factorization `e^(E1) e^(E2) ...` of `e^(a+b)`.
#[derive(Debug, Clone)]
pub struct FactorList {
    /// Exponents, left-to-right application order.
    pub exponents: Vec<OperatorExpr>,
    /// Expansion order the list was computed through.
    pub truncation_order: usize,
    /// True when all nested commutators beyond the listed factors vanish, so
    /// the factorization is an operator identity rather than a truncation.
    pub exact: bool,
}

/// Disentangles `e^(a+b)` into an ordered product of exponentials:
///
/// ```text
/// e^(a+b) = e^a e^b e^(-1/2 [a,b]) e^(1/6 [a,[a,b]] + 1/3 [b,[a,b]]) ...
/// ```
///
/// Exponents are produced through third order. For `max_order > 3` the list
/// is padded with zero exponents only when termination is certified: either
/// `[a,b]` is scalar, or both third-order nested commutators are scalar, so
/// every deeper nested commutator vanishes identically. Otherwise the list
/// stops at order 3 with `exact = false`.
pub fn zassenhaus(a: &OperatorExpr, b: &OperatorExpr, max_order: usize) -> Result<FactorList> {
    if max_order < 2 {
        return Err(Error::Parameter(format!("zassenhaus requires max_order >= 2, got {max_order}")));
    }
    let c2 = commutator(a, b)?;
    let c3a = commutator(a, &c2)?;
    let c3b = commutator(b, &c2)?;
    let terminated = c2.is_scalar() || (c3a.is_scalar() && c3b.is_scalar());
    let third = c3a
        .scale(Complex64::new(1.0 / 6.0, 0.0))
        .add(&c3b.scale(Complex64::new(1.0 / 3.0, 0.0)));

    let mut exponents = vec![a.clone(), b.clone(), c2.scale(Complex64::new(-0.5, 0.0))];
    // a truncation below order 3 is only exact if the omitted factor vanishes
    let exact = terminated && (max_order >= 3 || third.is_zero());
    if max_order >= 3 {
        exponents.push(third);
    }
    let mut truncation_order = max_order.min(3);
    if exact {
        for _ in 3..max_order {
            exponents.push(OperatorExpr::zero(a.hbar()));
        }
        truncation_order = max_order;
    }
    Ok(FactorList { exponents, truncation_order, exact })
}

/// Free-particle Hamiltonian `p^2 / 2m`.
pub fn free_hamiltonian(constants: &PhysicalConstants) -> OperatorExpr {
    OperatorExpr::monomial(
        0,
        2,
        Complex64::new(1.0 / (2.0 * constants.mass()), 0.0),
        constants.hbar(),
    )
}

/// The Hamiltonian `p^2/2m + f_b x` whose eigenfunctions are shifted Airy
/// packets.
pub fn airy_hamiltonian(constants: &PhysicalConstants) -> OperatorExpr {
    free_hamiltonian(constants).add(&OperatorExpr::monomial(
        1,
        0,
        Complex64::new(constants.f_b(), 0.0),
        constants.hbar(),
    ))
}

/// Full Hamiltonian `p^2/2m - F x` under a homogeneous force of value `F`.
pub fn forced_hamiltonian(constants: &PhysicalConstants, force_value: f64) -> OperatorExpr {
    free_hamiltonian(constants).add(&OperatorExpr::monomial(
        1,
        0,
        Complex64::new(-force_value, 0.0),
        constants.hbar(),
    ))
}

/// Interaction part `-(f_b + F) x` of the Hamiltonian split `H = H_b + H_i`:
/// the piece that drives the packet's motion. With `F = 0` this is the
/// free-space interaction `-f_b x`.
pub fn hi_operator(constants: &PhysicalConstants, force_value: f64) -> OperatorExpr {
    OperatorExpr::monomial(
        1,
        0,
        Complex64::new(-(constants.f_b() + force_value), 0.0),
        constants.hbar(),
    )
}

/// Acceleration `(f_b + F)/m` of the packet treated as a classical particle
/// driven by [`hi_operator`].
pub fn classical_acceleration(constants: &PhysicalConstants, force_value: f64) -> f64 {
    (constants.f_b() + force_value) / constants.mass()
}

/// The exponent pair whose disentangling factorizes the free evolution
/// operator: `a = (i f_b t / hbar) x`, `b = (-i t / hbar) (p^2/2m + f_b x)`.
pub fn free_evolution_exponents(
    constants: &PhysicalConstants,
    t: f64,
) -> (OperatorExpr, OperatorExpr) {
    let hbar = constants.hbar();
    let a = OperatorExpr::x(hbar).scale(Complex64::new(0.0, constants.f_b() * t / hbar));
    let b = airy_hamiltonian(constants).scale(Complex64::new(0.0, -t / hbar));
    (a, b)
}
