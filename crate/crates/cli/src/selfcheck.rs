//! Built-in verification battery: quick closed-form identities a correct
//! build must satisfy. Prints one pass/fail line per item.

use airy_evolve::airy;
use airy_evolve::analytic::{alpha, x1, x1_weighted};
use airy_evolve::operator::{
    commutator, forced_hamiltonian, free_evolution_exponents, zassenhaus, OperatorExpr,
};
use airy_evolve::quad;
use airy_evolve::{ForceProfile, PhysicalConstants};
use num_complex::Complex64;

struct Item {
    name: &'static str,
    pass: bool,
}

fn items() -> Vec<Item> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, pass: bool| out.push(Item { name, pass });

    // Airy oracle spot values
    push("airy value at origin", near(airy::ai(0.0), 0.3550280538878172, 1e-12));
    push("airy value at one", near(airy::ai(1.0), 0.1352924163128814, 1e-12));
    push("airy derivative at origin", near(airy::ai_prime(0.0), -0.2588194037928068, 1e-12));
    push("airy first zero", near(airy::ai(airy::AI_FIRST_ZERO), 0.0, 1e-10));

    // ordered factorization of the free evolution operator
    let constants = PhysicalConstants::new(1.0, 1.0, 1.0).unwrap();
    let (hbar, m, f_b, t) = (1.0, 1.0, constants.f_b(), 1.0);
    let i = Complex64::new(0.0, 1.0);
    match free_factors(&constants, t) {
        Some(factors) => {
            let expected_linear = OperatorExpr::monomial(1, 0, i * f_b * t / hbar, hbar);
            let expected_airy_h = OperatorExpr::monomial(0, 2, -i * t / (2.0 * m * hbar), hbar)
                .add(&OperatorExpr::monomial(1, 0, -i * f_b * t / hbar, hbar));
            let expected_shift =
                OperatorExpr::monomial(0, 1, -i * f_b * t * t / (2.0 * m * hbar), hbar);
            let expected_phase =
                OperatorExpr::scalar(i * f_b * f_b * t * t * t / (6.0 * m * hbar), hbar);
            push("zassenhaus linear factor", close(&factors[0], &expected_linear));
            push("zassenhaus hamiltonian factor", close(&factors[1], &expected_airy_h));
            push("zassenhaus shift factor", close(&factors[2], &expected_shift));
            push("zassenhaus phase factor", close(&factors[3], &expected_phase));
            push("zassenhaus termination", factors.len() > 4 && factors[4..].iter().all(|f| f.is_zero()));
        }
        None => {
            for name in [
                "zassenhaus linear factor",
                "zassenhaus hamiltonian factor",
                "zassenhaus shift factor",
                "zassenhaus phase factor",
                "zassenhaus termination",
            ] {
                push(name, false);
            }
        }
    }

    // non-commuting Hamiltonians at two times
    let (f1, f2) = (0.25, -1.5);
    let com = commutator(
        &forced_hamiltonian(&constants, f1),
        &forced_hamiltonian(&constants, f2),
    );
    let expected = OperatorExpr::monomial(0, 1, Complex64::new(0.0, hbar * (f2 - f1) / m), hbar);
    push(
        "force commutator identity",
        com.map(|c| c.max_coeff_distance(&expected) <= 1e-12).unwrap_or(false),
    );

    // the two algebraic routes to the force-induced shift
    let tab = ForceProfile::tabulated(
        vec![0.0, 0.5, 1.3, 2.0],
        vec![0.4, -1.0, 0.9, 0.2],
    )
    .unwrap();
    let routes_agree = match (x1(&constants, &tab, 1.9), x1_weighted(&constants, &tab, 1.9)) {
        (Ok(a), Ok(b)) => (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-6),
        _ => false,
    };
    push("impulse shift equivalence", routes_agree);

    // closed-form impulse shift against adaptive quadrature
    let sin_force = ForceProfile::sinusoid(1.0, 1.0, 0.0).unwrap();
    let pi = std::f64::consts::PI;
    let closed = x1(&constants, &sin_force, pi);
    let quadrature =
        quad::integrate(|tau| alpha(&sin_force, tau).unwrap() / m, 0.0, pi, 1e-13);
    push(
        "sinusoid impulse closed form vs quadrature",
        closed.map(|c| (c - pi).abs() <= 1e-10 && (c - quadrature).abs() <= 1e-10).unwrap_or(false),
    );

    out
}

fn near(v: airy_evolve::Result<f64>, expected: f64, tol: f64) -> bool {
    v.map(|v| (v - expected).abs() <= tol).unwrap_or(false)
}

fn close(a: &OperatorExpr, b: &OperatorExpr) -> bool {
    a.max_coeff_distance(b) <= 1e-12
}

fn free_factors(constants: &PhysicalConstants, t: f64) -> Option<Vec<OperatorExpr>> {
    let (a, b) = free_evolution_exponents(constants, t);
    let factors = zassenhaus(&a, &b, 5).ok()?;
    factors.exact.then_some(factors.exponents)
}

/// Runs the battery; returns exit status 0 iff every item passes.
pub fn run() -> i32 {
    let items = items();
    let mut all = true;
    for item in &items {
        println!("{:<42} {}", item.name, if item.pass { "pass" } else { "FAIL" });
        all &= item.pass;
    }
    if all {
        println!("selfcheck: all {} items pass", items.len());
        0
    } else {
        println!("selfcheck: FAILURES present");
        1
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn battery_passes_on_a_correct_build() {
        assert_eq!(super::run(), 0);
    }
}
