use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::dirichlet::partial_sum;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g() -> &'static FormDescriptor {
    static G: OnceLock<FormDescriptor> = OnceLock::new();
    G.get_or_init(|| FormDescriptor::g_default().unwrap())
}

fn unit_form() -> FormDescriptor {
    let mut a = vec![c(0.0, 0.0); 100];
    a[0] = c(1.0, 0.0);
    FormDescriptor::new("unit", 4, 0, CoefficientTable::new(a, 4).unwrap()).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

#[test]
fn descriptor_constants() {
    let g = g();
    assert_eq!(g.weight(), 4.5);
    assert_eq!(g.critical_abscissa(), 2.25);
    assert_eq!(g.convergence_abscissa(), 2.75);
    assert_eq!(g.epsilon(), 1.0);
    assert!(g.real_coeffs);
    let t = CoefficientTable::new(vec![c(1.0, 0.0), c(0.0, 0.0)], 4).unwrap();
    assert!(FormDescriptor::new("x", 4, 2, t.clone()).is_err());
    assert!(FormDescriptor::new("x", 3, 0, t).is_err());
}

#[test]
fn normalization_self_test_passes() {
    let r = g().validate_normalization().unwrap();
    assert!(r < 1e-8);
}

#[test]
fn direct_examples() {
    let cfg = EvalConfig::default();
    let v = l_direct(g(), c(10.0, 0.0), cfg.target_eps).unwrap();
    assert!((v - 1.0).norm() < 0.01);
    assert_eq!(l_direct(&unit_form(), c(7.0, 3.0), 1e-12).unwrap(), c(1.0, 0.0));
    assert_eq!(l_direct(&unit_form(), c(3.0, -40.0), 1e-12).unwrap(), c(1.0, 0.0));
    assert!(matches!(
        l_direct(g(), c(2.8, 1.0), 1e-9),
        Err(Error::Precondition(_))
    ));
    // Re s = 4 is inside the precondition but the tail is not certifiable
    // to 1e-9 with 20 000 coefficients.
    assert!(matches!(
        l_direct(g(), c(4.0, 0.0), 1e-9),
        Err(Error::InsufficientTable(_))
    ));
}

#[test]
fn direct_truncation_stability() {
    let short = FormDescriptor::g(5_000).unwrap();
    // At s = 6 the tables of length 5 000 and 20 000 agree to 1e-9.
    let a = l_direct(&short, c(6.0, 0.0), 1e-9).unwrap();
    let b = l_direct(g(), c(6.0, 0.0), 1e-9).unwrap();
    assert!((a - b).norm() < 1e-9);
    // At s = 4 they differ by about 1.7e-8: more than 1e-9.
    let a = partial_sum(&short.coeffs, c(4.0, 0.0), 5_000).unwrap();
    let b = partial_sum(&g().coeffs, c(4.0, 0.0), 20_000).unwrap();
    assert!((a - b).norm() > 1e-9 && (a - b).norm() < 1e-7);
}

#[test]
fn xi_route_reference_values() {
    // L(s) from a 30-digit evaluation of the same expansion.
    let cfg = EvalConfig::default();
    let v = l_via_xi(g(), c(4.0, 3.0), &cfg).unwrap();
    assert!(rel(v, c(1.05198236273687373, 0.32371292378289606)) < 1e-9);
    let v = l_via_xi(g(), c(2.25, 30.0), &cfg).unwrap();
    assert!(rel(v, c(3.93693533184743504, 1.88921826676849788)) < 1e-9);
}

#[test]
fn xi_agrees_with_dirichlet_series() {
    let cfg = EvalConfig::default();
    for s in [c(5.5, 3.0), c(6.0, -17.0), c(7.0, 40.0)] {
        let d = l_direct(g(), s, 1e-9).unwrap();
        let x = l_via_xi(g(), s, &cfg).unwrap();
        assert!(rel(d, x) < 1e-8, "{s}");
    }
}

#[test]
fn functional_equation_against_direct_sum() {
    // ξ(s) from the expansion against π^{−(w−s)}Γ(w−s)L(w−s) with L summed
    // directly: an independent check of the functional equation.
    for s in [c(-1.5, 3.0), c(-2.0, 0.0), c(-1.0, -12.0)] {
        let w = c(4.5, 0.0);
        let x = xi_completed(g(), s, 1e-12).unwrap();
        let d = l_direct(g(), w - s, 1e-10).unwrap()
            * (-(w - s) * PI.ln() + log_gamma(w - s).unwrap()).exp();
        assert!(rel(x, d) < 1e-9, "{s}: {x} vs {d}");
    }
}

#[test]
fn realness_on_critical_line() {
    for t in [5.0, 10.0, 20.0] {
        let x = xi_scaled(g(), c(2.25, t), 1e-9).unwrap();
        assert!(x.im.abs() <= 1e-9 * x.norm());
    }
}

#[test]
fn l_eval_dispatch() {
    let cfg = EvalConfig::default();
    let s = c(10.0, 0.0);
    assert_eq!(l_eval(g(), s, &cfg).unwrap(), l_direct(g(), s, cfg.target_eps).unwrap());
    assert_eq!(l_eval(g(), c(0.0, 0.0), &cfg).unwrap(), c(0.0, 0.0));
    assert_eq!(l_eval(g(), c(-3.0, 0.0), &cfg).unwrap(), c(0.0, 0.0));
    assert!(is_trivial_zero(c(-2.0, 0.0)) && !is_trivial_zero(c(-2.0, 0.1)));
    // Near a trivial zero L is small but finite.
    let v = l_eval(g(), c(-1e-6, 0.0), &cfg).unwrap();
    assert!(v.norm() < 1e-4 && v.norm() > 0.0);
    let s = c(2.25, 5.0);
    let a = l_eval(g(), s, &cfg).unwrap();
    let b = l_afe(g(), s, &cfg).unwrap().value;
    assert!(rel(a, b) < 1e-6);
}

#[test]
fn afe_examples() {
    let cfg1 = EvalConfig::default();
    let cfg2 = EvalConfig { h: 2, ..EvalConfig::default() };
    let s = c(2.25, 10.0);
    let a1 = l_afe(g(), s, &cfg1).unwrap();
    let a2 = l_afe(g(), s, &cfg2).unwrap();
    let x = l_eval(g(), s, &cfg1).unwrap();
    assert!(rel(a1.value, a2.value) < 1e-6);
    assert!(rel(a1.value, x) < 1e-6);
    assert!(rel(a2.value, x) < 1e-6);
    assert!(a1.err_est < 1e-4 && a2.err_est < 1e-6);
    // On Re s = 11/4 the direct sum is outside its precondition; compare
    // with the ξ route instead.
    let s = c(2.75, 10.0);
    let cfg2b = EvalConfig { eta: 1.5, ..cfg2.clone() };
    let a = l_afe(g(), s, &cfg2b).unwrap().value;
    assert!(rel(a, l_eval(g(), s, &cfg1).unwrap()) < 1e-6);
    assert!(l_direct(g(), s, 1e-9).is_err());
}

#[test]
fn afe_rejects_bad_parameters() {
    let cfg = EvalConfig::default();
    assert!(l_afe(g(), c(2.25, 3.0), &cfg).is_err());
    assert!(l_afe(g(), c(2.0, 10.0), &cfg).is_err());
    assert!(l_afe(g(), c(2.25, 10.0), &EvalConfig { eta: 0.4, ..cfg.clone() }).is_err());
    assert!(l_afe(g(), c(2.25, 10.0), &EvalConfig { eta: 1.5, ..cfg.clone() }).is_err());
    assert!(l_afe(g(), c(2.6, 10.0), &cfg).is_err());
    assert!(l_afe(g(), c(2.25, 10.0), &EvalConfig { alpha: Some(2.3), ..cfg.clone() }).is_err());
    assert!(l_afe(g(), c(2.25, 10.0), &EvalConfig { h: 3, ..cfg.clone() }).is_err());
    assert!(l_afe(g(), c(2.25, 10.0), &EvalConfig { x: Some(5000.0), ..cfg }).is_err());
}

#[test]
fn first_and_fourth_terms_have_equal_modulus() {
    for t in [7.0, 23.5, 41.0] {
        let cfg = EvalConfig { x: Some(t), ..EvalConfig::default() };
        let r = l_afe(g(), c(2.25, t), &cfg).unwrap();
        let (j1, j4) = (r.terms[0].norm(), r.terms[3].norm());
        assert!((j1 - j4).abs() <= 1e-10 * j1.max(j4));
    }
}

#[test]
fn derivative_examples() {
    let cfg = EvalConfig::default();
    let u = unit_form();
    for s in [c(10.0, 0.0), c(4.0, 25.0)] {
        assert!(l_derivative(&u, s, &cfg).unwrap().norm() < 1e-14);
    }
    let s = c(10.0, 0.0);
    let want: Complex64 = (2..=g().coeffs.len())
        .map(|n| -g().coeffs.get(n) * (n as f64).ln() * (-s * (n as f64).ln()).exp())
        .sum();
    let got = l_derivative(g(), s, &cfg).unwrap();
    assert!((got - want).norm() < 1e-8);
    let s = c(2.25, 7.0);
    let h = 1e-4;
    let fd = (l_eval(g(), s + h, &cfg).unwrap() - l_eval(g(), s - h, &cfg).unwrap()) / (2.0 * h);
    let cd = l_derivative(g(), s, &cfg).unwrap();
    assert!((fd - cd).norm() <= 1e-5 * cd.norm().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_equation_residual(sig in 1.75f64..2.75, t in -50.0f64..50.0) {
        // The two sides with different rotations, so the check is not
        // a mere relabeling of the same terms.
        let s = c(sig, t);
        let a = xi::xi_scaled_with(g(), s, 1e-10, 6.0).unwrap();
        let b = xi::xi_scaled_with(g(), c(4.5, 0.0) - s, 1e-10, 4.0).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn conjugation_symmetry(sig in 0.5f64..4.0, t in -60.0f64..60.0) {
        let s = c(sig, t);
        let a = xi_scaled(g(), s, 1e-10).unwrap();
        let b = xi_scaled(g(), s.conj(), 1e-10).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1.0));
    }
}
