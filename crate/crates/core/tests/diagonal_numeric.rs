mod common;

use common::{binomial_f, ev, real, rel_diff, trinomial_f, worked_f};
use diagint_core::laurent::{rational_to_f64, variables};
use diagint_core::quadrature::{converge, eval_original, eval_reduced, torus_mean, QuadratureError};
use diagint_core::reduction::{
    certify_reduced_contour, directions_cone_is_one_sided, reduce, verify_reduction,
};
use diagint_core::series::{diagonal_partial_sum, taylor_coefficients};
use diagint_core::{Contour, DiagonalSpec, RationalFunction, RhoChoice};
use num_complex::Complex64;

struct Case {
    name: &'static str,
    f: RationalFunction,
    spec: DiagonalSpec,
    rho: Vec<f64>,
    t: Vec<Complex64>,
    order: u64,
}

fn cases() -> Vec<Case> {
    vec![
        Case {
            name: "binomial",
            f: binomial_f(),
            spec: DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap(),
            rho: vec![-0.8, -0.8],
            t: vec![real(0.1)],
            order: 60,
        },
        Case {
            name: "worked main diagonal",
            f: worked_f(),
            spec: DiagonalSpec::new(vec![ev(&[1, 1, 1])]).unwrap(),
            rho: vec![-1.13, -1.25, -1.25],
            t: vec![real(0.01)],
            order: 40,
        },
        Case {
            name: "trinomial rank two",
            f: trinomial_f(),
            spec: DiagonalSpec::new(vec![ev(&[1, 0, 1]), ev(&[0, 1, 1])]).unwrap(),
            rho: vec![-1.2, -1.2, -1.2],
            t: vec![real(0.02), real(0.03)],
            order: 30,
        },
    ]
}

/// Series, original integral and reduced integral agree when the direction
/// cone is one-sided.
#[test]
fn three_way_agreement_on_one_sided_cones() {
    for case in cases() {
        assert!(directions_cone_is_one_sided(&case.spec), "{}", case.name);
        let c = Contour::new(case.rho.clone()).unwrap();
        let series = diagonal_partial_sum(&case.f, &case.spec, &case.t, case.order).unwrap();
        assert!(series.last_shell < 1e-14, "{}: {}", case.name, series.last_shell);

        let original = converge(|n| eval_original(&case.f, &case.spec, &case.t, &c, n), 1e-12, 256).unwrap();
        assert_eq!(original.converged, Some(true), "{}", case.name);

        let rep = reduce(&case.f, &case.spec, RhoChoice::Given(c.clone()), None).unwrap();
        assert!(verify_reduction(&rep, &case.spec).all_passed());
        assert!(certify_reduced_contour(&rep, &case.t).unwrap().status.is_pass(), "{}", case.name);
        let reduced = converge(|n| eval_reduced(&rep, &case.t, n), 1e-13, 256).unwrap();
        assert_eq!(reduced.converged, Some(true), "{}", case.name);

        assert!(
            rel_diff(original.value, series.value) < 1e-10,
            "{}: original {} series {}",
            case.name,
            original.value,
            series.value
        );
        assert!(
            rel_diff(reduced.value, series.value) < 1e-10,
            "{}: reduced {} series {}",
            case.name,
            reduced.value,
            series.value
        );
    }
}

#[test]
fn binomial_closed_form() {
    let f = binomial_f();
    let spec = DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap();
    let rep = reduce(&f, &spec, RhoChoice::Auto, None).unwrap();
    let t = [real(0.1)];
    let r = converge(|n| eval_reduced(&rep, &t, n), 1e-13, 256).unwrap();
    assert!((r.value - real(1.0 / 0.6f64.sqrt())).norm() < 1e-12);
}

#[test]
fn torus_mean_extracts_taylor_coefficients() {
    let f = worked_f();
    let numeric = f.to_numeric().unwrap();
    let table = taylor_coefficients(&f, 6).unwrap();
    let radii = Contour::new(vec![-2.0, -2.0, -2.0]).unwrap().radii();
    for (alpha, c) in table.nonzero() {
        if alpha.total_degree() > 4 {
            continue;
        }
        let e: Vec<i32> = alpha.entries().iter().map(|&k| k as i32).collect();
        let r = torus_mean(
            |z| {
                let mut v = numeric.eval(z);
                for (zk, &k) in z.iter().zip(&e) {
                    v /= zk.powi(k);
                }
                v
            },
            &radii,
            32,
        )
        .unwrap();
        let expect = rational_to_f64(c);
        assert!((r.value - real(expect)).norm() < 1e-9 * expect.abs().max(1.0), "{alpha}");
    }
}

#[test]
fn result_is_independent_of_certified_contour() {
    let f = binomial_f();
    let spec = DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap();
    let t = [real(0.1)];
    let values: Vec<Complex64> = [vec![-0.8, -0.8], vec![-1.0, -0.6], vec![-0.75, -0.9]]
        .into_iter()
        .flat_map(|rho| {
            let c = Contour::new(rho).unwrap();
            let rep = reduce(&f, &spec, RhoChoice::Given(c.clone()), None).unwrap();
            [
                converge(|n| eval_original(&f, &spec, &t, &c, n), 1e-12, 256).unwrap().value,
                converge(|n| eval_reduced(&rep, &t, n), 1e-13, 256).unwrap().value,
            ]
        })
        .collect();
    for v in &values {
        assert!(rel_diff(*v, values[0]) < 1e-11, "{v} vs {}", values[0]);
    }
}

#[test]
fn certified_reduced_denominator_has_no_zeros() {
    let f = trinomial_f();
    let spec = DiagonalSpec::new(vec![ev(&[1, 0, 1]), ev(&[0, 1, 1])]).unwrap();
    let rep = reduce(&f, &spec, RhoChoice::Given(Contour::new(vec![-1.2; 3]).unwrap()), None).unwrap();
    let t = [real(0.02), Complex64::new(0.0, 0.03)];
    let cert = certify_reduced_contour(&rep, &t).unwrap();
    assert!(cert.status.is_pass());
    let q = rep
        .reduced_denominator()
        .bind_numeric(&[(0, t[0]), (1, t[1])])
        .unwrap();
    let r = rep.rho_prime.radii()[0];
    for k in 0..10_000 {
        let w = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / 10_000.0);
        assert!(q.eval(&[w]).norm() >= cert.margin * (1.0 - 1e-12));
    }
}

#[test]
fn renaming_variables_changes_nothing() {
    let f = worked_f();
    let g = f.rename(variables(&["x", "y", "u"])).unwrap();
    let spec = DiagonalSpec::new(vec![ev(&[1, 1, 1])]).unwrap();
    let c = Contour::new(vec![-1.13, -1.25, -1.25]).unwrap();
    let t = [real(0.01)];
    let a = reduce(&f, &spec, RhoChoice::Given(c.clone()), None).unwrap();
    let b = reduce(&g, &spec, RhoChoice::Given(c.clone()), None).unwrap();
    assert_eq!(a.integrand, b.integrand);
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(
        eval_original(&f, &spec, &t, &c, 32).unwrap(),
        eval_original(&g, &spec, &t, &c, 32).unwrap()
    );
}

#[test]
fn evaluation_is_deterministic() {
    let f = worked_f();
    let spec = DiagonalSpec::new(vec![ev(&[1, 1, 1]), ev(&[1, 2, 2])]).unwrap();
    let c = Contour::new(vec![-1.13, -1.25, -1.25]).unwrap();
    let t = [real(0.01), real(0.002)];
    let first = eval_original(&f, &spec, &t, &c, 64).unwrap();
    for _ in 0..3 {
        assert_eq!(eval_original(&f, &spec, &t, &c, 64).unwrap(), first);
    }
    let a = reduce(&f, &spec, RhoChoice::Auto, None).unwrap();
    assert_eq!(reduce(&f, &spec, RhoChoice::Auto, None).unwrap(), a);
}

#[test]
fn inadmissible_parameters_are_refused() {
    let f = worked_f();
    let spec = DiagonalSpec::new(vec![ev(&[1, 1, 1]), ev(&[1, 2, 2])]).unwrap();
    let c = Contour::new(vec![-2.0; 3]).unwrap();
    let t = [real(0.01), real(0.002)];
    assert!(matches!(
        eval_original(&f, &spec, &t, &c, 16),
        Err(QuadratureError::InadmissibleParameter { index: 1, .. })
    ));
    let rep = reduce(&f, &spec, RhoChoice::Given(c), None).unwrap();
    assert!(matches!(
        eval_reduced(&rep, &t, 16),
        Err(QuadratureError::InadmissibleParameter { index: 1, .. })
    ));
}
