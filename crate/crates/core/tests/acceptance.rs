//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    binomial_f, caratheodory_vertices, ev, poly, random_unimodular, real, rel_diff, worked_a,
    worked_a_inv, worked_f,
};
use diagint_core::lattice::{complete_to_unimodular, det};
use diagint_core::laurent::{ratio, variables};
use diagint_core::newton::{check_t_bounds, newton_polytope, t_bounds};
use diagint_core::quadrature::{converge, eval_original, eval_reduced};
use diagint_core::reduction::{
    certify_reduced_contour, directions_cone_is_one_sided, reduce, reduction_polytopes,
};
use diagint_core::series::{diagonal_coefficients, diagonal_partial_sum};
use diagint_core::{
    Contour, DiagonalSpec, ExponentVector, IntMatrix, LatticeError, LaurentPolynomial, Polytope,
    RhoChoice,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_SECS: f64 = 1.0;
const MATRIX_SECS: f64 = 5.0;
const NUMERIC_SECS: f64 = 30.0;
const NUMERIC_REL_TOL: f64 = 1e-8;
const CLOSED_FORM_TOL: f64 = 1e-8;
const CONTOUR_REL_TOL: f64 = 1e-9;
const SERIES_ORDER: u64 = 12;
const NODES: usize = 64;
const RANDOM_COMPLETIONS: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn worked_spec() -> DiagonalSpec {
    DiagonalSpec::new(vec![ev(&[1, 1, 1]), ev(&[1, 2, 2])]).unwrap()
}

fn binomial_spec() -> DiagonalSpec {
    DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap()
}

/// Matrices for criteria 2 and 3: the worked matrix plus seeded random
/// completions of random primitive direction sets.
fn completion_suite() -> Vec<(DiagonalSpec, IntMatrix)> {
    let mut out = vec![(worked_spec(), worked_a())];
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    while out.len() < RANDOM_COMPLETIONS + 1 {
        let n = rng.gen_range(1..=4);
        let p = rng.gen_range(1..=n.min(3));
        let m = random_unimodular(&mut rng, n, 4 * n * n);
        let mut dirs: Vec<ExponentVector> = (0..p).map(|j| m.column(j).unwrap()).collect();
        if p == n && det(&m) == BigInt::from(-1) {
            let flipped: Vec<i64> = dirs[0].entries().iter().map(|x| -x).collect();
            dirs[0] = ExponentVector::new(flipped);
        }
        let spec = DiagonalSpec::new(dirs).unwrap();
        let a = complete_to_unimodular(&spec).unwrap();
        out.push((spec, a));
    }
    out
}

fn criterion_1() -> Outcome {
    let c = Contour::new(vec![-2.0; 3]).unwrap();
    let rep = match reduce(&worked_f(), &worked_spec(), RhoChoice::Given(c), Some(worked_a())) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("reduce failed: {e}")),
    };
    let expected = poly(
        &["t1", "t2", "w3"],
        &[
            (&[0, 0, 0], 1),
            (&[2, -1, 0], 1),
            (&[-1, 1, -1], 1),
            (&[0, 0, 1], 1),
            (&[-1, 1, 0], 1),
        ],
    );
    let den_ok = rep.integrand.denominator() == &expected;
    let num_ok = rep.integrand.numerator() == &LaurentPolynomial::one(expected.vars().clone());
    let inv_ok = rep.inverse == worked_a_inv();
    outcome(
        den_ok && num_ok && inv_ok,
        format!("integrand = {}; A^-1 = {}", rep.integrand, rep.inverse),
    )
}

fn criterion_2() -> Outcome {
    let suite = completion_suite();
    let mut bad = Vec::new();
    for (k, (spec, a)) in suite.iter().enumerate() {
        let inv = match diagint_core::lattice::inverse_unimodular(a) {
            Ok(i) => i,
            Err(e) => {
                bad.push(format!("#{k}: {e}"));
                continue;
            }
        };
        let det_ok = det(a) == BigInt::from(1);
        let id_ok = a.mul(&inv).unwrap().is_identity();
        let leading_ok = spec
            .directions()
            .iter()
            .enumerate()
            .all(|(j, q)| &a.column(j).unwrap() == q);
        let n = a.dim();
        let delta_ok = (0..n).all(|i| {
            let b = inv.row(i).unwrap();
            (0..n).all(|j| {
                let q = a.column(j).unwrap();
                let dot: i64 = b.entries().iter().zip(q.entries()).map(|(x, y)| x * y).sum();
                dot == i64::from(i == j)
            })
        });
        if !(det_ok && id_ok && leading_ok && delta_ok) {
            bad.push(format!("#{k}: A = {a}"));
        }
    }
    let worked_inv_ok = diagint_core::lattice::inverse_unimodular(&worked_a()).unwrap() == worked_a_inv();
    outcome(
        bad.is_empty() && worked_inv_ok,
        format!(
            "{} matrices (1 worked + {RANDOM_COMPLETIONS} random, n <= 4, p <= 3); failures: {}",
            suite.len(),
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

fn criterion_3() -> Outcome {
    let suite = completion_suite();
    let mut checked = 0;
    let mut bad = Vec::new();
    for (k, (spec, a)) in suite.iter().enumerate() {
        let inv = diagint_core::lattice::inverse_unimodular(a).unwrap();
        let n = a.dim();
        let z: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        let w: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
        let w = variables(&w);
        for (i, q) in spec.directions().iter().enumerate() {
            let m = LaurentPolynomial::monomial(variables(&z), q.clone(), ratio(1, 1));
            let image = m.monomial_substitute(&inv, w.clone()).unwrap();
            let target = LaurentPolynomial::variable(w.clone(), &format!("w{}", i + 1)).unwrap();
            checked += 1;
            if image != target {
                bad.push(format!("#{k} q{}: {image}", i + 1));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{checked} direction monomials collapse to w_i; failures: {}",
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

fn criterion_4() -> Outcome {
    let f = worked_f();
    let spec = worked_spec();
    let t = [real(0.01), real(0.002)];
    let rho = Contour::new(vec![-2.0; 3]).unwrap();
    let started = Instant::now();

    let series = diagonal_partial_sum(&f, &spec, &t, SERIES_ORDER).unwrap();
    let original = eval_original(&f, &spec, &t, &rho, NODES);
    let reduced = reduce(&f, &spec, RhoChoice::Given(rho.clone()), None)
        .map_err(|e| e.to_string())
        .and_then(|rep| eval_reduced(&rep, &t, NODES).map_err(|e| e.to_string()));
    let elapsed = started.elapsed();

    let mut lines = vec![format!(
        "series(order {SERIES_ORDER}) = {:.16e}; bounds at rho = (-2,-2,-2): {:?}",
        series.value.re,
        t_bounds(&spec, &rho).unwrap()
    )];
    let pass = match (&original, &reduced) {
        (Ok(o), Ok(r)) => {
            lines.push(format!("3-D = {}, 1-D = {}", o.value, r.value));
            rel_diff(o.value, series.value) < NUMERIC_REL_TOL
                && rel_diff(r.value, series.value) < NUMERIC_REL_TOL
                && rel_diff(o.value, r.value) < NUMERIC_REL_TOL
                && elapsed.as_secs_f64() < NUMERIC_SECS
        }
        _ => {
            lines.push(format!(
                "3-D: {}; 1-D: {}",
                original.as_ref().map_or_else(|e| e.to_string(), |o| o.value.to_string()),
                reduced.as_ref().map_or_else(|e| e.clone(), |r| r.value.to_string()),
            ));
            false
        }
    };

    // diagnostic at a certified contour where t is admissible
    let alt = Contour::new(vec![-1.13, -1.25, -1.25]).unwrap();
    let o = converge(|n| eval_original(&f, &spec, &t, &alt, n), 1e-10, 256);
    let r = reduce(&f, &spec, RhoChoice::Given(alt), None).unwrap();
    let cert = certify_reduced_contour(&r, &t).unwrap();
    let red = converge(|n| eval_reduced(&r, &t, n), 1e-12, 256);
    lines.push(format!(
        "diagnostic at rho = (-1.13,-1.25,-1.25): 3-D = {}, 1-D = {} (rho' certificate {}), one-sided cone: {}",
        o.map_or_else(|e| e.to_string(), |v| format!("{:.12} (N = {})", v.value.re, v.nodes_per_dim)),
        red.map_or_else(|e| e.to_string(), |v| format!("{:.12} (N = {})", v.value.re, v.nodes_per_dim)),
        cert.status.as_str(),
        directions_cone_is_one_sided(&spec),
    ));
    outcome(pass, lines.join("\n      "))
}

fn criterion_5() -> Outcome {
    let f = binomial_f();
    let spec = binomial_spec();
    let rep = match reduce(&f, &spec, RhoChoice::Auto, None) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("reduce failed: {e}")),
    };
    let t = [real(0.1)];
    let value = converge(|n| eval_reduced(&rep, &t, n), 1e-13, 256);
    let expected = 1.0 / 0.6f64.sqrt();
    let coeffs = diagonal_coefficients(&f, &spec, 4).unwrap();
    let got: Vec<String> = (0..=4).map(|l| coeffs[&vec![l]].to_string()).collect();
    let coeff_ok = got == ["1", "2", "6", "20", "70"];
    match value {
        Ok(v) => outcome(
            (v.value - real(expected)).norm() < CLOSED_FORM_TOL && coeff_ok,
            format!(
                "rho = {:?}, value = {:.16}, expected {expected:.16}, |diff| = {:.1e}; coefficients {}",
                rep.rho.rho(),
                v.value.re,
                (v.value - real(expected)).norm(),
                got.join(", ")
            ),
        ),
        Err(e) => outcome(false, format!("eval_reduced failed: {e}")),
    }
}

fn criterion_6() -> Outcome {
    let f = worked_f();
    let rep = reduce(&f, &worked_spec(), RhoChoice::Given(Contour::new(vec![-2.0; 3]).unwrap()), Some(worked_a()))
        .unwrap();
    let (np, mapped, projected) = reduction_polytopes(&rep).unwrap();
    let fig1: Vec<ExponentVector> = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1]]
        .iter()
        .map(|v| ev(v))
        .collect();
    let mut fig1_sorted = fig1.clone();
    fig1_sorted.sort();
    let fig1_ok = np.vertices() == fig1_sorted.as_slice();
    let transformed = newton_polytope(rep.integrand.denominator()).unwrap();
    let map_ok = transformed == mapped;
    let fig2_ok = [[0, 0, 1], [2, -1, 0], [-1, 1, 0], [-1, 1, -1]]
        .iter()
        .all(|v| mapped.contains_vertex(&ev(v)));

    // hull against the convex-combination oracle
    let mut supports: Vec<Vec<Vec<i64>>> = vec![
        fig1.iter().map(|v| v.entries().to_vec()).collect(),
        rep.integrand
            .denominator()
            .terms()
            .map(|(e, _)| e.entries().to_vec())
            .collect(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let d = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=8);
        supports.push((0..k).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect());
    }
    let oracle_ok = supports.iter().all(|s| {
        let hull = Polytope::hull(s[0].len(), s.iter().map(|p| ExponentVector::new(p.clone()))).unwrap();
        let got: Vec<Vec<i64>> = hull.vertices().iter().map(|v| v.entries().to_vec()).collect();
        got == caratheodory_vertices(s)
    });
    outcome(
        fig1_ok && map_ok && fig2_ok && oracle_ok,
        format!(
            "N_Q = {np}; A^-1 N_Q = {mapped}; N' = {projected}; oracle agreement on {} supports: {oracle_ok}",
            supports.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let f = binomial_f();
    let spec = binomial_spec();
    let t = [real(0.1)];
    let mut values: Vec<(Vec<f64>, Complex64)> = Vec::new();
    for rho in [vec![-0.8, -0.8], vec![-1.0, -0.6]] {
        let c = Contour::new(rho.clone()).unwrap();
        let v = reduce(&f, &spec, RhoChoice::Given(c), None)
            .map_err(|e| e.to_string())
            .and_then(|rep| {
                if !rep.q_certificate.status.is_pass() {
                    return Err("contour not certified".to_string());
                }
                converge(|n| eval_reduced(&rep, &t, n), 1e-13, 256).map_err(|e| e.to_string())
            });
        match v {
            Ok(v) => values.push((rho, v.value)),
            Err(e) => return outcome(false, format!("rho = {rho:?}: {e}")),
        }
    }
    let diff = rel_diff(values[0].1, values[1].1);
    outcome(
        diff <= CONTOUR_REL_TOL,
        format!(
            "{:?} -> {:.16}, {:?} -> {:.16}, relative difference {diff:.1e}",
            values[0].0, values[0].1.re, values[1].0, values[1].1.re
        ),
    )
}

fn criterion_8() -> Outcome {
    let rejected = matches!(
        DiagonalSpec::new(vec![ev(&[2, 0]), ev(&[0, 1])]),
        Err(LatticeError::NotCompletable { .. })
    );
    let spec = worked_spec();
    let c = Contour::new(vec![-2.0; 3]).unwrap();
    let bound = t_bounds(&spec, &c).unwrap()[0];
    let on_bound = check_t_bounds(&spec, &c, &[real(bound), real(0.0)]).unwrap();
    let inside = check_t_bounds(&spec, &c, &[real(bound * 0.999), real(0.0)]).unwrap();
    outcome(
        rejected && !on_bound && inside,
        format!(
            "{{(2,0),(0,1)}} rejected as not completable: {rejected}; |t1| = e^<q1,rho> = {bound:.6e} accepted: {on_bound}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Outcome); 8] = [
        ("golden reduction", GOLDEN_SECS, criterion_1),
        ("matrix identities", MATRIX_SECS, criterion_2),
        ("monomial collapse", MATRIX_SECS, criterion_3),
        ("diagonal numeric equality", NUMERIC_SECS, criterion_4),
        ("closed form 1/(1-z1-z2)", NUMERIC_SECS, criterion_5),
        ("newton polytopes", NUMERIC_SECS, criterion_6),
        ("contour independence", NUMERIC_SECS, criterion_7),
        ("negative controls", NUMERIC_SECS, criterion_8),
    ];
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let out = run();
        let secs = started.elapsed();
        total += secs;
        let pass = out.pass && secs.as_secs_f64() < *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {}: {name} ({:.3} s, limit {limit} s)\n      {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            secs.as_secs_f64(),
            out.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed, {:.2} s total",
        criteria.len() - failed,
        total.as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
