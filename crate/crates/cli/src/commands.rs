//! The four subcommands. Each returns the JSON report text; failures are
//! [`CliError`]s carrying a module-tagged code.

use diagint_core::lattice::{check_completion, complete_to_unimodular, inverse_unimodular};
use diagint_core::newton::{
    check_t_bounds, find_rho, map_polytope, newton_polytope, project_polytope, rho_in_e0, t_bounds,
};
use diagint_core::quadrature::{converge, eval_original, eval_reduced, MAX_ORIGINAL_DIM};
use diagint_core::reduction::{
    certify_reduced_contour, reduce, reduction_polytopes, verify_reduction,
};
use diagint_core::series::diagonal_partial_sum;
use diagint_core::{
    Contour, DiagonalSpec, IntMatrix, Polytope, QuadratureResult, ReducedRepresentation, RhoChoice,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CliError, ExitClass};
use crate::problem::{ProblemSpec, RhoSetting};
use crate::report::{
    f17s, matrix_json, plot_data, terms_json, to_json, vectors_json, vertices_json, BigIntJson,
    CertificateJson, ComplexJson, QuadratureJson, TermJson, VerificationJson, F17,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub json: String,
    pub plot_data: Option<String>,
    /// Set when a quadrature hit `n_max` before reaching `tol`; the report is
    /// still complete.
    pub nonconverged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Reduce,
    Evaluate,
    Polytope,
    CheckRho,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reduce => "reduce",
            Command::Evaluate => "evaluate",
            Command::Polytope => "polytope",
            Command::CheckRho => "check-rho",
        }
    }
}

pub fn run(command: Command, spec: &ProblemSpec) -> Result<CommandOutput, CliError> {
    match command {
        Command::Reduce => cmd_reduce(spec),
        Command::Evaluate => cmd_evaluate(spec),
        Command::Polytope => cmd_polytope(spec),
        Command::CheckRho => cmd_check_rho(spec),
    }
}

#[derive(Serialize)]
struct ProblemJson {
    function: String,
    variables: Vec<String>,
    directions: Vec<Vec<i64>>,
    t: Option<Vec<ComplexJson>>,
}

fn problem_json(spec: &ProblemSpec) -> ProblemJson {
    ProblemJson {
        function: spec.function.to_string(),
        variables: spec.vars.to_vec(),
        directions: vectors_json(&spec.directions),
        t: spec.t.as_ref().map(|t| t.iter().map(|&z| z.into()).collect()),
    }
}

#[derive(Serialize)]
struct IntegrandJson {
    text: String,
    numerator: Vec<TermJson>,
    denominator: Vec<TermJson>,
}

#[derive(Serialize)]
struct CertificatesJson {
    rho: CertificateJson,
    /// Dominance of `Q'(t, ·)` on the reduced torus; needs `t`.
    rho_prime: Option<CertificateJson>,
}

#[derive(Serialize)]
struct ReductionJson {
    matrix_source: &'static str,
    matrix: Vec<Vec<BigIntJson>>,
    inverse: Vec<Vec<BigIntJson>>,
    reduced_variables: Vec<String>,
    integrand: IntegrandJson,
    rho_source: &'static str,
    rho: Vec<F17>,
    rho_prime: Vec<F17>,
    t_bounds: Vec<F17>,
    t_admissible: Option<bool>,
    certificates: CertificatesJson,
}

#[derive(Serialize)]
struct PolytopesJson {
    newton: Vec<Vec<i64>>,
    transformed: Option<Vec<Vec<i64>>>,
    projected: Option<Vec<Vec<i64>>>,
}

fn diagonal_spec(spec: &ProblemSpec) -> Result<DiagonalSpec, CliError> {
    if spec.directions.is_empty() {
        return Err(CliError::validation("spec.directions", "at least one direction is required"));
    }
    Ok(DiagonalSpec::new(spec.directions.clone())?)
}

fn rho_choice(spec: &ProblemSpec) -> Result<(RhoChoice, &'static str), CliError> {
    Ok(match &spec.rho {
        RhoSetting::Auto => (RhoChoice::Auto, "auto"),
        RhoSetting::Given(r) => (RhoChoice::Given(Contour::new(r.clone())?), "given"),
    })
}

fn check_t_len(t: &[Complex64], p: usize) -> Result<(), CliError> {
    if t.len() != p {
        return Err(CliError::validation(
            "spec.t",
            format!("{} values of t for {p} directions", t.len()),
        ));
    }
    Ok(())
}

fn reduction_json(
    spec: &ProblemSpec,
    rep: &ReducedRepresentation,
    rho_source: &'static str,
) -> Result<ReductionJson, CliError> {
    let (t_admissible, rho_prime_cert) = match &spec.t {
        Some(t) => {
            check_t_len(t, rep.rank)?;
            let cert = certify_reduced_contour(rep, t)?;
            (Some(rep.parameters_admissible(t)), Some(CertificateJson::from(&cert)))
        }
        None => (None, None),
    };
    Ok(ReductionJson {
        matrix_source: if spec.matrix.is_some() { "override" } else { "completion" },
        matrix: matrix_json(&rep.matrix),
        inverse: matrix_json(&rep.inverse),
        reduced_variables: rep.integrand.vars().to_vec(),
        integrand: IntegrandJson {
            text: rep.integrand.to_string(),
            numerator: terms_json(rep.integrand.numerator()),
            denominator: terms_json(rep.integrand.denominator()),
        },
        rho_source,
        rho: f17s(rep.rho.rho()),
        rho_prime: f17s(rep.rho_prime.rho()),
        t_bounds: f17s(&rep.t_bounds),
        t_admissible,
        certificates: CertificatesJson {
            rho: CertificateJson::from(&rep.q_certificate),
            rho_prime: rho_prime_cert,
        },
    })
}

fn build_reduction(spec: &ProblemSpec) -> Result<(DiagonalSpec, ReducedRepresentation, &'static str), CliError> {
    let ds = diagonal_spec(spec)?;
    let (choice, source) = rho_choice(spec)?;
    let rep = reduce(&spec.function, &ds, choice, spec.matrix.clone())?;
    Ok((ds, rep, source))
}

#[derive(Serialize)]
struct ReduceReport {
    command: &'static str,
    problem: ProblemJson,
    reduction: ReductionJson,
    verification: VerificationJson,
    polytopes: PolytopesJson,
}

pub fn cmd_reduce(spec: &ProblemSpec) -> Result<CommandOutput, CliError> {
    let (ds, rep, source) = build_reduction(spec)?;
    let verification = verify_reduction(&rep, &ds);
    let (np, mapped, projected) = reduction_polytopes(&rep)?;
    let report = ReduceReport {
        command: "reduce",
        problem: problem_json(spec),
        reduction: reduction_json(spec, &rep, source)?,
        verification: VerificationJson::from(&verification),
        polytopes: PolytopesJson {
            newton: vertices_json(&np),
            transformed: Some(vertices_json(&mapped)),
            projected: Some(vertices_json(&projected)),
        },
    };
    Ok(CommandOutput {
        json: to_json(&report)?,
        plot_data: Some(plot_data(&[
            ("newton", &np),
            ("transformed", &mapped),
            ("projected", &projected),
        ])),
        nonconverged: false,
    })
}

#[derive(Serialize)]
struct SeriesJson {
    value: ComplexJson,
    order: u64,
    last_shell: F17,
}

#[derive(Serialize)]
struct DeltaJson {
    pair: &'static str,
    abs: F17,
    rel: F17,
}

#[derive(Serialize)]
struct NumericJson {
    series: SeriesJson,
    original: Option<QuadratureJson>,
    reduced: QuadratureJson,
    deltas: Vec<DeltaJson>,
}

#[derive(Serialize)]
struct EvaluateReport {
    command: &'static str,
    problem: ProblemJson,
    reduction: ReductionJson,
    one_sided_cone: bool,
    numeric: NumericJson,
    converged: bool,
    warnings: Vec<String>,
}

fn delta(pair: &'static str, a: Complex64, b: Complex64) -> DeltaJson {
    let abs = (a - b).norm();
    DeltaJson {
        pair,
        abs: F17(abs),
        rel: F17(abs / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)),
    }
}

pub fn cmd_evaluate(spec: &ProblemSpec) -> Result<CommandOutput, CliError> {
    let t = spec
        .t
        .clone()
        .ok_or_else(|| CliError::validation("spec.t_missing", "evaluate needs t (spec entry `t` or --t)"))?;
    let (ds, rep, source) = build_reduction(spec)?;
    check_t_len(&t, ds.rank())?;
    let verification = verify_reduction(&rep, &ds);
    let reduction = reduction_json(spec, &rep, source)?;
    let mut warnings = Vec::new();
    if !verification.one_sided_cone {
        warnings.push(
            "the direction cone is not one-sided: the reduced integral also collects coefficients \
             at lattice points with negative direction weights and may differ from the diagonal"
                .to_string(),
        );
    }
    if reduction
        .certificates
        .rho_prime
        .as_ref()
        .is_some_and(|c| c.status != "PASS")
    {
        warnings.push("rho' is not dominance-certified for Q'(t, .) at this t".to_string());
    }

    let reduced = converge(|n| eval_reduced(&rep, &t, n), spec.tol, spec.n_max)?;
    let original: Option<QuadratureResult> = if ds.ambient_dim() <= MAX_ORIGINAL_DIM {
        Some(converge(
            |n| eval_original(&spec.function, &ds, &t, &rep.rho, n),
            spec.tol,
            spec.n_max,
        )?)
    } else {
        warnings.push(format!(
            "original integral skipped: {} variables exceed the limit of {MAX_ORIGINAL_DIM}",
            ds.ambient_dim()
        ));
        None
    };
    let series = diagonal_partial_sum(&spec.function, &ds, &t, spec.series_order)?;

    let mut deltas = Vec::new();
    if let Some(o) = &original {
        deltas.push(delta("series-original", series.value, o.value));
    }
    deltas.push(delta("series-reduced", series.value, reduced.value));
    if let Some(o) = &original {
        deltas.push(delta("original-reduced", o.value, reduced.value));
    }
    let converged = reduced.converged != Some(false)
        && original.as_ref().map_or(true, |o| o.converged != Some(false));
    if !converged {
        warnings.push(format!("quadrature did not reach tol = {:e} within n_max = {}", spec.tol, spec.n_max));
    }
    let report = EvaluateReport {
        command: "evaluate",
        problem: problem_json(spec),
        reduction,
        one_sided_cone: verification.one_sided_cone,
        numeric: NumericJson {
            series: SeriesJson {
                value: series.value.into(),
                order: series.order,
                last_shell: F17(series.last_shell),
            },
            original: original.as_ref().map(QuadratureJson::from),
            reduced: QuadratureJson::from(&reduced),
            deltas,
        },
        converged,
        warnings,
    };
    Ok(CommandOutput {
        json: to_json(&report)?,
        plot_data: None,
        nonconverged: !converged,
    })
}

#[derive(Serialize)]
struct PolytopeReport {
    command: &'static str,
    problem: ProblemJson,
    matrix: Option<Vec<Vec<BigIntJson>>>,
    polytopes: PolytopesJson,
}

pub fn cmd_polytope(spec: &ProblemSpec) -> Result<CommandOutput, CliError> {
    let np = newton_polytope(spec.function.denominator())?;
    let mut sections: Vec<(&str, Polytope)> = vec![("newton", np.clone())];
    let mut matrix: Option<IntMatrix> = None;
    if !spec.directions.is_empty() {
        let ds = diagonal_spec(spec)?;
        let a = match &spec.matrix {
            Some(a) => {
                check_completion(&ds, a)?;
                a.clone()
            }
            None => complete_to_unimodular(&ds)?,
        };
        let inv = inverse_unimodular(&a)?;
        let mapped = map_polytope(&np, &inv)?;
        let drop: Vec<usize> = (0..ds.rank()).collect();
        let projected = project_polytope(&mapped, &drop)?;
        sections.push(("transformed", mapped));
        sections.push(("projected", projected));
        matrix = Some(a);
    }
    let report = PolytopeReport {
        command: "polytope",
        problem: problem_json(spec),
        matrix: matrix.as_ref().map(matrix_json),
        polytopes: PolytopesJson {
            newton: vertices_json(&sections[0].1),
            transformed: sections.get(1).map(|s| vertices_json(&s.1)),
            projected: sections.get(2).map(|s| vertices_json(&s.1)),
        },
    };
    let refs: Vec<(&str, &Polytope)> = sections.iter().map(|(n, p)| (*n, p)).collect();
    Ok(CommandOutput {
        json: to_json(&report)?,
        plot_data: Some(plot_data(&refs)),
        nonconverged: false,
    })
}

#[derive(Serialize)]
struct CheckRhoReport {
    command: &'static str,
    problem: ProblemJson,
    rho_source: &'static str,
    rho: Vec<F17>,
    certificate: CertificateJson,
    t_bounds: Option<Vec<F17>>,
    t_admissible: Option<bool>,
}

pub fn cmd_check_rho(spec: &ProblemSpec) -> Result<CommandOutput, CliError> {
    let q = spec.function.denominator();
    let (contour, source) = match &spec.rho {
        RhoSetting::Auto => (find_rho(q)?, "auto"),
        RhoSetting::Given(r) => (Contour::new(r.clone())?, "given"),
    };
    let cert = rho_in_e0(q, &contour)?;
    let (bounds, admissible) = if spec.directions.is_empty() {
        (None, None)
    } else {
        let ds = diagonal_spec(spec)?;
        let b = t_bounds(&ds, &contour)?;
        let adm = match &spec.t {
            Some(t) => {
                check_t_len(t, ds.rank())?;
                Some(check_t_bounds(&ds, &contour, t)?)
            }
            None => None,
        };
        (Some(f17s(&b)), adm)
    };
    let report = CheckRhoReport {
        command: "check-rho",
        problem: problem_json(spec),
        rho_source: source,
        rho: f17s(contour.rho()),
        certificate: CertificateJson::from(&cert),
        t_bounds: bounds,
        t_admissible: admissible,
    };
    Ok(CommandOutput {
        json: to_json(&report)?,
        plot_data: None,
        nonconverged: false,
    })
}

/// Exit code for a finished command.
pub fn exit_code(out: &CommandOutput) -> u8 {
    if out.nonconverged {
        ExitClass::NonConvergence as u8
    } else {
        0
    }
}
