use std::fmt::Write as _;

use serde::Serialize;
use tomoslice::algfit::{
    degree_bound_check, detect_min_m, effective_degree, exponent_estimate, fit_power_polynomial,
    root_structure, sweep_csv, SweepRow,
};
use tomoslice::detect::{is_ellipsoid, section_consistency_check, ConsistencyReport};
use tomoslice::radon::{range_test, MomentReport};
use tomoslice::bodies::support;
use tomoslice::sections::{profile, profile_window};
use tomoslice::{
    AlgebraicFitReport, AsymptoticReport, Body, Direction, EllipsoidReport, MinPowerReport,
    SectionProfile, Verdict,
};

use crate::args::{Command, Format};
use crate::config::{ExperimentConfig, CONSISTENCY_PROBES, QUADRIC_MAX_DEGREE, QUADRIC_WINDOW};
use crate::error::{flag, CliError};

/// Rendered report plus whether it carries a negative verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub negative: bool,
}

pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let body = config.body()?;
    match config.command {
        Command::Profile => run_profile(config, &body),
        Command::Moments => run_moments(config, &body),
        Command::Algfit => run_algfit(config, &body),
        Command::Detect => run_detect(config, &body),
        Command::Asymptote => run_asymptote(config, &body),
        Command::QuadricCheck => run_quadric_check(config, &body),
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    config: &'a ExperimentConfig,
    report: &'a R,
}

fn render<R: Serialize>(
    config: &ExperimentConfig,
    report: &R,
    csv: impl FnOnce() -> String,
) -> Result<String, CliError> {
    let json_err = |e: serde_json::Error| CliError::Core(tomoslice::Error::Serialize(e.to_string()));
    Ok(match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope { config, report }).map_err(json_err)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let header = serde_json::to_string(config).map_err(json_err)?;
            format!("# config {header}\n{}", csv())
        }
    })
}

fn key_value_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn the_direction(config: &ExperimentConfig) -> &Direction {
    &config.xi[0]
}

fn section_profile(config: &ExperimentConfig, body: &Body) -> Result<SectionProfile, CliError> {
    let xi = the_direction(config);
    Ok(match config.window {
        Some((lo, hi)) => profile_window(body, xi, lo, hi, config.grid)?,
        None if body.is_bounded() => profile(body, xi, config.grid, config.margin)?,
        None => return Err(flag("window", "unbounded bodies need an explicit t-window")),
    })
}

fn run_profile(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let p = section_profile(config, body)?;
    Ok(Outcome {
        text: render(config, &p, || p.to_csv())?,
        negative: false,
    })
}

#[derive(Serialize)]
struct MomentsOutput {
    passed: bool,
    /// `residual_norm / max(|M|, 1)`, robust when the moments vanish.
    scaled_residual: f64,
    #[serde(flatten)]
    report: MomentReport,
}

fn run_moments(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let k = config.k.unwrap_or_default();
    let report = range_test(body, k, config.directions, config.seed, config.quad_order)?;
    let norm = report.moments.iter().map(|m| m * m).sum::<f64>().sqrt();
    let scaled_residual = report.residual_norm / norm.max(1.0);
    let out = MomentsOutput {
        passed: scaled_residual < config.tol,
        scaled_residual,
        report,
    };
    Ok(Outcome {
        text: render(config, &out, || out.report.to_csv())?,
        negative: !out.passed,
    })
}

#[derive(Serialize)]
struct AlgfitOutput {
    verdict: &'static str,
    m: Option<usize>,
    degree: Option<usize>,
    effective_degree: Option<usize>,
    degree_bound_ok: Option<bool>,
    search: MinPowerReport,
}

fn run_algfit(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let xi = the_direction(config);
    let p = section_profile(config, body)?;
    let mut search = detect_min_m(&p, config.m_max, config.tol)?;
    let mut eff = None;
    if let Some(fit) = search.accepted.as_mut() {
        let hp = support(body, xi)?;
        let hm = support(body, &xi.neg())?;
        if let (Ok(hp), Ok(hm)) = (hp.finite(), hm.finite()) {
            fit.root_report = Some(root_structure(fit, hp, hm)?);
        }
        eff = Some((effective_degree(fit), degree_bound_check(fit, fit.n)));
    }
    let accepted: Option<&AlgebraicFitReport> = search.accepted.as_ref();
    let out = AlgfitOutput {
        verdict: if accepted.is_some() { "accept" } else { "none" },
        m: accepted.map(|f| f.m),
        degree: accepted.map(|f| f.degree),
        effective_degree: eff.map(|e| e.0),
        degree_bound_ok: eff.map(|e| e.1),
        search,
    };
    Ok(Outcome {
        text: render(config, &out, || sweep_csv(&out.search.attempts))?,
        negative: out.m.is_none(),
    })
}

#[derive(Serialize)]
struct DetectOutput {
    #[serde(flatten)]
    report: EllipsoidReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistency: Option<ConsistencyReport>,
}

fn run_detect(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let report = is_ellipsoid(body, config.tol, config.tol, config.directions, config.seed)?;
    let consistency = match report.verdict {
        Verdict::Accept if body.is_bounded() => Some(section_consistency_check(
            body,
            &report,
            CONSISTENCY_PROBES,
            config.seed,
        )?),
        _ => None,
    };
    let out = DetectOutput { report, consistency };
    let csv = || {
        let r = &out.report;
        let verdict = match r.verdict {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        };
        let mut rows = vec![
            ("verdict", verdict.to_string()),
            ("linear_residual", format!("{:?}", r.linear_residual)),
            ("quadratic_residual", format!("{:?}", r.quadratic_residual)),
            ("s_positive_definite", r.s_positive_definite.to_string()),
        ];
        for (i, c) in r.recovered_center.iter().enumerate() {
            rows.push(("center", format!("{i},{c:?}")));
        }
        key_value_csv(&rows)
    };
    Ok(Outcome {
        text: render(config, &out, csv)?,
        negative: out.report.verdict == Verdict::Reject,
    })
}

fn run_asymptote(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let window = config.window.unwrap_or(crate::config::DEFAULT_ASYMPTOTE_WINDOW);
    let r: AsymptoticReport = exponent_estimate(body, the_direction(config), window, config.grid)?;
    let csv = || {
        key_value_csv(&[
            ("t0", format!("{:?}", r.t0)),
            ("estimated_exponent", format!("{:?}", r.estimated_exponent)),
            ("estimated_constant", format!("{:?}", r.estimated_constant)),
            ("predicted_exponent", format!("{:?}", r.predicted_exponent)),
            ("length_scale", format!("{:?}", r.length_scale)),
        ])
    };
    Ok(Outcome {
        text: render(config, &r, csv)?,
        negative: false,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
enum QuadricStatus {
    Sufficient,
    Insufficient,
    UnboundedSlice,
}

#[derive(Debug, Clone, Serialize)]
struct QuadricRow {
    xi: Direction,
    status: QuadricStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<(f64, f64)>,
    /// Least degree for which `A²` fits below tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    m2_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m2_residual: Option<f64>,
    /// Least `(m, D)` with `m ≤ m_max`, `D ≤ 8` fitting below tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    attempts: Vec<SweepRow>,
}

/// Smallest degree `D ≤ QUADRIC_MAX_DEGREE` with residual below `tol`, and
/// every attempt made on the way.
fn least_degree(p: &SectionProfile, m: usize, tol: f64) -> Result<(Option<usize>, Vec<SweepRow>), CliError> {
    let mut rows = Vec::new();
    for degree in 0..=QUADRIC_MAX_DEGREE {
        let fit = fit_power_polynomial(p, m, degree)?;
        rows.push(SweepRow {
            m,
            degree,
            relative_residual: fit.relative_residual,
        });
        if fit.relative_residual < tol {
            return Ok((Some(degree), rows));
        }
    }
    Ok((None, rows))
}

fn run_quadric_check(config: &ExperimentConfig, body: &Body) -> Result<Outcome, CliError> {
    let Body::Quadric(q) = body else {
        return Err(flag("body", "quadric-check needs a paraboloid or hyperboloid body"));
    };
    let directions = if config.xi.is_empty() {
        vec![Direction::axis(q.dim(), q.dim() - 1)]
    } else {
        config.xi.clone()
    };
    let mut rows = Vec::with_capacity(directions.len());
    for xi in directions {
        let floor = q.support(&xi.neg()).finite().map(|h| -h);
        let floor = match floor {
            Ok(f) if q.slice_bounded(&xi) => f,
            _ => {
                rows.push(QuadricRow {
                    xi,
                    status: QuadricStatus::UnboundedSlice,
                    window: None,
                    m2_degree: None,
                    m2_residual: None,
                    minimal: None,
                    attempts: Vec::new(),
                });
                continue;
            }
        };
        let (lo, hi) = config
            .window
            .unwrap_or((floor + QUADRIC_WINDOW.0, floor + QUADRIC_WINDOW.1));
        if lo < floor {
            return Err(flag("window", format!("window starts below the body at t = {floor:?}")));
        }
        let p = profile_window(body, &xi, lo, hi, config.grid)?;
        let (m2_degree, attempts) = least_degree(&p, 2, config.tol)?;
        let m2_residual = attempts.last().map(|r| r.relative_residual);
        let mut minimal = None;
        for m in 1..=config.m_max {
            if let (Some(d), _) = least_degree(&p, m, config.tol)? {
                minimal = Some((m, d));
                break;
            }
        }
        rows.push(QuadricRow {
            xi,
            status: if m2_degree.is_some() {
                QuadricStatus::Sufficient
            } else {
                QuadricStatus::Insufficient
            },
            window: Some((lo, hi)),
            m2_degree,
            m2_residual,
            minimal,
            attempts,
        });
    }
    let checked = rows
        .iter()
        .filter(|r| !matches!(r.status, QuadricStatus::UnboundedSlice))
        .count();
    let negative = checked == 0
        || rows
            .iter()
            .any(|r| matches!(r.status, QuadricStatus::Insufficient));
    let csv = || {
        let mut out = String::from("xi,status,m2_degree,m2_residual,min_m,min_degree\n");
        for r in &rows {
            let xi: Vec<String> = r.xi.as_slice().iter().map(|x| format!("{x:?}")).collect();
            let status = serde_json::to_value(&r.status).unwrap_or_default();
            let opt = |v: Option<String>| v.unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                xi.join(" "),
                status.as_str().unwrap_or_default(),
                opt(r.m2_degree.map(|d| d.to_string())),
                opt(r.m2_residual.map(|v| format!("{v:?}"))),
                opt(r.minimal.map(|m| m.0.to_string())),
                opt(r.minimal.map(|m| m.1.to_string())),
            );
        }
        out
    };
    Ok(Outcome {
        text: render(config, &rows, csv)?,
        negative,
    })
}
