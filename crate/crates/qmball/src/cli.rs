//! Command implementations behind the `qmball` binary: normalize, act,
//! integrate, gram, verify. Pure functions from configuration to output
//! text, so they are directly testable.

use serde::Serialize;
use thiserror::Error;

use crate::action::{validate_covariance, Action, HopfConvention, QGen};
use crate::algebra::{Algebra, AlgebraError, Element, NormalMonomial, Shape};
use crate::harmonic::Harmonic;
use crate::parse::{eval, parse_element, parse_generator_word, EvalError, ParseError};
use crate::scalar::{Rational, Scalar, ScalarError};

use num_traits::{One, Zero};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Shape(#[from] AlgebraError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Scalar(#[from] ScalarError),
    #[error("integrate requires a finite element (every term must carry f0)")]
    NotFinite,
    #[error("verification failed")]
    VerifyFailed { report: String },
}

impl CliError {
    /// Contract: 2 for integrating a non-finite element, 3 for a failed
    /// verification, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotFinite => 2,
            CliError::VerifyFailed { .. } => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Shared command configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m: u8,
    pub n: u8,
    pub q_value: Option<Rational>,
    pub degree_cap: usize,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(m: u8, n: u8) -> RunConfig {
        RunConfig {
            m,
            n,
            q_value: None,
            degree_cap: 3,
            format: OutputFormat::Text,
        }
    }

    fn shape(&self) -> Result<Shape, CliError> {
        Ok(Shape::new(self.m, self.n)?)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.degree_cap < 1 {
            return Err(CliError::Config("degree cap must be at least 1".into()));
        }
        if let Some(q) = &self.q_value {
            if *q <= Rational::zero() || *q >= Rational::one() {
                return Err(CliError::Config(format!(
                    "q must lie strictly between 0 and 1, got {q}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Command {
    /// Normal-order an expression (optionally its star).
    Normalize { expr: String, star: bool },
    /// Apply a generator word to an expression, tokens left to right.
    Act { generators: String, expr: String },
    /// Integrate a finite element; exact scalar plus optional value at q.
    Integrate { expr: String },
    /// Print the degree-j Gram matrix.
    Gram { degree: usize },
    /// Run the verification suites; nonzero exit on any failure.
    Verify { inject_rprime_defect: bool },
}

#[derive(Serialize)]
struct TermJson {
    coeff: String,
    zword: Vec<[u8; 2]>,
    f0: bool,
    zsword: Vec<[u8; 2]>,
}

#[derive(Serialize)]
struct ElementJson {
    terms: Vec<TermJson>,
}

fn element_json(e: &Element) -> ElementJson {
    ElementJson {
        terms: e
            .sorted_terms()
            .into_iter()
            .map(|(mono, coeff)| TermJson {
                coeff: coeff.to_string(),
                zword: mono.zword().iter().map(|i| [i.a, i.alpha]).collect(),
                f0: mono.has_f0(),
                zsword: mono.zsword().iter().map(|i| [i.a, i.alpha]).collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct IntegralJson {
    integral: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize)]
struct GramJson {
    degree: usize,
    dim: usize,
    entries: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct SuiteJson {
    name: String,
    status: String,
    detail: String,
}

#[derive(Serialize)]
struct VerifyJson {
    passed: bool,
    suites: Vec<SuiteJson>,
}

fn render_element(e: &Element, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => e.to_string(),
        OutputFormat::Json => serde_json::to_string(&element_json(e)).expect("element serializes"),
    }
}

/// Execute one command. Returns the full stdout text (without trailing
/// newline) or an error carrying the exit code.
pub fn run(config: &RunConfig, command: &Command) -> Result<String, CliError> {
    config.validate()?;
    let shape = config.shape()?;
    match command {
        Command::Normalize { expr, star } => {
            let action = Action::standard(&Algebra::new(shape));
            let ast = parse_element(expr, shape)?;
            let mut element = eval(&ast, &action)?;
            if *star {
                element = element.star();
            }
            Ok(render_element(&element, config.format))
        }
        Command::Act { generators, expr } => {
            let action = Action::standard(&Algebra::new(shape));
            let gens = parse_generator_word(generators, shape)?;
            let ast = parse_element(expr, shape)?;
            let mut element = eval(&ast, &action)?;
            for g in gens {
                element = action.act(g, &element);
            }
            Ok(render_element(&element, config.format))
        }
        Command::Integrate { expr } => {
            let harmonic = Harmonic::standard(shape);
            let ast = parse_element(expr, shape)?;
            let element = eval(&ast, harmonic.action())?;
            let integral = harmonic
                .integrate(&element)
                .map_err(|_| CliError::NotFinite)?;
            let value = config
                .q_value
                .as_ref()
                .map(|q| integral.evaluate_at(q))
                .transpose()?;
            match config.format {
                OutputFormat::Text => {
                    let mut out = integral.to_string();
                    if let Some(v) = value {
                        out.push('\n');
                        out.push_str(&v.to_string());
                    }
                    Ok(out)
                }
                OutputFormat::Json => Ok(serde_json::to_string(&IntegralJson {
                    integral: integral.to_string(),
                    value: value.map(|v| v.to_string()),
                })
                .expect("integral serializes")),
            }
        }
        Command::Gram { degree } => {
            let harmonic = Harmonic::standard(shape);
            let gram = harmonic.gram(*degree);
            let values = config.q_value.as_ref().map(|q| gram.evaluate_at(q));
            match config.format {
                OutputFormat::Text => {
                    let rows: Vec<String> = match &values {
                        Some(vals) => vals
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .map(|v| v.to_string())
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            })
                            .collect(),
                        None => gram
                            .entries
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .map(|v| v.to_string())
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            })
                            .collect(),
                    };
                    Ok(rows.join("\n"))
                }
                OutputFormat::Json => Ok(serde_json::to_string(&GramJson {
                    degree: *degree,
                    dim: gram.dim(),
                    entries: gram
                        .entries
                        .iter()
                        .map(|row| row.iter().map(|v| v.to_string()).collect())
                        .collect(),
                    values: values.map(|vals| {
                        vals.iter()
                            .map(|row| row.iter().map(|v| v.to_string()).collect())
                            .collect()
                    }),
                })
                .expect("gram serializes")),
            }
        }
        Command::Verify {
            inject_rprime_defect,
        } => verify(config, shape, *inject_rprime_defect),
    }
}

struct Suite {
    name: &'static str,
    status: String,
    detail: String,
}

impl Suite {
    fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

fn verify(config: &RunConfig, shape: Shape, defect: bool) -> Result<String, CliError> {
    let alg = if defect {
        Algebra::with_rprime_defect(shape)
    } else {
        Algebra::new(shape)
    };
    let conv = HopfConvention::standard();
    let mut suites = Vec::new();

    let report = validate_covariance(&alg, &conv);
    let covariance_ok = report.passed();
    suites.push(Suite {
        name: "covariance",
        status: if covariance_ok { "PASS" } else { "FAIL" }.into(),
        detail: match &report.failure {
            None => format!(
                "{} relation, {} star, {} operator checks",
                report.relation_checks, report.star_checks, report.operator_checks
            ),
            Some(f) => f.to_string(),
        },
    });

    if covariance_ok {
        let harmonic =
            Harmonic::new(Action::new(&alg, conv).expect("audited convention passes the gate"));
        let grid = [
            Rational::new(1.into(), 4.into()),
            Rational::new(1.into(), 2.into()),
            Rational::new(3.into(), 4.into()),
        ];
        let mut positive_fail = None;
        'outer: for degree in 0..=config.degree_cap {
            for q in &grid {
                if !harmonic.check_positive(degree, q) {
                    positive_fail =
                        Some(format!("gram({degree}) not positive definite at q = {q}"));
                    break 'outer;
                }
            }
        }
        suites.push(Suite {
            name: "positivity",
            status: if positive_fail.is_none() {
                "PASS"
            } else {
                "FAIL"
            }
            .into(),
            detail: positive_fail.unwrap_or_else(|| {
                format!(
                    "gram(0..={}) positive definite at q in {{1/4, 1/2, 3/4}}",
                    config.degree_cap
                )
            }),
        });

        let mut invariance_fail = None;
        let mut checked = 0usize;
        'inv: for psi in (0..=2).flat_map(|d| shape.z_words(d)) {
            for phi in (0..=2).flat_map(|d| shape.z_words(d)) {
                let mut zsword = phi.clone();
                zsword.reverse();
                let mono = NormalMonomial::from_parts(psi.clone(), true, zsword);
                let f = Element::from_monomial(mono.clone(), Scalar::one());
                for g in QGen::all(shape) {
                    let residual = harmonic
                        .check_invariance(g, &f)
                        .expect("sandwich monomials are finite");
                    checked += 1;
                    if !residual.is_zero() {
                        invariance_fail = Some(format!("residual {residual} for {g} on {mono}"));
                        break 'inv;
                    }
                }
            }
        }
        suites.push(Suite {
            name: "invariance",
            status: if invariance_fail.is_none() {
                "PASS"
            } else {
                "FAIL"
            }
            .into(),
            detail: invariance_fail
                .unwrap_or_else(|| format!("{checked} generator/sandwich residuals all zero")),
        });
    } else {
        for name in ["positivity", "invariance"] {
            suites.push(Suite {
                name,
                status: "SKIPPED".into(),
                detail: "covariance failed".into(),
            });
        }
    }

    let all_passed = suites.iter().all(|s| s.passed());
    let report_text = match config.format {
        OutputFormat::Text => {
            let mut lines: Vec<String> = suites
                .iter()
                .map(|s| format!("{}: {} ({})", s.name, s.status, s.detail))
                .collect();
            lines.push(format!(
                "verify: {}",
                if all_passed { "PASS" } else { "FAIL" }
            ));
            lines.join("\n")
        }
        OutputFormat::Json => serde_json::to_string(&VerifyJson {
            passed: all_passed,
            suites: suites
                .iter()
                .map(|s| SuiteJson {
                    name: s.name.to_string(),
                    status: s.status.clone(),
                    detail: s.detail.clone(),
                })
                .collect(),
        })
        .expect("verify report serializes"),
    };
    if all_passed {
        Ok(report_text)
    } else {
        Err(CliError::VerifyFailed {
            report: report_text,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(m: u8, n: u8) -> RunConfig {
        RunConfig::new(m, n)
    }

    #[test]
    fn normalize_matches_contract() {
        let out = run(
            &config(1, 1),
            &Command::Normalize {
                expr: "zs[1,1]*z[1,1]".into(),
                star: false,
            },
        )
        .unwrap();
        assert_eq!(out, "q^2 * z[1,1]*zs[1,1] + (1 - q^2)");
    }

    #[test]
    fn integrate_matches_contract() {
        let out = run(&config(1, 1), &Command::Integrate { expr: "f0".into() }).unwrap();
        assert_eq!(out, "1");
        let out = run(
            &config(1, 1),
            &Command::Integrate {
                expr: "z[1,1]*f0*zs[1,1]".into(),
            },
        )
        .unwrap();
        assert_eq!(out, "q^-2 - 1");
        let mut cfg = config(1, 1);
        cfg.q_value = Some(Rational::new(1.into(), 2.into()));
        let out = run(
            &cfg,
            &Command::Integrate {
                expr: "z[1,1]*f0*zs[1,1]".into(),
            },
        )
        .unwrap();
        assert_eq!(out, "q^-2 - 1\n3");
    }

    #[test]
    fn integrate_rejects_polynomials() {
        let err = run(
            &config(1, 1),
            &Command::Integrate {
                expr: "z[1,1]".into(),
            },
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn star_flag() {
        let out = run(
            &config(1, 1),
            &Command::Normalize {
                expr: "q * z[1,1]".into(),
                star: true,
            },
        )
        .unwrap();
        assert_eq!(out, "q * zs[1,1]");
    }

    #[test]
    fn act_applies_left_to_right() {
        // En then Fn on f0: Fn(En(f0))
        let out = run(
            &config(1, 1),
            &Command::Act {
                generators: "En".into(),
                expr: "z[1,1]*f0".into(),
            },
        )
        .unwrap();
        // E(z f0) = E(z) f0 + K(z) E(f0) = -q^(1/2) z^2 f0 - q^2 q^(1/2)/(1-q^2) z^2 f0
        let expected = run(
            &config(1, 1),
            &Command::Normalize {
                expr: "(-s - q^2 * s/(1 - q^2)) * z[1,1]*z[1,1]*f0".to_string(),
                star: false,
            },
        )
        .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn gram_output() {
        let out = run(&config(1, 1), &Command::Gram { degree: 2 }).unwrap();
        assert_eq!(out, "1 - q^2 - q^4 + q^6");
        let mut cfg = config(1, 1);
        cfg.q_value = Some(Rational::new(1.into(), 2.into()));
        let out = run(&cfg, &Command::Gram { degree: 1 }).unwrap();
        assert_eq!(out, "3/4");
    }

    #[test]
    fn json_shapes() {
        let mut cfg = config(1, 1);
        cfg.format = OutputFormat::Json;
        let out = run(
            &cfg,
            &Command::Normalize {
                expr: "zs[1,1]*z[1,1]".into(),
                star: false,
            },
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0]["coeff"], "q^2");
        assert_eq!(terms[0]["zword"], serde_json::json!([[1, 1]]));
        assert_eq!(terms[0]["f0"], false);
        assert_eq!(terms[0]["zsword"], serde_json::json!([[1, 1]]));
        assert_eq!(terms[1]["coeff"], "1 - q^2");
    }

    #[test]
    fn verify_healthy_and_defective() {
        let out = run(
            &config(1, 1),
            &Command::Verify {
                inject_rprime_defect: false,
            },
        )
        .unwrap();
        assert!(out.ends_with("verify: PASS"), "{out}");
        let err = run(
            &config(1, 1),
            &Command::Verify {
                inject_rprime_defect: true,
            },
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let CliError::VerifyFailed { report } = err else {
            panic!("wrong error kind")
        };
        assert!(report.contains("covariance: FAIL"), "{report}");
        assert!(report.ends_with("verify: FAIL"), "{report}");
    }

    #[test]
    fn config_validation() {
        let mut cfg = config(1, 1);
        cfg.q_value = Some(Rational::new(3.into(), 2.into()));
        let err = run(&cfg, &Command::Integrate { expr: "f0".into() }).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("between 0 and 1"));
    }
}
