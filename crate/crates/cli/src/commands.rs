//! One function per subcommand, each filling a [`RunReport`].

use std::path::Path;

use numrad::approx::{best_approximation, uniqueness_certificate, CRAWFORD_FLOOR};
use numrad::matcore::operator_norm;
use numrad::orthkit::{
    bj_orthogonal_generic, bj_orthogonal_v, derivative_pair, direction_orthogonal, positive_cone_orth, rho_fd,
    rho_v_state_formula, Method, Norm, OrthReport,
};
use numrad::range::{boundary_points, crawford_details, support_profile};
use numrad::triangle::{refined_bound, triangle_equality_three, triangle_equality_two, EqualityReport};
use numrad::{Matrix, Settings};
use serde_json::Value;

use crate::report::{complex, RunReport};
use crate::{fuzz, parse_matrix, Cli, CliError, Command, OutFormat, Output};

fn load(report: &mut RunReport, name: &str, path: &Path) -> Result<Matrix, CliError> {
    let m = parse_matrix(path)?;
    report.input(name, &path.display().to_string(), &m);
    Ok(m)
}

fn same_dim(a: &Matrix, b: &Matrix) -> Result<(), CliError> {
    if a.dim() != b.dim() {
        return Err(numrad::Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    Ok(())
}

pub fn dispatch(cli: &Cli, settings: &Settings, echo: &str) -> Result<Output, CliError> {
    let mut report = RunReport::new(echo.to_string(), settings, cli.seed);
    match &cli.command {
        Command::Radius { a } => {
            let a = load(&mut report, "A", a)?;
            let profile = support_profile(&a, settings);
            report.set("radius", profile.max());
            report.set("theta", profile.argmax());
            report.set("flat", profile.flat);
        }
        Command::Norm { a } => {
            let a = load(&mut report, "A", a)?;
            let op = operator_norm(&a);
            let v = Norm::NumericalRadius.value(&a, settings);
            report.set("operator_norm", op);
            report.set("radius", v);
            report.margin("sandwich_lower", v - 0.5 * op);
            report.margin("sandwich_upper", op - v);
        }
        Command::Range { a, samples, out } => {
            let a = load(&mut report, "A", a)?;
            let boundary = boundary_points(&a, *samples)?;
            if *out == OutFormat::Csv {
                return Ok(Output {
                    stdout: boundary.to_csv(),
                    exit_code: 0,
                });
            }
            report.set("convex", boundary.convex);
            let points: Vec<Value> = boundary.points.iter().map(|p| complex(p.z)).collect();
            report.set("points", points);
        }
        Command::Crawford { b } => {
            let b = load(&mut report, "B", b)?;
            let c = crawford_details(&b, settings);
            report.set("crawford", c.value);
            report.set("contains_origin", c.contains_origin);
            report.set("theta", c.theta);
            report.set("nearest", c.nearest.map(complex).unwrap_or(Value::Null));
        }
        Command::Rho {
            a,
            b,
            side,
            norm,
            method,
        } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            let (norm, method) = (Norm::from(*norm), Method::from(*method));
            let d = match method {
                Method::FiniteDifference => rho_fd(norm, &a, &b, (*side).into(), settings),
                Method::StateFormula => {
                    if norm != Norm::NumericalRadius {
                        return Err(CliError::Usage("--method state requires --norm v".into()));
                    }
                    rho_v_state_formula(&a, &b, (*side).into(), settings)?
                }
            };
            report.set("norm", norm.as_str());
            report.set("side", d.side.as_str());
            report.set("method", d.method.as_str());
            report.set("rho", d.value);
            report.set("converged", d.converged);
            if method == Method::StateFormula {
                report.set("exhaustive", d.exhaustive);
            } else {
                let trace: Vec<Value> = d.trace.iter().map(|&(t, q)| Value::from(vec![t, q])).collect();
                report.set("trace", trace);
            }
            if let Some(w) = &d.witness {
                report.witness("maximizing_state", w);
            }
            if method == Method::FiniteDifference {
                let pair = derivative_pair(norm, &a, &b, method, settings)?;
                report.set("rho_plus", pair.rho_plus);
                report.set("rho_minus", pair.rho_minus);
            }
        }
        Command::Orth { a, b, norm } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            let norm = Norm::from(*norm);
            let r = match norm {
                Norm::NumericalRadius => bj_orthogonal_v(&a, &b, settings)?,
                Norm::Operator => bj_orthogonal_generic(norm, &a, &b, settings),
            };
            report.set("norm", norm.as_str());
            orth_fields(&mut report, &r);
        }
        Command::Dirorth { a, b } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            orth_fields(&mut report, &direction_orthogonal(&a, &b, settings)?);
        }
        Command::Posorth { a, b } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            orth_fields(&mut report, &positive_cone_orth(&a, &b, settings)?);
        }
        Command::Approx { a, b } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            let r = best_approximation(&a, &b, settings)?;
            report.set_complex("zeta", r.zeta);
            report.set("distance", r.distance);
            report.set("unique", r.unique);
            report.set("restarts_agreement", r.restarts_agreement);
            report.set("crawford_b", r.crawford_b);
            let restarts: Vec<Value> = r.restarts.iter().map(|&z| complex(z)).collect();
            report.set("restarts", restarts);
            if r.crawford_b > CRAWFORD_FLOOR {
                let sep = uniqueness_certificate(&a, &b, &r, settings)?;
                report.set("certificate_holds", sep.holds);
                report.set("strictly_better", sep.strictly_better);
                report.set("certificate_samples", sep.samples);
                report.margin("separation", sep.worst_slack);
            } else {
                report.set("certificate_holds", Value::Null);
            }
        }
        Command::Triangle { a, b, c } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            let r = match c {
                Some(c) => {
                    let c = load(&mut report, "C", c)?;
                    same_dim(&a, &c)?;
                    triangle_equality_three(&a, &b, &c, settings)?
                }
                None => triangle_equality_two(&a, &b, settings)?,
            };
            equality_fields(&mut report, &r);
        }
        Command::Refined { a, b } => {
            let (a, b) = (load(&mut report, "A", a)?, load(&mut report, "B", b)?);
            same_dim(&a, &b)?;
            let r = refined_bound(&a, &b, settings);
            let sum = Norm::NumericalRadius.value(&(&a + &b), settings);
            report.set("bound", r.bound);
            report.set("sup_product", r.sup_product);
            report.set("radius_a", r.va);
            report.set("radius_b", r.vb);
            report.set("radius_sum", sum);
            report.margin("lower", r.bound - sum);
            report.margin("upper", r.va + r.vb - r.bound);
        }
        Command::Fuzz { dims, trials } => {
            if *trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            if dims.is_empty() || dims.iter().any(|&d| d == 0 || d > 8) {
                return Err(CliError::Usage("--dims must list sizes between 1 and 8".into()));
            }
            let summary = fuzz::run(dims, *trials, cli.seed, settings);
            let stdout = if cli.json { summary.to_json() } else { summary.to_text() };
            return Ok(Output {
                stdout,
                exit_code: summary.exit_code(),
            });
        }
    }
    let stdout = if cli.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    };
    Ok(Output { stdout, exit_code: 0 })
}

fn orth_fields(report: &mut RunReport, r: &OrthReport) {
    report.set("decision", r.decision);
    report.set("verdict", r.verdict.as_str());
    report.set("route", r.route.as_str());
    report.margin(r.route.as_str(), r.margin);
    if let Some(t) = r.worst_theta {
        report.set("worst_theta", t);
    }
    if let Some(l) = r.minimizer {
        report.set_complex("minimizer", l);
    }
    if let Some(v) = r.witness_value {
        report.set("witness_value", v);
    }
    for c in &r.checks {
        let key = format!("{}_{}", c.route.as_str(), c.norm.as_str());
        report.set(&format!("check_{key}"), c.decision);
        report.margin(&key, c.margin);
    }
    if let Some(w) = &r.witness_state {
        report.witness("orthogonality_state", w);
    }
}

fn equality_fields(report: &mut RunReport, r: &EqualityReport) {
    report.set("equal", r.equal);
    report.set("lhs", r.lhs);
    report.set("rhs", r.rhs);
    report.set("verified", r.verified);
    report.margin("equality", r.lhs - r.rhs);
    if let Some(ratios) = &r.ratio_check {
        report.set("ratios", ratios.iter().map(|&z| complex(z)).collect::<Vec<_>>());
    }
    if let Some(products) = &r.products {
        report.set("products", products.iter().map(|&z| complex(z)).collect::<Vec<_>>());
    }
    if let Some(d) = r.witness_defect {
        report.margin("witness_defect", d);
    }
    if let Some(s) = r.sup_product {
        report.set("sup_product", s);
    }
    if let Some(h) = r.sup_product_holds {
        report.set("sup_product_holds", h);
    }
    if let Some(w) = &r.witness_state {
        report.witness("triangle_state", w);
    }
}
