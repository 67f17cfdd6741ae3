//! The table-producing commands: poly, connect, kernel.

use serde_json::json;
use sobolag::{
    connect_shifted, connect_zeta, ConnectionResult, KernelRequest, LaguerreFamily, Poly, Scalar,
    SobolevFamily,
};

use crate::failure::Failure;
use crate::output::{csv_line, render_f64, Format};
use crate::specfile::{parse_grid_point, parse_rational, Backend, SpecFile};

/// Renders one scalar: exact values as "p/q", floats round-trippably.
fn render_scalar<S: Scalar>(value: &S) -> String {
    if S::EXACT {
        value.to_string()
    } else {
        render_f64(value.to_f64_lossy())
    }
}

fn render_coeffs<S: Scalar>(poly: &Poly<S>) -> Vec<String> {
    poly.coeffs().iter().map(render_scalar).collect()
}

/// Which family a polynomial table is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    Sobolev,
    Classical,
}

/// Connection basis selection on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BasisArg {
    Zeta,
    Shifted,
}

/// Coefficient tables for degrees 0..=degree, one family member per row.
pub fn cmd_poly(
    file: &SpecFile,
    degree: usize,
    family: FamilyChoice,
    backend: Backend,
    format: Format,
) -> Result<String, Failure> {
    let rows = match backend {
        Backend::Exact => poly_rows(&file.to_spec()?, degree, family)?,
        Backend::Float => poly_rows(&file.to_float_spec()?, degree, family)?,
    };
    Ok(match format {
        Format::Csv => {
            let lines: Vec<String> = rows
                .iter()
                .map(|(n, coeffs)| {
                    let mut cells = vec![n.to_string()];
                    cells.extend(coeffs.iter().cloned());
                    csv_line(cells)
                })
                .collect();
            lines.join("\n")
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(n, coeffs)| json!({ "degree": n, "coefficients": coeffs }))
                .collect();
            serde_json::to_string_pretty(&items).expect("table serializes")
        }
    })
}

fn poly_rows<S: Scalar>(
    spec: &sobolag::SobolevSpec<S>,
    degree: usize,
    family: FamilyChoice,
) -> Result<Vec<(usize, Vec<String>)>, Failure> {
    let mut rows = Vec::with_capacity(degree + 1);
    match family {
        FamilyChoice::Classical => {
            let fam = LaguerreFamily::new(spec.alpha().clone())?;
            for n in 0..=degree {
                rows.push((n, render_coeffs(&fam.poly(n))));
            }
        }
        FamilyChoice::Sobolev => {
            let fam = SobolevFamily::new(spec.clone())?;
            for n in 0..=degree {
                rows.push((n, render_coeffs(&fam.polynomial(n)?)));
            }
        }
    }
    Ok(rows)
}

/// Evaluation grid for degrees 0..=degree, always on the float backend.
pub fn cmd_poly_eval(
    file: &SpecFile,
    degree: usize,
    family: FamilyChoice,
    grid_text: &[String],
    format: Format,
) -> Result<String, Failure> {
    let grid: Vec<f64> = grid_text
        .iter()
        .map(|t| parse_grid_point(t))
        .collect::<Result<_, _>>()?;
    let spec = file.to_float_spec()?;
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(degree + 1);
    match family {
        FamilyChoice::Classical => {
            let fam = LaguerreFamily::new(*spec.alpha())?;
            let columns: Vec<Vec<f64>> = grid.iter().map(|x| fam.evals_up_to(degree, x)).collect();
            for n in 0..=degree {
                values.push(columns.iter().map(|column| column[n]).collect());
            }
        }
        FamilyChoice::Sobolev => {
            let fam = SobolevFamily::new(spec)?;
            for n in 0..=degree {
                let row = grid
                    .iter()
                    .map(|x| fam.evaluate(n, x))
                    .collect::<Result<Vec<f64>, _>>()?;
                values.push(row);
            }
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut lines = Vec::with_capacity(degree + 2);
            let mut header = vec!["degree".to_string()];
            header.extend(grid.iter().map(|x| render_f64(*x)));
            lines.push(csv_line(header));
            for (n, row) in values.iter().enumerate() {
                let mut cells = vec![n.to_string()];
                cells.extend(row.iter().map(|v| render_f64(*v)));
                lines.push(csv_line(cells));
            }
            lines.join("\n")
        }
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    json!({
                        "degree": n,
                        "values": row.iter().map(|v| render_f64(*v)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "grid": grid.iter().map(|x| render_f64(*x)).collect::<Vec<_>>(),
                "rows": rows,
            });
            serde_json::to_string_pretty(&doc).expect("table serializes")
        }
    })
}

/// Expands S_degree over the chosen basis. Returns the rendered table and
/// an optional warning for stderr.
pub fn cmd_connect(
    file: &SpecFile,
    degree: usize,
    basis: BasisArg,
    backend: Backend,
    format: Format,
) -> Result<(String, Option<String>), Failure> {
    match backend {
        Backend::Exact => {
            let fam = SobolevFamily::new(file.to_spec()?)?;
            let result = match basis {
                BasisArg::Zeta => connect_zeta(&fam, degree)?,
                BasisArg::Shifted => connect_shifted(&fam, degree)?,
            };
            Ok(render_connection(&result, format))
        }
        Backend::Float => {
            let fam = SobolevFamily::new(file.to_float_spec()?)?;
            let result = match basis {
                BasisArg::Zeta => connect_zeta(&fam, degree)?,
                BasisArg::Shifted => connect_shifted(&fam, degree)?,
            };
            Ok(render_connection(&result, format))
        }
    }
}

fn render_connection<S: Scalar>(
    result: &ConnectionResult<S>,
    format: Format,
) -> (String, Option<String>) {
    let coeffs: Vec<String> = result.coefficients.iter().map(render_scalar).collect();
    let residual = if S::EXACT {
        "0".to_string()
    } else {
        render_f64(result.residual_norm_f64())
    };
    let rendered = match format {
        Format::Csv => {
            let mut header = vec![
                "basis".to_string(),
                "degree".to_string(),
                "condition_ok".to_string(),
                "residual_norm".to_string(),
            ];
            let mut row = vec![
                result.basis.as_str().to_string(),
                result.degree.to_string(),
                result.condition_ok.to_string(),
                residual.clone(),
            ];
            for (j, c) in coeffs.iter().enumerate() {
                header.push(format!("c{}", j));
                row.push(c.clone());
            }
            format!("{}\n{}", csv_line(header), csv_line(row))
        }
        Format::Json => {
            let doc = json!({
                "basis": result.basis.as_str(),
                "degree": result.degree,
                "coefficients": coeffs,
                "residual_norm": residual,
                "condition_ok": result.condition_ok,
            });
            serde_json::to_string_pretty(&doc).expect("table serializes")
        }
    };
    let warning = if result.condition_ok {
        None
    } else {
        Some(
            "warning: a ladder polynomial vanishes at a mass location; \
             the expansion is certified by its zero residual instead"
                .to_string(),
        )
    };
    (rendered, warning)
}

/// Evaluates K_degree^(j,k)(x, y) through the definition and through the
/// closed form, and reports whether the two agree.
pub fn cmd_kernel(
    file: &SpecFile,
    request: KernelRequest,
    x_text: &str,
    y_text: &str,
    backend: Backend,
    format: Format,
) -> Result<String, Failure> {
    match backend {
        Backend::Exact => {
            let spec = file.to_spec()?;
            let fam = LaguerreFamily::new(spec.alpha().clone())?;
            let x = parse_rational(x_text)?;
            let y = parse_rational(y_text)?;
            let sum = request.evaluate_sum(&fam, &x, &y);
            let closed = request.evaluate_closed_form(&fam, &x, &y)?;
            let agree = sum == closed;
            Ok(render_kernel(
                &request,
                &render_scalar(&x),
                &render_scalar(&y),
                &render_scalar(&sum),
                &render_scalar(&closed),
                agree,
                format,
            ))
        }
        Backend::Float => {
            let spec = file.to_float_spec()?;
            let fam = LaguerreFamily::new(*spec.alpha())?;
            let x = parse_grid_point(x_text)?;
            let y = parse_grid_point(y_text)?;
            let sum = request.evaluate_sum(&fam, &x, &y);
            let closed = request.evaluate_closed_form(&fam, &x, &y)?;
            let agree = (sum - closed).is_negligible(sum.abs().max(closed.abs()));
            Ok(render_kernel(
                &request,
                &render_f64(x),
                &render_f64(y),
                &render_f64(sum),
                &render_f64(closed),
                agree,
                format,
            ))
        }
    }
}

fn render_kernel(
    request: &KernelRequest,
    x: &str,
    y: &str,
    sum: &str,
    closed: &str,
    agree: bool,
    format: Format,
) -> String {
    match format {
        Format::Csv => {
            let header = [
                "degree",
                "j",
                "k",
                "x",
                "y",
                "sum_path",
                "closed_form",
                "agree",
            ];
            let row = [
                request.n.to_string(),
                request.j.to_string(),
                request.k.to_string(),
                x.to_string(),
                y.to_string(),
                sum.to_string(),
                closed.to_string(),
                agree.to_string(),
            ];
            format!("{}\n{}", csv_line(header), csv_line(row))
        }
        Format::Json => {
            let doc = json!({
                "degree": request.n,
                "j": request.j,
                "k": request.k,
                "x": x,
                "y": y,
                "sum_path": sum,
                "closed_form": closed,
                "agree": agree,
            });
            serde_json::to_string_pretty(&doc).expect("table serializes")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_single_mass() -> SpecFile {
        serde_json::from_str(r#"{"alpha":"0","masses":[{"c":"0","nu":0,"mu":"1"}]}"#).unwrap()
    }

    #[test]
    fn sobolev_table_matches_the_hand_computed_degree_one() {
        let table = cmd_poly(
            &spec_single_mass(),
            1,
            FamilyChoice::Sobolev,
            Backend::Exact,
            Format::Csv,
        )
        .unwrap();
        assert_eq!(table, "0,1\n1,1/2,-1");
    }

    #[test]
    fn classical_table_prints_laguerre_coefficients() {
        let table = cmd_poly(
            &spec_single_mass(),
            1,
            FamilyChoice::Classical,
            Backend::Exact,
            Format::Csv,
        )
        .unwrap();
        assert_eq!(table, "0,1\n1,1,-1");
    }

    #[test]
    fn connect_shifted_emits_the_hand_computed_coefficients() {
        let (table, warning) = cmd_connect(
            &spec_single_mass(),
            1,
            BasisArg::Shifted,
            Backend::Exact,
            Format::Csv,
        )
        .unwrap();
        assert_eq!(
            table,
            "basis,degree,condition_ok,residual_norm,c0,c1\nshifted-parameter,1,true,0,1,-1/2"
        );
        assert!(warning.is_none());
    }

    #[test]
    fn kernel_paths_agree_in_the_table() {
        let table = cmd_kernel(
            &spec_single_mass(),
            KernelRequest { n: 1, j: 0, k: 0 },
            "0",
            "0",
            Backend::Exact,
            Format::Csv,
        )
        .unwrap();
        assert!(table.ends_with("1,0,0,0,0,2,2,true"));
    }

    #[test]
    fn singular_degree_maps_to_the_existence_exit_code() {
        let file: SpecFile =
            serde_json::from_str(r#"{"alpha":"0","masses":[{"c":"0","nu":0,"mu":"-1"}]}"#).unwrap();
        let err =
            cmd_poly(&file, 2, FamilyChoice::Sobolev, Backend::Exact, Format::Csv).unwrap_err();
        assert_eq!(err.code, 3);
        assert!(err.message.contains("degree 1"));
    }
}
