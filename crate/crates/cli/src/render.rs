//! Text, CSV and JSON renderings of command results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use x2susy::exactalg::rational::to_pq;
use x2susy::laguerre::{GramSchmidtReport, RelationReport, RestrictedMatrix};
use x2susy::models::{format_value, Grid, PhysicalModel, PotentialTable, SectorPreservationReport};
use x2susy::qalgebra::Sign;
use x2susy::Error;

use crate::config::CliError;
use crate::Format;

pub fn table_markdown(t: &PotentialTable, precision: Option<usize>) -> String {
    let mut s = String::new();
    for (k, v) in &t.metadata {
        let _ = writeln!(s, "- {k}: {v}");
    }
    if !t.metadata.is_empty() {
        s.push('\n');
    }
    let _ = writeln!(s, "| {} |", t.columns.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(t.columns.len()));
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|x| format_value(*x, precision)).collect();
        let _ = writeln!(s, "| {} |", cells.join(" | "));
    }
    s
}

/// Eigenvalues are the diagonal when the matrix is triangular, else absent.
pub fn spectrum(m: &RestrictedMatrix, format: Format) -> Result<String, CliError> {
    let eig: Option<Vec<String>> = m
        .is_triangular()
        .then(|| m.diagonal().iter().map(|x| x.to_string()).collect());
    Ok(match format {
        Format::Json => {
            let v = serde_json::json!({
                "side": side_name(m.side),
                "alpha": to_pq(&m.alpha),
                "enn": m.enn,
                "triangular": m.is_triangular(),
                "eigenvalues": m.is_triangular().then(|| m.diagonal().iter().map(to_pq).collect::<Vec<_>>()),
                "matrix": m.entries.iter().map(|r| r.iter().map(to_pq).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("n,eigenvalue\n");
            match &eig {
                Some(e) => {
                    for (i, x) in e.iter().enumerate() {
                        let _ = writeln!(s, "{},{x}", i + 1);
                    }
                }
                None => {
                    for i in 0..m.size() {
                        let _ = writeln!(s, "{},", i + 1);
                    }
                }
            }
            s
        }
        Format::Markdown => {
            let mut s = String::new();
            let _ = writeln!(s, "side {} alpha = {} N = {}", side_name(m.side), m.alpha, m.enn);
            match &eig {
                Some(e) => {
                    let _ = writeln!(s, "eigenvalues: {}", e.join(", "));
                }
                None => {
                    let _ = writeln!(s, "eigenvalues: not triangular; matrix only");
                }
            }
            let _ = writeln!(s, "matrix (column j = image of basis element j):");
            for row in &m.entries {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  [{}]", cells.join(", "));
            }
            s
        }
    })
}

pub fn sector_table(
    model: &PhysicalModel,
    sign: Sign,
    grid: &Grid,
    check: &SectorPreservationReport,
) -> PotentialTable {
    let sectors = model.sector_functions(sign);
    let mut columns = vec!["q".to_string(), format!("V_{}", side_name(sign))];
    columns.extend(sectors.iter().map(|s| format!("psi_{}", s.n)));
    let rows = grid
        .points()
        .into_iter()
        .map(|q| {
            let mut row = vec![q, model.v(sign, q)];
            row.extend(sectors.iter().map(|s| model.sector_value(s, q)));
            row
        })
        .collect();
    let mut metadata = BTreeMap::new();
    metadata.insert("example".to_string(), model.example.to_string());
    metadata.insert("alpha".to_string(), to_pq(&model.ctx.alpha));
    metadata.insert("enn".to_string(), model.ctx.enn.to_string());
    metadata.insert("c0".to_string(), to_pq(&model.ctx.c0));
    metadata.insert("sign".to_string(), side_name(sign).to_string());
    metadata.insert(
        "preservation_residual".to_string(),
        format!("{:e}", check.residual.max_residual),
    );
    PotentialTable {
        metadata,
        columns,
        rows,
    }
}

fn side_name(sign: Sign) -> &'static str {
    match sign {
        Sign::Minus => "minus",
        Sign::Plus => "plus",
    }
}

fn seq(v: &[x2susy::Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn opt(v: &Option<x2susy::Rational>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), |x| x.to_string())
}

/// One relation line per index, then one line per Gram-Schmidt entry.
pub fn laguerre_text(
    second: &RelationReport,
    first: &RelationReport,
    lines: usize,
    gs: Option<&GramSchmidtReport>,
) -> String {
    let mut s = String::new();
    for (a, b) in second.checks.iter().zip(&first.checks).take(lines) {
        let verdict = |ok: bool| if ok { "exact match" } else { "MISMATCH" };
        let _ = writeln!(
            s,
            "relation n={}: second kind [{}] {} (J1 eigenvalue {}); first kind [{}] {} (eigenvalue {})",
            a.index,
            seq(&a.displayed),
            verdict(a.passed),
            opt(&a.operator_eigenvalue),
            seq(&b.displayed),
            verdict(b.passed),
            opt(&b.operator_eigenvalue),
        );
    }
    if let Some(g) = gs {
        let _ = writeln!(s, "gram-schmidt weight {}, truncated at z = {}, {} nodes", g.weight, g.upper_limit, g.nodes);
        for e in &g.entries {
            let _ = writeln!(s, "gram-schmidt n={}: deviation {:.3e}", e.n, e.deviation);
        }
        let _ = writeln!(
            s,
            "gram-schmidt max deviation {:.3e}, max exact overlap {:.3e} ({})",
            g.max_deviation, g.max_exact_overlap, g.caveat
        );
    }
    s
}
