//! File formats: path/sample CSV, report CSV and JSON helpers.
//!
//! Path CSVs use Rust's shortest-round-trip float formatting, so reading
//! the file back reproduces the exact binary64 values. Report CSVs are for
//! plotting and print 17 significant digits. All CSV output is RFC 4180
//! framed (CRLF, comma separated, no quoting needed for these columns).

use serde::Serialize;

use crate::config::CliError;
use crate::report::ExperimentReport;
use roughbdg_core::stochastic::MartingaleSample;
use roughbdg_core::{GroupPath, VariationResult};

const CRLF: &str = "\r\n";

fn upper_headers(d: usize, prefix: &str) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(format!("{prefix}_{i}_{j}"));
        }
    }
    out
}

/// Columnar CSV: time, x_0..x_{d-1}, upper-triangular log-area entries.
pub fn path_to_csv(path: &GroupPath) -> String {
    let d = path.dim();
    let mut s = String::new();
    s.push_str("time");
    for i in 0..d {
        s.push_str(&format!(",x_{i}"));
    }
    for h in upper_headers(d, "a") {
        s.push(',');
        s.push_str(&h);
    }
    s.push_str(CRLF);
    for k in 0..path.len() {
        s.push_str(&format!("{}", path.times()[k]));
        for v in path.x_at(k) {
            s.push_str(&format!(",{v}"));
        }
        let a = path.a_at(k);
        for i in 0..d {
            for j in (i + 1)..d {
                s.push_str(&format!(",{}", a[i * d + j]));
            }
        }
        s.push_str(CRLF);
    }
    s
}

/// Inverse of [`path_to_csv`]; bit-exact.
pub fn path_from_csv(text: &str) -> Result<GroupPath, CliError> {
    let mut lines = text.lines().filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::schema("empty path CSV"))?;
    let cols: Vec<&str> = header.split(',').collect();
    let d = cols.iter().filter(|c| c.starts_with("x_")).count();
    if d == 0 {
        return Err(CliError::schema("path CSV header has no x columns"));
    }
    let expected = 1 + d + d * (d - 1) / 2;
    if cols.len() != expected {
        return Err(CliError::schema(format!(
            "path CSV header has {} columns, expected {expected}",
            cols.len()
        )));
    }
    let mut times = Vec::new();
    let mut xs = Vec::new();
    let mut aas = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(CliError::schema(format!(
                "path CSV row {} has {} fields, expected {expected}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse::<f64>()
                .map_err(|_| CliError::schema(format!("bad float {s:?} in path CSV")))
        };
        times.push(parse(fields[0])?);
        for f in &fields[1..=d] {
            xs.push(parse(f)?);
        }
        let mut a = vec![0.0; d * d];
        let mut idx = 1 + d;
        for i in 0..d {
            for j in (i + 1)..d {
                let v = parse(fields[idx])?;
                a[i * d + j] = v;
                a[j * d + i] = -v;
                idx += 1;
            }
        }
        aas.extend_from_slice(&a);
    }
    GroupPath::from_raw(d, times, xs, aas)
        .map_err(|e| CliError::schema(format!("invalid path data: {e}")))
}

/// Path columns of the lift plus value and running-bracket column blocks.
pub fn sample_to_csv(sample: &MartingaleSample) -> String {
    let d = sample.dim();
    let path = &sample.lift;
    let mut s = String::new();
    s.push_str("time");
    for i in 0..d {
        s.push_str(&format!(",x_{i}"));
    }
    for h in upper_headers(d, "a") {
        s.push(',');
        s.push_str(&h);
    }
    for i in 0..d {
        s.push_str(&format!(",value_{i}"));
    }
    for i in 0..d {
        s.push_str(&format!(",bracket_{i}"));
    }
    s.push_str(CRLF);
    for k in 0..path.len() {
        s.push_str(&format!("{}", path.times()[k]));
        for v in path.x_at(k) {
            s.push_str(&format!(",{v}"));
        }
        let a = path.a_at(k);
        for i in 0..d {
            for j in (i + 1)..d {
                s.push_str(&format!(",{}", a[i * d + j]));
            }
        }
        for v in sample.value_at(k) {
            s.push_str(&format!(",{v}"));
        }
        for v in sample.bracket_at(k) {
            s.push_str(&format!(",{v}"));
        }
        s.push_str(CRLF);
    }
    s
}

/// Flat per-row table for plotting; 17 significant digits.
pub fn report_to_csv(report: &ExperimentReport) -> String {
    let mut s = String::new();
    s.push_str("label,x,lhs,lhs_se,rhs,rhs_se,implied");
    s.push_str(CRLF);
    for row in &report.rows {
        s.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}{CRLF}",
            row.label, row.x, row.lhs, row.lhs_se, row.rhs, row.rhs_se, row.implied
        ));
    }
    s
}

#[derive(Serialize)]
struct VariationJson<'a> {
    value: f64,
    p: f64,
    dissection: &'a [usize],
}

/// JSON serialization of a variation result including the maximizing
/// dissection indices.
pub fn variation_to_json(r: &VariationResult) -> String {
    serde_json::to_string_pretty(&VariationJson {
        value: r.value,
        p: r.p,
        dissection: r.dissection.indices(),
    })
    .expect("serializes")
}

#[derive(Serialize)]
struct PathJson<'a> {
    d: usize,
    times: &'a [f64],
    xs: &'a [f64],
    aas: &'a [f64],
}

/// JSON variant of the path serialization.
pub fn path_to_json(path: &GroupPath) -> String {
    serde_json::to_string(&PathJson {
        d: path.dim(),
        times: path.times(),
        xs: path.xs_raw(),
        aas: path.aas_raw(),
    })
    .expect("serializes")
}
