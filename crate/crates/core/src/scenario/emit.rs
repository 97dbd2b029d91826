use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::{RateReport, ReportRow};

pub const CSV_HEADER: &str = "k,dist,residual,bound,profile";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Plotdata,
}

fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// The table as CSV. Floats use Rust's shortest round-trip formatting and
/// missing values are empty fields.
pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k,
            field(r.dist),
            r.residual,
            field(r.bound),
            field(r.profile)
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> io::Result<Vec<ReportRow>> {
    let bad = |line: usize, msg: &str| {
        io::Error::new(io::ErrorKind::InvalidData, format!("line {line}: {msg}"))
    };
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    let opt = |s: &str, line: usize| -> io::Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad(line, "bad number"))
        }
    };
    lines
        .enumerate()
        .map(|(i, l)| {
            let n = i + 2;
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 5 {
                return Err(bad(n, "expected 5 fields"));
            }
            Ok(ReportRow {
                k: f[0].parse().map_err(|_| bad(n, "bad k"))?,
                dist: opt(f[1], n)?,
                residual: opt(f[2], n)?.ok_or_else(|| bad(n, "missing residual"))?,
                bound: opt(f[3], n)?,
                profile: opt(f[4], n)?,
            })
        })
        .collect()
}

/// `log10 k  log10 v` pairs for one column, skipping `k = 0` and
/// nonpositive values.
fn plot_series(rows: &[ReportRow], col: impl Fn(&ReportRow) -> Option<f64>) -> Option<String> {
    if rows.iter().all(|r| col(r).is_none()) {
        return None;
    }
    let mut out = String::new();
    for r in rows {
        match col(r) {
            Some(v) if r.k > 0 && v > 0.0 => {
                out.push_str(&format!("{} {}\n", (r.k as f64).log10(), v.log10()));
            }
            _ => {}
        }
    }
    Some(out)
}

/// Writes the report into `dir` and returns the files written.
///
/// `Csv` gives `report.csv` (and `psi.csv` when an empirical estimate is
/// attached); `Plotdata` gives one `<column>.dat` per non-empty column.
pub fn emit(report: &RateReport, format: EmitFormat, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: &str| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    match format {
        EmitFormat::Csv => {
            put("report.csv", &to_csv(&report.rows))?;
            if let Some(psi) = &report.empirical_psi {
                let mut body = String::from("a,psi\n");
                for (a, v) in psi {
                    body.push_str(&format!("{a},{}\n", field(*v)));
                }
                put("psi.csv", &body)?;
            }
        }
        EmitFormat::Plotdata => {
            let columns: [(&str, fn(&ReportRow) -> Option<f64>); 4] = [
                ("dist", |r| r.dist),
                ("residual", |r| Some(r.residual)),
                ("bound", |r| r.bound),
                ("profile", |r| r.profile),
            ];
            for (name, col) in columns {
                if let Some(body) = plot_series(&report.rows, col) {
                    put(&format!("{name}.dat"), &body)?;
                }
            }
        }
    }
    Ok(written)
}
