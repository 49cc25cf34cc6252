//! Shared plumbing: exit-code mapping, flag parsing helpers, table output,
//! and atomic file writes.

use std::fs;
use std::path::Path;

use pwrc::dataset::{load_dataset, Dataset};
use pwrc::harness::dataset_threshold_range;
use pwrc::indicator::uniform_grid;
use pwrc::model::ScoreSet;

use crate::{DatasetArgs, RangeArgs};

/// A diagnostic plus the process exit code it maps to. Codes are stable:
/// 2 = input validation, 3 = I/O failure, 4 = degenerate data.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, Failure>;

pub fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

pub fn degenerate(message: impl Into<String>) -> Failure {
    Failure {
        code: 4,
        message: message.into(),
    }
}

impl From<pwrc::Error> for Failure {
    fn from(err: pwrc::Error) -> Self {
        let code = match &err {
            pwrc::Error::Io(_) | pwrc::Error::Csv(_) => 3,
            pwrc::Error::ConstantScorePool
            | pwrc::Error::DegenerateCorrelates(_)
            | pwrc::Error::DegenerateThresholdRange { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

pub fn load(args: &DatasetArgs) -> CliResult<Dataset> {
    Ok(load_dataset(&args.scores, &args.preds, &args.polarity)?)
}

/// Parses the `lo:hi:count` grid grammar into threshold samples.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(invalid(format!("grid must be `lo:hi:count`, got `{spec}`")));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| invalid(format!("bad grid lower bound `{lo}`")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| invalid(format!("bad grid upper bound `{hi}`")))?;
    let count: usize = count
        .parse()
        .map_err(|_| invalid(format!("bad grid sample count `{count}`")))?;
    Ok(uniform_grid(lo, hi, count)?)
}

/// Resolves `--tmin`/`--tmax`, where `auto` takes the bound from the
/// dataset's normalized stddevs.
pub fn resolve_range(scores: &ScoreSet<f64>, range: &RangeArgs) -> CliResult<(f64, f64)> {
    let auto = if range.tmin == "auto" || range.tmax == "auto" {
        Some(dataset_threshold_range(scores)?)
    } else {
        None
    };
    let bound = |spec: &str, pick: fn(&(f64, f64)) -> f64| -> CliResult<f64> {
        if spec == "auto" {
            Ok(pick(auto.as_ref().expect("auto range resolved above")))
        } else {
            spec.parse()
                .map_err(|_| invalid(format!("bound must be `auto` or a number, got `{spec}`")))
        }
    };
    let t_min = bound(&range.tmin, |r| r.0)?;
    let t_max = bound(&range.tmax, |r| r.1)?;
    if t_min.partial_cmp(&t_max) != Some(std::cmp::Ordering::Less) {
        return Err(degenerate(format!(
            "degenerate threshold range: t_min {t_min} >= t_max {t_max}"
        )));
    }
    Ok((t_min, t_max))
}

/// Indicator value formatting: full precision for machine consumption,
/// 4 decimals for the human table.
pub fn fmt_value(v: f64, porcelain: bool) -> String {
    if porcelain {
        format!("{v}")
    } else {
        format!("{v:.4}")
    }
}

/// Prints a table: TSV under `--porcelain`, aligned columns otherwise.
pub fn print_table(header: &[&str], rows: &[Vec<String>], porcelain: bool) {
    if porcelain {
        println!("{}", header.join("\t"));
        for row in rows {
            println!("{}", row.join("\t"));
        }
        return;
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{c:<width$}", width = widths[k]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    println!("{}", line(header.to_vec()));
    for row in rows {
        println!("{}", line(row.iter().map(String::as_str).collect()));
    }
}

/// Writes via a sibling temp file plus rename, so a failure never leaves a
/// partial file at the target path.
pub fn atomic_write(path: &Path, content: &str) -> CliResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| invalid(format!("not a file path: `{}`", path.display())))?;
    let tmp = path.with_file_name(format!("{}.tmp", name.to_string_lossy()));
    let io_failure = |e: std::io::Error| Failure {
        code: 3,
        message: format!("writing `{}`: {e}", path.display()),
    };
    fs::write(&tmp, content).map_err(io_failure)?;
    fs::rename(&tmp, path).map_err(io_failure)?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| Failure {
        code: 3,
        message: format!("creating `{}`: {e}", dir.display()),
    })
}
