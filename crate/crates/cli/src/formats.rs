//! File formats: attack files (JSON), curve CSV and grid specs.

use std::path::Path;

use pingpong_core::search::SearchResult;
use pingpong_core::{validate_attack, AttackSpec, CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CSV_HEADER: [&str; 5] = [
    "d_target",
    "d_achieved",
    "objective",
    "best_value",
    "evaluations",
];

/// On-disk attack description. Complex numbers are `[re, im]` pairs and
/// `unitary` is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackFile {
    pub ancilla_dim: usize,
    pub chi: Vec<[f64; 2]>,
    pub unitary: Vec<Vec<[f64; 2]>>,
}

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex([re, im]: [f64; 2]) -> C64 {
    C64::new(re, im)
}

impl AttackFile {
    pub fn from_spec(spec: &AttackSpec) -> Self {
        let u = &spec.unitary;
        Self {
            ancilla_dim: spec.ancilla_dim,
            chi: spec.chi.iter().map(pair).collect(),
            unitary: (0..u.rows())
                .map(|i| u.row(i).iter().map(pair).collect())
                .collect(),
        }
    }

    /// Builds and validates the attack; every violated invariant is listed.
    pub fn to_spec(&self) -> Result<AttackSpec, CliError> {
        let width = self.unitary.first().map_or(0, Vec::len);
        if let Some((i, row)) = self
            .unitary
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != width)
        {
            return Err(CliError::Invalid(format!(
                "field `unitary`: row {i} has {} entries, row 0 has {width}",
                row.len()
            )));
        }
        let rows: Vec<Vec<C64>> = self
            .unitary
            .iter()
            .map(|r| r.iter().copied().map(complex).collect())
            .collect();
        let spec = AttackSpec {
            ancilla_dim: self.ancilla_dim,
            chi: self.chi.iter().copied().map(complex).collect(),
            unitary: CMatrix::from_rows(&rows)?,
        };
        if let Err(violations) = validate_attack(&spec) {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(CliError::Invalid(list.join("; ")));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("attack file serializes")
    }
}

/// Parses an attack from JSON text. Syntax and schema errors carry the
/// serde location (line, column) and the offending field.
pub fn parse_attack(text: &str) -> Result<AttackSpec, CliError> {
    let file: AttackFile =
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("parse error: {e}")))?;
    file.to_spec()
}

pub fn load_attack(path: &Path) -> Result<AttackSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_attack(&text).map_err(|e| match e {
        CliError::Invalid(msg) => CliError::Invalid(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Renders a real with 12 significant digits; fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

/// CSV for one sweep, one row per grid point and objective. Infeasible
/// points report the closest detection probability reached and `NaN`.
pub fn curve_csv(points: &[SearchResult]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for p in points {
        let (d_achieved, value) = match p {
            SearchResult::Found(c) => (c.d_achieved, c.best_value()),
            SearchResult::Infeasible { closest_d, .. } => (*closest_d, f64::NAN),
        };
        w.write_record([
            fmt_sig(p.d_target()),
            fmt_sig(d_achieved),
            p.objective().name().to_string(),
            fmt_sig(value),
            p.evaluations().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// `start:stop:step` (inclusive) or a comma-separated list; blank means empty.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::Usage(format!("bad grid value `{}`", s.trim())))
    };
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(CliError::Usage(format!(
                "grid `{spec}` is not start:stop:step"
            )));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if step <= 0.0 || stop < start {
            return Err(CliError::Usage(format!(
                "grid `{spec}` needs step > 0 and stop >= start"
            )));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| start + i as f64 * step).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if let Some(bad) = grid.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(CliError::Usage(format!("grid value {bad} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "grid values must be strictly increasing".into(),
        ));
    }
    Ok(grid)
}
