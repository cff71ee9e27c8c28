//! Resolution of `--c`, `--rho`, `--dims` and `--dirs` arguments.

use std::path::Path;

use bellscope_core::correlators::{builtin, CorrelationMatrix, CorrelatorKind};
use bellscope_core::states::{
    ghz_2x2x2, max_entangled_2x2, max_entangled_2x3, max_entangled_3x3, werner, DensityMatrix,
    WernerParameter,
};
use bellscope_core::tomography::DirectionSet;
use bellscope_core::Error;

use crate::CliError;

pub fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad --dims entry {t:?}")))
        })
        .collect()
}

fn check_dims(what: &str, found: &[usize], wanted: Option<&[usize]>) -> Result<(), CliError> {
    match wanted {
        Some(w) if w != found => Err(CliError::Usage(format!(
            "{what} has dims {found:?} but --dims is {w:?}"
        ))),
        _ => Ok(()),
    }
}

/// `sigma | ihat | phat | file:<path>`.
pub fn correlator(label: &str, dims: Option<&[usize]>) -> Result<CorrelationMatrix, CliError> {
    if let Some(path) = label.strip_prefix("file:") {
        let c = CorrelationMatrix::load(Path::new(path))?;
        check_dims("correlator file", c.dims(), dims)?;
        return Ok(c);
    }
    let kind: CorrelatorKind = label.parse()?;
    if kind == CorrelatorKind::Custom {
        return Err(CliError::Usage(
            "custom correlators are read with file:<path>".into(),
        ));
    }
    let dims = dims.ok_or_else(|| CliError::Usage(format!("--c {label} needs --dims")))?;
    Ok(builtin(kind, dims)?)
}

/// `bell22 | bell | bell23 | bell33 | ghz222 | werner:<p> | [file:]<path>`.
pub fn density(label: &str, dims: Option<&[usize]>) -> Result<DensityMatrix, CliError> {
    let rho = match label {
        "bell22" | "bell" => max_entangled_2x2(),
        "bell23" => max_entangled_2x3(),
        "bell33" => max_entangled_3x3(),
        "ghz222" => ghz_2x2x2(),
        _ => {
            if let Some(p) = label.strip_prefix("werner:") {
                let p: f64 = p
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad Werner parameter {p:?}")))?;
                werner(WernerParameter::new(p)?)
            } else {
                let path = label.strip_prefix("file:").unwrap_or(label);
                if !Path::new(path).exists() {
                    return Err(CliError::Usage(format!(
                        "unknown state {label:?} (not a builtin label or an existing file)"
                    )));
                }
                DensityMatrix::load(Path::new(path))?
            }
        }
    };
    check_dims("state", rho.dims(), dims)?;
    Ok(rho)
}

/// Reads a direction file, or the `angles` of an emitted evaluation.
pub fn directions(path: &Path) -> Result<DirectionSet, CliError> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let inner = match value.get("angles") {
        Some(angles) => angles.to_string(),
        None => text,
    };
    Ok(DirectionSet::from_json_str(&inner)?)
}

/// All-zero angles, one direction per outcome on every subsystem.
pub fn zero_directions(dims: &[usize]) -> Result<DirectionSet, CliError> {
    let groups: Vec<Vec<(f64, f64)>> = dims.iter().map(|&d| vec![(0.0, 0.0); d]).collect();
    Ok(DirectionSet::from_angles(dims, &groups)?)
}
