//! Turning command-line values into library inputs.

use std::fs;
use std::path::Path;

use fraisse_core::classes::ClassSpec;
use fraisse_core::expansions::LinearOrdering;
use fraisse_core::flows::{Perm, PermGroup};
use fraisse_core::structures::Structure;
use serde::Deserialize;

use crate::error::CliError;
use crate::request::FlowSource;

fn looks_like_path(arg: &str) -> bool {
    arg.contains(['/', '\\', '.']) || Path::new(arg).is_file()
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read `{path}`: {e}")))
}

fn json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed {what}: {e}")))
}

/// A builtin class name or a class-spec file.
pub fn class(arg: &str) -> Result<ClassSpec, CliError> {
    if looks_like_path(arg) {
        Ok(ClassSpec::from_json(&read(arg)?)?)
    } else {
        Ok(ClassSpec::builtin_named(arg)?)
    }
}

/// The base class of an expansion: given explicitly, or the known base.
pub fn base(arg: Option<&str>, k: &ClassSpec) -> Result<ClassSpec, CliError> {
    match arg {
        Some(a) => class(a),
        None => k
            .base_class()
            .ok_or_else(|| CliError::Usage(format!("{} has no known base class; pass --base", k.label()))),
    }
}

/// A structure file, or `N` for the only member of `k` with `N` points.
pub fn structure(arg: &str, k: &ClassSpec, role: &str) -> Result<Structure, CliError> {
    if let Ok(n) = arg.trim().parse::<usize>() {
        let mut members = k.members(n);
        return match members.len() {
            1 => Ok(members.remove(0)),
            m => Err(CliError::Usage(format!(
                "{} has {m} members with {n} points, so --{role} {n} is ambiguous; pass a structure file",
                k.label()
            ))),
        };
    }
    json(&read(arg)?, "structure file")
}

/// A bare structure file (no class to resolve sizes against).
pub fn structure_file(arg: &str) -> Result<Structure, CliError> {
    json(&read(arg)?, "structure file")
}

/// Comma-separated point indices.
pub fn points(arg: &str) -> Result<Vec<usize>, CliError> {
    if arg.trim().is_empty() {
        return Ok(vec![]);
    }
    arg.split(',')
        .map(|p| p.trim().parse().map_err(|_| CliError::Input(format!("`{p}` is not a point index"))))
        .collect()
}

pub fn ordering(arg: &str) -> Result<LinearOrdering, CliError> {
    Ok(LinearOrdering::new(points(arg)?)?)
}

fn inline_or_file(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('[') || arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read(arg)
    }
}

/// A list of permutations, or a single one, as JSON text or a file.
pub fn perms(arg: Option<&str>) -> Result<Vec<Perm>, CliError> {
    let Some(arg) = arg else { return Ok(vec![]) };
    let text = inline_or_file(arg)?;
    if let Ok(list) = serde_json::from_str::<Vec<Perm>>(&text) {
        return Ok(list);
    }
    Ok(vec![json::<Perm>(&text, "permutation list")?])
}

/// `KIND:N` or a group file `{"degree": .., "generators": [..]}`.
pub fn group(arg: &str) -> Result<PermGroup, CliError> {
    if arg.contains(':') && !Path::new(arg).is_file() {
        Ok(PermGroup::from_spec(arg)?)
    } else {
        json(&inline_or_file(arg)?, "group file")
    }
}

#[derive(Deserialize)]
struct FlowFile {
    group: PermGroup,
    points: usize,
    generator_actions: Vec<Vec<usize>>,
}

/// `lo:N`, `regular:KIND:N`, `natural:KIND:N`, `point:KIND:N`, or a flow
/// file with `group`, `points` and `generator_actions`.
pub fn flow(arg: &str) -> Result<FlowSource, CliError> {
    if Path::new(arg).is_file() || arg.trim_start().starts_with('{') {
        let f: FlowFile = json(&inline_or_file(arg)?, "flow file")?;
        return Ok(FlowSource::Explicit { group: f.group, points: f.points, generator_actions: f.generator_actions });
    }
    let (kind, rest) = arg
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("flow `{arg}` is neither a file nor KIND:ARGS")))?;
    match kind {
        "lo" => Ok(FlowSource::Lo {
            n: rest.parse().map_err(|_| CliError::Input(format!("bad size in `{arg}`")))?,
        }),
        "regular" => Ok(FlowSource::Regular { group: group(rest)? }),
        "natural" => Ok(FlowSource::Natural { group: group(rest)? }),
        "point" => Ok(FlowSource::Point { group: group(rest)? }),
        other => Err(CliError::Unknown(format!("unknown flow kind `{other}`"))),
    }
}
