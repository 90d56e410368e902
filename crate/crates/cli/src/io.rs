use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tofsynth::dense::Matrix;
use tofsynth::{ChannelMatrix, Circuit, GenTriple};

use crate::CliError;

/// A synthesis target as read from disk.
pub enum Target {
    Unitary(Matrix),
    Channel(ChannelMatrix),
}

impl Target {
    pub fn num_qubits(&self) -> usize {
        match self {
            Target::Unitary(u) => u.nrows().trailing_zeros() as usize,
            Target::Channel(c) => c.num_qubits(),
        }
    }
}

/// One instance produced by `random`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Instance {
    pub seed: u64,
    pub tof_in: usize,
    pub word: Vec<GenTriple>,
    pub channel: ChannelMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clifford: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub seed: u64,
    pub instances: Vec<Instance>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Fail(format!("cannot write {}: {e}", path.display())))
}

fn bad(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {what}", path.display()))
}

/// Reads a unitary (`{"n", "matrix"}`), a channel (`{"n", "entries"}`), a
/// random instance (`{"channel", ...}`) or an instance file, in which case
/// `index` selects the instance.
pub fn read_target(path: &Path, index: usize) -> Result<Target, CliError> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(path, e))?;
    target_from_value(path, value, index)
}

fn target_from_value(path: &Path, value: Value, index: usize) -> Result<Target, CliError> {
    let Value::Object(obj) = &value else {
        return Err(bad(path, "expected a JSON object"));
    };
    if obj.contains_key("matrix") {
        return unitary_from_value(path, &value).map(Target::Unitary);
    }
    if obj.contains_key("entries") {
        let m: ChannelMatrix = serde_json::from_value(value).map_err(|e| bad(path, e))?;
        return Ok(Target::Channel(m));
    }
    if let Some(ch) = obj.get("channel") {
        let m: ChannelMatrix =
            serde_json::from_value(ch.clone()).map_err(|e| bad(path, format!("channel: {e}")))?;
        return Ok(Target::Channel(m));
    }
    if let Some(Value::Array(list)) = obj.get("instances") {
        let Some(inst) = list.get(index) else {
            return Err(bad(
                path,
                format!("instance {index} requested, file has {}", list.len()),
            ));
        };
        return target_from_value(path, inst.clone(), 0);
    }
    Err(bad(path, "expected a \"matrix\", \"entries\", \"channel\" or \"instances\" field"))
}

fn unitary_from_value(path: &Path, value: &Value) -> Result<Matrix, CliError> {
    let rows = value["matrix"]
        .as_array()
        .ok_or_else(|| bad(path, "matrix: expected an array of rows"))?;
    let dim = rows.len();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(bad(path, format!("matrix: {dim} rows is not a power of two")));
    }
    if let Some(n) = value.get("n") {
        let n = n.as_u64().ok_or_else(|| bad(path, "n: expected an integer"))?;
        if 1usize << n != dim {
            return Err(bad(path, format!("n = {n} but the matrix has {dim} rows")));
        }
    }
    let mut m = Matrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| bad(path, format!("matrix[{i}]: expected {dim} entries")))?;
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = complex(z)
                .ok_or_else(|| bad(path, format!("matrix[{i}][{j}]: expected [re, im] or a number")))?;
        }
    }
    Ok(m)
}

fn complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(x) => Some(Complex64::new(x.as_f64()?, 0.0)),
        Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
        _ => None,
    }
}

pub fn read_circuit(path: &Path, n: Option<usize>) -> Result<Circuit, CliError> {
    let text = read_text(path)?;
    Circuit::parse(&text, n).map_err(|e| bad(path, e))
}
