//! Declarative model files: alphabet, 0/1 matrix, potential table,
//! normalisation flag and sub-alphabet. A previously emitted analysis
//! document re-ingests through the same loader (its embedded model is
//! extracted), which makes report generation reproducible from its own
//! output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thermoshift::sft::{self, SftModel};
use thermoshift::transfer::CylindricalPotential;
use thermoshift::Potential;

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub alphabet: Vec<String>,
    pub matrix: Vec<Vec<u8>>,
    pub potential: PotentialFile,
    #[serde(default)]
    pub normalize: bool,
    pub delta: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialFile {
    pub order: usize,
    pub entries: Vec<PotentialEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialEntry {
    pub word: Vec<String>,
    pub value: f64,
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<ModelFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("invalid JSON in {}: {e}", path.display())))?;
        // analysis documents embed the model they were computed from
        let model_value = match value.get("model") {
            Some(m) => m.clone(),
            None => value,
        };
        serde_json::from_value(model_value)
            .map_err(|e| CliError::parse(format!("invalid model file {}: {e}", path.display())))
    }

    /// Resolve labels and build the core objects.
    pub fn to_core(&self) -> Result<(SftModel, Potential, Vec<usize>), CliError> {
        let model = SftModel::new(self.alphabet.clone(), self.matrix.clone())
            .map_err(|e| CliError::parse(format!("bad model: {e}")))?;
        let mut entries = Vec::with_capacity(self.potential.entries.len());
        for entry in &self.potential.entries {
            let word = sft::resolve_labels(&model, &entry.word)
                .map_err(|e| CliError::parse(format!("bad potential entry: {e}")))?;
            entries.push((word, entry.value));
        }
        let potential = CylindricalPotential::from_table(&model, self.potential.order, &entries)
            .map_err(|e| CliError::parse(format!("bad potential table: {e}")))?;
        let delta = sft::resolve_labels(&model, &self.delta)
            .map_err(|e| CliError::parse(format!("bad delta: {e}")))?;
        Ok((model, potential, delta))
    }

    /// Canonical file for the given core objects (potential spelled out,
    /// no pending normalisation).
    pub fn from_core(model: &SftModel, potential: &Potential, delta: &[usize]) -> ModelFile {
        let matrix = (0..model.size())
            .map(|i| {
                (0..model.size())
                    .map(|j| u8::from(model.allows(i, j)))
                    .collect()
            })
            .collect();
        let entries = potential
            .words()
            .iter()
            .map(|w| PotentialEntry {
                word: w.iter().map(|&s| model.label(s).to_string()).collect(),
                value: potential.value(w).expect("tabled word"),
            })
            .collect();
        ModelFile {
            alphabet: model.labels().to_vec(),
            matrix,
            potential: PotentialFile {
                order: potential.order(),
                entries,
            },
            normalize: false,
            delta: delta.iter().map(|&s| model.label(s).to_string()).collect(),
        }
    }
}

/// The built-in worked example with the given cylinder weights and an
/// optional sub-alphabet override.
pub fn builtin(
    name: &str,
    ep: f64,
    eq: f64,
    delta: Option<Vec<String>>,
) -> Result<ModelFile, CliError> {
    if name != "paper4" {
        return Err(CliError::parse(format!(
            "unknown example {name:?}; the built-in example is \"paper4\""
        )));
    }
    let (model, potential) = thermoshift::presets::paper4::<f64>(ep, eq)
        .map_err(|e| CliError::precondition(e.to_string()))?;
    let delta = delta.unwrap_or_else(|| vec!["1".into(), "2".into()]);
    let mut file = ModelFile::from_core(&model, &potential, &[]);
    file.delta = delta;
    Ok(file)
}
