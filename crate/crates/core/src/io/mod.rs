//! Reading and writing process models.

mod dot;
mod dsl;
mod pnml;

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::petri::NetSystem;

pub use dot::{cfp_to_dot, net_to_dot, path_to_dot};
pub use dsl::{parse_dsl, write_dsl};
pub use pnml::{parse_pnml, write_pnml};

/// Metadata key holding the model name.
pub const NAME_KEY: &str = "name";
/// Metadata key holding the file the model was read from.
pub const SOURCE_KEY: &str = "source";
const ROLE_PREFIX: &str = "role:";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDocument {
    pub system: NetSystem,
    pub metadata: BTreeMap<String, String>,
    /// Non-fatal parser remarks (ignored extensions and the like).
    pub warnings: Vec<String>,
}

impl ModelDocument {
    pub fn new(system: NetSystem) -> Self {
        Self {
            system,
            metadata: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get(NAME_KEY).map(String::as_str)
    }

    pub fn role(&self, transition: &str) -> Option<&str> {
        self.metadata
            .get(&format!("{ROLE_PREFIX}{transition}"))
            .map(String::as_str)
    }

    pub fn set_role(&mut self, transition: &str, role: &str) -> Result<()> {
        let role = role.trim();
        if role.is_empty() {
            return Err(Error::InvalidConfig(format!("empty role for {transition}")));
        }
        if !self.system.net.transitions().contains(transition) {
            return Err(Error::UnknownTransition(transition.to_string()));
        }
        self.metadata
            .insert(format!("{ROLE_PREFIX}{transition}"), role.to_string());
        Ok(())
    }

    /// Roles keyed by transition id.
    pub fn roles(&self) -> BTreeMap<String, String> {
        self.metadata
            .iter()
            .filter_map(|(k, v)| k.strip_prefix(ROLE_PREFIX).map(|t| (t.to_string(), v.clone())))
            .collect()
    }
}

/// Reads a model, choosing the parser by extension (`.pnml`/`.xml` or DSL).
pub fn read_model(path: &Path) -> Result<ModelDocument> {
    let bytes = std::fs::read(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let mut doc = if ext == "pnml" || ext == "xml" {
        parse_pnml(&bytes)?
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|e| Error::parse(1, 1, format!("input is not UTF-8: {e}")))?;
        parse_dsl(&text)?
    };
    doc.metadata
        .insert(SOURCE_KEY.to_string(), path.display().to_string());
    if !doc.metadata.contains_key(NAME_KEY) {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            doc.metadata.insert(NAME_KEY.to_string(), stem.to_string());
        }
    }
    Ok(doc)
}
