use super::{AffineMap2, Conjunct, MapError, PieceSpec, PwcMap2};
use crate::geometry::Box2;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapFileError {
    #[error("reading map file: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing map file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A region on the wire: either `{label, conjuncts}` or a bare conjunct list,
/// which takes its 1-based position as label.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PieceFile {
    Labeled { label: usize, conjuncts: Vec<Conjunct<f64>> },
    Bare(Vec<Conjunct<f64>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 2],
    pub t: [f64; 2],
}

/// Map-definition document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: Box2<f64>,
    pub pieces: Vec<PieceFile>,
    pub maps: Vec<MapSpec>,
}

impl MapFile {
    pub fn from_map(m: &PwcMap2<f64>, name: Option<&str>) -> Self {
        MapFile {
            name: name.map(str::to_string),
            domain: m.domain().clone(),
            pieces: m
                .pieces()
                .iter()
                .map(|p| PieceFile::Labeled { label: p.label, conjuncts: p.conjuncts.clone() })
                .collect(),
            maps: m.maps().iter().map(|a| MapSpec { a: a.a, t: a.t }).collect(),
        }
    }

    pub fn build(&self) -> Result<PwcMap2<f64>, MapError> {
        let domain = Box2::checked(self.domain.xlo, self.domain.xhi, self.domain.ylo, self.domain.yhi)
            .map_err(|e| MapError::Invalid(e.to_string()))?;
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| match p {
                PieceFile::Labeled { label, conjuncts } => PieceSpec::new(*label, conjuncts.clone()),
                PieceFile::Bare(conjuncts) => PieceSpec::new(k + 1, conjuncts.clone()),
            })
            .collect();
        for m in &self.maps {
            if !m.a.iter().flatten().chain(&m.t).all(|v| v.is_finite()) {
                return Err(MapError::Invalid("non-finite map coefficient".into()));
            }
        }
        let maps = self.maps.iter().map(|m| AffineMap2::new(m.a, m.t)).collect();
        PwcMap2::new(domain, pieces, maps)
    }

    pub fn parse(json: &str) -> Result<PwcMap2<f64>, MapFileError> {
        let f: MapFile = serde_json::from_str(json)?;
        Ok(f.build()?)
    }

    pub fn load(path: &Path) -> Result<PwcMap2<f64>, MapFileError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map file serializes")
    }
}
