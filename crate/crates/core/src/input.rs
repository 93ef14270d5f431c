//! Polytope input files (TOML or JSON).
//!
//! ```toml
//! name = "quintic"
//! dimension = 4
//! vertices = [[1,0,0,0], [0,1,0,0], [0,0,1,0], [0,0,0,1], [-1,-1,-1,-1]]
//! # optional: ray_order = [...], mori_basis_override = [[...], ...]
//!
//! [expected.integrals]
//! "c2*J1" = "50"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric::{LatticePolytope, ToricModel};
use crate::verify::Expected;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Toml,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub vertices: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mori_basis_override: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Expected::is_empty")]
    pub expected: Expected,
}

impl PolytopeInput {
    pub fn parse(text: &str, format: InputFormat) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse("input is empty".into()));
        }
        let input: Self = match format {
            InputFormat::Json => serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON: {e}")))?,
            InputFormat::Toml => {
                toml::from_str(text).map_err(|e| Error::Parse(format!("TOML: {}", e.to_string().trim_end())))?
            }
        };
        input.check_fields()?;
        Ok(input)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, detect_format(path, &text)).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn check_fields(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Parse("field `dimension`: must be positive".into()));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dimension {
                return Err(Error::Parse(format!(
                    "field `vertices[{i}]`: expected {} coordinates, found {}",
                    self.dimension,
                    v.len()
                )));
            }
        }
        if let Some(order) = &self.ray_order {
            if order.len() != self.vertices.len() {
                return Err(Error::Parse(format!(
                    "field `ray_order`: expected {} entries, found {}",
                    self.vertices.len(),
                    order.len()
                )));
            }
        }
        if let Some(basis) = &self.mori_basis_override {
            for (k, l) in basis.iter().enumerate() {
                if l.len() != self.vertices.len() + 1 {
                    return Err(Error::Parse(format!(
                        "field `mori_basis_override[{k}]`: expected {} entries (origin first), found {}",
                        self.vertices.len() + 1,
                        l.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn polytope(&self) -> Result<LatticePolytope> {
        LatticePolytope::new(self.dimension, self.vertices.clone())
    }

    pub fn model(&self) -> Result<ToricModel> {
        ToricModel::from_polytope(self.polytope()?, self.ray_order.as_deref(), self.mori_basis_override.as_deref())
    }

    pub fn to_text(&self, format: InputFormat) -> Result<String> {
        match format {
            InputFormat::Json => Ok(serde_json::to_string_pretty(self).expect("input serializes") + "\n"),
            InputFormat::Toml => toml::to_string(self).map_err(|e| Error::Parse(e.to_string())),
        }
    }
}

/// By extension, falling back to sniffing a leading `{`.
pub fn detect_format(path: &Path, text: &str) -> InputFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => InputFormat::Json,
        Some("toml") => InputFormat::Toml,
        _ if text.trim_start().starts_with('{') => InputFormat::Json,
        _ => InputFormat::Toml,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: &str = "dimension = 2\nvertices = [[1, 0], [0, 1], [-1, -1]]\n";

    #[test]
    fn toml_and_json_agree() {
        let a = PolytopeInput::parse(P2, InputFormat::Toml).unwrap();
        let b =
            PolytopeInput::parse(r#"{"dimension": 2, "vertices": [[1,0],[0,1],[-1,-1]]}"#, InputFormat::Json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.polytope().unwrap().vertices().len(), 3);
    }

    #[test]
    fn diagnostics() {
        let e = PolytopeInput::parse("", InputFormat::Toml).unwrap_err();
        assert!(e.to_string().contains("empty"));
        let e = PolytopeInput::parse("dimension = 2\nvertices = [[1, 0], [0, 1, 3]]\n", InputFormat::Toml).unwrap_err();
        assert!(e.to_string().contains("vertices[1]"), "{e}");
        let e = PolytopeInput::parse("dimension = 2\nvertices = [[1, 0]\n", InputFormat::Toml).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = PolytopeInput::parse("{\"dimension\": 2,\n \"vertices\": 3}", InputFormat::Json).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = PolytopeInput::parse("dimension = 2\nvertices = []\ncolour = 1\n", InputFormat::Toml).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn round_trip_with_expected() {
        let mut a = PolytopeInput::parse(P2, InputFormat::Toml).unwrap();
        a.expected.period.insert("1".into(), "6".into());
        for f in [InputFormat::Toml, InputFormat::Json] {
            let text = a.to_text(f).unwrap();
            assert_eq!(PolytopeInput::parse(&text, f).unwrap(), a);
        }
    }
}
