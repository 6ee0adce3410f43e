//! Fixture files: a strict JSON format describing the extension `R <= S` with
//! its local units, plus optional named bimodules and maps for ad-hoc checks.
//!
//! The multiplication table is given sparsely as quadruples `(i, j, k, c)`
//! meaning `b_i * b_j` has coefficient `c` on `b_k`; absent entries are zero.
//! Unknown keys are rejected, `version` must be `1`, and every coefficient
//! must already be reduced mod `p`. Canonical serialization is
//! `canonical_json`: keys in sorted order, no insignificant whitespace, so a
//! parse/serialize round trip is byte-stable.

use crate::algebra::{Algebra, Extension};
use crate::bimodule::{Bimodule, BimoduleMap, Side};
use crate::error::{Error, Result};
use crate::linalg::{check_prime, Mat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

pub const FORMAT_VERSION: u32 = 1;

// field order in every struct is alphabetical so that plain serde_json output
// is the canonical form
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodules: Option<BTreeMap<String, BimoduleSpec>>,
    pub local_units: Vec<Vec<u16>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<BTreeMap<String, MapSpec>>,
    pub name: String,
    pub p: u16,
    pub r_basis: Vec<Vec<u16>>,
    pub s: AlgebraSpec,
    pub version: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub basis: Vec<String>,
    pub dim: usize,
    pub mul: Vec<(usize, usize, usize, u16)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSpec {
    pub dim: usize,
    /// `"R"` or `"S"`
    pub left: String,
    /// one `dim x dim` matrix (rows) per basis element of the left algebra
    pub left_act: Vec<Vec<Vec<u16>>>,
    pub right: String,
    pub right_act: Vec<Vec<Vec<u16>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    /// `"left"`, `"right"` or `"both"`
    pub linearity: String,
    pub mat: Vec<Vec<u16>>,
    /// `"R"`, `"S"` or the name of a declared bimodule
    pub source: String,
    pub target: String,
}

impl Fixture {
    /// Strict parse from JSON text: unknown keys, a missing or wrong version,
    /// out-of-range coefficients and malformed tables are all rejected.
    pub fn parse_str(text: &str) -> Result<Fixture> {
        let fixture: Fixture = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("fixture JSON: {e}")))?;
        fixture.validate_shape()?;
        Ok(fixture)
    }

    pub fn parse_file(path: &Path) -> Result<Fixture> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Fixture::parse_str(&text)
    }

    fn validate_shape(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported fixture version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        check_prime(self.p)?;
        if self.s.basis.len() != self.s.dim {
            return Err(Error::Parse(format!(
                "basis has {} names but dim is {}",
                self.s.basis.len(),
                self.s.dim
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, j, k, c) in &self.s.mul {
            if i >= self.s.dim || j >= self.s.dim || k >= self.s.dim {
                return Err(Error::Parse(format!(
                    "multiplication quadruple ({i},{j},{k},{c}) indexes outside the basis"
                )));
            }
            if c >= self.p {
                return Err(Error::Parse(format!(
                    "coefficient {c} in quadruple ({i},{j},{k},{c}) is not reduced mod {}",
                    self.p
                )));
            }
            if !seen.insert((i, j, k)) {
                return Err(Error::Parse(format!(
                    "duplicate multiplication quadruple for ({i},{j},{k})"
                )));
            }
        }
        for family in [&self.local_units, &self.r_basis] {
            for v in family {
                if v.len() != self.s.dim {
                    return Err(Error::Parse("vector length differs from dim".into()));
                }
                if v.iter().any(|&c| c >= self.p) {
                    return Err(Error::Parse("vector entry not reduced mod p".into()));
                }
            }
        }
        Ok(())
    }

    /// Build the validated extension; algebra and extension invariant
    /// violations are reported through the error.
    pub fn to_extension(&self) -> Result<Extension> {
        let mut table = vec![vec![vec![0u16; self.s.dim]; self.s.dim]; self.s.dim];
        for &(i, j, k, c) in &self.s.mul {
            table[i][j][k] = c;
        }
        let algebra = Algebra::new(
            self.p,
            self.s.basis.clone(),
            table,
            self.local_units.clone(),
        )?;
        Extension::new(algebra, self.r_basis.clone())
    }

    /// Canonical bytes: sorted keys, no insignificant whitespace.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("fixture serializes")
    }

    /// The fixture describing an extension, with the multiplication table
    /// listed sparsely in row-major order.
    pub fn from_extension(name: &str, ext: &Extension) -> Fixture {
        let s = ext.s();
        let dim = s.dim();
        let mut mul = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, &c) in s.basis_product(i, j).iter().enumerate() {
                    if c != 0 {
                        mul.push((i, j, k, c));
                    }
                }
            }
        }
        Fixture {
            bimodules: None,
            local_units: s.local_units().to_vec(),
            maps: None,
            name: name.to_string(),
            p: ext.p(),
            r_basis: ext.r_space().basis().to_vec(),
            s: AlgebraSpec { basis: s.names().to_vec(), dim, mul },
            version: FORMAT_VERSION,
        }
    }

    fn algebra_by_name(&self, ext: &Extension, name: &str) -> Result<Arc<Algebra>> {
        match name {
            "R" => Ok(ext.r().clone()),
            "S" => Ok(ext.s().clone()),
            other => Err(Error::Parse(format!(
                "unknown algebra '{other}' (expected 'R' or 'S')"
            ))),
        }
    }

    /// Materialize a named bimodule, validating the axioms.
    pub fn realize_bimodule(&self, ext: &Extension, name: &str) -> Result<Bimodule> {
        let spec = self
            .bimodules
            .as_ref()
            .and_then(|m| m.get(name))
            .ok_or_else(|| Error::Parse(format!("no bimodule named '{name}'")))?;
        let left = self.algebra_by_name(ext, &spec.left)?;
        let right = self.algebra_by_name(ext, &spec.right)?;
        let to_mats = |raw: &[Vec<Vec<u16>>]| -> Vec<Mat> {
            raw.iter()
                .map(|rows| Mat::from_rows(self.p, rows.clone()))
                .collect()
        };
        Bimodule::new(
            left,
            right,
            spec.dim,
            to_mats(&spec.left_act),
            to_mats(&spec.right_act),
        )
    }

    fn module_by_name(&self, ext: &Extension, name: &str) -> Result<Bimodule> {
        match name {
            "R" => Ok(Bimodule::regular(ext.r())),
            "S" => Ok(Bimodule::regular(ext.s())),
            other => self.realize_bimodule(ext, other),
        }
    }

    /// Materialize a named map, validating the declared intertwining.
    pub fn realize_map(&self, ext: &Extension, name: &str) -> Result<BimoduleMap> {
        let spec = self
            .maps
            .as_ref()
            .and_then(|m| m.get(name))
            .ok_or_else(|| Error::Parse(format!("no map named '{name}'")))?;
        let source = self.module_by_name(ext, &spec.source)?;
        let target = self.module_by_name(ext, &spec.target)?;
        let side = match spec.linearity.as_str() {
            "left" => Side::Left,
            "right" => Side::Right,
            "both" => Side::Both,
            other => {
                return Err(Error::Parse(format!(
                    "unknown linearity '{other}' (expected left, right or both)"
                )))
            }
        };
        BimoduleMap::new(source, target, Mat::from_rows(self.p, spec.mat.clone()), side)
    }

    pub fn named_bimodules(&self) -> Vec<String> {
        self.bimodules
            .as_ref()
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default()
    }

    pub fn named_maps(&self) -> Vec<String> {
        self.maps
            .as_ref()
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default()
    }
}
