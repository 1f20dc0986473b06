//! On-disk JSON formats. Every file carries `schema_version: "1"`.

use std::fs;
use std::path::Path;

use polyvar_core::{ConstraintSet, MultiPoly, Rectangle};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// One monomial `coefficient * prod x_k^exponents[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectangleSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalitySense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalitySpec {
    pub normal: Vec<f64>,
    pub sense: InequalitySense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualitySpec {
    pub normal: Vec<f64>,
    pub rhs: f64,
}

/// Input of `polyvar bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub polynomial: Vec<Term>,
    pub rectangle: RectangleSpec,
    #[serde(default)]
    pub inequalities: Vec<InequalitySpec>,
    #[serde(default)]
    pub equalities: Vec<EqualitySpec>,
}

/// Facet normals given explicitly or as `uniform: m` planar directions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stall_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_lo: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_hi: Option<Vec<f64>>,
}

/// Input of `polyvar verify` and `polyvar synthesize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: Vec<String>,
    pub field: Vec<Vec<Term>>,
    pub rectangle: RectangleSpec,
    pub template: TemplateSpec,
    pub reference_point: Vec<f64>,
    #[serde(default)]
    pub params: ParamsSpec,
}

/// Output of `polyvar synthesize --polytope`, accepted back by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub schema_version: String,
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    /// Counterclockwise polygon corners, present for planar polytopes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn check_version(found: &str) -> Result<(), CliError> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "unsupported schema_version {found:?}, expected {SCHEMA_VERSION:?}"
        )))
    }
}

pub fn polynomial(n: usize, terms: &[Term]) -> Result<MultiPoly, CliError> {
    if let Some(t) = terms.iter().find(|t| t.exponents.len() != n) {
        return Err(CliError::Invalid(format!(
            "term has {} exponents, expected {n}",
            t.exponents.len()
        )));
    }
    Ok(MultiPoly::from_terms(
        n,
        terms.iter().map(|t| (t.exponents.clone(), t.coefficient)),
    )?)
}

impl RectangleSpec {
    pub fn build(&self) -> Result<Rectangle, CliError> {
        Ok(Rectangle::new(self.lower.clone(), self.upper.clone())?)
    }
}

impl ProblemFile {
    pub fn dim(&self) -> usize {
        self.rectangle.lower.len()
    }

    pub fn build(&self) -> Result<(MultiPoly, Rectangle, ConstraintSet), CliError> {
        check_version(&self.schema_version)?;
        let rect = self.rectangle.build()?;
        let n = rect.dim();
        if let Some(vars) = &self.variables {
            if vars.len() != n {
                return Err(CliError::Invalid(format!(
                    "{} variable names for a {n}-dimensional rectangle",
                    vars.len()
                )));
            }
        }
        let p = polynomial(n, &self.polynomial)?;
        let mut cs = ConstraintSet::new();
        for c in &self.inequalities {
            cs = match c.sense {
                InequalitySense::Le => cs.with_le(c.normal.clone(), c.rhs),
                InequalitySense::Ge => cs.with_ge(c.normal.clone(), c.rhs),
            };
        }
        for c in &self.equalities {
            cs = cs.with_eq(c.normal.clone(), c.rhs);
        }
        cs.check_dims(n)?;
        Ok((p, rect, cs))
    }
}

impl PolytopeFile {
    pub fn new(normals: Vec<Vec<f64>>, offsets: Vec<f64>, vertices: Option<Vec<[f64; 2]>>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            normals,
            offsets,
            vertices,
        }
    }
}
