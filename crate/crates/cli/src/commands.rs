use std::time::Instant;

use polyvar_core::geometry::polygon_vertices;
use polyvar_core::invariance::{
    default_offsets, synthesize, verify, SynthesisParams, SynthesisStatus,
};
use polyvar_core::{grid_min, lower_bound, PolytopeTemplate, Rectangle, VectorField};

use crate::error::CliError;
use crate::format::{check_version, polynomial, ModelFile, PolytopeFile, ProblemFile};
use crate::report::{
    facet_entries, iteration_entries, status_name, BoundSection, CommandEcho, OracleSection,
    RunReport, SynthesisSection, Verdict,
};

const SCHEMA: &str = crate::format::SCHEMA_VERSION;

/// A model file resolved into library types.
#[derive(Debug, Clone)]
pub struct Model {
    pub field: VectorField,
    pub rect: Rectangle,
    pub normals: Vec<Vec<f64>>,
    pub offsets: Option<Vec<f64>>,
    pub reference: Vec<f64>,
    pub params: SynthesisParams,
}

impl Model {
    /// `uniform` replaces the file's normals with `m` planar directions.
    pub fn from_file(file: &ModelFile, uniform: Option<usize>) -> Result<Self, CliError> {
        check_version(&file.schema_version)?;
        let rect = file.rectangle.build()?;
        let n = rect.dim();
        if file.variables.len() != n || file.field.len() != n {
            return Err(CliError::Invalid(format!(
                "{} variables and {} field components for a {n}-dimensional rectangle",
                file.variables.len(),
                file.field.len()
            )));
        }
        let components = file
            .field
            .iter()
            .map(|terms| polynomial(n, terms))
            .collect::<Result<Vec<_>, _>>()?;
        let field = VectorField::new(components)?;

        if file.reference_point.len() != n || !rect.strictly_contains(&file.reference_point) {
            return Err(CliError::Invalid(
                "reference_point must lie strictly inside the rectangle".into(),
            ));
        }

        let t = &file.template;
        let normals = match (uniform, &t.normals, t.uniform) {
            (Some(m), _, _) | (None, None, Some(m)) => uniform_normals(n, m)?,
            (None, Some(normals), None) => normals.clone(),
            (None, Some(_), Some(_)) => {
                return Err(CliError::Invalid(
                    "template gives both normals and uniform".into(),
                ))
            }
            (None, None, None) => return Err(CliError::Invalid("template has no normals".into())),
        };
        if let Some(a) = normals.iter().find(|a| a.len() != n) {
            return Err(CliError::Invalid(format!(
                "template normal has dimension {}, expected {n}",
                a.len()
            )));
        }
        // Offsets written for the file's own template do not fit overridden normals.
        let offsets = match uniform {
            Some(m) if t.uniform != Some(m) => None,
            _ => t.offsets.clone(),
        };
        if let Some(b) = &offsets {
            PolytopeTemplate::new(normals.clone(), b.clone())?;
        }

        let mut params = SynthesisParams::with_defaults(&normals, &rect, &file.reference_point);
        let p = &file.params;
        if let Some(e) = p.epsilon {
            params.epsilon = e;
        }
        if let Some(m) = p.max_iter {
            params.max_iter = m;
        }
        if let Some(s) = p.stall_tol {
            params.stall_tol = s;
        }
        if let Some(b) = &p.b_lo {
            params.b_lo = b.clone();
        }
        if let Some(b) = &p.b_hi {
            params.b_hi = b.clone();
        }
        Ok(Self {
            field,
            rect,
            normals,
            offsets,
            reference: file.reference_point.clone(),
            params,
        })
    }

    /// Explicit offsets, or the default start around the reference point.
    pub fn initial_template(&self) -> Result<PolytopeTemplate, CliError> {
        let offsets = self
            .offsets
            .clone()
            .unwrap_or_else(|| default_offsets(&self.normals, &self.rect, &self.reference));
        Ok(PolytopeTemplate::new(self.normals.clone(), offsets)?)
    }
}

fn uniform_normals(n: usize, m: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if n != 2 {
        return Err(CliError::Invalid(
            "uniform templates are only defined in two dimensions".into(),
        ));
    }
    if m < 3 {
        return Err(CliError::Invalid(
            "a uniform template needs at least 3 facets".into(),
        ));
    }
    Ok(PolytopeTemplate::uniform_normals_2d(m))
}

fn echo(name: &str, input: &str, options: Vec<String>) -> CommandEcho {
    CommandEcho {
        name: name.to_string(),
        input: input.to_string(),
        options,
    }
}

/// `polyvar bound`: the relaxation bound, optionally next to a grid minimum.
pub fn cmd_bound(
    file: &ProblemFile,
    input: &str,
    oracle_steps: Option<usize>,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (p, rect, cs) = file.build()?;
    let res = lower_bound(&p, &rect, &cs)?;
    let oracle = match oracle_steps {
        Some(steps) => {
            let (value, witness) = grid_min(&p, &rect, &cs, steps)?;
            Some(OracleSection {
                steps_per_axis: steps,
                value,
                witness,
            })
        }
        None => None,
    };
    let options = oracle_steps
        .map(|s| vec!["--oracle".to_string(), format!("--steps={s}")])
        .unwrap_or_default();
    Ok(RunReport {
        schema_version: SCHEMA.to_string(),
        command: echo("bound", input, options),
        verdict: Verdict::Computed,
        bound: Some(BoundSection {
            d_star: res.d_star,
            lambda: res.lambda,
            mu: res.mu,
            oracle,
        }),
        facets: None,
        synthesis: None,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `polyvar verify`. Offsets come from `polytope` when given, else from the
/// model's template.
pub fn cmd_verify(
    model: &ModelFile,
    input: &str,
    polytope: Option<&PolytopeFile>,
    uniform: Option<usize>,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let m = Model::from_file(model, uniform)?;
    let mut options = Vec::new();
    if let Some(u) = uniform {
        options.push(format!("--template=uniform:{u}"));
    }
    let tpl = match polytope {
        Some(poly) => {
            check_version(&poly.schema_version)?;
            options.push("--polytope".to_string());
            PolytopeTemplate::new(poly.normals.clone(), poly.offsets.clone())?
        }
        None => match &m.offsets {
            Some(b) => PolytopeTemplate::new(m.normals.clone(), b.clone())?,
            None => {
                return Err(CliError::Invalid(
                    "verify needs offsets in the template or a --polytope file".into(),
                ))
            }
        },
    };
    if tpl.dim() != m.rect.dim() {
        return Err(CliError::Invalid(
            "polytope dimension does not match the model".into(),
        ));
    }
    let report = verify(&m.field, &m.rect, &tpl)?;
    Ok(RunReport {
        schema_version: SCHEMA.to_string(),
        command: echo("verify", input, options),
        verdict: if report.is_invariant() {
            Verdict::Invariant
        } else {
            Verdict::NotCertified
        },
        bound: None,
        facets: Some(facet_entries(&report)),
        synthesis: None,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone)]
pub struct SynthesisOutput {
    pub report: RunReport,
    /// Present only when an invariant was found.
    pub polytope: Option<PolytopeFile>,
}

/// `polyvar synthesize`.
pub fn cmd_synthesize(
    model: &ModelFile,
    input: &str,
    uniform: Option<usize>,
) -> Result<SynthesisOutput, CliError> {
    let start = Instant::now();
    let m = Model::from_file(model, uniform)?;
    let tpl = m.initial_template()?;
    let trace = synthesize(&m.field, &m.rect, &tpl, &m.params)?;
    let found = trace.status == SynthesisStatus::InvariantFound;
    let polytope = if found {
        let vertices = if m.rect.dim() == 2 {
            Some(polygon_vertices(&m.normals, &trace.final_offsets)?)
        } else {
            None
        };
        Some(PolytopeFile::new(
            m.normals.clone(),
            trace.final_offsets.clone(),
            vertices,
        ))
    } else {
        None
    };
    let options = uniform
        .map(|u| vec![format!("--template=uniform:{u}")])
        .unwrap_or_default();
    let report = RunReport {
        schema_version: SCHEMA.to_string(),
        command: echo("synthesize", input, options),
        verdict: if found {
            Verdict::Invariant
        } else {
            Verdict::NotCertified
        },
        bound: None,
        facets: Some(facet_entries(&trace.final_report)),
        synthesis: Some(SynthesisSection {
            status: status_name(trace.status).to_string(),
            iterations: iteration_entries(&trace.iterations),
            final_offsets: trace.final_offsets,
        }),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(SynthesisOutput { report, polytope })
}
