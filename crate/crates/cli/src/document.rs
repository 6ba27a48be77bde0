//! The declarative input document and its validated in-memory form.
//!
//! A document is a single JSON object: the frame, the model and its
//! emptiness constraints, the working mode (numeric or label masses), the
//! world assumption, named sources mapping set expressions to mass literals,
//! and an optional rule block mirroring the command-line options. Numeric
//! literals are exact: `"13/36"`, `"0.3"` and the bare JSON number `0.3`
//! all parse to the same rational.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use dsmfuse_core::frame::{eval_str, FocalSet, Frame, FrameError, Model, ParseError};
use dsmfuse_core::labels::{parse_label, LabelError, LabelScale};
use dsmfuse_core::mass::{LabelAlgebra, MassError, MassFunction, RationalAlgebra, World};
use dsmfuse_core::rules::{FusionError, Rule, RuleConfig};
use dsmfuse_core::weights::{AlphaPolicy, Dissimilarity};
use dsmfuse_core::{parse_rational, Rational};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("model type must be `free`, `shafer` or `hybrid`, got `{0}`")]
    UnknownModelType(String),
    #[error("model type `{0}` does not take emptiness constraints")]
    UnexpectedConstraints(String),
    #[error("mode must be `quantitative` or `qualitative`, got `{0}`")]
    UnknownMode(String),
    #[error("world must be `closed` or `open`, got `{0}`")]
    UnknownWorld(String),
    #[error("qualitative documents must declare `label_scale`")]
    MissingLabelScale,
    #[error("`label_scale` only applies to qualitative documents")]
    UnexpectedLabelScale,
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("document declares no sources")]
    NoSources,
    #[error("source `{source_name}`, focal `{focal}`: {problem}")]
    Focal {
        source_name: String,
        focal: String,
        problem: String,
    },
    #[error("source `{source_name}`: masses sum to {total}, expected exactly 1")]
    NotNormalized { source_name: String, total: String },
    #[error(
        "source `{source_name}`: label indexes sum to L{total}, expected L{top} (quasi-normalized)"
    )]
    NotQuasiNormalized {
        source_name: String,
        total: String,
        top: u32,
    },
    #[error("no rule selected: pass --rule or add a `rule` block to the document")]
    NoRule,
    #[error("unknown dissimilarity `{0}`: use delta, eta or jaccard")]
    UnknownDissimilarity(String),
    #[error("unknown alpha policy `{0}`: use fixed:<rational>, global or lambda")]
    UnknownAlpha(String),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

impl DocError {
    fn focal(source: &str, focal: &str, problem: impl ToString) -> Self {
        DocError::Focal {
            source_name: source.to_string(),
            focal: focal.to_string(),
            problem: problem.to_string(),
        }
    }
}

/// Model block: `{"type": "shafer"}` or
/// `{"type": "hybrid", "empty": [["A","C"], ["B","C"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empty: Vec<Vec<String>>,
}

/// Rule block mirroring the command-line options.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dissimilarity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betp: Option<bool>,
}

fn default_mode() -> String {
    "quantitative".to_string()
}

fn default_world() -> String {
    "closed".to_string()
}

/// The document as written. Mass literals stay as raw JSON values
/// (strings or numbers) so that emit ∘ load is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub frame: Vec<String>,
    pub model: ModelSpec,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_scale: Option<u32>,
    #[serde(default = "default_world")]
    pub world: String,
    pub sources: BTreeMap<String, BTreeMap<String, serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleSpec>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn emit(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }
}

/// Sources materialized on one of the two value algebras.
#[derive(Debug, Clone)]
pub enum LoadedSources {
    Quantitative(Vec<MassFunction<RationalAlgebra>>),
    Qualitative(Vec<MassFunction<LabelAlgebra>>),
}

/// A fully validated document.
#[derive(Debug, Clone)]
pub struct LoadedDocument {
    pub document: Document,
    pub frame: Arc<Frame>,
    pub model: Arc<Model>,
    pub world: World,
    pub scale: Option<LabelScale>,
    pub source_names: Vec<String>,
    pub sources: LoadedSources,
}

fn literal_text(value: &serde_json::Value) -> Option<String> {
    match value {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn parse_focal(
    source: &str,
    expr: &str,
    frame: &Frame,
    model: &Model,
    world: World,
) -> Result<FocalSet, DocError> {
    let set =
        eval_str(expr, frame, model).map_err(|e: ParseError| DocError::focal(source, expr, e))?;
    if set.is_empty() && world == World::Closed {
        return Err(DocError::focal(
            source,
            expr,
            "evaluates to the empty set under the model's constraints",
        ));
    }
    Ok(set)
}

pub fn load_document(text: &str) -> Result<LoadedDocument, DocError> {
    let document = Document::parse(text)?;
    let frame = Frame::new(document.frame.clone())?;
    let model = match document.model.kind.as_str() {
        "free" | "shafer" => {
            if !document.model.empty.is_empty() {
                return Err(DocError::UnexpectedConstraints(document.model.kind.clone()));
            }
            if document.model.kind == "free" {
                Model::free(&frame)
            } else {
                Model::shafer(&frame)
            }
        }
        "hybrid" => Model::hybrid(&frame, &document.model.empty)?,
        other => return Err(DocError::UnknownModelType(other.to_string())),
    };
    let world = match document.world.as_str() {
        "closed" => World::Closed,
        "open" => World::Open,
        other => return Err(DocError::UnknownWorld(other.to_string())),
    };
    if document.sources.is_empty() {
        return Err(DocError::NoSources);
    }

    let source_names: Vec<String> = document.sources.keys().cloned().collect();
    let (scale, sources) = match document.mode.as_str() {
        "quantitative" => {
            if document.label_scale.is_some() {
                return Err(DocError::UnexpectedLabelScale);
            }
            let mut out = Vec::new();
            for (name, masses) in &document.sources {
                let mut m = MassFunction::new(frame.clone(), model.clone(), world, RationalAlgebra);
                for (expr, literal) in masses {
                    let text = literal_text(literal).ok_or_else(|| {
                        DocError::focal(name, expr, "mass must be a string or number literal")
                    })?;
                    let value: Rational = parse_rational(&text).ok_or_else(|| {
                        DocError::focal(name, expr, format!("invalid mass literal `{text}`"))
                    })?;
                    let set = parse_focal(name, expr, &frame, &model, world)?;
                    m.insert(set, value)
                        .map_err(|e: MassError| DocError::focal(name, expr, e))?;
                }
                let report = m.validate();
                if !report.normalized {
                    let total = m.total();
                    return Err(DocError::NotNormalized {
                        source_name: name.clone(),
                        total: total.to_string(),
                    });
                }
                out.push(m);
            }
            (None, LoadedSources::Quantitative(out))
        }
        "qualitative" => {
            let interior = document.label_scale.ok_or(DocError::MissingLabelScale)?;
            let scale = LabelScale::new(interior)?;
            let mut out = Vec::new();
            for (name, masses) in &document.sources {
                let mut m = MassFunction::new(
                    frame.clone(),
                    model.clone(),
                    world,
                    LabelAlgebra::new(scale),
                );
                for (expr, literal) in masses {
                    let text = literal_text(literal).ok_or_else(|| {
                        DocError::focal(name, expr, "mass must be a label literal like \"L3\"")
                    })?;
                    let value =
                        parse_label(&text, scale).map_err(|e| DocError::focal(name, expr, e))?;
                    if value.index() > &Rational::from_integer(scale.top().into()) {
                        return Err(DocError::focal(
                            name,
                            expr,
                            format!("label index exceeds L{}", scale.top()),
                        ));
                    }
                    let set = parse_focal(name, expr, &frame, &model, world)?;
                    m.insert(set, value)
                        .map_err(|e: MassError| DocError::focal(name, expr, e))?;
                }
                let report = m.validate();
                if !report.quasi_normalized {
                    let total = m.total();
                    return Err(DocError::NotQuasiNormalized {
                        source_name: name.clone(),
                        total: total.index().to_string(),
                        top: scale.top(),
                    });
                }
                out.push(m);
            }
            (Some(scale), LoadedSources::Qualitative(out))
        }
        other => return Err(DocError::UnknownMode(other.to_string())),
    };

    Ok(LoadedDocument {
        document,
        frame,
        model,
        world,
        scale,
        source_names,
        sources,
    })
}

/// Resolve the effective rule configuration from the document's rule block
/// and command-line overrides (overrides win field by field). Returns the
/// validated config plus the pignistic-table flag.
pub fn resolve_rule(
    doc_rule: Option<&RuleSpec>,
    overrides: &RuleSpec,
) -> Result<(RuleConfig, bool), DocError> {
    let pick = |a: Option<&String>, b: Option<&String>| a.or(b).cloned();
    let base = RuleSpec::default();
    let mut doc_rule = doc_rule.unwrap_or(&base);
    // An override that switches the rule leaves the document's rule options
    // behind; they configured a different rule.
    if let (Some(over), Some(doc)) = (overrides.name.as_ref(), doc_rule.name.as_ref()) {
        if over != doc {
            doc_rule = &base;
        }
    }
    let name = pick(overrides.name.as_ref(), doc_rule.name.as_ref()).ok_or(DocError::NoRule)?;
    let rule: Rule = name.parse()?;
    let mut config = RuleConfig::new(rule);
    if let Some(d) = pick(
        overrides.dissimilarity.as_ref(),
        doc_rule.dissimilarity.as_ref(),
    ) {
        config.dissimilarity = Some(parse_dissimilarity(&d)?);
    }
    if let Some(a) = pick(overrides.alpha.as_ref(), doc_rule.alpha.as_ref()) {
        config.alpha = Some(parse_alpha(&a)?);
    }
    config.approximate_output = overrides
        .approximate
        .or(doc_rule.approximate)
        .unwrap_or(false);
    let betp = overrides.betp.or(doc_rule.betp).unwrap_or(false);
    config.validate()?;
    Ok((config, betp))
}

pub fn parse_dissimilarity(text: &str) -> Result<Dissimilarity, DocError> {
    match text {
        "delta" | "delta_min" => Ok(Dissimilarity::DeltaMin),
        "eta" | "eta_max" => Ok(Dissimilarity::EtaMax),
        "jaccard" => Ok(Dissimilarity::Jaccard),
        other => Err(DocError::UnknownDissimilarity(other.to_string())),
    }
}

pub fn parse_alpha(text: &str) -> Result<AlphaPolicy, DocError> {
    if let Some(value) = text.strip_prefix("fixed:") {
        let alpha =
            parse_rational(value).ok_or_else(|| DocError::UnknownAlpha(text.to_string()))?;
        if alpha > Rational::one() {
            return Err(FusionError::AlphaOutOfRange(alpha.to_string()).into());
        }
        return Ok(AlphaPolicy::Fixed(alpha));
    }
    match text {
        "global" | "global_f" => Ok(AlphaPolicy::GlobalConflict),
        "lambda" | "per_source_lambda" => Ok(AlphaPolicy::PerSourceLambda),
        other => Err(DocError::UnknownAlpha(other.to_string())),
    }
}
