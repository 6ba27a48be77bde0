//! Fusion runs and the inspection report.

use serde::Serialize;

use dsmfuse_core::frame::{canonical_display, FocalSet};
use dsmfuse_core::mass::{MassAlgebra, MassFunction, World};
use dsmfuse_core::rules::{combine, FusionResult, RuleConfig};
use dsmfuse_core::weights::AlphaPolicy;
use dsmfuse_core::{Label, LabelAlgebra, RationalAlgebra};

use crate::document::{DocError, LoadedDocument, LoadedSources, ModelSpec};
use crate::render::{decimal_string, fraction_string};

const DECIMAL_PLACES: u32 = 6;

type ReportParts = (Vec<MassReport>, MassReport, Option<Vec<MassReport>>);

/// One fused mass. Numeric runs fill `mass`/`decimal`; label runs fill
/// `index`/`label` and, when requested, the `approx` rounding back onto the
/// original scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MassReport {
    pub set: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

impl MassReport {
    fn quantitative(set: String, value: &dsmfuse_core::Rational) -> Self {
        MassReport {
            set,
            mass: Some(fraction_string(value)),
            decimal: Some(decimal_string(value, DECIMAL_PLACES)),
            index: None,
            label: None,
            approx: None,
        }
    }

    fn qualitative(set: String, value: &Label, approximate: bool) -> Self {
        MassReport {
            set,
            mass: None,
            decimal: None,
            index: Some(value.index().to_string()),
            label: Some(value.to_string()),
            approx: approximate.then(|| value.approximate().to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub normalized: bool,
    pub quasi_normalized: bool,
    pub empty_mass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dissimilarity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub approximate: bool,
}

/// The canonical fusion report: deterministic field order, masses sorted by
/// minterm bitset value, every quantity exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputDocument {
    pub frame: Vec<String>,
    pub model: ModelSpec,
    pub mode: String,
    pub world: String,
    pub rule: RuleReport,
    pub sources: Vec<String>,
    pub masses: Vec<MassReport>,
    pub conflict: MassReport,
    pub normalization: NormalizationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betp: Option<Vec<MassReport>>,
}

impl OutputDocument {
    pub fn emit(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

fn rule_report(config: &RuleConfig) -> RuleReport {
    RuleReport {
        name: config.rule.name().to_string(),
        dissimilarity: config.dissimilarity.map(|d| {
            match d {
                dsmfuse_core::Dissimilarity::DeltaMin => "delta",
                dsmfuse_core::Dissimilarity::EtaMax => "eta",
                dsmfuse_core::Dissimilarity::Jaccard => "jaccard",
            }
            .to_string()
        }),
        alpha: config.alpha.as_ref().map(|a| match a {
            AlphaPolicy::Fixed(v) => format!("fixed:{v}"),
            AlphaPolicy::GlobalConflict => "global".to_string(),
            AlphaPolicy::PerSourceLambda => "lambda".to_string(),
        }),
        approximate: config.approximate_output,
    }
}

fn world_name(world: World) -> String {
    match world {
        World::Closed => "closed",
        World::Open => "open",
    }
    .to_string()
}

fn atoms_of(loaded: &LoadedDocument) -> Vec<FocalSet> {
    (0..loaded.frame.atom_count())
        .map(|i| loaded.frame.atom_region(i).and(&loaded.model.full_set()))
        .collect()
}

fn quantitative_reports(
    loaded: &LoadedDocument,
    res: &FusionResult<RationalAlgebra>,
    betp: bool,
) -> Result<ReportParts, DocError> {
    let display = |set: &FocalSet| canonical_display(set, &loaded.frame, &loaded.model);
    let masses = res
        .mass
        .entries()
        .map(|(set, v)| MassReport::quantitative(display(set), v))
        .collect();
    let conflict = MassReport::quantitative("∅".to_string(), &res.conflict);
    let betp = if betp {
        let mut rows = Vec::new();
        for atom in atoms_of(loaded) {
            let value = res
                .mass
                .betp(&atom)
                .map_err(dsmfuse_core::rules::FusionError::from)?;
            rows.push(MassReport::quantitative(display(&atom), &value));
        }
        Some(rows)
    } else {
        None
    };
    Ok((masses, conflict, betp))
}

fn qualitative_reports(
    loaded: &LoadedDocument,
    res: &FusionResult<LabelAlgebra>,
    betp: bool,
    approximate: bool,
) -> Result<ReportParts, DocError> {
    let display = |set: &FocalSet| canonical_display(set, &loaded.frame, &loaded.model);
    let masses = res
        .mass
        .entries()
        .map(|(set, v)| MassReport::qualitative(display(set), v, approximate))
        .collect();
    let conflict = MassReport::qualitative("∅".to_string(), &res.conflict, approximate);
    let betp = if betp {
        // Reported for information: the pignistic transform of label masses
        // is computed on exact indexes through the isomorphism.
        let mut rows = Vec::new();
        for atom in atoms_of(loaded) {
            let value = res
                .mass
                .betp(&atom)
                .map_err(dsmfuse_core::rules::FusionError::from)?;
            rows.push(MassReport::qualitative(display(&atom), &value, approximate));
        }
        Some(rows)
    } else {
        None
    };
    Ok((masses, conflict, betp))
}

fn normalization_of<A: MassAlgebra>(
    mass: &MassFunction<A>,
    show: impl Fn(&A::Value) -> String,
) -> NormalizationReport {
    let report = mass.validate();
    NormalizationReport {
        normalized: report.normalized,
        quasi_normalized: report.quasi_normalized,
        empty_mass: show(&report.empty_mass),
    }
}

/// Run one fusion and produce the canonical report.
pub fn run_fusion(
    loaded: &LoadedDocument,
    config: &RuleConfig,
    betp: bool,
) -> Result<OutputDocument, DocError> {
    let (world, masses, conflict, normalization, betp_rows) = match &loaded.sources {
        LoadedSources::Quantitative(sources) => {
            let refs: Vec<&MassFunction<RationalAlgebra>> = sources.iter().collect();
            let res = combine(config, &refs)?;
            let (masses, conflict, betp_rows) = quantitative_reports(loaded, &res, betp)?;
            let normalization = normalization_of(&res.mass, fraction_string);
            (res.mass.world(), masses, conflict, normalization, betp_rows)
        }
        LoadedSources::Qualitative(sources) => {
            let refs: Vec<&MassFunction<LabelAlgebra>> = sources.iter().collect();
            let res = combine(config, &refs)?;
            let (masses, conflict, betp_rows) =
                qualitative_reports(loaded, &res, betp, config.approximate_output)?;
            let normalization = normalization_of(&res.mass, |l| l.to_string());
            (res.mass.world(), masses, conflict, normalization, betp_rows)
        }
    };
    Ok(OutputDocument {
        frame: loaded.document.frame.clone(),
        model: loaded.document.model.clone(),
        mode: loaded.document.mode.clone(),
        world: world_name(world),
        rule: rule_report(config),
        sources: loaded.source_names.clone(),
        masses,
        conflict,
        normalization,
        betp: betp_rows,
    })
}

/// Human-readable structural report: the model's minterm mask, the frame's
/// full set, and every source's focal elements with their Venn regions and
/// DSm cardinalities.
pub fn inspect(loaded: &LoadedDocument) -> String {
    use std::fmt::Write;

    let frame = &loaded.frame;
    let model = &loaded.model;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "frame: {} ({} atoms, {} minterms)",
        frame.atom_names().join(", "),
        frame.atom_count(),
        frame.minterm_count()
    );
    let kind = match model.kind() {
        dsmfuse_core::ModelKind::Free => "free",
        dsmfuse_core::ModelKind::Shafer => "shafer",
        dsmfuse_core::ModelKind::Hybrid => "hybrid",
    };
    let _ = writeln!(
        out,
        "model: {} ({} minterms forbidden)",
        kind,
        model.forbidden().dsm_cardinality()
    );
    let theta = model.full_set();
    let _ = writeln!(
        out,
        "Θ = {}  C(Θ) = {}",
        canonical_display(&theta, frame, model),
        theta.dsm_cardinality()
    );

    let minterm_names = |set: &FocalSet| -> String {
        set.minterms()
            .into_iter()
            .map(|m| {
                let atoms = frame.minterm_atoms(m);
                (0..frame.atom_count())
                    .filter(|i| atoms & (1 << i) != 0)
                    .map(|i| frame.atom_name(i))
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect::<Vec<_>>()
            .join(", ")
    };

    let mut rows: Vec<(String, Vec<(FocalSet, String)>)> = Vec::new();
    match &loaded.sources {
        LoadedSources::Quantitative(sources) => {
            for (name, m) in loaded.source_names.iter().zip(sources) {
                let entries = m
                    .entries()
                    .map(|(set, v)| (set.clone(), fraction_string(v)))
                    .collect();
                rows.push((name.clone(), entries));
            }
        }
        LoadedSources::Qualitative(sources) => {
            for (name, m) in loaded.source_names.iter().zip(sources) {
                let entries = m
                    .entries()
                    .map(|(set, v)| (set.clone(), v.to_string()))
                    .collect();
                rows.push((name.clone(), entries));
            }
        }
    }
    for (name, entries) in rows {
        let _ = writeln!(out, "source {name}:");
        for (set, value) in entries {
            let _ = writeln!(
                out,
                "  {:<12} {:<10} C = {:<3} regions: {}",
                canonical_display(&set, frame, model),
                value,
                set.dsm_cardinality(),
                minterm_names(&set)
            );
        }
    }
    out
}
