//! Brute-force reference implementations and random input generation.
//!
//! The oracles re-derive each rule straight from its defining sum, keeping
//! their accumulation logic independent of the engine's tuple router, so a
//! disagreement on random inputs points at a real defect rather than a shared
//! bug.
//!
//! Shared between several test targets, each of which uses a subset.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use dsmfuse_core::frame::{eval_str, FocalSet, Frame, Model};
use dsmfuse_core::labels::LabelScale;
use dsmfuse_core::mass::{LabelAlgebra, MassFunction, RationalAlgebra, World};
use dsmfuse_core::rules::{Rule, RuleConfig};
use dsmfuse_core::weights::{AlphaPolicy, Dissimilarity};
use dsmfuse_core::{ratio, Rational};

pub type QuantSource = MassFunction<RationalAlgebra>;
pub type Spectrum = BTreeMap<FocalSet, Rational>;

pub fn focals(m: &QuantSource) -> Vec<(FocalSet, Rational)> {
    m.entries().map(|(s, v)| (s.clone(), v.clone())).collect()
}

fn cartesian(sources: &[Vec<(FocalSet, Rational)>]) -> Vec<Vec<(FocalSet, Rational)>> {
    let mut out: Vec<Vec<(FocalSet, Rational)>> = vec![Vec::new()];
    for src in sources {
        let mut next = Vec::new();
        for prefix in &out {
            for item in src {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

fn add_to(map: &mut Spectrum, set: FocalSet, v: Rational) {
    if v.is_zero() {
        return;
    }
    *map.entry(set).or_insert_with(Rational::zero) += v;
}

fn inter_of(row: &[(FocalSet, Rational)]) -> FocalSet {
    let mut it = row.iter();
    let mut acc = it.next().unwrap().0.clone();
    for (s, _) in it {
        acc = acc.and(s);
    }
    acc
}

fn union_of(row: &[(FocalSet, Rational)]) -> FocalSet {
    let mut it = row.iter();
    let mut acc = it.next().unwrap().0.clone();
    for (s, _) in it {
        acc = acc.or(s);
    }
    acc
}

fn product_of(row: &[(FocalSet, Rational)]) -> Rational {
    row.iter().fold(Rational::one(), |acc, (_, v)| acc * v)
}

pub fn oracle_conjunctive(sources: &[&QuantSource]) -> (Spectrum, Rational) {
    let rows = cartesian(&sources.iter().map(|m| focals(m)).collect::<Vec<_>>());
    let mut map = Spectrum::new();
    let mut conflict = Rational::zero();
    for row in rows {
        let inter = inter_of(&row);
        let p = product_of(&row);
        if inter.is_empty() {
            conflict += p;
        } else {
            add_to(&mut map, inter, p);
        }
    }
    (map, conflict)
}

pub fn oracle_disjunctive(sources: &[&QuantSource]) -> Spectrum {
    let rows = cartesian(&sources.iter().map(|m| focals(m)).collect::<Vec<_>>());
    let mut map = Spectrum::new();
    for row in rows {
        let p = product_of(&row);
        add_to(&mut map, union_of(&row), p);
    }
    map
}

/// PCR5 for two sources, written exactly as the defining pairwise sum.
pub fn oracle_pcr5(m1: &QuantSource, m2: &QuantSource) -> Spectrum {
    let (mut map, _) = oracle_conjunctive(&[m1, m2]);
    for (x, mx) in focals(m1) {
        for (y, my) in focals(m2) {
            if !x.and(&y).is_empty() {
                continue;
            }
            let denom = &mx + &my;
            if denom.is_zero() {
                continue;
            }
            add_to(&mut map, x.clone(), &mx * &mx * &my / &denom);
            add_to(&mut map, y.clone(), &my * &my * &mx / &denom);
        }
    }
    map
}

/// PCR6 written per source: for source `i` and focal `X`, enumerate the
/// (M−1)-tuples of the other sources and add
/// `m_i(X)² · Π m_j(Y_j) / (m_i(X) + Σ m_j(Y_j))` whenever `∩Y_j ∩ X = ∅`.
pub fn oracle_pcr6(sources: &[&QuantSource]) -> Spectrum {
    let (mut map, _) = oracle_conjunctive(sources);
    for (i, source) in sources.iter().enumerate() {
        let others: Vec<Vec<(FocalSet, Rational)>> = sources
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, m)| focals(m))
            .collect();
        for (x, mx) in focals(source) {
            for row in cartesian(&others) {
                let mut inter = x.clone();
                for (y, _) in &row {
                    inter = inter.and(y);
                }
                if !inter.is_empty() {
                    continue;
                }
                let others_product = product_of(&row);
                let others_sum: Rational = row.iter().map(|(_, v)| v.clone()).sum();
                let denom = &mx + &others_sum;
                if denom.is_zero() {
                    continue;
                }
                add_to(&mut map, x.clone(), &mx * &mx * &others_product / &denom);
            }
        }
    }
    map
}

/// Discounted PCR with a fixed factor, from the defining sums: the PCR6
/// redistribution scaled by α plus `(1−α)` of every conflicting product on
/// the tuple's union.
pub fn oracle_dpcr_fixed(sources: &[&QuantSource], alpha: &Rational) -> Spectrum {
    let (mut map, _) = oracle_conjunctive(sources);
    let pcr6 = oracle_pcr6(sources);
    let (conj, _) = oracle_conjunctive(sources);
    for (set, total) in pcr6 {
        let redistributed = &total - conj.get(&set).cloned().unwrap_or_else(Rational::zero);
        add_to(&mut map, set, alpha * redistributed);
    }
    let rows = cartesian(&sources.iter().map(|m| focals(m)).collect::<Vec<_>>());
    for row in rows {
        if inter_of(&row).is_empty() {
            let p = product_of(&row);
            add_to(&mut map, union_of(&row), (Rational::one() - alpha) * p);
        }
    }
    map
}

pub fn sum(map: &Spectrum) -> Rational {
    map.values().sum()
}

// --- random inputs -----------------------------------------------------

/// Description of a random fusion problem, in plain data so proptest can
/// shrink it: atom count, model choice, and per-source focal weights.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub atoms: usize,
    pub model: u8,
    pub sources: Vec<Vec<(Vec<u8>, u32)>>,
}

/// Strategy for problems with up to `max_atoms` atoms and `max_sources`
/// sources of at most four focal elements each. Each focal element is a
/// small program: a starting atom followed by (op, atom) steps, where op 0
/// is union and 1 is intersection.
pub fn problems(max_atoms: usize, max_sources: usize) -> impl Strategy<Value = ProblemSpec> {
    let focal = (proptest::collection::vec(any::<u8>(), 1..=5), 1u32..=20);
    let source = proptest::collection::vec(focal, 1..=4);
    (
        2..=max_atoms,
        0u8..=2,
        proptest::collection::vec(source, 2..=max_sources),
    )
        .prop_map(|(atoms, model, sources)| ProblemSpec {
            atoms,
            model,
            sources,
        })
}

pub fn build_frame(spec: &ProblemSpec) -> (Arc<Frame>, Arc<Model>) {
    let names: Vec<String> = (0..spec.atoms)
        .map(|i| format!("{}", (b'A' + i as u8) as char))
        .collect();
    let frame = Frame::new(names.clone()).unwrap();
    let model = match spec.model {
        0 => Model::free(&frame),
        1 => Model::shafer(&frame),
        _ => {
            if spec.atoms >= 2 {
                // Declare the first two atoms disjoint; enough to exercise
                // hybrid masking without emptying anything else.
                Model::hybrid(&frame, &[vec![names[0].clone(), names[1].clone()]]).unwrap()
            } else {
                Model::free(&frame)
            }
        }
    };
    (frame, model)
}

fn focal_from_program(program: &[u8], frame: &Frame, model: &Model) -> FocalSet {
    let n = frame.atom_count();
    let atom = |b: u8| frame.atom_region((b as usize) % n).and(&model.full_set());
    let mut set = atom(program[0]);
    for chunk in program[1..].chunks(2) {
        if chunk.len() < 2 {
            break;
        }
        let rhs = atom(chunk[1]);
        if chunk[0] % 2 == 0 {
            set = set.or(&rhs);
        } else {
            set = set.and(&rhs);
        }
    }
    set
}

/// Materialize normalized quantitative sources from a problem description.
pub fn build_quant(spec: &ProblemSpec) -> (Arc<Frame>, Arc<Model>, Vec<QuantSource>) {
    let (frame, model) = build_frame(spec);
    let mut sources = Vec::new();
    for desc in &spec.sources {
        let mut weights: BTreeMap<FocalSet, u32> = BTreeMap::new();
        for (program, w) in desc {
            let set = focal_from_program(program, &frame, &model);
            if set.is_empty() {
                continue;
            }
            *weights.entry(set).or_insert(0) += w;
        }
        if weights.is_empty() {
            weights.insert(model.full_set(), 1);
        }
        let total: u32 = weights.values().sum();
        let mut m = MassFunction::new(frame.clone(), model.clone(), World::Closed, RationalAlgebra);
        for (set, w) in weights {
            m.insert(set, ratio(w as i64, total as i64)).unwrap();
        }
        sources.push(m);
    }
    (frame, model, sources)
}

/// Materialize quasi-normalized qualitative sources (indexes sum to n+1)
/// together with their quantitative images under `L_i ↦ i/(n+1)`.
pub fn build_qual(
    spec: &ProblemSpec,
    scale: LabelScale,
) -> (
    Arc<Frame>,
    Arc<Model>,
    Vec<MassFunction<LabelAlgebra>>,
    Vec<QuantSource>,
) {
    let (frame, model, quants) = build_quant(spec);
    let mut quals = Vec::new();
    for q in &quants {
        let mut lm = MassFunction::new(
            frame.clone(),
            model.clone(),
            World::Closed,
            LabelAlgebra::new(scale),
        );
        for (set, v) in q.entries() {
            let index = v * ratio(scale.top() as i64, 1);
            lm.insert(set.clone(), scale.refined(index)).unwrap();
        }
        quals.push(lm);
    }
    (frame, model, quals, quants)
}

/// Concrete-syntax rendering of a focal program, folded exactly like
/// `focal_from_program` so the two stay interchangeable.
pub fn expr_text_from_program(program: &[u8], frame: &Frame) -> String {
    let n = frame.atom_count();
    let atom = |b: u8| frame.atom_name((b as usize) % n).to_string();
    let mut text = atom(program[0]);
    for chunk in program[1..].chunks(2) {
        if chunk.len() < 2 {
            break;
        }
        let op = if chunk[0] % 2 == 0 { '|' } else { '&' };
        text = format!("({text}){op}{}", atom(chunk[1]));
    }
    text
}

/// Random reachable non-empty focal sets, for weight-level properties.
pub fn reachable_sets(spec: &ProblemSpec) -> Vec<FocalSet> {
    let (frame, model) = build_frame(spec);
    let mut out = Vec::new();
    for desc in &spec.sources {
        for (program, _) in desc {
            let set = focal_from_program(program, &frame, &model);
            if !set.is_empty() {
                out.push(set);
            }
        }
    }
    if out.is_empty() {
        out.push(model.full_set());
    }
    out
}

#[allow(dead_code)]
pub fn display_spectrum(frame: &Frame, model: &Model, map: &Spectrum) -> String {
    map.iter()
        .map(|(set, v)| {
            format!(
                "{}: {}",
                dsmfuse_core::frame::canonical_display(set, frame, model),
                v
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[allow(dead_code)]
pub fn eval(frame: &Frame, model: &Model, text: &str) -> FocalSet {
    eval_str(text, frame, model).unwrap()
}

/// Every rule applicable to `n` sources, with concrete parameter choices.
pub fn rule_sweep(n: usize) -> Vec<RuleConfig> {
    let mut configs = vec![
        RuleConfig::new(Rule::Disjunctive),
        RuleConfig::new(Rule::Conjunctive),
        RuleConfig::new(Rule::Tbm),
        RuleConfig::new(Rule::Yager),
        RuleConfig::new(Rule::DuboisPrade),
        RuleConfig::new(Rule::Mix).with_dissimilarity(Dissimilarity::DeltaMin),
        RuleConfig::new(Rule::Mix).with_dissimilarity(Dissimilarity::EtaMax),
        RuleConfig::new(Rule::Mix).with_dissimilarity(Dissimilarity::Jaccard),
        RuleConfig::new(Rule::Pcr6),
        RuleConfig::new(Rule::Dpcr).with_alpha(AlphaPolicy::Fixed(ratio(9, 10))),
        RuleConfig::new(Rule::Dpcr).with_alpha(AlphaPolicy::GlobalConflict),
        RuleConfig::new(Rule::DpcrLambda),
        RuleConfig::new(Rule::Mdpcr)
            .with_dissimilarity(Dissimilarity::EtaMax)
            .with_alpha(AlphaPolicy::Fixed(ratio(3, 5))),
        RuleConfig::new(Rule::Mdpcr)
            .with_dissimilarity(Dissimilarity::Jaccard)
            .with_alpha(AlphaPolicy::GlobalConflict),
    ];
    if n == 2 {
        configs.push(RuleConfig::new(Rule::Pcr5));
        configs.push(RuleConfig::new(Rule::Florea));
    }
    configs
}
