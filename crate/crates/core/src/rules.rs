//! Combination rules over the shared mass-value algebra.
//!
//! Every rule enumerates the Cartesian product of the sources' focal elements
//! only: each tuple carries its product of masses, and the rule decides how
//! that product is split between the tuple's intersection, its union, and the
//! tuple members themselves. Because the arithmetic is exact, the per-tuple
//! shares always sum back to the tuple's product, which the
//! [`FusionResult::ledger`] records for diagnostics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::frame::FocalSet;
use crate::mass::{check_sources, MassAlgebra, MassError, MassFunction, World};
use crate::weights::{
    alpha_global, alpha_per_source, dissimilarity, gammas, lambda, AlphaPolicy, Dissimilarity,
    WeightError,
};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("at least two sources are required")]
    TooFewSources,
    #[error("rule `{0}` combines exactly two sources")]
    ExactlyTwoSources(&'static str),
    #[error("rule `{0}` requires closed-world sources")]
    ClosedWorldRequired(&'static str),
    #[error("total conflict between the sources; this rule cannot be used")]
    TotalConflict,
    #[error("rule `{0}` requires a dissimilarity choice")]
    MissingDissimilarity(&'static str),
    #[error("rule `{0}` requires an alpha policy")]
    MissingAlpha(&'static str),
    #[error("rule `{rule}` does not accept the {option} option")]
    UnexpectedOption {
        rule: &'static str,
        option: &'static str,
    },
    #[error("rule `{rule}` does not accept this alpha policy; {hint}")]
    InvalidAlphaPolicy {
        rule: &'static str,
        hint: &'static str,
    },
    #[error("fixed alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error(transparent)]
    Mass(#[from] MassError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// The available combination rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Disjunctive,
    Conjunctive,
    Dempster,
    Tbm,
    Yager,
    DuboisPrade,
    Florea,
    Mix,
    Pcr5,
    Pcr6,
    Dpcr,
    DpcrLambda,
    Mdpcr,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::Disjunctive,
        Rule::Conjunctive,
        Rule::Dempster,
        Rule::Tbm,
        Rule::Yager,
        Rule::DuboisPrade,
        Rule::Florea,
        Rule::Mix,
        Rule::Pcr5,
        Rule::Pcr6,
        Rule::Dpcr,
        Rule::DpcrLambda,
        Rule::Mdpcr,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Disjunctive => "disjunctive",
            Rule::Conjunctive => "conjunctive",
            Rule::Dempster => "dempster",
            Rule::Tbm => "tbm",
            Rule::Yager => "yager",
            Rule::DuboisPrade => "dubois_prade",
            Rule::Florea => "florea",
            Rule::Mix => "mix",
            Rule::Pcr5 => "pcr5",
            Rule::Pcr6 => "pcr6",
            Rule::Dpcr => "dpcr",
            Rule::DpcrLambda => "dpcr_lambda",
            Rule::Mdpcr => "mdpcr",
        }
    }

    fn requires_closed_world(&self) -> bool {
        !matches!(
            self,
            Rule::Disjunctive | Rule::Conjunctive | Rule::Tbm | Rule::Mix
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .iter()
            .find(|r| r.name() == s)
            .copied()
            .ok_or_else(|| FusionError::UnknownRule(s.to_string()))
    }
}

/// A rule together with its open parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleConfig {
    pub rule: Rule,
    /// Required by `mix` and `mdpcr`.
    pub dissimilarity: Option<Dissimilarity>,
    /// Required by `dpcr` (fixed or global) and `mdpcr`; implied for
    /// `dpcr_lambda`.
    pub alpha: Option<AlphaPolicy>,
    /// Qualitative outputs also report the label rounded back onto the
    /// original scale. Rendering concern; fusion itself never rounds.
    pub approximate_output: bool,
}

impl RuleConfig {
    pub fn new(rule: Rule) -> Self {
        RuleConfig {
            rule,
            dissimilarity: None,
            alpha: None,
            approximate_output: false,
        }
    }

    pub fn with_dissimilarity(mut self, d: Dissimilarity) -> Self {
        self.dissimilarity = Some(d);
        self
    }

    pub fn with_alpha(mut self, a: AlphaPolicy) -> Self {
        self.alpha = Some(a);
        self
    }

    pub fn with_approximate(mut self, on: bool) -> Self {
        self.approximate_output = on;
        self
    }

    pub fn validate(&self) -> Result<(), FusionError> {
        let name = self.rule.name();
        let needs_dissim = matches!(self.rule, Rule::Mix | Rule::Mdpcr);
        if needs_dissim && self.dissimilarity.is_none() {
            return Err(FusionError::MissingDissimilarity(name));
        }
        if !needs_dissim && self.dissimilarity.is_some() {
            return Err(FusionError::UnexpectedOption {
                rule: name,
                option: "dissimilarity",
            });
        }
        match (self.rule, &self.alpha) {
            (Rule::Dpcr, None) | (Rule::Mdpcr, None) => {
                return Err(FusionError::MissingAlpha(name))
            }
            (Rule::Dpcr, Some(AlphaPolicy::PerSourceLambda)) => {
                return Err(FusionError::InvalidAlphaPolicy {
                    rule: name,
                    hint: "use rule `dpcr_lambda` for the per-source policy",
                })
            }
            (Rule::DpcrLambda, Some(p)) if *p != AlphaPolicy::PerSourceLambda => {
                return Err(FusionError::InvalidAlphaPolicy {
                    rule: name,
                    hint: "dpcr_lambda always uses the per-source policy",
                })
            }
            (Rule::Dpcr | Rule::DpcrLambda | Rule::Mdpcr, _) => {}
            (_, Some(_)) => {
                return Err(FusionError::UnexpectedOption {
                    rule: name,
                    option: "alpha",
                })
            }
            (_, None) => {}
        }
        if let Some(AlphaPolicy::Fixed(a)) = &self.alpha {
            if a.is_negative() || a > &Rational::one() {
                return Err(FusionError::AlphaOutOfRange(a.to_string()));
            }
        }
        Ok(())
    }

    fn effective_alpha(&self) -> AlphaPolicy {
        if self.rule == Rule::DpcrLambda {
            AlphaPolicy::PerSourceLambda
        } else {
            self.alpha.clone().unwrap_or(AlphaPolicy::PerSourceLambda)
        }
    }
}

/// How one enumerated tuple's product was routed.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry<V> {
    /// The focal element drawn from each source, in source order.
    pub sets: Vec<FocalSet>,
    /// Product of the tuple's masses.
    pub product: V,
    /// Destination sets with their shares. For every redistribution rule the
    /// shares sum exactly to the product; Dempster's entries record the
    /// conjunctive routing before the global normalization, and `florea`
    /// (a weighted sum of two whole rules, not a per-tuple repartition)
    /// leaves the ledger empty.
    pub shares: Vec<(FocalSet, V)>,
}

/// Outcome of a fusion run.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult<A: MassAlgebra> {
    pub mass: MassFunction<A>,
    /// Total degree of conflict `m_∧(∅)` between the sources.
    pub conflict: A::Value,
    pub ledger: Vec<LedgerEntry<A::Value>>,
}

struct Tuple<'a, V> {
    sets: Vec<&'a FocalSet>,
    values: Vec<&'a V>,
    product: V,
    inter: FocalSet,
    union: FocalSet,
}

fn enumerate<'a, A: MassAlgebra>(
    alg: &A,
    sources: &'a [&MassFunction<A>],
) -> Vec<Tuple<'a, A::Value>> {
    let focals: Vec<Vec<(&FocalSet, &A::Value)>> =
        sources.iter().map(|m| m.entries().collect()).collect();
    if focals.iter().any(|f| f.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut indexes = vec![0usize; sources.len()];
    'outer: loop {
        let mut sets = Vec::with_capacity(sources.len());
        let mut values = Vec::with_capacity(sources.len());
        let (set0, v0) = focals[0][indexes[0]];
        sets.push(set0);
        values.push(v0);
        let mut product = v0.clone();
        let mut inter = set0.clone();
        let mut union = set0.clone();
        for (src, &i) in focals.iter().zip(&indexes).skip(1) {
            let (set, v) = src[i];
            sets.push(set);
            values.push(v);
            product = alg.mul(&product, v);
            inter = inter.and(set);
            union = union.or(set);
        }
        out.push(Tuple {
            sets,
            values,
            product,
            inter,
            union,
        });
        for k in (0..indexes.len()).rev() {
            indexes[k] += 1;
            if indexes[k] < focals[k].len() {
                continue 'outer;
            }
            indexes[k] = 0;
        }
        break;
    }
    out
}

struct Acc<A: MassAlgebra> {
    alg: A,
    map: BTreeMap<FocalSet, A::Value>,
    conflict: A::Value,
    ledger: Vec<LedgerEntry<A::Value>>,
}

impl<A: MassAlgebra> Acc<A> {
    fn new(alg: &A) -> Self {
        Acc {
            alg: alg.clone(),
            map: BTreeMap::new(),
            conflict: alg.zero(),
            ledger: Vec::new(),
        }
    }

    fn add(&mut self, set: &FocalSet, value: &A::Value) {
        if self.alg.is_zero(value) {
            return;
        }
        match self.map.get_mut(set) {
            Some(v) => *v = self.alg.add(v, value),
            None => {
                self.map.insert(set.clone(), value.clone());
            }
        }
    }

    fn record(&mut self, tuple: &Tuple<'_, A::Value>, shares: Vec<(FocalSet, A::Value)>) {
        self.ledger.push(LedgerEntry {
            sets: tuple.sets.iter().map(|s| (*s).clone()).collect(),
            product: tuple.product.clone(),
            shares,
        });
    }

    /// Mixed-rule split of one tuple: `δ1` of the product on the union,
    /// `1 − δ1` on the intersection. An empty intersection forces `δ1 = 1`,
    /// so its zero share is simply dropped.
    fn split_by_dissimilarity(&mut self, t: &Tuple<'_, A::Value>, delta1: &Rational) {
        let mut shares = Vec::new();
        let to_union = self.alg.scalar_mul(delta1, &t.product);
        if !self.alg.is_zero(&to_union) {
            self.add(&t.union, &to_union);
            shares.push((t.union.clone(), to_union));
        }
        let residue = Rational::one() - delta1;
        let to_inter = self.alg.scalar_mul(&residue, &t.product);
        if !self.alg.is_zero(&to_inter) {
            self.add(&t.inter, &to_inter);
            shares.push((t.inter.clone(), to_inter));
        }
        self.record(t, shares);
    }

    /// Accumulate `alpha`-scaled proportional shares, extending the ledger
    /// entry under construction.
    fn add_scaled_shares(
        &mut self,
        scaled: Vec<(FocalSet, A::Value)>,
        alpha: &Rational,
        shares: &mut Vec<(FocalSet, A::Value)>,
    ) {
        for (set, share) in scaled {
            let share = self.alg.scalar_mul(alpha, &share);
            if !self.alg.is_zero(&share) {
                self.add(&set, &share);
                shares.push((set, share));
            }
        }
    }
}

/// Combine the sources under the configured rule.
pub fn combine<A: MassAlgebra>(
    config: &RuleConfig,
    sources: &[&MassFunction<A>],
) -> Result<FusionResult<A>, FusionError> {
    config.validate()?;
    if sources.len() < 2 {
        return Err(FusionError::TooFewSources);
    }
    if matches!(config.rule, Rule::Pcr5 | Rule::Florea) && sources.len() != 2 {
        return Err(FusionError::ExactlyTwoSources(config.rule.name()));
    }
    check_sources(sources)?;
    if config.rule.requires_closed_world() && sources.iter().any(|m| m.world() == World::Open) {
        return Err(FusionError::ClosedWorldRequired(config.rule.name()));
    }

    let template = sources[0];
    let alg = template.algebra().clone();
    let tuples = enumerate(&alg, sources);
    let mut acc = Acc::new(&alg);
    for t in &tuples {
        if t.inter.is_empty() {
            acc.conflict = alg.add(&acc.conflict, &t.product);
        }
    }

    match config.rule {
        Rule::Disjunctive => {
            for t in &tuples {
                acc.add(&t.union, &t.product);
                let share = (t.union.clone(), t.product.clone());
                acc.record(t, vec![share]);
            }
        }
        Rule::Conjunctive | Rule::Tbm => {
            for t in &tuples {
                if !t.inter.is_empty() {
                    acc.add(&t.inter, &t.product);
                }
                acc.record(t, vec![(t.inter.clone(), t.product.clone())]);
            }
        }
        Rule::Dempster => {
            for t in &tuples {
                if !t.inter.is_empty() {
                    acc.add(&t.inter, &t.product);
                }
                acc.record(t, vec![(t.inter.clone(), t.product.clone())]);
            }
            let mut kept = alg.zero();
            for v in acc.map.values() {
                kept = alg.add(&kept, v);
            }
            if alg.is_zero(&kept) {
                return Err(FusionError::TotalConflict);
            }
            if kept != alg.one() {
                for v in acc.map.values_mut() {
                    *v = alg.div(v, &kept);
                }
            }
        }
        Rule::Yager => {
            let theta = template.model().full_set();
            for t in &tuples {
                let dest = if t.inter.is_empty() { &theta } else { &t.inter };
                acc.add(dest, &t.product);
                acc.record(t, vec![(dest.clone(), t.product.clone())]);
            }
        }
        Rule::DuboisPrade => {
            for t in &tuples {
                let dest = if t.inter.is_empty() {
                    &t.union
                } else {
                    &t.inter
                };
                acc.add(dest, &t.product);
                acc.record(t, vec![(dest.clone(), t.product.clone())]);
            }
        }
        Rule::Florea => {
            // β1 = k/(1−k+k²) on the disjunctive result, β2 = (1−k)/(1−k+k²)
            // on the conjunctive result; the empty set is excluded and the
            // weights renormalize the conflict by construction.
            let k = acc.conflict.clone();
            let one_minus_k = alg.sub(&alg.one(), &k);
            let denom = alg.add(&one_minus_k, &alg.mul(&k, &k));
            let beta1 = alg.div(&k, &denom);
            let beta2 = alg.div(&one_minus_k, &denom);
            let mut disj: BTreeMap<FocalSet, A::Value> = BTreeMap::new();
            let mut conj: BTreeMap<FocalSet, A::Value> = BTreeMap::new();
            for t in &tuples {
                match disj.get_mut(&t.union) {
                    Some(v) => *v = alg.add(v, &t.product),
                    None => {
                        disj.insert(t.union.clone(), t.product.clone());
                    }
                }
                if !t.inter.is_empty() {
                    match conj.get_mut(&t.inter) {
                        Some(v) => *v = alg.add(v, &t.product),
                        None => {
                            conj.insert(t.inter.clone(), t.product.clone());
                        }
                    }
                }
            }
            for (set, v) in &disj {
                let share = alg.mul(&beta1, v);
                acc.add(set, &share);
            }
            for (set, v) in &conj {
                let share = alg.mul(&beta2, v);
                acc.add(set, &share);
            }
        }
        Rule::Mix => {
            let kind = config.dissimilarity.unwrap();
            for t in &tuples {
                let delta1 = dissimilarity(kind, &t.sets)?;
                acc.split_by_dissimilarity(t, &delta1);
            }
        }
        Rule::Pcr5 | Rule::Pcr6 => {
            for t in &tuples {
                if !t.inter.is_empty() {
                    acc.add(&t.inter, &t.product);
                    acc.record(t, vec![(t.inter.clone(), t.product.clone())]);
                    continue;
                }
                let shares = proportional_shares(&alg, t);
                for (set, share) in &shares {
                    acc.add(set, share);
                }
                acc.record(t, shares);
            }
        }
        Rule::Dpcr | Rule::DpcrLambda | Rule::Mdpcr => {
            let policy = config.effective_alpha();
            for t in &tuples {
                if !t.inter.is_empty() {
                    // Non-conflicting tuples: MDPCR splits them like the
                    // mixed rule, the discounted rules keep the conjunctive
                    // routing.
                    if config.rule == Rule::Mdpcr {
                        let kind = config.dissimilarity.unwrap();
                        let delta1 = dissimilarity(kind, &t.sets)?;
                        acc.split_by_dissimilarity(t, &delta1);
                    } else {
                        acc.add(&t.inter, &t.product);
                        acc.record(t, vec![(t.inter.clone(), t.product.clone())]);
                    }
                    continue;
                }
                // Conflicting tuples: α of the proportional shares, the
                // remaining 1−α (or 1−Σα_i) of the product on the union.
                let mut shares = Vec::new();
                let union_weight = match &policy {
                    AlphaPolicy::Fixed(a) => {
                        acc.add_scaled_shares(proportional_shares(&alg, t), a, &mut shares);
                        Rational::one() - a
                    }
                    AlphaPolicy::GlobalConflict => {
                        let a = alpha_global(&t.sets);
                        acc.add_scaled_shares(proportional_shares(&alg, t), &a, &mut shares);
                        Rational::one() - a
                    }
                    AlphaPolicy::PerSourceLambda => {
                        let alphas: Vec<Rational> = (0..t.sets.len())
                            .map(|i| alpha_per_source(i, &t.sets))
                            .collect();
                        let alpha_sum: Rational = alphas.iter().sum();
                        let masses: Vec<Rational> =
                            t.values.iter().map(|v| alg.to_rational(v)).collect();
                        if let Some(l) = lambda(&alphas, &gammas(&masses)) {
                            let scaled = proportional_shares(&alg, t);
                            for ((set, share), a_i) in scaled.into_iter().zip(&alphas) {
                                let coeff = a_i * &l;
                                let share = alg.scalar_mul(&coeff, &share);
                                if !alg.is_zero(&share) {
                                    acc.add(&set, &share);
                                    shares.push((set, share));
                                }
                            }
                        }
                        Rational::one() - alpha_sum
                    }
                };
                let to_union = alg.scalar_mul(&union_weight, &t.product);
                if !alg.is_zero(&to_union) {
                    acc.add(&t.union, &to_union);
                    shares.push((t.union.clone(), to_union));
                }
                acc.record(t, shares);
            }
        }
    }

    let out_world = if config.rule == Rule::Tbm || sources.iter().any(|m| m.world() == World::Open)
    {
        World::Open
    } else {
        World::Closed
    };
    let mut map = acc.map;
    if config.rule == Rule::Tbm && !alg.is_zero(&acc.conflict) {
        map.insert(template.frame().empty_set(), acc.conflict.clone());
    }
    map.retain(|_, v| !alg.is_zero(v));
    let mass = MassFunction::from_entries_unchecked(
        template.frame().clone(),
        template.model().clone(),
        out_world,
        alg,
        map,
    );
    Ok(FusionResult {
        mass,
        conflict: acc.conflict,
        ledger: acc.ledger,
    })
}

/// Proportional conflict shares of one fully conflicting tuple: source `i`
/// receives `m_i(Y_i) · P / Σ_j m_j(Y_j)` on its own focal element `Y_i`.
fn proportional_shares<A: MassAlgebra>(
    alg: &A,
    t: &Tuple<'_, A::Value>,
) -> Vec<(FocalSet, A::Value)> {
    let mut denom = alg.zero();
    for v in &t.values {
        denom = alg.add(&denom, v);
    }
    if alg.is_zero(&denom) {
        return Vec::new();
    }
    let ratio = alg.div(&t.product, &denom);
    t.sets
        .iter()
        .zip(&t.values)
        .map(|(set, v)| ((*set).clone(), alg.mul(v, &ratio)))
        .collect()
}
