//! Mass functions over an abstract value algebra.
//!
//! Quantitative masses are exact rationals and qualitative masses are
//! [`Label`]s; both satisfy the same [`MassAlgebra`] contract, so validation,
//! the credibility / plausibility / pignistic transforms, discounting and all
//! combination rules are written once. Under the label isomorphism
//! `L_i ↦ i/(n+1)` every algebra operation commutes with its rational
//! counterpart exactly, which is what makes qualitative and quantitative runs
//! of the same rule agree.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::frame::{eval_str, FocalSet, Frame, Model, ParseError};
use crate::labels::{Label, LabelError, LabelScale};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MassError {
    #[error("negative mass on `{0}`")]
    NegativeMass(String),
    #[error("duplicate focal element `{0}`")]
    DuplicateFocal(String),
    #[error("mass assigned to the empty set under the closed-world assumption")]
    EmptyMassClosedWorld,
    #[error("value does not belong to this mass function's algebra")]
    IncompatibleValue,
    #[error("discounting factor {0} is outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("operation requires a closed-world mass function")]
    OpenWorld,
    #[error("total mass on the empty set")]
    TotalMassOnEmpty,
    #[error("sources disagree on frame, model or algebra")]
    FrameMismatch,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// The algebra a mass value must satisfy. Implementations must be exact:
/// `add`/`mul` commute and associate, `scalar_mul(1, v) = v`, and
/// `div(mul(a, b), b) = a` whenever `b` is nonzero.
pub trait MassAlgebra: Clone + PartialEq + std::fmt::Debug {
    type Value: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Exact division. Callers must rule out a zero divisor first.
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scalar_mul(&self, scalar: &Rational, v: &Self::Value) -> Self::Value;
    fn is_zero(&self, v: &Self::Value) -> bool;
    fn is_negative(&self, v: &Self::Value) -> bool;
    /// Image of the value on the rational scale, for reporting and for the
    /// scalar coefficients of the repartition rules.
    fn to_rational(&self, v: &Self::Value) -> Rational;
    /// Whether a value belongs to this algebra instance (e.g. label scale).
    fn accepts(&self, v: &Self::Value) -> bool;
}

/// Exact rational masses in `[0, 1]` (intermediates may exceed 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalAlgebra;

impl MassAlgebra for RationalAlgebra {
    type Value = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn div(&self, a: &Rational, b: &Rational) -> Rational {
        a / b
    }
    fn scalar_mul(&self, scalar: &Rational, v: &Rational) -> Rational {
        scalar * v
    }
    fn is_zero(&self, v: &Rational) -> bool {
        v.is_zero()
    }
    fn is_negative(&self, v: &Rational) -> bool {
        v.is_negative()
    }
    fn to_rational(&self, v: &Rational) -> Rational {
        v.clone()
    }
    fn accepts(&self, _: &Rational) -> bool {
        true
    }
}

/// Linguistic labels on a fixed scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelAlgebra {
    pub scale: LabelScale,
}

impl LabelAlgebra {
    pub fn new(scale: LabelScale) -> Self {
        LabelAlgebra { scale }
    }
}

impl MassAlgebra for LabelAlgebra {
    type Value = Label;

    fn zero(&self) -> Label {
        self.scale.zero()
    }
    fn one(&self) -> Label {
        self.scale.max()
    }
    fn add(&self, a: &Label, b: &Label) -> Label {
        a.q_add(b).expect("labels share the mass function scale")
    }
    fn sub(&self, a: &Label, b: &Label) -> Label {
        a.q_sub(b).expect("labels share the mass function scale")
    }
    fn mul(&self, a: &Label, b: &Label) -> Label {
        a.q_mul(b).expect("labels share the mass function scale")
    }
    fn div(&self, a: &Label, b: &Label) -> Label {
        a.q_div_internal(b)
            .expect("nonzero divisor on the same scale")
    }
    fn scalar_mul(&self, scalar: &Rational, v: &Label) -> Label {
        v.q_scalar_mul(scalar)
    }
    fn is_zero(&self, v: &Label) -> bool {
        v.is_zero()
    }
    fn is_negative(&self, v: &Label) -> bool {
        v.index().is_negative()
    }
    fn to_rational(&self, v: &Label) -> Rational {
        v.to_rational()
    }
    fn accepts(&self, v: &Label) -> bool {
        v.scale() == self.scale
    }
}

/// Closed world forbids mass on `∅`; open world allows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum World {
    Closed,
    Open,
}

/// Validation summary of a mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<V> {
    /// Masses sum exactly to the algebra's unit.
    pub normalized: bool,
    /// Rational image of the total equals 1 (for labels: indexes sum to n+1).
    pub quasi_normalized: bool,
    pub empty_mass: V,
}

/// A mass function: frame, model, world assumption, and its focal elements.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction<A: MassAlgebra> {
    frame: Arc<Frame>,
    model: Arc<Model>,
    world: World,
    algebra: A,
    entries: BTreeMap<FocalSet, A::Value>,
}

impl<A: MassAlgebra> MassFunction<A> {
    pub fn new(frame: Arc<Frame>, model: Arc<Model>, world: World, algebra: A) -> Self {
        MassFunction {
            frame,
            model,
            world,
            algebra,
            entries: BTreeMap::new(),
        }
    }

    /// Rule outputs are built from values the algebra produced itself, so the
    /// per-entry checks of `insert` are skipped.
    pub(crate) fn from_entries_unchecked(
        frame: Arc<Frame>,
        model: Arc<Model>,
        world: World,
        algebra: A,
        entries: BTreeMap<FocalSet, A::Value>,
    ) -> Self {
        MassFunction {
            frame,
            model,
            world,
            algebra,
            entries,
        }
    }

    /// The vacuous mass function `{Θ → 1}`.
    pub fn vacuous(frame: Arc<Frame>, model: Arc<Model>, algebra: A) -> Self {
        let full = model.full_set();
        let mut m = Self::new(frame, model, World::Closed, algebra);
        let one = m.algebra.one();
        m.entries.insert(full, one);
        m
    }

    /// Add a focal element. Zero-valued entries are dropped silently; negative
    /// values, duplicate sets, and `∅` under a closed world are rejected.
    pub fn insert(&mut self, set: FocalSet, value: A::Value) -> Result<(), MassError> {
        if !self.algebra.accepts(&value) {
            return Err(MassError::IncompatibleValue);
        }
        if self.algebra.is_negative(&value) {
            return Err(MassError::NegativeMass(self.display(&set)));
        }
        if self.algebra.is_zero(&value) {
            return Ok(());
        }
        if set.is_empty() && self.world == World::Closed {
            return Err(MassError::EmptyMassClosedWorld);
        }
        if self.entries.contains_key(&set) {
            return Err(MassError::DuplicateFocal(self.display(&set)));
        }
        self.entries.insert(set, value);
        Ok(())
    }

    /// Add a focal element given as a set expression.
    pub fn insert_expr(&mut self, expr: &str, value: A::Value) -> Result<(), MassError> {
        let set = eval_str(expr, &self.frame, &self.model)?;
        self.insert(set, value)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn world(&self) -> World {
        self.world
    }

    pub fn algebra(&self) -> &A {
        &self.algebra
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FocalSet, &A::Value)> {
        self.entries.iter()
    }

    pub fn focal_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, set: &FocalSet) -> Option<&A::Value> {
        self.entries.get(set)
    }

    /// Mass of a set, zero when not focal.
    pub fn mass(&self, set: &FocalSet) -> A::Value {
        self.entries
            .get(set)
            .cloned()
            .unwrap_or_else(|| self.algebra.zero())
    }

    pub fn display(&self, set: &FocalSet) -> String {
        crate::frame::canonical_display(set, &self.frame, &self.model)
    }

    pub fn empty_mass(&self) -> A::Value {
        self.mass(&self.frame.empty_set())
    }

    /// Sum of all masses, including any mass on `∅`.
    pub fn total(&self) -> A::Value {
        let mut acc = self.algebra.zero();
        for v in self.entries.values() {
            acc = self.algebra.add(&acc, v);
        }
        acc
    }

    pub fn validate(&self) -> ValidationReport<A::Value> {
        let total = self.total();
        ValidationReport {
            normalized: total == self.algebra.one(),
            quasi_normalized: self.algebra.to_rational(&total) == Rational::one(),
            empty_mass: self.empty_mass(),
        }
    }

    /// Credibility: sum of masses of non-empty focal subsets of `x`.
    pub fn bel(&self, x: &FocalSet) -> A::Value {
        let mut acc = self.algebra.zero();
        for (y, v) in &self.entries {
            if !y.is_empty() && y.is_subset_of(x) {
                acc = self.algebra.add(&acc, v);
            }
        }
        acc
    }

    /// Plausibility: sum of masses of focal sets meeting `x` under the model.
    pub fn pl(&self, x: &FocalSet) -> A::Value {
        let mut acc = self.algebra.zero();
        for (y, v) in &self.entries {
            if y.intersects(x) {
                acc = self.algebra.add(&acc, v);
            }
        }
        acc
    }

    /// Pignistic probability using the DSm cardinality of the active model:
    /// `BetP(x) = Σ_Y C(x∩Y)/C(Y) · m(Y)/(1 − m(∅))`.
    pub fn betp(&self, x: &FocalSet) -> Result<A::Value, MassError> {
        let mut acc = self.algebra.zero();
        for (y, v) in &self.entries {
            if y.is_empty() {
                continue;
            }
            let shared = x.and(y).dsm_cardinality();
            if shared == 0 {
                continue;
            }
            let weight = crate::ratio(shared as i64, y.dsm_cardinality() as i64);
            acc = self.algebra.add(&acc, &self.algebra.scalar_mul(&weight, v));
        }
        let denom = self.algebra.sub(&self.algebra.one(), &self.empty_mass());
        if self.algebra.is_zero(&denom) {
            return Err(MassError::TotalMassOnEmpty);
        }
        if denom == self.algebra.one() {
            Ok(acc)
        } else {
            Ok(self.algebra.div(&acc, &denom))
        }
    }

    /// Classical reliability discounting:
    /// `m'(X) = α·m(X)` for `X ≠ Θ` and `m'(Θ) = α·m(Θ) + (1 − α)`.
    pub fn discount(&self, alpha: &Rational) -> Result<Self, MassError> {
        if self.world != World::Closed {
            return Err(MassError::OpenWorld);
        }
        if alpha.is_negative() || alpha > &Rational::one() {
            return Err(MassError::AlphaOutOfRange(alpha.to_string()));
        }
        let full = self.model.full_set();
        let mut out = Self::new(
            self.frame.clone(),
            self.model.clone(),
            self.world,
            self.algebra.clone(),
        );
        for (set, v) in &self.entries {
            if *set != full {
                let scaled = self.algebra.scalar_mul(alpha, v);
                if !self.algebra.is_zero(&scaled) {
                    out.entries.insert(set.clone(), scaled);
                }
            }
        }
        let residue = Rational::one() - alpha;
        let theta = self.algebra.add(
            &self.algebra.scalar_mul(alpha, &self.mass(&full)),
            &self.algebra.scalar_mul(&residue, &self.algebra.one()),
        );
        if !self.algebra.is_zero(&theta) {
            out.entries.insert(full, theta);
        }
        Ok(out)
    }
}

/// Check that sources share frame, model, world irrelevant, and algebra.
pub(crate) fn check_sources<A: MassAlgebra>(sources: &[&MassFunction<A>]) -> Result<(), MassError> {
    let first = sources.first().ok_or(MassError::FrameMismatch)?;
    for m in &sources[1..] {
        if m.frame != first.frame || m.model != first.model || m.algebra != first.algebra {
            return Err(MassError::FrameMismatch);
        }
    }
    Ok(())
}

/// Total degree of conflict between the sources: the mass the conjunctive
/// operator sends to `∅`, extended to any number of sources.
pub fn total_conflict<A: MassAlgebra>(sources: &[&MassFunction<A>]) -> Result<A::Value, MassError> {
    if sources.len() < 2 {
        return Err(MassError::FrameMismatch);
    }
    check_sources(sources)?;
    let alg = sources[0].algebra.clone();
    let focals: Vec<Vec<(&FocalSet, &A::Value)>> =
        sources.iter().map(|m| m.entries().collect()).collect();
    let mut conflict = alg.zero();
    if focals.iter().any(|f| f.is_empty()) {
        return Ok(conflict);
    }
    let mut indexes = vec![0usize; sources.len()];
    'outer: loop {
        let mut inter = focals[0][indexes[0]].0.clone();
        let mut product = focals[0][indexes[0]].1.clone();
        for (src, &i) in focals.iter().zip(&indexes).skip(1) {
            inter = inter.and(src[i].0);
            product = alg.mul(&product, src[i].1);
        }
        if inter.is_empty() {
            conflict = alg.add(&conflict, &product);
        }
        for k in (0..indexes.len()).rev() {
            indexes[k] += 1;
            if indexes[k] < focals[k].len() {
                continue 'outer;
            }
            indexes[k] = 0;
        }
        break;
    }
    Ok(conflict)
}
