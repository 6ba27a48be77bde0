//! Frames of discernment and the minterm bitset algebra.
//!
//! A frame `Θ = {θ_1, …, θ_n}` induces `2^n − 1` Venn-diagram regions
//! (*minterms*), one per non-empty subset of atoms. Every element of `2^Θ` or
//! `D^Θ` that can be built from the atoms with `∪` and `∩` is exactly a set of
//! minterms, so a [`FocalSet`] is a bitset over them. Integrity constraints
//! (Shafer's model, or a hybrid model declaring certain intersections empty)
//! become a mask of forbidden minterms, set intersection and union become
//! bitwise `AND`/`OR`, and the DSm cardinality becomes a popcount.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

/// Hard cap on frame size; the minterm universe is `2^n − 1`.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame must contain at least one element")]
    Empty,
    #[error("frame has {0} elements, the maximum is {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("invalid element name `{0}`")]
    BadAtomName(String),
    #[error("duplicate element name `{0}`")]
    DuplicateAtom(String),
    #[error("unknown element `{0}`")]
    UnknownAtom(String),
    #[error("an emptiness constraint must name at least two distinct elements, got {0:?}")]
    DegenerateConstraint(Vec<String>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown element `{name}` at position {position}")]
    UnknownAtom { name: String, position: usize },
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
}

/// A frame of discernment: an ordered list of distinct atom names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    atoms: Vec<String>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Frame {
    pub fn new<S: Into<String>>(
        atoms: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, FrameError> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(FrameError::Empty);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(FrameError::TooManyAtoms(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !is_identifier(a) {
                return Err(FrameError::BadAtomName(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(FrameError::DuplicateAtom(a.clone()));
            }
        }
        Ok(Arc::new(Frame { atoms }))
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn atom_name(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    /// Number of Venn-diagram regions: `2^n − 1`.
    pub fn minterm_count(&self) -> usize {
        (1usize << self.atoms.len()) - 1
    }

    fn word_count(&self) -> usize {
        self.minterm_count().div_ceil(64)
    }

    /// The empty set over this frame's minterm universe.
    pub fn empty_set(&self) -> FocalSet {
        FocalSet {
            words: vec![0; self.word_count()],
        }
    }

    /// All minterms whose atom subset contains `atom`, before model masking.
    ///
    /// Minterm for the non-empty atom subset `S` lives at bit `mask(S) − 1`.
    pub fn atom_region(&self, atom: usize) -> FocalSet {
        let mut set = self.empty_set();
        let n = self.atoms.len();
        for subset in 1usize..=((1 << n) - 1) {
            if subset & (1 << atom) != 0 {
                set.insert(subset - 1);
            }
        }
        set
    }

    /// Atom subset (bitmask over atoms) denoted by a minterm bit index.
    pub fn minterm_atoms(&self, minterm: usize) -> usize {
        minterm + 1
    }
}

/// An element of `G^Θ` as a bitset over the frame's minterms.
///
/// Sets are always compared after masking by the active model, so equality is
/// model-relative equality of the denoted regions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FocalSet {
    words: Vec<u64>,
}

impl FocalSet {
    fn insert(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    // Binary operations expect both sets to come from the same frame.
    fn paired<'a>(&'a self, other: &'a FocalSet) -> impl Iterator<Item = (&'a u64, &'a u64)> {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words.iter().zip(&other.words)
    }

    pub fn and(&self, other: &FocalSet) -> FocalSet {
        FocalSet {
            words: self.paired(other).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &FocalSet) -> FocalSet {
        FocalSet {
            words: self.paired(other).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn minus(&self, other: &FocalSet) -> FocalSet {
        FocalSet {
            words: self.paired(other).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &FocalSet) -> bool {
        self.paired(other).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &FocalSet) -> bool {
        self.paired(other).any(|(a, b)| a & b != 0)
    }

    /// DSm cardinality: the number of non-forbidden Venn regions in the set.
    ///
    /// `C(∅) = 0`; under Shafer's model this is the number of atoms.
    pub fn dsm_cardinality(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Bit indexes of the minterms in the set, ascending.
    pub fn minterms(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(i * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

impl PartialOrd for FocalSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FocalSet {
    /// Numeric order of the bitset value. Sets from the same frame have equal
    /// word counts; across frames the shorter universe sorts first.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

/// Integrity constraints of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Free DSm model: no intersection is empty.
    Free,
    /// Shafer's model: all atoms are mutually exclusive.
    Shafer,
    /// Hybrid DSm model: the declared atom combinations are empty.
    Hybrid,
}

/// A model is the set of minterms declared empty, as a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    kind: ModelKind,
    forbidden: FocalSet,
    allowed: FocalSet,
}

impl Model {
    pub fn free(frame: &Frame) -> Arc<Model> {
        Self::from_forbidden(frame, ModelKind::Free, frame.empty_set())
    }

    pub fn shafer(frame: &Frame) -> Arc<Model> {
        let mut forbidden = frame.empty_set();
        let n = frame.atom_count();
        for subset in 1usize..=((1 << n) - 1) {
            if subset.count_ones() >= 2 {
                forbidden.insert(subset - 1);
            }
        }
        Self::from_forbidden(frame, ModelKind::Shafer, forbidden)
    }

    /// Hybrid model from a list of atom combinations declared empty.
    ///
    /// Every minterm containing a declared-empty combination is forbidden, so
    /// the forbidden mask is closed under atom-set supersets by construction.
    /// Constraints must name at least two distinct atoms; single-atom
    /// (non-existential) constraints are not supported.
    pub fn hybrid<S: AsRef<str>>(
        frame: &Frame,
        empty: &[Vec<S>],
    ) -> Result<Arc<Model>, FrameError> {
        let mut constraint_masks = Vec::new();
        for combo in empty {
            let mut mask = 0usize;
            for name in combo {
                let idx = frame
                    .atom_index(name.as_ref())
                    .ok_or_else(|| FrameError::UnknownAtom(name.as_ref().to_string()))?;
                mask |= 1 << idx;
            }
            if mask.count_ones() < 2 {
                return Err(FrameError::DegenerateConstraint(
                    combo.iter().map(|s| s.as_ref().to_string()).collect(),
                ));
            }
            constraint_masks.push(mask);
        }
        let mut forbidden = frame.empty_set();
        let n = frame.atom_count();
        for subset in 1usize..=((1 << n) - 1) {
            if constraint_masks.iter().any(|c| subset & c == *c) {
                forbidden.insert(subset - 1);
            }
        }
        Ok(Self::from_forbidden(frame, ModelKind::Hybrid, forbidden))
    }

    fn from_forbidden(frame: &Frame, kind: ModelKind, forbidden: FocalSet) -> Arc<Model> {
        let mut allowed = frame.empty_set();
        for bit in 0..frame.minterm_count() {
            if !forbidden.contains(bit) {
                allowed.insert(bit);
            }
        }
        Arc::new(Model {
            kind,
            forbidden,
            allowed,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn forbidden(&self) -> &FocalSet {
        &self.forbidden
    }

    /// The full set `Θ` under this model (every non-forbidden minterm).
    pub fn full_set(&self) -> FocalSet {
        self.allowed.clone()
    }
}

/// Abstract syntax of a set expression over the frame's atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Atom(usize),
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersection(Box<SetExpr>, Box<SetExpr>),
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    frame: &'a Frame,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SetExpr, ParseError> {
        let mut node = self.term()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.term()?;
            node = SetExpr::Union(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<SetExpr, ParseError> {
        let mut node = self.factor()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.factor()?;
            node = SetExpr::Intersection(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<SetExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Syntax {
                        position: self.pos,
                        expected: "`)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.text.len()
                    && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
                match self.frame.atom_index(name) {
                    Some(idx) => Ok(SetExpr::Atom(idx)),
                    None => Err(ParseError::UnknownAtom {
                        name: name.to_string(),
                        position: start,
                    }),
                }
            }
            _ => Err(ParseError::Syntax {
                position: self.pos,
                expected: "an element name or `(`".into(),
            }),
        }
    }
}

/// Parse a set expression. `&` binds tighter than `|`; whitespace is ignored.
pub fn parse_set_expr(text: &str, frame: &Frame) -> Result<SetExpr, ParseError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        frame,
    };
    if p.peek().is_none() {
        return Err(ParseError::Syntax {
            position: 0,
            expected: "a non-empty expression".into(),
        });
    }
    let expr = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::Syntax {
            position: p.pos,
            expected: "end of input".into(),
        });
    }
    Ok(expr)
}

/// Evaluate an expression to its minterm bitset under the model's constraints.
pub fn eval_to_focal(expr: &SetExpr, frame: &Frame, model: &Model) -> FocalSet {
    match expr {
        SetExpr::Atom(i) => frame.atom_region(*i).and(&model.allowed),
        SetExpr::Union(a, b) => eval_to_focal(a, frame, model).or(&eval_to_focal(b, frame, model)),
        SetExpr::Intersection(a, b) => {
            eval_to_focal(a, frame, model).and(&eval_to_focal(b, frame, model))
        }
    }
}

/// Parse and evaluate in one step.
pub fn eval_str(text: &str, frame: &Frame, model: &Model) -> Result<FocalSet, ParseError> {
    Ok(eval_to_focal(&parse_set_expr(text, frame)?, frame, model))
}

/// Deterministic display of a focal set.
///
/// Sets equal to a union of whole atoms print as the atoms joined by `|` in
/// frame order; anything else prints in disjunctive normal form over its
/// minterms, each minterm as `&`-joined atoms. The empty set prints `∅`.
pub fn canonical_display(set: &FocalSet, frame: &Frame, model: &Model) -> String {
    if set.is_empty() {
        return "∅".to_string();
    }
    let mut covered: Vec<usize> = Vec::new();
    let mut union = frame.empty_set();
    for i in 0..frame.atom_count() {
        let region = frame.atom_region(i).and(&model.allowed);
        if !region.is_empty() && region.is_subset_of(set) {
            covered.push(i);
            union = union.or(&region);
        }
    }
    if union == *set {
        return covered
            .iter()
            .map(|&i| frame.atom_name(i))
            .collect::<Vec<_>>()
            .join("|");
    }
    let mut out = String::new();
    for (k, minterm) in set.minterms().into_iter().enumerate() {
        if k > 0 {
            out.push('|');
        }
        let atoms = frame.minterm_atoms(minterm);
        let mut first = true;
        for i in 0..frame.atom_count() {
            if atoms & (1 << i) != 0 {
                if !first {
                    out.push('&');
                }
                let _ = write!(out, "{}", frame.atom_name(i));
                first = false;
            }
        }
    }
    out
}
