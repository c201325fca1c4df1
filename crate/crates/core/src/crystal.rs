//! Highest-weight predicates and the lattice / crystal-basis suites.
//!
//! The lattice is the 𝔸₀-span of ordered monomials, 𝔸₀ being the Laurent
//! polynomials regular at `q = 0`. Membership is tested on normal forms,
//! coefficient by coefficient. The candidate basis is the set of ordered
//! monomials taken modulo `q` times the lattice.
//!
//! Weights are graded by the full content vector plus δ-degree, so
//! monomials of length two or more carry weights outside the set of single
//! `-α + nδ` weights.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{Diagnostics, Engine};
use crate::error::{Error, Result};
use crate::omega::{OmegaTrace, OmegaVariant};
use crate::qcoeff::{Coeff, LaurentQ};
use crate::words::{enumerate_window, word_weight, Element, Generator, Word, WordWindow, DEFAULT_ENUM_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighestWeight {
    pub h: Vec<i64>,
    pub dval: i64,
    pub cval: i64,
}

impl HighestWeight {
    pub fn verma_is_irreducible(&self) -> bool {
        self.cval != 0
    }

    pub fn reduced_is_irreducible(&self) -> bool {
        self.cval == 0 && self.h.iter().all(|&x| x != 0)
    }
}

pub fn verma_is_irreducible(hw: &HighestWeight) -> bool {
    hw.verma_is_irreducible()
}

pub fn reduced_is_irreducible(hw: &HighestWeight) -> bool {
    hw.reduced_is_irreducible()
}

/// The two operator families acting on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Operator {
    Xtilde { i: usize, m: i64 },
    Omega { i: usize, m: i64 },
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Xtilde { i, m } => write!(f, "x~[{i},{m}]"),
            Operator::Omega { i, m } => write!(f, "W~[{i}]({m})"),
        }
    }
}

impl Operator {
    /// Change of content at node `i` and of δ-degree.
    pub fn weight_shift(&self) -> (usize, i64, i64) {
        match *self {
            Operator::Xtilde { i, m } => (i, 1, m),
            Operator::Omega { i, m } => (i, -1, m),
        }
    }
}

impl Engine<'_> {
    /// Applies `op`; the Ω̃ side accepts words outside the ordered basis.
    pub fn apply(&self, op: Operator, e: &Element, diag: &mut Diagnostics) -> Result<Element> {
        match op {
            Operator::Xtilde { i, m } => self.xtilde(Generator::new(i, m), e, diag),
            Operator::Omega { i, m } => self.omega_unchecked(OmegaVariant::Twisted, i, m, e, diag),
        }
    }
}

/// Mod-q class of an element of the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "class", content = "words")]
pub enum ModQClass {
    Zero,
    PlusBasis(Word),
    MinusBasis(Word),
    NotMonomial(Vec<Word>),
    /// Some coefficient has a pole at `q = 0`, so no class exists.
    NotRegular(Vec<Word>),
}

impl ModQClass {
    pub fn is_zero(&self) -> bool {
        matches!(self, ModQClass::Zero)
    }

    pub fn is_signed_basis(&self) -> bool {
        matches!(self, ModQClass::Zero | ModQClass::PlusBasis(_) | ModQClass::MinusBasis(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModQClass::Zero => "Zero",
            ModQClass::PlusBasis(_) => "PlusBasis",
            ModQClass::MinusBasis(_) => "MinusBasis",
            ModQClass::NotMonomial(_) => "NotMonomial",
            ModQClass::NotRegular(_) => "NotRegular",
        }
    }
}

/// Coefficient-wise value at `q = 0`; `Err` lists the words carrying poles.
pub fn reduce_mod_q(e: &Element) -> std::result::Result<BTreeMap<Word, Coeff>, Vec<Word>> {
    let mut out = BTreeMap::new();
    let mut poles = Vec::new();
    for (w, c) in e.iter() {
        match c.at_q0() {
            Some(0) => {}
            Some(v) => {
                out.insert(w.clone(), v);
            }
            None => poles.push(w.clone()),
        }
    }
    if poles.is_empty() {
        Ok(out)
    } else {
        Err(poles)
    }
}

pub fn classify(e: &Element) -> ModQClass {
    let reduced = match reduce_mod_q(e) {
        Ok(r) => r,
        Err(poles) => return ModQClass::NotRegular(poles),
    };
    let mut it = reduced.iter();
    match (it.next(), it.next()) {
        (None, _) => ModQClass::Zero,
        (Some((w, 1)), None) if w.is_ordered() => ModQClass::PlusBasis(w.clone()),
        (Some((w, -1)), None) if w.is_ordered() => ModQClass::MinusBasis(w.clone()),
        _ => ModQClass::NotMonomial(reduced.keys().cloned().collect()),
    }
}

/// Window of basis words plus the operator parameters applied to them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalWindow {
    pub words: WordWindow,
    pub mmin: i64,
    pub mmax: i64,
}

impl CrystalWindow {
    pub fn new(max_len: usize, kmin: i64, kmax: i64, mmin: i64, mmax: i64) -> Self {
        CrystalWindow { words: WordWindow::new(max_len, kmin, kmax), mmin, mmax }
    }

    fn operator_nodes(&self, engine: &Engine) -> Vec<usize> {
        match &self.words.nodes {
            Some(n) => {
                let mut n = n.clone();
                n.sort_unstable();
                n.dedup();
                n
            }
            None => engine.cartan.nodes().collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mmin > self.mmax {
            return Err(Error::InvalidWindow(format!("mmin {} > mmax {}", self.mmin, self.mmax)));
        }
        Ok(())
    }
}

pub fn basis_set(engine: &Engine, window: &WordWindow) -> Result<Vec<Word>> {
    enumerate_window(engine.cartan, window, DEFAULT_ENUM_CAP)
}

/// Engine errors split by whether they are budget exhaustion or a fault.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    pub diverged: usize,
    pub engine_faults: usize,
    pub other: usize,
}

impl ErrorCounts {
    fn note(&mut self, e: &Error) {
        match e {
            Error::StraightenDiverged { .. } => self.diverged += 1,
            e if e.is_engine_fault() => self.engine_faults += 1,
            _ => self.other += 1,
        }
    }

    fn add(&mut self, o: &ErrorCounts) {
        self.diverged += o.diverged;
        self.engine_faults += o.engine_faults;
        self.other += o.other;
    }

    pub fn total(&self) -> usize {
        self.diverged + self.engine_faults + self.other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeRow {
    #[serde(flatten)]
    pub op: Operator,
    pub input: Word,
    pub output: Option<Element>,
    pub ordered: bool,
    pub regular: bool,
    pub integral: bool,
    pub weight_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl LatticeRow {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.ordered && self.regular && self.weight_ok
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeSummary {
    pub instances: usize,
    pub unordered: usize,
    pub irregular: usize,
    pub non_integral: usize,
    pub weight_failures: usize,
    pub errors: ErrorCounts,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub window: CrystalWindow,
    pub words: usize,
    pub rows: Vec<LatticeRow>,
    pub summary: LatticeSummary,
    pub diagnostics: Diagnostics,
}

fn operators(nodes: &[usize], mmin: i64, mmax: i64) -> Vec<Operator> {
    let mut ops = Vec::new();
    for &i in nodes {
        for m in mmin..=mmax {
            ops.push(Operator::Xtilde { i, m });
            ops.push(Operator::Omega { i, m });
        }
    }
    ops
}

fn weight_ok(c_rank: usize, op: Operator, input: &Word, out: &Element) -> bool {
    let (node, dc, dd) = op.weight_shift();
    let before = word_weight(input, c_rank);
    out.support().all(|w| {
        let after = word_weight(w, c_rank);
        let (content, delta) = after.diff(&before);
        delta == dd && content.iter().enumerate().all(|(k, &x)| x == if k + 1 == node { dc } else { 0 })
    })
}

impl Engine<'_> {
    pub fn check_lattice(&self, window: &CrystalWindow) -> Result<LatticeReport> {
        window.validate()?;
        let words = basis_set(self, &window.words)?;
        let ops = operators(&window.operator_nodes(self), window.mmin, window.mmax);
        let rank = self.cartan.rank();
        let chunks: Vec<(Vec<LatticeRow>, Diagnostics, ErrorCounts)> = words
            .par_iter()
            .map(|w| {
                let mut diag = Diagnostics::default();
                let mut errors = ErrorCounts::default();
                let input = Element::from_word(w.clone());
                let rows = ops
                    .iter()
                    .map(|&op| match self.apply(op, &input, &mut diag) {
                        Ok(out) => LatticeRow {
                            op,
                            input: w.clone(),
                            ordered: out.is_ordered_basis(),
                            regular: out.all_coeffs(LaurentQ::is_regular_at_zero),
                            integral: out.all_coeffs(LaurentQ::is_int_poly),
                            weight_ok: weight_ok(rank, op, w, &out),
                            output: Some(out),
                            error: None,
                        },
                        Err(e) => {
                            errors.note(&e);
                            LatticeRow {
                                op,
                                input: w.clone(),
                                output: None,
                                ordered: false,
                                regular: false,
                                integral: false,
                                weight_ok: false,
                                error: Some(e.to_string()),
                            }
                        }
                    })
                    .collect();
                (rows, diag, errors)
            })
            .collect();
        let mut rows = Vec::new();
        let mut diagnostics = Diagnostics::default();
        let mut summary = LatticeSummary::default();
        for (r, d, e) in chunks {
            rows.extend(r);
            diagnostics.merge(d);
            summary.errors.add(&e);
        }
        summary.instances = rows.len();
        for r in &rows {
            if r.error.is_none() {
                summary.unordered += usize::from(!r.ordered);
                summary.irregular += usize::from(!r.regular);
                summary.non_integral += usize::from(!r.integral);
                summary.weight_failures += usize::from(!r.weight_ok);
            }
            summary.failures += usize::from(!r.passed());
        }
        Ok(LatticeReport { window: window.clone(), words: words.len(), rows, summary, diagnostics })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisRow {
    #[serde(flatten)]
    pub op: Operator,
    pub input: Word,
    pub output: Option<Element>,
    pub class: Option<ModQClass>,
    /// Recursion tree for Ω̃ rows whose class is not a signed basis word.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<OmegaTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One instance of `x̃_{i,m} Ω̃_i(-m) b ≡ Ω̃_i(-m) x̃_{i,m} b (mod q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationRow {
    pub i: usize,
    pub m: i64,
    pub input: Word,
    pub lhs: Option<ModQClass>,
    pub rhs: Option<ModQClass>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasisSummary {
    pub instances: usize,
    pub classes: BTreeMap<String, usize>,
    pub commutation_checked: usize,
    pub commutation_failed: usize,
    pub errors: ErrorCounts,
    pub no_case_pairs: usize,
    pub residual_words: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub window: CrystalWindow,
    pub words: usize,
    pub rows: Vec<BasisRow>,
    pub commutation: Vec<CommutationRow>,
    pub summary: BasisSummary,
    pub diagnostics: Diagnostics,
}

struct WordResult {
    rows: Vec<BasisRow>,
    comm: Vec<CommutationRow>,
    errors: ErrorCounts,
    diag: Diagnostics,
}

fn reduced_equal(a: &Element, b: &Element) -> Option<bool> {
    match (reduce_mod_q(a), reduce_mod_q(b)) {
        (Ok(x), Ok(y)) => Some(x == y),
        _ => None,
    }
}

impl Engine<'_> {
    fn basis_word(&self, w: &Word, nodes: &[usize], mmin: i64, mmax: i64) -> WordResult {
        let mut diag = Diagnostics::default();
        let mut errors = ErrorCounts::default();
        let mut rows = Vec::new();
        let mut comm = Vec::new();
        let b = Element::from_word(w.clone());
        let mut record = |op: Operator, diag: &mut Diagnostics, errors: &mut ErrorCounts| -> Option<Element> {
            match self.apply(op, &b, diag) {
                Ok(out) => {
                    let class = classify(&out);
                    let trace = match op {
                        Operator::Omega { i, m } if !class.is_signed_basis() => {
                            self.omega_trace(OmegaVariant::Twisted, i, m, w, &mut Diagnostics::default()).ok()
                        }
                        _ => None,
                    };
                    rows.push(BasisRow {
                        op,
                        input: w.clone(),
                        output: Some(out.clone()),
                        class: Some(class),
                        trace,
                        error: None,
                    });
                    Some(out)
                }
                Err(e) => {
                    errors.note(&e);
                    rows.push(BasisRow {
                        op,
                        input: w.clone(),
                        output: None,
                        class: None,
                        trace: None,
                        error: Some(e.to_string()),
                    });
                    None
                }
            }
        };
        let mut xs = BTreeMap::new();
        let mut os = BTreeMap::new();
        for &i in nodes {
            for m in mmin..=mmax {
                xs.insert((i, m), record(Operator::Xtilde { i, m }, &mut diag, &mut errors));
                os.insert((i, m), record(Operator::Omega { i, m }, &mut diag, &mut errors));
            }
        }
        for &i in nodes {
            for m in mmin..=mmax {
                let x = match xs.get(&(i, m)) {
                    Some(Some(v)) => v.clone(),
                    _ => continue,
                };
                let o = match os.get(&(i, -m)) {
                    Some(Some(v)) => v.clone(),
                    Some(None) => continue,
                    None => match self.apply(Operator::Omega { i, m: -m }, &b, &mut diag) {
                        Ok(v) => v,
                        Err(e) => {
                            errors.note(&e);
                            continue;
                        }
                    },
                };
                if classify(&x).is_zero() || classify(&o).is_zero() {
                    continue;
                }
                let lhs = self.apply(Operator::Xtilde { i, m }, &o, &mut diag);
                let rhs = self.apply(Operator::Omega { i, m: -m }, &x, &mut diag);
                let row = match (lhs, rhs) {
                    (Ok(l), Ok(r)) => CommutationRow {
                        i,
                        m,
                        input: w.clone(),
                        pass: reduced_equal(&l, &r) == Some(true),
                        lhs: Some(classify(&l)),
                        rhs: Some(classify(&r)),
                        error: None,
                    },
                    (l, r) => {
                        let e = l.err().or(r.err()).expect("one side failed");
                        errors.note(&e);
                        CommutationRow {
                            i,
                            m,
                            input: w.clone(),
                            lhs: None,
                            rhs: None,
                            pass: false,
                            error: Some(e.to_string()),
                        }
                    }
                };
                comm.push(row);
            }
        }
        WordResult { rows, comm, errors, diag }
    }

    pub fn check_basis(&self, window: &CrystalWindow) -> Result<BasisReport> {
        window.validate()?;
        let words = basis_set(self, &window.words)?;
        let nodes = window.operator_nodes(self);
        let parts: Vec<WordResult> =
            words.par_iter().map(|w| self.basis_word(w, &nodes, window.mmin, window.mmax)).collect();
        let mut rows = Vec::new();
        let mut commutation = Vec::new();
        let mut diagnostics = Diagnostics::default();
        let mut summary = BasisSummary::default();
        for p in parts {
            rows.extend(p.rows);
            commutation.extend(p.comm);
            diagnostics.merge(p.diag);
            summary.errors.add(&p.errors);
        }
        summary.instances = rows.len();
        for r in &rows {
            let key = r.class.as_ref().map_or("Error", ModQClass::kind);
            *summary.classes.entry(key.to_string()).or_insert(0) += 1;
            summary.failures += usize::from(!r.class.as_ref().is_some_and(ModQClass::is_signed_basis));
        }
        summary.commutation_checked = commutation.len();
        summary.commutation_failed = commutation.iter().filter(|c| !c.pass).count();
        summary.failures += summary.commutation_failed;
        summary.no_case_pairs = diagnostics.no_case.len();
        summary.residual_words = diagnostics.residuals.len();
        Ok(BasisReport { window: window.clone(), words: words.len(), rows, commutation, summary, diagnostics })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, Family};

    fn w(p: &[(usize, i64)]) -> Word {
        Word::from_pairs(p)
    }

    #[test]
    fn predicates() {
        assert!(HighestWeight { h: vec![0], dval: 0, cval: 3 }.verma_is_irreducible());
        assert!(HighestWeight { h: vec![2, -1], dval: 0, cval: 0 }.reduced_is_irreducible());
        assert!(!HighestWeight { h: vec![0, 5], dval: 0, cval: 0 }.reduced_is_irreducible());
        assert!(!HighestWeight { h: vec![1, 1], dval: 0, cval: 2 }.reduced_is_irreducible());
    }

    #[test]
    fn classification_examples() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let en = Engine::new(&a1);
        let mut d = Diagnostics::default();
        let b = Element::from_word(w(&[(1, 2)]));
        let out = en.apply(Operator::Xtilde { i: 1, m: 0 }, &b, &mut d).unwrap();
        assert_eq!(classify(&out), ModQClass::MinusBasis(w(&[(1, 1), (1, 1)])));
        let b = Element::from_word(w(&[(1, 1), (1, 0)]));
        let out = en.apply(Operator::Omega { i: 1, m: 0 }, &b, &mut d).unwrap();
        assert_eq!(classify(&out), ModQClass::Zero);
        let out = en.apply(Operator::Omega { i: 1, m: -1 }, &b, &mut d).unwrap();
        assert_eq!(classify(&out), ModQClass::PlusBasis(w(&[(1, 0)])));
        let pole = Element::term(w(&[(1, 0)]), LaurentQ::q(-1));
        assert_eq!(classify(&pole), ModQClass::NotRegular(vec![w(&[(1, 0)])]));
        let two = Element::term(w(&[(1, 0)]), LaurentQ::constant(2));
        assert_eq!(classify(&two), ModQClass::NotMonomial(vec![w(&[(1, 0)])]));
    }

    #[test]
    fn lattice_single_instance_and_empty_word() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let en = Engine::new(&a1);
        let input = w(&[(1, 1), (1, 0)]);
        let out = Element::term(w(&[(1, 1)]), LaurentQ::q(2));
        assert!(weight_ok(1, Operator::Omega { i: 1, m: 0 }, &input, &out));
        assert!(!weight_ok(1, Operator::Omega { i: 1, m: 1 }, &input, &out));
        let mut d = Diagnostics::default();
        for op in [Operator::Xtilde { i: 1, m: 2 }, Operator::Omega { i: 1, m: 2 }] {
            let out = en.apply(op, &Element::one(), &mut d).unwrap();
            assert!(classify(&out).is_signed_basis());
        }
    }

    #[test]
    fn small_a1_suites_pass() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let en = Engine::new(&a1);
        let win = CrystalWindow::new(2, -1, 1, -2, 2);
        let lat = en.check_lattice(&win).unwrap();
        assert_eq!(lat.summary.failures, 0, "{:?}", lat.summary);
        let bas = en.check_basis(&win).unwrap();
        assert_eq!(bas.summary.failures, 0, "{:?}", bas.summary);
        assert!(bas.summary.commutation_checked > 0);
    }
}
