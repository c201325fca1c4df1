//! Words in the generators `x⁻_{i,k}`, the weak ordering on sums `i + k`,
//! weights, and finite `LaurentQ`-linear combinations of words.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::qcoeff::LaurentQ;

/// The generator `x⁻_{node,degree}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub node: usize,
    pub degree: i64,
}

impl Generator {
    pub const fn new(node: usize, degree: i64) -> Self {
        Generator { node, degree }
    }

    /// The ordering key `i + k`.
    pub fn sum(&self) -> i64 {
        self.node as i64 + self.degree
    }

    pub fn with_degree(&self, degree: i64) -> Self {
        Generator { node: self.node, degree }
    }

    fn key(&self) -> (i64, usize, i64) {
        (self.sum(), self.node, self.degree)
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.node, self.degree)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.node, self.degree).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (node, degree) = <(usize, i64)>::deserialize(d)?;
        if node == 0 {
            return Err(D::Error::custom("node indices start at 1"));
        }
        Ok(Generator { node, degree })
    }
}

/// A finite product of generators; the empty word is the highest-weight vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(factors: Vec<Generator>) -> Self {
        Word(factors)
    }

    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Word(pairs.iter().map(|&(i, k)| Generator::new(i, k)).collect())
    }

    pub fn single(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn head(&self) -> Option<Generator> {
        self.0.first().copied()
    }

    /// The word without its first factor.
    pub fn tail(&self) -> Word {
        Word(self.0.iter().skip(1).copied().collect())
    }

    pub fn split_first(&self) -> Option<(Generator, Word)> {
        self.head().map(|h| (h, self.tail()))
    }

    pub fn prepend(&self, g: Generator) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(g);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn is_ordered(&self) -> bool {
        is_ordered(self)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.iter().map(|g| g.degree).max()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.iter().map(|g| g.degree).min()
    }

    /// Σ (i_t + k_t).
    pub fn total_sum(&self) -> i64 {
        self.0.iter().map(Generator::sum).sum()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then lexicographic on `(sum, node, degree)` triples.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, g) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for g in &self.0 {
            seq.serialize_element(g)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Word(Vec::<Generator>::deserialize(d)?))
    }
}

impl FromIterator<Generator> for Word {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// `i_1 + k_1 ≥ i_2 + k_2 ≥ …`.
pub fn is_ordered(w: &Word) -> bool {
    w.0.windows(2).all(|p| p[0].sum() >= p[1].sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    /// Multiplicity of `-α_i`, index `i - 1`.
    pub content: Vec<u32>,
    /// Σ k_t, the coefficient of `δ`.
    pub delta_degree: i64,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight { content: vec![0; rank], delta_degree: 0 }
    }

    /// Componentwise difference `self - other` as signed integers.
    pub fn diff(&self, other: &Weight) -> (Vec<i64>, i64) {
        let content = self.content.iter().zip(&other.content).map(|(&a, &b)| a as i64 - b as i64).collect();
        (content, self.delta_degree - other.delta_degree)
    }
}

/// Weight of a word for an algebra of the given rank. Nodes beyond the rank
/// are an input error and panic.
pub fn word_weight(w: &Word, rank: usize) -> Weight {
    let mut wt = Weight::zero(rank);
    for g in w.factors() {
        wt.content[g.node - 1] += 1;
        wt.delta_degree += g.degree;
    }
    wt
}

/// Finite `LaurentQ`-linear combination of words, zero coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Word, LaurentQ>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(w, LaurentQ::one())
    }

    pub fn term(w: Word, c: LaurentQ) -> Self {
        let mut e = Element::zero();
        e.add_term(w, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, LaurentQ)>>(iter: I) -> Self {
        let mut e = Element::zero();
        for (w, c) in iter {
            e.add_term(w, &c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: &LaurentQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &LaurentQ) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), &(a * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> LaurentQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &LaurentQ) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_int(&self, n: i128) -> Element {
        self.scale(&LaurentQ::constant(n))
    }

    /// Applies `f` to every word, merging coefficients of coinciding images.
    pub fn map_words<F: Fn(&Word) -> Word>(&self, f: F) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c);
        }
        out
    }

    /// Every word in the support is ordered.
    pub fn is_ordered_basis(&self) -> bool {
        self.terms.keys().all(is_ordered)
    }

    pub fn unordered_words(&self) -> Vec<Word> {
        self.terms.keys().filter(|w| !is_ordered(w)).cloned().collect()
    }

    pub fn all_coeffs(&self, pred: impl Fn(&LaurentQ) -> bool) -> bool {
        self.terms.values().all(pred)
    }

    /// Scalar value when the element is a multiple of the empty word.
    pub fn scalar_part(&self) -> LaurentQ {
        self.coeff(&Word::empty())
    }
}

pub fn elem_add(a: &Element, b: &Element) -> Element {
    a + b
}

pub fn elem_scale(a: &Element, c: &LaurentQ) -> Element {
    a.scale(c)
}

pub fn elem_map_words<F: Fn(&Word) -> Word>(a: &Element, f: F) -> Element {
    a.map_words(f)
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentQ::one());
        out
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentQ::constant(-1));
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_int(-1)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{}", w)?;
            } else if w.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, w)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: Word,
    coeff: LaurentQ,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&TermRepr { word: w.clone(), coeff: c.clone() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        Ok(Element::from_terms(terms.into_iter().map(|t| (t.word, t.coeff))))
    }
}

/// Bounds for enumerating ordered words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordWindow {
    pub max_len: usize,
    pub kmin: i64,
    pub kmax: i64,
    /// Restrict to these nodes; `None` means all nodes of the algebra.
    pub nodes: Option<Vec<usize>>,
}

impl WordWindow {
    pub fn new(max_len: usize, kmin: i64, kmax: i64) -> Self {
        WordWindow { max_len, kmin, kmax, nodes: None }
    }

    pub fn validate(&self, c: &CartanData) -> Result<()> {
        if self.kmin > self.kmax {
            return Err(Error::InvalidWindow(format!("kmin {} > kmax {}", self.kmin, self.kmax)));
        }
        if let Some(nodes) = &self.nodes {
            for &i in nodes {
                c.check_node(i)?;
            }
        }
        Ok(())
    }

    fn generators(&self, c: &CartanData) -> Vec<Generator> {
        let nodes: Vec<usize> = match &self.nodes {
            Some(n) => {
                let mut n = n.clone();
                n.sort_unstable();
                n.dedup();
                n
            }
            None => c.nodes().collect(),
        };
        let mut gens: Vec<Generator> =
            nodes.iter().flat_map(|&i| (self.kmin..=self.kmax).map(move |k| Generator::new(i, k))).collect();
        gens.sort();
        gens
    }
}

pub const DEFAULT_ENUM_CAP: usize = 2_000_000;

pub fn enumerate_ordered(c: &CartanData, max_len: usize, kmin: i64, kmax: i64) -> Result<Vec<Word>> {
    enumerate_window(c, &WordWindow::new(max_len, kmin, kmax), DEFAULT_ENUM_CAP)
}

/// All ordered words in the window, sorted by the `Word` order.
pub fn enumerate_window(c: &CartanData, window: &WordWindow, cap: usize) -> Result<Vec<Word>> {
    window.validate(c)?;
    let gens = window.generators(c);
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..window.max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let bound = w.factors().last().map(Generator::sum);
            for g in &gens {
                if bound.is_none_or(|b| g.sum() <= b) {
                    next.push(w.concat(&Word::single(*g)));
                    if out.len() + next.len() > cap {
                        return Err(Error::WindowTooLarge { cap });
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    Ok(out)
}

/// Parses `"1"` or whitespace-separated terms `x[i,k]`.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.peek() == Some(b'1') {
        let save = p.pos;
        p.pos += 1;
        p.skip_ws();
        if p.at_end() {
            return Ok(Word::empty());
        }
        p.pos = save;
    }
    let mut factors = Vec::new();
    loop {
        factors.push(p.term()?);
        p.skip_ws();
        if p.at_end() {
            break;
        }
    }
    Ok(Word(factors))
}

/// Parses a single generator `x[i,k]`.
pub fn parse_generator(text: &str) -> Result<Generator> {
    let w = parse_word(text)?;
    match w.factors() {
        [g] => Ok(*g),
        _ => Err(Error::Parse { offset: 0, expected: "exactly one term `x[i,k]`".into() }),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse { offset: self.pos, expected: expected.to_string() })
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return self.err("integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v =
            s.parse::<i64>().map_err(|_| Error::Parse { offset: start, expected: "integer in 64-bit range".into() })?;
        self.skip_ws();
        Ok(v)
    }

    fn term(&mut self) -> Result<Generator> {
        self.expect(b'x', "`x[` or `1`")?;
        self.expect(b'[', "`[`")?;
        let node_at = self.pos;
        let node = self.int()?;
        self.expect(b',', "`,`")?;
        let degree = self.int()?;
        self.expect(b']', "`]`")?;
        if node < 1 {
            return Err(Error::Parse { offset: node_at, expected: "node index ≥ 1".into() });
        }
        Ok(Generator::new(node as usize, degree))
    }
}
