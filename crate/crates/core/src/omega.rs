//! Annihilation operators `Ω̃_{ψ_i}(m)` and their classic counterpart at γ = 1.
//!
//! On a word `w = x_{i1,k1} · tail`:
//!
//! ```text
//! Ω(i, m) w = δ_{i,i1} δ_{-m,k1} tail + Σ_{r ≥ 0} F · g_{i,i1}(r) · x̃_{i1,k1+r}( Ω(i, m-r) tail )
//! ```
//!
//! with `F = q^p` for the twisted operator and `F = 1` for the classic one.
//! `Ω(i, n) tail` vanishes for `n < min_struct_support(i, tail)`, which makes
//! the r-sum finite.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{Diagnostics, Engine};
use crate::error::{Error, Result};
use crate::qcoeff::LaurentQ;
use crate::words::{Element, Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaVariant {
    Twisted,
    Classic,
}

impl fmt::Display for OmegaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaVariant::Twisted => "twisted",
            OmegaVariant::Classic => "classic",
        })
    }
}

impl FromStr for OmegaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "twisted" => Ok(OmegaVariant::Twisted),
            "classic" => Ok(OmegaVariant::Classic),
            _ => Err(Error::Parse { offset: 0, expected: "`twisted` or `classic`".into() }),
        }
    }
}

/// Lower bound `s` with `Ω(i, n) w = 0` for all `n < s`; `None` when no
/// factor of `w` sits on node `i`, in which case every `Ω(i, n) w` vanishes.
pub fn min_struct_support(i: usize, w: &Word) -> Option<i64> {
    w.factors().iter().filter(|g| g.node == i).map(|g| -g.degree).min()
}

/// One node of an Ω recursion tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaTrace {
    pub node: usize,
    pub m: i64,
    pub word: Word,
    pub delta: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_exponent: Option<i64>,
    pub terms: Vec<TraceTerm>,
    pub result: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceTerm {
    pub r: u32,
    pub g: LaurentQ,
    pub generator: Generator,
    pub inner: OmegaTrace,
    pub contribution: Element,
}

type Key = (OmegaVariant, usize, i64, Word);

struct Eval<'e, 'c> {
    engine: &'e Engine<'c>,
    memo: HashMap<Key, Element>,
    diag: &'e mut Diagnostics,
}

impl Eval<'_, '_> {
    fn r_bound(&self, m: i64, tail: &Word, i: usize) -> i64 {
        let slack = self.engine.opts.cutoff_slack;
        match min_struct_support(i, tail) {
            Some(s) => m - s + slack,
            None => slack - 1,
        }
    }

    fn p_exponent(&mut self, i: usize, i1: usize, m: i64, tail: &Word) -> Result<i64> {
        let a = self.engine.cartan.pairing_value(i, i1)?;
        if a > 0 {
            return Ok(0);
        }
        if a == 0 {
            return Ok(2);
        }
        let slack = self.engine.opts.cutoff_slack;
        let bound = match min_struct_support(i, tail) {
            Some(s) => (m - s + 1).max(0) + slack,
            None => slack,
        };
        for l in 0..=bound {
            if self.word(OmegaVariant::Twisted, i, m - l, tail)?.is_zero() {
                return Ok(-a * l + 1);
            }
        }
        Err(Error::SearchExhausted { node: i, m, bound })
    }

    fn word(&mut self, variant: OmegaVariant, i: usize, m: i64, w: &Word) -> Result<Element> {
        let memoize = self.engine.opts.memoize;
        let key = (variant, i, m, w.clone());
        if memoize {
            if let Some(hit) = self.memo.get(&key) {
                return Ok(hit.clone());
            }
        }
        let out = self.expand(variant, i, m, w, None)?;
        if memoize {
            self.memo.insert(key, out.clone());
        }
        Ok(out)
    }

    fn expand(
        &mut self,
        variant: OmegaVariant,
        i: usize,
        m: i64,
        w: &Word,
        mut trace: Option<&mut OmegaTrace>,
    ) -> Result<Element> {
        let Some((h, tail)) = w.split_first() else {
            return Ok(Element::zero());
        };
        let mut out = Element::zero();
        let delta = h.node == i && h.degree == -m;
        if delta {
            out.add_term(tail.clone(), &LaurentQ::one());
        }
        let top = self.r_bound(m, &tail, i);
        let factor = if top < 0 {
            None
        } else {
            match variant {
                OmegaVariant::Twisted => Some(self.p_exponent(i, h.node, m, &tail)?),
                OmegaVariant::Classic => Some(0),
            }
        };
        if let Some(t) = trace.as_deref_mut() {
            t.delta = delta;
            t.p_exponent = if variant == OmegaVariant::Twisted { factor } else { None };
        }
        let f = LaurentQ::q(factor.unwrap_or(0));
        for r in 0..=top.max(-1) {
            let r = r as u32;
            let g = self.engine.cartan.g_qinv(i, h.node, r)?;
            if g.is_zero() {
                continue;
            }
            let gen = h.with_degree(h.degree + r as i64);
            let mut inner_trace = trace.as_ref().map(|_| OmegaTrace::new(i, m - r as i64, &tail));
            let inner = match inner_trace.as_mut() {
                Some(t) => {
                    let v = self.expand(variant, i, m - r as i64, &tail, Some(t))?;
                    t.result = v.clone();
                    v
                }
                None => self.word(variant, i, m - r as i64, &tail)?,
            };
            if inner.is_zero() {
                continue;
            }
            let lifted = self.engine.xtilde(gen, &inner, self.diag)?;
            let contribution = lifted.scale(&(&f * &g));
            out = &out + &contribution;
            if let (Some(t), Some(it)) = (trace.as_deref_mut(), inner_trace) {
                t.terms.push(TraceTerm { r, g, generator: gen, inner: it, contribution });
            }
        }
        Ok(out)
    }
}

impl OmegaTrace {
    fn new(node: usize, m: i64, word: &Word) -> Self {
        OmegaTrace {
            node,
            m,
            word: word.clone(),
            delta: false,
            p_exponent: None,
            terms: Vec::new(),
            result: Element::zero(),
        }
    }
}

impl Engine<'_> {
    /// Ω of node `i` and argument `m`, extended linearly. Words need not be ordered.
    pub fn omega_unchecked(
        &self,
        variant: OmegaVariant,
        i: usize,
        m: i64,
        e: &Element,
        diag: &mut Diagnostics,
    ) -> Result<Element> {
        self.cartan.check_node(i)?;
        let mut ev = Eval { engine: self, memo: HashMap::new(), diag };
        let mut out = Element::zero();
        for (w, c) in e.iter() {
            let v = ev.word(variant, i, m, w)?;
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    /// Ω on an element in ordered-basis normal form.
    pub fn omega(
        &self,
        variant: OmegaVariant,
        i: usize,
        m: i64,
        e: &Element,
        diag: &mut Diagnostics,
    ) -> Result<Element> {
        if let Some(w) = e.unordered_words().into_iter().next() {
            return Err(Error::NotOrdered(w));
        }
        self.omega_unchecked(variant, i, m, e, diag)
    }

    /// The exponent `p` used by the twisted operator at a recursion node.
    pub fn p_exponent(&self, i: usize, i1: usize, m: i64, tail: &Word, diag: &mut Diagnostics) -> Result<i64> {
        self.cartan.check_node(i)?;
        self.cartan.check_node(i1)?;
        let mut ev = Eval { engine: self, memo: HashMap::new(), diag };
        ev.p_exponent(i, i1, m, tail)
    }

    /// Full recursion tree for one word, evaluated without memoization.
    pub fn omega_trace(
        &self,
        variant: OmegaVariant,
        i: usize,
        m: i64,
        w: &Word,
        diag: &mut Diagnostics,
    ) -> Result<OmegaTrace> {
        self.cartan.check_node(i)?;
        let mut ev = Eval { engine: self, memo: HashMap::new(), diag };
        let mut t = OmegaTrace::new(i, m, w);
        t.result = ev.expand(variant, i, m, w, Some(&mut t))?;
        Ok(t)
    }

    /// Arguments in `[mlo, mhi]` where Ω does not vanish on `w`.
    pub fn omega_support(
        &self,
        variant: OmegaVariant,
        i: usize,
        w: &Word,
        mlo: i64,
        mhi: i64,
        diag: &mut Diagnostics,
    ) -> Result<Vec<i64>> {
        self.cartan.check_node(i)?;
        let mut ev = Eval { engine: self, memo: HashMap::new(), diag };
        let mut out = Vec::new();
        for m in mlo..=mhi {
            if !ev.word(variant, i, m, w)?.is_zero() {
                out.push(m);
            }
        }
        Ok(out)
    }
}
