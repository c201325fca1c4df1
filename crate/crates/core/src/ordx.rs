//! Independent checker for recorded rewrite steps.
//!
//! A step replaces one adjacent pair inside a word by a combination of
//! pairs, leaving the prefix and suffix untouched. It is valid when the
//! difference `input pair - Σ c · output pair` is a scalar multiple of some
//! instance of the exchange relation
//!
//! ```text
//! R(i,k,j,l) = x_{i,k+1} x_{j,l} - q^{-a} x_{j,l} x_{i,k+1} - q^{-a} x_{i,k} x_{j,l+1} + x_{j,l+1} x_{i,k}
//! ```
//!
//! The candidate instances are read off the support of the difference, so
//! nothing from the rewriting code is reused.

use crate::cartan::CartanData;
use crate::qcoeff::LaurentQ;
use crate::star::RewriteStep;
use crate::words::{Element, Generator, Word};

fn pair(a: Generator, b: Generator) -> Word {
    Word::new(vec![a, b])
}

/// The relation instance `R(i,k,j,l)`, or `None` if a node is out of range.
pub fn relation(c: &CartanData, i: usize, k: i64, j: usize, l: i64) -> Option<Element> {
    let a = c.pairing_value(i, j).ok()?;
    let t = LaurentQ::q(-a);
    let x = Generator::new;
    Some(Element::from_terms([
        (pair(x(i, k + 1), x(j, l)), LaurentQ::one()),
        (pair(x(j, l), x(i, k + 1)), -t.clone()),
        (pair(x(i, k), x(j, l + 1)), -t),
        (pair(x(j, l + 1), x(i, k)), LaurentQ::one()),
    ]))
}

fn proportional(d: &Element, r: &Element) -> bool {
    let Some((w0, r0)) = r.iter().next() else { return false };
    if !d.support().eq(r.support()) {
        return false;
    }
    let d0 = d.coeff(w0);
    r.iter().all(|(w, rc)| r0 * &d.coeff(w) == &d0 * rc)
}

fn candidates(w: &Word) -> [(usize, i64, usize, i64); 4] {
    let (x, y) = (w.factors()[0], w.factors()[1]);
    [
        (x.node, x.degree - 1, y.node, y.degree),
        (y.node, y.degree - 1, x.node, x.degree),
        (x.node, x.degree, y.node, y.degree - 1),
        (y.node, y.degree, x.node, x.degree - 1),
    ]
}

/// Whether `step` is a relation instance applied at its recorded position.
pub fn check_step(c: &CartanData, step: &RewriteStep) -> bool {
    let w = &step.input;
    let pos = step.position;
    if pos + 2 > w.len() {
        return false;
    }
    let prefix = w.slice(0..pos);
    let suffix = w.slice(pos + 2..w.len());
    let mut d = Element::from_word(w.slice(pos..pos + 2));
    for (coeff, out) in &step.output {
        if out.len() != w.len() || out.slice(0..pos) != prefix || out.slice(pos + 2..out.len()) != suffix {
            return false;
        }
        d.add_term(out.slice(pos..pos + 2), &-coeff.clone());
    }
    if d.is_zero() {
        return false;
    }
    let found = d.support().any(|sw| {
        candidates(sw)
            .into_iter()
            .any(|(i, k, j, l)| relation(c, i, k, j, l).is_some_and(|r| !r.is_zero() && proportional(&d, &r)))
    });
    found
}

/// Number of steps that fail [`check_step`].
pub fn count_failures(c: &CartanData, steps: &[RewriteStep]) -> usize {
    steps.iter().filter(|s| !check_step(c, s)).count()
}
