//! The bilinear form on ordered monomials and Gram-window checks.
//!
//! `⟨ε, ε⟩ = 1`, `⟨ε, w⟩ = 0` for nonempty `w`, and
//! `⟨x_{i,m} · tail, v⟩ = ⟨tail, Ω̃_{ψ_i}(-m) v⟩`.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{Diagnostics, Engine};
use crate::error::{Error, Result};
use crate::omega::OmegaVariant;
use crate::qcoeff::{Coeff, LaurentQ};
use crate::words::{enumerate_window, Element, Word, WordWindow, DEFAULT_ENUM_CAP};

fn require_ordered(e: &Element) -> Result<()> {
    match e.unordered_words().into_iter().next() {
        Some(w) => Err(Error::NotOrdered(w)),
        None => Ok(()),
    }
}

impl Engine<'_> {
    fn pair_word(&self, u: &Word, v: &Element, diag: &mut Diagnostics) -> Result<LaurentQ> {
        let mut v = v.clone();
        for h in u.factors() {
            if v.is_zero() {
                break;
            }
            v = self.omega_unchecked(OmegaVariant::Twisted, h.node, -h.degree, &v, diag)?;
        }
        Ok(v.scalar_part())
    }

    pub fn pair(&self, u: &Element, v: &Element, diag: &mut Diagnostics) -> Result<LaurentQ> {
        require_ordered(u)?;
        require_ordered(v)?;
        let mut out = LaurentQ::zero();
        for (w, c) in u.iter() {
            out += &(c * &self.pair_word(w, v, diag)?);
        }
        Ok(out)
    }

    /// `G[a][b] = ⟨basis[a], basis[b]⟩`.
    pub fn gram(&self, basis: &[Word]) -> Result<Vec<Vec<LaurentQ>>> {
        basis
            .par_iter()
            .map(|u| {
                let mut diag = Diagnostics::default();
                let ue = Element::from_word(u.clone());
                basis.iter().map(|v| self.pair(&ue, &Element::from_word(v.clone()), &mut diag)).collect()
            })
            .collect()
    }

    pub fn check_gram_window(&self, window: &WordWindow) -> Result<GramReport> {
        let words = enumerate_window(self.cartan, window, DEFAULT_ENUM_CAP)?;
        let rows: Vec<Vec<GramRow>> = words
            .par_iter()
            .map(|u| {
                let ue = Element::from_word(u.clone());
                words
                    .iter()
                    .map(|v| {
                        let mut diag = Diagnostics::default();
                        let value = self.pair(&ue, &Element::from_word(v.clone()), &mut diag);
                        GramRow::judge(u, v, value)
                    })
                    .collect()
            })
            .collect();
        let rows: Vec<GramRow> = rows.into_iter().flatten().collect();
        let summary = GramSummary::of(&rows, &words);
        Ok(GramReport { window: window.clone(), words: words.len(), rows, summary })
    }
}

pub fn pair(engine: &Engine, u: &Element, v: &Element) -> Result<LaurentQ> {
    engine.pair(u, v, &mut Diagnostics::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// `None` when the lengths do not force vanishing.
    pub vanishing: Option<bool>,
    pub integrality: bool,
    /// `None` when the total sums differ.
    pub congruence: Option<bool>,
}

impl Verdicts {
    pub fn passed(&self) -> bool {
        self.vanishing != Some(false) && self.integrality && self.congruence != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramRow {
    pub left: Word,
    pub right: Word,
    pub value: Option<LaurentQ>,
    pub c0: Option<Coeff>,
    pub c1: Option<Coeff>,
    pub verdicts: Verdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl GramRow {
    fn judge(u: &Word, v: &Word, value: Result<LaurentQ>) -> GramRow {
        let value = match value {
            Ok(x) => x,
            Err(e) => {
                return GramRow {
                    left: u.clone(),
                    right: v.clone(),
                    value: None,
                    c0: None,
                    c1: None,
                    verdicts: Verdicts { vanishing: Some(false), integrality: false, congruence: Some(false) },
                    error: Some(e.to_string()),
                }
            }
        };
        let reduced = value.mod_q2();
        let vanishing = (u.len() > v.len()).then(|| value.is_zero());
        let integrality = value.is_int_poly() && !value.has_half_integer_exponent();
        let congruence = (u.total_sum() == v.total_sum()).then(|| {
            let expect = Coeff::from(u == v);
            reduced.is_some_and(|(c0, _)| c0 == expect)
        });
        GramRow {
            left: u.clone(),
            right: v.clone(),
            c0: reduced.map(|r| r.0),
            c1: reduced.map(|r| r.1),
            value: Some(value),
            verdicts: Verdicts { vanishing, integrality, congruence },
            error: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GramSummary {
    pub pairs: usize,
    pub vanishing_checked: usize,
    pub vanishing_failed: usize,
    pub integrality_failed: usize,
    pub congruence_checked: usize,
    pub congruence_failed: usize,
    pub errors: usize,
    /// Pairs `(u, v)` with `⟨u,v⟩ ≠ ⟨v,u⟩`, counted once per unordered pair.
    pub asymmetric: usize,
    pub failures: usize,
}

impl GramSummary {
    fn of(rows: &[GramRow], words: &[Word]) -> GramSummary {
        let mut s = GramSummary { pairs: rows.len(), ..Default::default() };
        for r in rows {
            if let Some(ok) = r.verdicts.vanishing {
                s.vanishing_checked += 1;
                s.vanishing_failed += usize::from(!ok);
            }
            s.integrality_failed += usize::from(!r.verdicts.integrality);
            if let Some(ok) = r.verdicts.congruence {
                s.congruence_checked += 1;
                s.congruence_failed += usize::from(!ok);
            }
            s.errors += usize::from(r.error.is_some());
            s.failures += usize::from(!r.verdicts.passed());
        }
        let n = words.len();
        for a in 0..n {
            for b in a + 1..n {
                if rows[a * n + b].value != rows[b * n + a].value {
                    s.asymmetric += 1;
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramReport {
    pub window: WordWindow,
    pub words: usize,
    pub rows: Vec<GramRow>,
    pub summary: GramSummary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, Family};

    fn e(p: &[(usize, i64)]) -> Element {
        Element::from_word(Word::from_pairs(p))
    }

    #[test]
    fn pair_examples() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let en = Engine::new(&a1);
        assert_eq!(pair(&en, &e(&[(1, 5)]), &e(&[(1, 5)])).unwrap(), LaurentQ::one());
        assert_eq!(pair(&en, &e(&[(1, 1), (1, 0)]), &e(&[(1, 1), (1, 0)])).unwrap(), LaurentQ::one());
        assert_eq!(pair(&en, &e(&[(1, 0), (1, 0)]), &e(&[(1, 0), (1, 0)])).unwrap(), LaurentQ::one() + LaurentQ::q(2));
        assert_eq!(pair(&en, &Element::one(), &Element::one()).unwrap(), LaurentQ::one());
        assert!(pair(&en, &Element::one(), &e(&[(1, 0)])).unwrap().is_zero());
        assert!(pair(&en, &e(&[(1, 1), (1, 0)]), &e(&[(1, 0)])).unwrap().is_zero());
        assert!(matches!(pair(&en, &e(&[(1, 0), (1, 1)]), &Element::one()), Err(Error::NotOrdered(_))));
    }

    #[test]
    fn gram_examples() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let en = Engine::new(&a1);
        assert_eq!(en.gram(&[Word::empty()]).unwrap(), vec![vec![LaurentQ::one()]]);
        assert_eq!(en.gram(&[Word::from_pairs(&[(1, 0)])]).unwrap(), vec![vec![LaurentQ::one()]]);
        let g = en.gram(&[Word::from_pairs(&[(1, 1), (1, 0)]), Word::from_pairs(&[(1, 0), (1, 0)])]).unwrap();
        assert_eq!(g[0][0].mod_q2().unwrap().0, 1);
        assert_eq!(g[1][1].mod_q2().unwrap().0, 1);
    }

    #[test]
    fn small_window_passes() {
        let a1 = build_cartan(Family::A, 1).unwrap();
        let rep = Engine::new(&a1).check_gram_window(&WordWindow::new(2, 0, 1)).unwrap();
        assert_eq!(rep.rows.len(), rep.words * rep.words);
        assert_eq!(rep.summary.failures, 0, "{:?}", rep.summary);
        assert!(rep.summary.vanishing_checked > 0 && rep.summary.congruence_checked > 0);
    }
}
