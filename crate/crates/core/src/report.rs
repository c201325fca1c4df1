//! Verification suites that are not tied to a single module, the JSON
//! envelope shared by every report, and worker-pool setup.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{Diagnostics, Engine, EngineOptions};
use crate::error::{Error, Result};
use crate::omega::OmegaVariant;
use crate::ordx;
use crate::qcoeff::LaurentQ;
use crate::star::StarCaseId;
use crate::words::{enumerate_window, Element, Generator, Word, WordWindow, DEFAULT_ENUM_CAP};

pub const SCHEMA: &str = "imcrystal/1";
pub const THREADS_ENV: &str = "IMCRYSTAL_THREADS";

/// Sizes the global worker pool from `IMCRYSTAL_THREADS` (default: all cores).
/// Returns the thread count in effect.
pub fn configure_threads() -> std::result::Result<usize, String> {
    let requested = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV}={v:?} is not a thread count"))?),
        Err(_) => None,
    };
    if let Some(n) = requested {
        // a pool built earlier in the process wins; that is fine for the CLI
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

/// Versioned wrapper written around every JSON report.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    pub algebra: String,
    pub rank: usize,
    pub report: &'a T,
}

pub fn envelope_json<T: Serialize>(engine: &Engine, command: &str, report: &T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        command,
        algebra: engine.cartan.family().map_or_else(|| "custom".to_string(), |f| f.to_string()),
        rank: engine.cartan.rank(),
        report,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serialization");
    s.push('\n');
    s
}

fn window_generators(engine: &Engine, window: &WordWindow) -> Result<Vec<Generator>> {
    let single = WordWindow { max_len: 1, ..window.clone() };
    Ok(enumerate_window(engine.cartan, &single, DEFAULT_ENUM_CAP)?.into_iter().filter_map(|w| w.head()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarRow {
    pub left: Generator,
    pub right: Generator,
    pub case: StarCaseId,
    pub result: Option<Element>,
    pub ordered: bool,
    pub integral: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StarSummary {
    pub pairs: usize,
    pub unordered: usize,
    pub non_integral: usize,
    pub no_case: usize,
    pub errors: usize,
    pub steps_checked: usize,
    pub steps_failed: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarOrderReport {
    pub window: WordWindow,
    pub rows: Vec<StarRow>,
    pub summary: StarSummary,
    pub diagnostics: Diagnostics,
}

/// Every generator pair of the window: straightened product is ordered and
/// integral, and each rewrite step is a relation instance.
pub fn verify_star_order(engine: &Engine, window: &WordWindow) -> Result<StarOrderReport> {
    let gens = window_generators(engine, window)?;
    let rec = Engine::with_options(engine.cartan, EngineOptions { record_steps: true, ..engine.opts.clone() });
    let parts: Vec<(Vec<StarRow>, Diagnostics, usize, usize)> = gens
        .par_iter()
        .map(|&a| {
            let mut diag = Diagnostics::default();
            let mut rows = Vec::new();
            for &b in &gens {
                let (_, case) = match rec.star_case(a, b) {
                    Ok(x) => x,
                    Err(e) => {
                        rows.push(StarRow::failed(a, b, StarCaseId::NoCase, e));
                        continue;
                    }
                };
                rows.push(match rec.star_pair(a, b, &mut diag) {
                    Ok(out) => StarRow {
                        left: a,
                        right: b,
                        case,
                        ordered: out.is_ordered_basis(),
                        integral: out.all_coeffs(LaurentQ::is_int_poly),
                        result: Some(out),
                        error: None,
                    },
                    Err(e) => StarRow::failed(a, b, case, e),
                });
            }
            let steps = std::mem::take(&mut diag.steps);
            let failed = ordx::count_failures(engine.cartan, &steps);
            (rows, diag, steps.len(), failed)
        })
        .collect();
    let mut rows = Vec::new();
    let mut diagnostics = Diagnostics::default();
    let mut summary = StarSummary::default();
    for (r, d, checked, failed) in parts {
        rows.extend(r);
        diagnostics.merge(d);
        summary.steps_checked += checked;
        summary.steps_failed += failed;
    }
    summary.pairs = rows.len();
    for r in &rows {
        summary.errors += usize::from(r.error.is_some());
        summary.no_case += usize::from(r.case == StarCaseId::NoCase);
        if r.error.is_none() {
            summary.unordered += usize::from(!r.ordered);
            summary.non_integral += usize::from(!r.integral);
        }
        summary.failures += usize::from(r.error.is_some() || !r.ordered || !r.integral);
    }
    summary.failures += summary.steps_failed;
    Ok(StarOrderReport { window: window.clone(), rows, summary, diagnostics })
}

impl StarRow {
    fn failed(left: Generator, right: Generator, case: StarCaseId, e: Error) -> StarRow {
        StarRow { left, right, case, result: None, ordered: false, integral: false, error: Some(e.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaRow {
    pub i: usize,
    pub m: i64,
    pub input: Word,
    pub output: Option<Element>,
    pub ordered: bool,
    pub integral: bool,
    pub length_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl OmegaRow {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.ordered && self.integral && self.length_ok
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OmegaSummary {
    pub instances: usize,
    pub unordered: usize,
    pub non_integral: usize,
    pub wrong_length: usize,
    pub errors: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaOrderReport {
    pub variant: OmegaVariant,
    pub window: WordWindow,
    pub mmin: i64,
    pub mmax: i64,
    pub rows: Vec<OmegaRow>,
    pub summary: OmegaSummary,
    pub diagnostics: Diagnostics,
}

/// Ω on every ordered word of length `l` lands on ordered words of length
/// `l - 1` with coefficients in ℤ[q].
pub fn verify_omega_order(
    engine: &Engine,
    variant: OmegaVariant,
    window: &WordWindow,
    mmin: i64,
    mmax: i64,
) -> Result<OmegaOrderReport> {
    if mmin > mmax {
        return Err(Error::InvalidWindow(format!("mmin {mmin} > mmax {mmax}")));
    }
    let words = enumerate_window(engine.cartan, window, DEFAULT_ENUM_CAP)?;
    let nodes: Vec<usize> = match &window.nodes {
        Some(n) => {
            let mut n = n.clone();
            n.sort_unstable();
            n.dedup();
            n
        }
        None => engine.cartan.nodes().collect(),
    };
    let parts: Vec<(Vec<OmegaRow>, Diagnostics)> = words
        .par_iter()
        .map(|w| {
            let mut diag = Diagnostics::default();
            let e = Element::from_word(w.clone());
            let mut rows = Vec::new();
            for &i in &nodes {
                for m in mmin..=mmax {
                    rows.push(match engine.omega(variant, i, m, &e, &mut diag) {
                        Ok(out) => {
                            let length_ok = out.support().all(|v| v.len() + 1 == w.len());
                            OmegaRow {
                                i,
                                m,
                                input: w.clone(),
                                ordered: out.is_ordered_basis(),
                                integral: out.all_coeffs(LaurentQ::is_int_poly),
                                length_ok,
                                output: Some(out),
                                error: None,
                            }
                        }
                        Err(err) => OmegaRow {
                            i,
                            m,
                            input: w.clone(),
                            output: None,
                            ordered: false,
                            integral: false,
                            length_ok: false,
                            error: Some(err.to_string()),
                        },
                    });
                }
            }
            (rows, diag)
        })
        .collect();
    let mut rows = Vec::new();
    let mut diagnostics = Diagnostics::default();
    for (r, d) in parts {
        rows.extend(r);
        diagnostics.merge(d);
    }
    let mut summary = OmegaSummary { instances: rows.len(), ..Default::default() };
    for r in &rows {
        if r.error.is_some() {
            summary.errors += 1;
        } else {
            summary.unordered += usize::from(!r.ordered);
            summary.non_integral += usize::from(!r.integral);
            summary.wrong_length += usize::from(!r.length_ok);
        }
        summary.failures += usize::from(!r.passed());
    }
    Ok(OmegaOrderReport { variant, window: window.clone(), mmin, mmax, rows, summary, diagnostics })
}
