use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::star::{RewriteStep, StarCaseId};
use crate::words::{Generator, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Per-input-word rewrite budget for straightening, and per-call star
    /// budget for `xtilde`. `None` selects `16 × length × degree width`.
    pub max_steps: Option<usize>,
    /// Extra terms added to every r-sum cutoff and p-exponent search bound.
    pub cutoff_slack: i64,
    /// Keep every rewrite step for independent checking.
    pub record_steps: bool,
    /// Turn NoCase and surviving residuals into errors.
    pub strict: bool,
    /// Cache Ω̃ evaluations within one top-level call.
    pub memoize: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { max_steps: None, cutoff_slack: 0, record_steps: false, strict: false, memoize: true }
    }
}

/// Evaluation context: Cartan data plus options. Cheap to share across threads.
#[derive(Clone, Debug)]
pub struct Engine<'a> {
    pub cartan: &'a CartanData,
    pub opts: EngineOptions,
}

impl<'a> Engine<'a> {
    pub fn new(cartan: &'a CartanData) -> Self {
        Engine { cartan, opts: EngineOptions::default() }
    }

    pub fn with_options(cartan: &'a CartanData, opts: EngineOptions) -> Self {
        Engine { cartan, opts }
    }

    /// Applies the strict policy to the diagnostics gathered by one call.
    pub fn enforce(&self, diag: &Diagnostics) -> Result<()> {
        if !self.opts.strict {
            return Ok(());
        }
        if let Some(&(left, right)) = diag.no_case.iter().next() {
            return Err(Error::NoCase { left, right });
        }
        if !diag.residuals.is_empty() {
            return Err(Error::ResidualNotOrdered(diag.residuals.iter().cloned().collect()));
        }
        Ok(())
    }
}

/// Non-fatal observations collected while evaluating operators.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub case_counts: BTreeMap<StarCaseId, u64>,
    pub no_case: BTreeSet<(Generator, Generator)>,
    /// Words left with distinct-node gap-1 inversions.
    pub residuals: BTreeSet<Word>,
    pub rewrite_count: u64,
    #[serde(skip)]
    pub steps: Vec<RewriteStep>,
}

impl Diagnostics {
    pub fn merge(&mut self, other: Diagnostics) {
        for (k, v) in other.case_counts {
            *self.case_counts.entry(k).or_insert(0) += v;
        }
        self.no_case.extend(other.no_case);
        self.residuals.extend(other.residuals);
        self.rewrite_count += other.rewrite_count;
        self.steps.extend(other.steps);
    }

    pub fn is_clean(&self) -> bool {
        self.no_case.is_empty() && self.residuals.is_empty()
    }

    pub(crate) fn note_case(&mut self, id: StarCaseId) {
        *self.case_counts.entry(id).or_insert(0) += 1;
    }
}
