use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{von_neumann_from_spectrum, MultipartiteState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Von Neumann entropy from a full eigensolve.
    ExactEigensolve,
    /// `−log₂` of an (average) purity; a lower-bound-style estimate.
    PurityEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEntry {
    pub set: Vec<String>,
    pub complement: Vec<String>,
    pub bits: f64,
    pub provenance: Provenance,
}

/// Entropies of subsystem sets of one global state.
///
/// For a pure global state a set and its complement share one entry, so
/// `S(A) = S(Ā)` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyLedger {
    universe: Vec<String>,
    pure: bool,
    entries: BTreeMap<u64, EntropyEntry>,
}

impl EntropyLedger {
    pub fn new(universe: Vec<String>, pure: bool) -> Result<Self> {
        if universe.len() > 63 {
            return Err(Error::param("universe", "at most 63 labels"));
        }
        Ok(Self {
            universe,
            pure,
            entries: BTreeMap::new(),
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    fn mask(&self, set: &[&str]) -> Result<u64> {
        set.iter().try_fold(0u64, |m, name| {
            let p = self
                .universe
                .iter()
                .position(|u| u == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            Ok(m | (1 << p))
        })
    }

    fn full(&self) -> u64 {
        (1u64 << self.universe.len()) - 1
    }

    fn key(&self, mask: u64) -> u64 {
        if self.pure {
            mask.min(self.full() & !mask)
        } else {
            mask
        }
    }

    fn names(&self, mask: u64) -> Vec<String> {
        (0..self.universe.len())
            .filter(|p| mask & (1 << p) != 0)
            .map(|p| self.universe[p].clone())
            .collect()
    }

    pub fn insert(&mut self, set: &[&str], bits: f64, provenance: Provenance) -> Result<()> {
        let key = self.key(self.mask(set)?);
        let entry = EntropyEntry {
            set: self.names(key),
            complement: self.names(self.full() & !key),
            bits,
            provenance,
        };
        self.entries.insert(key, entry);
        Ok(())
    }

    /// Entropy of `set` (order-insensitive); the empty set has entropy 0.
    pub fn get(&self, set: &[&str]) -> Result<Option<f64>> {
        let mask = self.mask(set)?;
        if mask == 0 || (self.pure && mask == self.full()) {
            return Ok(Some(0.0));
        }
        Ok(self.entries.get(&self.key(mask)).map(|e| e.bits))
    }

    pub fn require(&self, set: &[&str]) -> Result<f64> {
        self.get(set)?.ok_or_else(|| {
            Error::param(
                "set",
                format!("no entropy recorded for {{{}}}", set.join(",")),
            )
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &EntropyEntry> {
        self.entries.values()
    }

    /// Exact von Neumann entropies of every subsystem set of a pure state.
    pub fn from_pure_state(state: &MultipartiteState) -> Result<Self> {
        let universe: Vec<String> = state
            .layout()
            .names()
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut ledger = Self::new(universe, true)?;
        let full = ledger.full();
        for mask in 1..full {
            if ledger.key(mask) != mask {
                continue;
            }
            let names = ledger.names(mask);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let s = von_neumann_from_spectrum(&state.spectrum(&refs)?);
            ledger.insert(&refs, s, Provenance::ExactEigensolve)?;
        }
        Ok(ledger)
    }
}
