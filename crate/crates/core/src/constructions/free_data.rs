use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::census::{Census, GAUGE_SLOT};
use crate::error::{Error, Result};
use crate::jet::{Jet, SliceJet};

/// Arbitrary functions of `n` variables and initial slices of `n − 1`
/// variables, keyed by census slot id. The gauge function of the
/// torsion-free construction is the free function under [`GAUGE_SLOT`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeData {
    pub free_functions: BTreeMap<String, Jet>,
    pub initial_slices: BTreeMap<String, SliceJet>,
}

impl FreeData {
    pub fn new() -> Self {
        Self::default()
    }

    /// All slots of the census set to zero.
    pub fn zeros(census: &Census, degree: usize) -> Self {
        let n = census.n;
        FreeData {
            free_functions: census
                .free_functions
                .iter()
                .map(|s| (s.clone(), Jet::zero(n, degree)))
                .collect(),
            initial_slices: census
                .initial_slices
                .iter()
                .map(|s| (s.clone(), SliceJet::zero(n, degree)))
                .collect(),
        }
    }

    pub fn with_function(mut self, slot: impl Into<String>, f: Jet) -> Self {
        self.free_functions.insert(slot.into(), f);
        self
    }

    pub fn with_slice(mut self, slot: impl Into<String>, s: SliceJet) -> Self {
        self.initial_slices.insert(slot.into(), s);
        self
    }

    pub fn function(&self, slot: &str) -> Result<&Jet> {
        self.free_functions
            .get(slot)
            .ok_or_else(|| Error::SlotMismatch(format!("missing free function {slot}")))
    }

    pub fn slice(&self, slot: &str) -> Result<&SliceJet> {
        self.initial_slices
            .get(slot)
            .ok_or_else(|| Error::SlotMismatch(format!("missing initial slice {slot}")))
    }

    pub fn gauge(&self) -> Option<&Jet> {
        self.free_functions.get(GAUGE_SLOT)
    }

    /// Checks that the slot sets equal the census exactly and that all jets
    /// share dimension and workspace degree. Returns the degree.
    pub fn validate(&self, census: &Census) -> Result<usize> {
        fn same_keys<V>(kind: &str, have: &BTreeMap<String, V>, want: &[String]) -> Result<()> {
            if let Some(s) = want.iter().find(|s| !have.contains_key(*s)) {
                return Err(Error::SlotMismatch(format!("missing {kind} {s}")));
            }
            if let Some(s) = have.keys().find(|s| !want.contains(s)) {
                return Err(Error::SlotMismatch(format!("unexpected {kind} {s}")));
            }
            Ok(())
        }
        same_keys(
            "free function",
            &self.free_functions,
            &census.free_functions,
        )?;
        same_keys(
            "initial slice",
            &self.initial_slices,
            &census.initial_slices,
        )?;

        let n = census.n;
        let mut degree = None;
        let mut check = |slot: &str, nvars: usize, d: usize| -> Result<()> {
            if nvars != n {
                return Err(Error::SlotMismatch(format!(
                    "slot {slot} has {nvars} variables, expected {n}"
                )));
            }
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::SlotMismatch(format!(
                        "slot {slot} has workspace degree {d}, expected {d0}"
                    )))
                }
                _ => {}
            }
            Ok(())
        };
        for (slot, f) in &self.free_functions {
            check(slot, f.nvars(), f.degree())?;
        }
        for (slot, s) in &self.initial_slices {
            check(slot, s.target_nvars(), s.degree())?;
        }
        degree.ok_or_else(|| Error::SlotMismatch("free data is empty".into()))
    }
}
