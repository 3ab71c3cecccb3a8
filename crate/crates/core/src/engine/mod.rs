//! Untangling engines and their shared reporting.

pub mod bichromatic;
pub mod matching;
pub mod tree;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{apply_flip, is_plane, Edge, FlipGraph, FlipStep, Trace};

/// Flip count of one sub-procedure call, with the bound it must respect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subcall {
    pub kind: &'static str,
    pub flips: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineReport<G> {
    pub engine: &'static str,
    pub flips_used: usize,
    /// The engine's worst-case bound evaluated on this instance.
    pub bound_value: f64,
    pub trace: Trace,
    pub plane: bool,
    #[serde(skip)]
    pub final_state: G,
    pub subcalls: Vec<Subcall>,
}

impl<G: FlipGraph> EngineReport<G> {
    pub(crate) fn from_recorder(engine: &'static str, bound_value: f64, rec: Recorder<G>) -> Self {
        let plane = is_plane(&rec.state);
        EngineReport {
            engine,
            flips_used: rec.trace.len(),
            bound_value,
            trace: rec.trace,
            plane,
            final_state: rec.state,
            subcalls: rec.subcalls,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.flips_used as f64 <= self.bound_value.ceil()
    }

    /// Fails with [`Error::BoundViolation`] if the flip count exceeds the bound.
    pub fn check_bound(&self) -> Result<()> {
        if self.within_bound() {
            Ok(())
        } else {
            Err(Error::BoundViolation {
                engine: self.engine.into(),
                flips: self.flips_used,
                bound: self.bound_value,
            })
        }
    }
}

/// Applies engine-chosen flips to a state through [`apply_flip`], so every
/// recorded step has been checked for legality.
pub(crate) struct Recorder<G> {
    pub state: G,
    pub trace: Trace,
    pub subcalls: Vec<Subcall>,
}

impl<G: FlipGraph> Recorder<G> {
    pub fn new(state: G) -> Self {
        let trace = Trace::start(&state);
        Recorder { state, trace, subcalls: Vec::new() }
    }

    pub fn flip(&mut self, removed: [Edge; 2], added: [Edge; 2], rule: &str) -> Result<()> {
        let step = FlipStep::new(self.state.points(), removed, added, rule)
            .map_err(|e| Error::EngineInvariant(format!("{rule}: {e}")))?;
        let next = apply_flip(&self.state, &step)
            .map_err(|e| Error::EngineInvariant(format!("{rule}: {e}")))?;
        self.trace.push(step, &next);
        self.state = next;
        Ok(())
    }

    /// Flips a pair that has exactly one legal replacement and returns it.
    pub fn flip_forced(&mut self, e1: Edge, e2: Edge, rule: &str) -> Result<[Edge; 2]> {
        let cands = self
            .state
            .candidates(e1, e2)
            .map_err(|e| Error::EngineInvariant(format!("{rule}: {e}")))?;
        if cands.len() != 1 {
            return Err(Error::EngineInvariant(format!(
                "{rule}: expected one replacement for {e1:?} x {e2:?}, found {}",
                cands.len()
            )));
        }
        self.flip([e1, e2], cands[0], rule)?;
        Ok(cands[0])
    }

    pub fn flips(&self) -> usize {
        self.trace.len()
    }

    pub fn subcall(&mut self, kind: &'static str, flips: usize, bound: usize) -> Result<()> {
        if flips > bound {
            return Err(Error::EngineInvariant(format!("{kind} used {flips} flips, bound {bound}")));
        }
        self.subcalls.push(Subcall { kind, flips, bound });
        Ok(())
    }
}

pub(crate) fn binomial2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}
