//! Framed-curve diagrams on punctured spheres and their skein evaluation.
//!
//! A [`Diagram`] is a set of polylines with exact rational coordinates.
//! Puncture `i` sits at `(i, 0)`. Evaluation compiles the geometry into a
//! combinatorial [`State`] once and then applies the four skein relations:
//! crossing smoothing, the puncture-skein relation on height-adjacent
//! ends, and deletion of loops bounding a disk with at most one puncture.

mod eval;
pub mod geometry;
mod model;
mod stack;
mod state;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::presentations::PresentationError;
use crate::ring::LaurentPoly;

pub use eval::{evaluate, evaluate_with, EvalOptions, EvalStats, Strategy};
pub use model::{validate, Attachment, Component, Crossing, CrossingKey, Diagram, Issue, IssueKind, Puncture, SegRef, Side};
pub use stack::{generator_diagram, loop_around, stack};
pub use state::{Endpoint, PunctureEnd, State, Strand};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("invalid diagram: {}", join_issues(.0))]
    Invalid(Vec<Issue>),
    #[error("diagram format: {0}")]
    Format(String),
    #[error("classification needs at most 3 punctures, got {0}")]
    TooManyPunctures(usize),
    #[error("unknown crossing {0}")]
    UnknownCrossing(String),
    #[error("not a height-adjacent pair: {0}")]
    NotAPair(String),
    #[error("{0} crossings remain")]
    CrossingsPresent(usize),
    #[error("residual component: {0}")]
    Residual(String),
    #[error("diagrams have {0} and {1} punctures")]
    PunctureMismatch(usize, usize),
    #[error("perturbation failure: {0}")]
    Perturbation(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

fn join_issues(v: &[Issue]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<Vec<Issue>> for DiagramError {
    fn from(v: Vec<Issue>) -> Self {
        DiagramError::Invalid(v)
    }
}

/// Isotopy class of a simple arc or simple closed curve on `F_{0,n}`, `n <= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleClass {
    Arc(usize, usize),
    Loop(BTreeSet<usize>),
}

impl SimpleClass {
    /// A loop and its complement agree on the sphere; keep the side containing puncture 1.
    pub fn canonical_loop(enclosed: BTreeSet<usize>, n: usize) -> SimpleClass {
        if n == 0 || enclosed.contains(&1) {
            SimpleClass::Loop(enclosed)
        } else {
            SimpleClass::Loop((1..=n).filter(|p| !enclosed.contains(p)).collect())
        }
    }
}

impl fmt::Display for SimpleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleClass::Arc(i, j) => write!(f, "Arc({i},{j})"),
            SimpleClass::Loop(s) => {
                let v: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "Loop({{{}}})", v.join(","))
            }
        }
    }
}

/// A node of the resolution tree.
#[derive(Debug, Clone)]
pub struct WeightedState {
    pub coefficient: LaurentPoly,
    pub state: State,
}

impl WeightedState {
    pub fn from_diagram(d: &Diagram) -> Result<WeightedState, DiagramError> {
        let crossings = d.crossings()?;
        Ok(WeightedState { coefficient: LaurentPoly::one(d.n), state: State::compile(d, &crossings) })
    }
}

fn weighted(base: &LaurentPoly, pairs: [(crate::ring::Monomial, State); 2]) -> [WeightedState; 2] {
    pairs.map(|(m, state)| WeightedState { coefficient: base * LaurentPoly::term(base.arity(), 1, m), state })
}

/// Smooths the input crossing `key` both ways; the A-smoothing comes first.
pub fn resolve_crossing(ws: &WeightedState, key: &CrossingKey) -> Result<[WeightedState; 2], DiagramError> {
    let id = ws.state.crossing_id(key).ok_or_else(|| DiagramError::UnknownCrossing(key.to_string()))?;
    Ok(weighted(&ws.coefficient, ws.state.resolve_crossing(id)?))
}

/// Applies the puncture-skein relation to two height-adjacent ends; the `A^(1/2)` term comes first.
pub fn resolve_puncture_pair(ws: &WeightedState, pair: (u32, u32)) -> Result<[WeightedState; 2], DiagramError> {
    Ok(weighted(&ws.coefficient, ws.state.resolve_puncture_pair(pair.0, pair.1)?))
}

pub fn remove_trivial_loops(ws: &WeightedState) -> Result<WeightedState, DiagramError> {
    let mut state = ws.state.clone();
    let f = state.remove_trivial_loops()?;
    Ok(WeightedState { coefficient: &ws.coefficient * &f, state })
}

pub fn classify_terminal(ws: &WeightedState) -> Result<Vec<SimpleClass>, DiagramError> {
    ws.state.classify()
}
