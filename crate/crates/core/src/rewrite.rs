//! Oriented rewriting of algebra elements.
//!
//! A rule `lhs -> rhs` replaces a subword `lhs` by the element `rhs`, whose
//! words are all strictly smaller than `lhs` in the length-lexicographic
//! order. Since that order is compatible with concatenation, every rewrite
//! step strictly decreases the support of an element in the multiset
//! extension of the order, so reduction terminates.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::freealg::{AlgElement, Word};
use crate::ring::LaurentPoly;

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;
pub const DEFAULT_DEGREE_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule has an empty left-hand side")]
    EmptyLhs,
    #[error("rule {lhs} -> ... contains {word}, which is not smaller than the left-hand side")]
    NotDecreasing { lhs: Word, word: Word },
    #[error("relation is zero")]
    ZeroRelation,
    #[error("leading coefficient {0} of the relation is not a unit")]
    NonUnitLeading(LaurentPoly),
    #[error("arity mismatch: system has {system}, element has {element}")]
    ArityMismatch { system: usize, element: usize },
    #[error("normal form did not stabilize within {0} steps")]
    StepBudget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    lhs: Word,
    rhs: AlgElement,
}

impl Rule {
    pub fn new(lhs: Word, rhs: AlgElement) -> Result<Rule, RewriteError> {
        if lhs.is_empty() {
            return Err(RewriteError::EmptyLhs);
        }
        if let Some((w, _)) = rhs.leading() {
            if *w >= lhs {
                return Err(RewriteError::NotDecreasing { lhs, word: w.clone() });
            }
        }
        Ok(Rule { lhs, rhs })
    }

    /// Orients the relation `rel = 0` with its leading word on the left.
    pub fn from_relation(rel: &AlgElement) -> Result<Rule, RewriteError> {
        let (lead, c) = rel.leading().ok_or(RewriteError::ZeroRelation)?;
        let inv = c.unit_inverse().ok_or_else(|| RewriteError::NonUnitLeading(c.clone()))?;
        let lead = lead.clone();
        let mut rest = rel.clone();
        rest.remove_term(&lead);
        let rhs = rest.scalar_mul(&(-inv)).expect("same arity");
        Rule::new(lead, rhs)
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &AlgElement {
        &self.rhs
    }

    /// `lhs - rhs`, the relation this rule encodes.
    pub fn as_relation(&self) -> AlgElement {
        &AlgElement::word(self.rhs.arity(), self.lhs.clone()) - &self.rhs
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    arity: usize,
    rules: Vec<Rule>,
    step_budget: usize,
}

/// A single rewrite step: rule index and position of its left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Redex {
    pub rule: usize,
    pub pos: usize,
}

impl RewriteSystem {
    pub fn new(arity: usize, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        if let Some(r) = rules.iter().find(|r| r.rhs.arity() != arity) {
            return Err(RewriteError::ArityMismatch { system: arity, element: r.rhs.arity() });
        }
        Ok(RewriteSystem { arity, rules, step_budget: DEFAULT_STEP_BUDGET })
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn max_lhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    fn check(&self, x: &AlgElement) -> Result<(), RewriteError> {
        if x.arity() == self.arity {
            Ok(())
        } else {
            Err(RewriteError::ArityMismatch { system: self.arity, element: x.arity() })
        }
    }

    /// Leftmost occurrence of the first rule (in rule order) matching `w`.
    pub fn find_redex(&self, w: &Word) -> Option<Redex> {
        self.rules.iter().enumerate().find_map(|(i, r)| w.find(&r.lhs).map(|pos| Redex { rule: i, pos }))
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    /// All redexes in `w`.
    pub fn redexes(&self, w: &Word) -> Vec<Redex> {
        self.rules
            .iter()
            .enumerate()
            .flat_map(|(i, r)| w.find_all(&r.lhs).map(move |pos| Redex { rule: i, pos }).collect::<Vec<_>>())
            .collect()
    }

    /// `c * u * rhs * v` where `w = u * lhs * v`.
    pub fn rewrite_word(&self, w: &Word, c: &LaurentPoly, redex: Redex) -> AlgElement {
        let rule = &self.rules[redex.rule];
        let (u, v) = w.split_around(redex.pos, rule.lhs.len());
        let mut out = AlgElement::zero(self.arity);
        for (rw, rc) in rule.rhs.terms() {
            out.add_term(u.concat(rw).concat(&v), c * rc);
        }
        out
    }

    fn apply(&self, x: &mut AlgElement, w: &Word, redex: Redex) {
        let c = x.remove_term(w).expect("word in support");
        let replacement = self.rewrite_word(w, &c, redex);
        for (rw, rc) in replacement.into_terms() {
            x.add_term(rw, rc);
        }
    }

    /// Rewrites the largest reducible word once. `None` means `x` is already normal.
    pub fn reduce_once(&self, x: &AlgElement) -> Option<AlgElement> {
        if x.arity() != self.arity {
            return None;
        }
        let (w, redex) = x.terms().rev().find_map(|(w, _)| self.find_redex(w).map(|r| (w.clone(), r)))?;
        let mut y = x.clone();
        self.apply(&mut y, &w, redex);
        Some(y)
    }

    /// Fixpoint of [`reduce_once`](Self::reduce_once).
    pub fn normal_form(&self, x: &AlgElement) -> Result<AlgElement, RewriteError> {
        self.check(x)?;
        let mut y = x.clone();
        // Words above `bound` are known normal; rewriting only introduces smaller words.
        let mut bound: Option<Word> = None;
        for _ in 0..self.step_budget {
            let next = y
                .terms()
                .rev()
                .filter(|(w, _)| bound.as_ref().map_or(true, |b| *w < b))
                .find_map(|(w, _)| self.find_redex(w).map(|r| (w.clone(), r)));
            match next {
                None => return Ok(y),
                Some((w, redex)) => {
                    self.apply(&mut y, &w, redex);
                    bound = Some(w);
                }
            }
        }
        Err(RewriteError::StepBudget(self.step_budget))
    }

    /// Normal form reached by applying uniformly random redexes.
    pub fn normal_form_randomized<R: Rng + ?Sized>(&self, x: &AlgElement, rng: &mut R) -> Result<AlgElement, RewriteError> {
        self.check(x)?;
        let mut y = x.clone();
        for _ in 0..self.step_budget {
            let mut candidates: Vec<(Word, Redex)> = Vec::new();
            for (w, _) in y.terms() {
                for r in self.redexes(w) {
                    candidates.push((w.clone(), r));
                }
            }
            if candidates.is_empty() {
                return Ok(y);
            }
            let (w, redex) = candidates.swap_remove(rng.gen_range(0..candidates.len()));
            self.apply(&mut y, &w, redex);
        }
        Err(RewriteError::StepBudget(self.step_budget))
    }

    /// Overlaps of left-hand sides with both one-step reducts.
    pub fn critical_pairs(&self, max_overlap_len: usize) -> Vec<CriticalPair> {
        let one = LaurentPoly::one(self.arity);
        let mut out = Vec::new();
        for (i, r1) in self.rules.iter().enumerate() {
            for (j, r2) in self.rules.iter().enumerate() {
                let (l1, l2) = (r1.lhs.letters(), r2.lhs.letters());
                // suffix of l1 == prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let word = Word(l1.iter().chain(&l2[k..]).copied().collect());
                    if word.len() > max_overlap_len {
                        continue;
                    }
                    out.push(CriticalPair {
                        left: self.rewrite_word(&word, &one, Redex { rule: i, pos: 0 }),
                        right: self.rewrite_word(&word, &one, Redex { rule: j, pos: l1.len() - k }),
                        rules: (i, j),
                        word,
                    });
                }
                // l2 inside l1
                if i != j && l1.len() <= max_overlap_len {
                    for pos in r1.lhs.find_all(&r2.lhs) {
                        let word = r1.lhs.clone();
                        out.push(CriticalPair {
                            left: self.rewrite_word(&word, &one, Redex { rule: i, pos: 0 }),
                            right: self.rewrite_word(&word, &one, Redex { rule: j, pos }),
                            rules: (i, j),
                            word,
                        });
                    }
                }
            }
        }
        out
    }

    /// Knuth-Bendix style completion up to a degree bound.
    ///
    /// Non-joinable critical pairs are oriented into new rules when their
    /// leading word has length at most `degree_bound` and a unit leading
    /// coefficient; anything else is reported as a failure.
    pub fn complete(&self, degree_bound: usize) -> Result<(RewriteSystem, ConfluenceReport), RewriteError> {
        const MAX_ROUNDS: usize = 64;
        let mut sys = self.clone();
        let mut added = Vec::new();
        for _ in 0..MAX_ROUNDS {
            let mut joinable = Vec::new();
            let mut failures = Vec::new();
            let mut grew = false;
            for pair in sys.critical_pairs(degree_bound) {
                let l = sys.normal_form(&pair.left)?;
                let r = sys.normal_form(&pair.right)?;
                if l == r {
                    joinable.push(pair);
                    continue;
                }
                let diff = sys.normal_form(&(&l - &r))?;
                if diff.is_zero() {
                    joinable.push(pair);
                    continue;
                }
                let (lead, c) = diff.leading().expect("nonzero");
                let reason = if lead.len() > degree_bound {
                    Some(FailureReason::ExceedsDegreeBound)
                } else if c.unit_inverse().is_none() {
                    Some(FailureReason::NonUnitLeading)
                } else {
                    None
                };
                match reason {
                    Some(reason) => failures.push(ConfluenceFailure { pair, left_nf: l, right_nf: r, difference: diff, reason }),
                    None => {
                        let rule = Rule::from_relation(&diff)?;
                        sys.rules.push(rule.clone());
                        added.push(rule);
                        grew = true;
                    }
                }
            }
            if !grew {
                let report = ConfluenceReport { degree_bound, joinable, failures, added };
                return Ok((sys, report));
            }
        }
        Err(RewriteError::StepBudget(MAX_ROUNDS))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub word: Word,
    pub left: AlgElement,
    pub right: AlgElement,
    pub rules: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    ExceedsDegreeBound,
    NonUnitLeading,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceFailure {
    pub pair: CriticalPair,
    pub left_nf: AlgElement,
    pub right_nf: AlgElement,
    pub difference: AlgElement,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub degree_bound: usize,
    pub joinable: Vec<CriticalPair>,
    pub failures: Vec<ConfluenceFailure>,
    /// Rules added by completion, in the order they were oriented.
    pub added: Vec<Rule>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ConfluenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree-bound\t{}", self.degree_bound)?;
        writeln!(f, "joinable\t{}", self.joinable.len())?;
        writeln!(f, "failures\t{}", self.failures.len())?;
        writeln!(f, "added\t{}", self.added.len())?;
        for r in &self.added {
            writeln!(f, "rule\t{}", r)?;
        }
        for fl in &self.failures {
            writeln!(f, "failure\t{}\t{:?}\t{}", fl.pair.word, fl.reason, fl.difference)?;
        }
        Ok(())
    }
}

/// Multiset-order comparison of supports: true when `after` is strictly
/// smaller than `before` in the multiset extension of the word order.
pub fn support_decreases(before: &AlgElement, after: &AlgElement) -> bool {
    let b: BTreeSet<Word> = before.support();
    let a: BTreeSet<Word> = after.support();
    if a == b {
        return false;
    }
    let removed: Vec<&Word> = b.difference(&a).collect();
    a.difference(&b).all(|w| removed.iter().any(|r| *r > w))
}
