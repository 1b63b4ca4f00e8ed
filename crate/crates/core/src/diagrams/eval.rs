//! Exhaustive skein resolution of a diagram into the presented algebra.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::state::State;
use super::{Diagram, DiagramError, SimpleClass};
use crate::freealg::{AlgElement, Generator, Word};
use crate::presentations::{algebra_for, Surface};
use crate::ring::{LaurentPoly, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Lowest crossing first, then punctures in index order with the lowest adjacent pair first.
    #[default]
    Canonical,
    /// Any available step, chosen by a generator seeded per tree node.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub strategy: Strategy,
    pub jobs: usize,
    /// Skip the final normal form; the result is then a sum of words in the generators.
    pub raw: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { strategy: Strategy::Canonical, jobs: 1, raw: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalStats {
    /// Terminal states of the resolution tree.
    pub leaves: u64,
    /// Resolution steps taken.
    pub steps: u64,
}

impl EvalStats {
    fn merge(self, o: EvalStats) -> EvalStats {
        EvalStats { leaves: self.leaves + o.leaves, steps: self.steps + o.steps }
    }
}

enum Step {
    Crossing(u32),
    Pair(u32, u32),
}

fn available(s: &State) -> Vec<Step> {
    let mut v: Vec<Step> = s.crossing_ids().map(Step::Crossing).collect();
    for p in 1..=s.n() {
        v.extend(s.adjacent_pairs(p).into_iter().map(|(a, b)| Step::Pair(a, b)));
    }
    v
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn choose(s: &State, strategy: Strategy, seed: u64) -> Option<Step> {
    let mut steps = available(s);
    if steps.is_empty() {
        return None;
    }
    let i = match strategy {
        Strategy::Canonical => 0,
        Strategy::Random(_) => StdRng::seed_from_u64(seed).gen_range(0..steps.len()),
    };
    Some(steps.swap_remove(i))
}

fn word_for(n: usize, classes: &[SimpleClass]) -> Result<Word, DiagramError> {
    classes
        .iter()
        .map(|c| match (n, c) {
            (2, SimpleClass::Arc(_, _)) => Ok(Generator::alpha(0)),
            (3, SimpleClass::Arc(i, j)) => Ok(Generator::alpha((6 - i - j) as u32)),
            _ => Err(DiagramError::Residual(format!("{c} has no generator"))),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}

struct Ctx {
    n: usize,
    strategy: Strategy,
    parallel_depth: u32,
}

fn expand(ctx: &Ctx, mut s: State, coeff: Monomial, seed: u64, depth: u32) -> Result<(AlgElement, EvalStats), DiagramError> {
    let Some(step) = choose(&s, ctx.strategy, seed) else {
        let f = s.remove_trivial_loops()?;
        let classes = s.classify()?;
        let c = LaurentPoly::term(ctx.n, 1, coeff) * f;
        let x = AlgElement::monomial(c, word_for(ctx.n, &classes)?);
        return Ok((x, EvalStats { leaves: 1, steps: 0 }));
    };
    let before = s.measure();
    let children = match step {
        Step::Crossing(c) => s.resolve_crossing(c)?,
        Step::Pair(a, b) => s.resolve_puncture_pair(a, b)?,
    };
    let [(m0, s0), (m1, s1)] = children;
    assert!(s0.measure() < before && s1.measure() < before, "termination measure must decrease");
    let (seed0, seed1) = (splitmix(seed ^ 1), splitmix(seed ^ 2));
    let left = || expand(ctx, s0, coeff.mul(&m0), seed0, depth + 1);
    let right = || expand(ctx, s1, coeff.mul(&m1), seed1, depth + 1);
    let (l, r) = if depth < ctx.parallel_depth { rayon::join(left, right) } else { (left(), right()) };
    let (l, ls) = l?;
    let (r, rs) = r?;
    Ok((l + r, ls.merge(rs).merge(EvalStats { leaves: 0, steps: 1 })))
}

/// Evaluates a diagram on `F_{0,n}` with the canonical strategy.
pub fn evaluate(d: &Diagram) -> Result<AlgElement, DiagramError> {
    evaluate_with(d, &EvalOptions::default()).map(|(x, _)| x)
}

pub fn evaluate_with(d: &Diagram, opts: &EvalOptions) -> Result<(AlgElement, EvalStats), DiagramError> {
    let crossings = d.crossings()?;
    if d.n > 3 {
        return Err(DiagramError::TooManyPunctures(d.n));
    }
    let state = State::compile(d, &crossings);
    let seed = match opts.strategy {
        Strategy::Canonical => 0,
        Strategy::Random(s) => s,
    };
    let jobs = opts.jobs.max(1);
    let ctx = Ctx { n: d.n, strategy: opts.strategy, parallel_depth: if jobs > 1 { 10 } else { 0 } };
    let one = Monomial::one(d.n);
    let (raw, stats) = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| DiagramError::Format(e.to_string()))?;
        pool.install(|| expand(&ctx, state, one, seed, 0))?
    } else {
        expand(&ctx, state, one, seed, 0)?
    };
    if opts.raw || d.n < 2 {
        return Ok((raw, stats));
    }
    let alg = algebra_for(Surface { genus: 0, punctures: d.n as u32 })?;
    Ok((alg.nf(&raw)?, stats))
}
