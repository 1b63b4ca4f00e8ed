use std::collections::{BTreeMap, VecDeque};

use arcalg::expr::parse_expression;
use arcalg::presentations::{algebra_for_variant, TorusVariant};
use arcalg::rewrite::{support_decreases, RewriteError, RewriteSystem, Rule};
use arcalg::{algebra_for, AlgElement, Generator, LaurentPoly, Surface, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn parse(s: Surface, text: &str) -> AlgElement {
    parse_expression(text, &s.generators(), s.arity()).unwrap()
}

/// Every single-step rewrite of `x`: any rule, any term, any position.
fn successors(sys: &RewriteSystem, x: &AlgElement) -> Vec<AlgElement> {
    let mut out = Vec::new();
    for (w, c) in x.terms() {
        let letters = w.letters();
        for rule in sys.rules() {
            let l = rule.lhs().letters();
            if l.len() > letters.len() {
                continue;
            }
            for pos in 0..=letters.len() - l.len() {
                if &letters[pos..pos + l.len()] != l {
                    continue;
                }
                let pre = AlgElement::word(x.arity(), Word(letters[..pos].to_vec()));
                let post = AlgElement::word(x.arity(), Word(letters[pos + l.len()..].to_vec()));
                let old = AlgElement::monomial(c.clone(), w.clone());
                let new = c * &(&(&pre * rule.rhs()) * &post);
                out.push(&(x - &old) + &new);
            }
        }
    }
    out
}

/// All irreducible elements reachable from `x` under every rewrite order.
fn all_order_normal_forms(sys: &RewriteSystem, x: &AlgElement) -> BTreeMap<String, AlgElement> {
    let mut seen = BTreeMap::new();
    let mut terminal = BTreeMap::new();
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        if seen.insert(y.to_string(), ()).is_some() {
            continue;
        }
        assert!(seen.len() < 50_000, "search space too large");
        let next = successors(sys, &y);
        if next.is_empty() {
            terminal.insert(y.to_string(), y);
        }
        queue.extend(next);
    }
    terminal
}

#[test]
fn triple_product_in_every_order() {
    let s = Surface::SPHERE_3;
    let alg = algebra_for(s).unwrap();
    let expected = parse(s, "v1^-1*v2^-1*v3^-1*(A^(1/2)+A^(-1/2))^3");
    for text in ["a1*a2*a3", "a3*a2*a1", "a2*a1*a3", "a1*a1*a2"] {
        let x = parse(s, text);
        let forms = all_order_normal_forms(&alg.system, &x);
        assert_eq!(forms.len(), 1, "{text} has several normal forms");
        let nf = alg.nf(&x).unwrap();
        assert_eq!(forms.values().next().unwrap(), &nf);
        if text.starts_with("a1*a2*a3") {
            assert_eq!(nf, expected);
        }
    }
    assert_eq!(alg.nf(&parse(s, "a1*a1*a2")).unwrap(), parse(s, "v2^-1*v3^-1*(A^(1/2)+A^(-1/2))^2*a2"));
}

#[test]
fn torus_commutation() {
    let s = Surface::TORUS_1;
    let alg = algebra_for(s).unwrap();
    let x = parse(s, "g2*g1");
    let expected = parse(s, "A^2*g1*g2 - A*(A^2 - A^-2)*g3");
    assert_eq!(alg.nf(&x).unwrap(), expected);
    let forms = all_order_normal_forms(&alg.system, &x);
    assert_eq!(forms.into_values().collect::<Vec<_>>(), vec![expected]);
    let forms = all_order_normal_forms(&alg.system, &parse(s, "g3*g2*g1"));
    assert_eq!(forms.len(), 1);
}

fn sphere_words() -> impl Strategy<Value = AlgElement> {
    prop::collection::vec((prop::collection::vec(1u32..=3, 0..6), -3i64..=3), 1..4).prop_map(|ts| {
        AlgElement::from_terms(3, ts.into_iter().map(|(ix, c)| (Word(ix.into_iter().map(Generator::alpha).collect()), LaurentPoly::constant(3, c))))
    })
}

fn torus_words() -> impl Strategy<Value = AlgElement> {
    prop::collection::vec((prop::collection::vec(1u32..=3, 0..5), -2i64..=2), 1..4).prop_map(|ts| {
        AlgElement::from_terms(1, ts.into_iter().map(|(ix, c)| (Word(ix.into_iter().map(Generator::gamma).collect()), LaurentPoly::a_pow(1, c))))
    })
}

fn check_reduction(sys: &RewriteSystem, x: &AlgElement, seed: u64) -> Result<(), TestCaseError> {
    let nf = sys.normal_form(x).unwrap();
    prop_assert_eq!(sys.normal_form(&nf).unwrap(), nf.clone());
    prop_assert!(nf.terms().all(|(w, _)| sys.is_normal_word(w)));
    let mut y = x.clone();
    while let Some(z) = sys.reduce_once(&y) {
        prop_assert!(support_decreases(&y, &z) || z.support() == y.support() && z != y);
        y = z;
    }
    prop_assert_eq!(&y, &nf);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    prop_assert_eq!(sys.normal_form_randomized(x, &mut rng).unwrap(), nf);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sphere_reduction_properties(x in sphere_words(), seed in any::<u64>()) {
        check_reduction(&algebra_for(Surface::SPHERE_3).unwrap().system, &x, seed)?;
    }

    #[test]
    fn torus_reduction_properties(x in torus_words(), seed in any::<u64>()) {
        check_reduction(&algebra_for(Surface::TORUS_1).unwrap().system, &x, seed)?;
    }
}

#[test]
fn every_single_step_shrinks_support() {
    let alg = algebra_for(Surface::SPHERE_3).unwrap();
    let x = parse(Surface::SPHERE_3, "a1*a2*a3*a1 + a2*a2 - a3");
    let mut y = x;
    let mut steps = 0;
    while let Some(z) = alg.system.reduce_once(&y) {
        assert!(support_decreases(&y, &z), "{y} -> {z}");
        y = z;
        steps += 1;
    }
    assert!(steps >= 3);
}

#[test]
fn critical_pairs_join() {
    let s = Surface::SPHERE_3;
    let alg = algebra_for(s).unwrap();
    let pairs = alg.system.critical_pairs(3);
    assert!(!pairs.is_empty());
    for p in &pairs {
        assert_eq!(alg.nf(&p.left).unwrap(), alg.nf(&p.right).unwrap(), "overlap {}", p.word);
    }
    let w = parse(s, "a1*a1*a2");
    let p = pairs.iter().find(|p| AlgElement::word(3, p.word.clone()) == w).expect("overlap a1 a1 a2");
    assert_eq!(alg.nf(&p.left).unwrap(), parse(s, "v2^-1*v3^-1*(A^(1/2)+A^(-1/2))^2*a2"));
}

#[test]
fn sphere_systems_are_confluent() {
    for s in [Surface::SPHERE_2, Surface::SPHERE_3] {
        let (_, report) = algebra_for(s).unwrap().system.complete(6).unwrap();
        assert!(report.failures.is_empty(), "{s}: {report}");
        assert!(report.added.is_empty());
        assert!(!report.joinable.is_empty());
    }
}

#[test]
fn torus_completion() {
    let alg = algebra_for_variant(Surface::TORUS_1, TorusVariant::Cyclic).unwrap();
    let (sys, report) = alg.defining.complete(6).unwrap();
    assert!(!report.added.is_empty());
    assert_eq!(sys, alg.system);
    assert!(report.failures.is_empty(), "{report}");
    let (_, again) = sys.complete(6).unwrap();
    assert!(again.added.is_empty() && again.failures.is_empty());
}

#[test]
fn malformed_rules() {
    let s = Surface::SPHERE_3;
    assert_eq!(Rule::new(Word::one(), AlgElement::zero(3)), Err(RewriteError::EmptyLhs));
    let a1 = Word(vec![Generator::alpha(1)]);
    assert!(matches!(Rule::new(a1, parse(s, "a1*a2")), Err(RewriteError::NotDecreasing { .. })));
    assert!(matches!(Rule::from_relation(&parse(s, "2*a1*a2 - a3")), Err(RewriteError::NonUnitLeading(_))));
    assert_eq!(Rule::from_relation(&AlgElement::zero(3)), Err(RewriteError::ZeroRelation));
}

#[test]
fn step_budget() {
    let s = Surface::SPHERE_3;
    let sys = algebra_for(s).unwrap().system.with_step_budget(1);
    assert_eq!(sys.normal_form(&parse(s, "a1*a2*a3")), Err(RewriteError::StepBudget(1)));
}
