#![allow(dead_code)]

use std::collections::BTreeSet;

use arcalg::diagrams::geometry::{qr, Point, Q};
use arcalg::diagrams::{generator_diagram, loop_around, stack, Component, Diagram, SegRef};
use arcalg::{AlgElement, Generator, LaurentPoly, Word};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Arc(u32),
    Loop(BTreeSet<usize>),
}

pub fn piece_diagram(n: usize, p: &Piece) -> Diagram {
    match p {
        Piece::Arc(i) => generator_diagram(n, *i).expect("generator exists"),
        Piece::Loop(s) => Diagram::with_components(n, vec![loop_around(n, s)]),
    }
}

pub fn stack_all(n: usize, pieces: &[Piece]) -> Diagram {
    pieces.iter().fold(Diagram::empty(n), |acc, p| stack(&acc, &piece_diagram(n, p)).expect("stackable"))
}

/// Words in the generators, given as piece lists.
pub fn random_arc_word(rng: &mut impl Rng, n: usize, len: usize) -> Vec<Piece> {
    (0..len)
        .map(|_| if n == 2 { Piece::Arc(0) } else { Piece::Arc(rng.gen_range(1..=3)) })
        .collect()
}

/// Stacks of standard arcs and loops around puncture sets on `F_{0,3}`.
pub fn random_pieces(rng: &mut impl Rng, len: usize) -> Vec<Piece> {
    let loops: [&[usize]; 4] = [&[1, 2], &[2, 3], &[1, 3], &[1]];
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.6) {
                Piece::Arc(rng.gen_range(1..=3))
            } else {
                Piece::Loop(loops[rng.gen_range(0..loops.len())].iter().copied().collect())
            }
        })
        .collect()
}

pub fn word_element(n: usize, pieces: &[Piece]) -> AlgElement {
    let gens = pieces
        .iter()
        .map(|p| match p {
            Piece::Arc(i) => Generator::alpha(*i),
            Piece::Loop(_) => panic!("not a generator"),
        })
        .collect();
    AlgElement::word(n, Word(gens))
}

/// Adds a tiny square loop around a point of a segment, over or under it at both crossings.
pub fn with_clasp(d: &Diagram, target: SegRef, loop_over: bool) -> Diagram {
    let c = &d.components[target.comp];
    let (p, q) = c.segment(target.seg);
    let u = q.sub(p);
    let w = Point::new(-u.y.clone(), u.x.clone());
    let before = d.crossings().expect("valid input").len();
    for (num, den) in [(1, 2), (1, 3), (2, 3), (2, 5), (3, 7)] {
        if let Some(out) = clasp_at(d, target, loop_over, &p.add(&u.scale(&qr(num, den))), &u, &w, before) {
            return out;
        }
    }
    panic!("no clasp fits");
}

fn clasp_at(d: &Diagram, target: SegRef, loop_over: bool, m: &Point, u: &Point, w: &Point, before: usize) -> Option<Diagram> {
    let mut h: Q = qr(1, 8);
    for _ in 0..24 {
        let hu = u.scale(&h);
        let hw = w.scale(&h);
        let sq = Component::closed(vec![
            m.sub(&hu).sub(&hw),
            m.add(&hu).sub(&hw),
            m.add(&hu).add(&hw),
            m.sub(&hu).add(&hw),
        ]);
        let mut out = d.clone();
        let k = out.components.len();
        out.components.push(sq);
        let pairs = out.intersecting_pairs();
        let new: Vec<(SegRef, SegRef)> = pairs.into_iter().filter(|(x, y)| x.comp == k || y.comp == k).collect();
        if new.len() == 2 && new.iter().all(|(x, y)| x.comp == target.comp || y.comp == target.comp) {
            for (x, y) in new {
                let (mine, other) = if x.comp == k { (x, y) } else { (y, x) };
                if loop_over {
                    out.set_over(mine, other);
                } else {
                    out.set_over(other, mine);
                }
            }
            if let Ok(cs) = out.crossings() {
                assert_eq!(cs.len(), before + 2);
                return Some(out);
            }
        }
        h /= Q::from_integer(2.into());
    }
    None
}

pub fn segments(d: &Diagram) -> Vec<SegRef> {
    d.components
        .iter()
        .enumerate()
        .flat_map(|(comp, c)| (0..c.segment_count()).map(move |seg| SegRef { comp, seg }))
        .collect()
}

pub fn d_loop(n: usize) -> LaurentPoly {
    LaurentPoly::framing_loop(n)
}
