//! Stacking product and the standard generator diagrams.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::geometry::{dist2_point_segment, q, qr, Point, Q};
use super::model::{Attachment, Component, CrossingKey, Diagram, SegRef};
use super::DiagramError;

/// Places `top` over `bottom`, with `top` strands over at every new crossing.
fn combine(bottom: &Diagram, top: &Diagram) -> Diagram {
    let k1 = bottom.components.len();
    let mut d = Diagram::empty(bottom.n);
    d.components = bottom.components.iter().chain(&top.components).cloned().collect();
    d.over_under = bottom.over_under.clone();
    for (k, side) in &top.over_under {
        let up = |s: SegRef| SegRef { comp: s.comp + k1, seg: s.seg };
        d.over_under.insert(CrossingKey { a: up(k.a), b: up(k.b) }, *side);
    }
    for (x, y) in d.intersecting_pairs() {
        let (lo, hi) = if x.comp < y.comp { (x, y) } else { (y, x) };
        if lo.comp < k1 && hi.comp >= k1 {
            d.set_over(hi, lo);
        }
    }
    d
}

/// Splits the first and last segment of each open component near its ends.
fn subdivide(d: &Diagram, eps: &Q) -> Diagram {
    let mut out = d.clone();
    for c in &mut out.components {
        if c.closed {
            continue;
        }
        let m = c.points.len();
        let p0 = &c.points[0];
        let near0 = p0.add(&c.points[1].sub(p0).scale(eps));
        let pm = &c.points[m - 1];
        let near_m = pm.add(&c.points[m - 2].sub(pm).scale(eps));
        let mut pts = vec![p0.clone(), near0];
        pts.extend(c.points[1..m - 1].iter().cloned());
        pts.push(near_m);
        pts.push(pm.clone());
        c.points = pts;
    }
    out.over_under.clear();
    out
}

fn translate_interior(d: &Diagram, t: &Point) -> Diagram {
    let mut out = d.clone();
    for c in &mut out.components {
        let m = c.points.len();
        for (i, p) in c.points.iter_mut().enumerate() {
            if c.closed || (i != 0 && i != m - 1) {
                *p = p.add(t);
            }
        }
    }
    out
}

/// Squared distance from each puncture to the segments of `d` that do not end on it.
fn clearance2(d: &Diagram) -> Option<Q> {
    let mut best: Option<Q> = None;
    for p in d.punctures() {
        let pp = p.position();
        for c in &d.components {
            for s in 0..c.segment_count() {
                let (a, b) = c.segment(s);
                if *a == pp || *b == pp {
                    continue;
                }
                let x = dist2_point_segment(a, b, &pp);
                if best.as_ref().map_or(true, |b| &x < b) {
                    best = Some(x);
                }
            }
        }
    }
    best
}

fn min_segment2(d: &Diagram) -> Option<Q> {
    d.components
        .iter()
        .flat_map(|c| (0..c.segment_count()).map(move |s| c.direction(s).norm2()))
        .min()
}

/// The stacking product: `d2` is placed entirely above `d1`.
///
/// When the union is not in general position, `d2` is perturbed by
/// splitting off short end segments and translating everything else by a
/// small rational vector, keeping its puncture attachments fixed.
pub fn stack(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    if d1.n != d2.n {
        return Err(DiagramError::PunctureMismatch(d1.n, d2.n));
    }
    if d1.components.is_empty() {
        return Ok(d2.clone());
    }
    if d2.components.is_empty() {
        return Ok(d1.clone());
    }
    d1.crossings()?;
    let own = d2.crossings()?;
    let mut top = d2.clone();
    if let (Some((_, hi)), Some((lo, _))) = (d1.height_range(), d2.height_range()) {
        top.shift_heights(hi - lo + 1);
    }
    let plain = combine(d1, &top);
    let first_issues = match plain.crossings() {
        Ok(_) => return Ok(plain),
        Err(issues) => issues,
    };

    let open: BTreeSet<usize> = top.components.iter().enumerate().filter(|(_, c)| !c.closed).map(|(i, _)| i).collect();
    let shift = |s: SegRef| if open.contains(&s.comp) { SegRef { comp: s.comp, seg: s.seg + 1 } } else { s };
    let mut eps = qr(1, 16);
    let one = Q::one();
    while own.iter().any(|c| {
        let on_end = |s: SegRef, t: &Q| {
            let comp = &top.components[s.comp];
            !comp.closed && (s.seg == 0 || s.seg + 1 == comp.segment_count()) && (t <= &eps || t >= &(&one - &eps))
        };
        on_end(c.key.a, &c.ta) || on_end(c.key.b, &c.tb)
    }) {
        eps /= q(2);
    }
    let split = subdivide(&top, &eps);
    let bound = [clearance2(&top), min_segment2(&top).map(|m| m * &eps * &eps)]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or_else(Q::one)
        / q(16);
    let dirs = [(1, 2), (2, 1), (-1, 2), (2, -1), (1, 3), (3, 1), (-3, 1), (1, -3), (2, 3), (-2, 3)];
    let mut scale = Q::one();
    for _ in 0..64 {
        for (a, b) in dirs {
            let t = Point::int(a, b).scale(&scale);
            if t.norm2() >= bound {
                continue;
            }
            let mut moved = translate_interior(&split, &t);
            for (k, side) in &top.over_under {
                let (nk, _) = CrossingKey::new(shift(k.a), shift(k.b));
                moved.over_under.insert(nk, *side);
            }
            match moved.crossings() {
                Ok(cs) if cs.len() == own.len() => {}
                _ => continue,
            }
            let cand = combine(d1, &moved);
            if cand.crossings().is_ok() {
                return Ok(cand);
            }
        }
        scale /= q(2);
    }
    let at = first_issues.first().map(|i| i.to_string()).unwrap_or_default();
    Err(DiagramError::Perturbation(at))
}

/// The standard arc for generator `index` of `F_{0,n}`: `a` for `n = 2`, `a1..a3` for `n = 3`.
pub fn generator_diagram(n: usize, index: u32) -> Option<Diagram> {
    let att = |p| Attachment { puncture: p, height: 0 };
    let arc = match (n, index) {
        (2, 0) => Component::arc(att(1), vec![], att(2)),
        (3, 1) => Component::arc(att(2), vec![], att(3)),
        (3, 2) => Component::arc(att(3), vec![Point::int(2, 1)], att(1)),
        (3, 3) => Component::arc(att(1), vec![], att(2)),
        _ => return None,
    };
    Some(Diagram::with_components(n, vec![arc]))
}

/// A counterclockwise polygon enclosing exactly the punctures in `enclosed`.
pub fn loop_around(n: usize, enclosed: &BTreeSet<usize>) -> Component {
    let half = qr(1, 2);
    let (Some(&lo), Some(&hi)) = (enclosed.first(), enclosed.last()) else {
        let (c, r) = (Point::new(Q::zero(), q(2)), qr(1, 4));
        return Component::closed(vec![
            Point::new(&c.x - &r, &c.y - &r),
            Point::new(&c.x + &r, &c.y - &r),
            Point::new(&c.x + &r, &c.y + &r),
            Point::new(&c.x - &r, &c.y + &r),
        ]);
    };
    debug_assert!(hi <= n);
    let x = |k: usize| q(k as i64);
    let mut pts = vec![Point::new(x(lo) - &half, q(-1)), Point::new(x(hi) + &half, q(-1))];
    for j in (lo..=hi).rev() {
        let y = if enclosed.contains(&j) { half.clone() } else { -half.clone() };
        for px in [x(j) + &half, x(j) - &half] {
            let p = Point::new(px, y.clone());
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
    }
    let mut simplified: Vec<Point> = Vec::new();
    for p in pts {
        while simplified.len() >= 2 {
            let k = simplified.len();
            if super::geometry::orient(&simplified[k - 2], &simplified[k - 1], &p) == std::cmp::Ordering::Equal {
                simplified.pop();
            } else {
                break;
            }
        }
        simplified.push(p);
    }
    Component::closed(simplified)
}
