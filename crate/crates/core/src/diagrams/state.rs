//! Combinatorial resolution states.
//!
//! A compiled diagram keeps only what the skein relations need: crossings
//! with four ports in counterclockwise order (ports 0 and 2 on the over
//! strand), puncture ends with their exact outgoing direction and height,
//! and strands between these endpoints. Every strand carries its signed
//! crossing count with a fixed ray from each puncture, so winding numbers
//! of closed curves are exact sums.

use std::collections::{BTreeMap, BTreeSet};

use super::geometry::{angle_cmp, ccw_strictly_between, cross, ray_crossing, relative, same_direction, Point, Q};
use super::model::{Crossing, CrossingKey, Diagram, SegRef};
use super::{DiagramError, SimpleClass};
use crate::ring::{LaurentPoly, Monomial};

use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Port(u32, u8),
    End(u32),
    Joint(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub from: Endpoint,
    pub to: Endpoint,
    pub winding: Vec<i64>,
}

impl Strand {
    fn reversed(self) -> Strand {
        Strand { from: self.to, to: self.from, winding: self.winding.into_iter().map(|w| -w).collect() }
    }
}

/// A strand end sitting on a puncture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctureEnd {
    pub puncture: usize,
    pub dir: Point,
    pub height: i64,
}

#[derive(Debug, Clone)]
pub struct State {
    n: usize,
    rays: Vec<Point>,
    crossings: BTreeMap<u32, Option<CrossingKey>>,
    ends: BTreeMap<u32, PunctureEnd>,
    strands: Vec<Strand>,
    loops: Vec<Vec<i64>>,
    next_crossing: u32,
}

fn add_into(acc: &mut [i64], w: &[i64]) {
    for (a, b) in acc.iter_mut().zip(w) {
        *a += b;
    }
}

fn point_at(d: &Diagram, s: SegRef, t: &Q) -> Point {
    let (a, b) = d.components[s.comp].segment(s.seg);
    a.add(&b.sub(a).scale(t))
}

/// Picks, for each puncture, a ray direction missing every given point.
fn choose_rays(d: &Diagram, obstacles: &BTreeSet<Point>) -> Vec<Point> {
    let mut candidates = Vec::new();
    for k in 1i64..=64 {
        for a in -k..=k {
            for b in [k, -k] {
                candidates.push(Point::int(a, b));
                candidates.push(Point::int(b, a));
            }
        }
    }
    d.punctures()
        .map(|p| {
            let o = p.position();
            candidates
                .iter()
                .find(|r| obstacles.iter().all(|v| *v == o || !same_direction(r, &v.sub(&o))))
                .cloned()
                .expect("a ray direction avoids finitely many points")
        })
        .collect()
}

impl State {
    /// Builds the state of a validated diagram from its crossing list.
    pub fn compile(d: &Diagram, crossings: &[Crossing]) -> State {
        let n = d.n;
        let mut obstacles: BTreeSet<Point> = d.components.iter().flat_map(|c| c.points.iter().cloned()).collect();
        obstacles.extend(crossings.iter().map(|c| c.point.clone()));
        obstacles.extend(d.punctures().map(|p| p.position()));
        let rays = choose_rays(d, &obstacles);
        let origins: Vec<Point> = d.punctures().map(|p| p.position()).collect();

        let winding_of = |pts: &[Point]| -> Vec<i64> {
            (0..n)
                .map(|p| pts.windows(2).map(|w| ray_crossing(&origins[p], &rays[p], &w[0], &w[1])).sum())
                .collect()
        };

        // (arrive, leave) ports for each crossing on each of its segments
        let mut events: BTreeMap<usize, Vec<(usize, Q, u32, u8, u8)>> = BTreeMap::new();
        for (id, c) in crossings.iter().enumerate() {
            let o = c.over_seg();
            let u = c.under_seg();
            let d_o = d.components[o.comp].direction(o.seg);
            let d_u = d.components[u.comp].direction(u.seg);
            let (u_fwd, u_bwd) = if cross(&d_o, &d_u).is_positive() { (1, 3) } else { (3, 1) };
            events.entry(o.comp).or_default().push((o.seg, c.param(o).clone(), id as u32, 2, 0));
            events.entry(u.comp).or_default().push((u.seg, c.param(u).clone(), id as u32, u_bwd, u_fwd));
        }

        let mut state = State {
            n,
            rays: rays.clone(),
            crossings: crossings.iter().enumerate().map(|(i, c)| (i as u32, Some(c.key))).collect(),
            ends: BTreeMap::new(),
            strands: Vec::new(),
            loops: Vec::new(),
            next_crossing: crossings.len() as u32,
        };

        let mut next_end = 0u32;
        for (ci, comp) in d.components.iter().enumerate() {
            let m = comp.points.len();
            let mut evs = events.remove(&ci).unwrap_or_default();
            evs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            // path between two positions given as (segment, parameter)
            let path = |s1: usize, t1: &Q, s2: usize, t2: &Q, full: bool| -> Vec<Point> {
                let mut pts = vec![point_at(d, SegRef { comp: ci, seg: s1 }, t1)];
                let segs = comp.segment_count();
                let steps = if s1 == s2 && t2 > t1 && !full { 0 } else { (s2 + segs - s1) % segs };
                let steps = if steps == 0 && (full || (s1 == s2 && t2 <= t1)) { segs } else { steps };
                for k in 1..=steps {
                    pts.push(comp.points[(s1 + k) % m].clone());
                }
                pts.push(point_at(d, SegRef { comp: ci, seg: s2 }, t2));
                pts
            };
            if comp.closed {
                if evs.is_empty() {
                    let mut pts = comp.points.clone();
                    pts.push(comp.points[0].clone());
                    state.loops.push(winding_of(&pts));
                    continue;
                }
                let k = evs.len();
                for i in 0..k {
                    let (s1, t1, c1, _, leave) = &evs[i];
                    let (s2, t2, c2, arrive, _) = &evs[(i + 1) % k];
                    let pts = path(*s1, t1, *s2, t2, k == 1);
                    state.strands.push(Strand { from: Endpoint::Port(*c1, *leave), to: Endpoint::Port(*c2, *arrive), winding: winding_of(&pts) });
                }
            } else {
                let start = comp.start.expect("validated");
                let end = comp.end.expect("validated");
                let e0 = next_end;
                let e1 = next_end + 1;
                next_end += 2;
                state.ends.insert(e0, PunctureEnd { puncture: start.puncture, dir: comp.points[1].sub(&comp.points[0]), height: start.height });
                state.ends.insert(e1, PunctureEnd { puncture: end.puncture, dir: comp.points[m - 2].sub(&comp.points[m - 1]), height: end.height });
                let last = comp.segment_count() - 1;
                let mut from = Endpoint::End(e0);
                let mut pos = (0usize, Q::zero());
                for (s, t, c, arrive, leave) in evs {
                    let pts = path(pos.0, &pos.1, s, &t, false);
                    state.strands.push(Strand { from, to: Endpoint::Port(c, arrive), winding: winding_of(&pts) });
                    from = Endpoint::Port(c, leave);
                    pos = (s, t);
                }
                let pts = path(pos.0, &pos.1, last, &Q::one(), false);
                state.strands.push(Strand { from, to: Endpoint::End(e1), winding: winding_of(&pts) });
            }
        }
        state
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossing_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.crossings.keys().copied()
    }

    /// The state id of an input crossing.
    pub fn crossing_id(&self, key: &CrossingKey) -> Option<u32> {
        self.crossings.iter().find(|(_, k)| k.as_ref() == Some(key)).map(|(id, _)| *id)
    }

    pub fn end_count(&self) -> usize {
        self.ends.len()
    }

    pub fn end(&self, id: u32) -> Option<&PunctureEnd> {
        self.ends.get(&id)
    }

    pub fn loops(&self) -> &[Vec<i64>] {
        &self.loops
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    /// Ends at puncture `p`, lowest first.
    pub fn ends_at(&self, p: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.ends.iter().filter(|(_, e)| e.puncture == p).map(|(id, _)| *id).collect();
        v.sort_by_key(|id| self.ends[id].height);
        v
    }

    /// Height-adjacent pairs at `p`, lowest pair first.
    pub fn adjacent_pairs(&self, p: usize) -> Vec<(u32, u32)> {
        self.ends_at(p).windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// `(puncture-end count, crossing count)`, which every resolution step lowers.
    pub fn measure(&self) -> (usize, usize) {
        (self.ends.len(), self.crossings.len())
    }

    fn strand_at(&self, e: Endpoint) -> usize {
        self.strands
            .iter()
            .position(|s| s.from == e || s.to == e)
            .unwrap_or_else(|| panic!("no strand at {e:?}"))
    }

    /// Connects the strand ending at `a` to the strand starting at `b`.
    fn join(&mut self, a: Endpoint, b: Endpoint, extra: &[i64]) {
        let i = self.strand_at(a);
        let si = self.strands.swap_remove(i);
        let si = if si.to == a { si } else { si.reversed() };
        if si.from == b {
            let mut w = si.winding;
            add_into(&mut w, extra);
            self.loops.push(w);
            return;
        }
        let j = self.strand_at(b);
        let sj = self.strands.swap_remove(j);
        let sj = if sj.from == b { sj } else { sj.reversed() };
        let mut w = si.winding;
        add_into(&mut w, &sj.winding);
        add_into(&mut w, extra);
        self.strands.push(Strand { from: si.from, to: sj.to, winding: w });
    }

    fn replace_endpoint(&mut self, old: Endpoint, new: Endpoint) {
        let i = self.strand_at(old);
        let s = &mut self.strands[i];
        if s.from == old {
            s.from = new;
        } else {
            s.to = new;
        }
    }

    /// Both smoothings of crossing `c`: the A-smoothing first.
    pub fn resolve_crossing(&self, c: u32) -> Result<[(Monomial, State); 2], DiagramError> {
        if !self.crossings.contains_key(&c) {
            return Err(DiagramError::UnknownCrossing(c.to_string()));
        }
        let zero = vec![0; self.n];
        let smooth = |pairs: [(u8, u8); 2]| {
            let mut s = self.clone();
            s.crossings.remove(&c);
            for (x, y) in pairs {
                s.join(Endpoint::Port(c, x), Endpoint::Port(c, y), &zero);
            }
            s
        };
        let a = Monomial { half_a: 2, vexp: vec![0; self.n] };
        let b = Monomial { half_a: -2, vexp: vec![0; self.n] };
        Ok([(a, smooth([(1, 2), (3, 0)])), (b, smooth([(0, 1), (2, 3)]))])
    }

    /// Both puncture-skein resolutions of the height-adjacent ends `lo < hi`.
    ///
    /// The `A^(1/2)` state detours so that the higher strand turns left
    /// when walking into the puncture: counterclockwise from `lo` to `hi`.
    pub fn resolve_puncture_pair(&self, lo: u32, hi: u32) -> Result<[(Monomial, State); 2], DiagramError> {
        let (el, eh) = match (self.ends.get(&lo), self.ends.get(&hi)) {
            (Some(a), Some(b)) if a.puncture == b.puncture => (a.clone(), b.clone()),
            _ => return Err(DiagramError::NotAPair(format!("ends {lo} and {hi}"))),
        };
        let (el, eh, lo, hi) = if el.height < eh.height { (el, eh, lo, hi) } else { (eh, el, hi, lo) };
        let p = el.puncture;
        if !self.adjacent_pairs(p).contains(&(lo, hi)) {
            return Err(DiagramError::NotAPair(format!("ends at heights {} and {} on puncture {p} are not adjacent", el.height, eh.height)));
        }
        let ray = &self.rays[p - 1];
        let mut out = Vec::with_capacity(2);
        for ccw in [true, false] {
            let mut s = self.clone();
            let mut swept: Vec<(u32, PunctureEnd)> = self
                .ends
                .iter()
                .filter(|(id, e)| {
                    e.puncture == p
                        && **id != lo
                        && **id != hi
                        && if ccw { ccw_strictly_between(&el.dir, &e.dir, &eh.dir) } else { ccw_strictly_between(&eh.dir, &e.dir, &el.dir) }
                })
                .map(|(id, e)| (*id, e.clone()))
                .collect();
            swept.sort_by(|a, b| angle_cmp(&relative(&el.dir, &a.1.dir), &relative(&el.dir, &b.1.dir)));
            if !ccw {
                swept.reverse();
            }
            let mut angles = vec![el.dir.clone()];
            angles.extend(swept.iter().map(|(_, e)| e.dir.clone()));
            angles.push(eh.dir.clone());

            // (enter, leave) ports on each new crossing along the detour
            let mut gates = Vec::new();
            for (id, e) in &swept {
                let c = s.next_crossing;
                s.next_crossing += 1;
                s.crossings.insert(c, None);
                let detour_over = e.height < el.height;
                let (outward, ccw_t, inward, cw_t) = if detour_over { (3, 0, 1, 2) } else { (0, 1, 2, 3) };
                s.replace_endpoint(Endpoint::End(*id), Endpoint::Port(c, outward));
                s.strands.push(Strand { from: Endpoint::Port(c, inward), to: Endpoint::End(*id), winding: vec![0; self.n] });
                gates.push(if ccw { (c, cw_t, ccw_t) } else { (c, ccw_t, cw_t) });
            }
            let mut from = Endpoint::Joint(0);
            for m in 0..angles.len() - 1 {
                let to = match gates.get(m) {
                    Some(&(c, enter, _)) => Endpoint::Port(c, enter),
                    None => Endpoint::Joint(1),
                };
                let mut w = vec![0; self.n];
                if ccw && ccw_strictly_between(&angles[m], ray, &angles[m + 1]) {
                    w[p - 1] = 1;
                } else if !ccw && ccw_strictly_between(&angles[m + 1], ray, &angles[m]) {
                    w[p - 1] = -1;
                }
                s.strands.push(Strand { from, to, winding: w });
                if let Some(&(c, _, leave)) = gates.get(m) {
                    from = Endpoint::Port(c, leave);
                }
            }
            let zero = vec![0; self.n];
            s.join(Endpoint::End(lo), Endpoint::Joint(0), &zero);
            s.join(Endpoint::Joint(1), Endpoint::End(hi), &zero);
            s.ends.remove(&lo);
            s.ends.remove(&hi);
            let mut vexp = vec![0; self.n];
            vexp[p - 1] = -1;
            out.push((Monomial { half_a: if ccw { 1 } else { -1 }, vexp }, s));
        }
        let b = out.pop().unwrap();
        let a = out.pop().unwrap();
        Ok([a, b])
    }

    /// Deletes loops bounding a disk with at most one puncture and returns the product of their factors.
    ///
    /// Loops live on the sphere, so either side of a loop may be the disk;
    /// the side containing the enclosed punctures in the plane is tried first.
    pub fn remove_trivial_loops(&mut self) -> Result<LaurentPoly, DiagramError> {
        if !self.crossings.is_empty() {
            return Err(DiagramError::CrossingsPresent(self.crossings.len()));
        }
        let occupied: BTreeSet<usize> = self.ends.values().map(|e| e.puncture).collect();
        let mut factor = LaurentPoly::one(self.n);
        let mut kept = Vec::new();
        for w in std::mem::take(&mut self.loops) {
            let inside: BTreeSet<usize> = (1..=self.n).filter(|p| w[p - 1] != 0).collect();
            let outside: BTreeSet<usize> = (1..=self.n).filter(|p| w[p - 1] == 0).collect();
            let disk = [&inside, &outside].into_iter().find(|side| side.len() <= 1 && side.is_disjoint(&occupied));
            match disk {
                Some(side) if side.is_empty() => factor = factor * LaurentPoly::framing_loop(self.n),
                Some(_) => factor = factor * LaurentPoly::puncture_loop(self.n),
                None => kept.push(w),
            }
        }
        self.loops = kept;
        Ok(factor)
    }

    /// The simple arcs and curves of a terminal state, arcs ordered by height.
    pub fn classify(&self) -> Result<Vec<SimpleClass>, DiagramError> {
        if self.n > 3 {
            return Err(DiagramError::TooManyPunctures(self.n));
        }
        if !self.crossings.is_empty() {
            return Err(DiagramError::CrossingsPresent(self.crossings.len()));
        }
        let mut arcs = Vec::new();
        for s in &self.strands {
            match (s.from, s.to) {
                (Endpoint::End(a), Endpoint::End(b)) => {
                    let (pa, pb) = (self.ends[&a].puncture, self.ends[&b].puncture);
                    if pa == pb {
                        return Err(DiagramError::Residual(format!("arc from puncture {pa} to itself")));
                    }
                    let h = self.ends[&a].height.min(self.ends[&b].height);
                    arcs.push((h, SimpleClass::Arc(pa.min(pb), pa.max(pb))));
                }
                (a, b) => return Err(DiagramError::Residual(format!("strand between {a:?} and {b:?}"))),
            }
        }
        for p in 1..=self.n {
            if self.ends_at(p).len() > 1 {
                return Err(DiagramError::Residual(format!("puncture {p} still has several ends")));
            }
        }
        arcs.sort_by_key(|(h, _)| *h);
        let mut out: Vec<SimpleClass> = arcs.into_iter().map(|(_, c)| c).collect();
        for w in &self.loops {
            let inside: BTreeSet<usize> = (1..=self.n).filter(|p| w[p - 1] != 0).collect();
            out.push(SimpleClass::canonical_loop(inside, self.n));
        }
        Ok(out)
    }
}
