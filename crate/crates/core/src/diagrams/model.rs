//! Geometric diagrams: polylines with exact coordinates, their file format and validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::geometry::{orient, q, segment_contact, Point, SegmentContact, Q};
use super::DiagramError;

/// Puncture `i` (1-based) of `F_{0,n}`, placed at `(i, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Puncture {
    pub index: usize,
}

impl Puncture {
    pub fn position(&self) -> Point {
        Point::new(q(self.index as i64), q(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attachment {
    pub puncture: usize,
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub points: Vec<Point>,
    pub closed: bool,
    pub start: Option<Attachment>,
    pub end: Option<Attachment>,
}

impl Component {
    pub fn closed(points: Vec<Point>) -> Self {
        Component { points, closed: true, start: None, end: None }
    }

    /// An arc whose first and last points are moved onto the given punctures.
    pub fn arc(start: Attachment, interior: Vec<Point>, end: Attachment) -> Self {
        let mut points = vec![Puncture { index: start.puncture }.position()];
        points.extend(interior);
        points.push(Puncture { index: end.puncture }.position());
        Component { points, closed: false, start: Some(start), end: Some(end) }
    }

    pub fn segment_count(&self) -> usize {
        match (self.closed, self.points.len()) {
            (_, 0) => 0,
            (true, m) => m,
            (false, m) => m - 1,
        }
    }

    pub fn segment(&self, s: usize) -> (&Point, &Point) {
        let m = self.points.len();
        (&self.points[s], &self.points[(s + 1) % m])
    }

    pub fn direction(&self, s: usize) -> Point {
        let (a, b) = self.segment(s);
        b.sub(a)
    }

    fn adjacent(&self, s: usize, t: usize) -> bool {
        let m = self.segment_count();
        s.abs_diff(t) == 1 || (self.closed && m > 1 && s.abs_diff(t) == m - 1)
    }
}

/// Segment `seg` of component `comp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegRef {
    pub comp: usize,
    pub seg: usize,
}

impl fmt::Display for SegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.comp, self.seg)
    }
}

/// Canonical crossing identifier with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingKey {
    pub a: SegRef,
    pub b: SegRef,
}

impl CrossingKey {
    /// Orders the pair; the returned flag is true when the inputs were swapped.
    pub fn new(x: SegRef, y: SegRef) -> (Self, bool) {
        if x <= y {
            (CrossingKey { a: x, b: y }, false)
        } else {
            (CrossingKey { a: y, b: x }, true)
        }
    }
}

impl fmt::Display for CrossingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub n: usize,
    pub components: Vec<Component>,
    pub over_under: BTreeMap<CrossingKey, Side>,
}

/// An actual transverse crossing found in a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub key: CrossingKey,
    pub point: Point,
    /// Parameters along segment `key.a` and `key.b`.
    pub ta: Q,
    pub tb: Q,
    pub over: Side,
}

impl Crossing {
    pub fn over_seg(&self) -> SegRef {
        match self.over {
            Side::A => self.key.a,
            Side::B => self.key.b,
        }
    }

    pub fn under_seg(&self) -> SegRef {
        match self.over {
            Side::A => self.key.b,
            Side::B => self.key.a,
        }
    }

    pub fn param(&self, s: SegRef) -> &Q {
        if s == self.key.a {
            &self.ta
        } else {
            &self.tb
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IssueKind {
    Malformed,
    DegenerateSegment,
    OffPuncture,
    ThroughPuncture,
    NonTransverse,
    Overlap,
    TriplePoint,
    DuplicateHeight,
    MissingOverUnder,
    UnknownCrossing,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueKind::Malformed => "malformed",
            IssueKind::DegenerateSegment => "degenerate segment",
            IssueKind::OffPuncture => "off-puncture end",
            IssueKind::ThroughPuncture => "passes through puncture",
            IssueKind::NonTransverse => "non-transverse",
            IssueKind::Overlap => "collinear overlap",
            IssueKind::TriplePoint => "triple point",
            IssueKind::DuplicateHeight => "duplicate height",
            IssueKind::MissingOverUnder => "missing over/under",
            IssueKind::UnknownCrossing => "unknown crossing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub kind: IssueKind,
    pub at: Option<Point>,
    pub detail: String,
}

impl Issue {
    fn new(kind: IssueKind, at: Option<Point>, detail: impl Into<String>) -> Self {
        Issue { kind, at, detail: detail.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(p) = &self.at {
            write!(f, " at {p}")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

impl Diagram {
    pub fn empty(n: usize) -> Self {
        Diagram { n, ..Default::default() }
    }

    pub fn with_components(n: usize, components: Vec<Component>) -> Self {
        Diagram { n, components, over_under: BTreeMap::new() }
    }

    pub fn punctures(&self) -> impl Iterator<Item = Puncture> {
        (1..=self.n).map(|index| Puncture { index })
    }

    /// Records which of the two segments passes over; the pair may be given in any order.
    pub fn set_over(&mut self, over: SegRef, under: SegRef) {
        let (key, swapped) = CrossingKey::new(over, under);
        self.over_under.insert(key, if swapped { Side::B } else { Side::A });
    }

    pub fn attachments(&self) -> impl Iterator<Item = Attachment> + '_ {
        self.components.iter().flat_map(|c| c.start.into_iter().chain(c.end))
    }

    /// Intersections between distinct segments, classified.
    fn contacts(&self) -> (Vec<(SegRef, SegRef, Point, Q, Q)>, Vec<Issue>) {
        let segs: Vec<SegRef> = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(comp, c)| (0..c.segment_count()).map(move |seg| SegRef { comp, seg }))
            .collect();
        let puncture_points: BTreeSet<Point> = self.punctures().map(|p| p.position()).collect();
        let mut proper = Vec::new();
        let mut issues = Vec::new();
        for (i, &x) in segs.iter().enumerate() {
            let (a0, a1) = self.components[x.comp].segment(x.seg);
            for &y in &segs[i + 1..] {
                let (b0, b1) = self.components[y.comp].segment(y.seg);
                let same = x.comp == y.comp;
                if same && self.components[x.comp].adjacent(x.seg, y.seg) {
                    // consecutive segments may only fold back onto each other
                    let shared = if a1 == b0 { a1 } else { a0 };
                    let (p, r) = if a1 == b0 { (a0, b1) } else { (b0, a1) };
                    if self.components[x.comp].segment_count() == 2 && self.components[x.comp].closed {
                        issues.push(Issue::new(IssueKind::Overlap, Some(a0.clone()), format!("closed component {} has two segments", x.comp)));
                        continue;
                    }
                    if orient(p, shared, r) == std::cmp::Ordering::Equal
                        && super::geometry::dot(&p.sub(shared), &r.sub(shared)).is_positive()
                    {
                        issues.push(Issue::new(IssueKind::Overlap, Some(shared.clone()), format!("segments {x} and {y} fold back")));
                    }
                    continue;
                }
                match segment_contact(a0, a1, b0, b1) {
                    SegmentContact::None => {}
                    SegmentContact::Proper { point, s, t } => proper.push((x, y, point, s, t)),
                    SegmentContact::Touch { point, collinear } => {
                        if collinear {
                            issues.push(Issue::new(IssueKind::Overlap, Some(point), format!("segments {x} and {y}")));
                        } else if !puncture_points.contains(&point) {
                            issues.push(Issue::new(IssueKind::NonTransverse, Some(point), format!("segments {x} and {y} touch")));
                        }
                    }
                }
            }
        }
        (proper, issues)
    }

    /// Segment pairs meeting in a transverse crossing, ignoring every other check.
    pub fn intersecting_pairs(&self) -> Vec<(SegRef, SegRef)> {
        self.contacts().0.into_iter().map(|(x, y, ..)| (x, y)).collect()
    }

    /// All crossings with their over/under data, or every problem found.
    pub fn crossings(&self) -> Result<Vec<Crossing>, Vec<Issue>> {
        let mut issues = self.shape_issues();
        if !issues.is_empty() {
            return Err(issues);
        }
        let (proper, contact_issues) = self.contacts();
        issues.extend(contact_issues);

        let mut seen: BTreeMap<Point, usize> = BTreeMap::new();
        for (_, _, p, _, _) in &proper {
            *seen.entry(p.clone()).or_default() += 1;
        }
        for (p, k) in &seen {
            if *k > 1 {
                issues.push(Issue::new(IssueKind::TriplePoint, Some(p.clone()), format!("{} crossings coincide", k)));
            }
        }

        let mut crossings = Vec::new();
        let mut used = BTreeSet::new();
        for (x, y, point, s, t) in proper {
            let (key, _) = CrossingKey::new(x, y);
            let (ta, tb) = if key.a == x { (s, t) } else { (t, s) };
            match self.over_under.get(&key) {
                Some(&over) => {
                    used.insert(key);
                    crossings.push(Crossing { key, point, ta, tb, over });
                }
                None => issues.push(Issue::new(IssueKind::MissingOverUnder, Some(point), format!("crossing {key}"))),
            }
        }
        for key in self.over_under.keys() {
            if !used.contains(key) {
                issues.push(Issue::new(IssueKind::UnknownCrossing, None, format!("over/under entry {key} has no crossing")));
            }
        }
        if issues.is_empty() {
            crossings.sort_by(|a, b| a.key.cmp(&b.key));
            Ok(crossings)
        } else {
            Err(issues)
        }
    }

    /// Per-component checks that do not involve pairs of segments.
    fn shape_issues(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            let min = if c.closed { 3 } else { 2 };
            if c.points.len() < min {
                issues.push(Issue::new(IssueKind::Malformed, None, format!("component {ci} needs at least {min} points")));
                continue;
            }
            if c.closed && (c.start.is_some() || c.end.is_some()) {
                issues.push(Issue::new(IssueKind::Malformed, None, format!("closed component {ci} has attachments")));
            }
            for s in 0..c.segment_count() {
                let (a, b) = c.segment(s);
                if a == b {
                    issues.push(Issue::new(IssueKind::DegenerateSegment, Some(a.clone()), format!("component {ci} segment {s}")));
                }
            }
            if !c.closed {
                for (att, p, which) in [(c.start, c.points.first().unwrap(), "start"), (c.end, c.points.last().unwrap(), "end")] {
                    match att {
                        None => issues.push(Issue::new(IssueKind::OffPuncture, Some(p.clone()), format!("component {ci} {which} has no attachment"))),
                        Some(a) if a.puncture == 0 || a.puncture > self.n => {
                            issues.push(Issue::new(IssueKind::Malformed, Some(p.clone()), format!("component {ci} {which} names puncture {}", a.puncture)))
                        }
                        Some(a) => {
                            if *p != (Puncture { index: a.puncture }).position() {
                                issues.push(Issue::new(IssueKind::OffPuncture, Some(p.clone()), format!("component {ci} {which} is not at puncture {}", a.puncture)));
                            }
                        }
                    }
                }
            }
            for pt in self.punctures() {
                let pp = pt.position();
                for s in 0..c.segment_count() {
                    let (a, b) = c.segment(s);
                    if !super::geometry::on_segment(a, b, &pp) {
                        continue;
                    }
                    let last = c.segment_count() - 1;
                    let ok = !c.closed
                        && ((s == 0 && *a == pp && c.start.map(|x| x.puncture) == Some(pt.index))
                            || (s == last && *b == pp && c.end.map(|x| x.puncture) == Some(pt.index)));
                    if !ok {
                        issues.push(Issue::new(IssueKind::ThroughPuncture, Some(pp.clone()), format!("component {ci} segment {s} meets puncture {}", pt.index)));
                    }
                }
            }
        }
        let mut heights: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for a in self.attachments() {
            *heights.entry((a.puncture, a.height)).or_default() += 1;
        }
        for ((p, h), k) in heights {
            if k > 1 {
                issues.push(Issue::new(IssueKind::DuplicateHeight, Some((Puncture { index: p }).position()), format!("{k} ends at height {h} on puncture {p}")));
            }
        }
        issues
    }

    /// Shifts every attachment height by `dh`.
    pub fn shift_heights(&mut self, dh: i64) {
        for c in &mut self.components {
            for a in [&mut c.start, &mut c.end].into_iter().flatten() {
                a.height += dh;
            }
        }
    }

    pub fn height_range(&self) -> Option<(i64, i64)> {
        let hs: Vec<i64> = self.attachments().map(|a| a.height).collect();
        Some((*hs.iter().min()?, *hs.iter().max()?))
    }

    pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
        let file: DiagramFile = serde_json::from_str(text).map_err(|e| DiagramError::Format(e.to_string()))?;
        file.into_diagram()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DiagramFile::from_diagram(self)).expect("diagram serializes")
    }
}

/// Validates every diagram invariant.
pub fn validate(d: &Diagram) -> Result<(), Vec<Issue>> {
    d.crossings().map(|_| ())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatText {
    Int(i64),
    Text(String),
}

impl RatText {
    fn parse(&self) -> Result<Q, DiagramError> {
        match self {
            RatText::Int(k) => Ok(q(*k)),
            RatText::Text(s) => {
                let t = s.trim();
                let r: Q = t.parse().map_err(|_| DiagramError::Format(format!("bad rational {s:?}")))?;
                Ok(r)
            }
        }
    }

    fn show(x: &Q) -> RatText {
        if x.is_integer() {
            RatText::Text(x.numer().to_string())
        } else {
            RatText::Text(format!("{}/{}", x.numer(), x.denom()))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentFile {
    closed: bool,
    points: Vec<[RatText; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<Attachment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<Attachment>,
}

#[derive(Serialize, Deserialize)]
struct OverUnderFile {
    a: [usize; 2],
    b: [usize; 2],
    over: Side,
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    n: usize,
    #[serde(default)]
    components: Vec<ComponentFile>,
    #[serde(default)]
    over_under: Vec<OverUnderFile>,
}

impl DiagramFile {
    fn into_diagram(self) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::empty(self.n);
        for c in self.components {
            let points = c
                .points
                .iter()
                .map(|[x, y]| Ok(Point::new(x.parse()?, y.parse()?)))
                .collect::<Result<Vec<_>, DiagramError>>()?;
            d.components.push(Component { points, closed: c.closed, start: c.start, end: c.end });
        }
        for e in self.over_under {
            let x = SegRef { comp: e.a[0], seg: e.a[1] };
            let y = SegRef { comp: e.b[0], seg: e.b[1] };
            let (key, swapped) = CrossingKey::new(x, y);
            let side = if swapped { e.over.flip() } else { e.over };
            if d.over_under.insert(key, side).is_some() {
                return Err(DiagramError::Format(format!("crossing {key} listed twice")));
            }
        }
        Ok(d)
    }

    fn from_diagram(d: &Diagram) -> Self {
        DiagramFile {
            n: d.n,
            components: d
                .components
                .iter()
                .map(|c| ComponentFile {
                    closed: c.closed,
                    points: c.points.iter().map(|p| [RatText::show(&p.x), RatText::show(&p.y)]).collect(),
                    start: c.start,
                    end: c.end,
                })
                .collect(),
            over_under: d
                .over_under
                .iter()
                .map(|(k, s)| OverUnderFile { a: [k.a.comp, k.a.seg], b: [k.b.comp, k.b.seg], over: *s })
                .collect(),
        }
    }
}
