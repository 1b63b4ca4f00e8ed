//! Presentations of the arc algebra for the twice- and thrice-punctured
//! spheres and for the closed and once-punctured torus, together with the
//! left-regular representation of the thrice-punctured sphere algebra.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::freealg::{AlgElement, Generator, Word};
use crate::ring::{LaurentPoly, RingError};
use crate::rewrite::{RewriteError, RewriteSystem, Rule, DEFAULT_DEGREE_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("no presentation for the surface of genus {genus} with {punctures} punctures")]
    UnsupportedSurface { genus: u32, punctures: u32 },
    #[error("element uses puncture variables or half powers of A")]
    NotASkeinScalar,
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Surface {
    pub genus: u32,
    pub punctures: u32,
}

impl Surface {
    pub const SPHERE_2: Surface = Surface { genus: 0, punctures: 2 };
    pub const SPHERE_3: Surface = Surface { genus: 0, punctures: 3 };
    pub const TORUS: Surface = Surface { genus: 1, punctures: 0 };
    pub const TORUS_1: Surface = Surface { genus: 1, punctures: 1 };

    pub const SUPPORTED: [Surface; 4] = [Self::SPHERE_2, Self::SPHERE_3, Self::TORUS, Self::TORUS_1];

    pub fn new(genus: u32, punctures: u32) -> Result<Self, PresentationError> {
        let s = Surface { genus, punctures };
        if Self::SUPPORTED.contains(&s) {
            Ok(s)
        } else {
            Err(PresentationError::UnsupportedSurface { genus, punctures })
        }
    }

    pub fn arity(&self) -> usize {
        self.punctures as usize
    }

    pub fn generators(&self) -> Vec<Generator> {
        match (self.genus, self.punctures) {
            (0, 2) => vec![Generator::alpha(0)],
            (0, 3) => (1..=3).map(Generator::alpha).collect(),
            _ => (1..=3).map(Generator::gamma).collect(),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.genus, self.punctures)
    }
}

impl std::str::FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (g, n) = s.split_once(',').ok_or_else(|| format!("expected g,n but got {s:?}"))?;
        let g: u32 = g.trim().parse().map_err(|_| format!("bad genus {g:?}"))?;
        let n: u32 = n.trim().parse().map_err(|_| format!("bad puncture count {n:?}"))?;
        Surface::new(g, n).map_err(|e| e.to_string())
    }
}

/// Which right-hand side the torus commutation relations use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum TorusVariant {
    /// `A g_i g_{i+1} - A^-1 g_{i+1} g_i = (A^2 - A^-2) g_{i+2}`.
    #[default]
    Cyclic,
    /// The same relation with `g_{i+1}` on the right-hand side.
    PaperIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAlgebra {
    pub surface: Surface,
    pub generators: Vec<Generator>,
    /// The defining relations, each oriented into a rule.
    pub defining: RewriteSystem,
    /// `defining` completed up to the default degree bound; used by [`PresentedAlgebra::nf`].
    pub system: RewriteSystem,
    /// Value of the loop around the puncture (torus algebras only).
    pub boundary_scalar: Option<LaurentPoly>,
    pub variant: TorusVariant,
}

/// Cyclic index in 1..=3.
fn cyc(i: u32) -> u32 {
    (i - 1) % 3 + 1
}

fn gen(arity: usize, g: Generator) -> AlgElement {
    AlgElement::generator(arity, g)
}

fn word(arity: usize, gs: &[Generator]) -> AlgElement {
    AlgElement::word(arity, Word(gs.to_vec()))
}

fn scalar_times(c: LaurentPoly, x: &AlgElement) -> AlgElement {
    x.scalar_mul(&c).expect("arity")
}

/// `-v1^-1 v2^-1 (A - A^-1)^2`, the square of the arc on the twice-punctured sphere.
pub fn sphere2_square_scalar() -> LaurentPoly {
    let d = LaurentPoly::a_pow(2, 1) - LaurentPoly::a_pow(2, -1);
    -(LaurentPoly::v_pow(2, 1, -1) * LaurentPoly::v_pow(2, 2, -1) * &d * d)
}

/// `v_{i+1}^-1 v_{i+2}^-1 δ^2`, the square of `a_i` on the thrice-punctured sphere.
pub fn sphere3_square_scalar(i: u32) -> LaurentPoly {
    let d = LaurentPoly::delta(3);
    LaurentPoly::v_pow(3, cyc(i + 1) as usize, -1) * LaurentPoly::v_pow(3, cyc(i + 2) as usize, -1) * &d * d
}

/// `v_k^-1 δ`, the coefficient of `a_k` in `a_i a_j` for `{i, j, k} = {1, 2, 3}`.
pub fn sphere3_product_scalar(k: u32) -> LaurentPoly {
    LaurentPoly::v_pow(3, k as usize, -1) * LaurentPoly::delta(3)
}

/// The loop around the puncture written in the torus generators:
/// `A g1 g2 g3 - A^2 g1^2 - A^-2 g2^2 - A^2 g3^2 + A^2 + A^-2`.
pub fn boundary_element(arity: usize) -> AlgElement {
    let a = |k| LaurentPoly::a_pow(arity, k);
    let (g1, g2, g3) = (Generator::gamma(1), Generator::gamma(2), Generator::gamma(3));
    scalar_times(a(1), &word(arity, &[g1, g2, g3]))
        - scalar_times(a(2), &word(arity, &[g1, g1]))
        - scalar_times(a(-2), &word(arity, &[g2, g2]))
        - scalar_times(a(2), &word(arity, &[g3, g3]))
        + AlgElement::scalar(a(2) + a(-2))
}

/// `A g_i g_{i+1} - A^-1 g_{i+1} g_i - (A^2 - A^-2) g_k`, with `k` per variant.
fn torus_commutation(arity: usize, i: u32, variant: TorusVariant) -> AlgElement {
    let a = |k| LaurentPoly::a_pow(arity, k);
    let gi = Generator::gamma(i);
    let gj = Generator::gamma(cyc(i + 1));
    let gk = match variant {
        TorusVariant::Cyclic => Generator::gamma(cyc(i + 2)),
        TorusVariant::PaperIndex => gj,
    };
    scalar_times(a(1), &word(arity, &[gi, gj])) - scalar_times(a(-1), &word(arity, &[gj, gi]))
        - scalar_times(a(2) - a(-2), &gen(arity, gk))
}

pub fn algebra_for(s: Surface) -> Result<PresentedAlgebra, PresentationError> {
    algebra_for_variant(s, TorusVariant::default())
}

pub fn algebra_for_variant(s: Surface, variant: TorusVariant) -> Result<PresentedAlgebra, PresentationError> {
    let s = Surface::new(s.genus, s.punctures)?;
    let n = s.arity();
    let mut boundary_scalar = None;
    let rules = match (s.genus, s.punctures) {
        (0, 2) => {
            let a = Generator::alpha(0);
            vec![Rule::new(Word(vec![a, a]), AlgElement::scalar(sphere2_square_scalar()))?]
        }
        (0, 3) => {
            let mut rules = Vec::new();
            for i in 1..=3u32 {
                for j in 1..=3u32 {
                    let lhs = Word(vec![Generator::alpha(i), Generator::alpha(j)]);
                    let rhs = if i == j {
                        AlgElement::scalar(sphere3_square_scalar(i))
                    } else {
                        let k = 6 - i - j;
                        AlgElement::monomial(sphere3_product_scalar(k), Word(vec![Generator::alpha(k)]))
                    };
                    rules.push(Rule::new(lhs, rhs)?);
                }
            }
            rules
        }
        _ => {
            let boundary = if s.punctures == 0 { LaurentPoly::framing_loop(n) } else { LaurentPoly::puncture_loop(n) };
            let mut rules = Vec::new();
            for i in 1..=3 {
                rules.push(Rule::from_relation(&torus_commutation(n, i, variant))?);
            }
            rules.push(Rule::from_relation(&(boundary_element(n) - AlgElement::scalar(boundary.clone())))?);
            boundary_scalar = Some(boundary);
            rules
        }
    };
    let defining = RewriteSystem::new(n, rules)?;
    let system = if s.genus == 0 { defining.clone() } else { defining.complete(DEFAULT_DEGREE_BOUND)?.0 };
    Ok(PresentedAlgebra {
        surface: s,
        generators: s.generators(),
        defining,
        system,
        boundary_scalar,
        variant,
    })
}

impl PresentedAlgebra {
    pub fn arity(&self) -> usize {
        self.surface.arity()
    }

    pub fn nf(&self, x: &AlgElement) -> Result<AlgElement, PresentationError> {
        Ok(self.system.normal_form(x)?)
    }

    /// The defining relations written as `(name, lhs, rhs)`, independently of
    /// how they were oriented into rules.
    pub fn defining_relations(&self) -> Vec<(String, AlgElement, AlgElement)> {
        let n = self.arity();
        let mut out = Vec::new();
        match (self.surface.genus, self.surface.punctures) {
            (0, 2) => {
                let a = gen(n, Generator::alpha(0));
                out.push(("a^2".into(), &a * &a, AlgElement::scalar(sphere2_square_scalar())));
            }
            (0, 3) => {
                let delta = LaurentPoly::delta(n);
                for i in 1..=3 {
                    let (j, k) = (cyc(i + 1), cyc(i + 2));
                    let (ai, aj, ak) = (gen(n, Generator::alpha(i)), gen(n, Generator::alpha(j)), gen(n, Generator::alpha(k)));
                    let rhs = scalar_times(LaurentPoly::v_pow(n, k as usize, -1) * delta.clone(), &ak);
                    out.push((format!("a{i}*a{j}"), &ai * &aj, rhs.clone()));
                    out.push((format!("a{j}*a{i}"), &aj * &ai, rhs));
                    let vv = LaurentPoly::v_pow(n, j as usize, 1) * LaurentPoly::v_pow(n, k as usize, 1);
                    out.push((format!("v{j}*v{k}*a{i}^2"), scalar_times(vv, &(&ai * &ai)), AlgElement::scalar(&delta * &delta)));
                }
            }
            _ => {
                for i in 1..=3 {
                    let rel = torus_commutation(n, i, self.variant);
                    out.push((format!("commutation-{i}"), rel, AlgElement::zero(n)));
                }
                let b = self.boundary_scalar.clone().expect("torus boundary");
                out.push(("boundary".into(), boundary_element(n), AlgElement::scalar(b)));
            }
        }
        out
    }

    /// `nf(L) - nf(R) == 0` for every defining relation.
    pub fn verify_presentation(&self) -> Result<Report, PresentationError> {
        let mut report = Report::default();
        for (name, l, r) in self.defining_relations() {
            let diff = &self.nf(&l)? - &self.nf(&r)?;
            report.push(format!("relation:{name}"), diff.is_zero(), (!diff.is_zero()).then(|| diff.to_string()));
        }
        Ok(report)
    }

    /// `nf(boundary * g_i - g_i * boundary)` for i = 1..3 (torus algebras).
    pub fn boundary_commutators(&self) -> Result<Vec<AlgElement>, PresentationError> {
        let n = self.arity();
        let b = boundary_element(n);
        (1..=3)
            .map(|i| {
                let g = gen(n, Generator::gamma(i));
                self.nf(&(&(&b * &g) - &(&g * &b)))
            })
            .collect()
    }
}

/// Extends scalars from `Z[A, A^-1]` to the coefficient ring with `arity` puncture variables.
pub fn psi_embed(x: &AlgElement, arity: usize) -> Result<AlgElement, PresentationError> {
    let mut out = AlgElement::zero(arity);
    for (w, c) in x.terms() {
        if !c.is_skein_scalar() {
            return Err(PresentationError::NotASkeinScalar);
        }
        let c = c.with_arity(arity).ok_or(PresentationError::NotASkeinScalar)?;
        out = &out + &AlgElement::monomial(c, w.clone());
    }
    Ok(out)
}

/// Square matrix over the Laurent ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    arity: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(dim: usize, arity: usize) -> Self {
        PolyMatrix { dim, arity, entries: vec![LaurentPoly::zero(arity); dim * dim] }
    }

    pub fn identity(dim: usize, arity: usize) -> Self {
        let mut m = Self::zero(dim, arity);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::one(arity));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<LaurentPoly> {
        (0..self.dim).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = PolyMatrix::zero(self.dim, self.arity);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = LaurentPoly::zero(self.arity);
                for k in 0..self.dim {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        PolyMatrix { dim: self.dim, arity: self.arity, entries }
    }

    pub fn scale(&self, c: &LaurentPoly) -> PolyMatrix {
        PolyMatrix { dim: self.dim, arity: self.arity, entries: self.entries.iter().map(|e| c * e).collect() }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Left-regular representation of the thrice-punctured sphere algebra on the
/// ordered basis `(1, a1, a2, a3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    pub identity: PolyMatrix,
    pub alpha: [PolyMatrix; 3],
}

impl MatrixRep {
    pub fn new() -> Self {
        let n = 3;
        let mut alpha = [PolyMatrix::zero(4, n), PolyMatrix::zero(4, n), PolyMatrix::zero(4, n)];
        for i in 1..=3u32 {
            let m = &mut alpha[(i - 1) as usize];
            let i_ = i as usize;
            // a_i * 1 = a_i
            m.set(i_, 0, LaurentPoly::one(n));
            // a_i * a_i = v_{i+1}^-1 v_{i+2}^-1 δ^2
            m.set(0, i_, sphere3_square_scalar(i));
            // a_i * a_j = v_k^-1 δ a_k
            for j in 1..=3u32 {
                if j != i {
                    let k = 6 - i - j;
                    m.set(k as usize, j as usize, sphere3_product_scalar(k));
                }
            }
        }
        MatrixRep { identity: PolyMatrix::identity(4, n), alpha }
    }

    /// `rho(1)` for `None`, `rho(a_i)` for `Some(i)`.
    pub fn rho(&self, g: Option<u32>) -> &PolyMatrix {
        match g {
            None => &self.identity,
            Some(i) => &self.alpha[(i - 1) as usize],
        }
    }

    /// Multiplicative extension to words in `a1, a2, a3`.
    pub fn rho_word(&self, w: &Word) -> PolyMatrix {
        w.letters().iter().fold(self.identity.clone(), |acc, g| acc.mul(self.rho(Some(g.index))))
    }

    /// Linear extension to algebra elements.
    pub fn rho_element(&self, x: &AlgElement) -> PolyMatrix {
        x.terms().fold(PolyMatrix::zero(4, 3), |acc, (w, c)| acc.add(&self.rho_word(w).scale(c)))
    }

    /// The matrix of an element supported on the basis `(1, a1, a2, a3)`.
    pub fn basis_matrix(&self, x: &AlgElement) -> Option<PolyMatrix> {
        let mut acc = PolyMatrix::zero(4, 3);
        for (w, c) in x.terms() {
            let g = match w.letters() {
                [] => None,
                [g] if g.name == 'a' && (1..=3).contains(&g.index) => Some(g.index),
                _ => return None,
            };
            acc = acc.add(&self.rho(g).scale(c));
        }
        Some(acc)
    }

    /// For all i, j: `rho(a_i) rho(a_j)` equals the matrix of `nf(a_i a_j)`.
    pub fn verify_homomorphism(&self) -> Result<Report, PresentationError> {
        let alg = algebra_for(Surface::SPHERE_3)?;
        let mut report = Report::default();
        for i in 1..=3u32 {
            for j in 1..=3u32 {
                let lhs = self.rho(Some(i)).mul(self.rho(Some(j)));
                let prod = &gen(3, Generator::alpha(i)) * &gen(3, Generator::alpha(j));
                let nf = alg.nf(&prod)?;
                let ok = self.basis_matrix(&nf).map_or(false, |m| m == lhs);
                report.push(format!("rho:a{i}*a{j}"), ok, (!ok).then(|| nf.to_string()));
            }
        }
        Ok(report)
    }

    /// The four matrices flattened to 16-vectors.
    pub fn flattened(&self) -> Vec<Vec<LaurentPoly>> {
        std::iter::once(&self.identity).chain(self.alpha.iter()).map(|m| m.entries().to_vec()).collect()
    }
}

impl Default for MatrixRep {
    fn default() -> Self {
        Self::new()
    }
}

/// A substitution `A^(1/2) -> a_half`, `v_i -> vs[i-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub a_half: BigRational,
    pub vs: Vec<BigRational>,
}

impl Specialization {
    pub fn integers(a_half: i64, vs: &[i64]) -> Self {
        Specialization {
            a_half: BigRational::from_integer(a_half.into()),
            vs: vs.iter().map(|&v| BigRational::from_integer(v.into())).collect(),
        }
    }
}

/// Rank over the rationals of polynomial vectors after specialization.
pub fn specialized_rank(vectors: &[Vec<LaurentPoly>], spec: &Specialization) -> Result<usize, PresentationError> {
    let mut rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| v.iter().map(|p| p.specialize(&spec.a_half, &spec.vs)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    Ok(rational_rank(&mut rows))
}

/// Exact Gaussian elimination.
pub fn rational_rank(rows: &mut [Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot;
                for c in col..ncols {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the flattened `{rho(1), rho(a1), rho(a2), rho(a3)}` under each specialization.
pub fn independence_rank(specs: &[Specialization]) -> Result<Vec<usize>, PresentationError> {
    let flat = MatrixRep::new().flattened();
    specs.iter().map(|s| specialized_rank(&flat, s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// One record per check, printable as tab-separated lines or JSON.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn push(&mut self, id: impl Into<String>, passed: bool, witness: Option<String>) {
        self.records.push(CheckRecord { id: id.into(), passed, witness });
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            write!(f, "{}\t{}", r.id, if r.passed { "PASS" } else { "FAIL" })?;
            if let Some(w) = &r.witness {
                write!(f, "\t{}", w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
