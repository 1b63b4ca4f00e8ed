//! Exact computation in the Kauffman bracket arc algebra of small surfaces.
//!
//! * [`ring`]: Laurent polynomials in `A^(1/2)` and the puncture variables.
//! * [`freealg`]: words and linear combinations in named generators.
//! * [`rewrite`]: oriented rewriting, normal forms and completion.
//! * [`presentations`]: the presented algebras and their verification.
//! * [`diagrams`]: planar framed-curve diagrams and their skein evaluation.
//! * [`expr`]: the text grammar shared by scalars and algebra elements.

pub mod diagrams;
pub mod expr;
pub mod freealg;
pub mod presentations;
pub mod rewrite;
pub mod ring;

pub use freealg::{AlgElement, Generator, Word};
pub use presentations::{algebra_for, PresentedAlgebra, Surface};
pub use ring::{LaurentPoly, Monomial};
