//! Finite groupoids, their automorphism 2-groupoids, groupoid cohomology and
//! the construction and classification of product groupoid extensions
//! `1 -> A -> G -> K -> 1`.
//!
//! Arrows compose left to right: `g·h` is defined when `tgt(g) == src(h)`.
//! Functors compose as ordinary functions.
#![no_std]

extern crate alloc;

pub mod abelian;
pub mod autalg;
pub mod catalog;
pub mod cohomology;
pub mod extension;
pub mod groupoid;
pub mod iso;
pub mod morphism;
pub mod oracle;
pub mod refine;
pub mod zmod;

pub use abelian::FiniteAbelianGroup;
pub use autalg::{AutData, CentralSection, Center, NAGroup, SAutGroupoid};
pub use cohomology::{Backend, Cochain, CohomologyGroup, KModule};
pub use extension::{ExtensionContext, ExtensionGroupoid, GeneralizedCocycle};
pub use groupoid::{Arr, FiniteGroupoid, Obj, RawGroupoid};
pub use morphism::{NaturalTransformation, StrictMorphism};
pub use refine::{OpenCover, Refinement};
