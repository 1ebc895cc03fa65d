//! Renormalized quantum invariants of colored braid closures.
//!
//! The engine works over the restricted quantum group of `sl(2)` at
//! `q = exp(i pi / N)`. Its typical modules `V_λ` are `N`-dimensional and all
//! have quantum dimension zero, so the ordinary Reshetikhin–Turaev invariant
//! vanishes on any link colored by them. [`invariant::f_prime`] computes the
//! renormalized invariant `F'` obtained by cutting a strand open and scaling
//! by the modified dimension instead.
//!
//! ```
//! use adolink::{f_prime, parse_braid, ColoredLink, HighestWeight, RootContext};
//!
//! let ctx = RootContext::new(3)?;
//! let trefoil = ColoredLink::new(parse_braid("1 1 1")?, vec![HighestWeight::new(0.3, 0.1)])?;
//! let report = f_prime(&ctx, &trefoil)?;
//! assert!(report.max_disagreement <= report.tolerance);
//! # Ok::<(), adolink::Error>(())
//! ```

pub mod error;
pub mod invariant;
pub mod qscalar;
pub mod ribbon;
pub mod suite;
pub mod tangle;
pub mod uqsl2;

pub use error::{Error, Result};
pub use invariant::{
    ambidextrous_check, assemble_report, cut_records, cut_value, f_prime, modified_dim,
    qdim_via_diagram, s_prime_formula, AmbidextrousReport, CutRecord, InvariantReport,
};
pub use qscalar::{RootContext, Scalar};
pub use ribbon::{braiding, braiding_inv, twist_scalar, Morphism, ObjectSignature};
pub use tangle::{compile, parse_braid, BraidWord, ColoredLink};
pub use uqsl2::{
    check_relations, tensor_action, typical_module, Generator, HighestWeight, WeightModule,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/root-of-unity.md")]
    struct RootOfUnity;
    #[doc = include_str!("../../../book/src/typical-modules.md")]
    struct TypicalModules;
    #[doc = include_str!("../../../book/src/ribbon-structure.md")]
    struct RibbonStructure;
    #[doc = include_str!("../../../book/src/braids.md")]
    struct Braids;
    #[doc = include_str!("../../../book/src/renormalized-invariant.md")]
    struct RenormalizedInvariant;
    #[doc = include_str!("../../../book/src/ambidexterity.md")]
    struct Ambidexterity;
    #[doc = include_str!("../../../book/src/command-line.md")]
    struct CommandLine;
}
