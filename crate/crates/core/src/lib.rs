//! Construction of additive bases of the integers with a prescribed
//! representation function.
//!
//! Given `h >= 2`, a target `f: Z -> N0 ∪ {∞}` with finitely many zeros and
//! an unbounded sparsity bound `φ`, the [`builder`] produces finite stages
//! `A_1 ⊆ A_2 ⊆ ...` whose union `A` satisfies `r_{A,h}(n) = f(n)` for every
//! `n` and `A(-x, x) <= φ(x)` for every `x`. Each stage is checked against
//! the brute-force counts of [`repcount`], and a finished build is recorded
//! as a plain-text certificate that can be replayed independently.
//!
//! ```
//! use addbasis::builder::{build, BuilderConfig, CSelectionPolicy};
//! use addbasis::repcount::FiniteSet;
//! use addbasis::targetfn::{ExtCount, SparsityBound, TargetFunction};
//!
//! let f = TargetFunction::constant(ExtCount::Finite(1)).unwrap();
//! let config = BuilderConfig::new(f, 2, SparsityBound::identity(), CSelectionPolicy::minimal(), 4)
//!     .unwrap();
//! let (set, certificate) = build(&config).unwrap();
//! assert!(certificate.passed());
//! assert!(set.len() <= 8);
//! # let _ = FiniteSet::default();
//! ```
//!
//! The guide in `book/` walks through the construction chapter by chapter;
//! its code samples are compiled and run as doctests of this crate.

pub mod builder;
pub mod cli;
pub mod repcount;
pub mod targetfn;
pub mod useq;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/sidon.md")]
    mod sidon {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/sparsity.md")]
    mod sparsity {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
