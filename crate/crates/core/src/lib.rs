//! Natural and vanilla λ-calculi for call-by-value: syntax, typing,
//! rewriting, translations, structural equivalence and test generators.

pub mod rewriting;
pub mod structeq;
pub mod terms;
pub mod testkit;
pub mod translate;
pub mod typing;
