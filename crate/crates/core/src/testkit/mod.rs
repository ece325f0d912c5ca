//! Seeded term generators, independent oracles, exhaustive enumeration and
//! corpus files.

mod enumerate;
mod gen;
mod oracle;

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::terms::{parse_term, AnyTerm, Calculus, ParseError};

pub use enumerate::enumerate_vanilla;
pub use gen::{
    gen_cut_free, gen_natural, gen_typed, gen_typed_natural, gen_typed_vanilla, gen_untyped,
    gen_value, gen_vanilla, Typed, TypedStream,
};
pub use oracle::{oracle_subst, oracle_subst_nd, oracle_subst_value, OracleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub atom_universe: Vec<String>,
    /// Number of distinct free variable names.
    pub variable_pool: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_size: 10,
            atom_universe: vec!["X".into(), "Y".into()],
            variable_pool: 3,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64, max_size: usize) -> Self {
        GenConfig {
            seed,
            max_size,
            ..GenConfig::default()
        }
    }

    /// Comment line recording the configuration.
    pub fn header(&self) -> String {
        format!(
            "# seed={} max_size={} atoms={} pool={}",
            self.seed,
            self.max_size,
            self.atom_universe.join(","),
            self.variable_pool
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no term fits a size budget of {0}")]
    GenerationExhausted(usize),
    #[error("the atom universe is empty")]
    NoAtoms,
    #[error("the variable pool is empty")]
    NoVariables,
}

impl GenConfig {
    pub(crate) fn validate(&self) -> Result<(), GenError> {
        if self.max_size == 0 {
            return Err(GenError::GenerationExhausted(0));
        }
        if self.atom_universe.is_empty() {
            return Err(GenError::NoAtoms);
        }
        if self.variable_pool == 0 {
            return Err(GenError::NoVariables);
        }
        Ok(())
    }
}

/// One item per line under the configuration header.
pub fn write_corpus<T: fmt::Display>(
    cfg: &GenConfig,
    items: impl IntoIterator<Item = T>,
) -> String {
    let mut out = cfg.header();
    out.push('\n');
    for it in items {
        let _ = writeln!(out, "{it}");
    }
    out
}

/// Reads a term corpus, skipping blank and `#` lines.
pub fn read_corpus(calculus: Calculus, src: &str) -> Result<Vec<AnyTerm>, ParseError> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_term(calculus, l))
        .collect()
}
