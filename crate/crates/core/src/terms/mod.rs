//! Terms of the natural and vanilla calculi and the operations on them that
//! do not depend on types or rewriting.

mod natural;
mod position;
mod split;
mod subst;
mod syntax;
mod vanilla;
mod var;

pub use natural::NaturalTerm;
pub use position::{Calculus, Position, Selector, Term};
pub use split::{
    all_decompositions, freshen_spine_natural, freshen_spine_vanilla, plug, plug_natural, split,
    split_natural, split_natural_value, Frame, LeftCtx, SubstCtx,
};
pub use subst::{subst_nd, subst_value, SubstError};
pub use syntax::{parse_natural, parse_term, parse_vanilla, AnyTerm, ParseError};
pub use vanilla::VanillaTerm;
pub use var::Var;

#[allow(unused_imports)]
pub(crate) use syntax::{Parser, Tok};
