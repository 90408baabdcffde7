//! A small intensional Martin-Löf type theory with Π, Σ and identity types.
//!
//! * [`syntax`]: two-sorted de Bruijn syntax, substitution, contexts.
//! * [`surface`]: lexer, parser, resolver and printer for `.mltt` files.
//! * [`kernel`]: bidirectional checking, normalization, definitional equality.
//! * [`stdlib`]: derived path algebra (inverses, composites, groupoid laws).

pub mod kernel;
pub mod module;
pub mod signature;
pub mod stdlib;
pub mod surface;
pub mod syntax;

pub use kernel::{Checker, CheckerConfig, KernelError, Mode, DEFAULT_FUEL};
pub use module::{check_source, check_source_with, CheckedModule, DeclReport};
pub use signature::{Decl, Signature};
pub use syntax::{ident, Expr, Ident, Judgement, Telescope, Term, Type};
