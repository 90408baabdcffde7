//! Higher structure of identity types: globular sets, the theory of a
//! globular set, identity towers, and a bounded comparison between the
//! free groupoid a graph generates in type theory and the algebraic one.

pub mod free;
pub mod globular;
pub mod graphs;
pub mod theory;
pub mod words;

pub use free::{compare_free, estimate_cells, FreeConfig, FreeReport};
pub use globular::{parse_globular, validate_globular, Cell, GlobularError, GlobularSet, RawCell};
pub use graphs::{graph_name, small_graphs};
pub use theory::{build_theory, globular_of_type, omega_ops, OpTable, Theory, TheoryError, Tower};
pub use words::{compose_words, count_reduced_words, invert_word, reduce_word, reduced_words, Letter, Word, WordError};
