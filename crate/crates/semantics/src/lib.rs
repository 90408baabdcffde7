//! The finite-groupoid model of intensional type theory and a brute-force
//! engine for weak factorization systems on finite groupoids.

pub mod catalog;
pub mod functor;
pub mod groupoid;
pub mod report;
pub mod sweep;
pub mod wfs;

pub use catalog::{default_catalog, parse_catalog, CatalogError};
pub use functor::{
    arrow_groupoid, diagonal, path_object_factorization, FunctorError, GroupoidFunctor,
};
pub use groupoid::{validate_groupoid, Arrow, FiniteGroupoid, GroupoidError, RawGroupoid};
pub use report::{Record, Report};
pub use wfs::{classify, has_llp, solve_lifting, verify_wfs, LiftingSquare, MapClass};
pub mod ir;
pub mod model;
pub mod value;
