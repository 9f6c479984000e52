//! Algebraic weak factorisation systems on finite presheaf-like instances:
//! lifting problems, algebra structures, the bounded small object argument,
//! algebraically fibrant objects and the categories/graphs adjunction.

pub mod error;
pub mod par;
pub mod instance;
pub mod graph;
pub mod category;
pub mod ssset;
pub mod free;
pub mod pushout;
pub mod lifting;
pub mod algebra;
pub mod jfib;
pub mod gen;
pub mod catgph;
pub mod json;

pub use error::{Error, Result};
pub use instance::{Arrow, Hom, HomSearch, Instance};
pub use graph::FiniteGraph;
pub use category::FiniteCategory;
pub use ssset::{SSMap, SemiSimplicialSet};
pub use par::Exec;
