//! Finite posets as a computational category.
//!
//! The crate enumerates posets, lattices and monotone maps, computes in the
//! cube category with connections, splits idempotents, and evaluates
//! presheaves over small sites of posets.

pub mod bits;
pub mod catalog;
pub mod cube;
pub mod error;
pub mod karoubi;
pub mod map;
pub mod poset;
pub mod presheaf;
pub mod retract;
pub mod verify;

pub use error::{Error, Result};
pub use map::MonotoneMap;
pub use poset::Poset;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/cubes.md")]
    mod cubes {}
    #[doc = include_str!("../../../book/src/idempotents.md")]
    mod idempotents {}
    #[doc = include_str!("../../../book/src/presheaves.md")]
    mod presheaves {}
    #[doc = include_str!("../../../book/src/kan.md")]
    mod kan {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
