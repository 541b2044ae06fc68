//! Enumeration engines: posets and lattices up to isomorphism, monotone maps, retracts.

mod canonical;
mod maps;
mod posets;
mod retracts;

pub use canonical::{
    canonical_key, canonical_labeling, canonicalize, find_isomorphism, hex_key, CanonicalPoset, Labeling,
};
pub use maps::{count_monotone_maps, endomorphisms, enumerate_monotone_maps, monotone_maps, MapSearch, MonotoneMaps};
pub use posets::{enumerate_lattices, enumerate_posets, enumerate_posets_bounded, posets_of_size, DEFAULT_POSET_BOUND};
pub use retracts::{canonical_retract, enumerate_retracts, enumerate_retracts_unbounded, DEFAULT_RETRACT_BOUND};
