//! Finite relational structures: storage, induced substructures, embedding
//! search, canonical forms and enumeration up to isomorphism.
//!
//! Substructures are always induced, and universes are always `0..n`.

pub mod builders;
mod canon;
mod embed;
mod enumerate;
mod signature;
mod structure;

pub use canon::{are_isomorphic, canonical_form, canonical_labeling, canonical_representative, CanonicalForm};
pub use embed::{copies_of, embeds, find_embedding_extending, find_embeddings, is_embedding, EmbeddingMap};
pub use enumerate::{enumerate_in_domain, enumerate_levels, enumerate_structures, Domain, Filter, RelKind};
pub use signature::{Signature, Symbol, ORDER_SYMBOL};
pub use structure::Structure;

pub(crate) use embed::Embedder;
pub(crate) use enumerate::for_each_extension;

/// Free function form of [`Structure::induced_substructure`].
pub fn induced_substructure(b: &Structure, subset: &[usize]) -> crate::Result<Structure> {
    b.induced_substructure(subset)
}
