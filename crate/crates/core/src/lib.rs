//! Engine for dissecting a black-box image classifier into natural-language
//! descriptors, driven purely by the classifier's output probabilities.
//!
//! The crate is organized around the optimization loop: a prompt is rendered
//! by a generator provider, scored by a classifier provider, the scalar score
//! stream is turned into a textual guidance signal ([`signal`]), accumulated
//! context steers two cooperating agents ([`context`], [`agents`]), and the
//! loop ([`optimizer`]) emits ranked lexical descriptors. [`evalkit`] scores
//! descriptor quality post hoc. All external capabilities sit behind the
//! provider traits in [`providers`], with both HTTP and deterministic
//! simulation backends.

pub mod agents;
pub mod context;
pub mod evalkit;
pub mod optimizer;
pub mod providers;
pub mod signal;
