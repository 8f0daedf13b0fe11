//! Core algorithms for building Semantic IDs from item embedding spaces and
//! retrieving items generatively over them.
//!
//! The crate is organized around one pipeline: embedding spaces are loaded or
//! fused ([`embedding`], [`fusion`], [`enmf`]), discretized into codes
//! ([`kmeans`], [`quantizer`]), assembled into per-item token sequences and a
//! prefix trie ([`id_space`], [`trie`]), and decoded with trie-constrained
//! diverse beam search ([`retrieval`]). The [`metrics`], [`stats`], [`synth`]
//! and [`experiment`] modules provide the offline evaluation harness.
//!
//! Everything here is deterministic given its inputs and seeds, and all
//! per-element storage is `f32` with `f64` accumulation. The crate is
//! `no_std`-compatible (with `alloc`); enable the `libm` feature when
//! building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("semid-core requires either the `std` or the `libm` feature");

pub mod embedding;
pub mod enmf;
pub mod error;
pub mod experiment;
pub mod fusion;
pub mod id_space;
pub mod kmeans;
pub mod math;
pub mod matrix;
pub mod metrics;
pub mod quantizer;
pub mod retrieval;
pub mod rng;
pub mod stats;
pub mod synth;
pub mod trie;

pub use embedding::{Catalog, EmbeddingMatrix, InteractionLog, QuerySet};
pub use error::Error;
pub use matrix::Matrix;
