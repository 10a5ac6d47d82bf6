//! Compression of n identical copies of a pure d-dimensional quantum state
//! into a register of dimension `C(n+d-1, d-1)`.
//!
//! The construction walks the symmetric tower `Q_[1] -> Q_[2] -> ... -> Q_[n]`
//! of one-row U(d) irreps: at step k a Clebsch-Gordan isometry absorbs one
//! more letter into the weight-k symmetric block. Each isometry is assembled
//! recursively over the subgroup chain `U(1) < U(2) < ... < U(d)` from
//! reduced Wigner coefficients, so the cascade never touches the full
//! `d^n`-dimensional space.
//!
//! Modules:
//! - [`combinatorics`]: partitions, Gelfand-Zetlin patterns, canonical bases.
//! - [`wigner`]: reduced Wigner coefficients of the box-addition operator.
//! - [`cg`]: assembled Clebsch-Gordan isometries and unitaries.
//! - [`compressor`]: the compression cascade, dense validation path, and
//!   decompression.
//! - [`oracle`]: independent brute-force references used for verification.
//! - [`verify`]: runnable property suites over all of the above.
//!
//! The crate is data-parallel by default (feature `parallel`, backed by
//! rayon); build with `--no-default-features` for a strictly sequential
//! version. Both produce bit-identical results: parallelism is only ever
//! applied across independent output slots.

pub mod cg;
pub mod combinatorics;
pub mod compressor;
pub mod error;
pub mod oracle;
pub mod verify;
pub mod wigner;

pub use cg::{build_cg_d1, build_cg_full, build_cg_symmetric, complete_to_unitary, CgBlock, CgIsometry, CgUnitary};
pub use combinatorics::{
    binomial, dim_irrep, dim_symmetric, enumerate_occupations, enumerate_patterns,
    occupation_index, occupation_of_pattern, pattern_of_occupation, GelfandPattern,
    OccupationVector, Partition,
};
pub use compressor::{
    compress, compress_dense, compress_sequential, decompress, estimate_cost, CompressedState,
    DenseState, PureQudit,
};
pub use error::{Error, Result};
pub use wigner::{reduced_wigner, shifted_weight, sign_s, WignerContext};

// re-exported so downstream code builds matrices against the same version
pub use ndarray;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
