//! The mdbook guide under `book/`, re-exposed as rustdoc so that every
//! code block in every chapter compiles and runs as a doc-test:
//!
//! ```console
//! cargo test -p champ-ppc-guide --doc
//! ```
//!
//! The chapter files are included verbatim; editing `book/src/*.md` is
//! the only way to change this crate's documentation.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/digit-stream.md")]
pub mod digit_stream {}

#[doc = include_str!("../../../book/src/shift-sequences.md")]
pub mod shift_sequences {}

#[doc = include_str!("../../../book/src/pair-correlations.md")]
pub mod pair_correlations {}

#[doc = include_str!("../../../book/src/counting-formulas.md")]
pub mod counting_formulas {}

#[doc = include_str!("../../../book/src/brute-force-oracle.md")]
pub mod brute_force_oracle {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
