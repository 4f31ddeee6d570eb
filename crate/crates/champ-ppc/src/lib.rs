//! Exact pair-correlation statistics for shifts of the binary Champernowne
//! constant.
//!
//! The library builds the digit stream of the Champernowne constant
//! `0.(1)(10)(11)(100)(101)..._2`, constructs the shift sequence
//! `x_n = {2^n α}` as fixed-width integer truncations, counts close pairs on
//! the circle with exact integer threshold arithmetic, evaluates the
//! combinatorial formulas that predict the number of coinciding bit patterns,
//! and cross-checks everything against brute-force scans of the actual bit
//! blocks.
//!
//! Modules:
//!
//! * [`champernowne`] — indexable digit stream and block geometry, any base.
//! * [`shifts`] — the shift sequence and reference sequences (uniform,
//!   Kronecker, `√n`) as `w`-bit numerators.
//! * [`paircorr`] — exact close-pair counting and the (weak) pair-correlation
//!   statistic.
//! * [`patterncount`] — big-integer evaluation of the pattern-counting
//!   formulas.
//! * [`oracle`] — brute-force ground truth over the real bit blocks.
//! * [`cli`] — the command-line front end used by the `champ-ppc` binary.
//!
//! The one-screen version of the whole story — the shift sequence is
//! measurably less random than random, and every bound is certified:
//!
//! ```
//! use champ_ppc::paircorr::ppc_statistic;
//! use champ_ppc::shifts::{champernowne_sequence, uniform_sequence};
//! use champ_ppc::Ratio;
//!
//! let n = 1 << 11;
//! let s = Ratio::new(1, 1);
//!
//! // seeded uniform points: the statistic hugs the Poissonian value 2s = 2
//! let control = ppc_statistic(&uniform_sequence(n, 32, 1).unwrap(), s).unwrap();
//! assert!((control.norm_upper_f64() - 2.0).abs() < 0.2);
//!
//! // the digit-shift sequence at the same size is already far above it,
//! // with lower and upper certified counts in exact agreement
//! let shifts = ppc_statistic(&champernowne_sequence(n, 32).unwrap(), s).unwrap();
//! assert_eq!(shifts.count_lower, shifts.count_upper);
//! assert_eq!(shifts.norm_lower_string(9), "2.617187500");
//! ```

pub mod champernowne;
pub mod cli;
pub mod numeric;
pub mod oracle;
pub mod paircorr;
pub mod patterncount;
pub mod shifts;

mod error;

pub use error::{Error, Result};

// Re-exported so downstream code and the guide snippets can name rational
// thresholds without depending on num-rational directly.
pub use num_rational::Ratio;
