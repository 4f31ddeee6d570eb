//! The shift sequence `x_n = {2^n α}` of the binary Champernowne constant,
//! plus the reference sequences used to validate the statistic.
//!
//! A shift is represented exactly by its first `w` fractional bits: the
//! numerator `X` with `X/2^w <= x_n < (X+1)/2^w`. Shifting by `2^n` just
//! moves the read head, so `X` is the `w`-bit window starting at stream
//! position `n + 1`. All sequences store `w`-bit numerators, never floats;
//! `w` is capped at 64 so a numerator is one machine word.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::champernowne::{Champernowne, StreamPosition};
use crate::numeric::bit_length;
use crate::{Error, Result};

/// Maximum supported numerator width in bits.
pub const MAX_WIDTH: u32 = 64;

/// The four sequence families the statistic is run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// Shifts of the binary Champernowne constant.
    Champernowne,
    /// Independent seeded `w`-bit values; the Poissonian baseline.
    Uniform,
    /// `X_n = n·A mod 2^w`, the rotation by `A/2^w`; never Poissonian.
    Kronecker,
    /// `X_n = ⌊2^w·√n⌋ mod 2^w`; a known Poissonian sequence.
    SqrtN,
}

impl SequenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceKind::Champernowne => "champernowne",
            SequenceKind::Uniform => "uniform",
            SequenceKind::Kronecker => "kronecker",
            SequenceKind::SqrtN => "sqrt_n",
        }
    }
}

/// One shift `x_n` truncated to `width` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftPoint {
    pub n: u64,
    pub numerator: u64,
    pub width: u32,
}

/// A finite sequence of `w`-bit numerators together with how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSample {
    pub kind: SequenceKind,
    pub width: u32,
    pub values: Vec<u64>,
    pub seed: Option<u64>,
    pub parameter: Option<u64>,
}

impl SequenceSample {
    /// Sequence length `N`.
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Wrap externally produced numerators, checking they fit the width.
    pub fn from_values(
        kind: SequenceKind,
        width: u32,
        values: Vec<u64>,
        seed: Option<u64>,
        parameter: Option<u64>,
    ) -> Result<Self> {
        check_width(width)?;
        let mask = width_mask(width);
        if let Some(v) = values.iter().find(|v| **v & !mask != 0) {
            return Err(Error::DomainViolation(format!(
                "value {v} does not fit in {width} bits"
            )));
        }
        Ok(SequenceSample {
            kind,
            width,
            values,
            seed,
            parameter,
        })
    }
}

fn check_width(width: u32) -> Result<()> {
    if !(1..=MAX_WIDTH).contains(&width) {
        return Err(Error::WidthOutOfRange(width));
    }
    Ok(())
}

/// All-ones mask of `width` bits.
pub fn width_mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// The shift `x_n` as a `width`-bit truncation. `n = 0` gives the constant
/// itself; public sequences start at `n = 1`.
pub fn shift_point(n: u64, width: u32) -> Result<ShiftPoint> {
    check_width(width)?;
    let stream = Champernowne::binary();
    let start = StreamPosition::new(n + 1).expect("n + 1 >= 1");
    let window = stream.window(&start, width)?;
    Ok(ShiftPoint {
        n,
        numerator: window.value.to_u64().expect("width <= 64"),
        width,
    })
}

/// The first `N` shifts `x_1 .. x_N` in one streaming pass over digits
/// `2 .. N + width` of the constant.
pub fn champernowne_sequence(n_len: u64, width: u32) -> Result<SequenceSample> {
    check_width(width)?;
    let mask = width_mask(width);
    let stream = Champernowne::binary();
    let mut digits = stream.stream_from(&StreamPosition::new(2u32).expect("2 >= 1"));
    let mut value: u64 = 0;
    for _ in 0..width {
        value = (value << 1) | u64::from(digits.next_digit());
    }
    let mut values = Vec::with_capacity(n_len as usize);
    if n_len > 0 {
        values.push(value);
        for _ in 1..n_len {
            value = ((value << 1) | u64::from(digits.next_digit())) & mask;
            values.push(value);
        }
    }
    Ok(SequenceSample {
        kind: SequenceKind::Champernowne,
        width,
        values,
        seed: None,
        parameter: None,
    })
}

/// `N` independent `width`-bit values from a seeded ChaCha stream. The same
/// seed always reproduces the same sample, on every platform.
pub fn uniform_sequence(n_len: u64, width: u32, seed: u64) -> Result<SequenceSample> {
    check_width(width)?;
    let mask = width_mask(width);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n_len).map(|_| rng.next_u64() & mask).collect();
    Ok(SequenceSample {
        kind: SequenceKind::Uniform,
        width,
        values,
        seed: Some(seed),
        parameter: None,
    })
}

/// The rotation `X_n = n·A mod 2^width` for `n = 1 .. N`.
pub fn kronecker_sequence(n_len: u64, width: u32, parameter: u64) -> Result<SequenceSample> {
    check_width(width)?;
    let mask = u128::from(width_mask(width));
    let a = u128::from(parameter);
    let values = (1..=n_len)
        .map(|n| ((u128::from(n) * a) & mask) as u64)
        .collect();
    Ok(SequenceSample {
        kind: SequenceKind::Kronecker,
        width,
        values,
        seed: None,
        parameter: Some(parameter),
    })
}

/// `⌊2^width·(√5-1)/2⌋`, the golden rotation step, via an exact integer
/// square root: `⌊√(5·2^(2(width-1)))⌋ - 2^(width-1)`.
pub fn golden_numerator(width: u32) -> Result<u64> {
    check_width(width)?;
    let half = BigUint::from(1u32) << (width - 1);
    let root = (BigUint::from(5u32) << (2 * (width - 1))).sqrt();
    (root - half).to_u64().ok_or(Error::WidthOutOfRange(width))
}

/// `X_n = ⌊2^width·√n⌋ mod 2^width` for `n = 1 .. N`, floor semantics via the
/// integer square root of `n·2^(2·width)`.
pub fn sqrt_sequence(n_len: u64, width: u32) -> Result<SequenceSample> {
    check_width(width)?;
    let mask = width_mask(width);
    let use_u128 = 2 * width + bit_length(n_len) <= 126;
    let values = (1..=n_len)
        .map(|n| {
            if use_u128 {
                ((u128::from(n) << (2 * width)).sqrt() as u64) & mask
            } else {
                let root = (BigUint::from(n) << (2 * width)).sqrt();
                let reduced = root & BigUint::from(mask);
                reduced.to_u64().expect("masked to width bits")
            }
        })
        .collect();
    Ok(SequenceSample {
        kind: SequenceKind::SqrtN,
        width,
        values,
        seed: None,
        parameter: None,
    })
}

/// Dispatcher used by the CLI: build any sequence kind from its parameters.
pub fn reference_sequence(
    kind: SequenceKind,
    n_len: u64,
    width: u32,
    seed: Option<u64>,
    parameter: Option<u64>,
) -> Result<SequenceSample> {
    match kind {
        SequenceKind::Champernowne => champernowne_sequence(n_len, width),
        SequenceKind::Uniform => uniform_sequence(n_len, width, seed.ok_or(Error::MissingSeed)?),
        SequenceKind::Kronecker => {
            kronecker_sequence(n_len, width, parameter.ok_or(Error::MissingParameter)?)
        }
        SequenceKind::SqrtN => sqrt_sequence(n_len, width),
    }
}
