//! Indexable digit stream of the Champernowne constant in base `b`.
//!
//! The base-`b` Champernowne constant is the concatenation of the base-`b`
//! expansions of 1, 2, 3, ... after the radix point. In base 2 that is
//! `0.1101110010111011..._2`. The fractional digits split into *blocks*: the
//! block of word length `d` holds the `(b-1)·b^(d-1)` words with exactly `d`
//! digits and a nonzero leading digit, in increasing order, so its total
//! length is `d·(b-1)·b^(d-1)`.
//!
//! Everything here is exact: stream positions, word ordinals and window
//! values are arbitrary-precision integers. Positions are 1-based (digit 1 is
//! the first fractional digit); word ordinals and digit offsets inside a word
//! are 0-based.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// 1-based index of a digit in the fractional expansion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StreamPosition(BigUint);

impl StreamPosition {
    /// Wrap an index, rejecting 0.
    pub fn new(index: impl Into<BigUint>) -> Result<Self> {
        let index = index.into();
        if index.is_zero() {
            return Err(Error::ZeroPosition);
        }
        Ok(StreamPosition(index))
    }

    pub fn index(&self) -> &BigUint {
        &self.0
    }
}

impl std::fmt::Display for StreamPosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Where a stream position falls in the block structure: word length `d`,
/// 0-based word ordinal `n` within the block, and 0-based digit offset `r`
/// from the most significant digit of that word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLocation {
    pub word_length: u32,
    pub word_ordinal: BigUint,
    pub digit_offset: u32,
    pub base: u32,
}

/// A fixed-width run of stream digits read as an unsigned integer, most
/// significant digit first. `value / base^width` is then the fractional value
/// of the expansion truncated to `width` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitWindow {
    pub width: u32,
    pub value: BigUint,
    pub base: u32,
}

/// The digit stream for one base. Construct once, then query positions or
/// open sequential streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Champernowne {
    base: u32,
}

impl Champernowne {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        Ok(Champernowne { base })
    }

    /// The base-2 stream, the only base the counting formulas apply to.
    pub fn binary() -> Self {
        Champernowne { base: 2 }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Stream position of the first digit of the block of words of length
    /// `d`: `1 + Σ_{k=1}^{d-1} k·(b-1)·b^(k-1)`.
    pub fn block_start(&self, d: u32) -> StreamPosition {
        assert!(d >= 1, "word length must be >= 1");
        let b = BigUint::from(self.base);
        let bm1 = BigUint::from(self.base - 1);
        let mut start = BigUint::one();
        let mut pow = BigUint::one(); // b^(k-1)
        for k in 1..d {
            start += BigUint::from(k) * &bm1 * &pow;
            pow *= &b;
        }
        StreamPosition(start)
    }

    /// Inverse of the block geometry: the block location of position `i`.
    pub fn locate(&self, i: &StreamPosition) -> BlockLocation {
        let b = BigUint::from(self.base);
        let bm1 = BigUint::from(self.base - 1);
        let mut d: u32 = 1;
        let mut start = BigUint::one();
        let mut pow = BigUint::one(); // b^(d-1)
        loop {
            let block_len = BigUint::from(d) * &bm1 * &pow;
            if i.0 < &start + &block_len {
                let offset = &i.0 - &start;
                let (n, r) = offset.div_rem(&BigUint::from(d));
                return BlockLocation {
                    word_length: d,
                    word_ordinal: n,
                    digit_offset: r.to_u32().expect("digit offset < d"),
                    base: self.base,
                };
            }
            start += block_len;
            pow *= &b;
            d += 1;
        }
    }

    /// Value of word `n` (0-based) in the block of length `d`:
    /// `b^(d-1) + n`.
    pub fn word_value(&self, d: u32, n: &BigUint) -> Result<BigUint> {
        assert!(d >= 1, "word length must be >= 1");
        let lead = BigUint::from(self.base).pow(d - 1);
        let limit = &lead * BigUint::from(self.base - 1);
        if n >= &limit {
            return Err(Error::WordOrdinalOutOfRange {
                word_length: d,
                ordinal: n.to_string(),
                base: self.base,
            });
        }
        Ok(lead + n)
    }

    /// The digit at stream position `i`.
    pub fn digit_at(&self, i: &StreamPosition) -> u8 {
        let loc = self.locate(i);
        let word = self
            .word_value(loc.word_length, &loc.word_ordinal)
            .expect("locate returns in-range ordinals");
        digit_of_word(&word, loc.word_length, loc.digit_offset, self.base)
    }

    /// Read `width` digits starting at position `i` as one integer, most
    /// significant digit first.
    pub fn window(&self, i: &StreamPosition, width: u32) -> Result<BitWindow> {
        if width < 1 {
            return Err(Error::ZeroWidth);
        }
        let b = BigUint::from(self.base);
        let mut value = BigUint::zero();
        let mut stream = self.stream_from(i);
        for _ in 0..width {
            value = value * &b + BigUint::from(stream.next_digit());
        }
        Ok(BitWindow {
            width,
            value,
            base: self.base,
        })
    }

    /// Open a sequential digit stream starting at position `i`. Yields one
    /// digit per call in amortized constant time.
    pub fn stream_from(&self, i: &StreamPosition) -> DigitStream {
        let loc = self.locate(i);
        let word = self
            .word_value(loc.word_length, &loc.word_ordinal)
            .expect("locate returns in-range ordinals");
        let mut stream = DigitStream {
            base: self.base,
            word_length: loc.word_length,
            word,
            block_end: BigUint::from(self.base).pow(loc.word_length),
            digits: Vec::new(),
            cursor: 0,
        };
        stream.decompose();
        stream.cursor = loc.digit_offset as usize;
        stream
    }
}

/// Extract digit `offset` (0-based from the most significant digit) of a
/// `d`-digit word.
fn digit_of_word(word: &BigUint, d: u32, offset: u32, base: u32) -> u8 {
    let shift = BigUint::from(base).pow(d - 1 - offset);
    ((word / shift) % BigUint::from(base))
        .to_u8()
        .expect("digit < base <= 256")
}

/// Sequential reader over the digit stream. Walks word by word, re-deriving
/// the digit buffer only at word boundaries.
#[derive(Debug, Clone)]
pub struct DigitStream {
    base: u32,
    word_length: u32,
    word: BigUint,
    block_end: BigUint, // b^word_length, first value of the next block
    digits: Vec<u8>,
    cursor: usize,
}

impl DigitStream {
    fn decompose(&mut self) {
        self.digits = self.word.to_radix_be(self.base);
        debug_assert_eq!(self.digits.len(), self.word_length as usize);
        self.cursor = 0;
    }

    /// The next digit of the stream.
    pub fn next_digit(&mut self) -> u8 {
        if self.cursor == self.digits.len() {
            self.word += 1u32;
            if self.word == self.block_end {
                self.word_length += 1;
                self.block_end *= self.base;
            }
            self.decompose();
        }
        let digit = self.digits[self.cursor];
        self.cursor += 1;
        digit
    }
}

impl Iterator for DigitStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        Some(self.next_digit())
    }
}
