//! Small exact-arithmetic helpers shared by the statistic and report code:
//! rational parsing, directed decimal rendering and integer root enclosures.
//!
//! Nothing here ever rounds through floating point; every value is an integer
//! or a ratio of integers, and every rendering direction is explicit.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Rounding direction for decimal renderings of exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundDir {
    /// Truncate towards zero (safe for lower bounds).
    Floor,
    /// Round away from zero when any remainder is left (safe for upper bounds).
    Ceil,
}

/// Parse a nonnegative rational from `"p/q"`, an integer literal, or a
/// decimal literal such as `"1.2"`.
///
/// The result is always reduced. `"0.3"` parses to `3/10`, `"1.2"` to `6/5`.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: u64 = num.trim().parse().map_err(|_| bad())?;
        let q: u64 = den.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let scale = 10u64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
        let frac_val: u64 = frac_part.parse().map_err(|_| bad())?;
        let num = int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        return Ok(Ratio::new(num, scale));
    }
    let p: u64 = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(p))
}

/// Render `num/den` with a fixed number of fractional digits.
///
/// `Floor` truncates; `Ceil` bumps the last digit whenever a nonzero
/// remainder is dropped, carrying into the integer part if needed. Used so a
/// printed lower bound never exceeds the exact value and a printed upper
/// bound never undercuts it.
pub fn decimal_string(num: &BigUint, den: &BigUint, digits: usize, dir: RoundDir) -> String {
    assert!(!den.is_zero(), "decimal_string: zero denominator");
    let (int_part, mut rem) = num.div_rem(den);
    let mut out = int_part.to_str_radix(10);
    if digits == 0 {
        if dir == RoundDir::Ceil && !rem.is_zero() {
            out = (int_part + 1u32).to_str_radix(10);
        }
        return out;
    }
    out.push('.');
    let ten = BigUint::from(10u32);
    let mut frac = Vec::with_capacity(digits);
    for _ in 0..digits {
        rem *= &ten;
        let (digit, r) = rem.div_rem(den);
        frac.push(u8::try_from(&digit % &ten).unwrap_or(9) + b'0');
        rem = r;
    }
    if dir == RoundDir::Ceil && !rem.is_zero() {
        // propagate the +1 through trailing nines
        let mut i = frac.len();
        loop {
            if i == 0 {
                // carry into the integer part; all fractional digits were 9
                let bumped = num.div_rem(den).0 + 1u32;
                let mut s = bumped.to_str_radix(10);
                s.push('.');
                s.extend(std::iter::repeat_n('0', digits));
                return s;
            }
            i -= 1;
            if frac[i] == b'9' {
                frac[i] = b'0';
            } else {
                frac[i] += 1;
                break;
            }
        }
    }
    out.push_str(std::str::from_utf8(&frac).unwrap());
    out
}

/// Enclosure `[lo, hi]` of `base^(u/v)` by directed integer roots:
/// `lo = ⌊(base^u)^(1/v)⌋` and `hi = lo` when the root is exact, `lo + 1`
/// otherwise.
pub fn pow_ratio_enclosure(base: u64, u: u64, v: u64) -> (BigUint, BigUint) {
    assert!(v >= 1, "pow_ratio_enclosure: zero root index");
    let power = BigUint::from(base).pow(u32::try_from(u).expect("exponent fits u32"));
    let v32 = u32::try_from(v).expect("root index fits u32");
    let lo = power.nth_root(v32);
    let hi = if lo.clone().pow(v32) == power {
        lo.clone()
    } else {
        &lo + 1u32
    };
    (lo, hi)
}

/// Floor integer square root of an arbitrary-precision integer.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Number of bits needed to write `n` in binary (`0` for `n = 0`): the
/// ceiling of `log2(n + 1)`.
pub fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// Validate `beta = u/v` is a rational in `(0, 1]`.
pub fn check_beta(beta: Ratio<u64>) -> Result<()> {
    if beta.numer().is_zero() || beta > Ratio::one() {
        return Err(Error::BetaOutOfRange(format!(
            "{}/{}",
            beta.numer(),
            beta.denom()
        )));
    }
    Ok(())
}
