//! Brute-force ground truth: scan the real digit block and count.
//!
//! Everything in `patterncount` is a formula about what *should* happen
//! inside the block of words of length `d`. This module builds that block
//! bit-for-bit, slides real windows across it, and counts what *does*
//! happen. The two must agree up to block-edge effects, and `verify` turns
//! the comparison into a machine-readable report instead of trusting either
//! side.
//!
//! Two scan scopes exist because the formulas are slightly ambiguous about
//! edges: [`Scope::Interior`] admits only windows lying entirely inside the
//! block, while [`Scope::WithContext`] anchors windows anywhere in the block
//! and lets them run into genuine stream context on the right. The second is
//! the better model of the counting arguments (occurrences are attached to
//! word positions, not clipped windows) and is the default for comparisons.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::champernowne::{Champernowne, StreamPosition};
use crate::paircorr::Threshold;
use crate::patterncount::{self, AppendixMode, BlockParams, FormulaForm, MatchHistogram};
use crate::shifts::SequenceSample;
use crate::{Error, Result};

/// Largest `d` for which the full block is materialized (d = 20 is about
/// 10.5 Mbit).
pub const MAX_BUILD_D: u32 = 20;
/// Largest `d` for equal-window pair scans.
pub const MAX_SCAN_D: u32 = 16;
/// Largest `d` for the boundary-pattern scans and the full report.
pub const MAX_REPORT_D: u32 = 14;
/// Largest sample length accepted by the quadratic reference counter.
pub const MAX_NAIVE_LEN: u64 = 5000;

/// Which window anchors a scan admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Windows fully inside the block: anchors `0 ..= len - width`.
    Interior,
    /// Anchors anywhere in the block (`0 ..= len - 1`); windows may run
    /// into the true-stream margin on the right.
    WithContext,
}

impl Scope {
    pub fn name(&self) -> &'static str {
        match self {
            Scope::Interior => "interior",
            Scope::WithContext => "with_context",
        }
    }
}

/// The digit block of all `d`-bit words in order, plus optional margins of
/// true stream context on both sides, packed 8 bits per byte (big-endian
/// within each byte).
#[derive(Debug, Clone)]
pub struct BlockBits {
    d: u32,
    bits: Vec<u8>,
    left_margin: u64,
    interior_len: u64,
    right_margin: u64,
}

impl BlockBits {
    /// Builds the block for word length `d` with up to `margin` context bits
    /// on each side. The left margin is clamped to the stream prefix that
    /// actually exists before the block.
    pub fn build(d: u32, margin: u64) -> Result<BlockBits> {
        if d == 0 {
            return Err(Error::DomainViolation(
                "block word length must be at least 1".into(),
            ));
        }
        if d > MAX_BUILD_D {
            return Err(Error::BlockTooLarge {
                d,
                max: MAX_BUILD_D,
            });
        }
        let champ = Champernowne::binary();
        let start = champ.block_start(d);
        let start_index = start.index().to_u64().expect("block start fits u64");
        let left_margin = margin.min(start_index - 1);
        let interior_len = u64::from(d) << (d - 1);
        let right_margin = margin;
        let total = left_margin + interior_len + right_margin;

        let first = StreamPosition::new(start_index - left_margin)?;
        let mut bits = vec![0u8; total.div_ceil(8) as usize];
        for (idx, digit) in champ.stream_from(&first).take(total as usize).enumerate() {
            if digit != 0 {
                bits[idx / 8] |= 1 << (7 - (idx % 8) as u32);
            }
        }
        Ok(BlockBits {
            d,
            bits,
            left_margin,
            interior_len,
            right_margin,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Interior length `d · 2^(d-1)`.
    pub fn interior_len(&self) -> u64 {
        self.interior_len
    }

    pub fn left_margin(&self) -> u64 {
        self.left_margin
    }

    pub fn right_margin(&self) -> u64 {
        self.right_margin
    }

    fn raw_bit(&self, idx: u64) -> u64 {
        u64::from((self.bits[(idx / 8) as usize] >> (7 - (idx % 8) as u32)) & 1)
    }

    /// Bit at `offset` relative to the block start; negative offsets read
    /// the left margin, offsets past the interior read the right margin.
    pub fn bit(&self, offset: i64) -> u8 {
        let idx = offset + self.left_margin as i64;
        assert!(
            idx >= 0 && (idx as u64) < self.left_margin + self.interior_len + self.right_margin,
            "bit offset {offset} outside built range"
        );
        self.raw_bit(idx as u64) as u8
    }

    /// The `width`-bit window anchored at `offset` (relative to block
    /// start), MSB first.
    pub fn window_at(&self, offset: i64, width: u32) -> u64 {
        assert!((1..=64).contains(&width));
        let mut value = 0u64;
        for t in 0..i64::from(width) {
            value = (value << 1) | u64::from(self.bit(offset + t));
        }
        value
    }

    /// Interior bits repacked from bit 0, for raw export: 8 bits per byte,
    /// big-endian within each byte, zero padding in the last byte.
    pub fn export_interior(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.interior_len.div_ceil(8) as usize];
        for idx in 0..self.interior_len {
            if self.raw_bit(idx + self.left_margin) != 0 {
                out[(idx / 8) as usize] |= 1 << (7 - (idx % 8) as u32);
            }
        }
        out
    }

    /// Multiset of `width`-bit windows over the scope's anchors.
    fn window_counts(&self, width: u32, scope: Scope) -> Result<HashMap<u64, u64>> {
        assert!((1..=64).contains(&width));
        let width = u64::from(width);
        let last_anchor = match scope {
            Scope::Interior => {
                if self.interior_len < width {
                    return Ok(HashMap::new());
                }
                self.interior_len - width
            }
            Scope::WithContext => {
                let needed = width - 1;
                if self.right_margin < needed {
                    return Err(Error::ScopeExceedsMargin {
                        needed,
                        margin: self.right_margin,
                    });
                }
                self.interior_len - 1
            }
        };
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        let mut counts: HashMap<u64, u64> = HashMap::new();
        let mut value = 0u64;
        for t in 0..width - 1 {
            value = (value << 1) | self.raw_bit(self.left_margin + t);
        }
        for anchor in 0..=last_anchor {
            value = ((value << 1) | self.raw_bit(self.left_margin + anchor + width - 1)) & mask;
            *counts.entry(value).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

fn check_scan_params(bits: &BlockBits, e: u32, max_d: u32) -> Result<()> {
    if e < 1 {
        return Err(Error::DomainViolation(format!(
            "overlap e must be >= 1, got {e}"
        )));
    }
    if bits.d > max_d {
        return Err(Error::BlockTooLarge {
            d: bits.d,
            max: max_d,
        });
    }
    Ok(())
}

/// Ordered pairs of anchors whose `(d+e)`-bit windows are equal, over all
/// window values (no family restriction): group equal windows, sum
/// `m(m-1)`.
pub fn count_equal_window_pairs(bits: &BlockBits, e: u32, scope: Scope) -> Result<u64> {
    check_scan_params(bits, e, MAX_SCAN_D)?;
    let counts = bits.window_counts(bits.d + e, scope)?;
    Ok(counts.values().map(|&m| m * (m - 1)).sum())
}

/// Does the window's `e`-bit prefix equal its `e`-bit suffix? This is the
/// family of patterns the main count is about.
fn in_family(value: u64, d: u32, e: u32) -> bool {
    let mask_e = (1u64 << e) - 1;
    (value >> d) & mask_e == value & mask_e
}

/// Number of ones in the middle block `a_{e+1} .. a_d` of the window.
fn middle_ones(value: u64, d: u32, e: u32) -> u32 {
    let mask_mid = (1u64 << (d - e)) - 1;
    ((value >> e) & mask_mid).count_ones()
}

fn family_histogram(
    bits: &BlockBits,
    e: u32,
    scope: Scope,
    want_k: Option<u32>,
) -> Result<MatchHistogram> {
    check_scan_params(bits, e, MAX_SCAN_D)?;
    if bits.d < e + 2 {
        return Err(Error::DomainViolation(format!(
            "family histogram needs d >= e + 2, got d = {}, e = {e}",
            bits.d
        )));
    }
    let counts = bits.window_counts(bits.d + e, scope)?;
    let mut hist = MatchHistogram::new();
    for (&value, &m) in &counts {
        if !in_family(value, bits.d, e) {
            continue;
        }
        if let Some(k) = want_k {
            if middle_ones(value, bits.d, e) != k {
                continue;
            }
        }
        hist.add(m, BigUint::from(1u32));
    }
    Ok(hist)
}

/// Observed multiplicity histogram over the family patterns (prefix `e`
/// bits equal suffix `e` bits): how many such patterns occur exactly `m`
/// times in scope. Patterns that never occur are absent.
pub fn oracle_match_histogram(bits: &BlockBits, e: u32, scope: Scope) -> Result<MatchHistogram> {
    family_histogram(bits, e, scope, None)
}

/// The same histogram restricted to patterns with exactly `k` ones in the
/// middle block.
pub fn oracle_match_histogram_for_k(
    bits: &BlockBits,
    e: u32,
    scope: Scope,
    k: u32,
) -> Result<MatchHistogram> {
    family_histogram(bits, e, scope, Some(k))
}

/// Ordered position pairs of boundary-pattern occurrences sharing their
/// first `j` bits: every (B-occurrence, C-occurrence) combination counts
/// twice, once per orientation, the same ordered-pair convention as every
/// other count here.
///
/// `B` is the `(w+1)`-bit shape `prefix 0 1...1 1` and `C` the shape
/// `prefix 1 0...0 0` (prefix length `j`, `w = d + e`). The window values
/// differ by exactly 1, so every such pair sits within `1/2^w` on the
/// circle without sharing a window — the pairs the equal-window count
/// misses.
pub fn count_bc_pattern_pairs(bits: &BlockBits, e: u32, j: u32, scope: Scope) -> Result<u64> {
    check_scan_params(bits, e, MAX_REPORT_D)?;
    let w = bits.d + e;
    if j < bits.d || j > w - 1 {
        return Err(Error::DomainViolation(format!(
            "shared prefix length j must satisfy d <= j <= d+e-1, got j = {j} at d = {}, e = {e}",
            bits.d
        )));
    }
    let suffix_len = w + 1 - j;
    let b_suffix = (1u64 << (w - j)) - 1; // 0 then (w - j) ones
    let c_suffix = 1u64 << (w - j); // 1 then (w - j) zeros
    let suffix_mask = (1u64 << suffix_len) - 1;

    let counts = bits.window_counts(w + 1, scope)?;
    let mut b_by_prefix: HashMap<u64, u64> = HashMap::new();
    let mut c_by_prefix: HashMap<u64, u64> = HashMap::new();
    for (&value, &m) in &counts {
        let suffix = value & suffix_mask;
        let prefix = value >> suffix_len;
        if suffix == b_suffix {
            *b_by_prefix.entry(prefix).or_insert(0) += m;
        } else if suffix == c_suffix {
            *c_by_prefix.entry(prefix).or_insert(0) += m;
        }
    }
    let mut combinations = 0u64;
    for (prefix, b) in &b_by_prefix {
        if let Some(c) = c_by_prefix.get(prefix) {
            combinations += b * c;
        }
    }
    Ok(combinations * 2)
}

/// Quadratic reference for the certified pair counter: evaluates the
/// defining inequalities `(delta ± 1)·q·T <= p·2^w` pair by pair, with no
/// sorting, no cutoff precomputation and no sweep. Everything fits `u128`
/// because the threshold guard enforces `q·N < 2^62` and `delta <= 2^63`.
pub fn naive_close_pairs(sample: &SequenceSample, threshold: &Threshold) -> Result<(u64, u64)> {
    if sample.len() > MAX_NAIVE_LEN {
        return Err(Error::SampleTooLarge {
            n_len: sample.len(),
            max: MAX_NAIVE_LEN,
        });
    }
    if sample.width != threshold.width() || sample.len() != threshold.n_len() {
        return Err(Error::DomainViolation(
            "sample and threshold disagree on width or length".into(),
        ));
    }
    let (scale_lo, scale_hi) = threshold.scale_enclosure();
    let scale_lo = scale_lo.to_u128().expect("scale fits for N <= 5000");
    let scale_hi = scale_hi.to_u128().expect("scale fits for N <= 5000");
    let q = u128::from(*threshold.s().denom());
    let rhs = u128::from(*threshold.s().numer()) << threshold.width();
    let modulus = 1u128 << threshold.width();

    let values = &sample.values;
    let mut lower = 0u64;
    let mut upper = 0u64;
    for l in 0..values.len() {
        for m in 0..values.len() {
            if l == m {
                continue;
            }
            let diff = u128::from(values[l].abs_diff(values[m]));
            let delta = diff.min(modulus - diff);
            if (delta + 1) * q * scale_hi <= rhs {
                lower += 1;
            }
            if delta.saturating_sub(1) * q * scale_lo <= rhs {
                upper += 1;
            }
        }
    }
    Ok((lower, upper))
}

/// Per-row outcome of a formula-versus-scan comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The two values agree exactly (or the stated bound holds exactly).
    Match,
    /// The scan found at least the formula value, as the formula promises.
    LowerBoundHolds,
    /// The values disagree; both are reported, nothing is hidden.
    DeviationLogged,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::LowerBoundHolds => "lower-bound-holds",
            Verdict::DeviationLogged => "deviation-logged",
        }
    }
}

/// One comparison row: the formula's value, the scan's value, the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct TotalsRow {
    pub formula_value: u64,
    pub oracle_value: u64,
    pub verdict: Verdict,
}

/// Full formula-versus-block comparison for one `(d, e)`.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub d: u32,
    pub e: u32,
    pub scope: Scope,
    pub totals: BTreeMap<&'static str, TotalsRow>,
    /// Observed multiplicity histogram of the family patterns.
    pub histogram_observed: BTreeMap<u64, u64>,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, name: &str) -> Option<&TotalsRow> {
        self.totals.get(name)
    }

    /// True when no row carries a deviation verdict.
    pub fn clean(&self) -> bool {
        self.totals
            .values()
            .all(|r| r.verdict != Verdict::DeviationLogged)
    }
}

fn exact_row(formula: u64, oracle: u64) -> TotalsRow {
    let verdict = if formula == oracle {
        Verdict::Match
    } else {
        Verdict::DeviationLogged
    };
    TotalsRow {
        formula_value: formula,
        oracle_value: oracle,
        verdict,
    }
}

fn lower_bound_row(formula: u64, oracle: u64) -> TotalsRow {
    let verdict = if formula == oracle {
        Verdict::Match
    } else if oracle > formula {
        Verdict::LowerBoundHolds
    } else {
        Verdict::DeviationLogged
    };
    TotalsRow {
        formula_value: formula,
        oracle_value: oracle,
        verdict,
    }
}

fn small(value: &BigUint) -> u64 {
    value.to_u64().expect("report values fit u64 for d <= 14")
}

/// Evaluates every formula against the real block at `(d, e)` and reports
/// row by row. Deviations become verdicts, never errors: the report is the
/// place to look, not a panic. Uses the with-context scope, the scope the
/// counting arguments model best.
pub fn verify(d: u32, e: u32) -> Result<OracleReport> {
    verify_in_scope(d, e, Scope::WithContext)
}

/// `verify` with an explicit scan scope. Interior scans clip windows at the
/// block edge, so expect more logged deviations there.
pub fn verify_in_scope(d: u32, e: u32, scope: Scope) -> Result<OracleReport> {
    let params = BlockParams::new(d, e)?;
    if d > MAX_REPORT_D {
        return Err(Error::BlockTooLarge {
            d,
            max: MAX_REPORT_D,
        });
    }
    let w = d + e;
    let bits = BlockBits::build(d, u64::from(w) + 1)?;

    let observed_hist = oracle_match_histogram(&bits, e, scope)?;
    let family_pairs = small(&observed_hist.ordered_pair_total());
    let total_pairs = count_equal_window_pairs(&bits, e, scope)?;

    let mut totals: BTreeMap<&'static str, TotalsRow> = BTreeMap::new();

    let main = small(&patterncount::main_pair_count(&params).value);
    totals.insert("main_pair_count", exact_row(main, family_pairs));
    let alt = small(&patterncount::main_pair_count_alt(&params).value);
    totals.insert("main_pair_count_alt", exact_row(alt, family_pairs));
    let dominant = small(&patterncount::dominant_term(&params).value);
    totals.insert("dominant_term", lower_bound_row(dominant, total_pairs));

    let predicted_hist = patterncount::predicted_match_histogram(&params);
    totals.insert(
        "predicted_histogram_pairs",
        exact_row(small(&predicted_hist.ordered_pair_total()), family_pairs),
    );

    // spot tallies: family patterns with one middle one occurring twice,
    // and with two middle ones occurring three times
    let k1_m2 = small(&oracle_match_histogram_for_k(&bits, e, scope, 1)?.get(2));
    let predicted_k1_m2 = small(&patterncount::predicted_match_histogram_for_k(&params, 1).get(2));
    totals.insert("histogram_k1_m2", exact_row(predicted_k1_m2, k1_m2));
    let k2_m3 = small(&oracle_match_histogram_for_k(&bits, e, scope, 2)?.get(3));
    let predicted_k2_m3 = small(&patterncount::predicted_match_histogram_for_k(&params, 2).get(3));
    totals.insert("histogram_k2_m3", exact_row(predicted_k2_m3, k2_m3));

    if e >= 2 {
        let carry_sum =
            small(&patterncount::carry_chain_pair_count(&params, FormulaForm::Sum)?.value);
        let carry_closed =
            small(&patterncount::carry_chain_pair_count(&params, FormulaForm::Closed)?.value);
        // the bound the divergence argument actually needs
        let bound = 1u64 << (d + 1);
        let verdict = if carry_sum < bound {
            Verdict::Match
        } else {
            Verdict::DeviationLogged
        };
        totals.insert(
            "carry_chain_bound",
            TotalsRow {
                formula_value: carry_sum,
                oracle_value: bound,
                verdict,
            },
        );
        totals.insert("carry_chain_forms", exact_row(carry_sum, carry_closed));
    }

    if params.middle_len() >= 3 {
        let all_ones = small(&patterncount::all_ones_pair_count(&params)?.value);
        totals.insert(
            "all_ones_pair_count",
            lower_bound_row(all_ones, total_pairs),
        );
    }

    if params.middle_len() >= 5 {
        let closed = small(
            &patterncount::appendix_pair_count(&params, AppendixMode::JEqD)?
                .closed_form
                .value,
        );
        let bc = count_bc_pattern_pairs(&bits, e, d, scope)?;
        totals.insert("bc_pairs_j_eq_d", lower_bound_row(closed, bc));
    }

    if e >= 2 {
        let closed = small(
            &patterncount::appendix_pair_count(&params, AppendixMode::JGtD)?
                .closed_form
                .value,
        );
        let mut bc_total = 0u64;
        for j in (d + 1)..=(d + e - 1) {
            bc_total += count_bc_pattern_pairs(&bits, e, j, scope)?;
        }
        totals.insert("bc_pairs_j_gt_d", lower_bound_row(closed, bc_total));
    }

    let mut histogram_observed = BTreeMap::new();
    for (m, c) in observed_hist.iter() {
        histogram_observed.insert(*m, small(c));
    }

    Ok(OracleReport {
        d,
        e,
        scope,
        totals,
        histogram_observed,
    })
}
