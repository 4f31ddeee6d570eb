//! Certified pair-correlation counting over truncated sequences.
//!
//! The pair-correlation statistic asks how many ordered pairs `l != m` of
//! sample points fall within circle distance `s/N^beta` of each other, and
//! normalizes that count by `N^(2-beta)`. Poissonian behaviour means the
//! statistic tends to `2s` (for `beta = 1`); the interesting sequences here
//! are the ones where it provably does not.
//!
//! Points arrive as `w`-bit truncations: the numerator `X` stands for the
//! half-open interval `[X/2^w, (X+1)/2^w)`. Truncation makes every distance
//! uncertain by `1/2^w`, and the scale `N^beta` is usually irrational, so a
//! single count would be a lie. Instead every count is a certified pair of
//! bounds:
//!
//! * `count_lower` admits a pair only when its distance is provably inside
//!   the threshold for every point placement and every value of `N^beta` in
//!   the enclosure;
//! * `count_upper` admits every pair that could possibly be inside.
//!
//! Both reduce to integer comparisons `(delta ± 1)·q·T <= p·2^w`, where
//! `delta` is the circular distance of numerators, `s = p/q`, and `T` is a
//! directed integer enclosure of `N^beta`. Counting is a sort plus a
//! circular two-pointer sweep, `O(N log N)` per threshold.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::numeric::{self, RoundDir};
use crate::shifts::{SequenceSample, MAX_WIDTH};
use crate::{Error, Result};

/// Largest supported sample length; keeps ordered pair counts within `u64`.
pub const MAX_SAMPLE_LEN: u64 = 1 << 32;

/// A validated threshold `s/N^beta` for a sample of length `N` at window
/// width `w`, with the integer enclosure of `N^beta` precomputed.
#[derive(Debug, Clone)]
pub struct Threshold {
    s: Ratio<u64>,
    beta: Ratio<u64>,
    n_len: u64,
    width: u32,
    scale_lo: BigUint,
    scale_hi: BigUint,
}

/// Resolved comparison cutoff: which circular numerator distances qualify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairSpan {
    /// No distance qualifies, not even `delta = 0`.
    Empty,
    /// Distances `delta <= limit` qualify; `limit < 2^(w-1)`.
    UpTo(u64),
    /// Every pair qualifies regardless of distance.
    All,
}

impl Threshold {
    /// Validates the width rules before any counting happens:
    /// `w <= 64`, `w >= ceil(log2 N) + 8` (so truncation error stays well
    /// under typical gaps), and `2^w > 4·q·N` (so the `±1` slack cannot
    /// straddle more than the two intended comparison outcomes).
    pub fn new(s: Ratio<u64>, beta: Ratio<u64>, n_len: u64, width: u32) -> Result<Self> {
        if n_len == 0 {
            return Err(Error::DomainViolation(
                "sample length must be at least 1".into(),
            ));
        }
        if n_len > MAX_SAMPLE_LEN {
            return Err(Error::SampleTooLarge {
                n_len,
                max: MAX_SAMPLE_LEN,
            });
        }
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::WidthOutOfRange(width));
        }
        let needed = ceil_log2(n_len) + 8;
        if width < needed {
            return Err(Error::WidthTooSmall {
                width,
                n_len,
                needed,
            });
        }
        numeric::check_beta(beta)?;
        let guard = BigUint::from(4u32) * BigUint::from(*s.denom()) * BigUint::from(n_len);
        if guard >= (BigUint::one() << width) {
            return Err(Error::DomainViolation(format!(
                "width {width} too small for threshold denominator {} at N = {n_len}: \
                 need 2^w > 4·q·N",
                s.denom()
            )));
        }
        let (scale_lo, scale_hi) =
            numeric::pow_ratio_enclosure(n_len, *beta.numer(), *beta.denom());
        Ok(Threshold {
            s,
            beta,
            n_len,
            width,
            scale_lo,
            scale_hi,
        })
    }

    pub fn s(&self) -> Ratio<u64> {
        self.s
    }

    pub fn beta(&self) -> Ratio<u64> {
        self.beta
    }

    pub fn n_len(&self) -> u64 {
        self.n_len
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The integer enclosure `scale_lo <= N^beta <= scale_hi`; the two ends
    /// differ by at most 1.
    pub fn scale_enclosure(&self) -> (&BigUint, &BigUint) {
        (&self.scale_lo, &self.scale_hi)
    }

    /// Cutoff for the certain count: `delta` qualifies when
    /// `(delta + 1)·q·scale_hi <= p·2^w`, i.e. the whole uncertainty
    /// interval sits inside the smallest possible threshold.
    fn lower_span(&self) -> PairSpan {
        let lhs_unit = BigUint::from(*self.s.denom()) * &self.scale_hi;
        let rhs = BigUint::from(*self.s.numer()) << self.width;
        let limit = &rhs / &lhs_unit; // delta + 1 <= limit
        match limit.to_u64() {
            Some(0) => PairSpan::Empty,
            Some(l) if l - 1 < half_modulus(self.width) => PairSpan::UpTo(l - 1),
            _ => PairSpan::All,
        }
    }

    /// Cutoff for the possible count: `delta` qualifies when
    /// `(delta - 1)·q·scale_lo <= p·2^w`, i.e. some placement could land
    /// inside the largest possible threshold.
    fn upper_span(&self) -> PairSpan {
        let lhs_unit = BigUint::from(*self.s.denom()) * &self.scale_lo;
        let rhs = BigUint::from(*self.s.numer()) << self.width;
        let limit = &rhs / &lhs_unit + 1u32; // delta - 1 <= limit - 1
        match limit.to_u64() {
            Some(l) if l < half_modulus(self.width) => PairSpan::UpTo(l),
            _ => PairSpan::All,
        }
    }
}

fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `2^(w-1)`: the largest circular distance is exactly this, so any cutoff
/// at or beyond it admits every pair.
fn half_modulus(width: u32) -> u64 {
    1u64 << (width - 1)
}

/// Certified two-sided pair count together with the normalization enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCountResult {
    pub s: Ratio<u64>,
    pub beta: Ratio<u64>,
    pub n_len: u64,
    pub width: u32,
    /// Ordered pairs provably within the threshold.
    pub count_lower: u64,
    /// Ordered pairs possibly within the threshold.
    pub count_upper: u64,
    /// Enclosure of the normalization `N^(2-beta)`.
    norm_den_lo: BigUint,
    norm_den_hi: BigUint,
}

impl PairCountResult {
    /// `count_lower / N^(2-beta)` rounded down: a certified lower bound on
    /// the normalized statistic.
    pub fn norm_lower_string(&self, digits: usize) -> String {
        numeric::decimal_string(
            &BigUint::from(self.count_lower),
            &self.norm_den_hi,
            digits,
            RoundDir::Floor,
        )
    }

    /// `count_upper / N^(2-beta)` rounded up: a certified upper bound.
    pub fn norm_upper_string(&self, digits: usize) -> String {
        numeric::decimal_string(
            &BigUint::from(self.count_upper),
            &self.norm_den_lo,
            digits,
            RoundDir::Ceil,
        )
    }

    pub fn norm_lower_f64(&self) -> f64 {
        self.count_lower as f64 / biguint_f64(&self.norm_den_hi)
    }

    pub fn norm_upper_f64(&self) -> f64 {
        self.count_upper as f64 / biguint_f64(&self.norm_den_lo)
    }
}

fn biguint_f64(value: &BigUint) -> f64 {
    value.to_f64().unwrap_or(f64::INFINITY)
}

/// Count ordered pairs at circular distance `<= cutoff` among sorted `w`-bit
/// numerators. Sweeps a two-pointer window over the sorted values extended
/// by a shifted copy, so wraparound pairs need no special casing; each
/// unordered pair is seen exactly once because `cutoff < 2^(w-1)`.
fn count_sorted_within(sorted: &[u64], width: u32, cutoff: u64) -> u64 {
    let n = sorted.len();
    if n < 2 {
        return 0;
    }
    let modulus = 1u128 << width;
    let d = u128::from(cutoff);
    let mut doubled: Vec<u128> = Vec::with_capacity(2 * n);
    doubled.extend(sorted.iter().map(|&x| u128::from(x)));
    doubled.extend(sorted.iter().map(|&x| u128::from(x) + modulus));
    let mut unordered: u64 = 0;
    let mut j = 0usize;
    for i in 0..n {
        if j <= i {
            j = i + 1;
        }
        while j < i + n && doubled[j] - doubled[i] <= d {
            j += 1;
        }
        unordered += (j - i - 1) as u64;
    }
    unordered * 2
}

fn all_ordered_pairs(n: u64) -> u64 {
    (u128::from(n) * u128::from(n - 1)) as u64
}

fn count_span(sorted: &[u64], width: u32, n_len: u64, span: PairSpan) -> u64 {
    match span {
        PairSpan::Empty => 0,
        PairSpan::UpTo(limit) => count_sorted_within(sorted, width, limit),
        PairSpan::All => all_ordered_pairs(n_len),
    }
}

fn count_sorted(sorted: &[u64], threshold: &Threshold) -> PairCountResult {
    let count_lower = count_span(
        sorted,
        threshold.width,
        threshold.n_len,
        threshold.lower_span(),
    );
    let count_upper = count_span(
        sorted,
        threshold.width,
        threshold.n_len,
        threshold.upper_span(),
    );
    let (norm_den_lo, norm_den_hi) = numeric::pow_ratio_enclosure(
        threshold.n_len,
        2 * threshold.beta.denom() - threshold.beta.numer(),
        *threshold.beta.denom(),
    );
    PairCountResult {
        s: threshold.s,
        beta: threshold.beta,
        n_len: threshold.n_len,
        width: threshold.width,
        count_lower,
        count_upper,
        norm_den_lo,
        norm_den_hi,
    }
}

fn check_sample(sample: &SequenceSample, threshold: &Threshold) -> Result<()> {
    if sample.width != threshold.width {
        return Err(Error::DomainViolation(format!(
            "sample width {} does not match threshold width {}",
            sample.width, threshold.width
        )));
    }
    if sample.len() != threshold.n_len {
        return Err(Error::DomainViolation(format!(
            "sample length {} does not match threshold N = {}",
            sample.len(),
            threshold.n_len
        )));
    }
    Ok(())
}

/// Certified count of close pairs in a sample under a validated threshold.
pub fn count_close_pairs(
    sample: &SequenceSample,
    threshold: &Threshold,
) -> Result<PairCountResult> {
    check_sample(sample, threshold)?;
    let mut sorted = sample.values.clone();
    sorted.sort_unstable();
    Ok(count_sorted(&sorted, threshold))
}

/// The classical statistic: threshold `s/N`, normalization `N`.
pub fn ppc_statistic(sample: &SequenceSample, s: Ratio<u64>) -> Result<PairCountResult> {
    let threshold = Threshold::new(s, Ratio::one(), sample.len(), sample.width)?;
    count_close_pairs(sample, &threshold)
}

/// The weak statistic: threshold `s/N^beta`, normalization `N^(2-beta)`,
/// for `0 < beta <= 1`.
pub fn weak_ppc_statistic(
    sample: &SequenceSample,
    s: Ratio<u64>,
    beta: Ratio<u64>,
) -> Result<PairCountResult> {
    let threshold = Threshold::new(s, beta, sample.len(), sample.width)?;
    count_close_pairs(sample, &threshold)
}

/// Evaluate the statistic on a strictly increasing grid of `s` values,
/// sharing one sort of the sample across the whole grid.
pub fn ppc_curve(
    sample: &SequenceSample,
    s_grid: &[Ratio<u64>],
    beta: Ratio<u64>,
) -> Result<Vec<PairCountResult>> {
    if s_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let thresholds: Vec<Threshold> = s_grid
        .iter()
        .map(|&s| Threshold::new(s, beta, sample.len(), sample.width))
        .collect::<Result<_>>()?;
    let mut sorted = sample.values.clone();
    sorted.sort_unstable();
    Ok(thresholds
        .iter()
        .map(|t| count_sorted(&sorted, t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::SequenceKind;

    fn ratio(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    fn sample(width: u32, values: Vec<u64>) -> SequenceSample {
        SequenceSample::from_values(SequenceKind::Uniform, width, values, None, None).unwrap()
    }

    fn classic(width: u32, values: Vec<u64>, s: Ratio<u64>) -> PairCountResult {
        ppc_statistic(&sample(width, values), s).unwrap()
    }

    #[test]
    fn threshold_validation() {
        assert!(Threshold::new(ratio(1, 1), ratio(1, 1), 2048, 19).is_ok());
        assert!(matches!(
            Threshold::new(ratio(1, 1), ratio(1, 1), 2048, 18),
            Err(Error::WidthTooSmall { needed: 19, .. })
        ));
        assert!(matches!(
            Threshold::new(ratio(1, 1), ratio(1, 1), 2048, 65),
            Err(Error::WidthOutOfRange(65))
        ));
        // guard: 4·q·N must stay under 2^w (here 4·q·1024 vs 2^20)
        assert!(Threshold::new(ratio(1, 1 << 12), ratio(1, 1), 1024, 20).is_err());
        assert!(Threshold::new(ratio(1, 1 << 8), ratio(1, 1), 1024, 20).is_err());
        assert!(Threshold::new(ratio(1, 1 << 7), ratio(1, 1), 1024, 20).is_ok());
        // beta outside (0, 1]
        assert!(Threshold::new(ratio(1, 1), ratio(0, 1), 100, 32).is_err());
        assert!(Threshold::new(ratio(1, 1), ratio(3, 2), 100, 32).is_err());
        assert!(Threshold::new(ratio(1, 1), ratio(1, 1), 0, 32).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn adjacent_pair_is_certain() {
        // N = 2, w = 16, s = 1: threshold 1/2, numerators 0 and 1
        let r = classic(16, vec![0, 1], ratio(1, 1));
        assert_eq!(r.count_lower, 2);
        assert_eq!(r.count_upper, 2);
    }

    #[test]
    fn antipodal_pair_needs_upper_slack() {
        // distance exactly 1/2 = s/N: the lower count must refuse (the true
        // points could sit anywhere in their cells), the upper must admit
        let r = classic(16, vec![0, 1 << 15], ratio(1, 1));
        assert_eq!(r.count_lower, 0);
        assert_eq!(r.count_upper, 2);
    }

    #[test]
    fn all_equal_sample_counts_every_pair() {
        let r = classic(16, vec![5; 8], ratio(1, 1));
        assert_eq!(r.count_lower, 56);
        assert_eq!(r.count_upper, 56);
    }

    #[test]
    fn zero_s_keeps_only_possible_collisions() {
        // s = 0: nothing is provably within distance 0, but numerators at
        // distance <= 1 might collide
        let r = classic(16, vec![0, 1, 4, 5, 6, 100], ratio(0, 1));
        assert_eq!(r.count_lower, 0);
        assert_eq!(r.count_upper, 6); // (0,1), (4,5), (5,6)
    }

    #[test]
    fn wraparound_pair_is_found() {
        // 1 and 2^16 - 1 are 2 apart around the circle
        let r = classic(16, vec![1, (1 << 16) - 1], ratio(1, 4));
        assert_eq!(r.count_lower, 2);
        assert_eq!(r.count_upper, 2);
    }

    #[test]
    fn counts_monotone_in_s() {
        let values: Vec<u64> = (0..64u64).map(|i| (i * i * 37 + 11) % (1 << 20)).collect();
        let mut last = (0, 0);
        for p in [0u64, 1, 2, 5, 13, 40, 64] {
            let r = classic(20, values.clone(), ratio(p, 4));
            assert!(r.count_lower >= last.0, "lower monotone at s = {p}/4");
            assert!(r.count_upper >= last.1, "upper monotone at s = {p}/4");
            assert!(r.count_lower <= r.count_upper);
            assert_eq!(r.count_lower % 2, 0);
            assert_eq!(r.count_upper % 2, 0);
            last = (r.count_lower, r.count_upper);
        }
    }

    #[test]
    fn two_pointer_matches_quadratic_scan() {
        // direct check of the sweep against an O(n²) loop over deltas
        let width = 18;
        let values: Vec<u64> = (0..200u64)
            .map(|i| (i * 7919 + (i * i) % 1013) % (1 << 18))
            .collect();
        let mut sorted = values.clone();
        sorted.sort_unstable();
        for cutoff in [0u64, 1, 2, 100, 5000, (1 << 17) - 1] {
            let fast = count_sorted_within(&sorted, width, cutoff);
            let mut slow = 0u64;
            for l in 0..values.len() {
                for m in 0..values.len() {
                    if l == m {
                        continue;
                    }
                    let diff = values[l].abs_diff(values[m]);
                    let delta = diff.min((1 << width) - diff);
                    if delta <= cutoff {
                        slow += 1;
                    }
                }
            }
            assert_eq!(fast, slow, "cutoff = {cutoff}");
        }
    }

    #[test]
    fn normalization_strings_bracket_value() {
        // 8 equal points, s = 1, beta = 1: count 56, normalization 8
        let r = classic(16, vec![3; 8], ratio(1, 1));
        assert_eq!(r.norm_lower_string(4), "7.0000");
        assert_eq!(r.norm_upper_string(4), "7.0000");
        assert!((r.norm_lower_f64() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn weak_statistic_enclosure_is_two_sided() {
        // beta = 1/2, N = 16: threshold s/4 exactly, normalization 16^1.5 = 64
        let values: Vec<u64> = (0..16u64).map(|i| i * 4096).collect();
        let r = weak_ppc_statistic(&sample(16, values), ratio(1, 1), ratio(1, 2)).unwrap();
        // spacing 4096 numerator units; threshold 1/4 is 16384 units. Deltas
        // 4096, 8192, 12288 are certainly inside; 16384 sits exactly on the
        // edge, so only the upper count admits it
        assert!(r.count_lower <= r.count_upper);
        assert_eq!(r.count_lower, 16 * 6);
        assert_eq!(r.count_upper, 16 * 8);
        assert!(r.norm_lower_f64() <= r.norm_upper_f64());
    }

    #[test]
    fn curve_validates_grid() {
        let s = sample(16, (0..16u64).map(|i| i * 4096).collect());
        let one = Ratio::one();
        assert!(matches!(ppc_curve(&s, &[], one), Err(Error::EmptyGrid)));
        assert!(matches!(
            ppc_curve(&s, &[ratio(2, 1), ratio(1, 1)], one),
            Err(Error::UnsortedGrid)
        ));
        assert!(matches!(
            ppc_curve(&s, &[ratio(1, 1), ratio(1, 1)], one),
            Err(Error::UnsortedGrid)
        ));
        let curve = ppc_curve(&s, &[ratio(1, 2), ratio(1, 1), ratio(2, 1)], one).unwrap();
        assert_eq!(curve.len(), 3);
        for (point, s_val) in curve.iter().zip([ratio(1, 2), ratio(1, 1), ratio(2, 1)]) {
            let direct = ppc_statistic(&s, s_val).unwrap();
            assert_eq!(point, &direct);
        }
    }

    #[test]
    fn large_s_hits_the_all_pairs_shortcut() {
        let values: Vec<u64> = (0..16u64).map(|i| i * 4096).collect();
        // s = 8, N = 16: threshold exactly 1/2. Antipodal pairs sit on the
        // edge, so the lower count refuses them (8 unordered pairs) while
        // the upper count takes everything
        let r = classic(16, values.clone(), ratio(8, 1));
        assert_eq!(r.count_lower, 240 - 16);
        assert_eq!(r.count_upper, 240);
        // s = 9: threshold beyond 1/2, every pair certain
        let r = classic(16, values, ratio(9, 1));
        assert_eq!(r.count_lower, 240);
        assert_eq!(r.count_upper, 240);
    }

    #[test]
    fn single_point_sample_counts_nothing() {
        let r = classic(16, vec![123], ratio(1, 1));
        assert_eq!(r.count_lower, 0);
        assert_eq!(r.count_upper, 0);
    }
}
