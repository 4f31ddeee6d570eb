//! Exact big-integer evaluation of the pattern-counting formulas.
//!
//! Fix a word length `d` and an overlap `e >= 1`, and consider `w = d + e`
//! bit windows over the block of words of length `d`. Two shifts collide to
//! within `1/2^w` when their windows agree, and the number of such ordered
//! pairs decomposes by combinatorial pattern families:
//!
//! * the *main* family, patterns whose first `e` bits equal their last `e`
//!   bits, counted by a double sum over the number `k` of ones in the middle
//!   block and the length `j` of its leading run of ones;
//! * the *carry-chain* family, patterns spanning a word that ends in a run of
//!   ones so the next word flips a prefix of bits;
//! * the *all-ones* family, patterns opening with `e` ones and continuing the
//!   run into the middle block;
//! * the *boundary* families `B` and `C` of the appendix formulas, two
//!   `(w+1)`-bit windows that share a `j`-bit prefix and then read
//!   `0 1...1 | 1` versus `1 0...0 | 0`, which are adjacent on the circle
//!   without sharing a window.
//!
//! Every function evaluates its displayed sum verbatim with exact integers.
//! Binomial coefficients with out-of-range arguments are zero, so the sums
//! can be written exactly as displayed without re-deriving index bounds.
//! The parameters `d` and `e` are deliberately *not* coupled (no `d = 2^e`
//! constraint); presets apply the coupling where an experiment wants it.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// The pair `(d, e)`: word length and overlap, with derived window width
/// `w = d + e`. Requires `e >= 1` and `d >= e + 2` so the middle block
/// `a_{e+1} .. a_d` is nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockParams {
    d: u32,
    e: u32,
}

impl BlockParams {
    pub fn new(d: u32, e: u32) -> Result<Self> {
        if e < 1 {
            return Err(Error::DomainViolation(format!(
                "overlap e must be >= 1, got {e}"
            )));
        }
        if d < e + 2 {
            return Err(Error::DomainViolation(format!(
                "word length d must be >= e + 2, got d = {d}, e = {e}"
            )));
        }
        Ok(BlockParams { d, e })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Window width `w = d + e`.
    pub fn width(&self) -> u32 {
        self.d + self.e
    }

    /// Length `d - e` of the middle block `a_{e+1} .. a_d`.
    pub fn middle_len(&self) -> u32 {
        self.d - self.e
    }
}

/// Which of the two displayed shapes of a formula was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaForm {
    Sum,
    Closed,
}

impl FormulaForm {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaForm::Sum => "sum",
            FormulaForm::Closed => "closed",
        }
    }
}

/// An evaluated formula: identifier, parameters and the exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaValue {
    pub name: &'static str,
    pub d: u32,
    pub e: u32,
    pub j: Option<u32>,
    pub form: FormulaForm,
    pub value: BigUint,
}

impl FormulaValue {
    fn new(name: &'static str, p: &BlockParams, form: FormulaForm, value: BigUint) -> Self {
        FormulaValue {
            name,
            d: p.d,
            e: p.e,
            j: None,
            form,
            value,
        }
    }

    pub fn value_string(&self) -> String {
        self.value.to_str_radix(10)
    }
}

/// Histogram of pattern match multiplicities: `counts[m]` patterns occur
/// exactly `m` times. Multiplicity-0 entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchHistogram {
    counts: BTreeMap<u64, BigUint>,
}

impl MatchHistogram {
    pub fn new() -> Self {
        MatchHistogram::default()
    }

    /// Add `patterns` patterns at multiplicity `m`; `m = 0` is dropped.
    pub fn add(&mut self, multiplicity: u64, patterns: BigUint) {
        if multiplicity == 0 || patterns.is_zero() {
            return;
        }
        *self.counts.entry(multiplicity).or_default() += patterns;
    }

    pub fn get(&self, multiplicity: u64) -> BigUint {
        self.counts.get(&multiplicity).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &BigUint)> {
        self.counts.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of patterns in the histogram.
    pub fn pattern_total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `Σ_m m(m-1)·counts[m]`: the ordered pairs of equal occurrences the
    /// histogram implies.
    pub fn ordered_pair_total(&self) -> BigUint {
        self.counts
            .iter()
            .map(|(m, c)| BigUint::from(m * (m - 1)) * c)
            .sum()
    }

    pub fn merge(&mut self, other: &MatchHistogram) {
        for (m, c) in other.iter() {
            self.add(*m, c.clone());
        }
    }
}

/// `C(n, k)` with the zero convention: any out-of-range argument
/// (`n < 0`, `k < 0` or `k > n`) gives 0.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut value = BigUint::one();
    for j in 0..k {
        value = value * BigUint::from((n - j) as u64) / BigUint::from((j + 1) as u64);
    }
    value
}

fn pow2(exp: u32) -> BigUint {
    BigUint::one() << exp
}

/// Ordered pairs of window positions whose `w`-bit patterns agree, summed
/// over the main family: `2^e Σ_{k=1}^{d-e-1} Σ_{j=0}^{k-1} (k-j)²
/// C(d-e-j-1, k-j)`.
pub fn main_pair_count(p: &BlockParams) -> FormulaValue {
    let c = i64::from(p.d - p.e - 1);
    let mut total = BigUint::zero();
    for k in 1..=c {
        for j in 0..k {
            let i = (k - j) as u64;
            total += BigUint::from(i * i) * binomial(c - j, k - j);
        }
    }
    FormulaValue::new("main_pair_count", p, FormulaForm::Sum, total * pow2(p.e))
}

/// The same count after swapping the summation order:
/// `2^e Σ_{M=1}^{d-e-1} M(M+1)·2^(M-2)`. Independent route used to check
/// `main_pair_count`.
pub fn main_pair_count_alt(p: &BlockParams) -> FormulaValue {
    let c = p.d - p.e - 1;
    // each term M(M+1)·2^M is divisible by 4, so sum first, divide once
    let mut quad_total = BigUint::zero();
    for m in 1..=u64::from(c) {
        quad_total += BigUint::from(m * (m + 1)) << m;
    }
    let total = quad_total / 4u32;
    FormulaValue::new(
        "main_pair_count_alt",
        p,
        FormulaForm::Closed,
        total * pow2(p.e),
    )
}

/// The single largest summand of the main count: `j = 0`,
/// `k = ⌊(d-e-1)/2⌋`, value `2^e·k²·C(d-e-1, k)`. This term alone already
/// grows like `√d·2^(d+e)`, which is what makes the normalized statistic
/// diverge.
pub fn dominant_term(p: &BlockParams) -> FormulaValue {
    let c = p.d - p.e - 1;
    let k = u64::from(c / 2);
    let value = BigUint::from(k * k) * binomial(i64::from(c), k as i64) * pow2(p.e);
    FormulaValue::new("dominant_term", p, FormulaForm::Sum, value)
}

/// Histogram contributions of the patterns with exactly `k` ones in the
/// middle block.
pub fn predicted_match_histogram_for_k(p: &BlockParams, k: u32) -> MatchHistogram {
    let c = i64::from(p.d - p.e - 1);
    let half = pow2(p.e - 1);
    let mut hist = MatchHistogram::new();
    let k = i64::from(k);
    if k < 1 || k > c {
        return hist;
    }
    // leading middle bit zero (j = 0): C(c, k) patterns with k matches when
    // a_1 = 0, k+1 when a_1 = 1
    let base = binomial(c, k);
    hist.add(k as u64, &half * &base);
    hist.add((k + 1) as u64, &half * &base);
    // j >= 1 leading ones followed by a zero: k-j matches (a_1 = 0) or
    // k-j+1 (a_1 = 1)
    for j in 1..=k {
        let count = &half * binomial(c - j, k - j);
        hist.add((k - j) as u64, count.clone());
        hist.add((k - j + 1) as u64, count);
    }
    hist
}

/// Predicted multiplicity histogram over the whole main family
/// (`k = 1 .. d-e-1`).
pub fn predicted_match_histogram(p: &BlockParams) -> MatchHistogram {
    let c = p.d - p.e - 1;
    let mut hist = MatchHistogram::new();
    for k in 1..=c {
        hist.merge(&predicted_match_histogram_for_k(p, k));
    }
    hist
}

/// Ordered pairs contributed by carry-chain patterns, where the matching
/// word ends in a run of ones and the following word flips a prefix.
/// Requires `e >= 2` (the displayed sums contain `Σ_{j0=2}^{e}` and the
/// closed form the factor `2^e - 2`).
pub fn carry_chain_pair_count(p: &BlockParams, form: FormulaForm) -> Result<FormulaValue> {
    if p.e < 2 {
        return Err(Error::DomainViolation(format!(
            "carry-chain formulas require e >= 2, got e = {}",
            p.e
        )));
    }
    let d = i64::from(p.d);
    let e = i64::from(p.e);
    let value = match form {
        FormulaForm::Sum => {
            let mut inner = BigUint::zero();
            for j0 in 1..=e {
                for j1 in (e + 1)..=(d - 1) {
                    inner += binomial(j1 - e, 2) * pow2((j0 + d - j1 - 2) as u32);
                }
            }
            let mut geo = BigUint::zero();
            for j0 in 2..=e {
                geo += pow2((j0 - 2) as u32);
            }
            inner += (binomial(d - e, 2) + binomial(d - e + 1, 2)) * geo;
            inner += binomial(d - e, 2);
            inner * 2u32
        }
        FormulaForm::Closed => {
            // ((2^e - 1)/2^(e-1))·(2^d - 2^e) - (d-e)·2^e, exactly
            let numerator = (pow2(p.e) - 1u32) * (pow2(p.d) - pow2(p.e));
            let (quot, rem) = numerator.div_rem(&pow2(p.e - 1));
            debug_assert!(rem.is_zero(), "closed carry-chain form divides exactly");
            let sub = BigUint::from(p.d - p.e) * pow2(p.e);
            let signed = BigInt::from(quot) - BigInt::from(sub);
            signed.to_biguint().ok_or_else(|| {
                Error::DomainViolation(format!(
                    "closed carry-chain form negative at d = {}, e = {}",
                    p.d, p.e
                ))
            })?
        }
    };
    Ok(FormulaValue::new("carry_chain_pair_count", p, form, value))
}

/// Ordered pairs from the all-ones run family:
/// `Σ_{i=3}^{d-e} C(i-1, 2) = (d-e-2)(d-e-1)(d-e)/6`. Requires `d - e >= 3`.
pub fn all_ones_pair_count(p: &BlockParams) -> Result<FormulaValue> {
    let c = p.middle_len();
    if c < 3 {
        return Err(Error::DomainViolation(format!(
            "all-ones count requires d - e >= 3, got {c}"
        )));
    }
    let product = BigUint::from(c - 2) * BigUint::from(c - 1) * BigUint::from(c);
    let (value, rem) = product.div_rem(&BigUint::from(6u32));
    debug_assert!(rem.is_zero(), "product of three consecutive integers");
    Ok(FormulaValue::new(
        "all_ones_pair_count",
        p,
        FormulaForm::Closed,
        value,
    ))
}

/// The four appendix match-count branches, keyed by the prefix length `j`
/// and the first middle bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendixBranch {
    /// `j = d`, `a_{e+1} = 1`.
    JEqDOne,
    /// `j = d`, `a_{e+1} = 0`.
    JEqDZero,
    /// `d < j <= d+e-1`, `a_{e+1} = 1`.
    JGtDOne,
    /// `d < j <= d+e-1`, `a_{e+1} = 0`.
    JGtDZero,
}

impl AppendixBranch {
    pub fn name(&self) -> &'static str {
        match self {
            AppendixBranch::JEqDOne => "j_eq_d_one",
            AppendixBranch::JEqDZero => "j_eq_d_zero",
            AppendixBranch::JGtDOne => "j_gt_d_one",
            AppendixBranch::JGtDZero => "j_gt_d_zero",
        }
    }
}

/// Occurrence counts of the boundary pattern `a_1..a_j 0 1..1` in the block,
/// by branch. `j` must equal `d` for the `JEqD*` branches and lie in
/// `d+1 ..= d+e-1` for the `JGtD*` branches.
pub fn appendix_match_count(
    p: &BlockParams,
    j: u32,
    branch: AppendixBranch,
) -> Result<FormulaValue> {
    let c = i64::from(p.d - p.e - 1);
    let j_eq_d = matches!(branch, AppendixBranch::JEqDOne | AppendixBranch::JEqDZero);
    if j_eq_d && j != p.d {
        return Err(Error::DomainViolation(format!(
            "branch {} requires j = d = {}, got j = {}",
            branch.name(),
            p.d,
            j
        )));
    }
    if !j_eq_d && !(j > p.d && j < p.d + p.e) {
        return Err(Error::DomainViolation(format!(
            "branch {} requires d < j <= d+e-1, got j = {}",
            branch.name(),
            j
        )));
    }
    let value = match branch {
        AppendixBranch::JEqDOne => {
            let mut total = BigUint::zero();
            for k in 2..=c {
                for l in 1..k {
                    total += BigUint::from((k - l) as u64) * binomial(c - l, k - l);
                }
            }
            total
        }
        AppendixBranch::JEqDZero => {
            let mut total = BigUint::zero();
            for k in 1..=c {
                for l in 1..=k {
                    total += BigUint::from(l as u64) * binomial(c - l - 1, k - l);
                }
            }
            total
        }
        AppendixBranch::JGtDOne => {
            let mut total = BigUint::zero();
            for k in 2..=c {
                for l in 1..=k {
                    let weight = (k - l) as u64 + (k - l + 1) as u64;
                    total += BigUint::from(weight) * binomial(c - l, k - l);
                }
            }
            total * pow2(j - p.d - 1)
        }
        AppendixBranch::JGtDZero => {
            let mut total = BigUint::zero();
            for k in 1..=c {
                for l in 1..=k {
                    total += BigUint::from(l as u64) * binomial(c - l - 1, k - l);
                }
            }
            total * pow2(j - p.d)
        }
    };
    let name = match branch {
        AppendixBranch::JEqDOne | AppendixBranch::JGtDOne => "appendix_match_count_one",
        AppendixBranch::JEqDZero | AppendixBranch::JGtDZero => "appendix_match_count_zero",
    };
    let mut out = FormulaValue::new(name, p, FormulaForm::Sum, value);
    out.j = Some(j);
    Ok(out)
}

/// Which appendix pair-count is requested: the shared prefix ends exactly at
/// the word boundary (`j = d`) or beyond it (`d < j <= d+e-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendixMode {
    JEqD,
    JGtD,
}

/// Sum-form and closed-form values of an appendix pair count. The closed
/// forms are stated as lower bounds, so `sum_form >= closed_form` is the
/// contract, not equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixPairCounts {
    pub sum_form: FormulaValue,
    pub closed_form: FormulaValue,
}

/// Ordered pairs of `B`/`C` boundary windows sharing their first `j` bits.
///
/// `JEqD` requires `d - e >= 5` (below that the closed form
/// `2^(d-e-1)(d-e-5)` is negative); `JGtD` requires `e >= 2` (the `j` range
/// is empty otherwise and the closed form carries the factor `2^e - 2`).
pub fn appendix_pair_count(p: &BlockParams, mode: AppendixMode) -> Result<AppendixPairCounts> {
    let c = i64::from(p.d - p.e - 1);
    match mode {
        AppendixMode::JEqD => {
            if p.middle_len() < 5 {
                return Err(Error::DomainViolation(format!(
                    "appendix j = d pair count requires d - e >= 5, got {}",
                    p.middle_len()
                )));
            }
            let mut total = BigUint::zero();
            for k in 2..=c {
                for l in 1..k {
                    total += BigUint::from(((l - 1) * (k - l)) as u64) * binomial(c - l, k - l);
                }
            }
            let sum_form =
                FormulaValue::new("appendix_pairs_j_eq_d", p, FormulaForm::Sum, total * 2u32);
            let closed = pow2(p.d - p.e - 1) * BigUint::from(u64::from(p.middle_len()) - 5);
            let closed_form =
                FormulaValue::new("appendix_pairs_j_eq_d", p, FormulaForm::Closed, closed);
            Ok(AppendixPairCounts {
                sum_form,
                closed_form,
            })
        }
        AppendixMode::JGtD => {
            if p.e < 2 {
                return Err(Error::DomainViolation(format!(
                    "appendix j > d pair count requires e >= 2, got {}",
                    p.e
                )));
            }
            let mut inner = BigUint::zero();
            for k in 2..=c {
                for l in 1..=k {
                    let weight = ((l - 1) * (k - l)) as u64 + ((l - 1) * (k - l + 1)) as u64;
                    inner += BigUint::from(weight) * binomial(c - l, k - l);
                }
            }
            let mut total = BigUint::zero();
            for j in (p.d + 1)..=(p.d + p.e - 1) {
                total += pow2(j - p.d) * &inner;
            }
            let sum_form = FormulaValue::new("appendix_pairs_j_gt_d", p, FormulaForm::Sum, total);

            // 2^(-1-e)·(2^e - 2)·(2^(2+e) + 2^d·d + 2^(1+e)·d - 2^d·e
            //   - 2^(1+e)·e - 2^(2+d)), evaluated verbatim over BigInt
            let d_big = BigInt::from(p.d);
            let e_big = BigInt::from(p.e);
            let p2 = |n: u32| BigInt::from(pow2(n));
            let bracket = p2(2 + p.e) + p2(p.d) * &d_big + p2(1 + p.e) * &d_big
                - p2(p.d) * &e_big
                - p2(1 + p.e) * &e_big
                - p2(2 + p.d);
            let numerator = (p2(p.e) - BigInt::from(2)) * bracket;
            let (quot, rem) = numerator.div_rem(&p2(1 + p.e));
            debug_assert!(rem.is_zero(), "closed appendix form divides exactly");
            let closed = quot.to_biguint().ok_or_else(|| {
                Error::DomainViolation(format!(
                    "closed appendix j > d form negative at d = {}, e = {}",
                    p.d, p.e
                ))
            })?;
            let closed_form =
                FormulaValue::new("appendix_pairs_j_gt_d", p, FormulaForm::Closed, closed);
            Ok(AppendixPairCounts {
                sum_form,
                closed_form,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: u32, e: u32) -> BlockParams {
        BlockParams::new(d, e).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binomial_zero_convention() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(3, 0), big(1));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(-1, 0), big(0));
        assert_eq!(binomial(2, 5), big(0));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(binomial(52, 5), big(2_598_960));
    }

    #[test]
    fn block_params_domain() {
        assert!(BlockParams::new(4, 1).is_ok());
        assert!(BlockParams::new(3, 1).is_ok());
        assert!(BlockParams::new(2, 1).is_err());
        assert!(BlockParams::new(4, 0).is_err());
        assert!(BlockParams::new(5, 4).is_err());
    }

    #[test]
    fn main_count_hand_case() {
        // d = 4, e = 1: k=1 gives 2, k=2 gives 4 + 1, doubled by 2^e
        assert_eq!(main_pair_count(&params(4, 1)).value, big(14));
    }

    #[test]
    fn binomial_square_identity() {
        // C(m,2) + C(m+1,2) = m², the step that merges the two displayed sums
        for m in 0i64..=1000 {
            assert_eq!(
                binomial(m, 2) + binomial(m + 1, 2),
                big((m * m) as u64),
                "m = {m}"
            );
        }
    }

    /// Third route for the main count, derived by summing
    /// `Σ M(M+1)2^(M-2) = (c²-c+2)·2^(c-1) - 1` with `c = d-e-1`.
    fn main_closed_oracle(d: u32, e: u32) -> BigUint {
        let c = u64::from(d - e - 1);
        let inner = (BigUint::from(c * c - c + 2) << (c - 1)) - 1u32;
        inner << e
    }

    #[test]
    fn main_count_three_routes_agree() {
        for e in 1u32..=6 {
            for d in (e + 2)..=40 {
                let p = params(d, e);
                let sum = main_pair_count(&p).value;
                let alt = main_pair_count_alt(&p).value;
                let closed = main_closed_oracle(d, e);
                assert_eq!(sum, alt, "d = {d}, e = {e}");
                assert_eq!(sum, closed, "d = {d}, e = {e}");
            }
        }
        assert_eq!(main_pair_count(&params(16, 4)).value, big(1_834_992));
    }

    #[test]
    fn dominant_term_cases() {
        assert_eq!(dominant_term(&params(4, 1)).value, big(4));
        // one summand of the main sum
        for e in 1u32..=6 {
            for d in (e + 2)..=40 {
                let p = params(d, e);
                assert!(dominant_term(&p).value <= main_pair_count(&p).value);
            }
        }
    }

    #[test]
    fn histogram_k1_and_k2_tallies() {
        for (d, e) in [(8u32, 2u32), (10, 2), (12, 3), (9, 1)] {
            let p = params(d, e);
            let c = u64::from(d - e - 1);
            let half = big(1) << (e - 1);

            let k1 = predicted_match_histogram_for_k(&p, 1);
            assert_eq!(k1.get(1), &half * big(1 + c), "k=1 single matches");
            assert_eq!(k1.get(2), &half * big(c), "k=1 double matches");

            let k2 = predicted_match_histogram_for_k(&p, 2);
            assert_eq!(k2.get(1), &half * big(1 + (c - 1)));
            assert_eq!(k2.get(2), &half * (big(c - 1) + binomial(c as i64, 2)));
            assert_eq!(k2.get(3), &half * binomial(c as i64, 2));
        }
    }

    #[test]
    fn histogram_pair_total_matches_main_count() {
        for e in 1u32..=5 {
            for d in (e + 2)..=30 {
                let p = params(d, e);
                assert_eq!(
                    predicted_match_histogram(&p).ordered_pair_total(),
                    main_pair_count(&p).value,
                    "d = {d}, e = {e}"
                );
            }
        }
    }

    #[test]
    fn histogram_small_case_by_hand() {
        // d = 4, e = 1: patterns at multiplicities 1, 2, 3 are 5, 4, 1
        let hist = predicted_match_histogram(&params(4, 1));
        assert_eq!(hist.get(1), big(5));
        assert_eq!(hist.get(2), big(4));
        assert_eq!(hist.get(3), big(1));
        assert_eq!(hist.ordered_pair_total(), big(14));
    }

    #[test]
    fn carry_chain_hand_cases() {
        let sum = |d, e| {
            carry_chain_pair_count(&params(d, e), FormulaForm::Sum)
                .unwrap()
                .value
        };
        let closed = |d, e| {
            carry_chain_pair_count(&params(d, e), FormulaForm::Closed)
                .unwrap()
                .value
        };
        // d=4,e=2: no j1 term, (C(2,2)+C(3,2))·1 + C(2,2) = 5, doubled = 10
        assert_eq!(sum(4, 2), big(10));
        assert_eq!(closed(4, 2), big(10));
        // d=5,e=2: inner 3 + 9 + 3 = 15, doubled = 30
        assert_eq!(sum(5, 2), big(30));
        assert_eq!(closed(5, 2), big(30));
        assert!(carry_chain_pair_count(&params(4, 1), FormulaForm::Sum).is_err());
    }

    #[test]
    fn carry_chain_bound_and_forms() {
        for e in 2u32..=8 {
            for d in (e + 2)..=24 {
                let p = params(d, e);
                let sum = carry_chain_pair_count(&p, FormulaForm::Sum).unwrap().value;
                let closed = carry_chain_pair_count(&p, FormulaForm::Closed)
                    .unwrap()
                    .value;
                assert!(sum < (big(1) << (d + 1)), "bound fails at d={d}, e={e}");
                // the displayed equality is not asserted; report if it breaks
                if sum != closed {
                    println!("carry-chain sum {sum} != closed {closed} at d={d}, e={e}");
                }
            }
        }
    }

    #[test]
    fn all_ones_cases() {
        assert_eq!(all_ones_pair_count(&params(4, 1)).unwrap().value, big(1));
        assert_eq!(all_ones_pair_count(&params(10, 3)).unwrap().value, big(35));
        assert!(all_ones_pair_count(&params(4, 2)).is_err());
        // hockey stick: equals C(d-e, 3) and the literal sum
        for c in 3u32..=64 {
            let p = params(c + 1, 1);
            let value = all_ones_pair_count(&p).unwrap().value;
            assert_eq!(value, binomial(i64::from(c), 3));
            let mut direct = BigUint::zero();
            for i in 3..=i64::from(c) {
                direct += binomial(i - 1, 2);
            }
            assert_eq!(value, direct, "c = {c}");
        }
    }

    #[test]
    fn appendix_branch_domains() {
        let p = params(6, 2);
        assert!(appendix_match_count(&p, 6, AppendixBranch::JEqDOne).is_ok());
        assert!(appendix_match_count(&p, 7, AppendixBranch::JEqDOne).is_err());
        assert!(appendix_match_count(&p, 7, AppendixBranch::JGtDOne).is_ok());
        assert!(appendix_match_count(&p, 8, AppendixBranch::JGtDOne).is_err());
        assert!(appendix_match_count(&p, 6, AppendixBranch::JGtDZero).is_err());
    }

    #[test]
    fn appendix_prefactors_double_with_j() {
        let p = params(12, 3);
        for branch in [AppendixBranch::JGtDOne, AppendixBranch::JGtDZero] {
            let lo = appendix_match_count(&p, 13, branch).unwrap().value;
            let hi = appendix_match_count(&p, 14, branch).unwrap().value;
            assert_eq!(hi, lo * 2u32, "{}", branch.name());
        }
        // j = d+1 with a_{e+1} = 1 carries prefactor 2^0; the zero branch 2^1
        let one = appendix_match_count(&p, 13, AppendixBranch::JGtDOne)
            .unwrap()
            .value;
        let zero_j = appendix_match_count(&p, 13, AppendixBranch::JGtDZero)
            .unwrap()
            .value;
        let zero_base = appendix_match_count(&p, 12, AppendixBranch::JEqDZero)
            .unwrap()
            .value;
        assert_eq!(zero_j, zero_base * 2u32);
        assert!(one > BigUint::zero());
    }

    #[test]
    fn appendix_branches_nonnegative_grid() {
        for e in 2u32..=6 {
            for d in (e + 2)..=24 {
                let p = params(d, e);
                appendix_match_count(&p, d, AppendixBranch::JEqDOne).unwrap();
                appendix_match_count(&p, d, AppendixBranch::JEqDZero).unwrap();
                for j in (d + 1)..=(d + e - 1) {
                    appendix_match_count(&p, j, AppendixBranch::JGtDOne).unwrap();
                    appendix_match_count(&p, j, AppendixBranch::JGtDZero).unwrap();
                }
            }
        }
    }

    #[test]
    fn appendix_pair_counts_closed_values() {
        let counts = appendix_pair_count(&params(12, 3), AppendixMode::JEqD).unwrap();
        assert_eq!(counts.closed_form.value, big(1024)); // 2^8 · 4
        assert!(counts.sum_form.value >= counts.closed_form.value);

        // d - e = 5 makes the closed form vanish
        let counts = appendix_pair_count(&params(8, 3), AppendixMode::JEqD).unwrap();
        assert_eq!(counts.closed_form.value, BigUint::zero());
        assert!(appendix_pair_count(&params(7, 3), AppendixMode::JEqD).is_err());

        let counts = appendix_pair_count(&params(12, 3), AppendixMode::JGtD).unwrap();
        assert_eq!(counts.closed_form.value, big(7746));
        assert!(counts.sum_form.value >= counts.closed_form.value);
        assert!(appendix_pair_count(&params(4, 1), AppendixMode::JGtD).is_err());
    }

    #[test]
    fn appendix_sum_dominates_closed_on_grid() {
        for e in 1u32..=6 {
            for d in (e + 2)..=24 {
                let p = params(d, e);
                if p.middle_len() >= 6 {
                    let c = appendix_pair_count(&p, AppendixMode::JEqD).unwrap();
                    assert!(
                        c.sum_form.value >= c.closed_form.value,
                        "j=d at d={d}, e={e}"
                    );
                }
                if e >= 2 && p.middle_len() >= 6 {
                    let c = appendix_pair_count(&p, AppendixMode::JGtD).unwrap();
                    assert!(
                        c.sum_form.value >= c.closed_form.value,
                        "j>d at d={d}, e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn divergence_proxy_increases() {
        // main(d, log2 d)/2^(d+e) strictly increases along the coupled presets
        let f = |d: u32, e: u32| (main_pair_count(&params(d, e)).value, pow2(d + e));
        let (v1, n1) = f(8, 3);
        let (v2, n2) = f(16, 4);
        let (v3, n3) = f(32, 5);
        assert!(&v1 * &n2 < &v2 * &n1);
        assert!(&v2 * &n3 < &v3 * &n2);
    }
}
