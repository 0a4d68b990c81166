//! Exact counting of non-crossing permutations by cycle structure.
//!
//! Index convention (used everywhere in this crate): elements are `0..n`, the
//! long cycle is `pi(i) = (i + 1) mod n`. For a permutation `p` the *B-cycles*
//! are the cycles of `p` itself and the *A-cycles* are the cycles of
//! `pi^{-1} . p`, i.e. `i -> pi^{-1}(p(i))`. A permutation is non-crossing iff
//! the two cycle counts add up to `n + 1`.
//!
//! Everything here is exact integer arithmetic. The `2^k` factor that weights
//! each B-cycle by the two state labels is applied by the prediction layer,
//! not here.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_noncrossing`]; `12!` permutations are scanned.
pub const MAX_ENUMERATION_N: usize = 12;

/// Cycle type `(1^λ1, 2^λ2, ..., n^λn)`: `multiplicities()[i - 1]` is the
/// number of cycles with `i` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclePartition {
    multiplicities: Vec<u32>,
}

impl CyclePartition {
    /// Builds a partition of `n` from `λ_1..λ_n`. The vector may be shorter
    /// than `n` (missing entries are zero) but not longer.
    pub fn new(n: usize, multiplicities: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cycle partition needs n >= 1"));
        }
        if multiplicities.len() > n {
            return Err(Error::domain(format!(
                "{} multiplicities given for n = {n}",
                multiplicities.len()
            )));
        }
        let mut lambda = multiplicities.to_vec();
        lambda.resize(n, 0);
        let total: usize = lambda
            .iter()
            .enumerate()
            .map(|(i, &m)| (i + 1) * m as usize)
            .sum();
        if total != n {
            return Err(Error::domain(format!(
                "cycle lengths sum to {total}, expected {n}"
            )));
        }
        Ok(Self {
            multiplicities: lambda,
        })
    }

    /// Cycle type of a list of cycle lengths summing to `n`.
    pub fn from_cycle_lengths(n: usize, lengths: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cycle partition needs n >= 1"));
        }
        let mut lambda = vec![0u32; n];
        for &len in lengths {
            if len == 0 || len > n {
                return Err(Error::domain(format!("cycle length {len} out of range for n = {n}")));
            }
            lambda[len - 1] += 1;
        }
        Self::new(n, &lambda)
    }

    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Number of cycles `l = Σ λ_i`.
    pub fn len(&self) -> usize {
        self.multiplicities.iter().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every cycle has an even number of elements.
    pub fn all_even(&self) -> bool {
        self.multiplicities
            .iter()
            .enumerate()
            .all(|(i, &m)| m == 0 || (i + 1) % 2 == 0)
    }
}

/// A non-crossing permutation together with its cycle bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonCrossingPermutation {
    /// `mapping[i] = p(i)` on `0..n`.
    pub mapping: Vec<usize>,
    pub b_cycle_type: CyclePartition,
    /// `C(pi^{-1} . p)`.
    pub a_cycle_count: usize,
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Running product stays integral: C(n, i+1) = C(n, i) * (n - i) / (i + 1).
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

/// Narayana number `N(n, k) = C(n, k) C(n, k-1) / n`: non-crossing
/// permutations of `n` elements with `k` B-cycles.
pub fn narayana(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::domain(format!("narayana needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok(binomial(n, k) * binomial(n, k - 1) / n)
}

/// Kreweras number `n! / (λ_1! ... λ_n! (n + 1 - l)!)`: non-crossing
/// permutations with the given B-cycle type.
pub fn kreweras(part: &CyclePartition) -> Result<BigUint> {
    let n = part.n();
    let l = part.len();
    if l == 0 || l > n {
        return Err(Error::domain(format!("cycle count {l} out of range for n = {n}")));
    }
    let denom = part
        .multiplicities()
        .iter()
        .fold(factorial(n + 1 - l), |acc, &m| acc * factorial(m as usize));
    Ok(factorial(n) / denom)
}

/// Even-element Narayana number `N_e(n, k) = (2/n) C(n/2, k) C(n, k-1)`:
/// non-crossing permutations of `n` elements with `k` B-cycles, all of even length.
pub fn even_narayana(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!("even_narayana needs even n >= 2, got {n}")));
    }
    if k == 0 || k > n / 2 {
        return Err(Error::domain(format!(
            "even_narayana needs 1 <= k <= n/2, got n = {n}, k = {k}"
        )));
    }
    Ok(binomial(n / 2, k) * binomial(n, k - 1) * 2u32 / n)
}

/// All cycle types of `n` with exactly `k` cycles (integer partitions of `n`
/// into `k` parts), in lexicographic order of their non-increasing part lists.
pub fn cycle_types(n: usize, k: usize) -> Vec<CyclePartition> {
    fn rec(remaining: usize, parts_left: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // every remaining part is at least 1
        if remaining < parts_left {
            return;
        }
        let hi = max_part.min(remaining - (parts_left - 1));
        for part in (1..=hi).rev() {
            cur.push(part);
            rec(remaining - part, parts_left - 1, part, cur, out);
            cur.pop();
        }
    }
    if n == 0 || k == 0 || k > n {
        return Vec::new();
    }
    let mut lists = Vec::new();
    rec(n, k, n, &mut Vec::with_capacity(k), &mut lists);
    lists
        .into_iter()
        .map(|lens| CyclePartition::from_cycle_lengths(n, &lens).expect("parts sum to n"))
        .collect()
}

/// Cycle lengths of a permutation given as `p[i]`.
pub fn cycle_lengths(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths
}

fn cycle_count(p: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut count = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
        }
    }
    count
}

/// Rearranges `p` into the next permutation in lexicographic order; false once
/// the last permutation has been passed.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Scans all of `S_n` and keeps the permutations with
/// `C(pi^{-1} . p) + C(p) = n + 1`, in lexicographic order of the
/// permutation word.
pub fn enumerate_noncrossing(n: usize) -> Result<Vec<NonCrossingPermutation>> {
    if n == 0 {
        return Err(Error::domain("enumerate_noncrossing needs n >= 1"));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::Size {
            what: "n",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let mut p: Vec<usize> = (0..n).collect();
    let mut composed = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    loop {
        let b_cycles = cycle_count(&p, &mut seen);
        for (i, c) in composed.iter_mut().enumerate() {
            // pi^{-1}(j) = j - 1 mod n
            *c = (p[i] + n - 1) % n;
        }
        let a_cycles = cycle_count(&composed, &mut seen);
        if a_cycles + b_cycles == n + 1 {
            let b_cycle_type = CyclePartition::from_cycle_lengths(n, &cycle_lengths(&p))?;
            out.push(NonCrossingPermutation {
                mapping: p.clone(),
                b_cycle_type,
                a_cycle_count: a_cycles,
            });
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    Ok(out)
}

/// Converts an exact count to `f64` (saturating to infinity).
pub fn to_f64(value: &BigUint) -> f64 {
    value.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn narayana_examples() {
        assert_eq!(narayana(4, 1).unwrap(), big(1));
        assert_eq!(narayana(4, 2).unwrap(), big(6));
        assert_eq!(narayana(6, 3).unwrap(), big(50));
        assert!(narayana(4, 0).is_err());
        assert!(narayana(4, 5).is_err());
    }

    #[test]
    fn narayana_exceeds_u64() {
        let v = narayana(40, 20).unwrap();
        assert!(v > big(u64::MAX));
        // C(40,20) C(40,19) / 40
        assert_eq!(v, binomial(40, 20) * binomial(40, 19) / 40u32);
    }

    #[test]
    fn kreweras_examples() {
        let identity = CyclePartition::new(6, &[6]).unwrap();
        assert_eq!(kreweras(&identity).unwrap(), big(1));
        let pairs = CyclePartition::new(6, &[0, 3]).unwrap();
        assert_eq!(kreweras(&pairs).unwrap(), big(5));
        let mixed = CyclePartition::new(4, &[2, 1]).unwrap();
        assert_eq!(kreweras(&mixed).unwrap(), big(6));
    }

    #[test]
    fn cycle_partition_rejects_bad_sums() {
        assert!(CyclePartition::new(4, &[1, 1]).is_err());
        assert!(CyclePartition::new(2, &[0, 0, 1]).is_err());
        assert!(CyclePartition::new(0, &[]).is_err());
    }

    #[test]
    fn even_narayana_examples() {
        assert_eq!(even_narayana(2, 1).unwrap(), big(1));
        assert_eq!(even_narayana(6, 3).unwrap(), big(5));
        assert_eq!(even_narayana(4, 1).unwrap(), big(1));
        assert_eq!(even_narayana(4, 2).unwrap(), big(2));
        assert!(even_narayana(5, 1).is_err());
        assert!(even_narayana(6, 4).is_err());
        assert!(even_narayana(6, 0).is_err());
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_noncrossing(1).unwrap().len(), 1);
        assert_eq!(enumerate_noncrossing(3).unwrap().len(), 5);
        let four = enumerate_noncrossing(4).unwrap();
        assert_eq!(four.len(), 14);
        let all_even = four.iter().filter(|p| p.b_cycle_type.all_even()).count();
        assert_eq!(all_even, 3);
        assert!(enumerate_noncrossing(MAX_ENUMERATION_N + 1).is_err());
    }

    #[test]
    fn figure_examples_are_noncrossing() {
        let six = enumerate_noncrossing(6).unwrap();
        // (4,3,2,1,6,5) in one-based notation: three 2-cycles.
        let paired = [3, 2, 1, 0, 5, 4];
        let found = six.iter().find(|p| p.mapping == paired).expect("present");
        assert_eq!(found.b_cycle_type, CyclePartition::new(6, &[0, 3]).unwrap());
        assert_eq!(found.a_cycle_count, 4);
        assert_eq!(six[0].mapping, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(six[0].a_cycle_count, 1);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let five = enumerate_noncrossing(5).unwrap();
        assert!(five.windows(2).all(|w| w[0].mapping < w[1].mapping));
    }

    #[test]
    fn cycle_types_cover_partitions() {
        // partitions of 6 into 3 parts: 4+1+1, 3+2+1, 2+2+2
        assert_eq!(cycle_types(6, 3).len(), 3);
        assert_eq!(cycle_types(5, 5), vec![CyclePartition::new(5, &[5]).unwrap()]);
        assert!(cycle_types(3, 4).is_empty());
    }

    #[test]
    fn catalan_values() {
        let expected = [1u64, 1, 2, 5, 14, 42, 132, 429];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(catalan(n), big(c));
        }
    }
}
