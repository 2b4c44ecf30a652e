//! Partitions, symmetric-group characters, irrep dimensions and the
//! multiset state space.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest `k` accepted by [`partitions_of`].
pub const MAX_PARTITION_SIZE: usize = 12;

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `binom(a, b)` for a possibly negative `b` (zero then).
pub fn binom_signed(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 || b > a {
        0
    } else {
        binom(a as usize, b as usize)
    }
}

/// Number of multisets of size `k` drawn from `n` symbols.
pub fn multichoose(n: usize, k: usize) -> u64 {
    if n == 0 {
        return u64::from(k == 0);
    }
    binom(n + k - 1, k)
}

/// Non-increasing positive parts. The empty partition is the partition of 0.
pub type Partition = Vec<usize>;

/// All partitions of `k`, reverse-lexicographic: `(k)` first, `(1^k)` last.
pub fn partitions_of(k: usize) -> Result<Vec<Partition>> {
    if k > MAX_PARTITION_SIZE {
        return Err(Error::Resource {
            what: "partitions_of".into(),
            needed: k as u64,
            limit: MAX_PARTITION_SIZE as u64,
        });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_partitions(k, k, &mut cur, &mut out);
    Ok(out)
}

fn fill_partitions(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=rem.min(max)).rev() {
        cur.push(p);
        fill_partitions(rem - p, p, cur, out);
        cur.pop();
    }
}

/// Cycle type of a permutation given as images `perm[i]`, sorted non-increasing.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Size of the conjugacy class with the given cycle type: `k! / z_λ`.
pub fn class_size(ct: &[usize]) -> u64 {
    let k: usize = ct.iter().sum();
    let mut z: u64 = 1;
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &c in ct {
        *counts.entry(c).or_default() += 1;
    }
    for (c, m) in counts {
        z *= (c as u64).pow(m as u32) * factorial(m);
    }
    factorial(k) / z
}

fn hooks(nu: &[usize]) -> Vec<(usize, i64)> {
    // (hook length, content) for every box.
    let conj: Vec<usize> = (0..nu.first().copied().unwrap_or(0))
        .map(|j| nu.iter().filter(|&&r| r > j).count())
        .collect();
    let mut out = Vec::new();
    for (i, &row) in nu.iter().enumerate() {
        for j in 0..row {
            let hook = (row - j - 1) + (conj[j] - i - 1) + 1;
            out.push((hook, j as i64 - i as i64));
        }
    }
    out
}

/// Dimension of the `Sym(k)` irrep `ν` (hook length formula).
pub fn sym_irrep_dim(nu: &[usize]) -> u64 {
    let k: usize = nu.iter().sum();
    let prod: u128 = hooks(nu).iter().map(|&(h, _)| h as u128).product();
    (factorial(k) as u128 / prod) as u64
}

/// Dimension of the polynomial `U(d)` irrep with highest weight `ν` (hook content
/// formula); zero when `ν` has more than `d` rows.
pub fn unitary_irrep_dim(nu: &[usize], d: usize) -> u64 {
    if nu.len() > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (h, c) in hooks(nu) {
        num *= (d as i64 + c) as u128;
        den *= h as u128;
    }
    (num / den) as u64
}

/// Character `χ_ν` on the class of cycle type `ct` (Murnaghan–Nakayama, memoized per call).
pub fn sym_character(nu: &[usize], ct: &[usize]) -> Result<i64> {
    let k: usize = nu.iter().sum();
    if ct.iter().sum::<usize>() != k {
        return Err(Error::arg(format!("cycle type {ct:?} does not partition {k}")));
    }
    let mut cycles = ct.to_vec();
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    let mut memo = HashMap::new();
    Ok(mn(nu.to_vec(), &cycles, &mut memo))
}

fn mn(nu: Partition, cycles: &[usize], memo: &mut HashMap<(Partition, usize), i64>) -> i64 {
    if cycles.is_empty() {
        return i64::from(nu.is_empty());
    }
    let key = (nu.clone(), cycles.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = cycles[0];
    let len = nu.len();
    // Beta numbers: nu_i + (len - 1 - i), strictly decreasing.
    let beta: Vec<usize> = nu.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[idx] = b - r;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let child: Partition = nb
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn(child, &cycles[1..], memo);
    }
    memo.insert(key, total);
    total
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Distinct arrangements of a multiset given as a sorted tuple, lexicographic.
pub fn arrangements(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    cur.sort_unstable();
    let k = cur.len();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Multiplicity vector `#_x(I)` of a sorted tuple.
pub fn counts(tuple: &[usize], n: usize) -> Vec<usize> {
    let mut c = vec![0; n];
    for &x in tuple {
        c[x] += 1;
    }
    c
}

/// Number of distinct arrangements `k! / Π #_x!`.
pub fn arrangement_count(tuple: &[usize], n: usize) -> u64 {
    counts(tuple, n)
        .iter()
        .fold(factorial(tuple.len()), |acc, &c| acc / factorial(c))
}

/// Multisets of size `k` on `n` symbols, as sorted 0-based tuples in colex order.
///
/// The rank of `m_0 <= .. <= m_{k-1}` is `Σ_t binom(m_t + t, t + 1)`, the
/// combinatorial number system applied to the strictly increasing `m_t + t`.
#[derive(Clone, Debug)]
pub struct MultisetSpace {
    n: usize,
    k: usize,
    states: Vec<Vec<usize>>,
}

impl MultisetSpace {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("multiset space needs n >= 1"));
        }
        let dim = multichoose(n, k);
        crate::error::guard_dim("multiset space", dim)?;
        let states = (0..dim as usize).map(|r| unrank_colex(n, k, r)).collect();
        Ok(MultisetSpace { n, k, states })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state(&self, r: usize) -> &[usize] {
        &self.states[r]
    }

    pub fn rank(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.k {
            return Err(Error::arg(format!("expected {} entries, got {}", self.k, tuple.len())));
        }
        if tuple.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::arg("multiset tuple must be sorted"));
        }
        if tuple.iter().any(|&x| x >= self.n) {
            return Err(Error::arg(format!("entry out of range 0..{}", self.n)));
        }
        Ok(rank_colex(tuple))
    }

    /// Rank of a multiplicity vector.
    pub fn rank_counts(&self, c: &[usize]) -> usize {
        let tuple: Vec<usize> = c
            .iter()
            .enumerate()
            .flat_map(|(x, &m)| std::iter::repeat_n(x, m))
            .collect();
        rank_colex(&tuple)
    }
}

pub fn rank_colex(tuple: &[usize]) -> usize {
    tuple
        .iter()
        .enumerate()
        .map(|(t, &m)| binom(m + t, t + 1) as usize)
        .sum()
}

pub fn unrank_colex(n: usize, k: usize, mut r: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for t in (0..k).rev() {
        // Largest c with binom(c, t+1) <= r; c ranges over [t, n + t - 1].
        let mut c = t;
        while c + 1 < n + t && binom(c + 1, t + 1) as usize <= r {
            c += 1;
        }
        r -= binom(c, t + 1) as usize;
        out[t] = c - t;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force partition count by recursion on the largest part.
    fn count_partitions(k: usize, max: usize) -> usize {
        if k == 0 {
            return 1;
        }
        (1..=k.min(max)).map(|p| count_partitions(k - p, p)).sum()
    }

    #[test]
    fn partition_order_and_counts() {
        let p4 = partitions_of(4).unwrap();
        assert_eq!(p4, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(partitions_of(k).unwrap().len(), e);
            assert_eq!(count_partitions(k, k), e);
        }
        assert!(partitions_of(13).is_err());
    }

    #[test]
    fn sym3_characters() {
        // Explicit traces: trivial, sign, standard 2-dim.
        assert_eq!(sym_character(&[3], &[2, 1]).unwrap(), 1);
        assert_eq!(sym_character(&[1, 1, 1], &[2, 1]).unwrap(), -1);
        assert_eq!(sym_character(&[2, 1], &[1, 1, 1]).unwrap(), 2);
        assert_eq!(sym_character(&[2, 1], &[2, 1]).unwrap(), 0);
        assert_eq!(sym_character(&[2, 1], &[3]).unwrap(), -1);
    }

    #[test]
    fn sym4_standard_character_counts_fixed_points() {
        // χ_(3,1)(σ) = #fixed points - 1.
        for ct in partitions_of(4).unwrap() {
            let fixed = ct.iter().filter(|&&c| c == 1).count() as i64;
            assert_eq!(sym_character(&[3, 1], &ct).unwrap(), fixed - 1);
        }
    }

    #[test]
    fn character_orthogonality() {
        for k in 1..=6 {
            let parts = partitions_of(k).unwrap();
            for a in &parts {
                for b in &parts {
                    let s: i64 = parts
                        .iter()
                        .map(|ct| {
                            class_size(ct) as i64
                                * sym_character(a, ct).unwrap()
                                * sym_character(b, ct).unwrap()
                        })
                        .sum();
                    let expect = if a == b { factorial(k) as i64 } else { 0 };
                    assert_eq!(s, expect, "k={k} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn dimension_sum_of_squares() {
        for k in 1..=8 {
            let s: u64 = partitions_of(k).unwrap().iter().map(|p| sym_irrep_dim(p).pow(2)).sum();
            assert_eq!(s, factorial(k));
            for p in partitions_of(k).unwrap() {
                let ones = vec![1; k];
                assert_eq!(sym_character(&p, &ones).unwrap() as u64, sym_irrep_dim(&p));
            }
        }
    }

    /// Semistandard tableaux counted by brute force: fill rows left to right.
    fn count_ssyt(nu: &[usize], d: usize) -> u64 {
        let cells: Vec<(usize, usize)> = nu
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
            .collect();
        let mut grid = vec![vec![0usize; nu.first().copied().unwrap_or(0)]; nu.len()];
        fn go(idx: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<usize>>, d: usize) -> u64 {
            if idx == cells.len() {
                return 1;
            }
            let (i, j) = cells[idx];
            let mut total = 0;
            for v in 0..d {
                if j > 0 && grid[i][j - 1] > v {
                    continue;
                }
                if i > 0 && grid[i - 1][j] >= v {
                    continue;
                }
                grid[i][j] = v;
                total += go(idx + 1, cells, grid, d);
            }
            total
        }
        go(0, &cells, &mut grid, d)
    }

    #[test]
    fn hook_content_matches_ssyt() {
        for k in 1..=5 {
            for p in partitions_of(k).unwrap() {
                for d in 1..=4 {
                    assert_eq!(unitary_irrep_dim(&p, d), count_ssyt(&p, d), "{p:?} d={d}");
                }
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for k in 1..=8 {
            let s: u64 = partitions_of(k).unwrap().iter().map(|p| class_size(p)).sum();
            assert_eq!(s, factorial(k));
        }
        assert_eq!(class_size(&[2, 1, 1]), 6);
        assert_eq!(class_size(&[2, 2]), 3);
    }

    #[test]
    fn multiset_order_small() {
        let s = MultisetSpace::new(3, 2).unwrap();
        let expected: Vec<Vec<usize>> =
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![0, 2], vec![1, 2], vec![2, 2]];
        assert_eq!(s.states(), &expected[..]);
        assert!(s.rank(&[2, 1]).is_err());
        assert!(s.rank(&[0, 3]).is_err());
    }

    #[test]
    fn arrangements_count() {
        let a = arrangements(&[0, 0, 1, 2]);
        assert_eq!(a.len(), 12);
        assert_eq!(arrangement_count(&[0, 0, 1, 2], 3), 12);
        assert_eq!(permutations(4).len(), 24);
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(n in 1usize..=8, k in 0usize..=5, seed in 0usize..10_000) {
            let dim = multichoose(n, k) as usize;
            let r = seed % dim;
            let t = unrank_colex(n, k, r);
            prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(t.iter().all(|&x| x < n));
            prop_assert_eq!(rank_colex(&t), r);
        }

        #[test]
        fn colex_is_increasing(n in 1usize..=6, k in 1usize..=4) {
            let s = MultisetSpace::new(n, k).unwrap();
            for w in s.states().windows(2) {
                let a: Vec<usize> = w[0].iter().rev().copied().collect();
                let b: Vec<usize> = w[1].iter().rev().copied().collect();
                prop_assert!(a < b);
            }
        }
    }
}
