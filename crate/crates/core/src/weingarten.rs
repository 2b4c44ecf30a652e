//! Weingarten calculus on `U(d)` and the averaging projections on
//! `R_{k,m} : A ↦ A^{⊗k} ⊗ conj(A)^{⊗m}`.
//!
//! All projection entries are computed from the raw Weingarten sum over pairs
//! of permutations; nothing here assumes the multiset averaging law.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    arrangement_count, arrangements, class_size, cycle_type, factorial, partitions_of,
    sym_character, sym_irrep_dim, unitary_irrep_dim, MultisetSpace, Partition,
};
use crate::error::{guard_dim, Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::matrix::Matrix;
use crate::operator::{Basis, Operator};
use crate::scalar::{rint, Rational, Scalar};

/// Largest `k` for which Weingarten tables are built.
pub const MAX_WG_K: usize = 6;

/// `Wg_{k,d}` as a class function on `Sym(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeingartenTable {
    pub k: usize,
    pub d: usize,
    /// Cycle types in reverse-lexicographic order, with matching values.
    pub classes: Vec<Partition>,
    pub values: Vec<Rational>,
    index: HashMap<Partition, usize>,
}

impl WeingartenTable {
    pub fn value(&self, ct: &[usize]) -> &Rational {
        &self.values[self.index[ct]]
    }

    pub fn value_of_perm(&self, perm: &[usize]) -> &Rational {
        self.value(&cycle_type(perm))
    }

    /// `Σ_σ Wg(σ)`.
    pub fn sum(&self) -> Rational {
        self.classes
            .iter()
            .zip(&self.values)
            .map(|(c, v)| v * rint(class_size(c) as i64))
            .sum()
    }

    /// `Σ_σ sgn(σ) Wg(σ)`.
    pub fn signed_sum(&self) -> Rational {
        self.classes
            .iter()
            .zip(&self.values)
            .map(|(c, v)| {
                let odd = c.iter().map(|l| l - 1).sum::<usize>() % 2 == 1;
                let s = v * rint(class_size(c) as i64);
                if odd {
                    -s
                } else {
                    s
                }
            })
            .sum()
    }
}

pub fn wg_table(k: usize, d: usize) -> Result<WeingartenTable> {
    if k > MAX_WG_K {
        return Err(Error::Resource {
            what: "Weingarten table size k".into(),
            needed: k as u64,
            limit: MAX_WG_K as u64,
        });
    }
    if k == 0 || d == 0 {
        return Err(Error::arg("Weingarten tables need k >= 1 and d >= 1"));
    }
    let parts = partitions_of(k)?;
    let kf = rint(factorial(k) as i64);
    let norm = kf.clone() * kf;
    let mut values = Vec::with_capacity(parts.len());
    for ct in &parts {
        let mut acc = Rational::zero();
        for nu in parts.iter().filter(|nu| nu.len() <= d) {
            let dim = sym_irrep_dim(nu) as i64;
            let s = unitary_irrep_dim(nu, d) as i64;
            let chi = sym_character(nu, ct)?;
            acc += Rational::new(BigInt::from(dim * dim * chi), BigInt::from(s));
        }
        values.push(acc / norm.clone());
    }
    let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(WeingartenTable {
        k,
        d,
        classes: parts,
        values,
        index,
    })
}

/// Shared, lazily filled table store; readers never observe a partial table.
fn cached_table(k: usize, d: usize) -> Result<Arc<WeingartenTable>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<WeingartenTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&(k, d)) {
        return Ok(t.clone());
    }
    let t = Arc::new(wg_table(k, d)?);
    cache.write().unwrap().entry((k, d)).or_insert(t.clone());
    Ok(t)
}

/// Permutations `σ` of `0..k` with `a[t] == b[σ(t)]` for all `t`.
fn matchings(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    fn go(t: usize, a: &[usize], b: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if t == a.len() {
            out.push(cur.clone());
            return;
        }
        for s in 0..b.len() {
            if !used[s] && b[s] == a[t] {
                used[s] = true;
                cur.push(s);
                go(t + 1, a, b, used, cur, out);
                cur.pop();
                used[s] = false;
            }
        }
    }
    let mut out = Vec::new();
    if a.len() == b.len() {
        go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), &mut out);
    }
    out
}

/// `∫_{U(d)} A_{i_1 j_1}..A_{i_k j_k} conj(A_{i'_1 j'_1}..A_{i'_m j'_m}) dA`
/// for indices in `0..d`.
pub fn monomial_integral(d: usize, i: &[usize], j: &[usize], ip: &[usize], jp: &[usize]) -> Result<Rational> {
    if i.len() != j.len() || ip.len() != jp.len() {
        return Err(Error::arg("row and column index lists must have equal length"));
    }
    if i.iter().chain(j).chain(ip).chain(jp).any(|&x| x >= d) {
        return Err(Error::arg(format!("index out of range 0..{d}")));
    }
    if i.len() != ip.len() {
        return Ok(Rational::zero());
    }
    if i.is_empty() {
        return Ok(Rational::one());
    }
    raw_weingarten_sum(d, i, j, ip, jp)
}

fn raw_weingarten_sum(d: usize, i: &[usize], j: &[usize], ip: &[usize], jp: &[usize]) -> Result<Rational> {
    let sigmas = matchings(i, ip);
    if sigmas.is_empty() {
        return Ok(Rational::zero());
    }
    let taus = matchings(j, jp);
    if taus.is_empty() {
        return Ok(Rational::zero());
    }
    let table = cached_table(i.len(), d)?;
    let k = i.len();
    let mut class_counts = vec![0i64; table.classes.len()];
    let mut inv = vec![0; k];
    let mut comp = vec![0; k];
    for s in &sigmas {
        for (t, &st) in s.iter().enumerate() {
            inv[st] = t;
        }
        for tau in &taus {
            for x in 0..k {
                comp[x] = tau[inv[x]];
            }
            class_counts[table.index[&cycle_type(&comp)]] += 1;
        }
    }
    Ok(class_counts
        .iter()
        .zip(&table.values)
        .filter(|(c, _)| **c != 0)
        .map(|(c, v)| v * rint(*c))
        .sum())
}

/// Entry `[(i, j), (i', j')]` of `P_B` on `R_{k,m}` (vertex indices in `0..n`).
pub fn projection_entry(b: VertexSet, i: &[usize], j: &[usize], ip: &[usize], jp: &[usize]) -> Result<Rational> {
    let mut ai = Vec::new();
    let mut aj = Vec::new();
    for (&r, &c) in i.iter().zip(ip) {
        if b.contains(r) && b.contains(c) {
            ai.push(r);
            aj.push(c);
        } else if r != c {
            return Ok(Rational::zero());
        }
    }
    let mut ci = Vec::new();
    let mut cj = Vec::new();
    for (&r, &c) in j.iter().zip(jp) {
        if b.contains(r) && b.contains(c) {
            ci.push(r);
            cj.push(c);
        } else if r != c {
            return Ok(Rational::zero());
        }
    }
    if ai.len() != ci.len() {
        return Ok(Rational::zero());
    }
    if ai.is_empty() {
        return Ok(Rational::one());
    }
    raw_weingarten_sum(b.len(), &ai, &aj, &ci, &cj)
}

fn digits(mut idx: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for t in (0..len).rev() {
        out[t] = idx % n;
        idx /= n;
    }
    out
}

fn undigits(ds: &[usize], n: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * n + x)
}

/// Columns that can be nonzero in row `row`: positions outside `B` are pinned.
fn candidate_columns(b: VertexSet, row: &[usize]) -> Vec<Vec<usize>> {
    let inside = b.vertices();
    let mut out = vec![vec![]];
    for &x in row {
        let choices: Vec<usize> = if b.contains(x) { inside.clone() } else { vec![x] };
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                choices.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// `P_B = ∫_{U_B} R_{k,m}(A) dA` on the tensor basis.
pub fn projection_rkm(b: VertexSet, n: usize, k: usize, m: usize) -> Result<Operator<Rational>> {
    if b.0 >> n != 0 {
        return Err(Error::arg(format!("subset {b} exceeds n = {n}")));
    }
    let dim = (n as u64).checked_pow((k + m) as u32).unwrap_or(u64::MAX);
    guard_dim("tensor representation", dim)?;
    if k + m > 0 && b.len() > 1 && k.max(m) > MAX_WG_K {
        return Err(Error::Resource {
            what: "Weingarten table size k".into(),
            needed: k.max(m) as u64,
            limit: MAX_WG_K as u64,
        });
    }
    let dim = dim as usize;
    let rows: Vec<Vec<(usize, Rational)>> = (0..dim)
        .into_par_iter()
        .map(|r| {
            let row = digits(r, n, k + m);
            let mut entries = Vec::new();
            for col in candidate_columns(b, &row) {
                let v = projection_entry(b, &row[..k], &row[k..], &col[..k], &col[k..])?;
                if !v.is_zero() {
                    entries.push((undigits(&col, n), v));
                }
            }
            Ok(entries)
        })
        .collect::<Result<_>>()?;
    let mut mat = Matrix::zeros(dim, dim);
    for (r, entries) in rows.into_iter().enumerate() {
        for (c, v) in entries {
            mat[(r, c)] = v;
        }
    }
    Ok(Operator::new(Basis::Tensor { n, k, m }, mat))
}

/// Basis indices of `R_{k,m}` grouped by torus weight `#_x(i) - #_x(j)`.
/// Every `P_B` preserves these groups.
pub fn tensor_weight_blocks(n: usize, k: usize, m: usize) -> Vec<Vec<usize>> {
    let dim = n.pow((k + m) as u32);
    let mut groups: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for r in 0..dim {
        let d = digits(r, n, k + m);
        let mut w = vec![0i64; n];
        for &x in &d[..k] {
            w[x] += 1;
        }
        for &x in &d[k..] {
            w[x] -= 1;
        }
        groups.entry(w).or_default().push(r);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Element of the orthonormal torus-invariant basis of the `(k, k)` piece,
/// labelled by a multiset `I` with `c_I` arrangements.
#[derive(Clone, Debug, PartialEq)]
pub struct TorInvVector {
    pub multiset: Vec<usize>,
    pub arrangements: u64,
}

pub fn torinv_basis_skk(n: usize, k: usize) -> Result<Vec<TorInvVector>> {
    let space = MultisetSpace::new(n, k)?;
    Ok(space
        .states()
        .iter()
        .map(|st| TorInvVector {
            multiset: st.clone(),
            arrangements: arrangement_count(st, n),
        })
        .collect())
}

/// Coordinates in `R_{k,k}` of the basis vector for `I`:
/// `(1/c_I) Σ_{a, b arrangements of I} e_a ⊗ e^b`.
pub fn torinv_embedding(n: usize, v: &TorInvVector) -> Vec<(usize, Rational)> {
    let arr = arrangements(&v.multiset);
    let coef = Rational::new(BigInt::one(), BigInt::from(v.arrangements));
    let mut out = Vec::with_capacity(arr.len() * arr.len());
    for a in &arr {
        for bb in &arr {
            let mut idx = a.clone();
            idx.extend(bb);
            out.push((undigits(&idx, n), coef.clone()));
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

/// Matrix of `P_B` on the torus-invariant basis, by contracting raw tensor entries.
pub fn projection_torinv_skk(b: VertexSet, n: usize, k: usize) -> Result<Operator<Rational>> {
    if b.0 >> n != 0 {
        return Err(Error::arg(format!("subset {b} exceeds n = {n}")));
    }
    let basis = torinv_basis_skk(n, k)?;
    let arr: Vec<Vec<Vec<usize>>> = basis.iter().map(|v| arrangements(&v.multiset)).collect();
    let dim = basis.len();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .into_par_iter()
        .map(|jx| {
            (0..dim)
                .map(|ix| {
                    let mut acc = Rational::zero();
                    for a in &arr[jx] {
                        for bb in &arr[jx] {
                            for ip in &arr[ix] {
                                for jp in &arr[ix] {
                                    let v = projection_entry(b, a, bb, ip, jp)?;
                                    if !v.is_zero() {
                                        acc += &v;
                                    }
                                }
                            }
                        }
                    }
                    let c = BigInt::from(basis[ix].arrangements * basis[jx].arrangements);
                    Ok(acc / Rational::from_integer(c))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mat = Matrix::from_rows(rows)?;
    Ok(Operator::new(Basis::TorInvSkk { n, k }, mat))
}

/// `Σ_B w_B (I - P_B)` on `R_{k,m}`.
pub fn laplacian_rkm<S: Scalar>(g: &Hypergraph<S>, k: usize, m: usize) -> Result<Operator<S>> {
    g.require_valid()?;
    let n = g.n();
    let dim = (n as u64).checked_pow((k + m) as u32).unwrap_or(u64::MAX);
    guard_dim("tensor representation", dim)?;
    let dim = dim as usize;
    let mut l = Matrix::<S>::zeros(dim, dim);
    for (b, w) in g.active_edges() {
        let p = projection_rkm(b, n, k, m)?.matrix;
        for r in 0..dim {
            l[(r, r)] += w;
            for (c, v) in p.row(r).iter().enumerate() {
                if !v.is_zero() {
                    let d = S::from_rational(v) * w;
                    l[(r, c)] -= &d;
                }
            }
        }
    }
    Ok(Operator::new(Basis::Tensor { n, k, m }, l))
}

/// Diagonal blocks of `Σ_B w_B (I - P_B)` on `R_{k,m}`, one per torus weight
/// (as in [`tensor_weight_blocks`]), filled entrywise without the full matrix.
pub fn laplacian_rkm_blocks<S: Scalar>(g: &Hypergraph<S>, k: usize, m: usize) -> Result<Vec<(Vec<usize>, Matrix<S>)>> {
    g.require_valid()?;
    let n = g.n();
    let dim = (n as u64).checked_pow((k + m) as u32).unwrap_or(u64::MAX);
    guard_dim("tensor representation", dim)?;
    let edges: Vec<(VertexSet, S)> = g.active_edges().map(|(b, w)| (b, w.clone())).collect();
    tensor_weight_blocks(n, k, m)
        .into_par_iter()
        .map(|idx| {
            let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &r)| (r, p)).collect();
            let size = idx.len();
            let mut l = Matrix::<S>::zeros(size, size);
            for (b, w) in &edges {
                for (p, &r) in idx.iter().enumerate() {
                    l[(p, p)] += w;
                    let row = digits(r, n, k + m);
                    for col in candidate_columns(*b, &row) {
                        // Columns of another weight carry zero entries.
                        let Some(&q) = pos.get(&undigits(&col, n)) else { continue };
                        let v = projection_entry(*b, &row[..k], &row[k..], &col[..k], &col[k..])?;
                        if !v.is_zero() {
                            let d = S::from_rational(&v) * w;
                            l[(p, q)] -= &d;
                        }
                    }
                }
            }
            Ok((idx, l))
        })
        .collect()
}

/// `Σ_B w_B (I - P_B)` on the torus-invariant `(k, k)` basis.
pub fn laplacian_torinv_skk<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<Operator<S>> {
    g.require_valid()?;
    let n = g.n();
    let dim = MultisetSpace::new(n, k)?.dim();
    let mut l = Matrix::<S>::zeros(dim, dim);
    for (b, w) in g.active_edges() {
        let p = projection_torinv_skk(b, n, k)?.matrix.map(S::from_rational);
        l.add_scaled(w, &Matrix::identity(dim));
        l.add_scaled(&-w.clone(), &p);
    }
    Ok(Operator::new(Basis::TorInvSkk { n, k }, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmp::n_b_operator;
    use crate::scalar::{rat, rint};

    #[test]
    fn blocks_match_dense_laplacian() {
        let g = Hypergraph::from_edges(3, &[(vec![0, 1], rat(1, 2)), (vec![0, 1, 2], rint(2))]).unwrap();
        for (k, m) in [(1, 1), (2, 1), (2, 2)] {
            let dense = laplacian_rkm(&g, k, m).unwrap().matrix;
            for (idx, blk) in laplacian_rkm_blocks(&g, k, m).unwrap() {
                assert_eq!(dense.submatrix(&idx, &idx), blk);
            }
        }
    }

    #[test]
    fn wg2_closed_forms() {
        for d in 2..=8i64 {
            let t = wg_table(2, d as usize).unwrap();
            assert_eq!(t.value(&[1, 1]), &rat(1, d * d - 1));
            assert_eq!(t.value(&[2]), &rat(-1, d * d * d - d));
        }
    }

    #[test]
    fn wg_small_d_uses_only_short_partitions() {
        // d = 1: only the trivial irrep survives, Wg ≡ 1/k!^2.
        let t = wg_table(3, 1).unwrap();
        assert!(t.values.iter().all(|v| *v == rat(1, 36)));
        assert!(matches!(wg_table(7, 3), Err(Error::Resource { .. })));
    }

    #[test]
    fn integral_examples() {
        // ∫ |A_11|^2 |A_22|^2 over U(2) = 1/3; ∫ |A_11|^4 = 1/3; ∫ |A_11|^2 = 1/2.
        assert_eq!(monomial_integral(2, &[0, 1], &[0, 1], &[0, 1], &[0, 1]).unwrap(), rat(1, 3));
        assert_eq!(monomial_integral(2, &[0, 0], &[0, 0], &[0, 0], &[0, 0]).unwrap(), rat(1, 3));
        assert_eq!(monomial_integral(2, &[0], &[0], &[0], &[0]).unwrap(), rat(1, 2));
        assert_eq!(monomial_integral(2, &[0, 0], &[0, 0], &[0], &[0]).unwrap(), rat(0, 1));
        // ∫ A_11 A_22 conj(A_12 A_21) = -1/6.
        assert_eq!(monomial_integral(2, &[0, 1], &[0, 1], &[0, 1], &[1, 0]).unwrap(), rat(-1, 6));
    }

    #[test]
    fn projections_are_orthogonal_projections() {
        for (n, k, m) in [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 0)] {
            for b in VertexSet::all(n) {
                let p = projection_rkm(b, n, k, m).unwrap().matrix;
                assert!(p.is_symmetric(), "{n} {k} {m} {b}");
                assert_eq!(p.matmul(&p), p, "{n} {k} {m} {b}");
            }
        }
    }

    #[test]
    fn singleton_projection_is_phase_average() {
        // U({x}) = U(1): keeps exactly the tensors balanced at x.
        let (n, k, m) = (2, 2, 1);
        let p = projection_rkm(VertexSet(1), n, k, m).unwrap().matrix;
        for r in 0..p.rows() {
            let d = digits(r, n, k + m);
            let bal = d[..k].iter().filter(|&&x| x == 0).count() == d[k..].iter().filter(|&&x| x == 0).count();
            let expect = if bal { rint(1) } else { rint(0) };
            assert_eq!(p[(r, r)], expect);
        }
    }

    #[test]
    fn torinv_embedding_is_orthonormal() {
        let (n, k) = (3, 2);
        let basis = torinv_basis_skk(n, k).unwrap();
        let vecs: Vec<Vec<(usize, Rational)>> = basis.iter().map(|v| torinv_embedding(n, v)).collect();
        for (a, va) in vecs.iter().enumerate() {
            for (b, vb) in vecs.iter().enumerate() {
                let mut s = Rational::zero();
                for (i, x) in va {
                    for (j, y) in vb {
                        if i == j {
                            s += &(x * y);
                        }
                    }
                }
                assert_eq!(s, if a == b { rint(1) } else { rint(0) });
            }
        }
    }

    #[test]
    fn torinv_matches_multiset_averaging_small() {
        for k in 1..=2 {
            for b in VertexSet::all(3) {
                let p = projection_torinv_skk(b, 3, k).unwrap().matrix;
                let nb = n_b_operator::<Rational>(3, k, b).unwrap().matrix;
                assert_eq!(p, nb, "k={k} B={b}");
            }
        }
    }

    #[test]
    fn weight_blocks_partition_the_basis() {
        let blocks = tensor_weight_blocks(3, 2, 2);
        assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), 81);
        let p = projection_rkm(VertexSet(0b111), 3, 2, 2).unwrap().matrix;
        assert!(crate::linalg::split_blocks(&p, &blocks).is_some());
    }
}
