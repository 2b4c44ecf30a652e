//! Hypergraph Laplacians on `Z_k`, the permutation module of ordered
//! `k`-tuples of distinct vertices, where `P_B` averages over `Sym(B)`.

use num_bigint::BigInt;

use crate::combinatorics::{binom, factorial, permutations};
use crate::eigen::float_contains;
use crate::error::{guard_dim, Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::matrix::Matrix;
use crate::operator::{Basis, Operator};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

/// Largest `|B|` for which the permutation-sum route is used.
pub const MAX_PERM_SUM_B: usize = 6;

/// Ordered `k`-tuples of distinct elements of `0..n`, lexicographic.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    n: usize,
    k: usize,
    dim: usize,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::arg(format!("tuples of {k} distinct vertices need n >= {k}")));
        }
        let dim = (factorial(n) / factorial(n - k)) as usize;
        guard_dim("tuple space", dim as u64)?;
        Ok(TupleSpace { n, k, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lehmer-style rank: digit `t` is the index of `a_t` among unused values.
    pub fn rank(&self, tuple: &[usize]) -> usize {
        let mut used = vec![false; self.n];
        let mut r = 0;
        for (t, &a) in tuple.iter().enumerate() {
            let idx = (0..a).filter(|&v| !used[v]).count();
            used[a] = true;
            r = r * (self.n - t) + idx;
        }
        r
    }

    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut digits = vec![0; self.k];
        for t in (0..self.k).rev() {
            let base = self.n - t;
            digits[t] = r % base;
            r /= base;
        }
        let mut used = vec![false; self.n];
        digits
            .iter()
            .map(|&d| {
                let v = (0..self.n).filter(|&v| !used[v]).nth(d).unwrap();
                used[v] = true;
                v
            })
            .collect()
    }
}

/// `P_B = (1/|B|!) Σ_{σ ∈ Sym(B)} σ` by explicit summation.
pub fn p_b_zk_perm_sum(n: usize, k: usize, b: VertexSet) -> Result<Operator<Rational>> {
    let space = TupleSpace::new(n, k)?;
    let verts = b.vertices();
    if verts.len() > MAX_PERM_SUM_B {
        return Err(Error::Resource {
            what: "permutation sum over Sym(B)".into(),
            needed: verts.len() as u64,
            limit: MAX_PERM_SUM_B as u64,
        });
    }
    let perms = permutations(verts.len());
    let weight = Rational::new(1.into(), BigInt::from(perms.len()));
    let mut m = Matrix::zeros(space.dim(), space.dim());
    for col in 0..space.dim() {
        let t = space.unrank(col);
        for p in &perms {
            let img: Vec<usize> = t
                .iter()
                .map(|&x| match verts.iter().position(|&v| v == x) {
                    Some(i) => verts[p[i]],
                    None => x,
                })
                .collect();
            m[(space.rank(&img), col)] += &weight;
        }
    }
    Ok(Operator::new(Basis::Tuples { n, k }, m))
}

/// `P_B` by the coefficient law: a tuple with `r` entries in `B` goes to each of
/// its `b!/(b-r)!` re-fillings of those positions with weight `(b-r)!/b!`.
pub fn p_b_zk_coefficient(n: usize, k: usize, b: VertexSet) -> Result<Operator<Rational>> {
    let space = TupleSpace::new(n, k)?;
    let bsz = b.len();
    let verts = b.vertices();
    let mut m = Matrix::zeros(space.dim(), space.dim());
    for col in 0..space.dim() {
        let t = space.unrank(col);
        let pos: Vec<usize> = (0..k).filter(|&i| b.contains(t[i])).collect();
        let r = pos.len();
        let coef = Rational::new(BigInt::from(factorial(bsz - r)), BigInt::from(factorial(bsz)));
        let mut fill = vec![0usize; r];
        fill_injective(&verts, &mut fill, 0, &mut vec![false; verts.len()], &mut |f| {
            let mut img = t.clone();
            for (p, &v) in pos.iter().zip(f) {
                img[*p] = v;
            }
            m[(space.rank(&img), col)] = coef.clone();
        });
    }
    Ok(Operator::new(Basis::Tuples { n, k }, m))
}

fn fill_injective(verts: &[usize], cur: &mut [usize], at: usize, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
    if at == cur.len() {
        f(cur);
        return;
    }
    for i in 0..verts.len() {
        if !used[i] {
            used[i] = true;
            cur[at] = verts[i];
            fill_injective(verts, cur, at + 1, used, f);
            used[i] = false;
        }
    }
}

/// `P_B` on `Z_k`; the permutation sum for `|B| <= 6`, the coefficient law beyond.
pub fn p_b_zk(n: usize, k: usize, b: VertexSet) -> Result<Operator<Rational>> {
    if b.0 >> n != 0 {
        return Err(Error::arg(format!("subset {b} exceeds n = {n}")));
    }
    if b.len() <= MAX_PERM_SUM_B {
        p_b_zk_perm_sum(n, k, b)
    } else {
        p_b_zk_coefficient(n, k, b)
    }
}

pub fn laplacian_zk<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<Operator<S>> {
    g.require_valid()?;
    let n = g.n();
    let dim = TupleSpace::new(n, k)?.dim();
    let mut l = Matrix::<S>::zeros(dim, dim);
    for (b, w) in g.active_edges() {
        let p = p_b_zk(n, k, b)?.matrix.map(S::from_rational);
        l.add_scaled(w, &Matrix::identity(dim));
        l.add_scaled(&-w.clone(), &p);
    }
    Ok(Operator::new(Basis::Tuples { n, k }, l))
}

/// Spectral gap of `Sym(n)` under mean-field weights: `Σ_ℓ c_ℓ (n/ℓ) binom(n-2, ℓ-2)`.
pub fn sn_mean_field_eigenvalue<S: Scalar>(n: usize, c: &[S]) -> Result<S> {
    if c.len() != n + 1 {
        return Err(Error::arg(format!("expected {} coefficients c_0..c_n", n + 1)));
    }
    let mut acc = S::zero();
    for l in 2..=n {
        let f = S::from_ratio(n as i64 * binom(n - 2, l - 2) as i64, l as i64);
        acc += &(c[l].clone() * &f);
    }
    Ok(acc)
}

/// Outcome of a spectral containment check.
#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub contained: bool,
    /// Exact mode: the cofactor `χ_outer / χ_inner` when it divides.
    pub cofactor: Option<Poly<Rational>>,
}

/// Exact containment: `χ_inner` divides `χ_outer`.
pub fn spectra_contains_exact(outer: &Poly<Rational>, inner: &Poly<Rational>) -> Containment {
    if inner.is_zero() {
        return Containment { contained: false, cofactor: None };
    }
    let (q, r) = outer.div_rem(inner);
    Containment {
        contained: r.is_zero(),
        cofactor: r.is_zero().then_some(q),
    }
}

/// Float containment by greedy matching within `tol` (default `1e-7`).
pub fn spectra_contains_float(outer: &[f64], inner: &[f64], tol: f64) -> bool {
    float_contains(outer, inner, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    #[test]
    fn tuple_rank_roundtrip() {
        for n in 1..=5 {
            for k in 0..=n {
                let s = TupleSpace::new(n, k).unwrap();
                let mut prev: Option<Vec<usize>> = None;
                for r in 0..s.dim() {
                    let t = s.unrank(r);
                    assert_eq!(s.rank(&t), r);
                    let mut sorted = t.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), k);
                    if let Some(p) = prev {
                        assert!(p < t);
                    }
                    prev = Some(t);
                }
            }
        }
    }

    #[test]
    fn two_routes_agree() {
        for n in 2..=5 {
            for k in 1..=n.min(3) {
                for b in VertexSet::all(n).filter(|b| b.len() <= 4) {
                    let a = p_b_zk_perm_sum(n, k, b).unwrap();
                    let c = p_b_zk_coefficient(n, k, b).unwrap();
                    assert_eq!(a, c, "n={n} k={k} B={b}");
                }
            }
        }
    }

    #[test]
    fn projection_properties() {
        let (n, k) = (4, 2);
        for b in VertexSet::all(n) {
            let p = p_b_zk(n, k, b).unwrap().matrix;
            assert!(p.is_symmetric());
            assert_eq!(p.matmul(&p), p);
        }
    }

    #[test]
    fn commutes_with_relabelings_fixing_b() {
        let (n, k) = (4, 2);
        let b = VertexSet::from_vertices(&[0, 1]);
        let s = TupleSpace::new(n, k).unwrap();
        let p = p_b_zk(n, k, b).unwrap().matrix;
        // (0 1)(2 3) preserves B setwise.
        let perm = [1, 0, 3, 2];
        let q = Matrix::from_fn(s.dim(), s.dim(), |r, c| {
            let t: Vec<usize> = s.unrank(c).iter().map(|&x| perm[x]).collect();
            if s.rank(&t) == r {
                rint(1)
            } else {
                rint(0)
            }
        });
        assert_eq!(q.matmul(&p), p.matmul(&q));
    }

    #[test]
    fn mean_field_value() {
        // n = 3, all weight on pairs: c_2 * 3/2 * binom(1,0).
        let c = [rint(0), rint(0), rint(2), rint(0)];
        assert_eq!(sn_mean_field_eigenvalue(3, &c).unwrap(), rint(3));
        let c = [rint(0), rint(0), rint(0), rat(1, 7)];
        assert_eq!(sn_mean_field_eigenvalue(3, &c).unwrap(), rat(1, 7));
    }

    #[test]
    fn containment_logic() {
        let outer = Poly::from_roots(&[rint(0), rint(1), rint(1), rint(2)]);
        let inner = Poly::from_roots(&[rint(1), rint(2)]);
        assert!(spectra_contains_exact(&outer, &inner).contained);
        let not = Poly::from_roots(&[rint(2), rint(2)]);
        assert!(!spectra_contains_exact(&outer, &not).contained);
    }
}
