//! The multiset (KMP) representations and their hypergraph Laplacians.
//!
//! `N_B` averages uniformly over all redistributions of the particles inside
//! `B`, holding the configuration outside `B` fixed. The pure subspace of
//! degree `k` is the orthogonal complement of the image of `Ψ_{k-1}`; every
//! `N_B` preserves it, so spectra split into pure blocks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binom, counts, multichoose, MultisetSpace};
use crate::eigen::{exact_spectrum_from_charpoly, min_eig_pencil, spectrum, symmetric_eigenvalues, Eigenvalue, Spectrum};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::linalg::{charpoly, gram_schmidt, null_space};
use crate::matrix::{dot, Matrix};
use crate::operator::{Basis, Operator};
use crate::poly::Poly;
use crate::scalar::{Mode, Rational, Scalar};

/// States grouped by their configuration outside `b`; each group is one block of `N_B`.
fn blocks_outside(space: &MultisetSpace, b: VertexSet) -> Vec<Vec<usize>> {
    let n = space.n();
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (idx, st) in space.states().iter().enumerate() {
        let mut c = counts(st, n);
        for v in b.vertices() {
            c[v] = 0;
        }
        groups.entry(c).or_default().push(idx);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

pub fn n_b_operator<S: Scalar>(n: usize, k: usize, b: VertexSet) -> Result<Operator<S>> {
    let space = MultisetSpace::new(n, k)?;
    if b.0 >> n != 0 {
        return Err(Error::arg(format!("subset {b} exceeds n = {n}")));
    }
    let dim = space.dim();
    let mut m = Matrix::zeros(dim, dim);
    for group in blocks_outside(&space, b) {
        let v = S::one() / S::from_i64(group.len() as i64);
        for &i in &group {
            for &j in &group {
                m[(i, j)] = v.clone();
            }
        }
    }
    Ok(Operator::new(Basis::Multisets { n, k }, m))
}

/// `L = Σ_B w_B (I - N_B)` on multisets of size `k`.
pub fn kmp_laplacian<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<Operator<S>> {
    g.require_valid()?;
    let n = g.n();
    let space = MultisetSpace::new(n, k)?;
    let dim = space.dim();
    let mut m = Matrix::zeros(dim, dim);
    for (b, w) in g.active_edges() {
        for group in blocks_outside(&space, b) {
            if group.len() == 1 {
                continue;
            }
            let share = w.clone() / S::from_i64(group.len() as i64);
            for &i in &group {
                m[(i, i)] += w;
                for &j in &group {
                    m[(i, j)] -= &share;
                }
            }
        }
    }
    Ok(Operator::new(Basis::Multisets { n, k }, m))
}

/// `Ψ_k : MS(n,k) -> MS(n,k+1)`, `δ_I ↦ Σ_x (#_x(I) + 1) δ_{I ⊔ {x}}`.
pub fn psi<S: Scalar>(n: usize, k: usize) -> Result<Matrix<S>> {
    let src = MultisetSpace::new(n, k)?;
    let dst = MultisetSpace::new(n, k + 1)?;
    let mut m = Matrix::zeros(dst.dim(), src.dim());
    for (col, st) in src.states().iter().enumerate() {
        let c = counts(st, n);
        for x in 0..n {
            let mut c2 = c.clone();
            c2[x] += 1;
            m[(dst.rank_counts(&c2), col)] = S::from_i64(c[x] as i64 + 1);
        }
    }
    Ok(m)
}

/// Orthogonal basis of the pure subspace. Columns are orthogonal; in float
/// mode they are also unit length.
#[derive(Clone, Debug)]
pub struct PureBasis<S> {
    pub n: usize,
    pub k: usize,
    pub columns: Vec<Vec<S>>,
    /// Squared norms of the columns.
    pub norms: Vec<S>,
}

impl<S: Scalar> PureBasis<S> {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn ambient_dim(&self) -> usize {
        multichoose(self.n, self.k) as usize
    }

    pub fn matrix(&self) -> Matrix<S> {
        Matrix::from_columns(self.ambient_dim(), &self.columns)
    }

    /// Compression `(Bᵀ A B, BᵀB)` of an operator on the ambient space.
    pub fn compress(&self, a: &Matrix<S>) -> (Matrix<S>, Matrix<S>) {
        let bm = self.matrix();
        let ab = a.matmul(&bm);
        let c = bm.transpose().matmul(&ab);
        (c, Matrix::diagonal(&self.norms))
    }

    /// Matrix of an invariant operator on the pure subspace, in this basis.
    pub fn restrict(&self, a: &Matrix<S>) -> Matrix<S> {
        let (c, _) = self.compress(a);
        Matrix::from_fn(c.rows(), c.cols(), |i, j| c[(i, j)].clone() / self.norms[i].clone())
    }
}

/// Expected dimension of the pure subspace: `binom(n+k-1, k) - binom(n+k-2, k-1)`.
pub fn pure_dim(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    (binom(n + k - 1, k) - binom(n + k - 2, k - 1)) as usize
}

/// Rescales a nonzero rational vector to a primitive integer vector, keeping
/// Gram-Schmidt output orthogonal while keeping entries small.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

fn exact_pure_basis(n: usize, k: usize) -> Result<Arc<PureBasis<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<PureBasis<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(b.clone());
    }
    let dim = MultisetSpace::new(n, k)?.dim();
    let raw: Vec<Vec<Rational>> = if k == 0 {
        vec![vec![Rational::from_integer(1.into())]]
    } else {
        null_space(&psi::<Rational>(n, k - 1)?.transpose())
    };
    let columns: Vec<Vec<Rational>> = gram_schmidt(&raw).iter().map(|c| primitive(c)).collect();
    let norms = columns.iter().map(|c| dot(c, c)).collect();
    let basis = Arc::new(PureBasis { n, k, columns, norms });
    if basis.dim() != pure_dim(n, k) {
        return Err(Error::invariant(format!(
            "pure({n},{k}) has dimension {} in an ambient space of {dim}, expected {}",
            basis.dim(),
            pure_dim(n, k)
        )));
    }
    cache.lock().unwrap().insert((n, k), basis.clone());
    Ok(basis)
}

/// Basis of `ker Ψ_{k-1}ᵀ`. Exact bases are cached per `(n, k)`.
pub fn pure_basis<S: Scalar>(n: usize, k: usize) -> Result<PureBasis<S>> {
    let exact = exact_pure_basis(n, k)?;
    match S::MODE {
        Mode::Exact => Ok(PureBasis {
            n,
            k,
            columns: exact.columns.iter().map(|c| c.iter().map(S::from_rational).collect()).collect(),
            norms: exact.norms.iter().map(S::from_rational).collect(),
        }),
        Mode::Float => {
            let columns: Vec<Vec<S>> = exact
                .columns
                .iter()
                .zip(&exact.norms)
                .map(|(c, nrm)| {
                    let len = nrm.to_f64().sqrt();
                    c.iter().map(|x| S::from_rational(&Rational::from_float(x.to_f64() / len).unwrap())).collect()
                })
                .collect();
            let norms = vec![S::one(); columns.len()];
            Ok(PureBasis { n, k, columns, norms })
        }
    }
}

/// `g_{k,x} = Σ_I (-1)^{#_x(I)} binom(n+k-2, #_x(I)) δ_I`.
pub fn g_vector<S: Scalar>(n: usize, k: usize, x: usize) -> Result<Vec<S>> {
    if x >= n {
        return Err(Error::arg(format!("vertex {} out of range", x + 1)));
    }
    if n + k < 2 {
        return Err(Error::arg("g-vectors need n + k >= 2"));
    }
    let space = MultisetSpace::new(n, k)?;
    Ok(space
        .states()
        .iter()
        .map(|st| {
            let c = st.iter().filter(|&&v| v == x).count();
            let mag = S::from_i64(binom(n + k - 2, c) as i64);
            if c % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect())
}

/// Smallest eigenvalue of the Laplacian on the pure block of degree `k`.
pub fn omega_k<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<Eigenvalue> {
    if k == 0 {
        return Err(Error::arg("omega_k needs k >= 1"));
    }
    let l = kmp_laplacian(g, k)?;
    let basis = pure_basis::<S>(g.n(), k)?;
    omega_from(&l.matrix, &basis)
}

fn omega_from<S: Scalar>(l: &Matrix<S>, basis: &PureBasis<S>) -> Result<Eigenvalue> {
    let (a, gram) = basis.compress(l);
    min_eig_pencil(&a, &gram)?.ok_or_else(|| Error::invariant("empty pure block"))
}

/// Spectrum of the Laplacian restricted to the pure block of degree `k`.
pub fn pure_spectrum<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<Spectrum> {
    let l = kmp_laplacian(g, k)?;
    let basis = pure_basis::<S>(g.n(), k)?;
    let name = format!("pure:{k}");
    match S::MODE {
        Mode::Float => {
            let (a, _) = basis.compress(&l.matrix);
            spectrum(&name, &a)
        }
        Mode::Exact => {
            let r = basis.restrict(&l.matrix).map(Scalar::to_rational);
            Ok(exact_spectrum_from_charpoly(&name, charpoly(&r)))
        }
    }
}

/// Characteristic polynomial of the pure block of degree `k`.
pub fn pure_charpoly(g: &Hypergraph<Rational>, k: usize) -> Result<Poly<Rational>> {
    let l = kmp_laplacian(g, k)?;
    let basis = pure_basis::<Rational>(g.n(), k)?;
    Ok(charpoly(&basis.restrict(&l.matrix)))
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaStar {
    pub k: usize,
    /// `min_{j <= k} ω_j`.
    #[serde(skip)]
    pub block_route: Eigenvalue,
    /// Second-smallest eigenvalue of the full Laplacian.
    #[serde(skip)]
    pub direct_route: Eigenvalue,
    #[serde(skip)]
    pub omegas: Vec<Eigenvalue>,
}

/// Spectral gap of `L(Γ, KMP_k)` by both routes, cross-checked.
pub fn lambda_min_star_kmp<S: Scalar>(g: &Hypergraph<S>, k: usize) -> Result<LambdaStar> {
    if k == 0 {
        return Err(Error::arg("lambda_min_star needs k >= 1"));
    }
    let mut omegas = Vec::with_capacity(k);
    for j in 1..=k {
        omegas.push(omega_k(g, j)?);
    }
    let block = Eigenvalue::min_of(&omegas).unwrap();
    let l = kmp_laplacian(g, k)?.matrix;
    let direct = direct_gap(&l)?;
    let tol = 1e-8 * l.max_abs().max(1.0);
    if block.compare(&direct, tol) != std::cmp::Ordering::Equal {
        return Err(Error::invariant(format!(
            "spectral gap routes disagree at k = {k}: blocks {} vs direct {}",
            block.text(),
            direct.text()
        )));
    }
    Ok(LambdaStar {
        k,
        block_route: block,
        direct_route: direct,
        omegas,
    })
}

/// Smallest eigenvalue on the complement of the constant vector.
pub fn direct_gap<S: Scalar>(l: &Matrix<S>) -> Result<Eigenvalue> {
    let dim = l.rows();
    if dim < 2 {
        return Err(Error::arg("spectral gap needs at least two states"));
    }
    match S::MODE {
        Mode::Float => Ok(Eigenvalue::Float(symmetric_eigenvalues(&l.to_f64())[1])),
        Mode::Exact => {
            // Basis e_i - e_last, i < last.
            let last = dim - 1;
            let a = Matrix::from_fn(last, last, |i, j| {
                l[(i, j)].clone() - l[(i, last)].clone() - l[(last, j)].clone() + l[(last, last)].clone()
            });
            let gram = Matrix::from_fn(last, last, |i, j| S::from_i64(1 + i64::from(i == j)));
            min_eig_pencil(&a, &gram)?.ok_or_else(|| Error::invariant("empty complement"))
        }
    }
}

/// Verdict on `ω_1 <= ω_3 <= ...` and `ω_2 <= ω_4 <= ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityVerdict {
    pub holds: bool,
    /// Every step is a strict increase.
    pub strict: bool,
    /// First failing pair `(j, j + 2)`, 1-based.
    pub violation: Option<(usize, usize)>,
}

/// Checks the parity ordering on `omegas[j] = ω_{j+1}`; ties follow [`Eigenvalue::compare`].
pub fn parity_ordering(omegas: &[Eigenvalue], tol: f64) -> ParityVerdict {
    let mut strict = true;
    for j in 0..omegas.len().saturating_sub(2) {
        match omegas[j].compare(&omegas[j + 2], tol) {
            std::cmp::Ordering::Greater => {
                return ParityVerdict {
                    holds: false,
                    strict: false,
                    violation: Some((j + 1, j + 3)),
                }
            }
            std::cmp::Ordering::Equal => strict = false,
            std::cmp::Ordering::Less => {}
        }
    }
    ParityVerdict {
        holds: true,
        strict,
        violation: None,
    }
}
