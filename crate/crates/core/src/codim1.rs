//! Hypergraphs supported on `(n-1)`-subsets. With `c_x` the weight of
//! `[n] \ {x}`, every pure block reduces to the `n x n` matrix
//! `M_k = A_{t_k}`, where `A_t = (Σc) I - D_t` and `D_t = diag(c) (I + t (J - I))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::binom;
use crate::eigen::{cluster, exact_spectrum_from_charpoly, symmetric_eigenvalues, Eigenvalue, Spectrum};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::kmp::{pure_charpoly, pure_dim};
use crate::linalg::charpoly;
use crate::matrix::Matrix;
use crate::operator::{Basis, Operator};
use crate::poly::Poly;
use crate::random::{draw_weight, rng, WeightLaw};
use crate::scalar::{rational_from_f64, Mode, Rational, Scalar};

/// Per-step tolerance of the monotonicity scan.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Points per side of zero in [`scan_grid`].
pub const GRID_POINTS_PER_SIDE: usize = 64;
pub const GRID_MIN_ABS: f64 = 1e-4;
pub const GRID_MAX_ABS: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct Codim1Instance<S> {
    c: Vec<S>,
}

impl<S: Scalar> Codim1Instance<S> {
    pub fn new(c: Vec<S>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::arg("codimension-1 instance needs at least one weight"));
        }
        if c.iter().any(|x| *x < S::zero()) {
            return Err(Error::arg("codimension-1 weights must be non-negative"));
        }
        Ok(Codim1Instance { c })
    }

    /// Reads `c_x = w([n] \ {x})`; fails if any weight sits elsewhere.
    pub fn from_hypergraph(g: &Hypergraph<S>) -> Result<Self> {
        let c = g
            .codim1_coefficients()
            .ok_or_else(|| Error::arg("hypergraph has weight outside the (n-1)-subsets"))?;
        Self::new(c)
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &[S] {
        &self.c
    }

    pub fn total(&self) -> S {
        self.c.iter().fold(S::zero(), |acc, x| acc + x.clone())
    }

    pub fn hypergraph(&self) -> Result<Hypergraph<S>> {
        Hypergraph::codim1(&self.c)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Codim1Instance<T> {
        Codim1Instance {
            c: self.c.iter().map(f).collect(),
        }
    }
}

/// Weights drawn from `law`, sorted non-increasing.
pub fn random_sorted_weights(n: usize, law: WeightLaw, seed: u64, stream: u64) -> Vec<Rational> {
    let mut r = rng(seed, stream);
    let mut c: Vec<Rational> = (0..n).map(|_| draw_weight(law, &mut r)).collect();
    c.sort_by(|a, b| b.cmp(a));
    c
}

/// `t_k = (-1)^k / binom(n+k-2, k)`.
pub fn t_k(n: usize, k: usize) -> Rational {
    let sign = if k % 2 == 0 { 1 } else { -1 };
    Rational::new(BigInt::from(sign), BigInt::from(binom(n + k - 2, k)))
}

fn check_t<S: Scalar>(t: &S) -> Result<()> {
    if *t >= S::one() {
        return Err(Error::arg(format!("t must be < 1, got {t}")));
    }
    Ok(())
}

fn d_t_raw<S: Scalar>(c: &[S], t: &S) -> Matrix<S> {
    let n = c.len();
    Matrix::from_fn(n, n, |i, j| if i == j { c[i].clone() } else { c[i].clone() * t })
}

pub fn d_t_matrix<S: Scalar>(inst: &Codim1Instance<S>, t: &S) -> Result<Operator<S>> {
    check_t(t)?;
    Ok(Operator::new(Basis::Vertices { n: inst.n() }, d_t_raw(&inst.c, t)))
}

pub fn a_t_matrix<S: Scalar>(inst: &Codim1Instance<S>, t: &S) -> Result<Operator<S>> {
    let d = d_t_matrix(inst, t)?.matrix;
    let n = inst.n();
    let m = Matrix::identity(n).scale(&inst.total()).sub(&d);
    Ok(Operator::new(Basis::Vertices { n }, m))
}

fn check_mk(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::arg(format!("M_k needs n >= 3, got n = {n}")));
    }
    if k == 0 {
        return Err(Error::arg("M_k needs k >= 1"));
    }
    Ok(())
}

/// `M_k = A_{t_k}`.
pub fn m_k_matrix<S: Scalar>(inst: &Codim1Instance<S>, k: usize) -> Result<Operator<S>> {
    check_mk(inst.n(), k)?;
    a_t_matrix(inst, &S::from_rational(&t_k(inst.n(), k)))
}

/// Eigenvalues of `D_t`, ascending. `D_t` restricted to the support of `c` is
/// similar to the symmetric `(1-t) C + t √c √cᵀ`; each zero weight adds a zero.
pub fn d_t_eigenvalues_f64(c: &[f64], t: f64) -> Vec<f64> {
    let support: Vec<f64> = c.iter().copied().filter(|&x| x > 0.0).collect();
    let s = support.len();
    let sym = Matrix::from_fn(s, s, |i, j| {
        let off = t * (support[i] * support[j]).sqrt();
        if i == j {
            (1.0 - t) * support[i] + off
        } else {
            off
        }
    });
    let mut v = symmetric_eigenvalues(&sym);
    v.extend(std::iter::repeat_n(0.0, c.len() - s));
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Spectrum of `M_k` in the instance's mode.
pub fn m_k_spectrum<S: Scalar>(inst: &Codim1Instance<S>, k: usize) -> Result<Spectrum> {
    let m = m_k_matrix(inst, k)?;
    let name = format!("codim1-M:{k}");
    match S::MODE {
        Mode::Exact => {
            let q = m.matrix.map(Scalar::to_rational);
            Ok(exact_spectrum_from_charpoly(&name, charpoly(&q)))
        }
        Mode::Float => {
            let c: Vec<f64> = inst.c.iter().map(Scalar::to_f64).collect();
            let total = inst.total().to_f64();
            let mut vals: Vec<f64> = d_t_eigenvalues_f64(&c, t_k(inst.n(), k).to_f64())
                .into_iter()
                .map(|d| total - d)
                .collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let tol = 1e-8 * total.max(1.0);
            Ok(Spectrum {
                operator: name,
                mode: Mode::Float,
                dim: vals.len(),
                entries: cluster(&vals, tol),
                charpoly: None,
                residual: None,
            })
        }
    }
}

/// `λmin(M_k) = Σc - h(t_k)`.
pub fn m_k_min<S: Scalar>(inst: &Codim1Instance<S>, k: usize) -> Result<Eigenvalue> {
    check_mk(inst.n(), k)?;
    let t = S::from_rational(&t_k(inst.n(), k));
    let h = largest_root(inst, &t)?;
    Ok(match h {
        Eigenvalue::Float(v) => Eigenvalue::Float(inst.total().to_f64() - v),
        other => other.reflect(&inst.total().to_rational()),
    })
}

/// `h(t)`, the largest eigenvalue of `D_t`.
pub fn largest_root<S: Scalar>(inst: &Codim1Instance<S>, t: &S) -> Result<Eigenvalue> {
    check_t(t)?;
    match S::MODE {
        Mode::Float => {
            let c: Vec<f64> = inst.c.iter().map(Scalar::to_f64).collect();
            Ok(Eigenvalue::Float(*d_t_eigenvalues_f64(&c, t.to_f64()).last().unwrap()))
        }
        Mode::Exact => {
            let c: Vec<Rational> = inst.c.iter().map(Scalar::to_rational).collect();
            let p = p_at_t(&c, &t.to_rational());
            let s = exact_spectrum_from_charpoly("D_t", p);
            s.entries
                .last()
                .map(|e| e.value.clone())
                .ok_or_else(|| Error::invariant("P(., t) has no real root"))
        }
    }
}

/// `(t, h(t))` for every grid point, evaluated in parallel.
pub fn largest_root_curve<S: Scalar>(inst: &Codim1Instance<S>, grid: &[S]) -> Result<Vec<(S, Eigenvalue)>> {
    grid.par_iter()
        .map(|t| Ok((t.clone(), largest_root(inst, t)?)))
        .collect()
}

/// 64 log-spaced `|t|` in `[1e-4, 0.9]` on each side of zero, ascending.
pub fn scan_grid() -> Vec<f64> {
    let (lo, hi) = (GRID_MIN_ABS.ln(), GRID_MAX_ABS.ln());
    let m = GRID_POINTS_PER_SIDE;
    let mags: Vec<f64> = (0..m)
        .map(|i| (lo + (hi - lo) * i as f64 / (m - 1) as f64).exp())
        .collect();
    let mut g: Vec<f64> = mags.iter().rev().map(|x| -x).collect();
    g.extend(mags);
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityScan {
    pub points: Vec<(f64, f64)>,
    /// Smallest `h(farther) - h(nearer)` over consecutive grid steps.
    pub worst_margin: f64,
    pub monotone: bool,
}

/// Checks that `h` does not increase as `t` approaches zero along [`scan_grid`].
pub fn monotonicity_scan<S: Scalar>(inst: &Codim1Instance<S>, tol: f64) -> Result<MonotonicityScan> {
    let grid: Vec<S> = scan_grid()
        .into_iter()
        .map(|t| S::from_rational(&rational_from_f64(t).unwrap()))
        .collect();
    let curve = largest_root_curve(inst, &grid)?;
    let points: Vec<(f64, f64)> = curve.iter().map(|(t, h)| (t.to_f64(), h.to_f64())).collect();
    let mut worst = f64::INFINITY;
    for w in points.windows(2) {
        let ((t0, h0), (t1, h1)) = (w[0], w[1]);
        if t0 < 0.0 && t1 < 0.0 {
            worst = worst.min(h0 - h1);
        } else if t0 > 0.0 && t1 > 0.0 {
            worst = worst.min(h1 - h0);
        }
    }
    Ok(MonotonicityScan {
        points,
        worst_margin: worst,
        monotone: worst >= -tol,
    })
}

/// A polynomial in `x` and `t`; `rows[i]` is the coefficient of `x^i` as a polynomial in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    rows: Vec<Poly<Rational>>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<Poly<Rational>>) -> Self {
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn rows(&self) -> &[Poly<Rational>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficient of `x^i t^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.rows
            .get(i)
            .and_then(|r| r.coeffs().get(j).cloned())
            .unwrap_or_else(Rational::zero)
    }

    /// Polynomial in `x` at fixed `t`.
    pub fn eval_t(&self, t: &Rational) -> Poly<Rational> {
        Poly::new(self.rows.iter().map(|r| r.eval(t)).collect())
    }

    /// Polynomial in `t` at fixed `x`.
    pub fn eval_x(&self, x: &Rational) -> Poly<Rational> {
        let mut acc = Poly::zero();
        for r in self.rows.iter().rev() {
            acc = acc.scale(x).add(r);
        }
        acc
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(other.rows.len());
        let z = Poly::zero();
        BiPoly::new(
            (0..n)
                .map(|i| self.rows.get(i).unwrap_or(&z).add(other.rows.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale_poly(&Poly::constant(-Rational::one())))
    }

    /// Multiplies every row by a polynomial in `t`.
    pub fn scale_poly(&self, p: &Poly<Rational>) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| r.mul(p)).collect())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::new(vec![]);
        }
        let mut out = vec![Poly::zero(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly::new(out)
    }

    pub fn d_dt(&self) -> BiPoly {
        BiPoly::new(self.rows.iter().map(Poly::derivative).collect())
    }

    pub fn d_dx(&self) -> BiPoly {
        BiPoly::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    pub fn mul_x(&self) -> BiPoly {
        let mut rows = vec![Poly::zero()];
        rows.extend(self.rows.iter().cloned());
        BiPoly::new(rows)
    }

    pub fn mul_t(&self) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| r.shift(1)).collect())
    }
}

/// `Q(x, t) = ∏ (x - (1-t) c_i)`.
pub fn char_poly_q(c: &[Rational]) -> BiPoly {
    let mut acc = BiPoly::new(vec![Poly::one()]);
    for ci in c {
        // x - c_i + c_i t
        let f = BiPoly::new(vec![Poly::new(vec![-ci.clone(), ci.clone()]), Poly::one()]);
        acc = acc.mul(&f);
    }
    acc
}

/// `P(x, t) = det(x I - D_t)`, interpolated in `t` from exact characteristic
/// polynomials at `t = 0..=n`.
pub fn char_poly_p(c: &[Rational]) -> BiPoly {
    let n = c.len();
    let nodes: Vec<Rational> = (0..=n).map(|j| Rational::from_integer(BigInt::from(j))).collect();
    let samples: Vec<Poly<Rational>> = nodes.iter().map(|t| charpoly(&d_t_raw(c, t))).collect();
    let rows = (0..=n)
        .map(|i| {
            let ys: Vec<Rational> = samples
                .iter()
                .map(|p| p.coeffs().get(i).cloned().unwrap_or_else(Rational::zero))
                .collect();
            Poly::interpolate(&nodes, &ys)
        })
        .collect();
    BiPoly::new(rows)
}

/// `P(., t)` directly from the matrix.
pub fn p_at_t(c: &[Rational], t: &Rational) -> Poly<Rational> {
    charpoly(&d_t_raw(c, t))
}

pub fn q_at_t(c: &[Rational], t: &Rational) -> Poly<Rational> {
    let one = Rational::one();
    Poly::from_roots(&c.iter().map(|ci| (one.clone() - t) * ci).collect::<Vec<_>>())
}

/// `P(x, .)` as a polynomial in `t`.
pub fn p_at_x(c: &[Rational], x: &Rational) -> Poly<Rational> {
    char_poly_p(c).eval_x(x)
}

pub fn q_at_x(c: &[Rational], x: &Rational) -> Poly<Rational> {
    char_poly_q(c).eval_x(x)
}

/// `P = Q - t ∂Q/∂t`, coefficientwise.
pub fn identity_dt_holds(c: &[Rational]) -> bool {
    let q = char_poly_q(c);
    char_poly_p(c) == q.sub(&q.d_dt().mul_t())
}

/// `P(., t) = (1 + nt/(1-t)) Q(., t) - (t/(1-t)) x ∂Q/∂x (., t)` at a fixed `t < 1`.
pub fn identity_dx_holds(c: &[Rational], t: &Rational) -> Result<bool> {
    check_t(t)?;
    let n = Rational::from_integer(BigInt::from(c.len()));
    let one = Rational::one();
    let q = char_poly_q(c);
    let qt = q.eval_t(t);
    let xqx = q.d_dx().mul_x().eval_t(t);
    let a = one.clone() + n * t / (one.clone() - t);
    let b = t / (one - t);
    Ok(p_at_t(c, t) == qt.scale(&a).sub(&xqx.scale(&b)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Interlacing {
    pub real_rooted: bool,
    pub interlaces: bool,
    /// `true` when the roots of `P` are the larger ones.
    pub p_larger: bool,
}

/// Exact interlacing of the roots of `P(., t0)` and `Q(., t0)`: for `t0 ∈ (0, 1)`
/// the roots of `P` are larger, for `t0 < 0` smaller.
pub fn interlacing_exact(c: &[Rational], t0: &Rational) -> Result<Interlacing> {
    check_t(t0)?;
    let n = c.len();
    let p = p_at_t(c, t0);
    let sf = p.squarefree();
    let p_spectrum = exact_spectrum_from_charpoly("P", p);
    let p_larger = t0.is_positive();
    let mut alpha: Vec<Eigenvalue> = p_spectrum
        .entries
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.value.clone(), e.multiplicity))
        .collect();
    let real_rooted = alpha.len() == n;
    if !real_rooted {
        return Ok(Interlacing { real_rooted, interlaces: false, p_larger });
    }
    let one = Rational::one();
    let mut beta: Vec<Rational> = c.iter().map(|ci| (one.clone() - t0) * ci).collect();
    beta.sort();
    alpha.sort_by(|a, b| a.to_f64().partial_cmp(&b.to_f64()).unwrap());
    let le = |a: &Eigenvalue, b: &Rational| cmp_root(a, b, &sf) != Ordering::Greater;
    let ge = |a: &Eigenvalue, b: &Rational| cmp_root(a, b, &sf) != Ordering::Less;
    // Ascending: larger P roots means beta_i <= alpha_i <= beta_{i+1}.
    let interlaces = (0..n).all(|i| {
        if p_larger {
            ge(&alpha[i], &beta[i]) && (i + 1 == n || le(&alpha[i], &beta[i + 1]))
        } else {
            le(&alpha[i], &beta[i]) && (i == 0 || ge(&alpha[i], &beta[i - 1]))
        }
    });
    Ok(Interlacing { real_rooted, interlaces, p_larger })
}

/// Exact comparison of a root of `sf` with a rational.
fn cmp_root(a: &Eigenvalue, b: &Rational, sf: &Poly<Rational>) -> Ordering {
    match a {
        Eigenvalue::Exact(q) => q.cmp(b),
        Eigenvalue::Bracket { lo, hi } => {
            if hi < b {
                Ordering::Less
            } else if lo >= b {
                Ordering::Greater
            } else if sf.eval(b).is_zero() {
                // The bracket holds exactly one root, and it is `b`.
                Ordering::Equal
            } else if sf.count_roots_in(lo, b) == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        Eigenvalue::Float(v) => v.partial_cmp(&b.to_f64()).unwrap(),
    }
}

/// Float interlacing of the eigenvalues of `D_t0` against `(1 - t0) c`.
pub fn interlacing_f64(c: &[f64], t0: f64, tol: f64) -> bool {
    let n = c.len();
    let alpha = d_t_eigenvalues_f64(c, t0);
    let mut beta: Vec<f64> = c.iter().map(|x| (1.0 - t0) * x).collect();
    beta.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0..n).all(|i| {
        if t0 > 0.0 {
            alpha[i] >= beta[i] - tol && (i + 1 == n || alpha[i] <= beta[i + 1] + tol)
        } else {
            alpha[i] <= beta[i] + tol && (i == 0 || alpha[i] >= beta[i - 1] - tol)
        }
    })
}

/// `((n+1)(n-2)/n, n(n-2)/(n-1))`: `λmin(M_2)` and `λmin(M_1)` for unit weights.
pub fn codim1_gap_closed_forms(n: usize) -> Result<(Rational, Rational)> {
    if n < 2 {
        return Err(Error::arg("closed forms need n >= 2"));
    }
    let n = n as i64;
    Ok((
        Rational::new(BigInt::from((n + 1) * (n - 2)), BigInt::from(n)),
        Rational::new(BigInt::from(n * (n - 2)), BigInt::from(n - 1)),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockIdentification {
    pub k: usize,
    pub pure_dim: usize,
    pub matches: bool,
    /// Copies of `Σc` on the larger side.
    pub extra_copies: usize,
}

/// Compares the pure block of degree `k` with `M_k`: the larger of the two
/// characteristic polynomials equals the smaller times a power of `(x - Σc)`.
pub fn block_identification(inst: &Codim1Instance<Rational>, k: usize) -> Result<BlockIdentification> {
    check_mk(inst.n(), k)?;
    let g = inst.hypergraph()?;
    let pure = pure_charpoly(&g, k)?;
    let m = charpoly(&m_k_matrix(inst, k)?.matrix);
    let d = pure_dim(inst.n(), k);
    let n = inst.n();
    let artifact = Poly::linear_root(&inst.total());
    let (big, small, extra) = if d >= n { (&pure, &m, d - n) } else { (&m, &pure, n - d) };
    Ok(BlockIdentification {
        k,
        pure_dim: d,
        matches: *big == small.mul(&artifact.pow(extra)),
        extra_copies: extra,
    })
}

/// Float counterpart of [`block_identification`] on sorted eigenvalues.
pub fn block_identification_f64(inst: &Codim1Instance<f64>, k: usize, tol: f64) -> Result<bool> {
    check_mk(inst.n(), k)?;
    let g = inst.hypergraph()?;
    let pure = crate::kmp::pure_spectrum(&g, k)?.values_f64();
    let mut m = m_k_spectrum(inst, k)?.values_f64();
    let total = inst.total();
    let mut p = pure;
    if p.len() >= m.len() {
        m.extend(std::iter::repeat_n(total, p.len() - m.len()));
    } else {
        p.extend(std::iter::repeat_n(total, m.len() - p.len()));
    }
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    m.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(p.iter().zip(&m).all(|(a, b)| (a - b).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmp::omega_k;
    use crate::scalar::{rat, rint};
    use proptest::prelude::*;

    fn path() -> Codim1Instance<Rational> {
        Codim1Instance::new(vec![rint(1), rint(0), rint(1)]).unwrap()
    }

    fn exact_values(s: &Spectrum) -> Vec<Rational> {
        s.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.as_exact().unwrap().clone(), e.multiplicity))
            .collect()
    }

    #[test]
    fn t_k_values() {
        assert_eq!(t_k(3, 1), rat(-1, 2));
        assert_eq!(t_k(3, 2), rat(1, 3));
        assert_eq!(t_k(4, 3), rat(-1, 10));
    }

    #[test]
    fn path_m_k_spectra() {
        let s2 = m_k_spectrum(&path(), 2).unwrap();
        assert_eq!(exact_values(&s2), vec![rat(2, 3), rat(4, 3), rint(2)]);
        let s1 = m_k_spectrum(&path(), 1).unwrap();
        assert_eq!(exact_values(&s1), vec![rat(1, 2), rat(3, 2), rint(2)]);
        let f = m_k_spectrum(&path().map(|x| x.to_f64()), 2).unwrap().values_f64();
        for (a, b) in f.iter().zip([2.0 / 3.0, 4.0 / 3.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn small_n_rejected() {
        let inst = Codim1Instance::new(vec![rint(1), rint(1)]).unwrap();
        assert!(matches!(m_k_matrix(&inst, 1), Err(Error::Argument(_))));
    }

    #[test]
    fn d_t_example() {
        let d = d_t_matrix(&path(), &rat(1, 3)).unwrap().matrix;
        let want = Matrix::from_rows(vec![
            vec![rint(1), rat(1, 3), rat(1, 3)],
            vec![rint(0), rint(0), rint(0)],
            vec![rat(1, 3), rat(1, 3), rint(1)],
        ])
        .unwrap();
        assert_eq!(d, want);
        let a = a_t_matrix(&path(), &rat(1, 3)).unwrap().matrix;
        assert_eq!(a.add(&d), Matrix::identity(3).scale(&rint(2)));
        assert!(d_t_matrix(&path(), &rint(1)).is_err());
    }

    #[test]
    fn uniform_two_eigenvalues() {
        for n in 3..=6 {
            let inst = Codim1Instance::new(vec![rint(1); n]).unwrap();
            for k in 1..=4 {
                let t = t_k(n, k);
                let nn = rint(n as i64 - 1);
                let mut want = vec![nn.clone() * (rint(1) - t.clone()), nn + t];
                want.sort();
                let s = m_k_spectrum(&inst, k).unwrap();
                let got: Vec<Rational> = s.entries.iter().map(|e| e.value.as_exact().unwrap().clone()).collect();
                let mut dedup = want.clone();
                dedup.dedup();
                assert_eq!(got, dedup, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(codim1_gap_closed_forms(3).unwrap(), (rat(4, 3), rat(3, 2)));
        assert_eq!(codim1_gap_closed_forms(4).unwrap(), (rat(5, 2), rat(8, 3)));
        assert_eq!(codim1_gap_closed_forms(2).unwrap(), (rint(0), rint(0)));
        for n in 3..=6 {
            let inst = Codim1Instance::new(vec![rint(1); n]).unwrap();
            let (m2, m1) = codim1_gap_closed_forms(n).unwrap();
            assert_eq!(m_k_min(&inst, 2).unwrap(), Eigenvalue::Exact(m2));
            assert_eq!(m_k_min(&inst, 1).unwrap(), Eigenvalue::Exact(m1));
        }
    }

    #[test]
    fn interpolated_p_matches_direct() {
        let c = vec![rat(3, 2), rint(1), rat(1, 3), rint(0)];
        let p = char_poly_p(&c);
        for t in [rat(-2, 3), rat(1, 5), rint(7)] {
            assert_eq!(p.eval_t(&t), p_at_t(&c, &t));
        }
        assert_eq!(char_poly_q(&c).eval_t(&rint(0)), Poly::from_roots(&c));
        assert_eq!(q_at_t(&c, &rat(1, 2)), char_poly_q(&c).eval_t(&rat(1, 2)));
        let x = rat(5, 2);
        assert_eq!(p_at_x(&c, &x).eval(&rat(1, 4)), p_at_t(&c, &rat(1, 4)).eval(&x));
        assert_eq!(q_at_x(&c, &x).eval(&rat(1, 4)), q_at_t(&c, &rat(1, 4)).eval(&x));
    }

    #[test]
    fn leading_t_coefficient() {
        // Degree n in t with leading coefficient (1 - n) ∏ c_i at every x.
        let c = vec![rint(3), rint(2), rint(1)];
        let p = p_at_x(&c, &rint(5));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.leading().unwrap(), &rint(-2 * 6));
    }

    #[test]
    fn h_at_zero_is_max_weight() {
        let inst = Codim1Instance::new(vec![rat(1, 2), rint(3), rint(1)]).unwrap();
        assert_eq!(largest_root(&inst, &rint(0)).unwrap(), Eigenvalue::Exact(rint(3)));
        let f = inst.map(|x| x.to_f64());
        assert!((largest_root(&f, &0.0).unwrap().to_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn grid_shape() {
        let g = scan_grid();
        assert_eq!(g.len(), 128);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!((g[0] + 0.9).abs() < 1e-15 && (g[127] - 0.9).abs() < 1e-15);
        assert!((g[63] + 1e-4).abs() < 1e-15 && (g[64] - 1e-4).abs() < 1e-15);
    }

    #[test]
    fn exact_and_float_curves_agree() {
        let inst = Codim1Instance::new(vec![rint(2), rat(3, 2), rat(1, 2), rint(0)]).unwrap();
        let f = inst.map(|x| x.to_f64());
        for t in [rat(-7, 10), rat(-1, 100), rat(1, 100), rat(4, 5)] {
            let e = largest_root(&inst, &t).unwrap().to_f64();
            let v = largest_root(&f, &t.to_f64()).unwrap().to_f64();
            assert!((e - v).abs() < 1e-10, "t={t}: {e} vs {v}");
        }
    }

    #[test]
    fn path_block_identification() {
        for k in 1..=3 {
            let r = block_identification(&path(), k).unwrap();
            assert!(r.matches, "k={k}");
        }
    }

    #[test]
    fn parity_on_path() {
        let g = path().hypergraph().unwrap();
        let om: Vec<Eigenvalue> = (1..=4).map(|k| omega_k(&g, k).unwrap()).collect();
        let mk: Vec<Eigenvalue> = (1..=4).map(|k| m_k_min(&path(), k).unwrap()).collect();
        assert_eq!(om, mk);
    }

    fn weights() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(0i64..=10, 3..=5)
            .prop_map(|v| v.into_iter().map(|x| rat(x, 7)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn identities_hold(c in weights(), tn in -9i64..9) {
            prop_assert!(identity_dt_holds(&c));
            prop_assert!(identity_dx_holds(&c, &rat(tn, 10)).unwrap());
        }

        #[test]
        fn interlacing_holds(c in weights(), tn in 1i64..10, neg in any::<bool>()) {
            let t = if neg { rat(-tn, 3) } else { rat(tn, 10) };
            let r = interlacing_exact(&c, &t).unwrap();
            prop_assert!(r.real_rooted && r.interlaces);
            let cf: Vec<f64> = c.iter().map(|x| x.to_f64()).collect();
            prop_assert!(interlacing_f64(&cf, t.to_f64(), 1e-9));
        }

        #[test]
        fn a_plus_d_is_scalar(c in weights(), tn in -9i64..9) {
            let inst = Codim1Instance::new(c).unwrap();
            let t = rat(tn, 10);
            let s = a_t_matrix(&inst, &t).unwrap().matrix.add(&d_t_matrix(&inst, &t).unwrap().matrix);
            prop_assert_eq!(s, Matrix::identity(inst.n()).scale(&inst.total()));
        }
    }
}
