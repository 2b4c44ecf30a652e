//! Eigenvalues in both modes.
//!
//! Float mode is backed by `nalgebra`'s symmetric eigensolver. Exact mode never
//! rounds: spectra come from the characteristic polynomial, and extreme
//! eigenvalues are certified by positive-semidefiniteness tests, yielding either
//! an exact rational or a rational bracket of an irrational value.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{charpoly, definiteness, Definiteness};
use crate::matrix::Matrix;
use crate::poly::{simplest_rational_in, Poly};
use crate::scalar::{fmt_sig15, rational_from_f64, Mode, Rational, Scalar};

/// Relative width to which exact brackets of irrational eigenvalues are refined.
pub const BRACKET_REL_WIDTH: f64 = 1e-24;

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Float(f64),
    Exact(Rational),
    /// An irrational value known to lie in `[lo, hi]`.
    Bracket { lo: Rational, hi: Rational },
}

impl Eigenvalue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Eigenvalue::Float(v) => *v,
            Eigenvalue::Exact(q) => q.to_f64(),
            Eigenvalue::Bracket { lo, hi } => ((lo + hi) / Rational::from_integer(2.into())).to_f64(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Eigenvalue::Exact(q) => Some(q),
            _ => None,
        }
    }

    fn interval(&self) -> Option<(Rational, Rational)> {
        match self {
            Eigenvalue::Float(_) => None,
            Eigenvalue::Exact(q) => Some((q.clone(), q.clone())),
            Eigenvalue::Bracket { lo, hi } => Some((lo.clone(), hi.clone())),
        }
    }

    /// Ordering with ties: floats tie within `tol`, exact values tie only when
    /// equal or when their brackets overlap.
    pub fn compare(&self, other: &Eigenvalue, tol: f64) -> Ordering {
        match (self.interval(), other.interval()) {
            (Some((alo, ahi)), Some((blo, bhi))) => {
                if ahi < blo {
                    Ordering::Less
                } else if alo > bhi {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
            _ => {
                let d = self.to_f64() - other.to_f64();
                if d.abs() <= tol {
                    Ordering::Equal
                } else if d < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Eigenvalue>) -> Option<Eigenvalue> {
        let mut best: Option<&Eigenvalue> = None;
        for v in values {
            best = match best {
                None => Some(v),
                Some(b) => {
                    if v.to_f64() < b.to_f64() {
                        Some(v)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.cloned()
    }

    pub fn text(&self) -> String {
        match self {
            Eigenvalue::Float(v) => fmt_sig15(*v),
            Eigenvalue::Exact(q) => q.to_string(),
            Eigenvalue::Bracket { .. } => fmt_sig15(self.to_f64()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Eigenvalue::Bracket { lo, hi } => json!({
                "value": self.text(),
                "bracket": [lo.to_string(), hi.to_string()],
            }),
            _ => json!({ "value": self.text() }),
        }
    }

    /// `c - self`; brackets flip.
    pub fn reflect(&self, c: &Rational) -> Eigenvalue {
        match self {
            Eigenvalue::Float(v) => Eigenvalue::Float(c.to_f64() - v),
            Eigenvalue::Exact(q) => Eigenvalue::Exact(c - q),
            Eigenvalue::Bracket { lo, hi } => Eigenvalue::Bracket { lo: c - hi, hi: c - lo },
        }
    }
}

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

/// Ascending eigenvalues of a symmetric float matrix.
pub fn symmetric_eigenvalues(m: &Matrix<f64>) -> Vec<f64> {
    if m.rows() == 0 {
        return vec![];
    }
    let mut d = to_dmatrix(m);
    let t = d.transpose();
    d = (d + t) * 0.5;
    let eig = d.symmetric_eigen();
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Ascending eigenvalues and matching orthonormal eigenvectors.
pub fn symmetric_eigen(m: &Matrix<f64>) -> Vec<(f64, Vec<f64>)> {
    let mut d = to_dmatrix(m);
    let t = d.transpose();
    d = (d + t) * 0.5;
    let eig = d.symmetric_eigen();
    let mut out: Vec<(f64, Vec<f64>)> = (0..m.rows())
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Ascending eigenvalues of the symmetric pencil `a v = λ g v`, `g` positive definite.
pub fn pencil_eigenvalues(a: &Matrix<f64>, g: &Matrix<f64>) -> Result<Vec<f64>> {
    if a.rows() == 0 {
        return Ok(vec![]);
    }
    let chol = to_dmatrix(g)
        .cholesky()
        .ok_or_else(|| Error::invariant("Gram matrix is not positive definite"))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(&to_dmatrix(a))
        .ok_or_else(|| Error::invariant("singular Cholesky factor"))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::invariant("singular Cholesky factor"))?;
    let c = Matrix::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)]);
    Ok(symmetric_eigenvalues(&c))
}

/// Smallest eigenvalue of the pencil `(a, g)`; `None` on an empty space.
pub fn min_eig_pencil<S: Scalar>(a: &Matrix<S>, g: &Matrix<S>) -> Result<Option<Eigenvalue>> {
    if a.rows() == 0 {
        return Ok(None);
    }
    let est = pencil_eigenvalues(&a.to_f64(), &g.to_f64())?[0];
    match S::MODE {
        Mode::Float => Ok(Some(Eigenvalue::Float(est))),
        Mode::Exact => {
            let a = a.map(Scalar::to_rational);
            let g = g.map(Scalar::to_rational);
            certify_min(&a, &g, est).map(Some)
        }
    }
}

fn shifted(a: &Matrix<Rational>, g: &Matrix<Rational>, q: &Rational) -> Matrix<Rational> {
    let mut m = a.clone();
    m.add_scaled(&-q.clone(), g);
    m
}

/// Certifies the smallest pencil eigenvalue from a float estimate.
/// `a - q g` is PSD iff `q <= λmin`, and singular PSD iff `q = λmin`.
pub fn certify_min(a: &Matrix<Rational>, g: &Matrix<Rational>, est: f64) -> Result<Eigenvalue> {
    certify_min_within(a, g, est, BRACKET_REL_WIDTH)
}

/// [`certify_min`] stopping once an irrational minimum is bracketed to
/// relative width `rel_width`.
pub fn certify_min_within(a: &Matrix<Rational>, g: &Matrix<Rational>, est: f64, rel_width: f64) -> Result<Eigenvalue> {
    let scale = est.abs().max(1.0).max(a.max_abs());
    let test = |q: &Rational| definiteness(&shifted(a, g, q));
    for rel in [1e-12, 1e-10, 1e-8] {
        let d = rel * scale;
        let lo = rational_from_f64(est - d).unwrap();
        let hi = rational_from_f64(est + d).unwrap();
        let q = simplest_rational_in(&lo, &hi);
        if test(&q) == Definiteness::PsdSingular {
            return Ok(Eigenvalue::Exact(q));
        }
    }
    let mut delta = 1e-13 * scale;
    let (mut lo, mut hi);
    loop {
        lo = rational_from_f64(est - delta).unwrap();
        hi = rational_from_f64(est + delta).unwrap();
        let tl = test(&lo);
        let th = test(&hi);
        if tl == Definiteness::PsdSingular {
            return Ok(Eigenvalue::Exact(lo));
        }
        if th == Definiteness::PsdSingular {
            return Ok(Eigenvalue::Exact(hi));
        }
        if tl == Definiteness::PositiveDefinite && th == Definiteness::NotPsd {
            break;
        }
        delta *= 1e3;
        if delta > 1e6 * scale {
            return Err(Error::invariant("could not bracket smallest eigenvalue"));
        }
    }
    let width = rational_from_f64(rel_width * scale).unwrap();
    let four = Rational::from_integer(BigInt::from(4));
    while hi.clone() - lo.clone() > width {
        // Simplest rational in the middle half: the bracket shrinks by at least
        // a quarter per step while denominators stay small.
        let quarter = (hi.clone() - lo.clone()) / four.clone();
        let mid = simplest_rational_in(&(lo.clone() + quarter.clone()), &(hi.clone() - quarter));
        match test(&mid) {
            Definiteness::PsdSingular => return Ok(Eigenvalue::Exact(mid)),
            Definiteness::PositiveDefinite => lo = mid,
            Definiteness::NotPsd => hi = mid,
        }
    }
    Ok(Eigenvalue::Bracket { lo, hi })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub value: Eigenvalue,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub operator: String,
    pub mode: Mode,
    pub dim: usize,
    pub entries: Vec<SpectrumEntry>,
    /// Exact mode: the full characteristic polynomial.
    pub charpoly: Option<Poly<Rational>>,
    /// Exact mode: the factor left after removing rational roots.
    pub residual: Option<Poly<Rational>>,
}

impl Spectrum {
    /// Every eigenvalue repeated by multiplicity, ascending, as floats.
    pub fn values_f64(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.to_f64(), e.multiplicity))
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    pub fn to_json(&self) -> Value {
        let eig: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = e.value.to_json();
                v["multiplicity"] = json!(e.multiplicity);
                v
            })
            .collect();
        let mut out = json!({
            "operator": self.operator,
            "mode": self.mode.to_string(),
            "dim": self.dim,
            "eigenvalues": eig,
        });
        if let Some(r) = &self.residual {
            if r.degree().unwrap_or(0) > 0 {
                out["residual_charpoly"] =
                    json!(r.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
        }
        out
    }
}

/// Groups ascending floats into clusters closer than `tol`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<SpectrumEntry> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start_val = f64::NAN;
    for &v in values {
        match out.last_mut() {
            Some((sum, m)) if (v - start_val).abs() <= tol => {
                *sum += v;
                *m += 1;
            }
            _ => {
                start_val = v;
                out.push((v, 1));
            }
        }
    }
    out.into_iter()
        .map(|(s, m)| SpectrumEntry {
            value: Eigenvalue::Float(s / m as f64),
            multiplicity: m,
        })
        .collect()
}

/// Clustering tolerance for float spectra of `a`.
pub fn cluster_tol(a: &Matrix<f64>) -> f64 {
    1e-8 * a.frobenius().max(1.0)
}

/// Spectrum of a symmetric matrix in the matrix's own mode.
pub fn spectrum<S: Scalar>(operator: &str, a: &Matrix<S>) -> Result<Spectrum> {
    if !a.is_symmetric() {
        return Err(Error::arg(format!("{operator}: matrix is not symmetric")));
    }
    spectrum_blocks(operator, &[a.clone()])
}

/// Spectrum of a block-diagonal operator given by its diagonal blocks.
pub fn spectrum_blocks<S: Scalar>(operator: &str, blocks: &[Matrix<S>]) -> Result<Spectrum> {
    let dim = blocks.iter().map(Matrix::rows).sum();
    match S::MODE {
        Mode::Float => {
            let mut vals = Vec::with_capacity(dim);
            let mut tol: f64 = 0.0;
            for b in blocks {
                let f = b.to_f64();
                tol = tol.max(cluster_tol(&f));
                vals.extend(symmetric_eigenvalues(&f));
            }
            vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
            Ok(Spectrum {
                operator: operator.to_string(),
                mode: Mode::Float,
                dim,
                entries: cluster(&vals, tol.max(1e-8)),
                charpoly: None,
                residual: None,
            })
        }
        Mode::Exact => {
            let mut p = Poly::<Rational>::one();
            for b in blocks {
                let q = b.map(Scalar::to_rational);
                p = p.mul(&charpoly(&q));
            }
            Ok(exact_spectrum_from_charpoly(operator, p))
        }
    }
}

/// Exact spectrum of a real-rooted characteristic polynomial.
pub fn exact_spectrum_from_charpoly(operator: &str, p: Poly<Rational>) -> Spectrum {
    let dim = p.degree().unwrap_or(0);
    let (roots, rest) = p.rational_roots();
    let mut entries: Vec<SpectrumEntry> = roots
        .into_iter()
        .map(|(r, m)| SpectrumEntry {
            value: Eigenvalue::Exact(r),
            multiplicity: m,
        })
        .collect();
    if rest.degree().unwrap_or(0) > 0 {
        entries.extend(irrational_roots(&rest));
    }
    entries.sort_by(|a, b| a.value.to_f64().partial_cmp(&b.value.to_f64()).unwrap());
    Spectrum {
        operator: operator.to_string(),
        mode: Mode::Exact,
        dim,
        entries,
        charpoly: Some(p),
        residual: Some(rest),
    }
}

/// Real roots of `p` as brackets with multiplicities (gcd chain with `p'`).
fn irrational_roots(p: &Poly<Rational>) -> Vec<SpectrumEntry> {
    let bound = p.root_bound().to_f64();
    let width = rational_from_f64(BRACKET_REL_WIDTH * bound.max(1.0)).unwrap();
    let mut chain = vec![p.clone()];
    loop {
        let last = chain.last().unwrap();
        let g = last.gcd(&last.derivative());
        if g.degree().unwrap_or(0) == 0 {
            break;
        }
        chain.push(g);
    }
    p.squarefree()
        .isolate_real_roots(&width)
        .into_iter()
        .map(|(lo, hi)| {
            let m = chain
                .iter()
                .take_while(|q| q.count_roots_in(&lo, &hi) == 1)
                .count();
            SpectrumEntry {
                value: Eigenvalue::Bracket { lo, hi },
                multiplicity: m.max(1),
            }
        })
        .collect()
}

/// True when every value of `inner` (with multiplicity) can be matched greedily
/// to a distinct value of `outer` within `tol`.
pub fn float_contains(outer: &[f64], inner: &[f64], tol: f64) -> bool {
    let mut used = vec![false; outer.len()];
    let mut sorted_inner = inner.to_vec();
    sorted_inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for v in sorted_inner {
        let best = outer
            .iter()
            .enumerate()
            .filter(|(i, o)| !used[*i] && (*o - v).abs() <= tol)
            .min_by(|a, b| (a.1 - v).abs().partial_cmp(&(b.1 - v).abs()).unwrap());
        match best {
            Some((i, _)) => used[i] = true,
            None => return false,
        }
    }
    true
}

/// `λmin` certified against a candidate: returns the ordering of the pencil
/// minimum relative to `q`.
pub fn compare_min_with(a: &Matrix<Rational>, g: &Matrix<Rational>, q: &Rational) -> Ordering {
    match definiteness(&shifted(a, g, q)) {
        Definiteness::NotPsd => Ordering::Less,
        Definiteness::PsdSingular => Ordering::Equal,
        Definiteness::PositiveDefinite => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rint(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn exact_min_rational() {
        let a = mat(&[&[2, -1], &[-1, 2]]);
        let g = Matrix::identity(2);
        assert_eq!(min_eig_pencil(&a, &g).unwrap(), Some(Eigenvalue::Exact(rint(1))));
        let g2 = Matrix::diagonal(&[rint(2), rint(2)]);
        assert_eq!(min_eig_pencil(&a, &g2).unwrap(), Some(Eigenvalue::Exact(rat(1, 2))));
    }

    #[test]
    fn exact_min_irrational_bracket() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        // eigenvalues 1 ± sqrt(2)
        let b = mat(&[&[2, 1], &[1, 0]]);
        let e = min_eig_pencil(&b, &Matrix::identity(2)).unwrap().unwrap();
        match e {
            Eigenvalue::Bracket { ref lo, ref hi } => {
                let x = 1.0 - 2f64.sqrt();
                assert!(lo.to_f64() <= x + 1e-15 && hi.to_f64() >= x - 1e-15);
            }
            _ => panic!("expected bracket, got {e:?}"),
        }
        assert_eq!(
            min_eig_pencil(&a, &Matrix::identity(2)).unwrap(),
            Some(Eigenvalue::Exact(rint(0)))
        );
    }

    #[test]
    fn exact_spectrum_multiplicities() {
        let a = mat(&[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 0]]);
        let s = spectrum("t", &a).unwrap();
        // (1 ± √5)/2 and 2 twice.
        assert_eq!(s.entries.len(), 3);
        assert_eq!(s.entries[2].value, Eigenvalue::Exact(rint(2)));
        assert_eq!(s.entries[2].multiplicity, 2);
        assert!(matches!(s.entries[0].value, Eigenvalue::Bracket { .. }));
        assert!((s.entries[1].value.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn greedy_containment() {
        assert!(float_contains(&[0.0, 1.0, 1.0, 2.0], &[1.0, 1.0], 1e-9));
        assert!(!float_contains(&[0.0, 1.0, 2.0], &[1.0, 1.0], 1e-9));
    }
}
