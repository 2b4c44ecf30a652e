//! Elimination-based linear algebra over either scalar mode.
//!
//! Pivots are chosen by largest magnitude, which is harmless for rationals and
//! keeps float elimination stable on the small integer matrices used here.

use crate::matrix::{dot, Matrix};
use crate::poly::Poly;
use crate::scalar::{Mode, Scalar};

/// Reduced row echelon form and the pivot columns.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let scale = m.max_abs();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, best_mag) = (r..rows)
            .map(|i| (i, a[(i, c)].to_f64().abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if a[(best, c)].is_negligible(scale) || best_mag < 0.0 {
            continue;
        }
        swap_rows(&mut a, r, best);
        let inv = S::one() / a[(r, c)].clone();
        for j in 0..cols {
            a[(r, j)] = a[(r, j)].clone() * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let d = f.clone() * &a[(r, j)];
                a[(i, j)] -= &d;
            }
            a[(i, c)] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn swap_rows<S: Scalar>(a: &mut Matrix<S>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols() {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    rref(m).1.len()
}

/// Basis of `{v : m v = 0}`, one vector per free column.
pub fn null_space<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        out.push(v);
    }
    out
}

/// Gram–Schmidt. Rational mode returns an orthogonal (unnormalized) family;
/// float mode returns an orthonormal one. Dependent vectors are dropped.
pub fn gram_schmidt<S: Scalar>(vectors: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    for v in vectors {
        let scale = v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
        let mut w = v.clone();
        // Two passes keep float orthogonality at working precision.
        let passes = if S::MODE == Mode::Float { 2 } else { 1 };
        for _ in 0..passes {
            for (u, nu) in out.iter().zip(&norms) {
                let c = dot(&w, u) / nu.clone();
                if c.is_zero() {
                    continue;
                }
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= &(c.clone() * ui);
                }
            }
        }
        let nw = dot(&w, &w);
        if nw.to_f64().sqrt() <= 1e-10 * scale.max(1.0) && S::MODE == Mode::Float
            || nw.is_zero()
        {
            continue;
        }
        if S::MODE == Mode::Float {
            let len = S::from_rational(&nw.to_f64().sqrt().to_rational());
            for x in w.iter_mut() {
                *x = x.clone() / len.clone();
            }
            norms.push(S::one());
        } else {
            norms.push(nw);
        }
        out.push(w);
    }
    out
}

pub fn determinant<S: Scalar>(m: &Matrix<S>) -> S {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = S::one();
    for c in 0..n {
        let best = (c..n)
            .max_by(|&i, &j| {
                a[(i, c)]
                    .to_f64()
                    .abs()
                    .partial_cmp(&a[(j, c)].to_f64().abs())
                    .unwrap()
            })
            .unwrap();
        if a[(best, c)].is_zero() {
            return S::zero();
        }
        if best != c {
            swap_rows(&mut a, best, c);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det = det * &piv;
        for i in (c + 1)..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone() / piv.clone();
            for j in c..n {
                let d = f.clone() * &a[(c, j)];
                a[(i, j)] -= &d;
            }
        }
    }
    det
}

/// Characteristic polynomial `det(xI - m)` by reduction to upper Hessenberg form.
pub fn charpoly<S: Scalar>(m: &Matrix<S>) -> Poly<S> {
    assert!(m.is_square(), "charpoly of non-square matrix");
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let r = col + 1;
        let best = (r..n)
            .max_by(|&i, &j| {
                h[(i, col)]
                    .to_f64()
                    .abs()
                    .partial_cmp(&h[(j, col)].to_f64().abs())
                    .unwrap()
            })
            .unwrap();
        if h[(best, col)].is_zero() {
            continue;
        }
        if best != r {
            swap_rows(&mut h, best, r);
            for i in 0..n {
                let t = h[(i, best)].clone();
                h[(i, best)] = h[(i, r)].clone();
                h[(i, r)] = t;
            }
        }
        let piv = h[(r, col)].clone();
        for j in (r + 1)..n {
            if h[(j, col)].is_zero() {
                continue;
            }
            let u = h[(j, col)].clone() / piv.clone();
            for c in 0..n {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let d = u.clone() * &h[(r, c)];
                h[(j, c)] -= &d;
            }
            for i in 0..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let d = u.clone() * &h[(i, j)];
                h[(i, r)] += &d;
            }
        }
    }
    let x = Poly::new(vec![S::zero(), S::one()]);
    let mut p: Vec<Poly<S>> = vec![Poly::one()];
    for k in 0..n {
        let mut next = x.sub(&Poly::constant(h[(k, k)].clone())).mul(&p[k]);
        let mut t = S::one();
        for i in (0..k).rev() {
            t = t * &h[(i + 1, i)];
            if t.is_zero() {
                break;
            }
            let c = h[(i, k)].clone() * &t;
            if !c.is_zero() {
                next = next.sub(&p[i].scale(&c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    NotPsd,
    PsdSingular,
    PositiveDefinite,
}

/// Classifies a symmetric matrix by symmetric elimination with diagonal pivots.
/// In float mode values within `FLOAT_EPS * scale` count as zero.
pub fn definiteness<S: Scalar>(m: &Matrix<S>) -> Definiteness {
    assert!(m.is_square());
    let scale = m.max_abs();
    let mut a = m.clone();
    let n = a.rows();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut singular = false;
    while !alive.is_empty() {
        let mut zero_diag = Vec::new();
        let mut pivot = None;
        let mut best = 0.0;
        for &i in &alive {
            let d = &a[(i, i)];
            if d.is_negligible(scale) {
                zero_diag.push(i);
            } else if *d < S::zero() {
                return Definiteness::NotPsd;
            } else if d.to_f64() > best {
                best = d.to_f64();
                pivot = Some(i);
            }
        }
        for &i in &zero_diag {
            if alive.iter().any(|&j| j != i && !a[(i, j)].is_negligible(scale)) {
                return Definiteness::NotPsd;
            }
        }
        if !zero_diag.is_empty() {
            singular = true;
            alive.retain(|i| !zero_diag.contains(i));
            continue;
        }
        let p = pivot.expect("positive pivot exists");
        alive.retain(|&i| i != p);
        let inv = S::one() / a[(p, p)].clone();
        for &i in &alive {
            if a[(i, p)].is_zero() {
                continue;
            }
            let f = a[(i, p)].clone() * &inv;
            for &j in &alive {
                if a[(p, j)].is_zero() {
                    continue;
                }
                let d = f.clone() * &a[(p, j)];
                a[(i, j)] -= &d;
            }
        }
    }
    if singular {
        Definiteness::PsdSingular
    } else {
        Definiteness::PositiveDefinite
    }
}

/// Block-diagonal splitting: verifies every entry outside the blocks is zero
/// (exactly, or negligibly in float mode) and returns the blocks.
pub fn split_blocks<S: Scalar>(m: &Matrix<S>, blocks: &[Vec<usize>]) -> Option<Vec<Matrix<S>>> {
    let n = m.rows();
    let mut owner = vec![usize::MAX; n];
    for (b, idx) in blocks.iter().enumerate() {
        for &i in idx {
            owner[i] = b;
        }
    }
    if owner.contains(&usize::MAX) {
        return None;
    }
    let scale = m.max_abs();
    for i in 0..n {
        for (j, v) in m.row(i).iter().enumerate() {
            if owner[i] != owner[j] && !v.is_negligible(scale) {
                return None;
            }
        }
    }
    Some(blocks.iter().map(|b| m.submatrix(b, b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint, Rational};

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rint(v)).collect()).collect())
            .unwrap()
    }

    /// Independent charpoly oracle: Faddeev–LeVerrier.
    fn faddeev(m: &Matrix<Rational>) -> Poly<Rational> {
        let n = m.rows();
        let mut c = vec![rint(0); n + 1];
        c[n] = rint(1);
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = m.matmul(&mk);
            for i in 0..n {
                next[(i, i)] += &c[n - k + 1];
            }
            mk = next;
            let amk = m.matmul(&mk);
            c[n - k] = -amk.trace() / rint(k as i64);
        }
        Poly::new(c)
    }

    #[test]
    fn charpoly_matches_faddeev() {
        let a = mat(&[&[2, -1, 0, 3], &[1, 0, 4, 1], &[0, 5, -2, 1], &[7, 1, 1, 1]]);
        assert_eq!(charpoly(&a), faddeev(&a));
        let z = mat(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(charpoly(&z), faddeev(&z));
    }

    #[test]
    fn determinant_and_rank() {
        let a = mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(determinant(&a), rint(-2));
        let s = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&s), 2);
        let ns = null_space(&s);
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).iter().all(|x| *x == rint(0)));
    }

    #[test]
    fn definiteness_classes() {
        let pd = mat(&[&[2, -1], &[-1, 2]]);
        assert_eq!(definiteness(&pd), Definiteness::PositiveDefinite);
        let ps = mat(&[&[1, -1], &[-1, 1]]);
        assert_eq!(definiteness(&ps), Definiteness::PsdSingular);
        let nd = mat(&[&[1, 2], &[2, 1]]);
        assert_eq!(definiteness(&nd), Definiteness::NotPsd);
        let zero_row = mat(&[&[0, 1], &[1, 3]]);
        assert_eq!(definiteness(&zero_row), Definiteness::NotPsd);
    }

    #[test]
    fn gram_schmidt_orthogonal() {
        let v = vec![
            vec![rint(1), rint(1), rint(0)],
            vec![rint(1), rint(0), rint(1)],
            vec![rint(2), rint(1), rint(1)],
        ];
        let o = gram_schmidt(&v);
        assert_eq!(o.len(), 2);
        assert_eq!(dot(&o[0], &o[1]), rint(0));
        assert_eq!(o[1], vec![rat(1, 2), rat(-1, 2), rint(1)]);
    }
}
