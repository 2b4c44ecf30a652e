//! Univariate polynomials with dense ascending coefficients.
//!
//! Invariant: the coefficient vector carries no trailing zeros, so the zero
//! polynomial is the empty vector and `degree` is `len - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &S) -> Self {
        Poly::new(vec![-r.clone(), S::one()])
    }

    pub fn from_roots(roots: &[S]) -> Self {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| acc.mul(&Poly::linear_root(r)))
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![S::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly<S>) -> Poly<S> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s).collect())
    }

    pub fn mul(&self, other: &Poly<S>) -> Poly<S> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a.clone() * b);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Poly<S> {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly<S> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![S::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly::new(c)
    }

    pub fn derivative(&self) -> Poly<S> {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &S::from_i64(i as i64))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly<S>) -> (Poly<S>, Poly<S>) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &(c.clone() * dc);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly<S> {
        match self.leading() {
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly<S>) -> Poly<S> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// The unique polynomial of degree `< xs.len()` through the points, by
    /// Newton divided differences. Nodes must be distinct.
    pub fn interpolate(xs: &[S], ys: &[S]) -> Poly<S> {
        assert_eq!(xs.len(), ys.len());
        let mut dd = ys.to_vec();
        for level in 1..xs.len() {
            for i in (level..xs.len()).rev() {
                dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
            }
        }
        let mut p = Poly::zero();
        for i in (0..xs.len()).rev() {
            p = p.mul(&Poly::linear_root(&xs[i])).add(&Poly::constant(dd[i].clone()));
        }
        p
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.to_text())?,
                1 => write!(f, "({})x", c.to_text())?,
                _ => write!(f, "({})x^{}", c.to_text(), i)?,
            }
        }
        Ok(())
    }
}

impl Poly<Rational> {
    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Poly<Rational>) -> bool {
        divisor.is_zero() && self.is_zero() || !divisor.is_zero() && self.div_rem(divisor).1.is_zero()
    }

    /// Multiplicity of `r` as a root, with the cofactor after removing `(x - r)^m`.
    pub fn deflate_root(&self, r: &Rational) -> (usize, Poly<Rational>) {
        let lin = Poly::linear_root(r);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.degree() > Some(0) {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        (m, p)
    }

    /// Square-free part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Poly<Rational> {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::one();
        };
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = (c / lead).abs();
            if v > m {
                m = v;
            }
        }
        m + Rational::one()
    }

    pub fn sturm_sequence(&self) -> Vec<Poly<Rational>> {
        let p = self.squarefree();
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.sturm_sequence();
        sign_changes(&seq, a).saturating_sub(sign_changes(&seq, b))
    }

    /// Disjoint brackets `(lo, hi]`, ascending, each holding one distinct real root,
    /// refined until `hi - lo <= width`.
    pub fn isolate_real_roots(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = self.sturm_sequence();
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let count = sign_changes(&seq, &lo).saturating_sub(sign_changes(&seq, &hi));
            if count == 0 {
                continue;
            }
            if count == 1 && &(hi.clone() - lo.clone()) <= width {
                out.push((lo, hi));
                continue;
            }
            let mid = (lo.clone() + hi.clone()) / Rational::from_integer(BigInt::from(2));
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Exact rational roots with multiplicities, ascending, plus the cofactor
    /// that has no rational roots.
    pub fn rational_roots(&self) -> (Vec<(Rational, usize)>, Poly<Rational>) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if self.is_zero() {
            return (roots, rest);
        }
        // Zero roots first; the remaining candidates have nonzero constant terms.
        let (m0, r0) = rest.deflate_root(&Rational::zero());
        if m0 > 0 {
            roots.push((Rational::zero(), m0));
            rest = r0;
        }
        let sf = rest.squarefree();
        let lead = primitive_leading(&sf);
        let w = Rational::new(BigInt::one(), lead.clone() * lead * BigInt::from(4));
        for (lo, hi) in sf.isolate_real_roots(&w) {
            let cand = simplest_rational_in(&lo, &hi);
            if sf.eval(&cand).is_zero() {
                let (m, r) = rest.deflate_root(&cand);
                if m > 0 {
                    roots.push((cand, m));
                    rest = r;
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, rest)
    }
}

fn sign_changes(seq: &[Poly<Rational>], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Leading coefficient of the primitive integer multiple of `p`.
fn primitive_leading(p: &Poly<Rational>) -> BigInt {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return BigInt::one();
    }
    (ints.last().unwrap() / g).abs()
}

/// The rational with smallest denominator in the closed interval `[a, b]`.
pub fn simplest_rational_in(a: &Rational, b: &Rational) -> Rational {
    let (a, b) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if a <= Rational::zero() && b >= Rational::zero() {
        return Rational::zero();
    }
    if b < Rational::zero() {
        return -simplest_rational_in(&-b, &-a);
    }
    let fl = a.floor();
    if fl == a {
        return a;
    }
    let next = fl.clone() + Rational::one();
    if next <= b {
        return next;
    }
    let inner = simplest_rational_in(
        &(Rational::one() / (b - fl.clone())),
        &(Rational::one() / (a - fl.clone())),
    );
    fl + Rational::one() / inner
}
