//! Named verification suites and representation specs, each producing a
//! machine-readable JSON report with an overall `pass` flag.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::codim1::{
    block_identification, block_identification_f64, identity_dt_holds, identity_dx_holds, interlacing_exact, interlacing_f64,
    m_k_min, m_k_spectrum, t_k, Codim1Instance,
};
use crate::combinatorics::{factorial, multichoose};
use crate::eigen::{spectrum_blocks, symmetric_eigenvalues, Eigenvalue, Spectrum};
use crate::error::{Error, Result};
use crate::harness::evaluate;
use crate::hypergraph::{parse_json, Hypergraph, VertexSet};
use crate::kmp::{kmp_laplacian, n_b_operator, parity_ordering, pure_spectrum};
use crate::linalg::charpoly;
use crate::meanfield::{mean_field_report, v0_check, DEFAULT_K_MAX};
use crate::poly::Poly;
use crate::scalar::{parse_rational, rat, rint, Mode, Rational, Scalar};
use crate::symgroup::{laplacian_zk, spectra_contains_exact, spectra_contains_float};
use crate::weingarten::{laplacian_rkm_blocks, laplacian_torinv_skk, projection_torinv_skk, wg_table};

/// Default float tolerance for spectral comparisons in reports.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default float tolerance for containment matching.
pub const CONTAINMENT_TOL: f64 = 1e-7;
/// Largest multiset space on which `verify codim1` also checks the pure blocks.
pub const BLOCK_CHECK_MAX_DIM: u64 = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    MeanField,
    Codim1,
    KmpEquiv,
    SnContainment,
    Weingarten,
    PathExample,
    /// Replays the sweep verdicts on a stored hypergraph.
    Conjectures,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mean-field" => Suite::MeanField,
            "codim1" => Suite::Codim1,
            "kmp-equiv" => Suite::KmpEquiv,
            "sn-containment" => Suite::SnContainment,
            "weingarten" => Suite::Weingarten,
            "path-example" => Suite::PathExample,
            "conjectures" => Suite::Conjectures,
            _ => {
                return Err(Error::arg(format!(
                    "unknown suite {s:?} (mean-field|codim1|kmp-equiv|sn-containment|weingarten|path-example|conjectures)"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::MeanField => "mean-field",
            Suite::Codim1 => "codim1",
            Suite::KmpEquiv => "kmp-equiv",
            Suite::SnContainment => "sn-containment",
            Suite::Weingarten => "weingarten",
            Suite::PathExample => "path-example",
            Suite::Conjectures => "conjectures",
        })
    }
}

/// Suite inputs; which fields are required depends on the suite.
#[derive(Clone, Debug)]
pub struct VerifyArgs {
    pub mode: Mode,
    pub tol: f64,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub k_max: Option<usize>,
    /// Hypergraph JSON text.
    pub graph: Option<String>,
    pub weights: Option<Vec<Rational>>,
    pub coeffs: Option<Vec<Rational>>,
}

impl VerifyArgs {
    pub fn new(mode: Mode) -> Self {
        VerifyArgs {
            mode,
            tol: DEFAULT_TOL,
            n: None,
            k: None,
            d: None,
            k_max: None,
            graph: None,
            weights: None,
            coeffs: None,
        }
    }

    fn need<T: Clone>(v: &Option<T>, name: &str, suite: Suite) -> Result<T> {
        v.clone()
            .ok_or_else(|| Error::arg(format!("suite {suite} needs --{name}")))
    }
}

/// Parses a comma-separated list of rationals (`p/q`, integers, decimals).
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            parse_rational(t).ok_or_else(|| Error::arg(format!("not a rational number: {t:?}")))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    pub pass: bool,
    pub body: Value,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "suite": self.suite.to_string(), "pass": self.pass });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, &self.body) {
            for (k, x) in src {
                dst.entry(k.clone()).or_insert_with(|| x.clone());
            }
        }
        v
    }
}

pub fn verify(suite: Suite, args: &VerifyArgs) -> Result<VerifyReport> {
    match args.mode {
        Mode::Exact => verify_in::<Rational>(suite, args),
        Mode::Float => verify_in::<f64>(suite, args),
    }
}

fn to_s<S: Scalar>(v: &[Rational]) -> Vec<S> {
    v.iter().map(S::from_rational).collect()
}

fn verify_in<S: Scalar>(suite: Suite, args: &VerifyArgs) -> Result<VerifyReport> {
    let (pass, body) = match suite {
        Suite::PathExample => path_example::<S>(args.tol)?,
        Suite::MeanField => {
            let n = VerifyArgs::need(&args.n, "n", suite)?;
            let c = VerifyArgs::need(&args.coeffs, "coeffs", suite)?;
            let r = mean_field_report(n, &to_s::<S>(&c), args.k_max.unwrap_or(DEFAULT_K_MAX), args.tol)?;
            let v0: Vec<Value> = (0..=n)
                .map(|l| v0_check(n, l).map(|c| json!({ "ell": l, "eigenvalue": c.expected.to_string(), "eigenvector": c.eigenvector, "pure": c.pure })))
                .collect::<Result<_>>()?;
            let v0_ok = (0..=n).all(|l| v0_check(n, l).is_ok_and(|c| c.eigenvector && c.pure));
            let mut body = r.to_json();
            body["v0"] = json!(v0);
            (r.passed() && v0_ok, body)
        }
        Suite::Codim1 => {
            let w = VerifyArgs::need(&args.weights, "weights", suite)?;
            if let Some(n) = args.n {
                if n != w.len() {
                    return Err(Error::arg(format!("--n {n} but {} weights given", w.len())));
                }
            }
            codim1_suite::<S>(&w, args.k_max.unwrap_or(DEFAULT_K_MAX), args.tol)?
        }
        Suite::KmpEquiv => {
            let k = VerifyArgs::need(&args.k, "k", suite)?;
            let g = match &args.graph {
                Some(text) => Some(parse_json::<S>(text)?),
                None => None,
            };
            let n = match (&g, args.n) {
                (Some(g), Some(n)) if g.n() != n => {
                    return Err(Error::arg(format!("--n {n} disagrees with the graph's n = {}", g.n())))
                }
                (Some(g), _) => g.n(),
                (None, Some(n)) => n,
                (None, None) => return Err(Error::arg("suite kmp-equiv needs --n or --graph")),
            };
            kmp_equiv::<S>(n, k, g.as_ref(), args.tol)?
        }
        Suite::SnContainment => {
            let k = VerifyArgs::need(&args.k, "k", suite)?;
            let g = parse_json::<S>(&VerifyArgs::need(&args.graph, "graph", suite)?)?;
            let tol = if args.tol == DEFAULT_TOL { CONTAINMENT_TOL } else { args.tol };
            sn_containment(&g, k, tol)?
        }
        Suite::Weingarten => weingarten_suite(args.k, args.d)?,
        Suite::Conjectures => {
            let g = parse_json::<S>(&VerifyArgs::need(&args.graph, "graph", suite)?)?;
            let k_max = args.k_max.or(args.k).unwrap_or(DEFAULT_K_MAX);
            let tol = if S::MODE == Mode::Exact { 0.0 } else { args.tol };
            let o = evaluate(&g, k_max, tol)?;
            let mut body = o.to_json();
            body["digest"] = json!(g.digest());
            body["violation"] = json!(o.violation());
            // Replays report the verdicts; a violation is data, not a failure.
            (true, body)
        }
    };
    Ok(VerifyReport { suite, pass, body })
}

/// Spectrum entries as exact rationals with multiplicity, when all are rational.
fn exact_values(s: &Spectrum) -> Option<Vec<Rational>> {
    let mut out = Vec::new();
    for e in &s.entries {
        let q = e.value.as_exact()?;
        out.extend(std::iter::repeat_n(q.clone(), e.multiplicity));
    }
    Some(out)
}

fn spectrum_matches(s: &Spectrum, want: &[Rational], tol: f64) -> bool {
    match s.mode {
        Mode::Exact => exact_values(s).is_some_and(|v| v == want),
        Mode::Float => {
            let v = s.values_f64();
            v.len() == want.len() && v.iter().zip(want).all(|(a, b)| (a - b.to_f64()).abs() <= tol)
        }
    }
}

pub fn path_graph<S: Scalar>() -> Hypergraph<S> {
    Hypergraph::from_edges(3, &[(vec![0, 1], S::one()), (vec![1, 2], S::one())]).expect("valid path")
}

fn path_example<S: Scalar>(tol: f64) -> Result<(bool, Value)> {
    let g = path_graph::<S>();
    let k1 = kmp_laplacian(&g, 1)?.spectrum("kmp:1")?;
    let p2 = pure_spectrum(&g, 2)?;
    let ok1 = spectrum_matches(&k1, &[rint(0), rat(1, 2), rat(3, 2)], tol);
    let ok2 = spectrum_matches(&p2, &[rat(2, 3), rat(4, 3), rint(2)], tol);
    Ok((
        ok1 && ok2,
        json!({
            "graph": g.to_json(),
            "kmp1": k1.to_json(),
            "kmp1_expected": ["0", "1/2", "3/2"],
            "kmp1_pass": ok1,
            "pure2": p2.to_json(),
            "pure2_expected": ["2/3", "4/3", "2"],
            "pure2_pass": ok2,
        }),
    ))
}

fn codim1_suite<S: Scalar>(w: &[Rational], k_max: usize, tol: f64) -> Result<(bool, Value)> {
    let inst = Codim1Instance::new(to_s::<S>(w))?;
    let exact_inst = Codim1Instance::new(w.to_vec())?;
    let n = inst.n();
    let g = inst.hypergraph()?;
    let cmp_tol = if S::MODE == Mode::Exact { 0.0 } else { tol };
    let spectra: Vec<Value> = (1..=k_max)
        .map(|k| m_k_spectrum(&inst, k).map(|s| s.to_json()))
        .collect::<Result<_>>()?;
    let mins: Vec<Eigenvalue> = (1..=k_max).map(|k| m_k_min(&inst, k)).collect::<Result<_>>()?;
    let parity = parity_ordering(&mins, cmp_tol);
    let connected = g.is_connected();
    let parity_ok = parity.holds && (!connected || parity.strict);
    let low = Eigenvalue::min_of(&mins[..2.min(k_max)]).unwrap();
    let min_at_low = mins.iter().all(|m| m.compare(&low, cmp_tol) != Ordering::Less);

    let mut blocks = Vec::new();
    let mut blocks_ok = true;
    for k in 1..=k_max.min(3) {
        if multichoose(n, k) > BLOCK_CHECK_MAX_DIM {
            break;
        }
        let ok = match S::MODE {
            Mode::Exact => block_identification(&exact_inst, k)?.matches,
            Mode::Float => block_identification_f64(&inst.map(Scalar::to_f64), k, 1e-7)?,
        };
        blocks_ok &= ok;
        blocks.push(json!({ "k": k, "matches": ok }));
    }

    let identity_dt = identity_dt_holds(w);
    let mut identity_dx = true;
    let mut interlacing = Vec::new();
    let mut interlace_ok = true;
    let wf: Vec<f64> = w.iter().map(Scalar::to_f64).collect();
    for t in [t_k(n, 1), t_k(n, 2), rat(-2, 1), rat(1, 2)] {
        identity_dx &= identity_dx_holds(w, &t)?;
        let e = interlacing_exact(w, &t)?;
        let f = interlacing_f64(&wf, t.to_f64(), 1e-9);
        interlace_ok &= e.real_rooted && e.interlaces && f;
        interlacing.push(json!({ "t": t.to_string(), "exact": e.interlaces, "float": f }));
    }
    let pass = parity_ok && min_at_low && blocks_ok && identity_dt && identity_dx && interlace_ok;
    Ok((
        pass,
        json!({
            "n": n,
            "mode": S::MODE.to_string(),
            "weights": w.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "m_k_spectra": spectra,
            "m_k_min": mins.iter().map(Eigenvalue::to_json).collect::<Vec<_>>(),
            "connected": connected,
            "parity": parity,
            "parity_pass": parity_ok,
            "min_at_k_le_2": min_at_low,
            "block_identification": blocks,
            "identity_dt": identity_dt,
            "identity_dx": identity_dx,
            "interlacing": interlacing,
        }),
    ))
}

fn kmp_equiv<S: Scalar>(n: usize, k: usize, g: Option<&Hypergraph<S>>, tol: f64) -> Result<(bool, Value)> {
    let subsets: Vec<VertexSet> = match g {
        Some(g) => g.active_edges().map(|(b, _)| b).collect(),
        None => VertexSet::all(n).collect(),
    };
    let mut per_b = Vec::new();
    let mut all_ok = true;
    for b in subsets {
        let w = projection_torinv_skk(b, n, k)?.matrix;
        let nb = n_b_operator::<Rational>(n, k, b)?.matrix;
        let (ok, residual) = match S::MODE {
            Mode::Exact => (w == nb, if w == nb { 0.0 } else { w.max_abs_diff(&nb) }),
            Mode::Float => {
                let r = w.to_f64().max_abs_diff(&nb.to_f64());
                (r <= tol, r)
            }
        };
        all_ok &= ok;
        per_b.push(json!({ "B": b.to_string(), "equal": ok, "residual": residual }));
    }
    let mut body = json!({ "n": n, "k": k, "mode": S::MODE.to_string(), "subsets": per_b });
    if let Some(g) = g {
        let a = laplacian_torinv_skk(g, k)?.matrix;
        let b = kmp_laplacian(g, k)?.matrix;
        let r = a.max_abs_diff(&b);
        let ok = match S::MODE {
            Mode::Exact => a == b,
            Mode::Float => r <= tol,
        };
        all_ok &= ok;
        body["laplacian_equal"] = json!(ok);
        body["laplacian_residual"] = json!(r);
    }
    Ok((all_ok, body))
}

/// Spectrum of `L(Γ, Z_k)` inside that of `L(Γ, R_{k,k})`: char-poly
/// divisibility in exact mode, greedy matching in float mode.
pub fn sn_containment<S: Scalar>(g: &Hypergraph<S>, k: usize, tol: f64) -> Result<(bool, Value)> {
    let z = laplacian_zk(g, k)?.matrix;
    let blocks = laplacian_rkm_blocks(g, k, k)?;
    let r_dim: usize = blocks.iter().map(|(i, _)| i.len()).sum();
    match S::MODE {
        Mode::Exact => {
            let zc = charpoly(&z.map(Scalar::to_rational));
            let rc = blocks
                .iter()
                .fold(Poly::one(), |acc, (_, m)| acc.mul(&charpoly(&m.map(Scalar::to_rational))));
            let c = spectra_contains_exact(&rc, &zc);
            Ok((
                c.contained,
                json!({
                    "k": k,
                    "mode": "exact",
                    "z_dim": z.rows(),
                    "r_dim": r_dim,
                    "contained": c.contained,
                    "cofactor_degree": c.cofactor.as_ref().and_then(Poly::degree),
                }),
            ))
        }
        Mode::Float => {
            let zv = symmetric_eigenvalues(&z.to_f64());
            let mut rv = Vec::with_capacity(r_dim);
            for (_, m) in &blocks {
                rv.extend(symmetric_eigenvalues(&m.to_f64()));
            }
            let ok = spectra_contains_float(&rv, &zv, tol);
            Ok((
                ok,
                json!({ "k": k, "mode": "float", "z_dim": z.rows(), "r_dim": r_dim, "contained": ok, "tol": tol }),
            ))
        }
    }
}

/// `1 / (d (d+1) ... (d+k-1))`.
fn rising_reciprocal(k: usize, d: usize) -> Rational {
    let p: i64 = (0..k).map(|i| (d + i) as i64).product();
    rat(1, p)
}

/// `1 / (d (d-1) ... (d-k+1))`, or zero when `d < k`.
fn falling_reciprocal(k: usize, d: usize) -> Rational {
    if d < k {
        return Rational::zero();
    }
    let p: i64 = (0..k).map(|i| (d - i) as i64).product();
    rat(1, p)
}

fn weingarten_suite(k: Option<usize>, d: Option<usize>) -> Result<(bool, Value)> {
    let ks: Vec<usize> = k.map_or((1..=5).collect(), |k| vec![k]);
    let ds: Vec<usize> = d.map_or((1..=8).collect(), |d| vec![d]);
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &k in &ks {
        for &d in &ds {
            let t = wg_table(k, d)?;
            let sum_ok = t.sum() == rising_reciprocal(k, d);
            let signed_ok = t.signed_sum() == falling_reciprocal(k, d);
            let mut row = json!({ "k": k, "d": d, "sum": t.sum().to_string(), "sum_ok": sum_ok,
                                  "signed_sum": t.signed_sum().to_string(), "signed_sum_ok": signed_ok });
            let mut ok = sum_ok && signed_ok;
            if k == 2 && d >= 2 {
                let d = d as i64;
                let id_ok = t.value(&[1, 1]) == &rat(1, d * d - 1);
                let tr_ok = t.value(&[2]) == &rat(-1, d * d * d - d);
                row["closed_forms_ok"] = json!(id_ok && tr_ok);
                ok &= id_ok && tr_ok;
            }
            if k == 1 {
                let v_ok = t.value(&[1]) == &rat(1, d as i64);
                row["closed_forms_ok"] = json!(v_ok);
                ok &= v_ok;
            }
            all_ok &= ok;
            rows.push(row);
        }
    }
    Ok((all_ok, json!({ "checks": rows, "permutations_summed": ks.iter().map(|&k| factorial(k)).collect::<Vec<_>>() })))
}

/// A representation to take the spectrum of, as written on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepSpec {
    Kmp(usize),
    Pure(usize),
    Codim1M(usize),
    SymZ(usize),
    UnitaryR(usize, usize),
    TorInvS(usize),
}

impl FromStr for RepSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg(format!("malformed representation {s:?} (kmp:k|pure:k|codim1-M:k|sym-z:k|unitary-R:k,m|torinv-S:k)"));
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        Ok(match name {
            "kmp" => RepSpec::Kmp(num(arg)?),
            "pure" => RepSpec::Pure(num(arg)?),
            "codim1-M" => RepSpec::Codim1M(num(arg)?),
            "sym-z" => RepSpec::SymZ(num(arg)?),
            "torinv-S" => RepSpec::TorInvS(num(arg)?),
            "unitary-R" => {
                let (k, m) = arg.split_once(',').ok_or_else(bad)?;
                RepSpec::UnitaryR(num(k)?, num(m)?)
            }
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSpec::Kmp(k) => write!(f, "kmp:{k}"),
            RepSpec::Pure(k) => write!(f, "pure:{k}"),
            RepSpec::Codim1M(k) => write!(f, "codim1-M:{k}"),
            RepSpec::SymZ(k) => write!(f, "sym-z:{k}"),
            RepSpec::UnitaryR(k, m) => write!(f, "unitary-R:{k},{m}"),
            RepSpec::TorInvS(k) => write!(f, "torinv-S:{k}"),
        }
    }
}

/// Builds the operator named by `rep` on `g` and returns its spectrum.
pub fn spectrum_cmd<S: Scalar>(g: &Hypergraph<S>, rep: RepSpec) -> Result<Spectrum> {
    let name = rep.to_string();
    match rep {
        RepSpec::Kmp(k) => kmp_laplacian(g, k)?.spectrum(&name),
        RepSpec::Pure(k) => {
            if k == 0 {
                return Err(Error::arg("pure blocks start at k = 1"));
            }
            pure_spectrum(g, k)
        }
        RepSpec::Codim1M(k) => m_k_spectrum(&Codim1Instance::from_hypergraph(g)?, k),
        RepSpec::SymZ(k) => laplacian_zk(g, k)?.spectrum(&name),
        RepSpec::UnitaryR(k, m) => {
            let blocks: Vec<_> = laplacian_rkm_blocks(g, k, m)?.into_iter().map(|(_, b)| b).collect();
            spectrum_blocks(&name, &blocks)
        }
        RepSpec::TorInvS(k) => laplacian_torinv_skk(g, k)?.spectrum(&name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rep_spec_roundtrip() {
        for s in ["kmp:1", "pure:2", "codim1-M:3", "sym-z:2", "unitary-R:2,1", "torinv-S:2"] {
            assert_eq!(s.parse::<RepSpec>().unwrap().to_string(), s);
        }
        for s in ["kmp", "kmp:x", "unitary-R:2", "foo:1"] {
            assert!(s.parse::<RepSpec>().is_err());
        }
    }

    #[test]
    fn path_example_both_modes() {
        for mode in [Mode::Exact, Mode::Float] {
            let r = verify(Suite::PathExample, &VerifyArgs::new(mode)).unwrap();
            assert!(r.pass, "{}", r.to_json());
        }
    }

    #[test]
    fn unitary_r11_contains_path_spectrum() {
        let g = path_graph::<Rational>();
        let s = spectrum_cmd(&g, RepSpec::UnitaryR(1, 1)).unwrap();
        let cp = s.charpoly.unwrap();
        let kmp = Poly::from_roots(&[rint(0), rat(1, 2), rat(3, 2)]);
        assert!(cp.divisible_by(&kmp));
    }

    #[test]
    fn weingarten_suite_passes() {
        let (ok, _) = weingarten_suite(None, None).unwrap();
        assert!(ok);
    }

    #[test]
    fn codim1_suite_on_path() {
        let mut a = VerifyArgs::new(Mode::Exact);
        a.weights = Some(vec![rint(1), rint(0), rint(1)]);
        let r = verify(Suite::Codim1, &a).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn kmp_equiv_on_path() {
        let mut a = VerifyArgs::new(Mode::Exact);
        a.k = Some(2);
        a.graph = Some(path_graph::<Rational>().to_json().to_string());
        let r = verify(Suite::KmpEquiv, &a).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn containment_on_path() {
        let g = path_graph::<Rational>();
        for k in 1..=2 {
            assert!(sn_containment(&g, k, 0.0).unwrap().0);
        }
        let gf = path_graph::<f64>();
        assert!(sn_containment(&gf, 2, CONTAINMENT_TOL).unwrap().0);
    }

    #[test]
    fn missing_argument_is_usage_error() {
        let r = verify(Suite::MeanField, &VerifyArgs::new(Mode::Exact));
        assert!(matches!(r, Err(Error::Argument(_))));
        assert!("nope".parse::<Suite>().is_err());
    }
}
