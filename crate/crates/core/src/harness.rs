//! Randomized sweeps over hypergraphs, recording the spectral-gap and parity
//! verdicts per trial. Violations are collected, never raised.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::codim1::{m_k_min, Codim1Instance};
use crate::combinatorics::MultisetSpace;
use crate::eigen::Eigenvalue;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::kmp::{direct_gap, kmp_laplacian, omega_k, parity_ordering, ParityVerdict};
use crate::random::{coin, draw_weight, rng, WeightLaw};
use crate::scalar::{fmt_sig15, Mode, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Every subset with `|B| >= 2` kept independently.
    General,
    /// Weight only on `(n-1)`-subsets.
    Codim1,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Family::General),
            "codim1" => Ok(Family::Codim1),
            _ => Err(Error::arg(format!("unknown family {s:?} (general|codim1)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::General => "general",
            Family::Codim1 => "codim1",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub k_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub edge_probability: f64,
    pub weight_law: WeightLaw,
    pub mode: Mode,
    pub tolerance: f64,
    pub family: Family,
}

impl SweepConfig {
    pub fn new(n: usize, k_max: usize, trials: usize) -> Self {
        SweepConfig {
            n,
            k_max,
            trials,
            seed: 0,
            edge_probability: 0.5,
            weight_law: WeightLaw::Uniform01,
            mode: Mode::Float,
            tolerance: 1e-8,
            family: Family::General,
        }
    }

    /// Argument and dimension checks; runs before any trial.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::arg("trials must be at least 1"));
        }
        if self.k_max == 0 {
            return Err(Error::arg("k_max must be at least 1"));
        }
        if self.n < 2 || (self.family == Family::Codim1 && self.n < 3) {
            return Err(Error::arg(format!("n = {} is too small for the {} family", self.n, self.family)));
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return Err(Error::arg("edge probability must lie in [0, 1]"));
        }
        if !(self.tolerance >= 0.0) || (self.mode == Mode::Float && self.tolerance == 0.0) {
            return Err(Error::arg("tolerance must be positive in float mode and non-negative otherwise"));
        }
        MultisetSpace::new(self.n, self.k_max)?;
        Ok(())
    }

    /// The instance for one trial; the PCG stream is the trial id.
    pub fn instance<S: Scalar>(&self, trial: usize) -> Result<Hypergraph<S>> {
        match self.family {
            Family::General => Hypergraph::random(self.n, self.edge_probability, self.weight_law, self.seed, trial as u64),
            Family::Codim1 => {
                let mut r = rng(self.seed, trial as u64);
                let c: Vec<S> = (0..self.n)
                    .map(|_| {
                        if coin(self.edge_probability, &mut r) {
                            S::from_rational(&draw_weight(self.weight_law, &mut r))
                        } else {
                            S::zero()
                        }
                    })
                    .collect();
                Hypergraph::codim1(&c)
            }
        }
    }
}

/// Spectral quantities and verdicts for one hypergraph.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub connected: bool,
    /// `ω_k`, `k = 1..=k_max`.
    pub omegas: Vec<Eigenvalue>,
    /// Spectral gap of `L(Γ, KMP_k)` for each `k`, cross-checked by both routes.
    pub lambda_star: Vec<Eigenvalue>,
    /// First block attaining `min ω_k`, 1-based.
    pub argmin: usize,
    /// Gap at every `k >= 2` equals the gap at `k = 2`.
    pub gap_conjecture: bool,
    pub parity: ParityVerdict,
    pub phi: Eigenvalue,
    /// `ω_k <= φ` for every `k`.
    pub phi_bound: bool,
    /// Codimension-1 instances: every `ω_k` agrees with `λmin(M_k)`.
    pub m_k_agree: Option<bool>,
}

impl TrialOutcome {
    pub fn violation(&self) -> bool {
        !self.gap_conjecture || !self.parity.holds || !self.phi_bound || self.m_k_agree == Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "connected": self.connected,
            "omegas": self.omegas.iter().map(Eigenvalue::to_json).collect::<Vec<_>>(),
            "lambda_star": self.lambda_star.iter().map(Eigenvalue::to_json).collect::<Vec<_>>(),
            "argmin": self.argmin,
            "gap_conjecture": self.gap_conjecture,
            "parity": self.parity,
            "phi": self.phi.to_json(),
            "phi_bound": self.phi_bound,
            "m_k_agree": self.m_k_agree,
        })
    }
}

fn as_eigenvalue<S: Scalar>(x: &S) -> Eigenvalue {
    match S::MODE {
        Mode::Exact => Eigenvalue::Exact(x.to_rational()),
        Mode::Float => Eigenvalue::Float(x.to_f64()),
    }
}

/// Computes every `ω_k` and spectral gap up to `k_max` and derives the verdicts.
/// Float comparisons tie within `tol`; exact ones tie only on equality or
/// overlapping brackets.
pub fn evaluate<S: Scalar>(g: &Hypergraph<S>, k_max: usize, tol: f64) -> Result<TrialOutcome> {
    if k_max == 0 {
        return Err(Error::arg("k_max must be at least 1"));
    }
    let omegas: Vec<Eigenvalue> = (1..=k_max).map(|k| omega_k(g, k)).collect::<Result<_>>()?;
    let mut lambda_star = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let block = Eigenvalue::min_of(&omegas[..k]).unwrap();
        let l = kmp_laplacian(g, k)?.matrix;
        let direct = direct_gap(&l)?;
        if block.compare(&direct, 1e-8 * l.max_abs().max(1.0)) != Ordering::Equal {
            return Err(Error::invariant(format!(
                "spectral gap routes disagree at k = {k}: blocks {} vs direct {}",
                block.text(),
                direct.text()
            )));
        }
        lambda_star.push(block);
    }
    let min = Eigenvalue::min_of(&omegas).unwrap();
    let argmin = omegas
        .iter()
        .position(|w| w.compare(&min, tol) == Ordering::Equal)
        .unwrap()
        + 1;
    let gap_conjecture = k_max < 3
        || lambda_star[2..]
            .iter()
            .all(|l| l.compare(&lambda_star[1], tol) == Ordering::Equal);
    let parity = parity_ordering(&omegas, tol);
    let phi = as_eigenvalue(&g.phi());
    let phi_bound = omegas.iter().all(|w| w.compare(&phi, tol) != Ordering::Greater);
    let m_k_agree = match Codim1Instance::from_hypergraph(g) {
        Ok(inst) if g.n() >= 3 => {
            let mut ok = true;
            for (k, w) in omegas.iter().enumerate() {
                ok &= m_k_min(&inst, k + 1)?.compare(w, tol) == Ordering::Equal;
            }
            Some(ok)
        }
        _ => None,
    };
    Ok(TrialOutcome {
        connected: g.is_connected(),
        omegas,
        lambda_star,
        argmin,
        gap_conjecture,
        parity,
        phi,
        phi_bound,
        m_k_agree,
    })
}

#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub trial: usize,
    pub digest: String,
    pub outcome: TrialOutcome,
    /// Canonical hypergraph JSON, kept only for violations.
    pub replay: Option<Value>,
}

impl SweepRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "trial": self.trial,
            "digest": self.digest,
            "violation": self.outcome.violation(),
        });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, self.outcome.to_json()) {
            dst.extend(src);
        }
        if let Some(r) = &self.replay {
            v["replay"] = r.clone();
        }
        v
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub connected: usize,
    pub gap_conjecture_violations: usize,
    pub parity_violations: usize,
    pub phi_bound_violations: usize,
    pub m_k_mismatches: usize,
    /// Connected instances where some parity step is a tie.
    pub connected_non_strict: usize,
    /// `argmin_histogram[j]` counts trials minimized at block `j + 1`.
    pub argmin_histogram: Vec<usize>,
}

impl SweepSummary {
    pub fn violations(&self) -> usize {
        self.gap_conjecture_violations + self.parity_violations + self.phi_bound_violations + self.m_k_mismatches
    }
}

/// Runs all trials in parallel; records come back ordered by trial id, so the
/// output does not depend on the number of worker threads.
pub fn sweep(config: &SweepConfig) -> Result<(Vec<SweepRecord>, SweepSummary)> {
    config.validate()?;
    match config.mode {
        Mode::Exact => sweep_in::<Rational>(config),
        Mode::Float => sweep_in::<f64>(config),
    }
}

fn sweep_in<S: Scalar>(config: &SweepConfig) -> Result<(Vec<SweepRecord>, SweepSummary)> {
    let records: Vec<SweepRecord> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let g = config.instance::<S>(trial)?;
            let outcome = evaluate(&g, config.k_max, config.tolerance)?;
            let replay = outcome.violation().then(|| {
                json!({
                    "graph": g.to_json(),
                    "k_max": config.k_max,
                    "mode": config.mode.to_string(),
                    "tolerance": config.tolerance,
                })
            });
            Ok(SweepRecord {
                trial,
                digest: g.digest(),
                outcome,
                replay,
            })
        })
        .collect::<Result<_>>()?;
    let mut s = SweepSummary {
        trials: records.len(),
        argmin_histogram: vec![0; config.k_max],
        ..Default::default()
    };
    for r in &records {
        let o = &r.outcome;
        s.connected += usize::from(o.connected);
        s.gap_conjecture_violations += usize::from(!o.gap_conjecture);
        s.parity_violations += usize::from(!o.parity.holds);
        s.phi_bound_violations += usize::from(!o.phi_bound);
        s.m_k_mismatches += usize::from(o.m_k_agree == Some(false));
        s.connected_non_strict += usize::from(o.connected && o.parity.holds && !o.parity.strict);
        s.argmin_histogram[o.argmin - 1] += 1;
    }
    Ok((records, s))
}

pub fn sweep_json(config: &SweepConfig, records: &[SweepRecord], summary: &SweepSummary) -> Value {
    json!({
        "config": config,
        "summary": summary,
        "violations": summary.violations(),
        "records": records.iter().map(SweepRecord::to_json).collect::<Vec<_>>(),
    })
}

/// One CSV row per record; eigenvalues as decimals with 15 significant digits.
pub fn sweep_csv(k_max: usize, records: &[SweepRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["trial".into(), "digest".into(), "connected".into()];
    header.extend((1..=k_max).map(|k| format!("lambda_star_{k}")));
    header.extend((1..=k_max).map(|k| format!("omega_{k}")));
    header.extend(
        ["argmin", "gap_conjecture", "parity", "parity_strict", "phi", "phi_bound", "violation"]
            .iter()
            .map(|s| s.to_string()),
    );
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(io)?;
    for r in records {
        let o = &r.outcome;
        let mut row = vec![r.trial.to_string(), r.digest.clone(), o.connected.to_string()];
        row.extend(o.lambda_star.iter().map(|v| fmt_sig15(v.to_f64())));
        row.extend(o.omegas.iter().map(|v| fmt_sig15(v.to_f64())));
        row.extend([
            o.argmin.to_string(),
            o.gap_conjecture.to_string(),
            o.parity.holds.to_string(),
            o.parity.strict.to_string(),
            fmt_sig15(o.phi.to_f64()),
            o.phi_bound.to_string(),
            o.violation().to_string(),
        ]);
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_rejected() {
        let c = SweepConfig::new(3, 3, 0);
        assert!(matches!(sweep(&c), Err(Error::Argument(_))));
    }

    #[test]
    fn guard_before_work() {
        let c = SweepConfig::new(12, 12, 1);
        assert!(matches!(sweep(&c), Err(Error::Resource { .. })));
    }

    #[test]
    fn small_sweep_clean_and_deterministic() {
        let mut c = SweepConfig::new(3, 3, 12);
        c.seed = 5;
        let (a, s) = sweep(&c).unwrap();
        assert_eq!(s.violations(), 0);
        assert_eq!(a.len(), 12);
        let (b, _) = sweep(&c).unwrap();
        let ja = sweep_json(&c, &a, &s).to_string();
        let jb = sweep_json(&c, &b, &s).to_string();
        assert_eq!(ja, jb);
        assert!(a.iter().all(|r| r.replay.is_none()));
    }

    #[test]
    fn exact_and_float_agree() {
        let mut c = SweepConfig::new(3, 3, 4);
        c.seed = 11;
        let (f, _) = sweep(&c).unwrap();
        c.mode = Mode::Exact;
        c.tolerance = 0.0;
        let (e, s) = sweep(&c).unwrap();
        assert_eq!(s.violations(), 0);
        for (x, y) in f.iter().zip(&e) {
            for (a, b) in x.outcome.omegas.iter().zip(&y.outcome.omegas) {
                assert!((a.to_f64() - b.to_f64()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn codim1_family_is_strict_when_connected() {
        let mut c = SweepConfig::new(4, 4, 10);
        c.family = Family::Codim1;
        c.edge_probability = 0.8;
        let (recs, s) = sweep(&c).unwrap();
        assert_eq!(s.violations(), 0);
        assert_eq!(s.connected_non_strict, 0);
        assert!(recs.iter().all(|r| r.outcome.m_k_agree == Some(true)));
    }

    #[test]
    fn csv_shape() {
        let c = SweepConfig::new(3, 2, 3);
        let (recs, _) = sweep(&c).unwrap();
        let text = sweep_csv(2, &recs).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("trial,digest,connected,lambda_star_1,lambda_star_2,omega_1"));
    }
}
