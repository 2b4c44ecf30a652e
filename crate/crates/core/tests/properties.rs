use kmp_spectra::codim1::{m_k_min, random_sorted_weights, Codim1Instance};
use kmp_spectra::combinatorics::{partitions_of, unitary_irrep_dim};
use kmp_spectra::eigen::symmetric_eigenvalues;
use kmp_spectra::harness::{evaluate, sweep, SweepConfig};
use kmp_spectra::hypergraph::{parse_json, Hypergraph, VertexSet};
use kmp_spectra::kmp::kmp_laplacian;
use kmp_spectra::linalg::charpoly;
use kmp_spectra::meanfield::{mean_field_formula, mean_field_report};
use kmp_spectra::random::WeightLaw;
use kmp_spectra::scalar::{rat, rint};
use kmp_spectra::symgroup::sn_mean_field_eigenvalue;
use kmp_spectra::verify::{sn_containment, CONTAINMENT_TOL};
use kmp_spectra::weingarten::{monomial_integral, projection_rkm};
use kmp_spectra::{Rational, Scalar};
use proptest::prelude::*;

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn small_coeffs(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(0i64..=6, n + 1).prop_map(|v| v.into_iter().map(|x| rat(x, 3)).collect())
}

#[test]
fn unitary_dimension_positive_iff_short() {
    for k in 0..=6 {
        for nu in partitions_of(k).unwrap() {
            for d in 1..=6 {
                assert_eq!(unitary_irrep_dim(&nu, d) > 0, nu.len() <= d, "{nu:?} d={d}");
            }
        }
    }
}

#[test]
fn projections_commute_along_inclusions() {
    for (n, k) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)] {
        let all: Vec<VertexSet> = VertexSet::all(n).filter(|b| b.len() >= 1).collect();
        let ps: Vec<_> = all.iter().map(|&b| projection_rkm(b, n, k, k).unwrap().matrix).collect();
        for (a, pa) in all.iter().zip(&ps) {
            for (b, pb) in all.iter().zip(&ps) {
                if a.0 & !b.0 == 0 {
                    assert_eq!(&pa.matmul(pb), pb, "n={n} k={k} {a} ⊆ {b}");
                    assert_eq!(&pb.matmul(pa), pb, "n={n} k={k} {a} ⊆ {b}");
                }
            }
        }
    }
}

#[test]
fn projections_commute_along_inclusions_r22_n4() {
    let n = 4;
    let chain = [VertexSet::from_vertices(&[0]), VertexSet::from_vertices(&[0, 2]), VertexSet::from_vertices(&[0, 1, 2, 3])];
    let ps: Vec<_> = chain.iter().map(|&b| projection_rkm(b, n, 2, 2).unwrap().matrix).collect();
    for i in 0..ps.len() {
        for j in i..ps.len() {
            assert_eq!(ps[i].matmul(&ps[j]), ps[j]);
            assert_eq!(ps[j].matmul(&ps[i]), ps[j]);
        }
    }
}

#[test]
fn containment_up_to_n_minus_one() {
    for trial in 0..4 {
        for n in 3..=4 {
            let g = Hypergraph::<Rational>::random(n, 0.6, WeightLaw::Uniform01, 11, trial).unwrap();
            for k in 1..n {
                let ok = if k <= 2 {
                    sn_containment(&g, k, 0.0).unwrap().0
                } else {
                    sn_containment(&g.map(Scalar::to_f64), k, CONTAINMENT_TOL).unwrap().0
                };
                assert!(ok, "n={n} k={k} graph {}", g.to_json());
            }
        }
    }
}

#[test]
fn violations_replay() {
    // Every record, violating or not, replays to the same verdicts.
    let mut cfg = SweepConfig::new(3, 3, 30);
    cfg.seed = 5;
    let (records, _) = sweep(&cfg).unwrap();
    for r in &records {
        let g: Hypergraph<f64> = cfg.instance(r.trial).unwrap();
        let again = evaluate(&g, cfg.k_max, cfg.tolerance).unwrap();
        assert_eq!(again.to_json(), r.outcome.to_json());
        if let Some(replay) = &r.replay {
            let h: Hypergraph<f64> = parse_json(&replay["graph"].to_string()).unwrap();
            assert_eq!(evaluate(&h, cfg.k_max, cfg.tolerance).unwrap().violation(), r.outcome.violation());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codim1_phi_per_vertex(c in proptest::collection::vec(0i64..=9, 3..=6)) {
        let c: Vec<Rational> = c.into_iter().map(rint).collect();
        let g = Hypergraph::codim1(&c).unwrap();
        let total: Rational = c.iter().cloned().sum();
        let loads = g.vertex_loads();
        for x in 0..c.len() {
            prop_assert_eq!(&loads[x], &(total.clone() - c[x].clone()));
        }
    }

    #[test]
    fn mean_field_relabel_invariant(n in 3usize..=5, c in proptest::collection::vec(0i64..=5, 6), shift in 0usize..5) {
        let c: Vec<Rational> = c[..=n].iter().map(|&x| rint(x)).collect();
        let g = Hypergraph::mean_field(n, &c).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        prop_assert_eq!(g.relabel(&perm), g.clone());
        let connected = c.iter().skip(2).any(|x| *x > rint(0));
        prop_assert_eq!(g.is_connected(), connected);
    }

    #[test]
    fn kmp_spectra_nest(seed in 0u64..500, n in 2usize..=3) {
        let g = Hypergraph::<Rational>::random(n, 0.6, WeightLaw::Uniform01, seed, 0).unwrap();
        let polys: Vec<_> = (1..=3).map(|k| charpoly(&kmp_laplacian(&g, k).unwrap().matrix)).collect();
        for l in 0..polys.len() {
            for k in l..polys.len() {
                prop_assert!(polys[k].divisible_by(&polys[l]), "KMP_{} not inside KMP_{}", l + 1, k + 1);
            }
        }
    }

    #[test]
    fn kmp2_kernel_detects_disconnection(seed in 0u64..2000, n in 2usize..=5) {
        let g = Hypergraph::<f64>::random(n, 0.3, WeightLaw::Uniform01, seed, 1).unwrap();
        let ev = symmetric_eigenvalues(&kmp_laplacian(&g, 2).unwrap().matrix);
        let zeros = ev.iter().filter(|x| x.abs() < 1e-9).count();
        prop_assert_eq!(zeros >= 2, !g.is_connected());
    }

    #[test]
    fn sn_value_dominates_unitary_value(n in 3usize..=6, seed in any::<u64>()) {
        let c: Vec<Rational> = (0..=n).map(|l| rat(((seed >> (4 * l)) & 15) as i64, 5)).collect();
        prop_assert!(sn_mean_field_eigenvalue(n, &c).unwrap() >= mean_field_formula(n, &c).unwrap());
    }

    #[test]
    fn codim1_low_blocks_minimal(seed in 0u64..10_000, n in 3usize..=5) {
        let c = random_sorted_weights(n, WeightLaw::Uniform01, seed, 3);
        let inst = Codim1Instance::new(c.iter().map(Scalar::to_f64).collect::<Vec<f64>>()).unwrap();
        let low = m_k_min(&inst, 1).unwrap().to_f64().min(m_k_min(&inst, 2).unwrap().to_f64());
        for k in 3..=8 {
            prop_assert!(low <= m_k_min(&inst, k).unwrap().to_f64() + 1e-12, "k={}", k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mean_field_end_to_end(n in 3usize..=4, c in small_coeffs(4)) {
        let c = &c[..=n];
        let r = mean_field_report(n, c, 3, 0.0).unwrap();
        prop_assert!(r.passed(), "{}", r.to_json());
        prop_assert!(r.sn_in_kmp1);
        prop_assert_eq!(r.connected, c.iter().skip(2).any(|x| *x > rint(0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unbalanced_monomials_vanish(
        d in 1usize..=4,
        len in 1usize..=3,
        extra in 0usize..=1,
        raw in proptest::collection::vec(0usize..4, 16),
    ) {
        let pick = |o: usize, l: usize| -> Vec<usize> { raw[o..o + l].iter().map(|x| x % d).collect() };
        let i = pick(0, len);
        let j = pick(4, len);
        let mut ip = pick(8, len + extra);
        let jp = pick(12, len + extra);
        if extra == 0 && sorted(&i) == sorted(&ip) && sorted(&j) == sorted(&jp) {
            if d == 1 {
                // With d = 1 and equal lengths every index list is balanced.
                return Ok(());
            }
            ip[0] = (ip[0] + 1) % d;
        }
        prop_assert_eq!(monomial_integral(d, &i, &j, &ip, &jp).unwrap(), rint(0));
    }
}
