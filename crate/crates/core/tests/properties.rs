//! Property suites and brute-force oracles for the library as a whole.

use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use splitpanel::counting::{
    count_n, count_n_liberated, lattice_slice, r_min, CountingConfig, EpsSchedule,
};
use splitpanel::nodal::{
    admissible_smoothings, degbd, degbd_m1_closed_form, glue, sharpness_witness, Alignment,
    AlignmentSpec, NodalType,
};
use splitpanel::rational::{int, pow, rat, Rational};
use splitpanel::splitting::{enumerate_types, sequential_types, SplittingType};
use splitpanel::stability::{balance, balance_step, sp_feasible, FiltrationData};
use splitpanel::variety::{esp, pbundle, toy_quadrant, toy_rho1, toy_rho2, VarietyModel};
use splitpanel::ModelFile;

// ---------- oracles ----------

/// Minimum over all 4^r labelings (unused / J / K1 / K2).
fn degbd_oracle(pairs: &[(i64, i64)], m: usize) -> i64 {
    let r = pairs.len();
    let mut best = i64::MAX;
    for code in 0..4usize.pow(r as u32) {
        let (mut c, mut n1, mut n2, mut cost) = (code, 0, 0, 0);
        for &(a, b) in pairs {
            match c % 4 {
                1 => {
                    n1 += 1;
                    n2 += 1;
                    cost += a + b;
                }
                2 => {
                    n1 += 1;
                    cost += a + 1;
                }
                3 => {
                    n2 += 1;
                    cost += b + 1;
                }
                _ => {}
            }
            c /= 4;
        }
        if n1 == m && n2 == m {
            best = best.min(cost);
        }
    }
    best
}

/// All non-increasing sequences of length `r` summing to `total` with
/// entries in `[lo, hi]`.
fn sequences(r: usize, total: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(r: usize, total: i64, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == r {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = cur.last().copied().unwrap_or(hi).min(hi);
        for x in (lo..=cap).rev() {
            cur.push(x);
            go(r, total - x, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, total, lo, hi, &mut Vec::new(), &mut out);
    out
}

fn smoothings_oracle(pairs: &[(i64, i64)], sequential: bool) -> Vec<Vec<i64>> {
    let r = pairs.len();
    let total: i64 = pairs.iter().map(|(a, b)| a + b).sum();
    let bounds: Vec<i64> = (1..=r).map(|m| degbd_oracle(pairs, m)).collect();
    let lo = bounds[0];
    let hi = total - (r as i64 - 1) * lo;
    sequences(r, total, lo, hi)
        .into_iter()
        .filter(|s| {
            (1..=r).all(|m| s[r - m..].iter().sum::<i64>() >= bounds[m - 1])
                && (!sequential || s.windows(2).all(|w| w[0] - w[1] <= 1))
        })
        .collect()
}

/// Nef lattice points with `0 < deg ≤ bound` found by scanning a box.
fn slice_oracle(model: &VarietyModel, bound: i64, radius: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..model.rho {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts.into_iter()
        .filter(|p| {
            let d = model.degree(p);
            model.is_nef(p) && d > 0 && d <= bound
        })
        .collect()
}

fn st(v: Vec<i64>) -> SplittingType {
    SplittingType::new(v).unwrap()
}

// ---------- strategies ----------

fn nodal_strategy(max_rank: usize, lo: i64, hi: i64) -> impl Strategy<Value = NodalType> {
    prop::collection::vec((lo..=hi, lo..=hi), 1..=max_rank).prop_map(|p| NodalType::new(p).unwrap())
}

fn type_strategy(max_rank: usize, lo: i64, hi: i64) -> impl Strategy<Value = SplittingType> {
    prop::collection::vec(lo..=hi, 1..=max_rank).prop_map(st)
}

fn same_rank_pair(
    max_rank: usize,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = (SplittingType, SplittingType)> {
    (1..=max_rank).prop_flat_map(move |r| {
        (
            prop::collection::vec(lo..=hi, r).prop_map(st),
            prop::collection::vec(lo..=hi, r).prop_map(st),
        )
    })
}

/// Sequential types of rank at most 5 with slope in `[-3, 3]`.
fn integer_slope_sequential() -> impl Strategy<Value = SplittingType> {
    let all: Vec<SplittingType> = (1..=5usize)
        .flat_map(|r| (-3..=3i64).flat_map(move |mu| sequential_types(r, mu * r as i64)))
        .collect();
    prop::sample::select(all)
}

// ---------- splitting types ----------

proptest! {
    #[test]
    fn splitting_text_round_trip(t in type_strategy(8, -20, 20)) {
        let back: SplittingType = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn panel_sums_to_rank(t in type_strategy(8, -5, 9)) {
        prop_assume!(t.total_degree() != 0);
        let p = t.slope_panel().unwrap();
        prop_assert_eq!(p.sum(), int(t.rank() as i64));
        prop_assert_eq!(p.len(), t.rank());
    }

    #[test]
    fn tensor_and_dual_laws(s in type_strategy(4, -4, 4), t in type_strategy(4, -4, 4)) {
        prop_assert_eq!(s.tensor(&t), t.tensor(&s));
        prop_assert_eq!(s.tensor(&t).dual(), s.dual().tensor(&t.dual()));
        prop_assert_eq!(s.dual().dual(), s.clone());
        prop_assert_eq!(s.tensor(&t).rank(), s.rank() * t.rank());
        prop_assert_eq!(
            s.tensor(&t).total_degree(),
            s.total_degree() * t.rank() as i64 + t.total_degree() * s.rank() as i64
        );
        prop_assert_eq!(s.direct_sum(&t).balance_width(), {
            let all: Vec<i64> = s.degrees().iter().chain(t.degrees()).copied().collect();
            (all.iter().max().unwrap() - all.iter().min().unwrap()) as u64
        });
    }

    #[test]
    fn twist_shifts_slope(t in type_strategy(6, -5, 5), c in -4i64..=4) {
        prop_assert_eq!(t.twist(c).slope(), t.slope() + int(c));
        prop_assert_eq!(t.twist(c).balance_width(), t.balance_width());
    }

    #[test]
    fn specialization_respects_twists(s in type_strategy(4, -3, 3), c in -3i64..=3) {
        let m = SplittingType::most_balanced(s.rank(), s.total_degree()).unwrap();
        prop_assert!(m.specializes_to(&s).unwrap());
        prop_assert_eq!(
            m.twist(c).specializes_to(&s.twist(c)).unwrap(),
            true
        );
    }
}

#[test]
fn specialization_is_a_partial_order_with_balanced_top() {
    for r in 1..=3 {
        let all = enumerate_types(r, -2, 2);
        let degrees: BTreeSet<i64> = all.iter().map(SplittingType::total_degree).collect();
        for d in degrees {
            let class: Vec<&SplittingType> = all.iter().filter(|t| t.total_degree() == d).collect();
            for a in &class {
                assert!(a.specializes_to(a).unwrap());
                for b in &class {
                    let ab = a.specializes_to(b).unwrap();
                    if ab && b.specializes_to(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    for c in &class {
                        if ab && b.specializes_to(c).unwrap() {
                            assert!(a.specializes_to(c).unwrap());
                        }
                    }
                }
            }
            let tops: Vec<&&SplittingType> = class
                .iter()
                .filter(|a| class.iter().all(|b| a.specializes_to(b).unwrap()))
                .collect();
            assert_eq!(tops.len(), 1);
        }
    }
}

#[test]
fn sequential_types_match_filter() {
    for r in 1..=5 {
        for d in -6..=6 {
            let expected: Vec<SplittingType> = sequences(r, d, -6 - r as i64, 6 + r as i64)
                .into_iter()
                .filter(|s| s.windows(2).all(|w| w[0] - w[1] <= 1))
                .map(st)
                .collect();
            assert_eq!(sequential_types(r, d), expected, "r={r} d={d}");
        }
    }
}

// ---------- nodal calculus ----------

proptest! {
    #[test]
    fn nodal_text_round_trip(z in nodal_strategy(8, -9, 9)) {
        let back: NodalType = z.to_string().parse().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn degbd_matches_brute_force(z in nodal_strategy(6, -4, 4), m_seed in 0usize..6) {
        let m = 1 + m_seed % z.rank();
        prop_assert_eq!(degbd(&z, m).unwrap(), degbd_oracle(z.pairs(), m));
    }

    #[test]
    fn degbd_full_rank_is_total_degree(z in nodal_strategy(8, -5, 5)) {
        prop_assert_eq!(degbd(&z, z.rank()).unwrap(), z.total_degree());
        prop_assert_eq!(degbd_m1_closed_form(&z), degbd(&z, 1).unwrap());
    }

    #[test]
    fn degbd_symmetric_under_swap(z in nodal_strategy(6, -4, 4), m_seed in 0usize..6) {
        let m = 1 + m_seed % z.rank();
        prop_assert_eq!(degbd(&z, m).unwrap(), degbd(&z.swap_components(), m).unwrap());
    }

    #[test]
    fn witness_is_sharp_and_certified(z in nodal_strategy(6, -4, 4), m_seed in 0usize..6) {
        let m = 1 + m_seed % z.rank();
        let w = sharpness_witness(&z, m).unwrap();
        prop_assert_eq!(w.total, degbd(&z, m).unwrap());
        prop_assert!(w.is_certified());
        let q = w.quotient_on_z(&z);
        prop_assert_eq!(q.rank_on_z1(), m);
        prop_assert_eq!(q.rank_on_z2(), m);
        prop_assert_eq!(q.euler_char() - q.s() as i64, w.total);
    }

    #[test]
    fn smoothings_match_brute_force(z in nodal_strategy(4, -3, 3), sequential in any::<bool>()) {
        let got: Vec<Vec<i64>> = admissible_smoothings(&z, sequential)
            .into_iter()
            .map(|t| t.degrees().to_vec())
            .collect();
        prop_assert_eq!(got, smoothings_oracle(z.pairs(), sequential));
    }

    #[test]
    fn glue_restricts_back(
        (s, t) in same_rank_pair(5, -4, 4),
        spec in prop_oneof![Just("dual"), Just("identity")],
    ) {
        let align = spec.parse::<AlignmentSpec>().unwrap().resolve(s.rank()).unwrap();
        let z = glue(&s, &t, &align).unwrap();
        prop_assert_eq!(z.restrict_z1(), s.clone());
        prop_assert_eq!(z.restrict_z2(), t.clone());
        prop_assert_eq!(z.total_degree(), s.total_degree() + t.total_degree());
    }
}

#[test]
fn most_balanced_is_always_admissible_after_dual_glue() {
    for t in (1..=4).flat_map(|r| enumerate_types(r, -2, 2)) {
        let z = glue(&t, &t, &Alignment::dual(t.rank())).unwrap();
        let top = SplittingType::most_balanced(t.rank(), z.total_degree()).unwrap();
        assert!(admissible_smoothings(&z, false).contains(&top), "{t}");
    }
}

// ---------- stability ----------

proptest! {
    #[test]
    fn balance_step_never_widens(shifted in integer_slope_sequential()) {
        let next = balance_step(&shifted).unwrap();
        prop_assert!(next.balance_width() <= shifted.balance_width());
        prop_assert!(next.is_sequential());
        prop_assert_eq!(next.total_degree(), if shifted.is_0_balanced() {
            shifted.total_degree()
        } else {
            2 * shifted.total_degree()
        });
    }

    #[test]
    fn balance_twist_equivariance(t in integer_slope_sequential(), c in -3i64..=3) {
        let base = balance(&t, 4).unwrap();
        let moved = balance(&t.twist(c), 4).unwrap();
        prop_assert_eq!(base.steps, moved.steps);
        for (k, (a, b)) in base.states.iter().zip(&moved.states).enumerate() {
            prop_assert_eq!(a.twist(c << k), b.clone());
        }
    }

    #[test]
    fn single_piece_feasibility(t in type_strategy(6, -5, 5), num in -12i64..=12) {
        let r = t.rank();
        let mu = rat(num, 2);
        let f = FiltrationData::new(vec![(r, mu.clone())]).unwrap();
        let half = rat(r as i64, 2);
        let expected = int(t.max_degree()) - &mu < half && &mu - int(t.min_degree()) < half;
        prop_assert_eq!(sp_feasible(&t, &f).unwrap(), expected);
    }
}

// ---------- varieties and counting ----------

fn config(q: i64, rho: usize, eps: EpsSchedule) -> CountingConfig {
    CountingConfig::new(int(q), 1, 1, vec![0; rho], 1, eps, rat(1, 10)).unwrap()
}

fn root_eps() -> EpsSchedule {
    EpsSchedule::Power {
        c: int(1),
        p_num: 1,
        p_den: 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_slices_match_box_scan(
        f1 in (-3i64..=3, -3i64..=3),
        f2 in (-3i64..=3, -3i64..=3),
        k in (-2i64..=4, -2i64..=4),
        bound in 1i64..=8,
    ) {
        prop_assume!(f1.0 * f2.1 - f1.1 * f2.0 != 0);
        let mut model = toy_quadrant(2, [1, 1]).unwrap();
        model.nef_facets = vec![vec![f1.0, f1.1], vec![f2.0, f2.1]];
        model.minus_k = vec![k.0, k.1];
        if let Ok(slice) = lattice_slice(&model, bound) {
            prop_assert_eq!(slice, slice_oracle(&model, bound, 6 * bound));
        }
    }

    #[test]
    fn orthant_slices_match_box_scan(k in prop::collection::vec(1i64..=4, 3), bound in 1i64..=9) {
        let mut model = toy_quadrant(2, [1, 1]).unwrap();
        model.rho = 3;
        model.nef_facets = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        model.minus_k = k;
        prop_assert_eq!(lattice_slice(&model, bound).unwrap(), slice_oracle(&model, bound, bound));
    }

    #[test]
    fn rho1_geometric_sum(dim in 1usize..=4, c in 1i64..=4, q in 2i64..=5, d in 1u64..=6) {
        let model = toy_rho1(dim, c).unwrap();
        let cfg = CountingConfig::new(int(q), 1, 1, vec![0], 1, root_eps(), rat(1, 10)).unwrap();
        prop_assert_eq!(r_min(&model).unwrap(), c as u64);
        let qc = pow(&int(q), c as u64);
        let closed = &qc * (pow(&qc, d) - int(1)) / (&qc - int(1));
        prop_assert_eq!(count_n(&model, &cfg, d).unwrap(), closed);
    }

    #[test]
    fn esp_sums_to_dimension(x in 0i64..=6, y in 0i64..=6) {
        prop_assume!(x + y > 0);
        for model in [pbundle(3, &[3, 0, 0]).unwrap(), toy_rho2(), pbundle(4, &[2, 1, 0]).unwrap()] {
            let p = esp(&model, &[x, y]).unwrap();
            prop_assert_eq!(p.sum(), int(model.dim as i64));
            prop_assert!(p.entries().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}

#[test]
fn liberated_never_exceeds_total() {
    let models = [
        pbundle(3, &[3, 0, 0]).unwrap(),
        toy_rho2(),
        toy_quadrant(2, [1, 1]).unwrap(),
        toy_rho1(1, 1).unwrap(),
    ];
    let schedules = [
        root_eps(),
        EpsSchedule::Table(vec![(1, int(-1))]),
        EpsSchedule::Table(vec![(1, int(1)), (4, rat(1, 2)), (8, rat(1, 5))]),
    ];
    for model in &models {
        for eps in &schedules {
            let cfg = config(2, model.rho, eps.clone());
            for d in 1..=8 {
                let n = count_n(model, &cfg, d).unwrap();
                let lib = count_n_liberated(model, &cfg, d).unwrap();
                assert!(lib <= n);
                assert!(!n.is_zero() || lib.is_zero());
            }
        }
    }
}

#[test]
fn fixture_files_match_builders() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let load = |name: &str| ModelFile::load(&dir.join(name)).unwrap();
    assert_eq!(load("pbundle.json").model, pbundle(3, &[3, 0, 0]).unwrap());
    assert_eq!(load("toy_rho1.json").model, toy_rho1(1, 1).unwrap());
    assert_eq!(load("toy_rho2.json").model, toy_rho2());
    assert_eq!(
        load("quadrant.json").model,
        toy_quadrant(2, [1, 1]).unwrap()
    );
    for name in [
        "pbundle.json",
        "toy_rho1.json",
        "toy_rho2.json",
        "quadrant.json",
    ] {
        let f = load(name);
        assert!(splitpanel::validate(&f.model).is_ok(), "{name}");
        assert!(f.counting.is_some(), "{name}");
        let again = ModelFile::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(again, f);
    }
}

#[test]
fn quadrant_ehrhart_counts() {
    let model = toy_quadrant(2, [1, 1]).unwrap();
    for d in 1..=30i64 {
        let n = lattice_slice(&model, d).unwrap().len() as i64;
        assert_eq!(n, (d + 1) * (d + 2) / 2 - 1);
    }
    let total: Rational = (1..=3).map(|k| pow(&int(2), k)).sum();
    assert_eq!(total, int(14));
}
