use laddermod::algebra::{mat_mul, Field, Matrix};
use laddermod::coarse::*;
use laddermod::ladder::*;
use laddermod::matching::*;
use laddermod::morphism::*;
use laddermod::persistence::*;
use laddermod::synth::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f7() -> Field {
    Field::prime(7).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank over `F_p` by plain Gaussian elimination on residues.
fn rank_mod_p(m: &Matrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    m.get(r, c)
                        .to_string()
                        .parse::<i64>()
                        .unwrap()
                        .rem_euclid(p)
                })
                .collect()
        })
        .collect();
    let inv = |x: i64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, r);
        let s = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn small() -> SynthConfig {
    SynthConfig {
        horizon: 7,
        max_bars: 4,
        max_coeff: 3,
    }
}

fn same_multisets(a: &LadderDecomposition, b: &LadderDecomposition) -> bool {
    a.pairs() == b.pairs() && a.plus_bars() == b.plus_bars() && a.minus_bars() == b.minus_bars()
}

const STRATEGIES: [ReductionStrategy; 4] = [
    ReductionStrategy {
        preference: Preference::RowsFirst,
        pivot: PivotChoice::First,
    },
    ReductionStrategy {
        preference: Preference::RowsFirst,
        pivot: PivotChoice::Last,
    },
    ReductionStrategy {
        preference: Preference::ColumnsFirst,
        pivot: PivotChoice::First,
    },
    ReductionStrategy {
        preference: Preference::ColumnsFirst,
        pivot: PivotChoice::Last,
    },
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barcode_matches_rank_function(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_module(&mut r, f7(), &small());
        let bb = reduce_to_barcode_basis(&m);
        bb.check().unwrap();
        let (lo, hi) = m.support().unwrap();
        for i in lo..=hi {
            for j in i..=hi {
                prop_assert_eq!(rank_mod_p(&m.inner(i, j), 7), bb.barcode().rank(i, j));
            }
        }
        for (k, a) in bb.reduced_module().maps().iter().enumerate() {
            prop_assert!(laddermod::algebra::is_barcode_form(a).is_some(), "map {} not in barcode form", k);
        }
    }

    #[test]
    fn single_matrix_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = random_module(&mut r, f7(), &small());
        let w = random_module(&mut r, f7(), &small());
        let phi = random_morphism(&mut r, &v, &w, &small());
        validate_ladder(&phi).unwrap();
        let (bv, bw) = (reduce_to_barcode_basis(&v), reduce_to_barcode_basis(&w));
        let mm = to_single_matrix(&phi, &bv, &bw).unwrap();
        for c in 0..mm.cols() {
            for k in mm.support(c).unwrap() {
                prop_assert!(interval_overlap(mm.row_bar(k), mm.col_bar(c)));
            }
        }
        prop_assert_eq!(from_single_matrix(&mm, &bv, &bw).unwrap(), phi);
    }

    #[test]
    fn masked_product_is_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = random_module(&mut r, f7(), &small());
        let v = random_module(&mut r, f7(), &small());
        let w = random_module(&mut r, f7(), &small());
        let f = random_morphism(&mut r, &u, &v, &small());
        let g = random_morphism(&mut r, &v, &w, &small());
        let (bu, bv, bw) = (reduce_to_barcode_basis(&u), reduce_to_barcode_basis(&v), reduce_to_barcode_basis(&w));
        let masked = compose_single(&to_single_matrix(&g, &bv, &bw).unwrap(), &to_single_matrix(&f, &bu, &bv).unwrap()).unwrap();
        prop_assert_eq!(masked, to_single_matrix(&g.compose(&f).unwrap(), &bu, &bw).unwrap());
    }

    #[test]
    fn nest_free_morphisms_decompose(seed in any::<u64>(), rational in any::<bool>()) {
        let mut r = rng(seed);
        let field = if rational { Field::Rational } else { f7() };
        let (bv, bw) = (nest_free_barcode(&mut r, &small()), nest_free_barcode(&mut r, &small()));
        let v = random_module_with_barcode(&mut r, field, &bv, &small());
        let w = random_module_with_barcode(&mut r, field, &bw, &small());
        let phi = random_morphism(&mut r, &v, &w, &small());
        let d = decompose(&phi).unwrap();
        verify_decomposition(&phi, &d).unwrap();
        prop_assert!(is_matching_form(&d.matrix));
        let original = to_single_matrix(&phi, &reduce_to_barcode_basis(&v), &reduce_to_barcode_basis(&w)).unwrap();
        let mut current = original.clone();
        for op in &d.ops {
            prop_assert!(op.is_legal(&current), "illegal op {}", op);
            op.apply(&mut current);
        }
        prop_assert_eq!(&replay(&original, &d.ops), &d.matrix);
        for s in &STRATEGIES {
            let other = decompose_with(&phi, s).unwrap();
            prop_assert!(same_multisets(&d, &other));
        }
    }

    #[test]
    fn invertible_pairs_decompose(seed in any::<u64>(), delta in 0i64..=2) {
        let mut r = rng(seed);
        let Some(pair) = random_invertible_pair(&mut r, f7(), delta, &small(), 100) else {
            return Ok(());
        };
        let (phi, psi) = (&pair.phi, &pair.psi);
        let d = decompose(phi).unwrap();
        verify_decomposition(phi, &d).unwrap();
        for s in &STRATEGIES {
            prop_assert!(same_multisets(&d, &decompose_with(phi, s).unwrap()));
        }
        long_bars_have_partners(phi, psi, delta)?;

        let chi_phi = induced_matching(&d, delta);
        let v_bars = reduce_to_barcode_basis(phi.dom()).barcode().clone();
        let w_bars = reduce_to_barcode_basis(phi.cod()).barcode().shift(-delta);
        chi_phi.check_conservation(&v_bars, &w_bars).unwrap();
        check_cost_bound(&chi_phi, MatchingCost::from_integer(delta)).unwrap();
        prop_assert!(matching_cost(&chi_phi) >= bottleneck_distance(&v_bars, &w_bars).unwrap());
        prop_assert!(to_basis_independent(&chi_phi).satisfies_bounds(&v_bars, &w_bars));

        let psi_int = invertible_to_interleaving(psi, delta);
        let dpsi = decompose(&psi_int).unwrap();
        verify_decomposition(&psi_int, &dpsi).unwrap();
        let chi_psi = induced_matching(&dpsi, delta);
        chi_psi.check_conservation(&w_bars, &v_bars).unwrap();
        let report = check_matching_correspondence(&chi_phi, &chi_psi, delta);
        prop_assert!(report.holds(), "{:?}", report.long_divergences);
    }

    #[test]
    fn coarse_decompositions(seed in any::<u64>(), delta in 0i64..=1, half_q in 0i64..=2) {
        let q = 2 * half_q;
        let mut r = rng(seed);
        let Some(pair) = random_invertible_pair(&mut r, f7(), delta, &small(), 100) else {
            return Ok(());
        };
        let c = coarse_decompose(&pair.phi, &pair.psi, delta, q, CoarseVariant::Both).unwrap();
        prop_assert_eq!(c.induced.delta, delta + half_q);
        check_delta_invertible(&c.induced.phi, &c.induced.psi, delta + half_q).unwrap();
        if c.precondition.holds() {
            let d = c.result.as_ref().unwrap();
            verify_decomposition(&c.induced.phi, d).unwrap();
            let m = c.matching().unwrap();
            check_cost_bound(&m, MatchingCost::from_integer(delta + half_q)).unwrap();
            for &(s, t) in m.pairs.keys() {
                prop_assert!(s.length() >= q && t.length() >= q);
            }
            let v_bars = reduce_to_barcode_basis(pair.phi.dom()).barcode().clone();
            let w_bars = reduce_to_barcode_basis(pair.phi.cod()).barcode().shift(-(delta + half_q));
            m.check_conservation(&v_bars, &w_bars).unwrap();
        }
        for variant in [CoarseVariant::Target, CoarseVariant::Source] {
            induce_coarse_morphism(&pair.phi, &pair.psi, delta, q, variant).unwrap();
        }
    }

    #[test]
    fn q_split_properties(seed in any::<u64>(), q in 0i64..=5) {
        let mut r = rng(seed);
        let m = random_module(&mut r, f7(), &small());
        let bars = reduce_to_barcode_basis(&m).barcode().clone();
        let s = q_split(&m, q).unwrap();
        let long = reduce_to_barcode_basis(&s.long).barcode().clone();
        prop_assert_eq!(&long, &bars.long_part(q));
        prop_assert_eq!(reduce_to_barcode_basis(&s.short).barcode().clone(), bars.short_part(q));
        prop_assert_eq!(s.reassembled_identity().unwrap(), LadderModule::identity(m.clone()));
        prop_assert_eq!(s.pr_long.compose(&s.inc_long).unwrap(), LadderModule::identity(s.long.clone()));
        prop_assert!(s.pr_short.compose(&s.inc_long).unwrap().comps().iter().all(Matrix::is_zero));
        prop_assert!(bottleneck_distance(&bars, &long).unwrap() < MatchingCost::new(q.max(1), 2) || q == 0);
        let nested_long = bars
            .bars()
            .iter()
            .flat_map(|&inner| bars.bars().into_iter().map(move |outer| (inner, outer)))
            .filter(|&(i, o)| i.length() >= q && i.strictly_nested_in(o))
            .map(|(i, o)| (i.birth() - o.birth()).min(o.death() - i.death()))
            .min();
        let expected = nested_long.map_or(Nestedness::Infinite, Nestedness::Finite);
        prop_assert_eq!(nestedness(&long), expected);
        if q % 2 == 0 {
            let (_, _, cert) = coarse_interleaving(&s).unwrap();
            prop_assert_eq!(cert.delta, q / 2);
        }
    }

    #[test]
    fn perturbed_components_break_squares(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = random_module(&mut r, f7(), &small());
        let w = random_module(&mut r, f7(), &small());
        let phi = random_morphism(&mut r, &v, &w, &small());
        let (lo, hi) = phi.window();
        let t = r.gen_range(lo..=hi);
        let mut comps: Vec<Matrix> = (lo..=hi).map(|s| phi.comp(s)).collect();
        let c = &mut comps[(t - lo) as usize];
        if c.rows() == 0 || c.cols() == 0 {
            return Ok(());
        }
        let (i, j) = (r.gen_range(0..c.rows()), r.gen_range(0..c.cols()));
        let bumped = c.get(i, j) + &f7().one();
        c.set(i, j, bumped);
        let delta = {
            let mut e = Matrix::zeros(f7(), c.rows(), c.cols());
            e.set(i, j, f7().one());
            e
        };
        let bad = failing_squares(&LadderModule::new(v.clone(), w.clone(), lo, comps).unwrap()).unwrap();
        let mut expected = Vec::new();
        if !mat_mul(&delta, &v.map(t - 1)).unwrap().is_zero() {
            expected.push(t - 1);
        }
        if !mat_mul(&w.map(t), &delta).unwrap().is_zero() {
            expected.push(t);
        }
        prop_assert_eq!(bad, expected);
    }
}

/// Every bar `J = [a,b]` of the domain with `|J| ≥ 2δ` has a codomain
/// generator `x_I` in the support of `Φ(x_J)` whose image under `Ψ` involves
/// `x_J(2δ)`, with `a - 2δ ≤ i ≤ a` and `b - 2δ ≤ j ≤ b`.
fn long_bars_have_partners(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
) -> Result<(), TestCaseError> {
    let bv = reduce_to_barcode_basis(phi.dom());
    let bw = reduce_to_barcode_basis(phi.cod());
    let bv2 = reduce_to_barcode_basis(psi.cod());
    let mphi = to_single_matrix(phi, &bv, &bw).unwrap();
    let mpsi = to_single_matrix(psi, &bw, &bv2).unwrap();
    for (c, j) in bv.generators().iter().enumerate() {
        if j.bar.length() < 2 * delta {
            continue;
        }
        let shifted = bv2.find(j.bar.shift(2 * delta), j.slot).unwrap();
        let (a, b) = (j.bar.birth(), j.bar.death());
        let found = mphi.support(c).unwrap().into_iter().any(|k| {
            let i = mphi.row_bar(k);
            !mpsi.get(shifted, k).is_zero()
                && (a - 2 * delta..=a).contains(&i.birth())
                && (b - 2 * delta..=b).contains(&i.death())
        });
        prop_assert!(found, "no partner for {}", j.bar);
    }
    Ok(())
}
