use laddermod::algebra::{Field, Matrix};
use laddermod::fixtures::*;
use laddermod::ladder::*;
use laddermod::morphism::*;
use laddermod::persistence::*;

fn q() -> Field {
    Field::Rational
}

fn col(values: &[&str]) -> Vec<laddermod::algebra::Scalar> {
    values
        .iter()
        .map(|v| q().parse_scalar(v).unwrap())
        .collect()
}

#[test]
fn running_modules_have_expected_barcodes() {
    assert_eq!(
        reduce_to_barcode_basis(&running_v()).barcode().to_string(),
        "[0,4] [1,7] [4,4]"
    );
    assert_eq!(
        reduce_to_barcode_basis(&running_w()).barcode().to_string(),
        "[1,5] [1,6]"
    );
    assert_eq!(
        reduce_to_barcode_basis(&running_w().shift(1))
            .barcode()
            .to_string(),
        "[0,4] [0,5]"
    );
}

#[test]
fn running_morphisms_are_valid_and_interleave() {
    validate_ladder(&running_phi()).unwrap();
    validate_ladder(&running_psi()).unwrap();
    let cert = check_interleaving(&running_phi(), &running_psi(), 1).unwrap();
    assert_eq!(cert.delta, 1);
    assert!(check_interleaving(&running_phi(), &running_psi(), 0).is_err());
    let psi_invertible = interleaving_to_invertible(&running_psi(), 1);
    check_delta_invertible(&running_phi(), &psi_invertible, 1).unwrap();
}

#[test]
fn running_phi_coefficients() {
    let phi = running_phi();
    let dom = reduce_to_barcode_basis(phi.dom());
    let cod = reduce_to_barcode_basis(phi.cod());
    let mm = to_single_matrix(&phi, &dom, &cod).unwrap();
    assert_eq!(
        *mm.entries(),
        Matrix::from_i64(q(), 2, 3, &[2, 1, 1, 0, 1, 0])
    );
    assert_eq!(from_single_matrix(&mm, &dom, &cod).unwrap(), phi);
    let psi = running_psi();
    let mp = to_single_matrix(
        &psi,
        &reduce_to_barcode_basis(psi.dom()),
        &reduce_to_barcode_basis(psi.cod()),
    )
    .unwrap();
    assert_eq!(
        *mp.entries(),
        Matrix::parse(q(), 3, 2, &["1/2", "-1/2", "0", "1", "0", "0"]).unwrap()
    );
}

#[test]
fn running_phi_decomposes_with_expected_generators() {
    let phi = running_phi();
    let d = decompose(&phi).unwrap();
    assert_eq!(d.to_string(), "R [0,4]->[0,4], R [1,7]->[0,5], I+ [4,4]");
    verify_decomposition(&phi, &d).unwrap();
    let ops: Vec<OpKind> = d.ops.iter().map(|o| o.kind).collect();
    assert_eq!(
        ops,
        vec![
            OpKind::ScaleColumn,
            OpKind::RowOverlap,
            OpKind::ColumnOverlap
        ]
    );

    let v = &d.dom_basis;
    let g04 = v.find(Interval::of(0, 4), 0).unwrap();
    let g44 = v.find(Interval::of(4, 4), 0).unwrap();
    for t in 0..=4 {
        let expected = if t == 0 {
            col(&["1/2"])
        } else if t < 4 {
            col(&["1/2", "0"])
        } else {
            col(&["1/2", "0", "0"])
        };
        assert_eq!(v.vector(g04, t).unwrap(), expected);
    }
    assert_eq!(v.vector(g44, 4).unwrap(), col(&["-1/2", "0", "1"]));
    let w = &d.cod_basis;
    let g05 = w.find(Interval::of(0, 5), 0).unwrap();
    for t in 0..=4 {
        assert_eq!(w.vector(g05, t).unwrap(), col(&["1", "1"]));
    }
    assert_eq!(w.vector(g05, 5).unwrap(), col(&["1"]));
}

#[test]
fn running_psi_decomposes() {
    let d = decompose(&running_psi()).unwrap();
    verify_decomposition(&running_psi(), &d).unwrap();
    assert_eq!(d.to_string(), "R [1,5]->[-1,3], R [1,6]->[0,6], I- [3,3]");
}

#[test]
fn nested_counterexample_fails() {
    let phi = nested_phi();
    validate_ladder(&phi).unwrap();
    let err = decompose(&phi).unwrap_err();
    let DecomposeError::Reduction(f) = err else {
        panic!("expected reduction failure")
    };
    assert_eq!(f.row_bar, Interval::of(0, 5));
    assert_eq!(f.col_bar, Interval::of(2, 5));
    let check = check_nestedness_precondition(&phi, 1);
    assert_eq!(check.dom, Nestedness::Finite(2));
    assert!(!check.holds());
}

#[test]
fn swap_morphisms_are_valid() {
    validate_ladder(&swap_phi()).unwrap();
    validate_ladder(&swap_psi()).unwrap();
    assert_eq!(
        decompose(&swap_phi()).unwrap().to_string(),
        "R [0,2]->[0,2], R [0,3]->[-1,2]"
    );
    assert_eq!(
        decompose(&swap_psi()).unwrap().to_string(),
        "R [0,2]->[-1,2], R [0,3]->[0,2]"
    );
}

mod matchings {
    use super::*;
    use laddermod::matching::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::of(a, b)
    }

    #[test]
    fn running_example_matchings_are_opposite() {
        let chi_phi = induced_matching(&decompose(&running_phi()).unwrap(), 1);
        let chi_psi = induced_matching(&decompose(&running_psi()).unwrap(), 1);
        assert_eq!(chi_phi.to_string(), "{([0,4],[1,5]), ([1,7],[1,6])}");
        assert_eq!(chi_phi.unmatched_source.to_string(), "[4,4]");
        assert_eq!(chi_psi.to_string(), "{([1,5],[0,4]), ([1,6],[1,7])}");
        assert_eq!(matching_cost(&chi_phi), MatchingCost::from_integer(1));
        assert_eq!(matching_cost(&chi_psi), MatchingCost::from_integer(1));
        assert!(check_matching_correspondence(&chi_phi, &chi_psi, 1).holds());
        assert_eq!(chi_phi.reversed().pairs, chi_psi.pairs);
    }

    #[test]
    fn bl_matchings_agree_where_ladder_matchings_differ() {
        let bl_phi = bl_matching(&swap_phi(), 1);
        let bl_psi = bl_matching(&swap_psi(), 1);
        assert_eq!(bl_phi.to_string(), "{([0,2],[1,3]), ([0,3],[0,3])}");
        assert_eq!(bl_phi, bl_psi);
        let im = reduce_to_barcode_basis(&image_module(&swap_psi()));
        assert_eq!(im.barcode().to_string(), "[0,2]x2");
        let l_phi = induced_matching(&decompose(&swap_phi()).unwrap(), 1);
        let l_psi = induced_matching(&decompose(&swap_psi()).unwrap(), 1);
        assert_eq!(l_phi, bl_phi);
        assert_eq!(l_psi.multiplicity(iv(0, 3), iv(1, 3)), 1);
        assert_eq!(l_psi.multiplicity(iv(0, 2), iv(0, 3)), 1);
        assert_ne!(l_phi, l_psi);
    }
}

#[test]
fn perturbed_running_component_breaks_both_adjacent_squares() {
    let phi = running_phi();
    let (lo, hi) = phi.window();
    let mut comps: Vec<Matrix> = (lo..=hi).map(|t| phi.comp(t)).collect();
    let c = &mut comps[(2 - lo) as usize];
    let bumped = c.get(0, 0) + &q().one();
    c.set(0, 0, bumped);
    let broken = LadderModule::new(phi.dom().clone(), phi.cod().clone(), lo, comps).unwrap();
    assert_eq!(failing_squares(&broken).unwrap(), vec![1, 2]);
    assert_eq!(
        validate_ladder(&broken).unwrap_err(),
        MorphismError::SquareFails { from: 1 }
    );
}

#[test]
fn identity_on_nested_bars_decomposes_without_precondition() {
    let v = laddermod::synth::module_from_barcode(q(), &nested_barcode());
    let phi = LadderModule::identity(v.clone());
    let psi = LadderModule::inner_morphism(&v, 2);
    check_delta_invertible(&phi, &psi, 1).unwrap();
    let check = check_nestedness_precondition(&phi, 1);
    assert_eq!(check.dom, Nestedness::Finite(1));
    assert!(!check.holds());
    let d = decompose(&phi).unwrap();
    verify_decomposition(&phi, &d).unwrap();
    let diagonal: Vec<_> = d.pairs().into_iter().filter(|((a, b), _)| a == b).collect();
    assert_eq!(diagonal.len(), 4);
    assert!(d.plus_bars().is_empty() && d.minus_bars().is_empty());
}
