use laddermod::algebra::{mat_mul, Matrix};
use laddermod::fixtures::*;
use laddermod::ladder::*;
use laddermod::morphism::*;
use laddermod::persistence::*;

/// Whether some `Ψ: W -> V(2δ)` makes `(Φ, Ψ)` δ-invertible. Ψ is written
/// in barcode bases with one unknown per admissible coefficient, and both
/// triangle identities become a linear system in those unknowns.
fn delta_inverse_exists(phi: &LadderModule, delta: i64) -> bool {
    let field = phi.field();
    let two = 2 * delta;
    let bw = reduce_to_barcode_basis(phi.cod());
    let target = phi.dom().shift(two);
    let bv2 = reduce_to_barcode_basis(&target);
    let (rows, cols) = (bv2.generators(), bw.generators());
    let mut unknowns = Vec::new();
    for (r, k) in rows.iter().enumerate() {
        for (c, j) in cols.iter().enumerate() {
            if k.bar.overlaps(j.bar) {
                let mut e = Matrix::zeros(field, rows.len(), cols.len());
                e.set(r, c, field.one());
                let mm = MorphismMatrix::new(rows.to_vec(), cols.to_vec(), e).unwrap();
                unknowns.push(from_single_matrix(&mm, &bw, &bv2).unwrap());
            }
        }
    }
    let (lo, hi) = phi.window();
    let mut columns: Vec<Vec<laddermod::algebra::Scalar>> = vec![Vec::new(); unknowns.len()];
    let mut rhs = Vec::new();
    for t in lo - two..=hi + two {
        for (u, b) in unknowns.iter().enumerate() {
            columns[u].extend(
                mat_mul(&b.comp(t), &phi.comp(t))
                    .unwrap()
                    .entries()
                    .iter()
                    .cloned(),
            );
            columns[u].extend(
                mat_mul(&phi.comp(t + two), &b.comp(t))
                    .unwrap()
                    .entries()
                    .iter()
                    .cloned(),
            );
        }
        rhs.extend(phi.dom().inner(t, t + two).entries().iter().cloned());
        rhs.extend(phi.cod().inner(t, t + two).entries().iter().cloned());
    }
    let n = rhs.len();
    let mut a = Matrix::zeros(field, n, unknowns.len());
    for (u, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            a.set(i, u, x.clone());
        }
    }
    let b = Matrix::from_entries(field, n, 1, rhs).unwrap();
    a.solve(&b).unwrap().is_some()
}

#[test]
fn running_example_has_a_one_inverse() {
    assert!(delta_inverse_exists(&running_phi(), 1));
    assert!(!delta_inverse_exists(&running_phi(), 0));
}

#[test]
fn nested_counterexample_has_no_one_inverse() {
    assert!(!delta_inverse_exists(&nested_phi(), 1));
    assert!(delta_inverse_exists(&nested_phi(), 3));
}

#[test]
fn nested_counterexample_has_no_matching_form_mod_p() {
    let phi = nested_phi();
    let mm = to_single_matrix(
        &phi,
        &reduce_to_barcode_basis(phi.dom()),
        &reduce_to_barcode_basis(phi.cod()),
    )
    .unwrap();
    for p in [5, 7] {
        let outcome = exhaustive_matching_search(&mm, p, 1_000_000).unwrap();
        assert!(
            matches!(outcome, SearchOutcome::Exhausted { .. }),
            "p = {p}: {outcome:?}"
        );
    }
}

#[test]
fn search_finds_matching_form_for_running_example() {
    let phi = running_phi();
    let mm = to_single_matrix(
        &phi,
        &reduce_to_barcode_basis(phi.dom()),
        &reduce_to_barcode_basis(phi.cod()),
    )
    .unwrap();
    assert!(matches!(
        exhaustive_matching_search(&mm, 5, 1_000_000).unwrap(),
        SearchOutcome::Found(_)
    ));
}

#[test]
fn failure_is_strategy_independent() {
    let phi = nested_phi();
    for preference in [Preference::RowsFirst, Preference::ColumnsFirst] {
        for pivot in [PivotChoice::First, PivotChoice::Last] {
            let s = ReductionStrategy { preference, pivot };
            assert!(matches!(
                decompose_with(&phi, &s),
                Err(DecomposeError::Reduction(_))
            ));
        }
    }
}
