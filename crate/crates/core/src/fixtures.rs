//! Small worked modules and morphisms with known decompositions, shared by
//! tests, benchmarks and the command line golden files.

use crate::algebra::{Field, Matrix};
use crate::morphism::{from_single_matrix, LadderModule, MorphismMatrix};
use crate::persistence::{reduce_to_barcode_basis, Barcode, Interval, PersistenceModule};

fn q() -> Field {
    Field::Rational
}

fn ints(rows: usize, cols: usize, v: &[i64]) -> Matrix {
    Matrix::from_i64(q(), rows, cols, v)
}

fn fracs(rows: usize, cols: usize, v: &[&str]) -> Matrix {
    Matrix::parse(q(), rows, cols, v).expect("literal fractions")
}

fn id(n: usize) -> Matrix {
    Matrix::identity(q(), n)
}

fn module(start: i64, dims: Vec<usize>, maps: Vec<Matrix>) -> PersistenceModule {
    PersistenceModule::new(q(), start, dims, maps).expect("fixture module is well formed")
}

/// Bars `[0,4] [1,7] [4,4]`.
pub fn running_v() -> PersistenceModule {
    module(
        0,
        vec![1, 2, 2, 2, 3, 1, 1, 1, 0],
        vec![
            ints(2, 1, &[1, 0]),
            id(2),
            id(2),
            ints(3, 2, &[1, 0, 0, 1, 0, 0]),
            ints(1, 3, &[0, 1, 0]),
            id(1),
            id(1),
            Matrix::zeros(q(), 0, 1),
        ],
    )
}

/// Bars `[1,5] [1,6]`.
pub fn running_w() -> PersistenceModule {
    module(
        0,
        vec![0, 2, 2, 2, 2, 2, 1, 0, 0],
        vec![
            Matrix::zeros(q(), 2, 0),
            id(2),
            id(2),
            id(2),
            id(2),
            ints(1, 2, &[0, 1]),
            Matrix::zeros(q(), 0, 1),
            Matrix::zeros(q(), 0, 0),
        ],
    )
}

/// `Φ: V -> W(1)`, one half of a 1-interleaving.
pub fn running_phi() -> LadderModule {
    let a = ints(2, 2, &[2, 1, 0, 1]);
    let comps = vec![
        ints(2, 1, &[2, 0]),
        a.clone(),
        a.clone(),
        a,
        ints(2, 3, &[2, 1, 1, 0, 1, 0]),
        id(1),
        Matrix::zeros(q(), 0, 1),
        Matrix::zeros(q(), 0, 1),
    ];
    LadderModule::new(running_v(), running_w().shift(1), 0, comps)
        .expect("fixture morphism is well formed")
}

/// `Ψ: W -> V(1)`, the other half of the 1-interleaving.
pub fn running_psi() -> LadderModule {
    let a = fracs(2, 2, &["1/2", "-1/2", "0", "1"]);
    let comps = vec![
        Matrix::zeros(q(), 2, 0),
        a.clone(),
        a,
        fracs(3, 2, &["1/2", "-1/2", "0", "1", "0", "0"]),
        ints(1, 2, &[0, 1]),
        ints(1, 2, &[0, 1]),
        id(1),
        Matrix::zeros(q(), 0, 0),
    ];
    LadderModule::new(running_w(), running_v().shift(1), 0, comps)
        .expect("fixture morphism is well formed")
}

fn sum_of_bars(bars: &[(i64, i64)]) -> PersistenceModule {
    let parts: Vec<PersistenceModule> = bars
        .iter()
        .map(|&(a, b)| PersistenceModule::interval_module(q(), Interval::of(a, b)))
        .collect();
    PersistenceModule::direct_sum(q(), &parts)
}

/// Bars `[0,7] [2,5]`.
pub fn nested_v() -> PersistenceModule {
    sum_of_bars(&[(0, 7), (2, 5)])
}

/// Bars `[0,4] [0,5]`.
pub fn nested_w() -> PersistenceModule {
    sum_of_bars(&[(0, 4), (0, 5)])
}

/// Morphism `V -> W` with coefficients `[[1/2, -1/2], [1/2, 1]]` that
/// admits no ladder decomposition.
pub fn nested_phi() -> LadderModule {
    let dom = reduce_to_barcode_basis(&nested_v());
    let cod = reduce_to_barcode_basis(&nested_w());
    let mm = MorphismMatrix::new(
        cod.generators().to_vec(),
        dom.generators().to_vec(),
        fracs(2, 2, &["1/2", "-1/2", "1/2", "1"]),
    )
    .expect("coefficients respect the overlap relation");
    from_single_matrix(&mm, &dom, &cod).expect("fixture morphism is well formed")
}

/// Bars `[0,3] [0,2]`.
pub fn swap_v() -> PersistenceModule {
    module(0, vec![2, 2, 2, 1], vec![id(2), id(2), ints(1, 2, &[1, 0])])
}

/// Bars `[0,3] [1,3]`.
pub fn swap_w() -> PersistenceModule {
    module(0, vec![1, 2, 2, 2], vec![ints(2, 1, &[1, 0]), id(2), id(2)])
}

fn swap_morphism(block: Matrix) -> LadderModule {
    let cod = swap_w().shift(1);
    let comps = vec![
        block.clone(),
        block.clone(),
        block,
        Matrix::zeros(q(), 0, 1),
    ];
    LadderModule::new(swap_v(), cod, 0, comps).expect("fixture morphism is well formed")
}

/// Identity components `V -> W(1)`.
pub fn swap_phi() -> LadderModule {
    swap_morphism(id(2))
}

/// Swap components `V -> W(1)`; same image barcode as [`swap_phi`].
pub fn swap_psi() -> LadderModule {
    swap_morphism(ints(2, 2, &[0, 1, 1, 0]))
}

/// Barcode with nestedness one.
pub fn nested_barcode() -> Barcode {
    [(0, 8), (1, 5), (1, 8), (3, 5)]
        .iter()
        .map(|&(a, b)| Interval::of(a, b))
        .collect()
}
