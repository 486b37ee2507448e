use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::morphism::{
    from_single_matrix, to_single_matrix, validate_ladder, LadderModule, MorphismError,
    MorphismMatrix,
};
use crate::persistence::{
    nestedness, reduce_to_barcode_basis, Barcode, BarcodeBasis, Interval, Nestedness,
};

use super::{reduce_with, AdmissibleOp, OpKind, ReductionFailure, ReductionStrategy};

/// Elementary summand of a ladder decomposition, by generator index into
/// the decomposition's bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    /// `R`: domain generator mapped onto a codomain generator.
    Pair { dom: usize, cod: usize },
    /// `I+`: domain generator mapped to zero.
    Plus { dom: usize },
    /// `I-`: codomain generator not hit.
    Minus { cod: usize },
}

/// A morphism written as a direct sum of elementary ladder modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderDecomposition {
    pub summands: Vec<Summand>,
    /// Domain barcode basis in which the morphism is in matching form.
    pub dom_basis: BarcodeBasis,
    pub cod_basis: BarcodeBasis,
    /// Coefficients in the final bases.
    pub matrix: MorphismMatrix,
    /// Operations applied to the coefficients of the initial bases.
    pub ops: Vec<AdmissibleOp>,
}

impl LadderDecomposition {
    /// Multiplicities `r` keyed by `(domain bar, codomain bar)`.
    pub fn pairs(&self) -> BTreeMap<(Interval, Interval), usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            if let Summand::Pair { dom, cod } = *s {
                *out.entry((self.dom_bar(dom), self.cod_bar(cod)))
                    .or_insert(0) += 1;
            }
        }
        out
    }

    /// Domain bars mapped to zero.
    pub fn plus_bars(&self) -> Barcode {
        self.summands
            .iter()
            .filter_map(|s| match *s {
                Summand::Plus { dom } => Some(self.dom_bar(dom)),
                _ => None,
            })
            .collect()
    }

    /// Codomain bars not hit.
    pub fn minus_bars(&self) -> Barcode {
        self.summands
            .iter()
            .filter_map(|s| match *s {
                Summand::Minus { cod } => Some(self.cod_bar(cod)),
                _ => None,
            })
            .collect()
    }

    pub fn dom_bar(&self, g: usize) -> Interval {
        self.dom_basis.generators()[g].bar
    }

    pub fn cod_bar(&self, g: usize) -> Interval {
        self.cod_basis.generators()[g].bar
    }

    pub fn rank(&self) -> usize {
        self.summands
            .iter()
            .filter(|s| matches!(s, Summand::Pair { .. }))
            .count()
    }
}

impl fmt::Display for LadderDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for ((d, c), m) in self.pairs() {
            parts.push(with_mult(format!("R {d}->{c}"), m));
        }
        for (b, m) in self.plus_bars().iter() {
            parts.push(with_mult(format!("I+ {b}"), m));
        }
        for (b, m) in self.minus_bars().iter() {
            parts.push(with_mult(format!("I- {b}"), m));
        }
        write!(f, "{}", parts.join(", "))
    }
}

fn with_mult(s: String, m: usize) -> String {
    if m > 1 {
        format!("{s} x{m}")
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Invalid(#[from] MorphismError),
    #[error("reduction failed: {0}")]
    Reduction(#[from] ReductionFailure),
}

/// Decomposes with freshly computed barcode bases and the default strategy.
pub fn decompose(m: &LadderModule) -> Result<LadderDecomposition, DecomposeError> {
    decompose_with(m, &ReductionStrategy::default())
}

pub fn decompose_with(
    m: &LadderModule,
    strategy: &ReductionStrategy,
) -> Result<LadderDecomposition, DecomposeError> {
    validate_ladder(m)?;
    let dom = reduce_to_barcode_basis(m.dom());
    let cod = reduce_to_barcode_basis(m.cod());
    decompose_in_bases(m, dom, cod, strategy)
}

/// Decomposes starting from given barcode bases.
pub fn decompose_in_bases(
    m: &LadderModule,
    mut dom: BarcodeBasis,
    mut cod: BarcodeBasis,
    strategy: &ReductionStrategy,
) -> Result<LadderDecomposition, DecomposeError> {
    let mm = to_single_matrix(m, &dom, &cod)?;
    let (matrix, ops) = reduce_with(&mm, strategy)?;
    for op in &ops {
        apply_to_bases(op, &mut dom, &mut cod);
    }
    let mut summands = Vec::new();
    let mut hit = vec![false; matrix.rows()];
    for c in 0..matrix.cols() {
        match (0..matrix.rows()).find(|&r| !matrix.get(r, c).is_zero()) {
            Some(r) => {
                hit[r] = true;
                summands.push(Summand::Pair { dom: c, cod: r });
            }
            None => summands.push(Summand::Plus { dom: c }),
        }
    }
    summands.extend(
        hit.iter()
            .enumerate()
            .filter(|(_, h)| !**h)
            .map(|(r, _)| Summand::Minus { cod: r }),
    );
    Ok(LadderDecomposition {
        summands,
        dom_basis: dom,
        cod_basis: cod,
        matrix,
        ops,
    })
}

/// Mirrors a coefficient operation as a change of generators.
pub fn apply_to_bases(op: &AdmissibleOp, dom: &mut BarcodeBasis, cod: &mut BarcodeBasis) {
    match op.kind {
        OpKind::ScaleColumn => dom.scale_generator(op.target, &op.coeff),
        OpKind::ScaleRow => cod.scale_generator(op.target, &op.coeff.inv().expect("nonzero scale")),
        OpKind::ColumnSameBar | OpKind::ColumnOverlap => {
            dom.add_on_overlap(op.target, op.source, &op.coeff)
        }
        OpKind::RowSameBar | OpKind::RowOverlap => {
            cod.add_on_overlap(op.source, op.target, &-&op.coeff)
        }
    }
}

/// Why a decomposition does not reproduce its morphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionMismatch {
    #[error("bases do not belong to the morphism's modules")]
    Bases,
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("summands do not use every generator exactly once: {0}")]
    Coverage(String),
    #[error("summand maps {dom} to {cod}, which is not overlapped by it")]
    Shape { dom: Interval, cod: Interval },
    #[error("component {0} differs from the morphism")]
    Component(i64),
}

/// Rebuilds the direct sum of elementary modules in the recorded bases and
/// compares it with `m` component by component.
pub fn verify_decomposition(
    m: &LadderModule,
    d: &LadderDecomposition,
) -> Result<(), DecompositionMismatch> {
    if d.dom_basis.module() != m.dom() || d.cod_basis.module() != m.cod() {
        return Err(DecompositionMismatch::Bases);
    }
    d.dom_basis
        .check()
        .map_err(|e| DecompositionMismatch::InvalidBasis(e.to_string()))?;
    d.cod_basis
        .check()
        .map_err(|e| DecompositionMismatch::InvalidBasis(e.to_string()))?;
    let nd = d.dom_basis.generators().len();
    let nc = d.cod_basis.generators().len();
    let mut dom_used = vec![0usize; nd];
    let mut cod_used = vec![0usize; nc];
    let field = m.field();
    let mut n = crate::algebra::Matrix::zeros(field, nc, nd);
    for s in &d.summands {
        match *s {
            Summand::Pair { dom, cod } => {
                if dom >= nd || cod >= nc {
                    return Err(DecompositionMismatch::Coverage(
                        "generator index out of range".into(),
                    ));
                }
                let (jd, jc) = (d.dom_bar(dom), d.cod_bar(cod));
                if !jc.overlaps(jd) {
                    return Err(DecompositionMismatch::Shape { dom: jd, cod: jc });
                }
                dom_used[dom] += 1;
                cod_used[cod] += 1;
                n.set(cod, dom, field.one());
            }
            Summand::Plus { dom } if dom < nd => dom_used[dom] += 1,
            Summand::Minus { cod } if cod < nc => cod_used[cod] += 1,
            _ => {
                return Err(DecompositionMismatch::Coverage(
                    "generator index out of range".into(),
                ))
            }
        }
    }
    if let Some(g) = dom_used.iter().position(|&u| u != 1) {
        return Err(DecompositionMismatch::Coverage(format!(
            "domain generator {g} used {} times",
            dom_used[g]
        )));
    }
    if let Some(g) = cod_used.iter().position(|&u| u != 1) {
        return Err(DecompositionMismatch::Coverage(format!(
            "codomain generator {g} used {} times",
            cod_used[g]
        )));
    }
    let mm = MorphismMatrix::new(
        d.cod_basis.generators().to_vec(),
        d.dom_basis.generators().to_vec(),
        n,
    )
    .map_err(|e| DecompositionMismatch::Coverage(e.to_string()))?;
    let rebuilt = from_single_matrix(&mm, &d.dom_basis, &d.cod_basis)
        .map_err(|e| DecompositionMismatch::Coverage(e.to_string()))?;
    let (lo, hi) = m.window();
    for t in lo..=hi {
        if rebuilt.comp(t) != m.comp(t) {
            return Err(DecompositionMismatch::Component(t));
        }
    }
    Ok(())
}

/// Nestedness of both barcodes against `2δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NestednessCheck {
    pub delta: i64,
    pub dom: Nestedness,
    pub cod: Nestedness,
}

impl NestednessCheck {
    /// `2δ < min(Ξ(V), Ξ(W))`.
    pub fn holds(&self) -> bool {
        self.dom.min(self.cod).exceeds(2 * self.delta)
    }
}

/// Reports whether `2δ < min(Ξ(V), Ξ(W))` for the morphism's modules. A
/// failing check is a warning: decomposition may still succeed.
pub fn check_nestedness_precondition(phi: &LadderModule, delta: i64) -> NestednessCheck {
    let dom = reduce_to_barcode_basis(phi.dom());
    let cod = reduce_to_barcode_basis(phi.cod());
    NestednessCheck {
        delta,
        dom: nestedness(dom.barcode()),
        cod: nestedness(cod.barcode()),
    }
}
