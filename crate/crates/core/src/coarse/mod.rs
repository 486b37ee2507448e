//! q-splittings of modules and the coarse decompositions they induce on
//! δ-invertible morphisms.

use std::fmt;

use thiserror::Error;

use crate::algebra::Matrix;
use crate::ladder::{
    check_nestedness_precondition, decompose, DecomposeError, LadderDecomposition, NestednessCheck,
};
use crate::matching::{induced_matching, PartialMatching};
use crate::morphism::{
    check_delta_invertible, InterleavingCertificate, LadderModule, MorphismError,
};
use crate::persistence::{reduce_to_barcode_basis, BarGenerator, Barcode, PersistenceModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarseError {
    #[error("threshold q = {0} must be non-negative")]
    NegativeQ(i64),
    #[error("threshold q = {0} is odd; refine the grid first")]
    OddQ(i64),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// `V = V_{≥q} ⊕ V_{<q}` with the projections and inclusions of both parts.
#[derive(Clone, Debug)]
pub struct QSplitting {
    pub q: i64,
    pub module: PersistenceModule,
    pub long: PersistenceModule,
    pub short: PersistenceModule,
    pub pr_long: LadderModule,
    pub pr_short: LadderModule,
    pub inc_long: LadderModule,
    pub inc_short: LadderModule,
}

/// Splits along a barcode basis: generators of length at least `q` span
/// the long part. Both parts are stored in barcode coordinates.
pub fn q_split(m: &PersistenceModule, q: i64) -> Result<QSplitting, CoarseError> {
    if q < 0 {
        return Err(CoarseError::NegativeQ(q));
    }
    let bb = reduce_to_barcode_basis(m);
    let (long_gens, short_gens): (Vec<&BarGenerator>, Vec<&BarGenerator>) =
        bb.generators().iter().partition(|g| g.bar.length() >= q);
    let field = m.field();
    let assemble = |gens: &[&BarGenerator]| {
        let parts: Vec<PersistenceModule> = gens
            .iter()
            .map(|g| PersistenceModule::interval_module(field, g.bar))
            .collect();
        PersistenceModule::direct_sum(field, &parts)
    };
    let long = assemble(&long_gens);
    let short = assemble(&short_gens);
    let alive = |gens: &[&BarGenerator], t: i64| -> Vec<usize> {
        gens.iter().filter_map(|g| g.position(t)).collect()
    };
    let inclusion = |part: &PersistenceModule, gens: &[&BarGenerator]| {
        LadderModule::from_fn(part.clone(), m.clone(), |t| {
            let p = bb.change().basis(t);
            p.select(&(0..p.rows()).collect::<Vec<_>>(), &alive(gens, t))
        })
    };
    let projection = |part: &PersistenceModule, gens: &[&BarGenerator]| {
        LadderModule::from_fn(m.clone(), part.clone(), |t| {
            let g = bb.change().g(t);
            g.select(&alive(gens, t), &(0..g.cols()).collect::<Vec<_>>())
        })
    };
    Ok(QSplitting {
        q,
        module: m.clone(),
        pr_long: projection(&long, &long_gens)?,
        pr_short: projection(&short, &short_gens)?,
        inc_long: inclusion(&long, &long_gens)?,
        inc_short: inclusion(&short, &short_gens)?,
        long,
        short,
    })
}

impl QSplitting {
    /// Rebuilds the identity of `V` as `i_{≥q} ∘ pr_{≥q} + i_{<q} ∘ pr_{<q}`.
    pub fn reassembled_identity(&self) -> Result<LadderModule, MorphismError> {
        self.inc_long
            .compose(&self.pr_long)?
            .add(&self.inc_short.compose(&self.pr_short)?)
    }
}

/// `φ_{≥q} = [q/2] ∘ pr_{≥q}: V -> V_{≥q}(q/2)` and
/// `φ̃_{≥q} = i_{≥q}(q/2) ∘ [q/2]: V_{≥q} -> V(q/2)`, certified as a
/// q/2-interleaving.
pub fn coarse_interleaving(
    s: &QSplitting,
) -> Result<(LadderModule, LadderModule, InterleavingCertificate), CoarseError> {
    let half = half_of(s.q)?;
    let phi = LadderModule::inner_morphism(&s.long, half).compose(&s.pr_long)?;
    let phi_tilde = s
        .inc_long
        .shift(half)
        .compose(&LadderModule::inner_morphism(&s.long, half))?;
    let cert = crate::morphism::check_interleaving(&phi, &phi_tilde, half)?;
    Ok((phi, phi_tilde, cert))
}

/// `pr_{≥q}` with its q/2-inverse `i_{≥q}(q) ∘ [q]`.
pub fn projection_inverse(s: &QSplitting) -> Result<LadderModule, CoarseError> {
    half_of(s.q)?;
    Ok(s.inc_long
        .shift(s.q)
        .compose(&LadderModule::inner_morphism(&s.long, s.q))?)
}

fn half_of(q: i64) -> Result<i64, CoarseError> {
    if q < 0 {
        Err(CoarseError::NegativeQ(q))
    } else if q % 2 != 0 {
        Err(CoarseError::OddQ(q))
    } else {
        Ok(q / 2)
    }
}

/// Which side of `Φ: V -> W` is cut down to its long bars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CoarseVariant {
    /// `pr^W_{≥q} ∘ Φ: V -> W_{≥q}`.
    Target,
    /// `Φ ∘ i^V_{≥q}: V_{≥q} -> W`.
    Source,
    /// `pr^W_{≥q} ∘ Φ ∘ i^V_{≥q}: V_{≥q} -> W_{≥q}`.
    #[default]
    Both,
}

impl fmt::Display for CoarseVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoarseVariant::Target => "target",
            CoarseVariant::Source => "source",
            CoarseVariant::Both => "both",
        })
    }
}

impl std::str::FromStr for CoarseVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "target" => Ok(CoarseVariant::Target),
            "source" => Ok(CoarseVariant::Source),
            "both" => Ok(CoarseVariant::Both),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

/// A (δ + q/2)-invertible morphism built from a δ-invertible pair.
#[derive(Clone, Debug)]
pub struct InducedMorphism {
    pub variant: CoarseVariant,
    pub q: i64,
    /// `δ + q/2`.
    pub delta: i64,
    pub phi: LadderModule,
    pub psi: LadderModule,
    /// Bars of the domain dropped by the construction.
    pub dropped_dom: Barcode,
    /// Bars of the codomain dropped by the construction.
    pub dropped_cod: Barcode,
}

/// For `Φ: V -> W` with δ-inverse `Ψ: W -> V(2δ)`, builds the variant's
/// morphism and its (δ + q/2)-inverse, then certifies the pair.
pub fn induce_coarse_morphism(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
    q: i64,
    variant: CoarseVariant,
) -> Result<(InducedMorphism, InterleavingCertificate), CoarseError> {
    let half = half_of(q)?;
    check_delta_invertible(phi, psi, delta)?;
    let two = 2 * delta;
    let cut_cod = variant != CoarseVariant::Source && q > 0;
    let cut_dom = variant != CoarseVariant::Target && q > 0;
    let (mut f, mut g) = (phi.clone(), psi.clone());
    let (mut dropped_dom, mut dropped_cod) = (Barcode::new(), Barcode::new());
    if cut_cod {
        // Ψ(q) ∘ i^W(q) ∘ [q]
        let sw = q_split(phi.cod(), q)?;
        dropped_cod = reduce_to_barcode_basis(&sw.short).barcode().clone();
        f = sw.pr_long.compose(&f)?;
        g = g.shift(q).compose(&projection_inverse(&sw)?)?;
    } else {
        // [q](2δ) ∘ Ψ
        g = LadderModule::inner_morphism(g.cod(), q).compose(&g)?;
    }
    if cut_dom {
        let sv = q_split(phi.dom(), q)?;
        dropped_dom = reduce_to_barcode_basis(&sv.short).barcode().clone();
        f = f.compose(&sv.inc_long)?;
        g = sv.pr_long.shift(two + q).compose(&g)?;
    }
    let cert = check_delta_invertible(&f, &g, delta + half)?;
    let induced = InducedMorphism {
        variant,
        q,
        delta: delta + half,
        phi: f,
        psi: g,
        dropped_dom,
        dropped_cod,
    };
    Ok((induced, cert))
}

/// Outcome of decomposing an induced coarse morphism.
#[derive(Clone, Debug)]
pub struct CoarseDecomposition {
    pub induced: InducedMorphism,
    /// Nestedness of the induced morphism's modules against `2(δ + q/2)`.
    pub precondition: NestednessCheck,
    pub result: Result<LadderDecomposition, DecomposeError>,
}

impl CoarseDecomposition {
    /// Matching between the full barcodes of `V` and `W` (codomain bars
    /// moved back by `δ + q/2`); dropped bars stay unmatched.
    pub fn matching(&self) -> Option<PartialMatching> {
        let d = self.result.as_ref().ok()?;
        let mut m = induced_matching(d, self.induced.delta);
        for (bar, k) in self.induced.dropped_dom.iter() {
            m.unmatched_source.insert(bar, k);
        }
        for (bar, k) in self.induced.dropped_cod.iter() {
            m.unmatched_target.insert(bar.shift(-self.induced.delta), k);
        }
        Some(m)
    }
}

/// Builds the variant's morphism and decomposes it. A failing
/// precondition is reported, not raised.
pub fn coarse_decompose(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
    q: i64,
    variant: CoarseVariant,
) -> Result<CoarseDecomposition, CoarseError> {
    let (induced, _) = induce_coarse_morphism(phi, psi, delta, q, variant)?;
    let precondition = check_nestedness_precondition(&induced.phi, induced.delta);
    let result = decompose(&induced.phi);
    Ok(CoarseDecomposition {
        induced,
        precondition,
        result,
    })
}

/// Doubles the grid: `V'_{2t} = V'_{2t+1} = V_t`, with identities from even
/// to odd indices. Shifts by `k` become shifts by `2k`, and a bar of
/// length `l` becomes one of length `2l + 1`.
pub fn refine_module(m: &PersistenceModule) -> PersistenceModule {
    let field = m.field();
    let Some((lo, hi)) = m.support() else {
        return PersistenceModule::zero(field);
    };
    let dims = (2 * lo..=2 * hi + 1)
        .map(|s| m.dim(s.div_euclid(2)))
        .collect();
    let maps = (2 * lo..2 * hi + 1)
        .map(|s| {
            let t = s.div_euclid(2);
            if s % 2 == 0 {
                Matrix::identity(field, m.dim(t))
            } else {
                m.map(t)
            }
        })
        .collect();
    PersistenceModule::new(field, 2 * lo, dims, maps).expect("refined maps have consistent shapes")
}

/// Refines a morphism together with both modules: `Φ'_{2t} = Φ'_{2t+1} = Φ_t`.
pub fn refine_morphism(phi: &LadderModule) -> LadderModule {
    LadderModule::from_fn(refine_module(phi.dom()), refine_module(phi.cod()), |s| {
        phi.comp(s.div_euclid(2))
    })
    .expect("refined components have the right shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_phi, running_psi, running_v};
    use crate::morphism::{interleaving_to_invertible, validate_ladder};
    use crate::persistence::Interval;

    #[test]
    fn running_example_split() {
        let s = q_split(&running_v(), 1).unwrap();
        let long = reduce_to_barcode_basis(&s.long).barcode().to_string();
        let short = reduce_to_barcode_basis(&s.short).barcode().to_string();
        assert_eq!(long, "[0,4] [1,7]");
        assert_eq!(short, "[4,4]");
        for m in [&s.pr_long, &s.pr_short, &s.inc_long, &s.inc_short] {
            validate_ladder(m).unwrap();
        }
        assert_eq!(
            s.reassembled_identity().unwrap(),
            LadderModule::identity(running_v())
        );
        assert_eq!(
            s.pr_long.compose(&s.inc_long).unwrap(),
            LadderModule::identity(s.long.clone())
        );
        assert!(s
            .pr_long
            .compose(&s.inc_short)
            .unwrap()
            .comps()
            .iter()
            .all(Matrix::is_zero));
        let s0 = q_split(&running_v(), 0).unwrap();
        assert!(s0.short.support().is_none());
    }

    #[test]
    fn splitting_interleaving_and_odd_q() {
        let s = q_split(&running_v(), 2).unwrap();
        let (_, _, cert) = coarse_interleaving(&s).unwrap();
        assert_eq!(cert.delta, 1);
        let odd = q_split(&running_v(), 1).unwrap();
        assert_eq!(coarse_interleaving(&odd).unwrap_err(), CoarseError::OddQ(1));
        let refined = refine_module(&running_v());
        let bars = reduce_to_barcode_basis(&refined).barcode().clone();
        assert_eq!(bars.multiplicity(Interval::of(0, 9)), 1);
        assert_eq!(bars.multiplicity(Interval::of(8, 9)), 1);
        let sr = q_split(&refined, 2).unwrap();
        assert_eq!(reduce_to_barcode_basis(&sr.long).barcode().len(), 2);
    }

    #[test]
    fn coarse_variants_certify() {
        let phi = running_phi();
        let psi = interleaving_to_invertible(&running_psi(), 1);
        for variant in [
            CoarseVariant::Target,
            CoarseVariant::Source,
            CoarseVariant::Both,
        ] {
            let (m, cert) = induce_coarse_morphism(&phi, &psi, 1, 2, variant).unwrap();
            assert_eq!(m.delta, 2);
            assert_eq!(cert.delta, 2);
        }
        let c = coarse_decompose(&phi, &psi, 1, 0, CoarseVariant::Both).unwrap();
        assert_eq!(
            c.result.unwrap().to_string(),
            decompose(&phi).unwrap().to_string()
        );
        let r = refine_morphism(&phi);
        validate_ladder(&r).unwrap();
        check_delta_invertible(&r, &refine_morphism(&psi), 2).unwrap();
    }
}
