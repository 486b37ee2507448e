use std::fmt;

use crate::algebra::mat_mul;

use super::{LadderModule, MorphismError};

/// Which triangle family of an interleaving failed or was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Triangle {
    /// `Ψ_t ∘ Φ_t = v_{t,t+2δ}`
    Domain,
    /// `Φ_{t+2δ} ∘ Ψ_t = w_{t,t+2δ}`
    Codomain,
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Triangle::Domain => write!(f, "psi_t * phi_t = v(t,t+2d)"),
            Triangle::Codomain => write!(f, "phi_(t+2d) * psi_t = w(t,t+2d)"),
        }
    }
}

/// How the checked pair was presented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// `Φ: V -> W`, `Ψ: W -> V(2δ)`.
    Invertible,
    /// `Φ: V -> W(δ)`, `Ψ: W -> V(δ)`.
    Interleaving,
}

/// Evidence that both triangle families commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingCertificate {
    pub delta: i64,
    pub kind: PairKind,
    /// `Ψ ∘ Φ`, equal to the inner morphism `[2δ]` of the domain.
    pub domain_composite: LadderModule,
    /// `Φ(2δ) ∘ Ψ`, equal to the inner morphism `[2δ]` of the codomain.
    pub codomain_composite: LadderModule,
}

/// Checks that `psi: W -> V(2δ)` is a δ-inverse of `phi: V -> W`.
pub fn check_delta_invertible(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
) -> Result<InterleavingCertificate, MorphismError> {
    if delta < 0 {
        return Err(MorphismError::NegativeDelta(delta));
    }
    let two = 2 * delta;
    if psi.dom() != phi.cod() {
        return Err(MorphismError::ModuleMismatch(
            "inverse domain is not the codomain".into(),
        ));
    }
    if *psi.cod() != phi.dom().shift(two) {
        return Err(MorphismError::ModuleMismatch(
            "inverse codomain is not the shifted domain".into(),
        ));
    }
    let v = phi.dom();
    let w = phi.cod();
    let (lo, hi) = phi.window();
    let (lo2, hi2) = psi.window();
    for t in lo.min(lo2) - two..=hi.max(hi2) {
        let back = mat_mul(&psi.comp(t), &phi.comp(t))?;
        if back != v.inner(t, t + two) {
            return Err(MorphismError::TriangleFails {
                triangle: Triangle::Domain,
                index: t,
            });
        }
        let forth = mat_mul(&phi.comp(t + two), &psi.comp(t))?;
        if forth != w.inner(t, t + two) {
            return Err(MorphismError::TriangleFails {
                triangle: Triangle::Codomain,
                index: t,
            });
        }
    }
    let domain_composite = psi.compose(phi)?;
    let codomain_composite = phi.shift(two).compose(psi)?;
    Ok(InterleavingCertificate {
        delta,
        kind: PairKind::Invertible,
        domain_composite,
        codomain_composite,
    })
}

/// Checks a δ-interleaving `phi: V -> W(δ)`, `psi: W -> V(δ)` by reading
/// `phi` as a morphism into `W' = W(δ)` with candidate inverse `psi(δ)`.
pub fn check_interleaving(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
) -> Result<InterleavingCertificate, MorphismError> {
    let cert = check_delta_invertible(phi, &interleaving_to_invertible(psi, delta), delta)?;
    Ok(InterleavingCertificate {
        kind: PairKind::Interleaving,
        ..cert
    })
}

/// `Ψ: W -> V(δ)` becomes the δ-inverse candidate `Ψ(δ): W(δ) -> V(2δ)`.
pub fn interleaving_to_invertible(psi: &LadderModule, delta: i64) -> LadderModule {
    psi.shift(delta)
}

/// `Ψ': W(δ) -> V(2δ)` becomes `Ψ'(-δ): W -> V(δ)`.
pub fn invertible_to_interleaving(psi: &LadderModule, delta: i64) -> LadderModule {
    psi.shift(-delta)
}

/// First failing index of each triangle family, `None` where the family
/// commutes everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    pub delta: i64,
    pub domain: Option<i64>,
    pub codomain: Option<i64>,
}

impl TriangleReport {
    pub fn holds(&self) -> bool {
        self.domain.is_none() && self.codomain.is_none()
    }
}

/// Like [`check_delta_invertible`] but checks both families to the end.
pub fn triangle_report(
    phi: &LadderModule,
    psi: &LadderModule,
    delta: i64,
) -> Result<TriangleReport, MorphismError> {
    if delta < 0 {
        return Err(MorphismError::NegativeDelta(delta));
    }
    let two = 2 * delta;
    if psi.dom() != phi.cod() || *psi.cod() != phi.dom().shift(two) {
        return Err(MorphismError::ModuleMismatch(
            "pair does not fit V -> W -> V(2δ)".into(),
        ));
    }
    let (lo, hi) = phi.window();
    let (lo2, hi2) = psi.window();
    let mut report = TriangleReport {
        delta,
        domain: None,
        codomain: None,
    };
    for t in lo.min(lo2) - two..=hi.max(hi2) {
        if report.domain.is_none()
            && mat_mul(&psi.comp(t), &phi.comp(t))? != phi.dom().inner(t, t + two)
        {
            report.domain = Some(t);
        }
        if report.codomain.is_none()
            && mat_mul(&phi.comp(t + two), &psi.comp(t))? != phi.cod().inner(t, t + two)
        {
            report.codomain = Some(t);
        }
    }
    Ok(report)
}
