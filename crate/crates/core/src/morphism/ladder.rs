use crate::algebra::{mat_mul, Field, Matrix};
use crate::persistence::PersistenceModule;

use super::MorphismError;

/// A morphism `Φ: V -> W` given by its components `Φ_t: V_t -> W_t`.
/// Components outside the stored window are zero.
#[derive(Clone, Debug)]
pub struct LadderModule {
    dom: PersistenceModule,
    cod: PersistenceModule,
    start: i64,
    comps: Vec<Matrix>,
}

impl LadderModule {
    /// Checks component shapes. Commutativity is checked by
    /// [`validate_ladder`].
    pub fn new(
        dom: PersistenceModule,
        cod: PersistenceModule,
        start: i64,
        comps: Vec<Matrix>,
    ) -> Result<LadderModule, MorphismError> {
        if dom.field() != cod.field() {
            return Err(MorphismError::FieldMismatch);
        }
        for (k, c) in comps.iter().enumerate() {
            let t = start + k as i64;
            let expected = (cod.dim(t), dom.dim(t));
            if c.field() != dom.field() {
                return Err(MorphismError::FieldMismatch);
            }
            if c.shape() != expected {
                return Err(MorphismError::ComponentShape {
                    index: t,
                    expected,
                    found: c.shape(),
                });
            }
        }
        Ok(LadderModule {
            dom,
            cod,
            start,
            comps,
        })
    }

    /// Builds the components over the joint support of both modules.
    pub fn from_fn(
        dom: PersistenceModule,
        cod: PersistenceModule,
        f: impl FnMut(i64) -> Matrix,
    ) -> Result<LadderModule, MorphismError> {
        let (lo, hi) = joint_window(&dom, &cod);
        let comps = (lo..=hi).map(f).collect();
        LadderModule::new(dom, cod, lo, comps)
    }

    pub fn zero(dom: PersistenceModule, cod: PersistenceModule) -> LadderModule {
        let field = dom.field();
        LadderModule::from_fn(dom.clone(), cod.clone(), |t| {
            Matrix::zeros(field, cod.dim(t), dom.dim(t))
        })
        .expect("zero components have the right shape")
    }

    pub fn identity(module: PersistenceModule) -> LadderModule {
        let field = module.field();
        let m = module.clone();
        LadderModule::from_fn(module.clone(), module, |t| {
            Matrix::identity(field, m.dim(t))
        })
        .expect("identity components have the right shape")
    }

    /// The inner morphism `[k]: V -> V(k)` with components `v_{t,t+k}`.
    pub fn inner_morphism(module: &PersistenceModule, k: i64) -> LadderModule {
        assert!(k >= 0, "inner morphisms go upwards");
        let shifted = module.shift(k);
        LadderModule::from_fn(module.clone(), shifted, |t| module.inner(t, t + k))
            .expect("inner morphism components have the right shape")
    }

    pub fn field(&self) -> Field {
        self.dom.field()
    }

    pub fn dom(&self) -> &PersistenceModule {
        &self.dom
    }

    pub fn cod(&self) -> &PersistenceModule {
        &self.cod
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn comp(&self, t: i64) -> Matrix {
        let k = t - self.start;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Matrix::zeros(self.field(), self.cod.dim(t), self.dom.dim(t))
        }
    }

    /// Index window covering both modules.
    pub fn window(&self) -> (i64, i64) {
        joint_window(&self.dom, &self.cod)
    }

    /// `Φ(δ): V(δ) -> W(δ)`.
    pub fn shift(&self, delta: i64) -> LadderModule {
        LadderModule {
            dom: self.dom.shift(delta),
            cod: self.cod.shift(delta),
            start: self.start - delta,
            comps: self.comps.clone(),
        }
    }

    /// Same morphism with a replaced but equal codomain or domain
    /// description, e.g. after re-padding.
    pub fn with_modules(
        &self,
        dom: PersistenceModule,
        cod: PersistenceModule,
    ) -> Result<LadderModule, MorphismError> {
        if dom != self.dom || cod != self.cod {
            return Err(MorphismError::ModuleMismatch(
                "replacement modules differ".into(),
            ));
        }
        LadderModule::from_fn(dom, cod, |t| self.comp(t))
    }

    /// Componentwise composition `self ∘ inner`.
    pub fn compose(&self, inner: &LadderModule) -> Result<LadderModule, MorphismError> {
        if inner.cod != self.dom {
            return Err(MorphismError::ModuleMismatch(
                "inner codomain is not outer domain".into(),
            ));
        }
        let mut err = None;
        let out = LadderModule::from_fn(inner.dom.clone(), self.cod.clone(), |t| {
            mat_mul(&self.comp(t), &inner.comp(t)).unwrap_or_else(|e| {
                err = Some(e);
                Matrix::zeros(self.field(), self.cod.dim(t), inner.dom.dim(t))
            })
        });
        let out = out?;
        match err {
            Some(e) => Err(e.into()),
            None => Ok(out),
        }
    }

    /// Sum of two parallel morphisms.
    pub fn add(&self, other: &LadderModule) -> Result<LadderModule, MorphismError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(MorphismError::ModuleMismatch(
                "summands are not parallel".into(),
            ));
        }
        LadderModule::from_fn(self.dom.clone(), self.cod.clone(), |t| {
            self.comp(t)
                .add(&other.comp(t))
                .expect("parallel components share shapes")
        })
    }
}

impl PartialEq for LadderModule {
    fn eq(&self, other: &Self) -> bool {
        if self.dom != other.dom || self.cod != other.cod {
            return false;
        }
        let (lo, hi) = self.window();
        let (lo2, hi2) = other.window();
        (lo.min(lo2)..=hi.max(hi2)).all(|t| self.comp(t) == other.comp(t))
    }
}

impl Eq for LadderModule {}

fn joint_window(dom: &PersistenceModule, cod: &PersistenceModule) -> (i64, i64) {
    match (dom.support(), cod.support()) {
        (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => (0, -1),
    }
}

/// Checks `Φ_{t+1} A^V_t = A^W_t Φ_t` for every square and reports the
/// first one that fails.
pub fn validate_ladder(m: &LadderModule) -> Result<(), MorphismError> {
    match failing_squares(m)?.first() {
        Some(&t) => Err(MorphismError::SquareFails { from: t }),
        None => Ok(()),
    }
}

/// Lower indices `t` of every square `t -> t+1` that does not commute.
pub fn failing_squares(m: &LadderModule) -> Result<Vec<i64>, MorphismError> {
    let (lo, hi) = m.window();
    let mut bad = Vec::new();
    for t in lo - 1..=hi {
        let left = mat_mul(&m.comp(t + 1), &m.dom.map(t))?;
        let right = mat_mul(&m.cod.map(t), &m.comp(t))?;
        if left != right {
            bad.push(t);
        }
    }
    Ok(bad)
}
