use std::collections::HashMap;

use crate::algebra::{is_barcode_form, mat_mul, Field, Matrix, Scalar};

use super::{Barcode, Interval, PersistenceError, PersistenceModule};

/// One copy of a bar together with the position of its basis vector at
/// every index of the bar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarGenerator {
    pub bar: Interval,
    /// Distinguishes copies of the same bar; ordered by birth position.
    pub slot: usize,
    /// `positions[k]` is the basis position at index `bar.birth() + k`.
    pub positions: Vec<usize>,
}

impl BarGenerator {
    pub fn position(&self, t: i64) -> Option<usize> {
        self.bar
            .contains(t)
            .then(|| self.positions[(t - self.bar.birth()) as usize])
    }
}

/// Pointwise bases `P_t` (columns are the new basis vectors written in the
/// original coordinates). The group element of the action is `g_t = P_t^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    field: Field,
    start: i64,
    basis: Vec<Matrix>,
}

impl BasisChange {
    pub fn new(field: Field, start: i64, basis: Vec<Matrix>) -> BasisChange {
        BasisChange {
            field,
            start,
            basis,
        }
    }

    pub fn identity(module: &PersistenceModule) -> BasisChange {
        let basis = module
            .dims()
            .iter()
            .map(|&n| Matrix::identity(module.field(), n))
            .collect();
        BasisChange {
            field: module.field(),
            start: module.start(),
            basis,
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `P_t`; the empty matrix outside the stored range.
    pub fn basis(&self, t: i64) -> Matrix {
        match self.index(t) {
            Some(k) => self.basis[k].clone(),
            None => Matrix::zeros(self.field, 0, 0),
        }
    }

    /// `g_t = P_t^{-1}`.
    pub fn g(&self, t: i64) -> Matrix {
        self.basis(t)
            .inverse()
            .expect("basis matrices are invertible")
    }

    pub(crate) fn basis_mut(&mut self, t: i64) -> &mut Matrix {
        let k = self.index(t).expect("index inside basis range");
        &mut self.basis[k]
    }

    fn index(&self, t: i64) -> Option<usize> {
        let k = t - self.start;
        (k >= 0 && (k as usize) < self.basis.len()).then_some(k as usize)
    }
}

/// A basis of a module in which every structure map is in barcode form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarcodeBasis {
    module: PersistenceModule,
    change: BasisChange,
    generators: Vec<BarGenerator>,
    barcode: Barcode,
}

impl BarcodeBasis {
    /// Assembles and validates a barcode basis.
    pub fn from_parts(
        module: PersistenceModule,
        change: BasisChange,
        mut generators: Vec<BarGenerator>,
    ) -> Result<BarcodeBasis, PersistenceError> {
        generators.sort_by_key(|g| (g.bar, g.slot));
        let barcode = generators.iter().map(|g| g.bar).collect();
        let basis = BarcodeBasis {
            module,
            change,
            generators,
            barcode,
        };
        basis.check()?;
        Ok(basis)
    }

    pub fn module(&self) -> &PersistenceModule {
        &self.module
    }

    pub fn change(&self) -> &BasisChange {
        &self.change
    }

    /// Generators sorted by bar, then slot.
    pub fn generators(&self) -> &[BarGenerator] {
        &self.generators
    }

    pub fn barcode(&self) -> &Barcode {
        &self.barcode
    }

    pub fn field(&self) -> Field {
        self.module.field()
    }

    pub fn find(&self, bar: Interval, slot: usize) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g.bar == bar && g.slot == slot)
    }

    /// Generator vector `x_J(t)` in original coordinates.
    pub fn vector(&self, generator: usize, t: i64) -> Option<Vec<Scalar>> {
        let pos = self.generators[generator].position(t)?;
        Some(self.change.basis(t).column(pos))
    }

    /// Adds `coeff * x_source` to `x_target` on the indices where both live;
    /// the caller guarantees this keeps the structure maps unchanged.
    pub(crate) fn add_on_overlap(&mut self, target: usize, source: usize, coeff: &Scalar) {
        let (a, b) = (self.generators[target].bar, self.generators[source].bar);
        for t in a.birth().max(b.birth())..=a.death().min(b.death()) {
            let pt = self.generators[target].position(t).expect("target alive");
            let ps = self.generators[source].position(t).expect("source alive");
            self.change.basis_mut(t).add_col_multiple(pt, ps, coeff);
        }
    }

    pub(crate) fn scale_generator(&mut self, target: usize, s: &Scalar) {
        let bar = self.generators[target].bar;
        for t in bar.birth()..=bar.death() {
            let p = self.generators[target].position(t).expect("alive");
            self.change.basis_mut(t).scale_col(p, s);
        }
    }

    /// Coordinates of `v` (a vector in `V_t`) in the basis at `t`.
    pub fn coordinates(&self, t: i64, v: &Matrix) -> Matrix {
        mat_mul(&self.change.g(t), v).expect("vector matches dimension")
    }

    /// The structure maps written in this basis.
    pub fn reduced_module(&self) -> PersistenceModule {
        self.module
            .change_basis(|t| self.change.basis(t))
            .expect("basis matrices are invertible")
    }

    /// Checks invertibility, barcode form and the generator contract.
    pub fn check(&self) -> Result<(), PersistenceError> {
        let m = &self.module;
        let bad = |msg: String| Err(PersistenceError::NotBarcodeBasis(msg));
        if self.change.start != m.start() || self.change.len() != m.dims().len() {
            return bad("basis range differs from module range".into());
        }
        for t in m.start()..=m.end() {
            let p = self.change.basis(t);
            if p.shape() != (m.dim(t), m.dim(t)) || p.inverse().is_err() {
                return bad(format!("basis at {t} is not an invertible square matrix"));
            }
            let mut owned = vec![false; m.dim(t)];
            for g in &self.generators {
                if let Some(pos) = g.position(t) {
                    if pos >= owned.len() || std::mem::replace(&mut owned[pos], true) {
                        return bad(format!("position {pos} at {t} is not owned exactly once"));
                    }
                }
            }
            if owned.iter().any(|o| !o) {
                return bad(format!("a basis vector at {t} belongs to no generator"));
            }
        }
        if self
            .generators
            .iter()
            .any(|g| g.positions.len() as i64 != g.bar.length() + 1)
        {
            return bad("generator positions do not cover its bar".into());
        }
        let reduced = self.reduced_module();
        for t in m.start()..m.end() {
            let a = reduced.map(t);
            if is_barcode_form(&a).is_none() {
                return bad(format!("map {t}->{} is not in barcode form", t + 1));
            }
            for g in &self.generators {
                let Some(col) = g.position(t) else { continue };
                let expected = g.position(t + 1);
                for r in 0..a.rows() {
                    let want_one = expected == Some(r);
                    let v = a.get(r, col);
                    if (want_one && !v.is_one()) || (!want_one && !v.is_zero()) {
                        return bad(format!(
                            "generator {} slot {} breaks at {t}->{}",
                            g.bar,
                            g.slot,
                            t + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Computes a barcode basis by sweeping the indices upwards and applying the
/// elder rule: a generator whose image depends on older images dies, and the
/// dependence is subtracted from it along its whole history.
pub fn reduce_to_barcode_basis(module: &PersistenceModule) -> BarcodeBasis {
    let field = module.field();
    struct Chain {
        birth: i64,
        vectors: Vec<Vec<Scalar>>,
        positions: Vec<usize>,
    }
    let mut chains: Vec<Chain> = Vec::new();
    let mut finished: Vec<(usize, i64)> = Vec::new();
    let mut live: Vec<usize> = Vec::new();

    for t in module.start()..=module.end() {
        let n = module.dim(t);
        let mut survivors = Vec::new();
        let mut pivots = Pivots::default();
        if t > module.start() {
            let a = module.map(t - 1);
            let mut images: Vec<Vec<Scalar>> = live
                .iter()
                .map(|&c| {
                    apply(
                        &a,
                        chains[c].vectors.last().expect("live chain has a vector"),
                    )
                })
                .collect();
            for k in 0..live.len() {
                loop {
                    let Some(low) = lowest_nonzero(&images[k]) else {
                        finished.push((live[k], t - 1));
                        break;
                    };
                    match pivots.owner.get(&low) {
                        Some(&j) => {
                            let coeff = -(&(images[k][low].clone())
                                * &images[j][low].inv().expect("pivot"));
                            let (older, younger) = (live[j], live[k]);
                            axpy_in_place(&mut images, k, j, &coeff);
                            let offset = (chains[younger].birth - chains[older].birth) as usize;
                            for s in 0..chains[younger].vectors.len() {
                                let src = chains[older].vectors[s + offset].clone();
                                axpy(&mut chains[younger].vectors[s], &src, &coeff);
                            }
                        }
                        None => {
                            pivots.owner.insert(low, k);
                            survivors.push(k);
                            break;
                        }
                    }
                }
            }
            let mut next_live = Vec::new();
            for &k in &survivors {
                let c = live[k];
                chains[c].vectors.push(images[k].clone());
                chains[c].positions.push(next_live.len());
                next_live.push(c);
            }
            live = next_live;
        }
        let mut span = Pivots::default();
        let mut reduced: Vec<Vec<Scalar>> = Vec::new();
        for &c in &live {
            span.absorb(chains[c].vectors.last().unwrap().clone(), &mut reduced);
        }
        for i in 0..n {
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            if span.absorb(e.clone(), &mut reduced) {
                chains.push(Chain {
                    birth: t,
                    vectors: vec![e],
                    positions: vec![live.len()],
                });
                live.push(chains.len() - 1);
            }
        }
    }
    for &c in &live {
        finished.push((c, module.end()));
    }

    let mut basis: Vec<Matrix> = module
        .dims()
        .iter()
        .map(|&n| Matrix::zeros(field, n, n))
        .collect();
    let mut generators = Vec::new();
    let mut by_birth: Vec<(Interval, usize, usize)> = Vec::new();
    for &(c, death) in &finished {
        let chain = &chains[c];
        let len = (death - chain.birth + 1) as usize;
        for s in 0..len {
            let idx = (chain.birth - module.start()) as usize + s;
            basis[idx].set_column(chain.positions[s], &chain.vectors[s]);
        }
        by_birth.push((Interval::of(chain.birth, death), chain.positions[0], c));
    }
    by_birth.sort();
    let mut slot_of: HashMap<Interval, usize> = HashMap::new();
    for (bar, _, c) in by_birth {
        let slot = slot_of.entry(bar).or_insert(0);
        let len = (bar.length() + 1) as usize;
        generators.push(BarGenerator {
            bar,
            slot: *slot,
            positions: chains[c].positions[..len].to_vec(),
        });
        *slot += 1;
    }
    let change = BasisChange::new(field, module.start(), basis);
    BarcodeBasis::from_parts(module.clone(), change, generators)
        .expect("elder-rule sweep yields a barcode basis")
}

#[derive(Default)]
struct Pivots {
    owner: HashMap<usize, usize>,
}

impl Pivots {
    /// Reduces `v` against the stored vectors; keeps it if independent.
    fn absorb(&mut self, mut v: Vec<Scalar>, store: &mut Vec<Vec<Scalar>>) -> bool {
        while let Some(low) = lowest_nonzero(&v) {
            match self.owner.get(&low) {
                Some(&j) => {
                    let coeff = -(&v[low] * &store[j][low].inv().expect("pivot"));
                    axpy(&mut v, &store[j], &coeff);
                }
                None => {
                    self.owner.insert(low, store.len());
                    store.push(v);
                    return true;
                }
            }
        }
        false
    }
}

fn lowest_nonzero(v: &[Scalar]) -> Option<usize> {
    v.iter().rposition(|x| !x.is_zero())
}

fn apply(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..a.rows())
        .map(|r| {
            let mut acc = a.field().zero();
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc = &acc + &(a.get(r, c) * x);
                }
            }
            acc
        })
        .collect()
}

fn axpy(y: &mut [Scalar], x: &[Scalar], coeff: &Scalar) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(coeff * xi);
        }
    }
}

fn axpy_in_place(vs: &mut [Vec<Scalar>], target: usize, source: usize, coeff: &Scalar) {
    let src = vs[source].clone();
    axpy(&mut vs[target], &src, coeff);
}
