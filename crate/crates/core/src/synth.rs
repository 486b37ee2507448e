//! Random instances for property tests and benchmarks: barcodes, modules in
//! disguised coordinates, valid morphisms and certified δ-invertible pairs.

use rand::Rng;

use crate::algebra::{mat_inverse, mat_mul, Field, Matrix, Scalar};
use crate::morphism::{check_delta_invertible, from_single_matrix, LadderModule, MorphismMatrix};
use crate::persistence::{
    nestedness, reduce_to_barcode_basis, BarGenerator, Barcode, Interval, PersistenceModule,
};

/// Size knobs shared by the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthConfig {
    /// Indices are drawn from `0..=horizon`.
    pub horizon: i64,
    pub max_bars: usize,
    /// Entries of random coefficients are drawn from `-max_coeff..=max_coeff`.
    pub max_coeff: i64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            horizon: 8,
            max_bars: 5,
            max_coeff: 3,
        }
    }
}

fn scalar(rng: &mut impl Rng, field: Field, cfg: &SynthConfig) -> Scalar {
    field.from_i64(rng.gen_range(-cfg.max_coeff..=cfg.max_coeff))
}

fn nonzero_scalar(rng: &mut impl Rng, field: Field, cfg: &SynthConfig) -> Scalar {
    loop {
        let s = scalar(rng, field, cfg);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_interval(rng: &mut impl Rng, cfg: &SynthConfig) -> Interval {
    let a = rng.gen_range(0..=cfg.horizon);
    let b = rng.gen_range(a..=cfg.horizon);
    Interval::of(a, b)
}

pub fn random_barcode(rng: &mut impl Rng, cfg: &SynthConfig) -> Barcode {
    let n = rng.gen_range(1..=cfg.max_bars);
    (0..n).map(|_| random_interval(rng, cfg)).collect()
}

/// Barcode without strictly nested pairs: candidates that would nest with
/// an accepted bar are skipped.
pub fn nest_free_barcode(rng: &mut impl Rng, cfg: &SynthConfig) -> Barcode {
    let n = rng.gen_range(1..=cfg.max_bars);
    let mut bars: Vec<Interval> = Vec::new();
    for _ in 0..4 * n {
        if bars.len() == n {
            break;
        }
        let c = random_interval(rng, cfg);
        if bars
            .iter()
            .all(|b| !c.strictly_nested_in(*b) && !b.strictly_nested_in(c))
        {
            bars.push(c);
        }
    }
    bars.into_iter().collect()
}

/// Direct sum of interval modules, in barcode order.
pub fn module_from_barcode(field: Field, barcode: &Barcode) -> PersistenceModule {
    let parts: Vec<PersistenceModule> = barcode
        .bars()
        .into_iter()
        .map(|b| PersistenceModule::interval_module(field, b))
        .collect();
    PersistenceModule::direct_sum(field, &parts)
}

/// Random invertible `n x n` matrix as a product of unit triangular factors
/// and a diagonal of nonzero scalars, conjugated by a random permutation.
pub fn random_invertible(rng: &mut impl Rng, field: Field, n: usize, cfg: &SynthConfig) -> Matrix {
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::identity(field, n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, scalar(rng, field, cfg));
            upper.set(j, i, scalar(rng, field, cfg));
        }
        upper.set(i, i, nonzero_scalar(rng, field, cfg));
    }
    let mut m = mat_mul(&lower, &upper).expect("square factors");
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        m.swap_rows(i, j);
    }
    m
}

/// Pointwise random bases, `P_t` for every index of the module.
pub fn random_bases(rng: &mut impl Rng, m: &PersistenceModule, cfg: &SynthConfig) -> Vec<Matrix> {
    m.dims()
        .iter()
        .map(|&n| random_invertible(rng, m.field(), n, cfg))
        .collect()
}

/// The module rewritten in the coordinates `P_t`, so that the new maps are
/// `P_{t+1}^{-1} A_t P_t`.
pub fn disguise_module(m: &PersistenceModule, bases: &[Matrix]) -> PersistenceModule {
    let start = m.start();
    m.change_basis(|t| bases[(t - start) as usize].clone())
        .expect("bases are invertible")
}

/// A module with the given barcode in random coordinates.
pub fn random_module_with_barcode(
    rng: &mut impl Rng,
    field: Field,
    barcode: &Barcode,
    cfg: &SynthConfig,
) -> PersistenceModule {
    let m = module_from_barcode(field, barcode);
    let bases = random_bases(rng, &m, cfg);
    disguise_module(&m, &bases)
}

pub fn random_module(rng: &mut impl Rng, field: Field, cfg: &SynthConfig) -> PersistenceModule {
    let barcode = random_barcode(rng, cfg);
    random_module_with_barcode(rng, field, &barcode, cfg)
}

/// Random valid morphism: random coefficients on every admissible entry
/// of the single matrix, rebuilt in the computed barcode bases.
pub fn random_morphism(
    rng: &mut impl Rng,
    dom: &PersistenceModule,
    cod: &PersistenceModule,
    cfg: &SynthConfig,
) -> LadderModule {
    let field = dom.field();
    let bd = reduce_to_barcode_basis(dom);
    let bc = reduce_to_barcode_basis(cod);
    let mut entries = Matrix::zeros(field, bc.generators().len(), bd.generators().len());
    for (r, k) in bc.generators().iter().enumerate() {
        for (c, j) in bd.generators().iter().enumerate() {
            if k.bar.overlaps(j.bar) {
                entries.set(r, c, scalar(rng, field, cfg));
            }
        }
    }
    let mm = MorphismMatrix::new(bc.generators().to_vec(), bd.generators().to_vec(), entries)
        .expect("entries respect the overlap order");
    from_single_matrix(&mm, &bd, &bc).expect("bases belong to the modules")
}

/// Random automorphism of a module: identity plus random coefficients on
/// pairs `K ⪯ J` with `K` strictly before `J` in (bar, slot) order. Returned
/// together with its inverse.
pub fn random_automorphism(
    rng: &mut impl Rng,
    m: &PersistenceModule,
    cfg: &SynthConfig,
) -> (LadderModule, LadderModule) {
    let field = m.field();
    let bb = reduce_to_barcode_basis(m);
    let gens = bb.generators();
    let key = |g: &BarGenerator| (g.bar, g.slot);
    let mut entries = Matrix::identity(field, gens.len());
    for (r, k) in gens.iter().enumerate() {
        for (c, j) in gens.iter().enumerate() {
            if key(k) < key(j) && k.bar.overlaps(j.bar) {
                entries.set(r, c, scalar(rng, field, cfg));
            }
        }
    }
    let mm = MorphismMatrix::new(gens.to_vec(), gens.to_vec(), entries)
        .expect("entries respect the overlap order");
    let alpha = from_single_matrix(&mm, &bb, &bb).expect("basis belongs to the module");
    let inverse = LadderModule::from_fn(m.clone(), m.clone(), |t| {
        mat_inverse(&alpha.comp(t)).expect("unipotent in bar order")
    })
    .expect("inverse components have the right shape");
    (alpha, inverse)
}

/// A certified δ-invertible pair `Φ: V -> W`, `Ψ: W -> V(2δ)`.
#[derive(Clone, Debug)]
pub struct InvertiblePair {
    pub delta: i64,
    pub phi: LadderModule,
    pub psi: LadderModule,
}

/// Endpoints `[c,d]` of a partner bar for `[a,b]`: `a - 2δ ≤ c ≤ a`,
/// `b - 2δ ≤ d ≤ b`, `c ≤ b - 2δ` and `a ≤ d`.
fn partner(rng: &mut impl Rng, bar: Interval, delta: i64) -> Option<Interval> {
    let (a, b) = (bar.birth(), bar.death());
    let c_hi = a.min(b - 2 * delta);
    let c = rng.gen_range(a - 2 * delta..=c_hi.max(a - 2 * delta));
    let d_lo = a.max(b - 2 * delta).max(c);
    if c > c_hi || d_lo > b {
        return None;
    }
    Some(Interval::of(c, rng.gen_range(d_lo..=b)))
}

/// Builds a δ-invertible pair over `V` with the given barcode: every bar of
/// length at least `2δ` is matched to a nearby partner in `W`, some short
/// bars are matched too, and `W` gets a few unmatched short bars. The pair
/// is then moved by random automorphisms of both sides and written in
/// random coordinates. Returns `None` when the barcodes violate
/// `2δ < min(Ξ(V), Ξ(W))` and `require_nestedness` is set.
pub fn invertible_pair(
    rng: &mut impl Rng,
    field: Field,
    v_bars: &Barcode,
    delta: i64,
    require_nestedness: bool,
    cfg: &SynthConfig,
) -> Option<InvertiblePair> {
    let mut pairs = Vec::new();
    let mut w_bars = Barcode::new();
    for bar in v_bars.bars() {
        let long = bar.length() >= 2 * delta;
        if long || rng.gen_bool(0.5) {
            if let Some(p) = partner(rng, bar, delta) {
                pairs.push((bar, p));
                w_bars.insert(p, 1);
                continue;
            }
        }
        if long {
            return None;
        }
    }
    if delta > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..=cfg.horizon);
            w_bars.insert(Interval::of(a, a + rng.gen_range(0..2 * delta)), 1);
        }
    }
    if require_nestedness
        && !(nestedness(v_bars).exceeds(2 * delta) && nestedness(&w_bars).exceeds(2 * delta))
    {
        return None;
    }
    let v0 = module_from_barcode(field, v_bars);
    let w0 = module_from_barcode(field, &w_bars);
    let (phi0, psi0) = matched_pair(field, &v0, &w0, &pairs, delta);
    let (alpha, alpha_inv) = random_automorphism(rng, &v0, cfg);
    let (beta, beta_inv) = random_automorphism(rng, &w0, cfg);
    let phi1 = beta.compose(&phi0.compose(&alpha).ok()?).ok()?;
    let psi1 = alpha_inv
        .shift(2 * delta)
        .compose(&psi0.compose(&beta_inv).ok()?)
        .ok()?;
    let pv = random_bases(rng, &v0, cfg);
    let pw = random_bases(rng, &w0, cfg);
    let v = disguise_module(&v0, &pv);
    let w = disguise_module(&w0, &pw);
    let v2 = v.shift(2 * delta);
    let phi = conjugate(&phi1, &v, &w, &pv, &pw);
    let psi = conjugate(&psi1, &w, &v2, &pw, &pv);
    check_delta_invertible(&phi, &psi, delta).ok()?;
    Some(InvertiblePair { delta, phi, psi })
}

/// `Φ_t ↦ Q_t^{-1} Φ_t P_t` where the bases are stored from each module's
/// own start index.
fn conjugate(
    m: &LadderModule,
    dom: &PersistenceModule,
    cod: &PersistenceModule,
    pd: &[Matrix],
    pc: &[Matrix],
) -> LadderModule {
    let field = m.field();
    let at = |bases: &[Matrix], start: i64, t: i64, n: usize| {
        let k = t - start;
        if k >= 0 && (k as usize) < bases.len() {
            bases[k as usize].clone()
        } else {
            Matrix::identity(field, n)
        }
    };
    LadderModule::from_fn(dom.clone(), cod.clone(), |t| {
        let p = at(pd, dom.start(), t, dom.dim(t));
        let q = at(pc, cod.start(), t, cod.dim(t));
        let inner = mat_mul(&m.comp(t), &p).expect("shapes agree");
        mat_mul(&mat_inverse(&q).expect("bases are invertible"), &inner).expect("shapes agree")
    })
    .expect("conjugated components have the right shape")
}

/// `Φ0` sends each matched `V` generator to its partner, `Ψ0` sends the
/// partner to the shifted `V` generator.
fn matched_pair(
    field: Field,
    v: &PersistenceModule,
    w: &PersistenceModule,
    pairs: &[(Interval, Interval)],
    delta: i64,
) -> (LadderModule, LadderModule) {
    let bv = reduce_to_barcode_basis(v);
    let bw = reduce_to_barcode_basis(w);
    let bv2 = reduce_to_barcode_basis(&v.shift(2 * delta));
    let (gv, gw) = (bv.generators(), bw.generators());
    let mut used_v = vec![false; gv.len()];
    let mut used_w = vec![false; gw.len()];
    let mut phi = Matrix::zeros(field, gw.len(), gv.len());
    let mut psi = Matrix::zeros(field, gv.len(), gw.len());
    for &(a, b) in pairs {
        let i = (0..gv.len())
            .find(|&i| !used_v[i] && gv[i].bar == a)
            .expect("bar present");
        let j = (0..gw.len())
            .find(|&j| !used_w[j] && gw[j].bar == b)
            .expect("partner present");
        used_v[i] = true;
        used_w[j] = true;
        phi.set(j, i, field.one());
        psi.set(i, j, field.one());
    }
    let mphi = MorphismMatrix::new(gw.to_vec(), gv.to_vec(), phi)
        .expect("partners satisfy the overlap order");
    let mpsi = MorphismMatrix::new(bv2.generators().to_vec(), gw.to_vec(), psi)
        .expect("partners satisfy the overlap order");
    (
        from_single_matrix(&mphi, &bv, &bw).expect("bases belong to the modules"),
        from_single_matrix(&mpsi, &bw, &bv2).expect("bases belong to the modules"),
    )
}

/// `Φ = [δ] ∘ α: V -> V(δ)` for a random automorphism `α`, with the
/// δ-inverse `α^{-1}(2δ) ∘ [δ]`. `V` is drawn with the given barcode in
/// random coordinates.
pub fn inner_shift_pair(
    rng: &mut impl Rng,
    field: Field,
    v_bars: &Barcode,
    delta: i64,
    cfg: &SynthConfig,
) -> InvertiblePair {
    let v = random_module_with_barcode(rng, field, v_bars, cfg);
    let (alpha, alpha_inv) = random_automorphism(rng, &v, cfg);
    let phi = LadderModule::inner_morphism(&v, delta)
        .compose(&alpha)
        .expect("automorphism of the domain");
    let psi = alpha_inv
        .shift(2 * delta)
        .compose(&LadderModule::inner_morphism(&v.shift(delta), delta))
        .expect("inner morphism lands in V(2δ)");
    check_delta_invertible(&phi, &psi, delta).expect("inner shifts are δ-invertible");
    InvertiblePair { delta, phi, psi }
}

/// Draws barcodes until a pair satisfying the nestedness condition is
/// built, up to `attempts` tries. A quarter of the draws use
/// [`inner_shift_pair`], the rest [`invertible_pair`].
pub fn random_invertible_pair(
    rng: &mut impl Rng,
    field: Field,
    delta: i64,
    cfg: &SynthConfig,
    attempts: usize,
) -> Option<InvertiblePair> {
    (0..attempts).find_map(|_| {
        let bars = random_barcode(rng, cfg);
        if rng.gen_bool(0.25) {
            nestedness(&bars)
                .exceeds(2 * delta)
                .then(|| inner_shift_pair(rng, field, &bars, delta, cfg))
        } else {
            invertible_pair(rng, field, &bars, delta, true, cfg)
        }
    })
}
