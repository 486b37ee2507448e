use std::collections::BTreeMap;

use crate::algebra::{mat_mul, Matrix};
use crate::morphism::LadderModule;
use crate::persistence::{reduce_to_barcode_basis, BarGenerator, Interval, PersistenceModule};

use super::PartialMatching;

/// Pointwise image of `Φ` with the maps induced by the codomain. The basis
/// of `im Φ_t` is the set of pivot columns of `Φ_t`.
pub fn image_module(phi: &LadderModule) -> PersistenceModule {
    let field = phi.field();
    let (lo, hi) = phi.window();
    if hi < lo {
        return PersistenceModule::zero(field);
    }
    let bases: Vec<Matrix> = (lo..=hi)
        .map(|t| {
            let c = phi.comp(t);
            let cols = c.independent_columns();
            c.select(&(0..c.rows()).collect::<Vec<_>>(), &cols)
        })
        .collect();
    let dims = bases.iter().map(Matrix::cols).collect();
    let maps = (lo..hi)
        .map(|t| {
            let k = (t - lo) as usize;
            let pushed =
                mat_mul(&phi.cod().map(t), &bases[k]).expect("codomain map fits image basis");
            bases[k + 1]
                .solve(&pushed)
                .expect("shapes agree")
                .expect("image is mapped into image")
        })
        .collect();
    PersistenceModule::new(field, lo, dims, maps).expect("image maps have consistent shapes")
}

fn instances(gens: &[BarGenerator]) -> Vec<(Interval, usize)> {
    gens.iter().map(|g| (g.bar, g.slot)).collect()
}

/// Pairs up, inside every family of bars sharing one endpoint, the longest
/// with the longest, then the next, and so on. Ties go by slot.
fn family_matching(
    left: &[(Interval, usize)],
    right: &[(Interval, usize)],
    key: impl Fn(Interval) -> i64,
) -> Vec<(usize, usize)> {
    let mut families: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, (bar, _)) in left.iter().enumerate() {
        families.entry(key(*bar)).or_default().0.push(i);
    }
    for (j, (bar, _)) in right.iter().enumerate() {
        families.entry(key(*bar)).or_default().1.push(j);
    }
    let mut out = Vec::new();
    for (_, (mut ls, mut rs)) in families {
        ls.sort_by_key(|&i| (-left[i].0.length(), left[i].1));
        rs.sort_by_key(|&j| (-right[j].0.length(), right[j].1));
        out.extend(ls.into_iter().zip(rs));
    }
    out
}

/// The induced matching of Bauer and Lesnick: split `Φ` into `V ->> im Φ`
/// and `im Φ -> W`, match the surjection along common births and the
/// injection along common deaths, and compose. Codomain bars are moved by
/// `cod_shift` as in [`super::induced_matching`].
pub fn bl_matching(phi: &LadderModule, cod_shift: i64) -> PartialMatching {
    let v = instances(reduce_to_barcode_basis(phi.dom()).generators());
    let w = instances(reduce_to_barcode_basis(phi.cod()).generators());
    let im = instances(reduce_to_barcode_basis(&image_module(phi)).generators());
    let surj: BTreeMap<usize, usize> = family_matching(&im, &v, Interval::birth)
        .into_iter()
        .collect();
    let inj: BTreeMap<usize, usize> = family_matching(&im, &w, Interval::death)
        .into_iter()
        .collect();
    let mut m = PartialMatching::default();
    let mut v_used = vec![false; v.len()];
    let mut w_used = vec![false; w.len()];
    for k in 0..im.len() {
        if let (Some(&i), Some(&j)) = (surj.get(&k), inj.get(&k)) {
            v_used[i] = true;
            w_used[j] = true;
            m.add_pair(v[i].0, w[j].0.shift(-cod_shift), 1);
        }
    }
    for (i, used) in v_used.iter().enumerate() {
        if !used {
            m.unmatched_source.insert(v[i].0, 1);
        }
    }
    for (j, used) in w_used.iter().enumerate() {
        if !used {
            m.unmatched_target.insert(w[j].0.shift(-cod_shift), 1);
        }
    }
    m
}
