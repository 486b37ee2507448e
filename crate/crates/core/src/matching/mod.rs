//! Partial matchings of barcodes: those induced by ladder decompositions,
//! the Bauer–Lesnick construction, costs and the bottleneck distance.

mod bl;
mod bottleneck;

pub use bl::{bl_matching, image_module};
pub use bottleneck::{bottleneck_distance, MAX_BARS};

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::ladder::LadderDecomposition;
use crate::persistence::{Barcode, Interval};

/// Exact cost of a matching; half-integers come from unmatched bars.
pub type MatchingCost = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("barcodes with {0} bars exceed the limit of {MAX_BARS}")]
    TooLarge(usize),
    #[error("matching cost {cost} exceeds {bound}")]
    CostExceeded {
        cost: MatchingCost,
        bound: MatchingCost,
    },
    #[error("matching does not account for barcode multiplicities: {0}")]
    Conservation(String),
}

/// Multiset of matched pairs `(source bar, target bar)` plus the bars left
/// unmatched on either side.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialMatching {
    pub pairs: BTreeMap<(Interval, Interval), usize>,
    pub unmatched_source: Barcode,
    pub unmatched_target: Barcode,
}

impl PartialMatching {
    pub fn add_pair(&mut self, source: Interval, target: Interval, multiplicity: usize) {
        if multiplicity > 0 {
            *self.pairs.entry((source, target)).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, source: Interval, target: Interval) -> usize {
        self.pairs.get(&(source, target)).copied().unwrap_or(0)
    }

    /// Every source bar counted with multiplicity.
    pub fn source_barcode(&self) -> Barcode {
        let mut b = self.unmatched_source.clone();
        for (&(s, _), &m) in &self.pairs {
            b.insert(s, m);
        }
        b
    }

    pub fn target_barcode(&self) -> Barcode {
        let mut b = self.unmatched_target.clone();
        for (&(_, t), &m) in &self.pairs {
            b.insert(t, m);
        }
        b
    }

    /// Checks that matched and unmatched bars add up to both barcodes.
    pub fn check_conservation(
        &self,
        source: &Barcode,
        target: &Barcode,
    ) -> Result<(), MatchingError> {
        if self.source_barcode() != *source {
            return Err(MatchingError::Conservation(format!(
                "source side {} vs {}",
                self.source_barcode(),
                source
            )));
        }
        if self.target_barcode() != *target {
            return Err(MatchingError::Conservation(format!(
                "target side {} vs {}",
                self.target_barcode(),
                target
            )));
        }
        Ok(())
    }

    /// Swaps the roles of source and target.
    pub fn reversed(&self) -> PartialMatching {
        PartialMatching {
            pairs: self.pairs.iter().map(|(&(s, t), &m)| ((t, s), m)).collect(),
            unmatched_source: self.unmatched_target.clone(),
            unmatched_target: self.unmatched_source.clone(),
        }
    }
}

impl fmt::Display for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|(&(s, t), &m)| {
                if m > 1 {
                    format!("({s},{t}) x{m}")
                } else {
                    format!("({s},{t})")
                }
            })
            .collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}

/// Matching read off a decomposition: `R` summands become pairs, `I+` and
/// `I-` summands unmatched bars. Codomain bars are moved by `cod_shift`
/// (so `Φ: V -> W(δ)` is reported against the bars of `W` with
/// `cod_shift = δ`).
pub fn induced_matching(d: &LadderDecomposition, cod_shift: i64) -> PartialMatching {
    let mut m = PartialMatching::default();
    for ((dom, cod), mult) in d.pairs() {
        m.add_pair(dom, cod.shift(-cod_shift), mult);
    }
    m.unmatched_source = d.plus_bars();
    m.unmatched_target = d.minus_bars().shift(-cod_shift);
    m
}

/// `max(|i1 - i2|, |j1 - j2|)` for matched bars, half the length for
/// unmatched ones, maximised over the matching.
pub fn matching_cost(m: &PartialMatching) -> MatchingCost {
    let mut twice = 0i64;
    for &(s, t) in m.pairs.keys() {
        let d = (s.birth() - t.birth())
            .abs()
            .max((s.death() - t.death()).abs());
        twice = twice.max(2 * d);
    }
    for (b, _) in m.unmatched_source.iter().chain(m.unmatched_target.iter()) {
        twice = twice.max(b.length());
    }
    MatchingCost::new(twice, 2)
}

pub fn check_cost_bound(m: &PartialMatching, bound: MatchingCost) -> Result<(), MatchingError> {
    let cost = matching_cost(m);
    if cost > bound {
        return Err(MatchingError::CostExceeded { cost, bound });
    }
    Ok(())
}

/// Outcome of comparing the matchings of the two halves of an interleaving.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrespondenceReport {
    /// Long pairs with equal multiplicity on both sides.
    pub agreements: Vec<(Interval, Interval, usize)>,
    /// Long pairs `(V bar, W bar, mult in χ_Φ, mult in χ_Ψ)` that differ.
    pub long_divergences: Vec<(Interval, Interval, usize, usize)>,
    /// Pairs involving a short bar that differ; these are allowed.
    pub short_divergences: Vec<(Interval, Interval, usize, usize)>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.long_divergences.is_empty()
    }
}

/// Compares `χ_Φ` (pairs `(V bar, W bar)`) with `χ_Ψ` (pairs `(W bar, V bar)`)
/// on bars of length at least `2δ`.
pub fn check_matching_correspondence(
    chi_phi: &PartialMatching,
    chi_psi: &PartialMatching,
    delta: i64,
) -> CorrespondenceReport {
    let mut keys: Vec<(Interval, Interval)> = chi_phi.pairs.keys().copied().collect();
    keys.extend(chi_psi.pairs.keys().map(|&(w, v)| (v, w)));
    keys.sort();
    keys.dedup();
    let mut report = CorrespondenceReport::default();
    for (v, w) in keys {
        let a = chi_phi.multiplicity(v, w);
        let b = chi_psi.multiplicity(w, v);
        let long = v.length() >= 2 * delta && w.length() >= 2 * delta;
        match (long, a == b) {
            (true, true) => report.agreements.push((v, w, a)),
            (true, false) => report.long_divergences.push((v, w, a, b)),
            (false, false) => report.short_divergences.push((v, w, a, b)),
            (false, true) => {}
        }
    }
    report
}

/// The function `M(a, b, c, d)`: multiplicity with which `[a,b]` is
/// matched to `[c,d]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisIndependentMatching {
    table: BTreeMap<(Interval, Interval), usize>,
}

impl BasisIndependentMatching {
    pub fn value(&self, a: i64, b: i64, c: i64, d: i64) -> usize {
        match (Interval::new(a, b), Interval::new(c, d)) {
            (Ok(s), Ok(t)) => self.table.get(&(s, t)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (Interval, Interval, usize)> + '_ {
        self.table.iter().map(|(&(s, t), &m)| (s, t, m))
    }

    /// Row sums stay below the source multiplicities and column sums below
    /// the target multiplicities.
    pub fn satisfies_bounds(&self, source: &Barcode, target: &Barcode) -> bool {
        let mut rows: BTreeMap<Interval, usize> = BTreeMap::new();
        let mut cols: BTreeMap<Interval, usize> = BTreeMap::new();
        for (&(s, t), &m) in &self.table {
            *rows.entry(s).or_insert(0) += m;
            *cols.entry(t).or_insert(0) += m;
        }
        rows.iter().all(|(&s, &m)| m <= source.multiplicity(s))
            && cols.iter().all(|(&t, &m)| m <= target.multiplicity(t))
    }
}

pub fn to_basis_independent(m: &PartialMatching) -> BasisIndependentMatching {
    BasisIndependentMatching {
        table: m.pairs.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::of(a, b)
    }

    #[test]
    fn cost_of_unmatched_and_matched_bars() {
        let mut m = PartialMatching::default();
        m.unmatched_source.insert(iv(0, 6), 1);
        assert_eq!(matching_cost(&m), MatchingCost::from_integer(3));
        let mut m = PartialMatching::default();
        m.add_pair(iv(0, 4), iv(1, 5), 1);
        m.add_pair(iv(1, 7), iv(1, 6), 1);
        m.unmatched_source.insert(iv(4, 4), 1);
        assert_eq!(matching_cost(&m), MatchingCost::from_integer(1));
        m.unmatched_target.insert(iv(0, 3), 1);
        assert_eq!(matching_cost(&m), MatchingCost::new(3, 2));
        assert_eq!(
            matching_cost(&PartialMatching::default()),
            MatchingCost::from_integer(0)
        );
    }

    #[test]
    fn correspondence_ignores_short_bars() {
        let mut phi = PartialMatching::default();
        phi.add_pair(iv(0, 4), iv(1, 5), 1);
        phi.add_pair(iv(3, 3), iv(3, 4), 1);
        let mut psi = PartialMatching::default();
        psi.add_pair(iv(1, 5), iv(0, 4), 1);
        let r = check_matching_correspondence(&phi, &psi, 1);
        assert!(r.holds());
        assert_eq!(r.short_divergences.len(), 1);
        psi.pairs.clear();
        assert!(!check_matching_correspondence(&phi, &psi, 1).holds());
    }

    #[test]
    fn basis_independent_table() {
        let mut m = PartialMatching::default();
        m.add_pair(iv(0, 4), iv(1, 5), 1);
        let t = to_basis_independent(&m);
        assert_eq!(t.value(0, 4, 1, 5), 1);
        assert_eq!(t.value(0, 4, 1, 6), 0);
        let src: Barcode = [iv(0, 4)].into_iter().collect();
        let tgt: Barcode = [iv(1, 5)].into_iter().collect();
        assert!(t.satisfies_bounds(&src, &tgt));
        assert!(!t.satisfies_bounds(&Barcode::new(), &tgt));
    }
}
