use std::collections::BTreeMap;
use std::fmt;

use super::PersistenceError;

/// Closed integer interval `[birth, death]`.
///
/// The derived order is lexicographic on `(birth, death)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    birth: i64,
    death: i64,
}

impl Interval {
    pub fn new(birth: i64, death: i64) -> Result<Interval, PersistenceError> {
        if birth > death {
            return Err(PersistenceError::InvalidInterval { birth, death });
        }
        Ok(Interval { birth, death })
    }

    /// Panicking constructor for literals.
    pub fn of(birth: i64, death: i64) -> Interval {
        Interval::new(birth, death).expect("birth must not exceed death")
    }

    pub fn birth(self) -> i64 {
        self.birth
    }

    pub fn death(self) -> i64 {
        self.death
    }

    pub fn length(self) -> i64 {
        self.death - self.birth
    }

    pub fn contains(self, t: i64) -> bool {
        self.birth <= t && t <= self.death
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.birth <= other.birth && other.death <= self.death
    }

    pub fn intersects(self, other: Interval) -> bool {
        self.birth.max(other.birth) <= self.death.min(other.death)
    }

    /// `self ⪯ other`: `i1 <= i2 <= j1 <= j2`. Not transitive.
    pub fn overlaps(self, other: Interval) -> bool {
        self.birth <= other.birth && other.birth <= self.death && self.death <= other.death
    }

    /// `self ⊂ other` strictly on both ends: `i2 < i1 <= j1 < j2`.
    pub fn strictly_nested_in(self, other: Interval) -> bool {
        other.birth < self.birth && self.death < other.death
    }

    /// The interval moved down by `delta`, as a bar of `V(delta)`.
    pub fn shift(self, delta: i64) -> Interval {
        Interval {
            birth: self.birth - delta,
            death: self.death - delta,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.birth, self.death)
    }
}

pub fn interval_lex_leq(a: Interval, b: Interval) -> bool {
    a <= b
}

pub fn interval_overlap(a: Interval, b: Interval) -> bool {
    a.overlaps(b)
}

pub fn interval_strictly_nested(inner: Interval, outer: Interval) -> bool {
    inner.strictly_nested_in(outer)
}

/// Multiset of intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: BTreeMap<Interval, usize>,
}

impl Barcode {
    pub fn new() -> Barcode {
        Barcode::default()
    }

    pub fn insert(&mut self, bar: Interval, multiplicity: usize) {
        if multiplicity > 0 {
            *self.bars.entry(bar).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, bar: Interval) -> usize {
        self.bars.get(&bar).copied().unwrap_or(0)
    }

    /// Distinct bars with multiplicities, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.bars.iter().map(|(&b, &m)| (b, m))
    }

    /// Every bar repeated by its multiplicity, in lexicographic order.
    pub fn bars(&self) -> Vec<Interval> {
        self.iter()
            .flat_map(|(b, m)| std::iter::repeat_n(b, m))
            .collect()
    }

    /// Total number of bars counted with multiplicity.
    pub fn len(&self) -> usize {
        self.bars.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.bars.len()
    }

    pub fn shift(&self, delta: i64) -> Barcode {
        self.iter().map(|(b, m)| (b.shift(delta), m)).collect()
    }

    /// Bars of length at least `q`.
    pub fn long_part(&self, q: i64) -> Barcode {
        self.iter().filter(|(b, _)| b.length() >= q).collect()
    }

    /// Bars of length below `q`.
    pub fn short_part(&self, q: i64) -> Barcode {
        self.iter().filter(|(b, _)| b.length() < q).collect()
    }

    /// Number of bars containing `[i, j]`.
    pub fn rank(&self, i: i64, j: i64) -> usize {
        self.iter()
            .filter(|(b, _)| b.birth() <= i && j <= b.death())
            .map(|(_, m)| m)
            .sum()
    }
}

impl FromIterator<(Interval, usize)> for Barcode {
    fn from_iter<I: IntoIterator<Item = (Interval, usize)>>(iter: I) -> Barcode {
        let mut b = Barcode::new();
        for (bar, m) in iter {
            b.insert(bar, m);
        }
        b
    }
}

impl FromIterator<Interval> for Barcode {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Barcode {
        iter.into_iter().map(|b| (b, 1)).collect()
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (bar, m) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{bar}")?;
            if m > 1 {
                write!(f, "x{m}")?;
            }
        }
        Ok(())
    }
}

/// Value of the nestedness constant. `Infinite` compares above every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nestedness {
    Finite(i64),
    Infinite,
}

impl Nestedness {
    /// `x < self`.
    pub fn exceeds(self, x: i64) -> bool {
        match self {
            Nestedness::Finite(v) => x < v,
            Nestedness::Infinite => true,
        }
    }
}

impl fmt::Display for Nestedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nestedness::Finite(v) => write!(f, "{v}"),
            Nestedness::Infinite => write!(f, "inf"),
        }
    }
}

/// Minimum over strictly nested pairs `[a,b] ⊂ [c,d]` of
/// `min(|a-c|, |b-d|)`.
pub fn nestedness(barcode: &Barcode) -> Nestedness {
    let bars: Vec<Interval> = barcode.iter().map(|(b, _)| b).collect();
    let mut best = Nestedness::Infinite;
    for &inner in &bars {
        for &outer in &bars {
            if inner.strictly_nested_in(outer) {
                let gap = (inner.birth - outer.birth).min(outer.death - inner.death);
                best = best.min(Nestedness::Finite(gap));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(bars: &[(i64, i64)]) -> Barcode {
        bars.iter().map(|&(a, b)| Interval::of(a, b)).collect()
    }

    #[test]
    fn relations() {
        assert!(Interval::of(0, 4).overlaps(Interval::of(1, 5)));
        assert!(Interval::of(0, 4).overlaps(Interval::of(0, 4)));
        assert!(!Interval::of(1, 5).overlaps(Interval::of(0, 4)));
        assert!(Interval::of(2, 5).strictly_nested_in(Interval::of(0, 7)));
        assert!(!Interval::of(0, 5).strictly_nested_in(Interval::of(0, 7)));
        assert!(Interval::of(0, 9) < Interval::of(1, 2));
        assert!(Interval::new(3, 2).is_err());
    }

    #[test]
    fn nestedness_values() {
        assert_eq!(
            nestedness(&bc(&[(0, 8), (1, 5), (1, 8), (3, 5)])),
            Nestedness::Finite(1)
        );
        assert_eq!(
            nestedness(&bc(&[(0, 4), (1, 7), (4, 4)])),
            Nestedness::Finite(3)
        );
        assert_eq!(nestedness(&bc(&[(0, 4), (0, 5)])), Nestedness::Infinite);
        assert_eq!(nestedness(&bc(&[(0, 7), (2, 5)])), Nestedness::Finite(2));
        assert!(Nestedness::Finite(1_000) < Nestedness::Infinite);
    }

    #[test]
    fn barcode_display_and_rank() {
        let mut b = bc(&[(1, 7), (0, 4), (4, 4)]);
        assert_eq!(b.to_string(), "[0,4] [1,7] [4,4]");
        b.insert(Interval::of(0, 4), 1);
        assert_eq!(b.to_string(), "[0,4]x2 [1,7] [4,4]");
        assert_eq!(b.rank(4, 6), 1);
        assert_eq!(b.rank(4, 4), 4);
        assert_eq!(b.shift(1).to_string(), "[-1,3]x2 [0,6] [3,3]");
    }
}
