//! Half-open integer intervals and barcodes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Right endpoint of an interval. `Finite(_) < Infinite` by the derived order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(usize),
    Infinite,
}

impl Death {
    pub fn finite(self) -> Option<usize> {
        match self {
            Death::Finite(d) => Some(d),
            Death::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Death::Finite(_))
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(d) => write!(f, "{d}"),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Death {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "inf" {
            return Ok(Death::Infinite);
        }
        s.parse::<usize>()
            .map(Death::Finite)
            .map_err(|_| format!("expected a non-negative integer or `inf`, found `{s}`"))
    }
}

/// The interval `[birth, death)`. `birth == death` is the zero-length bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub birth: usize,
    pub death: Death,
}

impl Interval {
    pub fn new(birth: usize, death: Death) -> Result<Self> {
        if let Death::Finite(d) = death {
            if d < birth {
                return Err(Error::BadInterval { birth, death: d });
            }
        }
        Ok(Interval { birth, death })
    }

    /// `[birth, death)`; panics if `death < birth`.
    pub fn finite(birth: usize, death: usize) -> Self {
        Interval::new(birth, Death::Finite(death)).expect("birth after death")
    }

    pub fn infinite(birth: usize) -> Self {
        Interval {
            birth,
            death: Death::Infinite,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.death == Death::Finite(self.birth)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.birth <= i && Death::Finite(i) < self.death
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.birth, self.death)
    }
}

/// One bar of a barcode: a homological degree and an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub degree: usize,
    pub interval: Interval,
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.degree, self.interval.birth, self.interval.death
        )
    }
}

/// A multiset of bars, always kept sorted by `(degree, birth, death)`, so
/// derived equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(bars: impl IntoIterator<Item = Bar>) -> Self {
        let mut bars: Vec<Bar> = bars.into_iter().collect();
        bars.sort_unstable();
        Barcode { bars }
    }

    pub fn from_intervals(degree: usize, intervals: impl IntoIterator<Item = Interval>) -> Self {
        Barcode::new(
            intervals
                .into_iter()
                .map(|interval| Bar { degree, interval }),
        )
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter()
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.bars.iter().map(|b| b.interval).collect()
    }

    /// Drops zero-length bars unless `keep_empty` is set.
    pub fn filtered(self, keep_empty: bool) -> Self {
        if keep_empty {
            self
        } else {
            self.without_empty()
        }
    }

    pub fn without_empty(mut self) -> Self {
        self.bars.retain(|b| !b.interval.is_empty());
        self
    }

    pub fn in_degree(&self, degree: usize) -> Barcode {
        Barcode {
            bars: self
                .bars
                .iter()
                .filter(|b| b.degree == degree)
                .copied()
                .collect(),
        }
    }

    pub fn merge(mut self, other: Barcode) -> Barcode {
        self.bars.extend(other.bars);
        self.bars.sort_unstable();
        self
    }

    /// Number of bars of `degree` containing index `i`.
    pub fn rank_at(&self, degree: usize, i: usize) -> usize {
        self.bars
            .iter()
            .filter(|b| b.degree == degree && b.interval.contains(i))
            .count()
    }
}

impl FromIterator<Bar> for Barcode {
    fn from_iter<T: IntoIterator<Item = Bar>>(iter: T) -> Self {
        Barcode::new(iter)
    }
}

/// One bar per line, `<degree> <birth> <death|inf>`.
impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bar in &self.bars {
            writeln!(f, "{bar}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_is_largest() {
        assert!(Death::Finite(usize::MAX) < Death::Infinite);
        assert!(Interval::finite(0, 3) < Interval::infinite(0));
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(Interval::new(3, Death::Finite(2)).is_err());
        assert!(Interval::new(3, Death::Finite(3)).unwrap().is_empty());
    }

    #[test]
    fn barcode_is_a_sorted_multiset() {
        let a = Barcode::from_intervals(0, [Interval::infinite(1), Interval::finite(0, 2)]);
        let b = Barcode::from_intervals(0, [Interval::finite(0, 2), Interval::infinite(1)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "0 0 2\n0 1 inf\n");
    }

    #[test]
    fn empties_filtered_on_request() {
        let b = Barcode::from_intervals(1, [Interval::finite(1, 1), Interval::finite(0, 1)]);
        assert_eq!(b.clone().filtered(true).len(), 2);
        assert_eq!(b.filtered(false).intervals(), vec![Interval::finite(0, 1)]);
    }

    #[test]
    fn death_round_trips_through_text() {
        for d in [Death::Finite(0), Death::Finite(17), Death::Infinite] {
            assert_eq!(d.to_string().parse::<Death>().unwrap(), d);
        }
        assert!("-1".parse::<Death>().is_err());
    }
}
