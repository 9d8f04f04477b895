use std::fmt;

/// A subset of the coordinate indices `{0, …, n-1}` stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet(u64);

pub const MAX_VARIABLES: usize = 63;

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn from_bits(bits: u64) -> Self {
        CoordSet(bits)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARIABLES);
        CoordSet((1u64 << n) - 1)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        CoordSet(indices.into_iter().fold(0, |acc, j| acc | (1u64 << j)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn insert(&mut self, j: usize) {
        self.0 |= 1 << j;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        CoordSet(!self.0 & CoordSet::full(n).0)
    }

    pub fn is_subset_of(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&j| self.contains(j))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `{0, …, n-1}`, in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = CoordSet> {
        (0..1u64 << n).map(CoordSet)
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = CoordSet::from_indices([0, 2]);
        assert!(s.contains(0) && !s.contains(1) && s.contains(2));
        assert_eq!(s.len(), 2);
        assert_eq!(s.complement(4), CoordSet::from_indices([1, 3]));
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(CoordSet::all(3).count(), 8);
    }
}
