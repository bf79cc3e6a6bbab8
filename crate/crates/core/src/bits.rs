//! Fixed-universe bitsets used as coefficient vectors over Z₂.
//!
//! A `CellSet` stores one bit per cell of a fixed dimension of some complex.
//! Addition of mod-2 chains is XOR, which is why the representation is a
//! plain word array rather than a hash set.

/// Set of cell indices drawn from a fixed universe `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    words: Vec<u64>,
    universe: usize,
}

impl CellSet {
    pub fn empty(universe: usize) -> Self {
        CellSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, idx: I) -> Self {
        let mut s = Self::empty(universe);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.universe);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    /// Flip one bit (mod-2 addition of a single cell).
    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Symmetric difference in place.
    pub fn xor_assign(&mut self, other: &CellSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterate set indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_sorted_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for CellSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn xor_is_symmetric_difference(a in prop::collection::hash_set(0usize..200, 0..60),
                                       b in prop::collection::hash_set(0usize..200, 0..60)) {
            let mut sa = CellSet::from_indices(200, a.iter().copied());
            let sb = CellSet::from_indices(200, b.iter().copied());
            sa.xor_assign(&sb);
            let expect: std::collections::HashSet<_> =
                a.symmetric_difference(&b).copied().collect();
            prop_assert_eq!(sa.to_sorted_vec(), {
                let mut v: Vec<_> = expect.into_iter().collect();
                v.sort_unstable();
                v
            });
        }

        #[test]
        fn self_xor_is_empty(a in prop::collection::hash_set(0usize..300, 0..100)) {
            let mut s = CellSet::from_indices(300, a.iter().copied());
            let t = s.clone();
            s.xor_assign(&t);
            prop_assert!(s.is_empty());
        }
    }

    #[test]
    fn iter_matches_contains() {
        let s = CellSet::from_indices(130, [0, 63, 64, 65, 129]);
        assert_eq!(s.to_sorted_vec(), vec![0, 63, 64, 65, 129]);
        assert_eq!(s.len(), 5);
        assert!(s.contains(64));
        assert!(!s.contains(66));
    }
}
