//! Sparse GF(2) column reduction.
//!
//! Columns are sorted index vectors; the pivot of a column is its largest
//! index.  The reducer keeps one stored column per pivot, in the style of
//! boundary-matrix reduction from persistent homology, and can carry a
//! small tag word per column (used to track coordinates in a chosen basis,
//! XOR-combined along reductions).

pub type SparseVec = Vec<u32>;

/// Symmetric difference of two sorted index vectors.
pub fn xor_merge(a: &[u32], b: &[u32]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Default)]
pub struct Reducer {
    /// pivot index -> position in `cols`
    pivots: std::collections::HashMap<u32, usize>,
    cols: Vec<SparseVec>,
    tags: Vec<u64>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Reduce v against the stored columns; returns the residue and the
    /// XOR of tags of the columns used (plus the input tag).
    pub fn residue(&self, mut v: SparseVec, mut tag: u64) -> (SparseVec, u64) {
        loop {
            let Some(&low) = v.last() else {
                return (v, tag);
            };
            let Some(&at) = self.pivots.get(&low) else {
                return (v, tag);
            };
            v = xor_merge(&v, &self.cols[at]);
            tag ^= self.tags[at];
        }
    }

    /// Reduce and store if nonzero. Returns whether the column extended
    /// the span (true) or reduced to zero (false), plus the final tag.
    pub fn insert(&mut self, v: SparseVec, tag: u64) -> (bool, u64) {
        let (res, tag) = self.residue(v, tag);
        if res.is_empty() {
            return (false, tag);
        }
        let low = *res.last().unwrap();
        self.pivots.insert(low, self.cols.len());
        self.cols.push(res);
        self.tags.push(tag);
        (true, tag)
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.residue(v, 0).0.is_empty()
    }
}

/// Rank of a sparse matrix given as columns.
pub fn rank(cols: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut r = Reducer::new();
    for c in cols {
        r.insert(c, 0);
    }
    r.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_merge_cancels() {
        assert_eq!(xor_merge(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
        assert_eq!(xor_merge(&[2, 7], &[2, 7]), Vec::<u32>::new());
    }

    #[test]
    fn rank_of_triangle_boundary() {
        // boundary of a hollow triangle: 3 edge columns over 3 vertices
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(rank(cols), 2);
    }

    #[test]
    fn tags_track_combinations() {
        let mut r = Reducer::new();
        r.insert(vec![0, 1], 0b01);
        r.insert(vec![1, 2], 0b10);
        // [0,2] = col0 + col1: residue empty, tag combines
        let (zero, tag) = r.residue(vec![0, 2], 0);
        assert!(zero.is_empty());
        assert_eq!(tag, 0b11);
    }
}
