//! Sparse-table range minimum queries.

#[derive(Clone, Debug)]
pub struct SparseMin<T> {
    levels: Vec<Vec<T>>,
}

impl<T: Copy + PartialOrd> SparseMin<T> {
    pub fn new(values: &[T]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= values.len() {
            let prev = levels.last().expect("nonempty");
            let next: Vec<T> = (0..=values.len() - 2 * width).map(|i| min(prev[i], prev[i + width])).collect();
            levels.push(next);
            width *= 2;
        }
        SparseMin { levels }
    }

    /// Minimum over the inclusive range `lo..=hi`.
    pub fn min(&self, lo: usize, hi: usize) -> T {
        debug_assert!(lo <= hi);
        let len = hi - lo + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let row = &self.levels[k];
        min(row[lo], row[hi + 1 - (1 << k)])
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }
}

fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_naive(v in proptest::collection::vec(-50i32..50, 1..60), a in 0usize..60, b in 0usize..60) {
            let (lo, hi) = (a.min(b) % v.len(), a.max(b) % v.len());
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            let t = SparseMin::new(&v);
            prop_assert_eq!(t.min(lo, hi), *v[lo..=hi].iter().min().unwrap());
        }
    }
}
