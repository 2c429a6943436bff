use alloc::vec;
use alloc::vec::Vec;

/// Compressed adjacency rows: `row(v)` lists `(neighbour, weight)` sorted by neighbour.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Csr {
    start: Vec<usize>,
    target: Vec<usize>,
    weight: Vec<f64>,
}

impl Csr {
    pub(crate) fn from_pairs(n: usize, mut pairs: Vec<(usize, usize, f64)>) -> Self {
        pairs.sort_by_key(|a| (a.0, a.1));
        let mut start = vec![0usize; n + 1];
        for &(from, _, _) in &pairs {
            start[from + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let (target, weight) = pairs.into_iter().map(|(_, to, w)| (to, w)).unzip();
        Csr {
            start,
            target,
            weight,
        }
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.start[v]..self.start[v + 1];
        self.target[range.clone()]
            .iter()
            .copied()
            .zip(self.weight[range].iter().copied())
    }

    #[inline]
    pub(crate) fn degree(&self, v: usize) -> usize {
        self.start[v + 1] - self.start[v]
    }

    pub(crate) fn len(&self) -> usize {
        self.target.len()
    }
}
