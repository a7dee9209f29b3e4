use std::fmt;

/// A `k`-ary relation over the domain `0..n`, stored as a dense bitset.
///
/// A tuple `(a_1, ..., a_k)` has index `a_1·n^(k-1) + ... + a_k`, so the last
/// coordinate is least significant and bit order equals lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ADRelation {
    n: usize,
    arity: usize,
    bits: Vec<u64>,
}

fn words(len: usize) -> usize {
    len.div_ceil(64)
}

impl ADRelation {
    pub fn empty(n: usize, arity: usize) -> Self {
        let len = n.pow(arity as u32);
        ADRelation { n, arity, bits: vec![0; words(len)] }
    }

    pub fn full(n: usize, arity: usize) -> Self {
        let mut r = Self::empty(n, arity);
        r.bits.iter_mut().for_each(|w| *w = !0);
        r.trim();
        r
    }

    /// ⊤₀ or ⊥₀.
    pub fn boolean(n: usize, value: bool) -> Self {
        if value {
            Self::full(n, 0)
        } else {
            Self::empty(n, 0)
        }
    }

    pub fn from_tuples<I, T>(n: usize, arity: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut r = Self::empty(n, arity);
        for t in tuples {
            r.insert(t.as_ref());
        }
        r
    }

    /// Builds a relation from a predicate on tuple indices.
    pub fn from_fn(n: usize, arity: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut r = Self::empty(n, arity);
        for i in 0..r.capacity() {
            if f(i) {
                r.set_index(i, true);
            }
        }
        r
    }

    fn trim(&mut self) {
        let len = self.capacity();
        let rem = len % 64;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.n
    }

    /// Number of possible tuples, `n^k`.
    pub fn capacity(&self) -> usize {
        self.n.pow(self.arity as u32)
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &a| acc * self.n + a)
    }

    pub fn tuple_at(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = index % self.n;
            index /= self.n;
        }
        t
    }

    pub fn get_index(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set_index(&mut self, i: usize, value: bool) {
        if value {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&a| a < self.n)
            && self.get_index(self.index_of(tuple))
    }

    /// Inserts a tuple. Panics if it does not fit the arity or domain.
    pub fn insert(&mut self, tuple: &[usize]) {
        assert_eq!(tuple.len(), self.arity, "tuple length must equal the arity");
        assert!(tuple.iter().all(|&a| a < self.n), "tuple element outside the domain");
        let i = self.index_of(tuple);
        self.set_index(i, true);
    }

    pub fn remove(&mut self, tuple: &[usize]) {
        let i = self.index_of(tuple);
        self.set_index(i, false);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// True for ⊤₀.
    pub fn is_top0(&self) -> bool {
        self.arity == 0 && !self.is_empty()
    }

    /// Indices of member tuples in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + tz)
            })
        })
    }

    /// Member tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        self.indices().map(|i| self.tuple_at(i)).collect()
    }

    pub fn complement(&self) -> Self {
        let mut r = self.clone();
        r.bits.iter_mut().for_each(|w| *w = !*w);
        r.trim();
        r
    }

    /// Bitwise intersection of relations with identical shape.
    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.arity), (other.n, other.arity));
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        ADRelation { n: self.n, arity: self.arity, bits }
    }

    pub fn or(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.arity), (other.n, other.arity));
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        ADRelation { n: self.n, arity: self.arity, bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.arity == other.arity && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Image under a permutation of the domain.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let mut r = Self::empty(self.n, self.arity);
        for t in self.tuples() {
            let image: Vec<usize> = t.iter().map(|&a| sigma[a]).collect();
            r.insert(&image);
        }
        r
    }
}

impl fmt::Debug for ADRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.tuples(), self.arity)
    }
}
