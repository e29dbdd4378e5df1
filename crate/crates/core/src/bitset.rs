use alloc::vec;
use alloc::vec::Vec;

/// Dense set of residues `0..universe`, one bit per residue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::new(universe);
        set.words.iter_mut().for_each(|w| *w = u64::MAX);
        set.clear_padding();
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Returns `true` if `i` was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "residue {i} outside universe {}", self.universe);
        let word = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    /// Elements not in `self`, ascending.
    pub fn complement(&self) -> Self {
        let mut out = Self::new(self.universe);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o = !w;
        }
        out.clear_padding();
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `self |= src + shift`, where the translate is taken cyclically modulo
    /// the universe size: bit `i` of the translate is bit `i - shift` of `src`.
    pub fn or_translate(&mut self, src: &Self, shift: usize) {
        debug_assert_eq!(self.universe, src.universe);
        let m = self.universe;
        if m == 0 {
            return;
        }
        let mut from = (m - shift % m) % m;
        for w in 0..self.words.len() {
            let len = (m - w * 64).min(64);
            self.words[w] |= src.read_cyclic(from, len);
            from += 64;
            if from >= m {
                from -= m;
            }
        }
    }

    fn read_linear(&self, start: usize, len: usize) -> u64 {
        debug_assert!((1..=64).contains(&len) && start + len <= self.universe);
        let word = start / 64;
        let off = start % 64;
        let mut bits = self.words[word] >> off;
        if off != 0 && off + len > 64 {
            bits |= self.words[word + 1] << (64 - off);
        }
        if len == 64 {
            bits
        } else {
            bits & ((1u64 << len) - 1)
        }
    }

    fn read_cyclic(&self, start: usize, len: usize) -> u64 {
        let m = self.universe;
        debug_assert!(len <= m);
        if start + len <= m {
            self.read_linear(start, len)
        } else {
            let first = m - start;
            // len <= m, so the tail never wraps a second time
            self.read_linear(start, first) | (self.read_linear(0, len - first) << first)
        }
    }

    fn clear_padding(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// A set laid out twice and pre-shifted by every bit offset, so any cyclic
/// translate reads as whole aligned words.
pub struct Translates {
    universe: usize,
    copies: Vec<Vec<u64>>,
}

impl Translates {
    pub fn new(src: &BitSet) -> Self {
        let m = src.universe;
        let len = 2 * m.div_ceil(64) + 2;
        let mut doubled = vec![0u64; len + 1];
        for i in src.iter() {
            for j in [i, i + m] {
                doubled[j / 64] |= 1 << (j % 64);
            }
        }
        let copies = (0..64)
            .map(|r| {
                (0..len)
                    .map(|k| match r {
                        0 => doubled[k],
                        _ => (doubled[k] >> r) | (doubled[k + 1] << (64 - r)),
                    })
                    .collect()
            })
            .collect();
        Self { universe: m, copies }
    }

    /// `dst |= src + shift` (cyclic).
    pub fn or_into(&self, dst: &mut BitSet, shift: usize) {
        debug_assert_eq!(dst.universe, self.universe);
        let m = self.universe;
        if m == 0 {
            return;
        }
        // bit i of the translate is bit i + m - shift of the doubled layout
        let start = m - shift % m;
        let copy = &self.copies[start % 64][start / 64..];
        for (d, s) in dst.words.iter_mut().zip(copy) {
            *d |= s;
        }
        dst.clear_padding();
    }
}

impl core::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for BitSet {
    /// Universe is one past the largest element.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let items: Vec<usize> = iter.into_iter().collect();
        let universe = items.iter().max().map_or(0, |&m| m + 1);
        let mut set = Self::new(universe);
        for i in items {
            set.insert(i);
        }
        set
    }
}
