//! Fixed-length bit-vectors and the set-intersection kernels used by the
//! consistency check.
//!
//! Complements are never materialised: a [`SideRef`] pairs a stored bit-vector
//! with a flip flag, and the kernels XOR each word with the flip mask on the
//! fly. Bits past `len` in the last word are always zero in storage; flipped
//! words are masked before counting.

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitSet({s})")
    }
}

impl BitSet {
    /// All-zero vector of length `len`.
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = BitSet::new(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.insert(i);
            }
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Parses a string of `0`/`1` characters, object 0 first.
    pub fn from_bit_str(bits: &str) -> Option<Self> {
        let v: Option<Vec<bool>> = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        v.map(|v| BitSet::from_bools(&v))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> BitSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(self.len);
        }
        BitSet {
            len: self.len,
            words,
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        side_subset(SideRef::new(self), SideRef::new(other))
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Concatenates `times` copies of this vector.
    pub fn repeat(&self, times: usize) -> BitSet {
        let mut out = BitSet::new(self.len * times);
        for r in 0..times {
            for i in self.iter_ones() {
                out.insert(r * self.len + i);
            }
        }
        out
    }
}

/// Mask of valid bits in the last word of a length-`len` vector.
#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A side of a stored bipartition: the stored set itself, or its complement.
#[derive(Clone, Copy, Debug)]
pub struct SideRef<'a> {
    bits: &'a BitSet,
    flip: bool,
}

impl<'a> SideRef<'a> {
    pub fn new(bits: &'a BitSet) -> Self {
        SideRef { bits, flip: false }
    }

    pub fn complement_of(bits: &'a BitSet) -> Self {
        SideRef { bits, flip: true }
    }

    pub fn with_flip(bits: &'a BitSet, flip: bool) -> Self {
        SideRef { bits, flip }
    }

    pub fn len(&self) -> usize {
        self.bits.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.len == 0
    }

    #[inline]
    fn word(&self, i: usize) -> u64 {
        let w = self.bits.words[i];
        if self.flip {
            let w = !w;
            if i + 1 == self.bits.words.len() {
                w & tail_mask(self.bits.len)
            } else {
                w
            }
        } else {
            w
        }
    }

    pub fn count(&self) -> usize {
        if self.flip {
            self.bits.len - self.bits.count_ones()
        } else {
            self.bits.count_ones()
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i) != self.flip
    }

    pub fn to_bitset(&self) -> BitSet {
        if self.flip {
            self.bits.complement()
        } else {
            self.bits.clone()
        }
    }
}

/// `|x ∩ y|`.
pub fn pair_count(x: SideRef<'_>, y: SideRef<'_>) -> usize {
    debug_assert_eq!(x.len(), y.len());
    (0..x.bits.words.len())
        .map(|i| (x.word(i) & y.word(i)).count_ones() as usize)
        .sum()
}

/// `|x ∩ y ∩ z|`.
pub fn triple_count(x: SideRef<'_>, y: SideRef<'_>, z: SideRef<'_>) -> usize {
    debug_assert!(x.len() == y.len() && y.len() == z.len());
    (0..x.bits.words.len())
        .map(|i| (x.word(i) & y.word(i) & z.word(i)).count_ones() as usize)
        .sum()
}

/// `|x ∩ y ∩ z| >= a`, stopping as soon as the threshold is reached.
pub fn triple_at_least(x: SideRef<'_>, y: SideRef<'_>, z: SideRef<'_>, a: usize) -> bool {
    debug_assert!(x.len() == y.len() && y.len() == z.len());
    if a == 0 {
        return true;
    }
    let mut acc = 0usize;
    for i in 0..x.bits.words.len() {
        acc += (x.word(i) & y.word(i) & z.word(i)).count_ones() as usize;
        if acc >= a {
            return true;
        }
    }
    false
}

/// `x ⊆ y`.
pub fn side_subset(x: SideRef<'_>, y: SideRef<'_>) -> bool {
    debug_assert_eq!(x.len(), y.len());
    (0..x.bits.words.len()).all(|i| x.word(i) & !y.word(i) == 0)
}
