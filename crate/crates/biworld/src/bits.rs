//! Bit-level helpers over packed `u64` records.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;

#[inline]
pub fn get_bit(words: &[u64], pos: usize) -> bool {
    (words[pos / 64] >> (pos % 64)) & 1 == 1
}

#[inline]
pub fn set_bit(words: &mut [u64], pos: usize) {
    words[pos / 64] |= 1u64 << (pos % 64);
}

/// Reads `len <= 64` bits starting at `pos`, least significant bit first.
#[inline]
pub fn get_chunk(words: &[u64], pos: usize, len: usize) -> u64 {
    if len == 0 {
        return 0;
    }
    let w = pos / 64;
    let s = pos % 64;
    let mut v = words[w] >> s;
    if s + len > 64 {
        v |= words[w + 1] << (64 - s);
    }
    if len < 64 {
        v &= (1u64 << len) - 1;
    }
    v
}

fn any_above(words: &[u64], off: usize, len: usize, from: usize) -> bool {
    let mut p = from;
    while p < len {
        let n = (len - p).min(64);
        if get_chunk(words, off + p, n) != 0 {
            return true;
        }
        p += n;
    }
    false
}

/// Compares the sets held in `[off, off+len)` of `a` and `b` as sorted index lists,
/// lexicographically (a proper prefix sorts first).
pub fn lex_cmp_range(a: &[u64], b: &[u64], off: usize, len: usize) -> Ordering {
    let mut p = 0;
    while p < len {
        let n = (len - p).min(64);
        let x = get_chunk(a, off + p, n);
        let y = get_chunk(b, off + p, n);
        let d = x ^ y;
        if d != 0 {
            let bit = d.trailing_zeros() as usize;
            let at = p + bit;
            // the list that holds the smaller differing element is smaller, unless the other list ends there
            let (holder_is_a, other) = if (x >> bit) & 1 == 1 { (true, b) } else { (false, a) };
            let other_continues = any_above(other, off, len, at + 1);
            return match (holder_is_a, other_continues) {
                (true, true) => Ordering::Less,
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Greater,
                (false, false) => Ordering::Less,
            };
        }
        p += n;
    }
    Ordering::Equal
}

/// Position of the set held in the low `n <= 64` bits of `c` in the lexicographic order
/// of all subsets of `0..n` as sorted index lists, so that comparing ranks agrees with
/// `lex_cmp_range`. Every missing index below the maximum skips a whole subtree of the
/// prefix tree.
#[inline]
pub fn lex_rank(c: u64, n: usize) -> u64 {
    if c == 0 {
        return 0;
    }
    let top = 63 - c.leading_zeros() as usize;
    let gaps = !c & ((1u64 << top) - 1);
    u64::from(c.count_ones()) + (gaps.reverse_bits() >> (64 - n))
}

/// Copies a bit range of a packed record into a fresh set.
pub fn range_to_set(words: &[u64], off: usize, len: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    let mut p = 0;
    while p < len {
        let n = (len - p).min(64);
        let mut c = get_chunk(words, off + p, n);
        while c != 0 {
            let t = c.trailing_zeros() as usize;
            s.insert(p + t);
            c &= c - 1;
        }
        p += n;
    }
    s
}

/// Writes the members of `set` into the record at bit offset `off`.
pub fn set_into_range(words: &mut [u64], off: usize, set: &FixedBitSet) {
    for i in set.ones() {
        set_bit(words, off + i);
    }
}

/// Lexicographic comparison of two sets as sorted index lists.
pub fn lex_cmp_sets(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.ones().cmp(b.ones())
}
