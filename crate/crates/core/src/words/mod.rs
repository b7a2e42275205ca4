//! Finite 0/1 words, `B`-admissibility, the hereditary order and windows of
//! the characteristic sequence `eta` of the `B`-free integers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::bset::BSet;

pub mod language;
pub mod search;

pub use language::{count_language, enumerate_language, for_each_superset, max_ones, supersets, MaxOnes, MaxOnesMethod};
pub use search::{Leaf, MAX_SEARCH_LEN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("words have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid symbol {0:?}, expected '0' or '1'")]
    InvalidSymbol(char),
    #[error("empty word")]
    Empty,
    #[error("word length {len} exceeds the supported maximum {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("enumeration budget of {0} nodes exceeded")]
    EnumerationBudgetExceeded(u64),
    #[error("scan segment of length {segment} is shorter than the window {n}")]
    WindowTooShort { segment: u64, n: usize },
    #[error("invalid window [{0}, {1}]")]
    InvalidWindow(i64, i64),
}

/// A finite word over `{0, 1}` packed into 64-bit blocks; bit `i` of the
/// word is bit `i % 64` of block `i / 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    blocks: Vec<u64>,
}

impl Word {
    pub fn zeros(len: usize) -> Word {
        Word {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Word {
        let mut w = Word::zeros(len);
        for i in 0..len {
            w.set(i, true);
        }
        w
    }

    pub fn from_bits(bits: &[bool]) -> Word {
        let mut w = Word::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            w.set(i, b);
        }
        w
    }

    /// Word of length `len` whose bit `i` is bit `i` of `mask`.
    pub fn from_u128(mask: u128, len: usize) -> Word {
        assert!(len <= 128);
        let mut w = Word::zeros(len);
        for (i, block) in w.blocks.iter_mut().enumerate() {
            *block = (mask >> (64 * i)) as u64;
        }
        w.clear_padding();
        w
    }

    /// Bit mask of a word of length at most 128.
    pub fn to_u128(&self) -> Option<u128> {
        (self.len <= 128).then(|| {
            self.blocks
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| acc | ((b as u128) << (64 * i)))
        })
    }

    fn clear_padding(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let m = 1u64 << (i % 64);
        if bit {
            self.blocks[i / 64] |= m;
        } else {
            self.blocks[i / 64] &= !m;
        }
    }

    pub fn ones_count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn zeros_count(&self) -> usize {
        self.len - self.ones_count()
    }

    pub fn ones_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn zeros_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| !self.get(i))
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The subword on positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        assert!(start <= end && end <= self.len);
        let mut w = Word::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                w.set(i - start, true);
            }
        }
        w
    }

    /// This word followed by one more symbol.
    pub fn pushed(&self, bit: bool) -> Word {
        let mut w = Word::zeros(self.len + 1);
        for i in self.ones_positions() {
            w.set(i, true);
        }
        w.set(self.len, bit);
        w
    }

    /// Coordinatewise order: `self <= other` iff every 1 of `self` is a 1 of
    /// `other`.
    pub fn le(&self, other: &Word) -> Result<bool, WordError> {
        if self.len != other.len {
            return Err(WordError::LengthMismatch(self.len, other.len));
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0))
    }

    /// Coordinatewise product, the block form of the map `Q`.
    pub fn and(&self, other: &Word) -> Result<Word, WordError> {
        if self.len != other.len {
            return Err(WordError::LengthMismatch(self.len, other.len));
        }
        Ok(Word {
            len: self.len,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a & b).collect(),
        })
    }

    /// Lexicographic order with position 0 most significant and `0 < 1`.
    pub fn cmp_lex(&self, other: &Word) -> Ordering {
        for (a, b) in self.bits().zip(other.bits()) {
            match (a, b) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(WordError::Empty);
        }
        let mut w = Word::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                other => return Err(WordError::InvalidSymbol(other)),
            }
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Whether the support of `w` misses a residue class modulo every listed
/// element `b <= |w|`.
pub fn is_admissible(w: &Word, bset: &BSet) -> bool {
    let n = w.len() as u64;
    let ones: Vec<u64> = w.ones_positions().map(|i| i as u64).collect();
    for &b in bset.elements().iter().take_while(|&&b| b <= n) {
        if (ones.len() as u64) < b {
            continue;
        }
        let mut seen = vec![false; b as usize];
        let mut distinct = 0u64;
        for &i in &ones {
            let r = (i % b) as usize;
            if !seen[r] {
                seen[r] = true;
                distinct += 1;
            }
        }
        if distinct == b {
            return false;
        }
    }
    true
}

/// A window of `eta` on `[start, start + len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaWindow {
    pub word: Word,
    pub start: i64,
    /// Every element of `B` up to the largest `|position|` is listed, so the
    /// bits are the true values of `eta`.
    pub exact: bool,
}

/// `eta` on the closed window `[a, b]`: bit `n` is 1 iff no listed element
/// divides `n`.
pub fn eta_window(bset: &BSet, a: i64, b: i64) -> Result<EtaWindow, WordError> {
    if a > b {
        return Err(WordError::InvalidWindow(a, b));
    }
    let len = (b - a + 1) as usize;
    let mut word = Word::ones(len);
    for &e in bset.elements() {
        let e = e as i64;
        let mut m = a.div_euclid(e) * e;
        if m < a {
            m += e;
        }
        while m <= b {
            word.set((m - a) as usize, false);
            m += e;
        }
    }
    let reach = a.unsigned_abs().max(b.unsigned_abs());
    Ok(EtaWindow {
        word,
        start: a,
        exact: bset.complete_up_to(reach),
    })
}
