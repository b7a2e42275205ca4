//! Depth-first enumeration of admissible words.
//!
//! The search walks positions left to right, trying `0` before `1`, so
//! leaves arrive in lexicographic order. For every listed element
//! `b <= n + 1` it keeps a bitmask of the residues occupied by the ones
//! placed so far; a branch dies as soon as some mask, together with the
//! residues of the forced ones still to come, fills up. Masks are stacked by
//! the number of ones placed, so choosing `0` copies nothing.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bset::BSet;
use crate::words::WordError;
use crate::Budget;

/// Longest word the search kernel handles.
pub const MAX_SEARCH_LEN: usize = 127;

/// A complete admissible word reached by the search.
pub struct Leaf<'s> {
    pub bits: u128,
    pub len: usize,
    pub ones: u32,
    masks: &'s [u128],
    moduli: &'s [u64],
    full: &'s [u128],
}

impl Leaf<'_> {
    /// Whether setting a one at `pos` (beyond the word) keeps it admissible
    /// for every tracked modulus.
    pub fn accepts_one_at(&self, pos: usize) -> bool {
        self.moduli
            .iter()
            .zip(self.masks)
            .zip(self.full)
            .all(|((&b, &m), &full)| m | (1u128 << (pos as u64 % b)) != full)
    }
}

pub(crate) struct Search {
    n: usize,
    forced: u128,
    moduli: Vec<u64>,
    full: Vec<u128>,
    masks: Vec<u128>,
    /// Residues of the forced ones at positions `>= pos`, per modulus.
    ahead: Vec<u128>,
    max_nodes: u64,
    nodes: u64,
}

impl Search {
    /// Search over admissible words of length `n` whose ones include the
    /// `forced` positions.
    pub(crate) fn new(n: usize, forced: u128, bset: &BSet, budget: Budget) -> Result<Search, WordError> {
        if n == 0 {
            return Err(WordError::Empty);
        }
        if n > MAX_SEARCH_LEN {
            return Err(WordError::WordTooLong {
                len: n,
                max: MAX_SEARCH_LEN,
            });
        }
        let moduli: Vec<u64> = bset
            .elements()
            .iter()
            .copied()
            .take_while(|&b| b <= n as u64 + 1)
            .collect();
        let full = moduli
            .iter()
            .map(|&b| if b == 128 { u128::MAX } else { (1u128 << b) - 1 })
            .collect();
        let k = moduli.len();
        let mut ahead = vec![0u128; (n + 1) * k];
        for pos in (0..n).rev() {
            for i in 0..k {
                let mut m = ahead[(pos + 1) * k + i];
                if forced >> pos & 1 == 1 {
                    m |= 1u128 << (pos as u64 % moduli[i]);
                }
                ahead[pos * k + i] = m;
            }
        }
        Ok(Search {
            n,
            forced,
            moduli,
            full,
            masks: vec![0; (n + 2) * k.max(1)],
            ahead,
            max_nodes: budget.max_nodes,
            nodes: 0,
        })
    }

    #[allow(dead_code)]
    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Visits every leaf in lexicographic order until `visit` breaks.
    pub(crate) fn run<F>(&mut self, mut visit: F) -> Result<(), WordError>
    where
        F: FnMut(&Leaf<'_>) -> ControlFlow<()>,
    {
        self.nodes = 0;
        let k = self.moduli.len();
        self.masks[..k].fill(0);
        if (0..k).any(|i| self.ahead[i] == self.full[i]) {
            return Ok(());
        }
        self.dfs(0, 0, 0, &mut visit).map(|_| ())
    }

    fn place_one(&mut self, pos: usize, level: usize) -> bool {
        let k = self.moduli.len();
        let (head, tail) = self.masks.split_at_mut((level + 1) * k);
        let cur = &head[level * k..];
        let next = &mut tail[..k];
        let ahead = &self.ahead[(pos + 1) * k..(pos + 2) * k];
        for i in 0..k {
            let m = cur[i] | (1u128 << (pos as u64 % self.moduli[i]));
            if m | ahead[i] == self.full[i] {
                return false;
            }
            next[i] = m;
        }
        true
    }

    fn dfs<F>(&mut self, pos: usize, bits: u128, level: usize, visit: &mut F) -> Result<ControlFlow<()>, WordError>
    where
        F: FnMut(&Leaf<'_>) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(WordError::EnumerationBudgetExceeded(self.max_nodes));
        }
        if pos == self.n {
            let k = self.moduli.len();
            let leaf = Leaf {
                bits,
                len: self.n,
                ones: level as u32,
                masks: &self.masks[level * k..(level + 1) * k],
                moduli: &self.moduli,
                full: &self.full,
            };
            return Ok(visit(&leaf));
        }
        let forced = self.forced >> pos & 1 == 1;
        if !forced {
            if let ControlFlow::Break(()) = self.dfs(pos + 1, bits, level, visit)? {
                return Ok(ControlFlow::Break(()));
            }
        }
        if self.place_one(pos, level) {
            return self.dfs(pos + 1, bits | 1u128 << pos, level + 1, visit);
        }
        Ok(ControlFlow::Continue(()))
    }
}
