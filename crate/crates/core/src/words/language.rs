//! Counting and listing the language of the `B`-free subshift.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bset::BSet;
use crate::words::search::{Leaf, Search, MAX_SEARCH_LEN};
use crate::words::{eta_window, Word, WordError};
use crate::Budget;

/// Number of admissible words of length `n`.
pub fn count_language(n: usize, bset: &BSet, budget: Budget) -> Result<u128, WordError> {
    let mut search = Search::new(n, 0, bset, budget)?;
    let mut count = 0u128;
    search.run(|_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// The first `cap` admissible words of length `n` in lexicographic order.
pub fn enumerate_language(
    n: usize,
    bset: &BSet,
    cap: usize,
    budget: Budget,
) -> Result<impl Iterator<Item = Word>, WordError> {
    let mut search = Search::new(n, 0, bset, budget)?;
    let mut out = Vec::new();
    if cap > 0 {
        search.run(|leaf| {
            out.push(Word::from_u128(leaf.bits, n));
            if out.len() >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
    }
    Ok(out.into_iter())
}

/// Calls `visit` on every admissible word `C' >= c`, in lexicographic order.
pub fn for_each_superset<F>(c: &Word, bset: &BSet, budget: Budget, visit: F) -> Result<(), WordError>
where
    F: FnMut(&Leaf<'_>) -> ControlFlow<()>,
{
    let forced = c.to_u128().filter(|_| c.len() <= MAX_SEARCH_LEN).ok_or(WordError::WordTooLong {
        len: c.len(),
        max: MAX_SEARCH_LEN,
    })?;
    let mut search = Search::new(c.len(), forced, bset, budget)?;
    search.run(visit)
}

/// All admissible words dominating `c`; empty when `c` itself has an
/// inadmissible support.
pub fn supersets(c: &Word, bset: &BSet, budget: Budget) -> Result<impl Iterator<Item = Word>, WordError> {
    let n = c.len();
    let mut out = Vec::new();
    for_each_superset(c, bset, budget, |leaf| {
        out.push(Word::from_u128(leaf.bits, n));
        ControlFlow::Continue(())
    })?;
    Ok(out.into_iter())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxOnesMethod {
    /// Branch and bound over the residue classes removed by each element
    /// `b <= n`.
    Exact,
    /// Best window of `eta` on `[1, segment]`.
    Scan { segment: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxOnes {
    pub count: usize,
    pub witness: Word,
}

/// Whether `a` has a one at the first position where the words differ.
fn ones_earlier(a: u128, b: u128) -> bool {
    let diff = a ^ b;
    diff != 0 && a >> diff.trailing_zeros() & 1 == 1
}

struct Bnb<'a> {
    n: usize,
    cover: &'a [Vec<u128>],
    best_count: u32,
    best_free: u128,
    nodes: u64,
    max_nodes: u64,
}

impl Bnb<'_> {
    fn go(&mut self, k: usize, covered: u128, full: u128) -> Result<(), WordError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(WordError::EnumerationBudgetExceeded(self.max_nodes));
        }
        let free = full & !covered;
        let upper = free.count_ones();
        if upper < self.best_count {
            return Ok(());
        }
        if k == self.cover.len() {
            if upper > self.best_count || ones_earlier(free, self.best_free) {
                self.best_count = upper;
                self.best_free = free;
            }
            return Ok(());
        }
        for r in 0..self.cover[k].len() {
            let mask = self.cover[k][r];
            self.go(k + 1, covered | mask, full)?;
        }
        Ok(())
    }
}

/// The largest number of ones in an admissible word of length `n`. Among the
/// maximizers the witness is the one whose ones come earliest, i.e. the
/// lexicographically greatest.
pub fn max_ones(n: usize, bset: &BSet, method: MaxOnesMethod, budget: Budget) -> Result<MaxOnes, WordError> {
    if n == 0 {
        return Err(WordError::Empty);
    }
    match method {
        MaxOnesMethod::Exact => {
            if n > 128 {
                return Err(WordError::WordTooLong { len: n, max: 128 });
            }
            let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
            let cover: Vec<Vec<u128>> = bset
                .elements()
                .iter()
                .take_while(|&&b| b <= n as u64)
                .map(|&b| {
                    (0..b as usize)
                        .map(|r| (r..n).step_by(b as usize).fold(0u128, |m, j| m | 1u128 << j))
                        .collect()
                })
                .collect();
            let mut bnb = Bnb {
                n,
                cover: &cover,
                best_count: 0,
                best_free: 0,
                nodes: 0,
                max_nodes: budget.max_nodes,
            };
            bnb.go(0, 0, full)?;
            debug_assert!(bnb.n == n);
            Ok(MaxOnes {
                count: bnb.best_count as usize,
                witness: Word::from_u128(bnb.best_free, n),
            })
        }
        MaxOnesMethod::Scan { segment } => {
            if segment < n as u64 {
                return Err(WordError::WindowTooShort { segment, n });
            }
            let eta = eta_window(bset, 1, segment as i64)?.word;
            let mut ones = eta.slice(0, n).ones_count();
            let mut best = (ones, 0usize);
            for s in 1..=(segment as usize - n) {
                ones = ones + eta.get(s + n - 1) as usize - eta.get(s - 1) as usize;
                if ones > best.0 {
                    best = (ones, s);
                } else if ones == best.0 {
                    let cand = eta.slice(s, s + n);
                    if cand.cmp_lex(&eta.slice(best.1, best.1 + n)).is_gt() {
                        best = (ones, s);
                    }
                }
            }
            Ok(MaxOnes {
                count: best.0,
                witness: eta.slice(best.1, best.1 + n),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::is_admissible;
    use alloc::string::ToString;
    use alloc::vec;

    fn budget() -> Budget {
        Budget::default()
    }

    fn brute_count(n: usize, bset: &BSet) -> u128 {
        (0u128..1 << n)
            .filter(|&m| is_admissible(&Word::from_u128(m, n), bset))
            .count() as u128
    }

    #[test]
    fn count_examples() {
        let b2 = BSet::finite(vec![2]).unwrap();
        let b23 = BSet::finite(vec![2, 3]).unwrap();
        assert_eq!(count_language(1, &b23, budget()).unwrap(), 2);
        assert_eq!(count_language(2, &b2, budget()).unwrap(), 3);
        assert_eq!(count_language(6, &b23, budget()).unwrap(), 13);
        assert_eq!(count_language(0, &b2, budget()), Err(WordError::Empty));
        for n in 1..=12 {
            assert_eq!(count_language(n, &b23, budget()).unwrap(), brute_count(n, &b23));
        }
        let b = BSet::finite(vec![2, 9, 25]).unwrap();
        for n in [5, 9, 13] {
            assert_eq!(count_language(n, &b, budget()).unwrap(), brute_count(n, &b));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let b2 = BSet::finite(vec![2]).unwrap();
        let res = count_language(40, &b2, Budget { max_nodes: 1000 });
        assert_eq!(res, Err(WordError::EnumerationBudgetExceeded(1000)));
    }

    #[test]
    fn enumerate_examples() {
        let b2 = BSet::finite(vec![2]).unwrap();
        let words: Vec<_> = enumerate_language(2, &b2, 10, budget()).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01", "10"]);
        let first: Vec<_> = enumerate_language(1, &b2, 1, budget()).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(first, ["0"]);
        let three: Vec<_> = enumerate_language(3, &b2, 100, budget()).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(three, ["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn superset_examples() {
        let b2 = BSet::finite(vec![2]).unwrap();
        let s: Vec<_> = supersets(&"00".parse().unwrap(), &b2, budget()).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(s, ["00", "01", "10"]);
        assert_eq!(supersets(&"11".parse().unwrap(), &b2, budget()).unwrap().count(), 0);
        let top: Word = "10101".parse().unwrap();
        let s: Vec<_> = supersets(&top, &b2, budget()).unwrap().collect();
        assert_eq!(s, vec![top]);
    }

    #[test]
    fn max_ones_examples() {
        let b2 = BSet::finite(vec![2]).unwrap();
        let b23 = BSet::finite(vec![2, 3]).unwrap();
        let m = max_ones(6, &b2, MaxOnesMethod::Exact, budget()).unwrap();
        assert_eq!(m.count, 3);
        assert_eq!(m.witness.to_string(), "101010");
        let m = max_ones(6, &b23, MaxOnesMethod::Exact, budget()).unwrap();
        assert_eq!(m.count, 2);
        // Brute force over all 64 words of length 6.
        let brute = (0u128..64)
            .map(|x| Word::from_u128(x, 6))
            .filter(|w| is_admissible(w, &b23))
            .map(|w| w.ones_count())
            .max()
            .unwrap();
        assert_eq!(brute, 2);
        assert!(is_admissible(&m.witness, &b23));
        let scan = max_ones(6, &b23, MaxOnesMethod::Scan { segment: 60 }, budget()).unwrap();
        assert!(scan.count <= m.count);
        assert!(is_admissible(&scan.witness, &b23));
        assert_eq!(
            max_ones(6, &b23, MaxOnesMethod::Scan { segment: 5 }, budget()),
            Err(WordError::WindowTooShort { segment: 5, n: 6 })
        );
    }
}
