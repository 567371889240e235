use super::GeneratorSet;

/// `<A> ∩ [0, N]` as a bitset; bit `n` is set iff `n` is a nonnegative
/// integer combination of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipTable {
    bound: u64,
    bits: Vec<u64>,
}

impl MembershipTable {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn member(&self, n: u64) -> bool {
        n <= self.bound && self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.bound).filter(move |&n| self.member(n))
    }

    /// `|<A> ∩ [1, N]|`.
    pub fn count_positive(&self) -> u64 {
        let all: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        all - 1
    }

    /// Largest non-member in `[1, N]`, or `None` when there is none.
    pub fn largest_gap(&self) -> Option<u64> {
        (1..=self.bound).rev().find(|&n| !self.member(n))
    }

    /// Number of non-members in `[1, N]`.
    pub fn gap_count(&self) -> u64 {
        self.bound - self.count_positive()
    }

    fn set(&mut self, n: u64) {
        self.bits[(n / 64) as usize] |= 1 << (n % 64);
    }

    /// Bits `start .. start + 64` as one word; positions below zero read as 0.
    fn window(&self, start: i64) -> u64 {
        if start <= -64 {
            return 0;
        }
        if start < 0 {
            return self.bits[0] << (-start) as u32;
        }
        let idx = (start / 64) as usize;
        let sh = (start % 64) as u32;
        let lo = self.bits[idx] >> sh;
        if sh == 0 {
            lo
        } else {
            lo | self.bits.get(idx + 1).copied().unwrap_or(0) << (64 - sh)
        }
    }

    fn close_under(&mut self, a: u64) {
        if a > self.bound {
            return;
        }
        if a < 64 {
            for n in a..=self.bound {
                if self.member(n - a) {
                    self.set(n);
                }
            }
            return;
        }
        // With a >= 64 the source window of word j ends before word j, so a
        // single ascending sweep sees final values.
        for j in (a / 64) as usize..self.bits.len() {
            let src = self.window(j as i64 * 64 - a as i64);
            self.bits[j] |= src;
        }
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let used = (self.bound % 64) + 1;
        if used < 64 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << used) - 1;
        }
    }
}

/// Dynamic-programming closure of the generators up to `n`. Works for any
/// generator set, including gcd > 1.
pub fn semigroup_prefix(gens: &GeneratorSet, n: u64) -> MembershipTable {
    semigroup_prefix_of(gens.elements(), n)
}

pub(crate) fn semigroup_prefix_of(gens: &[u64], n: u64) -> MembershipTable {
    let words = (n / 64 + 1) as usize;
    let mut table = MembershipTable {
        bound: n,
        bits: vec![0; words],
    };
    table.set(0);
    for &a in gens {
        debug_assert!(a >= 1);
        table.close_under(a);
    }
    table
}
