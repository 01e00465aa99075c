//! Reduced words in a finitely generated free group, and enumeration of
//! conjugacy classes up to a word-length cutoff.
//!
//! Letters are nonzero `i32`: letter `i > 0` is the `i`-th generator
//! (1-based), `-i` its inverse.  Words are kept freely reduced at all times.

use std::collections::BTreeSet;

/// A freely reduced word.  Ordered by length, then lexicographically, so
/// sorted collections list short words first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord(Vec<i32>);

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl FreeWord {
    /// Freely reduce a letter sequence.  Panics on a zero letter.
    pub fn new<I: IntoIterator<Item = i32>>(letters: I) -> FreeWord {
        let mut stack: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        FreeWord(stack)
    }

    pub fn identity() -> FreeWord {
        FreeWord(Vec::new())
    }

    /// The single-letter word for generator `i` (negative for an inverse).
    pub fn generator(i: i32) -> FreeWord {
        assert!(i != 0);
        FreeWord(vec![i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, n: i32) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// Whether the first letter is not cancelled by the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => *a != -*b,
            _ => true,
        }
    }

    /// Write `self = conj * core * conj^{-1}` with `core` cyclically
    /// reduced; returns `(core, conj)`.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let mut core = self.0.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 && core[0] == -core[core.len() - 1] {
            conj.push(core[0]);
            core.pop();
            core.remove(0);
        }
        (FreeWord(core), FreeWord(conj))
    }

    /// Canonical representative of the conjugacy class: the least rotation
    /// of the cyclic reduction.
    pub fn conjugacy_representative(&self) -> FreeWord {
        let (core, _) = self.cyclic_reduce();
        if core.0.is_empty() {
            return core;
        }
        let n = core.0.len();
        let mut best: Option<Vec<i32>> = None;
        for k in 0..n {
            let rot: Vec<i32> = core.0[k..].iter().chain(core.0[..k].iter()).copied().collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
        FreeWord(best.expect("nonempty word has a rotation"))
    }
}

/// All conjugacy classes of nontrivial elements of the free group of the
/// given rank admitting a cyclically reduced representative of length at
/// most `maxlen`, listed by canonical representative, shortest first.
pub fn conjugacy_classes(rank: usize, maxlen: usize) -> Vec<FreeWord> {
    let mut seen: BTreeSet<FreeWord> = BTreeSet::new();
    let alphabet: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    // Depth-first enumeration of reduced words.
    let mut stack: Vec<i32> = Vec::new();
    fn dfs(
        stack: &mut Vec<i32>,
        alphabet: &[i32],
        maxlen: usize,
        seen: &mut BTreeSet<FreeWord>,
    ) {
        if stack.len() >= maxlen {
            return;
        }
        for &l in alphabet {
            if stack.last() == Some(&-l) {
                continue;
            }
            stack.push(l);
            let w = FreeWord(stack.clone());
            if w.is_cyclically_reduced() {
                seen.insert(w.conjugacy_representative());
            }
            dfs(stack, alphabet, maxlen, seen);
            stack.pop();
        }
    }
    dfs(&mut stack, &alphabet, maxlen, &mut seen);
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_word(r: &mut ChaCha8Rng, rank: i32, len: usize) -> FreeWord {
        FreeWord::new((0..len).map(|_| {
            let i = r.gen_range(1..=rank);
            if r.gen_bool(0.5) {
                i
            } else {
                -i
            }
        }))
    }

    #[test]
    fn reduction_and_group_laws() {
        assert_eq!(FreeWord::new([1, -1]), FreeWord::identity());
        assert_eq!(
            FreeWord::new([1, 2]).concat(&FreeWord::new([-2, 1])),
            FreeWord::new([1, 1])
        );
        assert_eq!(FreeWord::new([1, 2]).inverse(), FreeWord::new([-2, -1]));
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let w = rand_word(&mut r, 3, 12);
            let v = rand_word(&mut r, 3, 12);
            assert_eq!(w.concat(&w.inverse()), FreeWord::identity());
            // Associativity via a third word.
            let u = rand_word(&mut r, 3, 8);
            assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        }
    }

    #[test]
    fn powers() {
        let w = FreeWord::new([1, 2]);
        assert_eq!(w.pow(3), FreeWord::new([1, 2, 1, 2, 1, 2]));
        assert_eq!(w.pow(-2), FreeWord::new([-2, -1, -2, -1]));
        assert_eq!(w.pow(0), FreeWord::identity());
    }

    #[test]
    fn cyclic_reduction_factorization() {
        let w = FreeWord::new([1, 2, 1, -2, -1]);
        let (core, conj) = w.cyclic_reduce();
        assert_eq!(core, FreeWord::new([1]));
        assert_eq!(conj, FreeWord::new([1, 2]));
        let mut r = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let w = rand_word(&mut r, 3, 14);
            let (core, conj) = w.cyclic_reduce();
            assert!(core.is_cyclically_reduced());
            assert_eq!(conj.concat(&core).concat(&conj.inverse()), w);
        }
    }

    #[test]
    fn conjugacy_representative_is_conjugation_invariant() {
        assert_eq!(
            FreeWord::new([1, 2]).conjugacy_representative(),
            FreeWord::new([2, 1]).conjugacy_representative()
        );
        let mut r = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let w = rand_word(&mut r, 3, 10);
            let g = rand_word(&mut r, 3, 6);
            let conj = g.concat(&w).concat(&g.inverse());
            assert_eq!(
                w.conjugacy_representative(),
                conj.conjugacy_representative(),
                "representative differs for {w:?} conjugated by {g:?}"
            );
        }
    }

    /// Number of cyclically reduced words of length `n` in rank `r`:
    /// `(2r-1)^n + 1 + (r-1)(1 + (-1)^n)`.
    fn cyclically_reduced_count(r: usize, n: usize) -> u64 {
        let q = (2 * r - 1) as u64;
        q.pow(n as u32) + 1 + (r as u64 - 1) * if n % 2 == 0 { 2 } else { 0 }
    }

    fn euler_phi(mut n: u64) -> u64 {
        let mut result = n;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if n > 1 {
            result -= result / n;
        }
        result
    }

    /// Burnside count of rotation classes of cyclically reduced words of
    /// exact length `n` (fixed points of rotation by `d | n` are the
    /// period-`d` words, in bijection with cyclically reduced words of
    /// length `d`).
    fn class_count_oracle(r: usize, n: usize) -> u64 {
        let mut total = 0;
        for d in 1..=n {
            if n % d == 0 {
                total += euler_phi((n / d) as u64) * cyclically_reduced_count(r, d);
            }
        }
        total / n as u64
    }

    #[test]
    fn enumeration_matches_burnside_oracle() {
        // Pinned small values first.
        assert_eq!(conjugacy_classes(2, 1).len(), 4);
        assert_eq!(conjugacy_classes(2, 2).len(), 12);
        for rank in 1..=3 {
            let mut cumulative = 0;
            for maxlen in 1..=5 {
                cumulative += class_count_oracle(rank, maxlen);
                let classes = conjugacy_classes(rank, maxlen);
                assert_eq!(
                    classes.len() as u64,
                    cumulative,
                    "class count mismatch at rank {rank}, maxlen {maxlen}"
                );
                // Every representative is canonical and cyclically reduced.
                for w in &classes {
                    assert!(w.is_cyclically_reduced());
                    assert_eq!(w, &w.conjugacy_representative());
                    assert!(!w.is_empty() && w.len() <= maxlen);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_shortest_first() {
        let classes = conjugacy_classes(2, 4);
        for pair in classes.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(classes.windows(2).all(|p| p[0].len() <= p[1].len()));
    }
}
