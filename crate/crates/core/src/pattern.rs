//! Pattern containment in classical, consecutive, and vincular modes.
//!
//! A [`PatternSpec`] is a pattern body plus the set of body positions `i`
//! (1-based, `1 <= i < k`) whose occurrence entries at `i` and `i + 1` must
//! be adjacent in the host. The empty set is classical containment; the full
//! set `{1, ..., k-1}` is consecutive containment.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::perm::Permutation;

pub const MAX_PATTERN_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    body: Permutation,
    /// Bit `i - 1` set means positions `i` and `i + 1` are adjacent.
    adjacency: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Consecutive,
    Vincular,
}

impl PatternSpec {
    pub fn new(body: Permutation, adjacent_positions: &[usize]) -> Result<Self> {
        let k = body.len();
        if k < 2 {
            return Err(invalid(format!("pattern {body} is shorter than 2")));
        }
        if k > MAX_PATTERN_LEN {
            return Err(invalid(format!("pattern longer than {MAX_PATTERN_LEN}")));
        }
        let mut adjacency = 0u32;
        for &i in adjacent_positions {
            if i == 0 || i >= k {
                return Err(invalid(format!(
                    "adjacency position {i} outside 1..{k} for pattern {body}"
                )));
            }
            adjacency |= 1 << (i - 1);
        }
        Ok(PatternSpec { body, adjacency })
    }

    pub fn classical(body: Permutation) -> Result<Self> {
        Self::new(body, &[])
    }

    pub fn consecutive(body: Permutation) -> Result<Self> {
        let all: Vec<usize> = (1..body.len()).collect();
        Self::new(body, &all)
    }

    pub fn vincular(body: Permutation, adjacent_positions: &[usize]) -> Result<Self> {
        Self::new(body, adjacent_positions)
    }

    pub fn body(&self) -> &Permutation {
        &self.body
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn adjacent_positions(&self) -> Vec<usize> {
        (1..self.len()).filter(|&i| self.is_adjacent(i)).collect()
    }

    fn is_adjacent(&self, i: usize) -> bool {
        self.adjacency >> (i - 1) & 1 == 1
    }

    fn full_mask(&self) -> u32 {
        (1u32 << (self.len() - 1)) - 1
    }

    pub fn mode(&self) -> Mode {
        if self.adjacency == 0 {
            Mode::Classical
        } else if self.adjacency == self.full_mask() {
            Mode::Consecutive
        } else {
            Mode::Vincular
        }
    }

    /// Same body with the adjacency set mirrored, so that occurrences in
    /// `host` correspond to occurrences of the reversed pattern in the
    /// reversed host.
    pub fn reverse(&self) -> Self {
        let k = self.len();
        let adj: Vec<usize> = self.adjacent_positions().iter().map(|&i| k - i).collect();
        PatternSpec::new(self.body.reverse(), &adj).expect("mirrored adjacency is in range")
    }

    pub fn complement(&self) -> Self {
        PatternSpec {
            body: self.body.complement(),
            adjacency: self.adjacency,
        }
    }

    /// Whether `host` (a sequence of distinct integers) has an occurrence.
    pub fn is_contained_in(&self, host: &[u8]) -> bool {
        if self.mode() == Mode::Consecutive {
            return host.windows(self.len()).any(|w| self.order_matches(w));
        }
        let mut pos = [0usize; MAX_PATTERN_LEN];
        (0..host.len()).any(|p| {
            pos[0] = p;
            self.extend(host, &mut pos, 1)
        })
    }

    /// Whether `host` has an occurrence whose first entry is `host[0]`.
    ///
    /// When `host[1..]` avoids the pattern, this is equivalent to
    /// [`PatternSpec::is_contained_in`].
    pub fn occurs_at_front(&self, host: &[u8]) -> bool {
        if host.is_empty() {
            return false;
        }
        if self.mode() == Mode::Consecutive {
            return host.len() >= self.len() && self.order_matches(&host[..self.len()]);
        }
        let mut pos = [0usize; MAX_PATTERN_LEN];
        self.extend(host, &mut pos, 1)
    }

    fn order_matches(&self, window: &[u8]) -> bool {
        let b = self.body.entries();
        (0..b.len()).all(|j| (0..j).all(|i| (window[j] < window[i]) == (b[j] < b[i])))
    }

    // pos[..j] holds a partial occurrence; try to place body position j.
    fn extend(&self, host: &[u8], pos: &mut [usize; MAX_PATTERN_LEN], j: usize) -> bool {
        let k = self.len();
        if j == k {
            return true;
        }
        let b = self.body.entries();
        let first = pos[j - 1] + 1;
        let Some(last) = host.len().checked_sub(k - j) else {
            return false;
        };
        let last = if self.is_adjacent(j) { last.min(first) } else { last };
        for p in first..=last {
            let v = host[p];
            if (0..j).all(|i| (v < host[pos[i]]) == (b[j] < b[i])) {
                pos[j] = p;
                if self.extend(host, pos, j + 1) {
                    return true;
                }
            }
        }
        false
    }
}

/// `pat` occurs in `host` honoring its adjacency constraints.
pub fn contains(host: &Permutation, pat: &PatternSpec) -> bool {
    pat.is_contained_in(host.entries())
}

pub fn avoids_all(host: &[u8], pats: &[PatternSpec]) -> bool {
    pats.iter().all(|p| !p.is_contained_in(host))
}

impl fmt::Display for PatternSpec {
    /// Classical patterns print bare; consecutive ones are wrapped in
    /// underscores; vincular ones print the adjacency after a colon.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode() {
            Mode::Classical => write!(f, "{}", self.body),
            Mode::Consecutive => write!(f, "_{}_", self.body),
            Mode::Vincular => {
                write!(f, "{}:", self.body)?;
                for i in self.adjacent_positions() {
                    write!(f, "{i}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for PatternSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::symmetric_group;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn modes_on_3142() {
        let host = p("3142");
        assert!(!contains(&host, &PatternSpec::consecutive(p("231")).unwrap()));
        assert!(contains(&host, &PatternSpec::classical(p("231")).unwrap()));
    }

    #[test]
    fn vincular_first_three_adjacent() {
        let host = p("51324");
        let v = PatternSpec::vincular(p("4213"), &[1, 2]).unwrap();
        assert_eq!(v.mode(), Mode::Vincular);
        assert!(!contains(&host, &v));
        assert!(contains(&host, &PatternSpec::classical(p("4213")).unwrap()));
        assert!(contains(&p("53214"), &v));
        assert!(!contains(&p("52314"), &v));
        assert!(contains(&p("32154"), &PatternSpec::vincular(p("3214"), &[1, 2]).unwrap()));
    }

    #[test]
    fn self_occurrence() {
        for pi in symmetric_group(4) {
            for adj in [vec![], vec![1], vec![2, 3], vec![1, 2, 3]] {
                assert!(contains(&pi, &PatternSpec::new(pi.clone(), &adj).unwrap()));
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(PatternSpec::classical(p("1")).is_err());
        assert!(PatternSpec::vincular(p("123"), &[3]).is_err());
        assert!(PatternSpec::vincular(p("123"), &[0]).is_err());
    }

    #[test]
    fn empty_host_avoids_everything() {
        let e = Permutation::default();
        assert!(!contains(&e, &PatternSpec::classical(p("12")).unwrap()));
        assert!(!contains(&e, &PatternSpec::consecutive(p("21")).unwrap()));
    }

    #[test]
    fn reverse_pattern_matches_reverse_host() {
        let pat = PatternSpec::vincular(p("4213"), &[1, 2]).unwrap();
        let rev = pat.reverse();
        assert_eq!(rev.adjacent_positions(), vec![2, 3]);
        for pi in symmetric_group(6) {
            assert_eq!(contains(&pi, &pat), contains(&pi.reverse(), &rev));
        }
    }

    #[test]
    fn twentyone_classical_iff_consecutive() {
        let cl = PatternSpec::classical(p("21")).unwrap();
        let co = PatternSpec::consecutive(p("21")).unwrap();
        for n in 0..=8 {
            for pi in symmetric_group(n) {
                assert_eq!(contains(&pi, &cl), contains(&pi, &co), "{pi}");
            }
        }
    }

    // Independent containment oracle: every subset of positions, standardized.
    fn brute_contains(host: &[u8], pat: &PatternSpec) -> bool {
        let n = host.len();
        let k = pat.len();
        let adj = pat.adjacent_positions();
        (0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|m| {
            let pos: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            adj.iter().all(|&i| pos[i] == pos[i - 1] + 1)
                && crate::perm::standardize(&pos.iter().map(|&i| host[i]).collect::<Vec<_>>())
                    .unwrap()
                    == *pat.body()
        })
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|n| {
            Just((1..=n as u8).collect::<Vec<u8>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matcher_agrees_with_subset_oracle(
            host in arb_perm(9),
            body in arb_perm(4).prop_filter("len >= 2", |b| b.len() >= 2),
            mask in 0u32..8,
        ) {
            let k = body.len();
            let adj: Vec<usize> = (1..k).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let pat = PatternSpec::new(body, &adj).unwrap();
            prop_assert_eq!(contains(&host, &pat), brute_contains(host.entries(), &pat));
        }

        #[test]
        fn consecutive_implies_vincular_implies_classical(host in arb_perm(9), body in arb_perm(4).prop_filter("len >= 2", |b| b.len() >= 2)) {
            let k = body.len();
            let co = PatternSpec::consecutive(body.clone()).unwrap();
            let vi = PatternSpec::vincular(body.clone(), &[1]).unwrap();
            let cl = PatternSpec::classical(body).unwrap();
            if contains(&host, &co) { prop_assert!(contains(&host, &vi)); }
            if contains(&host, &vi) { prop_assert!(contains(&host, &cl)); }
            prop_assert!(k >= 2);
        }

        #[test]
        fn involutions(pi in arb_perm(10)) {
            prop_assert_eq!(pi.reverse().reverse(), pi.clone());
            prop_assert_eq!(pi.complement().complement(), pi.clone());
            prop_assert_eq!(crate::perm::standardize(pi.entries()).unwrap(), pi.clone());
            if pi.len() >= 2 {
                prop_assert_eq!(pi.hat().unwrap().hat().unwrap(), pi.clone());
            }
        }
    }
}
