//! Permutations in one-line notation and the elementary operations on them.
//!
//! Entries are the values `1..=n`, stored as `u8`, so lengths are capped at
//! [`MAX_LEN`]. The empty permutation is a valid value.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

pub const MAX_LEN: usize = u8::MAX as usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    /// Validates that `entries` is a bijection on `1..=n`.
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n > MAX_LEN {
            return Err(invalid(format!("length {n} exceeds {MAX_LEN}")));
        }
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(invalid(format!("entry {v} out of range 1..={n}")));
            }
            if seen[v] {
                return Err(invalid(format!("entry {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok(), "{entries:?}");
        Permutation(entries)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    /// `n (n-1) ... 1`
    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n as u8).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u8> {
        self.0
    }

    pub fn reverse(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Self {
        let k = self.len() as u8 + 1;
        Permutation(self.0.iter().map(|&v| k - v).collect())
    }

    /// Swaps the first two entries.
    pub fn hat(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(invalid("hat needs a permutation of length at least 2"));
        }
        let mut e = self.0.clone();
        e.swap(0, 1);
        Ok(Permutation(e))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Position (0-based) of value `v`.
    pub fn position(&self, v: u8) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    pub fn run_decomposition(&self, direction: Direction) -> RunDecomposition {
        RunDecomposition::of(&self.0, direction)
    }

    /// Entries smaller than everything before them, in order.
    pub fn left_to_right_minima(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut min = u8::MAX;
        for &v in &self.0 {
            if v < min {
                out.push(v);
                min = v;
            }
        }
        out
    }

    /// Number of interior peaks plus valleys.
    pub fn peaks_valleys(&self) -> usize {
        peaks_valleys_of(&self.0)
    }

    /// Every ascending run's entry set is an interval of consecutive integers.
    pub fn is_reverse_layered(&self) -> bool {
        self.run_decomposition(Direction::Ascending)
            .runs()
            .iter()
            .all(|r| r.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// The patterns of length `len - 1` obtained by deleting one entry.
    pub fn one_point_deletions(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = (0..self.len())
            .map(|i| {
                let removed = self.0[i];
                Permutation(
                    self.0
                        .iter()
                        .filter(|&&v| v != removed)
                        .map(|&v| if v > removed { v - 1 } else { v })
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Lexicographic rank within `S_n`, `0..n!`.
    pub fn rank(&self) -> u64 {
        let n = self.len();
        let mut rank = 0u64;
        let mut used = 0u64;
        for (i, &v) in self.0.iter().enumerate() {
            let below = (used & ((1u64 << (v - 1)) - 1)).count_ones() as u64;
            let smaller_unused = (v as u64 - 1) - below;
            rank = rank * (n - i) as u64 + smaller_unused;
            used |= 1 << (v - 1);
        }
        rank
    }

    /// Inverse of [`Permutation::rank`]; `n` must be at most 20.
    pub fn unrank(n: usize, mut rank: u64) -> Self {
        let mut digits = vec![0u64; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut avail: Vec<u8> = (1..=n as u8).collect();
        Permutation(digits.iter().map(|&d| avail.remove(d as usize)).collect())
    }
}

/// Number of interior peaks plus valleys of a word of distinct values.
pub fn peaks_valleys_of(word: &[u8]) -> usize {
    word.windows(3).filter(|w| (w[0] < w[1]) == (w[2] < w[1])).count()
}

/// Relative order of a sequence of distinct integers, as a permutation.
pub fn standardize<T: Ord + Copy>(word: &[T]) -> Result<Permutation> {
    let mut idx: Vec<usize> = (0..word.len()).collect();
    idx.sort_by_key(|&i| word[i]);
    if idx.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(invalid("standardize: entries are not distinct"));
    }
    if word.len() > MAX_LEN {
        return Err(invalid(format!("length {} exceeds {MAX_LEN}", word.len())));
    }
    let mut out = vec![0u8; word.len()];
    for (r, &i) in idx.iter().enumerate() {
        out[i] = r as u8 + 1;
    }
    Ok(Permutation(out))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(&self.0, f)
    }
}

/// Writes a word in the permutation text form: digits run together when
/// every entry is a single digit, comma separated otherwise.
pub(crate) fn fmt_word(w: &[u8], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let sep = if w.len() >= 10 || w.iter().any(|&v| v >= 10) { "," } else { "" };
    for (i, v) in w.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

pub fn word_to_string(w: &[u8]) -> String {
    struct W<'a>(&'a [u8]);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_word(self.0, f)
        }
    }
    W(w).to_string()
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::default());
        }
        let entries: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| invalid(format!("bad entry {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| invalid(format!("bad character {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(entries).map_err(|e| match e {
            Error::InvalidInput(msg) => invalid(format!("{s:?}: {msg}")),
            other => other,
        })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// Maximal monotone blocks of a sequence in one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunDecomposition {
    direction: Direction,
    runs: Vec<Vec<u8>>,
}

impl RunDecomposition {
    pub fn of(word: &[u8], direction: Direction) -> Self {
        let mut runs: Vec<Vec<u8>> = Vec::new();
        for &v in word {
            match runs.last_mut() {
                Some(run) if continues(direction, *run.last().unwrap(), v) => run.push(v),
                _ => runs.push(vec![v]),
            }
        }
        RunDecomposition { direction, runs }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn runs(&self) -> &[Vec<u8>] {
        &self.runs
    }

    /// Interior of run `i`: everything but its first and last entries.
    pub fn middle(&self, i: usize) -> &[u8] {
        let r = &self.runs[i];
        if r.len() <= 2 {
            &[]
        } else {
            &r[1..r.len() - 1]
        }
    }

    /// First and last entries of run `i` (the run itself when shorter than 3).
    pub fn ends(&self, i: usize) -> Vec<u8> {
        let r = &self.runs[i];
        if r.len() <= 2 {
            r.clone()
        } else {
            vec![r[0], r[r.len() - 1]]
        }
    }
}

fn continues(direction: Direction, prev: u8, next: u8) -> bool {
    match direction {
        Direction::Ascending => next > prev,
        Direction::Descending => next < prev,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    D,
}

/// Descent encoding of a reverse-layered permutation: letter `j > 1` is `A`
/// after an ascent and `D` after a descent; the first letter is always `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdWord(Vec<Letter>);

impl AdWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.first().is_some_and(|&l| l != Letter::A) {
            return Err(invalid("A/D word must start with A"));
        }
        Ok(AdWord(letters))
    }

    pub fn of(pi: &Permutation) -> Result<Self> {
        if !pi.is_reverse_layered() {
            return Err(invalid(format!("{pi} is not reverse-layered")));
        }
        let mut letters = Vec::with_capacity(pi.len());
        for (j, &v) in pi.entries().iter().enumerate() {
            letters.push(if j == 0 || pi.entries()[j - 1] < v {
                Letter::A
            } else {
                Letter::D
            });
        }
        Ok(AdWord(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The reverse-layered permutation with this descent word.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.len();
        let mut lens = Vec::new();
        for &l in &self.0 {
            match l {
                Letter::A if !lens.is_empty() => *lens.last_mut().unwrap() += 1,
                _ => lens.push(1usize),
            }
        }
        let mut out = Vec::with_capacity(n);
        let mut top = n;
        for len in lens {
            out.extend((top - len + 1..=top).map(|v| v as u8));
            top -= len;
        }
        Permutation::from_vec_unchecked(out)
    }

    /// `d(k)` for `k = 0..=n`: number of `D`s among the first `k` letters.
    pub fn d_vector(&self) -> Vec<usize> {
        let mut out = vec![0];
        let mut count = 0;
        for &l in &self.0 {
            count += (l == Letter::D) as usize;
            out.push(count);
        }
        out
    }

    /// `a(k)` for `k = 0..=n`: number of `A`s after position `k` lying to the
    /// right of some `D` that is also after position `k`.
    pub fn a_vector(&self) -> Vec<usize> {
        let n = self.len();
        (0..=n)
            .map(|k| {
                let suffix = &self.0[k..];
                match suffix.iter().position(|&l| l == Letter::D) {
                    Some(first_d) => suffix[first_d..].iter().filter(|&&l| l == Letter::A).count(),
                    None => 0,
                }
            })
            .collect()
    }
}

impl fmt::Display for AdWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "A",
                Letter::D => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for AdWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'D' => Ok(Letter::D),
                _ => Err(invalid(format!("bad letter {c:?} in A/D word"))),
            })
            .collect::<Result<_>>()?;
        AdWord::new(letters)
    }
}

/// All of `S_n` in lexicographic order.
pub fn symmetric_group(n: usize) -> SymmetricGroup {
    SymmetricGroup {
        next: Some(Permutation::identity(n)),
    }
}

pub struct SymmetricGroup {
    next: Option<Permutation>,
}

impl Iterator for SymmetricGroup {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.0.clone();
        if next_permutation(&mut succ) {
            self.next = Some(Permutation(succ));
        }
        Some(current)
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Members of `S_n` avoiding every pattern in `patterns`, in lexicographic order.
pub fn avoiders<'a>(
    n: usize,
    patterns: &'a [crate::pattern::PatternSpec],
) -> impl Iterator<Item = Permutation> + 'a {
    symmetric_group(n).filter(move |p| patterns.iter().all(|pat| !pat.is_contained_in(p.entries())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn standardization() {
        assert_eq!(standardize(&[4, 8, 2, 9]).unwrap(), p("2314"));
        assert_eq!(standardize(&[1, 2, 3]).unwrap(), p("123"));
        assert_eq!(standardize(&[15, 12, 9]).unwrap(), p("321"));
        assert!(standardize(&[3, 1, 3]).is_err());
    }

    #[test]
    fn symmetries() {
        assert_eq!(p("265413").reverse(), p("314562"));
        assert_eq!(p("132").complement(), p("312"));
        assert_eq!(p("231").hat().unwrap(), p("321"));
        assert!(p("1").hat().is_err());
        assert!(Permutation::default().hat().is_err());
        assert_eq!(Permutation::default().reverse(), Permutation::default());
        assert_eq!(Permutation::default().complement(), Permutation::default());
    }

    #[test]
    fn parse_and_display() {
        let long = p("12,13,11,8,9,10,6,7,5,1,2,3,4");
        assert_eq!(long.len(), 13);
        assert_eq!(long.to_string(), "12,13,11,8,9,10,6,7,5,1,2,3,4");
        assert_eq!(p("265413").to_string(), "265413");
        assert_eq!(p("2,1").to_string(), "21");
        assert!("1223".parse::<Permutation>().is_err());
        assert!("1x".parse::<Permutation>().is_err());
        assert!("24".parse::<Permutation>().is_err());
    }

    #[test]
    fn ascending_runs() {
        // Runs are defined for any word of distinct values.
        let w = [7, 8, 6, 2, 3, 5, 1];
        let d = RunDecomposition::of(&w, Direction::Ascending);
        assert_eq!(d.runs(), &[vec![7, 8], vec![6], vec![2, 3, 5], vec![1]]);
        let d = RunDecomposition::of(&w, Direction::Descending);
        assert_eq!(d.runs(), &[vec![7], vec![8, 6, 2], vec![3], vec![5, 1]]);

        let d = p("4572136").run_decomposition(Direction::Ascending);
        assert_eq!(d.runs(), &[vec![4, 5, 7], vec![2], vec![1, 3, 6]]);
        assert_eq!(d.ends(0), vec![4, 7]);
        assert_eq!(d.middle(0), &[5]);
        assert_eq!(d.ends(1), vec![2]);
        assert!(d.middle(1).is_empty());
        assert_eq!(d.ends(2), vec![1, 6]);
        assert_eq!(d.middle(2), &[3]);

        let d = Permutation::decreasing(5).run_decomposition(Direction::Ascending);
        assert_eq!(d.runs().len(), 5);
    }

    #[test]
    fn minima_and_peaks() {
        assert_eq!(p("4572163").left_to_right_minima(), vec![4, 2, 1]);
        assert_eq!(Permutation::identity(6).left_to_right_minima(), vec![1]);
        assert_eq!(Permutation::decreasing(4).left_to_right_minima(), vec![4, 3, 2, 1]);

        assert_eq!(peaks_valleys_of(&[7, 8, 6, 2, 3, 5, 1]), 3);
        assert_eq!(p("6752341").peaks_valleys(), 3);
        assert_eq!(Permutation::identity(7).peaks_valleys(), 0);
        assert_eq!(Permutation::decreasing(7).peaks_valleys(), 0);
        assert_eq!(p("132").peaks_valleys(), 1);
    }

    #[test]
    fn ad_word_example() {
        let pi = p("78634512");
        let w = AdWord::of(&pi).unwrap();
        assert_eq!(w.to_string(), "AADDAADA");
        assert_eq!(w.d_vector(), vec![0, 0, 0, 1, 2, 2, 2, 3, 3]);
        assert_eq!(w.a_vector(), vec![3, 3, 3, 3, 1, 1, 1, 0, 0]);
        assert_eq!("AADDAADA".parse::<AdWord>().unwrap().to_permutation(), pi);

        let w = AdWord::of(&Permutation::identity(5)).unwrap();
        assert_eq!(w.to_string(), "AAAAA");
        assert!(w.d_vector().iter().all(|&d| d == 0));

        assert!(AdWord::of(&p("132")).is_err());
        assert!("DA".parse::<AdWord>().is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(symmetric_group(0).count(), 1);
        assert_eq!(symmetric_group(1).count(), 1);
        assert_eq!(symmetric_group(5).count(), 120);
        let all: Vec<_> = symmetric_group(4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (r, pi) in all.iter().enumerate() {
            assert_eq!(pi.rank(), r as u64);
            assert_eq!(&Permutation::unrank(4, r as u64), pi);
        }
    }

    #[test]
    fn deletions() {
        let d = p("3241").one_point_deletions();
        assert_eq!(d, vec![p("213"), p("231"), p("321")]);
    }
}
