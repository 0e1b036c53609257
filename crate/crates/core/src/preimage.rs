//! Fibers of the machines: exhaustive preimage sets, the closed-form count
//! for reverse-layered targets under the consecutive 132 machine, fertility
//! maxima and spectra.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::dynamics::{Verdict, Witness};
use crate::error::{invalid, Result};
use crate::machine::MachineSpec;
use crate::perm::{AdWord, Permutation};
use crate::scan::{check_bound, collect_where, MapTable};
use crate::sequences::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub target: Permutation,
    pub count: usize,
    pub preimages: Vec<Permutation>,
}

/// All preimages of `target`, sorted lexicographically.
pub fn fiber(spec: &MachineSpec, target: &Permutation, bound: usize) -> Result<FiberReport> {
    let preimages = collect_where(target.len(), bound, |tau| spec.run(tau) == *target)?;
    Ok(FiberReport {
        target: target.clone(),
        count: preimages.len(),
        preimages,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredCount {
    #[serde(serialize_with = "ser_big")]
    pub total: BigUint,
    /// `terms[k] = C(d(k) + a(k), k)`.
    #[serde(serialize_with = "ser_big_vec")]
    pub terms: Vec<BigUint>,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `sum_k C(d(k) + a(k), k)` over the A/D word of a reverse-layered `pi`.
/// Term `k` counts the preimages whose run makes exactly `k` premature pops.
pub fn count_preimages_reverse_layered_132(pi: &Permutation) -> Result<LayeredCount> {
    let word = AdWord::of(pi)?;
    let d = word.d_vector();
    let a = word.a_vector();
    let terms: Vec<BigUint> = (0..=pi.len())
        .map(|k| binomial((d[k] + a[k]) as u64, k as u64))
        .collect();
    let total = terms.iter().fold(BigUint::zero(), |acc, t| acc + t);
    Ok(LayeredCount { total, terms })
}

/// Fiber of `target` split by the number of premature pops: entry `k` is
/// the number of preimages making exactly `k`.
pub fn fiber_by_premature_count(spec: &MachineSpec, target: &Permutation, bound: usize) -> Result<Vec<usize>> {
    let f = fiber(spec, target, bound)?;
    let mut out = vec![0usize; target.len() + 1];
    for tau in &f.preimages {
        out[spec.premature_entries(tau).len()] += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxFertility {
    pub n: usize,
    pub value: u32,
    pub argmax: Vec<Permutation>,
}

/// Largest fiber over `S_n` and every target attaining it, from one pass of
/// image tallies.
pub fn max_fertility(spec: &MachineSpec, n: usize, bound: usize) -> Result<MaxFertility> {
    check_bound(n, bound)?;
    let table = MapTable::build(spec, n)?;
    Ok(max_from_tally(&table, &table.tally()))
}

fn max_from_tally(table: &MapTable, tally: &[u32]) -> MaxFertility {
    let value = tally.iter().copied().max().unwrap_or(0);
    let argmax = (0..tally.len())
        .filter(|&r| tally[r] == value)
        .map(|r| table.perm(r))
        .collect();
    MaxFertility {
        n: table.n(),
        value,
        argmax,
    }
}

/// Inserts `n, n-1, ...` at the (1-based, increasing) positions of `j` into
/// `12...(n-|j|)`.
pub fn tau_j_family(n: usize, j: &BTreeSet<usize>) -> Result<Permutation> {
    if let Some(&bad) = j.iter().find(|&&p| p < 2 || p + 1 > n) {
        return Err(invalid(format!("position {bad} outside 2..={}", n.saturating_sub(1))));
    }
    let mut big = n as u8;
    let mut small = 1u8;
    let out = (1..=n)
        .map(|pos| {
            if j.contains(&pos) {
                big -= 1;
                big + 1
            } else {
                small += 1;
                small - 1
            }
        })
        .collect();
    Permutation::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapCheck {
    pub i: u8,
    pub swapped: Permutation,
    pub fiber: usize,
    pub swapped_fiber: usize,
    pub holds: bool,
}

/// Values `i` such that `i` precedes `i + 1` in `pi` but not immediately.
pub fn swap_eligible(pi: &Permutation) -> Vec<u8> {
    let inv = pi.inverse();
    let pos = inv.entries();
    (1..pi.len())
        .filter(|&i| pos[i - 1] + 1 < pos[i])
        .map(|i| i as u8)
        .collect()
}

/// Swaps the values `i` and `i + 1` in `pi`.
pub fn swap_values(pi: &Permutation, i: u8) -> Permutation {
    let out = pi
        .entries()
        .iter()
        .map(|&v| if v == i { i + 1 } else if v == i + 1 { i } else { v })
        .collect();
    Permutation::new(out).expect("value swap keeps a bijection")
}

/// Compares the consecutive 132 machine's fibers of `pi` and of `pi` with
/// `i, i+1` swapped. Without an explicit `i`, the smallest eligible one is used.
pub fn swap_monotone_check(pi: &Permutation, i: Option<u8>, bound: usize) -> Result<SwapCheck> {
    let eligible = swap_eligible(pi);
    let i = match i {
        Some(i) if eligible.contains(&i) => i,
        Some(i) => {
            return Err(invalid(format!(
                "{i} does not occur before {} with a gap in {pi}",
                i as u16 + 1
            )))
        }
        None => *eligible
            .first()
            .ok_or_else(|| invalid(format!("{pi} has no value i before i+1 with a gap")))?,
    };
    let spec = MachineSpec::consecutive(&"132".parse().unwrap())?;
    let swapped = swap_values(pi, i);
    let before = fiber(&spec, pi, bound)?.count;
    let after = fiber(&spec, &swapped, bound)?.count;
    Ok(SwapCheck {
        i,
        swapped,
        fiber: before,
        swapped_fiber: after,
        holds: before <= after,
    })
}

/// Every eligible `(pi, i)` in `S_n` at once, from a single tally. Returns
/// the first violating pair, if any.
pub fn swap_monotone_exhaustive(n: usize, bound: usize) -> Result<Option<(Permutation, u8)>> {
    check_bound(n, bound)?;
    let spec = MachineSpec::consecutive(&"132".parse().unwrap())?;
    let table = MapTable::build(&spec, n)?;
    let tally = table.tally();
    for r in 0..table.len() {
        let pi = table.perm(r);
        for i in swap_eligible(&pi) {
            if tally[r] > tally[swap_values(&pi, i).rank() as usize] {
                return Ok(Some((pi, i)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub n_max: usize,
    /// Positive fiber sizes seen for some `n <= n_max`.
    pub sizes: BTreeSet<u32>,
    pub max: u32,
    /// Smallest positive integer below `max` that never occurs.
    pub first_gap: Option<u32>,
}

pub fn fertility_spectrum(spec: &MachineSpec, n_max: usize, bound: usize) -> Result<Spectrum> {
    check_bound(n_max, bound)?;
    let mut sizes = BTreeSet::new();
    for n in 0..=n_max {
        let table = MapTable::build(spec, n)?;
        sizes.extend(table.tally().into_iter().filter(|&c| c > 0));
    }
    let max = sizes.iter().next_back().copied().unwrap_or(0);
    let first_gap = (1..max).find(|f| !sizes.contains(f));
    Ok(Spectrum {
        n_max,
        sizes,
        max,
        first_gap,
    })
}

/// Whether the fiber sizes of `spec` up to `n_max` fill `1..=max` without
/// gaps.
pub fn conjecture_fertility_spectrum(spec: &MachineSpec, n_max: usize, bound: usize) -> Result<Verdict> {
    let s = fertility_spectrum(spec, n_max, bound)?;
    let mut witnesses = vec![Witness::value(&format!("max:{spec}"), n_max, s.max)];
    if let Some(g) = s.first_gap {
        witnesses.push(Witness::value(&format!("first-gap:{spec}"), n_max, g));
    }
    Ok(Verdict {
        holds: s.first_gap.is_none(),
        witnesses,
    })
}
