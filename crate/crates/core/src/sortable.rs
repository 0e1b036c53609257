//! Sortability: `pi` is sortable by a machine when its output avoids 231,
//! i.e. when West's map sends the output to the identity.
//!
//! Besides the definition this module holds the structural descriptions of
//! the sortable sets for several patterns, the Dyck path bijection for the
//! consecutive 132 machine, and a brute-force permutation-class test.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dynamics::{Verdict, Witness};
use crate::error::{invalid, Error, Result};
use crate::machine::MachineSpec;
use crate::pattern::{avoids_all, PatternSpec};
use crate::perm::{Direction, Permutation};
use crate::scan::{collect_where, count_where};
use crate::sequences::fine_transform;

fn classical(s: &str) -> PatternSpec {
    PatternSpec::classical(s.parse().unwrap()).unwrap()
}

fn avoids_231(w: &[u8]) -> bool {
    static PAT: OnceLock<PatternSpec> = OnceLock::new();
    !PAT.get_or_init(|| classical("231")).is_contained_in(w)
}

fn avoids_132(w: &[u8]) -> bool {
    static PAT: OnceLock<PatternSpec> = OnceLock::new();
    !PAT.get_or_init(|| classical("132")).is_contained_in(w)
}

pub fn is_sortable(spec: &MachineSpec, pi: &Permutation) -> bool {
    let out = spec.run(pi);
    let sorted = avoids_231(out.entries());
    debug_assert_eq!(sorted, MachineSpec::west().run(&out).is_identity(), "{pi}");
    sorted
}

pub fn count_sortable(spec: &MachineSpec, n: usize, bound: usize) -> Result<u64> {
    count_where(n, bound, |pi| is_sortable(spec, pi))
}

/// Sortable members of `S_n` in lexicographic order.
pub fn sortable_members(spec: &MachineSpec, n: usize, bound: usize) -> Result<Vec<Permutation>> {
    collect_where(n, bound, |pi| is_sortable(spec, pi))
}

/// Run heads and tails: `a_i = m_i t_i` over the ascending runs.
fn heads_and_tails(pi: &Permutation) -> Vec<(u8, Vec<u8>)> {
    pi.run_decomposition(Direction::Ascending)
        .runs()
        .iter()
        .map(|r| (r[0], r[1..].to_vec()))
        .collect()
}

/// Every ascending run starts at a left-to-right minimum, and the reversed
/// run tails, concatenated, decrease.
pub fn sortable_132_characterized(pi: &Permutation) -> bool {
    let parts = heads_and_tails(pi);
    let minima = pi.left_to_right_minima();
    let heads_ok = parts.iter().all(|(m, _)| minima.contains(m));
    let tails: Vec<u8> = parts.iter().flat_map(|(_, t)| t.iter().rev().copied()).collect();
    heads_ok && tails.windows(2).all(|w| w[0] > w[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    U,
    D,
}

/// A balanced U/D word whose prefixes never have more D than U.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath(Vec<bool>);

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut h = 0i64;
        for &s in &steps {
            h += if s == Step::U { 1 } else { -1 };
            if h < 0 {
                return Err(invalid("Dyck path dips below the axis"));
            }
        }
        if h != 0 {
            return Err(invalid("Dyck path does not return to the axis"));
        }
        Ok(DyckPath(steps.into_iter().map(|s| s == Step::U).collect()))
    }

    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }

    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.0.iter().map(|&u| if u { Step::U } else { Step::D })
    }

    /// Maximal `U^g D^d` blocks as `(g, d)` pairs.
    fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut prev_up = false;
        for &up in &self.0 {
            if up {
                if !prev_up {
                    out.push((0, 0));
                }
                out.last_mut().unwrap().0 += 1;
            } else {
                out.last_mut().expect("paths start with U").1 += 1;
            }
            prev_up = up;
        }
        out
    }

    /// All paths of semilength `n`, in lexicographic order with `U < D`.
    pub fn all(n: usize) -> Vec<DyckPath> {
        fn go(n: usize, up: usize, down: usize, cur: &mut Vec<bool>, out: &mut Vec<DyckPath>) {
            if cur.len() == 2 * n {
                out.push(DyckPath(cur.clone()));
                return;
            }
            if up < n {
                cur.push(true);
                go(n, up + 1, down, cur, out);
                cur.pop();
            }
            if down < up {
                cur.push(false);
                go(n, up, down + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, 0, 0, &mut Vec::with_capacity(2 * n), &mut out);
        out
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.steps() {
            f.write_str(if s == Step::U { "U" } else { "D" })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::U),
                'D' | 'd' => Ok(Step::D),
                _ => Err(invalid(format!("bad step {c:?} in Dyck path"))),
            })
            .collect::<Result<_>>()?;
        DyckPath::new(steps)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `U^(m_0 - m_1) D^|a_1| U^(m_1 - m_2) D^|a_2| ...` with `m_0 = n + 1`.
pub fn phi(pi: &Permutation) -> Result<DyckPath> {
    if !sortable_132_characterized(pi) {
        return Err(invalid(format!("{pi} is not sortable by the consecutive 132 machine")));
    }
    let mut steps = Vec::with_capacity(2 * pi.len());
    let mut prev = pi.len() + 1;
    for (m, t) in heads_and_tails(pi) {
        steps.extend(std::iter::repeat(Step::U).take(prev - m as usize));
        steps.extend(std::iter::repeat(Step::D).take(t.len() + 1));
        prev = m as usize;
    }
    DyckPath::new(steps)
}

/// Rebuilds the sortable permutation: run heads come from the U-block
/// lengths and each tail takes the largest values not yet used, ascending.
pub fn phi_inverse(path: &DyckPath) -> Result<Permutation> {
    let n = path.semilength();
    let blocks = path.blocks();
    let mut heads = Vec::with_capacity(blocks.len());
    let mut m = n + 1;
    for &(g, _) in &blocks {
        m -= g;
        heads.push(m as u8);
    }
    let mut rest: Vec<u8> = (1..=n as u8).rev().filter(|v| !heads.contains(v)).collect();
    let mut out = Vec::with_capacity(n);
    for (&head, &(_, d)) in heads.iter().zip(&blocks) {
        out.push(head);
        let mut tail: Vec<u8> = rest.drain(..d - 1).collect();
        tail.reverse();
        out.extend(tail);
    }
    let pi = Permutation::new(out)?;
    if phi(&pi).ok().as_ref() != Some(path) {
        return Err(Error::Internal(format!("reconstruction of {path} gave {pi}, which does not map back")));
    }
    Ok(pi)
}

/// 132 classically, plus 3214 and 4213 with their first three entries
/// adjacent. 4312 with the same adjacency is not part of the basis: it is
/// itself sortable.
pub fn vincular_123_patterns() -> &'static [PatternSpec; 3] {
    static PATS: OnceLock<[PatternSpec; 3]> = OnceLock::new();
    PATS.get_or_init(|| {
        let v = |s: &str| PatternSpec::vincular(s.parse().unwrap(), &[1, 2]).unwrap();
        [classical("132"), v("3214"), v("4213")]
    })
}

/// Avoidance of [`vincular_123_patterns`]; cross-checked against
/// [`sortable_123_run_conditions`] in debug builds.
pub fn sortable_123_characterized(pi: &Permutation) -> bool {
    let by_patterns = avoids_all(pi.entries(), vincular_123_patterns());
    debug_assert_eq!(by_patterns, sortable_123_run_conditions(pi), "{pi}");
    by_patterns
}

/// The same set described through descending runs: avoid 132, and for each
/// descending run `pi_i ... pi_j` of length at least 3, nothing right of
/// `pi_{j-1}` exceeds it and `pi_{i+1}, ..., pi_{j-1}` are consecutive values.
pub fn sortable_123_run_conditions(pi: &Permutation) -> bool {
    if !avoids_132(pi.entries()) {
        return false;
    }
    let w = pi.entries();
    let mut start = 0;
    for run in pi.run_decomposition(Direction::Descending).runs() {
        let len = run.len();
        if len >= 3 {
            let penult = run[len - 2];
            let after = start + len - 1;
            if w[after..].iter().any(|&v| v > penult) {
                return false;
            }
            if run[1..len - 1].windows(2).any(|p| p[0] != p[1] + 1) {
                return false;
            }
        }
        start += len;
    }
    true
}

/// Avoids 132 classically and `12...k` consecutively.
pub fn sortable_decreasing_k_characterized(pi: &Permutation, k: usize) -> Result<bool> {
    if k < 3 {
        return Err(invalid(format!("k must be at least 3, got {k}")));
    }
    let inc = PatternSpec::consecutive(Permutation::identity(k))?;
    Ok(avoids_132(pi.entries()) && !inc.is_contained_in(pi.entries()))
}

/// Avoids 132 classically and `rev(sigma)` consecutively; valid when
/// `sigma` has length at least 3 and `hat(sigma)` contains 231.
pub fn sortable_sigma_hat_231_characterized(pi: &Permutation, sigma: &Permutation) -> Result<bool> {
    if sigma.len() < 3 || avoids_231(sigma.hat()?.entries()) {
        return Err(invalid(format!(
            "{sigma} needs length >= 3 and a swapped form containing 231"
        )));
    }
    let rev = PatternSpec::consecutive(sigma.reverse())?;
    Ok(avoids_132(pi.entries()) && !rev.is_contained_in(pi.entries()))
}

/// A member of the set and a one-point deletion of it that is not a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCounterexample {
    pub member: Permutation,
    pub pattern: Permutation,
}

/// Closure under containment, checked one length down for every member of
/// length `1..=n_max`. Scans lengths in increasing order and members
/// lexicographically, returning the first failure.
pub fn is_permutation_class(
    membership: impl Fn(&Permutation) -> bool + Sync,
    n_max: usize,
    bound: usize,
) -> Result<Option<ClassCounterexample>> {
    for n in 1..=n_max {
        let members = collect_where(n, bound, &membership)?;
        for pi in members {
            if let Some(tau) = pi.one_point_deletions().into_iter().find(|t| !membership(t)) {
                return Ok(Some(ClassCounterexample {
                    member: pi,
                    pattern: tau,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassVerdict {
    /// The sortable set is exactly `Av(132)`.
    ClassAv132,
    /// The sortable set is exactly `Av(213)`.
    ClassAv213,
    NotClass,
}

/// Whether the sortable set of the consecutive `sigma` machine is a
/// permutation class, decided from `sigma` alone.
pub fn class_criterion(sigma: &Permutation) -> Result<ClassVerdict> {
    match sigma.entries() {
        [] | [_] => Err(invalid("class criterion needs a pattern of length >= 2")),
        [1, 2] => Ok(ClassVerdict::ClassAv213),
        [2, 1] => Ok(ClassVerdict::NotClass),
        _ => {
            let both = !avoids_231(sigma.entries()) && !avoids_231(sigma.hat()?.entries());
            Ok(if both {
                ClassVerdict::ClassAv132
            } else {
                ClassVerdict::NotClass
            })
        }
    }
}

/// Compares the sortable count of the consecutive 231 machine at size `n`
/// with `sum_k C(n, k) F_{k+1}`.
pub fn conjecture_fine_transform(n: usize, bound: usize) -> Result<Verdict> {
    let spec = MachineSpec::consecutive(&"231".parse().unwrap())?;
    let counted = BigInt::from(count_sortable(&spec, n, bound)?);
    let predicted = fine_transform(n).pop().expect("nonempty");
    let holds = counted == predicted;
    let mut witnesses = vec![
        Witness::value("sortable-count", n, &counted),
        Witness::value("fine-transform", n, &predicted),
    ];
    if !holds {
        witnesses.push(Witness::value("difference", n, &counted - &predicted));
    }
    Ok(Verdict { holds, witnesses })
}
