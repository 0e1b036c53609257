//! Iterating a machine: orbits, periodic points, depth to a target set, and
//! the extremal-depth witnesses for the classical 132 machine.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::machine::MachineSpec;
use crate::pattern::{avoids_all, PatternSpec};
use crate::perm::{factorial, standardize, Permutation};
use crate::scan::{check_bound, MapTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    /// From the start up to (not including) the first repeated state.
    pub orbit: Vec<Permutation>,
    pub preperiod: usize,
    pub period: usize,
}

pub fn orbit(spec: &MachineSpec, pi: &Permutation) -> OrbitReport {
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut cur = pi.clone();
    loop {
        if let Some(&first) = seen.get(&cur) {
            let period = orbit.len() - first;
            return OrbitReport {
                orbit,
                preperiod: first,
                period,
            };
        }
        seen.insert(cur.clone(), orbit.len());
        let next = spec.run(&cur);
        orbit.push(cur);
        cur = next;
    }
}

pub fn iterate(spec: &MachineSpec, pi: &Permutation, t: usize) -> Permutation {
    let mut cur = pi.clone();
    for _ in 0..t {
        cur = spec.run(&cur);
    }
    cur
}

/// Periodic points of `spec` on `S_n`, in lexicographic order.
pub fn periodic_points(spec: &MachineSpec, n: usize, bound: usize) -> Result<Vec<Permutation>> {
    Ok(periodic_report(spec, n, bound)?.points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicReport {
    pub n: usize,
    pub points: Vec<Permutation>,
    /// Cycle length -> number of periodic points on cycles of that length.
    pub periods: BTreeMap<usize, usize>,
}

pub fn periodic_report(spec: &MachineSpec, n: usize, bound: usize) -> Result<PeriodicReport> {
    check_bound(n, bound)?;
    let table = MapTable::build(spec, n)?;
    Ok(periodic_from_table(&table))
}

fn periodic_from_table(table: &MapTable) -> PeriodicReport {
    let mask = table.periodic_mask();
    let mut points = Vec::new();
    let mut periods = BTreeMap::new();
    for r in (0..table.len()).filter(|&r| mask[r]) {
        points.push(table.perm(r));
        *periods.entry(table.cycle_length(r)).or_insert(0) += 1;
    }
    PeriodicReport {
        n: table.n(),
        points,
        periods,
    }
}

/// Smallest `t` with `spec^t(pi)` in the target set.
pub fn sd(spec: &MachineSpec, pi: &Permutation, target: impl Fn(&Permutation) -> bool) -> Result<usize> {
    let limit = factorial(pi.len().min(20));
    let mut cur = pi.clone();
    let mut t = 0u64;
    while !target(&cur) {
        if t >= limit {
            return Err(Error::Internal(format!(
                "orbit of {pi} did not reach the target within n! steps; the target set is wrong"
            )));
        }
        cur = spec.run(&cur);
        t += 1;
    }
    Ok(t as usize)
}

fn classical_pair(a: &str, b: &str) -> [PatternSpec; 2] {
    [a, b].map(|s| PatternSpec::classical(s.parse().unwrap()).unwrap())
}

pub fn avoids_132_231(pi: &Permutation) -> bool {
    static PATS: OnceLock<[PatternSpec; 2]> = OnceLock::new();
    avoids_all(pi.entries(), PATS.get_or_init(|| classical_pair("132", "231")))
}

pub fn avoids_213_312(pi: &Permutation) -> bool {
    static PATS: OnceLock<[PatternSpec; 2]> = OnceLock::new();
    avoids_all(pi.entries(), PATS.get_or_init(|| classical_pair("213", "312")))
}

/// The classical 132 machine.
pub fn s132() -> MachineSpec {
    MachineSpec::classical(&"132".parse().unwrap()).unwrap()
}

/// Largest depth to `target` over `S_n`, and the lexicographically first
/// permutation attaining it.
pub fn max_depth(
    spec: &MachineSpec,
    n: usize,
    bound: usize,
    target: impl Fn(&Permutation) -> bool + Sync,
) -> Result<(usize, Permutation)> {
    check_bound(n, bound)?;
    let table = MapTable::build(spec, n)?;
    let mask: Vec<bool> = (0..table.len()).map(|r| target(&table.perm(r))).collect();
    let depth = table.depths(&mask)?;
    let (r, &d) = depth
        .iter()
        .enumerate()
        .max_by_key(|&(r, &d)| (d, std::cmp::Reverse(r)))
        .expect("S_n is nonempty");
    Ok((d as usize, table.perm(r)))
}

/// `xi_m xi_{m-1} ... xi_1` with `xi_j = (3j-2)(3j)(3j-1)`.
pub fn lambda_witness(m: usize) -> Result<Permutation> {
    if m == 0 || 3 * m > crate::perm::MAX_LEN {
        return Err(invalid(format!("lambda witness needs 1 <= m <= 85, got {m}")));
    }
    let mut out = Vec::with_capacity(3 * m);
    for j in (1..=m).rev() {
        let b = 3 * j as u8;
        out.extend([b - 2, b, b - 1]);
    }
    Ok(Permutation::from_vec_unchecked(out))
}

/// Odd (k odd) or even (k even) numbers of `[3k+1]` decreasing, then the
/// others increasing.
pub fn v_small(k: usize) -> Result<Vec<u8>> {
    if k == 0 || 3 * k + 1 > crate::perm::MAX_LEN {
        return Err(invalid(format!("V_k needs 1 <= k <= 84, got {k}")));
    }
    Ok(parity_split(3 * k + 1, k % 2))
}

/// Same construction on `[n]`, keyed on the parity of `n`.
pub fn v_big(n: usize) -> Result<Permutation> {
    if n == 0 || n > crate::perm::MAX_LEN {
        return Err(invalid(format!("V_n needs 1 <= n <= 255, got {n}")));
    }
    Ok(Permutation::from_vec_unchecked(parity_split(n, n % 2)))
}

fn parity_split(n: usize, first_parity: usize) -> Vec<u8> {
    let mut out: Vec<u8> = (1..=n).rev().filter(|v| v % 2 == first_parity).map(|v| v as u8).collect();
    out.extend((1..=n).filter(|v| v % 2 != first_parity).map(|v| v as u8));
    out
}

/// Elements of `{3k+2, ..., 3m}` congruent to `i` mod 3, decreasing.
pub fn d_block(k: usize, m: usize, i: usize) -> Result<Vec<u8>> {
    if k == 0 || i > 2 || 3 * m > crate::perm::MAX_LEN {
        return Err(invalid(format!("D block needs k >= 1, i in 0..=2, 3m <= 255; got k={k}, m={m}, i={i}")));
    }
    Ok((3 * k + 2..=3 * m).rev().filter(|v| v % 3 == i).map(|v| v as u8).collect())
}

/// `D^(2) D^(0) V_k rev(D^(1))` for the given `k, m`.
pub fn claim_form(k: usize, m: usize) -> Result<Permutation> {
    let mut w = d_block(k, m, 2)?;
    w.extend(d_block(k, m, 0)?);
    w.extend(v_small(k)?);
    w.extend(d_block(k, m, 1)?.into_iter().rev());
    Permutation::new(w)
}

/// An `n`-permutation whose depth to `Av(132, 231)` under the classical 132
/// machine is `n - 1`: with `n = 3m + r` it is `lambda_m`, `n lambda_m`, or
/// `(n-1) n lambda_m`.
pub fn max_depth_witness(n: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(invalid(format!("depth witness needs n >= 3, got {n}")));
    }
    let (m, r) = (n / 3, n % 3);
    let lambda = lambda_witness(m)?;
    let mut w: Vec<u8> = match r {
        0 => vec![],
        1 => vec![n as u8],
        _ => vec![n as u8 - 1, n as u8],
    };
    w.extend_from_slice(lambda.entries());
    Permutation::new(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub m: usize,
    pub claim1: bool,
    /// One entry per `k` in `1..=m-2`.
    pub claim2: Vec<bool>,
    pub final_form: bool,
}

impl ClaimsReport {
    pub fn holds(&self) -> bool {
        self.claim1 && self.claim2.iter().all(|&b| b) && self.final_form
    }
}

/// Checks the four-step and three-step iterate identities for `lambda_m`,
/// plus the closed form of the `(3m-2)`-th iterate, by simulation.
pub fn verify_claims_1_2(m: usize) -> Result<ClaimsReport> {
    if m < 2 {
        return Err(invalid(format!("the iterate identities need m >= 2, got {m}")));
    }
    let s = s132();
    let lambda = lambda_witness(m)?;
    let claim1 = iterate(&s, &lambda, 4) == claim_form(1, m)?;
    let claim2 = (1..=m.saturating_sub(2))
        .map(|k| Ok(iterate(&s, &claim_form(k, m)?, 3) == claim_form(k + 1, m)?))
        .collect::<Result<Vec<_>>>()?;
    let mut expected = vec![3 * m as u8 - 1, 3 * m as u8];
    expected.extend(v_small(m - 1)?);
    let final_form = iterate(&s, &lambda, 3 * m - 2).entries() == expected.as_slice();
    Ok(ClaimsReport {
        m,
        claim1,
        claim2,
        final_form,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub role: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Witness {
    pub fn perm(role: &str, n: usize, perm: Permutation) -> Self {
        Witness {
            role: role.into(),
            n,
            perm: Some(perm),
            image: None,
            value: None,
        }
    }

    pub fn value(role: &str, n: usize, value: impl ToString) -> Self {
        Witness {
            role: role.into(),
            n,
            perm: None,
            image: None,
            value: Some(value.to_string()),
        }
    }

    pub fn with_image(mut self, image: Permutation) -> Self {
        self.image = Some(image);
        self
    }
}

/// Outcome of one conjecture probe at one size. A false verdict is an
/// ordinary result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

// Rank-indexed `f^t` for every rank.
fn power(table: &MapTable, t: usize) -> Vec<u32> {
    let mut cur: Vec<u32> = (0..table.len() as u32).collect();
    for _ in 0..t {
        for c in cur.iter_mut() {
            *c = table.image_of(*c as usize) as u32;
        }
    }
    cur
}

/// Whether `SC_231^(2n-4)` sends all of `S_n` into `Av(132, 231)` while
/// some permutation is still outside after `2n-5` steps.
pub fn conjecture_2n_minus_4(n: usize, bound: usize) -> Result<Verdict> {
    if n < 3 {
        return Err(invalid(format!("the 2n-4 bound needs n >= 3, got {n}")));
    }
    check_bound(n, bound)?;
    let spec = MachineSpec::consecutive(&"231".parse().unwrap())?;
    let table = MapTable::build(&spec, n)?;
    let good: Vec<bool> = (0..table.len()).map(|r| avoids_132_231(&table.perm(r))).collect();
    let before = power(&table, 2 * n - 5);
    let mut witnesses = Vec::new();
    let mut bound_holds = true;
    for (r, &b) in before.iter().enumerate() {
        let after = table.image_of(b as usize);
        if !good[after] && bound_holds {
            bound_holds = false;
            witnesses.push(Witness::perm("counterexample", n, table.perm(r)).with_image(table.perm(after)));
        }
    }
    let slow = before.iter().position(|&b| !good[b as usize]);
    if let Some(r) = slow {
        witnesses.push(Witness::perm("slow", n, table.perm(r)).with_image(table.perm(before[r] as usize)));
    }
    let slow_count = before.iter().filter(|&&b| !good[b as usize]).count();
    witnesses.push(Witness::value("slow-count", n, slow_count));
    Ok(Verdict {
        holds: bound_holds && slow.is_some(),
        witnesses,
    })
}

/// Compares the periodic points of `SC_sigma` on `S_n` with
/// `Av_n(sigma, rev(sigma))`, both consecutive. Observed cycle lengths are
/// reported as witnesses.
pub fn conjecture_general_periodic(sigma: &Permutation, n: usize, bound: usize) -> Result<Verdict> {
    if sigma.len() < 3 {
        return Err(invalid(format!(
            "the periodic-point conjecture concerns patterns of length >= 3, got {sigma}"
        )));
    }
    check_bound(n, bound)?;
    let spec = MachineSpec::consecutive(sigma)?;
    let pats = [
        PatternSpec::consecutive(sigma.clone())?,
        PatternSpec::consecutive(sigma.reverse())?,
    ];
    let table = MapTable::build(&spec, n)?;
    let mask = table.periodic_mask();
    let mut witnesses = Vec::new();
    let mut holds = true;
    for (r, &periodic) in mask.iter().enumerate() {
        let p = table.perm(r);
        let avoids = avoids_all(p.entries(), &pats);
        if periodic != avoids {
            if holds {
                let role = if periodic { "periodic-not-avoider" } else { "avoider-not-periodic" };
                witnesses.push(Witness::perm(role, n, p));
            }
            holds = false;
        }
    }
    let report = periodic_from_table(&table);
    for (len, count) in &report.periods {
        witnesses.push(Witness::value(&format!("period-{len}"), n, count));
    }
    Ok(Verdict { holds, witnesses })
}

/// Whether every permutation still outside `Av(132, 231)` after `n - 2`
/// steps of the classical 132 machine lands on `V_n` one step later.
pub fn conjecture_v_n_limit(n: usize, bound: usize) -> Result<Verdict> {
    if n < 3 {
        return Err(invalid(format!("the V_n limit needs n >= 3, got {n}")));
    }
    check_bound(n, bound)?;
    let table = MapTable::build(&s132(), n)?;
    let target = v_big(n)?;
    let good: Vec<bool> = (0..table.len()).map(|r| avoids_132_231(&table.perm(r))).collect();
    let before = power(&table, n - 2);
    let mut holds = true;
    let mut witnesses = Vec::new();
    let mut slow = 0usize;
    for (r, &b) in before.iter().enumerate() {
        if good[b as usize] {
            continue;
        }
        slow += 1;
        let landing = table.perm(table.image_of(b as usize));
        if slow == 1 {
            witnesses.push(Witness::perm("slow", n, table.perm(r)).with_image(landing.clone()));
        }
        if landing != target && holds {
            holds = false;
            witnesses.push(Witness::perm("counterexample", n, table.perm(r)).with_image(landing));
        }
    }
    witnesses.push(Witness::value("slow-count", n, slow));
    Ok(Verdict { holds, witnesses })
}

/// The standardization of `v_small(k)`, for callers wanting a permutation.
pub fn v_small_standardized(k: usize) -> Result<Permutation> {
    standardize(&v_small(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::symmetric_group;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn sc(s: &str) -> MachineSpec {
        MachineSpec::consecutive(&p(s)).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&sc("132"), &p("123"));
        assert_eq!((o.preperiod, o.period), (0, 2));
        assert_eq!(o.orbit, vec![p("123"), p("321")]);

        let o = orbit(&s132(), &p("132"));
        assert_eq!(o.preperiod, 2);
        assert_eq!(o.orbit[..3], [p("132"), p("231"), p("312")]);

        let o = orbit(&MachineSpec::west(), &p("1"));
        assert_eq!((o.preperiod, o.period), (0, 1));
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(
            periodic_points(&sc("132"), 3, 9).unwrap(),
            vec![p("123"), p("213"), p("312"), p("321")]
        );
        assert_eq!(
            periodic_points(&sc("321"), 3, 9).unwrap(),
            vec![p("132"), p("213"), p("231"), p("312")]
        );
        assert_eq!(periodic_points(&s132(), 2, 9).unwrap(), vec![p("12"), p("21")]);
        assert!(periodic_points(&s132(), 10, 9).is_err());
    }

    #[test]
    fn sd_examples() {
        assert_eq!(sd(&s132(), &p("132"), avoids_132_231).unwrap(), 2);
        assert_eq!(sd(&s132(), &p("312"), avoids_132_231).unwrap(), 0);
        // A target that the orbit never reaches.
        assert!(sd(&s132(), &p("132"), |_| false).is_err());
    }

    #[test]
    fn sd_drops_by_one_along_orbit() {
        let s = s132();
        for n in 0..=7 {
            for pi in symmetric_group(n) {
                let d = sd(&s, &pi, avoids_132_231).unwrap();
                let d1 = sd(&s, &s.run(&pi), avoids_132_231).unwrap();
                assert_eq!(d1, d.saturating_sub(1), "{pi}");
            }
        }
    }

    #[test]
    fn witness_objects() {
        assert_eq!(v_small(1).unwrap(), vec![3, 1, 2, 4]);
        assert_eq!(v_small(2).unwrap(), vec![6, 4, 2, 1, 3, 5, 7]);
        assert_eq!(v_small(3).unwrap(), vec![9, 7, 5, 3, 1, 2, 4, 6, 8, 10]);
        assert_eq!(d_block(2, 5, 0).unwrap(), vec![15, 12, 9]);
        assert_eq!(d_block(2, 5, 1).unwrap(), vec![13, 10]);
        assert_eq!(d_block(2, 5, 2).unwrap(), vec![14, 11, 8]);
        assert_eq!(d_block(1, 2, 1).unwrap(), Vec::<u8>::new());
        assert_eq!(v_big(6).unwrap(), p("642135"));
        assert_eq!(v_big(7).unwrap(), p("7531246"));
        assert_eq!(v_big(3).unwrap(), p("312"));
        assert_eq!(lambda_witness(2).unwrap(), p("465132"));
        assert_eq!(lambda_witness(1).unwrap(), p("132"));
        assert_eq!(max_depth_witness(4).unwrap(), p("4132"));
        assert_eq!(max_depth_witness(5).unwrap(), p("45132"));
        assert!(lambda_witness(0).is_err());
        assert!(v_small(0).is_err());
        assert!(d_block(1, 3, 3).is_err());
        assert!(v_big(0).is_err());
        assert_eq!(v_small_standardized(1).unwrap(), p("3124"));
    }

    #[test]
    fn claims() {
        for m in 2..=5 {
            let r = verify_claims_1_2(m).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.claim2.len(), m - 2);
        }
        assert!(verify_claims_1_2(1).is_err());
    }

    #[test]
    fn witness_depth_is_n_minus_one() {
        let s = s132();
        for n in 3..=12 {
            let w = max_depth_witness(n).unwrap();
            assert_eq!(sd(&s, &w, avoids_132_231).unwrap(), n - 1, "n={n}");
        }
    }

    #[test]
    fn small_conjecture_probes() {
        let v = conjecture_2n_minus_4(3, 9).unwrap();
        assert!(v.holds);
        assert!(v.witnesses.iter().any(|w| w.role == "slow"));

        let v = conjecture_v_n_limit(3, 9).unwrap();
        assert!(v.holds);
        let slow: Vec<_> = v.witnesses.iter().filter(|w| w.role == "slow").collect();
        assert_eq!(slow[0].image, Some(p("312")));

        assert!(conjecture_general_periodic(&p("21"), 4, 9).is_err());
        let v = conjecture_general_periodic(&p("123"), 5, 9).unwrap();
        assert!(v.holds);
        assert_eq!(v.witnesses.len(), 1);
        assert_eq!(v.witnesses[0].role, "period-2");
    }
}
