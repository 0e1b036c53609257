use std::io::BufRead;
use std::time::Instant;

use serde_json::{json, Value};
use stacksort_core::dynamics::{
    conjecture_2n_minus_4, conjecture_general_periodic, conjecture_v_n_limit, orbit as orbit_of,
    periodic_report, Verdict,
};
use stacksort_core::golden::{golden, GoldenTable};
use stacksort_core::preimage::{
    conjecture_fertility_spectrum, fertility_spectrum, fiber as fiber_of, max_fertility as max_fertility_of,
};
use stacksort_core::scan::{check_bound, MapTable};
use stacksort_core::sequences::by_name;
use stacksort_core::sortable::{
    class_criterion, conjecture_fine_transform, count_sortable, is_permutation_class, is_sortable,
    phi as phi_of, phi_inverse, sortable_members, ClassVerdict, DyckPath,
};
use stacksort_core::{MachineSpec, Op, Permutation, Result};

use crate::report::{spaced, Exit, Report};
use crate::{Bounds, ConjectureName, TableName};

pub fn map(spec: &MachineSpec, inputs: &[String]) -> Result<Report> {
    let inputs: Vec<Permutation> = if inputs.is_empty() {
        std::io::stdin()
            .lock()
            .lines()
            .map_while(|l| l.ok())
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.parse())
            .collect::<Result<_>>()?
    } else {
        inputs.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let outputs: Vec<Permutation> = inputs.iter().map(|pi| spec.run(pi)).collect();
    let plain = outputs.iter().map(|o| format!("{o}\n")).collect();
    let results: Vec<Value> = inputs
        .iter()
        .zip(&outputs)
        .map(|(i, o)| json!({ "input": i, "output": o }))
        .collect();
    let rows: Vec<Vec<String>> = inputs.iter().zip(&outputs).map(|(i, o)| vec![i.to_string(), o.to_string()]).collect();
    Ok(Report::new(plain, json!({ "machine": spec.to_string(), "results": results })).csv(&["input", "output"], rows))
}

pub fn trace(spec: &MachineSpec, pi: &Permutation, show_stack: bool) -> Result<Report> {
    let steps = spec.trace(pi, show_stack);
    let mut plain = String::new();
    for s in &steps {
        let op = match s.op {
            Op::Push => "push",
            Op::Pop => "pop",
        };
        match &s.stack {
            Some(st) => plain.push_str(&format!("{op} {} [{}]\n", s.value, spaced(st))),
            None => plain.push_str(&format!("{op} {}\n", s.value)),
        }
    }
    plain.push_str(&format!("output {}\n", spec.run(pi)));
    let rows: Vec<Vec<String>> = steps
        .iter()
        .map(|s| {
            let op = if s.op == Op::Push { "push" } else { "pop" };
            vec![op.into(), s.value.to_string(), s.stack.as_ref().map(|st| spaced(st)).unwrap_or_default()]
        })
        .collect();
    Ok(Report::new(plain, json!({ "steps": steps })).csv(&["op", "value", "stack"], rows))
}

pub fn orbit(spec: &MachineSpec, pi: &Permutation) -> Result<Report> {
    let r = orbit_of(spec, pi);
    let plain = format!(
        "{}\npreperiod {}\nperiod {}\n",
        spaced(&r.orbit),
        r.preperiod,
        r.period
    );
    let rows: Vec<Vec<String>> = r.orbit.iter().enumerate().map(|(t, p)| vec![t.to_string(), p.to_string()]).collect();
    Ok(Report::new(plain, json!(r)).csv(&["step", "perm"], rows))
}

pub fn periodic(spec: &MachineSpec, n: usize, bound: usize) -> Result<Report> {
    let r = periodic_report(spec, n, bound)?;
    let mut plain = format!("{} periodic points\n", r.points.len());
    for (len, count) in &r.periods {
        plain.push_str(&format!("period {len}: {count}\n"));
    }
    for p in &r.points {
        plain.push_str(&format!("{p}\n"));
    }
    let rows = r.points.iter().map(|p| vec![p.to_string()]);
    Ok(Report::new(plain, json!(r)).csv(&["perm"], rows))
}

fn depth_table(spec: &MachineSpec, n: usize, bound: usize) -> Result<(MapTable, Vec<u32>)> {
    check_bound(n, bound)?;
    let table = MapTable::build(spec, n)?;
    let depths = table.depths(&table.periodic_mask())?;
    Ok((table, depths))
}

pub fn sd_one(spec: &MachineSpec, pi: &Permutation, bound: usize) -> Result<Report> {
    let (_, depths) = depth_table(spec, pi.len(), bound)?;
    let d = depths[pi.rank() as usize];
    Ok(Report::new(format!("{d}\n"), json!({ "input": pi, "depth": d })))
}

pub fn sd_max(spec: &MachineSpec, n: usize, bound: usize) -> Result<Report> {
    let (table, depths) = depth_table(spec, n, bound)?;
    let max = depths.iter().copied().max().unwrap_or(0);
    let witnesses: Vec<Permutation> = (0..table.len()).filter(|&r| depths[r] == max).map(|r| table.perm(r)).collect();
    let plain = format!("max depth {max}\n{} attaining, first {}\n", witnesses.len(), witnesses[0]);
    Ok(Report::new(
        plain,
        json!({ "n": n, "max_depth": max, "count": witnesses.len(), "first": witnesses[0] }),
    ))
}

pub fn fiber(spec: &MachineSpec, target: &Permutation, count_only: bool, bound: usize) -> Result<Report> {
    let r = fiber_of(spec, target, bound)?;
    let mut plain = format!("{}\n", r.count);
    let mut value = json!({ "target": r.target, "count": r.count });
    if !count_only {
        for p in &r.preimages {
            plain.push_str(&format!("{p}\n"));
        }
        value["preimages"] = json!(r.preimages);
    }
    let rows = r.preimages.iter().map(|p| vec![p.to_string()]);
    Ok(Report::new(plain, value).csv(&["preimage"], rows))
}

pub fn max_fertility(spec: &MachineSpec, n: usize, bound: usize) -> Result<Report> {
    let r = max_fertility_of(spec, n, bound)?;
    let plain = format!("{}\n{}\n", r.value, spaced(&r.argmax));
    let rows = r.argmax.iter().map(|p| vec![p.to_string(), r.value.to_string()]);
    Ok(Report::new(plain, json!(r)).csv(&["target", "fertility"], rows))
}

pub fn spectrum(spec: &MachineSpec, n_max: usize, bound: usize) -> Result<Report> {
    let s = fertility_spectrum(spec, n_max, bound)?;
    let gap = s.first_gap.map_or("none".to_string(), |g| g.to_string());
    let plain = format!("{}\nmax {}\nfirst gap {gap}\n", spaced(&s.sizes), s.max);
    let rows = s.sizes.iter().map(|f| vec![f.to_string()]);
    Ok(Report::new(plain, json!(s)).csv(&["size"], rows))
}

pub fn sortable(spec: &MachineSpec, n: usize, list: bool, bound: usize) -> Result<Report> {
    if list {
        let members = sortable_members(spec, n, bound)?;
        let plain = members.iter().map(|p| format!("{p}\n")).collect();
        let rows = members.iter().map(|p| vec![p.to_string()]);
        let value = json!({ "n": n, "count": members.len(), "members": members });
        return Ok(Report::new(plain, value).csv(&["perm"], rows));
    }
    let count = count_sortable(spec, n, bound)?;
    Ok(Report::new(format!("{count}\n"), json!({ "n": n, "count": count }))
        .csv(&["n", "count"], [vec![n.to_string(), count.to_string()]]))
}

pub fn phi(pi: &Permutation) -> Result<Report> {
    let path = phi_of(pi)?;
    Ok(Report::new(format!("{path}\n"), json!({ "perm": pi, "path": path })))
}

pub fn phi_invert(path: &DyckPath) -> Result<Report> {
    let pi = phi_inverse(path)?;
    Ok(Report::new(format!("{pi}\n"), json!({ "perm": pi, "path": path })))
}

fn verdict_name(v: ClassVerdict) -> &'static str {
    match v {
        ClassVerdict::ClassAv132 => "class-av132",
        ClassVerdict::ClassAv213 => "class-av213",
        ClassVerdict::NotClass => "not-class",
    }
}

pub fn class_check(sigma: &Permutation, brute_n: Option<usize>, bound: usize) -> Result<Report> {
    let verdict = class_criterion(sigma)?;
    let mut plain = format!("{}\n", verdict_name(verdict));
    let mut value = json!({ "pattern": sigma, "verdict": verdict_name(verdict), "brute": null });
    if let Some(n_max) = brute_n {
        let spec = MachineSpec::consecutive(sigma)?;
        let found = is_permutation_class(|pi| is_sortable(&spec, pi), n_max, bound)?;
        let agrees = found.is_some() == (verdict == ClassVerdict::NotClass);
        match &found {
            Some(c) => plain.push_str(&format!(
                "brute force n<={n_max}: not closed, {} is sortable but {} is not\n",
                c.member, c.pattern
            )),
            None => plain.push_str(&format!("brute force n<={n_max}: closed\n")),
        }
        plain.push_str(&format!("agrees {agrees}\n"));
        value["brute"] = json!({
            "n_max": n_max,
            "closed": found.is_none(),
            "counterexample": found.map(|c| json!({ "member": c.member, "pattern": c.pattern })),
            "agrees": agrees,
        });
    }
    Ok(Report::new(plain, value))
}

pub fn seq(name: &str, upto: usize) -> Result<Report> {
    let t = by_name(name, upto)?;
    let indexed: Vec<(usize, String)> = t
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (i + t.offset, v.to_string()))
        .collect();
    let plain = format!("{}\n", spaced(indexed.iter().map(|(_, v)| v)));
    let rows: Vec<Vec<String>> = indexed.iter().map(|(i, v)| vec![i.to_string(), v.clone()]).collect();
    let bfile = t.to_bfile();
    Ok(Report::new(plain, json!(t)).csv(&["n", "value"], rows).bfile(bfile))
}

fn merge(verdicts: Vec<Verdict>) -> Verdict {
    let holds = verdicts.iter().all(|v| v.holds);
    let witnesses = verdicts.into_iter().flat_map(|v| v.witnesses).collect();
    Verdict { holds, witnesses }
}

pub fn conjecture(
    name: ConjectureName,
    n: usize,
    pattern: Option<Permutation>,
    timings: bool,
    bounds: &Bounds,
) -> Result<Report> {
    let start = Instant::now();
    let (label, verdict) = match name {
        ConjectureName::FineTransform => (
            "fine-transform",
            merge((0..=n).map(|k| conjecture_fine_transform(k, bounds.single)).collect::<Result<_>>()?),
        ),
        ConjectureName::TwoNMinus4 => (
            "2n-4",
            merge((3..=n.max(3)).map(|k| conjecture_2n_minus_4(k, bounds.quadratic)).collect::<Result<_>>()?),
        ),
        ConjectureName::GeneralPeriodic => {
            let sigma = pattern.unwrap_or_else(|| "1234".parse().unwrap());
            let bound = if sigma.len() >= 4 { bounds.or(7) } else { bounds.quadratic };
            let vs = (0..=n).map(|k| conjecture_general_periodic(&sigma, k, bound)).collect::<Result<_>>()?;
            ("general-periodic", merge(vs))
        }
        ConjectureName::FertilitySpectrum => {
            let sigma = pattern.unwrap_or_else(|| "132".parse().unwrap());
            let spec = MachineSpec::consecutive(&sigma)?;
            ("fertility-spectrum", conjecture_fertility_spectrum(&spec, n, bounds.single)?)
        }
        ConjectureName::VnLimit => (
            "vn-limit",
            merge((3..=n.max(3)).map(|k| conjecture_v_n_limit(k, bounds.quadratic)).collect::<Result<_>>()?),
        ),
    };
    let elapsed = timings.then(|| start.elapsed().as_millis() as u64);
    let mut plain = format!("{label} n={n}: {}\n", if verdict.holds { "holds" } else { "fails" });
    for w in &verdict.witnesses {
        let mut line = format!("  {} n={}", w.role, w.n);
        if let Some(p) = &w.perm {
            line.push_str(&format!(" perm={p}"));
        }
        if let Some(i) = &w.image {
            line.push_str(&format!(" image={i}"));
        }
        if let Some(v) = &w.value {
            line.push_str(&format!(" value={v}"));
        }
        plain.push_str(&line);
        plain.push('\n');
    }
    if let Some(ms) = elapsed {
        plain.push_str(&format!("elapsed {ms} ms\n"));
    }
    let value = json!({
        "name": label,
        "n": n,
        "holds": verdict.holds,
        "witnesses": verdict.witnesses,
        "elapsed_ms": elapsed,
    });
    Ok(Report::new(plain, value))
}

pub fn reproduce(table: TableName, n_max: usize, bound: usize) -> Result<Report> {
    let gold = match table {
        TableName::Sortable => &golden().sortable,
        TableName::MaxFertility => &golden().max_fertility,
    };
    compare(table, gold, n_max, bound)
}

fn compare(table: TableName, gold: &GoldenTable, n_max: usize, bound: usize) -> Result<Report> {
    let label = match table {
        TableName::Sortable => "sortable",
        TableName::MaxFertility => "max-fertility",
    };
    let reach = n_max.min(bound);
    let truncated = (n_max > bound).then_some(bound + 1);
    let columns: Vec<usize> = (gold.offset..=reach).collect();
    let mut rows_json = Vec::new();
    let mut csv_rows = Vec::new();
    let mut plain = format!("{label} {}\n", spaced(columns.iter().map(|n| format!("n={n}"))));
    let mut mismatches = 0;
    for pattern in gold.rows.keys() {
        let spec = MachineSpec::consecutive(&pattern.parse()?)?;
        let mut values = Vec::new();
        let mut row_mismatch = Vec::new();
        for &n in &columns {
            let v = match table {
                TableName::Sortable => count_sortable(&spec, n, bound)?,
                TableName::MaxFertility => max_fertility_of(&spec, n, bound)?.value as u64,
            };
            let want = gold.value(pattern, n);
            if want.is_some_and(|w| w != v) {
                row_mismatch.push(n);
            }
            csv_rows.push(vec![
                pattern.clone(),
                n.to_string(),
                v.to_string(),
                want.map(|w| w.to_string()).unwrap_or_default(),
            ]);
            values.push(v);
        }
        plain.push_str(&format!("{pattern} {}\n", spaced(&values)));
        for &n in &row_mismatch {
            plain.push_str(&format!(
                "  mismatch {pattern} n={n}: computed {}, expected {}\n",
                values[n - gold.offset],
                gold.value(pattern, n).unwrap()
            ));
        }
        mismatches += row_mismatch.len();
        let expected: Vec<u64> = columns.iter().filter_map(|&n| gold.value(pattern, n)).collect();
        rows_json.push(json!({
            "pattern": pattern,
            "values": values,
            "expected": expected,
            "mismatches": row_mismatch,
        }));
    }
    match truncated {
        Some(at) => plain.push_str(&format!("... truncated at n={at} (scan bound {bound})\n")),
        None => plain.push_str(if mismatches == 0 { "all values match\n" } else { "MISMATCH\n" }),
    }
    let value = json!({
        "table": label,
        "offset": gold.offset,
        "n_max": n_max,
        "rows": rows_json,
        "matches": mismatches == 0,
        "truncated_at": truncated,
    });
    let exit = if mismatches > 0 {
        Exit::Mismatch
    } else if truncated.is_some() {
        Exit::Resource
    } else {
        Exit::Ok
    };
    Ok(Report::new(plain, value)
        .csv(&["pattern", "n", "computed", "expected"], csv_rows)
        .exit(exit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampered_table_is_a_mismatch() {
        let mut gold = golden().sortable.clone();
        gold.rows.get_mut("321").unwrap()[4] = 10;
        let r = compare(TableName::Sortable, &gold, 5, 9).unwrap();
        assert_eq!(r.exit, Exit::Mismatch);
        assert!(r.plain.contains("mismatch 321 n=4: computed 9, expected 10"));
        assert_eq!(r.json["rows"][5]["mismatches"], json!([4]));
    }

    #[test]
    fn untouched_table_matches() {
        let r = compare(TableName::MaxFertility, &golden().max_fertility, 6, 9).unwrap();
        assert_eq!(r.exit, Exit::Ok);
        assert_eq!(r.json["matches"], json!(true));
    }
}
