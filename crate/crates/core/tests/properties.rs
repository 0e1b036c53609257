//! Randomized properties on sizes beyond the exhaustive range.

use proptest::prelude::*;
use stacksort_core::machine::{replay, sc123_closed_form, sc321_closed_form};
use stacksort_core::pattern::avoids_all;
use stacksort_core::preimage::count_preimages_reverse_layered_132;
use stacksort_core::sortable::{phi, phi_inverse, sortable_132_characterized, sortable_123_characterized, is_sortable};
use stacksort_core::{MachineSpec, Op, PatternSpec, Permutation};

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max).prop_flat_map(|n| {
        Just((1..=n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

fn pattern() -> impl Strategy<Value = PatternSpec> {
    (perm(4).prop_filter("len >= 2", |b| b.len() >= 2), 0u32..8).prop_map(|(body, mask)| {
        let adj: Vec<usize> = (1..body.len()).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        PatternSpec::new(body, &adj).unwrap()
    })
}

fn machine() -> impl Strategy<Value = MachineSpec> {
    prop::collection::vec(pattern(), 1..=2).prop_map(|v| MachineSpec::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn output_is_a_permutation_of_same_length(spec in machine(), pi in perm(12)) {
        let out = spec.run(&pi);
        prop_assert_eq!(out.len(), pi.len());
        prop_assert!(Permutation::new(out.into_entries()).is_ok());
    }

    #[test]
    fn traces_replay_and_stay_legal(spec in machine(), pi in perm(10)) {
        let steps = spec.trace(&pi, true);
        prop_assert_eq!(steps.iter().filter(|s| s.op == Op::Push).count(), pi.len());
        prop_assert_eq!(steps.iter().filter(|s| s.op == Op::Pop).count(), pi.len());
        for s in &steps {
            prop_assert!(avoids_all(s.stack.as_ref().unwrap(), spec.forbidden()));
        }
        prop_assert_eq!(replay(&steps), spec.run(&pi).into_entries());
    }

    #[test]
    fn pushes_exactly_when_full_rescan_allows(spec in machine(), pi in perm(10)) {
        let input = pi.entries();
        let mut next = 0;
        let mut before: Vec<u8> = Vec::new();
        let mut scratch = Vec::new();
        for step in spec.trace(&pi, true) {
            if next < input.len() {
                let legal = spec.push_allowed_full(&before, input[next]);
                prop_assert_eq!(spec.push_allowed(&before, input[next], &mut scratch), legal);
                prop_assert_eq!(step.op == Op::Push, legal);
            }
            if step.op == Op::Push {
                next += 1;
            }
            before = step.stack.unwrap();
        }
    }

    #[test]
    fn complement_conjugacy(spec in machine(), pi in perm(11)) {
        let lhs = spec.complement().run(&pi);
        let rhs = spec.run(&pi.complement()).complement();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closed_forms_match_simulation(pi in perm(14)) {
        let sc321 = MachineSpec::consecutive(&"321".parse().unwrap()).unwrap();
        let sc123 = MachineSpec::consecutive(&"123".parse().unwrap()).unwrap();
        prop_assert_eq!(sc321_closed_form(&pi), sc321.run(&pi));
        prop_assert_eq!(sc123_closed_form(&pi), sc123.run(&pi));
    }

    #[test]
    fn peak_valley_count_never_drops_under_sc321(pi in perm(14)) {
        let sc321 = MachineSpec::consecutive(&"321".parse().unwrap()).unwrap();
        prop_assert!(pi.peaks_valleys() <= sc321.run(&pi).peaks_valleys());
    }

    #[test]
    fn characterizations_on_larger_sizes(pi in perm(13)) {
        let sc132 = MachineSpec::consecutive(&"132".parse().unwrap()).unwrap();
        let sc123 = MachineSpec::consecutive(&"123".parse().unwrap()).unwrap();
        prop_assert_eq!(sortable_132_characterized(&pi), is_sortable(&sc132, &pi));
        prop_assert_eq!(sortable_123_characterized(&pi), is_sortable(&sc123, &pi));
        if let Ok(path) = phi(&pi) {
            prop_assert_eq!(phi_inverse(&path).unwrap(), pi);
        }
    }

    #[test]
    fn layered_count_is_positive(bits in prop::collection::vec(any::<bool>(), 1..30)) {
        let word: String = std::iter::once('A')
            .chain(bits.iter().skip(1).map(|&b| if b { 'A' } else { 'D' }))
            .collect();
        let pi = word.parse::<stacksort_core::AdWord>().unwrap().to_permutation();
        let c = count_preimages_reverse_layered_132(&pi).unwrap();
        prop_assert!(c.total >= 1u32.into());
    }
}
