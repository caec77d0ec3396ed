mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use pradic::bbn::{calibrate_phi, infer_marginal, infer_marginal_with_order, specific_failure_probability};
use pradic::ccf::{apply_modified_bfm, estimate_beta};
use pradic::et::{compare_models, delta_percent, solve_event_tree, EtOptions};
use pradic::ft::{minimal_cut_sets, quantify, QuantOptions, SolveOptions};
use pradic::model::{BetaTable, BranchOutcome, Grade, ScoreSheet, Subfactor, TableKind};
use pradic::validate;

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn raising_truncation_only_drops_cut_sets(seed in any::<u64>(), t in 1e-9f64..1e-2) {
        let model = random_tree(&mut rng(seed), 10);
        let all = minimal_cut_sets(&model, "T", &SolveOptions::with_truncation(0.0)).unwrap();
        let some = minimal_cut_sets(&model, "T", &SolveOptions::with_truncation(t)).unwrap();
        for cs in &some.cut_sets {
            prop_assert!(all.cut_sets.contains(cs));
            prop_assert!(cs.probability >= t);
        }
        let kept = all.cut_sets.iter().filter(|c| c.probability >= t).count();
        prop_assert_eq!(kept, some.cut_sets.len());
        let q_all = quantify(&all, &model, &QuantOptions::default()).unwrap();
        let q_some = quantify(&some, &model, &QuantOptions::default()).unwrap();
        prop_assert!(q_some.rare_event_sum <= q_all.rare_event_sum);
    }

    #[test]
    fn solving_is_deterministic(seed in any::<u64>()) {
        let model = random_tree(&mut rng(seed), 10);
        let a = minimal_cut_sets(&model, "T", &SolveOptions::default()).unwrap();
        let b = minimal_cut_sets(&model.clone(), "T", &SolveOptions::default()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(validate(&model), validate(&model));
    }

    #[test]
    fn sequence_counts_shrink_with_truncation(seed in any::<u64>(), t in 1e-12f64..1e-3) {
        let model = random_event_tree(&mut rng(seed), 5);
        let loose = solve_event_tree(&model, "ET", &EtOptions::with_truncation(0.0)).unwrap();
        let tight = solve_event_tree(&model, "ET", &EtOptions::with_truncation(t)).unwrap();
        for (a, b) in loose.sequences.iter().zip(&tight.sequences) {
            prop_assert_eq!(&a.id, &b.id);
            prop_assert!(b.cut_set_count <= a.cut_set_count);
        }
    }

    #[test]
    fn raising_a_branch_never_lowers_its_failure_paths(seed in any::<u64>(), bump in 1.0f64..5.0) {
        let model = random_event_tree(&mut rng(seed), 5);
        let Some(bp) = model.event_trees[0].branch_points.iter().find(|b| b.probability.is_some()) else {
            return Ok(());
        };
        let label = bp.label.clone();
        let mut raised = model.clone();
        for b in &mut raised.event_trees[0].branch_points {
            if b.label == label {
                let p = b.probability.unwrap();
                b.probability = Some((p * bump).min(1.0).max(p));
            }
        }
        let before = solve_event_tree(&model, "ET", &EtOptions::with_truncation(0.0)).unwrap();
        let after = solve_event_tree(&raised, "ET", &EtOptions::with_truncation(0.0)).unwrap();
        let et = &model.event_trees[0];
        for (a, b) in before.sequences.iter().zip(&after.sequences) {
            let seq = et.sequences.iter().find(|s| s.id == a.id).unwrap();
            let fails_here = seq
                .outcomes
                .iter()
                .any(|o| o.branch == label && o.outcome == BranchOutcome::Failure);
            if fails_here {
                prop_assert!(b.frequency >= a.frequency * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn comparison_is_antisymmetric(seed in any::<u64>()) {
        let model = random_event_tree(&mut rng(seed), 4);
        let base = solve_event_tree(&model, "ET", &EtOptions::with_truncation(0.0)).unwrap().sequences;
        let mut improved = base.clone();
        for s in improved.iter_mut().step_by(2) {
            s.frequency *= 0.5;
        }
        let fwd = compare_models(&base, &improved);
        let back = compare_models(&improved, &base);
        for (f, b) in fwd.rows.iter().zip(&back.rows) {
            prop_assert_eq!(f.baseline_cdf, b.improved_cdf);
            if let (Some(x), Some(y)) = (f.delta_pct, b.delta_pct) {
                prop_assert!(x * y <= 0.0);
            }
        }
        let same = compare_models(&base, &base);
        prop_assert!(same.rows.iter().all(|r| r.delta_pct == Some(0.0)));
    }

    #[test]
    fn delta_sign_follows_direction(b in 1e-12f64..1.0, i in 1e-12f64..1.0) {
        let d = delta_percent(b, i).unwrap();
        prop_assert_eq!(d < 0.0, i < b);
        prop_assert!(d >= -100.0);
    }

    #[test]
    fn sfp_is_linear_in_fault_probability(sfp_g in 1e-6f64..1e-2, pf_g in 1e-2f64..1.0, p in 0.0f64..1e-2, k in 0.0f64..10.0) {
        let cal = calibrate_phi(sfp_g, pf_g).unwrap();
        let one = specific_failure_probability(&cal, p).unwrap();
        let scaled = specific_failure_probability(&cal, k * p).unwrap();
        prop_assert!((scaled - k * one).abs() <= 1e-15 * scaled.abs().max(1e-300) + 1e-300);
        let at_generic = specific_failure_probability(&cal, pf_g).unwrap();
        prop_assert!((at_generic - sfp_g).abs() <= 1e-15 * sfp_g);
    }

    #[test]
    fn elimination_order_does_not_matter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let net = random_network(&mut r, 9);
        let query = net.nodes[0].id.clone();
        let evidence = random_evidence(&mut r, &net, &query, 2);
        let mut hidden: Vec<&str> = net
            .nodes
            .iter()
            .map(|n| n.id.as_str())
            .filter(|id| *id != query && !evidence.contains_key(*id))
            .collect();
        let reference = infer_marginal(&net, &query, &evidence).unwrap();
        hidden.shuffle(&mut r);
        let other = infer_marginal_with_order(&net, &query, &evidence, &hidden).unwrap();
        for (a, b) in reference.probs.iter().zip(&other.probs) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let total: f64 = reference.probs.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ccf_split_scales_linearly(seed in any::<u64>(), s in 1e-6f64..=1.0) {
        let g = random_group(&mut rng(seed));
        let betas: BTreeMap<String, f64> = g.cccgs.iter().map(|c| (c.id.clone(), c.beta.unwrap())).collect();
        let b = apply_modified_bfm(&g, &betas).unwrap();
        let mut scaled = g.clone();
        scaled.input_probability *= s;
        let bs = apply_modified_bfm(&scaled, &betas).unwrap();
        prop_assert!(rel_close(bs.q_independent, s * b.q_independent, 1e-14));
        for (k, v) in &bs.p_per_cccg {
            prop_assert!(rel_close(*v, s * b.p_per_cccg[k], 1e-14));
        }
    }

    #[test]
    fn better_grades_never_raise_beta(
        hw in any::<bool>(),
        grades in proptest::collection::vec(0usize..7, 8),
        which in 0usize..8,
    ) {
        let (kind, table) = if hw {
            (TableKind::Hardware, BetaTable::hardware())
        } else {
            (TableKind::Software, BetaTable::software())
        };
        let sheet = |gs: &[usize]| ScoreSheet {
            name: "s".into(),
            table: kind,
            grades: Subfactor::ALL.iter().zip(gs).map(|(s, g)| (*s, Grade::ALL[*g])).collect(),
        };
        let before = estimate_beta(&table, &sheet(&grades)).unwrap();
        let mut better = grades.clone();
        if better[which] < 6 {
            better[which] += 1;
            let after = estimate_beta(&table, &sheet(&better)).unwrap();
            prop_assert!(after < before);
        }
    }
}
