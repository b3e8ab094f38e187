use kairos_core::corpus::Verdict;
use kairos_core::eval::{setting_pairs, task1_pairs, task2_pairs};
use kairos_core::graph::{build_voter_graph, pagerank, Graph, IterParams};
use kairos_core::impact::labeled_claims;
use kairos_core::labeling::{success_record, winner_by_points};
use kairos_core::synth::{gen_debates, gen_trees, Preset, SynthConfig};

fn small(preset: Preset, seed: u64) -> SynthConfig {
    SynthConfig {
        n_users: 40,
        n_voters: 60,
        n_debates: 120,
        n_trees: 20,
        ..SynthConfig::preset(preset, seed)
    }
}

#[test]
fn generators_are_pure_functions_of_their_config() {
    let cfg = small(Preset::Ideology, 3);
    assert_eq!(gen_debates(&cfg).unwrap(), gen_debates(&cfg).unwrap());
    let other = gen_debates(&small(Preset::Ideology, 4)).unwrap();
    assert_ne!(gen_debates(&cfg).unwrap().0, other.0);
    let trees = small(Preset::Trees, 3);
    assert_eq!(gen_trees(&trees).unwrap(), gen_trees(&trees).unwrap());
}

#[test]
fn synthetic_debates_flow_through_labels_and_tasks() {
    let (corpus, _) = gen_debates(&small(Preset::Ideology, 1)).unwrap();
    let decided = corpus
        .debates()
        .iter()
        .filter(|d| winner_by_points(&d.ballots) != Verdict::Tie)
        .count();
    assert!(decided > corpus.debates().len() / 2);
    for u in corpus.users() {
        let Ok(r) = success_record(&u.user_id, &corpus) else {
            assert!(corpus.debates_of(&u.user_id).is_empty());
            continue;
        };
        assert_eq!(r.outcomes.len(), r.debates_as_debater.len());
        assert_eq!(r.wins, r.outcomes.iter().filter(|&&w| w).count());
    }
    let t2 = task2_pairs(&corpus);
    assert!(!t2.is_empty());
    assert!(t2.iter().all(|r| r.label < 2));
    assert!(task1_pairs(&corpus, None).iter().all(|r| r.label < 2));
}

#[test]
fn network_preset_pairs_and_ranks_users() {
    let (corpus, meta) = gen_debates(&SynthConfig::preset(Preset::Network, 2)).unwrap();
    let pairs = setting_pairs(&corpus, 1, 2).unwrap();
    assert!(!pairs.is_empty());
    for p in &pairs {
        assert_ne!(p.users[0], p.users[1]);
        assert!(p.label < 2);
    }
    let g = build_voter_graph(&corpus);
    let pr = pagerank(&g, 0.85, IterParams::default()).unwrap();
    assert_eq!(pr.len(), g.nodes().len());
    assert!((pr.values().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(!meta.skills.is_empty());
}

#[test]
fn tree_claims_carry_filtered_labels() {
    let (trees, meta) = gen_trees(&small(Preset::Trees, 5)).unwrap();
    let claims = labeled_claims(&trees);
    assert!(!claims.is_empty());
    let total: usize = trees.iter().map(|t| t.nodes().len() - 1).sum();
    assert!(claims.len() < total, "unreliable tallies are dropped");
    assert!(claims.iter().all(|c| c.context_length >= 1));
    assert!(meta.claim_only_bound.is_some_and(|b| b > 0.0 && b < 1.0));
}
