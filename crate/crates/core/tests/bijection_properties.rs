use std::collections::{BTreeMap, HashSet};

use kdyck::path::{par_enumerate_paths, residue_census};
use kdyck::{
    decompose_bounded, enumerate_geometric_ncts, enumerate_paths, enumerate_trees, path_to_tree,
    recombine, tree_to_path, KnctTree, Signature,
};
use proptest::prelude::*;

#[test]
fn trees_and_paths_are_in_bijection_up_to_k4_m6() {
    for k in 2..=4 {
        for m in 0..=6 {
            let paths: HashSet<String> = enumerate_paths(k, m, 0)
                .unwrap()
                .map(|p| p.to_string())
                .collect();
            let mut image = HashSet::new();
            let mut trees = 0;
            for tree in enumerate_trees(k, m).unwrap() {
                let p = tree_to_path(&tree);
                assert_eq!(
                    p.residue_histogram(),
                    tree.edge_class_histogram(0),
                    "{tree}"
                );
                assert_eq!(path_to_tree(&p).unwrap(), tree);
                image.insert(p.to_string());
                trees += 1;
            }
            assert_eq!(trees, paths.len(), "k={k} m={m}");
            assert_eq!(image, paths, "k={k} m={m}");
        }
    }
}

#[test]
fn geometric_and_butterfly_statistics_agree() {
    for n in 1..=7 {
        let mut geometric: BTreeMap<Signature, usize> = BTreeMap::new();
        for t in enumerate_geometric_ncts(n).unwrap() {
            *geometric.entry(t.classify_left_right()).or_default() += 1;
        }
        let mut butterfly: BTreeMap<Signature, usize> = BTreeMap::new();
        for t in enumerate_trees(2, n - 1).unwrap() {
            *butterfly.entry(t.edge_class_histogram(0)).or_default() += 1;
        }
        assert_eq!(geometric, butterfly, "n={n}");
    }
}

#[test]
fn rotation_makes_group_index_the_class() {
    for k in 2..=4 {
        for m in 0..=5 {
            for tree in enumerate_trees(k, m).unwrap() {
                let rotated = tree.rotate_subtrees();
                assert_eq!(rotated.positional_histogram(), tree.edge_class_histogram(0));
                assert_eq!(rotated.unrotate_subtrees(), tree);
                assert_eq!(rotated.edges(), tree.edges());
            }
        }
    }
}

#[test]
fn bounded_paths_decompose_and_transport() {
    for k in 2..=3 {
        for t in 1..k {
            for m in 0..=5 {
                for p in enumerate_paths(k, m, t).unwrap() {
                    let d = decompose_bounded(&p).unwrap();
                    assert_eq!(d.components().len(), t + 1);
                    assert_eq!(d.down_steps(), m);
                    assert_eq!(recombine(&d).unwrap(), p);
                    let mut hist = Signature::zeros(k);
                    for (s, c) in d.components().iter().enumerate() {
                        hist = hist.add(&path_to_tree(c).unwrap().edge_class_histogram(s));
                    }
                    assert_eq!(hist, p.residue_histogram(), "{p}");
                }
            }
        }
    }
}

#[test]
fn parallel_generation_matches_sequential() {
    for (k, m, t) in [(2, 6, 1), (3, 5, 2), (4, 4, 0)] {
        let seq: Vec<String> = enumerate_paths(k, m, t)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        let par: Vec<String> = par_enumerate_paths(k, m, t)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(seq, par);
        let census = residue_census(k, m, t).unwrap();
        assert_eq!(census.values().sum::<u64>() as usize, seq.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

    #[test]
    fn canonical_text_round_trips(k in 2usize..=4, m in 0usize..=5, pick in any::<prop::sample::Index>()) {
        let trees: Vec<KnctTree> = enumerate_trees(k, m).unwrap().collect();
        let tree = &trees[pick.index(trees.len())];
        prop_assert_eq!(&KnctTree::parse(k, &tree.canonical()).unwrap(), tree);
        let json = serde_json::to_string(tree).unwrap();
        prop_assert_eq!(&serde_json::from_str::<KnctTree>(&json).unwrap(), tree);
    }
}
