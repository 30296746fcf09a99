//! High-volume stress runs, ignored by default:
//! `cargo test -p cylrig --test stress -- --ignored --nocapture`

mod common;

use common::Gen;
use cylrig::construction::{certify, verify_certificate};
use cylrig::geometry::graph_is_gamma_isostatic;
use cylrig::graph::GroupName;
use cylrig::sparsity::gamma_tight;
use cylrig::trees::{decompose, verify_decomposition};

const GROUPS: [GroupName; 4] = [
    GroupName::Ci,
    GroupName::C2,
    GroupName::CsAxial,
    GroupName::CsHorizontal,
];

#[test]
#[ignore]
fn certify_replay_1000_per_group() {
    for (gi, group) in GROUPS.into_iter().enumerate() {
        let start = std::time::Instant::now();
        for seed in 0..1000u64 {
            let mut gen = Gen::new(seed * 131 + gi as u64 + 500_000);
            let g = gen.grow(group, 6 + (seed % 29) as usize);
            let cert = certify(&g)
                .unwrap_or_else(|e| panic!("{group} seed {seed} |V|={}: {e}", g.vertex_count()));
            assert!(verify_certificate(&g, &cert), "{group} seed {seed}");
            if seed % 10 == 0 {
                let out = decompose(&g, &cert)
                    .unwrap_or_else(|e| panic!("{group} seed {seed} trees: {e}"));
                assert!(verify_decomposition(&g, &out.coloring), "{group} seed {seed}");
            }
        }
        println!(
            "{group}: 1000 certify + 100 tree roundtrips in {:?}",
            start.elapsed()
        );
    }
}

#[test]
#[ignore]
fn combinatorial_geometric_agreement_400_per_group() {
    for (gi, group) in GROUPS.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let mut gen = Gen::new(700_000 + gi as u64);
        let (mut tight_n, mut loose_n) = (0, 0);
        for case in 0..400u64 {
            let g = gen.grow(group, 5 + (case % 18) as usize);
            let g = if case % 3 != 0 {
                gen.perturb(&g, 1 + (case % 5) as usize)
            } else {
                g
            };
            let tight = gamma_tight(&g).unwrap().tight;
            let iso = graph_is_gamma_isostatic(&g, 700_000 + case, 3).unwrap();
            if tight {
                tight_n += 1;
            } else {
                loose_n += 1;
            }
            assert_eq!(
                tight, iso.isostatic,
                "{group} case {case}: rank {}/{}",
                iso.max_rank, iso.target_rank
            );
        }
        println!(
            "{group}: 400 graphs ({tight_n} tight / {loose_n} loose) agreed in {:?}",
            start.elapsed()
        );
    }
}
