//! Species arithmetic: dimension bookkeeping for substitution and
//! functoriality of composite enumeration.

use std::collections::BTreeSet;

use hopf_species::{canonical_labels, enumerate_partitions, Bijection, Label, LabelSet, Species};

#[test]
fn substitution_dimension_matches_the_convolution_formula() {
    let outers = [Species::E, Species::L, Species::G, Species::Poset, Species::Cyc];
    let inners = [
        Species::E.positive(),
        Species::L.positive(),
        Species::G.positive(),
        Species::Poset.positive(),
        Species::Cyc,
    ];
    for outer in &outers {
        for inner in &inners {
            let composite = Species::substitute(outer.clone(), inner.clone()).unwrap();
            for n in 0..=4usize {
                let ground = canonical_labels(n);
                let by_formula: usize = enumerate_partitions(&ground)
                    .iter()
                    .map(|x| {
                        let blocks = LabelSet::new(
                            x.blocks().iter().map(|b| Label::block(b.clone())),
                        );
                        outer.dim(&blocks)
                            * x.blocks()
                                .iter()
                                .map(|b| inner.dim(b))
                                .product::<usize>()
                    })
                    .sum();
                assert_eq!(
                    composite.dim(&ground),
                    by_formula,
                    "dim {composite} at n={n}"
                );
            }
        }
    }
}

#[test]
fn named_dimension_oracles_hold() {
    assert_eq!(Species::G.dim(&canonical_labels(3)), 8);

    let g_of_orders =
        Species::substitute(Species::G, Species::L.positive()).unwrap();
    assert_eq!(g_of_orders.dim(&canonical_labels(3)), 26);
    let orders_of_graphs =
        Species::substitute(Species::L, Species::G.positive()).unwrap();
    assert_eq!(orders_of_graphs.dim(&canonical_labels(3)), 26);

    let partitions = Species::substitute(Species::E, Species::E.positive()).unwrap();
    let bell = [1usize, 1, 2, 5, 15, 52];
    for (n, expected) in bell.into_iter().enumerate() {
        assert_eq!(partitions.dim(&canonical_labels(n)), expected, "Bell({n})");
    }

    let posets_of_blocks =
        Species::substitute(Species::Poset, Species::E.positive()).unwrap();
    assert_eq!(posets_of_blocks.dim(&canonical_labels(3)), 29);
}

#[test]
fn relabeling_commutes_with_composite_enumeration() {
    let species = [
        Species::substitute(Species::G, Species::L.positive()).unwrap(),
        Species::substitute(Species::E, Species::E.positive()).unwrap(),
    ];
    for sp in &species {
        for n in 0..=4usize {
            let ground = canonical_labels(n);
            let letters = LabelSet::from_atoms(["w", "x", "y", "z"][..n].iter().copied());
            for sigma in [
                Bijection::order_matching(&ground, &letters).unwrap(),
                Bijection::reversal(&ground),
            ] {
                let relabeled: BTreeSet<_> = sp
                    .basis(&ground)
                    .into_iter()
                    .map(|t| t.relabel(&sigma).unwrap())
                    .collect();
                let target: BTreeSet<_> =
                    sp.basis(&sigma.codomain()).into_iter().collect();
                assert_eq!(relabeled, target, "{sp} under {sigma:?} at n={n}");
            }
        }
    }
}
