//! Morphisms between substitution bimonoids: blockwise maps, the
//! regrouping isomorphism, block-product evaluation, embeddings, and the
//! poset collapse.

use hopf_species::morphism::{
    assoc_iso, check_bimonoid_morphism, check_comonoid_morphism, check_injective,
    check_surjective, embed_b, embed_p, f_tau_theta, poset_collapse, product_eval,
};
use hopf_species::zoo::{ZooKind, ZooMap};
use hopf_species::{
    canonical_labels, Bimonoid, Comonoid, ComonoidOps, Error, Label, LabelSet, LinComb, Morphism,
    Poset, Report, Species, Term,
};

fn ls(s: &str) -> LabelSet {
    LabelSet::from_atoms(s.chars().map(|c| c.to_string()))
}

fn atom(s: &str) -> Label {
    Label::atom(s)
}

fn assert_passes(report: Report) {
    assert!(report.passed(), "{report}");
    assert!(report.instances > 0, "vacuous check: {report}");
}

fn positive(kind: ZooKind) -> Comonoid {
    Comonoid::positive(Bimonoid::zoo(kind))
}

#[test]
fn blockwise_maps_are_bimonoid_morphisms() {
    // abelianization: forget the block order, keep the graphs
    let pi = f_tau_theta(
        Morphism::zoo(ZooMap::TauLE),
        Morphism::identity(Species::G.positive()),
        &Bimonoid::zoo(ZooKind::L),
        &Bimonoid::zoo(ZooKind::E),
        &positive(ZooKind::G),
        &positive(ZooKind::G),
        3,
    )
    .unwrap();
    let orders_of_graphs =
        Bimonoid::tee(Bimonoid::zoo(ZooKind::L), positive(ZooKind::G), 3).unwrap();
    let sets_of_graphs =
        Bimonoid::tee(Bimonoid::zoo(ZooKind::E), positive(ZooKind::G), 3).unwrap();
    assert_passes(check_bimonoid_morphism(&pi, &orders_of_graphs, &sets_of_graphs, 4).unwrap());
    assert_passes(check_surjective(&pi, 4).unwrap());

    // collapse the outer graph and forget each block order
    let collapse = f_tau_theta(
        Morphism::zoo(ZooMap::TauGE),
        Morphism::zoo(ZooMap::TauLE),
        &Bimonoid::zoo(ZooKind::G),
        &Bimonoid::zoo(ZooKind::E),
        &positive(ZooKind::L),
        &positive(ZooKind::E),
        3,
    )
    .unwrap();
    let graphs_of_orders =
        Bimonoid::tee(Bimonoid::zoo(ZooKind::G), positive(ZooKind::L), 3).unwrap();
    let partitions = Bimonoid::tee(Bimonoid::zoo(ZooKind::E), positive(ZooKind::E), 3).unwrap();
    assert_passes(check_bimonoid_morphism(&collapse, &graphs_of_orders, &partitions, 4).unwrap());

    // partitions embed into posets-of-blocks along the antichain inclusion
    let include = f_tau_theta(
        Morphism::zoo(ZooMap::Alpha),
        Morphism::identity(Species::E.positive()),
        &Bimonoid::zoo(ZooKind::E),
        &Bimonoid::zoo(ZooKind::Poset),
        &positive(ZooKind::E),
        &positive(ZooKind::E),
        3,
    )
    .unwrap();
    let posets_of_blocks =
        Bimonoid::tee(Bimonoid::zoo(ZooKind::Poset), positive(ZooKind::E), 3).unwrap();
    assert_passes(check_bimonoid_morphism(&include, &partitions, &posets_of_blocks, 4).unwrap());
    assert_passes(check_injective(&include, 4).unwrap());
}

#[test]
fn the_regrouping_isomorphism_is_a_bimonoid_bijection() {
    for outer in [ZooKind::E, ZooKind::L] {
        let b = Bimonoid::zoo(outer);
        let p = positive(ZooKind::E);
        let q = positive(ZooKind::E);
        let (fwd, inv) = assoc_iso(&b, &p, &q, 3).unwrap();
        let nested = Bimonoid::tee(
            Bimonoid::tee(b.clone(), p.clone(), 3).unwrap(),
            q.clone(),
            3,
        )
        .unwrap();
        let flat = Bimonoid::tee(b, Comonoid::compose(p, q, 3).unwrap(), 3).unwrap();

        assert_passes(check_bimonoid_morphism(&fwd, &nested, &flat, 3).unwrap());
        for n in 0..=3usize {
            let ground = canonical_labels(n);
            assert_eq!(nested.carrier().dim(&ground), flat.carrier().dim(&ground));
            for x in nested.carrier().basis(&ground) {
                let image = fwd.apply(&x).unwrap();
                // the regrouping permutes bases: one term, coefficient 1
                let single = image.as_single_unit().cloned().unwrap();
                assert_eq!(inv.apply(&single).unwrap(), LinComb::unit(x));
            }
            for y in flat.carrier().basis(&ground) {
                assert_eq!(
                    fwd.apply_lin(&inv.apply(&y).unwrap()).unwrap(),
                    LinComb::unit(y)
                );
            }
        }
        assert_passes(check_injective(&fwd, 3).unwrap());
        assert_passes(check_surjective(&fwd, 3).unwrap());
    }
}

#[test]
fn block_products_evaluate_the_substitution() {
    for (order, inner) in [
        (ZooKind::L, ZooKind::G),
        (ZooKind::L, ZooKind::L),
        (ZooKind::L, ZooKind::E),
        (ZooKind::E, ZooKind::E),
    ] {
        let h = Bimonoid::zoo(inner);
        let eval = product_eval(order, &h, 3).unwrap();
        let source = Bimonoid::tee(Bimonoid::zoo(order), positive(inner), 3).unwrap();
        assert_passes(check_bimonoid_morphism(&eval, &source, &h, 4).unwrap());
    }

    // ordered blocks concatenate
    let eval = product_eval(ZooKind::L, &Bimonoid::zoo(ZooKind::L), 3).unwrap();
    let x = Term::Composite(
        hopf_species::Composite::new(
            Term::order([Label::block(ls("ab")), Label::block(ls("c"))]).unwrap(),
            [
                (ls("ab"), Term::order([atom("a"), atom("b")]).unwrap()),
                (ls("c"), Term::order([atom("c")]).unwrap()),
            ],
        )
        .unwrap(),
    );
    assert_eq!(
        eval.apply(&x).unwrap(),
        LinComb::unit(Term::order([atom("a"), atom("b"), atom("c")]).unwrap())
    );

    // a partition evaluates to the star on its ground set
    let eval = product_eval(ZooKind::E, &Bimonoid::zoo(ZooKind::E), 3).unwrap();
    let x = Term::Composite(
        hopf_species::Composite::new(
            Term::Star(LabelSet::new([Label::block(ls("ab")), Label::block(ls("c"))])),
            [(ls("ab"), Term::Star(ls("ab"))), (ls("c"), Term::Star(ls("c")))],
        )
        .unwrap(),
    );
    assert_eq!(eval.apply(&x).unwrap(), LinComb::unit(Term::Star(ls("abc"))));

    // unordered blocks need a commutative target
    let err = product_eval(ZooKind::E, &Bimonoid::zoo(ZooKind::L), 3).unwrap_err();
    let Error::MissingHypothesis { hypothesis, .. } = &err else {
        panic!("expected a hypothesis refusal, got {err}");
    };
    assert!(hypothesis.contains("commutative"), "{err}");
}

#[test]
fn inner_and_outer_species_embed() {
    let tee = Bimonoid::tee(Bimonoid::zoo(ZooKind::G), positive(ZooKind::L), 3).unwrap();

    let inner = embed_p(&tee).unwrap();
    assert_passes(
        check_comonoid_morphism(&inner, &positive(ZooKind::L), &Comonoid::positive(tee.clone()), 4)
            .unwrap(),
    );
    assert_passes(check_injective(&inner, 4).unwrap());

    let outer = embed_b(&tee).unwrap();
    assert_passes(
        check_bimonoid_morphism(&outer, &Bimonoid::zoo(ZooKind::G), &tee, 4).unwrap(),
    );
    assert_passes(check_injective(&outer, 4).unwrap());
}

#[test]
fn poset_collapse_is_a_bimonoid_morphism() {
    let posets_of_posets =
        Bimonoid::tee(Bimonoid::zoo(ZooKind::Poset), positive(ZooKind::Poset), 3).unwrap();
    let collapse = poset_collapse();
    assert_passes(
        check_bimonoid_morphism(&collapse, &posets_of_posets, &Bimonoid::zoo(ZooKind::Poset), 4)
            .unwrap(),
    );

    // outer chain of antichains: everything in the lower block sits below
    // everything in the upper block
    let x = Term::Composite(
        hopf_species::Composite::new(
            Term::Poset(Poset::chain(&[Label::block(ls("ab")), Label::block(ls("cd"))])),
            [
                (ls("ab"), Term::Poset(Poset::antichain(ls("ab")))),
                (ls("cd"), Term::Poset(Poset::antichain(ls("cd")))),
            ],
        )
        .unwrap(),
    );
    let expected = Poset::new(
        ls("abcd"),
        [
            (atom("a"), atom("c")),
            (atom("a"), atom("d")),
            (atom("b"), atom("c")),
            (atom("b"), atom("d")),
        ],
    )
    .unwrap();
    assert_eq!(
        collapse.apply(&x).unwrap(),
        LinComb::unit(Term::Poset(expected))
    );

    // outer antichain of chains: a disjoint union of chains
    let x = Term::Composite(
        hopf_species::Composite::new(
            Term::Poset(Poset::antichain(LabelSet::new([
                Label::block(ls("ab")),
                Label::block(ls("cd")),
            ]))),
            [
                (ls("ab"), Term::Poset(Poset::chain(&[atom("b"), atom("a")]))),
                (ls("cd"), Term::Poset(Poset::chain(&[atom("c"), atom("d")]))),
            ],
        )
        .unwrap(),
    );
    let expected =
        Poset::new(ls("abcd"), [(atom("b"), atom("a")), (atom("c"), atom("d"))]).unwrap();
    assert_eq!(
        collapse.apply(&x).unwrap(),
        LinComb::unit(Term::Poset(expected))
    );
}

#[test]
fn poset_collapse_splits_the_antichain_and_chain_average_inclusions() {
    let pos = Bimonoid::zoo(ZooKind::Poset);
    let posets_of_blocks = Bimonoid::tee(pos.clone(), positive(ZooKind::E), 3).unwrap();
    let include = embed_b(&posets_of_blocks).unwrap();

    for theta in [ZooMap::Alpha, ZooMap::Lambda] {
        let widen = f_tau_theta(
            Morphism::identity(Species::Poset),
            Morphism::zoo(theta),
            &pos,
            &pos,
            &positive(ZooKind::E),
            &positive(ZooKind::Poset),
            3,
        )
        .unwrap();
        let surjection = poset_collapse().after(widen);
        assert_passes(check_bimonoid_morphism(&surjection, &posets_of_blocks, &pos, 3).unwrap());
        assert_passes(check_surjective(&surjection, 3).unwrap());

        let splitting = surjection.after(include.clone());
        for n in 0..=3usize {
            for x in Species::Poset.basis(&canonical_labels(n)) {
                assert_eq!(
                    splitting.apply(&x).unwrap(),
                    LinComb::unit(x.clone()),
                    "splitting along {}",
                    splitting.name()
                );
            }
        }
    }
}
