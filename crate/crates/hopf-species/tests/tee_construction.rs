//! The substitution bimonoid: the worked coproduct example, the full
//! axiom sweep over stock parts, and the cocommutativity boundary.

use hopf_species::verify::{
    check_antipode, check_associativity, check_coassociativity, check_cocommutativity,
    check_compatibility, check_delta_after_mu, check_factor_exchange,
};
use hopf_species::zoo::ZooKind;
use hopf_species::{
    Bimonoid, Comonoid, ComonoidOps, Error, Fault, Graph, Label, LabelSet, LinComb, Report, Term,
};

fn ls(s: &str) -> LabelSet {
    LabelSet::from_atoms(s.chars().map(|c| c.to_string()))
}

fn atom(s: &str) -> Label {
    Label::atom(s)
}

fn graph(vertices: &str, edges: &[(&str, &str)]) -> Term {
    Term::Graph(
        Graph::new(
            ls(vertices),
            edges.iter().map(|(a, b)| (atom(a), atom(b))),
        )
        .unwrap(),
    )
}

fn block_order(blocks: &[&str]) -> Term {
    Term::order(blocks.iter().map(|b| Label::block(ls(b)))).unwrap()
}

fn assert_passes(report: Report) {
    assert!(report.passed(), "{report}");
    assert!(report.instances > 0, "vacuous check: {report}");
}

fn inner_comonoids() -> Vec<Comonoid> {
    vec![
        Comonoid::positive(Bimonoid::zoo(ZooKind::E)),
        Comonoid::positive(Bimonoid::zoo(ZooKind::L)),
        Comonoid::positive(Bimonoid::zoo(ZooKind::G)),
        Comonoid::cyc(),
    ]
}

fn axiom_sweep(outer: ZooKind) {
    for p in inner_comonoids() {
        let tee = Bimonoid::tee(Bimonoid::zoo(outer), p, 3).unwrap();
        assert_passes(check_associativity(&tee, 4).unwrap());
        assert_passes(check_coassociativity(&tee, 4).unwrap());
        assert_passes(check_compatibility(&tee, 4).unwrap());
        assert_passes(check_antipode(&tee, 4).unwrap());
        assert_passes(check_delta_after_mu(&tee, 4).unwrap());
    }
}

#[test]
fn the_worked_coproduct_example() {
    let tee = Bimonoid::tee(
        Bimonoid::zoo(ZooKind::L),
        Comonoid::positive(Bimonoid::zoo(ZooKind::G)),
        3,
    )
    .unwrap();
    // three ordered blocks d | b | {a,c,e}, the last carrying edge c-e
    let x = Term::Composite(
        hopf_species::Composite::new(
            block_order(&["d", "b", "ace"]),
            [
                (ls("d"), graph("d", &[])),
                (ls("b"), graph("b", &[])),
                (ls("ace"), graph("ace", &[("c", "e")])),
            ],
        )
        .unwrap(),
    );

    let split_cde = tee.delta(&ls("cde"), &ls("ab"), &x).unwrap();
    let left = Term::Composite(
        hopf_species::Composite::new(
            block_order(&["d", "ce"]),
            [(ls("d"), graph("d", &[])), (ls("ce"), graph("ce", &[("c", "e")]))],
        )
        .unwrap(),
    );
    let right = Term::Composite(
        hopf_species::Composite::new(
            block_order(&["b", "a"]),
            [(ls("b"), graph("b", &[])), (ls("a"), graph("a", &[]))],
        )
        .unwrap(),
    );
    assert_eq!(split_cde, LinComb::unit((left, right)));

    let split_bed = tee.delta(&ls("bde"), &ls("ac"), &x).unwrap();
    let left = Term::Composite(
        hopf_species::Composite::new(
            block_order(&["d", "b", "e"]),
            [
                (ls("d"), graph("d", &[])),
                (ls("b"), graph("b", &[])),
                (ls("e"), graph("e", &[])),
            ],
        )
        .unwrap(),
    );
    let right = Term::Composite(
        hopf_species::Composite::new(
            Term::order([Label::block(ls("ac"))]).unwrap(),
            [(ls("ac"), graph("ac", &[]))],
        )
        .unwrap(),
    );
    assert_eq!(split_bed, LinComb::unit((left, right)));
}

#[test]
fn substitution_over_linear_orders_satisfies_the_axioms() {
    axiom_sweep(ZooKind::L);
}

#[test]
fn substitution_over_sets_satisfies_the_axioms() {
    axiom_sweep(ZooKind::E);
}

#[test]
fn substitution_over_graphs_satisfies_the_axioms() {
    axiom_sweep(ZooKind::G);
}

#[test]
fn substitution_over_posets_satisfies_the_axioms() {
    axiom_sweep(ZooKind::Poset);
}

#[test]
fn cocommutativity_holds_for_symmetric_inner_coproducts() {
    for (outer, p) in [
        (ZooKind::E, Comonoid::positive(Bimonoid::zoo(ZooKind::E))),
        (ZooKind::G, Comonoid::positive(Bimonoid::zoo(ZooKind::E))),
        (ZooKind::G, Comonoid::positive(Bimonoid::zoo(ZooKind::L))),
    ] {
        let tee = Bimonoid::tee(Bimonoid::zoo(outer), p, 3).unwrap();
        assert_passes(check_cocommutativity(&tee, 4).unwrap());
    }
}

#[test]
fn a_skewed_outer_coproduct_is_refused_by_name() {
    let skewed = Bimonoid::corrupted(Bimonoid::zoo(ZooKind::G), Fault::DeltaSkew);
    // graphs on two vertices are reversal-invariant, so the skew on G first
    // shows on a proper split with a three-label factor: certify to 4
    let err = Bimonoid::tee(
        skewed,
        Comonoid::positive(Bimonoid::zoo(ZooKind::E)),
        4,
    )
    .unwrap_err();
    let Error::MissingHypothesis { hypothesis, construction, .. } = &err else {
        panic!("expected a named-hypothesis refusal, got {err}");
    };
    assert!(hypothesis.contains("cocommutative"), "{err}");
    assert!(construction.contains("T["), "{err}");
}

#[test]
fn a_skewed_inner_coproduct_breaks_cocommutativity_with_a_witness() {
    let skewed_inner =
        Comonoid::positive(Bimonoid::corrupted(Bimonoid::zoo(ZooKind::L), Fault::DeltaSkew));
    let tee = Bimonoid::tee(Bimonoid::zoo(ZooKind::G), skewed_inner, 2).unwrap();
    // the reversal fault needs a block with three labels split 2/1 to show
    let report = check_cocommutativity(&tee, 3).unwrap();
    assert!(!report.passed(), "{report}");
    assert_eq!(report.witness.as_ref().unwrap().ground, "{1,2,3}");
}

#[test]
fn restriction_commutes_with_the_complementary_factor() {
    let stock: Vec<Box<dyn ComonoidOps>> = vec![
        Box::new(Bimonoid::zoo(ZooKind::L)),
        Box::new(Bimonoid::zoo(ZooKind::E)),
        Box::new(Bimonoid::zoo(ZooKind::G)),
        Box::new(Bimonoid::zoo(ZooKind::Poset)),
        Box::new(Comonoid::cyc()),
    ];
    for c in &stock {
        assert_passes(check_factor_exchange(c.as_ref(), 4).unwrap());
    }
}
