//! Round trips through the JSON layer: lattices, analysis reports, and
//! comparison reports all reload to the same data.

use pi3::cli::{analyze_source, compare_sources, AnalysisReport, AnalyzeOptions, CompareReport};
use pi3::decomp::v_g;
use pi3::group::{enumerate_group, parse_presentation, FiniteGroup};
use pi3::igstar::ig_star;
use pi3::lattice::{LatticeJson, ZgLattice};
use std::sync::Arc;

fn group(src: &str) -> Arc<FiniteGroup> {
    Arc::new(enumerate_group(&parse_presentation(src).unwrap(), 100_000).unwrap())
}

fn opts() -> AnalyzeOptions {
    AnalyzeOptions { max_cosets: 100_000, skip_model: false }
}

fn round_trip(l: &ZgLattice) -> ZgLattice {
    let doc = l.to_json().expect("serializable");
    let text = serde_json::to_string(&doc).unwrap();
    let back: LatticeJson = serde_json::from_str(&text).unwrap();
    ZgLattice::from_json(l.group(), &back).expect("reload")
}

#[test]
fn lattices_survive_the_json_round_trip() {
    let c4 = group("gens: x ; rels: x^4");
    let q8 = group("gens: x, y ; rels: x^2 = y^2, x*y*x = y");
    for l in [
        ZgLattice::free(&c4, 2),
        ig_star(&c4).lattice,
        v_g(&q8).lattice,
        ig_star(&q8).lattice,
    ] {
        let back = round_trip(&l);
        assert_eq!(back.rank(), l.rank());
        for g in l.group().elements() {
            assert_eq!(back.action(g), l.action(g));
        }
    }
}

#[test]
fn tampered_lattice_documents_are_rejected() {
    let c4 = group("gens: x ; rels: x^4");
    let mut doc = ig_star(&c4).lattice.to_json().unwrap();
    let text = serde_json::to_string(&doc).unwrap();

    // A non-action table: break one entry of the generator matrix.
    doc.generator_actions[0][0] += 1;
    assert!(ZgLattice::from_json(&c4, &doc).is_err());

    // A document for the wrong group.
    let c3 = group("gens: x ; rels: x^3");
    let back: LatticeJson = serde_json::from_str(&text).unwrap();
    assert!(ZgLattice::from_json(&c3, &back).is_err());
}

#[test]
fn analysis_reports_round_trip_byte_identically() {
    let r = analyze_source("q8", "gens: x, y ; rels: x^2 = y^2, x*y*x = y", &opts()).unwrap();
    let text = serde_json::to_string_pretty(&r).unwrap();
    let back: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
}

#[test]
fn comparison_reports_round_trip_byte_identically() {
    let r = compare_sources(
        "one",
        "gens: x ; rels: x^5",
        "two",
        "gens: x, y ; rels: x^5, y",
        None,
        None,
        &opts(),
    )
    .unwrap();
    let text = serde_json::to_string_pretty(&r).unwrap();
    let back: CompareReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
}
