mod common;

use common::pt;
use squeeze_core::embedding::{self, InclusionStatus};
use squeeze_core::squeeze::{self, Provenance};
use squeeze_core::{catalog, sampling, Error, ExactModel};

#[test]
fn identity_witness_is_one() {
    for n in [1, 2, 3] {
        let spec = embedding::identity_embedding(n).unwrap();
        let b = sampling::sample_boundary(&spec.domain, 5000, 1).unwrap();
        let s = sampling::sample_interior(&spec.domain, 5000, 2).unwrap();
        let w = embedding::witness_radius(&spec, &b, &s).unwrap();
        assert!((w.bound.lower - 1.0).abs() < 1e-8, "n = {n}: {}", w.bound.lower);
        assert!(w.bound.lower <= 1.0 && w.bound.provenance == Provenance::EmbeddingWitness);
    }
}

#[test]
fn witnesses_stay_below_known_values() {
    for a in [0.1, 0.3, 0.6, 0.9] {
        let spec = embedding::moebius_embedding(a).unwrap();
        let b = sampling::sample_boundary(&spec.domain, 5000, 3).unwrap();
        let s = sampling::sample_interior(&spec.domain, 5000, 4).unwrap();
        let w = embedding::witness_radius(&spec, &b, &s).unwrap();
        let exact = squeeze::exact_squeezing(ExactModel::PuncturedDisc, &pt(&[a, 0.0])).unwrap().lower;
        assert!(w.bound.lower <= exact + 1e-9 && w.bound.lower <= 1.0);
        assert_eq!(w.min_excluded_image.map(|v| (v - a).abs() < 1e-12), Some(true));
    }
    let spec = embedding::bidisc_scaled_embedding().unwrap();
    let b = sampling::sample_boundary(&spec.domain, 20_000, 5).unwrap();
    let s = sampling::sample_interior(&spec.domain, 2000, 6).unwrap();
    let w = embedding::witness_radius(&spec, &b, &s).unwrap();
    assert!((w.bound.lower - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3, "{}", w.bound.lower);
}

#[test]
fn triangle_witness_matches_the_product_bound() {
    let (a1, a2) = (0.4, 0.3);
    let spec = embedding::triangle_product_embedding(a1, a2).unwrap();
    let b = sampling::sample_boundary(&spec.domain, 20_000, 7).unwrap();
    let s = sampling::sample_interior(&spec.domain, 5000, 8).unwrap();
    let w = embedding::witness_radius(&spec, &b, &s).unwrap();
    let expect = squeeze::product_lower_bound(&[a1, a2]).unwrap();
    assert!(w.bound.lower <= expect + 1e-9);
    assert!(w.bound.lower >= (a1.min(a2)) / 2f64.sqrt() - 1e-9);
}

#[test]
fn inclusion_is_monotone_in_r() {
    let spec = embedding::moebius_embedding(0.5).unwrap();
    let s = sampling::sample_interior(&spec.domain, 5000, 9).unwrap();
    let rs = [0.1, 0.2, 0.3, 0.4, 0.45, 0.55, 0.6, 0.8];
    let res: Vec<bool> = rs.iter().map(|r| embedding::verify_inclusion(&spec, *r, 31, &s, 1).unwrap().included).collect();
    for i in 0..res.len() {
        if res[i] {
            assert!(res[..i].iter().all(|x| *x), "{res:?}");
        }
    }
    assert!(res[4] && !res[5]);
}

#[test]
fn excluded_cells_carry_a_counterexample() {
    let spec = embedding::moebius_embedding(0.5).unwrap();
    let s = sampling::sample_interior(&spec.domain, 5000, 9).unwrap();
    let rep = embedding::verify_inclusion(&spec, 0.6, 31, &s, 1).unwrap();
    assert_eq!(rep.status, InclusionStatus::Excluded);
    assert!(rep.counterexample.is_some() && rep.reason.is_some());
}

#[test]
fn bad_embeddings_are_rejected() {
    let d = catalog::disc();
    let r = embedding::EmbeddingSpec::new("shift", |z| vec![z[0] + 0.1, z[1]], true, d, pt(&[0.0, 0.0]));
    assert!(matches!(r, Err(Error::BasepointNotMappedToZero(_))));
    assert!(matches!(embedding::parse_embedding("nope"), Err(Error::UnknownEmbedding(_))));
    assert!(embedding::parse_embedding("moebius:a=0.5").is_ok());
    assert!(embedding::moebius_embedding(1.5).is_err());
}
