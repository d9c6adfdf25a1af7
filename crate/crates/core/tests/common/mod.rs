#![allow(dead_code)]

use qpc::pc::{parse_presentation, ExponentVector, PcPresentation};
use rand::Rng;

pub type P = PcPresentation<i64>;

pub fn load(name: &str) -> P {
    let path = format!("{}/../../data/groups/{name}.pc", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_presentation(&text).unwrap()
}

/// The test corpus: C2, C3, C4, C6, C2xC2, S3, D4, Q8, Dinf.
pub fn corpus() -> Vec<(&'static str, P)> {
    ["c2", "c3", "c4", "c6", "c2xc2", "s3", "d4", "q8", "dinf"]
        .into_iter()
        .map(|n| (n, load(n)))
        .collect()
}

pub fn abelian_corpus() -> Vec<(&'static str, P)> {
    corpus()
        .into_iter()
        .filter(|(_, p)| p.is_abelian().unwrap())
        .collect()
}

pub fn cyclic(n: i64) -> P {
    parse_presentation(&format!("gens g\npow g^{n} := id\n")).unwrap()
}

/// Random element; infinite layers take exponents in `-3..=3`.
pub fn random_element(p: &P, rng: &mut impl Rng) -> ExponentVector<i64> {
    ExponentVector(
        (0..p.ngens())
            .map(|i| match p.rel_order(i) {
                Some(e) => rng.gen_range(0..*e),
                None => rng.gen_range(-3..=3),
            })
            .collect(),
    )
}

pub fn group_order(p: &P) -> Option<i64> {
    (0..p.ngens()).map(|i| p.rel_order(i).copied()).product()
}
