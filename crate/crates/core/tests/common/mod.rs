#![allow(dead_code)]

use std::collections::BTreeMap;

use tajwid_core::corpus::{self, Corpus, Locator};

pub const VERSES: &str = include_str!("../fixtures/verses.pipe");
pub const MORPHOLOGY: &str = include_str!("../fixtures/morphology.tsv");
pub const MANIFEST: &str = include_str!("../fixtures/manifest.tsv");

/// Fixture ayas with morphology aligned.
pub fn fixtures() -> Corpus {
    let c = corpus::load_pipe(VERSES).expect("fixture verses load");
    let m = corpus::load_morphology(MORPHOLOGY).expect("fixture morphology loads");
    corpus::align_morphology(&c, &m).0
}

pub fn loc(s: &str) -> Locator {
    s.parse().unwrap()
}

/// Expected REMOVE firings: rule id to locators, in corpus order.
pub fn manifest() -> BTreeMap<String, Vec<Locator>> {
    let mut m: BTreeMap<String, Vec<Locator>> = BTreeMap::new();
    for line in MANIFEST.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (l, rule) = line.split_once('\t').expect("two columns");
        m.entry(rule.to_string()).or_default().push(loc(l));
    }
    m
}
