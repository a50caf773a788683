mod common;

use std::collections::BTreeSet;

use common::fixtures;
use proptest::prelude::*;
use tajwid_core::corpus::{self, Corpus};
use tajwid_core::encoding::{self, Inventory, MarkClass};
use tajwid_core::engine::{apply_cascade, CompiledPack, Direction, Trace};
use tajwid_core::rules;
use tajwid_core::verify;

const LETTERS: &str = "ءأإؤئابتثجحخدذرزسشصضطظعغفقكلمنهويىٱة";

fn marks() -> Vec<char> {
    Inventory::standard().codepoints().map(|(c, _)| c).collect()
}

fn raw_word() -> impl Strategy<Value = String> {
    let letters: Vec<char> = LETTERS.chars().collect();
    let cluster = (prop::sample::select(letters), prop::collection::vec(prop::sample::select(marks()), 0..3));
    prop::collection::vec(cluster, 1..6).prop_map(|gs| {
        let mut s = String::new();
        for (b, ms) in gs {
            s.push(b);
            s.extend(ms);
        }
        s
    })
}

fn sub_corpus(c: &Corpus, keep: &[usize]) -> Corpus {
    Corpus { verses: keep.iter().map(|&i| c.verses[i].clone()).collect(), aligned: c.aligned }
}

fn skeletons(c: &Corpus) -> Vec<String> {
    c.words().map(|w| w.skeleton()).collect()
}

fn remove(c: &Corpus, p: &CompiledPack) -> (Corpus, Trace) {
    apply_cascade(c, p, Direction::Remove).unwrap()
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in raw_word()) {
        if let Ok(once) = encoding::normalize(&raw) {
            prop_assert_eq!(encoding::normalize(&once).unwrap(), once);
        }
    }

    #[test]
    fn segment_then_serialize_is_identity(raw in raw_word()) {
        if let Ok(n) = encoding::normalize(&raw) {
            let gs = encoding::segment(&n).unwrap();
            prop_assert_eq!(encoding::serialize(&gs), n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sub_corpora_round_trip(keep in prop::sample::subsequence((0..42).collect::<Vec<usize>>(), 1..8)) {
        let c = sub_corpus(&fixtures(), &keep);
        let pack = rules::default_pack();
        let r = verify::verify_roundtrip(&c, &pack, &pack).unwrap();
        prop_assert!(r.passed(), "{:?}", r.mismatches);
    }
}

#[test]
fn cascade_is_deterministic() {
    let c = fixtures();
    let pack = rules::default_pack();
    let (a, ta) = remove(&c, &pack);
    let (b, tb) = remove(&c, &pack);
    assert_eq!(a, b);
    assert_eq!(ta.to_jsonl(), tb.to_jsonl());
}

#[test]
fn trace_replays_to_the_same_output() {
    let c = fixtures();
    let pack = rules::default_pack();
    for d in [Direction::Remove, Direction::Add] {
        let input = if d == Direction::Remove { c.clone() } else { remove(&c, &pack).0 };
        let (out, t) = apply_cascade(&input, &pack, d).unwrap();
        let parsed = Trace::from_jsonl(d, &t.to_jsonl()).unwrap();
        assert_eq!(parsed.replay(&input).unwrap(), out);
    }
}

#[test]
fn firings_keep_the_skeleton() {
    let c = fixtures();
    let pack = rules::default_pack();
    let (plain, t) = remove(&c, &pack);
    assert_eq!(skeletons(&plain), skeletons(&c));
    for f in &t.firings {
        assert_eq!(encoding::skeleton_of(&f.before), encoding::skeleton_of(&f.after), "{} at {}", f.rule, f.loc);
    }
}

#[test]
fn every_firing_passes_its_guard() {
    let c = fixtures();
    let pack = rules::default_pack();
    let (plain, tr) = remove(&c, &pack);
    let (_, ta) = apply_cascade(&plain, &pack, Direction::Add).unwrap();
    for (input, t) in [(&c, &tr), (&plain, &ta)] {
        for f in &t.firings {
            let w = corpus::locate(input, f.loc).unwrap();
            assert!(pack.rule(&f.rule).unwrap().guard.admits(w), "{} at {}", f.rule, f.loc);
        }
    }
}

#[test]
fn add_mirrors_remove_on_fixtures() {
    let c = fixtures();
    let pack = rules::default_pack();
    let (plain, tr) = remove(&c, &pack);
    let (_, ta) = apply_cascade(&plain, &pack, Direction::Add).unwrap();
    let sites = |t: &Trace| t.firings.iter().map(|f| (f.rule.clone(), f.loc)).collect::<BTreeSet<_>>();
    assert_eq!(sites(&tr), sites(&ta));
}

#[test]
fn injected_open_tanwin_is_reported_once() {
    let (mut plain, _) = remove(&fixtures(), &rules::default_pack());
    assert!(verify::verify_clean(&plain).is_empty());
    let target = plain
        .verses
        .iter_mut()
        .flat_map(|v| v.words.iter_mut())
        .find_map(|w| {
            let loc = w.loc;
            w.graphemes
                .iter_mut()
                .flat_map(|g| g.marks.iter_mut())
                .find(|m| m.class == MarkClass::TanwinStdF)
                .map(|m| (loc, m))
        })
        .map(|(loc, m)| {
            *m = encoding::Mark { cp: '\u{08F0}', class: MarkClass::TanwinOpenF };
            loc
        })
        .expect("a fatḥatān in the fixtures");
    let res = verify::verify_clean(&plain);
    assert_eq!(res.len(), 1);
    assert_eq!(res[0].loc, target);
    assert_eq!(res[0].class, "TANWIN_OPEN_F");
}
