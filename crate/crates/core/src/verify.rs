//! Round-trip and cleanliness checks over whole corpora.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Locator};
use crate::encoding::MarkClass;
use crate::engine::{apply_cascade, CompiledPack, Direction, EngineError, FeedWarning, Trace};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("corpora differ in word layout: {0}")]
    Layout(String),
}

/// A tajwīd mark left in detajwīdised text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub loc: Locator,
    #[serde(with = "cp_hex")]
    pub cp: char,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDiff {
    pub loc: Locator,
    pub a: String,
    pub b: String,
    pub a_hex: String,
    pub b_hex: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub roundtrip_ok: bool,
    pub mismatches: Vec<WordDiff>,
    pub residual_marks: Vec<Residual>,
    /// Firings per rule on the REMOVE pass.
    pub census: BTreeMap<String, usize>,
    /// Firings per rule on the ADD pass.
    pub census_add: BTreeMap<String, usize>,
    pub coverage: f64,
    pub words: usize,
    pub warnings: Vec<FeedWarning>,
}

impl VerificationReport {
    pub fn clean(&self) -> bool {
        self.residual_marks.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.roundtrip_ok && self.clean()
    }
}

/// Everything a round trip produced, for callers that need more than the report.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub plain: Corpus,
    pub restored: Corpus,
    pub remove_trace: Trace,
    pub add_trace: Trace,
    pub report: VerificationReport,
}

pub fn round_trip(c: &Corpus, remove: &CompiledPack, add: &CompiledPack) -> Result<RoundTrip, EngineError> {
    let (plain, remove_trace) = apply_cascade(c, remove, Direction::Remove)?;
    let (restored, add_trace) = apply_cascade(&plain, add, Direction::Add)?;
    let mismatches = diff(c, &restored).expect("cascades keep the word layout");
    let mut warnings = remove_trace.warnings.clone();
    warnings.extend(add_trace.warnings.iter().cloned());
    let words = c.word_count();
    let tagged = c.words().filter(|w| w.pos.is_some()).count();
    let report = VerificationReport {
        roundtrip_ok: mismatches.is_empty(),
        mismatches,
        residual_marks: verify_clean(&plain),
        census: remove_trace.census(),
        census_add: add_trace.census(),
        coverage: if words == 0 { 0.0 } else { tagged as f64 / words as f64 },
        words,
        warnings,
    };
    Ok(RoundTrip { plain, restored, remove_trace, add_trace, report })
}

/// ADD(REMOVE(c)) compared word by word with `c`.
pub fn verify_roundtrip(
    c: &Corpus,
    remove: &CompiledPack,
    add: &CompiledPack,
) -> Result<VerificationReport, EngineError> {
    round_trip(c, remove, add).map(|r| r.report)
}

/// Every tajwīd-class mark present in the corpus.
pub fn verify_clean(c: &Corpus) -> Vec<Residual> {
    let mut out = Vec::new();
    for w in c.words() {
        for g in &w.graphemes {
            for m in g.marks.iter().filter(|m| m.class.is_tajwid()) {
                out.push(Residual { loc: w.loc, cp: m.cp, class: m.class.name().to_string() });
            }
        }
    }
    out
}

pub fn diff(a: &Corpus, b: &Corpus) -> Result<Vec<WordDiff>, VerifyError> {
    let wa: Vec<_> = a.words().collect();
    let wb: Vec<_> = b.words().collect();
    if wa.len() != wb.len() {
        return Err(VerifyError::Layout(format!("{} words against {}", wa.len(), wb.len())));
    }
    let mut out = Vec::new();
    for (x, y) in wa.iter().zip(&wb) {
        if x.loc != y.loc {
            return Err(VerifyError::Layout(format!("{} against {}", x.loc, y.loc)));
        }
        if x.graphemes != y.graphemes {
            let (ta, tb) = (x.text(), y.text());
            out.push(WordDiff { loc: x.loc, a_hex: hex(&ta), b_hex: hex(&tb), a: ta, b: tb });
        }
    }
    Ok(out)
}

pub fn hex(s: &str) -> String {
    s.chars().map(|c| format!("{:04X}", c as u32)).collect::<Vec<_>>().join(" ")
}

pub fn class_of(r: &Residual) -> Option<MarkClass> {
    MarkClass::from_name(&r.class)
}

mod cp_hex {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(cp: &char, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("U+{:04X}", *cp as u32))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<char, D::Error> {
        let s = String::deserialize(d)?;
        s.strip_prefix("U+")
            .and_then(|h| u32::from_str_radix(h, 16).ok())
            .and_then(char::from_u32)
            .ok_or_else(|| serde::de::Error::custom(format!("bad codepoint {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_pipe;
    use crate::encoding::normalize;

    fn corpus(text: &str) -> Corpus {
        load_pipe(&format!("1|1|{}", normalize(text).unwrap())).unwrap()
    }

    #[test]
    fn empty_corpus_round_trips() {
        let p = CompiledPack::default();
        let r = verify_roundtrip(&Corpus::default(), &p, &p).unwrap();
        assert!(r.roundtrip_ok && r.clean());
    }

    #[test]
    fn reports_silent_zero() {
        let res = verify_clean(&corpus("كَانُوا۟ يَكْفُرُونَ"));
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].loc, Locator::new(1, 1, 1));
        assert_eq!(res[0].class, "SILENT_ZERO");
        assert_eq!(serde_json::to_value(&res[0]).unwrap()["cp"], "U+06DF");
    }

    #[test]
    fn diff_self_is_empty_and_layout_checked() {
        let c = corpus("مِن فَضْلِهِۦ");
        assert!(diff(&c, &c).unwrap().is_empty());
        let d = corpus("مِن فَضْلِهِ");
        let out = diff(&c, &d).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].a_hex.ends_with("06E6"));
        assert!(diff(&c, &corpus("مِن")).is_err());
    }
}
