//! Verse text, word addressing (`Qs:a:w`) and morphology tags.
//!
//! PIPE input is one aya per line, `sura|aya|text`. PLAIN input is one aya
//! per line with a sidecar index holding `sura:aya` on the matching line.
//! Morphology follows the corpus.quran.com segment table:
//! `(s:a:w:seg)<TAB>form<TAB>tag<TAB>features`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{self, EncodingError, Grapheme};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {sura}:{aya} does not follow {prev_sura}:{prev_aya}")]
    NonMonotonic { line: usize, sura: u16, aya: u16, prev_sura: u16, prev_aya: u16 },
    #[error("line {line}: {source}")]
    Encoding { line: usize, source: EncodingError },
    #[error("morphology row {row}: {msg}")]
    MorphRow { row: usize, msg: String },
    #[error("morphology row {row}: conflicting annotation for {loc} segment {seg}")]
    MorphConflict { row: usize, loc: Locator, seg: u16 },
    #[error("{0} not found")]
    NotFound(String),
    #[error("index has {index} entries but text has {text} lines")]
    IndexLength { index: usize, text: usize },
    #[error("invalid locator {0:?}")]
    BadLocator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Locator {
    pub sura: u16,
    pub aya: u16,
    pub word: u16,
}

impl Locator {
    pub fn new(sura: u16, aya: u16, word: u16) -> Locator {
        Locator { sura, aya, word }
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}:{}:{}", self.sura, self.aya, self.word)
    }
}

impl FromStr for Locator {
    type Err = CorpusError;

    /// Accepts `Q2:90:26` or `2:90:26`.
    fn from_str(s: &str) -> Result<Locator, CorpusError> {
        let bad = || CorpusError::BadLocator(s.to_string());
        let body = s.trim().trim_start_matches('Q');
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let n: Vec<u16> =
            parts.iter().map(|p| p.parse::<u16>().ok().filter(|v| *v > 0)).collect::<Option<_>>().ok_or_else(bad)?;
        if n[0] > 114 {
            return Err(bad());
        }
        Ok(Locator::new(n[0], n[1], n[2]))
    }
}

impl Serialize for Locator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Locator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Locator, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Particle,
}

impl PosTag {
    pub fn name(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Particle => "PARTICLE",
        }
    }

    pub fn from_name(s: &str) -> Option<PosTag> {
        match s {
            "NOUN" => Some(PosTag::Noun),
            "VERB" => Some(PosTag::Verb),
            "PARTICLE" => Some(PosTag::Particle),
            _ => None,
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub loc: Locator,
    pub graphemes: Vec<Grapheme>,
    pub pos: Option<PosTag>,
}

impl Word {
    pub fn text(&self) -> String {
        encoding::serialize(&self.graphemes)
    }

    pub fn skeleton(&self) -> String {
        encoding::skeleton(&self.graphemes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verse {
    pub sura: u16,
    pub aya: u16,
    pub words: Vec<Word>,
}

impl Verse {
    pub fn text(&self) -> String {
        let words: Vec<String> = self.words.iter().map(Word::text).collect();
        words.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Pipe,
    Plain,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<InputFormat, String> {
        match s.to_ascii_lowercase().as_str() {
            "pipe" => Ok(InputFormat::Pipe),
            "plain" => Ok(InputFormat::Plain),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub verses: Vec<Verse>,
    /// Set once morphology has been aligned, even if coverage is partial.
    pub aligned: bool,
}

/// Outcome of [`align_morphology`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Coverage {
    pub total: usize,
    pub tagged: usize,
    pub untagged: Vec<Locator>,
    pub orphans: Vec<Locator>,
}

impl Coverage {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.tagged as f64 / self.total as f64
        }
    }
}

impl Corpus {
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.verses.iter().flat_map(|v| v.words.iter())
    }

    pub fn word_count(&self) -> usize {
        self.verses.iter().map(|v| v.words.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.verses.is_empty()
    }

    pub fn to_pipe(&self) -> String {
        let mut out = String::new();
        for v in &self.verses {
            out.push_str(&format!("{}|{}|{}\n", v.sura, v.aya, v.text()));
        }
        out
    }

    /// Text and sidecar index for PLAIN output.
    pub fn to_plain(&self) -> (String, String) {
        let mut text = String::new();
        let mut index = String::new();
        for v in &self.verses {
            text.push_str(&v.text());
            text.push('\n');
            index.push_str(&format!("{}:{}\n", v.sura, v.aya));
        }
        (text, index)
    }

    pub fn render(&self, format: InputFormat) -> (String, Option<String>) {
        match format {
            InputFormat::Pipe => (self.to_pipe(), None),
            InputFormat::Plain => {
                let (t, i) = self.to_plain();
                (t, Some(i))
            }
        }
    }

    pub fn tags(&self) -> BTreeMap<Locator, PosTag> {
        self.words().filter_map(|w| w.pos.map(|p| (w.loc, p))).collect()
    }
}

fn split_lines(stream: &str) -> Vec<&str> {
    let body = stream.strip_suffix('\n').unwrap_or(stream);
    if body.is_empty() {
        return Vec::new();
    }
    body.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect()
}

fn build_verse(line: usize, sura: u16, aya: u16, text: &str) -> Result<Verse, CorpusError> {
    let norm = encoding::normalize(text).map_err(|source| CorpusError::Encoding { line, source })?;
    if norm.is_empty() {
        return Err(CorpusError::Malformed { line, msg: "empty verse text".into() });
    }
    let mut words = Vec::new();
    for (i, w) in norm.split(' ').enumerate() {
        if w.is_empty() {
            return Err(CorpusError::Malformed { line, msg: format!("empty word at position {}", i + 1) });
        }
        let graphemes = encoding::segment(w).map_err(|source| CorpusError::Encoding { line, source })?;
        let index = u16::try_from(i + 1).map_err(|_| CorpusError::Malformed { line, msg: "too many words".into() })?;
        words.push(Word { loc: Locator::new(sura, aya, index), graphemes, pos: None });
    }
    Ok(Verse { sura, aya, words })
}

fn parse_num(line: usize, s: &str, what: &str) -> Result<u16, CorpusError> {
    s.trim()
        .parse::<u16>()
        .ok()
        .filter(|v| *v > 0)
        .ok_or_else(|| CorpusError::Malformed { line, msg: format!("bad {what} {s:?}") })
}

fn push_verse(verses: &mut Vec<Verse>, line: usize, v: Verse) -> Result<(), CorpusError> {
    if v.sura > 114 {
        return Err(CorpusError::Malformed { line, msg: format!("sura {} out of range", v.sura) });
    }
    if let Some(prev) = verses.last() {
        if (v.sura, v.aya) <= (prev.sura, prev.aya) {
            return Err(CorpusError::NonMonotonic {
                line,
                sura: v.sura,
                aya: v.aya,
                prev_sura: prev.sura,
                prev_aya: prev.aya,
            });
        }
    }
    verses.push(v);
    Ok(())
}

pub fn load_pipe(stream: &str) -> Result<Corpus, CorpusError> {
    let mut verses = Vec::new();
    for (i, raw) in split_lines(stream).into_iter().enumerate() {
        let line = i + 1;
        let mut parts = raw.splitn(3, '|');
        let (Some(s), Some(a), Some(text)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CorpusError::Malformed { line, msg: "expected sura|aya|text".into() });
        };
        let v = build_verse(line, parse_num(line, s, "sura")?, parse_num(line, a, "aya")?, text)?;
        push_verse(&mut verses, line, v)?;
    }
    Ok(Corpus { verses, aligned: false })
}

pub fn load_plain(stream: &str, index: &str) -> Result<Corpus, CorpusError> {
    let lines = split_lines(stream);
    let idx = split_lines(index);
    if lines.len() != idx.len() {
        return Err(CorpusError::IndexLength { index: idx.len(), text: lines.len() });
    }
    let mut verses = Vec::new();
    for (i, (text, key)) in lines.into_iter().zip(idx).enumerate() {
        let line = i + 1;
        let Some((s, a)) = key.split_once([':', '|']) else {
            return Err(CorpusError::Malformed { line, msg: format!("bad index entry {key:?}") });
        };
        let v = build_verse(line, parse_num(line, s, "sura")?, parse_num(line, a, "aya")?, text)?;
        push_verse(&mut verses, line, v)?;
    }
    Ok(Corpus { verses, aligned: false })
}

pub fn load_verses(stream: &str, format: InputFormat, index: Option<&str>) -> Result<Corpus, CorpusError> {
    match format {
        InputFormat::Pipe => load_pipe(stream),
        InputFormat::Plain => load_plain(stream, index.unwrap_or("")),
    }
}

const NOMINAL_TAGS: &[&str] = &["N", "PN", "ADJ", "IMPN", "PRON", "DEM", "REL", "T", "LOC"];
const VERBAL_TAGS: &[&str] = &["V"];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Segment {
    form: String,
    tag: String,
    stem: bool,
}

fn parse_segment_locator(s: &str) -> Option<(Locator, u16)> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')');
    let n: Vec<u16> = body.split(':').map(|p| p.parse().ok()).collect::<Option<_>>()?;
    match n.as_slice() {
        [s, a, w, seg] if *s > 0 && *s <= 114 && *a > 0 && *w > 0 && *seg > 0 => Some((Locator::new(*s, *a, *w), *seg)),
        _ => None,
    }
}

pub fn load_morphology(stream: &str) -> Result<BTreeMap<Locator, PosTag>, CorpusError> {
    let mut words: BTreeMap<Locator, BTreeMap<u16, Segment>> = BTreeMap::new();
    for (i, raw) in split_lines(stream).into_iter().enumerate() {
        let row = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') || raw.starts_with("LOCATION") {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() < 3 {
            return Err(CorpusError::MorphRow { row, msg: "expected at least 3 tab-separated columns".into() });
        }
        let (loc, seg) = parse_segment_locator(cols[0])
            .ok_or_else(|| CorpusError::MorphRow { row, msg: format!("bad locator {:?}", cols[0]) })?;
        let tag = cols[2].trim();
        if tag.is_empty() {
            return Err(CorpusError::MorphRow { row, msg: "empty tag".into() });
        }
        let features = cols.get(3).copied().unwrap_or("");
        let segment =
            Segment { form: cols[1].to_string(), tag: tag.to_string(), stem: features.split('|').any(|f| f == "STEM") };
        let entry = words.entry(loc).or_default();
        match entry.get(&seg) {
            Some(prev) if *prev != segment => return Err(CorpusError::MorphConflict { row, loc, seg }),
            Some(_) => {}
            None => {
                entry.insert(seg, segment);
            }
        }
    }
    Ok(words.into_iter().map(|(loc, segs)| (loc, collapse(&segs))).collect())
}

fn collapse(segs: &BTreeMap<u16, Segment>) -> PosTag {
    let stem = segs.values().find(|s| s.stem).or_else(|| if segs.len() == 1 { segs.values().next() } else { None });
    if stem.is_some_and(|s| VERBAL_TAGS.contains(&s.tag.as_str())) {
        PosTag::Verb
    } else if segs.values().any(|s| NOMINAL_TAGS.contains(&s.tag.as_str())) {
        PosTag::Noun
    } else {
        PosTag::Particle
    }
}

pub fn align_morphology(c: &Corpus, m: &BTreeMap<Locator, PosTag>) -> (Corpus, Coverage) {
    let mut out = c.clone();
    let mut cov = Coverage::default();
    for w in out.verses.iter_mut().flat_map(|v| v.words.iter_mut()) {
        cov.total += 1;
        match m.get(&w.loc) {
            Some(tag) => {
                w.pos = Some(*tag);
                cov.tagged += 1;
            }
            None => cov.untagged.push(w.loc),
        }
    }
    cov.orphans = m.keys().filter(|l| locate(c, **l).is_err()).copied().collect();
    out.aligned = true;
    (out, cov)
}

pub fn locate(c: &Corpus, l: Locator) -> Result<&Word, CorpusError> {
    let idx = c
        .verses
        .binary_search_by(|v| (v.sura, v.aya).cmp(&(l.sura, l.aya)))
        .map_err(|_| CorpusError::NotFound(l.to_string()))?;
    c.verses[idx].words.get(usize::from(l.word) - 1).ok_or_else(|| CorpusError::NotFound(l.to_string()))
}
