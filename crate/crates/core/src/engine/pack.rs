//! Declarative rule packs.
//!
//! A pack is a TOML file with optional `[letters]` and `[marks]` tables that
//! extend the vocabulary, and one `[[rule]]` record per rule:
//!
//! ```toml
//! [letters]
//! HAMZA = "ءأإؤئ"
//!
//! [[rule]]
//! id = "N2.2.A"
//! group = "ASSIM"
//! rank = 320
//! scope = "cross"
//! tajwid = "ن-VOCALIC | [لر]+SHADDA"
//! plain = "ن+SUKUN | [لر]-SHADDA"
//! except = "N2.2.A.except"
//! ```
//!
//! `forms`, `exclude`, `except` and `only` name lexicon files. Form files
//! hold one word per line, locator files one `s:a:w` per line; `#` starts a
//! comment line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::{BiRule, Guard, RuleGroup, Scope, Vocabulary};
use crate::corpus::{Locator, PosTag};
use crate::encoding::{self, MarkClass};

#[derive(Debug, Error)]
pub enum PackError {
    #[error("rule pack: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("rule {rule}: {msg}")]
    Rule { rule: String, msg: String },
    #[error("lexicon file {0} is missing")]
    MissingList(String),
    #[error("lexicon file {file} line {line}: {msg}")]
    BadEntry { file: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("pack vocabulary: {0}")]
    Vocabulary(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PackFile {
    #[serde(default)]
    letters: BTreeMap<String, String>,
    #[serde(default)]
    marks: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    rule: Vec<RuleRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleRecord {
    id: String,
    group: String,
    rank: i64,
    scope: String,
    #[serde(default)]
    skip: bool,
    tajwid: String,
    plain: String,
    pos: Option<String>,
    forms: Option<String>,
    exclude: Option<String>,
    except: Option<String>,
    only: Option<String>,
}

/// Raw lexicon files by name.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    files: BTreeMap<String, String>,
}

impl Lexicon {
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Lexicon {
        Lexicon { files: entries.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    pub fn from_dir(dir: &Path) -> Result<Lexicon, PackError> {
        let io = |source| PackError::Io { path: dir.to_path_buf(), source };
        let mut files = BTreeMap::new();
        for entry in std::fs::read_dir(dir).map_err(io)? {
            let path = entry.map_err(io)?.path();
            if path.is_file() {
                let text =
                    std::fs::read_to_string(&path).map_err(|source| PackError::Io { path: path.clone(), source })?;
                let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                files.insert(name, text);
            }
        }
        Ok(Lexicon { files })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    fn lines<'a>(&'a self, name: &'a str) -> Result<impl Iterator<Item = (usize, &'a str)> + 'a, PackError> {
        let text = self.files.get(name).ok_or_else(|| PackError::MissingList(name.to_string()))?;
        Ok(text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')))
    }

    /// Word-form list, keyed by skeleton.
    pub fn forms(&self, name: &str) -> Result<BTreeSet<String>, PackError> {
        let mut out = BTreeSet::new();
        for (line, l) in self.lines(name)? {
            let norm = encoding::normalize(l).map_err(|e| PackError::BadEntry {
                file: name.to_string(),
                line,
                msg: e.to_string(),
            })?;
            out.insert(encoding::skeleton_of(&norm));
        }
        Ok(out)
    }

    pub fn locators(&self, name: &str) -> Result<BTreeSet<Locator>, PackError> {
        let mut out = BTreeSet::new();
        for (line, l) in self.lines(name)? {
            let loc = l.parse().map_err(|e: crate::corpus::CorpusError| PackError::BadEntry {
                file: name.to_string(),
                line,
                msg: e.to_string(),
            })?;
            out.insert(loc);
        }
        Ok(out)
    }

    /// Entry count per file.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        self.files.keys().map(|k| (k.clone(), self.lines(k).map(|l| l.count()).unwrap_or(0))).collect()
    }
}

/// A parsed pack: its rules plus the vocabulary they were written against.
#[derive(Debug, Clone)]
pub struct PackSpec {
    pub vocabulary: Vocabulary,
    pub rules: Vec<BiRule>,
}

pub fn parse_pack(text: &str, lexicon: &Lexicon) -> Result<PackSpec, PackError> {
    let file: PackFile = toml::from_str(text)?;
    let mut vocabulary = Vocabulary::standard();
    for (name, letters) in file.letters {
        vocabulary.letters.insert(name, letters.chars().filter(|c| !c.is_whitespace()).collect());
    }
    for (name, classes) in file.marks {
        let cs = classes
            .iter()
            .map(|c| {
                MarkClass::from_name(c).ok_or_else(|| PackError::Vocabulary(format!("{name}: unknown mark class {c}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        vocabulary.marks.insert(name, cs);
    }
    let mut rules = Vec::with_capacity(file.rule.len());
    for r in file.rule {
        let bad = |msg: String| PackError::Rule { rule: r.id.clone(), msg };
        let pos = match &r.pos {
            None => None,
            Some(p) => Some(PosTag::from_name(p).ok_or_else(|| bad(format!("unknown POS {p:?}")))?),
        };
        let guard = Guard {
            pos,
            forms: r.forms.as_deref().map(|f| lexicon.forms(f)).transpose()?,
            excluded_forms: r.exclude.as_deref().map(|f| lexicon.forms(f)).transpose()?.unwrap_or_default(),
            exceptions: r.except.as_deref().map(|f| lexicon.locators(f)).transpose()?.unwrap_or_default(),
            only_at: r.only.as_deref().map(|f| lexicon.locators(f)).transpose()?,
        };
        rules.push(BiRule {
            group: r.group.parse::<RuleGroup>().map_err(bad)?,
            scope: r.scope.parse::<Scope>().map_err(bad)?,
            id: r.id,
            rank: r.rank,
            skip: r.skip,
            tajwid_form: r.tajwid,
            plain_form: r.plain,
            guard,
        });
    }
    Ok(PackSpec { vocabulary, rules })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PACK: &str = r#"
[letters]
LR = "لر"

[[rule]]
id = "N2.2.A"
group = "ASSIM"
rank = 320
scope = "cross"
tajwid = "ن-VOCALIC | {LR}+SHADDA"
plain = "ن+SUKUN | {LR}-SHADDA"
except = "N2.2.A.except"
"#;

    #[test]
    fn loads_rules_and_lists() {
        let lex = Lexicon::from_entries([("N2.2.A.except", "# sakt\n75:27:2\n")]);
        let spec = parse_pack(PACK, &lex).unwrap();
        assert_eq!(spec.rules.len(), 1);
        assert!(spec.rules[0].guard.exceptions.contains(&Locator::new(75, 27, 2)));
        let pack =
            crate::engine::compile_with(&spec.rules, &spec.vocabulary, crate::encoding::Inventory::standard()).unwrap();
        assert_eq!(pack.ids(), vec!["N2.2.A"]);
        assert_eq!(lex.counts()["N2.2.A.except"], 1);
    }

    #[test]
    fn missing_list_is_named() {
        let e = parse_pack(PACK, &Lexicon::default()).unwrap_err();
        assert!(e.to_string().contains("N2.2.A.except"));
    }

    #[test]
    fn forms_keyed_by_skeleton() {
        let lex = Lexicon::from_entries([("f", "قَوَارِيرَا۟\n")]);
        assert!(lex.forms("f").unwrap().contains("قواريرا"));
    }

    #[test]
    fn bad_locator_entry() {
        let lex = Lexicon::from_entries([("N2.2.A.except", "75:x:2\n")]);
        assert!(matches!(parse_pack(PACK, &lex), Err(PackError::BadEntry { line: 1, .. })));
    }
}
