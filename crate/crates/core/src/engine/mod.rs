//! Reversible rewrite rules applied as an ordered cascade.
//!
//! A rule pairs a tajwīd-side pattern with a plain-side pattern of the same
//! shape. REMOVE rewrites matches of the tajwīd side into the plain side,
//! ADD does the reverse. Each element's edit is the difference between the
//! required marks of the two sides, so the edit is derived, not written.

pub mod notation;
pub mod pack;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Locator, PosTag, Verse, Word};
use crate::encoding::{self, Grapheme, Inventory, Mark, MarkClass};

pub use notation::{Atom, Branch, Element, LetterSpec, Vocabulary};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("duplicate rule id {0}")]
    DuplicateId(String),
    #[error("rules {first} and {second} share rank {rank}")]
    DuplicateRank { rank: i64, first: String, second: String },
    #[error("rule {rule}: {msg}")]
    Rule { rule: String, msg: String },
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("rule {rule} requires part-of-speech tags but the corpus has no morphology")]
    Unaligned { rule: String },
    #[error("rule {rule} at {loc}: rewrite of {before:?} gave {after:?}, which the opposite form does not match")]
    Irreversible { rule: String, loc: Locator, before: String, after: String },
    #[error("trace entry {index}: {msg}")]
    Replay { index: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RuleGroup {
    Assim,
    Elong,
    Pausal,
}

impl FromStr for RuleGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<RuleGroup, String> {
        match s {
            "ASSIM" => Ok(RuleGroup::Assim),
            "ELONG" => Ok(RuleGroup::Elong),
            "PAUSAL" => Ok(RuleGroup::Pausal),
            other => Err(format!("unknown rule group {other:?}")),
        }
    }
}

impl fmt::Display for RuleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleGroup::Assim => "ASSIM",
            RuleGroup::Elong => "ELONG",
            RuleGroup::Pausal => "PAUSAL",
        })
    }
}

/// Where a pattern's junction may fall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Intra,
    Cross,
    Both,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Scope, String> {
        match s {
            "intra" => Ok(Scope::Intra),
            "cross" => Ok(Scope::Cross),
            "both" => Ok(Scope::Both),
            other => Err(format!("unknown scope {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Remove,
    Add,
}

/// Restrictions on the word holding the first matched element.
/// Word forms are compared by consonant skeleton.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Guard {
    pub pos: Option<PosTag>,
    pub forms: Option<BTreeSet<String>>,
    pub excluded_forms: BTreeSet<String>,
    pub exceptions: BTreeSet<Locator>,
    pub only_at: Option<BTreeSet<Locator>>,
}

impl Guard {
    pub fn admits(&self, w: &Word) -> bool {
        if let Some(p) = self.pos {
            if w.pos != Some(p) {
                return false;
            }
        }
        if self.exceptions.contains(&w.loc) {
            return false;
        }
        if let Some(only) = &self.only_at {
            if !only.contains(&w.loc) {
                return false;
            }
        }
        if self.forms.is_none() && self.excluded_forms.is_empty() {
            return true;
        }
        let sk = w.skeleton();
        if self.excluded_forms.contains(&sk) {
            return false;
        }
        self.forms.as_ref().is_none_or(|f| f.contains(&sk))
    }
}

/// A rule as written in a pack, before compilation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiRule {
    pub id: String,
    pub group: RuleGroup,
    pub rank: i64,
    pub scope: Scope,
    /// Lets a cross junction step over a word-final otiose alif / alif maqṣūrah.
    pub skip: bool,
    pub tajwid_form: String,
    pub plain_form: String,
    pub guard: Guard,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Edit {
    remove: Vec<Atom>,
    add: Vec<Mark>,
}

#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub id: String,
    pub group: RuleGroup,
    pub rank: i64,
    pub scope: Scope,
    pub skip: bool,
    pub guard: Guard,
    pub tajwid: Vec<Branch>,
    pub plain: Vec<Branch>,
    pub identity: bool,
    // [branch][element]
    to_plain: Vec<Vec<Edit>>,
    to_tajwid: Vec<Vec<Edit>>,
}

impl CompiledRule {
    fn sides(&self, d: Direction) -> (&[Branch], &[Branch], &[Vec<Edit>]) {
        match d {
            Direction::Remove => (&self.tajwid, &self.plain, &self.to_plain),
            Direction::Add => (&self.plain, &self.tajwid, &self.to_tajwid),
        }
    }
}

/// Rules sorted by ascending rank.
#[derive(Debug, Clone, Default)]
pub struct CompiledPack {
    pub rules: Vec<CompiledRule>,
}

impl CompiledPack {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.rules.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn rule(&self, id: &str) -> Option<&CompiledRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Copy of the pack with one rule dropped.
    pub fn without(&self, id: &str) -> CompiledPack {
        CompiledPack { rules: self.rules.iter().filter(|r| r.id != id).cloned().collect() }
    }

    pub fn pos_guarded(&self) -> Option<&CompiledRule> {
        self.rules.iter().find(|r| r.guard.pos.is_some())
    }

    /// Application order for a direction.
    pub fn ordered(&self, d: Direction) -> Vec<&CompiledRule> {
        let mut v: Vec<&CompiledRule> = self.rules.iter().collect();
        if d == Direction::Add {
            v.reverse();
        }
        v
    }
}

pub fn compile(rules: &[BiRule]) -> Result<CompiledPack, CompileError> {
    compile_with(rules, &Vocabulary::standard(), Inventory::standard())
}

pub fn compile_with(rules: &[BiRule], vocab: &Vocabulary, inv: &Inventory) -> Result<CompiledPack, CompileError> {
    let mut ids = BTreeSet::new();
    let mut ranks: BTreeMap<i64, &str> = BTreeMap::new();
    let mut out = Vec::with_capacity(rules.len());
    for r in rules {
        if !ids.insert(r.id.as_str()) {
            return Err(CompileError::DuplicateId(r.id.clone()));
        }
        if let Some(first) = ranks.insert(r.rank, &r.id) {
            return Err(CompileError::DuplicateRank { rank: r.rank, first: first.to_string(), second: r.id.clone() });
        }
        out.push(compile_rule(r, vocab, inv).map_err(|msg| CompileError::Rule { rule: r.id.clone(), msg })?);
    }
    out.sort_by_key(|r| r.rank);
    Ok(CompiledPack { rules: out })
}

fn compile_rule(r: &BiRule, vocab: &Vocabulary, inv: &Inventory) -> Result<CompiledRule, String> {
    let tajwid = notation::parse_pattern(&r.tajwid_form, vocab, inv).map_err(|e| format!("tajwid form: {e}"))?;
    let plain = notation::parse_pattern(&r.plain_form, vocab, inv).map_err(|e| format!("plain form: {e}"))?;
    if tajwid.len() != plain.len() {
        return Err(format!("{} tajwid branches but {} plain branches", tajwid.len(), plain.len()));
    }
    if let Some(only) = &r.guard.only_at {
        if let Some(l) = only.intersection(&r.guard.exceptions).next() {
            return Err(format!("{l} is both an exception and an only-at locator"));
        }
    }
    let mut to_plain = Vec::new();
    let mut to_tajwid = Vec::new();
    for (bi, (t, p)) in tajwid.iter().zip(&plain).enumerate() {
        check_shape(t, p, r.scope).map_err(|e| format!("branch {}: {e}", bi + 1))?;
        let mut fwd = Vec::new();
        let mut back = Vec::new();
        for (et, ep) in t.elements.iter().zip(&p.elements) {
            fwd.push(edit(et, ep, inv).map_err(|e| format!("branch {}: {e}", bi + 1))?);
            back.push(edit(ep, et, inv).map_err(|e| format!("branch {}: {e}", bi + 1))?);
        }
        to_plain.push(fwd);
        to_tajwid.push(back);
    }
    let identity = to_plain.iter().flatten().all(|e| e.remove.is_empty() && e.add.is_empty());
    Ok(CompiledRule {
        id: r.id.clone(),
        group: r.group,
        rank: r.rank,
        scope: r.scope,
        skip: r.skip,
        guard: r.guard.clone(),
        tajwid,
        plain,
        identity,
        to_plain,
        to_tajwid,
    })
}

/// Both sides must match the same letters in the same layout.
fn check_shape(t: &Branch, p: &Branch, scope: Scope) -> Result<(), String> {
    if t.elements.len() != p.elements.len() {
        return Err("sides have different element counts".into());
    }
    if t.junction != p.junction {
        return Err("sides place the junction differently".into());
    }
    match (scope, t.junction) {
        (Scope::Cross | Scope::Both, None) => return Err("cross-word pattern without a junction".into()),
        (Scope::Intra, Some(_)) => return Err("intra-word pattern with a junction".into()),
        _ => {}
    }
    for (i, (a, b)) in t.elements.iter().zip(&p.elements).enumerate() {
        if a.letters != b.letters {
            return Err(format!("element {} changes the letter", i + 1));
        }
        if (a.negative, a.word_initial, a.word_final) != (b.negative, b.word_initial, b.word_final) {
            return Err(format!("element {} changes its anchors", i + 1));
        }
        if a.negative && (a.required != b.required || a.forbidden != b.forbidden) {
            return Err(format!("negative element {} differs between sides", i + 1));
        }
    }
    Ok(())
}

fn edit(from: &Element, to: &Element, inv: &Inventory) -> Result<Edit, String> {
    let mut e = Edit::default();
    if from.negative {
        return Ok(e);
    }
    for a in from.required.iter().filter(|a| !to.required.contains(a)) {
        if let Atom::Group(n, _) = a {
            return Err(format!("mark group {n} cannot be rewritten; name a class"));
        }
        e.remove.push(a.clone());
    }
    for a in to.required.iter().filter(|a| !from.required.contains(a)) {
        let mark = match a {
            Atom::Group(n, _) => return Err(format!("mark group {n} cannot be rewritten; name a class")),
            Atom::Class(c) => {
                let cp = inv.primary(*c).ok_or_else(|| format!("no codepoint for {}", c.name()))?;
                Mark { cp, class: *c }
            }
            Atom::Cp(cp) => Mark { cp: *cp, class: inv.classify(*cp).ok_or_else(|| a.label())? },
        };
        e.add.push(mark);
    }
    Ok(e)
}

type Pos = (usize, usize);

fn skippable(g: &Grapheme) -> bool {
    matches!(g.base, 'ا' | 'ى') && g.marks.iter().all(|m| m.class == MarkClass::SilentZero)
}

/// Candidate positions after `p`. `None` when the link cannot be made at all,
/// e.g. a cross junction at the end of the aya.
fn forward(words: &[Word], p: Pos, junction: bool, scope: Scope, skip: bool) -> Option<Vec<Pos>> {
    let (w, g) = p;
    let len = words[w].graphemes.len();
    let intra: Vec<Pos> = if g + 1 < len { vec![(w, g + 1)] } else { Vec::new() };
    if !junction || scope == Scope::Intra {
        return Some(intra);
    }
    let at_end = g + 1 == len || (skip && g + 2 == len && skippable(&words[w].graphemes[g + 1]));
    let cross = (at_end && w + 1 < words.len()).then_some((w + 1, 0));
    match scope {
        Scope::Cross => cross.map(|c| vec![c]),
        _ => {
            if g + 1 == len && cross.is_none() {
                return None;
            }
            let mut v = intra;
            v.extend(cross);
            Some(v)
        }
    }
}

fn backward(words: &[Word], p: Pos, junction: bool, scope: Scope) -> Option<Vec<Pos>> {
    let (w, g) = p;
    let intra: Vec<Pos> = if g > 0 { vec![(w, g - 1)] } else { Vec::new() };
    if !junction || scope == Scope::Intra {
        return Some(intra);
    }
    let cross = (g == 0 && w > 0).then(|| (w - 1, words[w - 1].graphemes.len() - 1));
    match scope {
        Scope::Cross => cross.map(|c| vec![c]),
        _ => {
            if g == 0 && cross.is_none() {
                return None;
            }
            let mut v = intra;
            v.extend(cross);
            Some(v)
        }
    }
}

fn element_at(e: &Element, words: &[Word], (w, g): Pos) -> bool {
    let gs = &words[w].graphemes;
    e.accepts(&gs[g]) && (!e.word_initial || g == 0) && (!e.word_final || g + 1 == gs.len())
}

/// Positions of each element (None for negative ones) if the branch matches
/// with its first positive element at `start`.
fn match_branch(b: &Branch, words: &[Word], start: Pos, scope: Scope, skip: bool) -> Option<Vec<Option<Pos>>> {
    let first = usize::from(b.elements[0].negative);
    if !element_at(&b.elements[first], words, start) {
        return None;
    }
    let mut acc = Vec::with_capacity(b.elements.len());
    if first == 1 {
        let cands = backward(words, start, b.junction == Some(1), scope)?;
        if cands.iter().any(|c| element_at(&b.elements[0], words, *c)) {
            return None;
        }
        acc.push(None);
    }
    acc.push(Some(start));
    extend(b, words, first + 1, start, scope, skip, &mut acc).then_some(acc)
}

fn extend(
    b: &Branch,
    words: &[Word],
    k: usize,
    prev: Pos,
    scope: Scope,
    skip: bool,
    acc: &mut Vec<Option<Pos>>,
) -> bool {
    if k == b.elements.len() {
        return true;
    }
    let Some(cands) = forward(words, prev, b.junction == Some(k), scope, skip) else {
        return false;
    };
    let e = &b.elements[k];
    if e.negative {
        if cands.iter().any(|c| element_at(e, words, *c)) {
            return false;
        }
        acc.push(None);
        return true;
    }
    for c in cands {
        if element_at(e, words, c) {
            acc.push(Some(c));
            if extend(b, words, k + 1, c, scope, skip, acc) {
                return true;
            }
            acc.pop();
        }
    }
    false
}

/// First branch of `side` matching at `start` whose guard admits the anchor word.
fn find_match(rule: &CompiledRule, side: &[Branch], words: &[Word], start: Pos) -> Option<(usize, Vec<Option<Pos>>)> {
    if !rule.guard.admits(&words[start.0]) {
        return None;
    }
    side.iter().enumerate().find_map(|(bi, b)| match_branch(b, words, start, rule.scope, rule.skip).map(|ps| (bi, ps)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub from: Locator,
    pub from_grapheme: usize,
    pub to: Locator,
    pub to_grapheme: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Firing {
    pub rule: String,
    pub loc: Locator,
    pub span: Span,
    pub before: String,
    pub after: String,
    /// Words whose text the firing changed.
    pub changed: Vec<Locator>,
}

/// A firing that produced a match site for a rule applied earlier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedWarning {
    pub rule: String,
    pub fed: String,
    pub loc: Locator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub direction: Direction,
    pub firings: Vec<Firing>,
    pub warnings: Vec<FeedWarning>,
}

impl Trace {
    pub fn new(direction: Direction) -> Trace {
        Trace { direction, firings: Vec::new(), warnings: Vec::new() }
    }

    pub fn census(&self) -> BTreeMap<String, usize> {
        census(self)
    }

    pub fn by_rule(&self, id: &str) -> impl Iterator<Item = &Firing> {
        let id = id.to_string();
        self.firings.iter().filter(move |f| f.rule == id)
    }

    /// Words changed by a rule's firings.
    pub fn changed_by(&self, id: &str) -> BTreeSet<Locator> {
        self.by_rule(id).flat_map(|f| f.changed.iter().copied()).collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for f in &self.firings {
            s.push_str(&serde_json::to_string(f).expect("firing serializes"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(direction: Direction, text: &str) -> Result<Trace, serde_json::Error> {
        let firings = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<Vec<Firing>, _>>()?;
        Ok(Trace { direction, firings, warnings: Vec::new() })
    }

    /// Re-applies the recorded rewrites, checking each `before` text.
    pub fn replay(&self, input: &Corpus) -> Result<Corpus, EngineError> {
        let mut c = input.clone();
        for (index, f) in self.firings.iter().enumerate() {
            let err = |msg: String| EngineError::Replay { index, msg };
            let vi = c
                .verses
                .binary_search_by_key(&(f.span.from.sura, f.span.from.aya), |v| (v.sura, v.aya))
                .map_err(|_| err(format!("no aya {}:{}", f.span.from.sura, f.span.from.aya)))?;
            let verse = &mut c.verses[vi];
            let w0 = usize::from(f.span.from.word) - 1;
            let w1 = usize::from(f.span.to.word) - 1;
            if w1 >= verse.words.len() || w0 > w1 {
                return Err(err(format!("span {}..{} outside the aya", f.span.from, f.span.to)));
            }
            let (g0, g1) = (f.span.from_grapheme, f.span.to_grapheme);
            let found = span_text(verse, (w0, g0), (w1, g1));
            if found != f.before {
                return Err(err(format!("expected {:?} at {}, found {:?}", f.before, f.loc, found)));
            }
            let parts: Vec<&str> = f.after.split(' ').collect();
            if parts.len() != w1 - w0 + 1 {
                return Err(err("after text spans a different number of words".into()));
            }
            for (k, part) in parts.iter().enumerate() {
                let gs = encoding::segment(part).map_err(|e| err(e.to_string()))?;
                let word = &mut verse.words[w0 + k].graphemes;
                let lo = if k == 0 { g0 } else { 0 };
                let hi = if w0 + k == w1 { g1 + 1 } else { word.len() };
                if gs.len() != hi - lo {
                    return Err(err("after text changes the grapheme count".into()));
                }
                word.splice(lo..hi, gs);
            }
        }
        Ok(c)
    }
}

pub fn census(t: &Trace) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for f in &t.firings {
        *m.entry(f.rule.clone()).or_insert(0) += 1;
    }
    m
}

fn span_text(v: &Verse, (w0, g0): Pos, (w1, g1): Pos) -> String {
    let mut s = String::new();
    for w in w0..=w1 {
        let gs = &v.words[w].graphemes;
        let lo = if w == w0 { g0 } else { 0 };
        let hi = if w == w1 { (g1 + 1).min(gs.len()) } else { gs.len() };
        if w > w0 {
            s.push(' ');
        }
        if lo <= hi {
            s.push_str(&encoding::serialize(&gs[lo..hi]));
        }
    }
    s
}

fn apply_edit(g: &mut Grapheme, e: &Edit) {
    for a in &e.remove {
        match a {
            Atom::Class(c) => g.marks.retain(|m| m.class != *c),
            Atom::Cp(cp) => g.marks.retain(|m| m.cp != *cp),
            Atom::Group(..) => unreachable!("rejected at compile time"),
        }
    }
    for m in &e.add {
        if !g.has_cp(m.cp) {
            g.marks.push(*m);
        }
    }
    g.canonicalize();
}

/// One left-to-right pass of one rule over one aya.
fn apply_rule(rule: &CompiledRule, d: Direction, verse: &mut Verse, out: &mut Vec<Firing>) -> Result<(), EngineError> {
    let (src, tgt, edits) = rule.sides(d);
    let mut w = 0;
    let mut g = 0;
    while w < verse.words.len() {
        if g >= verse.words[w].graphemes.len() {
            w += 1;
            g = 0;
            continue;
        }
        let Some((bi, ps)) = find_match(rule, src, &verse.words, (w, g)) else {
            g += 1;
            continue;
        };
        let start = (w, g);
        let end = ps.iter().rev().flatten().next().copied().expect("a positive element");
        let before_words: Vec<String> = (start.0..=end.0).map(|i| verse.words[i].text()).collect();
        let before = span_text(verse, start, end);
        for (k, p) in ps.iter().enumerate() {
            if let Some((pw, pg)) = p {
                apply_edit(&mut verse.words[*pw].graphemes[*pg], &edits[bi][k]);
            }
        }
        let after = span_text(verse, start, end);
        let loc = verse.words[start.0].loc;
        if match_branch(&tgt[bi], &verse.words, start, rule.scope, rule.skip).as_ref() != Some(&ps) {
            return Err(EngineError::Irreversible { rule: rule.id.clone(), loc, before, after });
        }
        let changed = (start.0..=end.0)
            .filter(|i| verse.words[*i].text() != before_words[i - start.0])
            .map(|i| verse.words[i].loc)
            .collect();
        out.push(Firing {
            rule: rule.id.clone(),
            loc,
            span: Span { from: loc, from_grapheme: start.1, to: verse.words[end.0].loc, to_grapheme: end.1 },
            before,
            after,
            changed,
        });
        w = end.0;
        g = end.1 + 1;
    }
    Ok(())
}

/// Runs the pack over the corpus. REMOVE applies rules by ascending rank,
/// ADD by descending rank; identity rules are skipped.
pub fn apply_cascade(c: &Corpus, p: &CompiledPack, d: Direction) -> Result<(Corpus, Trace), EngineError> {
    // nothing to guard in an empty corpus
    if !c.aligned && !c.is_empty() {
        if let Some(r) = p.pos_guarded() {
            return Err(EngineError::Unaligned { rule: r.id.clone() });
        }
    }
    let mut out = c.clone();
    let mut trace = Trace::new(d);
    let order = p.ordered(d);
    for (i, rule) in order.iter().enumerate() {
        if rule.identity {
            continue;
        }
        for verse in &mut out.verses {
            let mark = trace.firings.len();
            apply_rule(rule, d, verse, &mut trace.firings)?;
            for f in &trace.firings[mark..] {
                if let Some(fed) = fed_rule(&order[..i], d, verse, f) {
                    trace.warnings.push(FeedWarning { rule: rule.id.clone(), fed, loc: f.loc });
                }
            }
        }
    }
    Ok((out, trace))
}

/// An earlier rule that now matches inside the words a firing touched.
fn fed_rule(earlier: &[&CompiledRule], d: Direction, verse: &Verse, f: &Firing) -> Option<String> {
    let w0 = usize::from(f.span.from.word) - 1;
    let w1 = usize::from(f.span.to.word) - 1;
    for r in earlier.iter().filter(|r| !r.identity) {
        let (src, _, _) = r.sides(d);
        for w in w0..=w1 {
            for g in 0..verse.words[w].graphemes.len() {
                if find_match(r, src, &verse.words, (w, g)).is_some() {
                    return Some(r.id.clone());
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_pipe;

    fn rule(id: &str, rank: i64, scope: Scope, tajwid: &str, plain: &str) -> BiRule {
        BiRule {
            id: id.into(),
            group: RuleGroup::Assim,
            rank,
            scope,
            skip: false,
            tajwid_form: tajwid.into(),
            plain_form: plain.into(),
            guard: Guard::default(),
        }
    }

    fn corpus(text: &str) -> Corpus {
        load_pipe(&format!("3|104|{}", encoding::normalize(text).unwrap())).unwrap()
    }

    fn idgham() -> BiRule {
        rule("N2.1.1.A", 300, Scope::Cross, "ن-VOCALIC | [من]+SHADDA", "ن+SUKUN | [من]-SHADDA")
    }

    #[test]
    fn empty_pack() {
        assert!(compile(&[]).unwrap().is_empty());
    }

    #[test]
    fn duplicate_id_is_named() {
        let e = compile(&[idgham(), idgham()]).unwrap_err();
        assert!(e.to_string().contains("N2.1.1.A"));
    }

    #[test]
    fn unknown_class_names_rule() {
        let e = compile(&[rule("X1", 1, Scope::Intra, "ن+NOPE", "ن")]).unwrap_err();
        assert!(e.to_string().contains("X1") && e.to_string().contains("NOPE"));
    }

    #[test]
    fn rejects_letter_change_and_group_rewrite() {
        assert!(compile(&[rule("X", 1, Scope::Intra, "ن", "م")]).is_err());
        assert!(compile(&[rule("X", 1, Scope::Intra, "ن+VOCALIC", "ن")]).is_err());
        assert!(compile(&[rule("X", 1, Scope::Cross, "ن ب", "ن ب")]).is_err());
    }

    #[test]
    fn removes_and_restores_across_words() {
        let pack = compile(&[idgham()]).unwrap();
        let c = corpus("وَلْتَكُن مِّنكُمْ");
        let (plain, t) = apply_cascade(&c, &pack, Direction::Remove).unwrap();
        assert_eq!(plain.verses[0].text(), encoding::normalize("وَلْتَكُنْ مِنكُمْ").unwrap());
        assert_eq!(t.firings.len(), 1);
        assert_eq!(t.firings[0].loc, Locator::new(3, 104, 1));
        assert_eq!(t.firings[0].changed, vec![Locator::new(3, 104, 1), Locator::new(3, 104, 2)]);
        let (back, t2) = apply_cascade(&plain, &pack, Direction::Add).unwrap();
        assert_eq!(back, c);
        assert_eq!(census(&t), census(&t2));
        assert_eq!(t.replay(&c).unwrap(), plain);
    }

    #[test]
    fn no_crossing_without_next_word() {
        let pack = compile(&[idgham()]).unwrap();
        let c = corpus("مِن");
        let (_, t) = apply_cascade(&c, &pack, Direction::Remove).unwrap();
        assert!(t.firings.is_empty());
    }

    #[test]
    fn skip_steps_over_otiose_alif() {
        let mut r = rule("MITHL-ww", 400, Scope::Both, "و-VOCALIC | و+SHADDA", "و+SUKUN | و-SHADDA");
        r.skip = true;
        let pack = compile(&[r]).unwrap();
        let c = corpus("عَصَوا وَّكَانُوا");
        let (plain, t) = apply_cascade(&c, &pack, Direction::Remove).unwrap();
        assert_eq!(t.firings.len(), 1);
        assert_eq!(plain.verses[0].text(), encoding::normalize("عَصَوْا وَكَانُوا").unwrap());
        assert_eq!(apply_cascade(&plain, &pack, Direction::Add).unwrap().0, c);
    }

    #[test]
    fn negative_lookahead_blocks() {
        let r = rule(
            "HU",
            240,
            Scope::Cross,
            "*+HARAKAH ه+HARAKAH_DAMMA+MINI_WAW$ | ~ٱ",
            "*+HARAKAH ه+HARAKAH_DAMMA$ | ~ٱ",
        );
        let pack = compile(&[r]).unwrap();
        let fires = |s: &str| apply_cascade(&corpus(s), &pack, Direction::Add).unwrap().1.firings.len();
        assert_eq!(fires("أَهْلَهُ مِنَ"), 1);
        assert_eq!(fires("لَهُ ٱلْمُلْكُ"), 0);
        assert_eq!(fires("لَهُ"), 0);
    }

    #[test]
    fn guards() {
        let mut r = idgham();
        r.guard.exceptions.insert(Locator::new(3, 104, 1));
        let pack = compile(&[r.clone()]).unwrap();
        assert!(apply_cascade(&corpus("وَلْتَكُن مِّنكُمْ"), &pack, Direction::Remove).unwrap().1.firings.is_empty());
        r.guard.only_at = Some(BTreeSet::from([Locator::new(3, 104, 1)]));
        assert!(compile(&[r]).is_err());
    }

    #[test]
    fn pos_guard_needs_morphology() {
        let mut r = idgham();
        r.guard.pos = Some(PosTag::Noun);
        let pack = compile(&[r]).unwrap();
        let e = apply_cascade(&corpus("مِن"), &pack, Direction::Remove).unwrap_err();
        assert!(e.to_string().contains("N2.1.1.A"));
    }

    #[test]
    fn identity_rules_never_fire() {
        let pack = compile(&[rule("N1", 299, Scope::Cross, "ن+SUKUN | {GUTTURAL}", "ن+SUKUN | {GUTTURAL}")]).unwrap();
        assert!(pack.rules[0].identity);
        let (_, t) = apply_cascade(&corpus("مِنْ خَشْيَةِ"), &pack, Direction::Remove).unwrap();
        assert!(t.firings.is_empty());
    }

    #[test]
    fn jsonl_round_trip() {
        let pack = compile(&[idgham()]).unwrap();
        let c = corpus("وَلْتَكُن مِّنكُمْ");
        let (_, t) = apply_cascade(&c, &pack, Direction::Remove).unwrap();
        let back = Trace::from_jsonl(Direction::Remove, &t.to_jsonl()).unwrap();
        assert_eq!(back.firings, t.firings);
    }
}
