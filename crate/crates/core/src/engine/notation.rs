//! Pattern mini-notation.
//!
//! ```text
//! pattern  := branch ( "||" branch )*
//! branch   := item ( " " item )*         items are whitespace separated
//! item     := "|" | element              "|" marks the junction
//! element  := ["~"] ["^"] letters constraint* ["$"]
//! letters  := "*" | "{" NAME "}" | "[" chars "]" | char
//! constraint := ("+" | "-") ( NAME | "U+" HEX )
//! ```
//!
//! `~` makes a zero-width negative element (first or last only), `^`/`$`
//! anchor the element to the start/end of its word. `+X` requires a mark,
//! `-X` forbids it. NAME is a mark class, a mark group or a letter class.

use std::collections::{BTreeMap, BTreeSet};

use crate::encoding::{Grapheme, Inventory, LetterClass, MarkClass};

/// Named letter sets and mark groups available to patterns.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    pub letters: BTreeMap<String, BTreeSet<char>>,
    pub marks: BTreeMap<String, Vec<MarkClass>>,
}

impl Vocabulary {
    /// Built-in letter classes plus the HARAKAH / TANWIN / VOCALIC groups.
    pub fn standard() -> Vocabulary {
        use MarkClass::*;
        let mut v = Vocabulary::default();
        for lc in LetterClass::ALL {
            if lc != LetterClass::Other {
                v.letters.insert(lc.name().to_string(), lc.members().iter().copied().collect());
            }
        }
        let harakah = vec![HarakahFatha, HarakahDamma, HarakahKasra];
        let tanwin = vec![TanwinStdF, TanwinStdD, TanwinStdK, TanwinOpenF, TanwinOpenD, TanwinOpenK];
        let mut vocalic = harakah.clone();
        vocalic.extend(&tanwin);
        vocalic.extend([Sukun, Shadda]);
        v.marks.insert("HARAKAH".into(), harakah);
        v.marks.insert("TANWIN".into(), tanwin);
        v.marks.insert("VOCALIC".into(), vocalic);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LetterSpec {
    Any,
    Set { name: String, letters: BTreeSet<char> },
}

impl LetterSpec {
    pub fn accepts(&self, ch: char) -> bool {
        match self {
            LetterSpec::Any => true,
            LetterSpec::Set { letters, .. } => letters.contains(&ch),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Class(MarkClass),
    Cp(char),
    Group(String, Vec<MarkClass>),
}

impl Atom {
    pub fn present(&self, g: &Grapheme) -> bool {
        match self {
            Atom::Class(c) => g.has(*c),
            Atom::Cp(cp) => g.has_cp(*cp),
            Atom::Group(_, cs) => cs.iter().any(|c| g.has(*c)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Atom::Class(c) => c.name().to_string(),
            Atom::Cp(cp) => format!("U+{:04X}", *cp as u32),
            Atom::Group(n, _) => n.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub letters: LetterSpec,
    pub required: Vec<Atom>,
    pub forbidden: Vec<Atom>,
    pub negative: bool,
    pub word_initial: bool,
    pub word_final: bool,
}

impl Element {
    /// Letter and mark constraints only; anchors are checked by the matcher.
    pub fn accepts(&self, g: &Grapheme) -> bool {
        self.letters.accepts(g.base)
            && self.required.iter().all(|a| a.present(g))
            && !self.forbidden.iter().any(|a| a.present(g))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub elements: Vec<Element>,
    /// Index of the first element after the junction.
    pub junction: Option<usize>,
}

pub fn parse_pattern(src: &str, vocab: &Vocabulary, inv: &Inventory) -> Result<Vec<Branch>, String> {
    let mut branches = Vec::new();
    for part in src.split("||") {
        branches.push(parse_branch(part, vocab, inv)?);
    }
    Ok(branches)
}

fn parse_branch(src: &str, vocab: &Vocabulary, inv: &Inventory) -> Result<Branch, String> {
    let mut elements = Vec::new();
    let mut junction = None;
    for tok in src.split_whitespace() {
        if tok == "|" {
            if junction.is_some() {
                return Err(format!("more than one junction in {:?}", src.trim()));
            }
            if elements.is_empty() {
                return Err("junction before the first element".into());
            }
            junction = Some(elements.len());
        } else {
            elements.push(parse_element(tok, vocab, inv)?);
        }
    }
    if elements.iter().all(|e| e.negative) {
        return Err(format!("branch {:?} has no positive element", src.trim()));
    }
    if junction == Some(elements.len()) {
        return Err("junction after the last element".into());
    }
    let last = elements.len() - 1;
    for (i, e) in elements.iter().enumerate() {
        if e.negative && i != 0 && i != last {
            return Err("negative element must be first or last".into());
        }
    }
    Ok(Branch { elements, junction })
}

fn parse_element(tok: &str, vocab: &Vocabulary, inv: &Inventory) -> Result<Element, String> {
    let chars: Vec<char> = tok.chars().collect();
    let mut i = 0;
    let mut negative = false;
    let mut word_initial = false;
    if chars.get(i) == Some(&'~') {
        negative = true;
        i += 1;
    }
    if chars.get(i) == Some(&'^') {
        word_initial = true;
        i += 1;
    }
    let letters = match chars.get(i) {
        None => return Err(format!("element {tok:?} has no letter")),
        Some('*') => {
            i += 1;
            LetterSpec::Any
        }
        Some('{') => {
            let end = find(&chars, i, '}').ok_or_else(|| format!("unclosed '{{' in {tok:?}"))?;
            let name: String = chars[i + 1..end].iter().collect();
            i = end + 1;
            let set = vocab.letters.get(&name).ok_or_else(|| format!("unknown letter class {name}"))?;
            LetterSpec::Set { name, letters: set.clone() }
        }
        Some('[') => {
            let end = find(&chars, i, ']').ok_or_else(|| format!("unclosed '[' in {tok:?}"))?;
            let set: BTreeSet<char> = chars[i + 1..end].iter().copied().collect();
            if set.is_empty() {
                return Err(format!("empty letter set in {tok:?}"));
            }
            for c in &set {
                check_letter(*c, inv)?;
            }
            i = end + 1;
            LetterSpec::Set { name: set.iter().collect(), letters: set }
        }
        Some(c) => {
            check_letter(*c, inv)?;
            i += 1;
            LetterSpec::Set { name: c.to_string(), letters: BTreeSet::from([*c]) }
        }
    };
    let mut required = Vec::new();
    let mut forbidden = Vec::new();
    let mut word_final = false;
    while i < chars.len() {
        match chars[i] {
            '$' if i == chars.len() - 1 => {
                word_final = true;
                i += 1;
            }
            sign @ ('+' | '-') => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len()
                    && (chars[end].is_ascii_alphanumeric() || chars[end] == '_' || chars[end] == '+')
                {
                    if chars[end] == '+' && !(end == start + 1 && chars[start] == 'U') {
                        break;
                    }
                    end += 1;
                }
                let name: String = chars[start..end].iter().collect();
                let atom = parse_atom(&name, vocab, inv)?;
                if sign == '+' {
                    required.push(atom);
                } else {
                    forbidden.push(atom);
                }
                i = end;
            }
            other => return Err(format!("unexpected {other:?} in element {tok:?}")),
        }
    }
    Ok(Element { letters, required, forbidden, negative, word_initial, word_final })
}

fn find(chars: &[char], from: usize, target: char) -> Option<usize> {
    chars[from..].iter().position(|c| *c == target).map(|p| p + from)
}

fn check_letter(c: char, inv: &Inventory) -> Result<(), String> {
    if inv.classify(c).is_some() || unicode_normalization::char::is_combining_mark(c) || c.is_ascii() {
        return Err(format!("{c:?} is not a base letter"));
    }
    Ok(())
}

fn parse_atom(name: &str, vocab: &Vocabulary, inv: &Inventory) -> Result<Atom, String> {
    if let Some(hex) = name.strip_prefix("U+") {
        let cp = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| format!("bad codepoint {name}"))?;
        if inv.classify(cp).is_none() {
            return Err(format!("{name} is not in the mark inventory"));
        }
        return Ok(Atom::Cp(cp));
    }
    if name.is_empty() {
        return Err("empty mark name".into());
    }
    if let Some(c) = MarkClass::from_name(name) {
        return Ok(Atom::Class(c));
    }
    if let Some(cs) = vocab.marks.get(name) {
        return Ok(Atom::Group(name.to_string(), cs.clone()));
    }
    Err(format!("unknown mark class {name}"))
}
