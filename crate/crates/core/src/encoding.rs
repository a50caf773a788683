//! Codepoint-exact model of the text: the mark inventory, normalization,
//! grapheme segmentation and letter classes.
//!
//! The inventory lives in `data/marks.tsv` (codepoint hex, class name,
//! display name). [`Inventory::parse`] accepts any table in that format, so a
//! different encoding can be swapped in without touching code.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub const TATWEEL: char = '\u{0640}';
pub const ALIF_WASLA: char = '\u{0671}';

const STANDARD_TABLE: &str = include_str!("../data/marks.tsv");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("unsupported combining mark U+{:04X} at offset {offset}", *.cp as u32)]
    UnknownMark { cp: char, offset: usize },
    #[error("combining mark U+{:04X} at offset {offset} has no base letter", *.cp as u32)]
    OrphanMark { cp: char, offset: usize },
    #[error("mark inventory line {line}: {msg}")]
    Inventory { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarkClass {
    HarakahFatha,
    HarakahDamma,
    HarakahKasra,
    Sukun,
    Shadda,
    TanwinStdF,
    TanwinStdD,
    TanwinStdK,
    TanwinOpenF,
    TanwinOpenD,
    TanwinOpenK,
    MiniMim,
    MiniWaw,
    MiniYa,
    MiniSin,
    MiniAlif,
    MaddSign,
    SilentZero,
    PausalZero,
    HamzaMark,
    OtherMark,
}

/// Marks that must be absent from detajwidised text.
pub const TAJWID_MARKS: [MarkClass; 10] = [
    MarkClass::TanwinOpenF,
    MarkClass::TanwinOpenD,
    MarkClass::TanwinOpenK,
    MarkClass::MiniMim,
    MarkClass::MiniWaw,
    MarkClass::MiniYa,
    MarkClass::MiniSin,
    MarkClass::MaddSign,
    MarkClass::SilentZero,
    MarkClass::PausalZero,
];

impl MarkClass {
    pub const ALL: [MarkClass; 21] = [
        MarkClass::HarakahFatha,
        MarkClass::HarakahDamma,
        MarkClass::HarakahKasra,
        MarkClass::Sukun,
        MarkClass::Shadda,
        MarkClass::TanwinStdF,
        MarkClass::TanwinStdD,
        MarkClass::TanwinStdK,
        MarkClass::TanwinOpenF,
        MarkClass::TanwinOpenD,
        MarkClass::TanwinOpenK,
        MarkClass::MiniMim,
        MarkClass::MiniWaw,
        MarkClass::MiniYa,
        MarkClass::MiniSin,
        MarkClass::MiniAlif,
        MarkClass::MaddSign,
        MarkClass::SilentZero,
        MarkClass::PausalZero,
        MarkClass::HamzaMark,
        MarkClass::OtherMark,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MarkClass::HarakahFatha => "HARAKAH_FATHA",
            MarkClass::HarakahDamma => "HARAKAH_DAMMA",
            MarkClass::HarakahKasra => "HARAKAH_KASRA",
            MarkClass::Sukun => "SUKUN",
            MarkClass::Shadda => "SHADDA",
            MarkClass::TanwinStdF => "TANWIN_STD_F",
            MarkClass::TanwinStdD => "TANWIN_STD_D",
            MarkClass::TanwinStdK => "TANWIN_STD_K",
            MarkClass::TanwinOpenF => "TANWIN_OPEN_F",
            MarkClass::TanwinOpenD => "TANWIN_OPEN_D",
            MarkClass::TanwinOpenK => "TANWIN_OPEN_K",
            MarkClass::MiniMim => "MINI_MIM",
            MarkClass::MiniWaw => "MINI_WAW",
            MarkClass::MiniYa => "MINI_YA",
            MarkClass::MiniSin => "MINI_SIN",
            MarkClass::MiniAlif => "MINI_ALIF",
            MarkClass::MaddSign => "MADD_SIGN",
            MarkClass::SilentZero => "SILENT_ZERO",
            MarkClass::PausalZero => "PAUSAL_ZERO",
            MarkClass::HamzaMark => "HAMZA_MARK",
            MarkClass::OtherMark => "OTHER_MARK",
        }
    }

    pub fn from_name(name: &str) -> Option<MarkClass> {
        MarkClass::ALL.iter().copied().find(|c| c.name() == name)
    }

    pub fn is_tajwid(self) -> bool {
        TAJWID_MARKS.contains(&self)
    }

    /// Position in the canonical mark order.
    pub fn order_rank(self) -> u8 {
        use MarkClass::*;
        match self {
            Shadda => 0,
            HamzaMark => 1,
            HarakahFatha | HarakahDamma | HarakahKasra | Sukun | TanwinStdF | TanwinStdD | TanwinStdK | TanwinOpenF
            | TanwinOpenD | TanwinOpenK => 2,
            MiniMim | MiniWaw | MiniYa | MiniSin | MiniAlif => 3,
            MaddSign => 4,
            SilentZero | PausalZero => 5,
            OtherMark => 6,
        }
    }
}

impl fmt::Display for MarkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct InventoryEntry {
    pub class: MarkClass,
    pub display: String,
}

/// Codepoint → mark class table.
#[derive(Debug, Clone)]
pub struct Inventory {
    entries: BTreeMap<char, InventoryEntry>,
    primary: HashMap<MarkClass, char>,
}

impl Inventory {
    pub fn parse(table: &str) -> Result<Inventory, EncodingError> {
        let mut entries = BTreeMap::new();
        let mut primary = HashMap::new();
        for (i, line) in table.lines().enumerate() {
            let line_no = i + 1;
            let bad = |msg: String| EncodingError::Inventory { line: line_no, msg };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(bad("expected at least two tab-separated columns".into()));
            }
            let hex = cols[0].trim().trim_start_matches("U+");
            let cp = u32::from_str_radix(hex, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| bad(format!("bad codepoint {:?}", cols[0])))?;
            let class =
                MarkClass::from_name(cols[1].trim()).ok_or_else(|| bad(format!("unknown class {:?}", cols[1])))?;
            let display = cols.get(2).map(|s| s.trim().to_string()).unwrap_or_default();
            if entries.insert(cp, InventoryEntry { class, display }).is_some() {
                return Err(bad(format!("U+{:04X} listed twice", cp as u32)));
            }
            primary.entry(class).or_insert(cp);
        }
        Ok(Inventory { entries, primary })
    }

    /// The inventory shipped in `data/marks.tsv`.
    pub fn standard() -> &'static Inventory {
        static INV: OnceLock<Inventory> = OnceLock::new();
        INV.get_or_init(|| Inventory::parse(STANDARD_TABLE).expect("bundled mark table is valid"))
    }

    pub fn classify(&self, cp: char) -> Option<MarkClass> {
        self.entries.get(&cp).map(|e| e.class)
    }

    pub fn entry(&self, cp: char) -> Option<&InventoryEntry> {
        self.entries.get(&cp)
    }

    /// Codepoint inserted when a rule adds a mark of `class`.
    pub fn primary(&self, class: MarkClass) -> Option<char> {
        self.primary.get(&class).copied()
    }

    pub fn codepoints(&self) -> impl Iterator<Item = (char, MarkClass)> + '_ {
        self.entries.iter().map(|(cp, e)| (*cp, e.class))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn is_mark(&self, ch: char) -> bool {
        self.entries.contains_key(&ch)
    }

    pub fn normalize(&self, raw: &str) -> Result<String, EncodingError> {
        let mut out = String::with_capacity(raw.len());
        let mut pending: Vec<Mark> = Vec::new();
        for (offset, ch) in raw.chars().enumerate() {
            if ch == TATWEEL {
                continue;
            }
            if let Some(class) = self.classify(ch) {
                pending.push(Mark { cp: ch, class });
                continue;
            }
            if unicode_normalization::char::is_combining_mark(ch) {
                return Err(EncodingError::UnknownMark { cp: ch, offset });
            }
            flush(&mut pending, &mut out);
            out.push(ch);
        }
        flush(&mut pending, &mut out);
        Ok(out)
    }

    pub fn segment(&self, word: &str) -> Result<Vec<Grapheme>, EncodingError> {
        let mut gs: Vec<Grapheme> = Vec::new();
        for (offset, ch) in word.chars().enumerate() {
            if let Some(class) = self.classify(ch) {
                match gs.last_mut() {
                    Some(g) => g.marks.push(Mark { cp: ch, class }),
                    None => return Err(EncodingError::OrphanMark { cp: ch, offset }),
                }
            } else if unicode_normalization::char::is_combining_mark(ch) {
                return Err(EncodingError::UnknownMark { cp: ch, offset });
            } else {
                gs.push(Grapheme::new(ch));
            }
        }
        Ok(gs)
    }
}

fn flush(pending: &mut Vec<Mark>, out: &mut String) {
    sort_marks(pending);
    out.extend(pending.drain(..).map(|m| m.cp));
}

fn sort_marks(marks: &mut [Mark]) {
    marks.sort_by_key(|m| (m.class.order_rank(), m.cp));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mark {
    pub cp: char,
    pub class: MarkClass,
}

/// One base letter with its attached marks, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grapheme {
    pub base: char,
    pub marks: Vec<Mark>,
}

impl Grapheme {
    pub fn new(base: char) -> Grapheme {
        Grapheme { base, marks: Vec::new() }
    }

    pub fn has(&self, class: MarkClass) -> bool {
        self.marks.iter().any(|m| m.class == class)
    }

    pub fn has_cp(&self, cp: char) -> bool {
        self.marks.iter().any(|m| m.cp == cp)
    }

    pub fn canonicalize(&mut self) {
        sort_marks(&mut self.marks);
    }

    pub fn push_text(&self, out: &mut String) {
        out.push(self.base);
        out.extend(self.marks.iter().map(|m| m.cp));
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        self.push_text(&mut s);
        s
    }
}

pub fn normalize(raw: &str) -> Result<String, EncodingError> {
    Inventory::standard().normalize(raw)
}

pub fn segment(word: &str) -> Result<Vec<Grapheme>, EncodingError> {
    Inventory::standard().segment(word)
}

pub fn classify_mark(cp: char) -> Result<MarkClass, EncodingError> {
    Inventory::standard().classify(cp).ok_or(EncodingError::UnknownMark { cp, offset: 0 })
}

pub fn serialize(gs: &[Grapheme]) -> String {
    let mut s = String::new();
    for g in gs {
        g.push_text(&mut s);
    }
    s
}

/// Base letters only.
pub fn skeleton(gs: &[Grapheme]) -> String {
    gs.iter().map(|g| g.base).collect()
}

/// Skeleton of a text word; marks and taṭwīl dropped.
pub fn skeleton_of(text: &str) -> String {
    let inv = Inventory::standard();
    text.chars().filter(|c| *c != TATWEEL && !inv.is_mark(*c) && !c.is_whitespace()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LetterClass {
    Guttural,
    Nasal,
    Glide,
    LiquidL,
    LiquidR,
    LabialB,
    SunLetter,
    IkhfaSet,
    Other,
}

const GUTTURAL: &[char] = &[
    'ء', 'أ', 'إ', 'ؤ', 'ئ', // hamza and its carriers
    'ه', 'ع', 'خ', 'ح', 'غ',
];
const NASAL: &[char] = &['م', 'ن'];
const GLIDE: &[char] = &['ي', 'ى', 'و'];
const LIQUID_L: &[char] = &['ل'];
const LIQUID_R: &[char] = &['ر'];
const LABIAL_B: &[char] = &['ب'];
const SUN_LETTER: &[char] = &['ت', 'ث', 'د', 'ذ', 'ر', 'ز', 'س', 'ش', 'ص', 'ض', 'ط', 'ظ', 'ل', 'ن'];
const IKHFA_SET: &[char] = &['ت', 'ث', 'ج', 'د', 'ذ', 'ز', 'س', 'ش', 'ص', 'ض', 'ط', 'ظ', 'ف', 'ق', 'ك'];

impl LetterClass {
    pub const ALL: [LetterClass; 9] = [
        LetterClass::Guttural,
        LetterClass::Nasal,
        LetterClass::Glide,
        LetterClass::LiquidL,
        LetterClass::LiquidR,
        LetterClass::LabialB,
        LetterClass::SunLetter,
        LetterClass::IkhfaSet,
        LetterClass::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LetterClass::Guttural => "GUTTURAL",
            LetterClass::Nasal => "NASAL",
            LetterClass::Glide => "GLIDE",
            LetterClass::LiquidL => "LIQUID_L",
            LetterClass::LiquidR => "LIQUID_R",
            LetterClass::LabialB => "LABIAL_B",
            LetterClass::SunLetter => "SUN_LETTER",
            LetterClass::IkhfaSet => "IKHFA_SET",
            LetterClass::Other => "OTHER",
        }
    }

    pub fn from_name(name: &str) -> Option<LetterClass> {
        LetterClass::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// Member letters; empty for `Other`, which is the complement.
    pub fn members(self) -> &'static [char] {
        match self {
            LetterClass::Guttural => GUTTURAL,
            LetterClass::Nasal => NASAL,
            LetterClass::Glide => GLIDE,
            LetterClass::LiquidL => LIQUID_L,
            LetterClass::LiquidR => LIQUID_R,
            LetterClass::LabialB => LABIAL_B,
            LetterClass::SunLetter => SUN_LETTER,
            LetterClass::IkhfaSet => IKHFA_SET,
            LetterClass::Other => &[],
        }
    }

    pub fn contains(self, ch: char) -> bool {
        match self {
            LetterClass::Other => LetterClass::ALL[..8].iter().all(|c| !c.contains(ch)),
            c => c.members().contains(&ch),
        }
    }
}

/// Every class `ch` belongs to.
pub fn letter_classes(ch: char) -> Vec<LetterClass> {
    LetterClass::ALL.iter().copied().filter(|c| c.contains(ch)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cps(s: &str) -> Vec<u32> {
        s.chars().map(|c| c as u32).collect()
    }

    #[test]
    fn classify_tajwid_codepoints() {
        assert_eq!(classify_mark('\u{06DF}').unwrap(), MarkClass::SilentZero);
        assert_eq!(classify_mark('\u{06E0}').unwrap(), MarkClass::PausalZero);
        assert_eq!(classify_mark('\u{08F0}').unwrap(), MarkClass::TanwinOpenF);
        assert_eq!(classify_mark('\u{08F1}').unwrap(), MarkClass::TanwinOpenD);
        assert_eq!(classify_mark('\u{08F2}').unwrap(), MarkClass::TanwinOpenK);
        assert_eq!(classify_mark('\u{0652}').unwrap(), MarkClass::Sukun);
        assert!(classify_mark('\u{0300}').is_err());
    }

    #[test]
    fn strips_tatweel() {
        let raw = "فَجَعَلْنَـٰهُنَّ";
        let out = normalize(raw).unwrap();
        assert!(!out.contains(TATWEEL));
        assert_eq!(out.chars().count(), raw.chars().count() - 1);
        let mut a: Vec<char> = out.chars().collect();
        let mut b: Vec<char> = raw.chars().filter(|c| *c != TATWEEL).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_input() {
        assert_eq!(normalize("").unwrap(), "");
        assert!(segment("").unwrap().is_empty());
        assert_eq!(serialize(&[]), "");
    }

    #[test]
    fn reorders_marks() {
        // kasra before shadda, and madd before mini waw
        let permuted = "\u{0644}\u{0650}\u{0651}\u{0647}\u{06E5}\u{064F}\u{0653}";
        let hand_ordered = "\u{0644}\u{0651}\u{0650}\u{0647}\u{064F}\u{06E5}\u{0653}";
        assert_eq!(cps(&normalize(permuted).unwrap()), cps(hand_ordered));
    }

    #[test]
    fn unknown_combining_mark_is_rejected() {
        let err = normalize("مِ\u{0301}").unwrap_err();
        assert_eq!(err, EncodingError::UnknownMark { cp: '\u{0301}', offset: 2 });
    }

    #[test]
    fn segment_min() {
        let gs = segment("مِنْ").unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[0].base, 'م');
        assert!(gs[0].has(MarkClass::HarakahKasra));
        assert!(gs[1].has(MarkClass::Sukun));
        assert_eq!(serialize(&gs), "مِنْ");
    }

    #[test]
    fn open_dammatan_on_last_grapheme() {
        let gs = segment("عَذَاب\u{08F1}").unwrap();
        assert!(gs.last().unwrap().has(MarkClass::TanwinOpenD));
    }

    #[test]
    fn orphan_mark() {
        assert_eq!(segment("\u{064E}ب").unwrap_err(), EncodingError::OrphanMark { cp: '\u{064E}', offset: 0 });
    }

    #[test]
    fn letter_class_sizes() {
        let gutturals: std::collections::BTreeSet<char> =
            GUTTURAL.iter().map(|c| if "أإؤئ".contains(*c) { 'ء' } else { *c }).collect();
        assert_eq!(gutturals.len(), 6);
        assert_eq!(IKHFA_SET.len(), 15);
        assert!(!LetterClass::SunLetter.contains('ج'));
        assert!(!LetterClass::Other.contains('ب'));
        assert!(!LetterClass::Other.contains('ج'));
        assert!(LetterClass::Other.contains('ا'));
    }

    #[test]
    fn inventory_partitions() {
        let inv = Inventory::standard();
        for (cp, class) in inv.codepoints() {
            assert_eq!(inv.classify(cp), Some(class));
        }
        for class in MarkClass::ALL {
            assert!(inv.primary(class).is_some(), "{class} has no codepoint");
        }
        assert_eq!(inv.primary(MarkClass::MiniMim), Some('\u{06E2}'));
    }

    #[test]
    fn inventory_rejects_duplicates() {
        let err = Inventory::parse("0652\tSUKUN\n0652\tSHADDA\n").unwrap_err();
        assert!(matches!(err, EncodingError::Inventory { line: 2, .. }));
    }
}
