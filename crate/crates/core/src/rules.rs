//! The default tajwīd rule pack.
//!
//! Rules live in `rules/pack.toml`, word and locator lists in
//! `rules/lexicon/`. Both are embedded at build time; a directory with the
//! same layout can be loaded instead with [`load_dir`].

use std::path::Path;

use crate::encoding::{Inventory, LetterClass};
use crate::engine::pack::{self, Lexicon, PackError, PackSpec};
use crate::engine::{compile_with, BiRule, CompileError, CompiledPack, RuleGroup};

pub const PACK_TOML: &str = include_str!("../rules/pack.toml");

const LEXICON: &[(&str, &str)] = &[
    ("HU.except", include_str!("../rules/lexicon/HU.except")),
    ("MADD-hmz-sp-1.forms", include_str!("../rules/lexicon/MADD-hmz-sp-1.forms")),
    ("MADD-hmz-sp-2.forms", include_str!("../rules/lexicon/MADD-hmz-sp-2.forms")),
    ("MADD-hmz-sp-3.forms", include_str!("../rules/lexicon/MADD-hmz-sp-3.forms")),
    ("MADD-hmz-sp-4.forms", include_str!("../rules/lexicon/MADD-hmz-sp-4.forms")),
    ("MADD-hmz.exclude", include_str!("../rules/lexicon/MADD-hmz.exclude")),
    ("MADD-sp-1.forms", include_str!("../rules/lexicon/MADD-sp-1.forms")),
    ("MADD-sp-2.forms", include_str!("../rules/lexicon/MADD-sp-2.forms")),
    ("MADD-sp-3.forms", include_str!("../rules/lexicon/MADD-sp-3.forms")),
    ("MADD-sp-4.forms", include_str!("../rules/lexicon/MADD-sp-4.forms")),
    ("MADD-sp-5.forms", include_str!("../rules/lexicon/MADD-sp-5.forms")),
    ("MADD-sp-6.forms", include_str!("../rules/lexicon/MADD-sp-6.forms")),
    ("MADD-sp-7.forms", include_str!("../rules/lexicon/MADD-sp-7.forms")),
    ("MADD-sp-8.forms", include_str!("../rules/lexicon/MADD-sp-8.forms")),
    ("MADD-sp-9.forms", include_str!("../rules/lexicon/MADD-sp-9.forms")),
    ("MADD-sp-A.forms", include_str!("../rules/lexicon/MADD-sp-A.forms")),
    ("MADD-sp-B.forms", include_str!("../rules/lexicon/MADD-sp-B.forms")),
    ("MADD-sp-C.forms", include_str!("../rules/lexicon/MADD-sp-C.forms")),
    ("MADD-sp-D.forms", include_str!("../rules/lexicon/MADD-sp-D.forms")),
    ("MTJNS-Tt.only", include_str!("../rules/lexicon/MTJNS-Tt.only")),
    ("MTJNS-lr.except", include_str!("../rules/lexicon/MTJNS-lr.except")),
    ("N2.2.A.except", include_str!("../rules/lexicon/N2.2.A.except")),
    ("P-sil-1.forms", include_str!("../rules/lexicon/P-sil-1.forms")),
    ("P-sil-2.except", include_str!("../rules/lexicon/P-sil-2.except")),
    ("P-sil-2.forms", include_str!("../rules/lexicon/P-sil-2.forms")),
    ("Sil-2.forms", include_str!("../rules/lexicon/Sil-2.forms")),
    ("Sil-4.only", include_str!("../rules/lexicon/Sil-4.only")),
    ("Sil-5.forms", include_str!("../rules/lexicon/Sil-5.forms")),
    ("Sil-6.forms", include_str!("../rules/lexicon/Sil-6.forms")),
    ("Sil-7.forms", include_str!("../rules/lexicon/Sil-7.forms")),
    ("Sil-8.forms", include_str!("../rules/lexicon/Sil-8.forms")),
    ("Sil-9.forms", include_str!("../rules/lexicon/Sil-9.forms")),
    ("Sil-A.forms", include_str!("../rules/lexicon/Sil-A.forms")),
    ("Sil-B.forms", include_str!("../rules/lexicon/Sil-B.forms")),
    ("Sil-C.forms", include_str!("../rules/lexicon/Sil-C.forms")),
    ("Sil-D.forms", include_str!("../rules/lexicon/Sil-D.forms")),
    ("Sil-E.forms", include_str!("../rules/lexicon/Sil-E.forms")),
    ("Sil-F.forms", include_str!("../rules/lexicon/Sil-F.forms")),
    ("Sil-G.forms", include_str!("../rules/lexicon/Sil-G.forms")),
    ("allah.exclude", include_str!("../rules/lexicon/allah.exclude")),
    ("glide-exempt.forms", include_str!("../rules/lexicon/glide-exempt.forms")),
    ("min-u-1.forms", include_str!("../rules/lexicon/min-u-1.forms")),
    ("min-u-2.forms", include_str!("../rules/lexicon/min-u-2.forms")),
    ("min-u-3.forms", include_str!("../rules/lexicon/min-u-3.forms")),
    ("min-u-4.forms", include_str!("../rules/lexicon/min-u-4.forms")),
    ("min-u-5.forms", include_str!("../rules/lexicon/min-u-5.forms")),
    ("min-u-6.forms", include_str!("../rules/lexicon/min-u-6.forms")),
    ("min-u-7.forms", include_str!("../rules/lexicon/min-u-7.forms")),
    ("min-u-8.forms", include_str!("../rules/lexicon/min-u-8.forms")),
    ("min-y-1.only", include_str!("../rules/lexicon/min-y-1.only")),
    ("min-y-2.forms", include_str!("../rules/lexicon/min-y-2.forms")),
    ("min-y-3.forms", include_str!("../rules/lexicon/min-y-3.forms")),
    ("min-y-4.forms", include_str!("../rules/lexicon/min-y-4.forms")),
    ("min-y-5.forms", include_str!("../rules/lexicon/min-y-5.forms")),
    ("min-y-6.forms", include_str!("../rules/lexicon/min-y-6.forms")),
    ("min-y-7.forms", include_str!("../rules/lexicon/min-y-7.forms")),
    ("min-y-8.forms", include_str!("../rules/lexicon/min-y-8.forms")),
    ("min-y-9.forms", include_str!("../rules/lexicon/min-y-9.forms")),
    ("min-y-A.forms", include_str!("../rules/lexicon/min-y-A.forms")),
    ("sakt-1.forms", include_str!("../rules/lexicon/sakt-1.forms")),
    ("sakt-2.only", include_str!("../rules/lexicon/sakt-2.only")),
    ("sakt-3.only", include_str!("../rules/lexicon/sakt-3.only")),
    ("t-assim.forms", include_str!("../rules/lexicon/t-assim.forms")),
];

/// Family of rule ids sharing a group and the letter classes they draw on.
#[derive(Debug, Clone, Copy)]
pub struct RuleGroupSpec {
    pub name: &'static str,
    pub group: RuleGroup,
    pub members: &'static [&'static str],
    pub letter_classes: &'static [LetterClass],
}

/// Rules whose two sides are equal: kept for completeness, never fire.
pub const IDENTITY_IDS: [&str; 2] = ["N1", "M3"];

pub const INVENTORY: [RuleGroupSpec; 6] = [
    RuleGroupSpec {
        name: "ASSIM-N",
        group: RuleGroup::Assim,
        members: &[
            "N2.1.1.A", "N2.1.1.B", "N2.1.1.C", "N2.1.1.D", "N2.1.2.A", "N2.1.2.B", "N2.1.2.C", "N2.1.2.D", "N2.2.A",
            "N2.2.B", "N2.2.C", "N2.2.D", "N3.A", "N3.B", "N3.C", "N3.D", "N4.A", "N4.B", "N4.C", "N4.D",
        ],
        letter_classes: &[
            LetterClass::Guttural,
            LetterClass::Nasal,
            LetterClass::Glide,
            LetterClass::LiquidL,
            LetterClass::LiquidR,
            LetterClass::LabialB,
            LetterClass::IkhfaSet,
        ],
    },
    RuleGroupSpec {
        name: "ASSIM-M",
        group: RuleGroup::Assim,
        members: &["M1", "M2"],
        letter_classes: &[LetterClass::Nasal, LetterClass::LabialB],
    },
    RuleGroupSpec {
        name: "ASSIM-L",
        group: RuleGroup::Assim,
        members: &["SHAMS"],
        letter_classes: &[LetterClass::SunLetter],
    },
    RuleGroupSpec {
        name: "ASSIM-C",
        group: RuleGroup::Assim,
        members: &[
            "MITHL-bb",
            "MITHL-dd",
            "MITHL-kk",
            "MITHL-ll",
            "MITHL-yy",
            "MITHL-hh",
            "MITHL-ww",
            "MITHL-tt",
            "MITHL-rr",
            "MITHL-ḏḏ",
            "MITHL-ff",
            "MITHL-33",
            "MTJNS-dt",
            "MTJNS-td",
            "MTJNS-tT",
            "MTJNS-Tt",
            "MTJNS-tḏ",
            "MTJNS-lr",
            "MTJNS-ḏḏ",
            "MTJNS-qk",
            "MTJNS-bm",
            "t-assim",
        ],
        letter_classes: &[LetterClass::SunLetter],
    },
    RuleGroupSpec {
        name: "ELONG",
        group: RuleGroup::Elong,
        members: &[
            "MADD-hmz",
            "MADD-hmz-A-sil",
            "MADD-hmz-sp-1",
            "MADD-hmz-sp-2",
            "MADD-hmz-sp-3",
            "MADD-hmz-sp-4",
            "MADD-lzm",
            "MADD-shdd-skn",
            "MADD-sp-1",
            "MADD-sp-2",
            "MADD-sp-3",
            "MADD-sp-4",
            "MADD-sp-5",
            "MADD-sp-6",
            "MADD-sp-7",
            "MADD-sp-8",
            "MADD-sp-9",
            "MADD-sp-A",
            "MADD-sp-B",
            "MADD-sp-C",
            "MADD-sp-D",
            "HU",
            "min-u-1",
            "min-u-2",
            "min-u-3",
            "min-u-4",
            "min-u-5",
            "min-u-6",
            "min-u-7",
            "min-u-8",
            "HI",
            "min-y-1",
            "min-y-2",
            "min-y-3",
            "min-y-4",
            "min-y-5",
            "min-y-6",
            "min-y-7",
            "min-y-8",
            "min-y-9",
            "min-y-A",
        ],
        letter_classes: &[LetterClass::Glide],
    },
    RuleGroupSpec {
        name: "PAUSAL",
        group: RuleGroup::Pausal,
        members: &[
            "Sil-1", "Sil-2", "Sil-3", "Sil-4", "Sil-5", "Sil-6", "Sil-7", "Sil-8", "Sil-9", "Sil-A", "Sil-B", "Sil-C",
            "Sil-D", "Sil-E", "Sil-F", "Sil-G", "P-sil-1", "P-sil-2", "sakt-1", "sakt-2", "sakt-3",
        ],
        letter_classes: &[],
    },
];

/// Every id in the inventory, identity rules excluded.
pub fn inventory_ids() -> Vec<&'static str> {
    INVENTORY.iter().flat_map(|g| g.members.iter().copied()).collect()
}

/// Group name (ASSIM-N, ELONG, ...) of a rule id.
pub fn family_of(id: &str) -> Option<&'static str> {
    if IDENTITY_IDS.contains(&id) {
        return Some(if id == "M3" { "ASSIM-M" } else { "ASSIM-N" });
    }
    INVENTORY.iter().find(|g| g.members.contains(&id)).map(|g| g.name)
}

/// The embedded lexicon bundle.
pub fn exception_lexicon() -> Lexicon {
    Lexicon::from_entries(LEXICON.iter().copied())
}

pub fn default_spec() -> PackSpec {
    pack::parse_pack(PACK_TOML, &exception_lexicon()).expect("embedded pack parses")
}

/// Loads `pack.toml` and `lexicon/` from a directory.
pub fn load_dir(dir: &Path) -> Result<PackSpec, PackError> {
    let path = dir.join("pack.toml");
    let text = std::fs::read_to_string(&path).map_err(|source| PackError::Io { path, source })?;
    pack::parse_pack(&text, &Lexicon::from_dir(&dir.join("lexicon"))?)
}

pub fn compile_spec(spec: &PackSpec) -> Result<CompiledPack, CompileError> {
    compile_with(&spec.rules, &spec.vocabulary, Inventory::standard())
}

pub fn default_pack() -> CompiledPack {
    compile_spec(&default_spec()).expect("embedded pack compiles")
}

fn of_group(g: RuleGroup) -> Vec<BiRule> {
    default_spec().rules.into_iter().filter(|r| r.group == g).collect()
}

pub fn assimilation_rules() -> Vec<BiRule> {
    of_group(RuleGroup::Assim)
}

pub fn elongation_rules() -> Vec<BiRule> {
    of_group(RuleGroup::Elong)
}

pub fn pausal_rules() -> Vec<BiRule> {
    of_group(RuleGroup::Pausal)
}
