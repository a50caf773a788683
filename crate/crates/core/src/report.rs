//! Human-readable, line-delimited and static HTML renderings of results.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde_json::json;

use crate::corpus::Locator;
use crate::verify::{Residual, VerificationReport, WordDiff};

const FSI: char = '\u{2068}';
const PDI: char = '\u{2069}';

fn banner(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn anchor(l: Locator) -> String {
    l.to_string()
}

/// Rule ids with counts from either pass.
fn census_rows<'a>(
    remove: &'a BTreeMap<String, usize>,
    add: &'a BTreeMap<String, usize>,
) -> Vec<(&'a str, usize, usize)> {
    let ids: BTreeSet<&str> = remove.keys().chain(add.keys()).map(String::as_str).collect();
    ids.into_iter().map(|id| (id, remove.get(id).copied().unwrap_or(0), add.get(id).copied().unwrap_or(0))).collect()
}

pub fn census_text(census: &BTreeMap<String, usize>) -> String {
    let width = census.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (id, n) in census {
        let pad = width - id.chars().count();
        writeln!(s, "{id}{:pad$}  {n}", "").unwrap();
    }
    writeln!(s, "total {}", census.values().sum::<usize>()).unwrap();
    s
}

pub fn census_json(census: &BTreeMap<String, usize>) -> String {
    serde_json::to_string_pretty(census).expect("census serializes") + "\n"
}

pub fn summary_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "round trip: {} ({} mismatching words of {})", banner(r.roundtrip_ok), r.mismatches.len(), r.words)
        .unwrap();
    writeln!(s, "clean:      {} ({} residual marks)", banner(r.clean()), r.residual_marks.len()).unwrap();
    writeln!(s, "morphology coverage: {:.1}%", r.coverage * 100.0).unwrap();
    let rows = census_rows(&r.census, &r.census_add);
    if !rows.is_empty() {
        let width = rows.iter().map(|(id, ..)| id.chars().count()).max().unwrap_or(0).max(4);
        writeln!(s, "\n{:width$}  remove  add", "rule").unwrap();
        for (id, a, b) in rows {
            let pad = width - id.chars().count();
            writeln!(s, "{id}{:pad$}  {a:>6}  {b:>3}", "").unwrap();
        }
    }
    for d in &r.mismatches {
        writeln!(s, "\nmismatch {}\n  expected {}\n  got      {}", d.loc, d.a_hex, d.b_hex).unwrap();
    }
    for x in &r.residual_marks {
        writeln!(s, "residual {} U+{:04X} {}", x.loc, x.cp as u32, x.class).unwrap();
    }
    for w in &r.warnings {
        writeln!(s, "warning: {} at {} creates a match for {}", w.rule, w.loc, w.fed).unwrap();
    }
    s
}

/// One JSON record per line: a summary, then census rows, mismatches,
/// residual marks and feed warnings.
pub fn report_jsonl(r: &VerificationReport) -> String {
    let mut lines = vec![json!({
        "kind": "summary",
        "roundtrip_ok": r.roundtrip_ok,
        "clean": r.clean(),
        "words": r.words,
        "coverage": r.coverage,
        "mismatches": r.mismatches.len(),
        "residual_marks": r.residual_marks.len(),
    })];
    for (id, a, b) in census_rows(&r.census, &r.census_add) {
        lines.push(json!({"kind": "census", "rule": id, "remove": a, "add": b}));
    }
    for d in &r.mismatches {
        lines.push(json!({"kind": "mismatch", "loc": d.loc.to_string(), "expected": d.a, "got": d.b, "expected_hex": d.a_hex, "got_hex": d.b_hex}));
    }
    for x in &r.residual_marks {
        lines.push(json!({"kind": "residual", "loc": x.loc.to_string(), "cp": format!("U+{:04X}", x.cp as u32), "class": x.class}));
    }
    for w in &r.warnings {
        lines.push(json!({"kind": "warning", "rule": w.rule, "fed": w.fed, "loc": w.loc.to_string()}));
    }
    lines.iter().map(|l| l.to_string() + "\n").collect()
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn arabic(s: &str) -> String {
    format!("<span class=\"ar\" dir=\"rtl\" lang=\"ar\">{FSI}{}{PDI}</span>", esc(s))
}

/// A static page: banners, a census table and word tables.
#[derive(Debug, Default)]
pub struct Page<'a> {
    pub title: &'a str,
    pub banners: Vec<(&'a str, bool)>,
    pub census: BTreeMap<String, usize>,
    pub census_add: BTreeMap<String, usize>,
    /// Word pairs, highlighted as failures when `diffs_are_failures`.
    pub diffs: &'a [WordDiff],
    pub diffs_are_failures: bool,
    pub residuals: &'a [Residual],
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em}\
table{border-collapse:collapse;margin:1em 0}\
td,th{border:1px solid #bbb;padding:.3em .6em;vertical-align:top}\
.ar{font-size:1.5em;unicode-bidi:isolate}\
.hex{font-family:monospace;font-size:.8em;color:#555}\
.pass{color:#060}.fail{color:#a00}\
tr.mismatch{background:#fdd}";

pub fn html(p: &Page) -> String {
    let mut s = String::new();
    writeln!(s, "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">").unwrap();
    writeln!(s, "<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>", esc(p.title)).unwrap();
    writeln!(s, "<h1>{}</h1>", esc(p.title)).unwrap();
    for (label, ok) in &p.banners {
        let cls = if *ok { "pass" } else { "fail" };
        writeln!(s, "<p class=\"{cls}\"><strong>{}: {}</strong></p>", esc(label), banner(*ok)).unwrap();
    }
    let rows = census_rows(&p.census, &p.census_add);
    if !rows.is_empty() {
        let two = !p.census_add.is_empty();
        s.push_str("<h2>Rule firings</h2>\n<table>\n<tr><th>rule</th><th>remove</th>");
        s.push_str(if two { "<th>add</th></tr>\n" } else { "</tr>\n" });
        for (id, a, b) in rows {
            write!(s, "<tr><td>{}</td><td>{a}</td>", esc(id)).unwrap();
            if two {
                write!(s, "<td>{b}</td>").unwrap();
            }
            s.push_str("</tr>\n");
        }
        s.push_str("</table>\n");
    }
    if !p.diffs.is_empty() {
        let (head, cls) =
            if p.diffs_are_failures { ("Mismatching words", " class=\"mismatch\"") } else { ("Changed words", "") };
        let (a, b) = if p.diffs_are_failures { ("expected", "got") } else { ("before", "after") };
        writeln!(s, "<h2>{head}</h2>\n<table>\n<tr><th>locator</th><th>{a}</th><th>{b}</th></tr>").unwrap();
        for d in p.diffs {
            let id = anchor(d.loc);
            writeln!(
                s,
                "<tr id=\"{id}\"{cls}><td><a href=\"#{id}\">{id}</a></td><td>{}<div class=\"hex\">{}</div></td><td>{}<div class=\"hex\">{}</div></td></tr>",
                arabic(&d.a),
                d.a_hex,
                arabic(&d.b),
                d.b_hex
            )
            .unwrap();
        }
        s.push_str("</table>\n");
    }
    if !p.residuals.is_empty() {
        s.push_str("<h2>Residual tajwid marks</h2>\n<table>\n<tr><th>locator</th><th>mark</th><th>class</th></tr>\n");
        for x in p.residuals {
            let id = anchor(x.loc);
            writeln!(
                s,
                "<tr class=\"mismatch\"><td><a href=\"#{id}\">{id}</a></td><td>U+{:04X}</td><td>{}</td></tr>",
                x.cp as u32,
                esc(&x.class)
            )
            .unwrap();
        }
        s.push_str("</table>\n");
    }
    s.push_str("</body>\n</html>\n");
    s
}

/// The page for a verification report.
pub fn report_html(r: &VerificationReport) -> String {
    html(&Page {
        title: "Round-trip verification",
        banners: vec![("round trip", r.roundtrip_ok), ("clean", r.clean())],
        census: r.census.clone(),
        census_add: r.census_add.clone(),
        diffs: &r.mismatches,
        diffs_are_failures: true,
        residuals: &r.residual_marks,
    })
}
