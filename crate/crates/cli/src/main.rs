//! `tajwid`: batch front end for the tajwid-layer transducer.
//!
//! Exit codes: 0 success, 2 input error, 3 rule-pack error,
//! 4 verification failure.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tajwid_core::corpus::{self, Corpus, InputFormat};
use tajwid_core::engine::{apply_cascade, CompiledPack, Direction, EngineError, Trace};
use tajwid_core::report::{self, Page};
use tajwid_core::rules;
use tajwid_core::verify;

#[derive(Parser)]
#[command(name = "tajwid", version, about = "Remove or restore the tajwid layer of vocalised Qur'anic text")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Strip tajwid marks and restore plain vocalisation.
    Detajwid(RunArgs),
    /// Add the tajwid layer to plain text.
    Tajwid(RunArgs),
    /// Check that ADD(REMOVE(input)) reproduces the input and REMOVE leaves no tajwid marks.
    Roundtrip {
        #[command(flatten)]
        run: RunArgs,
        /// Drop a rule from the restoring pack (fault injection).
        #[arg(long, value_name = "RULE")]
        disable: Vec<String>,
    },
    /// Count rule firings on the REMOVE pass.
    Census(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "pipe")]
    format: Format,
    /// Morphology table (corpus.quran.com layout).
    #[arg(long)]
    morph: Option<PathBuf>,
    /// Directory holding pack.toml and lexicon/; defaults to the built-in pack.
    #[arg(long, env = "TAJWID_RULES_DIR")]
    rules: Option<PathBuf>,
    /// Output directory; without it the corpus or text report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    emit: Vec<Emit>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pipe,
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Emit {
    Text,
    Json,
    Html,
}

enum Failure {
    Input(String),
    Pack(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Pack(_) => 3,
            Failure::Verify(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Pack(m) | Failure::Verify(m) => f.write_str(m),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        match e {
            EngineError::Unaligned { rule } => {
                Failure::Input(format!("rule {rule} needs part-of-speech tags; pass --morph"))
            }
            other => Failure::Pack(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".idx");
    PathBuf::from(s)
}

impl RunArgs {
    fn format(&self) -> InputFormat {
        match self.format {
            Format::Pipe => InputFormat::Pipe,
            Format::Plain => InputFormat::Plain,
        }
    }

    fn emits(&self) -> BTreeSet<Emit> {
        self.emit.iter().copied().collect()
    }

    fn load(&self) -> Result<Corpus> {
        let text = read(&self.input)?;
        let index = match self.format {
            Format::Plain if !text.trim().is_empty() => Some(read(&sidecar(&self.input))?),
            _ => None,
        };
        let c = corpus::load_verses(&text, self.format(), index.as_deref())
            .map_err(|e| Failure::Input(format!("{}: {e}", self.input.display())))?;
        let Some(path) = &self.morph else { return Ok(c) };
        let m =
            corpus::load_morphology(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let (c, cov) = corpus::align_morphology(&c, &m);
        if !cov.untagged.is_empty() {
            eprintln!("morphology covers {} of {} words", cov.tagged, cov.total);
        }
        Ok(c)
    }

    fn pack(&self) -> Result<CompiledPack> {
        let Some(dir) = &self.rules else { return Ok(rules::default_pack()) };
        let spec = rules::load_dir(dir).map_err(|e| Failure::Pack(format!("{}: {e}", dir.display())))?;
        rules::compile_spec(&spec).map_err(|e| Failure::Pack(e.to_string()))
    }

    fn out_dir(&self) -> Result<Option<&Path>> {
        match &self.out {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| Failure::Input(format!("{}: {e}", d.display())))?;
                Ok(Some(d))
            }
            None => Ok(None),
        }
    }

    fn output_name(&self) -> PathBuf {
        PathBuf::from(self.input.file_name().unwrap_or_else(|| "corpus.txt".as_ref()))
    }
}

fn need_out<'a>(dir: Option<&'a Path>, what: &str) -> Result<&'a Path> {
    dir.ok_or_else(|| Failure::Input(format!("--emit {what} needs --out")))
}

/// REMOVE or ADD over a file; writes the corpus, its trace and any requested reports.
fn convert(args: &RunArgs, d: Direction) -> Result<()> {
    let c = args.load()?;
    let pack = args.pack()?;
    if d == Direction::Add {
        let residual = verify::verify_clean(&c);
        if !residual.is_empty() {
            let list: Vec<String> =
                residual.iter().map(|r| format!("{} U+{:04X} {}", r.loc, r.cp as u32, r.class)).collect();
            return Err(Failure::Verify(format!(
                "input already carries tajwid marks; run detajwid first:\n{}",
                list.join("\n")
            )));
        }
    }
    let (out, trace) = apply_cascade(&c, &pack, d)?;
    warn(&trace);
    let (text, index) = out.render(args.format());
    let Some(dir) = args.out_dir()? else {
        print!("{text}");
        return Ok(());
    };
    let name = dir.join(args.output_name());
    write(&name, &text)?;
    if let Some(idx) = index {
        write(&sidecar(&name), &idx)?;
    }
    write(&dir.join("trace.jsonl"), &trace.to_jsonl())?;
    let emits = args.emits();
    let census = trace.census();
    if emits.contains(&Emit::Text) {
        write(&dir.join("census.txt"), &report::census_text(&census))?;
    }
    if emits.contains(&Emit::Json) {
        write(&dir.join("census.json"), &report::census_json(&census))?;
    }
    if emits.contains(&Emit::Html) {
        let diffs = verify::diff(&c, &out).map_err(|e| Failure::Pack(e.to_string()))?;
        let title = match d {
            Direction::Remove => "Tajwid layer removed",
            Direction::Add => "Tajwid layer added",
        };
        let (census, census_add) = match d {
            Direction::Remove => (census, Default::default()),
            Direction::Add => (Default::default(), census),
        };
        let page = Page { title, census, census_add, diffs: &diffs, ..Page::default() };
        write(&dir.join("report.html"), &report::html(&page))?;
    }
    Ok(())
}

fn warn(t: &Trace) {
    for w in &t.warnings {
        eprintln!("warning: {} at {} creates a match for {}", w.rule, w.loc, w.fed);
    }
}

fn roundtrip(args: &RunArgs, disable: &[String]) -> Result<()> {
    let c = args.load()?;
    let pack = args.pack()?;
    let mut add = pack.clone();
    for id in disable {
        if add.rule(id).is_none() {
            return Err(Failure::Input(format!("--disable {id}: no such rule")));
        }
        add = add.without(id);
    }
    let rt = verify::round_trip(&c, &pack, &add)?;
    let r = &rt.report;
    let emits = args.emits();
    let dir = args.out_dir()?;
    if let Some(dir) = dir {
        write(&dir.join("remove.jsonl"), &rt.remove_trace.to_jsonl())?;
        write(&dir.join("add.jsonl"), &rt.add_trace.to_jsonl())?;
    }
    let summary = report::summary_text(r);
    if emits.contains(&Emit::Text) || emits.is_empty() {
        match dir {
            Some(dir) => write(&dir.join("report.txt"), &summary)?,
            None => print!("{summary}"),
        }
    }
    if emits.contains(&Emit::Json) {
        write(&need_out(dir, "json")?.join("report.jsonl"), &report::report_jsonl(r))?;
    }
    if emits.contains(&Emit::Html) {
        write(&need_out(dir, "html")?.join("report.html"), &report::report_html(r))?;
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "verification failed: {} mismatching words, {} residual marks",
            r.mismatches.len(),
            r.residual_marks.len()
        )))
    }
}

fn census(args: &RunArgs) -> Result<()> {
    let c = args.load()?;
    let pack = args.pack()?;
    let (_, trace) = apply_cascade(&c, &pack, Direction::Remove)?;
    warn(&trace);
    let census = trace.census();
    let emits = args.emits();
    let dir = args.out_dir()?;
    if emits.contains(&Emit::Text) || emits.is_empty() {
        let text = report::census_text(&census);
        match dir {
            Some(dir) => write(&dir.join("census.txt"), &text)?,
            None => print!("{text}"),
        }
    }
    if emits.contains(&Emit::Json) {
        let json = report::census_json(&census);
        match dir {
            Some(dir) => write(&dir.join("census.json"), &json)?,
            None => print!("{json}"),
        }
    }
    if emits.contains(&Emit::Html) {
        let page = Page { title: "Rule census", census, ..Page::default() };
        write(&need_out(dir, "html")?.join("census.html"), &report::html(&page))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Detajwid(a) => convert(a, Direction::Remove),
        Cmd::Tajwid(a) => convert(a, Direction::Add),
        Cmd::Roundtrip { run, disable } => roundtrip(run, disable),
        Cmd::Census(a) => census(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tajwid: {f}");
            ExitCode::from(f.code())
        }
    }
}
