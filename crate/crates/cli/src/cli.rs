use std::fmt::Write as _;
use std::fs;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ucca_refine::corpus::{
    read_passage, read_refinement_or_empty, write_atomic, write_passage, write_refinement_file,
    CorpusHandle, ParseMode,
};
use ucca_refine::heuristics::{Engine, SUGGESTIONS_SUFFIX};
use ucca_refine::refinement::validate_refinement;
use ucca_refine::stats::render::{render_diff, render_kappa, OutputFormat};
use ucca_refine::stats::{cohen_kappa_labelings, diff_corpora, parse_labeling, Corpus, StatsError};
use ucca_refine::transform::{split_passage, SentenceBoundaries, TransformError};
use ucca_refine::{validate_graph, Passage, ValidationReport};

use crate::report::{json, render_suggestions, StatsOutput};
use crate::service::{self, Session};

#[derive(Parser, Debug)]
#[command(
    name = "ucca-refine",
    version,
    about = "Validate, refine and measure UCCA implicit arguments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Skip unknown XML elements and attributes instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Require a category on every valid implicit Participant.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "tsv")]
    Delimited,
    Json,
}

impl Format {
    fn table(self) -> OutputFormat {
        match self {
            Format::Delimited => OutputFormat::Delimited,
            _ => OutputFormat::Text,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RuleArgs {
    /// Rule file; the bundled rules are used when absent.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long, default_value = "review")]
    pub genre: String,
}

impl RuleArgs {
    fn engine(&self) -> anyhow::Result<Engine> {
        Engine::load(self.rules.as_deref(), &self.genre).context("loading rules")
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check passage files or corpus directories.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Also check refinement sidecars from this directory.
        #[arg(long)]
        refinements: Option<PathBuf>,
    },
    /// Split passages into one passage per sentence.
    Split {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Sentence start offsets, one per line; token sentence indices are
        /// used when absent.
        #[arg(long)]
        boundaries: Option<PathBuf>,
    },
    /// Detect implicit-argument sites and suggest categories.
    Suggest {
        corpus: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
        /// Write one suggestions file per passage into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record suggestions as `suggested` entries in the sidecars of this
        /// directory. Reviewed entries are left alone.
        #[arg(long)]
        apply: Option<PathBuf>,
    },
    /// Corpus counters and category distribution.
    Stats {
        corpus: PathBuf,
        #[arg(long)]
        refinements: Option<PathBuf>,
        /// Add the comparison with the FiGref distribution.
        #[arg(long)]
        compare: bool,
    },
    /// Compare two versions of a corpus.
    Diff {
        original: PathBuf,
        refined: PathBuf,
        #[arg(long)]
        original_refinements: Option<PathBuf>,
        #[arg(long)]
        refinements: Option<PathBuf>,
    },
    /// Cohen's kappa between two `item<TAB>Category` files.
    Kappa { first: PathBuf, second: PathBuf },
    /// Serve the corpus to the review interface.
    Serve {
        corpus: PathBuf,
        /// Sidecar directory; defaults to the corpus directory.
        #[arg(long)]
        refinements: Option<PathBuf>,
        #[command(flatten)]
        rules: RuleArgs,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        #[arg(long, default_value_t = 8350)]
        port: u16,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Violations = 1,
    Failure = 2,
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Exit,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        self.status as i32
    }
}

struct Run<'a> {
    cli: &'a Cli,
    out: String,
    err: String,
    violations: bool,
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut run = Run {
        cli,
        out: String::new(),
        err: String::new(),
        violations: false,
    };
    let result = run.dispatch();
    let status = match result {
        Err(e) => {
            let _ = writeln!(run.err, "error: {e:#}");
            Exit::Failure
        }
        Ok(()) if run.violations => Exit::Violations,
        Ok(()) => Exit::Ok,
    };
    Outcome {
        status,
        stdout: run.out,
        stderr: run.err,
    }
}

fn mode(cli: &Cli) -> ParseMode {
    if cli.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

/// Passages of a single file or of every `*.xml` in a directory.
fn load_passages(path: &Path, mode: ParseMode) -> anyhow::Result<Vec<Passage>> {
    if path.is_dir() {
        let handle = CorpusHandle::open(path, mode)?;
        Ok(handle.load_all()?)
    } else {
        Ok(vec![read_passage(path, mode)?])
    }
}

fn load_corpus(path: &Path, refinements: Option<&Path>, mode: ParseMode) -> anyhow::Result<Corpus> {
    let passages = load_passages(path, mode)?;
    let mut corpus = Corpus::new(passages);
    if let Some(dir) = refinements {
        for p in &corpus.passages {
            let doc = read_refinement_or_empty(dir, p.id())?;
            corpus.refinements.insert(p.id().to_string(), doc);
        }
    }
    Ok(corpus)
}

impl Run<'_> {
    fn dispatch(&mut self) -> anyhow::Result<()> {
        let cli = self.cli;
        match &cli.command {
            Command::Validate { paths, refinements } => {
                self.validate(paths, refinements.as_deref())
            }
            Command::Split {
                input,
                out,
                boundaries,
            } => self.split(input, out, boundaries.as_deref()),
            Command::Suggest {
                corpus,
                rules,
                out,
                apply,
            } => self.suggest(corpus, rules, out.as_deref(), apply.as_deref()),
            Command::Stats {
                corpus,
                refinements,
                compare,
            } => self.stats(corpus, refinements.as_deref(), *compare),
            Command::Diff {
                original,
                refined,
                original_refinements,
                refinements,
            } => self.diff(
                original,
                refined,
                original_refinements.as_deref(),
                refinements.as_deref(),
            ),
            Command::Kappa { first, second } => self.kappa(first, second),
            Command::Serve {
                corpus,
                refinements,
                rules,
                host,
                port,
            } => {
                let session = Session::open(
                    corpus,
                    refinements.as_deref().unwrap_or(corpus),
                    rules.engine()?,
                    mode(cli),
                    cli.strict,
                )?;
                let addr = SocketAddr::new(*host, *port);
                let runtime = tokio::runtime::Runtime::new()?;
                runtime.block_on(service::serve(Arc::new(session), addr))
            }
        }
    }

    fn validate(&mut self, paths: &[PathBuf], refinements: Option<&Path>) -> anyhow::Result<()> {
        let mode = mode(self.cli);
        let mut reports: Vec<ValidationReport> = Vec::new();
        let mut failed = Vec::new();
        for path in paths {
            match load_passages(path, mode) {
                Ok(passages) => {
                    for p in passages {
                        let mut report = validate_graph(&p);
                        if let Some(dir) = refinements {
                            let doc = read_refinement_or_empty(dir, p.id())?;
                            let r = validate_refinement(&p, &doc, self.cli.strict);
                            report.violations.extend(r.violations);
                            report.warnings.extend(r.warnings);
                        }
                        reports.push(report);
                    }
                }
                Err(e) => failed.push(format!("{e:#}")),
            }
        }
        let n_violations: usize = reports.iter().map(|r| r.violations.len()).sum();
        if self.cli.format == Format::Json {
            self.out.push_str(&json(&reports));
        } else {
            for r in &reports {
                for v in &r.violations {
                    let _ = writeln!(self.out, "{}: {v}", r.passage_id);
                }
                for w in &r.warnings {
                    let _ = writeln!(self.out, "{}: warning: {w}", r.passage_id);
                }
            }
            if failed.is_empty() {
                let _ = writeln!(
                    self.out,
                    "{}, {}",
                    plural(reports.len(), "passage"),
                    plural(n_violations, "violation")
                );
            }
        }
        if !failed.is_empty() {
            bail!("{}", failed.join("\n"));
        }
        self.violations = n_violations > 0;
        Ok(())
    }

    fn split(&mut self, input: &Path, out: &Path, boundaries: Option<&Path>) -> anyhow::Result<()> {
        let passages = load_passages(input, mode(self.cli))?;
        if boundaries.is_some() && passages.len() != 1 {
            bail!("--boundaries needs a single passage file");
        }
        fs::create_dir_all(out).with_context(|| out.display().to_string())?;
        let mut logs = Vec::new();
        for p in &passages {
            let b = match boundaries {
                Some(path) => {
                    let text =
                        fs::read_to_string(path).with_context(|| path.display().to_string())?;
                    SentenceBoundaries::parse_index(&text, p.tokens().len())?
                }
                None => SentenceBoundaries::from_tokens(p.tokens()),
            };
            let (parts, log) = match split_passage(p, &b) {
                Ok(x) => x,
                Err(TransformError::InvalidPassage(report)) => {
                    for v in &report.violations {
                        let _ = writeln!(self.out, "{}: {v}", report.passage_id);
                    }
                    self.violations = true;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            for part in &parts {
                let path = out.join(format!("{}.xml", part.id()));
                write_atomic(&path, &write_passage(part)?)?;
            }
            for doc in log.refinements() {
                write_refinement_file(out, &doc)?;
            }
            if self.cli.format != Format::Json {
                let _ = writeln!(
                    self.out,
                    "{}: {}, {}",
                    p.id(),
                    plural(parts.len(), "sentence"),
                    plural(log.len(), "converted remote")
                );
            }
            logs.push(log);
        }
        if self.cli.format == Format::Json {
            self.out.push_str(&json(&logs));
        }
        Ok(())
    }

    fn suggest(
        &mut self,
        corpus: &Path,
        rules: &RuleArgs,
        out: Option<&Path>,
        apply: Option<&Path>,
    ) -> anyhow::Result<()> {
        let engine = rules.engine()?;
        let passages = load_passages(corpus, mode(self.cli))?;
        let mut docs = Vec::new();
        for (p, result) in passages.iter().zip(engine.suggest_all(&passages)) {
            match result {
                Ok(doc) => docs.push(doc),
                Err(e) => {
                    let _ = writeln!(self.err, "{}: {e}", p.id());
                    self.violations = true;
                }
            }
        }
        if let Some(dir) = out {
            fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
            for d in &docs {
                let path = dir.join(format!("{}{SUGGESTIONS_SUFFIX}", d.passage_id));
                write_atomic(&path, d.to_json().as_bytes())?;
            }
        }
        if let Some(dir) = apply {
            for d in &docs {
                let base = read_refinement_or_empty(dir, &d.passage_id)?;
                let mut next = d.refinement(Some(&base));
                if next != base {
                    next.version = base.version + 1;
                    write_refinement_file(dir, &next)?;
                }
            }
        }
        match self.cli.format {
            Format::Json => self.out.push_str(&json(&docs)),
            f => self.out.push_str(&render_suggestions(&docs, f.table())),
        }
        Ok(())
    }

    fn stats(
        &mut self,
        corpus: &Path,
        refinements: Option<&Path>,
        compare: bool,
    ) -> anyhow::Result<()> {
        let corpus = load_corpus(corpus, refinements, mode(self.cli))?;
        let output =
            match StatsOutput::build(&corpus, refinements.is_some(), self.cli.strict, compare) {
                Ok(o) => o,
                Err(e @ StatsError::UncategorizedImplicit { .. }) => {
                    let _ = writeln!(self.out, "{e}");
                    self.violations = true;
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
        match self.cli.format {
            Format::Json => self.out.push_str(&output.to_json()),
            f => self.out.push_str(&output.render(f.table())),
        }
        self.violations = !output.stats.excluded.is_empty();
        Ok(())
    }

    fn diff(
        &mut self,
        original: &Path,
        refined: &Path,
        original_refinements: Option<&Path>,
        refinements: Option<&Path>,
    ) -> anyhow::Result<()> {
        let mode = mode(self.cli);
        let a = load_corpus(original, original_refinements, mode)?;
        let b = load_corpus(refined, refinements, mode)?;
        let report = diff_corpora(&a, &b);
        match self.cli.format {
            Format::Json => self.out.push_str(&json(&report)),
            f => self.out.push_str(&render_diff(&report, f.table())),
        }
        Ok(())
    }

    fn kappa(&mut self, first: &Path, second: &Path) -> anyhow::Result<()> {
        let read = |p: &Path| -> anyhow::Result<_> {
            let text = fs::read_to_string(p).with_context(|| p.display().to_string())?;
            parse_labeling(&text).with_context(|| p.display().to_string())
        };
        let k = cohen_kappa_labelings::<f64>(&read(first)?, &read(second)?)?;
        match self.cli.format {
            Format::Json => self.out.push_str(&json(&k)),
            f => self.out.push_str(&render_kappa(&k, f.table())),
        }
        Ok(())
    }
}
