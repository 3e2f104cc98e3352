//! The `typic` command line: corpus validation and statistics, the
//! template-set evaluation suite, baseline benchmarks, template rendering
//! and the annotation service.
//!
//! Every command prints a human-readable report to standard output. With
//! `--out DIR` the same report is also written as JSON (or TSV for
//! `plot-data`). Exit codes: 0 success, 1 invalid input or failed
//! computation, 2 usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use typic_core::analysis::{self, Evaluation};
use typic_core::baselines::{evaluate, BaselineError, Benchmark, ModelKind};
use typic_core::corpus::{corpus_stats, validate_corpus_dir, CorpusError};
use typic_core::metrics::{aggregate_judgments, informativeness_distribution, template_distribution, Fraction, MetricError};
use typic_core::template::load_template_set;
use typic_core::{load_corpus, Corpus, TemplateError, TemplateSet, Tokenizer};
use typic_service::{http, Service, ServiceError};

/// Environment variable naming the default corpus directory.
pub const CORPUS_ENV: &str = "TYPIC_CORPUS_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "typic", version, about = "Slotted templates for diagnostic comments on counterarguments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Corpus directory.
    #[arg(long, global = true, env = CORPUS_ENV)]
    pub corpus: Option<PathBuf>,
    /// Template-set JSON document; the bundled set by default.
    #[arg(long, global = true)]
    pub templates: Option<PathBuf>,
    /// Directory to write machine-readable reports to.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tokenizer for token counts and slot overlap.
    #[arg(long, global = true, default_value = "unicode-words")]
    pub tokenizer: Tokenizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every corpus file and cross-reference; lists all errors.
    Validate,
    /// Corpus statistics and the corpus-level analyses.
    Stats,
    /// Label agreement on double-annotated comments and slot agreement.
    Agreement {
        /// Report label agreement on the overlap pairs only, without the
        /// slot adjudication.
        #[arg(long)]
        overlap_only: bool,
    },
    /// Majority-voted informativeness scores and ordinal α.
    Informativeness,
    /// Template selection and slot filling benchmark on the corpus split.
    Eval {
        #[arg(long, value_enum, default_value = "all")]
        model: ModelArg,
        /// Neighbours (knn) or labels predicted (majority); defaults 3 and 1.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Render a template with the given fillers.
    Render {
        #[arg(long)]
        template: String,
        #[arg(long, default_value = "en")]
        locale: String,
        #[arg(short = 'x')]
        x: Option<String>,
        #[arg(short = 'y')]
        y: Option<String>,
        #[arg(short = 'z')]
        z: Option<String>,
        /// Filler for any other slot name.
        #[arg(long = "slot", value_name = "NAME=TEXT", value_parser = parse_slot)]
        slots: Vec<(String, String)>,
    },
    /// Run the annotation service over HTTP.
    Serve {
        /// Event log; projects are kept in memory only when omitted.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Export an annotation project from a service log as corpus files.
    Export {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        project: String,
        /// Directory the corpus files are written to.
        dest: PathBuf,
    },
    /// Tab-separated tables for the corpus distributions.
    PlotData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Majority,
    Knn,
    Gold,
    Empty,
    All,
}

fn parse_slot(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .ok_or_else(|| format!("expected NAME=TEXT, got {s:?}"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{count} validation error(s) in {}", dir.display())]
    Invalid { dir: PathBuf, count: usize },
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Context<'a> {
    global: &'a GlobalArgs,
    templates: TemplateSet,
}

impl Context<'_> {
    fn corpus_dir(&self) -> Result<&Path, CliError> {
        self.global
            .corpus
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("no corpus directory: pass --corpus or set {CORPUS_ENV}")))
    }

    fn corpus(&self) -> Result<Corpus, CliError> {
        Ok(load_corpus(self.corpus_dir()?, &self.templates)?)
    }

    /// Writes `name` into the `--out` directory when one is given.
    fn save(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let Some(dir) = &self.global.out else {
            return Ok(());
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))
    }

    fn save_json<T: Serialize>(&self, name: &str, report: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
        text.push('\n');
        self.save(name, &text)
    }
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let templates = match &cli.global.templates {
        Some(path) => load_template_set(&fs::read_to_string(path).map_err(io_err(path))?)?,
        None => TemplateSet::bundled(),
    };
    let ctx = Context {
        global: &cli.global,
        templates,
    };
    match &cli.command {
        Command::Validate => validate(&ctx, out),
        Command::Stats => stats(&ctx, out),
        Command::Agreement { overlap_only } => agreement(&ctx, *overlap_only, out),
        Command::Informativeness => informativeness(&ctx, out),
        Command::Eval { model, k } => eval(&ctx, *model, *k, out),
        Command::Render {
            template,
            locale,
            x,
            y,
            z,
            slots,
        } => {
            let mut fillers: Vec<(String, String)> = [("x", x), ("y", y), ("z", z)]
                .into_iter()
                .filter_map(|(name, text)| text.clone().map(|t| (name.to_owned(), t)))
                .collect();
            fillers.extend(slots.iter().cloned());
            render(&ctx, template, locale, &fillers, out)
        }
        Command::Serve { store, addr } => serve(ctx.templates, store.as_deref(), *addr),
        Command::Export { store, project, dest } => export(&ctx, store, project, dest, out),
        Command::PlotData => plot_data(&ctx, out),
    }
}

#[derive(Serialize)]
struct ValidationReport {
    corpus: PathBuf,
    valid: bool,
    errors: Vec<String>,
}

fn validate(ctx: &Context, out: &mut dyn Write) -> Result<(), CliError> {
    let dir = ctx.corpus_dir()?;
    let errors = validate_corpus_dir(dir, &ctx.templates);
    let report = ValidationReport {
        corpus: dir.to_owned(),
        valid: errors.is_empty(),
        errors: errors.iter().map(ToString::to_string).collect(),
    };
    ctx.save_json("validation.json", &report)?;
    if !errors.is_empty() {
        let mut text = String::new();
        for e in &report.errors {
            let _ = writeln!(text, "{e}");
        }
        print(out, &text)?;
        return Err(CliError::Invalid {
            dir: dir.to_owned(),
            count: errors.len(),
        });
    }
    let corpus = load_corpus(dir, &ctx.templates)?;
    let text = format!(
        "ok: {} topics, {} counterarguments, {} comments, {} templated diagnoses, {} judgments\n",
        corpus.topics().len(),
        corpus.counterarguments().len(),
        corpus.comments().len(),
        corpus.diagnoses().len(),
        corpus.judgments().len(),
    );
    print(out, &text)
}

fn fraction_or_na(f: Option<&Fraction>) -> String {
    f.map_or_else(|| "n/a".into(), ToString::to_string)
}

fn stats(ctx: &Context, out: &mut dyn Write) -> Result<(), CliError> {
    let corpus = ctx.corpus()?;
    let s = corpus_stats(&corpus, ctx.global.tokenizer);
    let e = analysis::evaluate_corpus(&corpus);
    let mut t = String::new();
    let _ = writeln!(t, "topics                              {}", s.topics);
    let _ = writeln!(t, "counterarguments                    {}", s.counterarguments);
    let _ = writeln!(t, "avg sentences per argument          {:.1}", s.avg_sentences_per_argument);
    let _ = writeln!(t, "avg tokens per argument ({})  {:.1}", s.tokenizer, s.avg_tokens_per_argument);
    let _ = writeln!(t, "diagnostic comments                 {}", s.comments);
    let _ = writeln!(t, "annotated arguments                 {}", s.annotated_arguments);
    let _ = writeln!(t, "avg comments per annotated argument {:.1}", s.avg_comments_per_annotated_argument);
    let _ = writeln!(t, "templated diagnoses                 {}", s.templated_diagnoses);
    let _ = writeln!(t, "informativeness judgments           {}", s.judgments);
    let _ = writeln!(t, "expressiveness                      {}", fraction_or_na(e.expressiveness.as_ref()));
    write_evaluation_tables(&mut t, &e);
    ctx.save_json(
        "stats.json",
        &serde_json::json!({"corpus": s, "evaluation": e}),
    )?;
    print(out, &t)
}

fn write_evaluation_tables(t: &mut String, e: &Evaluation) {
    if let Some(ex) = &e.extractability {
        let _ = writeln!(t, "filler extractability");
        for (class, f) in ex {
            let _ = writeln!(t, "  {:<33} {f}", class.to_string());
        }
    }
    if let Some(targets) = &e.diagnoses_per_target {
        let _ = writeln!(t, "distinct labels per target");
        for (k, f) in targets {
            let _ = writeln!(t, "  {k:<33} {f}");
        }
    }
}

fn agreement(ctx: &Context, overlap_only: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let corpus = ctx.corpus()?;
    let mut u = analysis::uniqueness(&corpus)?;
    if overlap_only {
        u.slot_agreement = None;
    }
    let mut t = String::new();
    let _ = writeln!(t, "overlap pairs     {}", u.pairs);
    let _ = writeln!(t, "cohen's kappa     {:.3}", u.kappa);
    let _ = writeln!(t, "label agreement   {}", u.label_agreement);
    if !overlap_only {
        let _ = writeln!(t, "slot agreement    {}", fraction_or_na(u.slot_agreement.as_ref()));
    }
    ctx.save_json("agreement.json", &u)?;
    print(out, &t)
}

fn informativeness(ctx: &Context, out: &mut dyn Write) -> Result<(), CliError> {
    let corpus = ctx.corpus()?;
    let i = analysis::informativeness(&corpus)?;
    let mut t = String::new();
    let _ = writeln!(t, "judged diagnoses  {}", i.items);
    let _ = writeln!(t, "judgments         {}", i.judgments);
    let _ = writeln!(t, "judges            {}", i.workers);
    for (score, f) in i.distribution.iter().rev() {
        let _ = writeln!(t, "score {score}           {f}");
    }
    let _ = writeln!(t, "ordinal alpha     {:.3}", i.alpha_ordinal);
    ctx.save_json("informativeness.json", &i)?;
    print(out, &t)
}

fn eval(ctx: &Context, model: ModelArg, k: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    if k == Some(0) {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let majority = ModelKind::Majority { k: k.unwrap_or(1) };
    let knn = ModelKind::Knn { k: k.unwrap_or(3) };
    let kinds = match model {
        ModelArg::Majority => vec![majority],
        ModelArg::Knn => vec![knn],
        ModelArg::Gold => vec![ModelKind::Gold],
        ModelArg::Empty => vec![ModelKind::Empty],
        ModelArg::All => vec![ModelKind::Empty, majority, knn, ModelKind::Gold],
    };
    let corpus = ctx.corpus()?;
    let bench = Benchmark::from_corpus(&corpus, &ctx.templates)?;
    let reports = evaluate(&kinds, &bench, &corpus, &ctx.templates, ctx.global.tokenizer)?;
    let text: Vec<String> = reports.iter().map(|r| r.to_table()).collect();
    ctx.save_json("benchmark.json", &reports)?;
    print(out, &text.join("\n"))
}

fn render(
    ctx: &Context,
    template: &str,
    locale: &str,
    fillers: &[(String, String)],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let t = ctx
        .templates
        .get_str(template)
        .ok_or_else(|| CliError::UnknownTemplate(template.to_owned()))?;
    let text = typic_core::render(t, locale, fillers.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    let fillers: BTreeMap<&str, &str> = fillers.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    ctx.save_json(
        "render.json",
        &serde_json::json!({"template": template, "locale": locale, "fillers": fillers, "text": text}),
    )?;
    print(out, &format!("{text}\n"))
}

fn serve(templates: TemplateSet, store: Option<&Path>, addr: SocketAddr) -> Result<(), CliError> {
    let service = match store {
        Some(path) => Service::open(path, templates)?,
        None => Service::in_memory(templates),
    };
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(io_err(Path::new("<runtime>")))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(io_err(Path::new(&addr.to_string())))?;
        let local = listener.local_addr().map_err(io_err(Path::new(&addr.to_string())))?;
        eprintln!("listening on http://{local}");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        http::serve(listener, Arc::new(service), shutdown)
            .await
            .map_err(io_err(Path::new(&local.to_string())))
    })
}

fn export(ctx: &Context, store: &Path, project: &str, dest: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let service = Service::open(store, ctx.templates.clone())?;
    let export = service.export(project)?;
    export.write_dir(dest).map_err(io_err(dest))?;
    let mut t = String::new();
    let mut counts = BTreeMap::new();
    for (name, contents) in &export.files {
        let records = contents.lines().filter(|l| !l.trim().is_empty()).count();
        let _ = writeln!(t, "{name:<24} {records}");
        counts.insert(name.as_str(), records);
    }
    ctx.save_json(
        "export.json",
        &serde_json::json!({"project": project, "dest": dest, "records": counts}),
    )?;
    print(out, &t)
}

fn plot_data(ctx: &Context, out: &mut dyn Write) -> Result<(), CliError> {
    let corpus = ctx.corpus()?;
    let mut tables: Vec<(&str, String)> = Vec::new();
    if let Ok(h) = template_distribution(corpus.diagnoses()) {
        tables.push(("template_distribution.tsv", h.to_tsv(&ctx.templates)));
    }
    if let Ok(ex) = analysis::extractability(&corpus) {
        let mut s = String::from("extractability\tcount\tfraction\n");
        for (class, f) in ex {
            let _ = writeln!(s, "{class}\t{}\t{:.6}", f.num, f.value());
        }
        tables.push(("extractability.tsv", s));
    }
    if let Ok(targets) = analysis::targets(&corpus) {
        let mut s = String::from("distinct_labels\tgroups\tfraction\n");
        for (k, f) in targets {
            let _ = writeln!(s, "{k}\t{}\t{:.6}", f.num, f.value());
        }
        tables.push(("diagnoses_per_target.tsv", s));
    }
    if let Ok(aggregated) = aggregate_judgments(corpus.judgments()) {
        let mut s = String::from("score\titems\tfraction\n");
        for (score, f) in informativeness_distribution(&aggregated)? {
            let _ = writeln!(s, "{}\t{}\t{:.6}", score.get(), f.num, f.value());
        }
        tables.push(("informativeness.tsv", s));
    }
    if tables.is_empty() {
        return Err(MetricError::EmptyInput.into());
    }
    let mut text = String::new();
    for (i, (name, table)) in tables.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        let _ = writeln!(text, "# {name}");
        text.push_str(table);
        ctx.save(name, table)?;
    }
    print(out, &text)
}
