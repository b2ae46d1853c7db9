mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeidx::acceptance;
use freeidx::blockers::{barysh_demo, blocking_word, forcing_word, witness_word, BlockerReport};
use freeidx::factor::contains_factor;
use freeidx::graphs::{alpha_path, beta_path, enumerate_covers, permutation_covers};
use freeidx::index::{f_table, index_report, Budget, FillCertificate};
use freeidx::randomwalk::{
    experiment_dsimp, pair_frequency_study, sample_word_with_queries, subword_spectrum, WalkConfig, DEFAULT_ELL,
    DEFAULT_EPSILON,
};
use freeidx::whitehead::{
    has_cut_vertex, is_primitive, is_simple, minimize, whitehead_graph, Minimization, WhiteheadAut,
};
use freeidx::{AGraph, CyclicWord, SpanningData, Word};
use serde::Serialize;
use serde_json::json;

use output::Sink;

#[derive(Parser)]
#[command(name = "freeidx", version, about = "Primitivity, simplicity and non-filling indexes of free group words")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Global {
    /// Emit a JSON document with a run manifest instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    max_partitions: Option<u64>,
    #[arg(long, global = true)]
    max_covers: Option<u64>,
    #[arg(long, global = true)]
    timeout_seconds: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Primitivity, simplicity and non-filling indexes of one word.
    Index(IndexArgs),
    /// Index functions f(n) over all root-free words up to a length.
    Table(TableArgs),
    /// Blocking or forcing words for every cover of a given degree.
    Blocker(BlockerArgs),
    /// The witness word z_d and its audit over all covers up to degree d.
    Witness(WitnessArgs),
    /// Sample a non-backtracking random word.
    Walk(WalkArgs),
    /// Mean two-letter subword frequencies over many random words.
    Pairs(PairsArgs),
    /// Simplicity index of many random words.
    Experiment(ExperimentArgs),
    /// List the based covers (finite-index subgroups) of a given degree.
    Covers(CoversArgs),
    /// Edge-covering words for every cover of a given degree.
    Barysh(WitnessArgs),
    /// Whitehead-minimise a word and decide primitivity and simplicity.
    Minimize(WordArgs),
    /// Apply a saved sequence of Whitehead automorphisms to a word.
    Replay(ReplayArgs),
    /// Run the built-in acceptance checks.
    Selftest,
}

#[derive(Args, Serialize)]
struct WordArgs {
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 2)]
    rank: u32,
}

type IndexArgs = WordArgs;

#[derive(Args, Serialize)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long)]
    nmax: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Alpha,
    Beta,
}

#[derive(Args, Serialize)]
struct BlockerArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long, value_enum, default_value_t = Kind::Alpha)]
    kind: Kind,
    /// Include the per-vertex containment check.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Serialize)]
struct WitnessArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value_t = 2)]
    rank: u32,
}

#[derive(Args, Serialize)]
struct WalkArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add the subword spectrum.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = DEFAULT_ELL)]
    ell: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Words whose occurrences to count.
    #[arg(long)]
    query: Vec<String>,
    /// Leave the sampled word out of the output.
    #[arg(long)]
    no_word: bool,
}

#[derive(Args, Serialize)]
struct PairsArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    dcap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Args, Serialize)]
struct CoversArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long)]
    degree: usize,
    /// One cover per transitive permutation tuple, with repetitions.
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Serialize)]
struct ReplayArgs {
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 2)]
    rank: u32,
    /// JSON file holding a list of automorphisms or a minimisation result.
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] freeidx::Error),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0} self-test criteria failed")]
    Selftest(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(freeidx::Error::ResourceGuard(_)) => 3,
            CliError::Core(_) | CliError::Input(_) => 2,
            CliError::Io(_) => 1,
            CliError::Selftest(_) => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn budget(g: &Global) -> CliResult<Budget> {
    let deadline = match g.timeout_seconds {
        Some(t) if !(t >= 0.0 && t.is_finite()) => {
            return Err(CliError::Input("--timeout-seconds must be a non-negative number".into()))
        }
        Some(t) => Some(Instant::now() + Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(Budget { max_partitions: g.max_partitions, max_covers: g.max_covers, deadline })
}

fn cyclic(text: &str, rank: u32) -> CliResult<CyclicWord> {
    let w = CyclicWord::from_word(&Word::parse(text, rank)?);
    if w.is_empty() {
        return Err(CliError::Input(format!("{text:?} is trivial")));
    }
    Ok(w)
}

fn certificate_name(c: FillCertificate) -> &'static str {
    match c {
        FillCertificate::SimpleInSubgroup => "simple in subgroup",
        FillCertificate::Rauzy3Filling => "all length-3 factors",
        FillCertificate::Undetermined => "undetermined",
    }
}

fn describe_cover(g: &AGraph) -> String {
    let mut s = format!("degree {}:", g.vertex_count());
    for gen in 1..=g.rank() {
        let mut image = vec![0; g.vertex_count()];
        for e in g.edges().iter().filter(|e| e.generator == gen) {
            image[e.from] = e.to;
        }
        let name = freeidx::words::spell(&[freeidx::Letter::new(gen, false)], g.rank());
        let _ = write!(s, " {name} -> {image:?}");
    }
    s
}

#[derive(Serialize)]
struct VertexCheck {
    vertex: usize,
    trace_length: usize,
    contains_target: bool,
}

#[derive(Serialize)]
struct BlockerOutput {
    #[serde(flatten)]
    report: BlockerReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript: Option<Vec<VertexCheck>>,
}

fn transcript(g: &AGraph, kind: Kind, word: &Word) -> CliResult<Vec<VertexCheck>> {
    let sd = SpanningData::new(g)?;
    let target = match kind {
        Kind::Alpha => alpha_path(g, &sd)?,
        Kind::Beta => beta_path(g, &sd)?,
    };
    (0..g.vertex_count())
        .map(|x| {
            let p = g.trace(x, word.letters())?;
            Ok(VertexCheck { vertex: x, trace_length: p.len(), contains_target: contains_factor(&target.edges, &p.edges) })
        })
        .collect()
}

#[derive(Serialize)]
struct MinimizeOutput {
    input: Word,
    minimal: CyclicWord,
    trace: Vec<WhiteheadAut>,
    primitive: bool,
    simple: bool,
    whitehead_graph: freeidx::whitehead::WhiteheadGraph,
    cut_vertex: bool,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum TraceFile {
    List(Vec<WhiteheadAut>),
    Minimization { trace: Vec<WhiteheadAut>, minimal: Option<String> },
    Envelope { payload: Box<TraceFile> },
}

impl TraceFile {
    fn into_parts(self) -> (Vec<WhiteheadAut>, Option<String>) {
        match self {
            TraceFile::List(t) => (t, None),
            TraceFile::Minimization { trace, minimal } => (trace, minimal),
            TraceFile::Envelope { payload } => payload.into_parts(),
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let budget = budget(g)?;
    let sink = Sink { json: g.json, out: g.out.clone(), started: Instant::now() };
    let params = |args: serde_json::Value| {
        json!({
            "args": args,
            "max_partitions": g.max_partitions,
            "max_covers": g.max_covers,
            "timeout_seconds": g.timeout_seconds,
            "jobs": g.jobs,
        })
    };
    match &cli.command {
        Command::Index(a) => {
            let w = cyclic(&a.word, a.rank)?;
            let r = index_report(&w, &budget)?;
            sink.emit("index", &params(json!(a)), vec![], &r, || {
                format!(
                    "word {} (rank {})\nd_prim {}\nd_simp {}\nd_fill in [{}, {}] (lower: {}, upper: {})\nquotients examined {}\n",
                    r.word,
                    a.rank,
                    r.d_prim,
                    r.d_simp,
                    r.d_fill_lower,
                    r.d_fill_upper,
                    certificate_name(r.fill.lower_certificate),
                    certificate_name(r.fill.upper_certificate),
                    r.quotients_examined
                )
            })?;
        }
        Command::Table(a) => {
            let t = f_table(a.nmax, a.rank, &budget)?;
            sink.emit("table", &params(json!(a)), vec![], &t, || {
                let mut s = String::from("n\tcandidates\tf_prim\tf_simp\tf_fill\twitness_prim\twitness_simp\n");
                for e in &t.entries {
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{}\t{}\t[{}, {}]\t{}\t{}",
                        e.n, e.candidates, e.f_prim, e.f_simp, e.f_fill_lower, e.f_fill_upper, e.f_prim_witness, e.f_simp_witness
                    );
                }
                s
            })?;
        }
        Command::Blocker(a) => {
            let covers = freeidx::blockers::cover_census(a.rank, a.degree, &budget)?
                .into_iter()
                .filter(|c| c.vertex_count() == a.degree);
            let mut out = Vec::new();
            for c in covers {
                budget_time(&budget)?;
                let report = match a.kind {
                    Kind::Alpha => blocking_word(&c)?,
                    Kind::Beta => forcing_word(&c)?,
                };
                let transcript = if a.verify { Some(transcript(&c, a.kind, &report.word)?) } else { None };
                out.push(BlockerOutput { report, transcript });
            }
            sink.emit("blocker", &params(json!(a)), vec![], &out, || {
                let mut s = String::new();
                for (i, b) in out.iter().enumerate() {
                    let r = &b.report;
                    let _ = writeln!(s, "cover {i} {}", describe_cover(&r.cover));
                    let _ = writeln!(s, "  length {} (bound {}), verified {}", r.word.len(), r.length_bound, r.verified);
                    let _ = writeln!(s, "  word {}", r.word);
                    for v in b.transcript.iter().flatten() {
                        let _ = writeln!(s, "  from vertex {}: trace length {}, contains target {}", v.vertex, v.trace_length, v.contains_target);
                    }
                }
                s
            })?;
        }
        Command::Witness(a) => {
            let r = witness_word(a.degree, a.rank, &budget)?;
            sink.emit("witness", &params(json!(a)), vec![], &r, || {
                let containing = r.audit.iter().filter(|e| e.contains_word).count();
                format!(
                    "z_{} over {} covers: length {} (bound {})\ncontaining subgroups {}, audit complete {}\n{}\n",
                    r.degree,
                    r.census_size,
                    r.word.len(),
                    r.length_bound,
                    containing,
                    r.complete,
                    r.word
                )
            })?;
        }
        Command::Walk(a) => {
            let cfg = WalkConfig::new(a.rank, a.n, a.seed)?;
            let queries = a.query.iter().map(|q| Word::parse(q, a.rank)).collect::<freeidx::Result<Vec<_>>>()?;
            let sample = sample_word_with_queries(&cfg, &queries)?;
            let spectrum = if a.stats { Some(subword_spectrum(&sample.word, a.ell, a.epsilon)?) } else { None };
            let payload = json!({
                "rng": freeidx::randomwalk::RNG_ALGORITHM,
                "seed": sample.seed,
                "word": if a.no_word { None } else { Some(&sample.word) },
                "stats": sample.stats,
                "spectrum": spectrum,
            });
            sink.emit("walk", &params(json!(a)), vec![a.seed], &payload, || {
                let mut s = String::new();
                if !a.no_word {
                    let _ = writeln!(s, "{}", sample.word);
                }
                let _ = writeln!(s, "length {}, conjugating prefix {}", sample.stats.length, sample.stats.iota_length);
                for (q, c) in &sample.stats.subword_counts {
                    let _ = writeln!(s, "count {q}: {c}");
                }
                if let Some(sp) = &spectrum {
                    let _ = writeln!(
                        s,
                        "subwords of length {}: expected {:.2}, band {:.2}, max deviation {:.2}, all within band {}",
                        sp.sigma_length, sp.expected, sp.band, sp.max_deviation, sp.all_within_band
                    );
                }
                s
            })?;
        }
        Command::Pairs(a) => {
            let r = pair_frequency_study(a.rank, a.n, a.samples, a.seed)?;
            sink.emit("pairs", &params(json!(a)), vec![a.seed], &r, || {
                let mut s = format!("expected frequency {:.6}\n", r.expected);
                for e in &r.entries {
                    let _ = writeln!(s, "{}\t{:.6}\t{:.2e}\t{:+.3}", e.sigma, e.mean, e.standard_error, e.z);
                }
                let _ = writeln!(s, "max |z| {:.3}", r.max_z);
                s
            })?;
        }
        Command::Experiment(a) => {
            let cfg = WalkConfig::new(a.rank, a.n, a.seed)?;
            let r = experiment_dsimp(&cfg, a.trials, a.dcap, &budget)?;
            sink.emit("experiment", &params(json!(a)), vec![a.seed], &r, || {
                let mut s = format!("{} trials, words of length {}, rng {}\n", r.trials, r.length, r.rng);
                for (k, v) in &r.distribution {
                    let _ = writeln!(s, "d_simp {k}: {v}");
                }
                for (k, f) in &r.fraction_at_least {
                    let _ = writeln!(s, "fraction with d_simp >= {k}: {f:.4}");
                }
                let _ = writeln!(s, "proper powers: {:.4}", r.proper_power_fraction);
                s
            })?;
        }
        Command::Covers(a) => {
            let covers: Vec<AGraph> = if a.all {
                let it = permutation_covers(a.rank, a.degree)?;
                if let Some(m) = budget.max_covers {
                    if it.total_tuples() > m {
                        return Err(freeidx::Error::ResourceGuard(format!("more than {m} permutation tuples")).into());
                    }
                }
                it.collect()
            } else {
                let all = enumerate_covers(a.rank, a.degree)?;
                if let Some(m) = budget.max_covers {
                    if all.len() as u64 > m {
                        return Err(freeidx::Error::ResourceGuard(format!("more than {m} covers")).into());
                    }
                }
                all
            };
            let payload = match a.format {
                Format::Dot => json!(covers.iter().map(AGraph::to_dot).collect::<Vec<_>>()),
                _ => json!(covers),
            };
            sink.emit("covers", &params(json!(a)), vec![], &payload, || match a.format {
                Format::Text => covers.iter().enumerate().map(|(i, c)| format!("{i}: {}\n", describe_cover(c))).collect(),
                Format::Dot => covers.iter().map(AGraph::to_dot).collect(),
                Format::Json => serde_json::to_string_pretty(&covers).expect("graphs serialise") + "\n",
            })?;
        }
        Command::Barysh(a) => {
            let entries = barysh_demo(a.degree, a.rank, &budget)?;
            sink.emit("barysh", &params(json!(a)), vec![], &entries, || {
                entries
                    .iter()
                    .map(|e| format!("{}\n  {} covers every edge: {}\n", describe_cover(&e.cover), e.word, e.covers_from_every_vertex))
                    .collect()
            })?;
        }
        Command::Minimize(a) => {
            let w = Word::parse(&a.word, a.rank)?;
            let m = minimize(&w)?;
            let wg = whitehead_graph(&m.minimal)?;
            let payload = MinimizeOutput {
                primitive: is_primitive(&w)?,
                simple: is_simple(&w)?,
                cut_vertex: has_cut_vertex(&wg),
                input: w,
                minimal: m.minimal,
                trace: m.trace,
                whitehead_graph: wg,
            };
            sink.emit("minimize", &params(json!(a)), vec![], &payload, || {
                format!(
                    "minimal {} (length {}, {} steps)\nprimitive {}\nsimple {}\ncut vertex in Whitehead graph {}\n",
                    payload.minimal,
                    payload.minimal.len(),
                    payload.trace.len(),
                    payload.primitive,
                    payload.simple,
                    payload.cut_vertex
                )
            })?;
        }
        Command::Replay(a) => {
            let w = Word::parse(&a.word, a.rank)?;
            let text = fs::read_to_string(&a.trace)?;
            let file: TraceFile =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", a.trace.display())))?;
            let (trace, expected) = file.into_parts();
            if let Some(t) = trace.iter().find(|t| t.rank() != a.rank) {
                return Err(CliError::Input(format!("automorphism of rank {} applied in rank {}", t.rank(), a.rank)));
            }
            let image = Minimization::replay(&trace, &w);
            let matches = expected.map(|e| e == image.to_string());
            let payload = json!({ "input": w, "steps": trace.len(), "image": image, "matches_recorded_minimal": matches });
            sink.emit("replay", &params(json!(a)), vec![], &payload, || {
                let mut s = format!("{image}\n");
                if let Some(m) = matches {
                    let _ = writeln!(s, "matches recorded minimal form: {m}");
                }
                s
            })?;
        }
        Command::Selftest => {
            let outcomes = acceptance::run_all();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            sink.emit("selftest", &params(json!({})), vec![], &outcomes, || {
                let mut s = String::new();
                for o in &outcomes {
                    let tag = if o.passed { "PASS" } else { "FAIL" };
                    let _ = writeln!(s, "[{tag}] {}. {} ({:.2} s): {}", o.id, o.name, o.seconds, o.detail);
                }
                s
            })?;
            if failed > 0 {
                return Err(CliError::Selftest(failed));
            }
        }
    }
    Ok(())
}

fn budget_time(b: &Budget) -> CliResult<()> {
    match b.deadline {
        Some(d) if Instant::now() > d => Err(freeidx::Error::ResourceGuard("time limit reached".into()).into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("freeidx: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
