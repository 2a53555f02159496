use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use groundness::engine::{analyze, Analysis, Options, Report, Strategy, Switches};
use groundness::frontend::{load, parse_entry, AbstractOptions, EntrySpec, Loaded};
use groundness::graphs::magic_graph;
use groundness::Domain;

mod selfcheck;

#[derive(Parser, Debug)]
#[command(name = "groundness", version, about = "Groundness analysis for definite logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one program.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        cfg: Config,
        /// Write the magic dependency graph in DOT format to this file.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Analyze every .pl file in a directory.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        cfg: Config,
    },
    /// Check the Boolean operations against brute-force models.
    Selfcheck {
        /// Random pairs to test.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct Config {
    #[arg(long, default_value = "def-gep")]
    domain: Domain,
    /// ord, eim, scm, bom, scc, dyd, or matrix for all of them.
    #[arg(long, default_value = "ord")]
    strategy: String,
    /// Letters from e, g, p, r, t; "-" for none; sweep for the standard ten.
    #[arg(long, default_value = "egpr")]
    switches: String,
    /// Entry call pattern such as "p(g,any)"; repeatable. Overrides directives.
    #[arg(long)]
    entry: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Treat constraint blocks {...} as grounding their variables.
    #[arg(long)]
    assume_clpr_ground: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Usage problems found after clap has parsed the flags.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

struct Plan {
    strategies: Vec<Strategy>,
    switches: Vec<Switches>,
    entries: Option<Vec<EntrySpec>>,
}

impl Config {
    fn plan(&self) -> Result<Plan> {
        let strategies = if self.strategy == "matrix" {
            Strategy::ALL.to_vec()
        } else {
            vec![self.strategy.parse().map_err(Usage)?]
        };
        let switches = if self.switches == "sweep" {
            Switches::sweep()
        } else {
            vec![self.switches.parse().map_err(Usage)?]
        };
        let entries = if self.entry.is_empty() {
            None
        } else {
            let parsed: groundness::Result<Vec<EntrySpec>> = self.entry.iter().map(|e| parse_entry(e)).collect();
            Some(parsed.map_err(|e| Usage(e.to_string()))?)
        };
        Ok(Plan { strategies, switches, entries })
    }

    fn abstract_options(&self) -> AbstractOptions {
        AbstractOptions { assume_clpr_ground: self.assume_clpr_ground }
    }

    fn is_grid(&self, plan: &Plan) -> bool {
        plan.strategies.len() > 1 || plan.switches.len() > 1
    }
}

fn read_program(path: &Path, cfg: &Config, entries: &Option<Vec<EntrySpec>>) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut l = load(&text, cfg.abstract_options()).with_context(|| path.display().to_string())?;
    if let Some(es) = entries {
        for e in es {
            if l.program.find(&e.pred, e.modes.len()).is_none() {
                bail!("{}: unknown entry predicate {e}", path.display());
            }
        }
        l.entries = es.clone();
    }
    Ok(l)
}

fn program_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn render_report(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "program   {}", r.program);
    let _ = writeln!(s, "domain    {}", r.domain);
    let _ = writeln!(s, "strategy  {}", r.strategy);
    let _ = writeln!(s, "switches  {}", r.switches);
    let _ = writeln!(s, "entries   {}", r.entries.join(" "));
    s.push_str("call patterns\n");
    for p in &r.call_patterns {
        let _ = writeln!(s, "  {p}");
    }
    s.push_str("answer patterns\n");
    for p in &r.answer_patterns {
        let _ = writeln!(s, "  {p}");
    }
    let _ = writeln!(s, "ground args      {}", r.ground_args);
    let _ = writeln!(s, "updates          {}", r.updates.total);
    for (k, n) in &r.updates.per_key {
        let _ = writeln!(s, "  {k:<30} {n}");
    }
    let chain: Vec<String> = r.chain_histogram.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "chain histogram  {}", chain.join(" "));
    let c = &r.counters;
    let _ = writeln!(
        s,
        "counters         meet {} join {} joinDiff {} equiv {} project {} rename {} projFilt {} projElim {}",
        c.meet, c.join, c.join_diff, c.equiv, c.project, c.rename, c.proj_filt, c.proj_elim
    );
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

/// Pairs of runs whose tables differ, as readable lines.
fn disagreements(runs: &[Analysis]) -> Vec<String> {
    let mut out = Vec::new();
    if let Some((first, rest)) = runs.split_first() {
        for a in rest {
            let d = a.differences(first);
            if !d.is_empty() {
                out.push(format!(
                    "{} {} differs from {} {} on {} keys",
                    a.options.strategy,
                    a.options.switches,
                    first.options.strategy,
                    first.options.switches,
                    d.len()
                ));
            }
        }
    }
    out
}

fn cmd_analyze(file: &Path, cfg: &Config, dot: Option<&Path>) -> Result<bool> {
    let plan = cfg.plan()?;
    let l = read_program(file, cfg, &plan.entries)?;
    if let Some(path) = dot {
        std::fs::write(path, magic_graph(&l.program).to_dot()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let name = program_name(file);
    let mut runs = Vec::new();
    for &strategy in &plan.strategies {
        for &switches in &plan.switches {
            runs.push(analyze(&l.program, &l.entries, Options { domain: cfg.domain, strategy, switches })?);
        }
    }
    let reports: Vec<Report> = runs.iter().map(|a| a.report(&name, &l.program, &l.entries)).collect();
    let bad = disagreements(&runs);
    if !cfg.is_grid(&plan) {
        match cfg.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&reports[0])?),
            Format::Text => print!("{}", render_report(&reports[0])),
        }
        return Ok(true);
    }
    match cfg.format {
        Format::Json => {
            let v = json!({ "reports": reports, "agreement": bad.is_empty(), "disagreements": bad });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Text => {
            for r in &reports {
                println!("{}", render_report(r));
            }
            if bad.is_empty() {
                println!("agreement: all {} runs produce equivalent tables", runs.len());
            } else {
                for b in &bad {
                    println!("disagreement: {b}");
                }
            }
        }
    }
    Ok(bad.is_empty())
}

struct Row {
    program: String,
    size: usize,
    abstraction: Duration,
    fixpoint: Duration,
    def: usize,
    epos: usize,
    /// Per grid column: total updates, counters and time.
    cells: Vec<(Options, Analysis, Duration)>,
    agree: bool,
}

impl Row {
    fn loss(&self) -> f64 {
        if self.def == 0 {
            0.0
        } else {
            100.0 * (self.def - self.epos) as f64 / self.def as f64
        }
    }
}

fn corpus_row(path: &Path, cfg: &Config, plan: &Plan) -> Result<Row> {
    let t = Instant::now();
    let l = read_program(path, cfg, &plan.entries)?;
    let abstraction = t.elapsed();
    let (strategy, switches) = (plan.strategies[0], plan.switches[0]);
    let t = Instant::now();
    let def = analyze(&l.program, &l.entries, Options { domain: Domain::DefGep, strategy, switches })?;
    let fixpoint = t.elapsed();
    let epos = analyze(&l.program, &l.entries, Options { domain: Domain::EPos, strategy, switches })?;
    let mut cells = Vec::new();
    if cfg.is_grid(plan) {
        for &strategy in &plan.strategies {
            for &switches in &plan.switches {
                let o = Options { domain: cfg.domain, strategy, switches };
                let t = Instant::now();
                let a = analyze(&l.program, &l.entries, o)?;
                cells.push((o, a, t.elapsed()));
            }
        }
    }
    let runs: Vec<Analysis> = cells.iter().map(|c| c.1.clone()).collect();
    Ok(Row {
        program: program_name(path),
        size: l.program.size(),
        abstraction,
        fixpoint,
        def: def.ground_args(&l.program),
        epos: epos.ground_args(&l.program),
        agree: disagreements(&runs).is_empty(),
        cells,
    })
}

fn column_name(o: &Options, plan: &Plan) -> String {
    match (plan.strategies.len() > 1, plan.switches.len() > 1) {
        (true, true) => format!("{}/{}", o.strategy, o.switches),
        (true, false) => o.strategy.to_string(),
        _ => o.switches.to_string(),
    }
}

fn ms(d: Duration) -> String {
    format!("{:.2}", d.as_secs_f64() * 1000.0)
}

fn cmd_corpus(dir: &Path, cfg: &Config) -> Result<bool> {
    let plan = cfg.plan()?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pl"))
        .collect();
    files.sort();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for f in &files {
        match corpus_row(f, cfg, &plan) {
            Ok(r) => rows.push(r),
            Err(e) => errors.push(format!("{}: {e:#}", program_name(f))),
        }
    }
    let grid = cfg.is_grid(&plan);
    match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "program": r.program,
                        "size": r.size,
                        "groundArgs": { "def-gep": r.def, "epos": r.epos },
                        "precisionLoss": (r.loss() * 10.0).round() / 10.0,
                    });
                    if grid {
                        v["grid"] = r
                            .cells
                            .iter()
                            .map(|(o, a, _)| {
                                json!({
                                    "strategy": o.strategy,
                                    "switches": o.switches,
                                    "updates": a.total_updates(),
                                    "counters": a.counters,
                                })
                            })
                            .collect();
                        v["agreement"] = json!(r.agree);
                    }
                    v
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({ "rows": rows, "errors": errors }))?);
        }
        Format::Text => {
            if grid {
                // Updates per strategy; time per switch setting.
                let by_switches = plan.strategies.len() == 1;
                let mut head = format!("{:<18}", "program");
                if let Some(r) = rows.first() {
                    for (o, _, _) in &r.cells {
                        let _ = write!(head, " {:>9}", column_name(o, &plan));
                    }
                }
                println!("{head} agree");
                for r in &rows {
                    let mut line = format!("{:<18}", r.program);
                    for (_, a, t) in &r.cells {
                        let cell = if by_switches { ms(*t) } else { a.total_updates().to_string() };
                        let _ = write!(line, " {cell:>9}");
                    }
                    println!("{line} {}", if r.agree { "yes" } else { "NO" });
                }
                println!("({})", if by_switches { "fixpoint time in ms" } else { "total updates" });
            } else {
                println!(
                    "{:<18} {:>5} {:>9} {:>9} {:>8} {:>5} {:>7}",
                    "program", "size", "abs ms", "fix ms", "def-gep", "epos", "loss %"
                );
                for r in &rows {
                    println!(
                        "{:<18} {:>5} {:>9} {:>9} {:>8} {:>5} {:>7.1}",
                        r.program,
                        r.size,
                        ms(r.abstraction),
                        ms(r.fixpoint),
                        r.def,
                        r.epos,
                        r.loss()
                    );
                }
            }
            for e in &errors {
                eprintln!("error: {e}");
            }
        }
    }
    Ok(rows.iter().all(|r| r.agree))
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { file, cfg, dot } => cmd_analyze(file, cfg, dot.as_deref()),
        Command::Corpus { dir, cfg } => cmd_corpus(dir, cfg),
        Command::Selfcheck { samples, seed } => selfcheck::run(*samples, *seed),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
