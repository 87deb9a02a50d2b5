//! hatlab command-line front end.
//!
//! One subcommand per library capability: validate, conditions, run,
//! evaluate, search, theorem, hunt. Data output is a single JSON document
//! (JSON lines for hunt) on stdout with stable key order; diagnostics and
//! runtimes go to stderr. Exit codes: 0 success/consistent, 1 violations
//! or refutations, 2 usage or validation errors.

use clap::{Args, Parser, Subcommand};
use hatlab::color::ColorSpace;
use hatlab::evaluate::{evaluate_exhaustive_with, evaluate_sampled, Goal, DEFAULT_EXHAUSTIVE_CAP};
use hatlab::game::{
    condition_profile, game_to_json, parse_coloring, parse_game, Game, Prisoner, VisibilityGraph,
};
use hatlab::parity::{finite_parity, ParityDomain};
use hatlab::search::{decide_ps_with, hunt, FamilySpec, SearchOptions, Verdict};
use hatlab::strategy::{
    bijection_hint_predictor, cycle_parity_predictor, dual_hint_predictor, finite_support_fep,
    hint_sum_predictor, mod_sum_predictor, parity_hint_predictor, run_predictor, Predictor,
    RawTable,
};
use hatlab::theorem::{check_theorem, DigraphMode, TheoremParams};
use hatlab::HatError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hatlab",
    version,
    about = "Hat-guessing games: construct, verify, search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReplayArg {
    /// Compare the output against a previous run's saved JSON; mismatch
    /// exits 1.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a game description and echo its normalized form.
    Validate {
        game: PathBuf,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Compute the S1-S6 condition profile of a multi-inning game.
    Conditions {
        game: PathBuf,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Run a predictor on one coloring and print the guess record.
    Run {
        game: PathBuf,
        /// mod-sum | cycle-parity | hint-sum | dual-hint | bijection-hint
        /// | parity-hint | fep-zero
        #[arg(long, conflicts_with = "tables")]
        predictor: Option<String>,
        /// JSON file with explicit strategy tables.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Comma list `1,0,1` (finite) or support pairs `2=5,9=1` (omega).
        #[arg(long)]
        coloring: String,
        /// Cycle for cycle-parity, e.g. `0,1`; found automatically if
        /// omitted.
        #[arg(long)]
        cycle: Option<String>,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Evaluate a predictor exhaustively (default) or on seeded samples.
    Evaluate {
        game: PathBuf,
        #[arg(long, conflicts_with = "tables")]
        predictor: Option<String>,
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Number of sampled colorings; omit for exhaustive evaluation.
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for sampling (required with --sample).
        #[arg(long)]
        seed: Option<u64>,
        /// Upper bound for sampled int colors.
        #[arg(long, default_value_t = 1000)]
        range: u64,
        /// Worker count for exhaustive evaluation; any value gives the
        /// identical report.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        cycle: Option<String>,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Decide a PS goal by backtracking search.
    Search {
        game: PathBuf,
        /// `correct>=N` or `errors<=N`.
        #[arg(long)]
        goal: String,
        /// Node budget, plain or scientific (`1e6`).
        #[arg(long, default_value = "1e7")]
        budget: String,
        /// Enable the first-branch symmetry reduction.
        #[arg(long)]
        symmetry: bool,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Run a named theorem check over its exhaustive corpus.
    Theorem {
        /// f2vcyclic | ffvcomplete | average | useful-props | after-ffva
        /// | first-group | robust-parity
        name: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        count: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<String>,
        #[command(flatten)]
        replay: ReplayArg,
    },
    /// Sweep a family of games and report verdict/profile rows.
    Hunt {
        /// Prisoner counts, e.g. `3` or `2,3`.
        #[arg(long)]
        sizes: String,
        /// `mod2`, `mod3`, ...
        #[arg(long)]
        colors: String,
        /// Exact number of innings for every game.
        #[arg(long, default_value_t = 1)]
        in_count: u32,
        /// Constrain the first-inning size.
        #[arg(long)]
        first_group: Option<u64>,
        /// all | connected | up-to-iso
        #[arg(long, default_value = "all")]
        vis: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value = "1e7")]
        budget: String,
        #[command(flatten)]
        replay: ReplayArg,
    },
}

/// Anything that stops a run: library errors and usage errors both exit 2;
/// refutations exit 1 and are not errors.
enum Failure {
    Usage(String),
    Lib(HatError),
}

impl From<HatError> for Failure {
    fn from(e: HatError) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &Path) -> CliResult<Game> {
    Ok(parse_game(&read_file(path)?)?)
}

fn parse_budget(text: &str) -> CliResult<u64> {
    let text = text.trim();
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text
        .parse()
        .map_err(|_| usage(format!("bad budget {text:?}")))?;
    if v.is_finite() && v >= 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(usage(format!("bad budget {text:?}")))
    }
}

fn parse_goal(text: &str) -> CliResult<Goal> {
    Ok(text.parse::<Goal>()?)
}

fn parse_id_list(text: &str) -> CliResult<Vec<Prisoner>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<Prisoner>()
                .map_err(|_| usage(format!("bad prisoner id {p:?}")))
        })
        .collect()
}

/// First directed cycle found by ascending DFS; deterministic.
fn find_cycle(game: &Game) -> CliResult<Vec<Prisoner>> {
    let sets = match &game.visibility {
        VisibilityGraph::Finite(sets) => sets,
        VisibilityGraph::OmegaComplete { .. } => {
            return Err(usage("cycle-parity needs a finite game"))
        }
    };
    let n = sets.len();
    for start in 0..n {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(
            start,
            sets[start].iter().rev().map(|&b| b as usize).collect(),
        )];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        while let Some((v, rest)) = stack.last_mut() {
            let v = *v;
            if let Some(w) = rest.pop() {
                if on_path[w] {
                    // Cycle closes at w: emit the stack segment from w on.
                    let mut cycle: Vec<Prisoner> = Vec::new();
                    let mut seen_w = false;
                    for (u, _) in stack.iter() {
                        if *u == w {
                            seen_w = true;
                        }
                        if seen_w {
                            cycle.push(*u as Prisoner);
                        }
                    }
                    return Ok(cycle);
                }
                on_path[w] = true;
                stack.push((w, sets[w].iter().rev().map(|&b| b as usize).collect()));
            } else {
                on_path[v] = false;
                stack.pop();
            }
        }
    }
    Err(Failure::Lib(HatError::NotACycle(vec![])))
}

fn load_tables(path: &Path) -> CliResult<Vec<RawTable>> {
    let text = read_file(path)?;
    // Accept either a bare table array or any object with a "tables" key
    // (search certificates qualify).
    if let Ok(tables) = serde_json::from_str::<Vec<RawTable>>(&text) {
        return Ok(tables);
    }
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("bad tables file: {e}")))?;
    let inner = value
        .get("tables")
        .ok_or_else(|| usage("tables file holds neither a table array nor a \"tables\" key"))?;
    serde_json::from_value(inner.clone()).map_err(|e| usage(format!("bad tables file: {e}")))
}

fn build_predictor(
    game: &Game,
    predictor: Option<&str>,
    tables: Option<&Path>,
    cycle: Option<&str>,
) -> CliResult<Predictor> {
    if let Some(path) = tables {
        return Ok(Predictor::from_tables(game, &load_tables(path)?)?);
    }
    let name = predictor.ok_or_else(|| usage("pass --predictor NAME or --tables FILE"))?;
    Ok(match name {
        "mod-sum" => mod_sum_predictor(game)?,
        "cycle-parity" => {
            let cycle = match cycle {
                Some(list) => parse_id_list(list)?,
                None => find_cycle(game)?,
            };
            cycle_parity_predictor(game, &cycle)?
        }
        "hint-sum" => hint_sum_predictor(game)?,
        "dual-hint" => dual_hint_predictor(game)?,
        "bijection-hint" => bijection_hint_predictor(game)?,
        "parity-hint" => {
            let domain = match game.n_finite() {
                Some(n) => ParityDomain::Slots(n),
                None => ParityDomain::OmegaFiniteSupport,
            };
            parity_hint_predictor(game, finite_parity(game.colors, domain))?
        }
        "fep-zero" => finite_support_fep(game)?,
        other => return Err(usage(format!("unknown predictor {other:?}"))),
    })
}

fn parse_colors(text: &str) -> CliResult<ColorSpace> {
    if text == "int" {
        return Ok(ColorSpace::Int);
    }
    if let Some(n) = text.strip_prefix("mod") {
        let n: u32 = n
            .trim_start_matches(':')
            .parse()
            .map_err(|_| usage(format!("bad color space {text:?}")))?;
        return Ok(ColorSpace::Mod(n));
    }
    Err(usage(format!("bad color space {text:?}")))
}

fn parse_vis_mode(text: &str) -> CliResult<DigraphMode> {
    match text {
        "all" => Ok(DigraphMode::All),
        "connected" => Ok(DigraphMode::ConnectedOnly),
        "up-to-iso" => Ok(DigraphMode::UpToIso),
        other => Err(usage(format!("bad visibility mode {other:?}"))),
    }
}

fn to_pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

/// Emit the output, honoring --replay: a saved copy must match byte for
/// byte.
fn finish(output: String, ok: bool, replay: &ReplayArg) -> CliResult<ExitCode> {
    if let Some(path) = &replay.replay {
        let saved = read_file(path)?;
        if saved != output {
            eprintln!("replay mismatch: {} differs from this run", path.display());
            print!("{output}");
            return Ok(ExitCode::from(1));
        }
    }
    print!("{output}");
    Ok(ExitCode::from(if ok { 0 } else { 1 }))
}

fn dispatch(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Validate { game, replay } => {
            let game = load_game(&game)?;
            finish(to_pretty(&game_to_json(&game)), true, &replay)
        }
        Command::Conditions { game, replay } => {
            let game = load_game(&game)?;
            let profile = condition_profile(&game)?;
            finish(to_pretty(&profile), true, &replay)
        }
        Command::Run {
            game,
            predictor,
            tables,
            coloring,
            cycle,
            replay,
        } => {
            let game = load_game(&game)?;
            let p = build_predictor(
                &game,
                predictor.as_deref(),
                tables.as_deref(),
                cycle.as_deref(),
            )?;
            let f = parse_coloring(&game, &coloring)?;
            let record = run_predictor(&game, &p, &f)?;
            finish(to_pretty(&record), true, &replay)
        }
        Command::Evaluate {
            game,
            predictor,
            tables,
            sample,
            seed,
            range,
            threads,
            cycle,
            replay,
        } => {
            let game = load_game(&game)?;
            let p = build_predictor(
                &game,
                predictor.as_deref(),
                tables.as_deref(),
                cycle.as_deref(),
            )?;
            let report = match sample {
                Some(count) => {
                    let seed = seed.ok_or_else(|| usage("--sample needs an explicit --seed"))?;
                    evaluate_sampled(&game, &p, count, seed, range)?
                }
                None => evaluate_exhaustive_with(&game, &p, DEFAULT_EXHAUSTIVE_CAP, threads)?,
            };
            finish(to_pretty(&report), true, &replay)
        }
        Command::Search {
            game,
            goal,
            budget,
            symmetry,
            replay,
        } => {
            let game = load_game(&game)?;
            let goal = parse_goal(&goal)?;
            let mut opts = SearchOptions::with_budget(parse_budget(&budget)?);
            opts.symmetry = symmetry;
            let cert = decide_ps_with(&game, goal, opts)?;
            let ok = cert.verdict == Verdict::Sat;
            finish(to_pretty(&cert), ok, &replay)
        }
        Command::Theorem {
            name,
            n,
            k,
            count,
            seed,
            budget,
            replay,
        } => {
            if matches!(name.as_str(), "average" | "robust-parity") && seed.is_none() {
                return Err(usage(format!("theorem {name:?} needs an explicit --seed")));
            }
            let budget = match budget {
                Some(b) => Some(parse_budget(&b)?),
                None => None,
            };
            let params = TheoremParams {
                n,
                k,
                count,
                seed,
                budget,
            };
            let report = check_theorem(&name, &params)?;
            eprintln!(
                "theorem {} finished in {:?} ({} instances)",
                report.theorem, report.runtime, report.instances
            );
            let clean = report.is_clean();
            finish(to_pretty(&report), clean, &replay)
        }
        Command::Hunt {
            sizes,
            colors,
            in_count,
            first_group,
            vis,
            goal,
            budget,
            replay,
        } => {
            let family = FamilySpec {
                sizes: parse_id_list(&sizes)?,
                colors: parse_colors(&colors)?,
                inning_count: in_count,
                first_group,
                visibility: parse_vis_mode(&vis)?,
            };
            let goal = parse_goal(&goal)?;
            let findings = hunt(&family, goal, parse_budget(&budget)?)?;
            let mut out = String::new();
            for finding in &findings {
                out.push_str(&serde_json::to_string(finding).expect("serializable"));
                out.push('\n');
            }
            let ok = findings.iter().all(|f| !f.contradicts_theory());
            finish(out, ok, &replay)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
