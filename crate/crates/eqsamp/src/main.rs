//! Command-line front end: thresholds | zoo | test | solve | concentration | experiment.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eqsamp::concentration::{
    classic_hoeffding_bound, product_hoeffding_bound, violation_rate, ProductSpace,
};
use eqsamp::dist::{Distribution, ProductDistribution, SampleBatch};
use eqsamp::error::Error;
use eqsamp::experiments::{
    experiment_csv, run_convergence, run_eps_dependence, run_lower_bound_ex_n,
    run_lower_bound_ex_al, run_ne_to_ce, run_test_characteristics, ExperimentRow,
};
use eqsamp::game::Game;
use eqsamp::rng::SeedInfo;
use eqsamp::solver::{exhaustive_k_uniform_nash, SolveOutcome, SolverOptions};
use eqsamp::tester::{run_test, Answer};
use eqsamp::thresholds::{threshold, EquilibriumKind, ThresholdPurpose};
use eqsamp::zoo;

#[derive(Parser)]
#[command(name = "eqsamp", about = "Sampled equilibrium play: verify, test, search, measure")]
struct Cli {
    /// Master seed for all randomized subcommands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Trials for Monte Carlo subcommands.
    #[arg(long, global = true, default_value_t = 200)]
    trials: u64,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print sample-size thresholds over parameter grids as CSV.
    Thresholds(ThresholdsArgs),
    /// Emit a catalog game in the game file format, or list the catalog.
    Zoo(ZooArgs),
    /// Decide whether sampled play looks like a δ-equilibrium.
    Test(TestArgs),
    /// Exhaustive k-uniform ε-Nash search.
    Solve(SolveArgs),
    /// Measure tail-bound violation rates for sampled product measures.
    Concentration(ConcentrationArgs),
    /// Run a named Monte Carlo experiment and emit CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ThresholdsArgs {
    /// Equilibrium kind: nash | ce | cce.
    #[arg(long)]
    kind: String,
    /// Purpose: convergence | support | test.
    #[arg(long)]
    purpose: String,
    /// Comma-separated ε grid.
    #[arg(long, default_value = "0.1,0.2,0.3")]
    eps: String,
    /// Comma-separated α grid (ignored for support bounds).
    #[arg(long, default_value = "0.05,0.1")]
    alpha: String,
    /// Comma-separated player counts.
    #[arg(long, default_value = "2")]
    n: String,
    /// Comma-separated action counts.
    #[arg(long, default_value = "2")]
    m: String,
}

#[derive(Args)]
struct ZooArgs {
    /// List available instances.
    #[arg(long)]
    list: bool,
    /// Instance name from the catalog.
    #[arg(long)]
    name: Option<String>,
    /// Size parameter for parameterized instances.
    #[arg(long)]
    param: Option<usize>,
}

#[derive(Args)]
struct TestArgs {
    /// Game file (JSON).
    #[arg(long)]
    game: PathBuf,
    /// Sample CSV produced by this tool's sampling format.
    #[arg(long)]
    samples: PathBuf,
    /// nash | ce | cce.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Uniformity denominator; defaults to the support-size threshold.
    #[arg(long)]
    k: Option<u64>,
    /// Candidate cap.
    #[arg(long, default_value_t = 100_000_000)]
    cap: u128,
    /// Heuristic: restrict per-player supports to at most this many actions.
    #[arg(long)]
    max_support: Option<usize>,
}

#[derive(Args)]
struct ConcentrationArgs {
    /// Game file for the utility view (needs --player and --action).
    #[arg(long)]
    game: Option<PathBuf>,
    #[arg(long)]
    player: Option<usize>,
    #[arg(long)]
    action: Option<usize>,
    /// Per-player strategy grid "p,p;q,q,q" for the game view (default uniform).
    #[arg(long)]
    strategy: Option<String>,
    /// Explicit component distributions "0.5,0.5;0.2,0.8".
    #[arg(long)]
    components: Option<String>,
    /// Dense f table for explicit components, first component most significant.
    #[arg(long)]
    values: Option<String>,
    /// Comma-separated sample sizes.
    #[arg(long, default_value = "50,200,800")]
    k_grid: String,
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// convergence | pairs-lower-bound | subset-lower-bound | ne-to-ce |
    /// eps-dependence | test-characteristics
    #[arg(long)]
    name: String,
    /// Zoo instance for convergence/test experiments.
    #[arg(long, default_value = "matching_pennies")]
    instance: String,
    /// Instance size parameter where applicable.
    #[arg(long)]
    param: Option<usize>,
    /// Named distribution to sample (defaults per experiment).
    #[arg(long)]
    from: Option<String>,
    /// nash | ce | cce.
    #[arg(long, default_value = "nash")]
    kind: String,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Comma-separated sample sizes; defaults per experiment.
    #[arg(long)]
    k_grid: Option<String>,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(|cell| {
            cell.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry {cell:?}")))
        })
        .collect()
}

fn parse_factors(text: &str) -> Result<Vec<Vec<f64>>, Error> {
    text.split(';')
        .map(|group| parse_list::<f64>(group, "probability"))
        .collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Thresholds(args) => {
            let kind = EquilibriumKind::parse(&args.kind)?;
            let purpose = ThresholdPurpose::parse(&args.purpose)?;
            let eps_grid: Vec<f64> = parse_list(&args.eps, "eps")?;
            let alpha_grid: Vec<f64> = parse_list(&args.alpha, "alpha")?;
            let n_grid: Vec<u64> = parse_list(&args.n, "n")?;
            let m_grid: Vec<u64> = parse_list(&args.m, "m")?;
            let mut csv = String::from("kind,purpose,eps,alpha,n,m,raw_bound,k\n");
            let alphas: Vec<Option<f64>> = if purpose == ThresholdPurpose::SupportSize {
                vec![None]
            } else {
                alpha_grid.iter().map(|&a| Some(a)).collect()
            };
            for &eps in &eps_grid {
                for alpha in &alphas {
                    for &n in &n_grid {
                        for &m in &m_grid {
                            let r = threshold(kind, purpose, eps, *alpha, n, m)?;
                            csv.push_str(&format!(
                                "{},{},{},{},{},{},{},{}\n",
                                kind.label(),
                                purpose.label(),
                                eps,
                                alpha.map(|a| a.to_string()).unwrap_or_default(),
                                n,
                                m,
                                r.raw_bound,
                                r.k
                            ));
                        }
                    }
                }
            }
            emit(&cli.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Zoo(args) => {
            if args.list {
                let mut text = String::new();
                for (name, params, note) in zoo::catalog() {
                    text.push_str(&format!("{name:28} {params:22} {note}\n"));
                }
                emit(&cli.out, &text)?;
                return Ok(ExitCode::SUCCESS);
            }
            let name = args.name.as_deref().ok_or_else(|| {
                Error::InvalidArgument("pass --name <instance> or --list".into())
            })?;
            let instance = zoo::by_name(name, args.param)?;
            emit(&cli.out, &instance.game.to_text())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Test(args) => {
            let game = Game::from_text(&fs::read_to_string(&args.game)?)?;
            let batch = SampleBatch::from_csv(&fs::read_to_string(&args.samples)?)?;
            let kind = EquilibriumKind::parse(&args.kind)?;
            let verdict = run_test(kind, &game, &batch, args.delta, args.eps, args.alpha)?;
            let json = serde_json::to_string_pretty(&verdict)
                .map_err(|e| Error::Malformed(e.to_string()))?;
            emit(&cli.out, &format!("{json}\n"))?;
            Ok(match verdict.answer {
                Answer::Yes => ExitCode::SUCCESS,
                Answer::No => ExitCode::from(3),
            })
        }
        Command::Solve(args) => {
            let game = Game::from_text(&fs::read_to_string(&args.game)?)?;
            let k = match args.k {
                Some(k) => k,
                None => {
                    let n = game.players() as u64;
                    let m = game.max_actions() as u64;
                    eqsamp::thresholds::k_nash_support(args.eps, n, m)?.k
                }
            };
            let options = SolverOptions {
                cap: args.cap,
                max_support: args.max_support,
            };
            let outcome = exhaustive_k_uniform_nash(&game, args.eps, k, &options)?;
            match outcome {
                SolveOutcome::Found { strategies, report } => {
                    let json = serde_json::json!({
                        "status": "FOUND",
                        "k": k,
                        "strategies": strategies,
                        "report": report,
                    });
                    emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
                }
                SolveOutcome::NotFound => {
                    emit(&cli.out, &format!("{}\n", serde_json::json!({"status": "NOT_FOUND", "k": k})))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Concentration(args) => {
            let space = build_space(args)?;
            let k_grid: Vec<u64> = parse_list(&args.k_grid, "k")?;
            let mut csv = String::from(
                "k,eps,empirical_rate,product_hoeffding_bound,classic_hoeffding_bound\n",
            );
            for &k in &k_grid {
                let rate = violation_rate(
                    &space,
                    k,
                    args.eps,
                    cli.trials,
                    SeedInfo::new(cli.seed, k),
                )?;
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    k,
                    args.eps,
                    rate.rate,
                    product_hoeffding_bound(args.eps, k),
                    classic_hoeffding_bound(args.eps, k)
                ));
            }
            emit(&cli.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment(args) => {
            let rows = run_experiment(cli, args)?;
            emit(&cli.out, &experiment_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_space(args: &ConcentrationArgs) -> Result<ProductSpace, Error> {
    match (&args.game, &args.components) {
        (Some(path), None) => {
            let game = Game::from_text(&fs::read_to_string(path)?)?;
            let player = args.player.ok_or_else(|| {
                Error::InvalidArgument("game view needs --player".into())
            })?;
            let action = args.action.ok_or_else(|| {
                Error::InvalidArgument("game view needs --action".into())
            })?;
            let x = match &args.strategy {
                Some(text) => ProductDistribution::new(parse_factors(text)?)?,
                None => ProductDistribution::uniform(game.action_counts()),
            };
            ProductSpace::from_game_view(&game, &x, player, action)
        }
        (None, Some(components)) => {
            let components = parse_factors(components)?;
            let values = parse_list(
                args.values.as_deref().ok_or_else(|| {
                    Error::InvalidArgument("explicit components need --values".into())
                })?,
                "f value",
            )?;
            ProductSpace::from_tables(components, values)
        }
        _ => Err(Error::InvalidArgument(
            "pass either --game (utility view) or --components/--values".into(),
        )),
    }
}

fn run_experiment(cli: &Cli, args: &ExperimentArgs) -> Result<Vec<ExperimentRow>, Error> {
    let kind = EquilibriumKind::parse(&args.kind)?;
    let k_grid: Option<Vec<u64>> = match &args.k_grid {
        Some(text) => Some(parse_list(text, "k")?),
        None => None,
    };
    match args.name.as_str() {
        "convergence" => {
            let instance = zoo::by_name(&args.instance, args.param)?;
            let from = args
                .from
                .clone()
                .unwrap_or_else(|| default_source(kind, &instance));
            let source = instance.distribution(&from)?;
            let n = instance.game.players() as u64;
            let m = instance.game.max_actions() as u64;
            let grid = match k_grid {
                Some(g) => g,
                None => {
                    let k = match kind {
                        EquilibriumKind::Nash => {
                            eqsamp::thresholds::k_nash(args.eps, args.alpha, n, m)?.k
                        }
                        EquilibriumKind::Correlated => {
                            eqsamp::thresholds::k_ce(args.eps, args.alpha, n, m)?.k
                        }
                        EquilibriumKind::CoarseCorrelated => {
                            eqsamp::thresholds::k_cce(args.eps, args.alpha, n, m)?.k
                        }
                    };
                    vec![k / 16, k / 4, k]
                        .into_iter()
                        .filter(|&k| k >= 1)
                        .collect()
                }
            };
            let curve = run_convergence(
                &instance.game,
                source,
                &instance.name,
                kind,
                args.eps,
                &grid,
                cli.trials,
                cli.seed,
            )?;
            Ok(curve.rows())
        }
        "pairs-lower-bound" => {
            let n_pairs = args.param.unwrap_or(128);
            let k = k_grid.as_deref().and_then(|g| g.first().copied()).unwrap_or(3);
            let stats = run_lower_bound_ex_n(n_pairs, k, 0.5, cli.trials, cli.seed)?;
            Ok(stats.rows())
        }
        "subset-lower-bound" => {
            let b = args.param.unwrap_or(3);
            let k = k_grid.as_deref().and_then(|g| g.first().copied()).unwrap_or(3);
            let stats = run_lower_bound_ex_al(b, k, 0.25, cli.trials, cli.seed)?;
            Ok(stats.rows())
        }
        "ne-to-ce" => {
            let m = args.param.unwrap_or(64);
            let k = k_grid
                .as_deref()
                .and_then(|g| g.first().copied())
                .unwrap_or(m as u64);
            let eps = 1.0 / (4.0 * std::f64::consts::E);
            let stats = run_ne_to_ce(m, k, eps, cli.trials, cli.seed)?;
            Ok(stats.rows())
        }
        "eps-dependence" => {
            let grid = k_grid.unwrap_or_else(|| vec![16, 64, 256]);
            let stats = run_eps_dependence(&grid, cli.trials, cli.seed)?;
            Ok(stats.rows())
        }
        "test-characteristics" => {
            let instance = zoo::by_name(&args.instance, args.param)?;
            let game = &instance.game;
            let from = args
                .from
                .clone()
                .unwrap_or_else(|| default_source(kind, &instance));
            let yes_source = instance.distribution(&from)?.clone();
            // far fixture: everyone piles on their first action
            let first = ProductDistribution::point_mass(
                &eqsamp::game::ActionProfile(vec![0; game.players()]),
                game.action_counts(),
            )?;
            let no_source = Distribution::Product(first);
            let n = game.players() as u64;
            let m = game.max_actions() as u64;
            let k = match k_grid.as_deref().and_then(|g| g.first().copied()) {
                Some(k) => k,
                None => match kind {
                    EquilibriumKind::Nash => {
                        eqsamp::thresholds::k_nash_test(args.eps, args.alpha, n, m)?.k
                    }
                    EquilibriumKind::Correlated => {
                        eqsamp::thresholds::k_ce_test(args.eps, args.alpha, n, m)?.k
                    }
                    EquilibriumKind::CoarseCorrelated => {
                        eqsamp::thresholds::k_cce_test(args.eps, args.alpha, n, m)?.k
                    }
                },
            };
            let stats = run_test_characteristics(
                game,
                &yes_source,
                &no_source,
                &instance.name,
                kind,
                args.delta,
                args.eps,
                args.alpha,
                k,
                cli.trials,
                cli.seed,
            )?;
            Ok(stats.rows())
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown experiment {other:?}; see README for the list"
        ))),
    }
}

fn default_source(kind: EquilibriumKind, instance: &zoo::LabeledInstance) -> String {
    if kind == EquilibriumKind::Correlated && instance.distributions.contains_key("canonical_ce") {
        return "canonical_ce".to_string();
    }
    if instance.distributions.contains_key("uniform_ne") {
        return "uniform_ne".to_string();
    }
    instance
        .distributions
        .keys()
        .next()
        .cloned()
        .unwrap_or_default()
}
