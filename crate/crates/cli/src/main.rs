use std::fs;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use squarewar::book::{DomainMode, StrategyBook};
use squarewar::solver::{solve_all, CandidateOrder, SolverConfig};
use squarewar::verify::{replay_random, validate_book, verify_script_all, VerificationReport};
use squarewar::DEFAULT_SIZE;
use squarewar_service::{AppState, DEFAULT_GAME_CAP};

mod play;

#[derive(Parser)]
#[command(name = "squarewar", version, about = "Square War forced-win prover and engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a forced win for every stone-4 case inside W.
    Solve(SolveArgs),
    /// Check the scripted line, a strategy book, or random games.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Play White against the engine in the terminal.
    Play {
        #[arg(long, env = "SQUAREWAR_BOOK")]
        book: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "SQUAREWAR_BOOK")]
        book: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GAME_CAP)]
        max_games: usize,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value = "paper")]
    mode: DomainMode,
    #[arg(long = "max-stone", default_value_t = 31)]
    max_stone: usize,
    #[arg(long)]
    book: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Single depth-first pass at --max-stone instead of deepening.
    #[arg(long)]
    plain_dfs: bool,
    /// Sort candidates by the played point instead of by supporting stones.
    #[arg(long)]
    row_major: bool,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the scripted stones 5-11 against every White reply in every outside-W case
    Script {
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Validate every node of a strategy book against every White reply
    Book {
        #[arg(long, env = "SQUAREWAR_BOOK")]
        book: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay seeded random White games against the engine
    Replay {
        #[arg(long, env = "SQUAREWAR_BOOK")]
        book: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        games: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_IO: u8 = 2;

fn write_json(path: &Path, value: &impl serde::Serialize) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value).expect("serializable"))
}

fn load_book(path: &Path) -> Result<StrategyBook, ExitCode> {
    StrategyBook::load(path).map_err(|e| {
        eprintln!("error={e}");
        ExitCode::from(EXIT_IO)
    })
}

fn solve(args: SolveArgs) -> ExitCode {
    let config = SolverConfig {
        n: DEFAULT_SIZE,
        max_stone: args.max_stone,
        mode: args.mode,
        order: if args.row_major { CandidateOrder::RowMajor } else { CandidateOrder::Insertion },
        jobs: args.jobs,
        deepening: !args.plain_dfs,
    };
    let (report, book) = solve_all(&config);
    println!("{}", report.summary_line());
    let hist: Vec<String> = report.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    println!("histogram={}", hist.join(","));
    println!("elapsed_ms={}", report.elapsed_ms);
    for (s2, s4) in &report.unproved {
        println!("unproved={s2}/{s4}");
    }
    if let Some(path) = &args.book {
        if let Err(e) = book.save(path) {
            eprintln!("error={e}");
            return ExitCode::from(EXIT_IO);
        }
        println!("book={}", path.display());
    }
    if let Some(path) = &args.report {
        if let Err(e) = write_json(path, &report) {
            eprintln!("error={e}");
            return ExitCode::from(EXIT_IO);
        }
        println!("report={}", path.display());
    }
    if report.w_a {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn verify(cmd: VerifyCommand) -> ExitCode {
    match cmd {
        VerifyCommand::Script { report } => {
            let s = verify_script_all(DEFAULT_SIZE);
            println!("script_cases={} failures={} win_stone={}", s.cases, s.failures.len(), s.max_win_stone);
            for f in s.failures.iter().take(10) {
                println!("failure={}/{} {}", f.stone2, f.stone4, f.reason);
            }
            if let Some(path) = report {
                let out = VerificationReport {
                    script_cases: s.cases,
                    script_failures: s.failures.clone(),
                    ..VerificationReport::default()
                };
                if let Err(e) = write_json(&path, &out) {
                    eprintln!("error={e}");
                    return ExitCode::from(EXIT_IO);
                }
            }
            if s.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        VerifyCommand::Book { book, report } => {
            let book = match load_book(&book) {
                Ok(b) => b,
                Err(code) => return code,
            };
            let r = match validate_book(&book) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error={e}");
                    return ExitCode::from(EXIT_IO);
                }
            };
            println!("{}/{} valid", r.valid, r.cases);
            println!("book_cases={} failures={} nodes={}", r.cases, r.failures.len(), r.nodes);
            for f in r.failures.iter().take(10) {
                let line: Vec<String> = f.line.iter().map(|c| c.to_string()).collect();
                println!("failure={}/{} {} line={}", f.stone2, f.stone4, f.reason, line.join(" "));
            }
            if let Some(path) = report {
                let out = VerificationReport {
                    book_cases: r.cases,
                    book_failures: r.failures.clone(),
                    ..VerificationReport::default()
                };
                if let Err(e) = write_json(&path, &out) {
                    eprintln!("error={e}");
                    return ExitCode::from(EXIT_IO);
                }
            }
            if r.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        VerifyCommand::Replay { book, games, seed } => {
            let book = match load_book(&book) {
                Ok(b) => b,
                Err(code) => return code,
            };
            let s = replay_random(Arc::new(book), games, seed);
            println!(
                "games={} black_wins={} max_stone={} mean_stone={:.3} digest={:016x}",
                s.games, s.black_wins, s.max_stone, s.mean_stone, s.digest
            );
            for f in s.failures.iter().take(10) {
                println!("failure={f}");
            }
            if s.failures.is_empty() && s.black_wins == s.games {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}

fn serve(port: u16, book: &Path, max_games: usize) -> ExitCode {
    let book = match load_book(book) {
        Ok(b) => b,
        Err(code) => return code,
    };
    match validate_book(&book) {
        Ok(r) if r.ok() => println!("book_cases={}", r.cases),
        Ok(r) => {
            eprintln!("error=book has {} invalid cases", r.failures.len());
            return ExitCode::from(EXIT_IO);
        }
        Err(e) => {
            eprintln!("error={e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error={e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    println!("listening={addr}");
    match runtime.block_on(squarewar_service::serve(addr, AppState::new(book, max_games))) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error={e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify(cmd) => verify(cmd),
        Command::Play { book } => {
            let book = match book {
                Some(path) => match load_book(&path) {
                    Ok(b) => b,
                    Err(code) => return code,
                },
                // the default book takes a fraction of a second to build
                None => solve_all(&SolverConfig::default()).1,
            };
            let stdin = io::stdin();
            let mut stdout = io::stdout();
            match play::run_play(Arc::new(book), stdin.lock(), &mut stdout) {
                Ok(code) => ExitCode::from(code as u8),
                Err(_) => ExitCode::from(EXIT_IO),
            }
        }
        Command::Serve { port, book, max_games } => serve(port, &book, max_games),
    }
}
