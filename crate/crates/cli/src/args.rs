use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qgames", version, about = "Estimation and cloning games: values, equilibria, simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and numerically evaluated values of the N -> M cloning games.
    Clone(CloneArgs),
    /// Build the covariant estimator for N qubit copies and evaluate it.
    Estimate(EstimateArgs),
    /// Solve a finite zero-sum matrix game.
    Solve(SolveArgs),
    /// Minmax sandwich: discretized games on nested player II state sets.
    Sandwich(SandwichArgs),
    /// Scan channels for the summed single-clone fidelity bound.
    AsymBound(AsymBoundArgs),
    /// Play the full protocol repeatedly with ±1 stakes.
    McPlay(McPlayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Game {
    Estimation,
    Cloning,
    OneParticle,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct Arity {
    /// Local dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Input copies.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Output copies.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
}

#[derive(Args, Debug)]
pub struct CloneArgs {
    #[command(flatten)]
    pub arity: Arity,
    /// Accepted for uniformity; the command is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Rows separated by ';', entries by ','. Defaults to rock-paper-scissors.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Shuffle strategy order before solving.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SandwichArgs {
    #[arg(long, value_enum, default_value_t = Game::Estimation)]
    pub game: Game,
    #[command(flatten)]
    pub arity: Arity,
    /// Haar state counts of the nested player II sets (cloning games).
    #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32])]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AsymBoundArgs {
    #[command(flatten)]
    pub arity: Arity,
    /// Number of random channels.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Points of the asymmetry grid (1 -> 2 only).
    #[arg(long, default_value_t = 41)]
    pub grid: usize,
    /// Ancilla dimension of the random isometries; defaults to d^M.
    #[arg(long)]
    pub ancilla: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct McPlayArgs {
    #[arg(long, value_enum, default_value_t = Game::Estimation)]
    pub game: Game,
    #[command(flatten)]
    pub arity: Arity,
    /// Rounds to play.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Clone(a) => &a.output,
            Command::Estimate(a) => &a.output,
            Command::Solve(a) => &a.output,
            Command::Sandwich(a) => &a.output,
            Command::AsymBound(a) => &a.output,
            Command::McPlay(a) => &a.output,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Clone(_) => "clone",
            Command::Estimate(_) => "estimate",
            Command::Solve(_) => "solve",
            Command::Sandwich(_) => "sandwich",
            Command::AsymBound(_) => "asym-bound",
            Command::McPlay(_) => "mc-play",
        }
    }

    /// Checks that clap cannot express.
    pub fn validate(&self) -> Result<(), String> {
        fn arity(a: &Arity) -> Result<(), String> {
            if a.d < 2 {
                return Err(format!("--d must be at least 2, got {}", a.d));
            }
            if a.n == 0 {
                return Err("--n must be at least 1".into());
            }
            if a.m < a.n {
                return Err(format!("--m ({}) must be at least --n ({})", a.m, a.n));
            }
            Ok(())
        }
        fn tol(t: f64) -> Result<(), String> {
            if t > 0.0 && t.is_finite() {
                Ok(())
            } else {
                Err(format!("--tol must be positive, got {t}"))
            }
        }
        match self {
            Command::Clone(a) => arity(&a.arity),
            Command::Estimate(a) if a.n == 0 => Err("--n must be at least 1".into()),
            Command::Estimate(_) => Ok(()),
            Command::Solve(a) => tol(a.tol),
            Command::Sandwich(a) => {
                tol(a.tol)?;
                match a.game {
                    Game::Estimation if a.arity.n == 0 => Err("--n must be at least 1".into()),
                    Game::Estimation => Ok(()),
                    _ => {
                        arity(&a.arity)?;
                        if a.seed.is_none() {
                            return Err("--seed is required: cloning levels use Haar-random states".into());
                        }
                        if a.levels.is_empty() || a.levels.contains(&0) {
                            return Err("--levels must be positive counts".into());
                        }
                        if a.levels.windows(2).any(|w| w[1] < w[0]) {
                            return Err("--levels must be non-decreasing (nested sets)".into());
                        }
                        Ok(())
                    }
                }
            }
            Command::AsymBound(a) => arity(&a.arity),
            Command::McPlay(a) => {
                if a.samples == 0 {
                    return Err("--samples must be at least 1".into());
                }
                match a.game {
                    Game::Estimation if a.arity.n == 0 => Err("--n must be at least 1".into()),
                    Game::Estimation if a.arity.d != 2 => Err("estimation is a qubit game (--d 2)".into()),
                    Game::Estimation => Ok(()),
                    _ => arity(&a.arity),
                }
            }
        }
    }
}
