use serde_json::{json, Value};

use qgames::cloning::{
    constant_channel, haar_avg_global_fidelity, identity_embedding, optimal_cloner, sum_single_clone_haar_fidelity, value_formulas,
};
use qgames::estimation::{build_povm, mean_fidelity, optimal_povm, state_fidelity, Direction, Povm};
use qgames::harness::{
    asym_bound_scan, haar_states, icosahedral_states, monte_carlo_play, nested_bloch_states, octahedral_states, sandwich_report,
    uniform_grid, GameKind, GameSpec, SandwichReport, Strategy,
};
use qgames::quantum::tensor_power;
use qgames::zerosum::{solve_with, MatrixGame, SolveOptions};
use qgames::{Error, RandomStream};

use crate::args::{AsymBoundArgs, CloneArgs, Command, EstimateArgs, Game, McPlayArgs, SandwichArgs, SolveArgs};
use crate::output::Document;

/// A finished command: its document and whether an assertion failed.
pub struct Finished {
    pub doc: Document,
    pub failed: bool,
}

pub fn run(cmd: &Command) -> Result<Finished, Error> {
    match cmd {
        Command::Clone(a) => clone(a),
        Command::Estimate(a) => estimate(a),
        Command::Solve(a) => solve(a),
        Command::Sandwich(a) => sandwich(a),
        Command::AsymBound(a) => asym_bound(a),
        Command::McPlay(a) => mc_play(a),
    }
}

/// Errors caused by the request rather than by the computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::SizeCapExceeded { .. } | Error::InvalidArity(_) | Error::InvalidArgument(_) | Error::Shape(_)
    )
}

pub fn error_document(command: &str, e: &Error) -> Document {
    let mut doc = Document::default();
    doc.set("command", command);
    doc.set("error", json!({ "kind": e.kind(), "message": e.to_string() }));
    doc.table(&["command", "error_kind", "message"], vec![vec![json!(command), json!(e.kind()), json!(e.to_string())]]);
    doc
}

fn clone(a: &CloneArgs) -> Result<Finished, Error> {
    let (d, n, m) = (a.arity.d, a.arity.n, a.arity.m);
    let values = value_formulas(d, n, m)?;
    let cloner = optimal_cloner(d, n, m)?;
    let global = haar_avg_global_fidelity(&cloner)?;
    let (sum, per_clone) = sum_single_clone_haar_fidelity(&cloner)?;
    let consistent = (global - values.global_value).abs() <= 1e-10
        && per_clone.iter().all(|f| (f - values.single_value).abs() <= 1e-10)
        && (sum - values.asym_bound).abs() <= 1e-10;

    let mut doc = Document::default();
    doc.set("command", "clone");
    doc.set("d", d);
    doc.set("n", n);
    doc.set("m", m);
    doc.set("global_value", values.global_value);
    doc.set("single_value", values.single_value);
    doc.set("asym_bound", values.asym_bound);
    doc.set("haar_global_fidelity", global);
    doc.set("single_clone_fidelities", per_clone.clone());
    doc.set("consistent", consistent);
    doc.set("error", Value::Null);
    doc.table(
        &["d", "n", "m", "global_value", "single_value", "asym_bound", "haar_global_fidelity", "summed_clone_fidelity", "consistent"],
        vec![vec![
            json!(d),
            json!(n),
            json!(m),
            json!(values.global_value),
            json!(values.single_value),
            json!(values.asym_bound),
            json!(global),
            json!(sum),
            json!(consistent),
        ]],
    );
    Ok(Finished { doc, failed: !consistent })
}

fn estimate(a: &EstimateArgs) -> Result<Finished, Error> {
    let n = a.n;
    let povm = optimal_povm(n)?;
    let mean = mean_fidelity(&povm);
    let theoretical = (n + 1) as f64 / (n + 2) as f64;
    let payoffs = icosahedral_states()
        .iter()
        .map(|s| state_fidelity(&povm, s))
        .collect::<Result<Vec<_>, _>>()?;
    let spread = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - payoffs.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = (mean - theoretical).abs() <= 1e-9 && povm.completeness_residual() <= 1e-8 && spread <= 1e-9;

    let mut doc = Document::default();
    doc.set("command", "estimate");
    doc.set("n", n);
    doc.set("mean_fidelity", mean);
    doc.set("theoretical", theoretical);
    doc.set("completeness_residual", povm.completeness_residual());
    doc.set("outcomes", povm.len());
    doc.set("payoff_spread", spread);
    doc.set("consistent", ok);
    doc.set("error", Value::Null);
    doc.table(
        &["n", "mean_fidelity", "theoretical", "completeness_residual", "outcomes", "payoff_spread", "consistent"],
        vec![vec![
            json!(n),
            json!(mean),
            json!(theoretical),
            json!(povm.completeness_residual()),
            json!(povm.len()),
            json!(spread),
            json!(ok),
        ]],
    );
    Ok(Finished { doc, failed: !ok })
}

pub fn parse_matrix(text: &str) -> Result<MatrixGame, Error> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("matrix entry {x:?} is not a number")))
                })
                .collect::<Result<Vec<f64>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    MatrixGame::from_rows(&rows)
}

fn solve(a: &SolveArgs) -> Result<Finished, Error> {
    let game = match &a.matrix {
        Some(text) => parse_matrix(text)?,
        None => MatrixGame::rock_paper_scissors(),
    };
    let eq = solve_with(&game, &SolveOptions { tol: a.tol, seed: a.seed })?;

    let mut doc = Document::default();
    doc.set("command", "solve");
    doc.set("rows", game.rows());
    doc.set("cols", game.cols());
    doc.set("value", eq.value);
    doc.set("x", eq.x.probs().to_vec());
    doc.set("y", eq.y.probs().to_vec());
    doc.set("exploitability", eq.exploitability);
    doc.set("tol", a.tol);
    doc.set("error", Value::Null);
    let mut rows = Vec::new();
    for (player, probs) in [("I", eq.x.probs()), ("II", eq.y.probs())] {
        for (i, p) in probs.iter().enumerate() {
            rows.push(vec![json!(player), json!(i), json!(p), json!(eq.value)]);
        }
    }
    doc.table(&["player", "index", "probability", "value"], rows);
    Ok(Finished { doc, failed: false })
}

fn kind(game: Game) -> GameKind {
    match game {
        Game::Estimation => GameKind::Estimation,
        Game::Cloning => GameKind::Cloning,
        Game::OneParticle => GameKind::OneParticle,
    }
}

fn sandwich(a: &SandwichArgs) -> Result<Finished, Error> {
    let (d, n, m) = (a.arity.d, a.arity.n, a.arity.m);
    let (spec, one, levels) = match a.game {
        Game::Estimation => {
            let spec = GameSpec::estimation(n, 1, 0)?;
            let mut one = vec![Strategy::Estimator(optimal_povm(n)?)];
            if n == 1 {
                for v in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
                    let dir = Direction::from_bloch(v)?;
                    one.push(Strategy::Estimator(build_povm(1, &[dir, dir.antipode()], 1e-10)?));
                }
            }
            for s in octahedral_states() {
                one.push(Strategy::Estimator(Povm::constant(n, s)?));
            }
            (spec, one, nested_bloch_states())
        }
        game => {
            let seed = a.seed.expect("validated");
            let spec = GameSpec::new(kind(game), d, n, m, 1, seed)?;
            let stream = RandomStream::new(seed);
            let mut one = vec![
                Strategy::Cloner(optimal_cloner(d, n, m)?),
                Strategy::Cloner(identity_embedding(d, n, m)?),
            ];
            let guesses = if d == 2 { octahedral_states() } else { haar_states(d, 6, &stream.derive(1)) };
            for s in guesses {
                one.push(Strategy::Cloner(constant_channel(d, n, m, &tensor_power(&s, m)?)?));
            }
            let levels = a.levels.iter().map(|&k| haar_states(d, k, &stream)).collect();
            (spec, one, levels)
        }
    };
    let report = sandwich_report(&spec, &one, &levels, a.tol)?;
    Ok(sandwich_document(a, &report))
}

fn sandwich_document(a: &SandwichArgs, r: &SandwichReport) -> Finished {
    let mut doc = Document::default();
    doc.set("command", "sandwich");
    doc.set("game", format!("{:?}", kind(a.game)).to_lowercase());
    doc.set("d", if a.game == Game::Estimation { 2 } else { a.arity.d });
    doc.set("n", a.arity.n);
    doc.set("m", if a.game == Game::Estimation { 1 } else { a.arity.m });
    doc.set("seed", a.seed);
    doc.set("theoretical", r.theoretical);
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| json!({ "states": l.states, "value": l.value, "exploitability": l.exploitability }))
        .collect();
    doc.set("levels", levels);
    doc.set("above_theory", r.above_theory);
    doc.set("monotone", r.monotone);
    doc.set("converged", r.converged);
    doc.set("pass", r.pass);
    doc.set("error", Value::Null);
    let rows = r
        .levels
        .iter()
        .map(|l| vec![json!(l.states), json!(l.value), json!(l.exploitability), json!(r.theoretical)])
        .collect();
    doc.table(&["states", "value", "exploitability", "theoretical"], rows);
    Finished { doc, failed: !r.pass }
}

fn asym_bound(a: &AsymBoundArgs) -> Result<Finished, Error> {
    let (d, n, m) = (a.arity.d, a.arity.n, a.arity.m);
    let grid = if (n, m) == (1, 2) { uniform_grid(a.grid) } else { Vec::new() };
    let r = asym_bound_scan(d, n, m, a.samples, &grid, a.seed, a.ancilla)?;

    let mut doc = Document::default();
    doc.set("command", "asym-bound");
    doc.set("d", d);
    doc.set("n", n);
    doc.set("m", m);
    doc.set("seed", a.seed);
    doc.set("bound", r.bound);
    doc.set("max_sum_fidelity", r.max_sum_fidelity);
    doc.set("argmax", r.argmax.clone());
    doc.set("optimal_sum", r.optimal_sum);
    doc.set("channels", r.records.len());
    doc.set("violation", r.violation);
    let records: Vec<Value> = r
        .records
        .iter()
        .map(|x| json!({ "label": x.label, "sum_fidelity": x.sum_fidelity, "per_clone": x.per_clone }))
        .collect();
    doc.set("records", records);
    doc.set("error", Value::Null);

    let mut header = vec!["label".to_string(), "sum_fidelity".to_string()];
    header.extend((0..m).map(|k| format!("clone_{k}")));
    let rows = r
        .records
        .iter()
        .map(|x| {
            let mut row = vec![json!(x.label), json!(x.sum_fidelity)];
            row.extend(x.per_clone.iter().map(|f| json!(f)));
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    doc.table(&header, rows);
    Ok(Finished { doc, failed: r.violation })
}

fn mc_play(a: &McPlayArgs) -> Result<Finished, Error> {
    let (d, n, m) = (a.arity.d, a.arity.n, a.arity.m);
    let (spec, strategy) = match a.game {
        Game::Estimation => (GameSpec::estimation(n, a.samples, a.seed)?, Strategy::Estimator(optimal_povm(n)?)),
        game => (
            GameSpec::new(kind(game), d, n, m, a.samples, a.seed)?,
            Strategy::Cloner(optimal_cloner(d, n, m)?),
        ),
    };
    let r = monte_carlo_play(&spec, &strategy)?;
    let within = r.z.abs() <= 3.0;

    let mut doc = Document::default();
    doc.set("command", "mc-play");
    doc.set("game", format!("{:?}", spec.kind).to_lowercase());
    doc.set("d", spec.d);
    doc.set("n", spec.n);
    doc.set("m", spec.m);
    doc.set("samples", spec.samples);
    doc.set("seed", spec.seed);
    doc.set("passes", r.passes);
    doc.set("mean_payoff", r.mean_payoff);
    doc.set("stderr", r.stderr);
    doc.set("pass_rate", r.pass_rate);
    doc.set("exact_payoff", r.exact_payoff);
    doc.set("exact_pass_probability", r.exact_pass_probability);
    doc.set("z", r.z);
    doc.set("within_3_sigma", within);
    doc.set("error", Value::Null);
    doc.table(
        &["game", "d", "n", "m", "samples", "seed", "mean_payoff", "stderr", "exact_payoff", "z", "within_3_sigma"],
        vec![vec![
            json!(format!("{:?}", spec.kind).to_lowercase()),
            json!(spec.d),
            json!(spec.n),
            json!(spec.m),
            json!(spec.samples),
            json!(spec.seed),
            json!(r.mean_payoff),
            json!(r.stderr),
            json!(r.exact_payoff),
            json!(r.z),
            json!(within),
        ]],
    );
    Ok(Finished { doc, failed: !within })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_parsing() {
        let g = parse_matrix("1, -2; 3,4").unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 2));
        assert_eq!(g.payoff()[(0, 1)], -2.0);
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x").is_err());
    }
}
