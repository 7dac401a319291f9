//! Browser bindings for three small views of the library: cloning values
//! against the number of copies, the asymmetric 1 -> 2 trade-off curve, and
//! regret-matching convergence on a matrix game.

use qgames::cloning::{asymmetric_cloner, single_clone_haar_fidelity, value_formulas};
use qgames::zerosum::{regret_matching, MatrixGame};
use wasm_bindgen::prelude::*;

/// Rows `[m, global_value, single_value, asym_bound]` for `m = n..=m_max`, flattened.
pub fn cloning_table(d: usize, n: usize, m_max: usize) -> Result<Vec<f64>, String> {
    if m_max < n || m_max > 64 {
        return Err(format!("need n <= m_max <= 64, got n = {n}, m_max = {m_max}"));
    }
    let mut out = Vec::with_capacity(4 * (m_max - n + 1));
    for m in n..=m_max {
        let v = value_formulas(d, n, m).map_err(|e| e.to_string())?;
        out.extend([m as f64, v.global_value, v.single_value, v.asym_bound]);
    }
    Ok(out)
}

/// Rows `[beta, F_A, F_B]` along the asymmetric cloner family, flattened.
pub fn asymmetric_curve(d: usize, points: usize) -> Result<Vec<f64>, String> {
    if !(2..=4).contains(&d) || points < 2 {
        return Err(format!("need 2 <= d <= 4 and at least 2 points, got d = {d}, points = {points}"));
    }
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let beta = i as f64 / (points - 1) as f64;
        let ch = asymmetric_cloner(d, beta).map_err(|e| e.to_string())?;
        let fa = single_clone_haar_fidelity(&ch, 0).map_err(|e| e.to_string())?;
        let fb = single_clone_haar_fidelity(&ch, 1).map_err(|e| e.to_string())?;
        out.extend([beta, fa, fb]);
    }
    Ok(out)
}

/// Parses `"a,b;c,d"` into a game.
pub fn parse_game(text: &str) -> Result<MatrixGame, String> {
    let rows = text
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("{x:?} is not a number"))).collect())
        .collect::<Result<Vec<Vec<f64>>, String>>()?;
    MatrixGame::from_rows(&rows).map_err(|e| e.to_string())
}

/// Averaged RM+ play: checkpoints, exploitability and the final profile.
#[wasm_bindgen]
pub struct Convergence {
    checkpoints: Vec<f64>,
    exploitability: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    value: f64,
}

#[wasm_bindgen]
impl Convergence {
    pub fn checkpoints(&self) -> Vec<f64> {
        self.checkpoints.clone()
    }
    pub fn exploitability(&self) -> Vec<f64> {
        self.exploitability.clone()
    }
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }
    pub fn value(&self) -> f64 {
        self.value
    }
}

pub fn convergence(matrix: &str, iterations: usize, every: usize) -> Result<Convergence, String> {
    if iterations == 0 || iterations > 1_000_000 {
        return Err(format!("iterations must be in 1..=1000000, got {iterations}"));
    }
    let game = parse_game(matrix)?;
    let t = regret_matching(&game, iterations, every).map_err(|e| e.to_string())?;
    Ok(Convergence {
        checkpoints: t.checkpoints.iter().map(|&c| c as f64).collect(),
        exploitability: t.exploitability,
        x: t.x.probs().to_vec(),
        y: t.y.probs().to_vec(),
        value: t.value,
    })
}

#[wasm_bindgen(js_name = cloningTable)]
pub fn cloning_table_js(d: usize, n: usize, m_max: usize) -> Result<Vec<f64>, JsError> {
    cloning_table(d, n, m_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = asymmetricCurve)]
pub fn asymmetric_curve_js(d: usize, points: usize) -> Result<Vec<f64>, JsError> {
    asymmetric_curve(d, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = regretConvergence)]
pub fn convergence_js(matrix: &str, iterations: usize, every: usize) -> Result<Convergence, JsError> {
    convergence(matrix, iterations, every).map_err(|e| JsError::new(&e))
}
