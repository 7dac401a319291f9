//! Player II state sets.

use crate::estimation::{fibonacci_directions, Direction};
use crate::quantum::{haar_random_state, PureState, RandomStream};

fn from_bloch(points: &[[f64; 3]]) -> Vec<PureState> {
    points
        .iter()
        .map(|&v| Direction::from_bloch(v).expect("nonzero point").qubit())
        .collect()
}

/// `±z, ±x, ±y`, poles first.
pub fn octahedral_states() -> Vec<PureState> {
    from_bloch(&[
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
    ])
}

/// The eight `(±1, ±1, ±1)/√3` directions.
pub fn cube_states() -> Vec<PureState> {
    let mut pts = Vec::with_capacity(8);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                pts.push([sx, sy, sz]);
            }
        }
    }
    from_bloch(&pts)
}

/// The twelve icosahedron vertices, cyclic permutations of `(0, ±1, ±φ)`.
pub fn icosahedral_states() -> Vec<PureState> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::with_capacity(12);
    for a in [1.0, -1.0] {
        for b in [phi, -phi] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    from_bloch(&pts)
}

pub fn fibonacci_states(count: usize) -> Vec<PureState> {
    fibonacci_directions(count).iter().map(Direction::qubit).collect()
}

/// `count` Haar-random states; state `i` comes from substream `i`, so a
/// shorter list is always a prefix of a longer one.
pub fn haar_states(d: usize, count: usize, stream: &RandomStream) -> Vec<PureState> {
    (0..count)
        .map(|i| haar_random_state(d, &mut stream.substream(i as u64).rng()).expect("d >= 1"))
        .collect()
}

/// Nested qubit sets: poles (2), octahedron (6), plus cube (14), plus
/// icosahedron (26), plus 24 Fibonacci points (50).
pub fn nested_bloch_states() -> Vec<Vec<PureState>> {
    let mut all = octahedral_states();
    let mut levels = vec![all[..2].to_vec(), all.clone()];
    all.extend(cube_states());
    levels.push(all.clone());
    all.extend(icosahedral_states());
    levels.push(all.clone());
    all.extend(fibonacci_states(24));
    levels.push(all);
    levels
}
