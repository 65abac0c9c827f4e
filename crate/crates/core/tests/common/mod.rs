#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secpoly::{in_general_position, HeightVector, PointConfiguration, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hex6() -> PointConfiguration {
    PointConfiguration::from_ints(&[(4, 0), (2, 3), (-2, 3), (-4, 0), (-2, -3), (2, -3)]).unwrap()
}

pub fn moae6() -> PointConfiguration {
    PointConfiguration::from_ints(&[(0, 0), (6, 0), (0, 6), (1, 1), (4, 1), (1, 4)]).unwrap()
}

pub fn fan6() -> PointConfiguration {
    PointConfiguration::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (2, 3)]).unwrap()
}

/// Convex `n`-gon with vertices on the parabola `y = x²`.
pub fn convex_ngon(n: usize) -> PointConfiguration {
    let pts: Vec<(i64, i64)> = (0..n as i64).map(|i| (i, i * i)).collect();
    PointConfiguration::from_ints(&pts).unwrap()
}

/// Integer configuration in general position with coordinates in `[-20, 20]`.
pub fn random_config(rng: &mut ChaCha8Rng, n: usize) -> PointConfiguration {
    loop {
        let pts: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(-20..=20), rng.gen_range(-20..=20))).collect();
        if let Ok(c) = PointConfiguration::from_ints(&pts) {
            if in_general_position(&c) {
                return c;
            }
        }
    }
}

pub fn random_heights(rng: &mut ChaCha8Rng, n: usize, range: i64) -> HeightVector {
    HeightVector::new((0..n).map(|_| Rational::from_integer(rng.gen_range(-range..=range).into())).collect())
}
