//! The verification suites.

pub(crate) mod entropy;
pub(crate) mod flow;
pub(crate) mod modular;
pub(crate) mod spinor;
pub(crate) mod wave;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spinor_algebra::FourVector;

/// Independent random stream `stream` derived from the run seed.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random nonzero momentum with log-uniform magnitude in `[0.1, 10]`.
pub(crate) fn random_momentum(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.05 && n <= 1.0 {
            let scale = 10f64.powf(rng.gen_range(-1.0..1.0)) / n;
            return v.map(|c| c * scale);
        }
    }
}

/// Random four-vector with components uniform in `[−a, a]`.
pub(crate) fn random_four_vector(rng: &mut ChaCha8Rng, a: f64) -> FourVector {
    FourVector::new(
        rng.gen_range(-a..a),
        rng.gen_range(-a..a),
        rng.gen_range(-a..a),
        rng.gen_range(-a..a),
    )
}

/// Random point of the open unit double cone, uniform in volume.
pub(crate) fn random_in_double_cone(rng: &mut ChaCha8Rng) -> FourVector {
    loop {
        let x = random_four_vector(rng, 1.0);
        if x.in_unit_double_cone() {
            return x;
        }
    }
}

/// Maximum of a sequence, NaN-propagating so that a non-finite value fails
/// its check.
pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}
