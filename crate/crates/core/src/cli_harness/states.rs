//! Canonical states and test functions used by the suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dirac_majorana::{majorana_embed, MajoranaState};
use crate::error::Result;
use crate::wave_space::{
    synthesize_cauchy, GridSpec, ProfileTerm, SpaceProfile, StateSpec, TestFunctionSpec, TestTerm, TimeProfile,
    WeylCauchyData,
};

/// Two overlapping tapered bumps inside the ball of radius 0.83.
pub(crate) fn smooth_spec() -> StateSpec {
    StateSpec::from_terms(vec![
        ProfileTerm::Bump {
            center: [0.1, -0.05, 0.05],
            radius: 0.7,
            degree: 5,
            taper: 6.0,
            spinor: vec![[1.0, 0.0], [0.0, 0.5]],
        },
        ProfileTerm::Bump {
            center: [-0.2, 0.15, 0.1],
            radius: 0.55,
            degree: 4,
            taper: 5.0,
            spinor: vec![[0.7, 0.0], [0.0, -0.3]],
        },
    ])
}

/// Broad, well-resolved bump of radius 1.6.
pub(crate) fn wide_spec() -> StateSpec {
    StateSpec::from_terms(vec![ProfileTerm::Bump {
        center: [0.1, -0.05, 0.05],
        radius: 1.6,
        degree: 6,
        taper: 2.0,
        spinor: vec![[1.0, 0.2], [-0.3, 0.5]],
    }])
}

/// Centered bump of radius 0.8 with a generic spinor.
pub(crate) fn ball_spec() -> StateSpec {
    StateSpec::from_terms(vec![ProfileTerm::Bump {
        center: [0.0, 0.0, 0.0],
        radius: 0.8,
        degree: 5,
        taper: 6.0,
        spinor: vec![[1.0, 0.0], [0.3, 0.5]],
    }])
}

/// Samples a state description.
pub(crate) fn sample(grid: &GridSpec, spec: &StateSpec) -> Result<WeylCauchyData> {
    synthesize_cauchy(grid, spec)
}

/// Compactly supported test function inside the double cone, used for the
/// on-shell and V-map checks.
pub(crate) fn onshell_testfunction() -> TestFunctionSpec {
    TestFunctionSpec {
        terms: vec![TestTerm {
            time: TimeProfile::Bump {
                center: 0.0,
                radius: 0.3,
                degree: 6,
            },
            space: SpaceProfile::Bump {
                center: [0.05, -0.1, 0.0],
                radius: 0.45,
                degree: 6,
            },
            spinor: [[1.0, 0.0], [0.3, -0.4]],
        }],
    }
}

/// Test function for the `E_λ` cross-check of the modular suite.
pub(crate) fn modular_testfunction() -> TestFunctionSpec {
    TestFunctionSpec {
        terms: vec![TestTerm {
            time: TimeProfile::Bump {
                center: 0.0,
                radius: 0.38,
                degree: 7,
            },
            space: SpaceProfile::Bump {
                center: [0.0, 0.0, 0.0],
                radius: 0.6,
                degree: 7,
            },
            spinor: [[1.0, 0.0], [0.0, 0.5]],
        }],
    }
}

/// A random admissible entropy state description: one or two tapered bumps
/// whose supports lie within the ball of radius 0.9. Radii stay above 0.74,
/// where the bumps are resolved on the default grid.
pub(crate) fn random_entropy_spec(rng: &mut ChaCha8Rng) -> StateSpec {
    let terms = rng.gen_range(1..=2);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let radius = rng.gen_range(0.74..0.82);
        let reach = 0.9 - radius;
        let center = loop {
            let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-reach..reach));
            if c.iter().map(|v| v * v).sum::<f64>().sqrt() <= reach {
                break c;
            }
        };
        let spinor = (0..2)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        out.push(ProfileTerm::Bump {
            center,
            radius,
            degree: 5,
            taper: 6.0,
            spinor,
        });
    }
    StateSpec::from_terms(out)
}

/// Samples, embeds and normalizes a state description.
pub(crate) fn unit_majorana(grid: &GridSpec, spec: &StateSpec) -> Result<(MajoranaState, f64)> {
    majorana_embed(&synthesize_cauchy(grid, spec)?).normalized()
}
