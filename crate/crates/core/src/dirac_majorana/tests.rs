use super::*;
use crate::modular_flow::modular_generator;
use crate::wave_space::{apply_iota, evolve, inner, synthesize_cauchy, GridSpec, ProfileTerm, StateSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bump_state(grid: &GridSpec, center: [f64; 3], spinor: [[f64; 2]; 2]) -> WeylCauchyData {
    let spec = StateSpec::from_terms(vec![ProfileTerm::Bump {
        center,
        radius: 0.9,
        degree: 8,
        taper: 1.0,
        spinor: spinor.to_vec(),
    }]);
    // Band-limited so that conjugation pairs every mode exactly.
    synthesize_cauchy(grid, &spec).unwrap().without_nyquist()
}

fn state_a(grid: &GridSpec) -> WeylCauchyData {
    bump_state(grid, [0.0, 0.0, 0.0], [[1.0, 0.0], [0.3, 0.5]])
}

fn state_b(grid: &GridSpec) -> WeylCauchyData {
    bump_state(grid, [0.1, -0.05, 0.0], [[0.2, -0.7], [0.6, 0.1]])
}

fn grid32() -> GridSpec {
    GridSpec::new(2.5, 32).unwrap()
}

#[test]
fn assemble_stacks_blocks_and_checks_grids() {
    let g = grid32();
    let phi = state_a(&g);
    let zero = WeylCauchyData::zeros(g, 0.5);
    let psi = assemble(&phi, &zero).unwrap();
    assert_eq!(right_block(&psi), phi);
    assert_eq!(left_block(&psi).l2_norm(), 0.0);
    let other = WeylCauchyData::zeros(GridSpec::new(2.5, 16).unwrap(), 0.5);
    assert!(matches!(assemble(&phi, &other), Err(Error::GridMismatch)));
}

#[test]
fn dirac_evolution_is_blockwise_chiral_evolution() {
    let g = grid32();
    let right = state_a(&g);
    let left = parity_reflect(&state_b(&g));
    let psi = assemble(&right, &left).unwrap();
    let t = 0.4;
    let moved = evolve_dirac(&psi, t).unwrap();
    let up = evolve(&right, t).unwrap();
    // The left-handed propagator at time t is the right-handed one at −t.
    let lo = evolve(&left, -t).unwrap();
    assert!(right_block(&moved).relative_distance(&up).unwrap() < 1e-12);
    assert!(left_block(&moved).relative_distance(&lo).unwrap() < 1e-12);
}

#[test]
fn dirac_residual_is_second_order_in_the_time_step() {
    let g = GridSpec::new(2.5, 48).unwrap();
    let psi = majorana_embed(&state_a(&g)).dirac().clone();
    let h = g.spacing();
    let coarse = dirac_residual(&psi, 0.5, 0.2 * h).unwrap();
    let fine = dirac_residual(&psi, 0.5, 0.1 * h).unwrap();
    let order = (coarse / fine).log2();
    assert!((order - 2.0).abs() < 0.05, "order {order}");
    assert!(dirac_residual(&psi, 0.5, 0.0).is_err());
}

#[test]
fn parity_reflection_is_an_involution_and_negates_momenta() {
    let g = grid32();
    let phi = state_b(&g);
    let r = parity_reflect(&phi);
    assert_eq!(parity_reflect(&r), phi);
    let even = state_a(&g);
    assert!(parity_reflect(&even).relative_distance(&even).unwrap() < 1e-12);
    let (s, sr) = (transform(&phi), transform(&r));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let idx = rng.gen_range(0..g.len());
        let a = sr.at(idx);
        let b = s.at(g.negated_index(idx));
        assert!((a[0] - b[0]).norm() + (a[1] - b[1]).norm() < 1e-10 * (1.0 + b[0].norm()));
    }
}

#[test]
fn embedding_satisfies_the_majorana_condition() {
    let g = grid32();
    let m = majorana_embed(&state_b(&g));
    assert!(majorana_defect(m.dirac()) < 1e-12);
    assert!(charge_conjugate(m.dirac()).relative_distance(m.dirac()).unwrap() < 1e-14);
    let zero = majorana_embed(&WeylCauchyData::zeros(g, 0.5));
    assert_eq!(zero.dirac().l2_norm(), 0.0);
    assert_eq!(majorana_defect(zero.dirac()), 0.0);
}

#[test]
fn defect_of_a_chiral_state_is_the_norm_ratio() {
    // For (Φ, 0) the conjugate is (0, σ₂Φ̄), orthogonal to (Φ, 0) pointwise,
    // so the defect is ‖(Φ, −σ₂Φ̄)‖/‖(Φ, 0)‖ = √2.
    let g = grid32();
    let psi = assemble(&state_a(&g), &WeylCauchyData::zeros(g, 0.5)).unwrap();
    assert!((majorana_defect(&psi) - std::f64::consts::SQRT_2).abs() < 1e-14);
}

#[test]
fn conjugation_identity_for_the_spatial_gammas() {
    // C γ⁰ conj(γᵏ) = γᵏ γ⁰ C, which makes the Majorana subspace complex.
    let d = dirac_matrices();
    let c = d.charge_conjugation;
    for k in 1..4 {
        let lhs = c * d.gamma[0] * d.gamma[k].conj();
        let rhs = d.gamma[k] * d.gamma[0] * c;
        assert!(lhs.dist(&rhs) < 1e-15);
    }
}

#[test]
fn embedding_is_isometric_for_the_inner_products() {
    let g = grid32();
    let (phi, chi) = (state_a(&g), state_b(&g));
    let (mp, mc) = (majorana_embed(&phi), majorana_embed(&chi));
    let dirac = inner_dirac(mp.dirac(), mc.dirac()).unwrap();
    let weyl = inner(&phi, &chi).unwrap();
    assert!(
        (dirac - weyl).norm() < 1e-10 * phi.l2_norm() * chi.l2_norm(),
        "{dirac} {weyl}"
    );
    assert!((mp.norm() - inner(&phi, &phi).unwrap().re.sqrt()).abs() < 1e-10 * phi.l2_norm());
}

#[test]
fn dirac_norm_equals_the_sampled_l2_norm_and_is_hermitian() {
    let g = grid32();
    let psi = assemble(&state_a(&g), &parity_reflect(&state_b(&g))).unwrap();
    let n = inner_dirac(&psi, &psi).unwrap();
    assert!((n.re - psi.l2_norm_sq()).abs() < 1e-10 * psi.l2_norm_sq());
    assert!(n.im.abs() < 1e-12 * n.re);
    let chi = majorana_embed(&state_b(&g)).dirac().clone();
    let ab = inner_dirac(&psi, &chi).unwrap();
    let ba = inner_dirac(&chi, &psi).unwrap();
    assert!((ab - ba.conj()).norm() < 1e-12 * psi.l2_norm() * chi.l2_norm());
}

#[test]
fn block_reduction_of_the_inner_product() {
    let g = grid32();
    let (a, b) = (state_a(&g), state_b(&g));
    let (c, d) = (parity_reflect(&b), parity_reflect(&a));
    let lhs = inner_dirac(&assemble(&a, &c).unwrap(), &assemble(&b, &d).unwrap()).unwrap();
    // The left-handed product uses the weights of momentum −p.
    let left = inner(&parity_reflect(&c), &parity_reflect(&d)).unwrap();
    let rhs = inner(&a, &b).unwrap() + left;
    assert!((lhs - rhs).norm() < 1e-12 * a.l2_norm() * b.l2_norm());
}

#[test]
fn dirac_complex_structure() {
    let g = grid32();
    let psi = assemble(&state_a(&g), &parity_reflect(&state_b(&g))).unwrap();
    let ip = apply_iota_dirac(&psi);
    let ipp = apply_iota_dirac(&ip);
    assert!(ipp.relative_distance(&psi.scaled(C64::new(-1.0, 0.0))).unwrap() < 1e-12);
    assert!((ip.l2_norm() - psi.l2_norm()).abs() < 1e-12 * psi.l2_norm());
    let nn = inner_dirac(&psi, &psi).unwrap();
    let a = inner_dirac(&ip, &psi).unwrap();
    let b = inner_dirac(&psi, &ip).unwrap();
    assert!((a + C64::i() * nn).norm() < 1e-10 * nn.norm(), "{a} {nn}");
    assert!((b - C64::i() * nn).norm() < 1e-10 * nn.norm());
}

#[test]
fn iota_on_an_axis_mode_acts_blockwise() {
    let g = GridSpec::new(2.0, 16).unwrap();
    let idx = g.flat(0, 0, 3);
    let mut spec = [
        vec![ZERO; g.len()],
        vec![ZERO; g.len()],
        vec![ZERO; g.len()],
        vec![ZERO; g.len()],
    ];
    let v = [
        C64::new(0.3, 0.1),
        C64::new(-0.2, 0.5),
        C64::new(0.7, 0.0),
        C64::new(0.0, -0.4),
    ];
    for c in 0..4 {
        spec[c][idx] = v[c];
    }
    let field = inverse_transform(&DiracSpectrum::new(g, spec).unwrap(), g.half_width());
    let out = transform(&apply_iota_dirac(&field)).at(idx);
    let s = g.momentum(idx)[2].signum();
    let expected = [
        v[0] * C64::i() * s,
        -v[1] * C64::i() * s,
        -v[2] * C64::i() * s,
        v[3] * C64::i() * s,
    ];
    for c in 0..4 {
        assert!((out[c] - expected[c]).norm() < 1e-12);
    }
}

#[test]
fn iota_maps_majorana_states_to_majorana_states() {
    let g = grid32();
    let m = majorana_embed(&state_b(&g));
    assert!(majorana_defect(&apply_iota_dirac(m.dirac())) < 1e-12);
    let expected = majorana_embed(&apply_iota(m.weyl()));
    assert!(apply_iota_dirac(m.dirac()).relative_distance(expected.dirac()).unwrap() < 1e-12);
}

#[test]
fn k_dirac_reduces_to_the_weyl_generator_on_the_upper_block() {
    let g = grid32();
    let phi = state_b(&g);
    let psi = assemble(&phi, &WeylCauchyData::zeros(g, 0.5)).unwrap();
    let k = k_dirac(&psi);
    assert!(right_block(&k).relative_distance(&modular_generator(&phi)).unwrap() < 1e-13);
    assert_eq!(left_block(&k).l2_norm(), 0.0);
}

#[test]
fn k_dirac_at_the_origin() {
    let g = grid32();
    let psi = majorana_embed(&state_b(&g)).dirac().clone();
    let n = g.points();
    let idx = g.flat(n / 2, n / 2, n / 2);
    let mut expected = [ZERO; 4];
    for a in 0..3 {
        let d = partial_derivative(&psi, a).at(idx);
        let v = dirac_matrices().alpha[a].apply(&d);
        for c in 0..4 {
            expected[c] -= v[c] * PI;
        }
    }
    let got = k_dirac(&psi).at(idx);
    for c in 0..4 {
        assert!((got[c] - expected[c]).norm() < 1e-12);
    }
}

#[test]
fn k_dirac_preserves_the_majorana_subspace_and_intertwines() {
    let g = GridSpec::new(2.5, 48).unwrap();
    let phi = state_b(&g);
    let m = majorana_embed(&phi);
    let k = k_dirac(m.dirac());
    assert!(majorana_defect(&k) < 1e-10);
    let dirac = inner_dirac(m.dirac(), &k).unwrap();
    let weyl = inner(&phi, &modular_generator(&phi)).unwrap();
    assert!((dirac - weyl).norm() < 1e-8 * weyl.norm(), "{dirac} {weyl}");
    assert!(dirac.re.abs() < 1e-8 * dirac.norm());
}

#[test]
fn dirac_evolution_preserves_the_inner_product() {
    let g = grid32();
    let psi = assemble(&state_a(&g), &parity_reflect(&state_b(&g))).unwrap();
    let chi = majorana_embed(&state_b(&g)).dirac().clone();
    let before = inner_dirac(&psi, &chi).unwrap();
    let after = inner_dirac(&evolve_dirac(&psi, 0.7).unwrap(), &evolve_dirac(&chi, 0.7).unwrap()).unwrap();
    assert!((before - after).norm() < 1e-12 * psi.l2_norm() * chi.l2_norm());
}

#[test]
fn normalization_and_recovery() {
    let g = grid32();
    let m = majorana_embed(&state_a(&g)).scaled(0.5);
    let (unit, factor) = m.normalized().unwrap();
    assert!((unit.norm() - 1.0).abs() < 1e-12);
    assert!((factor * m.norm() - 1.0).abs() < 1e-12);
    let back = MajoranaState::from_dirac(unit.dirac().clone(), 1e-12).unwrap();
    assert!(back.weyl().relative_distance(unit.weyl()).unwrap() < 1e-14);
    let chiral = assemble(&state_a(&g), &WeylCauchyData::zeros(g, 0.5)).unwrap();
    assert!(MajoranaState::from_dirac(chiral, 1e-12).is_err());
    let zero = majorana_embed(&WeylCauchyData::zeros(g, 0.5));
    assert!(matches!(zero.normalized(), Err(Error::NotNormalized { .. })));
}
