//! Property-based tests of the algebraic, geometric and Hilbert-space
//! invariants.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use conemod::cli_harness::singular_parameters;
use conemod::conformal_flow::{f_profile, jacobian, nu, tau};
use conemod::dirac_majorana::majorana_embed;
use conemod::entropy::{entropy_fourier, entropy_via_generator};
use conemod::spinor_algebra::{dirac_matrices, iota_matrix, norm3, onshell_matrices, FourVector, Matrix2C};
use conemod::wave_space::{
    apply_iota, evolve, inner, synthesize_cauchy, GridSpec, ProfileTerm, StateSpec, WeylCauchyData,
};

fn momentum() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-5.0..5.0f64).prop_filter("away from p = 0", |p| norm3(p) > 1e-2)
}

fn interior_point() -> impl Strategy<Value = FourVector> {
    (-0.95..0.95f64, prop::array::uniform3(-1.0..1.0f64), 0.0..1.0f64).prop_filter_map(
        "inside the double cone",
        |(t, dir, frac)| {
            let n = norm3(&dir);
            if n < 1e-3 {
                return None;
            }
            let r = (1.0 - t.abs()) * frac * 0.999 / n;
            Some(FourVector::new(t, dir[0] * r, dir[1] * r, dir[2] * r))
        },
    )
}

fn bump(center: [f64; 3], radius: f64, spinor: [[f64; 2]; 2]) -> StateSpec {
    StateSpec::from_terms(vec![ProfileTerm::Bump {
        center,
        radius,
        degree: 5,
        taper: 6.0,
        spinor: spinor.to_vec(),
    }])
}

fn spinor() -> impl Strategy<Value = [[f64; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(-1.0..1.0f64))
        .prop_filter("nonzero", |s| s.iter().flatten().any(|v| v.abs() > 0.1))
}

fn field(grid: &GridSpec, center: [f64; 3], radius: f64, s: [[f64; 2]; 2]) -> WeylCauchyData {
    synthesize_cauchy(grid, &bump(center, radius, s)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn onshell_projectors_are_orthogonal(p in momentum()) {
        let (pp, pm) = onshell_matrices(&p).unwrap();
        let pn = norm3(&p);
        prop_assert!((pp * pm).max_abs() / (pn * pn) < 1e-13);
        prop_assert!((pp - pm).dist(&Matrix2C::identity().scale_re(2.0 * pn)) / pn < 1e-13);
    }

    #[test]
    fn complex_structure_squares_to_minus_one(p in momentum()) {
        let io = iota_matrix(&p).unwrap();
        prop_assert!((io * io).dist(&Matrix2C::identity().scale_re(-1.0)) < 1e-13);
    }

    #[test]
    fn modular_boosts_form_a_one_parameter_group(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let d = dirac_matrices();
        let (ea, eb, eab) = (d.modular_boost(a), d.modular_boost(b), d.modular_boost(a + b));
        prop_assert!((ea * eb).dist(&eab) / eab.max_abs() < 1e-13);
        prop_assert!(d.su22_defect(&ea) < 1e-12);
    }

    #[test]
    fn flow_preserves_the_double_cone(x in interior_point(), l in -6.0..6.0f64, m in -3.0..3.0f64) {
        let y = nu(l, &x).unwrap();
        prop_assert!(y.in_unit_double_cone());
        prop_assert!(nu(m, &y).unwrap().max_abs_diff(&nu(l + m, &x).unwrap()) < 1e-11);
        prop_assert!(jacobian(l, &x).unwrap() > 0.0);
    }

    #[test]
    fn conformal_factor_inverts_along_the_flow(
        c in prop::array::uniform4(-2.0..2.0f64),
        l in -3.0..3.0f64,
    ) {
        let x = FourVector::new(c[0], c[1], c[2], c[3]);
        let t = tau(l, &x);
        prop_assume!(t.abs() > 0.05);
        let back = tau(-l, &nu(l, &x).unwrap());
        prop_assert!((back * t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn profile_round_trips(u in -0.999..0.999f64, l in -3.0..3.0f64) {
        let v = f_profile(l, u).unwrap();
        prop_assert!(v.abs() < 1.0);
        prop_assert!((f_profile(-l, v).unwrap() - u).abs() < 1e-12);
    }

    #[test]
    fn singular_parameters_are_roots(c in prop::array::uniform4(-3.0..3.0f64)) {
        let x = FourVector::new(c[0], c[1], c[2], c[3]);
        for r in singular_parameters(&x) {
            prop_assert!(tau(r, &x).abs() < 1e-9 * (1.0 + x.x0.abs() + x.spatial_norm_sq()) * r.cosh());
        }
        if x.in_unit_double_cone() {
            prop_assert!(singular_parameters(&x).is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wave_inner_product_is_hermitian_and_compatible_with_iota(
        c1 in prop::array::uniform3(-0.3..0.3f64),
        c2 in prop::array::uniform3(-0.3..0.3f64),
        s1 in spinor(),
        s2 in spinor(),
    ) {
        let grid = GridSpec::new(2.0, 24).unwrap();
        let a = field(&grid, c1, 0.8, s1);
        let b = field(&grid, c2, 0.7, s2);
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12 * (1.0 + ab.norm()));
        let aa = inner(&a, &a).unwrap();
        prop_assert!(aa.re > 0.0 && aa.im.abs() < 1e-12 * aa.re);
        let ai = inner(&a, &apply_iota(&b)).unwrap();
        prop_assert!((ai - C64::new(0.0, 1.0) * ab).norm() < 1e-10 * (1.0 + ab.norm()));
    }

    #[test]
    fn evolution_is_unitary(c in prop::array::uniform3(-0.3..0.3f64), s in spinor(), t in 0.0..0.6f64) {
        let grid = GridSpec::new(2.0, 24).unwrap();
        let a = field(&grid, c, 0.8, s);
        let n0 = inner(&a, &a).unwrap().re;
        let n1 = inner(&evolve(&a, t).unwrap(), &evolve(&a, t).unwrap()).unwrap().re;
        prop_assert!((n1 - n0).abs() < 1e-12 * n0);
    }

    #[test]
    fn relative_entropy_is_nonnegative(
        c in prop::array::uniform3(-0.1..0.1f64),
        radius in 0.74..0.82f64,
        s in spinor(),
    ) {
        let grid = GridSpec::new(1.6, 32).unwrap();
        let state = majorana_embed(&field(&grid, c, radius, s)).normalized().unwrap().0;
        let generator = entropy_via_generator(&state).unwrap();
        let fourier = entropy_fourier(&state).unwrap().value;
        prop_assert!(generator >= -1e-6);
        prop_assert!((generator - fourier).abs() <= 1e-6 * generator.abs(), "{generator} vs {fourier}");
    }
}
