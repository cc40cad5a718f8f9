//! Exact-algebra suite: randomized instances of the spinor, helicity and
//! Dirac-matrix identities. Errors are scaled by the natural size of each
//! side so that the tolerances are relative.

use num_complex::Complex64 as C64;
use rand::Rng;

use super::{max_of, random_four_vector, random_momentum, stream};
use crate::cli_harness::SuiteContext;
use crate::error::Result;
use crate::spinor_algebra::{
    dirac_matrices, iota_matrix, norm3, nu0, onshell_matrices, slash2, DiracMatrices, FourVector, Matrix2C, Matrix4C,
    SlashVariant,
};

/// Checks emitted by this suite.
pub(crate) const CHECKS: &[&str] = &[
    "slash_determinant",
    "ppm_square_plus",
    "ppm_square_minus",
    "ppm_product",
    "ppm_difference",
    "sigma2_conjugation",
    "nu0_helicity",
    "nu0_dyad",
    "iota_square",
    "iota_compatibility",
    "gamma_anticommutator",
    "gamma_sigma_product",
    "charge_conjugation_identity",
    "boost_su22",
    "boost_group_law",
    "poincare_su22",
];

const TOL: f64 = 1e-12;
const I: C64 = C64::new(0.0, 1.0);

fn gamma_dot(d: &DiracMatrices, a: &[f64; 4]) -> Matrix4C {
    (0..4).fold(Matrix4C::zero(), |acc, mu| acc + d.gamma[mu].scale_re(a[mu]))
}

fn alpha_dot(d: &DiracMatrices, a: &[f64; 3]) -> Matrix4C {
    (0..3).fold(Matrix4C::zero(), |acc, k| acc + d.alpha[k].scale_re(a[k]))
}

fn random_sl2c(rng: &mut rand_chacha::ChaCha8Rng) -> Matrix2C {
    loop {
        let m = Matrix2C::new(
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let det = m.det();
        if det.norm() > 0.2 {
            return m.scale(det.sqrt().inv());
        }
    }
}

pub(crate) fn run(ctx: &mut SuiteContext<'_>) -> Result<()> {
    let n = ctx.config().instances();
    let seed = ctx.config().seed;
    let d = dirac_matrices();

    let mut rng = stream(seed, 1);
    let det_err = max_of((0..n).map(|_| {
        let x = random_four_vector(&mut rng, 2.0);
        let scale = x.x0 * x.x0 + x.spatial_norm_sq();
        let u = (slash2(&x, SlashVariant::Under).det() - x.minkowski_square()).norm();
        let t = (slash2(&x, SlashVariant::Tilde).det() - x.minkowski_square()).norm();
        u.max(t) / scale
    }));
    ctx.bound("slash_determinant", det_err, TOL);

    let mut rng = stream(seed, 2);
    let (mut sq_plus, mut sq_minus, mut prod, mut diff, mut conj) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut hel, mut dyad, mut iota_sq, mut iota_comp) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let s2 = Matrix2C::pauli(2);
    for _ in 0..n {
        let p = random_momentum(&mut rng);
        let pn = norm3(&p);
        let (pp, pm) = onshell_matrices(&p)?;
        let two = Matrix2C::identity().scale_re(2.0 * pn);
        sq_plus = sq_plus.max((pp * pp).dist(&pp.scale_re(2.0 * pn)) / (pn * pn));
        sq_minus = sq_minus.max((pm * pm).dist(&pm.scale_re(-2.0 * pn)) / (pn * pn));
        prod = prod.max((pp * pm).max_abs() / (pn * pn));
        diff = diff.max((pp - pm).dist(&two) / pn);
        for sign in [1.0, -1.0] {
            let on = FourVector::on_shell(p, sign);
            let lhs = s2 * slash2(&on, SlashVariant::Tilde) * s2;
            let rhs = slash2(&on, SlashVariant::Under).conj();
            conj = conj.max(lhs.dist(&rhs) / pn);
        }
        let v = nu0(&p)?;
        let mv = pm.apply(&v);
        let unit = (v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs();
        hel = hel.max((mv[0].norm().max(mv[1].norm()) / pn).max(unit));
        let outer = Matrix2C::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        );
        dyad = dyad.max(outer.dist(&pp.scale_re(0.5 / pn)));
        let io = iota_matrix(&p)?;
        iota_sq = iota_sq.max((io * io).dist(&Matrix2C::identity().scale_re(-1.0)));
        let c1 = (pp * io).dist(&pp.scale(I)) / pn;
        let c2 = (io.dagger() * pm).dist(&pm.scale(I)) / pn;
        iota_comp = iota_comp.max(c1.max(c2));
    }
    ctx.bound("ppm_square_plus", sq_plus, TOL);
    ctx.bound("ppm_square_minus", sq_minus, TOL);
    ctx.bound("ppm_product", prod, TOL);
    ctx.bound("ppm_difference", diff, TOL);
    ctx.bound("sigma2_conjugation", conj, TOL);
    ctx.bound("nu0_helicity", hel, TOL);
    ctx.bound("nu0_dyad", dyad, TOL);
    ctx.bound("iota_square", iota_sq, TOL);
    ctx.bound("iota_compatibility", iota_comp, TOL);

    let mut rng = stream(seed, 3);
    let mut table = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let want = Matrix4C::identity().scale_re(2.0 * DiracMatrices::metric(mu, nu));
            table = table.max(d.gamma[mu].anticommutator(&d.gamma[nu]).dist(&want));
        }
    }
    let (mut anti, mut sigma, mut cc) = (table, 0.0f64, 0.0f64);
    for _ in 0..n {
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let b: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ab = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
        let (ga, gb) = (gamma_dot(d, &a), gamma_dot(d, &b));
        anti = anti.max(ga.anticommutator(&gb).dist(&Matrix4C::identity().scale_re(2.0 * ab)) / (na * nb));

        let (a3, b3) = ([a[1], a[2], a[3]], [b[1], b[2], b[3]]);
        let lhs = alpha_dot(d, &a3) * alpha_dot(d, &b3);
        let mut rhs = Matrix4C::identity().scale_re(a3[0] * b3[0] + a3[1] * b3[1] + a3[2] * b3[2]);
        for j in 0..3 {
            for k in 0..3 {
                rhs = rhs + d.sigma[j][k].scale(I * (a3[j] * b3[k]));
            }
        }
        sigma = sigma.max(lhs.dist(&rhs) / (na * nb));

        let g = gamma_dot(d, &[0.0, a[1], a[2], a[3]]);
        let l = d.charge_conjugation * d.gamma[0] * g.conj();
        let r = g * d.gamma[0] * d.charge_conjugation;
        cc = cc.max(l.dist(&r) / na);
    }
    ctx.bound("gamma_anticommutator", anti, TOL);
    ctx.bound("gamma_sigma_product", sigma, TOL);
    ctx.bound("charge_conjugation_identity", cc, TOL);

    let mut rng = stream(seed, 4);
    let (mut su22, mut law, mut poincare) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n {
        let (l, m) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (el, em) = (d.modular_boost(l), d.modular_boost(m));
        let elm = d.modular_boost(l + m);
        let scale = el.max_abs().powi(2);
        su22 = su22.max(d.su22_defect(&el) / scale);
        law = law.max((el * em).dist(&elm) / elm.max_abs());
        let a = random_sl2c(&mut rng);
        let y = random_four_vector(&mut rng, 1.0);
        let g = d.poincare(&a, &y)?;
        poincare = poincare.max(d.su22_defect(&g) / g.max_abs().powi(4));
    }
    ctx.bound("boost_su22", su22, TOL);
    ctx.bound("boost_group_law", law, TOL);
    ctx.bound("poincare_su22", poincare, TOL);
    ctx.diagnostic("instances", n as f64);
    Ok(())
}
