//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them) and asserting its quantitative
//! thresholds and runtime budget.

use std::time::Instant;

use sqz_core::boundary::{
    levi_classify, paraboloidal_sequence, well_convexifiable_check, BoundaryPoint,
};
use sqz_core::domains::{
    build_egg_domain, model_re_w_plus_abs_z, radial_subharmonicity, unshear, DomainSpec,
    RadialProfile,
};
use sqz_core::hartogs::{
    locally_separating_check, omega_surface_samples, potential_phi, psh_scan, psh_scan_grid,
    sup_norm_test, HartogsSpec, PhiValue,
};
use sqz_core::kobayashi::{ball_distance, chain_length_in, disc_chain_upper, Ambient};
use sqz_core::numeric::{self, c, C};
use sqz_core::polyalg::{MixedPolynomial, MultiIndex};
use sqz_core::scaling::{b_bound_check, df_psh_check, run_scaling};
use sqz_core::squeeze::{
    ball_support, hhr_lower_bound, removal_upper_bound, CompactSet, SupportBall,
};

struct Criterion {
    id: u32,
    name: &'static str,
    budget_s: f64,
    start: Instant,
}

impl Criterion {
    fn begin(id: u32, name: &'static str, budget_s: f64) -> Self {
        Criterion { id, name, budget_s, start: Instant::now() }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed().as_secs_f64();
        println!(
            "acceptance {:02} ({}): PASS in {elapsed:.2}s (budget {}s)",
            self.id, self.name, self.budget_s
        );
        assert!(
            elapsed < self.budget_s,
            "criterion {} exceeded its runtime budget: {elapsed:.2}s >= {}s",
            self.id,
            self.budget_s
        );
    }
}

fn random_real_poly(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> MixedPolynomial {
    use rand::Rng;
    let mut p = MixedPolynomial::zero(n);
    let terms = rng.gen_range(2..8);
    for _ in 0..terms {
        let alpha: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let beta: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        if alpha.iter().sum::<u32>() + beta.iter().sum::<u32>() > 6 {
            continue;
        }
        let coeff = c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0);
        p.add_term(MultiIndex(alpha), MultiIndex(beta), coeff);
    }
    let p = p.add(&p.conjugate()).scale(c(0.5, 0.0));
    p
}

/// Criterion 1: complex Hessians match central finite differences within
/// 1e-6 relative on 100 random real-valued mixed polynomials.
#[test]
fn acceptance_01_hessian_oracle_suite() {
    let crit = Criterion::begin(1, "hessian finite-difference oracle", 10.0);
    let mut rng = numeric::rng(101);
    use rand::Rng;
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(1..=3);
        let p = random_real_poly(&mut rng, n);
        if p.is_zero() {
            continue;
        }
        checked += 1;
        let z: Vec<C> = (0..n)
            .map(|_| c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0))
            .collect();
        let h = p.complex_hessian(&z).unwrap();
        let f = |x: &[C]| p.eval_real(x).unwrap();
        let fd = numeric::fd_complex_hessian(&f, &z, 1e-4);
        let scale = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| h.entry(j, k).norm())
            .fold(1.0f64, f64::max);
        for j in 0..n {
            for k in 0..n {
                let err = (fd[(j, k)] - h.entry(j, k)).norm();
                assert!(
                    err <= 1e-6 * scale,
                    "Hessian mismatch at poly {checked} entry ({j},{k}): {err:e}"
                );
            }
        }
    }
    crit.finish();
}

/// Criterion 2: Levi dichotomy of the unsheared egg domain and the
/// well-convexifiable check at p* = (0, -(1+P(0))).
#[test]
fn acceptance_02_egg_domain_reproduction() {
    let crit = Criterion::begin(2, "egg-domain Levi dichotomy", 60.0);
    let egg =
        build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::pow4_bump()).unwrap();
    let (omega, _) = unshear(&egg).unwrap();

    // 10^4 boundary samples: random rays plus a stratum near the weak
    // circle {z = 0, |w| = 1} where the eigenvalue must vanish.
    let mut samples = omega.sample_boundary(9000, 202);
    let sigma = RadialProfile::pow4_bump();
    for i in 0..1000 {
        let th = 2.0 * std::f64::consts::PI * i as f64 / 1000.0;
        let r = if i % 3 == 0 { 0.0 } else { 5e-4 * (1.0 + (i % 7) as f64) / 7.0 };
        let z = c(r * (3.0 * th).cos(), r * (3.0 * th).sin());
        let w_mod = (1.0 - sigma.value(z.norm_sqr())).sqrt();
        samples.push(vec![z, c(w_mod * th.cos(), w_mod * th.sin())]);
    }
    assert!(samples.len() >= 10_000);

    let tube_dist = |q: &[C]| -> f64 {
        let dz = q[0].norm();
        let dw = (q[1].norm() - 1.0).abs();
        (dz * dz + dw * dw).sqrt()
    };
    let mut min_outside_005: f64 = f64::INFINITY;
    for q in &samples {
        let bp = BoundaryPoint::at(&omega, q, 1e-6).unwrap();
        let report = levi_classify(&omega, &bp, 1e-7).unwrap();
        let lam = report.eigenvalues[0];
        let d = tube_dist(q);
        if lam <= 1e-12 {
            assert!(
                d <= 1e-3,
                "vanishing Levi eigenvalue ({lam:e}) outside the 1e-3 tube (distance {d:e})"
            );
        }
        if d > 0.05 {
            min_outside_005 = min_outside_005.min(lam);
        }
    }
    assert!(
        min_outside_005 > 1e-8,
        "smallest eigenvalue outside the 0.05 tube is {min_outside_005:e}"
    );

    let report = well_convexifiable_check(&egg, &[c(0.0, 0.0), c(-1.0, 0.0)], 2024).unwrap();
    assert!(report.pass, "well-convexifiable check failed: {report:?}");
    crit.finish();
}

/// Criterion 3: radial subharmonicity verdicts for x^2, x^4 and -x.
#[test]
fn acceptance_03_radial_subharmonicity() {
    let crit = Criterion::begin(3, "radial subharmonicity checks", 1.0);
    let grid: Vec<f64> = (1..=2000).map(|i| i as f64 / 2000.0).collect();
    let r = radial_subharmonicity(&RadialProfile::power(2), &grid);
    assert!(r.subharmonic && (r.min_value - 4.0).abs() < 1e-9);
    let r = radial_subharmonicity(&RadialProfile::power(4), &grid);
    assert!(r.subharmonic && r.min_value > 0.0 && r.min_value < 1e-3);
    let r = radial_subharmonicity(&RadialProfile::neg_linear(), &grid);
    assert!(!r.subharmonic && r.min_value < 0.0);
    crit.finish();
}

/// Criterion 4: pipeline exactness on Re w + |z|^{2m} with normal approach.
#[test]
fn acceptance_04_scaling_exactness() {
    let crit = Criterion::begin(4, "scaling self-similarity", 10.0);
    for m in [1u32, 2] {
        let (form, spec) = model_re_w_plus_abs_z(m, 1.5);
        let p0 = BoundaryPoint::at(&spec, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap();
        let schedule: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let seq = paraboloidal_sequence(&spec, &p0, 0.0, &schedule).unwrap();
        let run = run_scaling(&form, &spec, &seq.points, 2 * m + 2).unwrap();
        let expected = MixedPolynomial::re_of_var(2, 1).add(&MixedPolynomial::monomial(
            2,
            MultiIndex(vec![m, 0]),
            MultiIndex(vec![m, 0]),
            c(1.0, 0.0),
        ));
        for s in &run.steps {
            let d = s.rescaled.coeff_distance(&expected);
            assert!(d < 1e-12, "m = {m}, step {}: coefficient distance {d:e}", s.index);
            assert!(
                (s.blowup_ratio - 1.0).abs() < 1e-12,
                "m = {m}: eps^-1 delta^2m = {}",
                s.blowup_ratio
            );
        }
        assert!(run.converged);
    }
    crit.finish();
}

/// Criterion 5: the rescaled z-zbar coefficient decays (slope >= 1.5 against
/// delta, final below 1e-3) for m = 2, and stays pinned at 1 for m = 1.
#[test]
fn acceptance_05_cross_term_decay() {
    let crit = Criterion::begin(5, "cross-term decay surrogate", 20.0);
    // m = 2 paraboloidal with a steep schedule (the decay is ~ sqrt(t)).
    let (form, spec) = model_re_w_plus_abs_z(2, 1.5);
    let p0 = BoundaryPoint::at(&spec, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap();
    let schedule: Vec<f64> = (1..=10).map(|k| 10.0f64.powi(-k)).collect();
    let seq = paraboloidal_sequence(&spec, &p0, 1.0, &schedule).unwrap();
    let run = run_scaling(&form, &spec, &seq.points, 6).unwrap();
    let slope = run.c11_slope.expect("slope must be defined for the m = 2 run");
    assert!(slope >= 1.5, "log|C11| vs log delta slope {slope}");
    let final_c11 = run.steps.last().unwrap().c11.abs();
    assert!(final_c11 < 1e-3, "final |C11| = {final_c11:e}");

    // m = 1: the coefficient is pinned at 1 by the normalization.
    let (form, spec) = model_re_w_plus_abs_z(1, 1.5);
    let p0 = BoundaryPoint::at(&spec, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap();
    let schedule: Vec<f64> = (1..=10).map(|k| 10.0f64.powi(-k)).collect();
    let seq = paraboloidal_sequence(&spec, &p0, 1.0, &schedule).unwrap();
    let run = run_scaling(&form, &spec, &seq.points, 4).unwrap();
    for s in &run.steps {
        assert!(
            (s.c11 - 1.0).abs() <= 1e-9,
            "m = 1 step {}: C11 = {} drifted from 1",
            s.index,
            s.c11
        );
    }
    crit.finish();
}

/// Criterion 6: |b_nu| / dist stays bounded and decays on the m = 2
/// paraboloidal run.
#[test]
fn acceptance_06_shear_coefficient_bound() {
    let crit = Criterion::begin(6, "shear coefficient bound", 5.0);
    let (form, spec) = model_re_w_plus_abs_z(2, 1.5);
    let p0 = BoundaryPoint::at(&spec, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap();
    // Start at t = 1/4: the t = 1/2 point needs a pull-in depth beyond the
    // clipping box.
    let schedule: Vec<f64> = (2..=11).map(|k| 0.5f64.powi(k)).collect();
    let seq = paraboloidal_sequence(&spec, &p0, 1.0, &schedule).unwrap();
    let run = run_scaling(&form, &spec, &seq.points, 6).unwrap();
    let rep = b_bound_check(&run);
    assert!(rep.applicable);
    assert!(rep.pass, "max/median = {}", rep.max / rep.median);
    let first = rep.trajectory.first().unwrap();
    let last = rep.trajectory.last().unwrap();
    assert!(last < &(first * 0.5), "|b|/d did not decay: {} -> {}", first, last);

    // m = 1 is flagged inapplicable.
    let (form1, spec1) = model_re_w_plus_abs_z(1, 1.5);
    let p1 = BoundaryPoint::at(&spec1, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap();
    let seq1 = paraboloidal_sequence(&spec1, &p1, 1.0, &schedule).unwrap();
    let run1 = run_scaling(&form1, &spec1, &seq1.points, 4).unwrap();
    assert!(!b_bound_check(&run1).applicable);
    crit.finish();
}

/// Criterion 7: disc chains are exact on the ball to 1e-3 and satisfy the
/// triangle and inclusion-monotonicity properties with 1e-9 slack.
#[test]
fn acceptance_07_kobayashi_exactness() {
    let crit = Criterion::begin(7, "disc-chain exactness and metric laws", 120.0);
    let ball = DomainSpec::unit_ball(2);
    let mut rng = numeric::rng(707);
    use rand::Rng;
    let mut random_point = |max_norm: f64| -> Vec<C> {
        loop {
            let p: Vec<C> = (0..2)
                .map(|_| c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0))
                .collect();
            if numeric::cnorm(&p) < max_norm {
                return p;
            }
        }
    };
    // Exactness on 100 random pairs with norm <= 0.9.
    for i in 0..100 {
        let z = random_point(0.9);
        let w = random_point(0.9);
        let upper = disc_chain_upper(&ball, &z, &w, 40, 1000 + i).value;
        let exact = ball_distance(&z, &w).unwrap();
        assert!(
            (upper - exact).abs() <= 1e-3,
            "pair {i}: chain {upper} vs exact {exact}"
        );
    }
    // Triangle inequality on 100 random triples.
    for i in 0..100 {
        let z = random_point(0.85);
        let w = random_point(0.85);
        let y = random_point(0.85);
        let dzw = disc_chain_upper(&ball, &z, &w, 40, 2000 + i).value;
        let dzy = disc_chain_upper(&ball, &z, &y, 40, 3000 + i).value;
        let dyw = disc_chain_upper(&ball, &y, &w, 40, 4000 + i).value;
        assert!(dzw <= dzy + dyw + 1e-9, "triple {i}: {dzw} > {dzy} + {dyw}");
    }
    // Inclusion monotonicity on 100 random pairs.
    let small = DomainSpec::ball(2, &[c(0.0, 0.0), c(0.0, 0.0)], 0.7);
    for i in 0..100 {
        let z = random_point(0.6);
        let w = random_point(0.6);
        let inner = disc_chain_upper(&small, &z, &w, 40, 5000 + i);
        let outer = disc_chain_upper(&ball, &z, &w, 40, 6000 + i);
        let revalidated = chain_length_in(&ball, &inner.chain).expect("chain nests");
        assert!(outer.value <= revalidated + 1e-9, "pair {i}");
    }
    crit.finish();
}

/// Criterion 8: removal upper bound reproduces tanh(atanh(0.4)) = 0.4 at
/// (0.75, 0) exactly and decays monotonically to below 1e-3 along the
/// radial approach to the removed ball.
#[test]
fn acceptance_08_removal_upper_bound() {
    let crit = Criterion::begin(8, "removal upper bound", 10.0);
    let ambient = Ambient::UnitBall(2);
    let k = CompactSet::Ball { center: vec![c(0.0, 0.0); 2], radius: 0.5 };
    let z = [c(0.75, 0.0), c(0.0, 0.0)];
    let u = removal_upper_bound(&ambient, &k, &z, 40, 808).unwrap();
    assert!((u - 0.4).abs() <= 1e-6, "bound at (0.75, 0): {u}");
    let mut last = f64::INFINITY;
    let mut final_u = f64::INFINITY;
    for j in 0..10 {
        let r = 0.5 + 0.25 * 0.5f64.powi(j);
        let zr = [c(r, 0.0), c(0.0, 0.0)];
        let u = removal_upper_bound(&ambient, &k, &zr, 40, 808 + j as u64).unwrap();
        assert!(u <= last + 1e-9, "not monotone at r = {r}");
        last = u;
        final_u = u;
    }
    assert!(final_u < 1e-3, "final bound {final_u}");
    crit.finish();
}

/// Criterion 9: the embedding-chain lower bound is uniformly positive along
/// a paraboloidal sequence into the weakly pseudoconvex point of the egg
/// domain, and reproduces the ball-center numbers.
#[test]
fn acceptance_09_hhr_lower_bound() {
    let crit = Criterion::begin(9, "embedding-chain lower bound", 120.0);
    // Unit ball at the center: inscribed radius >= 0.33 (exactly 1/3 up to
    // sampling), certified bound <= 1.
    let ball = DomainSpec::unit_ball(2);
    let w0 = vec![c(0.0, 0.0), c(0.0, 0.0)];
    let hl = hhr_lower_bound(&ball, &w0, &ball_support(&ball), 4000, 909).unwrap();
    assert!(hl.inscribed >= 0.33, "ball-center inscribed radius {}", hl.inscribed);
    assert!(hl.inscribed <= 0.35, "sampling artifact: inscribed radius {}", hl.inscribed);
    assert!(hl.lower <= 1.0 && hl.lower > 0.0);

    // Egg domain: 10-point paraboloidal sequence into p* = (0, -1),
    // transported to the unsheared domain where the convexity holds.
    let egg =
        build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::pow4_bump()).unwrap();
    let (omega, shear) = unshear(&egg).unwrap();
    let p_star = [c(0.0, 0.0), c(-1.0, 0.0)];
    let p_egg = BoundaryPoint::at(&egg, &shear.apply_inverse(&p_star), 1e-9).unwrap();
    let schedule: Vec<f64> = (1..=10).map(|k| 1e-6 * 0.5f64.powi(k)).collect();
    let seq = paraboloidal_sequence(&egg, &p_egg, 1.0, &schedule).unwrap();
    let support = SupportBall { center: p_star.to_vec(), radius: 0.25 };
    let mut min_lower = f64::INFINITY;
    for (i, z) in seq.points.iter().enumerate() {
        let w = shear.apply(z);
        let hl = hhr_lower_bound(&omega, &w, &support, 3000, 910 + i as u64).unwrap();
        assert!(hl.lower <= 1.0, "point {i}: lower bound above 1");
        min_lower = min_lower.min(hl.lower);
    }
    assert!(min_lower > 0.01, "sequence lower bounds dipped to {min_lower}");
    crit.finish();
}

/// Criterion 10: the Hartogs domain D_2 with k_max = 20: 0 < V < 1 at 10^4
/// samples, psh scan passes, the upper bound decays below 0.05 along a
/// sequence into omega_2, and omega_2 locally separates a small ball.
#[test]
fn acceptance_10_hartogs_surrogate() {
    let crit = Criterion::begin(10, "Hartogs decay surrogate", 120.0);
    let spec = HartogsSpec::new(2, 20).unwrap();
    // 0 < V < 1 at 10^4 samples.
    let mut rng = numeric::rng(1010);
    use rand::Rng;
    let mut checked = 0;
    while checked < 10_000 {
        let r = 0.97 * rng.gen::<f64>().sqrt();
        let th = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        let z = [c(r * th.cos(), r * th.sin())];
        if let (PhiValue::Finite(p), _) = potential_phi(&spec, &z).unwrap() {
            let v = p.exp();
            assert!(v > 0.0 && v < 1.0, "V out of (0,1): {v}");
            checked += 1;
        }
    }
    // Psh scan on 10^3 points.
    let grid = psh_scan_grid(&spec, 1000, 1011);
    assert!(grid.len() == 1000);
    let scan = psh_scan(&spec, &grid).unwrap();
    assert!(scan.pass, "psh scan min eigenvalue {:e}", scan.min_eigenvalue);

    // Upper bound decays below 0.05 along a radial approach to an
    // omega_2 sample.
    let samples = omega_surface_samples(&spec, 600, 1012).unwrap();
    let target = samples
        .iter()
        .find(|s| s[0].norm() > 0.1)
        .expect("generic surface sample");
    let mut last = f64::INFINITY;
    for k in 1..=9 {
        let h = 0.5f64.powi(k);
        let p = [target[0], target[1] * (1.0 - h)];
        let u = sqz_core::squeeze::hartogs_upper_bound(&spec, &p, &samples).unwrap();
        assert!(u <= last + 1e-9, "upper bound not decreasing at step {k}");
        last = u;
    }
    assert!(last < 0.05, "final upper bound {last}");

    // Local separation at a z = 0 surface point.
    let (phi0, _) = potential_phi(&spec, &[c(0.0, 0.0)]).unwrap();
    let r0 = (-phi0.finite().unwrap().exp()).exp();
    let p0 = [c(0.0, 0.0), c(r0, 0.0)];
    let rep = locally_separating_check(&spec, &p0, 0.15, 6).unwrap();
    assert!(rep.components >= 2, "separation components: {}", rep.components);
    crit.finish();
}

/// Criterion 11: the grid sup-norm test passes for z_1 and the constant 1
/// with the exact torus bound, and produces a witness for 2 z_1.
#[test]
fn acceptance_11_sup_norm_grid() {
    let crit = Criterion::begin(11, "grid sup-norm lemma surrogate", 5.0);
    let k_max = 20;
    let f1 = |z: &[C]| z[0];
    let rep = sup_norm_test(&f1, 1.0, 2, k_max).unwrap();
    assert!(rep.grid_ok);
    let expected_bound = 1.0 + std::f64::consts::PI * 2.0 / k_max as f64;
    assert_eq!(rep.torus_bound, expected_bound, "torus bound must be exact");
    assert!(rep.empirical_torus_max <= 1.0);
    let fc = |_: &[C]| c(1.0, 0.0);
    let rep = sup_norm_test(&fc, 1.0, 2, k_max).unwrap();
    assert!(rep.grid_ok);
    assert!((rep.empirical_torus_max - 1.0).abs() < 1e-12);
    let f2 = |z: &[C]| z[0] * 2.0;
    let rep = sup_norm_test(&f2, 2.0, 2, k_max).unwrap();
    assert!(!rep.grid_ok);
    let (witness, v) = rep.witness.expect("violation witness");
    assert!(v > 1.0);
    assert!((witness[0].norm() - 2.0 / 3.0).abs() < 1e-12, "first witness at level k = 3");
    crit.finish();
}

/// Criterion 12: -(-rho)^delta is psh on the Siegel model for delta in
/// {0.5, 1} and fails for the sign-flipped model.
#[test]
fn acceptance_12_df_exponent_check() {
    let crit = Criterion::begin(12, "negative-power psh check", 10.0);
    let (form, spec) = model_re_w_plus_abs_z(1, 1.5);
    let mut rng = numeric::rng(1212);
    let mut grid = Vec::new();
    while grid.len() < 1000 {
        let p = spec.bbox.sample(&mut rng);
        if form.defining.eval_real(&p).unwrap() < -0.1 {
            grid.push(p);
        }
    }
    for delta in [0.5, 1.0] {
        let rep = df_psh_check(&form.defining, delta, &grid).unwrap();
        assert!(rep.pass, "delta = {delta}: min eigenvalue {:e}", rep.min_eigenvalue);
    }
    let flipped = MixedPolynomial::re_of_var(2, 1).sub(&MixedPolynomial::modulus_sq(2, 0));
    let flipped_grid: Vec<Vec<C>> = grid
        .iter()
        .filter(|p| flipped.eval_real(p).unwrap() < -0.1)
        .cloned()
        .collect();
    assert!(flipped_grid.len() > 100);
    let rep = df_psh_check(&flipped, 0.5, &flipped_grid).unwrap();
    assert!(!rep.pass, "sign-flipped model must fail");
    crit.finish();
}
