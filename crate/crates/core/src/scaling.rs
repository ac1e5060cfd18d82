//! The rescaling pipeline on canonical-form domains: anchor the sequence
//! point to the boundary, shear the tangent to {Re W = 0}, absorb pure-Z
//! pluriharmonic terms into W, choose the anisotropic dilation, and track
//! the rescaled defining polynomials together with convergence diagnostics.

use std::collections::BTreeMap;

use crate::boundary::project_to_boundary;
use crate::domains::{BoundingBox, CanonicalBoundaryForm, DomainSpec};
use crate::error::{Error, Result};
use crate::numeric::{self, C};
use crate::polyalg::{AffineMap, MixedPolynomial, MultiIndex};

/// Truncate to total degree <= max_deg.
pub fn truncate(p: &MixedPolynomial, max_deg: u32) -> MixedPolynomial {
    let mut out = MixedPolynomial::zero(p.dimension());
    for (a, b, c) in p.terms() {
        if a.degree() + b.degree() <= max_deg {
            out.add_term(a.clone(), b.clone(), *c);
        }
    }
    out
}

/// Sup bound for dropped terms on a centered window of the given radius.
pub fn truncation_residual(p: &MixedPolynomial, max_deg: u32, window_radius: f64) -> f64 {
    p.terms()
        .filter(|(a, b, _)| a.degree() + b.degree() > max_deg)
        .map(|(a, b, c)| c.norm() * window_radius.powi((a.degree() + b.degree()) as i32))
        .sum()
}

/// Pure-Z part of a 2-variable polynomial as a 1-variable polynomial.
pub fn pure_z_part(p: &MixedPolynomial) -> MixedPolynomial {
    let mut out = MixedPolynomial::zero(1);
    for (a, b, c) in p.terms() {
        if a.0[1] == 0 && b.0[1] == 0 {
            out.add_term(MultiIndex(vec![a.0[0]]), MultiIndex(vec![b.0[0]]), *c);
        }
    }
    out
}

/// One step of the rescaling pipeline.
#[derive(Debug, Clone)]
pub struct ScalingStep {
    pub index: usize,
    pub a: [C; 2],
    pub a_hat_2: C,
    pub b: C,
    /// Unit phase straightening the W-coefficient; 1 for remainder-free forms.
    pub lambda: C,
    /// Holomorphic normalization polynomial absorbed into W.
    pub q: MixedPolynomial,
    pub delta: f64,
    pub epsilon: f64,
    pub rescaled: MixedPolynomial,
    pub c11: f64,
    pub dist: f64,
    pub blowup_ratio: f64,
    pub truncation_residual: f64,
}

/// A full run with diagnostics.
#[derive(Debug, Clone)]
pub struct ScalingRun {
    pub m: u32,
    pub steps: Vec<ScalingStep>,
    pub limit: Option<MixedPolynomial>,
    pub converged: bool,
    /// Coefficient Cauchy differences between consecutive rescaled forms.
    pub cauchy: Vec<f64>,
    /// Least-squares slope of log |C11| against log delta (when defined).
    pub c11_slope: Option<f64>,
}

impl ScalingRun {
    pub fn csv(&self) -> String {
        let mut out = String::from("nu,abs_a1,eps,delta,abs_b,c11,eps_inv_delta_2m\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                s.index,
                s.a[0].norm(),
                s.epsilon,
                s.delta,
                s.b.norm(),
                s.c11,
                s.blowup_ratio
            ));
        }
        out
    }
}

/// Solve Re w so that (a1, s + i Im a2) lies on the zero set of the form.
pub fn anchor_point(form: &CanonicalBoundaryForm, a: &[C]) -> Result<C> {
    let im = a[1].im;
    let f = |s: f64| -> (f64, f64) {
        let w = C::new(s, im);
        let v = form.defining.eval_real(&[a[0], w]).expect("dim 2");
        // dF/d Re w = 2 Re d/dw; the canonical form is monic in Re w.
        let dw = form
            .defining
            .wirtinger_derivative(1, false)
            .eval(&[a[0], w])
            .expect("dim 2");
        (v, 2.0 * dw.re)
    };
    let root = numeric::newton_bracketed(-100.0, 100.0, a[1].re, 1e-13, 80, f)?;
    let (v, _) = f(root);
    if v.abs() > 1e-12 {
        return Err(Error::non_convergence(format!("anchoring residual {v:e}")));
    }
    Ok(C::new(root, im))
}

/// Result of the tangency shear at one anchored point.
#[derive(Debug, Clone)]
pub struct ShearResult {
    pub map: AffineMap,
    pub b: C,
    pub lambda: C,
    /// Pullback of the defining polynomial, normalized so the Re W
    /// coefficient is exactly 1, truncated to the working degree.
    pub pulled: MixedPolynomial,
}

fn w_coefficient(p: &MixedPolynomial) -> C {
    p.coeff(&MultiIndex(vec![0, 1]), &MultiIndex(vec![0, 0]))
}

/// Shear A(z, w) = (z - a1, lambda (w - a_hat_2 - b (z - a1))) where b kills
/// the dZ component of the differential at the anchor and the unit phase
/// lambda straightens the W coefficient. Postcondition: the real gradient of
/// the pulled-back form at 0 is parallel to d(Re W) within 1e-10.
pub fn shear_a(
    form: &CanonicalBoundaryForm,
    a: &[C],
    a_hat_2: C,
    working_degree: u32,
) -> Result<ShearResult> {
    let anchor = [a[0], a_hat_2];
    let dz = form.defining.wirtinger_derivative(0, false).eval(&anchor)?;
    let dw = form.defining.wirtinger_derivative(1, false).eval(&anchor)?;
    let scale = dz.norm().max(dw.norm());
    if dw.norm() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::precondition("d/dw of the form vanishes at the anchor"));
    }
    let b = -dz / dw;
    let lambda = dw / dw.norm();
    let mut map = AffineMap::identity(2);
    map.linear[0][0] = C::new(1.0, 0.0);
    map.linear[1][0] = -lambda * b;
    map.linear[1][1] = lambda;
    map.offset[0] = -a[0];
    map.offset[1] = lambda * (b * a[0] - a_hat_2);
    let inv = map.inverse().ok_or(Error::SingularMap)?;
    let mut pulled = form.defining.compose_affine(&inv)?;
    // Normalize the positive multiple so the Re W coefficient is exactly 1.
    let cw = w_coefficient(&pulled);
    if cw.im.abs() > 1e-10 * cw.norm() || cw.re <= 0.0 {
        return Err(Error::precondition(format!(
            "W coefficient not straightened: {cw}"
        )));
    }
    pulled = pulled.scale(C::new(1.0 / (2.0 * cw.re), 0.0));
    pulled = truncate(&pulled, working_degree);
    // Pinned postcondition: gradient at 0 parallel to d(Re W).
    let g0: Vec<C> = (0..2)
        .map(|j| pulled.wirtinger_derivative(j, false).eval(&[C::new(0.0, 0.0); 2]).unwrap())
        .collect();
    let gnorm = (g0[0].norm_sqr() + g0[1].norm_sqr()).sqrt();
    if g0[0].norm() > 1e-10 * gnorm || g0[1].im.abs() > 1e-10 * gnorm {
        return Err(Error::precondition(format!(
            "tangency postcondition failed: gradient at 0 is ({}, {})",
            g0[0], g0[1]
        )));
    }
    Ok(ShearResult { map, b, lambda, pulled })
}

/// Absorb the pure-Z pluriharmonic parts of the homogeneous components of
/// degree 2..2m into W via (Z, W) -> (Z, W + q(Z)). Post-state: those
/// components carry no pluriharmonic terms at the coefficient level.
pub fn normalize_b(pulled: &MixedPolynomial, m: u32) -> Result<(MixedPolynomial, MixedPolynomial)> {
    let mut current = pulled.clone();
    let mut q_total = MixedPolynomial::zero(2);
    for _ in 0..4 {
        let cw = w_coefficient(&current);
        let pure = pure_z_part(&current);
        let mut q = MixedPolynomial::zero(2);
        let mut dirty = false;
        for k in 2..=2 * m {
            let sigma = pure.homogeneous_component(k);
            let harm = sigma.pluriharmonic_part();
            if harm.is_zero() {
                continue;
            }
            dirty = true;
            for (a, bexp, c) in harm.terms() {
                if bexp.degree() == 0 {
                    // h Z^k term; the conjugate partner is implied.
                    q.add_term(
                        MultiIndex(vec![a.0[0], 0]),
                        MultiIndex(vec![0, 0]),
                        c / cw,
                    );
                }
            }
        }
        if !dirty {
            break;
        }
        q.prune();
        // Substitute W -> W - q(Z) (the pullback of (Z,W) -> (Z, W + q)).
        let z_sub = MixedPolynomial::var(2, 0);
        let w_sub = MixedPolynomial::var(2, 1).sub(&q);
        current = current.compose_holomorphic(&[z_sub, w_sub])?;
        q_total = q_total.add(&q);
    }
    // Verify the post-state.
    let pure = pure_z_part(&current);
    for k in 2..=2 * m {
        let harm = pure.homogeneous_component(k).pluriharmonic_part();
        if !harm.is_zero() {
            return Err(Error::non_convergence(format!(
                "pluriharmonic residue of degree {k} survived normalization: {:?}",
                harm.to_records()
            )));
        }
    }
    Ok((current, q_total))
}

/// delta = min_k M_k^{-1/k} over the nonzero magnitudes; the postcondition
/// max_k delta^k M_k = 1 is asserted to 1e-12.
pub fn choose_delta(magnitudes: &BTreeMap<u32, f64>) -> Result<f64> {
    let mut delta = f64::INFINITY;
    for (&k, &mk) in magnitudes {
        if mk > 0.0 {
            delta = delta.min(mk.powf(-1.0 / k as f64));
        }
    }
    if !delta.is_finite() {
        return Err(Error::precondition("all sigma components vanish"));
    }
    let check = magnitudes
        .iter()
        .map(|(&k, &mk)| delta.powi(k as i32) * mk)
        .fold(0.0, f64::max);
    if (check - 1.0).abs() > 1e-12 {
        return Err(Error::non_convergence(format!(
            "delta normalization drifted: max_k delta^k M_k = {check}"
        )));
    }
    Ok(delta)
}

/// Compose with the inverse dilation (Z, W) -> (delta Z, eps W) and rescale
/// so the Re W coefficient is exactly 1; truncate to the working degree.
pub fn dilate_and_normalize(
    p: &MixedPolynomial,
    delta: f64,
    eps: f64,
    working_degree: u32,
) -> Result<MixedPolynomial> {
    if delta <= 0.0 || eps <= 0.0 {
        return Err(Error::precondition("dilation parameters must be positive"));
    }
    let mut map = AffineMap::identity(2);
    map.linear[0][0] = C::new(delta, 0.0);
    map.linear[1][1] = C::new(eps, 0.0);
    let composed = p.compose_affine(&map)?;
    let cw = w_coefficient(&composed);
    if cw.re <= 0.0 || cw.im.abs() > 1e-10 * cw.norm() {
        return Err(Error::non_convergence(format!("W coefficient degenerated: {cw}")));
    }
    Ok(truncate(&composed.scale(C::new(1.0 / (2.0 * cw.re), 0.0)), working_degree))
}

/// Convergence threshold for the coefficientwise Cauchy differences.
pub const CAUCHY_TOL: f64 = 1e-6;

/// Execute the pipeline along interior sequence points approaching the
/// boundary point 0 of the model.
pub fn run_scaling(
    form: &CanonicalBoundaryForm,
    domain: &DomainSpec,
    points: &[Vec<C>],
    working_degree: u32,
) -> Result<ScalingRun> {
    if points.is_empty() {
        return Err(Error::EmptyInput("scaling needs at least one sequence point".into()));
    }
    let m = form.m;
    let window_radius = 1.0;
    let mut steps = Vec::with_capacity(points.len());
    for (index, a_vec) in points.iter().enumerate() {
        if a_vec.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: a_vec.len() });
        }
        let a = [a_vec[0], a_vec[1]];
        if !domain.contains(a_vec) {
            return Err(Error::precondition(format!(
                "sequence point {index} is not interior"
            )));
        }
        let a_hat_2 = anchor_point(form, a_vec)
            .map_err(|e| Error::non_convergence(format!("step {index}: {e}")))?;
        let epsilon = (a[1] - a_hat_2).norm();
        if epsilon == 0.0 {
            return Err(Error::precondition(format!(
                "sequence point {index} lies on the boundary"
            )));
        }
        let shear = shear_a(form, a_vec, a_hat_2, working_degree + 2)?;
        let (cleaned, q) = normalize_b(&shear.pulled, m)?;
        // Magnitudes of the eps-normalized homogeneous components: this pins
        // the coefficient of greatest magnitude of the rescaled polynomial
        // to exactly 1.
        let pure = pure_z_part(&cleaned);
        let mut magnitudes = BTreeMap::new();
        for k in 2..=2 * m {
            let mk = pure.homogeneous_component(k).max_coeff_magnitude() / epsilon;
            magnitudes.insert(k, mk);
        }
        let delta = choose_delta(&magnitudes)?;
        let rescaled = dilate_and_normalize(&cleaned, delta, epsilon, working_degree)?;
        let c11 = rescaled.coeff(&MultiIndex(vec![1, 0]), &MultiIndex(vec![1, 0])).re;
        let dist = project_to_boundary(domain, a_vec)?.distance;
        steps.push(ScalingStep {
            index,
            a,
            a_hat_2,
            b: shear.b,
            lambda: shear.lambda,
            q,
            delta,
            epsilon,
            truncation_residual: truncation_residual(&cleaned, working_degree, window_radius),
            rescaled,
            c11,
            dist,
            blowup_ratio: delta.powi(2 * m as i32) / epsilon,
        });
    }

    let mut cauchy = Vec::new();
    for w in steps.windows(2) {
        cauchy.push(w[0].rescaled.coeff_distance(&w[1].rescaled));
    }
    let tail_ok = cauchy.iter().rev().take(2).all(|&d| d < CAUCHY_TOL);
    let converged = steps.len() >= 3 && tail_ok;
    let limit = if converged {
        let last = &steps.last().unwrap().rescaled;
        let mut p = pure_z_part(last);
        // P(0,0) = 0 and no linear terms by construction; drop noise.
        p = p.sub(&MixedPolynomial::constant(1, p.eval(&[C::new(0.0, 0.0)])?));
        p.prune();
        Some(p)
    } else {
        None
    };

    // Slope of log |C11| vs log delta, when the trajectory is positive and
    // actually decays (m >= 2 paraboloidal runs).
    let pos: Vec<&ScalingStep> = steps.iter().filter(|s| s.c11.abs() > 1e-300).collect();
    let c11_slope = if m >= 2 && pos.len() >= 3 {
        let xs: Vec<f64> = pos.iter().map(|s| s.delta.ln()).collect();
        let ys: Vec<f64> = pos.iter().map(|s| s.c11.abs().ln()).collect();
        Some(numeric::ls_slope(&xs, &ys))
    } else {
        None
    };

    Ok(ScalingRun { m, steps, limit, converged, cauchy, c11_slope })
}

/// Boundedness diagnostic for eps^{-1} delta^{2m}.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub trajectory: Vec<f64>,
    pub max: f64,
    pub median: f64,
    pub pass: bool,
}

pub fn blowup_check(run: &ScalingRun) -> BlowupReport {
    let trajectory: Vec<f64> = run.steps.iter().map(|s| s.blowup_ratio).collect();
    let max = trajectory.iter().copied().fold(0.0, f64::max);
    let median = numeric::median(&trajectory);
    BlowupReport { max, median, pass: max / median < 1e3, trajectory }
}

/// Boundedness diagnostic for |b_nu| / dist; inapplicable when m = 1.
#[derive(Debug, Clone)]
pub struct BBoundReport {
    pub applicable: bool,
    pub trajectory: Vec<f64>,
    pub max: f64,
    pub median: f64,
    pub pass: bool,
}

pub fn b_bound_check(run: &ScalingRun) -> BBoundReport {
    if run.m < 2 {
        return BBoundReport {
            applicable: false,
            trajectory: Vec::new(),
            max: f64::NAN,
            median: f64::NAN,
            pass: false,
        };
    }
    let trajectory: Vec<f64> = run.steps.iter().map(|s| s.b.norm() / s.dist).collect();
    let max = trajectory.iter().copied().fold(0.0, f64::max);
    let median = numeric::median(&trajectory);
    BBoundReport { applicable: true, max, median, pass: max / median.max(1e-300) < 1e2, trajectory }
}

/// Symmetric grid measure of how much two membership predicates differ on a
/// compact window: (symmetric-difference fraction) x (window diameter).
pub fn hausdorff_window_distance(
    a: &dyn Fn(&[C]) -> bool,
    b: &dyn Fn(&[C]) -> bool,
    window: &BoundingBox,
    grid_per_axis: usize,
) -> f64 {
    let dims = window.lo.len();
    let g = grid_per_axis.max(2);
    let mut idx = vec![0usize; dims];
    let mut total = 0usize;
    let mut diff = 0usize;
    'outer: loop {
        let x: Vec<f64> = (0..dims)
            .map(|i| {
                window.lo[i] + (window.hi[i] - window.lo[i]) * (idx[i] as f64 + 0.5) / g as f64
            })
            .collect();
        let z = numeric::from_real_vec(&x);
        total += 1;
        if a(&z) != b(&z) {
            diff += 1;
        }
        let mut pos = dims;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < g {
                break;
            }
            idx[pos] = 0;
        }
    }
    (diff as f64 / total as f64) * window.diameter()
}

/// Plurisubharmonicity verdict for -(-rho)^delta on a grid.
#[derive(Debug, Clone)]
pub struct DfPshReport {
    pub min_eigenvalue: f64,
    pub pass: bool,
}

/// Complex Hessian of u = -(-rho)^delta via the Wirtinger chain rule:
/// H_u = delta v^{delta-1} H_rho + delta (1-delta) v^{delta-2} g g*, v = -rho.
pub fn df_psh_check(
    rho: &MixedPolynomial,
    delta_exp: f64,
    grid: &[Vec<C>],
) -> Result<DfPshReport> {
    if !(0.0 < delta_exp && delta_exp <= 1.0) {
        return Err(Error::precondition("exponent must lie in (0, 1]"));
    }
    let n = rho.dimension();
    let grads: Vec<MixedPolynomial> =
        (0..n).map(|j| rho.wirtinger_derivative(j, false)).collect();
    let mut min_eig = f64::INFINITY;
    for z in grid {
        let v = -rho.eval_real(z)?;
        if v <= 0.0 {
            return Err(Error::precondition(format!(
                "grid point with rho >= 0 (rho = {:e})",
                -v
            )));
        }
        let h_rho = rho.complex_hessian(z)?;
        let g: Vec<C> = grads.iter().map(|p| p.eval(z).unwrap()).collect();
        let mut h = nalgebra::DMatrix::zeros(n, n);
        let f1 = delta_exp * v.powf(delta_exp - 1.0);
        let f2 = delta_exp * (1.0 - delta_exp) * v.powf(delta_exp - 2.0);
        for j in 0..n {
            for k in 0..n {
                h[(j, k)] = h_rho.entry(j, k) * f1 + g[j] * g[k].conj() * f2;
            }
        }
        let eigs = crate::polyalg::HermitianMatrix::new(h).eigenvalues_sorted();
        min_eig = min_eig.min(eigs[0]);
    }
    Ok(DfPshReport { min_eigenvalue: min_eig, pass: min_eig >= -1e-9 })
}
