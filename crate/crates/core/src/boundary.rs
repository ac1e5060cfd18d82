//! Numerical boundary geometry: boundary projection, tangent planes, Levi
//! classification, paraboloidal approach sequences, and support/convexity
//! scans.

use nalgebra::{DMatrix, DVector};

use crate::domains::{graph_function_g, unshear, DomainSpec};
use crate::error::{Error, Result};
use crate::numeric::{self, C};

pub const LEVI_TOL: f64 = 1e-7;
pub const KKT_TOL: f64 = 1e-8;
pub const SUPPORT_EXCLUSION_RADIUS: f64 = 1e-4;

/// A validated boundary point with its gradient data.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub point: Vec<C>,
    /// Real gradient of the defining function, length 2n.
    pub gradient: Vec<f64>,
    /// Unit outward normal as a complex vector.
    pub normal: Vec<C>,
}

impl BoundaryPoint {
    pub fn at(domain: &DomainSpec, point: &[C], tol: f64) -> Result<Self> {
        let v = domain.value(point);
        if v.abs() > tol {
            return Err(Error::precondition(format!(
                "point is not on the boundary (defining value {v:e})"
            )));
        }
        let gradient = domain.real_grad(point);
        let gn = gradient.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gn == 0.0 {
            return Err(Error::precondition("vanishing gradient at boundary point"));
        }
        let normal = numeric::scale(&numeric::from_real_vec(&gradient), 1.0 / gn);
        Ok(BoundaryPoint { point: point.to_vec(), gradient, normal })
    }
}

/// Projection onto the tangent space at `p` (real orthogonal complement of
/// the normal).
pub fn tangential_part(v: &[C], normal: &[C]) -> Vec<C> {
    let t = numeric::real_dot(v, normal);
    numeric::axpy(-t, normal, v)
}

/// First unit tangent direction, by Gram-Schmidt over the real coordinate
/// axes in order (x1, y1, x2, y2, ...); lowest index wins.
pub fn first_tangent_direction(normal: &[C]) -> Vec<C> {
    let n = normal.len();
    for i in 0..2 * n {
        let mut e = vec![0.0; 2 * n];
        e[i] = 1.0;
        let ec = numeric::from_real_vec(&e);
        let t = tangential_part(&ec, normal);
        let tn = numeric::cnorm(&t);
        if tn > 1e-8 {
            return numeric::scale(&t, 1.0 / tn);
        }
    }
    unreachable!("normal cannot be orthogonal to every coordinate axis");
}

/// Result of a boundary projection.
#[derive(Debug, Clone)]
pub struct Projection {
    pub point: BoundaryPoint,
    pub distance: f64,
    /// Set when Newton failed to reach the KKT tolerance and the best sample
    /// is reported instead.
    pub warning: bool,
    pub kkt_residual: f64,
}

fn real_hessian_of_defining(domain: &DomainSpec, z: &[C], h: f64) -> DMatrix<f64> {
    let m = 2 * domain.dim;
    let mut out = DMatrix::zeros(m, m);
    let x0 = numeric::to_real_vec(z);
    let mut xp = x0.clone();
    for i in 0..m {
        xp[i] = x0[i] + h;
        let gp = domain.real_grad(&numeric::from_real_vec(&xp));
        xp[i] = x0[i] - h;
        let gm = domain.real_grad(&numeric::from_real_vec(&xp));
        xp[i] = x0[i];
        for j in 0..m {
            out[(j, i)] = (gp[j] - gm[j]) / (2.0 * h);
        }
    }
    // Symmetrize roundoff.
    for i in 0..m {
        for j in (i + 1)..m {
            let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = avg;
            out[(j, i)] = avg;
        }
    }
    out
}

fn kkt_newton(domain: &DomainSpec, z: &[C], start: &[C]) -> (Vec<C>, f64) {
    let m = 2 * domain.dim;
    let xz = numeric::to_real_vec(z);
    let mut x = numeric::to_real_vec(start);
    // Initial multiplier from stationarity.
    let g = domain.real_grad(start);
    let gn2: f64 = g.iter().map(|v| v * v).sum();
    let mut lam = if gn2 > 0.0 {
        (0..m).map(|i| (xz[i] - x[i]) * g[i]).sum::<f64>() / gn2
    } else {
        0.0
    };

    let residual = |x: &[f64], lam: f64| -> (DVector<f64>, f64) {
        let zc = numeric::from_real_vec(x);
        let g = domain.real_grad(&zc);
        let rho = domain.value(&zc);
        let mut f = DVector::zeros(m + 1);
        for i in 0..m {
            f[i] = x[i] - xz[i] + lam * g[i];
        }
        f[m] = rho;
        let n = f.norm();
        (f, n)
    };

    let (_, mut best_res) = residual(&x, lam);
    for _ in 0..60 {
        if best_res < 1e-14 {
            break;
        }
        let zc = numeric::from_real_vec(&x);
        let g = domain.real_grad(&zc);
        let hess = real_hessian_of_defining(domain, &zc, 1e-5);
        let mut jac = DMatrix::zeros(m + 1, m + 1);
        for i in 0..m {
            for j in 0..m {
                jac[(i, j)] = lam * hess[(i, j)] + if i == j { 1.0 } else { 0.0 };
            }
            jac[(i, m)] = g[i];
            jac[(m, i)] = g[i];
        }
        let (f, fr) = residual(&x, lam);
        let step = match numeric::solve_real(jac, -f) {
            Some(s) => s,
            None => break,
        };
        // Backtracking on the residual norm.
        let mut s = 1.0;
        let mut improved = false;
        for _ in 0..10 {
            let xn: Vec<f64> = (0..m).map(|i| x[i] + s * step[i]).collect();
            let ln = lam + s * step[m];
            let (_, rn) = residual(&xn, ln);
            if rn < fr {
                x = xn;
                lam = ln;
                best_res = rn;
                improved = true;
                break;
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (numeric::from_real_vec(&x), best_res)
}

/// Project an interior point onto the boundary: best of `samples` ray-cast
/// boundary samples, refined by a constrained (KKT) Newton iteration.
pub fn project_to_boundary(domain: &DomainSpec, z: &[C]) -> Result<Projection> {
    project_to_boundary_seeded(domain, z, 4096, 64)
}

pub fn project_to_boundary_seeded(
    domain: &DomainSpec,
    z: &[C],
    samples: usize,
    seed: u64,
) -> Result<Projection> {
    if domain.value(z) >= 0.0 {
        return Err(Error::precondition("projection expects an interior point"));
    }
    // Coordinate-axis rays first (deterministic tie-break at symmetric
    // points), then random directions.
    let mut candidates: Vec<Vec<C>> = Vec::new();
    for i in 0..2 * domain.dim {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; 2 * domain.dim];
            e[i] = sign;
            if let Some(q) = domain.ray_boundary_crossing(z, &numeric::from_real_vec(&e)) {
                candidates.push(q);
            }
        }
    }
    let mut rng = numeric::rng(seed);
    for _ in 0..samples {
        let dir = numeric::random_unit_dir(&mut rng, domain.dim);
        if let Some(q) = domain.ray_boundary_crossing(z, &dir) {
            candidates.push(q);
        }
    }
    if candidates.is_empty() {
        return Err(Error::precondition("no boundary crossing found inside the box"));
    }
    // Stable sort with a quantized key keeps the axis candidates ahead among
    // numerical ties, which pins the frame at symmetric points.
    candidates.sort_by_key(|a| (numeric::cdist(a, z) * 1e9).round() as i64);

    let mut best: Option<(Vec<C>, f64, f64)> = None;
    let mut worst_res = f64::INFINITY;
    for start in candidates.iter().take(3) {
        let (q, res) = kkt_newton(domain, z, start);
        worst_res = worst_res.min(res);
        if res >= KKT_TOL {
            continue;
        }
        let d = numeric::cdist(&q, z);
        let improve = match &best {
            None => true,
            Some((_, _, db)) => d < db - 1e-12,
        };
        if improve {
            best = Some((q, res, d));
        }
    }
    match best {
        Some((q, res, d)) => {
            let bp = BoundaryPoint::at(domain, &q, 1e-6)?;
            Ok(Projection { distance: d, point: bp, warning: false, kkt_residual: res })
        }
        None => {
            // Report the best raw sample with a warning.
            let bp = BoundaryPoint::at(domain, &candidates[0], 1e-6)?;
            Ok(Projection {
                distance: numeric::cdist(&bp.point, z),
                point: bp,
                warning: true,
                kkt_residual: worst_res,
            })
        }
    }
}

/// Affine real tangent hyperplane at a boundary point.
#[derive(Debug, Clone)]
pub struct TangentPlane {
    pub point: Vec<C>,
    pub normal: Vec<C>,
}

pub fn tangent_plane(domain: &DomainSpec, q: &BoundaryPoint) -> Result<TangentPlane> {
    let _ = domain;
    Ok(TangentPlane { point: q.point.clone(), normal: q.normal.clone() })
}

/// Signed offset of `s` against the plane (negative strictly inside).
pub fn plane_offset(plane: &TangentPlane, s: &[C]) -> f64 {
    numeric::real_dot(&numeric::sub(s, &plane.point), &plane.normal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeviClass {
    StronglyPseudoconvex,
    WeaklyPseudoconvex,
    NotPseudoconvex,
}

impl std::fmt::Display for LeviClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LeviClass::StronglyPseudoconvex => "strongly-psc",
            LeviClass::WeaklyPseudoconvex => "weakly-psc",
            LeviClass::NotPseudoconvex => "not-psc",
        };
        write!(f, "{s}")
    }
}

/// Levi classification report at one boundary point.
#[derive(Debug, Clone)]
pub struct LeviReport {
    pub point: Vec<C>,
    /// Eigenvalues of the Levi form restricted to the complex tangent space,
    /// ascending, normalized by the Wirtinger gradient norm.
    pub eigenvalues: Vec<f64>,
    pub classification: LeviClass,
    pub tolerance: f64,
}

impl LeviReport {
    pub fn csv_row(&self) -> String {
        let coords: Vec<String> = self
            .point
            .iter()
            .flat_map(|c| [format!("{:.16e}", c.re), format!("{:.16e}", c.im)])
            .collect();
        let eigs: Vec<String> = self.eigenvalues.iter().map(|v| format!("{v:.16e}")).collect();
        format!("{},{},{}", coords.join(","), eigs.join(","), self.classification)
    }
}

/// Orthonormal basis of the complex tangent space {v : sum g_j v_j = 0}.
pub fn complex_tangent_basis(wirtinger_grad: &[C]) -> Vec<Vec<C>> {
    let n = wirtinger_grad.len();
    let gn = numeric::cnorm(wirtinger_grad);
    let ghat: Vec<C> = wirtinger_grad.iter().map(|c| c.conj() / gn).collect();
    let mut basis: Vec<Vec<C>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![C::new(0.0, 0.0); n];
        v[k] = C::new(1.0, 0.0);
        // Project out ghat and the accepted basis vectors (Hermitian).
        let proj = numeric::hermitian_dot(&v, &ghat);
        for j in 0..n {
            v[j] -= proj * ghat[j];
        }
        for b in &basis {
            let p = numeric::hermitian_dot(&v, b);
            for j in 0..n {
                v[j] -= p * b[j];
            }
        }
        let vn = numeric::cnorm(&v);
        if vn > 1e-7 {
            for x in v.iter_mut() {
                *x /= vn;
            }
            basis.push(v);
        }
    }
    basis
}

/// Classify the Levi form of the boundary at `q`: restrict the complex
/// Hessian of the defining function to the complex tangent space and read
/// the sign pattern of the eigenvalues (normalized to be scale-free).
pub fn levi_classify(domain: &DomainSpec, q: &BoundaryPoint, tol: f64) -> Result<LeviReport> {
    let g = domain.wirtinger_grad(&q.point);
    let gn = numeric::cnorm(&g);
    if gn == 0.0 {
        return Err(Error::precondition("vanishing gradient in Levi classification"));
    }
    let h = domain.hessian(&q.point);
    let basis = complex_tangent_basis(&g);
    let m = basis.len();
    let mut restricted = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            // Form value L(v, w) = sum H_jk v_j conj(w_k).
            let mut acc = C::new(0.0, 0.0);
            for j in 0..domain.dim {
                for k in 0..domain.dim {
                    acc += h.entry(j, k) * basis[a][j] * basis[b][k].conj();
                }
            }
            restricted[(b, a)] = acc;
        }
    }
    let eig = crate::polyalg::HermitianMatrix::new(restricted);
    let eigenvalues: Vec<f64> = eig.eigenvalues_sorted().iter().map(|v| v / gn).collect();
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    let classification = if min > tol {
        LeviClass::StronglyPseudoconvex
    } else if min >= -tol {
        LeviClass::WeaklyPseudoconvex
    } else {
        LeviClass::NotPseudoconvex
    };
    Ok(LeviReport { point: q.point.clone(), eigenvalues, classification, tolerance: tol })
}

/// Outcome of a strict tangent-support sampling check.
#[derive(Debug, Clone)]
pub struct SupportCheckReport {
    pub pass: bool,
    /// Largest signed offset among tested samples (strictly negative on PASS).
    pub worst_offset: f64,
    /// Largest offset / ||s-q||^2 (local margin diagnostic).
    pub worst_quadratic_margin: f64,
    pub samples_tested: usize,
}

/// Checks T_q(boundary) ∩ closure(domain) = {q} by sampling: every interior
/// or boundary sample beyond the exclusion radius must lie strictly on the
/// inner side of the tangent plane. The quadratic margin is reported as a
/// diagnostic (weakly pseudoconvex points support the plane without a
/// quadratic gap).
pub fn strict_support_check(
    domain: &DomainSpec,
    q: &BoundaryPoint,
    samples: usize,
    seed: u64,
) -> SupportCheckReport {
    let plane = TangentPlane { point: q.point.clone(), normal: q.normal.clone() };
    let boundary = domain.sample_boundary(samples / 2, seed);
    let interior = domain.sample_interior(samples - samples / 2, seed.wrapping_add(1));
    let mut worst_offset = f64::NEG_INFINITY;
    let mut worst_quad = f64::NEG_INFINITY;
    let mut tested = 0;
    for s in boundary.iter().chain(interior.iter()) {
        let r = numeric::cdist(s, &q.point);
        if r <= SUPPORT_EXCLUSION_RADIUS {
            continue;
        }
        tested += 1;
        let off = plane_offset(&plane, s);
        worst_offset = worst_offset.max(off);
        worst_quad = worst_quad.max(off / (r * r));
    }
    SupportCheckReport {
        pass: tested > 0 && worst_offset < 0.0,
        worst_offset,
        worst_quadratic_margin: worst_quad,
        samples_tested: tested,
    }
}

/// Largest radius r' ≤ start_radius such that strict support holds at every
/// sampled boundary point within r' of xi. Bisects downward on failure.
pub fn uniform_support_scan(
    domain: &DomainSpec,
    xi: &BoundaryPoint,
    start_radius: f64,
    seed: u64,
) -> f64 {
    let probe = |r: f64| -> bool {
        let mut rng = numeric::rng(seed ^ 0x5ca1ab1e);
        let mut qs: Vec<BoundaryPoint> = vec![xi.clone()];
        let mut tries = 0;
        while qs.len() < 10 && tries < 200 {
            tries += 1;
            let dir = numeric::random_unit_dir(&mut rng, domain.dim);
            // Walk inward from xi, then probe outward to land near the
            // boundary patch around xi.
            let inner = numeric::axpy(-0.3 * r, &xi.normal, &xi.point);
            let start = numeric::axpy(0.8 * r, &dir, &inner);
            if !domain.contains(&start) {
                continue;
            }
            if let Ok(p) = project_to_boundary_seeded(domain, &start, 256, seed ^ tries) {
                if !p.warning && numeric::cdist(&p.point.point, &xi.point) <= r {
                    qs.push(p.point);
                }
            }
        }
        qs.iter().all(|q| strict_support_check(domain, q, 400, seed ^ 0xfeed).pass)
    };
    if probe(start_radius) {
        return start_radius;
    }
    let mut lo = 0.0;
    let mut hi = start_radius;
    for _ in 0..10 {
        let mid = 0.5 * (lo + hi);
        if mid == 0.0 {
            break;
        }
        if probe(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// An interior sequence approaching a boundary point with a declared
/// paraboloidal constant.
#[derive(Debug, Clone)]
pub struct ApproachSequence {
    pub base: BoundaryPoint,
    pub points: Vec<Vec<C>>,
    pub declared_c: f64,
}

/// Validation data for the paraboloidal inequality.
#[derive(Debug, Clone)]
pub struct ParaboloidalValidation {
    /// max over points of ||pi_p(z - p)|| / sqrt(dist(z, boundary)); the
    /// minimal feasible constant for the stored points.
    pub min_feasible_c: f64,
    pub pass: bool,
    pub distances: Vec<f64>,
}

/// Validate the stored points: returns the minimal feasible constant and
/// whether it stays within declared_c (1 + 1e-6).
pub fn validate_paraboloidal(
    domain: &DomainSpec,
    seq: &ApproachSequence,
) -> Result<ParaboloidalValidation> {
    if seq.points.is_empty() {
        return Err(Error::EmptyInput("approach sequence has no points".into()));
    }
    let mut worst: f64 = 0.0;
    let mut distances = Vec::with_capacity(seq.points.len());
    for z in &seq.points {
        let proj = project_to_boundary(domain, z)?;
        let d = proj.distance;
        distances.push(d);
        let tangential =
            numeric::cnorm(&tangential_part(&numeric::sub(z, &seq.base.point), &seq.base.normal));
        worst = worst.max(tangential / d.sqrt());
    }
    let pass = worst <= seq.declared_c * (1.0 + 1e-6) + 1e-12;
    Ok(ParaboloidalValidation { min_feasible_c: worst, pass, distances })
}

/// Generate a paraboloidal approach sequence to `p`: for each t in the
/// schedule, start from p - t n(p) + C sqrt(t) tau(p) and pull inward along
/// -n(p) until the point is interior and satisfies the constant bound.
pub fn paraboloidal_sequence(
    domain: &DomainSpec,
    p: &BoundaryPoint,
    c: f64,
    schedule: &[f64],
) -> Result<ApproachSequence> {
    if c < 0.0 {
        return Err(Error::precondition("paraboloidal constant must be >= 0"));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) || schedule.iter().any(|&t| t <= 0.0) {
        return Err(Error::precondition(
            "schedule must be strictly decreasing and positive",
        ));
    }
    let tau = first_tangent_direction(&p.normal);
    let mut points = Vec::with_capacity(schedule.len());
    for &t in schedule {
        let tangential = numeric::scale(&tau, c * t.sqrt());
        let mut depth = t;
        let mut accepted = None;
        for _ in 0..200 {
            let z = numeric::axpy(-depth, &p.normal, &numeric::axpy(1.0, &tangential, &p.point));
            if domain.contains(&z) {
                let proj = project_to_boundary(domain, &z)?;
                let tang_norm = numeric::cnorm(&tangential_part(
                    &numeric::sub(&z, &p.point),
                    &p.normal,
                ));
                if tang_norm <= c * (1.0 + 1e-6) * proj.distance.sqrt() + 1e-12 {
                    accepted = Some(z);
                    break;
                }
            }
            depth *= 1.25;
        }
        match accepted {
            Some(z) => points.push(z),
            None => {
                return Err(Error::non_convergence(format!(
                    "could not place a valid sequence point at t = {t:e}"
                )))
            }
        }
    }
    Ok(ApproachSequence { base: p.clone(), points, declared_c: c })
}

/// Four-part composite check that the egg domain is well-convexifiable near
/// a weakly pseudoconvex boundary point p (reduced to (0,-1) by the shear
/// and a fiber rotation).
#[derive(Debug, Clone)]
pub struct WellConvexifiableReport {
    /// (i) p maps to (0,-1) on the unsheared boundary.
    pub reduction_ok: bool,
    /// (ii) graph function convex on the test ball (min Hessian eigenvalue).
    pub graph_convex: bool,
    pub min_graph_eigenvalue: f64,
    /// (iii) strict support at sampled boundary points near (0,-1).
    pub local_strict_support: bool,
    /// (iv) tangent plane at (0,-1) touches the closure only at the point.
    pub global_support: bool,
    pub pass: bool,
}

pub fn well_convexifiable_check(
    egg: &DomainSpec,
    p: &[C],
    seed: u64,
) -> Result<WellConvexifiableReport> {
    let (omega, shear) = unshear(egg)?;
    let image = shear.apply(p);
    // The weak locus of the unsheared domain is {z = 0, |w| = 1}.
    if image[0].norm() > 1e-7 || (image[1].norm() - 1.0).abs() > 1e-7 {
        return Err(Error::precondition(
            "point is not in the weakly pseudoconvex locus {z=0, |w|=1}",
        ));
    }
    // (i) rotate the fiber so the image lands at (0, -1); the rotation is a
    // linear automorphism of the unsheared domain, so the domain is reused.
    let w0 = image[1];
    let rotated = [image[0] * (-1.0 / w0), C::new(-1.0, 0.0)];
    let reduction_ok = omega.value(&[rotated[0], rotated[1]]).abs() < 1e-9;
    let south = [C::new(0.0, 0.0), C::new(-1.0, 0.0)];

    // (ii) convexity of the boundary graph on a small ball around the
    // reduced point. The closed-form Hessian is used for the eigenvalue
    // test (finite differences have a noise floor far above the pinned
    // tolerance near the semidefinite directions); graph_function_g's
    // finite differences cross-check it at their own accuracy.
    let sigma = egg
        .defining
        .as_any()
        .downcast_ref::<crate::domains::EggDefining>()
        .ok_or_else(|| Error::precondition("expected an egg domain"))?
        .sigma
        .clone();
    let mut min_eig = f64::INFINITY;
    let mut fd_defect: f64 = 0.0;
    let r_ball = 0.22;
    let steps = 5;
    for ix in -steps..=steps {
        for iy in -steps..=steps {
            for iv in -steps..=steps {
                let x = r_ball * ix as f64 / steps as f64;
                let y = r_ball * iy as f64 / steps as f64;
                let v = r_ball * iv as f64 / steps as f64;
                if x * x + y * y + v * v > r_ball * r_ball {
                    continue;
                }
                let z = crate::numeric::c(x, y);
                if let Ok(h) = crate::domains::graph_hessian_analytic(&sigma, z, v) {
                    let sym = crate::polyalg::HermitianMatrix::new(h.map(|v| C::new(v, 0.0)));
                    min_eig = min_eig.min(sym.eigenvalues_sorted()[0]);
                    let (_, fd) = graph_function_g(&sigma, z, v)?;
                    fd_defect = fd_defect.max((&fd - &h).abs().max());
                }
            }
        }
    }
    if fd_defect > 1e-5 {
        return Err(Error::non_convergence(format!(
            "graph Hessian finite-difference cross-check defect {fd_defect:e}"
        )));
    }
    let graph_convex = min_eig >= -1e-9;

    // (iii) strict support at sampled boundary points near (0,-1).
    let south_bp = BoundaryPoint::at(&omega, &south, 1e-9)?;
    let mut local_ok = true;
    let mut rng = numeric::rng(seed);
    let mut found = 0;
    let mut tries = 0;
    while found < 8 && tries < 100 {
        tries += 1;
        let dir = numeric::random_unit_dir(&mut rng, 2);
        let start = numeric::axpy(0.1, &dir, &numeric::axpy(-0.05, &south_bp.normal, &south));
        if !omega.contains(&start) {
            continue;
        }
        let proj = project_to_boundary_seeded(&omega, &start, 256, seed ^ tries)?;
        if numeric::cdist(&proj.point.point, &south) > 0.2 || proj.warning {
            continue;
        }
        found += 1;
        if !strict_support_check(&omega, &proj.point, 500, seed ^ (tries << 8)).pass {
            local_ok = false;
        }
    }

    // (iv) global support of the tangent plane at (0,-1).
    let global = strict_support_check(&omega, &south_bp, 3000, seed ^ 0xa1);
    let report = WellConvexifiableReport {
        reduction_ok,
        graph_convex,
        min_graph_eigenvalue: min_eig,
        local_strict_support: local_ok && found > 0,
        global_support: global.pass,
        pass: reduction_ok && graph_convex && local_ok && found > 0 && global.pass,
    };
    Ok(report)
}
