//! The Hartogs domain D_n = {(z, w) in D^{n-1} x C : |w| < exp(-V(z))} built
//! from a log-potential over a discrete polydisc grid, plus the grid/sup-norm
//! test that drives the H-infinity extension argument.


use crate::error::{Error, Result};
use crate::numeric::{self, C};

/// The discrete grid S: for k = 2..k_max all points with coordinates
/// (1 - 1/k) exp(2 pi i m_j / k^2), m_j in {1..k^2}.
#[derive(Debug, Clone)]
pub struct GridSet {
    /// Dimension of the polydisc the grid lives in.
    pub n: usize,
    pub k_max: u32,
    pub points: Vec<Vec<C>>,
}

/// Visit the grid in lexicographic (k, m_1, ..., m_n) order without
/// materializing it. The visitor returns false to stop early.
pub fn visit_grid(n: usize, k_max: u32, mut visit: impl FnMut(&[C]) -> bool) {
    let mut buf = vec![C::new(0.0, 0.0); n];
    for k in 2..=k_max {
        let k2 = (k as u64) * (k as u64);
        let fac = 1.0 - 1.0 / k as f64;
        let roots: Vec<C> = (1..=k2)
            .map(|m| {
                let th = 2.0 * std::f64::consts::PI * m as f64 / k2 as f64;
                C::new(fac * th.cos(), fac * th.sin())
            })
            .collect();
        // Odometer over (m_1, ..., m_n), each in 1..=k^2.
        let mut idx = vec![0u64; n];
        'level: loop {
            for (j, &i) in idx.iter().enumerate() {
                buf[j] = roots[i as usize];
            }
            if !visit(&buf) {
                return;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    break 'level;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < k2 {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Materialized grid set in the fixed enumeration order.
pub fn grid_set(n: usize, k_max: u32) -> Result<GridSet> {
    if k_max < 2 {
        return Err(Error::precondition("grid set needs k_max >= 2"));
    }
    let mut points = Vec::new();
    visit_grid(n, k_max, |p| {
        points.push(p.to_vec());
        true
    });
    Ok(GridSet { n, k_max, points })
}

/// Expected point count: sum over k of k^{2n}.
pub fn grid_count(n: usize, k_max: u32) -> usize {
    (2..=k_max).map(|k| (k as usize).pow(2 * n as u32)).sum()
}

/// Report of the grid sup-norm test for a bounded holomorphic function.
#[derive(Debug, Clone)]
pub struct SupNormReport {
    pub grid_ok: bool,
    /// First grid point with |f| > 1, with the offending modulus.
    pub witness: Option<(Vec<C>, f64)>,
    /// The implied bound 1 + pi n ||f||_inf / k_max on the inner polydisc.
    pub torus_bound: f64,
    /// Sampled max of |f| on the torus of radius 1 - 1/k_max.
    pub empirical_torus_max: f64,
}

/// Check |f(a)| <= 1 over the grid up to k_max and report the Cauchy-estimate
/// torus bound together with an empirical torus maximum.
pub fn sup_norm_test(
    f: &dyn Fn(&[C]) -> C,
    sup_norm: f64,
    n: usize,
    k_max: u32,
) -> Result<SupNormReport> {
    if !sup_norm.is_finite() {
        return Err(Error::precondition("sup_norm_test needs a finite declared norm"));
    }
    let mut witness = None;
    visit_grid(n, k_max, |p| {
        let v = f(p).norm();
        if v > 1.0 {
            witness = Some((p.to_vec(), v));
            false
        } else {
            true
        }
    });
    let torus_bound = 1.0 + std::f64::consts::PI * n as f64 * sup_norm / k_max as f64;
    // Sample the torus (1 - 1/k_max) (e^{i t_1}, ..., e^{i t_n}).
    let fac = 1.0 - 1.0 / k_max as f64;
    let steps = if n <= 2 { 256 } else { 40 };
    let mut empirical: f64 = 0.0;
    let mut idx = vec![0usize; n];
    let mut buf = vec![C::new(0.0, 0.0); n];
    'outer: loop {
        for (j, &i) in idx.iter().enumerate() {
            let th = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
            buf[j] = C::new(fac * th.cos(), fac * th.sin());
        }
        empirical = empirical.max(f(&buf).norm());
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < steps {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(SupNormReport { grid_ok: witness.is_none(), witness, torus_bound, empirical_torus_max: empirical })
}

/// The Hartogs domain data: base grid over D^{n-1}, geometric weights, and
/// the truncation tail bound.
#[derive(Debug, Clone)]
pub struct HartogsSpec {
    /// Ambient dimension (n >= 2); the base polydisc has dimension n - 1.
    pub n: usize,
    pub grid: GridSet,
    /// Weight of grid point i is 2^{-(i+2)}, matching a summable sequence
    /// indexed from 2.
    pub weights: Vec<f64>,
    pub n_terms: usize,
    /// Bound for the dropped tail of the potential on D(0, 1/4)^{n-1}.
    pub tail_bound: f64,
}

impl HartogsSpec {
    pub fn new(n: usize, k_max: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::precondition("Hartogs spec needs ambient dimension >= 2"));
        }
        let base = n - 1;
        let grid = grid_set(base, k_max)?;
        let n_terms = grid.points.len();
        let weights: Vec<f64> = (0..n_terms).map(|i| 2f64.powi(-(i as i32) - 2)).collect();
        let tail_bound = Self::tail_bound_for(base, n_terms);
        Ok(HartogsSpec { n, grid, weights, n_terms, tail_bound })
    }

    pub fn base_dim(&self) -> usize {
        self.n - 1
    }

    /// Tail of the weight series beyond `terms`, times the uniform bound
    /// log(8 sqrt(b)) valid on D(0, 1/4)^b.
    pub fn tail_bound_for(base: usize, terms: usize) -> f64 {
        let per_term = (8.0 * (base as f64).sqrt()).ln();
        2f64.powi(-(terms as i32) - 1) * per_term
    }

    /// Truncate to the first `terms` summands (for stability tests).
    pub fn truncated(&self, terms: usize) -> HartogsSpec {
        let mut s = self.clone();
        s.n_terms = terms.min(self.grid.points.len());
        s.tail_bound = Self::tail_bound_for(self.base_dim(), s.n_terms);
        s
    }
}

/// Value of the potential: either finite or -infinity (at a grid point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiValue {
    Finite(f64),
    NegInfinity,
}

impl PhiValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PhiValue::Finite(v) => Some(v),
            PhiValue::NegInfinity => None,
        }
    }
}

/// Truncated potential phi(z) = sum lambda_i log(||z - a_i|| / (2 sqrt(b))),
/// always <= 0, with the recorded tail bound.
pub fn potential_phi(spec: &HartogsSpec, z: &[C]) -> Result<(PhiValue, f64)> {
    let b = spec.base_dim();
    if z.len() != b {
        return Err(Error::DimensionMismatch { expected: b, got: z.len() });
    }
    if z.iter().any(|c| c.norm() >= 1.0) {
        return Err(Error::OutOfDomain("potential needs z in the open polydisc".into()));
    }
    let divisor = 2.0 * (b as f64).sqrt();
    let mut acc = 0.0;
    for (a, lam) in spec.grid.points.iter().zip(&spec.weights).take(spec.n_terms) {
        let d = numeric::cdist(z, a);
        if d == 0.0 {
            return Ok((PhiValue::NegInfinity, spec.tail_bound));
        }
        // Each summand is < 0: ||z - a|| < 2 sqrt(b) on the polydisc.
        acc += lam * (d / divisor).ln();
    }
    Ok((PhiValue::Finite(acc), spec.tail_bound))
}

/// Membership classification of (z, w) against D_n, with the tail-propagated
/// ambiguity band reported as Boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// V(z) = exp(phi(z)) in (0, 1), and the classification of (z, w).
pub fn v_and_membership(spec: &HartogsSpec, z: &[C], w: C) -> Result<(f64, Membership)> {
    let (phi, tail) = potential_phi(spec, z)?;
    let v = match phi {
        PhiValue::Finite(p) => p.exp(),
        // Limiting case at a grid point: V clamps to the open bound 0.
        PhiValue::NegInfinity => 0.0,
    };
    // True phi lies in [phi_trunc - tail, phi_trunc]; propagate to the fiber
    // radius exp(-V).
    let v_hi = v;
    let v_lo = v * (-tail).exp();
    let r_lo = (-v_hi).exp() * (1.0 - 1e-12);
    let r_hi = (-v_lo).exp() * (1.0 + 1e-12);
    let r = w.norm();
    let m = if r < r_lo {
        Membership::Inside
    } else if r > r_hi {
        Membership::Outside
    } else {
        Membership::Boundary
    };
    Ok((v, m))
}

/// Stratified samples of the Hartogs boundary piece omega_n = {|w| =
/// exp(-V(z))}, avoiding small neighbourhoods of the grid points.
pub fn omega_surface_samples(spec: &HartogsSpec, count: usize, seed: u64) -> Result<Vec<Vec<C>>> {
    if count == 0 {
        return Err(Error::precondition("sample count must be >= 1"));
    }
    let b = spec.base_dim();
    let golden = 0.6180339887498949_f64;
    let mut rng = numeric::rng(seed);
    use rand::Rng;
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        i += 1;
        // Stratified radius/angle for the first base coordinate, random for
        // the rest; ensures the z = 0 slice region is covered.
        let frac = (out.len() as f64 + 0.5) / count as f64;
        let r = 0.9 * frac.sqrt() * if i % 7 == 0 { 0.0 } else { 1.0 };
        let th = 2.0 * std::f64::consts::PI * ((i as f64 * golden) % 1.0);
        let mut z: Vec<C> = Vec::with_capacity(b);
        z.push(C::new(r * th.cos(), r * th.sin()));
        for _ in 1..b {
            let rr = 0.9 * rng.gen::<f64>().sqrt();
            let tt = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            z.push(C::new(rr * tt.cos(), rr * tt.sin()));
        }
        if spec
            .grid
            .points
            .iter()
            .take(spec.n_terms)
            .any(|a| numeric::cdist(&z, a) < 1e-6)
        {
            continue;
        }
        let (phi, _) = potential_phi(spec, &z)?;
        let v = match phi.finite() {
            Some(p) => p.exp(),
            None => continue,
        };
        let wr = (-v).exp();
        let wth = 2.0 * std::f64::consts::PI * ((i as f64 * golden * golden) % 1.0);
        let mut point = z;
        point.push(C::new(wr * wth.cos(), wr * wth.sin()));
        out.push(point);
    }
    Ok(out)
}

/// Plurisubharmonicity scan report for the potential.
#[derive(Debug, Clone)]
pub struct PshScanReport {
    pub min_eigenvalue: f64,
    pub pass: bool,
    pub points_scanned: usize,
}

/// Exclusion radius around grid point i keeping the finite-difference
/// truncation error of the log singularity below the scan tolerance.
pub fn psh_exclusion_radius(spec: &HartogsSpec, i: usize) -> f64 {
    (0.35 * (spec.weights[i] / 0.25).powf(0.25)).max(1e-4)
}

/// Scan grid for psh checks: rejection-sampled base points away from the
/// per-point exclusion radii.
pub fn psh_scan_grid(spec: &HartogsSpec, count: usize, seed: u64) -> Vec<Vec<C>> {
    let b = spec.base_dim();
    let mut rng = numeric::rng(seed);
    use rand::Rng;
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 200 * count {
        tries += 1;
        let z: Vec<C> = (0..b)
            .map(|_| {
                let r = 0.93 * rng.gen::<f64>().sqrt();
                let t = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                C::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let ok = spec
            .grid
            .points
            .iter()
            .take(spec.n_terms)
            .enumerate()
            .all(|(i, a)| numeric::cdist(&z, a) >= psh_exclusion_radius(spec, i));
        if ok {
            out.push(z);
        }
    }
    out
}

/// Minimum eigenvalue of the finite-difference complex Hessian of phi over
/// the grid; PASS iff >= -1e-7 (each log summand is psh away from its
/// singularity, so the truncated sum should scan nonnegative).
pub fn psh_scan(spec: &HartogsSpec, grid: &[Vec<C>]) -> Result<PshScanReport> {
    let mut min_eig = f64::INFINITY;
    // Balances the log-singularity truncation error (h^2 / d^4 per unit
    // weight) against the cancellation noise floor (eps / h^2).
    let h = 1.2e-4;
    for z in grid {
        let f = |p: &[C]| -> f64 {
            match potential_phi(spec, p) {
                Ok((PhiValue::Finite(v), _)) => v,
                _ => -1e6,
            }
        };
        let hess = numeric::fd_complex_hessian(&f, z, h);
        let eigs = crate::polyalg::HermitianMatrix::new(hess).eigenvalues_sorted();
        min_eig = min_eig.min(eigs[0]);
    }
    Ok(PshScanReport { min_eigenvalue: min_eig, pass: min_eig >= -1e-7, points_scanned: grid.len() })
}

/// Flood-fill component count of (ball grid) minus a tube around omega_n.
#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub components: usize,
    pub pass: bool,
    pub cells_in_ball: usize,
    pub tube_cells: usize,
    pub resolution: usize,
}

/// Checks that omega_n locally separates a small ball around p: the grid of
/// the ball minus a tube around the surface must have at least 2 connected
/// components. Only implemented for ambient dimension 2 (4 real dims).
pub fn locally_separating_check(
    spec: &HartogsSpec,
    p: &[C],
    ball_radius: f64,
    resolution: usize,
) -> Result<SeparationReport> {
    if spec.n != 2 {
        return Err(Error::precondition("separation check implemented for n = 2"));
    }
    let (_, m) = v_and_membership(spec, &p[..1], p[1])?;
    if m != Membership::Boundary {
        return Err(Error::precondition("p must lie on omega_n within tolerance"));
    }
    let res = resolution.max(4);
    let n_side = 2 * res + 1;
    let cell = ball_radius / res as f64;
    let tube = 1.6 * cell;
    // Classify each 4-D cell center.
    let idx_of = |i: usize, j: usize, k: usize, l: usize| ((i * n_side + j) * n_side + k) * n_side + l;
    let mut state = vec![0u8; n_side * n_side * n_side * n_side]; // 0 out, 1 free, 2 tube
    let mut v_cache = vec![f64::NAN; n_side * n_side];
    let mut in_ball = 0usize;
    let mut tube_cells = 0usize;
    for i in 0..n_side {
        for j in 0..n_side {
            let z = C::new(
                p[0].re + (i as f64 - res as f64) * cell,
                p[0].im + (j as f64 - res as f64) * cell,
            );
            if z.norm() < 1.0 {
                let (phi, _) = potential_phi(spec, &[z])?;
                if let Some(v) = phi.finite() {
                    v_cache[i * n_side + j] = (-v.exp()).exp();
                }
            }
            for k in 0..n_side {
                for l in 0..n_side {
                    let w = C::new(
                        p[1].re + (k as f64 - res as f64) * cell,
                        p[1].im + (l as f64 - res as f64) * cell,
                    );
                    let dz = (z - p[0]).norm_sqr();
                    let dw = (w - p[1]).norm_sqr();
                    if dz + dw > ball_radius * ball_radius {
                        continue;
                    }
                    let r_fiber = v_cache[i * n_side + j];
                    if r_fiber.is_nan() {
                        continue;
                    }
                    in_ball += 1;
                    let id = idx_of(i, j, k, l);
                    if (w.norm() - r_fiber).abs() <= tube {
                        state[id] = 2;
                        tube_cells += 1;
                    } else {
                        state[id] = 1;
                    }
                }
            }
        }
    }
    // Union-find over axis neighbours of free cells.
    let total = state.len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let dims = [n_side, n_side, n_side, n_side];
    for i in 0..n_side {
        for j in 0..n_side {
            for k in 0..n_side {
                for l in 0..n_side {
                    let id = idx_of(i, j, k, l);
                    if state[id] != 1 {
                        continue;
                    }
                    let coords = [i, j, k, l];
                    for axis in 0..4 {
                        if coords[axis] + 1 < dims[axis] {
                            let mut nb = coords;
                            nb[axis] += 1;
                            let nid = idx_of(nb[0], nb[1], nb[2], nb[3]);
                            if state[nid] == 1 {
                                let ra = find(&mut parent, id);
                                let rb = find(&mut parent, nid);
                                parent[ra] = rb;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for id in 0..total {
        if state[id] == 1 {
            let r = find(&mut parent, id);
            roots.insert(r);
        }
    }
    Ok(SeparationReport {
        components: roots.len(),
        pass: roots.len() >= 2,
        cells_in_ball: in_ball,
        tube_cells,
        resolution: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    #[test]
    fn grid_level_two_points() {
        let g = grid_set(1, 2).unwrap();
        assert_eq!(g.points.len(), 4);
        let expected = [c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0)];
        for (p, e) in g.points.iter().zip(expected.iter()) {
            assert!((p[0] - e).norm() < 1e-12, "{:?} vs {:?}", p[0], e);
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(grid_set(1, 3).unwrap().points.len(), 13);
        assert_eq!(grid_count(1, 3), 13);
        let g = grid_set(2, 2).unwrap();
        assert_eq!(g.points.len(), 16);
        assert!(g.points.iter().all(|p| (p[0].norm() - 0.5).abs() < 1e-12
            && (p[1].norm() - 0.5).abs() < 1e-12));
    }

    #[test]
    fn grid_points_distinct() {
        let g = grid_set(1, 6).unwrap();
        for i in 0..g.points.len() {
            for j in (i + 1)..g.points.len() {
                assert!(numeric::cdist(&g.points[i], &g.points[j]) > 1e-9);
            }
        }
    }

    #[test]
    fn sup_norm_examples() {
        // f(z) = z_1 with ||f|| = 1 passes; bound formula is exact.
        let f = |z: &[C]| z[0];
        let rep = sup_norm_test(&f, 1.0, 2, 50).unwrap();
        assert!(rep.grid_ok);
        assert!((rep.torus_bound - (1.0 + 2.0 * std::f64::consts::PI / 50.0)).abs() < 1e-15);
        assert!((rep.empirical_torus_max - 0.98).abs() < 1e-12);
        // f = 1 passes with empirical max 1.
        let one = |_: &[C]| c(1.0, 0.0);
        let rep = sup_norm_test(&one, 1.0, 2, 12).unwrap();
        assert!(rep.grid_ok);
        assert!((rep.empirical_torus_max - 1.0).abs() < 1e-12);
        // f = 2 z_1 produces a witness (level k = 3 is the first with
        // |a_1| = 2/3 > 1/2).
        let twice = |z: &[C]| z[0] * 2.0;
        let rep = sup_norm_test(&twice, 2.0, 2, 12).unwrap();
        assert!(!rep.grid_ok);
        let (pt, v) = rep.witness.unwrap();
        assert!((pt[0].norm() - 2.0 / 3.0).abs() < 1e-12);
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn potential_single_term_value() {
        // Base dimension 1, z = 0, one term with a at 0.5i and weight 1/4:
        // phi = 0.25 * log(0.5 / 2).
        let spec = HartogsSpec::new(2, 2).unwrap().truncated(1);
        let (phi, _) = potential_phi(&spec, &[c(0.0, 0.0)]).unwrap();
        let v = phi.finite().unwrap();
        assert!((v - 0.25 * (0.25f64).ln()).abs() < 1e-12);
        assert!(v < 0.0);
    }

    #[test]
    fn potential_neg_infinity_at_grid_point() {
        let spec = HartogsSpec::new(2, 2).unwrap();
        let a = spec.grid.points[0].clone();
        let (phi, _) = potential_phi(&spec, &a).unwrap();
        assert_eq!(phi, PhiValue::NegInfinity);
        let (v, _) = v_and_membership(&spec, &a, c(0.5, 0.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn v_in_unit_interval() {
        let spec = HartogsSpec::new(2, 8).unwrap();
        let mut rng = numeric::rng(5);
        use rand::Rng;
        for _ in 0..2000 {
            let r = 0.97 * rng.gen::<f64>().sqrt();
            let t = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let z = [c(r * t.cos(), r * t.sin())];
            let (phi, _) = potential_phi(&spec, &z).unwrap();
            if let Some(p) = phi.finite() {
                let v = p.exp();
                assert!(v > 0.0 && v < 1.0, "V out of range: {v}");
            }
        }
    }

    #[test]
    fn truncation_stability() {
        let spec = HartogsSpec::new(2, 8).unwrap();
        let n = 40;
        let short = spec.truncated(n);
        let long = spec.truncated(2 * n);
        let mut rng = numeric::rng(9);
        use rand::Rng;
        for _ in 0..1000 {
            let z = [c(
                0.5 * rng.gen::<f64>() - 0.25,
                0.5 * rng.gen::<f64>() - 0.25,
            )];
            if z[0].norm() >= 0.25 {
                continue;
            }
            let a = potential_phi(&short, &z).unwrap().0.finite().unwrap();
            let b = potential_phi(&long, &z).unwrap().0.finite().unwrap();
            assert!((a - b).abs() <= short.tail_bound + 1e-15);
        }
    }

    #[test]
    fn membership_classification() {
        let spec = HartogsSpec::new(2, 8).unwrap();
        let z = [c(0.1, 0.2)];
        let (phi, _) = potential_phi(&spec, &z).unwrap();
        let r = (-phi.finite().unwrap().exp()).exp();
        assert_eq!(v_and_membership(&spec, &z, c(0.5 * r, 0.0)).unwrap().1, Membership::Inside);
        assert_eq!(v_and_membership(&spec, &z, c(1.5 * r, 0.0)).unwrap().1, Membership::Outside);
        assert_eq!(v_and_membership(&spec, &z, c(r, 0.0)).unwrap().1, Membership::Boundary);
    }

    #[test]
    fn omega_samples_on_surface() {
        let spec = HartogsSpec::new(2, 8).unwrap();
        let samples = omega_surface_samples(&spec, 64, 3).unwrap();
        assert_eq!(samples.len(), 64);
        let mut saw_zero_slice = false;
        for s in &samples {
            let (_, m) = v_and_membership(&spec, &s[..1], s[1]).unwrap();
            assert_eq!(m, Membership::Boundary);
            if s[0].norm() < 1e-12 {
                saw_zero_slice = true;
            }
        }
        assert!(saw_zero_slice, "stratification must cover the z = 0 slice");
    }

    #[test]
    fn psh_scan_single_log_term() {
        // One log term is harmonic away from its singularity.
        let spec = HartogsSpec::new(2, 2).unwrap().truncated(1);
        let grid = psh_scan_grid(&spec, 300, 17);
        assert!(grid.len() >= 200);
        let rep = psh_scan(&spec, &grid).unwrap();
        assert!(rep.pass, "min eigenvalue {}", rep.min_eigenvalue);
    }

    #[test]
    fn sign_flipped_weights_fail_scan() {
        // In base dimension >= 2 each log term is genuinely psh (not
        // harmonic), so flipping the weights produces negative curvature.
        let mut spec = HartogsSpec::new(3, 2).unwrap();
        for w in spec.weights.iter_mut() {
            *w = -*w;
        }
        let grid = psh_scan_grid(&spec, 150, 21);
        let rep = psh_scan(&spec, &grid).unwrap();
        assert!(!rep.pass, "min eigenvalue {:e}", rep.min_eigenvalue);
    }
}
