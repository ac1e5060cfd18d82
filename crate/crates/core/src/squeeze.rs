//! Squeezing-function bounds. The lower bound comes from a constructive
//! embedding chain: an extremal orthonormal frame of boundary contacts, the
//! affine normalization Lambda, a lower-triangular shear from the contact
//! tangent planes, and componentwise Cayley maps into the unit polydisc.
//! Upper bounds come from Kobayashi-distance estimates: removal of a compact
//! set, and the Hartogs-domain distance to its inessential boundary piece.

use crate::boundary::project_to_boundary;
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::hartogs::{omega_surface_samples, v_and_membership, HartogsSpec, Membership};
use crate::kobayashi::{polydisc_distance, Ambient};
use crate::numeric::{self, C};
use crate::polyalg::AffineMap;

/// Extremal contact frame at an interior point: s_1 realizes the inscribed
/// ball radius, and each further s_j the inscribed radius of the slice
/// through the orthogonal complement of the previous contact directions.
#[derive(Debug, Clone)]
pub struct ExtremalFrame {
    pub base: Vec<C>,
    pub contacts: Vec<Vec<C>>,
    pub directions: Vec<Vec<C>>,
    pub radii: Vec<f64>,
}

impl ExtremalFrame {
    /// Max deviation of the direction tuple from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.directions.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let ip = numeric::hermitian_dot(&self.directions[i], &self.directions[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                d = d.max((ip - C::new(target, 0.0)).norm());
            }
        }
        d
    }
}

/// Orthonormal basis of the complex orthogonal complement of `spanned`.
fn complement_basis(n: usize, spanned: &[Vec<C>]) -> Vec<Vec<C>> {
    let mut basis: Vec<Vec<C>> = Vec::new();
    for k in 0..n {
        if spanned.len() + basis.len() == n {
            break;
        }
        let mut v = vec![C::new(0.0, 0.0); n];
        v[k] = C::new(1.0, 0.0);
        for b in spanned.iter().chain(basis.iter()) {
            let p = numeric::hermitian_dot(&v, b);
            for j in 0..n {
                v[j] -= p * b[j];
            }
        }
        let vn = numeric::cnorm(&v);
        if vn > 1e-7 {
            basis.push(numeric::scale(&v, 1.0 / vn));
        }
    }
    basis
}

fn ray_distance(domain: &DomainSpec, from: &[C], dir: &[C]) -> f64 {
    match domain.ray_boundary_crossing(from, dir) {
        Some(q) => numeric::cdist(&q, from),
        None => f64::INFINITY,
    }
}

/// Minimize the boundary distance over unit directions of a complex slice.
fn slice_nearest(
    domain: &DomainSpec,
    w: &[C],
    basis: &[Vec<C>],
    seed: u64,
) -> Result<(Vec<C>, f64)> {
    let dir_at = |coeffs: &[C]| -> Vec<C> {
        let mut v = vec![C::new(0.0, 0.0); w.len()];
        for (c, b) in coeffs.iter().zip(basis) {
            v = numeric::caxpy(*c, b, &v);
        }
        v
    };
    let mut best: (f64, Vec<C>) = (f64::INFINITY, Vec::new());
    if basis.len() == 1 {
        // One complex direction: scan and refine the angle.
        let dist_of = |th: f64| ray_distance(domain, w, &dir_at(&[C::new(th.cos(), th.sin())]));
        // Ties (rotation-invariant slices) resolve to the first angle, so
        // improvements must be strict beyond the ray-bisection noise.
        let tie_tol = 1e-9;
        let grid = 256;
        let mut best_th = 0.0;
        for i in 0..grid {
            let th = 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
            let d = dist_of(th);
            if d < best.0 - tie_tol {
                best = (d, dir_at(&[C::new(th.cos(), th.sin())]));
                best_th = th;
            }
        }
        // Ternary refinement around the best angle.
        let mut lo = best_th - 2.0 * std::f64::consts::PI / grid as f64;
        let mut hi = best_th + 2.0 * std::f64::consts::PI / grid as f64;
        for _ in 0..50 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if dist_of(m1) <= dist_of(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let th = 0.5 * (lo + hi);
        let d = dist_of(th);
        if d < best.0 - tie_tol {
            best = (d, dir_at(&[C::new(th.cos(), th.sin())]));
        }
    } else {
        let mut rng = numeric::rng(seed);
        for _ in 0..1024 {
            let coeffs = numeric::random_unit_dir(&mut rng, basis.len());
            let dir = dir_at(&coeffs);
            let d = ray_distance(domain, w, &dir);
            if d < best.0 {
                best = (d, dir);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::non_convergence(
            "slice boundary search found no crossing inside the box",
        ));
    }
    let q = domain
        .ray_boundary_crossing(w, &best.1)
        .ok_or_else(|| Error::non_convergence("slice crossing lost during refinement"))?;
    Ok((q, best.0))
}

/// A ball B'(xi, radius) hosting the convexity hypotheses.
#[derive(Debug, Clone)]
pub struct SupportBall {
    pub center: Vec<C>,
    pub radius: f64,
}

impl SupportBall {
    pub fn contains(&self, z: &[C]) -> bool {
        numeric::cdist(z, &self.center) < self.radius
    }
}

/// Sampled convexity test of domain ∩ B'.
fn convexity_check(domain: &DomainSpec, ball: &SupportBall, seed: u64) -> bool {
    let mut rng = numeric::rng(seed);
    let mut pts: Vec<Vec<C>> = Vec::new();
    let mut tries = 0;
    while pts.len() < 60 && tries < 20000 {
        tries += 1;
        let dir = numeric::random_unit_dir(&mut rng, domain.dim);
        use rand::Rng;
        let r = ball.radius * rng.gen::<f64>();
        let p = numeric::axpy(r, &dir, &ball.center);
        if domain.contains(&p) && ball.contains(&p) {
            pts.push(p);
        }
    }
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for &t in &[0.25, 0.5, 0.75] {
                let mid: Vec<C> = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| a * (1.0 - t) + b * t)
                    .collect();
                if !domain.contains(&mid) {
                    return false;
                }
            }
        }
    }
    !pts.is_empty()
}

/// Build the extremal frame at w (preconditions: w interior and close to the
/// support ball center; domain ∩ B' convex by sampling).
pub fn extremal_frame(
    domain: &DomainSpec,
    w: &[C],
    ball: &SupportBall,
    seed: u64,
) -> Result<ExtremalFrame> {
    if !domain.contains(w) {
        return Err(Error::precondition("frame base point must be interior"));
    }
    if numeric::cdist(w, &ball.center) > 0.9 * ball.radius {
        return Err(Error::precondition("frame base point too far from the support ball center"));
    }
    if !convexity_check(domain, ball, seed ^ 0xc0) {
        return Err(Error::precondition("domain ∩ B' failed the sampled convexity test"));
    }
    let n = domain.dim;
    let mut contacts: Vec<Vec<C>> = Vec::new();
    let mut directions: Vec<Vec<C>> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    // s_1: the nearest boundary point.
    let p = project_to_boundary(domain, w)?;
    if p.warning {
        return Err(Error::non_convergence("boundary projection did not converge"));
    }
    radii.push(p.distance);
    let e1 = numeric::scale(&numeric::sub(&p.point.point, w), 1.0 / p.distance);
    contacts.push(p.point.point);
    directions.push(e1);
    // s_j for j >= 2 in the orthogonal complement slices.
    for j in 1..n {
        let basis = complement_basis(n, &directions);
        let (q, d) = slice_nearest(domain, w, &basis, seed ^ (j as u64) << 4)?;
        let mut e = numeric::scale(&numeric::sub(&q, w), 1.0 / d);
        // Clean roundoff against the previous directions.
        for prev in &directions {
            let ip = numeric::hermitian_dot(&e, prev);
            e = e.iter().zip(prev).map(|(x, p)| x - ip * p).collect();
        }
        let en = numeric::cnorm(&e);
        e = numeric::scale(&e, 1.0 / en);
        contacts.push(q);
        directions.push(e);
        radii.push(d);
    }
    let frame = ExtremalFrame { base: w.to_vec(), contacts, directions, radii };
    if frame.orthonormality_defect() > 1e-8 {
        return Err(Error::non_convergence(format!(
            "frame orthonormality defect {:e}",
            frame.orthonormality_defect()
       )));
    }
    for (s, _) in frame.contacts.iter().zip(&frame.radii) {
        if domain.value(s).abs() > 1e-6 {
            return Err(Error::non_convergence("frame contact left the boundary"));
        }
    }
    Ok(frame)
}

/// The affine normalization Lambda(z) = sum_j <z - w, e_j>/r_j epsilon_j.
pub fn lambda_map(frame: &ExtremalFrame) -> AffineMap {
    let n = frame.base.len();
    let mut map = AffineMap::identity(n);
    for j in 0..n {
        for k in 0..n {
            map.linear[j][k] = frame.directions[j][k].conj() / frame.radii[j];
        }
    }
    let mw = (0..n)
        .map(|j| {
            -(0..n)
                .map(|k| map.linear[j][k] * frame.base[k])
                .sum::<C>()
        })
        .collect();
    map.offset = mw;
    map
}

/// Rows a^{j,k} of the contact tangent planes in Lambda coordinates:
/// unit rows, lower-triangular, with positive diagonal; row 1 = (1, 0, ...).
pub fn tangent_coefficients(
    domain: &DomainSpec,
    frame: &ExtremalFrame,
    lambda: &AffineMap,
) -> Result<Vec<Vec<C>>> {
    let n = frame.base.len();
    let m_inv = lambda.inverse().ok_or(Error::SingularMap)?;
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let g = domain.wirtinger_grad(&frame.contacts[j]);
        // Pushforward of the plane functional by Lambda.
        let mut gt = vec![C::new(0.0, 0.0); n];
        for k in 0..n {
            for l in 0..n {
                gt[k] += m_inv.linear[l][k] * g[l];
            }
        }
        let norm = numeric::cnorm(&gt);
        if norm == 0.0 {
            return Err(Error::precondition("vanishing tangent functional"));
        }
        let mut row: Vec<C> = gt.iter().map(|c| c / norm).collect();
        // The diagonal must carry the dominant, real-positive coefficient.
        let diag = row[j];
        if diag.norm() < 1e-7 {
            return Err(Error::precondition(format!(
                "degenerate tangency at contact {j}: diagonal coefficient {diag}"
            )));
        }
        if diag.im.abs() > 1e-6 * diag.norm() {
            return Err(Error::precondition(format!(
                "tangent functional not real on the diagonal at contact {j} ({diag}); \
                 outside the expected coefficient regime"
            )));
        }
        if diag.re < 0.0 {
            for c in row.iter_mut() {
                *c = -*c;
            }
        }
        // Entries beyond the diagonal must vanish per the frame geometry.
        for (k, c) in row.iter_mut().enumerate().skip(j + 1) {
            if c.norm() > 1e-6 {
                return Err(Error::precondition(format!(
                    "contact {j} tangent plane has a coefficient {c} at column {k}; \
                     frame geometry violated"
                )));
            }
            *c = C::new(0.0, 0.0);
        }
        let rn = numeric::cnorm(&row);
        let row: Vec<C> = row.iter().map(|c| c / rn).collect();
        rows.push(row);
    }
    // Row 1 is (1, 0, ..., 0) by the frame construction.
    if (rows[0][0] - C::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(Error::precondition(format!(
            "first tangent row is not the coordinate functional: {:?}",
            rows[0]
        )));
    }
    rows[0] = (0..n)
        .map(|k| if k == 0 { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) })
        .collect();
    Ok(rows)
}

/// The complete embedding chain Phi ∘ L ∘ Lambda.
#[derive(Debug, Clone)]
pub struct EmbeddingChain {
    pub frame: ExtremalFrame,
    pub lambda: AffineMap,
    pub rows: Vec<Vec<C>>,
    /// Largest delta with D(0, delta)^n ⊂ L(the l1 unit ball), by sampling.
    pub delta0: f64,
}

impl EmbeddingChain {
    pub fn diag(&self, j: usize) -> f64 {
        self.rows[j][j].re
    }

    fn apply_l(&self, y: &[C]) -> Vec<C> {
        let n = y.len();
        (0..n)
            .map(|j| (0..=j).map(|k| self.rows[j][k] * y[k]).sum())
            .collect()
    }

    fn l_solve(&self, target: &[C]) -> Vec<C> {
        let n = target.len();
        let mut x = vec![C::new(0.0, 0.0); n];
        for j in 0..n {
            let mut acc = target[j];
            for k in 0..j {
                acc -= self.rows[j][k] * x[k];
            }
            x[j] = acc / self.rows[j][j];
        }
        x
    }

    /// Composite map into the unit polydisc.
    pub fn apply(&self, z: &[C]) -> Vec<C> {
        let y = self.apply_l(&self.lambda.apply(z));
        y.iter()
            .enumerate()
            .map(|(j, &u)| u / (C::new(2.0 * self.diag(j), 0.0) - u))
            .collect()
    }
}

fn l1_norm(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm()).sum()
}

/// Largest delta such that the polydisc D(0, delta)^n sits inside L(Q),
/// Q the open unit l1-ball, by torus sampling and bisection.
fn delta0_of_rows(chain: &EmbeddingChain) -> f64 {
    let n = chain.rows.len();
    let angles = 24usize;
    let feasible = |delta: f64| -> bool {
        let mut idx = vec![0usize; n];
        loop {
            let target: Vec<C> = idx
                .iter()
                .map(|&i| {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / angles as f64;
                    C::new(delta * th.cos(), delta * th.sin())
                })
                .collect();
            if l1_norm(&chain.l_solve(&target)) >= 1.0 {
                return false;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    return true;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < angles {
                    break;
                }
                idx[pos] = 0;
            }
        }
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Build and verify the embedding chain at w.
pub fn embedding_chain(
    domain: &DomainSpec,
    w: &[C],
    ball: &SupportBall,
    seed: u64,
) -> Result<EmbeddingChain> {
    let n = domain.dim;
    let frame = extremal_frame(domain, w, ball, seed)?;
    let lambda = lambda_map(&frame);
    // Lambda(w) = 0 and Lambda(s_j) = epsilon_j.
    let lw = lambda.apply(w);
    if numeric::cnorm(&lw) > 1e-8 {
        return Err(Error::non_convergence("Lambda does not vanish at the base point"));
    }
    for (j, s) in frame.contacts.iter().enumerate() {
        let ls = lambda.apply(s);
        let mut expect = vec![C::new(0.0, 0.0); n];
        expect[j] = C::new(1.0, 0.0);
        if numeric::cdist(&ls, &expect) > 1e-8 {
            return Err(Error::non_convergence(format!(
                "Lambda(s_{j}) missed the basis vector by {:e}",
                numeric::cdist(&ls, &expect)
            )));
        }
    }
    // The l1-ball inclusion (convexity of the slice union) must hold before
    // the diagonal lower bound may be asserted.
    let mut rng = numeric::rng(seed ^ 0xac);
    let inv = lambda.inverse().ok_or(Error::SingularMap)?;
    use rand::Rng;
    for _ in 0..2000 {
        let dir = numeric::random_unit_dir(&mut rng, n);
        let l1 = l1_norm(&dir);
        let scale = 0.999 * rng.gen::<f64>() / l1;
        let q: Vec<C> = dir.iter().map(|c| c * scale).collect();
        let z = inv.apply(&q);
        if !(domain.contains(&z) && ball.contains(&z)) {
            return Err(Error::precondition(format!(
                "l1-ball inclusion failed: Lambda^{{-1}} of a unit-l1 sample is outside \
                 domain ∩ B' (sample {q:?})"
            )));
        }
    }
    let rows = tangent_coefficients(domain, &frame, &lambda)?;
    let floor = 1.0 / (n as f64).sqrt() - 1e-6;
    for (j, row) in rows.iter().enumerate() {
        if row[j].re < floor {
            return Err(Error::precondition(format!(
                "diagonal coefficient a^{{{j},{j}}} = {} below the 1/sqrt(n) floor; \
                 convexity precondition failed",
                row[j].re
            )));
        }
    }
    let mut chain = EmbeddingChain { frame, lambda, rows, delta0: 0.0 };
    chain.delta0 = delta0_of_rows(&chain);
    // Composite vanishes at w.
    if numeric::cnorm(&chain.apply(w)) > 1e-10 {
        return Err(Error::non_convergence("composite map does not vanish at w"));
    }
    // Image of the domain stays in the closed unit polydisc.
    for (i, sample) in domain.sample_interior(10_000, seed ^ 0xd5).iter().enumerate() {
        let img = chain.apply(sample);
        if img.iter().any(|c| c.norm() >= 1.0 + 1e-9) {
            return Err(Error::non_convergence(format!(
                "domain sample {i} maps outside the unit polydisc: {img:?}"
            )));
        }
    }
    Ok(chain)
}

/// Minimum norm of the pushforward of boundary samples, refined by a
/// projected-gradient descent along the boundary manifold.
pub fn inscribed_radius(
    domain: &DomainSpec,
    chain: &EmbeddingChain,
    boundary_samples: &[Vec<C>],
) -> Result<(f64, bool)> {
    if boundary_samples.is_empty() {
        return Err(Error::EmptyInput("inscribed radius needs boundary samples".into()));
    }
    let low_sample_count = boundary_samples.len() < 1000;
    let h = |q: &[C]| -> f64 { numeric::cnorm(&chain.apply(q)) };
    let mut best_q = boundary_samples[0].clone();
    let mut best = f64::INFINITY;
    for q in boundary_samples {
        let v = h(q);
        if v < best {
            best = v;
            best_q = q.clone();
        }
    }
    // Local refinement: descend h along the boundary.
    let reproject = |mut q: Vec<C>| -> Vec<C> {
        for _ in 0..4 {
            let v = domain.value(&q);
            let g = domain.real_grad(&q);
            let gn2: f64 = g.iter().map(|x| x * x).sum();
            if gn2 == 0.0 {
                break;
            }
            let gc = numeric::from_real_vec(&g);
            q = numeric::axpy(-v / gn2, &gc, &q);
        }
        q
    };
    let mut q = best_q.clone();
    let mut step = 1e-2 * (1.0 + numeric::cnorm(&q));
    let mut current = best;
    for _ in 0..50 {
        let x = numeric::to_real_vec(&q);
        let f = |xr: &[f64]| h(&numeric::from_real_vec(xr));
        let grad = numeric::fd_gradient(&f, &x, 1e-6);
        let gc = numeric::from_real_vec(&grad);
        let normal = domain.outward_normal(&q);
        let tang = crate::boundary::tangential_part(&gc, &normal);
        let tn = numeric::cnorm(&tang);
        if tn < 1e-12 {
            break;
        }
        let cand = reproject(numeric::axpy(-step / tn, &tang, &q));
        let v = h(&cand);
        if v < current && domain.value(&cand).abs() < 1e-6 {
            q = cand;
            current = v;
            step *= 1.3;
        } else {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    Ok((best.min(current), low_sample_count))
}

/// Squeezing lower bound with all of its witnesses.
#[derive(Debug, Clone)]
pub struct HhrLowerBound {
    /// The certified-style bound: max(inscribed/sqrt(n), a-priori constant).
    pub lower: f64,
    /// Inscribed radius of the polydisc image (the raw pipeline number).
    pub inscribed: f64,
    /// delta0 / ((2 + delta0) n).
    pub apriori: f64,
    /// (delta0 / (2 + delta0)) / sqrt(n), the inclusion-chain variant.
    pub apriori_sqrt: f64,
    pub delta0: f64,
    pub low_sample_warning: bool,
}

/// Constructive squeezing lower bound at w via the embedding chain.
pub fn hhr_lower_bound(
    domain: &DomainSpec,
    w: &[C],
    ball: &SupportBall,
    boundary_sample_count: usize,
    seed: u64,
) -> Result<HhrLowerBound> {
    let chain = embedding_chain(domain, w, ball, seed)?;
    let samples = domain.sample_boundary(boundary_sample_count, seed ^ 0xb0);
    let (inscribed, low) = inscribed_radius(domain, &chain, &samples)?;
    let n = domain.dim as f64;
    let apriori = chain.delta0 / ((2.0 + chain.delta0) * n);
    let apriori_sqrt = chain.delta0 / (2.0 + chain.delta0) / n.sqrt();
    let lower = (inscribed / n.sqrt()).max(apriori).min(1.0);
    Ok(HhrLowerBound {
        lower,
        inscribed,
        apriori,
        apriori_sqrt,
        delta0: chain.delta0,
        low_sample_warning: low,
    })
}

/// A compact set K removed from the ambient domain.
#[derive(Debug, Clone)]
pub enum CompactSet {
    Ball { center: Vec<C>, radius: f64 },
    Points(Vec<Vec<C>>),
}

impl CompactSet {
    pub fn contains(&self, z: &[C]) -> bool {
        match self {
            CompactSet::Ball { center, radius } => numeric::cdist(z, center) <= *radius,
            CompactSet::Points(_) => false,
        }
    }

    /// Boundary samples; for balls, optionally include the radial nearest
    /// point toward a query point (it realizes the distance minimum for
    /// concentric geometry).
    pub fn boundary_samples(&self, count: usize, seed: u64, toward: Option<&[C]>) -> Vec<Vec<C>> {
        match self {
            CompactSet::Ball { center, radius } => {
                let mut rng = numeric::rng(seed);
                let mut out = Vec::with_capacity(count + 1);
                if let Some(z) = toward {
                    let d = numeric::cdist(z, center);
                    if d > 0.0 {
                        let dir = numeric::scale(&numeric::sub(z, center), 1.0 / d);
                        out.push(numeric::axpy(*radius, &dir, center));
                    }
                }
                while out.len() < count {
                    let dir = numeric::random_unit_dir(&mut rng, center.len());
                    out.push(numeric::axpy(*radius, &dir, center));
                }
                out
            }
            CompactSet::Points(p) => p.clone(),
        }
    }
}

/// Sampled connectivity check of ambient minus K.
fn removal_connectivity(ambient: &Ambient, k: &CompactSet, z: &[C], seed: u64) -> Result<()> {
    let mut rng = numeric::rng(seed);
    let n = z.len();
    let mut nodes: Vec<Vec<C>> = vec![z.to_vec()];
    let mut tries = 0;
    while nodes.len() < 200 && tries < 40000 {
        tries += 1;
        let dir = numeric::random_unit_dir(&mut rng, n);
        use rand::Rng;
        let r = 2.0 * rng.gen::<f64>();
        let p = numeric::scale(&dir, r);
        if ambient.contains(&p) && !k.contains(&p) {
            nodes.push(p);
        }
    }
    let m = nodes.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let free = |p: &[C]| ambient.contains(p) && !k.contains(p);
    for i in 0..m {
        let mut dists: Vec<(usize, f64)> = (0..m)
            .filter(|&j| j != i)
            .map(|j| (j, numeric::cdist(&nodes[i], &nodes[j])))
            .collect();
        dists.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        for &(j, _) in dists.iter().take(10) {
            let ok = (1..8).all(|t| {
                let lam = t as f64 / 8.0;
                let mid: Vec<C> = nodes[i]
                    .iter()
                    .zip(&nodes[j])
                    .map(|(a, b)| a * (1.0 - lam) + b * lam)
                    .collect();
                free(&mid)
            });
            if ok {
                let ra = find(&mut parent, i);
                let rb = find(&mut parent, j);
                parent[ra] = rb;
            }
        }
    }
    let root0 = find(&mut parent, 0);
    let connected = (0..m).filter(|&i| find(&mut parent, i) == root0).count();
    if (connected as f64) < 0.9 * m as f64 {
        return Err(Error::precondition(
            "ambient minus K failed the sampled connectivity check",
        ));
    }
    Ok(())
}

/// Upper bound from removing a compact set: tanh of the ambient Kobayashi
/// distance from z to the boundary of K.
pub fn removal_upper_bound(
    ambient: &Ambient,
    k: &CompactSet,
    z: &[C],
    budget: usize,
    seed: u64,
) -> Result<f64> {
    if k.contains(z) {
        return Err(Error::precondition("query point lies inside the removed set"));
    }
    if !ambient.contains(z) {
        return Err(Error::OutOfDomain("query point outside the ambient domain".into()));
    }
    removal_connectivity(ambient, k, z, seed ^ 0xcc)?;
    let targets = k.boundary_samples(200, seed, Some(z));
    let d = ambient.distance_to_set(z, &targets, budget, seed)?;
    Ok(d.tanh())
}

/// Upper bound on the Hartogs domain: tanh of the polydisc distance from the
/// point to sampled omega_n.
pub fn hartogs_upper_bound(
    spec: &HartogsSpec,
    point: &[C],
    surface_samples: &[Vec<C>],
) -> Result<f64> {
    let b = spec.base_dim();
    if point.len() != spec.n {
        return Err(Error::DimensionMismatch { expected: spec.n, got: point.len() });
    }
    let (_, m) = v_and_membership(spec, &point[..b], point[b])?;
    if m == Membership::Outside {
        return Err(Error::OutOfDomain("point outside the Hartogs domain".into()));
    }
    let mut best = f64::INFINITY;
    for t in surface_samples {
        best = best.min(polydisc_distance(point, t)?);
    }
    Ok(best.tanh().min(1.0))
}

/// A per-point two-sided bound with witnesses and flags.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub point: Vec<C>,
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Option<HhrLowerBound>,
    pub upper_witness: Option<String>,
    pub flags: Vec<String>,
}

impl BoundReport {
    /// Bounds must sit in [0, 1] with lower <= upper; violations are
    /// reported, never clamped away.
    pub fn diagnostic(&self) -> Option<String> {
        if !(0.0..=1.0).contains(&self.lower)
            || !(0.0..=1.0).contains(&self.upper)
            || self.lower > self.upper + 1e-12
        {
            Some(format!(
                "bound sanity violated: lower = {}, upper = {}",
                self.lower, self.upper
            ))
        } else {
            None
        }
    }

    pub fn csv_row(&self) -> String {
        let coords: Vec<String> = self
            .point
            .iter()
            .flat_map(|c| [format!("{:.16e}", c.re), format!("{:.16e}", c.im)])
            .collect();
        let witness = match (&self.lower_witness, &self.upper_witness) {
            (Some(_), _) => "embedding-chain",
            (None, Some(w)) => w.as_str(),
            _ => "trivial",
        };
        format!(
            "{},{:.16e},{:.16e},{},{}",
            coords.join(","),
            self.lower,
            self.upper,
            witness,
            self.flags.join("|")
        )
    }
}

/// Profile mode dispatch for sequence runs.
pub enum ProfileTask<'a> {
    HhrLower { domain: &'a DomainSpec, ball: SupportBall, boundary_samples: usize },
    RemovalUpper { ambient: &'a Ambient, k: &'a CompactSet, budget: usize },
    HartogsUpper { spec: &'a HartogsSpec, surface_samples: usize },
}

/// Per-point reports plus a monotonicity diagnostic (least-squares slope of
/// the active bound against the point index).
pub struct ProfileReport {
    pub reports: Vec<BoundReport>,
    pub trend_slope: f64,
}

pub fn squeeze_profile(
    task: &ProfileTask,
    points: &[Vec<C>],
    seed: u64,
) -> Result<ProfileReport> {
    if points.is_empty() {
        return Err(Error::EmptyInput("profile needs at least one point".into()));
    }
    let mut reports = Vec::with_capacity(points.len());
    let mut active = Vec::with_capacity(points.len());
    match task {
        ProfileTask::HhrLower { domain, ball, boundary_samples } => {
            for (i, z) in points.iter().enumerate() {
                let hl = hhr_lower_bound(domain, z, ball, *boundary_samples, seed ^ i as u64)?;
                active.push(hl.lower);
                reports.push(BoundReport {
                    point: z.clone(),
                    lower: hl.lower,
                    upper: 1.0,
                    lower_witness: Some(hl),
                    upper_witness: None,
                    flags: vec!["sampled-certificate".into()],
                });
            }
        }
        ProfileTask::RemovalUpper { ambient, k, budget } => {
            for (i, z) in points.iter().enumerate() {
                let u = removal_upper_bound(ambient, k, z, *budget, seed ^ i as u64)?;
                active.push(u);
                reports.push(BoundReport {
                    point: z.clone(),
                    lower: 0.0,
                    upper: u,
                    lower_witness: None,
                    upper_witness: Some("kobayashi-removal".into()),
                    flags: vec!["sampled-certificate".into()],
                });
            }
        }
        ProfileTask::HartogsUpper { spec, surface_samples } => {
            let samples = omega_surface_samples(spec, *surface_samples, seed ^ 0x0e)?;
            for z in points.iter() {
                let u = hartogs_upper_bound(spec, z, &samples)?;
                active.push(u);
                reports.push(BoundReport {
                    point: z.clone(),
                    lower: 0.0,
                    upper: u,
                    lower_witness: None,
                    upper_witness: Some("polydisc-to-omega".into()),
                    flags: vec!["sampled-certificate".into()],
                });
            }
        }
    }
    let xs: Vec<f64> = (0..active.len()).map(|i| i as f64).collect();
    let trend_slope = if active.len() >= 2 { numeric::ls_slope(&xs, &active) } else { 0.0 };
    Ok(ProfileReport { reports, trend_slope })
}

/// Support-ball helper used by the HHR pipeline tests on the unit ball.
pub fn ball_support(domain: &DomainSpec) -> SupportBall {
    // For the unit ball any boundary point works as the ball center; take
    // (1, 0, ...) with a generous radius.
    let mut center = vec![C::new(0.0, 0.0); domain.dim];
    center[0] = C::new(1.0, 0.0);
    SupportBall { center, radius: 2.5 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    #[test]
    fn frame_on_ball_center() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.0, 0.0), c(0.0, 0.0)];
        let f = extremal_frame(&ball, &w, &ball_support(&ball), 3).unwrap();
        assert!((f.radii[0] - 1.0).abs() < 1e-8);
        assert!((f.radii[1] - 1.0).abs() < 1e-8);
        assert!(f.orthonormality_defect() < 1e-8);
    }

    #[test]
    fn frame_on_ball_offset() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.5, 0.0), c(0.0, 0.0)];
        let f = extremal_frame(&ball, &w, &ball_support(&ball), 3).unwrap();
        assert!((f.radii[0] - 0.5).abs() < 1e-8);
        assert!(numeric::cdist(&f.contacts[0], &[c(1.0, 0.0), c(0.0, 0.0)]) < 1e-7);
        // Slice radius sqrt(1 - 0.25).
        assert!((f.radii[1] - 0.75f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn lambda_on_offset_frame() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.5, 0.0), c(0.0, 0.0)];
        let f = extremal_frame(&ball, &w, &ball_support(&ball), 3).unwrap();
        let lam = lambda_map(&f);
        assert!(numeric::cnorm(&lam.apply(&w)) < 1e-10);
        let img = lam.apply(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(numeric::cdist(&img, &[c(1.0, 0.0), c(0.0, 0.0)]) < 1e-7);
        // The inscribed ball maps inside the unit ball image (sampled).
        let mut rng = numeric::rng(5);
        for _ in 0..500 {
            let dir = numeric::random_unit_dir(&mut rng, 2);
            use rand::Rng;
            let p = numeric::axpy(0.499 * rng.gen::<f64>(), &dir, &w);
            let q = lam.apply(&p);
            assert!(numeric::cnorm(&q) < 1.0 + 1e-9);
        }
    }

    #[test]
    fn tangent_rows_on_ball() {
        let ball = DomainSpec::unit_ball(2);
        // Center: rows are the identity.
        let w = [c(0.0, 0.0), c(0.0, 0.0)];
        let f = extremal_frame(&ball, &w, &ball_support(&ball), 3).unwrap();
        let lam = lambda_map(&f);
        let rows = tangent_coefficients(&ball, &f, &lam).unwrap();
        for (j, row) in rows.iter().enumerate() {
            for (k, cfd) in row.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((cfd - c(target, 0.0)).norm() < 1e-6, "row {j} col {k}: {cfd}");
            }
        }
        // Offset: row 2 = (1, 3)/sqrt(10).
        let w = [c(0.5, 0.0), c(0.0, 0.0)];
        let f = extremal_frame(&ball, &w, &ball_support(&ball), 3).unwrap();
        let lam = lambda_map(&f);
        let rows = tangent_coefficients(&ball, &f, &lam).unwrap();
        let s10 = 10f64.sqrt();
        assert!((rows[1][0].norm() - 1.0 / s10).abs() < 1e-6, "{:?}", rows[1]);
        assert!((rows[1][1].re - 3.0 / s10).abs() < 1e-6);
        assert!(rows[1][1].re >= 1.0 / 2f64.sqrt());
        let rn: f64 = rows[1].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((rn - 1.0).abs() < 1e-10);
    }

    #[test]
    fn chain_on_ball_center() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.0, 0.0), c(0.0, 0.0)];
        let chain = embedding_chain(&ball, &w, &ball_support(&ball), 3).unwrap();
        // Composite is (z1/(2-z1), z2/(2-z2)).
        let p = [c(0.3, 0.1), c(-0.2, 0.4)];
        let img = chain.apply(&p);
        for j in 0..2 {
            let expected = p[j] / (c(2.0, 0.0) - p[j]);
            assert!((img[j] - expected).norm() < 1e-7, "{:?}", img);
        }
        // delta0 for the identity rows is 1/2 (biggest polydisc in the
        // l1 ball).
        assert!((chain.delta0 - 0.5).abs() < 2e-3, "delta0 = {}", chain.delta0);
        // Cayley fixed point: Z1 = 1 maps to 1.
        let one = c(1.0, 0.0);
        assert!(((one / (c(2.0, 0.0) - one)) - one).norm() < 1e-15);
    }

    #[test]
    fn inscribed_radius_ball_center() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.0, 0.0), c(0.0, 0.0)];
        let chain = embedding_chain(&ball, &w, &ball_support(&ball), 3).unwrap();
        let samples = ball.sample_boundary(4000, 11);
        let (r, low) = inscribed_radius(&ball, &chain, &samples).unwrap();
        assert!(!low);
        // 1-D calculus oracle: min over the sphere is attained at a
        // single-coordinate point z = -1, value |-1/(2+1)| = 1/3.
        assert!((r - 1.0 / 3.0).abs() < 2e-3, "inscribed = {r}");
        assert!(r >= 1.0 / 3.0 - 1e-9, "sampling cannot undershoot the true minimum");
    }

    #[test]
    fn hhr_bound_on_ball_center() {
        let ball = DomainSpec::unit_ball(2);
        let w = [c(0.0, 0.0), c(0.0, 0.0)];
        let hl = hhr_lower_bound(&ball, &w, &ball_support(&ball), 4000, 3).unwrap();
        // A-priori constant with delta0 = 1/2: 0.5/(2.5 * 2) = 0.1.
        assert!((hl.apriori - 0.1).abs() < 5e-3, "apriori = {}", hl.apriori);
        assert!(hl.inscribed >= 0.33);
        assert!(hl.lower > hl.apriori);
        assert!(hl.lower <= 1.0);
        // The numeric route dominates: inscribed/sqrt(2) vs 0.1.
        assert!((hl.lower - hl.inscribed / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn removal_upper_ball_example() {
        let ambient = Ambient::UnitBall(2);
        let k = CompactSet::Ball { center: vec![c(0.0, 0.0); 2], radius: 0.5 };
        let z = [c(0.75, 0.0), c(0.0, 0.0)];
        let u = removal_upper_bound(&ambient, &k, &z, 40, 5).unwrap();
        assert!((u - 0.4).abs() < 1e-9, "upper = {u}");
        // Inside K: error.
        assert!(removal_upper_bound(&ambient, &k, &[c(0.1, 0.0), c(0.0, 0.0)], 40, 5).is_err());
    }

    #[test]
    fn hartogs_upper_decreases() {
        let spec = HartogsSpec::new(2, 6).unwrap();
        let samples = omega_surface_samples(&spec, 400, 7).unwrap();
        let target = &samples[0];
        let z = target[0];
        let w = target[1];
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let h = 0.5f64.powi(k);
            let p = [z, w * (1.0 - h)];
            let u = hartogs_upper_bound(&spec, &p, &samples).unwrap();
            assert!(u <= last + 1e-12, "not decreasing at step {k}");
            last = u;
        }
        assert!(last < 0.05, "final bound {last}");
    }
}
