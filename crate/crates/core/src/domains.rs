//! Explicit domain families: the egg domains |W+P(Z)|^2 + sigma(|Z|^2) < 1,
//! their unsheared companions |w|^2 + sigma(|z|^2) < 1, balls, the bidisc,
//! and polynomial canonical boundary models Re w + psi + remainders < 0.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::{self, C};
use crate::polyalg::{disc_grid, subharmonicity_scan, HermitianMatrix, MixedPolynomial, MultiIndex};

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial profile sigma (or phi): value and two derivatives on [0, 1+eps).
/// Evaluation beyond the nominal interval extends linearly so that defining
/// functions stay total on bounding boxes.
#[derive(Clone)]
pub struct RadialProfile {
    pub label: String,
    pub epsilon: f64,
    value: RadialFn,
    d1: RadialFn,
    d2: RadialFn,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RadialProfile({})", self.label)
    }
}

/// Smooth compactly supported bump exp(-1/(1-u^2)) on |u| < 1.
fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn bump_d1(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - u * u;
        bump(u) * (-2.0 * u / (s * s))
    }
}

fn bump_d2(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let s = 1.0 - u * u;
        let g = -2.0 * u / (s * s);
        let gp = -2.0 * (1.0 + 3.0 * u * u) / (s * s * s);
        bump(u) * (g * g + gp)
    }
}

/// Amplitude of the bump perturbation in the shipped profile. Calibrated with
/// `check_sigma_conditions`: condition (4) bounds it above (~0.078 with this
/// bump geometry), the non-convexity witness (5b) below (~0.059).
pub const SHIPPED_BUMP_AMPLITUDE: f64 = 0.068;
const BUMP_CENTER: f64 = 0.5;
const BUMP_WIDTH: f64 = 0.2;

impl RadialProfile {
    pub fn new(
        label: impl Into<String>,
        epsilon: f64,
        value: RadialFn,
        d1: RadialFn,
        d2: RadialFn,
    ) -> Self {
        RadialProfile { label: label.into(), epsilon, value, d1, d2 }
    }

    /// c * x^k for integer k >= 0.
    pub fn scaled_power(coeff: f64, k: u32) -> Self {
        let label = format!("{coeff}*x^{k}");
        RadialProfile::new(
            label,
            0.1,
            Arc::new(move |x: f64| coeff * x.powi(k as i32)),
            Arc::new(move |x: f64| {
                if k == 0 { 0.0 } else { coeff * k as f64 * x.powi(k as i32 - 1) }
            }),
            Arc::new(move |x: f64| {
                if k < 2 { 0.0 } else { coeff * (k * (k - 1)) as f64 * x.powi(k as i32 - 2) }
            }),
        )
    }

    pub fn power(k: u32) -> Self {
        let mut p = Self::scaled_power(1.0, k);
        p.label = format!("pow{k}");
        p
    }

    /// sigma(x) = -x; fails radial subharmonicity, used as a negative control.
    pub fn neg_linear() -> Self {
        let mut p = Self::scaled_power(-1.0, 1);
        p.label = "neg_linear".into();
        p
    }

    /// The shipped five-condition profile: t^4 plus a mid-interval bump.
    /// The bump vanishes at t = 0 and t = 1, so sigma(0) = 0 and sigma(1) = 1
    /// hold exactly.
    pub fn pow4_bump() -> Self {
        let c = SHIPPED_BUMP_AMPLITUDE;
        RadialProfile::new(
            "pow4_bump",
            0.1,
            Arc::new(move |x: f64| x.powi(4) + c * bump((x - BUMP_CENTER) / BUMP_WIDTH)),
            Arc::new(move |x: f64| {
                4.0 * x.powi(3) + c * bump_d1((x - BUMP_CENTER) / BUMP_WIDTH) / BUMP_WIDTH
            }),
            Arc::new(move |x: f64| {
                12.0 * x.powi(2)
                    + c * bump_d2((x - BUMP_CENTER) / BUMP_WIDTH) / (BUMP_WIDTH * BUMP_WIDTH)
            }),
        )
    }

    /// Construct by serialized name; see the CLI config format.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "pow2" => Ok(Self::power(2)),
            "pow4" => Ok(Self::power(4)),
            "pow4_bump" => Ok(Self::pow4_bump()),
            "neg_linear" => Ok(Self::neg_linear()),
            other => Err(Error::Config(format!("unknown radial profile '{other}'"))),
        }
    }

    fn upper(&self) -> f64 {
        1.0 + self.epsilon - 1e-9
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = self.upper();
        if x <= u {
            (self.value)(x)
        } else {
            (self.value)(u) + (self.d1)(u) * (x - u)
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        let u = self.upper();
        if x <= u {
            (self.d1)(x)
        } else {
            (self.d1)(u)
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        let u = self.upper();
        if x <= u {
            (self.d2)(x)
        } else {
            0.0
        }
    }

    /// Finite-difference consistency of d1 against value on a test grid.
    pub fn derivative_consistency(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..60 {
            let x = 0.9 * (1.0 + self.epsilon) * i as f64 / 60.0;
            let h = 1e-6;
            let fd = (self.value(x + h) - self.value(x - h)) / (2.0 * h);
            let d = self.d1(x);
            worst = worst.max((fd - d).abs() / (1.0 + d.abs()));
        }
        worst
    }
}

/// How a defining function is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationTag {
    MixedPolynomialBacked,
    CompositeRadial,
}

/// A smooth defining function: negative inside, zero on the boundary,
/// positive outside, with Wirtinger gradient and complex Hessian access.
pub trait Defining: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, z: &[C]) -> f64;
    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C>;
    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix;
    fn representation(&self) -> RepresentationTag;
    fn as_any(&self) -> &dyn std::any::Any;
}

/// Real gradient (d/dx1, d/dy1, ...) derived from the Wirtinger gradient of
/// a real-valued function: (2 Re dz, -2 Im dz).
pub fn real_gradient(defining: &dyn Defining, z: &[C]) -> Vec<f64> {
    let g = defining.wirtinger_gradient(z);
    let mut out = Vec::with_capacity(2 * g.len());
    for c in g {
        out.push(2.0 * c.re);
        out.push(-2.0 * c.im);
    }
    out
}

/// Defining function backed by a real-valued mixed polynomial.
pub struct PolyDefining {
    pub poly: MixedPolynomial,
    grad: Vec<MixedPolynomial>,
}

impl PolyDefining {
    pub fn new(poly: MixedPolynomial) -> Result<Self> {
        if !poly.is_real_valued() {
            return Err(Error::NotRealValued);
        }
        let grad = (0..poly.dimension()).map(|j| poly.wirtinger_derivative(j, false)).collect();
        Ok(PolyDefining { poly, grad })
    }
}

impl Defining for PolyDefining {
    fn dim(&self) -> usize {
        self.poly.dimension()
    }

    fn value(&self, z: &[C]) -> f64 {
        self.poly.eval_real(z).expect("dimension checked at construction")
    }

    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C> {
        self.grad.iter().map(|g| g.eval(z).expect("dim")).collect()
    }

    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix {
        self.poly.complex_hessian(z).expect("real-valued checked")
    }

    fn representation(&self) -> RepresentationTag {
        RepresentationTag::MixedPolynomialBacked
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

/// Positive rescaling of another defining function (same zero set).
pub struct ScaledDefining {
    pub inner: Arc<dyn Defining>,
    pub factor: f64,
}

impl Defining for ScaledDefining {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, z: &[C]) -> f64 {
        self.factor * self.inner.value(z)
    }
    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C> {
        self.inner.wirtinger_gradient(z).into_iter().map(|c| c * self.factor).collect()
    }
    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix {
        HermitianMatrix::new(self.inner.complex_hessian(z).matrix() * C::new(self.factor, 0.0))
    }
    fn representation(&self) -> RepresentationTag {
        self.inner.representation()
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

fn poly_eval(coeffs: &[C], z: C) -> C {
    let mut acc = C::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_derivative(coeffs: &[C]) -> Vec<C> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// rho(Z, W) = |W + P(Z)|^2 + sigma(|Z|^2) - 1 on D(0, sqrt(1+eps)) x C.
pub struct EggDefining {
    pub p_coeffs: Vec<C>,
    dp_coeffs: Vec<C>,
    pub sigma: RadialProfile,
}

impl EggDefining {
    pub fn new(p_coeffs: Vec<C>, sigma: RadialProfile) -> Self {
        let dp_coeffs = poly_derivative(&p_coeffs);
        EggDefining { p_coeffs, dp_coeffs, sigma }
    }
}

impl Defining for EggDefining {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, z: &[C]) -> f64 {
        let f = z[1] + poly_eval(&self.p_coeffs, z[0]);
        f.norm_sqr() + self.sigma.value(z[0].norm_sqr()) - 1.0
    }

    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C> {
        let f = z[1] + poly_eval(&self.p_coeffs, z[0]);
        let dp = poly_eval(&self.dp_coeffs, z[0]);
        let s1 = self.sigma.d1(z[0].norm_sqr());
        vec![dp * f.conj() + z[0].conj() * s1, f.conj()]
    }

    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix {
        let dp = poly_eval(&self.dp_coeffs, z[0]);
        let t = z[0].norm_sqr();
        let s1 = self.sigma.d1(t);
        let s2 = self.sigma.d2(t);
        let mut h = DMatrix::zeros(2, 2);
        h[(0, 0)] = C::new(dp.norm_sqr() + s1 + t * s2, 0.0);
        h[(0, 1)] = dp;
        h[(1, 0)] = dp.conj();
        h[(1, 1)] = C::new(1.0, 0.0);
        HermitianMatrix::new(h)
    }

    fn representation(&self) -> RepresentationTag {
        RepresentationTag::CompositeRadial
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

/// varrho(z, w) = |w|^2 + sigma(|z|^2) - 1, the unsheared egg.
pub struct RoundEggDefining {
    pub sigma: RadialProfile,
}

impl Defining for RoundEggDefining {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, z: &[C]) -> f64 {
        z[1].norm_sqr() + self.sigma.value(z[0].norm_sqr()) - 1.0
    }

    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C> {
        let s1 = self.sigma.d1(z[0].norm_sqr());
        vec![z[0].conj() * s1, z[1].conj()]
    }

    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix {
        let t = z[0].norm_sqr();
        let mut h = DMatrix::zeros(2, 2);
        h[(0, 0)] = C::new(self.sigma.d1(t) + t * self.sigma.d2(t), 0.0);
        h[(1, 1)] = C::new(1.0, 0.0);
        HermitianMatrix::new(h)
    }

    fn representation(&self) -> RepresentationTag {
        RepresentationTag::CompositeRadial
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

/// Bidisc defining via the active factor max_j |z_j|^2 - 1. Smooth away from
/// the distinguished boundary (where the max ties).
pub struct BidiscDefining;

impl Defining for BidiscDefining {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, z: &[C]) -> f64 {
        z[0].norm_sqr().max(z[1].norm_sqr()) - 1.0
    }

    fn wirtinger_gradient(&self, z: &[C]) -> Vec<C> {
        let j = if z[0].norm_sqr() >= z[1].norm_sqr() { 0 } else { 1 };
        let mut g = vec![C::new(0.0, 0.0); 2];
        g[j] = z[j].conj();
        g
    }

    fn complex_hessian(&self, z: &[C]) -> HermitianMatrix {
        let j = if z[0].norm_sqr() >= z[1].norm_sqr() { 0 } else { 1 };
        let mut h = DMatrix::zeros(2, 2);
        h[(j, j)] = C::new(1.0, 0.0);
        HermitianMatrix::new(h)
    }

    fn representation(&self) -> RepresentationTag {
        RepresentationTag::CompositeRadial
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}

/// Axis-aligned box in the 2n real coordinates.
#[derive(Debug, Clone)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn symmetric(n: usize, half_width: f64) -> Self {
        BoundingBox { lo: vec![-half_width; 2 * n], hi: vec![half_width; 2 * n] }
    }

    pub fn contains(&self, z: &[C]) -> bool {
        z.iter().enumerate().all(|(j, v)| {
            v.re >= self.lo[2 * j]
                && v.re <= self.hi[2 * j]
                && v.im >= self.lo[2 * j + 1]
                && v.im <= self.hi[2 * j + 1]
        })
    }

    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
    }

    pub fn corners(&self) -> Vec<Vec<C>> {
        let d = self.lo.len();
        let mut out = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            let x: Vec<f64> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] })
                .collect();
            out.push(numeric::from_real_vec(&x));
        }
        out
    }

    pub fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<C> {
        use rand::Rng;
        let x: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| rng.gen::<f64>() * (h - l) + l)
            .collect();
        numeric::from_real_vec(&x)
    }
}

/// A concrete domain: defining function, bounding box, interior witness.
#[derive(Clone)]
pub struct DomainSpec {
    pub dim: usize,
    pub defining: Arc<dyn Defining>,
    pub bbox: BoundingBox,
    pub witness: Vec<C>,
    pub label: String,
    /// True when the analytic domain is unbounded and the box clips it.
    pub clipped: bool,
}

impl std::fmt::Debug for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DomainSpec({}, dim {})", self.label, self.dim)
    }
}

pub const BOUNDARY_TOL: f64 = 1e-9;

impl DomainSpec {
    pub fn new(
        dim: usize,
        defining: Arc<dyn Defining>,
        bbox: BoundingBox,
        witness: Vec<C>,
        label: impl Into<String>,
        clipped: bool,
    ) -> Result<Self> {
        let spec = DomainSpec { dim, defining, bbox, witness, label: label.into(), clipped };
        if spec.value(&spec.witness.clone()) >= 0.0 {
            return Err(Error::precondition(format!(
                "witness point is not interior for domain '{}'",
                spec.label
            )));
        }
        Ok(spec)
    }

    pub fn value(&self, z: &[C]) -> f64 {
        self.defining.value(z)
    }

    pub fn wirtinger_grad(&self, z: &[C]) -> Vec<C> {
        self.defining.wirtinger_gradient(z)
    }

    pub fn real_grad(&self, z: &[C]) -> Vec<f64> {
        real_gradient(self.defining.as_ref(), z)
    }

    pub fn hessian(&self, z: &[C]) -> HermitianMatrix {
        self.defining.complex_hessian(z)
    }

    pub fn contains(&self, z: &[C]) -> bool {
        self.bbox.contains(z) && self.value(z) < 0.0
    }

    pub fn on_boundary(&self, z: &[C], tol: f64) -> bool {
        self.bbox.contains(z) && self.value(z).abs() <= tol
    }

    /// Unit outward normal as a complex vector (from the real gradient).
    pub fn outward_normal(&self, z: &[C]) -> Vec<C> {
        let g = self.real_grad(z);
        let gc = numeric::from_real_vec(&g);
        let n = numeric::cnorm(&gc);
        numeric::scale(&gc, 1.0 / n)
    }

    /// First boundary crossing from `from` along `dir`, by marching and
    /// bisection on the defining value. None if the ray leaves the box first.
    pub fn ray_boundary_crossing(&self, from: &[C], dir: &[C]) -> Option<Vec<C>> {
        debug_assert!(self.value(from) < 0.0);
        let step = self.bbox.diameter() / 400.0;
        let max_t = self.bbox.diameter();
        let point_at = |t: f64| numeric::axpy(t, dir, from);
        let mut t_prev = 0.0;
        let mut t = step;
        while t <= max_t {
            let p = point_at(t);
            if !self.bbox.contains(&p) {
                return None;
            }
            if self.value(&p) >= 0.0 {
                let root = numeric::bisect(t_prev, t, 60, |s| self.value(&point_at(s)));
                return Some(point_at(root));
            }
            t_prev = t;
            t += step;
        }
        None
    }

    /// Boundary samples via random rays from the witness (seeded).
    pub fn sample_boundary(&self, count: usize, seed: u64) -> Vec<Vec<C>> {
        let mut rng = numeric::rng(seed);
        let mut out = Vec::with_capacity(count);
        let mut tries = 0;
        while out.len() < count && tries < 100 * count + 1000 {
            tries += 1;
            let dir = numeric::random_unit_dir(&mut rng, self.dim);
            if let Some(q) = self.ray_boundary_crossing(&self.witness, &dir) {
                out.push(q);
            }
        }
        out
    }

    /// Interior samples by rejection in the box (seeded).
    pub fn sample_interior(&self, count: usize, seed: u64) -> Vec<Vec<C>> {
        let mut rng = numeric::rng(seed);
        let mut out = Vec::with_capacity(count);
        let mut tries = 0;
        while out.len() < count && tries < 1000 * count + 10000 {
            tries += 1;
            let p = self.bbox.sample(&mut rng);
            if self.value(&p) < 0.0 {
                out.push(p);
            }
        }
        out
    }

    /// Defining value is positive at every box corner (boundedness sanity;
    /// meaningful for bounded domains).
    pub fn corners_outside(&self) -> bool {
        self.bbox.corners().iter().all(|c| self.value(c) > 0.0)
    }

    pub fn ball(n: usize, center: &[C], radius: f64) -> Self {
        let mut poly = MixedPolynomial::norm_sq(n);
        // |z - a|^2 - r^2 via affine composition.
        let mut map = crate::polyalg::AffineMap::identity(n);
        for j in 0..n {
            map.offset[j] = -center[j];
        }
        poly = poly.compose_affine(&map).unwrap();
        poly = poly.add(&MixedPolynomial::constant(n, C::new(-radius * radius, 0.0)));
        let defining = Arc::new(PolyDefining::new(poly).unwrap());
        let half = center.iter().map(|c| c.re.abs().max(c.im.abs())).fold(0.0, f64::max)
            + radius
            + 0.05;
        DomainSpec::new(
            n,
            defining,
            BoundingBox::symmetric(n, half),
            center.to_vec(),
            format!("ball(r={radius})"),
            false,
        )
        .unwrap()
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::ball(n, &vec![C::new(0.0, 0.0); n], 1.0)
    }

    pub fn bidisc() -> Self {
        DomainSpec::new(
            2,
            Arc::new(BidiscDefining),
            BoundingBox::symmetric(2, 1.05),
            vec![C::new(0.0, 0.0); 2],
            "bidisc",
            false,
        )
        .unwrap()
    }
}

/// The shear (Z, W) -> (Z, W + P(Z)) and its inverse.
#[derive(Debug, Clone)]
pub struct PolyShear {
    pub p_coeffs: Vec<C>,
}

impl PolyShear {
    pub fn apply(&self, z: &[C]) -> Vec<C> {
        vec![z[0], z[1] + poly_eval(&self.p_coeffs, z[0])]
    }

    pub fn apply_inverse(&self, z: &[C]) -> Vec<C> {
        vec![z[0], z[1] - poly_eval(&self.p_coeffs, z[0])]
    }
}

fn sup_on_unit_circle(p_coeffs: &[C]) -> f64 {
    (0..720)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 720.0;
            poly_eval(p_coeffs, C::new(th.cos(), th.sin())).norm()
        })
        .fold(0.0, f64::max)
}

/// Build the egg domain D = {|W+P(Z)|^2 + sigma(|Z|^2) < 1}. Preconditions:
/// sigma passes conditions (1)-(4) and P is nonconstant.
pub fn build_egg_domain(p_coeffs: Vec<C>, sigma: RadialProfile) -> Result<DomainSpec> {
    if p_coeffs.iter().skip(1).all(|c| c.norm() == 0.0) {
        return Err(Error::precondition("egg domain requires a nonconstant P"));
    }
    let report = check_sigma_conditions(&sigma, &sigma_default_grid(sigma.epsilon));
    if !report.conditions_1_to_4() {
        return Err(Error::precondition(format!(
            "sigma fails conditions (1)-(4): {report:?}"
        )));
    }
    let sup_p = sup_on_unit_circle(&p_coeffs);
    let p0 = poly_eval(&p_coeffs, C::new(0.0, 0.0));
    let witness = vec![C::new(0.0, 0.0), -p0];
    let n = 2;
    let w_half = 1.0 + sup_p + 0.1;
    let bbox = BoundingBox {
        lo: vec![-1.02, -1.02, -w_half, -w_half],
        hi: vec![1.02, 1.02, w_half, w_half],
    };
    let defining = Arc::new(EggDefining::new(p_coeffs, sigma));
    DomainSpec::new(n, defining, bbox, witness, "egg", false)
}

/// Unshear an egg domain by Psi(Z, W) = (Z, W + P(Z)), returning
/// Omega = Psi(D) with defining |w|^2 + sigma(|z|^2) - 1, plus the map.
pub fn unshear(egg: &DomainSpec) -> Result<(DomainSpec, PolyShear)> {
    let e = egg
        .defining
        .as_any()
        .downcast_ref::<EggDefining>()
        .ok_or_else(|| Error::precondition("unshear expects a domain built by build_egg_domain"))?;
    let shear = PolyShear { p_coeffs: e.p_coeffs.clone() };
    let bbox = BoundingBox::symmetric(2, 1.05);
    let defining = Arc::new(RoundEggDefining { sigma: e.sigma.clone() });
    let omega = DomainSpec::new(
        2,
        defining,
        bbox,
        vec![C::new(0.0, 0.0), C::new(0.0, 0.0)],
        "unsheared_egg",
        false,
    )?;
    Ok((omega, shear))
}

/// Report of the five sigma conditions with witnesses.
#[derive(Debug, Clone)]
pub struct SigmaConditionReport {
    /// (1) sigma(0) = 0 and sigma', sigma'' are o(x) near 0.
    pub c1_decay: bool,
    pub c1_ratios: ((f64, f64), (f64, f64)),
    /// (2) sigma(1) = 1 within 1e-9.
    pub c2_normalized: bool,
    /// (3) sigma' > 0 on (0, 1+eps).
    pub c3_increasing: bool,
    pub c3_min: f64,
    /// (4) x sigma'' + sigma' > 0 on (0, 1+eps).
    pub c4_strict_subharmonic: bool,
    pub c4_min: f64,
    pub c4_argmin: f64,
    /// (5a) sigma'' > 0 on (0, eps).
    pub c5a_convex_near_zero: bool,
    /// (5b) x -> sigma(x^2) has a non-convexity witness.
    pub c5b_nonconvex: bool,
    pub c5b_witness: Option<f64>,
}

impl SigmaConditionReport {
    pub fn conditions_1_to_4(&self) -> bool {
        self.c1_decay && self.c2_normalized && self.c3_increasing && self.c4_strict_subharmonic
    }

    pub fn all_five(&self) -> bool {
        self.conditions_1_to_4() && self.c5a_convex_near_zero && self.c5b_nonconvex
    }
}

/// Default check grid: geometric refinement near 0, then linear to 1+eps.
pub fn sigma_default_grid(epsilon: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(1300);
    let mut x = 1e-7;
    while x < 0.1 {
        g.push(x);
        x *= 10f64.powf(1.0 / 70.0);
    }
    let hi = (1.0 + epsilon) * (1.0 - 1e-9);
    let n_lin = 900;
    for i in 0..=n_lin {
        g.push(0.1 + (hi - 0.1) * i as f64 / n_lin as f64);
    }
    g
}

/// Grid check of Example-style conditions (1)-(5) on a radial profile.
/// A grid cannot certify asymptotics; the decay condition (1) is tested as a
/// monotone ratio decrease by a factor 10 over the finest sampled decade.
pub fn check_sigma_conditions(sigma: &RadialProfile, grid: &[f64]) -> SigmaConditionReport {
    assert!(grid.len() >= 1000, "grid too coarse for the condition scan");
    let mut xs: Vec<f64> = grid.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let x_min = xs[0].max(1e-300);
    // Slightly over one decade so grid rounding cannot clip the endpoint.
    let decade: Vec<f64> = xs.iter().copied().filter(|&x| x <= 10.2 * x_min).collect();

    let ratio_pass = |f: &dyn Fn(f64) -> f64| -> (bool, (f64, f64)) {
        let r: Vec<f64> = decade.iter().map(|&x| f(x).abs() / x).collect();
        let monotone = r.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-9) + 1e-300);
        let first = r[0];
        let last = *r.last().unwrap();
        (monotone && first <= last / 10.0 * 1.001 + 1e-300, (first, last))
    };
    let (d1_ok, d1_pair) = ratio_pass(&|x| sigma.d1(x));
    let (d2_ok, d2_pair) = ratio_pass(&|x| sigma.d2(x));
    let c1_decay = sigma.value(0.0).abs() <= 1e-12 && d1_ok && d2_ok;

    let c2_normalized = (sigma.value(1.0) - 1.0).abs() <= 1e-9;

    let mut c3_min = f64::INFINITY;
    let mut c4_min = f64::INFINITY;
    let mut c4_argmin = 0.0;
    for &x in &xs {
        if x <= 0.0 {
            continue;
        }
        c3_min = c3_min.min(sigma.d1(x));
        let e = x * sigma.d2(x) + sigma.d1(x);
        if e < c4_min {
            c4_min = e;
            c4_argmin = x;
        }
    }
    let c3_increasing = c3_min > 0.0;
    let c4_strict_subharmonic = c4_min > 0.0;

    let c5a_convex_near_zero = xs
        .iter()
        .filter(|&&x| x > 0.0 && x < sigma.epsilon)
        .all(|&x| sigma.d2(x) > 0.0);

    // Non-convexity of x -> sigma(x^2) via second differences.
    let hi = (1.0 + sigma.epsilon).sqrt() * (1.0 - 1e-9);
    let n = 2000;
    let h = hi / n as f64;
    let g = |x: f64| sigma.value(x * x);
    let mut c5b_witness = None;
    let scale = sigma.value(1.0).abs().max(1.0);
    for i in 1..n {
        let x = i as f64 * h;
        let d2 = g(x + h) - 2.0 * g(x) + g(x - h);
        if d2 < -1e-12 * scale {
            c5b_witness = Some(x);
            break;
        }
    }

    SigmaConditionReport {
        c1_decay,
        c1_ratios: (d1_pair, d2_pair),
        c2_normalized,
        c3_increasing,
        c3_min,
        c4_strict_subharmonic,
        c4_min,
        c4_argmin,
        c5a_convex_near_zero,
        c5b_nonconvex: c5b_witness.is_some(),
        c5b_witness,
    }
}

/// Verdict of the radial subharmonicity test phi'' + phi'/x >= 0.
#[derive(Debug, Clone)]
pub struct RadialSubharmonicityReport {
    pub min_value: f64,
    pub argmin: f64,
    pub subharmonic: bool,
}

/// Minimum of phi''(x) + phi'(x)/x over a positive grid: nonnegative minimum
/// flags z -> phi(|z|) subharmonic.
pub fn radial_subharmonicity(phi: &RadialProfile, grid: &[f64]) -> RadialSubharmonicityReport {
    let mut min_value = f64::INFINITY;
    let mut argmin = 0.0;
    for &x in grid {
        if x <= 0.0 {
            continue;
        }
        let v = phi.d2(x) + phi.d1(x) / x;
        if v < min_value {
            min_value = v;
            argmin = x;
        }
    }
    RadialSubharmonicityReport { min_value, argmin, subharmonic: min_value >= 0.0 }
}

/// Graph function g(z, v) = -sqrt(1 - v^2 - sigma(|z|^2)) of the unsheared
/// egg boundary below the equator, with its real 3x3 Hessian in (x, y, v)
/// by central finite differences.
pub fn graph_function_g(
    sigma: &RadialProfile,
    z: C,
    v: f64,
) -> Result<(f64, nalgebra::DMatrix<f64>)> {
    let arg = 1.0 - v * v - sigma.value(z.norm_sqr());
    if arg <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "graph function needs v^2 + sigma(|z|^2) < 1, got slack {arg:e}"
        )));
    }
    let f = |x: &[f64]| -> f64 {
        let s = sigma.value(x[0] * x[0] + x[1] * x[1]);
        -(1.0 - x[2] * x[2] - s).max(1e-300).sqrt()
    };
    let x0 = [z.re, z.im, v];
    let g = f(&x0);
    let h = numeric::fd_hessian(&f, &x0, 1e-5);
    Ok((g, h))
}

/// Closed-form Hessian of the graph function; the finite-difference version
/// carries a ~1e-7 noise floor that would mask semidefinite directions.
pub fn graph_hessian_analytic(
    sigma: &RadialProfile,
    z: C,
    v: f64,
) -> Result<nalgebra::DMatrix<f64>> {
    let s = z.norm_sqr();
    let a = 1.0 - v * v - sigma.value(s);
    if a <= 0.0 {
        return Err(Error::OutOfDomain("graph Hessian outside the graph patch".into()));
    }
    let (x, y) = (z.re, z.im);
    let s1 = sigma.d1(s);
    let s2 = sigma.d2(s);
    // A = 1 - v^2 - sigma(x^2 + y^2); g = -sqrt(A);
    // H_g = (-H_A) / (2 sqrt(A)) + (grad A)(grad A)^T / (4 A^{3/2}).
    let grad_a = [-2.0 * x * s1, -2.0 * y * s1, -2.0 * v];
    let mut minus_ha = nalgebra::DMatrix::zeros(3, 3);
    minus_ha[(0, 0)] = 2.0 * s1 + 4.0 * x * x * s2;
    minus_ha[(1, 1)] = 2.0 * s1 + 4.0 * y * y * s2;
    minus_ha[(0, 1)] = 4.0 * x * y * s2;
    minus_ha[(1, 0)] = 4.0 * x * y * s2;
    minus_ha[(2, 2)] = 2.0;
    let mut h = nalgebra::DMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            h[(i, j)] = minus_ha[(i, j)] / (2.0 * a.sqrt())
                + grad_a[i] * grad_a[j] / (4.0 * a.powf(1.5));
        }
    }
    Ok(h)
}

/// Canonical boundary form Re w + (psi + R1 + (Im w) R2 + R3) = 0 with the
/// vanishing orders validated at construction.
#[derive(Debug, Clone)]
pub struct CanonicalBoundaryForm {
    pub m: u32,
    pub psi: MixedPolynomial,
    pub r1: MixedPolynomial,
    pub r2: MixedPolynomial,
    /// R3 as a polynomial in (z, t) where the second variable stands for the
    /// real quantity Im w (beta exponent of t must be 0).
    pub r3: MixedPolynomial,
    pub truncation_degree: u32,
    /// Assembled defining polynomial in the two complex variables (z, w).
    pub defining: MixedPolynomial,
}

fn min_term_degree(p: &MixedPolynomial) -> Option<u32> {
    p.terms().map(|(a, b, _)| a.degree() + b.degree()).min()
}

/// Validate and assemble a canonical model; returns the form and the clipped
/// model domain {defining < 0} on `box_half_width`.
pub fn canonical_model(
    m: u32,
    psi: MixedPolynomial,
    r1: MixedPolynomial,
    r2: MixedPolynomial,
    r3: MixedPolynomial,
    truncation_degree: u32,
    box_half_width: f64,
) -> Result<(CanonicalBoundaryForm, DomainSpec)> {
    let mut violations = Vec::new();
    if psi.dimension() != 1 || r1.dimension() != 1 || r2.dimension() != 1 {
        return Err(Error::precondition("psi, R1, R2 must be polynomials in z alone"));
    }
    if r3.dimension() != 2 {
        return Err(Error::precondition("R3 must be a polynomial in (z, Im w)"));
    }
    if !psi.is_real_valued() {
        violations.push("psi is not real-valued".to_string());
    }
    if psi.homogeneous_component(2 * m).coeff_distance(&psi) > 0.0 {
        violations.push(format!("psi is not homogeneous of degree {}", 2 * m));
    }
    if !psi.pluriharmonic_part().is_zero() {
        violations.push("psi has pluriharmonic terms".to_string());
    }
    let scan = subharmonicity_scan(&psi, &disc_grid(1.0, 16, 48))?;
    if !scan.subharmonic_on_grid {
        violations.push(format!(
            "psi fails the subharmonicity scan (min Laplacian {:.3e})",
            scan.min_laplacian
        ));
    }
    if let Some(d) = min_term_degree(&r1) {
        if d < 2 * m + 1 {
            violations.push(format!("R1 has a term of degree {d} < {}", 2 * m + 1));
        }
    }
    let r2_required = if m >= 2 { m + 1 } else { 1 };
    if let Some(d) = min_term_degree(&r2) {
        if d < r2_required {
            violations.push(format!("R2 has a term of degree {d} < {r2_required}"));
        }
    }
    if !r2.is_real_valued() {
        violations.push("R2 is not real-valued".to_string());
    }
    for (a, b, _) in r3.terms() {
        if b.0[1] != 0 {
            violations.push("R3 must carry Im w powers in the alpha slot only".to_string());
            break;
        }
        if a.0[1] < 2 {
            violations.push("R3 has a term with Im w order < 2".to_string());
            break;
        }
        if a.0[0] + b.0[0] < 1 {
            violations.push("R3 has a term with no z factor".to_string());
            break;
        }
    }
    if !violations.is_empty() {
        return Err(Error::precondition(violations.join("; ")));
    }

    // Assemble in (z, w): psi, R1 embed at slot 0; Im w powers expand.
    let im_w = MixedPolynomial::im_of_var(2, 1);
    let mut defining = MixedPolynomial::re_of_var(2, 1);
    defining = defining.add(&psi.embed(2, &[0]));
    defining = defining.add(&r1.embed(2, &[0]));
    defining = defining.add(&im_w.mul(&r2.embed(2, &[0])));
    let mut r3_assembled = MixedPolynomial::zero(2);
    for (a, b, c) in r3.terms() {
        let z_part = MixedPolynomial::monomial(
            2,
            MultiIndex(vec![a.0[0], 0]),
            MultiIndex(vec![b.0[0], 0]),
            *c,
        );
        r3_assembled = r3_assembled.add(&z_part.mul(&im_w.pow(a.0[1])));
    }
    defining = defining.add(&r3_assembled);
    defining.prune();

    let form = CanonicalBoundaryForm {
        m,
        psi,
        r1,
        r2,
        r3,
        truncation_degree,
        defining: defining.clone(),
    };
    let spec = DomainSpec::new(
        2,
        Arc::new(PolyDefining::new(defining)?),
        BoundingBox::symmetric(2, box_half_width),
        vec![C::new(0.0, 0.0), C::new(-0.5 * box_half_width, 0.0)],
        format!("canonical_model(m={m})"),
        true,
    )?;
    Ok((form, spec))
}

/// The Siegel-type model Re w + |z|^{2m} < 0.
pub fn model_re_w_plus_abs_z(m: u32, box_half_width: f64) -> (CanonicalBoundaryForm, DomainSpec) {
    let psi = MixedPolynomial::monomial(
        1,
        MultiIndex(vec![m]),
        MultiIndex(vec![m]),
        C::new(1.0, 0.0),
    );
    canonical_model(
        m,
        psi,
        MixedPolynomial::zero(1),
        MixedPolynomial::zero(1),
        MixedPolynomial::zero(2),
        2 * m + 2,
        box_half_width,
    )
    .expect("the pure model is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    #[test]
    fn shipped_profile_passes_all_five() {
        let sigma = RadialProfile::pow4_bump();
        assert!(sigma.derivative_consistency() < 1e-5);
        let rep = check_sigma_conditions(&sigma, &sigma_default_grid(sigma.epsilon));
        assert!(rep.c1_decay, "condition 1 failed: {rep:?}");
        assert!(rep.c2_normalized, "condition 2 failed");
        assert!(rep.c3_increasing, "condition 3 failed: min {}", rep.c3_min);
        assert!(
            rep.c4_strict_subharmonic,
            "condition 4 failed: min {} at {}",
            rep.c4_min, rep.c4_argmin
        );
        assert!(rep.c5a_convex_near_zero, "condition 5a failed");
        assert!(rep.c5b_nonconvex, "condition 5b failed (no non-convexity witness)");
    }

    #[test]
    fn pow4_profile_condition_pattern() {
        // t^4: (1)-(4) and (5a) pass, (5b) fails (x^8 is convex).
        let sigma = RadialProfile::power(4);
        let rep = check_sigma_conditions(&sigma, &sigma_default_grid(sigma.epsilon));
        assert!(rep.c1_decay);
        assert!(rep.c2_normalized);
        assert!(rep.c3_increasing);
        assert!(rep.c4_strict_subharmonic);
        assert!(rep.c5a_convex_near_zero);
        assert!(!rep.c5b_nonconvex);
    }

    #[test]
    fn pow2_fails_decay() {
        // t^2 has sigma'' = 2, which is not o(x).
        let sigma = RadialProfile::power(2);
        let rep = check_sigma_conditions(&sigma, &sigma_default_grid(sigma.epsilon));
        assert!(!rep.c1_decay);
    }

    #[test]
    fn radial_subharmonicity_examples() {
        let grid: Vec<f64> = (1..=2000).map(|i| i as f64 / 2000.0).collect();
        let r = radial_subharmonicity(&RadialProfile::power(2), &grid);
        assert!(r.subharmonic);
        assert!((r.min_value - 4.0).abs() < 1e-9);
        let r = radial_subharmonicity(&RadialProfile::neg_linear(), &grid);
        assert!(!r.subharmonic);
        assert!(r.min_value < 0.0);
        let r = radial_subharmonicity(&RadialProfile::power(4), &grid);
        assert!(r.subharmonic);
        // 16 x^2 with the smallest grid x.
        let x0 = 1.0 / 2000.0;
        assert!((r.min_value - 16.0 * x0 * x0).abs() < 1e-9);
    }

    #[test]
    fn egg_domain_basic_geometry() {
        let egg = build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::power(4)).unwrap();
        // p* = (0, -(1+P(0))) = (0, -1) lies on the boundary.
        assert!(egg.value(&[c(0.0, 0.0), c(-1.0, 0.0)]).abs() < 1e-12);
        // Interior witness (0, -0.5 - P(0)).
        let v = egg.value(&[c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!((v - (-0.75)).abs() < 1e-12);
        // Gradient matches finite differences.
        let pt = [c(0.3, 0.1), c(-0.4, 0.2)];
        let g = egg.real_grad(&pt);
        let f = |x: &[f64]| egg.value(&numeric::from_real_vec(x));
        let fd = numeric::fd_gradient(&f, &numeric::to_real_vec(&pt), 1e-6);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6, "gradient mismatch {a} vs {b}");
        }
    }

    #[test]
    fn egg_rejects_bad_inputs() {
        assert!(build_egg_domain(vec![c(1.0, 0.0)], RadialProfile::power(4)).is_err());
        assert!(build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::power(2)).is_err());
    }

    #[test]
    fn unshear_round_trip() {
        let egg =
            build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::power(4)).unwrap();
        let (omega, shear) = unshear(&egg).unwrap();
        let mut rng = numeric::rng(11);
        for _ in 0..1000 {
            let zw = egg.bbox.sample(&mut rng);
            let image = shear.apply(&zw);
            let rho = egg.value(&zw);
            let varrho = omega.value(&image);
            assert!(
                (rho - varrho).abs() < 1e-12,
                "pullback mismatch {rho} vs {varrho}"
            );
        }
        // Boundary point (0, e^{i th} - P(0)) maps to (0, e^{i th}).
        let th = 0.7f64;
        let b = [c(0.0, 0.0), c(th.cos(), th.sin())];
        let pre = shear.apply_inverse(&b);
        assert!(egg.value(&pre).abs() < 1e-12);
        assert!((numeric::cdist(&shear.apply(&pre), &b)).abs() < 1e-15);
        // Hessian of varrho at z != 0 is diag(|z|^2 s'' + s', 1).
        let sig = RadialProfile::power(4);
        let pt = [c(0.5, 0.2), c(0.3, -0.1)];
        let h = omega.hessian(&pt);
        let t = pt[0].norm_sqr();
        let expected = t * sig.d2(t) + sig.d1(t);
        assert!((h.entry(0, 0).re - expected).abs() < 1e-12);
        assert!((h.entry(1, 1).re - 1.0).abs() < 1e-12);
        assert!(h.entry(0, 1).norm() < 1e-12);
    }

    #[test]
    fn domain_invariants_bounded_families() {
        let ball = DomainSpec::unit_ball(2);
        assert!(ball.value(&ball.witness) < 0.0);
        assert!(ball.corners_outside());
        let egg =
            build_egg_domain(vec![c(0.0, 0.0), c(1.0, 0.0)], RadialProfile::pow4_bump()).unwrap();
        assert!(egg.corners_outside());
        let (omega, _) = unshear(&egg).unwrap();
        assert!(omega.corners_outside());
    }

    #[test]
    fn graph_function_values() {
        let sigma = RadialProfile::power(4);
        let (g0, h) = graph_function_g(&sigma, c(0.0, 0.0), 0.0).unwrap();
        assert!((g0 + 1.0).abs() < 1e-12);
        // Expansion g = -1 + (v^2 + sigma)/2 + ...
        let (g1, _) = graph_function_g(&sigma, c(0.05, 0.0), 0.1).unwrap();
        let approx = -1.0 + 0.5 * (0.01 + sigma.value(0.0025));
        assert!((g1 - approx).abs() < 1e-4);
        // Hessian at 0: diag(0, 0, 1) up to the sigma contribution.
        assert!(h[(0, 0)].abs() < 1e-6);
        assert!(h[(1, 1)].abs() < 1e-6);
        assert!((h[(2, 2)] - 1.0).abs() < 1e-6);
        assert!(graph_function_g(&sigma, c(0.0, 0.0), 1.2).is_err());
    }

    #[test]
    fn canonical_model_siegel() {
        let (form, spec) = model_re_w_plus_abs_z(1, 1.5);
        assert_eq!(form.m, 1);
        // Boundary points (0, i t) for real t satisfy the equation exactly.
        for &t in &[0.0, 0.3, -0.8] {
            assert_eq!(spec.value(&[c(0.0, 0.0), c(0.0, t)]), 0.0);
        }
        assert!(spec.contains(&[c(0.0, 0.0), c(-0.2, 0.0)]));
    }

    #[test]
    fn canonical_model_rejects_pluriharmonic_psi() {
        // psi = Re(z^2) is pluriharmonic.
        let h = MixedPolynomial::var(1, 0).pow(2).scale(c(0.5, 0.0));
        let psi = h.add(&h.conjugate());
        let r = canonical_model(
            1,
            psi,
            MixedPolynomial::zero(1),
            MixedPolynomial::zero(1),
            MixedPolynomial::zero(2),
            4,
            1.5,
        );
        assert!(r.is_err());
    }

    #[test]
    fn canonical_model_validates_remainder_orders() {
        let psi = MixedPolynomial::modulus_sq(1, 0);
        // R1 of degree 2 < 2m+1 = 3 must be rejected.
        let bad_r1 = MixedPolynomial::modulus_sq(1, 0);
        assert!(canonical_model(
            1,
            psi.clone(),
            bad_r1,
            MixedPolynomial::zero(1),
            MixedPolynomial::zero(2),
            4,
            1.5
        )
        .is_err());
        // A legal R3 = (Im w)^2 Re z term.
        let mut r3 = MixedPolynomial::zero(2);
        r3.add_term(MultiIndex(vec![1, 2]), MultiIndex(vec![0, 0]), c(0.5, 0.0));
        r3.add_term(MultiIndex(vec![0, 2]), MultiIndex(vec![1, 0]), c(0.5, 0.0));
        let (form, _spec) = canonical_model(
            1,
            psi,
            MixedPolynomial::zero(1),
            MixedPolynomial::zero(1),
            r3,
            4,
            1.5,
        )
        .unwrap();
        // Assembled defining agrees with direct evaluation.
        let z = c(0.3, -0.2);
        let w = c(-0.4, 0.6);
        let direct = w.re + z.norm_sqr() + w.im * w.im * z.re;
        let v = form.defining.eval_real(&[z, w]).unwrap();
        assert!((v - direct).abs() < 1e-12);
    }
}
