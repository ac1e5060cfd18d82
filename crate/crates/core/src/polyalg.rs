//! Mixed polynomials in z and zbar with exact term arithmetic and Wirtinger
//! calculus. This is the representation behind every defining function,
//! rescaled boundary polynomial, and limit polynomial in the crate.
//!
//! Terms are kept in a canonical `BTreeMap` keyed by the exponent pair
//! (alpha, beta) for `z^alpha zbar^beta`; coefficients below
//! `PRUNE_REL * max|c|` are pruned after every arithmetic operation so that
//! coefficient-level equality is meaningful.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::C;

/// Relative pruning threshold for near-zero coefficients.
pub const PRUNE_REL: f64 = 1e-14;

/// Exponent multi-index; length equals the ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree |alpha|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

type TermKey = (MultiIndex, MultiIndex);

/// Serialization record for one term, matching the config format
/// `{alpha: [ints], beta: [ints], re: float, im: float}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRecord {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// Finitely supported coefficient table for sum c_{ab} z^a zbar^b.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPolynomial {
    dim: usize,
    terms: BTreeMap<TermKey, C>,
}

impl MixedPolynomial {
    pub fn zero(dim: usize) -> Self {
        MixedPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, value: C) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zeros(dim), MultiIndex::zeros(dim), value);
        p.prune();
        p
    }

    /// The holomorphic coordinate z_j.
    pub fn var(dim: usize, j: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, j), MultiIndex::zeros(dim), C::new(1.0, 0.0))
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, beta: MultiIndex, coeff: C) -> Self {
        assert_eq!(alpha.len(), dim);
        assert_eq!(beta.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(alpha, beta, coeff);
        p.prune();
        p
    }

    /// Re z_j as a mixed polynomial.
    pub fn re_of_var(dim: usize, j: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::unit(dim, j), MultiIndex::zeros(dim), C::new(0.5, 0.0));
        p.add_term(MultiIndex::zeros(dim), MultiIndex::unit(dim, j), C::new(0.5, 0.0));
        p
    }

    /// Im z_j as a mixed polynomial.
    pub fn im_of_var(dim: usize, j: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::unit(dim, j), MultiIndex::zeros(dim), C::new(0.0, -0.5));
        p.add_term(MultiIndex::zeros(dim), MultiIndex::unit(dim, j), C::new(0.0, 0.5));
        p
    }

    /// |z_j|^2.
    pub fn modulus_sq(dim: usize, j: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, j), MultiIndex::unit(dim, j), C::new(1.0, 0.0))
    }

    /// Squared Euclidean norm of the full variable vector.
    pub fn norm_sq(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for j in 0..dim {
            p.add_term(MultiIndex::unit(dim, j), MultiIndex::unit(dim, j), C::new(1.0, 0.0));
        }
        p
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &C)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> C {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or(C::new(0.0, 0.0))
    }

    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, coeff: C) {
        debug_assert_eq!(alpha.len(), self.dim);
        debug_assert_eq!(beta.len(), self.dim);
        let e = self.terms.entry((alpha, beta)).or_insert(C::new(0.0, 0.0));
        *e += coeff;
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients below `PRUNE_REL * max|c|`; keeps term maps canonical.
    pub fn prune(&mut self) {
        let m = self.max_coeff_magnitude();
        if m == 0.0 {
            self.terms.clear();
            return;
        }
        let thr = PRUNE_REL * m;
        self.terms.retain(|_, c| c.norm() > thr);
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| a.degree() + b.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: C) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), *c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let a: Vec<u32> = a1.0.iter().zip(&a2.0).map(|(x, y)| x + y).collect();
                let b: Vec<u32> = b1.0.iter().zip(&b2.0).map(|(x, y)| x + y).collect();
                out.add_term(MultiIndex(a), MultiIndex(b), c1 * c2);
            }
        }
        out.prune();
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.dim, C::new(1.0, 0.0));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Complex conjugate: swaps alpha and beta and conjugates coefficients.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            out.add_term(b.clone(), a.clone(), c.conj());
        }
        out
    }

    /// True iff c_{beta,alpha} = conj(c_{alpha,beta}) for all stored terms,
    /// up to `PRUNE_REL`-level noise.
    pub fn is_real_valued(&self) -> bool {
        let m = self.max_coeff_magnitude();
        if m == 0.0 {
            return true;
        }
        let tol = 1e-12 * m;
        self.terms.iter().all(|((a, b), c)| {
            let mirror = self.coeff(b, a);
            (mirror - c.conj()).norm() <= tol
        })
    }

    /// True iff the polynomial only depends on z (beta = 0 in every term).
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.is_zero())
    }

    /// Evaluate at a point of C^n.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        let mut acc = C::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let mut t = *c;
            for (j, &e) in a.0.iter().enumerate() {
                if e > 0 {
                    t *= point[j].powu(e);
                }
            }
            for (j, &e) in b.0.iter().enumerate() {
                if e > 0 {
                    t *= point[j].conj().powu(e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluate a real-valued polynomial, returning the real part.
    pub fn eval_real(&self, point: &[C]) -> Result<f64> {
        Ok(self.eval(point)?.re)
    }

    /// Exact Wirtinger derivative d/dz_j (or d/dzbar_j when `conjugated`).
    pub fn wirtinger_derivative(&self, j: usize, conjugated: bool) -> Self {
        assert!(j < self.dim, "variable index out of range");
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            let src = if conjugated { &b.0 } else { &a.0 };
            let e = src[j];
            if e == 0 {
                continue;
            }
            let mut a2 = a.0.clone();
            let mut b2 = b.0.clone();
            if conjugated {
                b2[j] -= 1;
            } else {
                a2[j] -= 1;
            }
            out.add_term(MultiIndex(a2), MultiIndex(b2), c * e as f64);
        }
        out.prune();
        out
    }

    /// Complex Hessian (d^2 p / dz_j dzbar_k)(point) of a real-valued p.
    pub fn complex_hessian(&self, point: &[C]) -> Result<HermitianMatrix> {
        if !self.is_real_valued() {
            return Err(Error::NotRealValued);
        }
        let n = self.dim;
        let mut h = DMatrix::zeros(n, n);
        for j in 0..n {
            let dj = self.wirtinger_derivative(j, false);
            for k in 0..n {
                h[(j, k)] = dj.wirtinger_derivative(k, true).eval(point)?;
            }
        }
        Ok(HermitianMatrix::new(h))
    }

    /// Sum of the terms with alpha = 0 or beta = 0 (holomorphic plus
    /// anti-holomorphic part, constant included).
    pub fn pluriharmonic_part(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            if a.is_zero() || b.is_zero() {
                out.add_term(a.clone(), b.clone(), *c);
            }
        }
        out
    }

    /// Sum of the terms of total degree |alpha|+|beta| = k.
    pub fn homogeneous_component(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.terms {
            if a.degree() + b.degree() == k {
                out.add_term(a.clone(), b.clone(), *c);
            }
        }
        out
    }

    /// Substitute each variable with a holomorphic polynomial (the zbar side
    /// receives the conjugates), expanding fully.
    pub fn compose_holomorphic(&self, subs: &[MixedPolynomial]) -> Result<Self> {
        if subs.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: subs.len() });
        }
        let out_dim = subs[0].dimension();
        for s in subs {
            if !s.is_holomorphic() {
                return Err(Error::precondition(
                    "composition substitutions must be holomorphic",
                ));
            }
            if s.dimension() != out_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, got: s.dimension() });
            }
        }
        // Power tables, one per variable and side.
        let mut max_a = vec![0u32; self.dim];
        let mut max_b = vec![0u32; self.dim];
        for (a, b) in self.terms.keys() {
            for j in 0..self.dim {
                max_a[j] = max_a[j].max(a.0[j]);
                max_b[j] = max_b[j].max(b.0[j]);
            }
        }
        let pow_table = |base: &MixedPolynomial, maxe: u32| -> Vec<MixedPolynomial> {
            let mut t = Vec::with_capacity(maxe as usize + 1);
            t.push(MixedPolynomial::constant(out_dim, C::new(1.0, 0.0)));
            for e in 1..=maxe {
                let prev = t[(e - 1) as usize].clone();
                t.push(prev.mul(base));
            }
            t
        };
        let pows_a: Vec<Vec<MixedPolynomial>> =
            (0..self.dim).map(|j| pow_table(&subs[j], max_a[j])).collect();
        let pows_b: Vec<Vec<MixedPolynomial>> = (0..self.dim)
            .map(|j| pow_table(&subs[j].conjugate(), max_b[j]))
            .collect();

        let mut out = Self::zero(out_dim);
        for ((a, b), c) in &self.terms {
            let mut t = MixedPolynomial::constant(out_dim, *c);
            for j in 0..self.dim {
                if a.0[j] > 0 {
                    t = t.mul(&pows_a[j][a.0[j] as usize]);
                }
                if b.0[j] > 0 {
                    t = t.mul(&pows_b[j][b.0[j] as usize]);
                }
            }
            out = out.add(&t);
        }
        out.prune();
        Ok(out)
    }

    /// Exact composition with a complex affine map: eval(result, x) =
    /// eval(self, map(x)). Rejects singular linear parts.
    pub fn compose_affine(&self, map: &AffineMap) -> Result<Self> {
        if map.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: map.dim() });
        }
        if !map.is_invertible() {
            return Err(Error::SingularMap);
        }
        let subs: Vec<MixedPolynomial> = (0..self.dim)
            .map(|j| {
                let mut s = MixedPolynomial::constant(self.dim, map.offset[j]);
                for k in 0..self.dim {
                    let c = map.linear[j][k];
                    if c.norm() > 0.0 {
                        s.add_term(
                            MultiIndex::unit(self.dim, k),
                            MultiIndex::zeros(self.dim),
                            c,
                        );
                    }
                }
                s
            })
            .collect();
        self.compose_holomorphic(&subs)
    }

    /// Max coefficient distance to another polynomial (union of supports).
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for ((a, b), c) in &self.terms {
            d = d.max((other.coeff(a, b) - c).norm());
        }
        for ((a, b), c) in &other.terms {
            d = d.max((self.coeff(a, b) - c).norm());
        }
        d
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|((a, b), c)| TermRecord {
                alpha: a.0.clone(),
                beta: b.0.clone(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn from_records(dim: usize, records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::zero(dim);
        for r in records {
            if r.alpha.len() != dim || r.beta.len() != dim {
                return Err(Error::Config(format!(
                    "term record exponent length does not match dimension {dim}"
                )));
            }
            p.add_term(
                MultiIndex(r.alpha.clone()),
                MultiIndex(r.beta.clone()),
                C::new(r.re, r.im),
            );
        }
        p.prune();
        Ok(p)
    }

    /// Embed a polynomial into a larger variable list, placing variable i at
    /// slot `slots[i]`.
    pub fn embed(&self, dim: usize, slots: &[usize]) -> Self {
        assert_eq!(slots.len(), self.dim);
        let mut out = Self::zero(dim);
        for ((a, b), c) in &self.terms {
            let mut a2 = vec![0u32; dim];
            let mut b2 = vec![0u32; dim];
            for (i, &s) in slots.iter().enumerate() {
                a2[s] = a.0[i];
                b2[s] = b.0[i];
            }
            out.add_term(MultiIndex(a2), MultiIndex(b2), *c);
        }
        out
    }
}

/// Complex affine map x -> L x + b with row-major linear part.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub linear: Vec<Vec<C>>,
    pub offset: Vec<C>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        let mut linear = vec![vec![C::new(0.0, 0.0); n]; n];
        for (j, row) in linear.iter_mut().enumerate() {
            row[j] = C::new(1.0, 0.0);
        }
        AffineMap { linear, offset: vec![C::new(0.0, 0.0); n] }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &[C]) -> Vec<C> {
        (0..self.dim())
            .map(|j| {
                let mut acc = self.offset[j];
                for k in 0..self.dim() {
                    acc += self.linear[j][k] * x[k];
                }
                acc
            })
            .collect()
    }

    /// self o other.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let n = self.dim();
        let mut linear = vec![vec![C::new(0.0, 0.0); n]; n];
        let mut offset = self.offset.clone();
        for j in 0..n {
            for k in 0..n {
                let mut acc = C::new(0.0, 0.0);
                for l in 0..n {
                    acc += self.linear[j][l] * other.linear[l][k];
                }
                linear[j][k] = acc;
            }
            for l in 0..n {
                offset[j] += self.linear[j][l] * other.offset[l];
            }
        }
        AffineMap { linear, offset }
    }

    fn as_matrix(&self) -> DMatrix<C> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| self.linear[r][c])
    }

    pub fn is_invertible(&self) -> bool {
        let m = self.as_matrix();
        let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        match m.lu().determinant().norm() {
            d if scale == 0.0 => d > 0.0,
            d => d > 1e-12 * scale.powi(self.dim() as i32),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let n = self.dim();
        let inv = self.as_matrix().try_inverse()?;
        let linear: Vec<Vec<C>> = (0..n).map(|r| (0..n).map(|c| inv[(r, c)]).collect()).collect();
        let minus_b: Vec<C> = (0..n)
            .map(|r| -(0..n).map(|c| inv[(r, c)] * self.offset[c]).sum::<C>())
            .collect();
        Some(AffineMap { linear, offset: minus_b })
    }
}

/// n x n complex Hessian matrix H_{jk} = d^2 p / dz_j dzbar_k.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    data: DMatrix<C>,
}

impl HermitianMatrix {
    pub fn new(data: DMatrix<C>) -> Self {
        HermitianMatrix { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, j: usize, k: usize) -> C {
        self.data[(j, k)]
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.data
    }

    /// Hermitian defect max |H_kj - conj(H_jk)|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut d: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                d = d.max((self.data[(k, j)] - self.data[(j, k)].conj()).norm());
            }
        }
        d
    }

    /// Real eigenvalues, ascending. The matrix is symmetrized first so that
    /// roundoff-level Hermitian defects do not leak imaginary parts.
    pub fn eigenvalues_sorted(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = self.data.clone();
        for j in 0..n {
            for k in 0..n {
                let avg = 0.5 * (self.data[(j, k)] + self.data[(k, j)].conj());
                m[(j, k)] = avg;
            }
        }
        let eig = m.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Value of the Hermitian form sum H_{jk} v_j conj(v_k).
    pub fn form(&self, v: &[C]) -> f64 {
        let n = self.dim();
        let mut acc = C::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += self.data[(j, k)] * v[j] * v[k].conj();
            }
        }
        acc.re
    }
}

/// Report from a one-variable subharmonicity grid scan.
#[derive(Debug, Clone)]
pub struct SubharmonicityReport {
    /// Minimum over the grid of the Laplacian 4 d^2 p / dz dzbar.
    pub min_laplacian: f64,
    pub argmin: C,
    pub subharmonic_on_grid: bool,
}

/// Scan the Laplacian of a real-valued one-variable mixed polynomial on a
/// grid; nonnegative minimum flags "subharmonic on grid".
pub fn subharmonicity_scan(p: &MixedPolynomial, grid: &[C]) -> Result<SubharmonicityReport> {
    if p.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: p.dimension() });
    }
    if !p.is_real_valued() {
        return Err(Error::NotRealValued);
    }
    let lap = p
        .wirtinger_derivative(0, false)
        .wirtinger_derivative(0, true)
        .scale(C::new(4.0, 0.0));
    let mut min_laplacian = f64::INFINITY;
    let mut argmin = C::new(0.0, 0.0);
    for &z in grid {
        let v = lap.eval(&[z])?.re;
        if v < min_laplacian {
            min_laplacian = v;
            argmin = z;
        }
    }
    Ok(SubharmonicityReport {
        min_laplacian,
        argmin,
        subharmonic_on_grid: min_laplacian >= 0.0,
    })
}

/// Default scan grid on a closed disc: concentric rings plus the origin.
pub fn disc_grid(radius: f64, rings: usize, angles: usize) -> Vec<C> {
    let mut pts = vec![C::new(0.0, 0.0)];
    for i in 1..=rings {
        let r = radius * i as f64 / rings as f64;
        for k in 0..angles {
            let th = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
            pts.push(C::new(r * th.cos(), r * th.sin()));
        }
    }
    pts
}
