//! Small numerical utilities shared across the crate: real/complex vector
//! views, finite differences, bracketed root finding, and seeded sampling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Re/Im interleaved view of a complex vector: (x1, y1, x2, y2, ...).
pub fn to_real_vec(z: &[C]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * z.len());
    for v in z {
        out.push(v.re);
        out.push(v.im);
    }
    out
}

pub fn from_real_vec(x: &[f64]) -> Vec<C> {
    x.chunks(2).map(|p| C::new(p[0], p[1])).collect()
}

/// Euclidean norm of a complex vector.
pub fn cnorm(z: &[C]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cdist(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Hermitian inner product <a, b> = sum a_j conj(b_j).
pub fn hermitian_dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Real (R^{2n}) inner product of complex vectors.
pub fn real_dot(a: &[C], b: &[C]) -> f64 {
    hermitian_dot(a, b).re
}

pub fn axpy(a: f64, x: &[C], y: &[C]) -> Vec<C> {
    x.iter().zip(y).map(|(u, v)| u * a + v).collect()
}

pub fn caxpy(a: C, x: &[C], y: &[C]) -> Vec<C> {
    x.iter().zip(y).map(|(u, v)| u * a + v).collect()
}

pub fn sub(a: &[C], b: &[C]) -> Vec<C> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[C], s: f64) -> Vec<C> {
    a.iter().map(|x| x * s).collect()
}

/// Deterministic RNG used everywhere sampling is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere of C^n (viewed as R^{2n}).
pub fn random_unit_dir(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    loop {
        let v: Vec<C> = (0..n)
            .map(|_| {
                C::new(
                    rng.gen::<f64>() * 2.0 - 1.0,
                    rng.gen::<f64>() * 2.0 - 1.0,
                )
            })
            .collect();
        let nv = cnorm(&v);
        if nv > 1e-3 {
            return scale(&v, 1.0 / nv);
        }
    }
}

/// Bisection for a sign change of `f` on [lo, hi]; assumes f(lo) < 0 <= f(hi)
/// (or the reverse). Returns the midpoint after `iters` halvings.
pub fn bisect(mut lo: f64, mut hi: f64, iters: usize, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm <= 0.0) == (flo <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Safeguarded 1-D Newton: falls back to bisection when the Newton step
/// leaves the bracket. `f` returns (value, derivative).
pub fn newton_bracketed(
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    tol: f64,
    max_iter: usize,
    f: impl Fn(f64) -> (f64, f64),
) -> Result<f64> {
    let (mut flo, _) = f(lo);
    let mut x = x0.clamp(lo, hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() < tol {
            return Ok(x);
        }
        if (fx <= 0.0) == (flo <= 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let step = if dfx.abs() > 1e-300 { fx / dfx } else { f64::INFINITY };
        let cand = x - step;
        x = if cand.is_finite() && cand > lo && cand < hi {
            cand
        } else {
            0.5 * (lo + hi)
        };
    }
    let (fx, _) = f(x);
    if fx.abs() < tol {
        Ok(x)
    } else {
        Err(Error::non_convergence(format!(
            "bracketed Newton stalled with residual {fx:e}"
        )))
    }
}

/// Central finite-difference real gradient of a scalar function on R^m.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Central finite-difference symmetric Hessian of a scalar function on R^m.
pub fn fd_hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> DMatrix<f64> {
    let m = x.len();
    let mut hess = DMatrix::zeros(m, m);
    let f0 = f(x);
    let mut xp = x.to_vec();
    for i in 0..m {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let mut eval = |si: f64, sj: f64| {
                xp[i] = x[i] + si * h;
                xp[j] = x[j] + sj * h;
                let v = f(&xp);
                xp[i] = x[i];
                xp[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

/// Central finite-difference complex Hessian d^2 f / dz_j dzbar_k of a
/// real-valued function, via the Wirtinger identities.
pub fn fd_complex_hessian(f: &dyn Fn(&[C]) -> f64, z: &[C], h: f64) -> DMatrix<C> {
    let x = to_real_vec(z);
    let g = |x: &[f64]| f(&from_real_vec(x));
    let hr = fd_hessian(&g, &x, h);
    let n = z.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            // 4 d^2/dz_j dzbar_k = (d_xj d_xk + d_yj d_yk) + i (d_xj d_yk - d_yj d_xk)
            let re = hr[(2 * j, 2 * k)] + hr[(2 * j + 1, 2 * k + 1)];
            let im = hr[(2 * j, 2 * k + 1)] - hr[(2 * j + 1, 2 * k)];
            out[(j, k)] = C::new(re, im) * 0.25;
        }
    }
    out
}

/// Solve a dense real linear system; None if (numerically) singular.
pub fn solve_real(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    a.lu().solve(&b)
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    sxy / sxx
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_hessian_of_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1];
        let h = fd_hessian(&f, &[0.3, -0.7], 1e-4);
        assert!((h[(0, 0)] - 2.0).abs() < 1e-6);
        assert!((h[(0, 1)] - 3.0).abs() < 1e-6);
        assert!((h[(1, 1)]).abs() < 1e-6);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(0.0, 2.0, 60, |x| x * x - 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn newton_solves_linear() {
        let r = newton_bracketed(-10.0, 10.0, 3.0, 1e-14, 50, |x| (2.0 * x - 1.0, 2.0)).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }
}
