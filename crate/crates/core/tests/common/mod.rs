//! Plain-matrix reference implementations, independent of the library's
//! element and module types.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(a: &M) -> f64 {
    a.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn comm(a: &M, b: &M) -> M {
    a * b - b * a
}

/// `(1/i hbar)[x, a]`.
pub fn deriv(x: &M, hbar: f64, a: &M) -> M {
    comm(x, a) / c(0.0, hbar)
}

/// Spin matrices built from the lowering operator in the basis ordered by
/// increasing weight `m = -j, ..., j`; unitarily equivalent to any other
/// convention.
pub fn spin(n: usize) -> [M; 3] {
    let j = (n as f64 - 1.0) / 2.0;
    let mut lower = M::zeros(n, n);
    for a in 1..n {
        let m = -j + a as f64;
        // J- |m> = sqrt((j + m)(j - m + 1)) |m - 1>
        lower[(a - 1, a)] = c(((j + m) * (j - m + 1.0)).sqrt(), 0.0);
    }
    let raise = lower.adjoint();
    let j1 = (&raise + &lower) * c(0.5, 0.0);
    let j2 = (&raise - &lower) * c(0.0, -0.5);
    let j3 = M::from_diagonal(&nalgebra::DVector::from_fn(n, |a, _| c(-j + a as f64, 0.0)));
    [j1, j2, j3]
}

/// Levi-Civita symbol from the permutation sign.
pub fn epsilon(i: usize, j: usize, k: usize) -> f64 {
    if i == j || j == k || i == k {
        return 0.0;
    }
    let inversions = (i > j) as i32 + (i > k) as i32 + (j > k) as i32;
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `R^{ijkl} = sum_n d^i(D^{kn}) d^j(D^{nl}) - d^j(D^{kn}) d^i(D^{nl})`,
/// with `D` given row-major as `m * m` blocks. Indexed `((i*m + j)*m + k)*m + l`.
pub fn curvature(x: &[M], d: &[M], hbar: f64) -> Vec<M> {
    let m = x.len();
    let dim = x[0].nrows();
    let dd: Vec<Vec<M>> = x
        .iter()
        .map(|xi| d.iter().map(|b| deriv(xi, hbar, b)).collect())
        .collect();
    let mut out = Vec::with_capacity(m * m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut r = M::zeros(dim, dim);
                    for n in 0..m {
                        r += &dd[i][k * m + n] * &dd[j][n * m + l] - &dd[j][k * m + n] * &dd[i][n * m + l];
                    }
                    out.push(r);
                }
            }
        }
    }
    out
}

/// `S = sum P^{jl} P^{ik} R^{ijkl}` in that order.
pub fn scalar(x: &[M], hbar: f64, r: &[M]) -> M {
    let m = x.len();
    let dim = x[0].nrows();
    let p = |a: usize, b: usize| deriv(&x[a], hbar, &x[b]);
    let mut s = M::zeros(dim, dim);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    s += p(j, l) * p(i, k) * &r[((i * m + j) * m + k) * m + l];
                }
            }
        }
    }
    s
}

/// Fuzzy-sphere data in the reference basis: generators and `D = 1 - XX`.
pub fn sphere(n: usize) -> (Vec<M>, Vec<M>, f64) {
    let hbar = 2.0 / ((n * n - 1) as f64).sqrt();
    let x: Vec<M> = spin(n).iter().map(|j| j * c(hbar, 0.0)).collect();
    let id = M::identity(n, n);
    let mut d = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { id.clone() } else { M::zeros(n, n) };
            d.push(delta - &x[i] * &x[j]);
        }
    }
    (x, d, hbar)
}

/// Torus data at `theta = pi k / n`, with `U` and `V` built from explicit
/// entries: `U_aa = q^a`, `V = sum_a E_{a, a+1}` cyclically.
pub fn torus(n: usize, k: usize) -> (Vec<M>, Vec<M>, f64, M, M) {
    let theta = std::f64::consts::PI * k as f64 / n as f64;
    let mut u = M::zeros(n, n);
    let mut v = M::zeros(n, n);
    for a in 0..n {
        u[(a, a)] = Complex64::from_polar(1.0, 2.0 * theta * a as f64);
        v[(a, (a + 1) % n)] = c(1.0, 0.0);
    }
    let s = c(1.0 / (2.0 * 2.0_f64.sqrt()), 0.0);
    let (ua, va) = (u.adjoint(), v.adjoint());
    let x = vec![
        (&ua + &u) * s,
        (&ua - &u) * s * c(0.0, 1.0),
        (&va + &v) * s,
        (&va - &v) * s * c(0.0, 1.0),
    ];
    let id = M::identity(n, n);
    let mut d = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let delta = if i == j { id.clone() } else { M::zeros(n, n) };
            let pi = if (i < 2) == (j < 2) {
                &x[i] * &x[j] * c(2.0, 0.0)
            } else {
                M::zeros(n, n)
            };
            d.push(delta - pi);
        }
    }
    (x, d, theta.tan(), u, v)
}

/// `S(N)` on the fuzzy sphere as an exact fraction:
/// `(2 t^2 - 12 t + 16) / t^2` with `t = N^2 - 1`.
pub fn sphere_scalar_fraction(n: usize) -> (i128, i128) {
    let t = (n * n - 1) as i128;
    (2 * t * t - 12 * t + 16, t * t)
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
