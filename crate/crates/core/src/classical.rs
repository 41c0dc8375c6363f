//! Commutative reference geometry: the round sphere in R^3 and the Clifford
//! torus in R^4, written through Poisson brackets of the embedding
//! coordinates.
//!
//! The bracket is `{f, h} = (1/sqrt g) eps^{ab} d_a f d_b h`. The tangent
//! projector is built twice, from brackets as `D^{ij} = {x^i, x^k}{x^j, x^k}`
//! and from the Jacobian as `J g^{-1} J^T`. Curvature uses the derivations
//! `d^i(f) = {x^i, f}` applied to the entries of `D`, whose parameter
//! derivatives come either from closed-form second partials of the embedding
//! or from central finite differences.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{Error, Result};
use crate::sphere::EPSILON;

/// Distance kept from the sphere's poles, where `sqrt g = sin(theta)` vanishes.
pub const POLE_GUARD: f64 = 1e-3;

/// Default central-difference step in parameter space.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    /// `x = (sin t cos p, sin t sin p, cos t)` with `u = (t, p)`.
    Sphere,
    /// `x = (cos p1, sin p1, cos p2, sin p2) / sqrt 2` with `u = (p1, p2)`.
    CliffordTorus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

/// One sampled point with its first-order data.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub u: [f64; 2],
    pub x: DVector<f64>,
    /// `m x 2`, column `a` is `d_a x`.
    pub jacobian: DMatrix<f64>,
    /// `g_ab = sum_i d_a x^i d_b x^i`.
    pub g: Matrix2<f64>,
    pub sqrtg: f64,
}

impl Surface {
    pub fn name(&self) -> &'static str {
        match self {
            Surface::Sphere => "sphere",
            Surface::CliffordTorus => "clifford-torus",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Surface::Sphere => 3,
            Surface::CliffordTorus => 4,
        }
    }

    /// Closed-form scalar curvature of the embedded surface.
    pub fn expected_scalar_curvature(&self) -> f64 {
        match self {
            Surface::Sphere => 2.0,
            Surface::CliffordTorus => 0.0,
        }
    }

    pub fn check_domain(&self, u: [f64; 2]) -> Result<()> {
        if !u[0].is_finite() || !u[1].is_finite() {
            return Err(Error::DegenerateParameter {
                u0: u[0],
                u1: u[1],
                reason: "non-finite parameter",
            });
        }
        if *self == Surface::Sphere && !(POLE_GUARD < u[0] && u[0] < PI - POLE_GUARD) {
            return Err(Error::DegenerateParameter {
                u0: u[0],
                u1: u[1],
                reason: "polar angle inside the pole guard band",
            });
        }
        Ok(())
    }

    pub fn position(&self, u: [f64; 2]) -> DVector<f64> {
        let (s0, c0) = u[0].sin_cos();
        let (s1, c1) = u[1].sin_cos();
        match self {
            Surface::Sphere => DVector::from_vec(vec![s0 * c1, s0 * s1, c0]),
            Surface::CliffordTorus => DVector::from_vec(vec![c0, s0, c1, s1]) * std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// `[d_0 x, d_1 x]`.
    pub fn first_partials(&self, u: [f64; 2]) -> [DVector<f64>; 2] {
        let (s0, c0) = u[0].sin_cos();
        let (s1, c1) = u[1].sin_cos();
        match self {
            Surface::Sphere => [
                DVector::from_vec(vec![c0 * c1, c0 * s1, -s0]),
                DVector::from_vec(vec![-s0 * s1, s0 * c1, 0.0]),
            ],
            Surface::CliffordTorus => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                [
                    DVector::from_vec(vec![-s0, c0, 0.0, 0.0]) * r,
                    DVector::from_vec(vec![0.0, 0.0, -s1, c1]) * r,
                ]
            }
        }
    }

    /// `[[d_00 x, d_01 x], [d_10 x, d_11 x]]`.
    pub fn second_partials(&self, u: [f64; 2]) -> [[DVector<f64>; 2]; 2] {
        let (s0, c0) = u[0].sin_cos();
        let (s1, c1) = u[1].sin_cos();
        match self {
            Surface::Sphere => {
                let d00 = DVector::from_vec(vec![-s0 * c1, -s0 * s1, -c0]);
                let d01 = DVector::from_vec(vec![-c0 * s1, c0 * c1, 0.0]);
                let d11 = DVector::from_vec(vec![-s0 * c1, -s0 * s1, 0.0]);
                [[d00, d01.clone()], [d01, d11]]
            }
            Surface::CliffordTorus => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                let d00 = DVector::from_vec(vec![-c0, -s0, 0.0, 0.0]) * r;
                let d11 = DVector::from_vec(vec![0.0, 0.0, -c1, -s1]) * r;
                let zero = DVector::zeros(4);
                [[d00, zero.clone()], [zero, d11]]
            }
        }
    }

    /// `count` low-discrepancy parameter samples: Halton points in bases 2
    /// and 3 (indices `1..=count`) mapped affinely onto the admissible domain.
    pub fn sample_parameters(&self, count: usize) -> Vec<[f64; 2]> {
        (1..=count)
            .map(|n| self.map_unit_square(halton(n, 2), halton(n, 3)))
            .collect()
    }

    /// `grid x grid` cell-centred parameter grid over the admissible domain.
    pub fn parameter_grid(&self, grid: usize) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(grid * grid);
        for a in 0..grid {
            for b in 0..grid {
                let s = (a as f64 + 0.5) / grid as f64;
                let t = (b as f64 + 0.5) / grid as f64;
                out.push(self.map_unit_square(s, t));
            }
        }
        out
    }

    fn map_unit_square(&self, s: f64, t: f64) -> [f64; 2] {
        match self {
            Surface::Sphere => {
                // Two guard widths, so samples stay strictly inside the domain.
                let lo = 2.0 * POLE_GUARD;
                [lo + (PI - 2.0 * lo) * s, TAU * t]
            }
            Surface::CliffordTorus => [TAU * s, TAU * t],
        }
    }

    /// Tangent projector `J g^{-1} J^T` as a function of the parameters.
    pub fn projector_at(&self, u: [f64; 2]) -> DMatrix<f64> {
        let [d0, d1] = self.first_partials(u);
        let j = DMatrix::from_columns(&[d0, d1]);
        let g = induced_metric(&j);
        let ginv = g
            .try_inverse()
            .expect("induced metric is nondegenerate inside the domain");
        let ginv = DMatrix::from_iterator(2, 2, ginv.iter().copied());
        &j * ginv * j.transpose()
    }
}

fn induced_metric(j: &DMatrix<f64>) -> Matrix2<f64> {
    let g = j.transpose() * j;
    Matrix2::new(g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)])
}

/// Radical inverse of `index` in `base`.
pub fn halton(mut index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

pub fn sample_point(surface: Surface, u: [f64; 2]) -> Result<SurfacePoint> {
    surface.check_domain(u)?;
    let [d0, d1] = surface.first_partials(u);
    let jacobian = DMatrix::from_columns(&[d0, d1]);
    let g = induced_metric(&jacobian);
    let det = g.determinant();
    if det.is_nan() || det <= 0.0 {
        return Err(Error::DegenerateParameter {
            u0: u[0],
            u1: u[1],
            reason: "Jacobian does not have rank 2",
        });
    }
    Ok(SurfacePoint {
        u,
        x: surface.position(u),
        jacobian,
        g,
        sqrtg: det.sqrt(),
    })
}

impl SurfacePoint {
    pub fn m(&self) -> usize {
        self.x.len()
    }

    /// `theta^{ab} = eps^{ab} / sqrt g`.
    pub fn poisson_bivector(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, -1.0, 0.0) / self.sqrtg
    }

    /// `{f, h}` for functions given through their parameter gradients.
    pub fn bracket(&self, df: [f64; 2], dh: [f64; 2]) -> f64 {
        (df[0] * dh[1] - df[1] * dh[0]) / self.sqrtg
    }

    /// Parameter gradient of the coordinate `x^i`.
    fn coordinate_gradient(&self, i: usize) -> [f64; 2] {
        [self.jacobian[(i, 0)], self.jacobian[(i, 1)]]
    }

    /// `{x^i, x^j}` as an antisymmetric `m x m` matrix.
    pub fn coordinate_brackets(&self) -> DMatrix<f64> {
        let m = self.m();
        DMatrix::from_fn(m, m, |i, j| {
            self.bracket(self.coordinate_gradient(i), self.coordinate_gradient(j))
        })
    }

    /// `g^{ab} - theta^{ap} theta^{bq} g_{pq}`, max modulus.
    pub fn metric_inverse_identity(&self) -> f64 {
        let theta = self.poisson_bivector();
        let via_brackets = theta * self.g * theta.transpose();
        let inverse = self.g.try_inverse().expect("nondegenerate metric");
        (inverse - via_brackets).amax()
    }
}

/// The classical projector computed two ways, and its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalProjector {
    /// `D^{ij} = {x^i, x^k}{x^j, x^k}`.
    pub from_brackets: DMatrix<f64>,
    /// `D = J g^{-1} J^T`.
    pub from_jacobian: DMatrix<f64>,
    /// `Pi = 1 - D`, from the bracket form.
    pub normal: DMatrix<f64>,
}

impl ClassicalProjector {
    pub fn agreement(&self) -> f64 {
        (&self.from_brackets - &self.from_jacobian).amax()
    }

    /// Max of `|D^2 - D|`, `|D - D^T|` and `|tr D - 2|`.
    pub fn projector_defect(&self) -> f64 {
        let d = &self.from_brackets;
        let idem = (d * d - d).amax();
        let sym = (d - d.transpose()).amax();
        idem.max(sym).max((d.trace() - 2.0).abs())
    }
}

pub fn classical_projector(point: &SurfacePoint) -> ClassicalProjector {
    let p = point.coordinate_brackets();
    let from_brackets = &p * p.transpose();
    let ginv = point.g.try_inverse().expect("nondegenerate metric");
    let ginv = DMatrix::from_iterator(2, 2, ginv.iter().copied());
    let from_jacobian = &point.jacobian * ginv * point.jacobian.transpose();
    let normal = DMatrix::identity(point.m(), point.m()) - &from_brackets;
    ClassicalProjector {
        from_brackets,
        from_jacobian,
        normal,
    }
}

/// `R^{ijkl}` on the `m^4` index grid and its contraction `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCurvature {
    m: usize,
    components: Vec<f64>,
    pub scalar: f64,
}

impl ClassicalCurvature {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let m = self.m;
        self.components[((i * m + j) * m + k) * m + l]
    }

    pub fn max_abs_component(&self) -> f64 {
        self.components.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()))
    }
}

/// `[d_0 D, d_1 D]` at `u`.
fn projector_parameter_derivatives(surface: Surface, point: &SurfacePoint, mode: DerivativeMode) -> [DMatrix<f64>; 2] {
    match mode {
        DerivativeMode::Analytic => {
            let j = &point.jacobian;
            let ginv = point.g.try_inverse().expect("nondegenerate metric");
            let ginv = DMatrix::from_iterator(2, 2, ginv.iter().copied());
            let second = surface.second_partials(point.u);
            let deriv = |c: usize| {
                let dj = DMatrix::from_columns(&[second[c][0].clone(), second[c][1].clone()]);
                let dg = dj.transpose() * j + j.transpose() * &dj;
                let dginv = -(&ginv * dg * &ginv);
                &dj * &ginv * j.transpose() + j * dginv * j.transpose() + j * &ginv * dj.transpose()
            };
            [deriv(0), deriv(1)]
        }
        DerivativeMode::FiniteDifference { step } => {
            let u = point.u;
            let central = |c: usize| {
                let mut up = u;
                let mut down = u;
                up[c] += step;
                down[c] -= step;
                (surface.projector_at(up) - surface.projector_at(down)) / (2.0 * step)
            };
            [central(0), central(1)]
        }
    }
}

/// `R^{ijkl} = sum_n d^i(D^{kn}) d^j(D^{nl}) - d^j(D^{kn}) d^i(D^{nl})` with
/// `d^i(f) = {x^i, f}`, and `S = sum P^{jl} P^{ik} R^{ijkl}` with `P^{ij} = {x^i, x^j}`.
pub fn classical_curvature(surface: Surface, point: &SurfacePoint, mode: DerivativeMode) -> ClassicalCurvature {
    let m = point.m();
    let [d0, d1] = projector_parameter_derivatives(surface, point, mode);
    // dd[i][k * m + l] = {x^i, D^{kl}}
    let dd: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let gi = point.coordinate_gradient(i);
            (0..m * m)
                .map(|kl| {
                    let (k, l) = (kl / m, kl % m);
                    point.bracket(gi, [d0[(k, l)], d1[(k, l)]])
                })
                .collect()
        })
        .collect();
    let mut components = Vec::with_capacity(m.pow(4));
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut r = 0.0;
                    for n in 0..m {
                        r += dd[i][k * m + n] * dd[j][n * m + l] - dd[j][k * m + n] * dd[i][n * m + l];
                    }
                    components.push(r);
                }
            }
        }
    }
    let p = point.coordinate_brackets();
    let mut scalar = 0.0;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    scalar += p[(j, l)] * p[(i, k)] * components[((i * m + j) * m + k) * m + l];
                }
            }
        }
    }
    ClassicalCurvature { m, components, scalar }
}

/// `{x^i, x^j} - eps^{ijk} x^k` on the sphere, max modulus.
pub fn sphere_bracket_residual(point: &SurfacePoint) -> f64 {
    let p = point.coordinate_brackets();
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let expected: f64 = (0..3).map(|k| EPSILON[i][j][k] as f64 * point.x[k]).sum();
            worst = worst.max((p[(i, j)] - expected).abs());
        }
    }
    worst
}

/// `(eps^{ikm} eps^{jln} - eps^{jkm} eps^{iln}) x^m x^n`.
pub fn sphere_curvature_closed_form(x: &DVector<f64>, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let e = |a: usize, b: usize, c: usize| EPSILON[a][b][c] as f64;
    let mut r = 0.0;
    for m in 0..3 {
        for n in 0..3 {
            r += (e(i, k, m) * e(j, l, n) - e(j, k, m) * e(i, l, n)) * x[m] * x[n];
        }
    }
    r
}

/// The Clifford torus bracket matrix, `2 * [[0, 0, x2x4, -x2x3], ...]`.
pub fn torus_bracket_closed_form(x: &DVector<f64>) -> DMatrix<f64> {
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0,
            0.0,
            x2 * x4,
            -x2 * x3,
            0.0,
            0.0,
            -x1 * x4,
            x1 * x3,
            -x2 * x4,
            x1 * x4,
            0.0,
            0.0,
            x2 * x3,
            -x1 * x3,
            0.0,
            0.0,
        ],
    ) * 2.0
}

/// The Clifford torus tangent projector, `2 * [[x2^2, -x1x2, 0, 0], ...]`.
pub fn torus_projector_closed_form(x: &DVector<f64>) -> DMatrix<f64> {
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            x2 * x2,
            -x1 * x2,
            0.0,
            0.0,
            -x1 * x2,
            x1 * x1,
            0.0,
            0.0,
            0.0,
            0.0,
            x4 * x4,
            -x3 * x4,
            0.0,
            0.0,
            -x3 * x4,
            x3 * x3,
        ],
    ) * 2.0
}

/// `delta^{ij} - x^i x^j`.
pub fn sphere_projector_closed_form(x: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::identity(3, 3) - x * x.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn sphere_equator_point() {
        let p = sample_point(Surface::Sphere, [FRAC_PI_2, 0.0]).unwrap();
        assert!((p.x.clone() - DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-15);
        assert!((p.g - Matrix2::identity()).amax() < 1e-15);
        assert_relative_eq!(p.sqrtg, 1.0, epsilon = 1e-15);
        let proj = classical_projector(&p);
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0, 1.0]));
        assert!((proj.from_brackets - expected).amax() < 1e-15);
    }

    #[test]
    fn sphere_sqrtg_is_sin_theta() {
        let p = sample_point(Surface::Sphere, [FRAC_PI_4, 0.3]).unwrap();
        assert_relative_eq!(p.sqrtg, FRAC_PI_4.sin(), epsilon = 1e-15);
    }

    #[test]
    fn torus_metric_is_constant() {
        for u in Surface::CliffordTorus.sample_parameters(5) {
            let p = sample_point(Surface::CliffordTorus, u).unwrap();
            assert!((p.g - Matrix2::identity() * 0.5).amax() < 1e-15);
            assert_relative_eq!(p.sqrtg, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(
            sample_point(Surface::Sphere, [0.0, 1.0]),
            Err(Error::DegenerateParameter { .. })
        ));
        assert!(sample_point(Surface::Sphere, [PI - 1e-4, 1.0]).is_err());
        assert!(sample_point(Surface::CliffordTorus, [f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn brackets_are_antisymmetric() {
        let p = sample_point(Surface::Sphere, [1.0, 2.0]).unwrap();
        let b = p.coordinate_brackets();
        assert_eq!(b.clone() + b.transpose(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn diagonal_metric_cofactor() {
        // theta g theta^T = adj(g)/det(g) for diagonal g = diag(a, b).
        let (a, b) = (2.0_f64, 5.0_f64);
        let g = Matrix2::new(a, 0.0, 0.0, b);
        let theta = Matrix2::new(0.0, 1.0, -1.0, 0.0) / (a * b).sqrt();
        let inv = theta * g * theta.transpose();
        assert!((inv - Matrix2::new(1.0 / a, 0.0, 0.0, 1.0 / b)).amax() < 1e-15);
    }

    #[test]
    fn torus_metric_inverse() {
        let p = sample_point(Surface::CliffordTorus, [0.4, 1.3]).unwrap();
        assert!((p.g.try_inverse().unwrap() - Matrix2::identity() * 2.0).amax() < 1e-14);
        assert!(p.metric_inverse_identity() < 1e-14);
    }

    #[test]
    fn halton_first_values() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(1, 3) - 1.0 / 3.0).abs() < 1e-16);
        assert!((halton(4, 3) - 4.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn samples_stay_in_domain() {
        for u in Surface::Sphere.sample_parameters(200) {
            assert!(Surface::Sphere.check_domain(u).is_ok());
        }
        for u in Surface::Sphere.parameter_grid(32) {
            assert!(Surface::Sphere.check_domain(u).is_ok());
        }
    }

    #[test]
    fn sphere_scalar_curvature_one_point() {
        let p = sample_point(Surface::Sphere, [1.1, 0.7]).unwrap();
        let c = classical_curvature(Surface::Sphere, &p, DerivativeMode::Analytic);
        assert_relative_eq!(c.scalar, 2.0, epsilon = 1e-12);
    }
}
