//! The fuzzy sphere in its irreducible `N`-dimensional representation.
//!
//! Generators are rescaled spin-`j` angular momentum matrices, `X^i = hbar J^i`
//! with `j = (N - 1)/2`, and `hbar = 2 / sqrt(N^2 - 1)` so that the Casimir
//! relation `sum_i (X^i)^2 = 1` holds exactly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, ToleranceSpec, I};
use crate::calculus::{CurvatureTensor, ModuleOperator, ModuleVector, NCGeometry};
use crate::error::{Error, Result};

/// Levi-Civita symbol on three indices, `EPSILON[0][1][2] = 1`.
pub const EPSILON: [[[i32; 3]; 3]; 3] = [
    [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
    [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
];

fn eps(i: usize, j: usize, k: usize) -> f64 {
    EPSILON[i][j][k] as f64
}

/// Hermitian spin-`j` matrices `(J^1, J^2, J^3)` for `j = (n - 1)/2`, with
/// `J^3 = diag(j, j-1, ..., -j)` and `[J^i, J^j] = i eps^{ijk} J^k`.
pub fn spin_matrices(n: usize) -> [AlgebraElement; 3] {
    assert!(n >= 1);
    let j = (n as f64 - 1.0) / 2.0;
    let weight = |a: usize| j - a as f64;
    let j3 = AlgebraElement::diagonal(&(0..n).map(|a| Complex64::new(weight(a), 0.0)).collect::<Vec<_>>());
    // J+ e_a = sqrt(j(j+1) - m(m+1)) e_{a-1}, with m the weight of e_a.
    let raise = AlgebraElement::from_fn(n, |r, c| {
        if c == r + 1 {
            let m = weight(c);
            Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let lower = raise.adjoint();
    let j1 = (&raise + &lower).scale_real(0.5);
    let j2 = (&raise - &lower).scale(Complex64::new(1.0, 0.0) / (2.0 * I));
    [j1, j2, j3]
}

/// `2 - 3 hbar^2 + hbar^4`.
pub fn scalar_curvature_value(hbar: f64) -> f64 {
    let t = hbar * hbar;
    2.0 - 3.0 * t + t * t
}

/// `hbar = 2 / sqrt(N^2 - 1)`.
pub fn sphere_hbar(n: usize) -> f64 {
    2.0 / ((n * n - 1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereRelations {
    /// `max |[X^i, X^j] - i hbar eps^{ijk} X^k|`.
    pub commutator: f64,
    /// `|sum (X^i)^2 - 1|`.
    pub unit_sphere: f64,
    /// `max |X^i - (X^i)*|`.
    pub hermiticity: f64,
}

impl SphereRelations {
    pub fn max_residual(&self) -> f64 {
        self.commutator.max(self.unit_sphere).max(self.hermiticity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonResiduals {
    /// `max_i |eps^{ijk} X^j X^k - i hbar X^i|`.
    pub double_contraction: f64,
    /// `|eps^{ijk} X^i X^j X^k - i hbar 1|`.
    pub triple_contraction: f64,
    /// Integer defect of `eps^{ijk} eps^{imn} = d^{jm} d^{kn} - d^{jn} d^{km}`.
    pub epsilon_delta: i32,
    /// Integer defect of `eps^{ikl} eps^{jkl} = 2 d^{ij}`.
    pub epsilon_trace: i32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModuleResiduals {
    /// `|Pi(e_i X^i) - e_i X^i|`.
    pub generator_fixed: f64,
    /// `max |N - (e_i X^i)(X^j N^j)|` over random normal vectors `N`.
    pub generation: f64,
    /// `max |a - sum_i X^i X^i a|` over random `a`.
    pub reconstruction: f64,
}

impl NormalModuleResiduals {
    pub fn max_residual(&self) -> f64 {
        self.generator_fixed.max(self.generation).max(self.reconstruction)
    }
}

#[derive(Debug, Clone)]
pub struct FuzzySphere {
    n: usize,
    hbar: f64,
    geometry: NCGeometry,
}

impl FuzzySphere {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_tolerance(n, ToleranceSpec::default())
    }

    pub fn with_tolerance(n: usize, tol: ToleranceSpec) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        let hbar = sphere_hbar(n);
        let x: Vec<_> = spin_matrices(n).iter().map(|j| j.scale_real(hbar)).collect();
        let pi = ModuleOperator::from_fn(3, |i, j| &x[i] * &x[j]);
        let geometry = NCGeometry::new(x, hbar, pi, tol)?;
        Ok(Self { n, hbar, geometry })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn geometry(&self) -> &NCGeometry {
        &self.geometry
    }

    fn x(&self, i: usize) -> &AlgebraElement {
        self.geometry.generator(i)
    }

    fn ih(&self) -> Complex64 {
        I * self.hbar
    }

    pub fn relation_residuals(&self) -> SphereRelations {
        let mut commutator = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let lhs = self.x(i).commutator(self.x(j)).expect("equal dims");
                let mut rhs = AlgebraElement::zeros(self.n);
                for k in 0..3 {
                    rhs = &rhs + &self.x(k).scale(self.ih() * eps(i, j, k));
                }
                commutator = commutator.max(lhs.distance(&rhs));
            }
        }
        let mut casimir = AlgebraElement::zeros(self.n);
        for i in 0..3 {
            casimir = &casimir + &(self.x(i) * self.x(i));
        }
        let hermiticity = (0..3).fold(0.0_f64, |acc, i| acc.max(self.x(i).hermiticity_defect()));
        SphereRelations {
            commutator,
            unit_sphere: casimir.distance(&AlgebraElement::identity(self.n)),
            hermiticity,
        }
    }

    /// `Pi^{ij} = X^i X^j`.
    pub fn normal_projector(&self) -> &ModuleOperator {
        self.geometry.normal_projector()
    }

    /// `D^{ij} = delta^{ij} 1 - X^i X^j`.
    pub fn tangent_projector(&self) -> &ModuleOperator {
        self.geometry.tangent_projector()
    }

    /// `D^{ij} = (1/(i hbar)^2) sum_k [X^j, X^k][X^i, X^k]`.
    pub fn tangent_projector_from_commutators(&self) -> ModuleOperator {
        let factor = Complex64::new(1.0, 0.0) / (self.ih() * self.ih());
        ModuleOperator::from_fn(3, |i, j| {
            let mut acc = AlgebraElement::zeros(self.n);
            for k in 0..3 {
                let a = self.x(j).commutator(self.x(k)).expect("equal dims");
                let b = self.x(i).commutator(self.x(k)).expect("equal dims");
                acc = &acc + &(&a * &b);
            }
            acc.scale(factor)
        })
    }

    pub fn epsilon_identities(&self) -> EpsilonResiduals {
        let mut epsilon_delta = 0;
        let mut epsilon_trace = 0;
        let delta = |a: usize, b: usize| i32::from(a == b);
        for j in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        let lhs: i32 = (0..3).map(|i| EPSILON[i][j][k] * EPSILON[i][m][n]).sum();
                        let rhs = delta(j, m) * delta(k, n) - delta(j, n) * delta(k, m);
                        epsilon_delta = epsilon_delta.max((lhs - rhs).abs());
                    }
                }
            }
            for i in 0..3 {
                let lhs: i32 = (0..3)
                    .flat_map(|k| (0..3).map(move |l| (k, l)))
                    .map(|(k, l)| EPSILON[i][k][l] * EPSILON[j][k][l])
                    .sum();
                epsilon_trace = epsilon_trace.max((lhs - 2 * delta(i, j)).abs());
            }
        }

        let mut double_contraction = 0.0_f64;
        let mut triple = AlgebraElement::zeros(self.n);
        for i in 0..3 {
            let mut acc = AlgebraElement::zeros(self.n);
            for j in 0..3 {
                for k in 0..3 {
                    let e = eps(i, j, k);
                    if e != 0.0 {
                        let xx = self.x(j) * self.x(k);
                        acc = &acc + &xx.scale_real(e);
                        triple = &triple + &(self.x(i) * &xx).scale_real(e);
                    }
                }
            }
            double_contraction = double_contraction.max(acc.distance(&self.x(i).scale(self.ih())));
        }
        let triple_contraction = triple.distance(&AlgebraElement::scalar(self.n, self.ih()));
        EpsilonResiduals {
            double_contraction,
            triple_contraction,
            epsilon_delta,
            epsilon_trace,
        }
    }

    /// The six-term closed form of `R^{ijkl}` in cubic and quadratic monomials.
    pub fn curvature_closed_form(&self) -> CurvatureTensor {
        let n = self.n;
        let ih = self.ih();
        let xx: Vec<Vec<AlgebraElement>> = (0..3)
            .map(|a| (0..3).map(|b| self.x(a) * self.x(b)).collect())
            .collect();
        let xxx = |a: usize, b: usize, c: usize| &xx[a][b] * self.x(c);
        CurvatureTensor::from_fn(3, |i, j, k, l| {
            let mut acc = AlgebraElement::zeros(n);
            for p in 0..3 {
                for q in 0..3 {
                    let c = eps(i, k, p) * eps(j, l, q) - eps(j, k, p) * eps(i, l, q);
                    if c != 0.0 {
                        acc = &acc + &xx[p][q].scale_real(c);
                    }
                }
            }
            for q in 0..3 {
                if eps(j, l, q) != 0.0 {
                    acc = &acc - &xxx(k, i, q).scale(ih * eps(j, l, q));
                }
            }
            for p in 0..3 {
                if eps(j, k, p) != 0.0 {
                    acc = &acc - &xxx(p, i, l).scale(ih * eps(j, k, p));
                }
            }
            for p in 0..3 {
                if eps(i, k, p) != 0.0 {
                    acc = &acc + &xxx(p, j, l).scale(ih * eps(i, k, p));
                }
            }
            for q in 0..3 {
                if eps(i, l, q) != 0.0 {
                    acc = &acc + &xxx(k, j, q).scale(ih * eps(i, l, q));
                }
            }
            for p in 0..3 {
                if eps(i, j, p) != 0.0 {
                    acc = &acc + &xxx(k, p, l).scale(ih * eps(i, j, p));
                }
            }
            acc
        })
    }

    /// Closed form of `sum_{i,k} P^{ik} R^{ijkl}`:
    /// `(1 - hbar^2 - hbar^4) eps^{jlm} X^m + i hbar (1 - 3 hbar^2) X^j X^l + i hbar^3 delta^{jl}`.
    pub fn partial_contraction_closed_form(&self, j: usize, l: usize) -> AlgebraElement {
        let h = self.hbar;
        let h2 = h * h;
        let mut acc = AlgebraElement::zeros(self.n);
        for m in 0..3 {
            if eps(j, l, m) != 0.0 {
                acc = &acc + &self.x(m).scale_real((1.0 - h2 - h2 * h2) * eps(j, l, m));
            }
        }
        acc = &acc + &(self.x(j) * self.x(l)).scale(I * h * (1.0 - 3.0 * h2));
        if j == l {
            acc = &acc + &AlgebraElement::scalar(self.n, I * h * h2);
        }
        acc
    }

    /// `(2 - 3 hbar^2 + hbar^4) 1`.
    pub fn scalar_curvature_closed_form(&self) -> AlgebraElement {
        AlgebraElement::scalar(self.n, Complex64::new(scalar_curvature_value(self.hbar), 0.0))
    }

    /// The generator `e_i X^i` of the normal module.
    pub fn normal_generator(&self) -> ModuleVector {
        ModuleVector::new(self.geometry.generators().to_vec()).expect("three generators of equal dim")
    }

    /// Checks that `e_i X^i` freely generates `Pi(A^3)` on `trials` random
    /// inputs drawn from `seed`.
    pub fn normal_module_checks(&self, trials: usize, seed: u64) -> NormalModuleResiduals {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = self.normal_generator();
        let pi = self.normal_projector();
        let generator_fixed = pi.apply(&gen).distance(&gen);
        let mut generation = 0.0_f64;
        let mut reconstruction = 0.0_f64;
        for _ in 0..trials {
            let normal = pi.apply(&self.geometry.random_vector(&mut rng));
            let mut coeff = AlgebraElement::zeros(self.n);
            for j in 0..3 {
                coeff = &coeff + &(self.x(j) * normal.component(j));
            }
            generation = generation.max(normal.distance(&gen.right_mul(&coeff)));

            let a = AlgebraElement::random_with(&mut rng, self.n, false);
            let mut rebuilt = AlgebraElement::zeros(self.n);
            for i in 0..3 {
                rebuilt = &rebuilt + &(self.x(i) * &(self.x(i) * &a));
            }
            reconstruction = reconstruction.max(a.distance(&rebuilt));
        }
        NormalModuleResiduals {
            generator_fixed,
            generation,
            reconstruction,
        }
    }
}
