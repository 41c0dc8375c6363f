//! The noncommutative torus at rational angle `theta = pi k / N`.
//!
//! `U` is the clock matrix `diag(1, w, ..., w^{N-1})` with `w = e^{2 pi i k/N}`
//! and `V` the cyclic shift `V e_a = e_{a-1}`, so that `VU = qUV` with
//! `q = e^{2 i theta}`. The four hermitian generators are the real and
//! imaginary parts of `U / sqrt 2` and `V / sqrt 2`, and `hbar = tan theta`.
//!
//! Indices `0, 1` form the unbarred group and `2, 3` the barred group.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, ToleranceSpec, I};
use crate::calculus::{CurvatureTensor, ModuleOperator, ModuleVector, NCGeometry};
use crate::error::{Error, Result};

fn same_group(i: usize, j: usize) -> bool {
    (i < 2) == (j < 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusRelations {
    /// `[X^1, X^2]` and `[X^3, X^4]`.
    pub commuting_pairs: f64,
    /// `[X^1, X^3] = i hbar (X^2 X^4 + X^4 X^2)`.
    pub x1_x3: f64,
    /// `[X^2, X^4] = i hbar (X^1 X^3 + X^3 X^1)`.
    pub x2_x4: f64,
    /// `[X^1, X^4] = -i hbar (X^2 X^3 + X^3 X^2)`.
    pub x1_x4: f64,
    /// `[X^2, X^3] = -i hbar (X^1 X^4 + X^4 X^1)`.
    pub x2_x3: f64,
    /// `(X^1)^2 + (X^2)^2 = (X^3)^2 + (X^4)^2 = 1/2`.
    pub sum_of_squares: f64,
    /// `VU - qUV`.
    pub weyl: f64,
    /// `U U* - 1` and `V V* - 1`.
    pub unitarity: f64,
    /// `sqrt 2 (X^1 + i X^2) - U` and `sqrt 2 (X^3 + i X^4) - V`.
    pub reconstruction: f64,
    pub hermiticity: f64,
}

impl TorusRelations {
    pub fn max_residual(&self) -> f64 {
        [
            self.commuting_pairs,
            self.x1_x3,
            self.x2_x4,
            self.x1_x4,
            self.x2_x3,
            self.sum_of_squares,
            self.weyl,
            self.unitarity,
            self.reconstruction,
            self.hermiticity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeRelations {
    /// Residuals of the four reordering rules, in the order
    /// `X^3 X^1`, `X^4 X^2`, `X^4 X^1`, `X^3 X^2`.
    pub rules: [f64; 4],
    /// `VU - qUV` with `VU` expanded and reordered by the four rules.
    pub implied_weyl: f64,
    /// `|q^2 (1 - qbar^2)^2 - (q^2 + qbar^2 - 2)|` and the conjugate identity.
    pub q_polynomial: f64,
}

impl ExchangeRelations {
    pub fn max_residual(&self) -> f64 {
        self.rules
            .into_iter()
            .chain([self.implied_weyl, self.q_polynomial])
            .fold(0.0, f64::max)
    }
}

/// Curvature components grouped by the index classes that vanish structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport {
    /// Max over all `m^4` components.
    pub max_component: f64,
    /// `(class label, max over the class)`.
    pub classes: Vec<(&'static str, f64)>,
    /// `maxAbsEntry` of the scalar curvature.
    pub scalar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentBasisResiduals {
    /// `D(E_1) - E_1` and `D(E_2) - E_2`.
    pub fixed: f64,
    /// `D(W) - E_1 (2X^1W^2 - 2X^2W^1) - E_2 (2X^3W^4 - 2X^4W^3)`.
    pub spanning: f64,
    /// Recovery of `a, b` from `E_1 a + E_2 b`.
    pub independence: f64,
}

impl TangentBasisResiduals {
    pub fn max_residual(&self) -> f64 {
        self.fixed.max(self.spanning).max(self.independence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalBasisResiduals {
    /// `Pi(N_+) - N_+` and `Pi(N_-) - N_-`.
    pub fixed: f64,
    /// Decomposition of random normal vectors through `a = 2 X^b N^b`,
    /// `b = 2 X^bbar N^bbar`, and through `N_+, N_-`.
    pub decomposition: f64,
    /// `a - 2 sum X^alpha X^alpha a` and its barred analogue.
    pub freeness: f64,
    /// Pairwise metric among `E_1, E_2, N_+, N_-`.
    pub orthogonality: f64,
    /// `W - (E_1 a + E_2 b + N_+ c + N_- d)` with coefficients from the basis formulas.
    pub full_reconstruction: f64,
}

impl NormalBasisResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.fixed,
            self.decomposition,
            self.freeness,
            self.orthogonality,
            self.full_reconstruction,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct NCTorus {
    n: usize,
    k: usize,
    theta: f64,
    q: Complex64,
    hbar: f64,
    u: AlgebraElement,
    v: AlgebraElement,
    geometry: NCGeometry,
}

impl NCTorus {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_tolerance(n, k, ToleranceSpec::default())
    }

    /// Requires `N >= 3` and `0 < 2k < N`.
    pub fn with_tolerance(n: usize, k: usize, tol: ToleranceSpec) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDimension { n, min: 3 });
        }
        if k == 0 {
            return Err(Error::UnsupportedTorus {
                n,
                k,
                reason: "k = 0 gives hbar = 0 and the derivations are undefined",
            });
        }
        if 2 * k == n {
            return Err(Error::UnsupportedTorus {
                n,
                k,
                reason: "theta = pi/2 is a pole of hbar = tan(theta)",
            });
        }
        if 2 * k > n {
            return Err(Error::UnsupportedTorus {
                n,
                k,
                reason: "theta must lie in (0, pi/2), i.e. 0 < 2k < N",
            });
        }
        let theta = PI * k as f64 / n as f64;
        let q = Complex64::from_polar(1.0, 2.0 * theta);
        let hbar = theta.tan();
        let clock: Vec<Complex64> = (0..n)
            .map(|a| Complex64::from_polar(1.0, 2.0 * theta * a as f64))
            .collect();
        let u = AlgebraElement::diagonal(&clock);
        let v = AlgebraElement::from_fn(n, |r, c| {
            if r == (c + n - 1) % n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let s = 1.0 / (2.0 * SQRT_2);
        let (us, vs) = (u.adjoint(), v.adjoint());
        let x = vec![
            (&us + &u).scale_real(s),
            (&us - &u).scale(I * s),
            (&vs + &v).scale_real(s),
            (&vs - &v).scale(I * s),
        ];
        let pi = ModuleOperator::from_fn(4, |i, j| {
            if same_group(i, j) {
                (&x[i] * &x[j]).scale_real(2.0)
            } else {
                AlgebraElement::zeros(n)
            }
        });
        let geometry = NCGeometry::new(x, hbar, pi, tol)?;
        Ok(Self {
            n,
            k,
            theta,
            q,
            hbar,
            u,
            v,
            geometry,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn clock(&self) -> &AlgebraElement {
        &self.u
    }

    pub fn shift(&self) -> &AlgebraElement {
        &self.v
    }

    pub fn geometry(&self) -> &NCGeometry {
        &self.geometry
    }

    fn x(&self, i: usize) -> &AlgebraElement {
        self.geometry.generator(i)
    }

    fn xx(&self, i: usize, j: usize) -> AlgebraElement {
        self.x(i) * self.x(j)
    }

    pub fn normal_projector(&self) -> &ModuleOperator {
        self.geometry.normal_projector()
    }

    pub fn tangent_projector(&self) -> &ModuleOperator {
        self.geometry.tangent_projector()
    }

    pub fn relation_residuals(&self) -> TorusRelations {
        let ih = I * self.hbar;
        let comm = |i: usize, j: usize| self.x(i).commutator(self.x(j)).expect("equal dims");
        let anti = |i: usize, j: usize| self.x(i).anticommutator(self.x(j)).expect("equal dims");
        let half = AlgebraElement::scalar(self.n, Complex64::new(0.5, 0.0));
        let id = AlgebraElement::identity(self.n);
        let sq12 = &self.xx(0, 0) + &self.xx(1, 1);
        let sq34 = &self.xx(2, 2) + &self.xx(3, 3);
        let weyl = (&self.v * &self.u).distance(&(&self.u * &self.v).scale(self.q));
        let unitarity = (&self.u * &self.u.adjoint())
            .distance(&id)
            .max((&self.v * &self.v.adjoint()).distance(&id));
        let u_rebuilt = (self.x(0) + &self.x(1).scale(I)).scale_real(SQRT_2);
        let v_rebuilt = (self.x(2) + &self.x(3).scale(I)).scale_real(SQRT_2);
        TorusRelations {
            commuting_pairs: comm(0, 1).max_abs_entry().max(comm(2, 3).max_abs_entry()),
            x1_x3: comm(0, 2).distance(&anti(1, 3).scale(ih)),
            x2_x4: comm(1, 3).distance(&anti(0, 2).scale(ih)),
            x1_x4: comm(0, 3).distance(&anti(1, 2).scale(-ih)),
            x2_x3: comm(1, 2).distance(&anti(0, 3).scale(-ih)),
            sum_of_squares: sq12.distance(&half).max(sq34.distance(&half)),
            weyl,
            unitarity,
            reconstruction: u_rebuilt.distance(&self.u).max(v_rebuilt.distance(&self.v)),
            hermiticity: (0..4).fold(0.0_f64, |acc, i| acc.max(self.x(i).hermiticity_defect())),
        }
    }

    pub fn exchange_relations(&self) -> ExchangeRelations {
        let c = Complex64::new((2.0 * self.theta).cos(), 0.0);
        let s = Complex64::new((2.0 * self.theta).sin(), 0.0);
        // Right-hand sides of the reordering rules.
        let x3x1 = &self.xx(0, 2).scale(c) - &self.xx(1, 3).scale(I * s);
        let x4x2 = &self.xx(1, 3).scale(c) - &self.xx(0, 2).scale(I * s);
        let x4x1 = &self.xx(0, 3).scale(c) + &self.xx(1, 2).scale(I * s);
        let x3x2 = &self.xx(1, 2).scale(c) + &self.xx(0, 3).scale(I * s);
        let rules = [
            self.xx(2, 0).distance(&x3x1),
            self.xx(3, 1).distance(&x4x2),
            self.xx(3, 0).distance(&x4x1),
            self.xx(2, 1).distance(&x3x2),
        ];
        // VU = 2 (X^3 + i X^4)(X^1 + i X^2), reordered by the rules.
        let vu = (&(&x3x1 + &x3x2.scale(I)) + &(&x4x1.scale(I) - &x4x2)).scale_real(2.0);
        let implied_weyl = vu.distance(&(&self.u * &self.v).scale(self.q));

        let q = self.q;
        let qb = q.conj();
        let one = Complex64::new(1.0, 0.0);
        let target = q * q + qb * qb - 2.0;
        let lhs = q * q * (one - qb * qb).powi(2);
        let rhs = qb * qb * (one - q * q).powi(2);
        ExchangeRelations {
            rules,
            implied_weyl,
            q_polynomial: (lhs - target).norm().max((rhs - target).norm()),
        }
    }

    /// `[X^a, X^b]`, `[X^abar, X^bbar]`, `[X^a, Pi^{bc}]` and `[X^abar, Pi^{bbar cbar}]`.
    pub fn structural_zeros(&self) -> f64 {
        let pi = self.normal_projector();
        let mut worst = 0.0_f64;
        for group in [0usize, 2] {
            for a in group..group + 2 {
                for b in group..group + 2 {
                    worst = worst.max(self.x(a).commutator(self.x(b)).expect("dims").max_abs_entry());
                    for c in group..group + 2 {
                        let z = self.x(a).commutator(pi.block(b, c)).expect("dims");
                        worst = worst.max(z.max_abs_entry());
                    }
                }
            }
        }
        worst
    }

    pub fn flatness(&self) -> FlatnessReport {
        let tensor = self.geometry.curvature_tensor();
        self.flatness_of(&tensor)
    }

    pub fn flatness_of(&self, tensor: &CurvatureTensor) -> FlatnessReport {
        type Class = (&'static str, fn(usize, usize, usize, usize) -> bool);
        let classes: [Class; 7] = [
            ("mixed_pair", |i, j, _, _| (i < 2) != (j < 2)),
            ("unbarred_pair_unbarred_k", |i, j, k, _| i < 2 && j < 2 && k < 2),
            ("unbarred_pair_unbarred_l", |i, j, _, l| i < 2 && j < 2 && l < 2),
            ("barred_pair_barred_k", |i, j, k, _| i >= 2 && j >= 2 && k >= 2),
            ("barred_pair_barred_l", |i, j, _, l| i >= 2 && j >= 2 && l >= 2),
            ("unbarred_pair_barred_kl", |i, j, k, l| {
                i < 2 && j < 2 && k >= 2 && l >= 2
            }),
            ("barred_pair_unbarred_kl", |i, j, k, l| {
                i >= 2 && j >= 2 && k < 2 && l < 2
            }),
        ];
        let mut worst = [0.0_f64; 7];
        let mut max_component = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let r = tensor.get(i, j, k, l).max_abs_entry();
                        max_component = max_component.max(r);
                        for (slot, (_, member)) in worst.iter_mut().zip(&classes) {
                            if member(i, j, k, l) {
                                *slot = slot.max(r);
                            }
                        }
                    }
                }
            }
        }
        FlatnessReport {
            max_component,
            classes: classes.iter().zip(worst).map(|((name, _), w)| (*name, w)).collect(),
            scalar: self.geometry.scalar_curvature_of(tensor).max_abs_entry(),
        }
    }

    /// `E_1 = -e_1 X^2 + e_2 X^1`, `E_2 = -e_3 X^4 + e_4 X^3`.
    pub fn tangent_basis(&self) -> (ModuleVector, ModuleVector) {
        let z = AlgebraElement::zeros(self.n);
        let e1 = vec![-self.x(1), self.x(0).clone(), z.clone(), z.clone()];
        let e2 = vec![z.clone(), z, -self.x(3), self.x(2).clone()];
        (
            ModuleVector::new(e1).expect("equal dims"),
            ModuleVector::new(e2).expect("equal dims"),
        )
    }

    /// `N_+ = e_1 X^1 + e_2 X^2 + e_3 X^3 + e_4 X^4` and `N_-` with the barred signs flipped.
    pub fn normal_basis(&self) -> (ModuleVector, ModuleVector) {
        let plus = (0..4).map(|i| self.x(i).clone()).collect();
        let minus = (0..4)
            .map(|i| if i < 2 { self.x(i).clone() } else { -self.x(i) })
            .collect();
        (
            ModuleVector::new(plus).expect("equal dims"),
            ModuleVector::new(minus).expect("equal dims"),
        )
    }

    /// Coefficients `(2X^1W^2 - 2X^2W^1, 2X^3W^4 - 2X^4W^3)` of `D(W)` in the tangent basis.
    pub fn tangent_coefficients(&self, w: &ModuleVector) -> (AlgebraElement, AlgebraElement) {
        let a = (&(self.x(0) * w.component(1)) - &(self.x(1) * w.component(0))).scale_real(2.0);
        let b = (&(self.x(2) * w.component(3)) - &(self.x(3) * w.component(2))).scale_real(2.0);
        (a, b)
    }

    /// Coefficients `(2X^b W^b, 2X^bbar W^bbar)` of `Pi(W)` in the form
    /// `e_1 X^1 a + e_2 X^2 a + e_3 X^3 b + e_4 X^4 b`.
    pub fn normal_coefficients(&self, w: &ModuleVector) -> (AlgebraElement, AlgebraElement) {
        let a = (&(self.x(0) * w.component(0)) + &(self.x(1) * w.component(1))).scale_real(2.0);
        let b = (&(self.x(2) * w.component(2)) + &(self.x(3) * w.component(3))).scale_real(2.0);
        (a, b)
    }

    fn combine(terms: &[(&ModuleVector, &AlgebraElement)]) -> ModuleVector {
        let mut acc = terms[0].0.right_mul(terms[0].1);
        for (vec, coeff) in &terms[1..] {
            acc = acc.add(&vec.right_mul(coeff));
        }
        acc
    }

    pub fn tangent_basis_checks(&self, trials: usize, seed: u64) -> TangentBasisResiduals {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.tangent_projector();
        let (e1, e2) = self.tangent_basis();
        let fixed = d.apply(&e1).distance(&e1).max(d.apply(&e2).distance(&e2));
        let mut spanning = 0.0_f64;
        let mut independence = 0.0_f64;
        for _ in 0..trials {
            let w = self.geometry.random_vector(&mut rng);
            let (a, b) = self.tangent_coefficients(&w);
            spanning = spanning.max(d.apply(&w).distance(&Self::combine(&[(&e1, &a), (&e2, &b)])));

            let a = AlgebraElement::random_with(&mut rng, self.n, false);
            let b = AlgebraElement::random_with(&mut rng, self.n, false);
            let combo = Self::combine(&[(&e1, &a), (&e2, &b)]);
            let (ra, rb) = self.tangent_coefficients(&combo);
            independence = independence.max(ra.distance(&a)).max(rb.distance(&b));
        }
        TangentBasisResiduals {
            fixed,
            spanning,
            independence,
        }
    }

    pub fn normal_basis_checks(&self, trials: usize, seed: u64) -> NormalBasisResiduals {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = self.normal_projector();
        let (np, nm) = self.normal_basis();
        let (e1, e2) = self.tangent_basis();
        let fixed = pi.apply(&np).distance(&np).max(pi.apply(&nm).distance(&nm));

        let basis = [&e1, &e2, &np, &nm];
        let mut orthogonality = 0.0_f64;
        for (s, x) in basis.iter().enumerate() {
            for y in &basis[s + 1..] {
                let g = self.geometry.metric(x, y).expect("same geometry");
                orthogonality = orthogonality.max(g.max_abs_entry());
            }
        }

        let mut decomposition = 0.0_f64;
        let mut freeness = 0.0_f64;
        let mut full_reconstruction = 0.0_f64;
        for _ in 0..trials {
            let w = self.geometry.random_vector(&mut rng);
            let normal = pi.apply(&w);
            let (a, b) = self.normal_coefficients(&normal);
            let form = ModuleVector::new(vec![self.x(0) * &a, self.x(1) * &a, self.x(2) * &b, self.x(3) * &b])
                .expect("equal dims");
            let c = (&a + &b).scale_real(0.5);
            let d = (&a - &b).scale_real(0.5);
            let via_pm = Self::combine(&[(&np, &c), (&nm, &d)]);
            decomposition = decomposition.max(normal.distance(&form)).max(normal.distance(&via_pm));

            let (ta, tb) = self.tangent_coefficients(&w);
            let rebuilt = Self::combine(&[(&e1, &ta), (&e2, &tb), (&np, &c), (&nm, &d)]);
            full_reconstruction = full_reconstruction.max(w.distance(&rebuilt));

            let r = AlgebraElement::random_with(&mut rng, self.n, false);
            let unbarred = (&(self.x(0) * &(self.x(0) * &r)) + &(self.x(1) * &(self.x(1) * &r))).scale_real(2.0);
            let barred = (&(self.x(2) * &(self.x(2) * &r)) + &(self.x(3) * &(self.x(3) * &r))).scale_real(2.0);
            freeness = freeness.max(unbarred.distance(&r)).max(barred.distance(&r));
        }
        NormalBasisResiduals {
            fixed,
            decomposition,
            freeness,
            orthogonality,
            full_reconstruction,
        }
    }

    /// `max_k |sum_i [X^i, Pi^{ik}]|`, plus the mixed-group blocks of `Pi`
    /// that the argument relies on being exactly zero.
    pub fn closed_trace_commutators(&self) -> (f64, f64) {
        let pi = self.normal_projector();
        let mut sum_residual = 0.0_f64;
        for k in 0..4 {
            let mut acc = AlgebraElement::zeros(self.n);
            for i in 0..4 {
                acc = &acc + &self.x(i).commutator(pi.block(i, k)).expect("dims");
            }
            sum_residual = sum_residual.max(acc.max_abs_entry());
        }
        let mut mixed = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                if !same_group(i, j) {
                    mixed = mixed.max(pi.block(i, j).max_abs_entry());
                }
            }
        }
        (sum_residual, mixed)
    }
}
