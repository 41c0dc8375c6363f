//! Free modules, projectors, connections and curvature over a matrix algebra.
//!
//! A geometry is a choice of hermitian "embedding coordinates" `X^1..X^m`,
//! a deformation parameter `hbar`, and a projector `D` on the free right
//! module `A^m`. The inner derivations `d^i(a) = (1/i hbar)[X^i, a]` play the
//! role of the Poisson vector fields `{x^i, .}`; the connection on the
//! projective module `D(A^m)` is `D` applied to componentwise
//! differentiation.
//!
//! Indices are zero-based throughout. Upper and lower indices are not
//! distinguished since the ambient metric is the identity; all contractions
//! are plain sums. Noncommutative products are evaluated in the written
//! order, and module scalars act from the right.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraElement, ToleranceSpec, I};
use crate::error::{Error, Result};

/// An element `U = e_i U^i` of the free module `A^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    components: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn new(components: Vec<AlgebraElement>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidGeometry(
                "module vector needs at least one component".into(),
            ));
        };
        let dim = first.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        Ok(Self { components })
    }

    pub fn zeros(m: usize, dim: usize) -> Self {
        Self {
            components: (0..m).map(|_| AlgebraElement::zeros(dim)).collect(),
        }
    }

    /// `e_k` times the unit.
    pub fn basis(m: usize, dim: usize, k: usize) -> Self {
        Self {
            components: (0..m)
                .map(|i| {
                    if i == k {
                        AlgebraElement::identity(dim)
                    } else {
                        AlgebraElement::zeros(dim)
                    }
                })
                .collect(),
        }
    }

    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, m: usize, dim: usize) -> Self {
        Self {
            components: (0..m).map(|_| AlgebraElement::random_with(rng, dim, false)).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn component(&self, i: usize) -> &AlgebraElement {
        &self.components[i]
    }

    pub fn components(&self) -> &[AlgebraElement] {
        &self.components
    }

    pub fn into_components(self) -> Vec<AlgebraElement> {
        self.components
    }

    /// Right module action `U a = e_i (U^i a)`.
    pub fn right_mul(&self, a: &AlgebraElement) -> Self {
        self.map(|c| c * a)
    }

    pub fn map(&self, f: impl FnMut(&AlgebraElement) -> AlgebraElement) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        mut f: impl FnMut(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
    ) -> Self {
        assert_eq!(self.m(), other.m(), "module vectors of different rank");
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.components
            .iter()
            .fold(0.0_f64, |acc, c| acc.max(c.max_abs_entry()))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_entry()
    }
}

/// An `m x m` array of algebra elements acting on [`ModuleVector`]s by
/// `(T U)^i = sum_j T^{ij} U^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    m: usize,
    blocks: Vec<AlgebraElement>,
}

impl ModuleOperator {
    /// Builds from row-major blocks.
    pub fn new(m: usize, blocks: Vec<AlgebraElement>) -> Result<Self> {
        if m == 0 || blocks.len() != m * m {
            return Err(Error::InvalidGeometry(format!(
                "expected {} blocks for m = {m}, got {}",
                m * m,
                blocks.len()
            )));
        }
        let dim = blocks[0].dim();
        if let Some(bad) = blocks.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        Ok(Self { m, blocks })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> AlgebraElement) -> Self {
        let mut blocks = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                blocks.push(f(i, j));
            }
        }
        Self::new(m, blocks).expect("blocks of a module operator must share one dimension")
    }

    pub fn identity(m: usize, dim: usize) -> Self {
        Self::from_fn(m, |i, j| {
            if i == j {
                AlgebraElement::identity(dim)
            } else {
                AlgebraElement::zeros(dim)
            }
        })
    }

    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, m: usize, dim: usize) -> Self {
        Self::from_fn(m, |_, _| AlgebraElement::random_with(rng, dim, false))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn block(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.blocks[i * self.m + j]
    }

    pub fn apply(&self, u: &ModuleVector) -> ModuleVector {
        assert_eq!(u.m(), self.m, "operator and vector rank differ");
        ModuleVector {
            components: (0..self.m)
                .map(|i| {
                    let mut acc = self.block(i, 0) * u.component(0);
                    for j in 1..self.m {
                        acc = &acc + &(self.block(i, j) * u.component(j));
                    }
                    acc
                })
                .collect(),
        }
    }

    /// `(self o other)^{ij} = sum_k self^{ik} other^{kj}`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "operators of different rank");
        Self::from_fn(self.m, |i, j| {
            let mut acc = self.block(i, 0) * other.block(0, j);
            for k in 1..self.m {
                acc = &acc + &(self.block(i, k) * other.block(k, j));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.m, |i, j| self.block(i, j) + other.block(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.m, |i, j| self.block(i, j) - other.block(i, j))
    }

    /// `sum_i T^{ii}`, the algebra-valued trace defining the module rank.
    pub fn block_trace(&self) -> AlgebraElement {
        let mut acc = self.block(0, 0).clone();
        for i in 1..self.m {
            acc = &acc + self.block(i, i);
        }
        acc
    }

    /// `max_{ij} maxAbsEntry((T^{ij})* - T^{ji})`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.m {
            for j in 0..self.m {
                worst = worst.max(self.block(i, j).adjoint().distance(self.block(j, i)));
            }
        }
        worst
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().fold(0.0_f64, |acc, b| acc.max(b.max_abs_entry()))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_entry()
    }
}

/// The components `R^{ijkl}` of the curvature homomorphism, so that
/// `R^{ij}(U) = e_k R^{ijkl} U^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    m: usize,
    components: Vec<AlgebraElement>,
}

impl CurvatureTensor {
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize, usize, usize) -> AlgebraElement) -> Self {
        let mut components = Vec::with_capacity(m.pow(4));
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        components.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { m, components }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &AlgebraElement {
        let m = self.m;
        &self.components[((i * m + j) * m + k) * m + l]
    }

    pub fn iter(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.components.iter()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.components
            .iter()
            .fold(0.0_f64, |acc, c| acc.max(c.max_abs_entry()))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.m, other.m);
        self.components
            .iter()
            .zip(&other.components)
            .fold(0.0_f64, |acc, (a, b)| acc.max(a.distance(b)))
    }

    /// `max maxAbsEntry(R^{ijkl} + R^{jikl})`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let s = self.get(i, j, k, l) + self.get(j, i, k, l);
                        worst = worst.max(s.max_abs_entry());
                    }
                }
            }
        }
        worst
    }

    /// `e_k sum_l R^{ijkl} U^l`.
    pub fn contract(&self, i: usize, j: usize, u: &ModuleVector) -> ModuleVector {
        let m = self.m;
        ModuleVector {
            components: (0..m)
                .map(|k| {
                    let mut acc = self.get(i, j, k, 0) * u.component(0);
                    for l in 1..m {
                        acc = &acc + &(self.get(i, j, k, l) * u.component(l));
                    }
                    acc
                })
                .collect(),
        }
    }
}

/// Which connection a metric-compatibility check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    /// Componentwise differentiation on the free module.
    Ambient,
    /// Its projection onto the tangent module.
    Tangent,
}

/// Residuals of the projector identities for one operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorResiduals {
    /// `|T o T - T|`.
    pub idempotence: f64,
    /// `max |(T^{ij})* - T^{ji}|`.
    pub symmetry: f64,
    /// `|T + partner - 1|`, when a partner was supplied.
    pub complementarity: Option<f64>,
    /// `|T o partner|` and `|partner o T|`, when a partner was supplied.
    pub orthogonality: Option<f64>,
    /// `maxAbsEntry(T)`, the natural scale for relative tolerances.
    pub scale: f64,
}

impl ProjectorResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.idempotence,
            self.symmetry,
            self.complementarity.unwrap_or(0.0),
            self.orthogonality.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Hermitian generators, deformation parameter and tangent projector.
#[derive(Debug, Clone)]
pub struct NCGeometry {
    dim: usize,
    hbar: f64,
    x: Vec<AlgebraElement>,
    d: ModuleOperator,
    pi: ModuleOperator,
    tol: ToleranceSpec,
}

impl NCGeometry {
    /// Builds a geometry from generators and the normal projector `Pi`;
    /// the tangent projector is `D = 1 - Pi`.
    ///
    /// Hermiticity of the generators, idempotence and symmetry of `Pi` are
    /// verified against `tol`.
    pub fn new(x: Vec<AlgebraElement>, hbar: f64, pi: ModuleOperator, tol: ToleranceSpec) -> Result<Self> {
        let m = x.len();
        if m == 0 {
            return Err(Error::InvalidGeometry("no generators".into()));
        }
        if !hbar.is_finite() || hbar == 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "hbar must be finite and nonzero, got {hbar}"
            )));
        }
        let dim = x[0].dim();
        if let Some(bad) = x.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        for (i, g) in x.iter().enumerate() {
            let defect = g.hermiticity_defect();
            if !tol.accepts(defect, g.max_abs_entry()) {
                return Err(Error::InvalidGeometry(format!(
                    "generator {i} is not hermitian (defect {defect:e})"
                )));
            }
        }
        if pi.m() != m || pi.dim() != dim {
            return Err(Error::GeometryMismatch {
                expected_m: m,
                expected_dim: dim,
                found_m: pi.m(),
                found_dim: pi.dim(),
            });
        }
        let d = ModuleOperator::identity(m, dim).sub(&pi);
        let geometry = Self {
            dim,
            hbar,
            x,
            d,
            pi,
            tol,
        };
        let report = geometry.projector_checks(&geometry.pi, Some(&geometry.d));
        if !tol.accepts(report.max_residual(), report.scale.max(1.0)) {
            return Err(Error::InvalidGeometry(format!(
                "normal projector fails its identities (residual {:e})",
                report.max_residual()
            )));
        }
        Ok(geometry)
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.x
    }

    pub fn generator(&self, i: usize) -> &AlgebraElement {
        &self.x[i]
    }

    pub fn tangent_projector(&self) -> &ModuleOperator {
        &self.d
    }

    pub fn normal_projector(&self) -> &ModuleOperator {
        &self.pi
    }

    pub fn tolerance(&self) -> ToleranceSpec {
        self.tol
    }

    pub fn with_tolerance(mut self, tol: ToleranceSpec) -> Self {
        self.tol = tol;
        self
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.m() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, m: self.m() })
        }
    }

    fn check_element(&self, a: &AlgebraElement) -> Result<()> {
        if a.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: a.dim(),
            })
        }
    }

    fn check_vector(&self, u: &ModuleVector) -> Result<()> {
        if u.m() == self.m() && u.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::GeometryMismatch {
                expected_m: self.m(),
                expected_dim: self.dim,
                found_m: u.m(),
                found_dim: u.dim(),
            })
        }
    }

    fn check_operator(&self, t: &ModuleOperator) -> Result<()> {
        if t.m() == self.m() && t.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::GeometryMismatch {
                expected_m: self.m(),
                expected_dim: self.dim,
                found_m: t.m(),
                found_dim: t.dim(),
            })
        }
    }

    /// `maxAbsEntry(D(U) - U)`.
    pub fn tangency_defect(&self, u: &ModuleVector) -> Result<f64> {
        self.check_vector(u)?;
        Ok(self.d.apply(u).distance(u))
    }

    /// Errors with [`Error::NotTangent`] unless `D(U) = U` within tolerance.
    pub fn check_tangent(&self, u: &ModuleVector) -> Result<()> {
        let residual = self.tangency_defect(u)?;
        let bound = self.tol.bound(u.max_abs_entry());
        if residual <= bound {
            Ok(())
        } else {
            Err(Error::NotTangent { residual, bound })
        }
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> ModuleVector {
        ModuleVector::random_with(rng, self.m(), self.dim)
    }

    /// `D` applied to a random vector; tangent by construction.
    pub fn random_tangent<R: Rng + ?Sized>(&self, rng: &mut R) -> ModuleVector {
        self.d.apply(&self.random_vector(rng))
    }

    /// `<U, V> = sum_i (U^i)* V^i`.
    pub fn metric(&self, u: &ModuleVector, v: &ModuleVector) -> Result<AlgebraElement> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(metric_unchecked(u, v))
    }

    /// The inner derivation `a -> (1/i hbar)[b, a]`.
    pub fn inner_derivation(&self, b: &AlgebraElement, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(b)?;
        self.check_element(a)?;
        Ok(self.inner_derivation_unchecked(b, a))
    }

    fn inner_derivation_unchecked(&self, b: &AlgebraElement, a: &AlgebraElement) -> AlgebraElement {
        let factor = Complex64::new(1.0, 0.0) / (I * self.hbar);
        (&(b * a) - &(a * b)).scale(factor)
    }

    /// `d^i(a) = (1/i hbar)[X^i, a]`.
    pub fn derivation(&self, i: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_index(i)?;
        self.inner_derivation(&self.x[i], a)
    }

    fn derivation_unchecked(&self, i: usize, a: &AlgebraElement) -> AlgebraElement {
        self.inner_derivation_unchecked(&self.x[i], a)
    }

    /// `[d^i, d^j](a) = d^i d^j a - d^j d^i a`, computed by composing derivations.
    pub fn derivation_commutator(&self, i: usize, j: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_element(a)?;
        let ij = self.derivation_unchecked(i, &self.derivation_unchecked(j, a));
        let ji = self.derivation_unchecked(j, &self.derivation_unchecked(i, a));
        Ok(&ij - &ji)
    }

    /// The bracket operator `P^{ij} = (1/i hbar)[X^i, X^j]`.
    pub fn poisson_operator(&self) -> ModuleOperator {
        ModuleOperator::from_fn(self.m(), |i, j| self.derivation_unchecked(i, &self.x[j]))
    }

    /// Ambient connection along the inner derivation by `b`: `e_k (1/i hbar)[b, U^k]`.
    pub fn ambient_connection_along(&self, b: &AlgebraElement, u: &ModuleVector) -> Result<ModuleVector> {
        self.check_element(b)?;
        self.check_vector(u)?;
        Ok(u.map(|c| self.inner_derivation_unchecked(b, c)))
    }

    /// `e_k d^i(U^k)`.
    pub fn ambient_connection(&self, i: usize, u: &ModuleVector) -> Result<ModuleVector> {
        self.check_index(i)?;
        self.ambient_connection_along(&self.x[i], u)
    }

    /// `D(e_k (1/i hbar)[b, U^k])`. No tangency requirement on `U`.
    pub fn inner_connection(&self, b: &AlgebraElement, u: &ModuleVector) -> Result<ModuleVector> {
        Ok(self.d.apply(&self.ambient_connection_along(b, u)?))
    }

    fn tangent_connection_unchecked(&self, i: usize, u: &ModuleVector) -> ModuleVector {
        self.d.apply(&u.map(|c| self.derivation_unchecked(i, c)))
    }

    /// `nabla^i U = D(e_k d^i(U^k))` for tangent `U`.
    pub fn tangent_connection(&self, i: usize, u: &ModuleVector) -> Result<ModuleVector> {
        self.check_index(i)?;
        self.check_tangent(u)?;
        Ok(self.tangent_connection_unchecked(i, u))
    }

    /// `R^{ij}(U) = nabla^i nabla^j U - nabla^j nabla^i U - nabla_{[d^i, d^j]} U`,
    /// where the commutator of derivations is the inner derivation by `P^{ij}`.
    pub fn curvature_operator(&self, i: usize, j: usize, u: &ModuleVector) -> Result<ModuleVector> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_tangent(u)?;
        let nabla_j = self.tangent_connection_unchecked(j, u);
        let nabla_i = self.tangent_connection_unchecked(i, u);
        let ij = self.tangent_connection_unchecked(i, &nabla_j);
        let ji = self.tangent_connection_unchecked(j, &nabla_i);
        let p_ij = self.derivation_unchecked(i, &self.x[j]);
        let bracket_term = self.d.apply(&u.map(|c| self.inner_derivation_unchecked(&p_ij, c)));
        Ok(ij.sub(&ji).sub(&bracket_term))
    }

    /// `d^i(D^{kl})` for all `i, k, l`, indexed `[i][k * m + l]`.
    fn projector_derivatives(&self) -> Vec<Vec<AlgebraElement>> {
        let m = self.m();
        (0..m)
            .map(|i| {
                (0..m * m)
                    .map(|kl| self.derivation_unchecked(i, self.d.block(kl / m, kl % m)))
                    .collect()
            })
            .collect()
    }

    /// `R^{ijkl} = sum_n d^i(D^{kn}) d^j(D^{nl}) - d^j(D^{kn}) d^i(D^{nl})`.
    pub fn curvature_tensor(&self) -> CurvatureTensor {
        let m = self.m();
        let dd = self.projector_derivatives();
        CurvatureTensor::from_fn(m, |i, j, k, l| {
            let mut acc = AlgebraElement::zeros(self.dim);
            for n in 0..m {
                acc = &acc + &(&dd[i][k * m + n] * &dd[j][n * m + l]);
                acc = &acc - &(&dd[j][k * m + n] * &dd[i][n * m + l]);
            }
            acc
        })
    }

    /// `S = sum P^{jl} P^{ik} R^{ijkl}` with the factors multiplied in that order.
    pub fn scalar_curvature_of(&self, tensor: &CurvatureTensor) -> AlgebraElement {
        let m = self.m();
        let p = self.poisson_operator();
        let mut acc = AlgebraElement::zeros(self.dim);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let term = &(p.block(j, l) * p.block(i, k)) * tensor.get(i, j, k, l);
                        acc = &acc + &term;
                    }
                }
            }
        }
        acc
    }

    pub fn scalar_curvature(&self) -> AlgebraElement {
        self.scalar_curvature_of(&self.curvature_tensor())
    }

    /// `sum_{i,k} P^{ik} R^{ijkl}` for fixed `j, l`.
    pub fn partial_contraction(&self, tensor: &CurvatureTensor, j: usize, l: usize) -> AlgebraElement {
        let m = self.m();
        let p = self.poisson_operator();
        let mut acc = AlgebraElement::zeros(self.dim);
        for i in 0..m {
            for k in 0..m {
                acc = &acc + &(p.block(i, k) * tensor.get(i, j, k, l));
            }
        }
        acc
    }

    /// `div(U) = sum_{i,k} D^{ik} d^i(U^k)` for tangent `U`.
    pub fn divergence(&self, u: &ModuleVector) -> Result<AlgebraElement> {
        self.check_tangent(u)?;
        let m = self.m();
        let mut acc = AlgebraElement::zeros(self.dim);
        for i in 0..m {
            for k in 0..m {
                acc = &acc + &(self.d.block(i, k) * &self.derivation_unchecked(i, u.component(k)));
            }
        }
        Ok(acc)
    }

    /// `phi(sum_{i,k} [X^i, Pi^{ik}] U^k)` with `phi` the normalized trace.
    ///
    /// Equals `i hbar phi(div U)` whenever `phi` is a trace.
    pub fn closedness_defect(&self, u: &ModuleVector) -> Result<Complex64> {
        self.check_tangent(u)?;
        let m = self.m();
        let mut acc = AlgebraElement::zeros(self.dim);
        for i in 0..m {
            for k in 0..m {
                let c = self.x[i].commutator(self.pi.block(i, k))?;
                acc = &acc + &(&c * u.component(k));
            }
        }
        Ok(acc.normalized_trace())
    }

    /// Idempotence and symmetry residuals of `t`, plus complementarity and
    /// mutual orthogonality against `partner` when given.
    pub fn projector_checks(&self, t: &ModuleOperator, partner: Option<&ModuleOperator>) -> ProjectorResiduals {
        let idempotence = t.compose(t).distance(t);
        let symmetry = t.symmetry_defect();
        let (complementarity, orthogonality) = match partner {
            Some(p) => {
                let id = ModuleOperator::identity(t.m(), t.dim());
                let zero = ModuleOperator::from_fn(t.m(), |_, _| AlgebraElement::zeros(t.dim()));
                let orth = t.compose(p).distance(&zero).max(p.compose(t).distance(&zero));
                (Some(t.add(p).distance(&id)), Some(orth))
            }
            None => (None, None),
        };
        ProjectorResiduals {
            idempotence,
            symmetry,
            complementarity,
            orthogonality,
            scale: t.max_abs_entry(),
        }
    }

    /// `sum_i T^{ii}` for a projector `T`.
    pub fn module_rank(&self, t: &ModuleOperator) -> Result<AlgebraElement> {
        self.check_operator(t)?;
        let residual = t.compose(t).distance(t);
        let bound = self.tol.bound(t.max_abs_entry());
        if residual > bound {
            return Err(Error::NotAProjector { residual, bound });
        }
        Ok(t.block_trace())
    }

    /// `d^i<U,V> - <nabla^i U, V> - <U, nabla^i V>` for the chosen connection.
    pub fn metric_compatibility_defect(
        &self,
        i: usize,
        u: &ModuleVector,
        v: &ModuleVector,
        kind: ConnectionKind,
    ) -> Result<AlgebraElement> {
        self.check_index(i)?;
        self.check_vector(u)?;
        self.check_vector(v)?;
        let (nu, nv) = match kind {
            ConnectionKind::Ambient => (self.ambient_connection(i, u)?, self.ambient_connection(i, v)?),
            ConnectionKind::Tangent => (self.tangent_connection(i, u)?, self.tangent_connection(i, v)?),
        };
        let lhs = self.derivation_unchecked(i, &metric_unchecked(u, v));
        Ok(&(&lhs - &metric_unchecked(&nu, v)) - &metric_unchecked(u, &nv))
    }

    /// All `R^{ij}(U)` for a tangent `U`, indexed `[i * m + j]`. Shares the
    /// first covariant derivatives between index pairs.
    pub fn curvature_operators(&self, u: &ModuleVector) -> Result<Vec<ModuleVector>> {
        self.check_tangent(u)?;
        let m = self.m();
        let first: Vec<_> = (0..m).map(|i| self.tangent_connection_unchecked(i, u)).collect();
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    out.push(ModuleVector::zeros(m, self.dim));
                    continue;
                }
                let ij = self.tangent_connection_unchecked(i, &first[j]);
                let ji = self.tangent_connection_unchecked(j, &first[i]);
                let p_ij = self.derivation_unchecked(i, &self.x[j]);
                let bracket_term = self.d.apply(&u.map(|c| self.inner_derivation_unchecked(&p_ij, c)));
                out.push(ij.sub(&ji).sub(&bracket_term));
            }
        }
        Ok(out)
    }

    /// Max residual of the four affine-connection axioms for the chosen
    /// connection, along `d^i` and `d^j`:
    /// additivity in `U`, `nabla_{c d} = c nabla_d`,
    /// `nabla_{d + d'} = nabla_d + nabla_{d'}`, and the Leibniz rule
    /// `nabla(U a) = (nabla U) a + U d(a)`.
    ///
    /// Real multiples and sums of inner derivations are the inner
    /// derivations by `c X^i` and `X^i + X^j`. For the tangent connection
    /// `U` and `V` must be tangent.
    #[allow(clippy::too_many_arguments)]
    pub fn affine_connection_defect(
        &self,
        kind: ConnectionKind,
        i: usize,
        j: usize,
        u: &ModuleVector,
        v: &ModuleVector,
        a: &AlgebraElement,
        c: f64,
    ) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_vector(u)?;
        self.check_vector(v)?;
        self.check_element(a)?;
        if kind == ConnectionKind::Tangent {
            self.check_tangent(u)?;
            self.check_tangent(v)?;
        }
        let along = |b: &AlgebraElement, w: &ModuleVector| {
            let raw = w.map(|comp| self.inner_derivation_unchecked(b, comp));
            match kind {
                ConnectionKind::Ambient => raw,
                ConnectionKind::Tangent => self.d.apply(&raw),
            }
        };
        let xi = &self.x[i];
        let xj = &self.x[j];
        let additivity = along(xi, &u.add(v)).distance(&along(xi, u).add(&along(xi, v)));
        let scaling = along(&xi.scale_real(c), u).distance(&along(xi, u).map(|w| w.scale_real(c)));
        let sum = along(&(xi + xj), u).distance(&along(xi, u).add(&along(xj, u)));
        let leibniz_rhs = along(xi, u)
            .right_mul(a)
            .add(&u.map(|w| w * &self.inner_derivation_unchecked(xi, a)));
        let leibniz = along(xi, &u.right_mul(a)).distance(&leibniz_rhs);
        Ok(additivity.max(scaling).max(sum).max(leibniz))
    }

    /// Replays the cancellation
    /// `e_k D^{kl} d^i(D^{ln}) d^j(U^n) = e_k d^i(D^{kl}) d^j(D^{ln}) U^n`
    /// for tangent `U`, returning `maxAbsEntry` of the difference.
    pub fn leibniz_cancellation_residual(&self, i: usize, j: usize, u: &ModuleVector) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_tangent(u)?;
        let m = self.m();
        let dd = self.projector_derivatives();
        let dj_u: Vec<_> = u.components().iter().map(|c| self.derivation_unchecked(j, c)).collect();
        let mut worst = 0.0_f64;
        for k in 0..m {
            let mut lhs = AlgebraElement::zeros(self.dim);
            let mut rhs = AlgebraElement::zeros(self.dim);
            for l in 0..m {
                for n in 0..m {
                    lhs = &lhs + &(&(self.d.block(k, l) * &dd[i][l * m + n]) * &dj_u[n]);
                    rhs = &rhs + &(&(&dd[i][k * m + l] * &dd[j][l * m + n]) * u.component(n));
                }
            }
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(worst)
    }
}

fn metric_unchecked(u: &ModuleVector, v: &ModuleVector) -> AlgebraElement {
    let mut acc = &u.component(0).adjoint() * v.component(0);
    for i in 1..u.m() {
        acc = &acc + &(&u.component(i).adjoint() * v.component(i));
    }
    acc
}
