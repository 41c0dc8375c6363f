//! Verification suites assembling [`CheckResult`]s for each geometry.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, ToleranceSpec, I};
use crate::calculus::{ConnectionKind, NCGeometry};
use crate::classical::{
    classical_curvature, classical_projector, sample_point, sphere_bracket_residual, sphere_curvature_closed_form,
    sphere_projector_closed_form, torus_bracket_closed_form, torus_projector_closed_form, DerivativeMode, Surface,
};
use crate::error::{Error, Result};
use crate::report::{Anchor, CheckResult, ParamValue, Params, SuiteReport};
use crate::sphere::{scalar_curvature_value, sphere_hbar, FuzzySphere};
use crate::torus::NCTorus;

/// Number of sample points for classical curvature checks.
pub const CLASSICAL_CURVATURE_SAMPLES: usize = 20;
/// Classical tolerance for the sphere's scalar curvature under finite differences.
pub const FD_SPHERE_TOLERANCE: f64 = 1e-4;
/// Classical tolerance for torus flatness under finite differences.
pub const FD_TORUS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    /// Judges the reported residuals. Geometries themselves are validated
    /// at construction with the default tolerance.
    pub tol: ToleranceSpec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 42,
            tol: ToleranceSpec::default(),
        }
    }
}

/// Independent stream per check, so results do not depend on check order.
fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn params(entries: &[(&str, ParamValue)]) -> Params {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn finish(mut report: SuiteReport, start: Instant) -> SuiteReport {
    report.sort_checks();
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

/// Closed-trace anchor and projector anchor differ per geometry.
struct Anchors {
    projectors: Anchor,
    rank: Anchor,
    closed_trace: Anchor,
}

/// Generic calculus checks shared by both noncommutative geometries.
fn calculus_checks(
    g: &NCGeometry,
    opts: &SuiteOptions,
    anchors: &Anchors,
    expected_ranks: (f64, f64),
) -> Vec<CheckResult> {
    let tol = opts.tol;
    let bound = tol.bound(1.0);
    let m = g.m();
    let dim = g.dim();
    let trials = opts.trials;
    let mut out = Vec::new();

    let d = g.tangent_projector();
    let pi = g.normal_projector();
    let dr = g.projector_checks(d, Some(pi));
    let pr = g.projector_checks(pi, Some(d));
    out.push(
        CheckResult::new(
            "tangent_projector",
            anchors.projectors,
            dr.max_residual(),
            tol.bound(dr.scale),
        )
        .with_param("idempotence", dr.idempotence)
        .with_param("symmetry", dr.symmetry),
    );
    out.push(
        CheckResult::new(
            "normal_projector",
            anchors.projectors,
            pr.max_residual(),
            tol.bound(pr.scale),
        )
        .with_param("idempotence", pr.idempotence)
        .with_param("symmetry", pr.symmetry),
    );
    for (name, t, expected) in [
        ("rank_tangent", d, expected_ranks.0),
        ("rank_normal", pi, expected_ranks.1),
    ] {
        let residual = match g.module_rank(t) {
            Ok(r) => r.distance(&AlgebraElement::scalar(dim, Complex64::new(expected, 0.0))),
            Err(_) => f64::INFINITY,
        };
        out.push(CheckResult::new(name, anchors.rank, residual, tol.bound(expected)).with_param("rank", expected));
    }

    let mut rng = stream(opts.seed, 1);
    let mut star = 0.0_f64;
    let mut jacobi = 0.0_f64;
    let p = g.poisson_operator();
    for _ in 0..trials {
        let a = AlgebraElement::random_with(&mut rng, dim, false);
        for i in 0..m {
            let lhs = g.derivation(i, &a).expect("dims").adjoint();
            let rhs = g.derivation(i, &a.adjoint()).expect("dims");
            star = star.max(lhs.distance(&rhs));
            for j in 0..m {
                let comm = g.derivation_commutator(i, j, &a).expect("dims");
                let inner = g.inner_derivation(p.block(i, j), &a).expect("dims");
                jacobi = jacobi.max(comm.distance(&inner));
            }
        }
    }
    out.push(CheckResult::new("star_derivation", Anchor::StarDerivation, star, bound).with_param("trials", trials));
    out.push(
        CheckResult::new("derivation_bracket", Anchor::CurvatureFormula, jacobi, bound).with_param("trials", trials),
    );

    let mut rng = stream(opts.seed, 2);
    let mut affine = [0.0_f64; 2];
    let mut metric = [0.0_f64; 2];
    for _ in 0..trials {
        let u = g.random_tangent(&mut rng);
        let v = g.random_tangent(&mut rng);
        let a = AlgebraElement::random_with(&mut rng, dim, false);
        let c: f64 = rng.gen_range(-2.0..2.0);
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        for (slot, kind) in [ConnectionKind::Ambient, ConnectionKind::Tangent]
            .into_iter()
            .enumerate()
        {
            let defect = g
                .affine_connection_defect(kind, i, j, &u, &v, &a, c)
                .unwrap_or(f64::INFINITY);
            affine[slot] = affine[slot].max(defect);
            let mc = g
                .metric_compatibility_defect(i, &u, &v, kind)
                .map(|e| e.max_abs_entry())
                .unwrap_or(f64::INFINITY);
            metric[slot] = metric[slot].max(mc);
        }
    }
    for (slot, label) in ["ambient", "tangent"].into_iter().enumerate() {
        out.push(
            CheckResult::new(
                format!("affine_connection_{label}"),
                Anchor::AffineConnection,
                affine[slot],
                bound,
            )
            .with_param("trials", trials),
        );
        out.push(
            CheckResult::new(
                format!("metric_compatibility_{label}"),
                Anchor::MetricConnection,
                metric[slot],
                bound,
            )
            .with_param("trials", trials),
        );
    }

    let tensor = g.curvature_tensor();
    out.push(CheckResult::new(
        "curvature_antisymmetry",
        Anchor::CurvatureFormula,
        tensor.antisymmetry_defect(),
        tol.bound(tensor.max_abs_entry()),
    ));

    let mut rng = stream(opts.seed, 3);
    let mut agreement = 0.0_f64;
    let mut cancellation = 0.0_f64;
    for _ in 0..trials {
        let u = g.random_tangent(&mut rng);
        match g.curvature_operators(&u) {
            Ok(ops) => {
                for i in 0..m {
                    for j in 0..m {
                        agreement = agreement.max(ops[i * m + j].distance(&tensor.contract(i, j, &u)));
                    }
                }
            }
            Err(_) => agreement = f64::INFINITY,
        }
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        cancellation = cancellation.max(g.leibniz_cancellation_residual(i, j, &u).unwrap_or(f64::INFINITY));
    }
    out.push(
        CheckResult::new(
            "curvature_operator_vs_tensor",
            Anchor::CurvatureFormula,
            agreement,
            bound,
        )
        .with_param("trials", trials),
    );
    out.push(
        CheckResult::new("leibniz_cancellation", Anchor::CurvatureFormula, cancellation, bound)
            .with_param("trials", trials),
    );

    let mut rng = stream(opts.seed, 4);
    let mut trace = 0.0_f64;
    let mut equivalence = 0.0_f64;
    let ih = I * g.hbar();
    for _ in 0..trials {
        let u = g.random_tangent(&mut rng);
        let (div, defect) = match (g.divergence(&u), g.closedness_defect(&u)) {
            (Ok(div), Ok(defect)) => (div.normalized_trace(), defect),
            _ => (Complex64::new(f64::INFINITY, 0.0), Complex64::new(f64::INFINITY, 0.0)),
        };
        trace = trace.max(div.norm());
        equivalence = equivalence.max((defect - ih * div).norm());
    }
    out.push(CheckResult::new("closed_trace", anchors.closed_trace, trace, bound).with_param("trials", trials));
    out.push(
        CheckResult::new("closedness_equivalence", Anchor::ClosedTraceLemma, equivalence, bound)
            .with_param("trials", trials),
    );
    out
}

/// Relation, projector, curvature, trace and normal-module checks for the
/// fuzzy sphere of dimension `n`.
pub fn sphere_suite(n: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let fs = FuzzySphere::new(n)?;
    let hbar = fs.hbar();
    let tol = opts.tol;
    let bound = tol.bound(1.0);
    let mut report = SuiteReport::new("sphere", params(&[("N", n.into()), ("hbar", hbar.into())]), opts.seed);
    let checks = &mut report.checks;

    let rel = fs.relation_residuals();
    checks.push(CheckResult::new(
        "commutation_relations",
        Anchor::SphereRelations,
        rel.commutator,
        bound,
    ));
    checks.push(CheckResult::new(
        "unit_sphere_relation",
        Anchor::SphereRelations,
        rel.unit_sphere,
        bound,
    ));
    checks.push(CheckResult::new(
        "generator_hermiticity",
        Anchor::SphereRelations,
        rel.hermiticity,
        bound,
    ));

    let eps = fs.epsilon_identities();
    let integer_defect = (eps.epsilon_delta.abs() + eps.epsilon_trace.abs()) as f64;
    checks.push(
        CheckResult::new(
            "epsilon_identities",
            Anchor::SphereEpsilonIdentities,
            eps.double_contraction.max(eps.triple_contraction).max(integer_defect),
            bound,
        )
        .with_param("double_contraction", eps.double_contraction)
        .with_param("triple_contraction", eps.triple_contraction),
    );

    let d_alt = fs.tangent_projector_from_commutators();
    checks.push(CheckResult::new(
        "tangent_projector_commutator_form",
        Anchor::SphereProjectors,
        d_alt.distance(fs.tangent_projector()),
        bound,
    ));

    let g = fs.geometry();
    let anchors = Anchors {
        projectors: Anchor::SphereProjectors,
        rank: Anchor::SphereModuleRank,
        closed_trace: Anchor::SphereClosedTrace,
    };
    checks.extend(calculus_checks(g, opts, &anchors, (2.0, 1.0)));

    let tensor = g.curvature_tensor();
    let closed = fs.curvature_closed_form();
    checks.push(CheckResult::new(
        "curvature_closed_form",
        Anchor::SphereCurvature,
        tensor.distance(&closed),
        tol.bound(tensor.max_abs_entry()),
    ));
    let mut partial = 0.0_f64;
    let mut partial_scale = 0.0_f64;
    for j in 0..3 {
        for l in 0..3 {
            let lhs = g.partial_contraction(&tensor, j, l);
            partial = partial.max(lhs.distance(&fs.partial_contraction_closed_form(j, l)));
            partial_scale = partial_scale.max(lhs.max_abs_entry());
        }
    }
    checks.push(CheckResult::new(
        "intermediate_contraction",
        Anchor::SphereScalarCurvature,
        partial,
        tol.bound(partial_scale.max(1.0)),
    ));

    let s = g.scalar_curvature_of(&tensor);
    let value = scalar_curvature_value(hbar);
    let h2 = hbar * hbar;
    checks.push(
        CheckResult::new(
            "scalar_curvature_closed_form",
            Anchor::SphereScalarCurvature,
            s.distance(&fs.scalar_curvature_closed_form()),
            tol.bound(2.0 + 3.0 * h2 + h2 * h2),
        )
        .with_param("value", value)
        .with_param("measured", s.normalized_trace().re),
    );

    let nm = fs.normal_module_checks(opts.trials, opts.seed);
    checks.push(
        CheckResult::new("normal_module", Anchor::SphereNormalModule, nm.max_residual(), bound)
            .with_param("generator_fixed", nm.generator_fixed)
            .with_param("generation", nm.generation)
            .with_param("reconstruction", nm.reconstruction)
            .with_param("trials", opts.trials),
    );

    Ok(finish(report, start))
}

/// Relation, projector, flatness, trace and basis checks for the
/// noncommutative torus at `theta = pi k / n`.
pub fn torus_suite(n: usize, k: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let t = NCTorus::new(n, k)?;
    let tol = opts.tol;
    let bound = tol.bound(1.0f64.max(t.hbar()));
    let mut report = SuiteReport::new(
        "torus",
        params(&[
            ("N", n.into()),
            ("k", k.into()),
            ("theta", t.theta().into()),
            ("hbar", t.hbar().into()),
        ]),
        opts.seed,
    );
    let checks = &mut report.checks;

    let rel = t.relation_residuals();
    let commutation = [rel.commuting_pairs, rel.x1_x3, rel.x2_x4, rel.x1_x4, rel.x2_x3]
        .into_iter()
        .fold(0.0, f64::max);
    for (name, residual) in [
        ("commutation_relations", commutation),
        ("sum_of_squares", rel.sum_of_squares),
        ("weyl_relation", rel.weyl),
        ("unitarity", rel.unitarity),
        ("generator_reconstruction", rel.reconstruction),
        ("generator_hermiticity", rel.hermiticity),
    ] {
        checks.push(CheckResult::new(name, Anchor::TorusRelations, residual, bound));
    }

    let ex = t.exchange_relations();
    checks.push(
        CheckResult::new(
            "exchange_relations",
            Anchor::TorusExchangeRelations,
            ex.max_residual(),
            bound,
        )
        .with_param("implied_weyl", ex.implied_weyl)
        .with_param("q_polynomial", ex.q_polynomial),
    );
    checks.push(CheckResult::new(
        "structural_zeros",
        Anchor::TorusRelations,
        t.structural_zeros(),
        bound,
    ));

    let g = t.geometry();
    let anchors = Anchors {
        projectors: Anchor::TorusProjectors,
        rank: Anchor::TorusModuleRank,
        closed_trace: Anchor::TorusClosedTrace,
    };
    checks.extend(calculus_checks(g, opts, &anchors, (2.0, 2.0)));

    let flat = t.flatness();
    checks.push(CheckResult::new(
        "curvature_vanishes",
        Anchor::TorusFlatness,
        flat.max_component,
        bound,
    ));
    for (label, residual) in &flat.classes {
        checks.push(CheckResult::new(
            format!("curvature_class_{label}"),
            Anchor::TorusFlatness,
            *residual,
            bound,
        ));
    }
    checks.push(CheckResult::new(
        "scalar_curvature_vanishes",
        Anchor::TorusFlatness,
        flat.scalar,
        bound,
    ));

    let (sum_residual, mixed) = t.closed_trace_commutators();
    checks.push(CheckResult::new(
        "projector_commutators",
        Anchor::TorusClosedTrace,
        sum_residual,
        bound,
    ));
    checks.push(CheckResult::new(
        "mixed_projector_blocks",
        Anchor::TorusClosedTrace,
        mixed,
        0.0,
    ));

    let tb = t.tangent_basis_checks(opts.trials, opts.seed);
    checks.push(
        CheckResult::new("tangent_basis", Anchor::TorusTangentBasis, tb.max_residual(), bound)
            .with_param("fixed", tb.fixed)
            .with_param("spanning", tb.spanning)
            .with_param("independence", tb.independence)
            .with_param("trials", opts.trials),
    );
    let nb = t.normal_basis_checks(opts.trials, opts.seed);
    let normal = nb.fixed.max(nb.decomposition).max(nb.freeness);
    checks.push(
        CheckResult::new("normal_basis", Anchor::TorusNormalBasis, normal, bound)
            .with_param("fixed", nb.fixed)
            .with_param("decomposition", nb.decomposition)
            .with_param("freeness", nb.freeness)
            .with_param("trials", opts.trials),
    );
    checks.push(CheckResult::new(
        "basis_orthogonality",
        Anchor::TorusOrthogonality,
        nb.orthogonality,
        bound,
    ));
    checks.push(
        CheckResult::new(
            "basis_reconstruction",
            Anchor::TorusNormalBasis,
            nb.full_reconstruction,
            bound,
        )
        .with_param("trials", opts.trials),
    );

    Ok(finish(report, start))
}

fn mode_label(mode: DerivativeMode) -> &'static str {
    match mode {
        DerivativeMode::Analytic => "analytic",
        DerivativeMode::FiniteDifference { .. } => "fd",
    }
}

/// Bracket, projector, metric and curvature checks for a classical surface
/// on a `grid x grid` parameter grid and at fixed curvature sample points.
pub fn classical_suite(surface: Surface, grid: usize, mode: DerivativeMode, tol: ToleranceSpec) -> Result<SuiteReport> {
    let start = Instant::now();
    if grid == 0 {
        return Err(Error::InvalidGeometry("grid must be positive".into()));
    }
    if let DerivativeMode::FiniteDifference { step } = mode {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "finite-difference step must be positive, got {step}"
            )));
        }
    }
    let mut geometry = params(&[
        ("surface", surface.name().into()),
        ("grid", grid.into()),
        ("mode", mode_label(mode).into()),
    ]);
    if let DerivativeMode::FiniteDifference { step } = mode {
        geometry.insert("fd_step".into(), step.into());
    }
    let mut report = SuiteReport::new("classical", geometry, 0);
    let checks = &mut report.checks;
    let bound = tol.bound(1.0);

    let mut brackets = 0.0_f64;
    let mut agreement = 0.0_f64;
    let mut projector = 0.0_f64;
    let mut closed_projector = 0.0_f64;
    let mut inverse = 0.0_f64;
    for u in surface.parameter_grid(grid) {
        let p = sample_point(surface, u)?;
        brackets = brackets.max(match surface {
            Surface::Sphere => sphere_bracket_residual(&p),
            Surface::CliffordTorus => (p.coordinate_brackets() - torus_bracket_closed_form(&p.x)).amax(),
        });
        let proj = classical_projector(&p);
        agreement = agreement.max(proj.agreement());
        projector = projector.max(proj.projector_defect());
        let expected = match surface {
            Surface::Sphere => sphere_projector_closed_form(&p.x),
            Surface::CliffordTorus => torus_projector_closed_form(&p.x),
        };
        closed_projector = closed_projector.max((&proj.from_brackets - expected).amax());
        inverse = inverse.max(p.metric_inverse_identity());
    }
    let points = grid * grid;
    let bracket_name = match surface {
        Surface::Sphere => "bracket_identity",
        Surface::CliffordTorus => "bracket_matrix",
    };
    checks
        .push(CheckResult::new(bracket_name, Anchor::ClassicalBrackets, brackets, bound).with_param("points", points));
    checks.push(
        CheckResult::new("projector_agreement", Anchor::ClassicalProjector, agreement, bound)
            .with_param("points", points),
    );
    checks.push(
        CheckResult::new("projector_identities", Anchor::ClassicalProjector, projector, bound)
            .with_param("points", points),
    );
    checks.push(
        CheckResult::new(
            "projector_closed_form",
            Anchor::ClassicalProjector,
            closed_projector,
            bound,
        )
        .with_param("points", points),
    );
    checks.push(
        CheckResult::new("metric_inverse", Anchor::ClassicalMetricInverse, inverse, bound).with_param("points", points),
    );

    let curvature_tol = match (surface, mode) {
        (_, DerivativeMode::Analytic) => tol.bound(surface.expected_scalar_curvature().max(1.0)),
        (Surface::Sphere, DerivativeMode::FiniteDifference { .. }) => FD_SPHERE_TOLERANCE,
        (Surface::CliffordTorus, DerivativeMode::FiniteDifference { .. }) => FD_TORUS_TOLERANCE,
    };
    let mut scalar = 0.0_f64;
    let mut components = 0.0_f64;
    for u in surface.sample_parameters(CLASSICAL_CURVATURE_SAMPLES) {
        let p = sample_point(surface, u)?;
        let curv = classical_curvature(surface, &p, mode);
        scalar = scalar.max((curv.scalar - surface.expected_scalar_curvature()).abs());
        components = components.max(match surface {
            Surface::Sphere => {
                let mut worst = 0.0_f64;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            for l in 0..3 {
                                let r = curv.get(i, j, k, l) - sphere_curvature_closed_form(&p.x, i, j, k, l);
                                worst = worst.max(r.abs());
                            }
                        }
                    }
                }
                worst
            }
            Surface::CliffordTorus => curv.max_abs_component(),
        });
    }
    let samples = CLASSICAL_CURVATURE_SAMPLES;
    match surface {
        Surface::Sphere => {
            checks.push(
                CheckResult::new(
                    "scalar_curvature",
                    Anchor::ClassicalSphereCurvature,
                    scalar,
                    curvature_tol,
                )
                .with_param("value", surface.expected_scalar_curvature())
                .with_param("samples", samples),
            );
            checks.push(
                CheckResult::new(
                    "curvature_closed_form",
                    Anchor::ClassicalSphereCurvature,
                    components,
                    curvature_tol,
                )
                .with_param("samples", samples),
            );
        }
        Surface::CliffordTorus => {
            checks.push(
                CheckResult::new(
                    "curvature_vanishes",
                    Anchor::ClassicalTorusFlatness,
                    components,
                    curvature_tol,
                )
                .with_param("samples", samples),
            );
            checks.push(
                CheckResult::new(
                    "scalar_curvature_vanishes",
                    Anchor::ClassicalTorusFlatness,
                    scalar,
                    curvature_tol,
                )
                .with_param("samples", samples),
            );
        }
    }

    Ok(finish(report, start))
}

/// One row of the fuzzy-sphere sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub hbar: f64,
    /// Normalized trace of the full contraction.
    pub scalar: f64,
    /// `|S - 2|`.
    pub gap: f64,
    pub suite_pass: bool,
}

/// Fuzzy-sphere suites for `N = 2..=max_dim`, the convergence of `S` to the
/// classical value and its monotonicity. Per-dimension checks are prefixed
/// `dim_NNN/`.
pub fn sweep(max_dim: usize, opts: &SuiteOptions) -> Result<(SuiteReport, Vec<SweepRow>)> {
    let start = Instant::now();
    if max_dim < 2 {
        return Err(Error::InvalidDimension { n: max_dim, min: 2 });
    }
    let mut report = SuiteReport::new("sweep", params(&[("max_dim", max_dim.into())]), opts.seed);
    let mut rows = Vec::with_capacity(max_dim - 1);
    for n in 2..=max_dim {
        let sub = sphere_suite(n, opts)?;
        let hbar = sphere_hbar(n);
        let measured = match sub
            .check("scalar_curvature_closed_form")
            .and_then(|c| c.param("measured"))
        {
            Some(ParamValue::Real(v)) => *v,
            _ => f64::NAN,
        };
        let gap = (measured - 2.0).abs();
        let h2 = hbar * hbar;
        let predicted = 3.0 * h2 - h2 * h2;
        rows.push(SweepRow {
            n,
            hbar,
            scalar: measured,
            gap,
            suite_pass: sub.all_pass(),
        });
        let prefix = format!("dim_{n:03}/");
        for mut c in sub.checks {
            c.name = format!("{prefix}{}", c.name);
            c.params.insert("N".into(), n.into());
            report.checks.push(c);
        }
        report.checks.push(
            CheckResult::new(
                format!("{prefix}classical_limit"),
                Anchor::ClassicalLimit,
                (gap - predicted).abs(),
                1e-9,
            )
            .with_param("N", n)
            .with_param("hbar", hbar)
            .with_param("s", measured)
            .with_param("gap", gap),
        );
    }
    let violations = rows
        .windows(2)
        .filter(|w| w[1].scalar.partial_cmp(&w[0].scalar) != Some(std::cmp::Ordering::Greater))
        .count();
    report.checks.push(
        CheckResult::new("monotonic_increase", Anchor::ClassicalLimit, violations as f64, 0.0)
            .with_param("pairs", rows.len().saturating_sub(1)),
    );
    Ok((finish(report, start), rows))
}
