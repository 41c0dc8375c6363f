//! Check results and suite reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Traceability label linking a check to the statement it verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    StarDerivation,
    AffineConnection,
    MetricConnection,
    CurvatureFormula,
    ClosedTraceLemma,
    SphereRelations,
    SphereEpsilonIdentities,
    SphereProjectors,
    SphereModuleRank,
    SphereCurvature,
    SphereScalarCurvature,
    SphereClosedTrace,
    SphereNormalModule,
    TorusRelations,
    TorusExchangeRelations,
    TorusProjectors,
    TorusModuleRank,
    TorusFlatness,
    TorusClosedTrace,
    TorusTangentBasis,
    TorusNormalBasis,
    TorusOrthogonality,
    ClassicalBrackets,
    ClassicalProjector,
    ClassicalMetricInverse,
    ClassicalSphereCurvature,
    ClassicalTorusFlatness,
    ClassicalLimit,
}

impl Anchor {
    pub const ALL: [Anchor; 28] = [
        Anchor::StarDerivation,
        Anchor::AffineConnection,
        Anchor::MetricConnection,
        Anchor::CurvatureFormula,
        Anchor::ClosedTraceLemma,
        Anchor::SphereRelations,
        Anchor::SphereEpsilonIdentities,
        Anchor::SphereProjectors,
        Anchor::SphereModuleRank,
        Anchor::SphereCurvature,
        Anchor::SphereScalarCurvature,
        Anchor::SphereClosedTrace,
        Anchor::SphereNormalModule,
        Anchor::TorusRelations,
        Anchor::TorusExchangeRelations,
        Anchor::TorusProjectors,
        Anchor::TorusModuleRank,
        Anchor::TorusFlatness,
        Anchor::TorusClosedTrace,
        Anchor::TorusTangentBasis,
        Anchor::TorusNormalBasis,
        Anchor::TorusOrthogonality,
        Anchor::ClassicalBrackets,
        Anchor::ClassicalProjector,
        Anchor::ClassicalMetricInverse,
        Anchor::ClassicalSphereCurvature,
        Anchor::ClassicalTorusFlatness,
        Anchor::ClassicalLimit,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Anchor::StarDerivation => "calculus/star-derivation",
            Anchor::AffineConnection => "calculus/affine-connection",
            Anchor::MetricConnection => "calculus/metric-connection",
            Anchor::CurvatureFormula => "calculus/curvature-formula",
            Anchor::ClosedTraceLemma => "calculus/closed-trace-lemma",
            Anchor::SphereRelations => "fuzzy-sphere/relations",
            Anchor::SphereEpsilonIdentities => "fuzzy-sphere/epsilon-identities",
            Anchor::SphereProjectors => "fuzzy-sphere/projectors",
            Anchor::SphereModuleRank => "fuzzy-sphere/module-rank",
            Anchor::SphereCurvature => "fuzzy-sphere/curvature",
            Anchor::SphereScalarCurvature => "fuzzy-sphere/scalar-curvature",
            Anchor::SphereClosedTrace => "fuzzy-sphere/closed-trace",
            Anchor::SphereNormalModule => "fuzzy-sphere/normal-module",
            Anchor::TorusRelations => "nc-torus/relations",
            Anchor::TorusExchangeRelations => "nc-torus/exchange-relations",
            Anchor::TorusProjectors => "nc-torus/projectors",
            Anchor::TorusModuleRank => "nc-torus/module-rank",
            Anchor::TorusFlatness => "nc-torus/flatness",
            Anchor::TorusClosedTrace => "nc-torus/closed-trace",
            Anchor::TorusTangentBasis => "nc-torus/tangent-basis",
            Anchor::TorusNormalBasis => "nc-torus/normal-basis",
            Anchor::TorusOrthogonality => "nc-torus/orthogonality",
            Anchor::ClassicalBrackets => "classical/brackets",
            Anchor::ClassicalProjector => "classical/projector",
            Anchor::ClassicalMetricInverse => "classical/metric-inverse",
            Anchor::ClassicalSphereCurvature => "classical/sphere-curvature",
            Anchor::ClassicalTorusFlatness => "classical/torus-flatness",
            Anchor::ClassicalLimit => "sweep/classical-limit",
        }
    }

    pub fn parse(s: &str) -> Option<Anchor> {
        Anchor::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

/// A report parameter: integers, reals or labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<u64> for ParamValue {
    fn from(v: u64) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub paper_anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub params: Params,
}

impl CheckResult {
    /// `pass` is `max_residual <= tolerance`; a NaN residual fails.
    pub fn new(name: impl Into<String>, anchor: Anchor, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            paper_anchor: anchor.as_str().to_owned(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            params: Params::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn param(&self, key: &str) -> Option<&ParamValue> {
        self.params.get(key)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub geometry: Params,
    pub tool_version: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn new(suite: &str, geometry: Params, seed: u64) -> Self {
        Self {
            suite: suite.to_owned(),
            geometry,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            seed,
            checks: Vec::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Stable sort by check name.
    pub fn sort_checks(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}
