use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::SpectralFunction;
use crate::error::{Error, Result};
use crate::genfunc::{make_meyer, make_shannon, GeneratingFunction};
use crate::lattice::EvenVariant;
use crate::normest::{Case, NormOptions};
use crate::operators::PotentialSpec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenfuncChoice {
    Shannon,
    #[default]
    Meyer,
}

impl GenfuncChoice {
    pub fn build(self) -> GeneratingFunction {
        match self {
            GenfuncChoice::Shannon => make_shannon(),
            GenfuncChoice::Meyer => make_meyer(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub id: String,
    /// Declared Hölder order; must agree with the potential's own order when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Value for `"id": "constant"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl PotentialConfig {
    pub fn spec(&self) -> Result<PotentialSpec> {
        let spec = match (self.id.as_str(), self.value) {
            ("constant", Some(value)) => PotentialSpec::Constant { value },
            ("constant", None) => return Err(Error::Config("constant potential needs \"value\"".into())),
            (id, _) => PotentialSpec::parse(id)?,
        };
        if let Some(theta) = self.theta {
            if (theta - spec.theta()).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "potential '{}' is Hölder of order {}, config declares {theta}",
                    self.id,
                    spec.theta()
                )));
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiConfig {
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl PsiConfig {
    pub fn build(&self) -> Result<SpectralFunction> {
        match (self.alpha, self.beta) {
            (None, None) => SpectralFunction::power(self.s),
            (Some(a), Some(b)) => SpectralFunction::power_with_params(self.s, a, b),
            _ => Err(Error::Config("psi: give both alpha and beta or neither".into())),
        }
    }
}

/// Reference-grid policy: the continuum is sampled on `[-L, L)^d` with
/// `M = 2⌈oversample·3N/2⌉` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferencePolicy {
    pub half_length: f64,
    pub oversample: f64,
}

impl Default for ReferencePolicy {
    fn default() -> Self {
        Self {
            half_length: 8.0,
            oversample: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for NormSettings {
    fn default() -> Self {
        let d = NormOptions::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
            restarts: d.restarts,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Data CSV; the rate table goes next to it with suffix `.rates.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub case: Case,
    #[serde(alias = "d", default = "one")]
    pub dim: usize,
    pub h_list: Vec<f64>,
    /// `[re, im]` pairs; the case default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_list: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub genfunc: GenfuncChoice,
    #[serde(default)]
    pub even_variant: EvenVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiConfig>,
    #[serde(default)]
    pub reference: ReferencePolicy,
    #[serde(default)]
    pub normest: NormSettings,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one() -> usize {
    1
}

pub fn default_z_list(case: Case) -> Vec<Complex64> {
    if case.has_potential() {
        vec![Complex64::new(-1.0, 2.0), Complex64::new(-1.0, -2.0)]
    } else {
        vec![Complex64::new(-1.0, 0.0), Complex64::new(-4.0, 0.0), Complex64::new(-1.0, 2.0)]
    }
}

impl ExperimentConfig {
    /// A config with every optional key at its default.
    pub fn new(case: Case, dim: usize, h_list: Vec<f64>) -> Self {
        Self {
            case,
            dim,
            h_list,
            z_list: None,
            genfunc: GenfuncChoice::default(),
            even_variant: EvenVariant::default(),
            potential: None,
            psi: None,
            reference: ReferencePolicy::default(),
            normest: NormSettings::default(),
            seed: 0,
            output: OutputConfig::default(),
        }
    }

    /// Parses JSON; syntax and schema errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn z_values(&self) -> Vec<Complex64> {
        match &self.z_list {
            Some(list) => list.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            None => default_z_list(self.case),
        }
    }

    pub fn norm_options(&self) -> NormOptions {
        NormOptions {
            tol: self.normest.tol,
            max_iter: self.normest.max_iter,
            restarts: self.normest.restarts,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(1..=3).contains(&self.dim) {
            return bad(format!("dim must be 1, 2 or 3, got {}", self.dim));
        }
        if self.h_list.len() < 3 {
            return bad(format!("h_list needs at least 3 entries, got {}", self.h_list.len()));
        }
        if self.h_list.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return bad("h_list entries must be positive".into());
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("h_list must be strictly decreasing".into());
        }
        if !(self.reference.half_length > 0.0) || !(self.reference.oversample >= 1.0) {
            return bad("reference needs half_length > 0 and oversample ≥ 1".into());
        }
        if !(self.normest.tol > 0.0) || self.normest.max_iter == 0 || self.normest.restarts == 0 {
            return bad("normest needs tol > 0, max_iter ≥ 1 and restarts ≥ 1".into());
        }
        match (self.case.has_potential(), &self.potential) {
            (true, None) => return bad(format!("case {} needs a potential", self.case)),
            (false, Some(_)) => return bad(format!("case {} takes no potential", self.case)),
            (true, Some(p)) => {
                p.spec()?;
            }
            _ => {}
        }
        match (self.case.has_psi(), &self.psi) {
            (true, None) => return bad(format!("case {} needs psi", self.case)),
            (false, Some(_)) => return bad(format!("case {} takes no psi", self.case)),
            (true, Some(p)) => {
                p.build()?;
            }
            _ => {}
        }
        if self.case.has_potential() && !self.genfunc.build().satisfies_decay(self.dim) {
            return bad(format!(
                "generating function {:?} decays too slowly for the potential estimate in d = {}",
                self.genfunc, self.dim
            ));
        }
        for z in self.z_values() {
            if self.case.has_potential() && z.im == 0.0 {
                return bad(format!("z = {z} must have nonzero imaginary part for potential cases"));
            }
            if z.im == 0.0 && z.re >= 0.0 {
                return bad(format!("z = {z} lies on the spectrum [0, ∞)"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"case": "dirichlet", "h_list": [0.5, 0.25, 0.125]}"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.genfunc, GenfuncChoice::Meyer);
        assert_eq!(c.z_values().len(), 3);
        assert_eq!(c.reference, ReferencePolicy::default());
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"{
            "case": "potential-neumann", "d": 2, "h_list": [0.5, 0.25, 0.125],
            "z_list": [[-1, 2]], "genfunc": "meyer", "even_variant": "paper-literal",
            "potential": {"id": "cos-gauss", "theta": 1},
            "reference": {"half_length": 4, "oversample": 2},
            "normest": {"tol": 1e-7, "max_iter": 50, "restarts": 2},
            "seed": 7, "output": {"csv": "out.csv"}
        }"#;
        let c = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(c.even_variant, EvenVariant::PaperLiteral);
        let again = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn malformed_json_reports_line() {
        let err = ExperimentConfig::from_json("{\n  \"case\": \"dirichlet\",\n  \"h_list\": [0.5,\n}").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        let err = ExperimentConfig::from_json("{\n\"case\": \"sideways\"}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn rejects_invalid_configs() {
        for text in [
            r#"{"case": "dirichlet", "h_list": [0.5, 0.25]}"#,
            r#"{"case": "dirichlet", "h_list": [0.25, 0.5, 0.125]}"#,
            r#"{"case": "dirichlet", "h_list": [0.5, 0.25, 0.125], "z_list": [[1, 0]]}"#,
            r#"{"case": "potential-dirichlet", "h_list": [0.5, 0.25, 0.125]}"#,
            r#"{"case": "potential-dirichlet", "h_list": [0.5, 0.25, 0.125], "potential": {"id": "cos-gauss"}, "z_list": [[-1, 0]]}"#,
            r#"{"case": "potential-dirichlet", "h_list": [0.5, 0.25, 0.125], "potential": {"id": "cos-gauss", "theta": 0.5}}"#,
            r#"{"case": "potential-dirichlet", "genfunc": "shannon", "h_list": [0.5, 0.25, 0.125], "potential": {"id": "cos-gauss"}}"#,
            r#"{"case": "psi-neumann", "h_list": [0.5, 0.25, 0.125]}"#,
            r#"{"case": "dirichlet", "h_list": [0.5, 0.25, 0.125], "bogus": 1}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }
}
