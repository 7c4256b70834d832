//! Model configuration files.
//!
//! Structured key-value text (TOML) with the sections
//!
//! ```toml
//! dim = 1
//! [drift]
//! kind = "linear"             # zero|constant|linear|tanh|bangbang|heston32|functional
//! params = { gain = -1.0 }
//! [diffusion]
//! kind = "constant"           # constant|builtin
//! matrix = [1.0]              # row-major d×d, constant kind
//! [growth]
//! K = 1.0
//! bound = 0.5                  # optional, ‖b‖∞ when bounded
//! sublinear = [{ delta = 0.1, K_delta = 1.0 }]
//! [ellipticity]
//! lower = 1.0
//! upper = 1.0
//! [holder]
//! alpha = 1.0
//! norm = 0.0
//! ```
//!
//! `builtin` diffusions take `params = { name = "power"|"affine", ... }`.
//! Functional drifts take `params = { nu = {...}, zeta = {...},
//! delays = [{tau, theta}], tail_theta = 0.0, integrand = [{...}] }`.

use serde::Deserialize;

use crate::error::{PathdriftError, Result};
use crate::model::{
    DelayTerm, Diffusion, Drift, Ellipticity, FunctionalSpec, GrowthInfo, Holder, NuKind,
    PathDependentModel, ScalarField,
};

#[derive(Deserialize)]
struct ModelFile {
    dim: usize,
    drift: DriftSection,
    diffusion: DiffusionSection,
    growth: GrowthInfo,
    ellipticity: Ellipticity,
    holder: Holder,
}

#[derive(Deserialize)]
struct DriftSection {
    kind: String,
    #[serde(default)]
    params: Option<toml::Value>,
}

#[derive(Deserialize)]
struct DiffusionSection {
    kind: String,
    #[serde(default)]
    matrix: Option<Vec<f64>>,
    #[serde(default)]
    params: Option<toml::Value>,
}

#[derive(Deserialize)]
struct FunctionalParams {
    nu: NuKind,
    #[serde(default = "default_zeta")]
    zeta: ScalarField,
    #[serde(default)]
    delays: Vec<DelayTerm>,
    #[serde(default)]
    tail_theta: f64,
    #[serde(default)]
    integrand: Vec<ScalarField>,
}

fn default_zeta() -> ScalarField {
    ScalarField::Zero
}

fn params_of<T: serde::de::DeserializeOwned>(
    section: &Option<toml::Value>,
    kind: &str,
) -> Result<T> {
    let value = section
        .clone()
        .ok_or_else(|| PathdriftError::config(format!("drift kind `{kind}` needs params")))?;
    value
        .try_into()
        .map_err(|e| PathdriftError::config(format!("bad params for `{kind}`: {e}")))
}

fn build_drift(section: &DriftSection) -> Result<Drift> {
    #[derive(Deserialize)]
    struct Gain {
        gain: f64,
    }
    #[derive(Deserialize)]
    struct Scale {
        scale: f64,
    }
    #[derive(Deserialize)]
    struct Value {
        value: Vec<f64>,
    }
    #[derive(Deserialize)]
    struct BangBang {
        center: Vec<f64>,
        strength: Vec<f64>,
    }
    #[derive(Deserialize)]
    struct Heston {
        lambda: f64,
        mu: f64,
    }
    match section.kind.as_str() {
        "zero" => Ok(Drift::Zero),
        "constant" => {
            let p: Value = params_of(&section.params, "constant")?;
            Ok(Drift::Constant { value: p.value })
        }
        "linear" => {
            let p: Gain = params_of(&section.params, "linear")?;
            Ok(Drift::Linear { gain: p.gain })
        }
        "tanh" => {
            let p: Scale = params_of(&section.params, "tanh")?;
            Ok(Drift::Tanh { scale: p.scale })
        }
        "bangbang" => {
            let p: BangBang = params_of(&section.params, "bangbang")?;
            Ok(Drift::BangBang {
                center: p.center,
                strength: p.strength,
            })
        }
        "heston32" => {
            let p: Heston = params_of(&section.params, "heston32")?;
            Ok(Drift::Heston32 {
                lambda: p.lambda,
                mu: p.mu,
            })
        }
        "functional" => {
            let p: FunctionalParams = params_of(&section.params, "functional")?;
            Ok(Drift::Functional {
                spec: FunctionalSpec {
                    zeta: p.zeta,
                    delays: p.delays,
                    tail_theta: p.tail_theta,
                    integrand_c: p.integrand,
                },
                nu: p.nu,
            })
        }
        other => Err(PathdriftError::config(format!(
            "unknown drift kind `{other}`"
        ))),
    }
}

fn build_diffusion(section: &DiffusionSection) -> Result<Diffusion> {
    #[derive(Deserialize)]
    #[serde(tag = "name", rename_all = "kebab-case")]
    enum Builtin {
        Power { xi: f64, power: f64 },
        Affine { base: f64, slope: f64 },
        Zero,
    }
    match section.kind.as_str() {
        "constant" => {
            let matrix = section.matrix.clone().ok_or_else(|| {
                PathdriftError::config("constant diffusion needs `matrix`".to_string())
            })?;
            Ok(Diffusion::Constant { matrix })
        }
        "builtin" => {
            let b: Builtin = params_of(&section.params, "builtin diffusion")?;
            Ok(match b {
                Builtin::Power { xi, power } => Diffusion::ScalarPower { xi, power },
                Builtin::Affine { base, slope } => Diffusion::ScalarAffine { base, slope },
                Builtin::Zero => Diffusion::Zero,
            })
        }
        other => Err(PathdriftError::config(format!(
            "unknown diffusion kind `{other}`"
        ))),
    }
}

/// Parses a model from TOML text.
pub fn model_from_str(text: &str) -> Result<PathDependentModel> {
    let file: ModelFile = toml::from_str(text)
        .map_err(|e| PathdriftError::config(format!("malformed model file: {e}")))?;
    let drift = build_drift(&file.drift)?;
    let diffusion = build_diffusion(&file.diffusion)?;
    PathDependentModel::new(
        file.dim,
        drift,
        diffusion,
        file.growth,
        file.ellipticity,
        file.holder,
    )
}

/// Loads a model file from disk.
pub fn load_model(path: &str) -> Result<PathDependentModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PathdriftError::config(format!("cannot read model file `{path}`: {e}")))?;
    model_from_str(&text)
}
