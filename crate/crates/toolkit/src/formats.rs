//! JSON input and output formats.
//!
//! States:
//!
//! ```json
//! {"kind": "bell_diag", "c": [0.9, -0.1, 0.09]}
//! {"kind": "theta", "theta": [[1, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}
//! {"kind": "density", "re": [[...4 rows...]], "im": [[...]]}
//! ```
//!
//! Channels (`im` is optional everywhere):
//!
//! ```json
//! {"kind": "ad", "p": 0.3}
//! {"kind": "kraus", "ops": [{"re": [[1, 0], [0, 0]]}, {"re": [[0, 0], [0, 1]]}]}
//! {"kind": "affine", "m": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "t": [0, 0, 0]}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qse_core::channels::{self, QubitChannel};
use qse_core::decomposition::TheoremReport;
use qse_core::linalg::{C64, CMat2, CMat4};
use qse_core::nalgebra::{Matrix3, Matrix4, Vector3};
use qse_core::pauli::{density_from_theta, PauliTheta, TwoQubitState};
use qse_core::steering::{ellipsoid_size, Ellipsoid};
use qse_core::{families, Side};

use crate::error::{Result, ToolkitError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    BellDiag {
        c: [f64; 3],
    },
    Theta {
        theta: [[f64; 4]; 4],
    },
    Density {
        re: [[f64; 4]; 4],
        #[serde(default)]
        im: Option<[[f64; 4]; 4]>,
    },
}

impl StateSpec {
    pub fn build(&self) -> Result<TwoQubitState> {
        Ok(match self {
            Self::BellDiag { c } => families::bell_diagonal(*c)?,
            Self::Theta { theta } => {
                let m = Matrix4::from_fn(|i, j| theta[i][j]);
                density_from_theta(&PauliTheta::from_matrix(m))?
            }
            Self::Density { re, im } => {
                let rho = CMat4::from_fn(|i, j| {
                    C64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
                });
                TwoQubitState::from_density(rho)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix2 {
    pub re: [[f64; 2]; 2],
    #[serde(default)]
    pub im: Option<[[f64; 2]; 2]>,
}

impl ComplexMatrix2 {
    pub fn to_matrix(&self) -> CMat2 {
        CMat2::from_fn(|i, j| C64::new(self.re[i][j], self.im.map_or(0.0, |im| im[i][j])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    #[serde(rename = "ad")]
    AmplitudeDamping { p: f64 },
    Identity,
    Depolarizing { p: f64 },
    Dephasing { p: f64 },
    Kraus { ops: Vec<ComplexMatrix2> },
    Affine { m: [[f64; 3]; 3], t: [f64; 3] },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<QubitChannel> {
        Ok(match self {
            Self::AmplitudeDamping { p } => channels::amplitude_damping(*p)?,
            Self::Identity => QubitChannel::identity(),
            Self::Depolarizing { p } => channels::depolarizing(*p)?,
            Self::Dephasing { p } => channels::dephasing(*p)?,
            Self::Kraus { ops } => {
                channels::channel_from_kraus(ops.iter().map(ComplexMatrix2::to_matrix).collect())?
            }
            Self::Affine { m, t } => channels::affine_channel(
                &Matrix3::from_fn(|i, j| m[i][j]),
                &Vector3::from(*t),
            )?,
        })
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| ToolkitError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| ToolkitError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_state_spec(path: &Path) -> Result<StateSpec> {
    read_json(path)
}

/// Reads and validates a state file. Validation failures keep the path.
pub fn load_state(path: &Path) -> Result<TwoQubitState> {
    load_state_spec(path)?.build().map_err(|e| {
        ToolkitError::InvalidInput(format!("{}: {e}", path.display()))
    })
}

pub fn load_channel(path: &Path) -> Result<QubitChannel> {
    read_json::<ChannelSpec>(path)?.build().map_err(|e| {
        ToolkitError::InvalidInput(format!("{}: {e}", path.display()))
    })
}

/// Serialised steering ellipsoid. `axes` lists the axis directions, matched
/// with `semiaxes` (descending).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidJson {
    pub side: String,
    pub center: [f64; 3],
    pub semiaxes: [f64; 3],
    pub axes: [[f64; 3]; 3],
    pub dim: usize,
    pub length: f64,
    pub area: f64,
    pub volume: f64,
}

impl EllipsoidJson {
    pub fn new(e: &Ellipsoid, side: Side) -> Self {
        let size = ellipsoid_size(e);
        Self {
            side: format!("{side:?}"),
            center: e.center.0.into(),
            semiaxes: e.semiaxes.into(),
            axes: core::array::from_fn(|j| e.axes.column(j).into()),
            dim: e.dim,
            length: size.length,
            area: size.area,
            volume: size.volume,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReportJson {
    pub theta_rank: usize,
    pub e_b_dim: usize,
    pub e_b_radial: bool,
    pub discord: f64,
    pub discordant: bool,
    pub decomposed: bool,
    pub decomposition_error: Option<String>,
    pub preparation_residual: Option<f64>,
    pub preparable: bool,
    pub applicable: bool,
    pub consistent: bool,
}

impl From<&TheoremReport> for TheoremReportJson {
    fn from(r: &TheoremReport) -> Self {
        Self {
            theta_rank: r.theta_rank,
            e_b_dim: r.e_b_dim,
            e_b_radial: r.e_b_radial,
            discord: r.discord,
            discordant: r.discordant(),
            decomposed: r.decomposition_error.is_none(),
            decomposition_error: r.decomposition_error.as_ref().map(ToString::to_string),
            preparation_residual: r.preparation_residual,
            preparable: r.preparable(),
            applicable: r.applicable,
            consistent: r.consistent,
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("plain data serialises");
    match path {
        Some(p) => fs::write(p, text + "\n").map_err(|e| ToolkitError::io(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_formats_parse() {
        let s: StateSpec = serde_json::from_str(r#"{"kind":"bell_diag","c":[-1,-1,-1]}"#).unwrap();
        assert!(s.build().is_ok());
        let s: StateSpec = serde_json::from_str(
            r#"{"kind":"theta","theta":[[1,0,0,0],[0,1.5,0,0],[0,0,0,0],[0,0,0,0]]}"#,
        )
        .unwrap();
        assert!(matches!(
            s.build(),
            Err(ToolkitError::Core(qse_core::Error::NotAState { .. }))
        ));
        let s: StateSpec = serde_json::from_str(
            r#"{"kind":"density","re":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#,
        )
        .unwrap();
        assert!(s.build().is_ok());
    }

    #[test]
    fn channel_formats_parse() {
        for text in [
            r#"{"kind":"ad","p":0.3}"#,
            r#"{"kind":"identity"}"#,
            r#"{"kind":"kraus","ops":[{"re":[[1,0],[0,0]]},{"re":[[0,0],[0,1]]}]}"#,
            r#"{"kind":"affine","m":[[0,0,0],[0,0,0],[0,0,0.5]],"t":[0,0,0.5]}"#,
        ] {
            let spec: ChannelSpec = serde_json::from_str(text).unwrap();
            assert!(spec.build().is_ok(), "{text}");
        }
        let bad: ChannelSpec =
            serde_json::from_str(r#"{"kind":"affine","m":[[1,0,0],[0,1,0],[0,0,1]],"t":[0,0,0.5]}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
