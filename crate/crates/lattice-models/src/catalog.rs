use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{BlochModel, LatticeError};

/// Named models of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelName {
    /// `(t_L + z^{-1}) σ₊ + (t_R + z) σ₋`.
    NhSsh,
    /// Same symbol as [`ModelName::NhSsh`].
    Fig4a,
    /// `(t_L + z^{-2}/3) σ₊ + (t_R + z) σ₋`.
    Fig4b,
    /// `t_L σ₊ + (0.6 + 0.12i + z + 0.1 z^{-2}) σ₋`.
    Fig4c,
    /// `(t1 + t2 z^{-1}) σ₊ + (t1 + t2 z) σ₋`.
    HermitianSsh,
    /// `(t_L + t2 z^{-1}) σ₊ + (t_R + t2 z) σ₋`.
    NhseSshS11,
    /// `((2 − 2cos k) z + 1) σ₊ + (2 − 2cos k) z^{-1} σ₋` with `cos k = (z + z^{-1})/2`.
    EpModelS11,
    /// `(t_L + z^{-2}) σ₊ + (t_R + z^{2}) σ₋` (extrapolated longer-range member).
    NhseB2,
    /// `(t_L + z^{-3}) σ₊ + (t_R + z^{3}) σ₋` (extrapolated longer-range member).
    NhseB3,
}

impl ModelName {
    pub const ALL: [ModelName; 9] = [
        ModelName::NhSsh,
        ModelName::Fig4a,
        ModelName::Fig4b,
        ModelName::Fig4c,
        ModelName::HermitianSsh,
        ModelName::NhseSshS11,
        ModelName::EpModelS11,
        ModelName::NhseB2,
        ModelName::NhseB3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::NhSsh => "nh_ssh",
            ModelName::Fig4a => "fig4a",
            ModelName::Fig4b => "fig4b",
            ModelName::Fig4c => "fig4c",
            ModelName::HermitianSsh => "hermitian_ssh",
            ModelName::NhseSshS11 => "nhse_ssh_s11",
            ModelName::EpModelS11 => "ep_model_s11",
            ModelName::NhseB2 => "nhse_B2",
            ModelName::NhseB3 => "nhse_B3",
        }
    }

    /// Parameter keys the model requires.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            ModelName::NhSsh | ModelName::Fig4a | ModelName::Fig4b => &["t_l", "t_r"],
            ModelName::Fig4c => &["t_l"],
            ModelName::HermitianSsh => &["t1", "t2"],
            ModelName::NhseSshS11 => &["t_l", "t_r", "t2"],
            ModelName::EpModelS11 => &[],
            ModelName::NhseB2 | ModelName::NhseB3 => &["t_l", "t_r"],
        }
    }

    /// True for models whose form is not printed in full and was extended by analogy.
    pub fn is_extrapolated(self) -> bool {
        matches!(self, ModelName::NhseB2 | ModelName::NhseB3)
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelName::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| LatticeError::UnknownModel(s.to_string()))
    }
}

/// Builds a catalog model. Every required parameter must be present and no other key is accepted.
pub fn predefined(name: ModelName, params: &BTreeMap<String, f64>) -> Result<BlochModel, LatticeError> {
    let required = name.parameters();
    if let Some(extra) = params.keys().find(|k| !required.contains(&k.as_str())) {
        return Err(LatticeError::UnknownParameter { model: name.to_string(), param: extra.clone() });
    }
    let get = |key: &str| -> Result<f64, LatticeError> {
        let v = *params
            .get(key)
            .ok_or_else(|| LatticeError::MissingParameter { model: name.to_string(), param: key.to_string() })?;
        if !v.is_finite() {
            return Err(LatticeError::Domain(format!("parameter {key} of {name} is not finite")));
        }
        Ok(v)
    };
    let r = |x: f64| Complex64::new(x, 0.0);
    let label = name.as_str();
    match name {
        ModelName::NhSsh | ModelName::Fig4a => ssh_like(label, get("t_l")?, get("t_r")?, 1),
        ModelName::NhseB2 => ssh_like(label, get("t_l")?, get("t_r")?, 2),
        ModelName::NhseB3 => ssh_like(label, get("t_l")?, get("t_r")?, 3),
        ModelName::Fig4b => {
            BlochModel::two_band(label, &[(0, r(get("t_l")?)), (-2, r(1.0 / 3.0))], &[(0, r(get("t_r")?)), (1, r(1.0))])
        }
        ModelName::Fig4c => BlochModel::two_band(
            label,
            &[(0, r(get("t_l")?))],
            &[(0, Complex64::new(0.6, 0.12)), (1, r(1.0)), (-2, r(0.1))],
        ),
        ModelName::HermitianSsh => {
            let (t1, t2) = (get("t1")?, get("t2")?);
            BlochModel::two_band(label, &[(0, r(t1)), (-1, r(t2))], &[(0, r(t1)), (1, r(t2))])?.flagged_hermitian()
        }
        ModelName::NhseSshS11 => {
            let t2 = get("t2")?;
            BlochModel::two_band(label, &[(0, r(get("t_l")?)), (-1, r(t2))], &[(0, r(get("t_r")?)), (1, r(t2))])
        }
        ModelName::EpModelS11 => {
            BlochModel::two_band(label, &[(1, r(2.0)), (2, r(-1.0))], &[(-1, r(2.0)), (0, r(-1.0)), (-2, r(-1.0))])
        }
    }
}

/// `(t_L + z^{-b}) σ₊ + (t_R + z^{b}) σ₋`.
pub fn ssh_like(label: &str, t_l: f64, t_r: f64, b: i32) -> Result<BlochModel, LatticeError> {
    let r = |x: f64| Complex64::new(x, 0.0);
    BlochModel::two_band(label, &[(0, r(t_l)), (-b, r(1.0))], &[(0, r(t_r)), (b, r(1.0))])
}

/// The coupled-chain building block `(t_L + z^{-1}) σ₊ + (t_R + z) σ₋`.
pub fn nh_ssh(t_l: f64, t_r: f64) -> Result<BlochModel, LatticeError> {
    ssh_like("nh_ssh", t_l, t_r, 1)
}

pub fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn nh_ssh_at_i() {
        let m = predefined(ModelName::NhSsh, &params(&[("t_l", 1.62), ("t_r", 0.89)])).unwrap();
        let h = m.evaluate(Complex64::i()).unwrap();
        assert!(close(h[(0, 1)], Complex64::new(1.62, -1.0)));
        assert!(close(h[(1, 0)], Complex64::new(0.89, 1.0)));
        assert!(close(h[(0, 0)], Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn ep_model_at_k_zero() {
        let m = predefined(ModelName::EpModelS11, &params(&[])).unwrap();
        let h = m.evaluate(Complex64::new(1.0, 0.0)).unwrap();
        assert!(close(h[(0, 1)], Complex64::new(1.0, 0.0)));
        assert!(close(h[(1, 0)], Complex64::new(0.0, 0.0)));
        assert_eq!(m.min_offset(), -2);
        assert_eq!(m.max_offset(), 2);
    }

    #[test]
    fn ep_model_matches_cosine_form() {
        let m = predefined(ModelName::EpModelS11, &params(&[])).unwrap();
        for k in [0.3_f64, 1.1, 2.7, -0.8] {
            let z = Complex64::from_polar(1.0, k);
            let c = 2.0 - 2.0 * k.cos();
            let h = m.evaluate(z).unwrap();
            assert!(close(h[(0, 1)], c * z + 1.0));
            assert!(close(h[(1, 0)], c / z));
        }
    }

    #[test]
    fn fig4c_at_one() {
        let t_l = 1.2 * 0.3_f64.exp();
        let m = predefined(ModelName::Fig4c, &params(&[("t_l", t_l)])).unwrap();
        let h = m.evaluate(Complex64::new(1.0, 0.0)).unwrap();
        assert!(close(h[(0, 1)], Complex64::new(t_l, 0.0)));
        assert!(close(h[(1, 0)], Complex64::new(1.7, 0.12)));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            predefined(ModelName::NhSsh, &params(&[("t_l", 1.0)])),
            Err(LatticeError::MissingParameter { .. })
        ));
        assert!(matches!(
            predefined(ModelName::EpModelS11, &params(&[("t_l", 1.0)])),
            Err(LatticeError::UnknownParameter { .. })
        ));
        assert!(matches!("nope".parse::<ModelName>(), Err(LatticeError::UnknownModel(_))));
    }

    #[test]
    fn names_roundtrip() {
        for m in ModelName::ALL {
            assert_eq!(m.as_str().parse::<ModelName>().unwrap(), m);
        }
    }

    #[test]
    fn hermitian_ssh_is_flagged() {
        let m = predefined(ModelName::HermitianSsh, &params(&[("t1", 1.0), ("t2", 1.0)])).unwrap();
        assert!(m.is_flagged_hermitian());
    }
}
