//! Named solutions addressable by string id.
//!
//! Fixed ids: `rowell`, `xshape`, `base1`, `base2`, `base3`. Parametric ids:
//! `family<k>:theta=<rad>` and `family<k>:alpha=<re>,<im>:beta=<re>,<im>`.
//! Labels produced by the constructors use the same syntax, so every label
//! resolves back to its matrix.

use serde::Serialize;

use crate::blocks::{
    base_solution, family_solution, general_solution, rowell_solution, xshape_solution, Family, FamilyParams,
    GeneralParams,
};
use crate::error::{GybeError, Result};
use crate::linalg::Complex;
use crate::yang_baxter::{GybeSignature, RMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegistryEntry {
    pub id: String,
    pub signature: GybeSignature,
    pub description: String,
}

/// Parses `"re,im"` (a lone real number is accepted too).
pub fn parse_complex(text: &str) -> Result<Complex> {
    let bad = || GybeError::Parse(format!("expected re,im but got {text:?}"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn parse_family(text: &str) -> Result<Family> {
    let k = text
        .strip_prefix("family")
        .and_then(|k| k.parse::<u8>().ok())
        .ok_or_else(|| GybeError::Parse(format!("unknown family {text:?}")))?;
    Family::from_index(k)
}

/// The fixed entries, in display order.
pub fn list() -> Vec<RegistryEntry> {
    let sig231 = GybeSignature::new(2, 3, 1).expect("valid");
    let mut out = vec![
        RegistryEntry {
            id: "rowell".into(),
            signature: sig231,
            description: "Rowell solution built from the primitive 8th root of unity".into(),
        },
        RegistryEntry {
            id: "xshape".into(),
            signature: GybeSignature::new(2, 3, 2).expect("valid"),
            description: "X-shaped solution supported on the two diagonals".into(),
        },
    ];
    for f in Family::ALL {
        out.push(RegistryEntry {
            id: format!("base{f}"),
            signature: sig231,
            description: format!("base solution of family {f} (alpha = beta = 1)"),
        });
    }
    out
}

/// All `(2,3,1)` solutions among the fixed entries.
pub fn fixed_231() -> Vec<RMatrix> {
    list()
        .into_iter()
        .filter(|e| e.signature == GybeSignature::new(2, 3, 1).expect("valid"))
        .map(|e| resolve(&e.id).expect("fixed ids resolve"))
        .collect()
}

/// Looks up an id.
pub fn resolve(id: &str) -> Result<RMatrix> {
    let id = id.trim();
    match id {
        "rowell" => return Ok(rowell_solution()),
        "xshape" => return Ok(xshape_solution()),
        _ => {}
    }
    if let Some(k) = id.strip_prefix("base") {
        let family = k
            .parse::<u8>()
            .map_err(|_| GybeError::Parse(format!("unknown solution id {id:?}")))
            .and_then(Family::from_index)?;
        return base_solution(family).to_rmatrix(id);
    }
    let mut parts = id.split(':');
    let head = parts.next().unwrap_or_default();
    if !head.starts_with("family") {
        return Err(GybeError::Parse(format!("unknown solution id {id:?}")));
    }
    let family = parse_family(head)?;
    let mut theta = None;
    let mut alpha = None;
    let mut beta = None;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| GybeError::Parse(format!("expected key=value in {part:?}")))?;
        match key.trim() {
            "theta" => {
                theta = Some(
                    value
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| GybeError::Parse(format!("bad theta {value:?}")))?,
                )
            }
            "alpha" => alpha = Some(parse_complex(value)?),
            "beta" => beta = Some(parse_complex(value)?),
            other => return Err(GybeError::Parse(format!("unknown key {other:?} in {id:?}"))),
        }
    }
    match (theta, alpha, beta) {
        (Some(t), None, None) => family_solution(&FamilyParams::new(family, t)?),
        (None, Some(a), Some(b)) => general_solution(&GeneralParams::new(family, a, b)?),
        _ => Err(GybeError::Parse(format!(
            "{id:?}: give either theta or both alpha and beta"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_ids_resolve() {
        for e in list() {
            let r = resolve(&e.id).unwrap();
            assert_eq!(r.signature, e.signature);
        }
        assert_eq!(fixed_231().len(), 4);
    }

    #[test]
    fn labels_round_trip() {
        let r = resolve("family2:theta=0.4").unwrap();
        assert_eq!(resolve(&r.label).unwrap().matrix, r.matrix);
        let g = resolve("family1:alpha=0,1:beta=-1,0").unwrap();
        assert_eq!(resolve(&g.label).unwrap().matrix, g.matrix);
    }

    #[test]
    fn bad_ids() {
        for id in [
            "",
            "nope",
            "base4",
            "family4:theta=0",
            "family1:theta=5",
            "family1:alpha=2,0:beta=1,0",
            "family1:theta=1:beta=1,0",
            "family1:gamma=1",
        ] {
            assert!(resolve(id).is_err(), "{id}");
        }
    }

    #[test]
    fn complex_text() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex::new(0.5, -1.0));
        assert_eq!(parse_complex("2").unwrap(), Complex::new(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan,0").is_err());
    }
}
