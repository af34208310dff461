//! JSON encoding of topological data and lattices.
//!
//! Matrices are lists of rows, each entry a `[re, im]` pair. Exponents are
//! strings such as `"-5/4"` or `"1/2+0.3i"`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::FracExponent;
use crate::linalg::CMat;
use crate::terp::{Lattice, TopologicalData};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub mu: usize,
    pub weight: i64,
    #[serde(rename = "alphaRef")]
    pub alpha_ref: Vec<String>,
    #[serde(rename = "N")]
    pub n: JsonMatrix,
    #[serde(rename = "S")]
    pub s: JsonMatrix,
    pub kappa: JsonMatrix,
    #[serde(rename = "Pmat")]
    pub pmat: JsonMatrix,
    #[serde(rename = "C", default)]
    pub c: Vec<JsonMatrix>,
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(name: &str, rows: &JsonMatrix, mu: usize) -> Result<CMat> {
    if rows.len() != mu || rows.iter().any(|r| r.len() != mu) {
        return Err(Error::Shape(format!("{name} must be {mu}x{mu}")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Invalid(format!("{name} has non-finite entries")));
    }
    Ok(CMat::from_fn(mu, mu, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

impl LatticeJson {
    pub fn from_lattice(lat: &Lattice) -> Self {
        let t = &lat.topo;
        Self {
            mu: t.mu,
            weight: t.weight,
            alpha_ref: t.alpha_ref.iter().map(|a| a.to_string()).collect(),
            n: matrix_to_json(&t.n),
            s: matrix_to_json(&t.s),
            kappa: matrix_to_json(&t.kappa),
            pmat: matrix_to_json(&t.pmat),
            c: lat.c.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let mu = self.mu;
        let alpha_ref = self
            .alpha_ref
            .iter()
            .map(|s| s.parse::<FracExponent>())
            .collect::<Result<Vec<_>>>()?;
        let topo = TopologicalData {
            mu,
            weight: self.weight,
            alpha_ref,
            n: matrix_from_json("N", &self.n, mu)?,
            s: matrix_from_json("S", &self.s, mu)?,
            kappa: matrix_from_json("kappa", &self.kappa, mu)?,
            pmat: matrix_from_json("Pmat", &self.pmat, mu)?,
        };
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(&format!("C[{k}]"), m, mu))
            .collect::<Result<Vec<_>>>()?;
        Lattice::new(topo, c)
    }
}

pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let j: LatticeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_lattice()
}

pub fn lattice_to_string(lat: &Lattice) -> String {
    serde_json::to_string_pretty(&LatticeJson::from_lattice(lat)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(matches!(parse_lattice("{"), Err(Error::Parse(_))));
        let doc = r#"{"mu":1,"weight":0,"alphaRef":["0"],"N":[[[0,0]]],"S":[[[1,0]]],
                      "kappa":[[[1,0]]],"Pmat":[[[1,0]]],"C":[],"extra":1}"#;
        assert!(matches!(parse_lattice(doc), Err(Error::Parse(_))));
        let doc = r#"{"mu":2,"weight":0,"alphaRef":["0","0"],"N":[[[0,0]]],"S":[[[1,0]]],
                      "kappa":[[[1,0]]],"Pmat":[[[1,0]]]}"#;
        assert!(matches!(parse_lattice(doc), Err(Error::Shape(_))));
    }

    #[test]
    fn minimal_document_parses() {
        let doc = r#"{"mu":1,"weight":0,"alphaRef":["0"],"N":[[[0,0]]],"S":[[[1,0]]],
                      "kappa":[[[1,0]]],"Pmat":[[[1,0]]]}"#;
        let lat = parse_lattice(doc).unwrap();
        assert_eq!(lat.mu(), 1);
        assert!(lat.c.is_empty());
        let again = parse_lattice(&lattice_to_string(&lat)).unwrap();
        assert_eq!(again, lat);
    }
}
