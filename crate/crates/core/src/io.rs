//! JSON shapes for matrices, blocks and complex vectors.
//!
//! A matrix is `{"rows": n, "cols": n, "re": [[..]], "im": [[..]]}` with
//! `im` optional (zeros when absent). A 2×2 block operator is
//! `{"t11": .., "t12": .., "t21": .., "t22": ..}` with each entry a matrix.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, CVec};
use crate::operator::Operator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMat> {
        check_grid(&self.re, self.rows, self.cols, "re")?;
        if let Some(im) = &self.im {
            check_grid(im, self.rows, self.cols, "im")?;
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |g| g[i][j]);
            c64(self.re[i][j], im)
        }))
    }

    pub fn from_matrix(m: &CMat) -> Self {
        let (rows, cols) = m.shape();
        let re = (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].re).collect()).collect();
        let im: Vec<Vec<f64>> =
            (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].im).collect()).collect();
        let has_im = im.iter().flatten().any(|&v| v != 0.0);
        Self { rows, cols, re, im: has_im.then_some(im) }
    }
}

fn check_grid(g: &[Vec<f64>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if g.len() != rows || g.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("\"{what}\" does not match declared shape {rows}x{cols}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockJson {
    pub t11: MatrixJson,
    pub t12: MatrixJson,
    pub t21: MatrixJson,
    pub t22: MatrixJson,
}

impl BlockJson {
    pub fn to_operators(&self) -> Result<[Operator; 4]> {
        Ok([
            Operator::new(self.t11.to_matrix()?)?,
            Operator::new(self.t12.to_matrix()?)?,
            Operator::new(self.t21.to_matrix()?)?,
            Operator::new(self.t22.to_matrix()?)?,
        ])
    }
}

/// Complex vector as parallel real/imaginary arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VecJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CVec> for VecJson {
    fn from(v: &CVec) -> Self {
        Self { re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() }
    }
}

impl VecJson {
    pub fn to_vector(&self) -> Result<CVec> {
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("vector re/im lengths differ".into()));
        }
        Ok(CVec::from_iterator(self.re.len(), self.re.iter().zip(&self.im).map(|(&r, &i)| c64(r, i))))
    }
}

pub fn parse_matrix(text: &str) -> Result<CMat> {
    serde_json::from_str::<MatrixJson>(text)?.to_matrix()
}

pub fn read_matrix(path: &Path) -> Result<CMat> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_operator(path: &Path) -> Result<Operator> {
    Operator::new(read_matrix(path)?)
}

pub fn matrix_to_json(m: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn im_defaults_to_zero() {
        let m = parse_matrix(r#"{"rows":2,"cols":2,"re":[[1,0],[0,2]]}"#).unwrap();
        assert_eq!(m[(1, 1)], c64(2.0, 0.0));
        assert_eq!(m[(0, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn complex_entries_survive() {
        let m = parse_matrix(r#"{"rows":1,"cols":2,"re":[[1,2]],"im":[[0.5,-3]]}"#).unwrap();
        let back = parse_matrix(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn shape_mismatch_is_a_parse_error() {
        let err = parse_matrix(r#"{"rows":2,"cols":2,"re":[[1,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = parse_matrix(r#"{"rows":1,"cols":1,"re":[[1]],"im":[[1,2]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(matches!(parse_matrix("not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn block_json_parses() {
        let z = r#"{"rows":1,"cols":1,"re":[[0]]}"#;
        let one = r#"{"rows":1,"cols":1,"re":[[1]]}"#;
        let text = format!(r#"{{"t11":{one},"t12":{z},"t21":{z},"t22":{one}}}"#);
        let b: BlockJson = serde_json::from_str(&text).unwrap();
        let ops = b.to_operators().unwrap();
        assert_eq!(ops[0], Operator::identity(1));
    }
}
