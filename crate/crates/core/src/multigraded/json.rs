//! JSON document for straight modules.
//!
//! ```json
//! {"n": 1, "offset": [0],
//!  "regions": [{"sign": [0], "dim": 1}, {"sign": [-1], "dim": 1}],
//!  "xcross": [{"dir": 1, "from": [-1], "matrix": [["1"]]}],
//!  "dcross": []}
//! ```
//!
//! Directions are 1-based, rationals are strings `p` or `p/q`. Regions and
//! crossing maps that are omitted are zero.

use serde::{Deserialize, Serialize};

use super::{SignVector, StraightModule};
use crate::error::{Error, Result};
use crate::linalg::{format_q, parse_q, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub n: usize,
    pub offset: Vec<i64>,
    pub regions: Vec<RegionJson>,
    #[serde(default)]
    pub xcross: Vec<CrossJson>,
    #[serde(default)]
    pub dcross: Vec<CrossJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub sign: Vec<i64>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossJson {
    pub dir: usize,
    pub from: Vec<i64>,
    pub matrix: Vec<Vec<String>>,
}

impl From<&StraightModule> for ModuleJson {
    fn from(m: &StraightModule) -> Self {
        let regions = SignVector::all(m.n)
            .filter(|e| m.dims[e.mask] > 0)
            .map(|e| RegionJson { sign: e.signs(), dim: m.dims[e.mask] })
            .collect();
        let (mut xcross, mut dcross) = (Vec::new(), Vec::new());
        for i in 0..m.n {
            for e in SignVector::all(m.n) {
                let mat = &m.cross[i][e.mask];
                if mat.rows() == 0 || mat.cols() == 0 || mat.is_zero() {
                    continue;
                }
                let entry = CrossJson {
                    dir: i + 1,
                    from: e.signs(),
                    matrix: mat.to_rows().iter().map(|r| r.iter().map(format_q).collect()).collect(),
                };
                if e.mask >> i & 1 == 1 {
                    xcross.push(entry);
                } else {
                    dcross.push(entry);
                }
            }
        }
        ModuleJson { n: m.n, offset: m.offset.clone(), regions, xcross, dcross }
    }
}

impl TryFrom<&ModuleJson> for StraightModule {
    type Error = Error;

    fn try_from(doc: &ModuleJson) -> Result<Self> {
        let n = doc.n;
        crate::config::check_vars(n)?;
        if doc.offset.len() != n {
            return Err(Error::InvalidModule("offset length differs from n".into()));
        }
        let region = |signs: &[i64]| -> Result<usize> {
            if signs.len() != n {
                return Err(Error::InvalidModule(format!("sign vector {signs:?} has wrong length")));
            }
            Ok(SignVector::from_signs(signs)?.mask)
        };
        let mut dims = vec![0; 1 << n];
        for r in &doc.regions {
            dims[region(&r.sign)?] = r.dim;
        }
        let mut cross: Vec<Vec<Matrix>> = (0..n)
            .map(|i| (0..1usize << n).map(|m| Matrix::zeros(dims[m ^ (1 << i)], dims[m])).collect())
            .collect();
        for (entries, expect_set) in [(&doc.xcross, true), (&doc.dcross, false)] {
            for c in entries {
                if c.dir == 0 || c.dir > n {
                    return Err(Error::InvalidModule(format!("crossing direction {} out of range", c.dir)));
                }
                let i = c.dir - 1;
                let mask = region(&c.from)?;
                if (mask >> i & 1 == 1) != expect_set {
                    return Err(Error::InvalidModule(format!(
                        "crossing in direction {} listed from a region with the wrong sign",
                        c.dir
                    )));
                }
                let rows = c.matrix.iter().map(|r| r.iter().map(|s| parse_q(s)).collect()).collect::<Result<Vec<_>>>()?;
                let mat = Matrix::from_rows(rows)?;
                let expected = &cross[i][mask];
                let same_shape = (mat.rows(), mat.cols()) == (expected.rows(), expected.cols());
                let both_empty = mat.rows() == 0 && expected.rows() * expected.cols() == 0;
                if !(same_shape || both_empty) {
                    return Err(Error::InvalidModule(format!(
                        "crossing matrix in direction {} has shape {}x{}, expected {}x{}",
                        c.dir,
                        mat.rows(),
                        mat.cols(),
                        expected.rows(),
                        expected.cols()
                    )));
                }
                if same_shape {
                    cross[i][mask] = mat;
                }
            }
        }
        StraightModule::from_parts(n, doc.offset.clone(), dims, cross)
    }
}

impl StraightModule {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModuleJson::from(self)).expect("module document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModuleJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        StraightModule::try_from(&doc)
    }
}
