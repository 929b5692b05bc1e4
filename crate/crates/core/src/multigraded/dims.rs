use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Dimension of a graded piece. Localizations legitimately have
/// infinite-dimensional Z-graded pieces; those are never truncated.
/// Serialized as an integer or the string `"infinite"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl Serialize for Dim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dim::Finite(d) => s.serialize_u64(*d),
            Dim::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(Dim::Finite(k)),
            Raw::Text(t) if t == "infinite" => Ok(Dim::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad dimension {t:?}"))),
        }
    }
}

impl Dim {
    pub fn is_zero(&self) -> bool {
        matches!(self, Dim::Finite(0))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Dim::Finite(d) => Some(*d),
            Dim::Infinite => None,
        }
    }

    pub fn times(&self, k: u64) -> Dim {
        match self {
            _ if k == 0 => Dim::Finite(0),
            Dim::Finite(d) => Dim::Finite(d * k),
            Dim::Infinite => Dim::Infinite,
        }
    }
}

impl Add for Dim {
    type Output = Dim;

    fn add(self, rhs: Dim) -> Dim {
        match (self, rhs) {
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a + b),
            _ => Dim::Infinite,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Infinite => write!(f, "inf"),
        }
    }
}

/// Total degree to dimension; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDimVector(BTreeMap<i64, Dim>);

impl GradedDimVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Dim)>) -> Self {
        let mut v = Self::new();
        for (d, dim) in pairs {
            v.add_at(d, dim);
        }
        v
    }

    pub fn finite(pairs: &[(i64, u64)]) -> Self {
        Self::from_pairs(pairs.iter().map(|&(d, k)| (d, Dim::Finite(k))))
    }

    pub fn get(&self, degree: i64) -> Dim {
        self.0.get(&degree).copied().unwrap_or(Dim::Finite(0))
    }

    pub fn add_at(&mut self, degree: i64, dim: Dim) {
        if dim.is_zero() {
            return;
        }
        let e = self.0.entry(degree).or_insert(Dim::Finite(0));
        *e = *e + dim;
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Dim)> + '_ {
        self.0.iter().map(|(&d, &k)| (d, k))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.keys().copied()
    }

    /// Re-indexes every entry by `degree + by`.
    pub fn shifted(&self, by: i64) -> Self {
        GradedDimVector(self.0.iter().map(|(&d, &k)| (d + by, k)).collect())
    }

    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        GradedDimVector(self.0.range(lo..=hi).map(|(&d, &k)| (d, k)).collect())
    }

    /// Sum of all finite entries, `None` if some entry is infinite.
    pub fn total(&self) -> Option<u64> {
        self.0.values().map(Dim::finite).sum()
    }

    /// True when every nonzero entry sits at `degree`.
    pub fn concentrated_in(&self, degree: i64) -> bool {
        self.0.keys().all(|&d| d == degree)
    }
}

impl Add for &GradedDimVector {
    type Output = GradedDimVector;

    fn add(self, rhs: &GradedDimVector) -> GradedDimVector {
        let mut out = self.clone();
        for (d, k) in rhs.iter() {
            out.add_at(d, k);
        }
        out
    }
}

impl fmt::Display for GradedDimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(d, k)| format!("{d}:{k}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_dropped() {
        let v = GradedDimVector::finite(&[(0, 0), (1, 2)]);
        assert_eq!(v.degrees().collect::<Vec<_>>(), vec![1]);
        assert!(v.concentrated_in(1));
    }

    #[test]
    fn infinite_absorbs() {
        assert_eq!(Dim::Finite(3) + Dim::Infinite, Dim::Infinite);
        let v = GradedDimVector::from_pairs([(0, Dim::Infinite), (1, Dim::Finite(1))]);
        assert_eq!(v.total(), None);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"0":"infinite","1":1}"#);
    }
}
