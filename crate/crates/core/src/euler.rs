//! Eulerian checks on straight modules and the localization identity for the
//! Euler operator.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Matrix, Q};
use crate::multigraded::{SignVector, StraightModule};
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerVerdict {
    Eulerian,
    /// `(E - |z|)^order z = 0` for all homogeneous `z`, with `order > 1` minimal.
    GeneralizedEulerian(u32),
    /// A multidegree where no power up to the bound kills `E - |z|`.
    Fails { witness: Vec<i64> },
}

impl EulerVerdict {
    pub fn passes(&self) -> bool {
        !matches!(self, EulerVerdict::Fails { .. })
    }
}

impl fmt::Display for EulerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerVerdict::Eulerian => write!(f, "eulerian"),
            EulerVerdict::GeneralizedEulerian(k) => write!(f, "generalized eulerian of order {k}"),
            EulerVerdict::Fails { witness } => write!(f, "fails at multidegree {witness:?}"),
        }
    }
}

/// Matrix of `E = sum x_i d_i` on the piece at raw multidegree `b`.
pub fn euler_matrix(m: &StraightModule, b: &[i64]) -> Matrix {
    let dim = m.piece_dim(b);
    let mut acc = Matrix::zeros(dim, dim);
    for i in 0..m.n() {
        let mut lower = b.to_vec();
        lower[i] -= 1;
        acc = acc.add(&m.x_action(i, &lower).mul(&m.d_action(i, b)));
    }
    acc
}

/// Evaluates `(E - |a|)^k` on every multidegree `a` whose raw degree lies in
/// `[-2, 1]^n`, for `k` up to `bound`. The region identities behind the
/// extension to all of `Z^n` are re-checked first.
pub fn eulerian_check(m: &StraightModule, bound: u32) -> Result<EulerVerdict> {
    if bound == 0 {
        return Err(Error::InvalidArgument("nilpotency bound must be at least 1".into()));
    }
    m.validate()?;
    let shift = m.offset_sum();
    let mut order = 0;
    for b in StraightModule::validation_box(m.n()) {
        let dim = m.piece_dim(&b);
        if dim == 0 {
            continue;
        }
        let degree: i64 = b.iter().sum::<i64>() - shift;
        let defect = euler_matrix(m, &b).sub(&Matrix::scalar(dim, &q(degree)));
        let mut power = defect.clone();
        let mut k = 1;
        while !power.is_zero() {
            if k == bound {
                let witness = b.iter().zip(m.offset()).map(|(x, c)| x - c).collect();
                return Ok(EulerVerdict::Fails { witness });
            }
            power = power.mul(&defect);
            k += 1;
        }
        order = order.max(k);
    }
    Ok(if order <= 1 { EulerVerdict::Eulerian } else { EulerVerdict::GeneralizedEulerian(order) })
}

/// The Z-shift `l` with `M(l)` generalized Eulerian, or `None` for the zero
/// module or when no shift works.
pub fn ge_offset_detect(m: &StraightModule) -> Result<Option<i64>> {
    let shift = m.offset_sum();
    let Some(b) = StraightModule::validation_box(m.n()).into_iter().find(|b| m.piece_dim(b) > 0) else {
        return Ok(None);
    };
    let degree: i64 = b.iter().sum::<i64>() - shift;
    let e = euler_matrix(m, &b);
    let eigen = e.get(0, 0).clone();
    if e != Matrix::scalar(e.rows(), &eigen) || !eigen.is_integer() {
        return Ok(None);
    }
    let eigen = eigen.to_integer().to_i64().ok_or_else(|| Error::Unsupported("eigenvalue out of range".into()))?;
    let l = degree - eigen;
    let mut c = vec![0; m.n()];
    if let Some(first) = c.first_mut() {
        *first = l;
    }
    Ok(eulerian_check(&m.shift(&c)?, 4)?.passes().then_some(l))
}

/// A Z-homogeneous element: components indexed by raw multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element(pub BTreeMap<Vec<i64>, Vec<Q>>);

impl Element {
    pub fn single(raw: Vec<i64>, vector: Vec<Q>) -> Self {
        let mut e = Element::default();
        e.add_component(raw, vector);
        e
    }

    fn add_component(&mut self, raw: Vec<i64>, vector: Vec<Q>) {
        if vector.iter().all(Zero::is_zero) {
            return;
        }
        match self.0.get_mut(&raw) {
            Some(v) => {
                for (a, b) in v.iter_mut().zip(vector) {
                    *a += b;
                }
                if v.iter().all(Zero::is_zero) {
                    self.0.remove(&raw);
                }
            }
            None => {
                self.0.insert(raw, vector);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree in `m`, an error if components disagree.
    pub fn degree(&self, m: &StraightModule) -> Result<Option<i64>> {
        let shift = m.offset_sum();
        let mut degrees = self.0.keys().map(|b| b.iter().sum::<i64>() - shift);
        let Some(first) = degrees.next() else { return Ok(None) };
        if degrees.any(|d| d != first) {
            return Err(Error::InvalidArgument("sample element is not homogeneous".into()));
        }
        Ok(Some(first))
    }

    fn scale(&self, s: &Q) -> Element {
        let mut out = Element::default();
        for (b, v) in &self.0 {
            out.add_component(b.clone(), v.iter().map(|a| a * s).collect());
        }
        out
    }

    fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (b, v) in &other.0 {
            out.add_component(b.clone(), v.clone());
        }
        out
    }
}

fn vector_matrix(v: &[Q]) -> Matrix {
    Matrix::from_vec(v.len(), 1, v.to_vec())
}

fn column(m: &Matrix) -> Vec<Q> {
    m.column(0)
}

/// Acts by a Weyl algebra element: each normal-form monomial `x^a d^b`
/// applies the `d` part first.
pub fn apply_weyl(m: &StraightModule, a: &WeylElement, z: &Element) -> Result<Element> {
    if a.n() != m.n() {
        return Err(Error::DimensionMismatch("operator and module over different n".into()));
    }
    let mut out = Element::default();
    for (mono, coeff) in a.terms() {
        for (raw, v) in &z.0 {
            let mut b = raw.clone();
            let mut vec = vector_matrix(v);
            for i in 0..m.n() {
                for _ in 0..mono.d[i] {
                    vec = m.d_action(i, &b).mul(&vec);
                    b[i] -= 1;
                }
            }
            for i in 0..m.n() {
                for _ in 0..mono.x[i] {
                    vec = m.x_action(i, &b).mul(&vec);
                    b[i] += 1;
                }
            }
            out.add_component(b, column(&vec.scale(coeff)));
        }
    }
    Ok(out)
}

/// `x^{-1}` of the variables in `vars` (0-based bit mask), defined when each
/// `x_i` acts bijectively.
fn divide(m: &StraightModule, vars: usize, z: &Element) -> Result<Element> {
    let mut out = Element::default();
    for (raw, v) in &z.0 {
        let mut b = raw.clone();
        let mut vec = vector_matrix(v);
        for i in (0..m.n()).filter(|i| vars >> i & 1 == 1) {
            b[i] -= 1;
            let x = m.x_action(i, &b);
            vec = x.inverse().map_err(|_| Error::InvalidArgument(format!("x{} is not invertible here", i + 1)))?.mul(&vec);
        }
        out.add_component(b, column(&vec));
    }
    Ok(out)
}

/// Image of `z` under the canonical map `M -> M_{x_S}`.
fn to_localization(m: &StraightModule, s: usize, z: &Element) -> Result<Element> {
    let iota = crate::cech::localization_map(m, 0, s)?;
    let mut out = Element::default();
    for (raw, v) in &z.0 {
        let e = SignVector::clamp(raw);
        out.add_component(raw.clone(), column(&iota.map(e).mul(&vector_matrix(v))));
    }
    Ok(out)
}

/// Checks `(E - |w| + |f|)^k (w/f) = (1/f) (E - |w|)^k w` in `M_{x_S}` for
/// `k = 1..=power` and homogeneous `w` in `M`, where `f` is the product of
/// the variables in `s_vars`.
pub fn localization_identity_check(
    m: &StraightModule,
    s_vars: &[usize],
    samples: &[Element],
    power: u32,
) -> Result<bool> {
    let s = crate::multigraded::subset_mask(m.n(), s_vars)?;
    let local = m.localize_mask(s);
    let euler = WeylElement::euler(m.n())?;
    let f_degree = s.count_ones() as i64;
    for w in samples {
        for (raw, v) in &w.0 {
            if raw.len() != m.n() || v.len() != m.piece_dim(raw) {
                return Err(Error::DimensionMismatch(format!(
                    "sample component at {raw:?} has length {}, expected {}",
                    v.len(),
                    m.piece_dim(raw)
                )));
            }
        }
        let Some(deg) = w.degree(m)? else { continue };
        let shifted_op = |module: &StraightModule, z: &Element, c: i64| -> Result<Element> {
            Ok(apply_weyl(module, &euler, z)?.add(&z.scale(&q(-c))))
        };
        let mut lhs = divide(&local, s, &to_localization(m, s, w)?)?;
        let mut rhs = w.clone();
        for _ in 0..power {
            lhs = shifted_op(&local, &lhs, deg - f_degree)?;
            rhs = shifted_op(m, &rhs, deg)?;
            if lhs != divide(&local, s, &to_localization(m, s, &rhs)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Random homogeneous elements of `m`: one or two components of equal
/// total degree with small integer coordinates.
pub fn random_samples(m: &StraightModule, count: usize, rng: &mut impl rand::Rng) -> Vec<Element> {
    let n = m.n();
    let mut out = Vec::new();
    let regions: Vec<SignVector> = SignVector::all(n).filter(|e| m.region_dim(*e) > 0).collect();
    if regions.is_empty() {
        return vec![Element::default(); count];
    }
    while out.len() < count {
        let mut w = Element::default();
        let e = regions[rng.gen_range(0..regions.len())];
        let raw: Vec<i64> =
            e.signs().iter().map(|&s| if s < 0 { -rng.gen_range(1..=3) } else { rng.gen_range(0..=3) }).collect();
        let vector = (0..m.piece_dim(&raw)).map(|_| q(rng.gen_range(-3..=3))).collect();
        w.add_component(raw.clone(), vector);
        // a second component moved along a direction of the same region
        if n >= 2 && rng.gen_bool(0.5) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let mut other = raw.clone();
            other[i] += 1;
            other[j] -= 1;
            if SignVector::clamp(&other) == e {
                let vector = (0..m.piece_dim(&other)).map(|_| q(rng.gen_range(-3..=3))).collect();
                w.add_component(other, vector);
            }
        }
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraded::StandardKind;

    fn std(kind: StandardKind, n: usize) -> StraightModule {
        StraightModule::make_standard(&kind, n).unwrap()
    }

    #[test]
    fn standard_modules_are_eulerian() {
        for n in 1..=3 {
            assert_eq!(eulerian_check(&std(StandardKind::R, n), 3).unwrap(), EulerVerdict::Eulerian);
            assert_eq!(eulerian_check(&std(StandardKind::E, n), 3).unwrap(), EulerVerdict::Eulerian);
            let l = std(StandardKind::Localization(vec![1]), n);
            assert_eq!(eulerian_check(&l, 3).unwrap(), EulerVerdict::Eulerian);
        }
    }

    #[test]
    fn shifted_module_fails() {
        let e = std(StandardKind::E, 2).shift(&[1, 1]).unwrap();
        assert!(matches!(eulerian_check(&e, 4).unwrap(), EulerVerdict::Fails { .. }));
        let balanced = std(StandardKind::E, 2).shift(&[1, -1]).unwrap();
        assert_eq!(eulerian_check(&balanced, 4).unwrap(), EulerVerdict::Eulerian);
    }

    #[test]
    fn offset_detection() {
        let e = std(StandardKind::E, 3);
        assert_eq!(ge_offset_detect(&e.shift(&[1, 0, 0]).unwrap()).unwrap(), Some(-1));
        assert_eq!(ge_offset_detect(&e).unwrap(), Some(0));
        assert_eq!(ge_offset_detect(&std(StandardKind::R, 2)).unwrap(), Some(0));
        assert_eq!(ge_offset_detect(&StraightModule::zero(2)).unwrap(), None);
    }

    #[test]
    fn localization_identity_examples() {
        let r = std(StandardKind::R, 1);
        let w = Element::single(vec![2], vec![q(1)]);
        assert!(localization_identity_check(&r, &[1], &[w], 1).unwrap());

        let e = std(StandardKind::E, 1);
        let w = Element::single(vec![-1], vec![q(1)]);
        assert!(localization_identity_check(&e, &[1], std::slice::from_ref(&w), 3).unwrap());
        assert!(localization_identity_check(&e, &[], &[w], 3).unwrap());
        let wrong_length = Element::single(vec![-1], vec![q(1), q(2)]);
        assert!(localization_identity_check(&e, &[1], &[wrong_length], 1).is_err());

        assert!(localization_identity_check(&r, &[1], &[Element::default()], 2).unwrap());
    }

    #[test]
    fn non_homogeneous_sample_rejected() {
        let r = std(StandardKind::R, 2);
        let mut w = Element::single(vec![1, 0], vec![q(1)]);
        w = w.add(&Element::single(vec![1, 1], vec![q(1)]));
        assert!(localization_identity_check(&r, &[1], &[w], 2).is_err());
    }

    #[test]
    fn weyl_action_matches_relation() {
        // [d1, x1] = 1 applied to x1^2 in R
        let r = std(StandardKind::R, 1);
        let z = Element::single(vec![2], vec![q(1)]);
        let comm = WeylElement::d(1, 1).unwrap().commutator(&WeylElement::x(1, 1).unwrap()).unwrap();
        assert_eq!(apply_weyl(&r, &comm, &z).unwrap(), z);
        let d = apply_weyl(&r, &WeylElement::d(1, 1).unwrap(), &z).unwrap();
        assert_eq!(d, Element::single(vec![1], vec![q(2)]));
    }
}
