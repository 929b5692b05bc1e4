//! Straight (signed-region) Z^n-graded modules over the Weyl algebra.
//!
//! A straight module is determined by finitely many vector spaces `V_e`, one
//! for each sign vector `e in {0,-1}^n`, plus "crossing" maps that realize
//! `x_i` and `d_i` where a multidegree passes between `-1` and `0` in
//! direction `i`. With offset `c`, the module is `M(c)` in the sense
//! `M(c)_a = M_{a+c}`: the graded piece at multidegree `a` is `V_{clamp(a+c)}`
//! where `b = a + c` is called the raw multidegree. On raw degrees
//!
//! * `x_i : M_b -> M_{b+e_i}` is the crossing map when `b_i = -1` and the
//!   identity otherwise;
//! * `d_i : M_b -> M_{b-e_i}` is the crossing map when `b_i = 0` and the
//!   scalar `b_i` otherwise.
//!
//! Localizations `R_{x_S}`, the injective hull `E(n)` and every subquotient
//! by multidegree-0 morphisms fit this shape.
//!
//! # Validation
//!
//! Interior steps never change the region, so the Weyl relations reduce to
//! identities between crossing maps:
//!
//! * `[d_i, x_i] = 1` at `b_i = -1` and at `b_i = 0` forces both composites
//!   `d_cross o x_cross` and `x_cross o d_cross` to vanish;
//! * for `i != j` the crossing maps in directions `i` and `j` out of a region
//!   commute (this is `x_i x_j = x_j x_i`, `d_i d_j = d_j d_i` or
//!   `d_i x_j = x_j d_i` depending on the signs).
//!
//! Every case above already occurs for raw degrees in the box `[-2, 1]^n`,
//! which is why [`StraightModule::validate_on_box`] (reconstituted action
//! matrices on the box) and [`StraightModule::validate`] (region identities)
//! agree. Constructors run the region check.

mod dims;
mod json;
mod morphism;

pub use dims::{Dim, GradedDimVector};
pub use json::ModuleJson;
pub use morphism::{homology, Cokernel, Kernel, StraightMorphism};

use crate::error::{Error, Result};
use crate::linalg::{block_diag, q, Matrix};

/// A sign pattern `e in {0,-1}^n`, stored as a bit mask (bit `i` set means
/// `e_i = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector {
    pub n: usize,
    pub mask: usize,
}

impl SignVector {
    pub fn new(n: usize, mask: usize) -> Self {
        debug_assert!(mask < 1 << n);
        SignVector { n, mask }
    }

    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        let mut mask = 0;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                0 => {}
                -1 => mask |= 1 << i,
                _ => return Err(Error::InvalidArgument(format!("sign entries must be 0 or -1, got {s}"))),
            }
        }
        Ok(SignVector { n: signs.len(), mask })
    }

    /// Region of a raw multidegree.
    pub fn clamp(b: &[i64]) -> Self {
        let mask = b.iter().enumerate().filter(|(_, &v)| v < 0).fold(0, |m, (i, _)| m | 1 << i);
        SignVector { n: b.len(), mask }
    }

    pub fn signs(&self) -> Vec<i64> {
        (0..self.n).map(|i| if self.mask >> i & 1 == 1 { -1 } else { 0 }).collect()
    }

    pub fn flip(&self, i: usize) -> Self {
        SignVector { n: self.n, mask: self.mask ^ (1 << i) }
    }

    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << n).map(move |mask| SignVector { n, mask })
    }
}

/// Which standard module to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// The polynomial ring `R`.
    R,
    /// `E(n)`, the shifted injective hull of `R/m`; basis `x^a` with `a <= -1`.
    E,
    /// `R_{x_S}` for `S` given as 1-based variable indices.
    Localization(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraightModule {
    n: usize,
    offset: Vec<i64>,
    dims: Vec<usize>,
    /// `cross[i][mask]` maps `V_mask -> V_{mask ^ (1 << i)}`: it realizes `x_i`
    /// when bit `i` of `mask` is set and `d_i` otherwise.
    cross: Vec<Vec<Matrix>>,
}

pub(crate) fn subset_mask(n: usize, vars: &[usize]) -> Result<usize> {
    let mut mask = 0;
    for &v in vars {
        if v == 0 || v > n {
            return Err(Error::InvalidArgument(format!("variable index {v} out of range 1..={n}")));
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

impl StraightModule {
    /// Builds a module from raw parts and checks all invariants.
    pub fn from_parts(n: usize, offset: Vec<i64>, dims: Vec<usize>, cross: Vec<Vec<Matrix>>) -> Result<Self> {
        let m = StraightModule { n, offset, dims, cross };
        m.validate()?;
        Ok(m)
    }

    pub fn zero(n: usize) -> Self {
        Self::uniform(n, vec![0; 1 << n], |_, _| None)
    }

    /// Modules whose regions have dimension 0 or 1; `cross(i, mask)` gives the
    /// scalar of each crossing map between nonzero regions (`None` for 0).
    fn uniform(n: usize, dims: Vec<usize>, cross: impl Fn(usize, usize) -> Option<i64>) -> Self {
        let cross = (0..n)
            .map(|i| {
                (0..1usize << n)
                    .map(|mask| {
                        let to = mask ^ (1 << i);
                        let mut m = Matrix::zeros(dims[to], dims[mask]);
                        if dims[to] > 0 && dims[mask] > 0 {
                            if let Some(s) = cross(i, mask) {
                                m = Matrix::scalar(1, &q(s));
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        StraightModule { n, offset: vec![0; n], dims, cross }
    }

    pub fn make_standard(kind: &StandardKind, n: usize) -> Result<Self> {
        crate::config::check_vars(n)?;
        let full = (1usize << n) - 1;
        let m = match kind {
            StandardKind::R => Self::uniform(n, (0..=full).map(|m| (m == 0) as usize).collect(), |_, _| None),
            StandardKind::E => Self::uniform(n, (0..=full).map(|m| (m == full) as usize).collect(), |_, _| None),
            StandardKind::Localization(vars) => {
                let s = subset_mask(n, vars)?;
                let dims = (0..=full).map(|m| (m & !s == 0) as usize).collect();
                Self::uniform(n, dims, |i, mask| (mask >> i & 1 == 1).then_some(1))
            }
        };
        m.validate()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> &[i64] {
        &self.offset
    }

    pub fn offset_sum(&self) -> i64 {
        self.offset.iter().sum()
    }

    pub fn region_dim(&self, e: SignVector) -> usize {
        self.dims[e.mask]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The crossing map out of region `mask` in direction `i` (0-based).
    pub fn cross(&self, i: usize, mask: usize) -> &Matrix {
        &self.cross[i][mask]
    }

    /// `x_i` crossing `V_e -> V_{flip_i e}`, defined when `e_i = -1`.
    pub fn xcross(&self, i: usize, e: SignVector) -> Option<&Matrix> {
        (e.mask >> i & 1 == 1).then(|| &self.cross[i][e.mask])
    }

    /// `d_i` crossing `V_e -> V_{flip_i e}`, defined when `e_i = 0`.
    pub fn dcross(&self, i: usize, e: SignVector) -> Option<&Matrix> {
        (e.mask >> i & 1 == 0).then(|| &self.cross[i][e.mask])
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidModule(msg));
        if self.offset.len() != n || self.dims.len() != 1 << n || self.cross.len() != n {
            return bad("shape of offset, region or crossing tables does not match n".into());
        }
        for i in 0..n {
            if self.cross[i].len() != 1 << n {
                return bad(format!("crossing table for direction {} has wrong length", i + 1));
            }
            for mask in 0..1usize << n {
                let m = &self.cross[i][mask];
                let to = mask ^ (1 << i);
                if m.rows() != self.dims[to] || m.cols() != self.dims[mask] {
                    return bad(format!("crossing map {} at region {:?} has wrong shape", i + 1, SignVector::new(n, mask).signs()));
                }
            }
        }
        for i in 0..n {
            for mask in 0..1usize << n {
                let to = mask ^ (1 << i);
                if !self.cross[i][to].mul(&self.cross[i][mask]).is_zero() {
                    return bad(format!(
                        "crossing composite in direction {} at region {:?} is nonzero",
                        i + 1,
                        SignVector::new(n, mask).signs()
                    ));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for mask in 0..1usize << n {
                    let (bi, bj) = (1 << i, 1 << j);
                    let ij = self.cross[j][mask ^ bi].mul(&self.cross[i][mask]);
                    let ji = self.cross[i][mask ^ bj].mul(&self.cross[j][mask]);
                    if ij != ji {
                        return bad(format!(
                            "crossing maps in directions {} and {} do not commute at region {:?}",
                            i + 1,
                            j + 1,
                            SignVector::new(n, mask).signs()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `x_i` on the raw multidegree `b` (0-based `i`).
    pub fn x_action(&self, i: usize, b: &[i64]) -> Matrix {
        let e = SignVector::clamp(b);
        if b[i] == -1 {
            self.cross[i][e.mask].clone()
        } else {
            Matrix::identity(self.dims[e.mask])
        }
    }

    /// `d_i` on the raw multidegree `b` (0-based `i`).
    pub fn d_action(&self, i: usize, b: &[i64]) -> Matrix {
        let e = SignVector::clamp(b);
        if b[i] == 0 {
            self.cross[i][e.mask].clone()
        } else {
            Matrix::scalar(self.dims[e.mask], &q(b[i]))
        }
    }

    pub fn piece_dim(&self, b: &[i64]) -> usize {
        self.dims[SignVector::clamp(b).mask]
    }

    /// Raw multidegrees of the box `[-2, 1]^n`.
    pub fn validation_box(n: usize) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (-2..=1).map(move |t| {
                        let mut w = v.clone();
                        w.push(t);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Checks the Weyl relations on reconstituted action matrices at every
    /// raw multidegree of the validation box.
    pub fn validate_on_box(&self) -> Result<()> {
        let n = self.n;
        let step = |b: &[i64], i: usize, delta: i64| {
            let mut c = b.to_vec();
            c[i] += delta;
            c
        };
        for b in Self::validation_box(n) {
            let id = Matrix::identity(self.piece_dim(&b));
            for i in 0..n {
                let dx = self.d_action(i, &step(&b, i, 1)).mul(&self.x_action(i, &b));
                let xd = self.x_action(i, &step(&b, i, -1)).mul(&self.d_action(i, &b));
                if dx.sub(&xd) != id {
                    return Err(Error::InvalidModule(format!("[d{0}, x{0}] != 1 at raw degree {b:?}", i + 1)));
                }
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let checks = [
                        (
                            self.x_action(i, &step(&b, j, 1)).mul(&self.x_action(j, &b)),
                            self.x_action(j, &step(&b, i, 1)).mul(&self.x_action(i, &b)),
                            "x x",
                        ),
                        (
                            self.d_action(i, &step(&b, j, -1)).mul(&self.d_action(j, &b)),
                            self.d_action(j, &step(&b, i, -1)).mul(&self.d_action(i, &b)),
                            "d d",
                        ),
                        (
                            self.d_action(i, &step(&b, j, 1)).mul(&self.x_action(j, &b)),
                            self.x_action(j, &step(&b, i, -1)).mul(&self.d_action(i, &b)),
                            "d x",
                        ),
                    ];
                    for (lhs, rhs, what) in checks {
                        if lhs != rhs {
                            return Err(Error::InvalidModule(format!(
                                "{what} relation fails for directions {} {} at raw degree {b:?}",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `M(c)`: all Z-graded dimensions move by `dim M(c)_d = dim M_{d + sum c}`.
    pub fn shift(&self, c: &[i64]) -> Result<Self> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch(format!("shift vector of length {} for n = {}", c.len(), self.n)));
        }
        let mut out = self.clone();
        for (o, s) in out.offset.iter_mut().zip(c) {
            *o += s;
        }
        Ok(out)
    }

    pub(crate) fn with_offset(&self, offset: Vec<i64>) -> Self {
        let mut out = self.clone();
        out.offset = offset;
        out
    }

    /// Inverts `x_i` for the 1-based indices in `vars`.
    pub fn localize(&self, vars: &[usize]) -> Result<Self> {
        let s = subset_mask(self.n, vars)?;
        Ok(self.localize_mask(s))
    }

    pub(crate) fn localize_mask(&self, s: usize) -> Self {
        let n = self.n;
        let dims: Vec<usize> = (0..1usize << n).map(|m| self.dims[m & !s]).collect();
        let cross = (0..n)
            .map(|i| {
                (0..1usize << n)
                    .map(|mask| {
                        if s >> i & 1 == 1 {
                            if mask >> i & 1 == 1 {
                                Matrix::identity(dims[mask])
                            } else {
                                Matrix::zeros(dims[mask ^ (1 << i)], dims[mask])
                            }
                        } else {
                            self.cross[i][mask & !s].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        StraightModule { n, offset: self.offset.clone(), dims, cross }
    }

    /// Direct sum of modules with equal `n` and offset.
    pub fn direct_sum(parts: &[StraightModule]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
        let n = first.n;
        if parts.iter().any(|p| p.n != n || p.offset != first.offset) {
            return Err(Error::DimensionMismatch("direct sum needs equal n and offset".into()));
        }
        let dims = (0..1usize << n).map(|m| parts.iter().map(|p| p.dims[m]).sum()).collect();
        let cross = (0..n)
            .map(|i| {
                (0..1usize << n)
                    .map(|mask| block_diag(&parts.iter().map(|p| p.cross[i][mask].clone()).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        Ok(StraightModule { n, offset: first.offset.clone(), dims, cross })
    }

    /// Restriction to the raw multidegrees whose sign in each direction of
    /// `fixed` (bit mask) equals the corresponding bit of `values`, viewed as a
    /// straight module in the remaining directions (kept in increasing order).
    pub fn slice(&self, fixed: usize, values: usize) -> StraightModule {
        let remaining = self.remaining(fixed);
        let m = remaining.len();
        let dims = (0..1usize << m).map(|sub| self.dims[expand(&remaining, fixed, values, sub)]).collect();
        let cross = remaining
            .iter()
            .map(|&r| (0..1usize << m).map(|sub| self.cross[r][expand(&remaining, fixed, values, sub)].clone()).collect())
            .collect();
        let offset = remaining.iter().map(|&r| self.offset[r]).collect();
        StraightModule { n: m, offset, dims, cross }
    }

    /// The crossing map in the fixed direction `dir` (0-based) as a morphism
    /// `slice(fixed, values) -> slice(fixed, values ^ (1 << dir))`.
    pub fn slice_crossing(&self, fixed: usize, values: usize, dir: usize) -> Result<StraightMorphism> {
        if fixed >> dir & 1 == 0 {
            return Err(Error::InvalidArgument(format!("direction {} is not fixed", dir + 1)));
        }
        let remaining = self.remaining(fixed);
        let maps = (0..1usize << remaining.len())
            .map(|sub| self.cross[dir][expand(&remaining, fixed, values, sub)].clone())
            .collect();
        StraightMorphism::new(self.slice(fixed, values), self.slice(fixed, values ^ (1 << dir)), maps)
    }

    fn remaining(&self, fixed: usize) -> Vec<usize> {
        (0..self.n).filter(|i| fixed >> i & 1 == 0).collect()
    }

    /// Number of raw multidegrees in region `e` with coordinate sum `total`.
    fn region_count(e: SignVector, total: i64) -> Dim {
        let q = e.mask.count_ones() as i64;
        let p = e.n as i64 - q;
        let simplex = |k: i64, s: i64| -> u64 {
            // nonnegative integer k-tuples with sum s
            if s < 0 {
                0
            } else if k == 0 {
                (s == 0) as u64
            } else {
                binom((s + k - 1) as u64, (k - 1) as u64)
            }
        };
        if p > 0 && q > 0 {
            Dim::Infinite
        } else if q == 0 {
            Dim::Finite(simplex(p, total))
        } else {
            Dim::Finite(simplex(q, -total - q))
        }
    }

    /// Z-graded dimensions on the window `[lo, hi]`, by lattice-point counts
    /// per region.
    pub fn graded_dimensions(&self, lo: i64, hi: i64) -> GradedDimVector {
        let shift = self.offset_sum();
        let mut out = GradedDimVector::new();
        for e in SignVector::all(self.n) {
            let k = self.dims[e.mask] as u64;
            if k == 0 {
                continue;
            }
            for d in lo..=hi {
                out.add_at(d, Self::region_count(e, d + shift).times(k));
            }
        }
        out
    }

    /// `Some(a)` iff the module is `E(n)^a` (the zero module gives `a = 0`).
    pub fn is_e_power(&self) -> Option<usize> {
        let full = (1usize << self.n) - 1;
        if self.dims.iter().enumerate().any(|(m, &d)| m != full && d > 0) {
            return None;
        }
        if self.dims[full] > 0 && self.offset_sum() != 0 {
            return None;
        }
        Some(self.dims[full])
    }

    /// True iff every element is killed by a power of each `x_i`.
    pub fn supported_at_m(&self) -> bool {
        let full = (1usize << self.n) - 1;
        self.dims.iter().enumerate().all(|(m, &d)| m == full || d == 0)
    }

    pub fn identity(&self) -> StraightMorphism {
        StraightMorphism::identity(self)
    }
}

/// Full region mask from a sub-mask over the `remaining` directions.
fn expand(remaining: &[usize], fixed: usize, values: usize, sub: usize) -> usize {
    remaining.iter().enumerate().fold(values & fixed, |acc, (k, &r)| acc | ((sub >> k & 1) << r))
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(kind: StandardKind, n: usize) -> StraightModule {
        StraightModule::make_standard(&kind, n).unwrap()
    }

    #[test]
    fn polynomial_ring_dims() {
        let r = std(StandardKind::R, 2);
        assert_eq!(r.region_dim(SignVector::new(2, 0)), 1);
        assert_eq!(r.graded_dimensions(0, 3), GradedDimVector::finite(&[(0, 1), (1, 2), (2, 3), (3, 4)]));
        let r3 = std(StandardKind::R, 3);
        assert_eq!(r3.graded_dimensions(0, 2), GradedDimVector::finite(&[(0, 1), (1, 3), (2, 6)]));
    }

    #[test]
    fn injective_hull_dims() {
        let e = std(StandardKind::E, 2);
        assert_eq!(e.graded_dimensions(-4, 0), GradedDimVector::finite(&[(-2, 1), (-3, 2), (-4, 3)]));
        let e3 = std(StandardKind::E, 3);
        assert_eq!(e3.graded_dimensions(-4, -3), GradedDimVector::finite(&[(-3, 1), (-4, 3)]));
    }

    #[test]
    fn laurent_dims() {
        let l = std(StandardKind::Localization(vec![1]), 1);
        assert_eq!(l.region_dim(SignVector::new(1, 0)), 1);
        assert_eq!(l.region_dim(SignVector::new(1, 1)), 1);
        assert_eq!(l.graded_dimensions(-3, 3), GradedDimVector::finite(&[(-3, 1), (-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (3, 1)]));
        let l2 = std(StandardKind::Localization(vec![1]), 2);
        let v = l2.graded_dimensions(-1, 1);
        assert!((-1..=1).all(|d| v.get(d) == Dim::Infinite));
    }

    #[test]
    fn shift_moves_degrees() {
        let r = std(StandardKind::R, 2);
        assert_eq!(r.shift(&[0, 0]).unwrap(), r);
        let e = std(StandardKind::E, 1);
        let s = e.shift(&[1]).unwrap();
        assert_eq!(s.graded_dimensions(-3, 0), GradedDimVector::finite(&[(-2, 1), (-3, 1)]));
        assert_eq!(s.shift(&[-1]).unwrap(), e);
    }

    #[test]
    fn standard_modules_pass_box_validation() {
        for n in 1..=3 {
            for kind in [StandardKind::R, StandardKind::E, StandardKind::Localization(vec![1]), StandardKind::Localization((1..=n).collect())] {
                std(kind, n).validate_on_box().unwrap();
            }
        }
    }

    #[test]
    fn bad_crossing_rejected() {
        // R_x with d crossing forced to the identity violates [d, x] = 1
        let l = std(StandardKind::Localization(vec![1]), 1);
        let mut cross = l.cross.clone();
        cross[0][0] = Matrix::identity(1);
        let err = StraightModule::from_parts(1, vec![0], l.dims.clone(), cross).unwrap_err();
        assert!(matches!(err, Error::InvalidModule(_)));
    }

    #[test]
    fn e_power_recognizer() {
        let e = std(StandardKind::E, 2);
        assert_eq!(e.is_e_power(), Some(1));
        assert_eq!(std(StandardKind::R, 2).is_e_power(), None);
        assert_eq!(StraightModule::direct_sum(&[e.clone(), e.clone()]).unwrap().is_e_power(), Some(2));
        assert_eq!(e.shift(&[1, 0]).unwrap().is_e_power(), None);
        assert_eq!(e.shift(&[1, -1]).unwrap().is_e_power(), Some(1));
        assert_eq!(StraightModule::zero(2).is_e_power(), Some(0));
    }

    #[test]
    fn localization_examples() {
        let r = std(StandardKind::R, 1);
        assert_eq!(r.localize(&[1]).unwrap(), std(StandardKind::Localization(vec![1]), 1));
        let e = std(StandardKind::E, 2);
        assert!(e.localize(&[1]).unwrap().is_zero());
        assert_eq!(e.localize(&[]).unwrap(), e);
        let l = r.localize(&[1]).unwrap();
        assert_eq!(l.localize(&[1]).unwrap(), l);
    }

    #[test]
    fn support_test() {
        assert!(std(StandardKind::E, 2).supported_at_m());
        assert!(!std(StandardKind::R, 2).supported_at_m());
        assert!(!std(StandardKind::Localization(vec![1]), 2).supported_at_m());
    }

    #[test]
    fn direct_sum_dims_add() {
        let r = std(StandardKind::R, 2);
        let l = std(StandardKind::Localization(vec![2]), 2);
        let s = StraightModule::direct_sum(&[r.clone(), l.clone()]).unwrap();
        assert_eq!(s.graded_dimensions(-2, 2), &r.graded_dimensions(-2, 2) + &l.graded_dimensions(-2, 2));
    }
}
