//! Free complexes over `A_n` and the dual of the Koszul resolution of `R`.

use std::collections::BTreeMap;

use num_traits::One;

use super::cyclic::Side;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};
use crate::multigraded::{Dim, GradedDimVector, StandardKind, StraightModule};
use crate::report::{Instance, Verdict};
use crate::weyl::{WeylElement, WeylMonomial};

/// A bounded complex of graded free `A_n`-modules.
///
/// Spot `p` has generators of degrees `degrees[p]`. For a left complex the
/// differential goes `p -> p - 1` and acts by right multiplication:
/// `a e_j -> sum_i a * maps[p][i][j] e_i`. For a right complex it goes
/// `p -> p + 1` and acts by left multiplication:
/// `e_j a -> sum_i e_i maps[p][i][j] * a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub n: usize,
    pub side: Side,
    pub degrees: Vec<Vec<i64>>,
    pub maps: Vec<Vec<Vec<WeylElement>>>,
}

/// Subsets of `{0..n-1}` of size `p`, as sorted lists, in mask order.
fn subsets(n: usize, p: usize) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() as usize == p).collect()
}

impl FreeComplex {
    /// The Koszul complex of `A_n` on `d_1, ..., d_n`; it resolves `R` with
    /// `e_S` in degree `-|S|`.
    pub fn koszul_of_d(n: usize) -> Result<Self> {
        let zero = WeylElement::zero(n)?;
        let degrees = (0..=n).map(|p| vec![-(p as i64); subsets(n, p).len()]).collect();
        let mut maps = vec![Vec::new()];
        for p in 1..=n {
            let (src, tgt) = (subsets(n, p), subsets(n, p - 1));
            let mut mat = vec![vec![zero.clone(); src.len()]; tgt.len()];
            for (j, &s) in src.iter().enumerate() {
                for k in (0..n).filter(|k| s >> k & 1 == 1) {
                    let i = tgt.iter().position(|&t| t == s & !(1 << k)).expect("face");
                    let d = WeylElement::d(n, k + 1)?;
                    let before = (s & ((1 << k) - 1)).count_ones();
                    mat[i][j] = if before % 2 == 0 { d } else { d.neg() };
                }
            }
            maps.push(mat);
        }
        Ok(FreeComplex { n, side: Side::Left, degrees, maps })
    }

    /// `Hom_A(-, A)` of a left complex: a right complex with generators in
    /// the negated degrees and transposed differentials.
    pub fn dual(&self) -> Result<Self> {
        if self.side != Side::Left {
            return Err(Error::Unsupported("only left complexes are dualized".into()));
        }
        let degrees = self.degrees.iter().map(|ds| ds.iter().map(|d| -d).collect()).collect();
        let top = self.degrees.len();
        // right spot p -> p + 1 is the transpose of left p + 1 -> p
        let maps = (0..top)
            .map(|p| {
                if p + 1 < top {
                    let m = &self.maps[p + 1];
                    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
                    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Ok(FreeComplex { n: self.n, side: Side::Right, degrees, maps })
    }

    pub fn spots(&self) -> usize {
        self.degrees.len()
    }

    /// Matrix of the differential out of spot `p`, if any.
    fn differential(&self, p: usize) -> Option<&Vec<Vec<WeylElement>>> {
        match self.side {
            Side::Left if p >= 1 => self.maps.get(p),
            Side::Right if p + 1 < self.spots() => self.maps.get(p),
            _ => None,
        }
    }

    fn target(&self, p: usize) -> usize {
        match self.side {
            Side::Left => p - 1,
            Side::Right => p + 1,
        }
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn check_d_squared(&self) -> Result<bool> {
        for p in 0..self.spots() {
            let Some(first) = self.differential(p) else { continue };
            let mid = self.target(p);
            let Some(second) = self.differential(mid) else { continue };
            let end = self.degrees[self.target(mid)].len();
            for j in 0..self.degrees[p].len() {
                for out_row in second.iter().take(end) {
                    let mut acc = WeylElement::zero(self.n)?;
                    for (i, row) in first.iter().enumerate() {
                        let term = match self.side {
                            Side::Left => row[j].multiply(&out_row[i])?,
                            Side::Right => out_row[i].multiply(&row[j])?,
                        };
                        acc = acc.add(&term)?;
                    }
                    if !acc.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Basis of spot `p` in degree `d` with `d`-order at most `bound`:
    /// pairs of generator index and monomial coefficient.
    fn truncated_basis(&self, p: usize, d: i64, bound: u32) -> Vec<(usize, WeylMonomial)> {
        let mut out = Vec::new();
        for (g, &gd) in self.degrees[p].iter().enumerate() {
            for mono in monomials(self.n, d - gd, bound) {
                out.push((g, mono));
            }
        }
        out
    }

    /// Matrix of the differential out of spot `p` (right complexes) from the
    /// degree-`d` part of order at most `bound` into order at most `bound + 1`.
    fn truncated_matrix(&self, p: usize, d: i64, bound: u32) -> Result<Matrix> {
        let src = self.truncated_basis(p, d, bound);
        let Some(diff) = self.differential(p) else { return Ok(Matrix::zeros(0, src.len())) };
        let tgt = self.truncated_basis(self.target(p), d, bound + 1);
        let index: BTreeMap<(usize, WeylMonomial), usize> = tgt.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (col, (g, mono)) in src.iter().enumerate() {
            let a = WeylElement::monomial(self.n, *mono, Q::one())?;
            for (i, row) in diff.iter().enumerate() {
                let image = match self.side {
                    Side::Right => row[*g].multiply(&a)?,
                    Side::Left => a.multiply(&row[*g])?,
                };
                for (tm, c) in image.terms() {
                    let r = index.get(&(i, *tm)).ok_or_else(|| Error::InvalidArgument("image leaves the truncation".into()))?;
                    let v = m.get(*r, col) + c;
                    m.set(*r, col, v);
                }
            }
        }
        Ok(m)
    }

    /// Dimension of the degree-`d` cohomology at spot `p` of a right
    /// complex, from cocycles of order `<= bound` modulo coboundaries of
    /// order `<= bound - 1`.
    pub fn truncated_cohomology(&self, p: usize, d: i64, bound: u32) -> Result<usize> {
        if self.side != Side::Right {
            return Err(Error::Unsupported("truncated cohomology is for right complexes".into()));
        }
        let out = self.truncated_matrix(p, d, bound)?;
        let cocycles = out.cols() - out.rank();
        let boundaries = if p == 0 || bound == 0 { 0 } else { self.truncated_matrix(p - 1, d, bound - 1)?.rank() };
        Ok(cocycles - boundaries)
    }
}

/// Monomials `x^a d^b` over `n` variables of degree `degree` and
/// `|b| <= bound`.
fn monomials(n: usize, degree: i64, bound: u32) -> Vec<WeylMonomial> {
    let mut out = Vec::new();
    for s in 0..=bound as i64 {
        let xs = degree + s;
        if xs < 0 {
            continue;
        }
        for beta in compositions(n, s as u32) {
            for alpha in compositions(n, xs as u32) {
                let mut m = WeylMonomial::ONE;
                for i in 0..n {
                    m.x[i] = alpha[i] as u16;
                    m.d[i] = beta[i] as u16;
                }
                out.push(m);
            }
        }
    }
    out
}

/// Weak compositions of `total` into `parts` parts.
fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Dimension of the top cohomology in degree `d`, read off as the span of
/// the `d`-free normal forms modulo `sum_i d_i A` of the top spot.
fn top_cohomology_by_normal_form(dual: &FreeComplex, d: i64, bound: u32) -> Result<usize> {
    let top = dual.spots() - 1;
    let mut reps: Vec<WeylElement> = Vec::new();
    for (_, mono) in dual.truncated_basis(top, d, bound) {
        let nf = WeylElement::monomial(dual.n, mono, Q::one())?.normal_form_mod_da();
        if !nf.is_zero() {
            reps.push(nf);
        }
    }
    let mut support: Vec<WeylMonomial> = reps.iter().flat_map(|r| r.terms().map(|(m, _)| *m)).collect();
    support.sort();
    support.dedup();
    let rows: Vec<Vec<Q>> = reps.iter().map(|r| support.iter().map(|m| r.coefficient(m)).collect()).collect();
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(rows)?.rank())
}

/// Verifies that the dual of the Koszul resolution of `R` has cohomology
/// only at the top spot, equal to `R^r(-n)`, on the degree window
/// `[n - 2, n + 2]` around its generator.
pub fn dual_of_r_check(n: usize) -> Result<Instance> {
    let complex = FreeComplex::koszul_of_d(n)?;
    let dual = complex.dual()?;
    let (lo, hi) = (n as i64 - 2, n as i64 + 2);
    let bound = if n <= 2 { 3 } else { 2 };
    let r_shifted = StraightModule::make_standard(&StandardKind::R, n)?.shift(&{
        let mut c = vec![0; n];
        c[0] = -(n as i64);
        c
    })?;
    let expected = r_shifted.graded_dimensions(lo, hi);

    let mut problems = Vec::new();
    if !complex.check_d_squared()? {
        problems.push("Koszul differential does not square to zero".to_string());
    }
    if !dual.check_d_squared()? {
        problems.push("dual differential does not square to zero".to_string());
    }
    // coboundaries into the top spot lie in sum_i d_i A
    if let Some(last) = dual.differential(n.saturating_sub(1)).filter(|_| n >= 1) {
        for row in last {
            for entry in row {
                if !entry.normal_form_mod_da().is_zero() {
                    problems.push(format!("coboundary entry {entry} is not in dA"));
                }
            }
        }
    }
    let mut tables = BTreeMap::new();
    for p in 0..=n {
        let mut v = GradedDimVector::new();
        for d in lo..=hi {
            v.add_at(d, Dim::Finite(dual.truncated_cohomology(p, d, bound)? as u64));
        }
        if p == n {
            if v != expected {
                problems.push(format!("top cohomology {v} differs from R^r(-{n}) {expected}"));
            }
            let mut by_nf = GradedDimVector::new();
            for d in lo..=hi {
                by_nf.add_at(d, Dim::Finite(top_cohomology_by_normal_form(&dual, d, bound)? as u64));
            }
            if by_nf != v {
                problems.push(format!("normal-form count {by_nf} differs from rank count {v}"));
            }
        } else if !v.is_zero() {
            problems.push(format!("spot {p} has cohomology {v}"));
        }
        if !v.is_zero() {
            tables.insert(p, v);
        }
    }
    let mut inst = Instance::new("lemma-dual-r", format!("Hom dual of the Koszul resolution of R, n={n}"), Verdict::from_bool(problems.is_empty()))
        .with_tables(tables)
        .with_expected(n as i64);
    if !problems.is_empty() {
        inst = inst.with_detail(problems.join("; "));
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `R` moved up by `n`, computed without offsets.
    fn shifted_r_dims(n: usize, lo: i64, hi: i64) -> GradedDimVector {
        let r = StraightModule::make_standard(&StandardKind::R, n).unwrap();
        r.graded_dimensions(lo - n as i64, hi - n as i64).shifted(n as i64)
    }

    #[test]
    fn koszul_complex_squares_to_zero() {
        for n in 1..=3 {
            let k = FreeComplex::koszul_of_d(n).unwrap();
            assert!(k.check_d_squared().unwrap());
            assert!(k.dual().unwrap().check_d_squared().unwrap());
        }
    }

    #[test]
    fn broken_complex_detected() {
        let mut k = FreeComplex::koszul_of_d(2).unwrap();
        k.maps[2][0][0] = k.maps[2][0][0].neg();
        assert!(!k.check_d_squared().unwrap());
    }

    #[test]
    fn dual_of_r() {
        for n in 1..=3 {
            let inst = dual_of_r_check(n).unwrap();
            assert_eq!(inst.verdict, Verdict::Pass, "{:?}", inst.detail);
            assert_eq!(inst.tables.len(), 1);
            assert_eq!(inst.tables[&n.to_string()], shifted_r_dims(n, n as i64 - 2, n as i64 + 2));
        }
    }

    #[test]
    fn n_one_table() {
        let inst = dual_of_r_check(1).unwrap();
        assert_eq!(inst.tables["1"], GradedDimVector::finite(&[(1, 1), (2, 1), (3, 1)]));
    }

    #[test]
    fn lower_spot_vanishes_at_two() {
        let dual = FreeComplex::koszul_of_d(2).unwrap().dual().unwrap();
        for d in -2..=4 {
            assert_eq!(dual.truncated_cohomology(1, d, 3).unwrap(), 0);
        }
    }

    #[test]
    fn monomial_counts() {
        // degree 0, d-order <= 1 in one variable: 1 and x d
        assert_eq!(monomials(1, 0, 1).len(), 2);
        assert_eq!(compositions(3, 2).len(), 6);
    }
}
