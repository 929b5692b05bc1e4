//! Koszul homology of straight modules with respect to coordinate `x_i` and
//! `d_i`, with exact degree bookkeeping.
//!
//! Along direction `i` the Koszul complex of `x_i` (or `d_i`) splits into
//! two-term strands indexed by raw multidegree. Every strand is an
//! isomorphism except the one through the crossing pair `b_i in {-1, 0}`, so
//! homology only sees the crossing maps. [`koszul_modules`] builds the
//! whole complex on the crossing slices at once; [`koszul_modules_iterated`]
//! reduces one operator at a time and splices the pieces. The two are
//! independent computations of the same dimensions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::multigraded::{homology, GradedDimVector, StraightModule, StraightMorphism};
use crate::report::{Instance, Verdict};

/// A coordinate operator with a 1-based direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    X(usize),
    D(usize),
}

impl Op {
    pub fn dir(&self) -> usize {
        match *self {
            Op::X(i) | Op::D(i) => i,
        }
    }

    /// Whether the source of the crossing map sits in the `-1` region.
    fn source_negative(&self) -> bool {
        matches!(self, Op::X(_))
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::X(i) => write!(f, "x{i}"),
            Op::D(i) => write!(f, "d{i}"),
        }
    }
}

/// Parses `"x1,x2,d3"`.
pub fn parse_ops(text: &str) -> Result<Vec<Op>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (kind, idx) = s.split_at(1);
            let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad operator {s:?}")))?;
            match kind {
                "x" => Ok(Op::X(idx)),
                "d" => Ok(Op::D(idx)),
                _ => Err(Error::Parse(format!("operators are x<k> or d<k>, found {s:?}"))),
            }
        })
        .collect()
}

pub fn x_ops(dirs: impl IntoIterator<Item = usize>) -> Vec<Op> {
    dirs.into_iter().map(Op::X).collect()
}

pub fn d_ops(dirs: impl IntoIterator<Item = usize>) -> Vec<Op> {
    dirs.into_iter().map(Op::D).collect()
}

/// A direction that has been reduced away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frozen {
    pub dir: usize,
    /// Raw multidegree the surviving classes sit at.
    pub residual: i64,
    /// The module offset in this direction at the time of freezing.
    pub offset: i64,
}

/// Partial Koszul homology: a straight module over the surviving
/// directions plus the degree data of the frozen ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedModule {
    pub module: StraightModule,
    /// Original 1-based direction of each coordinate of `module`.
    pub directions: Vec<usize>,
    pub frozen: Vec<Frozen>,
    pub total_offset: i64,
}

impl ReducedModule {
    pub fn new(module: StraightModule) -> Self {
        let directions = (1..=module.n()).collect();
        ReducedModule { module, directions, frozen: Vec::new(), total_offset: 0 }
    }

    /// Total-degree contribution of the frozen directions.
    pub fn fixed_degree(&self) -> i64 {
        self.frozen.iter().map(|f| f.residual - f.offset).sum::<i64>() + self.total_offset
    }

    pub fn graded_dimensions(&self, lo: i64, hi: i64) -> GradedDimVector {
        let fixed = self.fixed_degree();
        self.module.graded_dimensions(lo - fixed, hi - fixed).shifted(fixed)
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    fn position(&self, dir: usize) -> Result<usize> {
        self.directions.iter().position(|&d| d == dir).ok_or_else(|| {
            if self.frozen.iter().any(|f| f.dir == dir) {
                Error::InvalidArgument(format!("direction {dir} is already reduced"))
            } else {
                Error::InvalidArgument(format!("direction {dir} is not present"))
            }
        })
    }

    fn frozen_piece(&self, module: StraightModule, k: usize, residual: i64, offset_step: i64) -> ReducedModule {
        let mut directions = self.directions.clone();
        let dir = directions.remove(k);
        let mut frozen = self.frozen.clone();
        frozen.push(Frozen { dir, residual, offset: self.module.offset()[k] });
        ReducedModule { module, directions, frozen, total_offset: self.total_offset + offset_step }
    }
}

fn reduce(m: &ReducedModule, op: Op) -> Result<(ReducedModule, ReducedModule)> {
    let k = m.position(op.dir())?;
    let bit = 1 << k;
    let from = if op.source_negative() { bit } else { 0 };
    let f = m.module.slice_crossing(bit, from, k)?;
    let (ker, coker) = f.kernel_cokernel()?;
    Ok(match op {
        Op::X(_) => (m.frozen_piece(ker, k, -1, 1), m.frozen_piece(coker, k, 0, 0)),
        Op::D(_) => (m.frozen_piece(ker, k, 0, -1), m.frozen_piece(coker, k, -1, 0)),
    })
}

/// `(H_1, H_0)` of `x_i` on `m`.
pub fn reduce_x(m: &ReducedModule, i: usize) -> Result<(ReducedModule, ReducedModule)> {
    reduce(m, Op::X(i))
}

/// `(H_1, H_0)` of `d_i` on `m`.
pub fn reduce_d(m: &ReducedModule, i: usize) -> Result<(ReducedModule, ReducedModule)> {
    reduce(m, Op::D(i))
}

fn check_ops(n: usize, ops: &[Op]) -> Result<()> {
    for (a, op) in ops.iter().enumerate() {
        if op.dir() == 0 || op.dir() > n {
            return Err(Error::InvalidArgument(format!("operator {op} out of range for n = {n}")));
        }
        if ops[..a].iter().any(|o| o.dir() == op.dir()) {
            return Err(Error::InvalidArgument(format!("direction {} used twice", op.dir())));
        }
    }
    Ok(())
}

/// `H_j(ops; M)` for `j = 0..=ops.len()`, from the full Koszul complex on
/// the crossing slices.
pub fn koszul_modules(m: &StraightModule, ops: &[Op]) -> Result<Vec<ReducedModule>> {
    check_ops(m.n(), ops)?;
    let count = ops.len();
    let bits: Vec<usize> = ops.iter().map(|o| 1 << (o.dir() - 1)).collect();
    let fixed = bits.iter().fold(0, |a, b| a | b);
    // region values when the ops in `p` sit at their source and the rest at their target
    let values = |p: usize| {
        (0..count).fold(0, |acc, u| {
            let at_source = p >> u & 1 == 1;
            if at_source == ops[u].source_negative() {
                acc | bits[u]
            } else {
                acc
            }
        })
    };
    let subsets: Vec<Vec<usize>> =
        (0..=count).map(|j| (0..1usize << count).filter(|p| p.count_ones() as usize == j).collect()).collect();
    let term = |p: usize| m.slice(fixed, values(p));
    let terms: Vec<Vec<StraightModule>> = subsets.iter().map(|ps| ps.iter().map(|&p| term(p)).collect()).collect();
    let template = term(0);
    let zero = StraightModule::zero(template.n()).with_offset(template.offset().to_vec());
    let sum = |parts: &[StraightModule]| {
        if parts.is_empty() {
            Ok(zero.clone())
        } else {
            StraightModule::direct_sum(parts)
        }
    };

    // d_j : C_j -> C_{j-1}
    let mut diffs: Vec<StraightMorphism> = Vec::with_capacity(count + 2);
    diffs.push(StraightMorphism::zero(&sum(&terms[0])?, &zero)?);
    for j in 1..=count {
        let d = StraightMorphism::from_blocks(&terms[j], &terms[j - 1], |row, col| {
            let (target, source) = (subsets[j - 1][row], subsets[j][col]);
            let dropped = source & !target;
            if target & !source != 0 || dropped.count_ones() != 1 {
                return None;
            }
            let u = dropped.trailing_zeros() as usize;
            let k = ops[u].dir() - 1;
            let f = m.slice_crossing(fixed, values(source), k).expect("fixed direction");
            let before = (source & (dropped - 1)).count_ones();
            Some(if before % 2 == 0 { f } else { f.scale(-1) })
        })?;
        diffs.push(d);
    }
    diffs.push(StraightMorphism::zero(&zero, &sum(&terms[count])?)?);

    let directions: Vec<usize> = (1..=m.n()).filter(|d| fixed >> (d - 1) & 1 == 0).collect();
    let frozen: Vec<Frozen> = {
        let mut f: Vec<Frozen> = ops
            .iter()
            .map(|o| Frozen { dir: o.dir(), residual: if o.source_negative() { 0 } else { -1 }, offset: m.offset()[o.dir() - 1] })
            .collect();
        f.sort_by_key(|f| f.dir);
        f
    };
    (0..=count)
        .map(|j| {
            // H_j = ker d_j / im d_{j+1}
            let h = homology(&diffs[j + 1], &diffs[j])?;
            Ok(ReducedModule { module: h, directions: directions.clone(), frozen: frozen.clone(), total_offset: 0 })
        })
        .collect()
}

/// Graded dimensions of `H_j(ops; M)` on `[lo, hi]`; zero homology is omitted.
pub fn koszul_homology(m: &StraightModule, ops: &[Op], lo: i64, hi: i64) -> Result<BTreeMap<usize, GradedDimVector>> {
    Ok(tabulate(koszul_modules(m, ops)?.iter().map(|r| vec![r]).collect(), lo, hi))
}

/// `H_j(ops; M)` as lists of pieces, computed by reducing one operator at a
/// time (last operator first) and splicing
/// `0 -> H_0(u; H_j(u')) -> H_j(u, u') -> H_1(u; H_{j-1}(u')) -> 0`.
pub fn koszul_modules_iterated(m: &StraightModule, ops: &[Op]) -> Result<Vec<Vec<ReducedModule>>> {
    check_ops(m.n(), ops)?;
    let mut levels: Vec<Vec<ReducedModule>> = vec![vec![ReducedModule::new(m.clone())]];
    for &op in ops.iter().rev() {
        let mut next: Vec<Vec<ReducedModule>> = vec![Vec::new(); levels.len() + 1];
        for (j, pieces) in levels.iter().enumerate() {
            for piece in pieces {
                let (h1, h0) = reduce(piece, op)?;
                if !h0.is_zero() {
                    next[j].push(h0);
                }
                if !h1.is_zero() {
                    next[j + 1].push(h1);
                }
            }
        }
        levels = next;
    }
    Ok(levels)
}

pub fn koszul_homology_iterated(
    m: &StraightModule,
    ops: &[Op],
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<usize, GradedDimVector>> {
    Ok(tabulate(koszul_modules_iterated(m, ops)?.iter().map(|ps| ps.iter().collect()).collect(), lo, hi))
}

fn tabulate(levels: Vec<Vec<&ReducedModule>>, lo: i64, hi: i64) -> BTreeMap<usize, GradedDimVector> {
    levels
        .into_iter()
        .enumerate()
        .map(|(j, pieces)| {
            let v = pieces.iter().fold(GradedDimVector::new(), |acc, p| &acc + &p.graded_dimensions(lo, hi));
            (j, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Re-indexes homological spots `j` as cohomological spots `count - j`.
pub fn to_cohomological(dims: &BTreeMap<usize, GradedDimVector>, count: usize) -> BTreeMap<usize, GradedDimVector> {
    dims.iter().map(|(&j, v)| (count - j, v.clone())).collect()
}

/// Passes iff every nonzero entry of every table sits at `expected`.
pub fn concentration_check(
    theorem: &str,
    instance: impl Into<String>,
    dims: &BTreeMap<usize, GradedDimVector>,
    expected: i64,
) -> Instance {
    let stray: Vec<String> = dims
        .iter()
        .flat_map(|(j, v)| v.degrees().filter(|&d| d != expected).map(move |d| format!("{j}@{d}")))
        .collect();
    let mut inst = Instance::new(theorem, instance, Verdict::from_bool(stray.is_empty()))
        .with_tables(dims.iter().map(|(j, v)| (j, v.clone())))
        .with_expected(expected);
    if !stray.is_empty() {
        inst = inst.with_detail(format!("mass outside degree {expected}: {}", stray.join(", ")));
    }
    inst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteGeneration {
    Zero,
    Free(usize),
    NotFinitelyGenerated,
}

impl fmt::Display for FiniteGeneration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGeneration::Zero => write!(f, "zero"),
            FiniteGeneration::Free(m) => write!(f, "free of rank {m}"),
            FiniteGeneration::NotFinitelyGenerated => write!(f, "not finitely generated"),
        }
    }
}

pub fn finite_generation_verdict(m: &StraightModule) -> FiniteGeneration {
    if m.is_zero() {
        FiniteGeneration::Zero
    } else if m.dims()[1..].iter().all(|&d| d == 0) {
        FiniteGeneration::Free(m.dims()[0])
    } else {
        FiniteGeneration::NotFinitelyGenerated
    }
}

/// The two degree anchors: `H_1(x; E(1))` sits in degree 0 and
/// `H_0(d; E(1))` in degree -1, each one-dimensional.
pub fn self_test() -> Result<()> {
    let e = ReducedModule::new(StraightModule::make_standard(&crate::multigraded::StandardKind::E, 1)?);
    let (h1, _) = reduce_x(&e, 1)?;
    let (_, h0) = reduce_d(&e, 1)?;
    let ok = h1.graded_dimensions(-4, 4) == GradedDimVector::finite(&[(0, 1)])
        && h0.graded_dimensions(-4, 4) == GradedDimVector::finite(&[(-1, 1)]);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModule("Koszul degree anchors on E(1) are off".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraded::StandardKind;

    fn std(kind: StandardKind, n: usize) -> StraightModule {
        StraightModule::make_standard(&kind, n).unwrap()
    }

    fn dims(r: &ReducedModule) -> GradedDimVector {
        r.graded_dimensions(-8, 8)
    }

    #[test]
    fn anchors() {
        self_test().unwrap();
    }

    #[test]
    fn reduce_x_examples() {
        let e = ReducedModule::new(std(StandardKind::E, 1));
        let (h1, h0) = reduce_x(&e, 1).unwrap();
        assert_eq!(dims(&h1), GradedDimVector::finite(&[(0, 1)]));
        assert!(h0.is_zero());

        let r = ReducedModule::new(std(StandardKind::R, 1));
        let (h1, h0) = reduce_x(&r, 1).unwrap();
        assert!(h1.is_zero());
        assert_eq!(dims(&h0), GradedDimVector::finite(&[(0, 1)]));

        let l = ReducedModule::new(std(StandardKind::Localization(vec![1]), 1));
        let (h1, h0) = reduce_x(&l, 1).unwrap();
        assert!(h1.is_zero() && h0.is_zero());
        assert!(reduce_x(&h0, 1).is_err());
    }

    #[test]
    fn reduce_d_examples() {
        let e = ReducedModule::new(std(StandardKind::E, 1));
        let (h1, h0) = reduce_d(&e, 1).unwrap();
        assert!(h1.is_zero());
        assert_eq!(dims(&h0), GradedDimVector::finite(&[(-1, 1)]));

        let r = ReducedModule::new(std(StandardKind::R, 1));
        let (h1, h0) = reduce_d(&r, 1).unwrap();
        assert_eq!(dims(&h1), GradedDimVector::finite(&[(-1, 1)]));
        assert!(h0.is_zero());

        // ker d on the Laurent module is the constants, coker is spanned by 1/x
        let l = ReducedModule::new(std(StandardKind::Localization(vec![1]), 1));
        let (h1, h0) = reduce_d(&l, 1).unwrap();
        assert_eq!(dims(&h1), GradedDimVector::finite(&[(-1, 1)]));
        assert_eq!(dims(&h0), GradedDimVector::finite(&[(-1, 1)]));
    }

    #[test]
    fn koszul_examples() {
        for n in 1..=4 {
            let e = std(StandardKind::E, n);
            let h = koszul_homology(&e, &x_ops(1..=n), -10, 10).unwrap();
            assert_eq!(h, BTreeMap::from([(n, GradedDimVector::finite(&[(0, 1)]))]));

            let r = std(StandardKind::R, n);
            let h = koszul_homology(&r, &x_ops(1..=n), -10, 10).unwrap();
            assert_eq!(h, BTreeMap::from([(0, GradedDimVector::finite(&[(0, 1)]))]));

            for g in 1..=n {
                let ideal = crate::cech::MonomialIdeal::coordinate(n, g).unwrap();
                let ng = crate::cech::local_cohomology(&r, &ideal, g).unwrap();
                let h = koszul_homology(&ng, &d_ops(1..=n), -10, 10).unwrap();
                assert_eq!(h, BTreeMap::from([(n - g, GradedDimVector::finite(&[(-(n as i64), 1)]))]));
            }
        }
    }

    #[test]
    fn engines_agree_on_mixed_ops() {
        let r = std(StandardKind::R, 3);
        let ideal = crate::cech::MonomialIdeal::new(3, &[vec![1, 2], vec![3]]).unwrap();
        for i in 0..=2 {
            let m = crate::cech::local_cohomology(&r, &ideal, i).unwrap();
            for ops in [vec![Op::X(1), Op::D(2), Op::D(3)], vec![Op::D(3), Op::X(2)], vec![Op::X(2)]] {
                assert_eq!(
                    koszul_homology(&m, &ops, -8, 8).unwrap(),
                    koszul_homology_iterated(&m, &ops, -8, 8).unwrap()
                );
            }
        }
    }

    #[test]
    fn concentration_verdicts() {
        let e = std(StandardKind::E, 2);
        let h = koszul_homology(&e, &x_ops(1..=2), -8, 8).unwrap();
        assert_eq!(concentration_check("thm-degreezero", "E(2)", &h, 0).verdict, Verdict::Pass);
        let shifted = e.shift(&[1, 0]).unwrap();
        let h = koszul_homology(&shifted, &x_ops(1..=2), -8, 8).unwrap();
        assert_eq!(h, BTreeMap::from([(2, GradedDimVector::finite(&[(-1, 1)]))]));
        assert_eq!(concentration_check("thm-degreezero", "E(2)(1,0)", &h, 0).verdict, Verdict::Fail);
    }

    #[test]
    fn duplicate_direction_rejected() {
        let r = std(StandardKind::R, 2);
        assert!(koszul_homology(&r, &[Op::X(1), Op::D(1)], -2, 2).is_err());
        assert_eq!(parse_ops("x1, d2").unwrap(), vec![Op::X(1), Op::D(2)]);
        assert!(parse_ops("y1").is_err());
    }

    #[test]
    fn finite_generation() {
        let r = std(StandardKind::R, 2);
        assert_eq!(finite_generation_verdict(&StraightModule::direct_sum(&[r.clone(), r]).unwrap()), FiniteGeneration::Free(2));
        assert_eq!(finite_generation_verdict(&std(StandardKind::E, 2)), FiniteGeneration::NotFinitelyGenerated);
        assert_eq!(finite_generation_verdict(&StraightModule::zero(2)), FiniteGeneration::Zero);
    }
}
