//! Čech complexes on squarefree monomial ideals and local cohomology of
//! straight modules.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::multigraded::{subset_mask, StandardKind, StraightModule, StraightMorphism};

/// A squarefree monomial ideal given by its minimal generators. Each
/// generator is a nonempty variable set, stored as a bit mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<usize>,
}

impl MonomialIdeal {
    /// Generators as 1-based variable lists; they must be nonempty and
    /// pairwise incomparable.
    pub fn new(n: usize, generators: &[Vec<usize>]) -> Result<Self> {
        crate::config::check_vars(n)?;
        let masks = generators.iter().map(|g| subset_mask(n, g)).collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, masks)
    }

    pub(crate) fn from_masks(n: usize, mut masks: Vec<usize>) -> Result<Self> {
        if masks.is_empty() {
            return Err(Error::InvalidArgument("an ideal needs at least one generator".into()));
        }
        if masks.contains(&0) {
            return Err(Error::InvalidArgument("the unit ideal is not supported".into()));
        }
        masks.sort_by_key(|&m| (m.count_ones(), m));
        masks.dedup();
        for (a, &g) in masks.iter().enumerate() {
            if masks[..a].iter().any(|&h| h & !g == 0) {
                return Err(Error::InvalidArgument(format!(
                    "generator {} is a multiple of another generator",
                    format_monomial(g)
                )));
            }
        }
        Ok(MonomialIdeal { n, generators: masks })
    }

    /// `(x_1, ..., x_g)`.
    pub fn coordinate(n: usize, g: usize) -> Result<Self> {
        if g == 0 || g > n {
            return Err(Error::InvalidArgument(format!("need 1 <= g <= n, got g = {g}, n = {n}")));
        }
        Self::from_masks(n, (0..g).map(|i| 1 << i).collect())
    }

    pub fn maximal(n: usize) -> Result<Self> {
        Self::coordinate(n, n)
    }

    /// Parses `"x1*x2, x2*x3"`. Exponents and repeated variables are replaced
    /// by the radical and redundant generators are dropped; each change is
    /// reported in the returned notices.
    pub fn parse(n: usize, text: &str) -> Result<(Self, Vec<String>)> {
        let mut notices = Vec::new();
        let mut masks = Vec::new();
        for mono in text.split(',') {
            let mono = mono.trim();
            if mono.is_empty() {
                return Err(Error::Parse(format!("empty generator in ideal {text:?}")));
            }
            let mut mask = 0usize;
            let mut squarefree = true;
            for factor in mono.split('*') {
                let factor = factor.trim();
                let (var, exp) = match factor.split_once('^') {
                    Some((v, e)) => (v.trim(), e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?),
                    None => (factor, 1),
                };
                let idx: usize = var
                    .strip_prefix('x')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("expected a variable like x1, found {factor:?}")))?;
                if exp == 0 {
                    continue;
                }
                let bit = subset_mask(n, &[idx])?;
                if exp > 1 || mask & bit != 0 {
                    squarefree = false;
                }
                mask |= bit;
            }
            if mask == 0 {
                return Err(Error::InvalidArgument("the unit ideal is not supported".into()));
            }
            if !squarefree {
                notices.push(format!("replaced {mono} by its radical {}", format_monomial(mask)));
            }
            masks.push(mask);
        }
        let mut minimal: Vec<usize> = Vec::new();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        masks.dedup();
        for g in masks {
            if let Some(&h) = minimal.iter().find(|&&h| h & g == h) {
                notices.push(format!("dropped {} (multiple of {})", format_monomial(g), format_monomial(h)));
            } else {
                minimal.push(g);
            }
        }
        Ok((Self::from_masks(n, minimal)?, notices))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn masks(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<Vec<usize>> {
        self.generators.iter().map(|&g| (0..self.n).filter(|i| g >> i & 1 == 1).map(|i| i + 1).collect()).collect()
    }

    /// `I + J` with the redundant generators removed.
    pub fn sum(&self, other: &MonomialIdeal) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("ideals over different rings".into()));
        }
        let all: Vec<usize> = self.generators.iter().chain(&other.generators).copied().collect();
        let minimal = all.iter().copied().filter(|&g| !all.iter().any(|&h| h != g && h & g == h)).collect();
        Self::from_masks(self.n, minimal)
    }

    /// True iff the radical is the homogeneous maximal ideal.
    pub fn is_m_primary(&self) -> bool {
        (0..self.n).all(|i| self.generators.contains(&(1 << i)))
    }
}

fn format_monomial(mask: usize) -> String {
    let vars: Vec<String> = (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect();
    vars.join("*")
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|&g| format_monomial(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// The canonical map `M_{x_from} -> M_{x_to}` for variable masks
/// `from ⊆ to`.
pub fn localization_map(m: &StraightModule, from: usize, to: usize) -> Result<StraightMorphism> {
    if from & !to != 0 {
        return Err(Error::InvalidArgument("localization maps need from ⊆ to".into()));
    }
    let source = m.localize_mask(from);
    let target = m.localize_mask(to);
    let extra = to & !from;
    let maps = (0..1usize << m.n())
        .map(|e| {
            let mut w = e & !from;
            let mut mat = Matrix::identity(m.dims()[w]);
            for j in 0..m.n() {
                if extra >> j & 1 == 1 && w >> j & 1 == 1 {
                    mat = m.cross(j, w).mul(&mat);
                    w ^= 1 << j;
                }
            }
            mat
        })
        .collect();
    StraightMorphism::new(source, target, maps)
}

#[derive(Clone, Debug)]
pub struct CechComplex {
    /// `terms[p] = C^p`, for `p = 0..=r`.
    pub terms: Vec<StraightModule>,
    /// `differentials[p] : C^p -> C^{p+1}` for `p = 0..r`.
    pub differentials: Vec<StraightMorphism>,
    /// Generator-index subsets labelling the summands of each term.
    pub summands: Vec<Vec<Vec<usize>>>,
}

fn subsets_of_size(r: usize, p: usize) -> Vec<Vec<usize>> {
    (0..1usize << r)
        .filter(|s| s.count_ones() as usize == p)
        .map(|s| (0..r).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

pub fn cech_complex(m: &StraightModule, ideal: &MonomialIdeal) -> Result<CechComplex> {
    if m.n() != ideal.n {
        return Err(Error::DimensionMismatch(format!("module over n = {} and ideal over n = {}", m.n(), ideal.n)));
    }
    let r = ideal.len();
    let union = |t: &[usize]| t.iter().fold(0, |acc, &k| acc | ideal.generators[k]);
    let summands: Vec<Vec<Vec<usize>>> = (0..=r).map(|p| subsets_of_size(r, p)).collect();
    let pieces: Vec<Vec<StraightModule>> =
        summands.iter().map(|ts| ts.iter().map(|t| m.localize_mask(union(t))).collect()).collect();
    let terms = pieces.iter().map(|ps| StraightModule::direct_sum(ps)).collect::<Result<Vec<_>>>()?;
    let mut differentials = Vec::with_capacity(r);
    for p in 0..r {
        let (src, tgt) = (&summands[p], &summands[p + 1]);
        let d = StraightMorphism::from_blocks(&pieces[p], &pieces[p + 1], |row, col| {
            let (u, t) = (&tgt[row], &src[col]);
            if !t.iter().all(|k| u.contains(k)) {
                return None;
            }
            let added = u.iter().position(|k| !t.contains(k))?;
            let f = localization_map(m, union(t), union(u)).expect("nested localizations");
            Some(if added % 2 == 0 { f } else { f.scale(-1) })
        })?;
        differentials.push(d);
    }
    for p in 1..differentials.len() {
        if !differentials[p].compose(&differentials[p - 1])?.is_zero() {
            return Err(Error::InvalidMorphism(format!("Čech differential squares to a nonzero map at spot {p}")));
        }
    }
    Ok(CechComplex { terms, differentials, summands })
}

impl CechComplex {
    /// `H^i` of the complex; zero outside `0..=r`.
    pub fn cohomology(&self, i: usize) -> Result<StraightModule> {
        let c0 = &self.terms[0];
        let zero = StraightModule::zero(c0.n()).with_offset(c0.offset().to_vec());
        let Some(term) = self.terms.get(i) else { return Ok(zero) };
        let incoming = match i {
            0 => StraightMorphism::zero(&zero, term)?,
            _ => self.differentials[i - 1].clone(),
        };
        let outgoing = match self.differentials.get(i) {
            Some(d) => d.clone(),
            None => StraightMorphism::zero(term, &zero)?,
        };
        crate::multigraded::homology(&incoming, &outgoing)
    }
}

pub fn local_cohomology(m: &StraightModule, ideal: &MonomialIdeal, i: usize) -> Result<StraightModule> {
    cech_complex(m, ideal)?.cohomology(i)
}

/// The cohomological spots where `H^i_I(R)` is nonzero.
pub fn cd_profile(ideal: &MonomialIdeal) -> Result<Vec<usize>> {
    let r = StraightModule::make_standard(&StandardKind::R, ideal.n)?;
    let complex = cech_complex(&r, ideal)?;
    let mut out = Vec::new();
    for i in 0..=ideal.len() {
        if !complex.cohomology(i)?.is_zero() {
            out.push(i);
        }
    }
    Ok(out)
}

pub fn supported_at_m(m: &StraightModule) -> bool {
    m.supported_at_m()
}

/// One stage `H^index_ideal(-)` of a pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineStage {
    pub ideal: MonomialIdeal,
    pub index: usize,
}

/// Applies the stages to `R` in list order: the first stage acts on `R`,
/// each later stage on the previous output.
pub fn lyubeznik_pipeline(n: usize, stages: &[PipelineStage]) -> Result<StraightModule> {
    let mut m = StraightModule::make_standard(&StandardKind::R, n)?;
    for s in stages {
        if s.index > s.ideal.len() {
            return Err(Error::InvalidArgument(format!(
                "cohomological index {} exceeds the {} generators of {}",
                s.index,
                s.ideal.len(),
                s.ideal
            )));
        }
        m = local_cohomology(&m, &s.ideal, s.index)?;
    }
    Ok(m)
}

/// Parses `"H1(x1);H2(x1,x2)"`.
pub fn parse_pipeline(n: usize, text: &str) -> Result<(Vec<PipelineStage>, Vec<String>)> {
    let mut stages = Vec::new();
    let mut notices = Vec::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::Parse(format!("expected a stage like H1(x1,x2), found {part:?}"));
        let rest = part.strip_prefix('H').ok_or_else(bad)?;
        let (index, rest) = rest.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let index: usize = index.trim().parse().map_err(|_| bad())?;
        let (ideal, mut notes) = MonomialIdeal::parse(n, body)?;
        notices.append(&mut notes);
        stages.push(PipelineStage { ideal, index });
    }
    if stages.is_empty() {
        return Err(Error::Parse("empty pipeline".into()));
    }
    Ok((stages, notices))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(kind: StandardKind, n: usize) -> StraightModule {
        StraightModule::make_standard(&kind, n).unwrap()
    }

    #[test]
    fn complex_shapes() {
        let r = std(StandardKind::R, 2);
        let c = cech_complex(&r, &MonomialIdeal::maximal(2).unwrap()).unwrap();
        assert_eq!(c.terms.len(), 3);
        assert_eq!(c.terms[0], r);
        let x1 = std(StandardKind::Localization(vec![1]), 2);
        let x2 = std(StandardKind::Localization(vec![2]), 2);
        assert_eq!(c.terms[1], StraightModule::direct_sum(&[x1, x2]).unwrap());
        assert_eq!(c.terms[2], std(StandardKind::Localization(vec![1, 2]), 2));

        let e = std(StandardKind::E, 2);
        let c = cech_complex(&e, &MonomialIdeal::new(2, &[vec![1]]).unwrap()).unwrap();
        assert!(c.terms[1].is_zero());
    }

    #[test]
    fn first_local_cohomology_of_line() {
        let r = std(StandardKind::R, 1);
        let x = MonomialIdeal::new(1, &[vec![1]]).unwrap();
        let h1 = local_cohomology(&r, &x, 1).unwrap();
        assert_eq!(h1.dims(), &[0, 1]);
        assert_eq!(h1.is_e_power(), Some(1));
        assert!(local_cohomology(&r, &x, 0).unwrap().is_zero());
    }

    #[test]
    fn top_local_cohomology_is_e() {
        for n in 1..=4 {
            let r = std(StandardKind::R, n);
            let h = local_cohomology(&r, &MonomialIdeal::maximal(n).unwrap(), n).unwrap();
            assert_eq!(h.is_e_power(), Some(1));
        }
    }

    #[test]
    fn profiles() {
        for n in 1..=4 {
            for g in 1..=n {
                assert_eq!(cd_profile(&MonomialIdeal::coordinate(n, g).unwrap()).unwrap(), vec![g]);
            }
        }
        let triangle = MonomialIdeal::new(3, &[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let expected: Vec<usize> = (0..=3)
            .filter(|&i| !local_cohomology(&std(StandardKind::R, 3), &triangle, i).unwrap().is_zero())
            .collect();
        assert_eq!(cd_profile(&triangle).unwrap(), expected);
        assert_eq!(expected, vec![2]);
    }

    #[test]
    fn pipelines() {
        let (stages, _) = parse_pipeline(2, "H2(x1,x2)").unwrap();
        assert_eq!(lyubeznik_pipeline(2, &stages).unwrap().is_e_power(), Some(1));

        let (stages, _) = parse_pipeline(2, "H1(x1);H1(x1,x2)").unwrap();
        let direct = {
            let first = local_cohomology(&std(StandardKind::R, 2), &MonomialIdeal::new(2, &[vec![1]]).unwrap(), 1).unwrap();
            local_cohomology(&first, &MonomialIdeal::maximal(2).unwrap(), 1).unwrap()
        };
        assert_eq!(lyubeznik_pipeline(2, &stages).unwrap(), direct);

        let (stages, _) = parse_pipeline(1, "H0(x1)").unwrap();
        assert!(lyubeznik_pipeline(1, &stages).unwrap().is_zero());
        let (stages, _) = parse_pipeline(1, "H2(x1)").unwrap();
        assert!(lyubeznik_pipeline(1, &stages).is_err());
    }

    #[test]
    fn ideal_parsing() {
        let (i, notes) = MonomialIdeal::parse(3, "x1*x2, x2*x3").unwrap();
        assert_eq!(i.generators(), vec![vec![1, 2], vec![2, 3]]);
        assert!(notes.is_empty());
        let (i, notes) = MonomialIdeal::parse(3, "x1^2*x2, x1*x2*x3, x3").unwrap();
        assert_eq!(i.generators(), vec![vec![3], vec![1, 2]]);
        assert_eq!(notes.len(), 2);
        assert!(MonomialIdeal::parse(2, "x3").is_err());
        assert!(MonomialIdeal::parse(2, "y1").is_err());
        assert!(MonomialIdeal::new(2, &[vec![1], vec![1, 2]]).is_err());
        assert_eq!(i.to_string(), "(x3, x1*x2)");
    }

    #[test]
    fn local_cohomology_vanishes_beyond_generators() {
        let r = std(StandardKind::R, 3);
        let i = MonomialIdeal::new(3, &[vec![1, 2]]).unwrap();
        assert!(local_cohomology(&r, &i, 2).unwrap().is_zero());
        assert!(local_cohomology(&r, &i, 5).unwrap().is_zero());
    }
}
