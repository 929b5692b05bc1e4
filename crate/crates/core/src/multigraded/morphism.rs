//! Multidegree-0 morphisms between straight modules.

use super::{SignVector, StraightModule};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Per-region matrices `f_e : V_e -> W_e` commuting with every crossing map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraightMorphism {
    source: StraightModule,
    target: StraightModule,
    maps: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub module: StraightModule,
    /// Per-region inclusion `ker_e -> V_e` (columns form a basis).
    pub inclusion: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct Cokernel {
    pub module: StraightModule,
    /// Per-region projection `W_e -> coker_e`.
    pub projection: Vec<Matrix>,
    /// Per-region lift `coker_e -> W_e` by standard basis vectors.
    pub lift: Vec<Matrix>,
}

impl StraightMorphism {
    pub fn new(source: StraightModule, target: StraightModule, maps: Vec<Matrix>) -> Result<Self> {
        let f = StraightMorphism { source, target, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(m: &StraightModule) -> Self {
        let maps = m.dims.iter().map(|&d| Matrix::identity(d)).collect();
        StraightMorphism { source: m.clone(), target: m.clone(), maps }
    }

    pub fn zero(source: &StraightModule, target: &StraightModule) -> Result<Self> {
        let maps = source.dims.iter().zip(&target.dims).map(|(&s, &t)| Matrix::zeros(t, s)).collect();
        Self::new(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &StraightModule {
        &self.source
    }

    pub fn target(&self) -> &StraightModule {
        &self.target
    }

    pub fn map(&self, e: SignVector) -> &Matrix {
        &self.maps[e.mask]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.n != t.n || s.offset != t.offset {
            return Err(Error::InvalidMorphism("source and target differ in n or offset".into()));
        }
        if self.maps.len() != 1 << s.n {
            return Err(Error::InvalidMorphism("one matrix per region required".into()));
        }
        for (mask, f) in self.maps.iter().enumerate() {
            if f.rows() != t.dims[mask] || f.cols() != s.dims[mask] {
                return Err(Error::InvalidMorphism(format!(
                    "matrix at region {:?} has the wrong shape",
                    SignVector::new(s.n, mask).signs()
                )));
            }
        }
        for i in 0..s.n {
            for mask in 0..1usize << s.n {
                let to = mask ^ (1 << i);
                let lhs = self.maps[to].mul(&s.cross[i][mask]);
                let rhs = t.cross[i][mask].mul(&self.maps[mask]);
                if lhs != rhs {
                    return Err(Error::InvalidMorphism(format!(
                        "does not commute with the crossing map in direction {} at region {:?}",
                        i + 1,
                        SignVector::new(s.n, mask).signs()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self o first`.
    pub fn compose(&self, first: &StraightMorphism) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        let maps = self.maps.iter().zip(&first.maps).map(|(g, f)| g.mul(f)).collect();
        Ok(StraightMorphism { source: first.source.clone(), target: self.target.clone(), maps })
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn scale(&self, s: i64) -> Self {
        let s = crate::linalg::q(s);
        StraightMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|m| m.scale(&s)).collect(),
        }
    }

    /// The morphism `(+)_j sources[j] -> (+)_i targets[i]` with block `(i, j)`
    /// given by `entry(i, j)` (`None` for a zero block).
    pub fn from_blocks(
        sources: &[StraightModule],
        targets: &[StraightModule],
        entry: impl Fn(usize, usize) -> Option<StraightMorphism>,
    ) -> Result<Self> {
        let source = StraightModule::direct_sum(sources)?;
        let target = StraightModule::direct_sum(targets)?;
        let n = source.n;
        let mut maps: Vec<Matrix> =
            (0..1usize << n).map(|m| Matrix::zeros(target.dims[m], source.dims[m])).collect();
        for (i, t) in targets.iter().enumerate() {
            for (j, s) in sources.iter().enumerate() {
                let Some(block) = entry(i, j) else { continue };
                if block.source != *s || block.target != *t {
                    return Err(Error::InvalidMorphism(format!("block ({i}, {j}) has wrong endpoints")));
                }
                for (mask, map) in maps.iter_mut().enumerate() {
                    let r0: usize = targets[..i].iter().map(|m| m.dims[mask]).sum();
                    let c0: usize = sources[..j].iter().map(|m| m.dims[mask]).sum();
                    let mut acc = Matrix::zeros(map.rows(), map.cols());
                    acc.put_block(r0, c0, &block.maps[mask]);
                    *map = map.add(&acc);
                }
            }
        }
        Self::new(source, target, maps)
    }

    pub fn kernel(&self) -> Result<Kernel> {
        let s = &self.source;
        let inclusion: Vec<Matrix> = self.maps.iter().map(Matrix::kernel).collect();
        let dims = inclusion.iter().map(Matrix::cols).collect();
        let cross = (0..s.n)
            .map(|i| {
                (0..1usize << s.n)
                    .map(|mask| {
                        let to = mask ^ (1 << i);
                        let image = s.cross[i][mask].mul(&inclusion[mask]);
                        inclusion[to].solve_in_span(&image).ok_or_else(|| {
                            Error::InvalidMorphism("kernel is not stable under the crossing maps".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let module = StraightModule::from_parts(s.n, s.offset.clone(), dims, cross)?;
        Ok(Kernel { module, inclusion })
    }

    pub fn cokernel(&self) -> Result<Cokernel> {
        let t = &self.target;
        let quotients: Vec<_> = self.maps.iter().map(Matrix::quotient).collect();
        let dims = quotients.iter().map(|q| q.projection.rows()).collect();
        let cross = (0..t.n)
            .map(|i| {
                (0..1usize << t.n)
                    .map(|mask| {
                        let to = mask ^ (1 << i);
                        quotients[to].projection.mul(&t.cross[i][mask]).mul(&quotients[mask].complement)
                    })
                    .collect()
            })
            .collect();
        let module = StraightModule::from_parts(t.n, t.offset.clone(), dims, cross)?;
        let (projection, lift) = quotients.into_iter().map(|q| (q.projection, q.complement)).unzip();
        Ok(Cokernel { module, projection, lift })
    }

    pub fn kernel_cokernel(&self) -> Result<(StraightModule, StraightModule)> {
        Ok((self.kernel()?.module, self.cokernel()?.module))
    }
}

/// Homology `ker g / im f` of `A --f--> B --g--> C`.
pub fn homology(f: &StraightMorphism, g: &StraightMorphism) -> Result<StraightModule> {
    if f.target != g.source {
        return Err(Error::InvalidMorphism("homology of non-composable maps".into()));
    }
    if !g.compose(f)?.is_zero() {
        return Err(Error::InvalidMorphism("g o f is not zero".into()));
    }
    let ker = g.kernel()?;
    let lifted = ker
        .inclusion
        .iter()
        .zip(&f.maps)
        .map(|(inc, fm)| inc.solve_in_span(fm).ok_or_else(|| Error::InvalidMorphism("image not inside kernel".into())))
        .collect::<Result<Vec<_>>>()?;
    let f_into_ker = StraightMorphism::new(f.source.clone(), ker.module, lifted)?;
    Ok(f_into_ker.cokernel()?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraded::StandardKind;

    fn std(kind: StandardKind, n: usize) -> StraightModule {
        StraightModule::make_standard(&kind, n).unwrap()
    }

    /// The canonical map `M -> M_{x_S}`.
    fn to_localization(m: &StraightModule, vars: &[usize]) -> StraightMorphism {
        crate::cech::localization_map(m, 0, crate::multigraded::subset_mask(m.n(), vars).unwrap()).unwrap()
    }

    #[test]
    fn zero_map_on_r() {
        let r = std(StandardKind::R, 1);
        let (k, c) = StraightMorphism::zero(&r, &r).unwrap().kernel_cokernel().unwrap();
        assert_eq!(k.dims(), r.dims());
        assert_eq!(c.dims(), r.dims());
    }

    #[test]
    fn inclusion_into_laurent_has_cokernel_e() {
        let r = std(StandardKind::R, 1);
        let f = to_localization(&r, &[1]);
        let (k, c) = f.kernel_cokernel().unwrap();
        assert!(k.is_zero());
        assert_eq!(c.dims(), &[0, 1]);
        assert_eq!(c.is_e_power(), Some(1));
    }

    #[test]
    fn identity_has_trivial_kernel_and_cokernel() {
        for m in [std(StandardKind::E, 2), std(StandardKind::Localization(vec![1, 2]), 2)] {
            let (k, c) = m.identity().kernel_cokernel().unwrap();
            assert!(k.is_zero() && c.is_zero());
        }
    }

    #[test]
    fn non_commuting_map_rejected() {
        // the scalar 1 on every region of R_x does not commute with the x crossing
        // once one region is scaled by 2
        let l = std(StandardKind::Localization(vec![1]), 1);
        let maps = vec![Matrix::identity(1), Matrix::scalar(1, &crate::linalg::q(2))];
        assert!(matches!(StraightMorphism::new(l.clone(), l, maps), Err(Error::InvalidMorphism(_))));
    }

    #[test]
    fn exactness_per_region() {
        let r = std(StandardKind::R, 2);
        let f = to_localization(&r, &[1, 2]);
        let (k, c) = f.kernel_cokernel().unwrap();
        for mask in 0..4 {
            let v = f.source().dims()[mask] as i64;
            let w = f.target().dims()[mask] as i64;
            assert_eq!(k.dims()[mask] as i64 - v + w - c.dims()[mask] as i64, 0);
        }
    }
}
