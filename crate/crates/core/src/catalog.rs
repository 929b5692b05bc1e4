//! Named modules and ideals used by the verification suites and the CLI.

use crate::cech::{local_cohomology, parse_pipeline, lyubeznik_pipeline, MonomialIdeal};
use crate::error::{Error, Result};
use crate::multigraded::{StandardKind, StraightModule};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub module: StraightModule,
    /// `Some(k)` when the module was built as `R^k`.
    pub free_rank: Option<usize>,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, module: StraightModule) -> Self {
        CatalogEntry { name: name.into(), module, free_rank: None }
    }
}

/// Every squarefree monomial ideal over `n` variables, as minimal generating
/// sets, ordered by number of generators and then by generator masks.
pub fn all_ideals(n: usize) -> Result<Vec<MonomialIdeal>> {
    if n > 4 {
        return Err(Error::Unsupported("ideal enumeration is limited to n <= 4".into()));
    }
    let sets: Vec<usize> = (1..1usize << n).collect();
    let mut out = Vec::new();
    for choice in 1..1u64 << sets.len() {
        let gens: Vec<usize> = (0..sets.len()).filter(|k| choice >> k & 1 == 1).map(|k| sets[k]).collect();
        let antichain = gens.iter().all(|&a| gens.iter().all(|&b| a == b || a & b != a));
        if antichain {
            out.push(MonomialIdeal::from_masks(n, gens)?);
        }
    }
    out.sort_by(|a, b| (a.len(), a.masks()).cmp(&(b.len(), b.masks())));
    Ok(out)
}

/// The nonzero modules `H^i_I(R)` over all squarefree monomial `I`.
pub fn local_cohomology_catalog(n: usize) -> Result<Vec<CatalogEntry>> {
    let r = StraightModule::make_standard(&StandardKind::R, n)?;
    let mut out = Vec::new();
    for ideal in all_ideals(n)? {
        let complex = crate::cech::cech_complex(&r, &ideal)?;
        for i in 0..=ideal.len() {
            let module = complex.cohomology(i)?;
            if !module.is_zero() {
                out.push(CatalogEntry::new(format!("H^{i}_{ideal}(R)"), module));
            }
        }
    }
    Ok(out)
}

/// `R`, `E(n)`, `R ⊕ R`, every localization `R_{x_S}` with `S` nonempty and
/// the local cohomology catalog.
pub fn generalized_eulerian_catalog(n: usize) -> Result<Vec<CatalogEntry>> {
    let std = |k: StandardKind| StraightModule::make_standard(&k, n);
    let r = std(StandardKind::R)?;
    let mut out = vec![
        CatalogEntry { free_rank: Some(1), ..CatalogEntry::new("R", r.clone()) },
        CatalogEntry { free_rank: Some(2), ..CatalogEntry::new("R^2", StraightModule::direct_sum(&[r.clone(), r])?) },
        CatalogEntry::new(format!("E({n})"), std(StandardKind::E)?),
    ];
    for s in 1..1usize << n {
        let vars: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect();
        out.push(CatalogEntry::new(format!("R_{}", monomial_name(&vars)), std(StandardKind::Localization(vars))?));
    }
    out.extend(local_cohomology_catalog(n)?);
    Ok(out)
}

fn monomial_name(vars: &[usize]) -> String {
    vars.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join("*")
}

/// Parses a module description over `n` variables:
///
/// * `R`, `E`, `R^k` (direct sum of `k` copies of `R`);
/// * `loc:1,2` for `R_{x_1 x_2}`;
/// * `lc:H1(x1);H2(x1,x2)` for a local cohomology pipeline applied to `R`.
///
/// Returns the module and any notices about rewritten ideals.
pub fn parse_module_spec(n: usize, text: &str) -> Result<(StraightModule, Vec<String>)> {
    let text = text.trim();
    let std = |k: StandardKind| StraightModule::make_standard(&k, n);
    if let Some(vars) = text.strip_prefix("loc:") {
        let vars = vars
            .split(',')
            .map(|v| v.trim().trim_start_matches('x').parse::<usize>().map_err(|_| Error::Parse(format!("bad variable {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok((std(StandardKind::Localization(vars))?, Vec::new()));
    }
    if let Some(pipeline) = text.strip_prefix("lc:") {
        let (stages, notices) = parse_pipeline(n, pipeline)?;
        return Ok((lyubeznik_pipeline(n, &stages)?, notices));
    }
    if let Some(k) = text.strip_prefix("R^") {
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad rank in {text:?}")))?;
        if k == 0 {
            return Ok((StraightModule::zero(n), Vec::new()));
        }
        let r = std(StandardKind::R)?;
        return Ok((StraightModule::direct_sum(&vec![r; k])?, Vec::new()));
    }
    match text {
        "R" => Ok((std(StandardKind::R)?, Vec::new())),
        "E" => Ok((std(StandardKind::E)?, Vec::new())),
        "0" => Ok((StraightModule::zero(n), Vec::new())),
        other => Err(Error::Parse(format!("unknown module {other:?} (R, E, R^k, loc:1,2, lc:H1(x1);...)"))),
    }
}

/// `H^i_I(R)` by name, for reports.
pub fn local_cohomology_entry(ideal: &MonomialIdeal, i: usize) -> Result<CatalogEntry> {
    let r = StraightModule::make_standard(&StandardKind::R, ideal.n())?;
    Ok(CatalogEntry::new(format!("H^{i}_{ideal}(R)"), local_cohomology(&r, ideal, i)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_counts() {
        // Dedekind numbers minus the empty and unit antichains
        assert_eq!(all_ideals(1).unwrap().len(), 1);
        assert_eq!(all_ideals(2).unwrap().len(), 4);
        assert_eq!(all_ideals(3).unwrap().len(), 18);
        assert_eq!(all_ideals(4).unwrap().len(), 166);
    }

    #[test]
    fn module_specs() {
        let (m, _) = parse_module_spec(2, "loc:1,2").unwrap();
        assert_eq!(m, StraightModule::make_standard(&StandardKind::Localization(vec![1, 2]), 2).unwrap());
        let (m, _) = parse_module_spec(2, "lc:H2(x1,x2)").unwrap();
        assert_eq!(m.is_e_power(), Some(1));
        let (m, _) = parse_module_spec(2, "R^3").unwrap();
        assert_eq!(m.dims()[0], 3);
        let (_, notes) = parse_module_spec(2, "lc:H1(x1^2)").unwrap();
        assert_eq!(notes.len(), 1);
        assert!(parse_module_spec(2, "F").is_err());
        assert!(parse_module_spec(2, "loc:3").is_err());
    }

    #[test]
    fn catalog_is_nonempty_and_valid() {
        let cat = generalized_eulerian_catalog(2).unwrap();
        assert!(cat.len() > 6);
        for entry in cat {
            entry.module.validate_on_box().unwrap();
        }
    }
}
