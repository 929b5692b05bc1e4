//! The verification batteries behind `verify`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{all_ideals, generalized_eulerian_catalog, local_cohomology_catalog, CatalogEntry};
use crate::cech::{cd_profile, lyubeznik_pipeline, MonomialIdeal, PipelineStage};
use crate::error::{Error, Result};
use crate::euler::{eulerian_check, ge_offset_detect, localization_identity_check, random_samples};
use crate::homalg::{de_rham_instance, dual_of_r_check, ext_a1, ext_evidence_items, hm_of_tor_report, sharp, tor_a1, tor_r, A1Module};
use crate::koszul::{concentration_check, finite_generation_verdict, koszul_homology, FiniteGeneration, Op};
use crate::linalg::{q, Matrix};
use crate::multigraded::{StandardKind, StraightModule};
use crate::report::{timed, Instance, Verdict, VerificationReport};
use crate::weyl::{euler_change_check, WeylElement, WeylMonomial};

pub const DEFAULT_MAX_N: usize = 3;
pub const DEFAULT_WINDOW: (i64, i64) = (-12, 6);
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Catalog-wide batteries enumerate every squarefree ideal; beyond this many
/// variables that enumeration is out of reach.
const CATALOG_MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Koszul,
    DeRham,
    TorR,
    TorA1,
    Ext,
    Euler,
    Dual,
}

impl Suite {
    pub const ALL: [Suite; 8] =
        [Suite::All, Suite::Koszul, Suite::DeRham, Suite::TorR, Suite::TorA1, Suite::Ext, Suite::Euler, Suite::Dual];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Koszul => "koszul",
            Suite::DeRham => "derham",
            Suite::TorR => "tor-r",
            Suite::TorA1 => "tor-a1",
            Suite::Ext => "ext",
            Suite::Euler => "euler",
            Suite::Dual => "dual",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?} (all, koszul, derham, tor-r, tor-a1, ext, euler, dual)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_n: usize,
    /// Degree window for graded dimension tables.
    pub window: (i64, i64),
    /// Replaces the default shift vectors of the shift battery.
    pub shift: Option<Vec<i64>>,
    pub timings: bool,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_n: DEFAULT_MAX_N, window: DEFAULT_WINDOW, shift: None, timings: false, seed: DEFAULT_SEED }
    }
}

impl VerifyOptions {
    fn catalog_n(&self) -> usize {
        self.max_n.min(CATALOG_MAX_N)
    }

    fn run(&self, check: impl FnOnce() -> Instance) -> Instance {
        if self.timings {
            timed(check)
        } else {
            check()
        }
    }
}

/// Runs one battery. Output is deterministic for fixed options.
pub fn run_verify(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    crate::config::check_vars(opts.max_n)?;
    if opts.window.0 > opts.window.1 {
        return Err(Error::InvalidArgument(format!("empty window {}..{}", opts.window.0, opts.window.1)));
    }
    let mut report = VerificationReport::new(suite.name());
    let parts: &[Suite] = match suite {
        Suite::All => &Suite::ALL[1..],
        _ => std::slice::from_ref(&suite),
    };
    for part in parts {
        let instances = match part {
            Suite::Koszul => koszul_suite(opts)?,
            Suite::DeRham => derham_suite(opts),
            Suite::TorR => tor_r_suite(opts)?,
            Suite::TorA1 => tor_a1_suite(opts),
            Suite::Ext => ext_suite(opts),
            Suite::Euler => euler_suite(opts)?,
            Suite::Dual => dual_suite(opts),
            Suite::All => unreachable!("expanded above"),
        };
        for inst in instances {
            report.push(inst);
        }
    }
    Ok(report)
}

/// Ops `x_1..x_{r-1}, d_r..d_n`.
pub fn mixed_ops(n: usize, r: usize) -> Vec<Op> {
    (1..=n).map(|i| if i < r { Op::X(i) } else { Op::D(i) }).collect()
}

fn koszul_suite(opts: &VerifyOptions) -> Result<Vec<Instance>> {
    let (lo, hi) = opts.window;
    let mut out = Vec::new();
    for n in 1..=opts.catalog_n() {
        for entry in local_cohomology_catalog(n)? {
            out.push(opts.run(|| {
                let label = format!("H_*(x; {}), n={n}", entry.name);
                match koszul_homology(&entry.module, &mixed_ops(n, n + 1), lo, hi) {
                    Ok(dims) => concentration_check("thm-degreezero", label, &dims, 0),
                    Err(e) => Instance::from_error("thm-degreezero", label, &e),
                }
            }));
        }
        for entry in generalized_eulerian_catalog(n)? {
            for r in 1..=n + 1 {
                out.push(opts.run(|| {
                    let ops = mixed_ops(n, r);
                    let names: Vec<String> = ops.iter().map(Op::to_string).collect();
                    let label = format!("H_*({}; {}), n={n}", names.join(","), entry.name);
                    let expected = r as i64 - 1 - n as i64;
                    match koszul_homology(&entry.module, &ops, lo, hi) {
                        Ok(dims) => concentration_check("thm-induct-3", label, &dims, expected),
                        Err(e) => Instance::from_error("thm-induct-3", label, &e),
                    }
                }));
            }
            out.push(opts.run(|| free_instance(n, &entry)));
        }
    }
    Ok(out)
}

fn free_instance(n: usize, entry: &CatalogEntry) -> Instance {
    let verdict = finite_generation_verdict(&entry.module);
    let ok = match (verdict, entry.free_rank) {
        (FiniteGeneration::Free(m), Some(k)) => m == k,
        (FiniteGeneration::Free(_), None) | (_, Some(_)) => false,
        (FiniteGeneration::Zero | FiniteGeneration::NotFinitelyGenerated, None) => true,
    };
    Instance::new("cor-free", format!("finite generation of {}, n={n}", entry.name), Verdict::from_bool(ok))
        .with_detail(verdict.to_string())
}

fn derham_suite(opts: &VerifyOptions) -> Vec<Instance> {
    let (lo, hi) = opts.window;
    let mut out = Vec::new();
    for n in 1..=opts.max_n {
        for nu in 1..=n {
            out.push(opts.run(|| de_rham_instance(n, nu, lo, hi)));
        }
    }
    out
}

/// Ideals whose local cohomology lives in a single index.
fn singleton_profile_ideals(n: usize) -> Result<Vec<(MonomialIdeal, usize)>> {
    let mut out = Vec::new();
    for j in all_ideals(n)? {
        if let [g] = cd_profile(&j)?[..] {
            out.push((j, g));
        }
    }
    Ok(out)
}

fn tor_r_suite(opts: &VerifyOptions) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    let r_of = |n| StraightModule::make_standard(&StandardKind::R, n);
    for n in 2..=opts.catalog_n() {
        let ideals = all_ideals(n)?;
        let targets = singleton_profile_ideals(n)?;
        for i_ideal in &ideals {
            for i in 0..=i_ideal.len().min(n) {
                if crate::cech::local_cohomology(&r_of(n)?, i_ideal, i)?.is_zero() {
                    continue;
                }
                for (j_ideal, _) in &targets {
                    if i_ideal.sum(j_ideal)?.is_m_primary() {
                        out.push(opts.run(|| hm_of_tor_report(i_ideal, i, j_ideal)));
                    }
                }
            }
        }
        // m-supported inputs give m-supported Tor that is a power of E(n)
        let mut supported = vec![CatalogEntry { free_rank: None, name: format!("E({n})"), module: StraightModule::make_standard(&StandardKind::E, n)? }];
        supported.extend(local_cohomology_catalog(n)?.into_iter().filter(|e| e.module.supported_at_m()));
        for entry in &supported {
            for (j_ideal, _) in &targets {
                out.push(opts.run(|| {
                    let label = format!("Tor_*({}, H_{j_ideal}(R)) is a power of E({n})", entry.name);
                    match tor_r(&entry.module, j_ideal) {
                        Ok(tors) => {
                            let powers: Vec<Option<usize>> =
                                tors.iter().map(|t| if t.supported_at_m() { t.is_e_power() } else { None }).collect();
                            let shown: Vec<String> = powers.iter().map(|p| p.map_or("none".into(), |a| a.to_string())).collect();
                            Instance::new("thm-second", label, Verdict::from_bool(powers.iter().all(Option::is_some)))
                                .with_detail(format!("E-powers by nu: [{}]", shown.join(",")))
                        }
                        Err(e) => Instance::from_error("thm-second", label, &e),
                    }
                }));
            }
        }
    }
    Ok(out)
}

fn tor_a1_suite(opts: &VerifyOptions) -> Vec<Instance> {
    let mut out = Vec::new();
    for m in A1Module::ALL {
        for n in A1Module::ALL {
            out.push(opts.run(|| {
                let label = format!("Tor^A1_*({}#, {})", m.name(), n.name());
                match sharp(&m.presentation()).and_then(|p| tor_a1(&p, &n.straight())) {
                    Ok(dims) => concentration_check("thm-first", label, &dims, -1),
                    Err(e) => Instance::from_error("thm-first", label, &e),
                }
            }));
        }
    }
    // the De Rham complex seen as Tor against R#
    for n in A1Module::ALL {
        out.push(opts.run(|| {
            let label = format!("Tor^A1_*(R#, {}) equals H_*(d; {})", n.name(), n.name());
            let run = || -> Result<bool> {
                let tor = tor_a1(&sharp(&A1Module::R.presentation())?, &n.straight())?;
                Ok(tor == koszul_homology(&n.straight(), &[Op::D(1)], -20, 20)?)
            };
            match run() {
                Ok(ok) => Instance::new("thm-first", label, Verdict::from_bool(ok)),
                Err(e) => Instance::from_error("thm-first", label, &e),
            }
        }));
    }
    out
}

fn ext_suite(opts: &VerifyOptions) -> Vec<Instance> {
    let mut out = Vec::new();
    for m in A1Module::ALL {
        for n in A1Module::ALL {
            out.push(opts.run(|| {
                let label = format!("Ext^*_A1({}, {})", m.name(), n.name());
                let mut inst = match ext_a1(&m.presentation(), &n.straight()) {
                    Ok(dims) => concentration_check("conj-ext", label, &dims, 0),
                    Err(e) => Instance::from_error("conj-ext", label, &e),
                };
                if inst.verdict == Verdict::Pass {
                    inst.detail = Some("concentrated in degree 0".into());
                }
                inst.verdict = Verdict::ConjectureEvidence;
                inst
            }));
        }
    }
    out.extend(ext_evidence_items());
    out
}

fn euler_suite(opts: &VerifyOptions) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    out.extend(pipeline_instances(opts, &mut rng)?);
    out.extend(shift_instances(opts)?);
    out.push(opts.run(|| localization_instance(opts.seed)));
    out.extend(weyl_axiom_instances(opts.seed));
    Ok(out)
}

/// Pipelines of length one for every ideal and index, all pipelines of
/// length two for `n <= 2`, and a seeded sample of length-two pipelines for
/// `n = 3`.
fn pipeline_instances(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for n in 1..=opts.catalog_n() {
        let stages: Vec<PipelineStage> = all_ideals(n)?
            .into_iter()
            .flat_map(|ideal| (1..=ideal.len().min(n)).map(move |index| PipelineStage { ideal: ideal.clone(), index }))
            .collect();
        let mut pipelines: Vec<Vec<PipelineStage>> = stages.iter().map(|s| vec![s.clone()]).collect();
        let mut pairs: Vec<Vec<PipelineStage>> =
            stages.iter().flat_map(|a| stages.iter().map(move |b| vec![a.clone(), b.clone()])).collect();
        if n >= 3 {
            pairs.shuffle(rng);
            pairs.truncate(60);
        }
        pipelines.extend(pairs);
        for pipeline in pipelines {
            out.push(opts.run(|| pipeline_instance(n, &pipeline)));
        }
    }
    Ok(out)
}

fn pipeline_instance(n: usize, pipeline: &[PipelineStage]) -> Instance {
    let names: Vec<String> = pipeline.iter().map(|s| format!("H{}{}", s.index, s.ideal)).collect();
    let label = format!("{} applied to R, n={n}", names.join(";"));
    let run = || -> Result<Instance> {
        let module = lyubeznik_pipeline(n, pipeline)?;
        let verdict = eulerian_check(&module, 4)?;
        let mut ok = verdict.passes();
        let mut detail = verdict.to_string();
        if module.supported_at_m() {
            match module.is_e_power() {
                Some(a) => detail.push_str(&format!("; supported at m, E({n})^{a}")),
                None => {
                    ok = false;
                    detail.push_str("; supported at m but not a power of E");
                }
            }
        }
        Ok(Instance::new("thm-third", label.clone(), Verdict::from_bool(ok)).with_detail(detail))
    };
    run().unwrap_or_else(|e| Instance::from_error("thm-third", label.clone(), &e))
}

/// Shift vectors for a module over `n` variables: the requested one (padded
/// with zeros) or a default set including a zero-sum control.
fn shift_vectors(n: usize, requested: Option<&[i64]>) -> Vec<Vec<i64>> {
    let pad = |c: &[i64]| -> Vec<i64> { (0..n).map(|i| c.get(i).copied().unwrap_or(0)).collect() };
    match requested {
        Some(c) => vec![pad(c)],
        None => {
            let mut out = vec![pad(&[1]), pad(&[-1]), pad(&[2])];
            if n >= 2 {
                out.push(pad(&[1, -1]));
                out.push(pad(&[1, 1]));
            }
            out
        }
    }
}

fn shift_instances(opts: &VerifyOptions) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for n in 1..=opts.catalog_n().min(2) {
        for entry in generalized_eulerian_catalog(n)? {
            if entry.module.is_zero() {
                continue;
            }
            for c in shift_vectors(n, opts.shift.as_deref()) {
                out.push(opts.run(|| shift_instance(&entry, &c)));
            }
        }
    }
    Ok(out)
}

/// Shifting by `c` breaks the Euler property exactly when `sum c != 0`, and
/// the detected offset is `-sum c`.
pub fn shift_instance(entry: &CatalogEntry, c: &[i64]) -> Instance {
    let total: i64 = c.iter().sum();
    let label = format!("{}({c:?})", entry.name);
    let run = || -> Result<Instance> {
        let base = eulerian_check(&entry.module, 4)?;
        let shifted = entry.module.shift(c)?;
        let verdict = eulerian_check(&shifted, 4)?;
        let offset = ge_offset_detect(&shifted)?;
        let (ok, what) = if total != 0 {
            (!verdict.passes() && offset == Some(-total), format!("Euler check {verdict} (failure expected)"))
        } else {
            (verdict == base && offset == Some(0), format!("Euler check {verdict} (unchanged verdict expected)"))
        };
        let found = offset.map_or("none".into(), |l| l.to_string());
        Ok(Instance::new("prop-shift", label.clone(), Verdict::from_bool(ok))
            .with_expected(-total)
            .with_detail(format!("{what}; detected offset {found}")))
    };
    run().unwrap_or_else(|e| Instance::from_error("prop-shift", label.clone(), &e))
}

/// The localization identity on 50 seeded samples over `n <= 2`.
pub fn localization_instance(seed: u64) -> Instance {
    const SAMPLES: usize = 50;
    let label = format!("Euler operator and localization, {SAMPLES} random samples");
    let run = || -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x10ca1);
        let catalogs = [generalized_eulerian_catalog(1)?, generalized_eulerian_catalog(2)?];
        let mut failures = Vec::new();
        for _ in 0..SAMPLES {
            let n = rng.gen_range(1..=2);
            let cat = &catalogs[n - 1];
            let entry = &cat[rng.gen_range(0..cat.len())];
            let mask = rng.gen_range(1..1usize << n);
            let vars: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let power = rng.gen_range(1..=4);
            let samples = random_samples(&entry.module, 1, &mut rng);
            if !localization_identity_check(&entry.module, &vars, &samples, power)? {
                failures.push(format!("{} at x{vars:?} power {power}", entry.name));
            }
        }
        let mut inst = Instance::new("lemma-localization", label.clone(), Verdict::from_bool(failures.is_empty()));
        if !failures.is_empty() {
            inst = inst.with_detail(failures.join("; "));
        }
        Ok(inst)
    };
    run().unwrap_or_else(|e| Instance::from_error("lemma-localization", label.clone(), &e))
}

/// A random homogeneous element over `n` variables with up to three terms.
pub fn random_homogeneous(n: usize, rng: &mut impl Rng) -> Result<WeylElement> {
    let degree: i64 = rng.gen_range(-2..=2);
    let mut acc = WeylElement::zero(n)?;
    for _ in 0..rng.gen_range(1..=3) {
        let mut mono = WeylMonomial::ONE;
        for i in 0..n {
            mono.d[i] = rng.gen_range(0..=2);
        }
        let d_total: i64 = mono.d[..n].iter().map(|&e| e as i64).sum();
        let mut x_total = degree + d_total;
        if x_total < 0 {
            // not enough d's to reach this degree; raise d_1
            mono.d[0] += (-x_total) as u16;
            x_total = 0;
        }
        for _ in 0..x_total {
            mono.x[rng.gen_range(0..n)] += 1;
        }
        let coeff = q(rng.gen_range(-4..=4));
        acc = acc.add(&WeylElement::monomial(n, mono, coeff)?)?;
    }
    Ok(acc)
}

/// A random invertible integer matrix with entries in `[-3, 3]`.
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        let b = Matrix::from_rows(rows).expect("square rows");
        if b.rank() == n {
            return b;
        }
    }
}

/// Commutation relations for `n <= 4`, tau laws on random homogeneous
/// elements, and the Euler operator under 100 random changes of variable.
pub fn weyl_axiom_instances(seed: u64) -> Vec<Instance> {
    let mut out = Vec::new();

    let relations = || -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for n in 1..=4 {
            for i in 1..=n {
                for j in 1..=n {
                    let (xi, xj, di, dj) = (WeylElement::x(n, i)?, WeylElement::x(n, j)?, WeylElement::d(n, i)?, WeylElement::d(n, j)?);
                    let delta = WeylElement::constant(n, q(i64::from(i == j)))?;
                    if di.commutator(&xj)? != delta {
                        bad.push(format!("[d{i},x{j}] n={n}"));
                    }
                    if !xi.commutator(&xj)?.is_zero() || !di.commutator(&dj)?.is_zero() {
                        bad.push(format!("[x{i},x{j}] or [d{i},d{j}] n={n}"));
                    }
                }
            }
        }
        Ok(bad)
    };
    out.push(axiom_instance("Weyl commutation relations, n <= 4", relations()));

    let tau_laws = || -> Result<Vec<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a0);
        let mut bad = Vec::new();
        for k in 0..200 {
            let n = k % 4 + 1;
            let (u, v) = (random_homogeneous(n, &mut rng)?, random_homogeneous(n, &mut rng)?);
            if u.multiply(&v)?.tau() != v.tau().multiply(&u.tau())? {
                bad.push(format!("tau(uv) for u = {u}, v = {v}"));
            }
            if u.tau().tau() != u || u.tau().degree() != u.degree() {
                bad.push(format!("tau involution or degree for {u}"));
            }
        }
        Ok(bad)
    };
    out.push(axiom_instance("tau anti-involution on 200 random pairs", tau_laws()));

    let changes = || -> Result<Vec<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb);
        let mut bad = Vec::new();
        for k in 0..100 {
            let b = random_invertible(k % 4 + 1, &mut rng);
            if !euler_change_check(&b)? {
                bad.push(format!("change of variables #{k}"));
            }
        }
        Ok(bad)
    };
    out.push(axiom_instance("Euler operator under 100 random changes of variable", changes()));
    out
}

fn axiom_instance(label: &str, outcome: Result<Vec<String>>) -> Instance {
    match outcome {
        Ok(bad) if bad.is_empty() => Instance::new("weyl-axioms", label, Verdict::Pass),
        Ok(bad) => Instance::new("weyl-axioms", label, Verdict::Fail).with_detail(bad.join("; ")),
        Err(e) => Instance::from_error("weyl-axioms", label, &e),
    }
}

fn dual_suite(opts: &VerifyOptions) -> Vec<Instance> {
    (1..=opts.max_n.min(3))
        .map(|n| {
            opts.run(|| {
                dual_of_r_check(n).unwrap_or_else(|e| Instance::from_error("lemma-dual-r", format!("dual of R, n={n}"), &e))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn mixed_ops_shape() {
        assert_eq!(mixed_ops(3, 1), vec![Op::D(1), Op::D(2), Op::D(3)]);
        assert_eq!(mixed_ops(3, 3), vec![Op::X(1), Op::X(2), Op::D(3)]);
        assert_eq!(mixed_ops(2, 3), vec![Op::X(1), Op::X(2)]);
    }

    #[test]
    fn shift_vectors_pad() {
        assert_eq!(shift_vectors(3, Some(&[1])), vec![vec![1, 0, 0]]);
        assert_eq!(shift_vectors(1, None).len(), 3);
    }

    #[test]
    fn small_suites_pass() {
        let opts = VerifyOptions { max_n: 2, ..Default::default() };
        for suite in [Suite::DeRham, Suite::TorA1, Suite::Dual] {
            let rep = run_verify(suite, &opts).unwrap();
            assert!(rep.all_passed(), "{}", rep.to_pretty());
        }
    }

    #[test]
    fn ext_never_fails() {
        let rep = run_verify(Suite::Ext, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.exit_code(), 0);
        assert_eq!(rep.instances.iter().filter(|i| i.theorem == "conj-ext").count(), 9);
    }

    #[test]
    fn requested_shift_is_a_passing_negative_test() {
        let opts = VerifyOptions { max_n: 1, shift: Some(vec![1]), ..Default::default() };
        let insts = shift_instances(&opts).unwrap();
        assert!(!insts.is_empty());
        assert!(insts.iter().all(|i| i.verdict == Verdict::Pass), "{insts:?}");
    }

    #[test]
    fn weyl_axioms_hold() {
        for inst in weyl_axiom_instances(DEFAULT_SEED) {
            assert_eq!(inst.verdict, Verdict::Pass, "{inst:?}");
        }
    }

    #[test]
    fn too_many_variables_rejected() {
        let opts = VerifyOptions { max_n: 40, ..Default::default() };
        assert!(run_verify(Suite::DeRham, &opts).is_err());
    }
}
