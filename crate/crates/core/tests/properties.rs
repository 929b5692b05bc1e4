use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eulerian_dmod::catalog::generalized_eulerian_catalog;
use eulerian_dmod::cech::{cech_complex, MonomialIdeal};
use eulerian_dmod::euler::{eulerian_check, ge_offset_detect, localization_identity_check, random_samples};
use eulerian_dmod::koszul::{koszul_homology, koszul_homology_iterated, Op};
use eulerian_dmod::linalg::q;
use eulerian_dmod::multigraded::{StandardKind, StraightModule};
use eulerian_dmod::weyl::{WeylElement, WeylMonomial};

/// Up to four terms with small exponents over `n` variables.
fn weyl_element(n: usize) -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u16..3, n), prop::collection::vec(0u16..3, n)), 0..4).prop_map(
        move |terms| {
            let mut acc = WeylElement::zero(n).unwrap();
            for (c, xs, ds) in terms {
                let mut m = WeylMonomial::ONE;
                m.x[..n].copy_from_slice(&xs);
                m.d[..n].copy_from_slice(&ds);
                acc = acc.add(&WeylElement::monomial(n, m, q(c)).unwrap()).unwrap();
            }
            acc
        },
    )
}

fn two_elements() -> impl Strategy<Value = (WeylElement, WeylElement)> {
    (1usize..=3).prop_flat_map(|n| (weyl_element(n), weyl_element(n)))
}

fn three_elements() -> impl Strategy<Value = (WeylElement, WeylElement, WeylElement)> {
    (1usize..=2).prop_flat_map(|n| (weyl_element(n), weyl_element(n), weyl_element(n)))
}

fn catalog(n: usize) -> Vec<StraightModule> {
    generalized_eulerian_catalog(n).unwrap().into_iter().map(|e| e.module).collect()
}

/// A catalog module over one or two variables.
fn catalog_module() -> impl Strategy<Value = StraightModule> {
    (1usize..=2).prop_flat_map(|n| prop::sample::select(catalog(n)))
}

/// A catalog module over up to three variables with a nonempty list of
/// Koszul operators in distinct directions, and a permutation of that list.
fn module_and_ops() -> impl Strategy<Value = (StraightModule, Vec<Op>, Vec<Op>)> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let dirs = prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=n);
            (prop::sample::select(catalog(n)), dirs, prop::collection::vec(any::<bool>(), n))
        })
        .prop_flat_map(|(m, dirs, use_x)| {
            let ops: Vec<Op> = dirs.iter().zip(use_x).map(|(&i, x)| if x { Op::X(i) } else { Op::D(i) }).collect();
            (Just(m), Just(ops.clone()), Just(ops).prop_shuffle())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_is_an_anti_involution((u, v) in two_elements()) {
        prop_assert_eq!(u.multiply(&v).unwrap().tau(), v.tau().multiply(&u.tau()).unwrap());
        prop_assert_eq!(u.tau().tau(), u.clone());
        prop_assert_eq!(u.tau().degree(), u.degree());
    }

    #[test]
    fn multiplication_is_associative((a, b, c) in three_elements()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn degrees_add((u, v) in two_elements()) {
        let uv = u.multiply(&v).unwrap();
        if let (Some(a), Some(b), false) = (u.degree(), v.degree(), uv.is_zero()) {
            prop_assert_eq!(uv.degree(), Some(a + b));
        }
    }

    #[test]
    fn normal_form_is_a_projection_onto_polynomials((u, v) in two_elements()) {
        let nf = u.normal_form_mod_da();
        prop_assert_eq!(nf.normal_form_mod_da(), nf.clone());
        prop_assert!(nf.terms().all(|(m, _)| m.d.iter().all(|&e| e == 0)));
        let sum = u.add(&v).unwrap().normal_form_mod_da();
        prop_assert_eq!(sum, nf.add(&v.normal_form_mod_da()).unwrap());
        // d_1 * anything is killed
        let n = u.n();
        prop_assert!(WeylElement::d(n, 1).unwrap().multiply(&v).unwrap().normal_form_mod_da().is_zero());
    }

    #[test]
    fn koszul_homology_ignores_operator_order((m, ops, shuffled) in module_and_ops()) {
        prop_assert_eq!(koszul_homology(&m, &ops, -10, 10).unwrap(), koszul_homology(&m, &shuffled, -10, 10).unwrap());
    }

    #[test]
    fn splice_engine_agrees_with_total_complex((m, ops, _) in module_and_ops()) {
        prop_assert_eq!(koszul_homology(&m, &ops, -10, 10).unwrap(), koszul_homology_iterated(&m, &ops, -10, 10).unwrap());
    }

    #[test]
    fn cech_euler_characteristic_per_degree(
        n in 1usize..=3,
        gens in prop::collection::vec(1usize..8, 1..4),
        which in 0usize..4,
    ) {
        let monomials: Vec<String> = gens
            .iter()
            .map(|g| (0..n).filter(|i| g >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join("*"))
            .filter(|v| !v.is_empty())
            .collect();
        prop_assume!(!monomials.is_empty());
        let (ideal, _) = MonomialIdeal::parse(n, &monomials.join(",")).unwrap();
        let modules = [
            StraightModule::make_standard(&StandardKind::R, n).unwrap(),
            StraightModule::make_standard(&StandardKind::E, n).unwrap(),
            StraightModule::make_standard(&StandardKind::Localization(vec![1]), n).unwrap(),
            StraightModule::make_standard(&StandardKind::R, n).unwrap().shift(&vec![1; n]).unwrap(),
        ];
        let m = &modules[which];
        let complex = cech_complex(m, &ideal).unwrap();
        let cohomology: Vec<StraightModule> = (0..complex.terms.len()).map(|i| complex.cohomology(i).unwrap()).collect();
        for b in StraightModule::validation_box(n) {
            let alt = |mods: &[StraightModule]| -> i64 {
                mods.iter().enumerate().map(|(i, t)| if i % 2 == 0 { 1 } else { -1 } * t.piece_dim(&b) as i64).sum()
            };
            prop_assert_eq!(alt(&complex.terms), alt(&cohomology), "raw degree {:?}", b);
        }
    }

    #[test]
    fn shifts_with_nonzero_sum_break_the_euler_property(
        m in catalog_module(),
        c in prop::collection::vec(-3i64..=3, 2),
    ) {
        prop_assume!(!m.is_zero());
        let c = &c[..m.n()];
        let total: i64 = c.iter().sum();
        let shifted = m.shift(c).unwrap();
        prop_assert_eq!(eulerian_check(&shifted, 4).unwrap().passes(), total == 0);
        prop_assert_eq!(ge_offset_detect(&shifted).unwrap(), Some(-total));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn localization_identity(m in catalog_module(), vars_mask in 1usize..4, power in 1u32..=4, seed in any::<u64>()) {
        let vars: Vec<usize> = (0..m.n()).filter(|i| vars_mask >> i & 1 == 1).map(|i| i + 1).collect();
        prop_assume!(!vars.is_empty());
        let samples = random_samples(&m, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(localization_identity_check(&m, &vars, &samples, power).unwrap());
    }
}
