use std::f64::consts::PI;

use proptest::prelude::*;
use slicereg::carleson::{
    embedding_constant_complex, embedding_constant_quat, equivalence_experiment, ExperimentParams,
    SymmetricBox, VanishingRule,
};
use slicereg::family::TestFamily;
use slicereg::generators::{dyadic_shells, random_measure, random_slice_series, rng};
use slicereg::measures::AtomicMeasure;
use slicereg::spaces::{Preset, QuadratureSpec};
use slicereg::{ComplexSeries, ImaginaryUnit, Quaternion, SlicePoint, SliceSeries};

fn unit() -> impl Strategy<Value = ImaginaryUnit> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, c)| a * a + b * b + c * c > 1e-3)
        .prop_map(|(a, b, c)| ImaginaryUnit::normalized([a, b, c]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn box_mass_matches_projected_mass(seed in 0u64..10_000, t in 0.0..=PI, r in 0.01f64..0.999) {
        let mu = random_measure(&mut rng(seed), 40, 0.999);
        let b = SymmetricBox::new(t, r).unwrap();
        let (a, c) = (b.mass(&mu), b.complex_mass(&mu.project_slice()));
        prop_assert!((a - c).abs() <= 1e-12 * a.max(c).max(1e-300));
    }

    #[test]
    fn boxes_nest(t in 0.0..=PI, r in 0.01f64..0.99, dr in 0.0f64..0.5, rho in 0.0f64..0.9999, alpha in 0.0..=PI, u in unit()) {
        let r2 = (r + dr).min(0.999);
        let outer = SymmetricBox::new(t, r).unwrap();
        let inner = SymmetricBox::new(t, r2).unwrap();
        let q = SlicePoint::polar(rho, alpha, u).unwrap();
        if inner.contains(&q) {
            prop_assert!(outer.contains(&q));
        }
    }

    #[test]
    fn box_membership_ignores_the_unit(t in 0.0..=PI, r in 0.01f64..0.99, rho in 0.0f64..0.9999, alpha in 0.0..=PI, u in unit(), v in unit()) {
        let b = SymmetricBox::new(t, r).unwrap();
        let a = SlicePoint::polar(rho, alpha, u).unwrap();
        let c = SlicePoint::polar(rho, alpha, v).unwrap();
        prop_assert_eq!(b.contains(&a), b.contains(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constants_grow_with_the_family(seed in 0u64..1000, extra in 1usize..6) {
        let mut r = rng(seed);
        let mu = random_measure(&mut r, 30, 0.95);
        let spec = Preset::Bergman.spec(10);
        let quad = QuadratureSpec::default();
        let mut fam: Vec<SliceSeries> = (0..4).map(|_| random_slice_series(&mut r, 10)).collect();
        let before = embedding_constant_quat(&mu, &spec, &quad, 2.0, &fam, 8).unwrap().constant;
        for _ in 0..extra {
            fam.push(random_slice_series(&mut r, 10));
        }
        let after = embedding_constant_quat(&mu, &spec, &quad, 2.0, &fam, 8).unwrap().constant;
        prop_assert!(after >= before);
    }
}

#[test]
fn dirac_at_origin_constant_is_one() {
    let mu = AtomicMeasure::dirac(&Quaternion::ZERO, 1.0).unwrap();
    let spec = Preset::Hardy2.spec(12);
    let quad = QuadratureSpec::default();
    let mut r = rng(77);
    let mut fam = vec![SliceSeries::constant(Quaternion::ONE)];
    fam.extend((0..200).map(|_| random_slice_series(&mut r, 12)));
    let est = embedding_constant_quat(&mu, &spec, &quad, 2.0, &fam, 8).unwrap();
    assert_eq!(est.constant, 1.0);
    assert_eq!(est.argmax, 0);
}

#[test]
fn zero_measure_constant_is_zero() {
    let spec = Preset::Hardy2.spec(4);
    let quad = QuadratureSpec::default();
    let fam = vec![ComplexSeries::monomial(2), ComplexSeries::monomial(3)];
    let est = embedding_constant_complex(&AtomicMeasure::empty().project_slice(), &spec, &quad, 2.0, &fam).unwrap();
    assert_eq!(est.constant, 0.0);
}

#[test]
fn single_atom_with_monomials() {
    // |q0^n| m^(1/p) / sqrt(c_n), maximized over n
    let q0 = SlicePoint::polar(0.8, 1.0, ImaginaryUnit::normalized([1.0, 2.0, 2.0]).unwrap()).unwrap();
    let mass = 0.3;
    let mut mu = AtomicMeasure::empty();
    mu.push(q0, mass).unwrap();
    let quad = QuadratureSpec::default();
    for preset in Preset::ALL {
        let spec = preset.spec(10);
        for p in [1.0, 2.0, 3.0] {
            let oracle = (0..=10)
                .map(|n| 0.8f64.powi(n as i32) * mass.powf(1.0 / p) / preset.weight(n).sqrt())
                .fold(0.0, f64::max);
            let fam = TestFamily {
                quaternionic: (0..=10).map(SliceSeries::monomial).collect(),
                complex: (0..=10).map(ComplexSeries::monomial).collect(),
            };
            let params = ExperimentParams {
                p,
                t_count: 16,
                r_levels: dyadic_shells(6),
                sphere_samples: 16,
                vanishing: VanishingRule::default(),
            };
            let rep = equivalence_experiment(&mu, &spec, &quad, &fam, &params).unwrap();
            assert!((rep.c_quat - oracle).abs() <= 1e-12 * oracle, "{preset:?} p={p}");
            assert!((rep.c_cplx - oracle).abs() <= 1e-12 * oracle);
            assert!(rep.chain_ok);
            assert!(rep.pass());
        }
    }
}

#[test]
fn chain_holds_for_a_hardy_p_space() {
    // sampled lift norms (not exact) still respect the chain
    let mut r = rng(12);
    let mu = random_measure(&mut r, 30, 0.95);
    let spec = slicereg::spaces::SpaceSpec::hardy(3.0);
    let quad = QuadratureSpec { n_theta: 256, ..QuadratureSpec::default() };
    let cfg = slicereg::family::FamilyConfig { degree: 6, random_quat: 6, random_complex: 6, probes: 4 };
    let fam = TestFamily::generate(&cfg, &spec, &mu, 5);
    let params = ExperimentParams {
        p: 3.0,
        t_count: 16,
        r_levels: dyadic_shells(8),
        sphere_samples: 16,
        vanishing: VanishingRule::default(),
    };
    let rep = equivalence_experiment(&mu, &spec, &quad, &fam, &params).unwrap();
    assert!(!rep.exact_norms);
    assert!(rep.chain_ok, "{:?}", rep.violations);
    assert!(rep.real_subfamily.ok);
}
