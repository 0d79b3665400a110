use std::f64::consts::PI;

use dipole_phase::constants::E_CHARGE;
use dipole_phase::fieldmom::{
    field_momentum_component, MomentumOptions, PointCharge, SlabFieldConfig,
};
use dipole_phase::interferometer::{
    eigenbasis_transform, evolve, fringe, DipoleState, TransformDirection,
};
use dipole_phase::phase::{geometric_phase_endpoint, hmw_phase, DipoleMoment, SheetScenario};
use dipole_phase::quadrature::LineOptions;
use dipole_phase::{Trajectory, Vec3};
use proptest::prelude::*;

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cross_product_is_orthogonal(a in vec3(10.0), b in vec3(10.0)) {
        let c = a.cross(b);
        let scale = a.norm() * b.norm() * (a.norm() + b.norm()) + 1e-300;
        prop_assert!(c.dot(a).abs() / scale < 1e-14);
        prop_assert!(c.dot(b).abs() / scale < 1e-14);
    }

    #[test]
    fn fringe_conserves_probability(phi in -10.0f64..10.0) {
        let p = fringe(phi);
        prop_assert!((p.p_200() + p.p_210() - 1.0).abs() < 1e-12);
        prop_assert!((p.p_210() - phi.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn evolution_composes(p1 in -PI..PI, p2 in -PI..PI) {
        let s = DipoleState::ground_2s();
        let two = evolve(&evolve(&s, p1).unwrap(), p2).unwrap();
        let e = eigenbasis_transform(&s, TransformDirection::ToEigen);
        let one = evolve(&e, p1 + p2).unwrap();
        prop_assert!((two.fidelity(&one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duality_keeps_the_phase(d in -5.0f64..5.0, mu in -5.0f64..5.0, nb in -3.0f64..3.0, ne in -3.0f64..3.0) {
        let s = SheetScenario { d_z: d, mu_z: mu, n_b: nb, n_e: ne };
        let dual = s.maxwell_dual();
        prop_assert!((dual.phase() - s.phase()).abs() <= 1e-12 * s.phase().abs().max(1e-300));
    }

    #[test]
    fn loop_phase_flips_with_orientation(y_lo in -3.0f64..-1.0, y_hi in 0.5f64..2.0, z_lo in -2.0f64..-0.5, z_hi in 0.5f64..3.0) {
        let cfg = SlabFieldConfig::magnetic(1.0, 0.5).unwrap();
        let d = DipoleMoment::hydrogen(1.0);
        let lp = Trajectory::rectangle_yz(0.0, (y_lo, y_hi), (z_lo, z_hi)).unwrap();
        let f = hmw_phase(&d, &cfg, &lp, &LineOptions::default()).unwrap();
        let b = hmw_phase(&d, &cfg, &lp.reversed(), &LineOptions::default()).unwrap();
        prop_assert!((f.phi + b.phi).abs() <= 1e-12 * f.phi.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn momentum_is_linear_in_charge(q in 0.1f64..10.0, z in -5.0f64..5.0) {
        let cfg = SlabFieldConfig::thin_magnetic(1.0).unwrap();
        let opts = MomentumOptions::new(1.0);
        let r = Vec3::new(0.0, 1.0, z);
        let unit = field_momentum_component(&PointCharge::new(1.0, r).unwrap(), &cfg, 2, &opts).unwrap();
        let scaled = field_momentum_component(&PointCharge::new(q, r).unwrap(), &cfg, 2, &opts).unwrap();
        prop_assert!((scaled.value - q * unit.value).abs() <= scaled.error_estimate + q * unit.error_estimate);
    }

    #[test]
    fn endpoint_phase_is_antisymmetric(zi in -8.0f64..8.0, zf in -8.0f64..8.0, y in 0.5f64..3.0) {
        let cfg = SlabFieldConfig::thin_magnetic(1.0).unwrap();
        let q = PointCharge::new(E_CHARGE, Vec3::ZERO).unwrap();
        let d = DipoleMoment::hydrogen(1.0);
        let opts = MomentumOptions::new(1.0);
        let (a, b) = (Vec3::new(0.0, y, zi), Vec3::new(0.0, y, zf));
        let f = geometric_phase_endpoint(&q, &d, &cfg, a, b, &opts).unwrap();
        let r = geometric_phase_endpoint(&q, &d, &cfg, b, a, &opts).unwrap();
        prop_assert_eq!(f.phi, -r.phi);
    }
}
