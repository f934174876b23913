//! Full-size benchmark behaviors that only show up at the production
//! discretization (n = 400, ω_cut = 3).

use qheat_core::engine::{bose_einstein, lamb_shift, EngineParams, SpectralDensity};
use qheat_core::exact::{exact_steady_report, ExactOptions};

#[test]
fn decoupled_equilibrium_stays_put_at_full_size() {
    // g = 0 with the initial state matched to the baths: currents vanish
    // and the system occupations hold their thermal values.
    let p = EngineParams {
        omega_c: 1.0,
        omega_h: 1.0,
        g: 0.0,
        kappa_c: 0.05,
        kappa_h: 0.05,
        kt_c: 0.5,
        kt_h: 5.0,
    };
    let report = exact_steady_report(&p, &ExactOptions::default()).unwrap();
    assert!(report.j_h.abs() < 1e-3, "J_h = {}", report.j_h);
    assert!(report.j_c.abs() < 1e-3, "J_c = {}", report.j_c);
    assert_eq!(report.power, 0.0);

    // The occupations settle near their thermal values; the residual
    // offset is the finite-coupling frequency renormalization that the
    // master equations drop, so the shifted prediction n_B(Ω + Σ, T) is
    // the sharper reference.
    let (nb_h, nb_c) = p.bath_occupations();
    assert!((report.n_h - nb_h).abs() / nb_h < 0.10);
    assert!((report.n_c - nb_c).abs() / nb_c < 0.10);
    let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
    let sigma = lamb_shift(&sd, 1.0).unwrap();
    let shifted_h = bose_einstein(1.0 + sigma, p.kt_h);
    let shifted_c = bose_einstein(1.0 + sigma, p.kt_c);
    assert!(
        (report.n_h - shifted_h).abs() / shifted_h < 0.01,
        "n_h = {} vs shifted thermal {}",
        report.n_h,
        shifted_h
    );
    assert!(
        (report.n_c - shifted_c).abs() / shifted_c < 0.01,
        "n_c = {} vs shifted thermal {}",
        report.n_c,
        shifted_c
    );
    assert!(!report.exact_meta.unwrap().recurrence_warning);
}
