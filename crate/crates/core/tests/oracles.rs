//! Reference values computed independently (40-digit mpmath: `lambertw`,
//! `quad`, `findroot`) and frozen here.

use std::f64::consts::E;

use karamata_core::numerics::{integrate, invert_monotone, lambert_w0, lambert_wm1};
use karamata_core::operators::{dr_operator, gamma, gamma_inv, project_exp_cone, residual};
use karamata_core::rates::{
    asymptotic_profile, compose_psi, g_function, invert_phi_big, phi_big, ProfileCase,
};
use karamata_core::regvar::{arrow_inverse, karamata_ratio, minus_inverse};
use karamata_core::{
    Bracket, FixedPointOperator, PhiSpec, Point, RateBoundFn, RegFunc, SetDescriptor, Tolerance,
};

fn close(got: f64, want: f64, rel: f64) {
    assert!(
        (got - want).abs() <= rel * want.abs().max(1e-300),
        "got {got:e}, want {want:e} (rel {rel:e})"
    );
}

fn entropic() -> RegFunc {
    RegFunc::at_zero(|t: f64| if t <= 0.0 { 0.0 } else { -t * t.ln() }, 1.0 / E)
}

#[test]
fn lambert_reference_values() {
    close(lambert_w0(1.0).unwrap(), 0.567_143_290_409_783_87, 1e-15);
    close(lambert_wm1(-0.1).unwrap(), -3.577_152_063_957_297_1, 1e-15);
    close(lambert_w0(100.0).unwrap().powi(2) / 100.0, 0.114_624_914_468_404_25, 1e-14);
    assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
    close(lambert_wm1(-1.0 / E).unwrap(), -1.0, 1e-7);
}

#[test]
fn gamma_half() {
    close(gamma(0.5).unwrap(), 0.013_479_507_251_343_891, 1e-13);
    close(gamma_inv((-2.0f64).exp()).unwrap(), 2.0 / E, 1e-15);
    close(gamma(gamma_inv(0.01).unwrap()).unwrap(), 0.01, 1e-10);
}

#[test]
fn quadrature_of_an_integrable_singularity() {
    let v = integrate(|t: f64| 1.0 / t.sqrt(), Bracket::new(1e-6, 1.0).unwrap(), Tolerance::default()).unwrap();
    close(v, 2.0 * (1.0 - 1e-3), 1e-10);
}

#[test]
fn inverses() {
    let x = invert_monotone(
        |x: f64| -x.sqrt() * x.ln(),
        0.1,
        Bracket::new(1e-12, gamma(0.5).unwrap()).unwrap(),
        Tolerance::default(),
    )
    .unwrap();
    close(x, 1.234_702_184_603_125_1e-4, 1e-10);

    close(minus_inverse(&entropic(), 0.01).unwrap(), 1.544_932_398_827_345_6e-3, 1e-9);

    let f = RegFunc::at_infinity(|x: f64| x * (1.0 + x).ln().powi(2), 0.0);
    close(arrow_inverse(&f, 100.0).unwrap(), 13.783_551_736_058_367, 1e-9);
}

#[test]
fn karamata_ratio_at_1e8() {
    let f = RegFunc::at_infinity(|t: f64| t.sqrt() * t.ln(), 1.0).with_index(0.5);
    close(karamata_ratio(&f, 0.0, 1e8).unwrap(), 1.556_325_290_474_921_5, 1e-8);
    let far = karamata_ratio(&f, 0.0, 1e14).unwrap();
    assert!((far - 1.5).abs() < (1.556 - 1.5), "ratio {far} not approaching 1.5");
}

#[test]
fn entropic_rate_integral() {
    let phi = entropic();
    let delta = (-2.0f64).exp();
    close(phi_big(&phi, delta, 1e-6).unwrap(), 119.790_817_552_217_70, 1e-8);
    let u = invert_phi_big(&phi, delta, 50.0).unwrap();
    close(u, 1.493_333_752_160_309_7e-4, 1e-8);
    close(phi_big(&phi, delta, u).unwrap(), 50.0, 1e-8);
}

#[test]
fn trivial_rate_integrals() {
    let lin = RegFunc::at_zero(|t| t, 2.0);
    close(phi_big(&lin, 1.0, 1e-3).unwrap(), 1e3f64.ln(), 1e-10);
    close(invert_phi_big(&lin, 1.0, 1e6f64.ln()).unwrap(), 1e-6, 1e-8);
    let sq = RegFunc::at_zero(|t| t * t, 2.0);
    close(phi_big(&sq, 1.0, 0.25).unwrap(), 1.0, 1e-10);
    close(invert_phi_big(&sq, 1.0, 1.0).unwrap(), 0.25, 1e-8);
    assert!(phi_big(&lin, 1.0, 2.0).unwrap() < 0.0);
}

#[test]
fn linear_bound_chain() {
    // psi = id under AP constants gives phi = 18 t, Phi(u) = 18 ln(delta / u),
    // hence R(k) = exp(-floor(k / 2) / 36) from d0^2 = 1
    let spec = PhiSpec::new(RegFunc::at_zero(|t| t, 10.0), 0.5, 1.0, 2, 10.0);
    let rb = RateBoundFn::new(&spec, 1.0).unwrap();
    for k in [0u64, 1, 2, 3, 4, 50, 777] {
        let want = (-((k / 2) as f64) / 36.0).exp();
        close(rb.bound(k).unwrap(), want, 1e-8);
    }
}

#[test]
fn g_matches_lambert_closed_form() {
    let phi = RegFunc::at_zero(|t: f64| t.sqrt() * t.ln().powi(2), (-4.0f64).exp());
    for s in [1e3f64, 1e5, 1e7, 1e9] {
        let w = lambert_wm1(-1.0 / (4.0 * s.sqrt())).unwrap();
        close(g_function(&phi, s).unwrap(), 256.0 * s * w.powi(4), 1e-6);
    }
}

#[test]
fn profiles() {
    let p = asymptotic_profile(ProfileCase::HolderEntropic).unwrap();
    close(p.eval(1e4), 0.114_624_914_468_404_25, 1e-14);
    let h = asymptotic_profile(ProfileCase::Holder { gamma: 0.5 }).unwrap();
    close(h.eval(1e4), 1e-2, 1e-14);
    let l = asymptotic_profile(ProfileCase::Logarithmic { gamma: 1.0 }).unwrap();
    close(l.eval(10f64.exp()), 0.1, 1e-14);
}

#[test]
fn composed_psi() {
    let theta = RegFunc::at_zero(|t| t, 1.0).with_index(1.0);
    let gs = [
        RegFunc::at_zero(|t: f64| t.sqrt(), 1.0).with_index(0.5),
        RegFunc::at_zero(|t| t, 1.0).with_index(1.0),
    ];
    let psi = compose_psi(&theta, &gs).unwrap();
    assert_eq!(psi.index.unwrap().value, 0.5);
    close(psi.eval(0.04), 0.24, 1e-15);

    let slow = RegFunc::at_zero(|t: f64| -1.0 / t.ln(), 0.5).with_index(0.0);
    let psi = compose_psi(&slow, &[RegFunc::at_zero(|t| t, 0.5).with_index(1.0)]).unwrap();
    assert_eq!(psi.index.unwrap().value, 0.0);
    assert!(compose_psi(&slow, &[]).is_err());
}

#[test]
fn gamma_epigraph_projection() {
    let q = SetDescriptor::GammaEpigraph
        .project(&Point::from([0.1, 0.0]))
        .unwrap();
    close(q.coords()[0], 0.099_999_607_988_819_12, 1e-10);
    close(q.coords()[1], 1.234_689_738_297_053_4e-4, 1e-9);
}

#[test]
fn exp_cone_projection() {
    // (1, 0, -1) lies in the polar cone: the brute-force optimum is the apex
    let q = project_exp_cone([1.0, 0.0, -1.0]).unwrap();
    assert!(q.iter().all(|c| c.abs() < 1e-12), "{q:?}");
    assert_eq!(project_exp_cone([0.0, 1.0, 3.0]).unwrap(), [0.0, 1.0, 3.0]);
}

#[test]
fn douglas_rachford_ray() {
    let pa = FixedPointOperator::projection(SetDescriptor::x_axis());
    let pb = FixedPointOperator::projection(SetDescriptor::GammaEpigraph);
    let dr = dr_operator(&pa, &pb);
    let on = Point::from([0.0, 1.0]);
    assert!(residual(&on, std::slice::from_ref(&dr)).unwrap() < 1e-12);
    let off = Point::from([0.0, -1.0]);
    assert!(residual(&off, std::slice::from_ref(&dr)).unwrap() > 0.1);

    let ray = SetDescriptor::DrFixRay;
    close(ray.distance_to(&Point::from([3.0, -4.0])).unwrap(), 5.0, 1e-15);
    assert_eq!(ray.distance_to(&Point::from([0.0, 7.0])).unwrap(), 0.0);
    close(
        SetDescriptor::origin(2).distance_to(&Point::from([1.0, 1.0])).unwrap(),
        2f64.sqrt(),
        1e-15,
    );
}

#[test]
fn averaged_lines() {
    // P onto the x-axis and onto the diagonal, averaged at (1, 0):
    // (1, 0) and (1/2, 1/2) give (3/4, 1/4)
    let ops = [
        FixedPointOperator::projection(SetDescriptor::line(0.0)),
        FixedPointOperator::projection(SetDescriptor::line(std::f64::consts::FRAC_PI_4)),
    ];
    let avg = karamata_core::operators::average(&ops, &[0.5, 0.5]).unwrap();
    let y = avg.apply(&Point::from([1.0, 0.0])).unwrap();
    close(y.coords()[0], 0.75, 1e-15);
    close(y.coords()[1], 0.25, 1e-15);
    assert!(karamata_core::operators::average(&ops, &[0.5, 0.6]).is_err());
}
