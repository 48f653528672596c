use geometry_core::*;
use hitchin_connection::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_quantization::linalg::{max_abs, op_norm, CMat};
use torus_quantization::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn frame(k: usize, tau: TeichPoint) -> QuantumFrame {
    build_frame(Level::new(k as i64).unwrap(), tau, 1e-12).unwrap()
}

#[test]
fn delta_g_series_and_spectral_agree() {
    let f = frame(4, TeichPoint::i());
    let g = g_of_x(TeichPoint::i(), TangentU::d_im());
    let s = SectionVector::basis(4, 0);
    let samples = f.grid_samples(&s);
    let spectral = delta_g_apply(&f, g, &samples);
    let series = delta_g_apply_series(&f, g, &s).to_samples();
    let err = spectral
        .iter()
        .zip(&series)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
    let zero = delta_g_apply(&f, GTensor::zero(), &samples);
    assert!(zero.iter().all(|z| z.norm() == 0.0));
    // Linearity in G and in s.
    let g2 = GTensor {
        coeff: g.coeff * c(2.0, -1.0),
    };
    let scaled = delta_g_apply(&f, g2, &samples);
    for (a, b) in scaled.iter().zip(&spectral) {
        assert!((a - b * c(2.0, -1.0)).norm() < 1e-9);
    }
    let s1 = f.grid_samples(&SectionVector::basis(4, 1));
    let sum: Vec<C64> = samples
        .iter()
        .zip(&s1)
        .map(|(a, b)| a + b * c(0.0, 3.0))
        .collect();
    let d1 = delta_g_apply(&f, g, &s1);
    for ((a, b), d) in delta_g_apply(&f, g, &sum).iter().zip(&spectral).zip(&d1) {
        assert!((a - b - d * c(0.0, 3.0)).norm() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn h_vanishes(u in -2.0f64..2.0, v in 0.2f64..4.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let tau = TeichPoint::from_parts(u, v).unwrap();
        let x = TangentU::new(c(a, b));
        prop_assert!(theta_delta_residual(tau, x, 16) < 1e-10);
        let h = h_of_x(tau, x, 8).unwrap();
        prop_assert!(h.iter().all(|&z| z == 0.0));
    }
}

#[test]
fn hitchin_form_preserves_holomorphicity() {
    let f = frame(8, TeichPoint::i());
    let zero = hitchin_form(&f, TangentU::zero()).unwrap();
    assert!(max_abs(&zero.matrix) == 0.0);
    let out = hitchin_form(&f, TangentU::d_im()).unwrap();
    assert!(out.residual < 1e-8, "{}", out.residual);
    let t = toeplitz_form(&f, TangentU::zero());
    assert!(max_abs(&t.matrix) == 0.0);
}

#[test]
fn hitchin_minus_toeplitz_is_order_one_over_k() {
    let x = TangentU::new(c(0.3, 1.0));
    let mut scaled = Vec::new();
    for k in [8usize, 16, 32, 64, 128] {
        let f = frame(k, TeichPoint::i());
        let h = hitchin_form(&f, x).unwrap().matrix;
        let t = toeplitz_form(&f, x).matrix;
        scaled.push(k as f64 * op_norm(&(h - t)));
        assert!(anti_hermitian_residual(&f, &toeplitz_form(&f, x).matrix) < 1e-8);
    }
    assert!(scaled.iter().all(|&s| s < 1.0), "{scaled:?}");
}

#[test]
fn toeplitz_form_is_gram_anti_hermitian() {
    let f = frame(8, TeichPoint::i());
    for x in [
        TangentU::d_re(),
        TangentU::d_im(),
        TangentU::new(c(0.4, -0.9)),
    ] {
        let a = toeplitz_form(&f, x).matrix;
        assert!(anti_hermitian_residual(&f, &a) < 1e-8);
    }
}

#[test]
fn connection_form_split_reproduces_values() {
    let tau = TeichPoint::from_parts(0.2, 0.8).unwrap();
    let conn = HalfFormConnection;
    let a_re = conn.form(tau, TangentU::d_re()).unwrap();
    let a_im = conn.form(tau, TangentU::d_im()).unwrap();
    let form = ConnectionForm::from_real_values(tau, &a_re, &a_im);
    let x = TangentU::new(c(-0.6, 0.35));
    let direct = conn.form(tau, x).unwrap();
    assert!(max_abs(&(form.apply(x) - direct)) < 1e-14);
    assert!(form.to_json()["a_dtau"].is_array());
}

fn synthetic() -> ConstantConnection {
    let a_re = CMat::from_row_slice(
        2,
        2,
        &[c(0.0, 0.3), c(0.2, 0.1), c(-0.2, 0.1), c(0.0, -0.1)],
    );
    let a_im = CMat::from_row_slice(2, 2, &[c(0.1, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(-0.4, 0.0)]);
    ConstantConnection { a_re, a_im }
}

/// A `τ`-dependent rank-2 connection for exercising the integrator.
struct Varying;

impl Connection for Varying {
    fn dim(&self) -> usize {
        2
    }
    fn form(&self, tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError> {
        let (u, v) = (tau.re(), tau.im());
        let m = CMat::from_row_slice(
            2,
            2,
            &[c(v.sin(), u), c(0.3, u * v), c(-0.3, 0.1), c(0.0, v * v)],
        );
        let n = CMat::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0 / v), c(u, 0.0), c(0.2, -u), c(v.cos(), 0.0)],
        );
        Ok(m * c(x.dtau.re, 0.0) + n * c(x.dtau.im, 0.0))
    }
}

#[test]
fn transport_functoriality() {
    let a = TeichPoint::i();
    let b = TeichPoint::from_parts(0.7, 1.4).unwrap();
    let cc = TeichPoint::from_parts(-0.5, 0.6).unwrap();
    let tol = 1e-11;
    let zero = transport_with(&Varying, &[a], tol).unwrap();
    assert_eq!(zero.u, CMat::identity(2, 2));
    let p1 = geodesic(a, b, 12);
    let p2 = geodesic(b, cc, 12);
    let u1 = transport_with(&Varying, &p1, tol).unwrap().u;
    let u2 = transport_with(&Varying, &p2, tol).unwrap().u;
    let u12 = transport_with(&Varying, &concat(&p1, &p2), tol).unwrap().u;
    assert!(op_norm(&(&u2 * &u1 - &u12)) < 10.0 * tol);
    let back = transport_with(&Varying, &reverse(&p1), tol).unwrap().u;
    assert!(op_norm(&(back * u1 - CMat::identity(2, 2))) < 10.0 * tol);
    let loose = transport_with(&Varying, &p1, 1e-9).unwrap();
    let tight = transport_with(&Varying, &p1, 1e-12).unwrap();
    assert!(op_norm(&(&loose.u - &tight.u)) < 10.0 * 1e-9);
    assert!(transport_with(&Varying, &p1, 1e-3).is_err());
    assert!(tight.to_json().contains("ode_tolerance"));
}

#[test]
fn constant_connection_transport_is_exponential() {
    let conn = synthetic();
    let d = c(0.3, -0.2);
    let a = TeichPoint::i();
    let b = TeichPoint::new(a.tau() + d).unwrap();
    let u = transport_with(&conn, &[a, b], 1e-12).unwrap().u;
    let gen = conn.form(a, TangentU::new(d)).unwrap() * c(-1.0, 0.0);
    let exact = gen.exp();
    assert!(op_norm(&(u - exact)) < 1e-10);
}

#[test]
fn constant_connection_curvature_is_commutator() {
    let conn = synthetic();
    let sample = curvature_with(&conn, TeichPoint::i(), 1e-2, 1e-12).unwrap();
    let comm = &conn.a_re * &conn.a_im - &conn.a_im * &conn.a_re;
    assert!(max_abs(&(sample.r - comm)) < 1e-6);
    let big = ConstantConnection {
        a_re: &conn.a_re * c(40.0, 0.0),
        a_im: &conn.a_im * c(40.0, 0.0),
    };
    assert!(matches!(
        curvature_with(&big, TeichPoint::i(), 0.2, 1e-10),
        Err(HitchinError::LoopTooLarge(_))
    ));
}

#[test]
fn half_form_curvature_matches_formula() {
    for &(u, v) in &[(0.0, 1.0), (0.3, 0.5), (-1.0, 2.0)] {
        let tau = TeichPoint::from_parts(u, v).unwrap();
        let s = curvature_with(&HalfFormConnection, tau, 1e-3, 1e-12).unwrap();
        let want = delta_curvature_formula(tau, TangentU::d_re(), TangentU::d_im());
        assert!(
            (s.r[(0, 0)] - want).norm() < 1e-5,
            "{} vs {want}",
            s.r[(0, 0)]
        );
    }
}

#[test]
fn hitchin_curvature_is_scalar_at_level_eight() {
    let s = curvature_estimate(
        Level::new(8).unwrap(),
        TeichPoint::i(),
        1e-2,
        Which::Hitchin,
        1e-12,
    )
    .unwrap();
    let tr = s.r.trace() / 8.0;
    let mut d = s.r.clone();
    for i in 0..8 {
        d[(i, i)] -= tr;
    }
    assert!(op_norm(&d) < 1e-5);
    assert!(s.to_json().contains("\"r\""));
}

#[test]
fn prel_comp_identity_on_smooth_sections() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, tau) in [
        (4usize, TeichPoint::i()),
        (6, TeichPoint::from_parts(0.3, 0.8).unwrap()),
    ] {
        let f = frame(k, tau);
        let g = g_of_x(tau, TangentU::new(c(0.5, 0.8)));
        // Random smooth section: low Fourier modes times frame sections.
        let mut field = SpectralField::zeros(f.n_g());
        for _ in 0..4 {
            let l = rng.gen_range(0..k);
            let (mu, nu) = (rng.gen_range(-2i64..=2), rng.gen_range(-2i64..=2));
            let w = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            field.add_assign(
                &f.basis_field(l, |_| C64::new(1.0, 0.0)).mul_mode(mu, nu),
                w,
            );
        }
        let samples = field.to_samples();
        let r = prel_comp_residual(&f, g, &samples);
        assert!(r < 1e-6, "k={k}: {r}");
        let hol = f.grid_samples(&SectionVector::basis(k, 1));
        assert!(prel_comp_residual(&f, g, &hol) < 1e-6);
    }
}
