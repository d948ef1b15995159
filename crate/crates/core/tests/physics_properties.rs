use std::f64::consts::PI;

use eit_prism::physics::{
    complex_chi, grad_index, grad_index_fd, index_minus_one, re_chi, refractive_index,
    ControlField, MediumParams, Susceptibility,
};
use eit_prism::Detuning;
use proptest::prelude::*;

const TWO_PI: f64 = 2.0 * PI;

fn medium() -> impl Strategy<Value = MediumParams> {
    (
        3e-5f64..3e-4,
        8.0f64..14.0,
        6.0f64..9.0,
        5.0f64..8.0,
        0.0f64..1.0,
    )
        .prop_map(|(lambda, log_n, log_g, log_gr, frac)| {
            let gamma = TWO_PI * 10f64.powf(log_g);
            MediumParams {
                lambda_ab: lambda,
                density: 10f64.powf(log_n),
                gamma,
                gamma_r: TWO_PI * 10f64.powf(log_gr),
                // log-spaced between 2π·1 Hz and γ
                gamma_cb: TWO_PI * (gamma / TWO_PI).powf(frac),
                cell_length: 7.5,
            }
        })
}

fn rate(lo_exp: f64, hi_exp: f64) -> impl Strategy<Value = f64> {
    (lo_exp..hi_exp).prop_map(|e| TWO_PI * 10f64.powf(e))
}

fn signed_rate() -> impl Strategy<Value = f64> {
    (rate(0.0, 9.0), any::<bool>()).prop_map(|(r, neg)| if neg { -r } else { r })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn re_chi_is_odd_in_detuning(m in medium(), om in rate(3.0, 9.0), dw in signed_rate()) {
        let a = re_chi(Detuning(dw), om, &m).unwrap();
        let b = re_chi(Detuning(-dw), om, &m).unwrap();
        prop_assert_eq!(a, -b);
    }

    #[test]
    fn absorption_is_even_and_positive(m in medium(), om in rate(3.0, 9.0), dw in signed_rate()) {
        let a = complex_chi(Detuning(dw), om, &m).unwrap();
        let b = complex_chi(Detuning(-dw), om, &m).unwrap();
        prop_assert!(a.im > 0.0);
        prop_assert!((a.im - b.im).abs() <= 1e-12 * a.im);
    }

    #[test]
    fn real_part_matches_printed_form(m in medium(), om in rate(3.0, 9.0), dw in signed_rate()) {
        let chi = complex_chi(Detuning(dw), om, &m).unwrap();
        let printed = re_chi(Detuning(dw), om, &m).unwrap();
        prop_assert!((chi.re - printed).abs() <= 1e-12 * printed.abs());
    }

    #[test]
    fn index_agrees_with_linear_expansion(re in -1e-4f64..1e-4, im in 0.0f64..1e-4) {
        let chi = Susceptibility { re, im };
        let n = refractive_index(chi).unwrap();
        let linear = 2.0 * PI * chi.as_complex();
        // Second-order remainder: (2πχ)²/2.
        let bound = 0.6 * linear.norm_sqr() + 1e-15;
        prop_assert!((n - 1.0 - linear).norm() <= bound);
        prop_assert!((index_minus_one(chi).unwrap() - (n - 1.0)).norm() <= 1e-15);
    }

    #[test]
    fn gradient_paths_agree(
        khz in 1.0f64..200.0,
        neg in any::<bool>(),
        u in 0.2f64..1.5,
    ) {
        let m = MediumParams {
            lambda_ab: 7.95e-5,
            density: 3e11,
            gamma: TWO_PI * 300e6,
            gamma_r: TWO_PI * 5.75e6,
            gamma_cb: TWO_PI * 1e3,
            cell_length: 7.5,
        };
        let c = ControlField { omega_peak: TWO_PI * 10e6, waist: 3.2, center: 0.0 };
        let d = Detuning::from_hz(if neg { -khz } else { khz } * 1e3);
        let x = u * c.waist;
        let a = grad_index(d, x, &m, &c);
        let f = grad_index_fd(d, x, &m, &c);
        // Near a sign change of the gradient, relative error is meaningless;
        // measure against the index excursion per waist as well.
        let chi = complex_chi(d, c.rabi_at(x), &m).unwrap();
        let scale = index_minus_one(chi).unwrap().re.abs() / c.waist;
        prop_assert!((a - f).abs() <= 1e-6 * (a.abs() + scale), "analytic {a} vs fd {f}");
        // Odd about the control axis.
        prop_assert!((grad_index(d, -x, &m, &c) + a).abs() <= 1e-12 * a.abs());
    }
}

#[test]
fn inner_dispersion_peaks_lie_inside_the_rabi_frequency() {
    // Scan |Re χ| on a fine grid over |δω| ≤ 2Ω: the two largest local maxima
    // sit symmetrically inside ±Ω. Beyond that window the bare two-level lobes
    // near ±γ reach a comparable height when γ ≫ Ω.
    let m = MediumParams {
        lambda_ab: 7.95e-5,
        density: 3e11,
        gamma: TWO_PI * 300e6,
        gamma_r: TWO_PI * 5.75e6,
        gamma_cb: TWO_PI * 1e3,
        cell_length: 7.5,
    };
    for om in [TWO_PI * 1e6, TWO_PI * 10e6, TWO_PI * 100e6] {
        let n = 200_001;
        let xs: Vec<f64> = (0..n)
            .map(|i| -2.0 * om + 4.0 * om * i as f64 / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| re_chi(Detuning(x), om, &m).unwrap().abs())
            .collect();
        let mut peaks: Vec<(f64, f64)> = (1..n - 1)
            .filter(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])
            .map(|i| (ys[i], xs[i]))
            .collect();
        peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (p1, p2) = (peaks[0].1, peaks[1].1);
        assert!(p1 * p2 < 0.0, "peaks {p1} {p2} not on opposite sides");
        assert!((p1.abs() - p2.abs()).abs() <= 4.0 * om / (n - 1) as f64 + 1e-9);
        assert!(p1.abs() < om);
    }
}

#[test]
fn closed_form_values_at_resonance() {
    let m = MediumParams {
        lambda_ab: 7.95e-5,
        density: 1e13,
        gamma: TWO_PI * 300e6,
        gamma_r: TWO_PI * 5.75e6,
        gamma_cb: TWO_PI * 1e3,
        cell_length: 10.0,
    };
    let eta = 3.0 * 7.95e-5f64.powi(3) * 1e13 / (16.0 * PI * PI);
    let om = TWO_PI * 1e6;
    let chi = complex_chi(Detuning(0.0), om, &m).unwrap();
    let expected = eta * m.gamma_r * m.gamma_cb / (om * om + m.gamma * m.gamma_cb);
    assert_eq!(chi.re, 0.0);
    assert!((chi.im - expected).abs() <= 1e-14 * expected);

    let bare = complex_chi(Detuning(0.0), 0.0, &m).unwrap();
    assert!((bare.im - eta * m.gamma_r / m.gamma).abs() <= 1e-14 * bare.im);
}
