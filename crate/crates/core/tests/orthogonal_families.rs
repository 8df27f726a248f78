//! Orthogonality, norm and moment checks for the Gegenbauer and Sobolev
//! families. Quadrature is validated against Beta-function moments first;
//! everything else leans on it.

use statrs::function::beta::beta;
use unrolljac::polynomials::{
    gauss_gegenbauer, gegenbauer_gamma, gegenbauer_monic_family, gegenbauer_monic_values,
    sobolev_monic_family, sobolev_monic_values, sobolev_xi, GaussRule, Poly, PolyEval,
    SobolevCoefficients,
};

fn moment(alpha: f64, k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        beta(k as f64 / 2.0 + 0.5, alpha + 0.5)
    }
}

fn moment_error(rule: &GaussRule, alpha: f64) -> f64 {
    (0..=rule.exact_degree())
        .map(|k| {
            let q = rule.integrate(|x| x.powi(k as i32));
            let m = moment(alpha, k);
            (q - m).abs() / moment(alpha, k - k % 2)
        })
        .fold(0.0, f64::max)
}

#[test]
fn quadrature_matches_beta_moments() {
    for &alpha in &[0.0, 0.25, 0.5, 1.0, 2.0, 3.7] {
        for n in [2, 5, 12, 20] {
            let rule = gauss_gegenbauer(alpha, n).unwrap();
            let err = moment_error(&rule, alpha);
            assert!(err < 1e-12, "alpha={alpha} n={n} err={err:e}");
        }
    }
}

type GammaVariant = fn(f64, usize) -> f64;

fn appendix_d_variant(alpha: f64, t: usize) -> f64 {
    let t = t as f64;
    t * (t + 2.0 * alpha - 1.0) / (4.0 * (t + alpha) * (t + alpha + 1.0))
}

fn appendix_e_variant(alpha: f64, t: usize) -> f64 {
    let t = t as f64;
    t * (t + 2.0 * alpha + 1.0) / (4.0 * (t + alpha) * (t + alpha - 1.0))
}

#[test]
fn only_the_classical_gamma_reproduces_the_weight() {
    let variants: [(&str, GammaVariant, bool); 3] = [
        ("classical", gegenbauer_gamma, true),
        ("variant-d", appendix_d_variant, false),
        ("variant-e", appendix_e_variant, false),
    ];
    for &alpha in &[0.5, 1.0, 2.0] {
        let mass = beta(0.5, alpha + 0.5);
        for (name, gamma, expect_ok) in variants {
            let gammas: Vec<f64> = (1..12).map(|t| gamma(alpha, t)).collect();
            let rule = GaussRule::golub_welsch(&gammas, mass).unwrap();
            let err = moment_error(&rule, alpha);
            assert_eq!(err < 1e-10, expect_ok, "{name} alpha={alpha} err={err:e}");
        }
    }
}

fn raw_inner(rule: &GaussRule, p: &Poly, q: &Poly, eta_tilde: f64) -> f64 {
    rule.integrate(|x| {
        let (pv, pd) = p.value_and_slope(x);
        let (qv, qd) = q.value_and_slope(x);
        pv * qv + eta_tilde * pd * qd
    })
}

#[test]
fn gegenbauer_orthogonality_and_norm_ratio() {
    for &alpha in &[0.5, 1.0, 2.0] {
        let rule = gauss_gegenbauer(alpha, 20).unwrap();
        let g = gegenbauer_monic_family(alpha, 15);
        let norms: Vec<f64> = g.iter().map(|p| raw_inner(&rule, p, p, 0.0)).collect();
        for i in 0..=15 {
            for j in 0..i {
                let ip = raw_inner(&rule, &g[i], &g[j], 0.0);
                let rel = ip.abs() / (norms[i] * norms[j]).sqrt();
                assert!(rel <= 1e-10, "alpha={alpha} ({i},{j}) rel={rel:e}");
            }
        }
        for t in 1..=15 {
            let k = gegenbauer_gamma(alpha, t);
            let rel = (norms[t] - k * norms[t - 1]).abs() / norms[t];
            assert!(rel <= 1e-10, "alpha={alpha} t={t} rel={rel:e}");
        }
    }
}

#[test]
fn sobolev_orthogonality() {
    for &alpha in &[0.5, 1.0, 2.0] {
        for &eta_tilde in &[0.1, 1.0, 10.0] {
            let rule = gauss_gegenbauer(alpha, 20).unwrap();
            let c = SobolevCoefficients::new(alpha, eta_tilde, 15).unwrap();
            let s = sobolev_monic_family(&c, 15);
            let norms: Vec<f64> = s.iter().map(|p| raw_inner(&rule, p, p, eta_tilde)).collect();
            for i in 0..=15 {
                for j in 0..i {
                    let ip = raw_inner(&rule, &s[i], &s[j], eta_tilde);
                    let rel = ip.abs() / (norms[i] * norms[j]).sqrt();
                    assert!(rel <= 1e-10, "alpha={alpha} eta={eta_tilde} ({i},{j}) rel={rel:e}");
                }
            }
        }
    }
}

#[test]
fn sobolev_at_zero_eta_is_gegenbauer() {
    // Monic orthogonal polynomials are unique, so with no derivative term the
    // Sobolev family coincides with the Gegenbauer one.
    for &alpha in &[0.0, 0.5, 1.0, 2.0] {
        let c = SobolevCoefficients::new(alpha, 0.0, 12).unwrap();
        let s = sobolev_monic_family(&c, 12);
        let g = gegenbauer_monic_family(alpha, 12);
        for (t, (a, b)) in s.iter().zip(&g).enumerate() {
            let diff = (a - b).chebyshev_coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
            assert!(diff < 1e-13, "alpha={alpha} t={t} diff={diff:e}");
        }
        for t in 1..=12 {
            assert!((c.d[t] - sobolev_xi(alpha, t)).abs() < 1e-14);
        }
    }
}

#[test]
fn d_property_from_quadrature() {
    for &alpha in &[0.0, 0.5, 1.0, 2.0] {
        for &eta_tilde in &[0.0, 0.1, 1.0, 10.0, 100.0] {
            let rule = gauss_gegenbauer(alpha, 20).unwrap();
            let c = SobolevCoefficients::new(alpha, eta_tilde, 15).unwrap();
            let mut g2 = [0.0; 16];
            let mut s2 = [0.0; 16];
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let g = gegenbauer_monic_values(alpha, x, 15);
                let s = sobolev_monic_values(&c, x, 15);
                for t in 0..=15 {
                    g2[t] += w * g[t].0 * g[t].0;
                    s2[t] += w * (s[t].0 * s[t].0 + eta_tilde * s[t].1 * s[t].1);
                }
            }
            let first = if alpha == 0.0 { 1 } else { 0 };
            for t in first..=15 {
                let predicted = sobolev_xi(alpha, t) * g2[t] / s2[t];
                let rel = (c.d[t] - predicted).abs() / predicted;
                assert!(rel <= 1e-8, "alpha={alpha} eta={eta_tilde} t={t} rel={rel:e}");
            }
        }
    }
}
