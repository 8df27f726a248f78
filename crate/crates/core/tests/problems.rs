use std::path::PathBuf;

use nalgebra::{dmatrix, dvector, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unrolljac::problems::*;
use unrolljac::Error;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn ridge_closed_forms() {
    let r = make_ridge(dmatrix![1.0], dvector![2.0], dvector![0.0], None, (0.5, 2.0)).unwrap();
    for &theta in &[0.5, 1.0, 1.7, 2.0] {
        let th = dvector![theta];
        let xs = solve_exact(&r, &th).unwrap()[0];
        let js = exact_jacobian(&r, &th).unwrap()[(0, 0)];
        assert!((xs - 2.0 / (1.0 + theta)).abs() < 1e-15);
        assert!((js + 2.0 / (1.0 + theta).powi(2)).abs() < 1e-15);
    }
    assert_eq!(r.spectrum_interval(), (1.5, 3.0));
}

#[test]
fn cross_derivative_cases() {
    let f = AffineFamily::scalar_toy();
    let c = cross_derivative(&f, &dvector![1.3], &dvector![2.5], &DMatrix::zeros(1, 1)).unwrap();
    assert_eq!(c[(0, 0)], 2.5);
    let r = make_ridge(dmatrix![1.0, 0.0; 0.0, 2.0], dvector![1.0, 1.0], dvector![0.0, 0.0], None, (1.0, 1.0)).unwrap();
    let c = cross_derivative(&r, &dvector![1.0], &dvector![0.0, 0.0], &DMatrix::zeros(2, 1)).unwrap();
    assert_eq!(c.norm(), 0.0);
    let metric = dvector![2.0, 3.0];
    let center = dvector![1.0, -1.0];
    let r = make_ridge(dmatrix![1.0, 0.0; 0.0, 2.0], dvector![1.0, 1.0], center.clone(), Some(metric.clone()), (1.0, 1.0))
        .unwrap();
    let c = cross_derivative(&r, &dvector![1.0], &dvector![0.0, 0.0], &DMatrix::zeros(2, 1)).unwrap();
    assert_eq!(c.column(0).into_owned(), -metric.component_mul(&center));
    assert!(cross_derivative(&r, &dvector![1.0], &dvector![0.0], &DMatrix::zeros(2, 1)).is_err());
}

#[test]
fn random_spd_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let m = DMatrix::from_fn(5, 5, |_, _| rng.gen_range(-1.0..1.0));
        let h = &m * m.transpose() + DMatrix::identity(5, 5) * 0.1;
        let h = (&h + h.transpose()) * 0.5;
        let b = DVector::from_fn(5, |_, _| rng.gen_range(-1.0..1.0));
        let q = Quadratic::new(h.clone(), b.clone(), vec![], DMatrix::zeros(5, 0)).unwrap();
        let xs = q.solve_exact().unwrap();
        assert!((&h * &xs + &b).norm() <= 1e-10 * (b.norm() + 1.0));
    }
}

#[test]
fn solve_rejects_indefinite() {
    let q = Quadratic::new(dmatrix![1.0, 0.0; 0.0, -1.0], dvector![1.0, 1.0], vec![], DMatrix::zeros(2, 0)).unwrap();
    assert!(matches!(q.solve_exact(), Err(Error::NotPositiveDefinite)));
    assert!(matches!(
        Quadratic::new(dmatrix![1.0, 0.5; 0.0, 1.0], dvector![1.0, 1.0], vec![], DMatrix::zeros(2, 0)),
        Err(Error::NotSymmetric(_))
    ));
}

#[test]
fn commutativity_cases() {
    let f = AffineFamily::new(
        DMatrix::from_diagonal(&dvector![1.0, 2.0, 3.0]),
        vec![DMatrix::from_diagonal(&dvector![0.5, 0.1, 2.0])],
        dvector![1.0, 1.0, 1.0],
        DMatrix::zeros(3, 1),
        1.0,
        10.0,
    )
    .unwrap();
    assert_eq!(commutativity_defect(&f, &dvector![0.3]).unwrap(), 0.0);
    let r = make_synthetic(50, 12, 0).unwrap();
    assert!(commutativity_defect(&r, &dvector![r.default_theta()]).unwrap() <= 1e-14);
    let r = make_synthetic_with_metric(50, 12, 0).unwrap();
    assert!(commutativity_defect(&r, &dvector![r.default_theta()]).unwrap() > 0.0);
}

#[test]
fn spectrum_bounds_match_eigensolver() {
    let r = make_synthetic(30, 6, 2).unwrap();
    let th = dvector![r.default_theta()];
    let (lo, hi) = spectrum_bounds(&r, &th).unwrap();
    let h = r.design().transpose() * r.design() + DMatrix::identity(6, 6) * th[0];
    let ev = SymmetricEigen::new(h).eigenvalues;
    assert!((lo - ev.min()).abs() <= 1e-10 * hi);
    assert!((hi - ev.max()).abs() <= 1e-10 * hi);
    let (ell, big_l) = r.spectrum_interval();
    assert!(lo >= ell * (1.0 - 1e-10) && hi <= big_l * (1.0 + 1e-10));
}

#[test]
fn synthetic_matches_table_dimensions() {
    let r = make_synthetic(200, 100, 0).unwrap();
    assert_eq!(r.design().shape(), (200, 100));
    assert_eq!(r.target().len(), 200);
    assert_eq!(r.center(), &DVector::zeros(100));
    let (ell, big_l) = r.spectrum_interval();
    assert!(ell > 0.0 && ell < big_l);
    let (t0, t1) = r.theta_range();
    assert_eq!(t0, t1);
    let sigma_max = r.design().clone().svd(false, false).singular_values.max();
    assert!((r.design_norm() - sigma_max).abs() < 1e-10 * sigma_max);
    assert!((t0 - r.default_theta()).abs() < 1e-15 * t0);
}

#[test]
fn sample_files_parse() {
    let s = read_libsvm(data("sample.libsvm")).unwrap();
    assert_eq!(s.design, dmatrix![0.5, 0.0, -1.2; 0.0, 4.0, 0.0; 1.0, 0.25, 0.5]);
    assert_eq!(s.target, dvector![1.0, 0.0, 1.0]);
    let c = read_csv(data("sample.csv"), None).unwrap();
    assert_eq!(c.design, dmatrix![0.5, 1.0; -0.3, 2.2]);
    assert_eq!(c.target, dvector![1.0, 0.0]);
    let c = read_csv(data("sample.csv"), Some("x1")).unwrap();
    assert_eq!(c.target, dvector![0.5, -0.3]);
    assert_eq!(read_dataset(data("sample.csv")).unwrap().n_features(), 2);
    assert_eq!(read_dataset(data("sample.libsvm")).unwrap().n_features(), 3);
}

#[test]
fn malformed_files_report_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.libsvm");
    std::fs::write(&p, "1 1:0.5\n# comment\n\n0 0:1.0\n").unwrap();
    assert!(matches!(read_libsvm(&p), Err(Error::Parse { line: 4, .. })));
    std::fs::write(&p, "1 1:abc\n").unwrap();
    assert!(matches!(read_libsvm(&p), Err(Error::Parse { line: 1, .. })));
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "a,b\n1,2\n3,x\n").unwrap();
    assert!(matches!(read_csv(&p, None), Err(Error::Parse { line: 3, .. })));
    assert!(matches!(read_libsvm(dir.path().join("missing")), Err(Error::Io { .. })));
}

#[test]
fn standardize_columns() {
    let mut s = read_libsvm(data("breast-cancer-mini.libsvm")).unwrap();
    s.standardize();
    for col in s.design.column_iter() {
        let n = col.len() as f64;
        assert!((col.sum() / n).abs() < 1e-12);
        let var = col.norm_squared() / n;
        assert!((var - 1.0).abs() < 1e-12 || var == 0.0);
    }
}

#[test]
fn breast_cancer_family() {
    let ds = read_libsvm(data("breast-cancer.libsvm")).unwrap();
    assert_eq!((ds.n_samples(), ds.n_features()), (683, 10));
    assert!(ds.target.iter().all(|&y| y == 2.0 || y == 4.0));
    let probe = make_ridge(ds.design, ds.target, DVector::zeros(10), None, (1.0, 1.0)).unwrap();
    let theta = probe.default_theta();
    let r = probe.with_theta_range((theta, theta)).unwrap();
    let (ell, big_l) = r.spectrum_interval();
    assert!(ell > 0.0 && ell < big_l);
    let (lo, _) = spectrum_bounds(&r, &dvector![theta]).unwrap();
    assert!(lo >= theta * r.metric().min() * (1.0 - 1e-10));
    let mini = read_libsvm(data("breast-cancer-mini.libsvm")).unwrap();
    assert_eq!(mini.design, read_libsvm(data("breast-cancer.libsvm")).unwrap().design.rows(0, 20).into_owned());
}
