use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn deps_smoke() {
    // Complex SVD: known singular values, singular matrix -> sigma_min ~ 0.
    let a = DMatrix::<Complex64>::from_row_slice(3, 3, &[
        Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0),
    ]);
    let svd = a.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    assert!(sv[2].abs() < 1e-14, "sigma_min of singular matrix: {:e}", sv[2]);

    // Hermitian eigen.
    let h = DMatrix::<Complex64>::from_row_slice(2, 2, &[
        Complex64::new(2.0, 0.0), Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0),
    ]);
    let se = nalgebra::SymmetricEigen::new(h);
    let mut ev: Vec<f64> = se.eigenvalues.iter().cloned().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12, "eig = {:?}", ev);

    // rustfft roundtrip.
    let mut planner = rustfft::FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(8);
    let ifft = planner.plan_fft_inverse(8);
    let mut buf: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
    let orig = buf.clone();
    fft.process(&mut buf);
    ifft.process(&mut buf);
    let err: f64 = buf.iter().zip(&orig).map(|(x, y)| (x / 8.0 - y).norm()).sum();
    assert!(err < 1e-12, "fft roundtrip err = {:e}", err);

    // Frobenius = l2 of singular values on a 64x64 complex matrix.
    let n = 64;
    let m = DMatrix::<Complex64>::from_fn(n, n, |j, k| {
        Complex64::new(((j * 37 + k * 11) % 17) as f64 - 8.0, ((j * 5 + k * 13) % 19) as f64 - 9.0) / 10.0
    });
    let fro: f64 = m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let sv2 = m.clone().svd(false, false);
    let fro_sv: f64 = sv2.singular_values.iter().map(|s| s * s).sum::<f64>().sqrt();
    assert!((fro - fro_sv).abs() / fro < 1e-12, "fro rel diff = {:e}", (fro - fro_sv).abs() / fro);

    // SVD with U/V: reconstruction accuracy.
    let svd3 = m.clone().svd(true, true);
    let rec = svd3.recompose().unwrap();
    let diff: f64 = (&m - &rec).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    assert!(diff / fro < 1e-12, "svd recompose rel err = {:e}", diff / fro);
}
