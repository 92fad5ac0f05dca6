//! Probe build.

pub fn probe() -> f64 {
    1.0
}

#[cfg(test)]
mod tests {
    use nalgebra::{Complex, DMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hermitian_eigen_probe() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let eig = m.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chacha_stream_probe() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        a.set_stream(3);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        b.set_stream(3);
        assert_eq!(rand::Rng::gen::<u64>(&mut a), rand::Rng::gen::<u64>(&mut b));
    }

    #[test]
    fn rustfft_probe() {
        use rustfft::{num_complex::Complex64, FftPlanner};
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(8);
        let mut buf: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 0.0)).collect();
        fft.process(&mut buf);
        assert!((buf[0].re - 28.0).abs() < 1e-12);
    }
}
