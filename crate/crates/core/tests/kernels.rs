use num_complex::Complex64;
use rectkernel::amplitudes::scan_denominator_zeros;
use rectkernel::engines::{free_propagator_closed, Engine};
use rectkernel::oracle::{GridSpec, GridSpectrum};
use rectkernel::{PotentialSpec, QuadratureOptions};

fn engine(u: f64, delta: f64) -> Engine {
    Engine::new(PotentialSpec::new(u, delta).unwrap(), QuadratureOptions::default()).unwrap()
}

#[test]
fn complex_time_barrier_kernel_matches_grid_spectrum() {
    let pot = PotentialSpec::new(10.0, 0.0).unwrap();
    let tau = Complex64::new(2.0, -0.5);
    let (x, xp) = (2.0, -3.0);
    let value = engine(10.0, 0.0).propagator_at(x, xp, tau).unwrap().value;

    let fine = GridSpec::default();
    let coarse = fine.coarsened();
    let k_fine = GridSpectrum::for_complex_time(&fine, &pot, 0.5)
        .unwrap()
        .complex_time_continuum(x, xp, tau)
        .unwrap();
    let k_coarse = GridSpectrum::for_complex_time(&coarse, &pot, 0.5)
        .unwrap()
        .complex_time_continuum(x, xp, tau)
        .unwrap();
    let oracle = (4.0 * k_fine - k_coarse) / 3.0;
    let diff = (value - oracle).norm();
    assert!(diff < 1e-3 * oracle.norm().max(1e-3), "engine {value}, grid {oracle}, diff {diff:e}");
}

#[test]
fn free_left_to_right_real_time_is_free_propagator() {
    let e = engine(0.0, 0.0);
    for (x, xp, t) in [(2.0, -0.5, 1.0), (1.5, -1.0, 2.5)] {
        let k = e.propagator(x, xp, t).unwrap();
        let exact = free_propagator_closed(x, xp, Complex64::new(t, 0.0));
        let diff = (k.value - exact).norm();
        assert!(diff < 1e-4 * exact.norm(), "t={t}: {} vs {exact}, diff {diff:e}", k.value);
    }
}

#[test]
fn barrier_density_falls_and_flattens_with_height() {
    let rho = |u: f64| engine(u, 0.0).density_matrix(-2.0, -2.0, 10.0).unwrap().real();
    assert!(rho(50.0) < rho(5.0));
    let slope = |u: f64| ((rho(u + 0.5) - rho(u - 0.5)) / 1.0).abs();
    assert!(slope(250.0) < slope(5.0));
}

#[test]
fn denominator_zeros_are_grid_bound_states() {
    let pot = PotentialSpec::new(-30.0, 5.0).unwrap();
    let zeros = scan_denominator_zeros(&pot, 4000);
    let fine = GridSpec::default();
    let coarse = fine.coarsened();
    let bf = GridSpectrum::for_thermal(&fine, &pot, 10.0).unwrap().bound_states();
    let bc = GridSpectrum::for_thermal(&coarse, &pot, 10.0).unwrap().bound_states();
    assert_eq!(zeros.len(), bf.len());
    assert_eq!(bf.len(), bc.len());
    for ((z, f), c) in zeros.iter().zip(&bf).zip(&bc) {
        let grid = (4.0 * f - c) / 3.0;
        assert!((z.energy - grid).abs() < 1e-3, "zero {} vs grid {grid}", z.energy);
        assert!(z.residual < 1e-6);
    }
}
