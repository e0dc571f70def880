use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Uniform point on the unit sphere in `R^n` (normalised Gaussian).
pub fn sample_unit_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be positive");
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut *rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `∫_a^b sin^k θ dθ` by composite Simpson with `steps` (even) panels.
pub fn sin_power_integral(k: i32, a: f64, b: f64, steps: usize) -> f64 {
    let steps = steps + steps % 2;
    let h = (b - a) / steps as f64;
    let f = |t: f64| t.sin().powi(k);
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Fraction of the unit sphere in `R^n` within angle `phi` of a fixed direction.
pub fn cap_fraction(n: usize, phi: f64) -> f64 {
    let k = n as i32 - 2;
    let total = sin_power_integral(k, 0.0, std::f64::consts::PI, 20_000);
    sin_power_integral(k, 0.0, phi.clamp(0.0, std::f64::consts::PI), 20_000) / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn line_sphere_is_two_points() {
        let mut rng = stream_rng(1, 0);
        let plus = (0..10_000)
            .filter(|_| sample_unit_sphere(1, &mut rng)[0] > 0.0)
            .count();
        assert!((plus as f64 - 5000.0).abs() < 4.0 * 50.0);
    }

    #[test]
    fn points_have_unit_norm() {
        let mut rng = stream_rng(2, 0);
        for n in 1..8 {
            let v = sample_unit_sphere(n, &mut rng);
            assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_fraction_in_three_dimensions() {
        // area of a cap of half-angle phi on S^2 is (1 - cos phi)/2 of the sphere
        let phi = 1.1;
        assert!((cap_fraction(3, phi) - (1.0 - phi.cos()) / 2.0).abs() < 1e-9);
        assert!((cap_fraction(5, std::f64::consts::FRAC_PI_2) - 0.5).abs() < 1e-9);
    }
}
