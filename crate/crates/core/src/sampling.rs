//! Seeded random points used by the randomized constructions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator for a user seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on `S^{d-1}`: a normalized standard normal vector.
pub fn uniform_sphere_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `k` i.i.d. uniform sphere points.
pub fn uniform_sphere_points<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..k).map(|_| uniform_sphere_point(d, rng)).collect()
}

/// Sample of the Gaussian measure `exp(-pi |x|^2) dx` (variance `1/(2 pi)` per axis).
pub fn gaussian_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let sd = (2.0 * std::f64::consts::PI).sqrt().recip();
    (0..d)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_points_are_unit() {
        let mut rng = rng_from_seed(7);
        for p in uniform_sphere_points(5, 100, &mut rng) {
            let n: f64 = p.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn same_seed_same_points() {
        let a = uniform_sphere_points(3, 4, &mut rng_from_seed(1));
        let b = uniform_sphere_points(3, 4, &mut rng_from_seed(1));
        assert_eq!(a, b);
    }
}
