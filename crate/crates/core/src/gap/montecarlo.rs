//! Fixed-seed Monte-Carlo area estimates, used to check the quadrature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exec::Exec;
use crate::gap::regions::RegionSpec;

/// Samples drawn per independent stream.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub area: f64,
    /// Binomial standard error of `area`.
    pub std_err: f64,
    pub samples: u64,
}

/// Area of the region at `w` by uniform sampling of its bounding box
/// `u_box × [0, w]`. Chunk `i` uses stream `i` of the seeded generator, so
/// the estimate does not depend on the execution mode.
pub fn mc_area(spec: &RegionSpec, w: f64, samples: u64, seed: u64, exec: Exec) -> McEstimate {
    let (u0, u1) = spec.u_box(w);
    let box_area = (u1 - u0).max(0.0) * w;
    if box_area == 0.0 || samples == 0 {
        return McEstimate { area: 0.0, std_err: 0.0, samples };
    }
    let chunks: Vec<u64> = (0..samples.div_ceil(CHUNK)).collect();
    let hits: u64 = exec
        .map(&chunks, |&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n)
                .filter(|_| {
                    let u = u0 + (u1 - u0) * rng.gen::<f64>();
                    let v = w * rng.gen::<f64>();
                    spec.contains(w, u, v)
                })
                .count() as u64
        })
        .into_iter()
        .sum();
    let p = hits as f64 / samples as f64;
    McEstimate { area: box_area * p, std_err: box_area * (p * (1.0 - p) / samples as f64).sqrt(), samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::regions::Region;

    #[test]
    fn deterministic_across_modes() {
        let spec = RegionSpec::new(Region::Omega1, 3.0).unwrap();
        let a = mc_area(&spec, 0.8, 200_000, 11, Exec::Sequential);
        let b = mc_area(&spec, 0.8, 200_000, 11, Exec::Parallel);
        assert_eq!(a, b);
        assert_ne!(a, mc_area(&spec, 0.8, 200_000, 12, Exec::Sequential));
    }

    #[test]
    fn agrees_with_quadrature() {
        let spec = RegionSpec::new(Region::Omega1, 3.0).unwrap();
        let est = mc_area(&spec, 0.8, 400_000, 5, Exec::Parallel);
        let exact = spec.area_quadrature(0.8, Default::default());
        assert!((est.area - exact).abs() <= 4.0 * est.std_err, "{est:?} vs {exact}");
    }
}
