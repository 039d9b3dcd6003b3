use num_complex::Complex64;

use super::{run_jobs, SamplersError};
use crate::combinat::ConfigurationIndexer;
use crate::linalg::{gaussian_matrix, noisy_mixture, ComplexMatrix, NoiseParams};
use crate::models::{multiset_factorial, ModelTag, ProbabilityTable, TableMetadata};
use crate::rng::stream;

/// Largest `N` for the noise-realization sampler.
pub const REALIZATION_MAX_N: usize = 5;
/// Independent random streams the realizations are dealt across.
const STREAMS: usize = 16;

/// Monte Carlo average of `|per U~(1..N|l)|^2` over noise matrices `Z`.
#[derive(Debug, Clone)]
pub struct NoiseAverage {
    /// Mean over realizations; collision outputs are discarded and hold 0.
    pub mean: ProbabilityTable,
    /// Standard error of each entry of `mean`.
    pub standard_errors: Vec<f64>,
    /// Fraction of the total output weight that fell on collision outputs.
    pub collision_frequency: f64,
    pub realizations: u64,
}

struct Accumulator {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    collision_mass: f64,
    total_mass: f64,
}

/// Permanents of `a(0..N | ports)` for every sorted port list, in
/// enumeration order, by expanding along one column at a time and sharing
/// prefixes.
struct PermanentSweep<'a> {
    a: &'a ComplexMatrix,
    n: usize,
    m: usize,
    // masks_by_size[k] lists the row subsets with k elements
    masks_by_size: Vec<Vec<usize>>,
    ports: Vec<usize>,
    rank: usize,
}

impl<'a> PermanentSweep<'a> {
    fn new(a: &'a ComplexMatrix) -> Self {
        let n = a.rows();
        let mut masks_by_size = vec![Vec::new(); n + 1];
        for mask in 0..1usize << n {
            masks_by_size[mask.count_ones() as usize].push(mask);
        }
        Self {
            a,
            n,
            m: a.cols(),
            masks_by_size,
            ports: vec![0; n],
            rank: 0,
        }
    }

    fn run(&mut self, f: &mut impl FnMut(usize, &[usize], f64)) {
        let mut start = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        start[0] = Complex64::new(1.0, 0.0);
        self.rank = 0;
        self.descend(0, 0, &start, f);
    }

    fn descend(
        &mut self,
        depth: usize,
        first: usize,
        prev: &[Complex64],
        f: &mut impl FnMut(usize, &[usize], f64),
    ) {
        let n = self.n;
        let full = (1usize << n) - 1;
        if depth + 1 == n {
            for c in first..self.m {
                let mut per = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    per += prev[full ^ (1 << i)] * self.a[(i, c)];
                }
                self.ports[depth] = c;
                f(self.rank, &self.ports, per.norm_sqr());
                self.rank += 1;
            }
            return;
        }
        let mut next = vec![Complex64::new(0.0, 0.0); 1 << n];
        for c in first..self.m {
            next.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
            for &mask in &self.masks_by_size[depth] {
                let v = prev[mask];
                for i in 0..n {
                    if mask & (1 << i) == 0 {
                        next[mask | (1 << i)] += v * self.a[(i, c)];
                    }
                }
            }
            self.ports[depth] = c;
            self.descend(depth + 1, c, &next, f);
        }
    }
}

/// Averages `|per U~(1..N|l)|^2` over `realizations` independent noise
/// matrices, with `U~ = sqrt(1-eps) U + sqrt(eps) Z` on the first `N` rows
/// and `Z` i.i.d. complex Gaussian of variance `1/M`.
///
/// Only collision-free outputs are kept; the weight on collision outputs is
/// reported as `collision_frequency`.
pub fn sample_noise_realizations(
    u: &ComplexMatrix,
    eps: NoiseParams,
    n: usize,
    m: usize,
    realizations: u64,
    seed: u64,
) -> Result<NoiseAverage, SamplersError> {
    if n == 0 || n > REALIZATION_MAX_N {
        return Err(SamplersError::Precondition(format!(
            "noise realizations: N = {n} outside 1..={REALIZATION_MAX_N}"
        )));
    }
    if m < 10 * n * n {
        return Err(SamplersError::Precondition(format!(
            "noise realizations: M = {m} is below 10 N^2 = {}",
            10 * n * n
        )));
    }
    if realizations == 0 {
        return Err(SamplersError::NoDraws);
    }
    if u.rows() < n || u.cols() != m {
        return Err(SamplersError::Precondition(format!(
            "network is {}x{}, need at least {n} rows and {m} columns",
            u.rows(),
            u.cols()
        )));
    }
    let indexer = ConfigurationIndexer::new(n, m)?;
    let count = indexer.count();
    let top = u.top_rows(n)?;
    let streams = STREAMS.min(realizations as usize);

    let parts = run_jobs(streams, |w| {
        let mut rng = stream(seed, "sample_noise_realizations", w as u64);
        let mut acc = Accumulator {
            sum: vec![0.0; count],
            sum_sq: vec![0.0; count],
            collision_mass: 0.0,
            total_mass: 0.0,
        };
        let share = (realizations as usize - w).div_ceil(streams);
        for _ in 0..share {
            let z = gaussian_matrix(n, m, m, &mut rng)?;
            let noisy = noisy_mixture(&top, &z, eps)?;
            PermanentSweep::new(&noisy).run(&mut |rank, ports, v| {
                if ports.windows(2).any(|p| p[0] == p[1]) {
                    let w = v / multiset_factorial(ports);
                    acc.collision_mass += w;
                    acc.total_mass += w;
                } else {
                    acc.sum[rank] += v;
                    acc.sum_sq[rank] += v * v;
                    acc.total_mass += v;
                }
            });
        }
        Ok::<_, SamplersError>(acc)
    })?;

    let mut sum = vec![0.0; count];
    let mut sum_sq = vec![0.0; count];
    let (mut collision_mass, mut total_mass) = (0.0, 0.0);
    for part in &parts {
        for i in 0..count {
            sum[i] += part.sum[i];
            sum_sq[i] += part.sum_sq[i];
        }
        collision_mass += part.collision_mass;
        total_mass += part.total_mass;
    }
    let r = realizations as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / r).collect();
    let standard_errors = if realizations < 2 {
        vec![f64::INFINITY; count]
    } else {
        mean.iter()
            .zip(&sum_sq)
            .map(|(mu, sq)| ((sq / r - mu * mu).max(0.0) / (r - 1.0)).sqrt())
            .collect()
    };
    let table = ProbabilityTable::new(n, m, mean, ModelTag::NoiseMonteCarlo)?.with_metadata(
        TableMetadata {
            epsilon: Some(eps.epsilon()),
            r: None,
            seed: Some(seed),
        },
    );
    Ok(NoiseAverage {
        mean: table,
        standard_errors,
        collision_frequency: collision_mass / total_mass,
        realizations,
    })
}
