//! Single-site Metropolis dynamics for the long-range chain, with the
//! long-range sums cached so a proposal costs O(1) and an accepted flip
//! costs O(|Λ|).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Boundary, CouplingParams, FieldProfile, PairTable, SpinConfiguration};

/// Everything a single reproducible simulation needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub coupling: CouplingParams,
    pub field: FieldProfile,
    pub beta: f64,
    pub window_radius: i64,
    pub boundary: Boundary,
    pub sweeps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub measure_every: u64,
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::Domain(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.window_radius < 0 {
            return Err(Error::Domain(format!(
                "window radius must be >= 0, got {}",
                self.window_radius
            )));
        }
        if self.burn_in >= self.sweeps {
            return Err(Error::Domain(format!(
                "burn_in must be smaller than sweeps, got {} >= {}",
                self.burn_in, self.sweeps
            )));
        }
        if self.measure_every < 1 {
            return Err(Error::Domain("measure_every must be >= 1".into()));
        }
        if (self.sweeps - self.burn_in).div_ceil(self.measure_every) < 2 {
            return Err(Error::Domain(
                "parameters leave fewer than two measurements".into(),
            ));
        }
        Ok(())
    }
}

/// Time averages of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub mean_spin_origin: f64,
    pub mean_magnetization: f64,
    pub prob_origin_minus: f64,
    /// Batch-means standard error of `mean_spin_origin`.
    pub std_error: f64,
    pub samples: u64,
}

/// For each window site, the sum `Σ_{y≠x} J(|x-y|) σ_y` over all of ℤ, the
/// boundary part folded in through the analytic tails. Built in O(|Λ|^2);
/// a flip afterwards updates every entry in O(|Λ|).
pub fn local_field_cache(sigma: &SpinConfiguration, cp: &CouplingParams) -> Result<Vec<f64>> {
    let table = PairTable::new(cp, 2 * sigma.window_radius() + 2)?;
    Ok(cache_with(sigma, &table))
}

fn cache_with(sigma: &SpinConfiguration, table: &PairTable) -> Vec<f64> {
    let n = sigma.window_radius();
    let omega = sigma.boundary().spin() as f64;
    sigma
        .sites()
        .map(|x| {
            let mut acc = 0.0;
            for y in sigma.sites() {
                if y != x {
                    acc += table.j((y - x).abs()) * sigma.spin(y) as f64;
                }
            }
            acc + omega * (table.tail_from(n + 1 - x) + table.tail_from(n + 1 + x))
        })
        .collect()
}

fn update_cache(cache: &mut [f64], table: &PairTable, idx: usize, old_spin: f64) {
    let delta = -2.0 * old_spin;
    for (k, entry) in cache.iter_mut().enumerate() {
        if k != idx {
            let d = (k as i64 - idx as i64).abs();
            *entry += delta * table.j(d);
        }
    }
}

fn batch_std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    debug_assert!(n >= 2);
    let batches = 32.min(n / 2).max(2);
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// Metropolis run: uniform single-site proposals, acceptance
/// `min(1, exp(-beta ΔH))`, measurements after burn-in at the stated
/// cadence. Deterministic given the seed.
pub fn run(params: &SimParams) -> Result<Measurement> {
    params.validate()?;
    let n = params.window_radius;
    let w = (2 * n + 1) as usize;
    let table = PairTable::new(&params.coupling, 2 * n + 2)?;
    // Cold start matching the boundary condition.
    let sigma = SpinConfiguration::uniform(n, params.boundary)?;
    let mut spins: Vec<i8> = sigma.spins().to_vec();
    let mut cache = cache_with(&sigma, &table);
    let field_at: Vec<f64> = sigma.sites().map(|x| params.field.at(x)).collect();
    let origin = n as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut spin_sum: i64 = spins.iter().map(|&s| s as i64).sum();

    let mut origin_series = Vec::new();
    let mut mag_sum = 0.0;
    for sweep in 0..params.sweeps {
        for _ in 0..w {
            let idx = rng.random_range(0..w);
            let sx = spins[idx] as f64;
            let dh = sx * (cache[idx] + field_at[idx]);
            let accept = dh <= 0.0 || rng.random::<f64>() < (-params.beta * dh).exp();
            if accept {
                spins[idx] = -spins[idx];
                spin_sum += 2 * spins[idx] as i64;
                update_cache(&mut cache, &table, idx, sx);
            }
        }
        if sweep >= params.burn_in && (sweep - params.burn_in) % params.measure_every == 0 {
            origin_series.push(spins[origin] as f64);
            mag_sum += spin_sum as f64 / w as f64;
        }
    }

    let samples = origin_series.len() as u64;
    let mean_origin = origin_series.iter().sum::<f64>() / samples as f64;
    let minus_count = origin_series.iter().filter(|&&s| s < 0.0).count() as f64;
    // Laplace-smoothed binomial floor keeps the error bar positive even
    // when the origin spin never moved.
    let p_smooth = (minus_count + 1.0) / (samples as f64 + 2.0);
    let floor = 2.0 * (p_smooth * (1.0 - p_smooth) / samples as f64).sqrt();
    let std_error = batch_std_error(&origin_series).max(floor);

    Ok(Measurement {
        mean_spin_origin: mean_origin,
        mean_magnetization: mag_sum / samples as f64,
        prob_origin_minus: (1.0 - mean_origin) / 2.0,
        std_error,
        samples,
    })
}

/// SplitMix64 finalizer: derives independent child seeds from a master seed.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One grid point of a ± boundary scan.
#[derive(Debug, Clone, Serialize)]
pub struct GapScanRow {
    pub alpha: f64,
    pub gamma: f64,
    pub h_star: f64,
    pub beta: f64,
    pub window_radius: i64,
    pub plus: Measurement,
    pub minus: Measurement,
    /// `mean_spin_origin(+) - mean_spin_origin(-)`.
    pub gap: f64,
    pub seed_plus: u64,
    pub seed_minus: u64,
}

/// Runs paired ± boundary simulations over a grid of `beta` and/or `gamma`
/// values (empty grids fall back to the base value). Rows come back in
/// canonical order regardless of the parallel execution order.
pub fn gap_scan(betas: &[f64], gammas: &[f64], base: &SimParams) -> Result<Vec<GapScanRow>> {
    base.validate()?;
    let betas = if betas.is_empty() { vec![base.beta] } else { betas.to_vec() };
    let gammas = if gammas.is_empty() {
        vec![base.field.gamma]
    } else {
        gammas.to_vec()
    };

    let mut points = Vec::new();
    for (i, &beta) in betas.iter().enumerate() {
        for (j, &gamma) in gammas.iter().enumerate() {
            points.push((i * gammas.len() + j, beta, gamma));
        }
    }

    let mut rows = points
        .into_par_iter()
        .map(|(k, beta, gamma)| -> Result<GapScanRow> {
            let field = FieldProfile::new(base.field.h_star, gamma, base.field.cutoff_l)?;
            let seed_plus = split_seed(base.seed, 2 * k as u64);
            let seed_minus = split_seed(base.seed, 2 * k as u64 + 1);
            let plus = run(&SimParams {
                beta,
                field,
                boundary: Boundary::Plus,
                seed: seed_plus,
                ..*base
            })?;
            let minus = run(&SimParams {
                beta,
                field,
                boundary: Boundary::Minus,
                seed: seed_minus,
                ..*base
            })?;
            Ok(GapScanRow {
                alpha: base.coupling.alpha,
                gamma,
                h_star: base.field.h_star,
                beta,
                window_radius: base.window_radius,
                gap: plus.mean_spin_origin - minus.mean_spin_origin,
                plus,
                minus,
                seed_plus,
                seed_minus,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    rows.sort_by(|a, b| {
        (a.beta, a.gamma)
            .partial_cmp(&(b.beta, b.gamma))
            .expect("grid values are finite")
    });
    Ok(rows)
}
