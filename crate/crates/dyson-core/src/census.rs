//! Exhaustive enumeration of small contours through the origin, empirical
//! verification of the entropy and energy bounds, and the Peierls series
//! with its inverse-temperature threshold.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    alpha_star, chi, field_bound_constant, field_contribution, k_c, zeta, zeta_alpha, KcVariant,
};
use crate::contour::{
    build_triangles, conditional_energy, contour_norm, group_contours, triangles_to_spins,
    Contour, Triangle, TriangleFamily,
};
use crate::error::{Error, Result};
use crate::lattice::{kahan_add, Boundary, CouplingParams, FieldProfile, SpinConfiguration};
use crate::mc::split_seed;

/// Search limit used when certifying `zeta_alpha` for series coefficients.
pub const ZETA_CERT_LIMIT: i64 = 10_000;

/// Enclosure bound for the enumeration window: within one contour every
/// merge crossed a gap of at most `c * m^3`, and there are at most `m`
/// triangles of total width `m`.
pub fn required_horizon(m: i64, c: f64) -> i64 {
    (c * (m as f64).powi(4)).ceil() as i64 + 2 * m
}

fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(total: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=(total - parts as i64 + 1) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total >= parts as i64 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// All distinct contours of mass `m` whose base contains the origin, under
/// grouping constant `c`.
///
/// Candidates are laid out as disjoint minus runs: no compatible family of
/// total mass <= 4 can be nested, because an inner triangle needs a unit of
/// slack on both sides of its host (mass 1 inside mass 3 is the smallest
/// geometric fit and it fails the spin round-trip). Gaps between adjacent
/// runs are bounded by `c * min(prefix mass, suffix mass)^3`, the largest
/// distance any merge could ever cross at that split. Each surviving layout
/// is validated by the spin round-trip and by actually grouping it.
pub fn enumerate_contours(m: i64, c: f64, horizon: i64) -> Result<Vec<Contour>> {
    if !(1..=4).contains(&m) {
        return Err(Error::Refused(format!(
            "contour enumeration is guarded to masses 1..=4, got {m}"
        )));
    }
    if !(c > 1.0) {
        return Err(Error::Domain(format!("grouping constant must be > 1, got {c}")));
    }
    let need = required_horizon(m, c);
    if horizon < need {
        return Err(Error::Refused(format!(
            "horizon {horizon} is below the enclosure bound c*m^4 + 2m = {need}"
        )));
    }

    let mut seen: BTreeSet<Vec<(i64, i64)>> = BTreeSet::new();
    let mut out: Vec<Contour> = Vec::new();

    for parts in 1..=m as usize {
        for comp in compositions(m, parts) {
            // Bound for the gap after run i.
            let gap_bounds: Vec<i64> = (0..parts.saturating_sub(1))
                .map(|i| {
                    let prefix: i64 = comp[..=i].iter().sum();
                    let side = prefix.min(m - prefix);
                    (c * (side as f64).powi(3)).floor() as i64
                })
                .collect();
            let mut gaps = vec![1i64; parts.saturating_sub(1)];
            'layouts: loop {
                // Relative run starts for the current gap tuple.
                let mut starts = vec![0i64; parts];
                for i in 1..parts {
                    starts[i] = starts[i - 1] + comp[i - 1] + gaps[i - 1];
                }
                let covered: Vec<i64> = (0..parts)
                    .flat_map(|i| starts[i]..starts[i] + comp[i])
                    .collect();
                for &anchor in &covered {
                    let triangles: Vec<Triangle> = (0..parts)
                        .map(|i| Triangle::from_base(starts[i] - anchor, comp[i]))
                        .collect::<Result<_>>()?;
                    if let Some(contour) = validate_candidate(&triangles, c, horizon)? {
                        let key: Vec<(i64, i64)> = contour
                            .triangles()
                            .iter()
                            .map(|t| (t.left().doubled(), t.right().doubled()))
                            .collect();
                        if seen.insert(key) {
                            out.push(contour);
                        }
                    }
                }
                // Odometer over the gap tuple.
                let mut pos = 0;
                loop {
                    if pos == gaps.len() {
                        break 'layouts;
                    }
                    gaps[pos] += 1;
                    if gaps[pos] <= gap_bounds[pos] {
                        break;
                    }
                    gaps[pos] = 1;
                    pos += 1;
                }
            }
        }
    }

    out.sort_by_key(|g| {
        g.triangles()
            .iter()
            .map(|t| (t.left().doubled(), t.right().doubled()))
            .collect::<Vec<_>>()
    });
    Ok(out)
}

fn validate_candidate(triangles: &[Triangle], c: f64, horizon: i64) -> Result<Option<Contour>> {
    let radius = triangles
        .iter()
        .map(|t| t.base_min().abs().max(t.base_max().abs()))
        .max()
        .expect("at least one triangle")
        + 1;
    debug_assert!(radius <= horizon + 1);
    // Incompatible gap layouts (violating d >= min mass) cannot round-trip.
    let Ok(family) = TriangleFamily::new(triangles.to_vec()) else {
        return Ok(None);
    };
    let sigma = triangles_to_spins(&family, radius, Boundary::Plus)?;
    if build_triangles(&sigma) != family {
        return Ok(None);
    }
    let grouped = group_contours(&family, c)?;
    if grouped.contours.len() != 1 {
        return Ok(None);
    }
    let contour = grouped.contours.into_iter().next().unwrap();
    if !contour.base_contains(0) {
        return Ok(None);
    }
    Ok(Some(contour))
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyCheck {
    pub m: i64,
    pub c: f64,
    pub b: f64,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub contour_count: usize,
}

/// Compares the enumerated weight `sum_{|Γ|=m, 0 in Γ} e^(-b ||Γ||_alpha)`
/// against the entropy bound `2m e^(-b chi_alpha(m))`.
pub fn entropy_check(m: i64, c: f64, b: f64, alpha: f64) -> Result<EntropyCheck> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("entropy parameter b must be > 0, got {b}")));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let contours = enumerate_contours(m, c, required_horizon(m, c))?;
    let mut lhs = 0.0;
    let mut comp = 0.0;
    for g in &contours {
        kahan_add(&mut lhs, &mut comp, (-b * contour_norm(g, alpha)).exp());
    }
    let rhs = 2.0 * m as f64 * (-b * chi(m as f64, alpha)).exp();
    Ok(EntropyCheck {
        m,
        c,
        b,
        alpha,
        lhs,
        rhs,
        pass: lhs <= rhs,
        contour_count: contours.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiAdditivityReport {
    pub samples: usize,
    pub seed: u64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub c: f64,
    pub zeta_alpha_prime: f64,
    pub contours_checked: usize,
    pub violations: usize,
    /// Smallest observed `conditional - (zeta/2) ||Γ||`, if any contour
    /// was checked.
    pub worst_margin: Option<f64>,
}

/// Draws seeded random configurations, decomposes them into contours, and
/// checks `H(Γ|rest) >= (zeta_{alpha'}/2) ||Γ||_{alpha'}` for every contour.
pub fn quasi_additivity_check(
    samples: usize,
    c: f64,
    alpha: f64,
    alpha_prime: f64,
    seed: u64,
) -> Result<QuasiAdditivityReport> {
    if alpha_prime > alpha {
        return Err(Error::Domain(format!(
            "alpha_prime must not exceed alpha, got {alpha_prime} > {alpha}"
        )));
    }
    let report = zeta_alpha(alpha_prime, ZETA_CERT_LIMIT)?;
    let half_zeta = report.zeta_alpha / 2.0;
    let cp = CouplingParams::pure(alpha)?;

    let per_sample: Vec<(usize, usize, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(usize, usize, f64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, i as u64));
            let n = rng.random_range(16..=128);
            let spins: Vec<i8> = (0..2 * n + 1)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            let sigma = SpinConfiguration::new(n, spins, Boundary::Plus)?;
            let family = build_triangles(&sigma);
            if family.is_empty() {
                return Ok((0, 0, f64::INFINITY));
            }
            let cfg = group_contours(&family, c)?;
            let mut violations = 0;
            let mut worst = f64::INFINITY;
            for gamma in &cfg.contours {
                let cond = conditional_energy(gamma, &cfg, &cp)?;
                let margin = cond - half_zeta * contour_norm(gamma, alpha_prime);
                if margin < 0.0 {
                    violations += 1;
                }
                worst = worst.min(margin);
            }
            Ok((cfg.contours.len(), violations, worst))
        })
        .collect::<Result<Vec<_>>>()?;

    let contours_checked: usize = per_sample.iter().map(|r| r.0).sum();
    let violations: usize = per_sample.iter().map(|r| r.1).sum();
    let worst = per_sample
        .iter()
        .map(|r| r.2)
        .fold(f64::INFINITY, f64::min);
    Ok(QuasiAdditivityReport {
        samples,
        seed,
        alpha,
        alpha_prime,
        c,
        zeta_alpha_prime: report.zeta_alpha,
        contours_checked,
        violations,
        worst_margin: if contours_checked > 0 { Some(worst) } else { None },
    })
}

fn ln_factorial(k: i64) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// ln of a certified bound on the tail `sum_{m' > m} m' exp(-a m'^p)`,
/// valid once the summand is decreasing (`p u > 1`, `u = a m^p >= 1`):
/// the tail is at most the comparison integral
/// `(1/p) a^(-2/p) Gamma(2/p, u)`, and with `K = ceil(2/p - 1)` the
/// incomplete gamma is at most `K! e^{-u} sum_{j<=K} u^j/j!`, whose inner
/// sum is below `min(e^u, (K+1) * max term)`.
fn tail_ln_bound(a: f64, p: f64, k: i64, ln_fact_k: f64, u: f64) -> f64 {
    let j_star = k.min(u.floor() as i64).max(0);
    let ln_max = j_star as f64 * u.ln() - ln_factorial(j_star);
    let ln_inner = u.min(((k + 1) as f64).ln() + ln_max);
    -p.ln() - (2.0 / p) * a.ln() + ln_fact_k + ln_inner - u
}

/// `2 sum_{m>=1} m exp(-a m^p)` with a certified truncation: the sum stops
/// once the tail bound drops below 1e-15. For small coefficients or small
/// exponents the required number of terms is astronomically large and the
/// evaluation reports `Unconverged` instead of truncating silently.
fn series_power(a: f64, p: f64, max_terms: u64) -> Result<f64> {
    debug_assert!(a > 0.0 && p > 0.0 && p < 1.0);
    let k = ((2.0 / p - 1.0).ceil() as i64).max(0);
    let ln_fact_k = ln_factorial(k);
    let ln_eps = (1e-15f64).ln();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut m: u64 = 1;
    loop {
        let mf = m as f64;
        kahan_add(&mut sum, &mut comp, mf * (-a * mf.powf(p)).exp());
        let u = a * mf.powf(p);
        if p * u > 1.0 && u >= 1.0 && tail_ln_bound(a, p, k, ln_fact_k, u) < ln_eps {
            break;
        }
        m += 1;
        if m > max_terms {
            return Err(Error::Unconverged(format!(
                "Peierls series not truncatable within {max_terms} terms \
                 (coefficient {a:.3e}, norm exponent {p})"
            )));
        }
    }
    Ok(2.0 * sum)
}

/// Certified comparison of the series against 1/2 without full truncation:
/// returns false as soon as the partial sum alone crosses 1/2, and true as
/// soon as partial sum plus tail bound stays below it. This works in
/// regimes where truncating the value to 1e-15 would take astronomically
/// many terms.
fn series_below_half(a: f64, p: f64, max_terms: u64) -> Result<bool> {
    debug_assert!(a > 0.0 && p > 0.0 && p < 1.0);
    let k = ((2.0 / p - 1.0).ceil() as i64).max(0);
    let ln_fact_k = ln_factorial(k);
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut m: u64 = 1;
    loop {
        let mf = m as f64;
        kahan_add(&mut sum, &mut comp, mf * (-a * mf.powf(p)).exp());
        let margin = 0.5 - 2.0 * sum;
        if margin < 0.0 {
            return Ok(false);
        }
        let u = a * mf.powf(p);
        if p * u > 1.0
            && u >= 1.0
            && margin > 0.0
            && tail_ln_bound(a, p, k, ln_fact_k, u) < (margin / 2.0).ln()
        {
            return Ok(true);
        }
        m += 1;
        if m > max_terms {
            return Err(Error::Unconverged(format!(
                "could not certify the Peierls series against 1/2 within {max_terms} terms \
                 (coefficient {a:.3e}, norm exponent {p})"
            )));
        }
    }
}

/// The alpha' = 0 series in closed form:
/// `2 sum m e^(-a(log m + 4)) = 2 e^(-4a) zeta(a-1)`, defined for `a > 2`.
fn series_log(a: f64) -> Result<f64> {
    if a <= 2.0 + 1e-9 {
        return Err(Error::Unconverged(format!(
            "log-norm Peierls series diverges at coefficient a = {a:.4} <= 2"
        )));
    }
    Ok(2.0 * (-4.0 * a).exp() * zeta(a - 1.0)?)
}

/// `2 sum_{m>=1} m exp(-beta K_c(alpha) zeta_{alpha'} m^{alpha'})`.
pub fn peierls_series(
    beta: f64,
    alpha: f64,
    alpha_prime: f64,
    c: f64,
    kc_variant: KcVariant,
    max_terms: u64,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(
            "the Peierls series is undefined (divergent) at beta = 0".into(),
        ));
    }
    let a_star = alpha_star();
    if !(alpha_prime > 0.0 && alpha_prime < a_star) {
        return Err(Error::Domain(format!(
            "alpha_prime must lie in (0, alpha_star ~= {a_star:.4}), got {alpha_prime}"
        )));
    }
    if alpha_prime > alpha {
        return Err(Error::Domain(format!(
            "alpha_prime must not exceed alpha, got {alpha_prime} > {alpha}"
        )));
    }
    let kc = k_c(alpha, c, kc_variant)?;
    if kc.value <= 0.0 {
        return Err(Error::Domain(format!(
            "K_c(alpha) = {:.4} is not positive under this variant; the series diverges",
            kc.value
        )));
    }
    let zeta_ap = zeta_alpha(alpha_prime, ZETA_CERT_LIMIT)?.zeta_alpha;
    series_power(beta * kc.value * zeta_ap, alpha_prime, max_terms)
}

const SERIES_MAX_TERMS: u64 = 100_000_000;

/// Smallest beta bringing a monotone-decreasing series below 1/2, bisected
/// to a relative width that guarantees `series(0.9 beta_c) >= 1/2`.
fn beta_threshold<F>(mut below_half: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    let mut lo;
    let mut hi;
    if below_half(1.0)? {
        hi = 1.0;
        lo = 0.0;
        let mut cand = 0.5;
        while cand > 1e-12 {
            if below_half(cand)? {
                hi = cand;
                cand *= 0.5;
            } else {
                lo = cand;
                break;
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while !below_half(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Unconverged(
                    "no beta below 1e12 brings the Peierls series under 1/2".into(),
                ));
            }
        }
    }
    for _ in 0..200 {
        if hi - lo <= 5e-4 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if below_half(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn power_threshold(rate: f64, p: f64) -> Result<f64> {
    beta_threshold(|beta| series_below_half(beta * rate, p, SERIES_MAX_TERMS))
}

fn log_threshold(rate: f64) -> Result<f64> {
    beta_threshold(|beta| match series_log(beta * rate) {
        Ok(v) => Ok(v < 0.5),
        Err(Error::Unconverged(_)) => Ok(false),
        Err(e) => Err(e),
    })
}

/// Candidate norm exponents for the grid search over alpha'. Exponents
/// below ~0.15 are excluded: their series decay so slowly that certifying
/// a value against 1/2 takes an astronomical number of terms, and the
/// thresholds they produce are not materially tighter.
fn alpha_prime_candidates(alpha: f64, lower: f64) -> Vec<f64> {
    let a_star = alpha_star();
    let hi = alpha.min(a_star - 1e-9);
    let mut cands: Vec<f64> = [0.15, 0.20, 0.25]
        .into_iter()
        .filter(|&a| a > lower && a <= hi)
        .collect();
    if alpha > lower && alpha < a_star - 1e-12 && !cands.contains(&alpha) {
        cands.push(alpha);
    }
    if cands.is_empty() && lower < hi {
        cands.push(0.5 * (lower + hi));
    }
    cands
}

/// Deterministic sample contours for the empirical field constant at one
/// cutoff: single triangles of fixed masses starting at the cutoff,
/// straddling it, containing the origin, and spanning both sides
/// symmetrically, plus a two-triangle contour at the boundary.
fn field_sample_contours(cutoff: i64) -> Vec<Contour> {
    let single = |start: i64, mass: i64| {
        Contour::new(vec![Triangle::from_base(start, mass).expect("mass >= 1")])
            .expect("non-empty")
    };
    let mut out = Vec::new();
    for mass in [1i64, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64] {
        out.push(single(cutoff, mass));
        out.push(single(cutoff - mass / 2, mass));
        out.push(single(0, mass));
        out.push(single(1 - mass, mass));
    }
    for extra in [0i64, 1, 3, 7, 15, 31] {
        let half = cutoff + extra;
        out.push(single(-half, 2 * half + 1));
    }
    out.push(
        Contour::new(vec![
            Triangle::from_base(cutoff, 1).expect("mass >= 1"),
            Triangle::from_base(cutoff + 4, 8).expect("mass >= 1"),
        ])
        .expect("non-empty"),
    );
    out
}

const FIELD_SAMPLE_DESC: &str = "single triangles of mass 1..=64 starting at the cutoff, \
straddling it, and containing the origin, symmetric triangles spanning both sides, and a \
two-triangle contour at the boundary";

/// Empirical coefficient `E(L)` with `field_contribution(Γ) <= E(L) ||Γ||`
/// over the sample set, where the norm exponent is `alpha_prime`. For
/// `gamma < 1` this goes through the structured `C |h*|/(1-gamma) L^{-p}`
/// bound (valid against the alpha' norm because `1 - gamma <= alpha'`);
/// for `gamma >= 1` the ratio is measured directly.
fn empirical_field_coef(fp: &FieldProfile, alpha: f64, alpha_prime: f64) -> Result<f64> {
    let samples = field_sample_contours(fp.cutoff_l);
    if fp.gamma < 1.0 {
        debug_assert!(1.0 - fp.gamma <= alpha_prime + 1e-12);
        let c = field_bound_constant(&samples, fp, alpha)?;
        let p = fp.gamma + alpha - 1.0;
        Ok(c * fp.h_star.abs() / (1.0 - fp.gamma) * (fp.cutoff_l as f64).powf(-p))
    } else {
        let mut e = 0.0f64;
        for sample in &samples {
            let norm = contour_norm(sample, alpha_prime);
            if norm > 0.0 {
                e = e.max(field_contribution(sample, fp) / norm);
            }
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaCBound {
    pub alpha: f64,
    pub gamma: f64,
    pub h_star: f64,
    pub c: f64,
    pub alpha_prime: f64,
    pub kc: f64,
    pub zeta: f64,
    /// Per-beta decay rate multiplying `chi_{alpha'}(m)` in the series,
    /// after subtracting the empirical field deduction.
    pub coefficient: f64,
    pub beta_c: f64,
    /// Minimal field cutoff making the coefficient positive (0 when no
    /// field enters).
    pub l_required: i64,
    /// Critical case only: the largest |h*| keeping the coefficient
    /// positive.
    pub h_threshold: Option<f64>,
    /// Description of the empirical sample set behind the field constant.
    pub sample_set: Option<String>,
}

const L_GRID: [i64; 14] = [
    1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 4096, 65_536, 1_048_576,
];

/// Peierls-argument bound on the inverse critical temperature: the smallest
/// beta at which the contour series certifiably drops below 1/2. With a
/// decaying field, first finds the smallest cutoff `L` that keeps the
/// effective coefficient positive; on the critical line `gamma = 1 - alpha`
/// it reports the largest admissible `|h*|` instead of requiring one.
pub fn beta_c_bound(
    alpha: f64,
    gamma: f64,
    h_star: f64,
    c: f64,
    kc_variant: KcVariant,
) -> Result<BetaCBound> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let kc = k_c(alpha, c, kc_variant)?;
    if kc.value <= 0.0 {
        return Err(Error::Domain(format!(
            "K_c(alpha) = {:.4} is not positive under this variant; no Peierls bound follows",
            kc.value
        )));
    }
    let a_star = alpha_star();

    if h_star == 0.0 {
        // Zero-field case: valid for every alpha in [0, 1).
        let (alpha_prime, zeta_val, beta_c) = if alpha == 0.0 {
            let z = zeta_alpha(0.0, ZETA_CERT_LIMIT)?.zeta_alpha;
            (0.0, z, log_threshold(kc.value * z)?)
        } else {
            let mut best: Option<(f64, f64, f64)> = None;
            for ap in alpha_prime_candidates(alpha, 0.0) {
                let z = zeta_alpha(ap, ZETA_CERT_LIMIT)?.zeta_alpha;
                let bc = power_threshold(kc.value * z, ap)?;
                if best.as_ref().is_none_or(|(_, _, b)| bc < *b) {
                    best = Some((ap, z, bc));
                }
            }
            best.ok_or_else(|| {
                Error::Domain("no admissible alpha_prime in (0, alpha_star)".into())
            })?
        };
        return Ok(BetaCBound {
            alpha,
            gamma,
            h_star,
            c,
            alpha_prime,
            kc: kc.value,
            zeta: zeta_val,
            coefficient: kc.value * zeta_val,
            beta_c,
            l_required: 0,
            h_threshold: None,
            sample_set: None,
        });
    }

    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "field decay exponent gamma must be > 0, got {gamma}"
        )));
    }
    let critical = (gamma - (1.0 - alpha)).abs() <= 1e-12 && alpha < a_star;
    if !critical {
        if gamma <= 1.0 - alpha {
            return Err(Error::Domain(format!(
                "gamma <= 1 - alpha ({gamma} <= {}): outside the decaying-field hypothesis",
                1.0 - alpha
            )));
        }
        if gamma <= 1.0 - a_star {
            return Err(Error::Domain(format!(
                "gamma <= 1 - alpha_star ({gamma} <= {:.4}): outside the decaying-field hypothesis",
                1.0 - a_star
            )));
        }
    }

    // Candidate norm exponents: on the critical line the field bound is
    // taken at alpha' = alpha itself (alpha' = 0 when alpha = 0); otherwise
    // alpha' must exceed 1 - gamma so the field norm is dominated.
    let candidates: Vec<f64> = if critical {
        vec![alpha]
    } else if alpha == 0.0 {
        vec![0.0]
    } else {
        alpha_prime_candidates(alpha, (1.0 - gamma).max(0.0))
    };
    if candidates.is_empty() {
        return Err(Error::Domain(
            "no admissible alpha_prime between 1 - gamma and alpha_star".into(),
        ));
    }

    let mut best: Option<BetaCBound> = None;
    for ap in candidates {
        let zeta_val = zeta_alpha(ap, ZETA_CERT_LIMIT)?.zeta_alpha;
        let rate0 = kc.value * zeta_val;
        // On the critical line the cutoff gives no leverage (p = 0), so the
        // bound is taken at the most conservative cutoff L = 1; otherwise
        // scan upward for the first cutoff with a positive coefficient.
        let grid: &[i64] = if critical { &[1] } else { &L_GRID };
        let mut found: Option<(i64, f64)> = None;
        let mut h_threshold: f64 = 0.0;
        for &l in grid {
            let fp = FieldProfile::new(h_star, gamma, l)?;
            let deduction = empirical_field_coef(&fp, alpha, ap)?;
            h_threshold = h_threshold.max(h_star.abs() * rate0 / deduction);
            if rate0 - deduction > 0.0 && found.is_none() {
                found = Some((l, rate0 - deduction));
            }
        }
        let Some((l_required, coefficient)) = found else {
            if critical {
                return Err(Error::Domain(format!(
                    "critical case: |h_star| = {} exceeds the empirical threshold {:.6}",
                    h_star.abs(),
                    h_threshold
                )));
            }
            return Err(Error::Unconverged(
                "no cutoff in the L grid makes the Peierls coefficient positive".into(),
            ));
        };
        let beta_c = if ap == 0.0 {
            log_threshold(coefficient)?
        } else {
            power_threshold(coefficient, ap)?
        };
        let record = BetaCBound {
            alpha,
            gamma,
            h_star,
            c,
            alpha_prime: ap,
            kc: kc.value,
            zeta: zeta_val,
            coefficient,
            beta_c,
            l_required,
            h_threshold: if critical { Some(h_threshold) } else { None },
            sample_set: Some(format!("{FIELD_SAMPLE_DESC}; L grid {:?}", L_GRID)),
        };
        if best.as_ref().is_none_or(|b| record.beta_c < b.beta_c) {
            best = Some(record);
        }
    }
    Ok(best.expect("candidate list was non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spans(contour: &Contour) -> Vec<(i64, i64)> {
        contour
            .triangles()
            .iter()
            .map(|t| (t.base_min(), t.base_max()))
            .collect()
    }

    #[test]
    fn enumerate_mass_one() {
        let got = enumerate_contours(1, 2.0, required_horizon(1, 2.0)).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(spans(&got[0]), vec![(0, 0)]);
    }

    #[test]
    fn enumerate_mass_two() {
        // Hand count at c = 2: the two single triangles covering the origin
        // plus four (1,1) layouts at flip-point distances 1 and 2.
        let got = enumerate_contours(2, 2.0, required_horizon(2, 2.0)).unwrap();
        let got_spans: Vec<Vec<(i64, i64)>> = got.iter().map(spans).collect();
        let expected: Vec<Vec<(i64, i64)>> = vec![
            vec![(-3, -3), (0, 0)],
            vec![(-2, -2), (0, 0)],
            vec![(-1, 0)],
            vec![(0, 0), (2, 2)],
            vec![(0, 0), (3, 3)],
            vec![(0, 1)],
        ];
        assert_eq!(got_spans, expected);
    }

    #[test]
    fn enumerate_mass_three_count() {
        // 3 single triangles, 9 (1,2)/(2,1) layouts, 12 (1,1,1) layouts.
        let got = enumerate_contours(3, 2.0, required_horizon(3, 2.0)).unwrap();
        assert_eq!(got.len(), 24);
        assert!(got.iter().all(|g| g.mass() == 3 && g.base_contains(0)));
    }

    #[test]
    fn enumeration_guards() {
        assert!(matches!(
            enumerate_contours(5, 2.0, 10_000),
            Err(Error::Refused(_))
        ));
        assert!(matches!(
            enumerate_contours(3, 2.0, 10),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn enumeration_matches_spin_window_brute_force() {
        // Independent oracle: sweep every configuration with at most m minus
        // sites in the horizon window, group it, and collect contours of
        // mass m containing the origin.
        let m = 2i64;
        let c = 2.0;
        let horizon = required_horizon(m, c);
        let mut oracle: BTreeSet<Vec<(i64, i64)>> = BTreeSet::new();
        let sites: Vec<i64> = (-horizon..=horizon).collect();
        let mut consider = |minus: &[i64]| {
            let mut spins = vec![1i8; (2 * horizon + 1) as usize];
            for &x in minus {
                spins[(x + horizon) as usize] = -1;
            }
            let sigma = SpinConfiguration::new(horizon, spins, Boundary::Plus).unwrap();
            let family = build_triangles(&sigma);
            if family.total_mass() != m {
                return;
            }
            let cfg = group_contours(&family, c).unwrap();
            for g in cfg.contours {
                if g.mass() == m && g.base_contains(0) {
                    oracle.insert(
                        g.triangles()
                            .iter()
                            .map(|t| (t.left().doubled(), t.right().doubled()))
                            .collect(),
                    );
                }
            }
        };
        for (i, &a) in sites.iter().enumerate() {
            consider(&[a]);
            for &b in &sites[i + 1..] {
                consider(&[a, b]);
            }
        }
        let enumerated: BTreeSet<Vec<(i64, i64)>> =
            enumerate_contours(m, c, horizon)
                .unwrap()
                .iter()
                .map(|g| {
                    g.triangles()
                        .iter()
                        .map(|t| (t.left().doubled(), t.right().doubled()))
                        .collect()
                })
                .collect();
        assert_eq!(enumerated, oracle);
    }

    #[test]
    fn entropy_check_mass_one_is_exact() {
        let r = entropy_check(1, 2.0, 5.0, 0.2).unwrap();
        assert_eq!(r.contour_count, 1);
        assert_abs_diff_eq!(r.lhs, (-5.0f64).exp(), epsilon = 1e-18);
        assert_abs_diff_eq!(r.rhs, 2.0 * (-5.0f64).exp(), epsilon = 1e-18);
        assert!(r.pass);

        let r0 = entropy_check(1, 2.0, 5.0, 0.0).unwrap();
        assert_abs_diff_eq!(r0.lhs, (-20.0f64).exp(), epsilon = 1e-22);
        assert!(r0.pass);
    }

    #[test]
    fn entropy_check_small_grid_passes() {
        for m in [1, 2] {
            for b in [5.0, 10.0] {
                for alpha in [0.0, 0.2] {
                    let r = entropy_check(m, 2.0, b, alpha).unwrap();
                    assert!(r.pass, "entropy bound failed at m={m} b={b} alpha={alpha}");
                }
            }
        }
    }

    #[test]
    fn quasi_additivity_small_run() {
        let r = quasi_additivity_check(20, 10.0, 0.5, 0.2, 1234).unwrap();
        assert_eq!(r.violations, 0, "worst margin {:?}", r.worst_margin);
        assert!(r.contours_checked > 0);

        // Closed-form single-contour case: 2 zeta(1.8) >= zeta_{0.2}/2.
        let lone = contour_energy_of_unit();
        assert!(lone >= r.zeta_alpha_prime / 2.0);
    }

    fn contour_energy_of_unit() -> f64 {
        let g = Contour::new(vec![Triangle::from_base(0, 1).unwrap()]).unwrap();
        crate::contour::contour_energy(&g, &CouplingParams::pure(0.2).unwrap()).unwrap()
    }

    #[test]
    fn series_matches_naive_summation() {
        let beta = 50.0;
        let kc = k_c(0.5, 10.0, KcVariant::Corrected).unwrap().value;
        let z = zeta_alpha(0.2, ZETA_CERT_LIMIT).unwrap().zeta_alpha;
        let a = beta * kc * z;
        let mut naive = 0.0;
        for m in 1..=2_000_000u64 {
            naive += m as f64 * (-a * (m as f64).powf(0.2)).exp();
        }
        naive *= 2.0;
        let fast = peierls_series(beta, 0.5, 0.2, 10.0, KcVariant::Corrected, 10_000_000).unwrap();
        assert_abs_diff_eq!(fast, naive, epsilon = 1e-12 + 1e-9 * naive);
    }

    #[test]
    fn series_edge_cases() {
        assert!(peierls_series(0.0, 0.5, 0.2, 10.0, KcVariant::Corrected, 1000).is_err());
        let big = peierls_series(1e6, 0.5, 0.2, 10.0, KcVariant::Corrected, 1000).unwrap();
        assert!(big < 1e-100);
        // Printed variant at large c has negative K_c: divergent.
        assert!(peierls_series(10.0, 0.5, 0.2, 100.0, KcVariant::Printed, 1000).is_err());
        assert!(peierls_series(10.0, 0.5, 0.3, 10.0, KcVariant::Corrected, 1000).is_err());
    }

    #[test]
    fn series_decreasing_in_beta() {
        let mut prev = f64::INFINITY;
        for k in 0..=19 {
            let beta = 40.0 + 5.0 * k as f64;
            let v =
                peierls_series(beta, 0.5, 0.2, 10.0, KcVariant::Corrected, SERIES_MAX_TERMS)
                    .unwrap();
            assert!(v < prev, "series not decreasing at beta={beta}");
            prev = v;
        }
    }

    #[test]
    fn beta_c_zero_field() {
        let b = beta_c_bound(0.5, 1.0, 0.0, 10.0, KcVariant::Corrected).unwrap();
        assert!(b.beta_c.is_finite() && b.beta_c > 0.0);
        assert_eq!(b.l_required, 0);
        assert!(b.h_threshold.is_none());
        let at = peierls_series(
            b.beta_c,
            0.5,
            b.alpha_prime,
            10.0,
            KcVariant::Corrected,
            SERIES_MAX_TERMS,
        )
        .unwrap();
        assert!(at < 0.5);
        let below = peierls_series(
            0.9 * b.beta_c,
            0.5,
            b.alpha_prime,
            10.0,
            KcVariant::Corrected,
            SERIES_MAX_TERMS,
        )
        .unwrap();
        assert!(below >= 0.5, "series(0.9 beta_c) = {below}");
    }

    #[test]
    fn beta_c_zero_field_alpha_zero() {
        let b = beta_c_bound(0.0, 1.0, 0.0, 10.0, KcVariant::Corrected).unwrap();
        assert!(b.beta_c.is_finite() && b.beta_c > 0.0);
        assert_eq!(b.alpha_prime, 0.0);
        // The closed form must cross 1/2 at the reported threshold.
        assert!(series_log(b.beta_c * b.coefficient).unwrap() < 0.5);
        assert!(series_log(0.9 * b.beta_c * b.coefficient).is_err()
            || series_log(0.9 * b.beta_c * b.coefficient).unwrap() >= 0.5);
    }

    #[test]
    fn beta_c_domain_errors_name_the_inequality() {
        let e = beta_c_bound(0.5, 0.3, 1.0, 10.0, KcVariant::Corrected).unwrap_err();
        assert!(e.to_string().contains("gamma <= 1 - alpha"), "{e}");
        let e = beta_c_bound(0.5, 0.6, 1.0, 10.0, KcVariant::Corrected).unwrap_err();
        assert!(e.to_string().contains("gamma <= 1 - alpha_star"), "{e}");
    }

    #[test]
    fn beta_c_field_case() {
        let b = beta_c_bound(0.5, 0.8, 1.0, 10.0, KcVariant::Corrected).unwrap();
        assert!(b.beta_c.is_finite());
        assert!(b.l_required >= 1);
        assert!(b.h_threshold.is_none());
        assert!(b.sample_set.is_some());
        assert!(b.alpha_prime > 1.0 - 0.8 && b.alpha_prime < alpha_star());

        // h* = 0 through the field path reduces to the zero-field bound.
        let zero_field = beta_c_bound(0.5, 0.8, 0.0, 10.0, KcVariant::Corrected).unwrap();
        let plain = beta_c_bound(0.5, 0.0, 0.0, 10.0, KcVariant::Corrected).unwrap();
        assert_abs_diff_eq!(zero_field.beta_c, plain.beta_c, epsilon = 0.0);
    }

    #[test]
    fn beta_c_critical_line() {
        let alpha = 0.2;
        let gamma = 0.8;
        let b = beta_c_bound(alpha, gamma, 1e-4, 10.0, KcVariant::Corrected).unwrap();
        let thr = b.h_threshold.expect("critical case returns a threshold");
        assert!(thr > 1e-4, "threshold {thr} should exceed the small field");
        assert!(b.beta_c.is_finite());
        assert_eq!(b.alpha_prime, alpha);

        // Far beyond the threshold the critical case must refuse.
        let e = beta_c_bound(alpha, gamma, 1e6, 10.0, KcVariant::Corrected).unwrap_err();
        assert!(e.to_string().contains("threshold"), "{e}");
    }

    #[test]
    fn beta_c_alpha_zero_summable_field() {
        let b = beta_c_bound(0.0, 1.2, 0.5, 10.0, KcVariant::Corrected).unwrap();
        assert!(b.beta_c.is_finite());
        assert!(b.l_required >= 1);

        let crit = beta_c_bound(0.0, 1.0, 1e-4, 10.0, KcVariant::Corrected).unwrap();
        assert!(crit.h_threshold.is_some());
    }
}
