//! Triangles and contours for one-dimensional long-range configurations:
//! spin-flip points on the dual lattice, triangle growth by nearest-pair
//! matching on deterministically perturbed bases, grouping into
//! well-separated contours, and contour energies.
//!
//! The geometric "∨-line" growth is realized as its equivalent restatement:
//! repeatedly match the pair of active flip points at the smallest perturbed
//! distance. The perturbation of the k-th flip point (in sorted order) is
//! `3^(-k)/100`, which makes all pairwise distances distinct; distance
//! comparisons are carried out exactly on the powers of three, so the
//! construction involves no floating-point geometry at all.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::bounds::chi;
use crate::error::{Error, Result};
use crate::lattice::{
    hamiltonian_with, Boundary, CouplingParams, FieldProfile, PairTable, SpinConfiguration,
};

/// A site of the dual lattice (a half-integer), stored as twice its value,
/// which is always odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualPoint(i64);

impl DualPoint {
    /// The dual site between lattice sites `x` and `x + 1`.
    pub fn between(x: i64) -> Self {
        DualPoint(2 * x + 1)
    }

    pub fn from_doubled(doubled: i64) -> Result<Self> {
        if doubled.rem_euclid(2) != 1 {
            return Err(Error::Domain(format!(
                "dual-lattice points are half-integers; doubled value {doubled} is even"
            )));
        }
        Ok(DualPoint(doubled))
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 * 0.5
    }
}

#[derive(Serialize, Deserialize, Clone, Copy)]
struct TriangleJson {
    left: f64,
    right: f64,
    mass: i64,
}

/// One triangle of the construction: two paired spin-flip points `x- < x+`
/// on the dual lattice, with base `Δ(T) = [x-, x+] ∩ ℤ` and mass
/// `|T| = x+ - x-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TriangleJson", into = "TriangleJson")]
pub struct Triangle {
    left: DualPoint,
    right: DualPoint,
}

impl Triangle {
    pub fn new(left: DualPoint, right: DualPoint) -> Result<Self> {
        if left >= right {
            return Err(Error::Domain(format!(
                "triangle roots must satisfy x- < x+, got {} and {}",
                left.value(),
                right.value()
            )));
        }
        Ok(Triangle { left, right })
    }

    /// The triangle whose base is the `mass` consecutive sites starting
    /// at `start`.
    pub fn from_base(start: i64, mass: i64) -> Result<Self> {
        if mass < 1 {
            return Err(Error::Domain(format!("triangle mass must be >= 1, got {mass}")));
        }
        Triangle::new(
            DualPoint::between(start - 1),
            DualPoint::between(start + mass - 1),
        )
    }

    pub fn left(&self) -> DualPoint {
        self.left
    }

    pub fn right(&self) -> DualPoint {
        self.right
    }

    pub fn mass(&self) -> i64 {
        (self.right.0 - self.left.0) / 2
    }

    pub fn base_min(&self) -> i64 {
        (self.left.0 + 1) / 2
    }

    pub fn base_max(&self) -> i64 {
        (self.right.0 - 1) / 2
    }

    pub fn base_contains(&self, x: i64) -> bool {
        self.base_min() <= x && x <= self.base_max()
    }

    /// `d(T, T')`: the smallest distance between the flip points
    /// `sf*(T) = {x-, x+}` of the two triangles.
    pub fn dist(&self, other: &Triangle) -> i64 {
        let mut best = i64::MAX;
        for a in [self.left.0, self.right.0] {
            for b in [other.left.0, other.right.0] {
                best = best.min((a - b).abs());
            }
        }
        best / 2
    }
}

impl TryFrom<TriangleJson> for Triangle {
    type Error = Error;

    fn try_from(raw: TriangleJson) -> Result<Self> {
        let parse = |v: f64, name: &str| -> Result<DualPoint> {
            let doubled = (2.0 * v).round();
            if !v.is_finite() || (2.0 * v - doubled).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "triangle {name} root must be a half-integer, got {v}"
                )));
            }
            DualPoint::from_doubled(doubled as i64)
        };
        let t = Triangle::new(parse(raw.left, "left")?, parse(raw.right, "right")?)?;
        if t.mass() != raw.mass {
            return Err(Error::Domain(format!(
                "triangle mass {} does not match roots ({}, {})",
                raw.mass, raw.left, raw.right
            )));
        }
        Ok(t)
    }
}

impl From<Triangle> for TriangleJson {
    fn from(t: Triangle) -> Self {
        TriangleJson {
            left: t.left.value(),
            right: t.right.value(),
            mass: t.mass(),
        }
    }
}

/// A compatible collection of triangles: pairwise `d(T,T') >= min(|T|,|T'|)`
/// with bases pairwise disjoint or strictly nested. Stored sorted by roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriangleFamily {
    triangles: Vec<Triangle>,
}

impl TriangleFamily {
    pub fn new(mut triangles: Vec<Triangle>) -> Result<Self> {
        triangles.sort();
        let family = TriangleFamily { triangles };
        family.validate()?;
        Ok(family)
    }

    pub fn empty() -> Self {
        TriangleFamily { triangles: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        let ts = &self.triangles;
        for i in 0..ts.len() {
            for j in (i + 1)..ts.len() {
                if ts[i] == ts[j] {
                    return Err(Error::Domain("duplicate triangle in family".into()));
                }
                let d = ts[i].dist(&ts[j]);
                let min_mass = ts[i].mass().min(ts[j].mass());
                if d < min_mass {
                    return Err(Error::Domain(format!(
                        "triangles at ({}, {}) and ({}, {}) violate d >= min mass: d = {d}, min = {min_mass}",
                        ts[i].left.value(),
                        ts[i].right.value(),
                        ts[j].left.value(),
                        ts[j].right.value()
                    )));
                }
                let (a, b) = (&ts[i], &ts[j]);
                let disjoint = a.base_max() < b.base_min() || b.base_max() < a.base_min();
                let nested = (a.base_min() <= b.base_min() && b.base_max() <= a.base_max())
                    || (b.base_min() <= a.base_min() && a.base_max() <= b.base_max());
                if !disjoint && !nested {
                    return Err(Error::Domain(
                        "triangle bases partially overlap; families must be disjoint-or-nested"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn total_mass(&self) -> i64 {
        self.triangles.iter().map(Triangle::mass).sum()
    }
}

/// Sorted dual sites where adjacent spins differ (boundary included); the
/// count is always even under a uniform boundary condition.
pub fn spin_flip_points(sigma: &SpinConfiguration) -> Vec<DualPoint> {
    let n = sigma.window_radius();
    let mut flips = Vec::new();
    for x in (-n - 1)..=n {
        if sigma.spin(x) != sigma.spin(x + 1) {
            flips.push(DualPoint::between(x));
        }
    }
    flips
}

/// The perturbed triangle bases `r_k = i_k + 3^(-k)/100` (k = 1, 2, ... in
/// sorted order). All pairwise differences of the `r_k` are distinct, which
/// is what makes the nearest-pair process unambiguous.
pub fn assign_bases(flips: &[DualPoint]) -> Result<Vec<f64>> {
    if flips.len() % 2 != 0 {
        return Err(Error::Domain(format!(
            "{} spin-flip points: an odd count cannot occur under a uniform boundary",
            flips.len()
        )));
    }
    Ok(flips
        .iter()
        .enumerate()
        .map(|(i, p)| p.value() + (3.0f64).powi(-(i as i32 + 1)) / 100.0)
        .collect())
}

/// Sign of `(3^(-kb1) - 3^(-ka1)) - (3^(-kb2) - 3^(-ka2))`, computed exactly:
/// collect net coefficients per exponent; the smallest exponent carrying a
/// nonzero coefficient dominates the rest of the sum.
fn perturbation_cmp(ka1: u32, kb1: u32, ka2: u32, kb2: u32) -> Ordering {
    let mut terms = [(kb1, 1i32), (ka1, -1), (kb2, -1), (ka2, 1)];
    terms.sort_by_key(|t| t.0);
    let mut i = 0;
    while i < terms.len() {
        let mut coef = terms[i].1;
        let mut j = i + 1;
        while j < terms.len() && terms[j].0 == terms[i].0 {
            coef += terms[j].1;
            j += 1;
        }
        match coef.cmp(&0) {
            Ordering::Equal => i = j,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Distance key of an active adjacent pair: integer gap first, then the
/// exact perturbation comparison. Ranks are the 1-based sorted positions of
/// the flip points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairKey {
    gap: i64,
    ka: u32,
    kb: u32,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gap
            .cmp(&other.gap)
            .then_with(|| perturbation_cmp(self.ka, self.kb, other.ka, other.kb))
    }
}

impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds the triangle family of a configuration by the iterative
/// nearest-pair process on the perturbed flip points. On a line the closest
/// active pair is always adjacent, so the process runs on a linked list of
/// survivors with a heap of adjacent-pair distances.
pub fn build_triangles(sigma: &SpinConfiguration) -> TriangleFamily {
    let flips = spin_flip_points(sigma);
    let n = flips.len();
    debug_assert!(n % 2 == 0);
    if n == 0 {
        return TriangleFamily::empty();
    }

    let mut alive = vec![true; n];
    let mut prev: Vec<usize> = (0..n).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=n).collect();

    let key = |a: usize, b: usize| PairKey {
        gap: flips[b].0 - flips[a].0,
        ka: a as u32 + 1,
        kb: b as u32 + 1,
    };
    let mut heap: BinaryHeap<Reverse<(PairKey, usize, usize)>> = (0..n - 1)
        .map(|i| Reverse((key(i, i + 1), i, i + 1)))
        .collect();

    let mut out = Vec::with_capacity(n / 2);
    while let Some(Reverse((_, a, b))) = heap.pop() {
        if !alive[a] || !alive[b] || next[a] != b {
            continue;
        }
        out.push(Triangle {
            left: flips[a],
            right: flips[b],
        });
        alive[a] = false;
        alive[b] = false;
        let before = prev[a];
        let after = next[b];
        if before != usize::MAX {
            next[before] = after;
        }
        if after != n {
            prev[after] = before;
        }
        if before != usize::MAX && after != n {
            heap.push(Reverse((key(before, after), before, after)));
        }
    }

    out.sort();
    let family = TriangleFamily { triangles: out };
    debug_assert!(family.validate().is_ok());
    family
}

/// Inverse of [`build_triangles`]: a site takes the boundary value flipped
/// once per triangle whose base contains it.
pub fn triangles_to_spins(
    family: &TriangleFamily,
    window_radius: i64,
    boundary: Boundary,
) -> Result<SpinConfiguration> {
    if window_radius < 0 {
        return Err(Error::Domain(format!(
            "window radius must be >= 0, got {window_radius}"
        )));
    }
    let w = (2 * window_radius + 1) as usize;
    let mut flip_depth = vec![0u32; w + 1];
    for t in family.triangles() {
        if t.base_min() < -window_radius || t.base_max() > window_radius {
            return Err(Error::Domain(format!(
                "triangle base [{}, {}] lies outside the window [-{window_radius}, {window_radius}]",
                t.base_min(),
                t.base_max()
            )));
        }
        flip_depth[(t.base_min() + window_radius) as usize] += 1;
        flip_depth[(t.base_max() + window_radius + 1) as usize] += 1;
    }
    let base = boundary.spin();
    let mut depth = 0u32;
    let spins = (0..w)
        .map(|i| {
            depth += flip_depth[i];
            if depth % 2 == 0 {
                base
            } else {
                -base
            }
        })
        .collect();
    SpinConfiguration::new(window_radius, spins, boundary)
}

/// A grouped set of triangles. Mass and base are always derived from the
/// triangle list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ContourJson", into = "ContourJson")]
pub struct Contour {
    triangles: Vec<Triangle>,
}

#[derive(Serialize, Deserialize, Clone)]
struct ContourJson {
    triangles: Vec<Triangle>,
}

impl Contour {
    pub fn new(mut triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Domain("a contour must contain at least one triangle".into()));
        }
        triangles.sort();
        triangles.dedup();
        Ok(Contour { triangles })
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn mass(&self) -> i64 {
        self.triangles.iter().map(Triangle::mass).sum()
    }

    /// The base `Δ(Γ)` as maximal disjoint integer intervals.
    pub fn base(&self) -> Vec<(i64, i64)> {
        let mut spans: Vec<(i64, i64)> = self
            .triangles
            .iter()
            .map(|t| (t.base_min(), t.base_max()))
            .collect();
        spans.sort();
        let mut merged: Vec<(i64, i64)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        merged
    }

    pub fn base_contains(&self, x: i64) -> bool {
        self.triangles.iter().any(|t| t.base_contains(x))
    }

    pub fn leftmost(&self) -> i64 {
        self.triangles.iter().map(Triangle::base_min).min().unwrap()
    }

    /// Smallest window radius whose window contains the whole base.
    pub fn span_radius(&self) -> i64 {
        self.triangles
            .iter()
            .map(|t| t.base_min().abs().max(t.base_max().abs()))
            .max()
            .unwrap()
    }

    pub fn dist(&self, other: &Contour) -> i64 {
        let mut best = i64::MAX;
        for a in &self.triangles {
            for b in &other.triangles {
                best = best.min(a.dist(b));
            }
        }
        best
    }
}

impl TryFrom<ContourJson> for Contour {
    type Error = Error;

    fn try_from(raw: ContourJson) -> Result<Self> {
        Contour::new(raw.triangles)
    }
}

impl From<Contour> for ContourJson {
    fn from(c: Contour) -> Self {
        ContourJson { triangles: c.triangles }
    }
}

/// A partition of a triangle family into contours, with the separation
/// constant that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourConfiguration {
    #[serde(rename = "c")]
    pub grouping_c: f64,
    pub contours: Vec<Contour>,
}

/// Partitions a family into contours by greedy merging: while some pair of
/// groups violates the separation predicate `d(Γ,Γ') > c min(|Γ|,|Γ'|)^3`,
/// merge the violating pair at the smallest distance (ties to the leftmost
/// base). Distances only shrink and thresholds only grow under merging, so
/// the fixed point is independent of stale heap entries.
pub fn group_contours(family: &TriangleFamily, c: f64) -> Result<ContourConfiguration> {
    if !(c > 1.0) {
        return Err(Error::Domain(format!(
            "grouping constant c must be > 1, got {c}"
        )));
    }
    let ts = family.triangles();
    let k = ts.len();
    let mut groups: Vec<Vec<Triangle>> = ts.iter().map(|t| vec![*t]).collect();
    let mut masses: Vec<i64> = ts.iter().map(Triangle::mass).collect();
    let mut leftmost: Vec<i64> = ts.iter().map(Triangle::base_min).collect();
    let mut alive = vec![true; k];
    let mut dist = vec![i64::MAX; k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let d = ts[i].dist(&ts[j]);
            dist[i * k + j] = d;
            dist[j * k + i] = d;
        }
    }

    let violates = |d: i64, mi: i64, mj: i64| -> bool {
        (d as f64) <= c * (mi.min(mj) as f64).powi(3)
    };

    // Heap entries carry the key they were pushed with; entries whose
    // distance or tie-break data went stale are re-validated on pop.
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct MergeKey(i64, i64, i64, usize, usize);
    let mut heap: BinaryHeap<Reverse<MergeKey>> = BinaryHeap::new();
    let push_if_violating =
        |heap: &mut BinaryHeap<Reverse<MergeKey>>,
         dist: &[i64],
         masses: &[i64],
         leftmost: &[i64],
         i: usize,
         j: usize| {
            let d = dist[i * k + j];
            if violates(d, masses[i], masses[j]) {
                let (la, lb) = (leftmost[i].min(leftmost[j]), leftmost[i].max(leftmost[j]));
                heap.push(Reverse(MergeKey(d, la, lb, i.min(j), i.max(j))));
            }
        };
    for i in 0..k {
        for j in (i + 1)..k {
            push_if_violating(&mut heap, &dist, &masses, &leftmost, i, j);
        }
    }

    loop {
        while let Some(Reverse(MergeKey(d, la, lb, i, j))) = heap.pop() {
            if !alive[i] || !alive[j] || dist[i * k + j] != d {
                continue;
            }
            let cur = (leftmost[i].min(leftmost[j]), leftmost[i].max(leftmost[j]));
            if (la, lb) != cur {
                heap.push(Reverse(MergeKey(d, cur.0, cur.1, i, j)));
                continue;
            }
            if !violates(d, masses[i], masses[j]) {
                // Cannot happen (thresholds only grow), kept as a guard.
                continue;
            }
            let taken = std::mem::take(&mut groups[j]);
            groups[i].extend(taken);
            masses[i] += masses[j];
            leftmost[i] = leftmost[i].min(leftmost[j]);
            alive[j] = false;
            for m in 0..k {
                if m != i && alive[m] {
                    let nd = dist[i * k + m].min(dist[j * k + m]);
                    dist[i * k + m] = nd;
                    dist[m * k + i] = nd;
                    push_if_violating(&mut heap, &dist, &masses, &leftmost, i, m);
                }
            }
        }
        // Full verification sweep; re-seed and continue if anything is left.
        let mut clean = true;
        for i in 0..k {
            for j in (i + 1)..k {
                if alive[i] && alive[j] && violates(dist[i * k + j], masses[i], masses[j]) {
                    push_if_violating(&mut heap, &dist, &masses, &leftmost, i, j);
                    clean = false;
                }
            }
        }
        if clean {
            break;
        }
    }

    let mut contours: Vec<Contour> = (0..k)
        .filter(|&i| alive[i])
        .map(|i| Contour::new(std::mem::take(&mut groups[i])).expect("groups are non-empty"))
        .collect();
    contours.sort_by_key(|g| (g.leftmost(), g.mass()));
    Ok(ContourConfiguration {
        grouping_c: c,
        contours,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationViolation {
    pub first: usize,
    pub second: usize,
    pub reason: String,
}

fn intervals_disjoint(a: &[(i64, i64)], b: &[(i64, i64)]) -> bool {
    for &(alo, ahi) in a {
        for &(blo, bhi) in b {
            if alo <= bhi && blo <= ahi {
                return false;
            }
        }
    }
    true
}

fn intervals_subset(inner: &[(i64, i64)], outer: &[(i64, i64)]) -> bool {
    inner.iter().all(|&(lo, hi)| {
        outer.iter().any(|&(olo, ohi)| olo <= lo && hi <= ohi)
    })
}

/// Checks property P.1 for every pair of contours: the strict cube-distance
/// inequality and the base alternative (disjoint bases, or nesting with the
/// inner base confined to single triangles of the outer contour).
pub fn check_separation(cfg: &ContourConfiguration) -> (bool, Vec<SeparationViolation>) {
    let mut violations = Vec::new();
    let bases: Vec<Vec<(i64, i64)>> = cfg.contours.iter().map(Contour::base).collect();
    for i in 0..cfg.contours.len() {
        for j in (i + 1)..cfg.contours.len() {
            let (gi, gj) = (&cfg.contours[i], &cfg.contours[j]);
            let d = gi.dist(gj);
            let threshold = cfg.grouping_c * (gi.mass().min(gj.mass()) as f64).powi(3);
            if !((d as f64) > threshold) {
                violations.push(SeparationViolation {
                    first: i,
                    second: j,
                    reason: format!(
                        "d = {d} fails the strict bound > c min(mass)^3 = {threshold}"
                    ),
                });
            }
            if intervals_disjoint(&bases[i], &bases[j]) {
                continue;
            }
            let (inner_idx, inner, outer) = if intervals_subset(&bases[i], &bases[j]) {
                (i, gi, gj)
            } else if intervals_subset(&bases[j], &bases[i]) {
                (j, gj, gi)
            } else {
                violations.push(SeparationViolation {
                    first: i,
                    second: j,
                    reason: "bases overlap without either containing the other".into(),
                });
                continue;
            };
            let inner_base = Contour::base(inner);
            for t in outer.triangles() {
                let span = [(t.base_min(), t.base_max())];
                let inside = intervals_subset(&inner_base, &span);
                let apart = intervals_disjoint(&inner_base, &span);
                if !inside && !apart {
                    violations.push(SeparationViolation {
                        first: i,
                        second: j,
                        reason: format!(
                            "nested contour {inner_idx} is neither inside nor disjoint from \
                             an outer triangle with base [{}, {}]",
                            t.base_min(),
                            t.base_max()
                        ),
                    });
                }
            }
        }
    }
    (violations.is_empty(), violations)
}

fn family_energy(
    triangles: Vec<Triangle>,
    window_radius: i64,
    table: &PairTable,
) -> Result<f64> {
    let family = TriangleFamily::new(triangles)?;
    let sigma = triangles_to_spins(&family, window_radius, Boundary::Plus)?;
    Ok(hamiltonian_with(&sigma, table, &FieldProfile::zero()).total)
}

/// Zero-field energy of the configuration whose only contour is `gamma0`,
/// with plus boundary. Window-independent: any window containing the base
/// gives the same value.
pub fn contour_energy(gamma0: &Contour, cp: &CouplingParams) -> Result<f64> {
    let radius = gamma0.span_radius();
    let table = PairTable::new(cp, 2 * radius + 2)?;
    family_energy(gamma0.triangles().to_vec(), radius, &table)
}

/// `H(Γ_full) - H(Γ_full \ {gamma0})` from two full-configuration energies.
pub fn conditional_energy(
    gamma0: &Contour,
    cfg: &ContourConfiguration,
    cp: &CouplingParams,
) -> Result<f64> {
    let Some(pos) = cfg.contours.iter().position(|g| g == gamma0) else {
        return Err(Error::Domain(
            "conditional energy of a contour that is not in the configuration".into(),
        ));
    };
    let full: Vec<Triangle> = cfg
        .contours
        .iter()
        .flat_map(|g| g.triangles().iter().copied())
        .collect();
    let rest: Vec<Triangle> = cfg
        .contours
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .flat_map(|(_, g)| g.triangles().iter().copied())
        .collect();
    let radius = full
        .iter()
        .map(|t| t.base_min().abs().max(t.base_max().abs()))
        .max()
        .unwrap_or(0);
    let table = PairTable::new(cp, 2 * radius + 2)?;
    let h_full = family_energy(full, radius, &table)?;
    let h_rest = if rest.is_empty() {
        0.0
    } else {
        family_energy(rest, radius, &table)?
    };
    Ok(h_full - h_rest)
}

/// `||Γ||_alpha = sum over triangles of chi_alpha(|T|)`.
pub fn contour_norm(gamma0: &Contour, alpha: f64) -> f64 {
    gamma0
        .triangles()
        .iter()
        .map(|t| chi(t.mass() as f64, alpha))
        .sum()
}
