//! The counting refutation of undersized covers.
//!
//! A labeling `sigma: [n] -> [k]` is summarized by its pattern: the sum of
//! labels on each biclique's left side, followed by the sum of all labels.
//! With `m + 1 < n` pattern entries, two labelings must eventually share a
//! pattern, and their difference `tau` sums to zero on every left side and
//! overall. Expanding `(sum tau)^2` then shows that such a `tau` cannot exist
//! for an exact cover; [`quadratic_defect`] measures by how much a given cover
//! misses that identity.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::collision::{self, SearchConfig, SearchOutcome, SearchStrategy};
use crate::cover::{edge_multiplicities, CoverSpec, Edge};
use crate::error::WitnessError;

/// A vertex labeling with values in `[1, k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Labeling {
    values: Vec<u64>,
    k: u64,
}

impl Labeling {
    pub fn new(values: Vec<u64>, k: u64) -> Result<Self, WitnessError> {
        if k < 1 {
            return Err(WitnessError::LabelRange { k, min: 1 });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v < 1 || v > k) {
            return Err(WitnessError::LabelOutOfRange { index, value, k });
        }
        Ok(Labeling { values, k })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Left-side sums of a labeling, one per biclique, then the total.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Pattern(pub Vec<u64>);

impl Pattern {
    pub fn entries(&self) -> &[u64] {
        &self.0
    }
}

pub fn pattern_of(sigma: &Labeling, cover: &CoverSpec) -> Result<Pattern, WitnessError> {
    cover.validate()?;
    check_len(cover, sigma.len())?;
    pattern_entries(sigma.values(), cover).map(Pattern)
}

// Assumes a validated cover and a labeling of matching length.
fn pattern_entries(values: &[u64], cover: &CoverSpec) -> Result<Vec<u64>, WitnessError> {
    let mut entries = Vec::with_capacity(cover.len() + 1);
    for b in &cover.bicliques {
        entries.push(label_sum(b.left.iter().map(|&v| values[v - 1]))?);
    }
    entries.push(label_sum(values.iter().copied())?);
    Ok(entries)
}

fn label_sum(mut values: impl Iterator<Item = u64>) -> Result<u64, WitnessError> {
    values
        .try_fold(0u64, |acc, v| acc.checked_add(v))
        .ok_or(WitnessError::Overflow)
}

fn check_len(cover: &CoverSpec, found: usize) -> Result<(), WitnessError> {
    if found != cover.n {
        return Err(WitnessError::LengthMismatch { expected: cover.n, found });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeThreshold {
    /// `k^n`
    #[serde(serialize_with = "decimal")]
    pub labelings: BigUint,
    /// `(k n)^(m+1)`, a coarse bound on the number of distinct patterns.
    #[serde(serialize_with = "decimal")]
    pub pattern_bound: BigUint,
    pub collision_guaranteed: bool,
}

fn decimal<S: serde::Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Compares the number of labelings with the number of possible patterns.
///
/// The pattern bound treats every entry as ranging up to `k n`; entries for
/// small left sides could be bounded by `k |L_i|` instead, but the guarantee
/// condition is reported against the coarse bound.
pub fn pigeonhole_threshold(n: u64, m: u64, k: u64) -> Result<PigeonholeThreshold, WitnessError> {
    if n < 1 {
        return Err(WitnessError::Precondition("n must be at least 1"));
    }
    if k < 1 {
        return Err(WitnessError::LabelRange { k, min: 1 });
    }
    let exponent = |e: u64| u32::try_from(e).map_err(|_| WitnessError::Overflow);
    let labelings = BigUint::from(k).pow(exponent(n)?);
    let pattern_bound = (BigUint::from(k) * BigUint::from(n)).pow(exponent(m + 1)?);
    Ok(PigeonholeThreshold {
        collision_guaranteed: labelings > pattern_bound,
        labelings,
        pattern_bound,
    })
}

/// Looks for two distinct labelings in `[1, k]^n` with equal patterns.
/// An empty outcome only means the budget ran out.
pub fn find_pattern_collision(
    cover: &CoverSpec,
    k: u64,
    config: &SearchConfig,
) -> Result<SearchOutcome<Labeling>, WitnessError> {
    cover.validate()?;
    if k < 2 {
        return Err(WitnessError::LabelRange { k, min: 2 });
    }
    let outcome = collision::search(cover.n, k, config, |sigma| pattern_entries(sigma, cover))?;
    Ok(outcome.map(|values| Labeling { values, k }))
}

/// A vertex vector `tau`. Whether it witnesses anything depends on the cover;
/// see [`validate_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness {
    tau: Vec<i64>,
}

impl Witness {
    pub fn new(tau: Vec<i64>) -> Self {
        Witness { tau }
    }

    pub fn tau(&self) -> &[i64] {
        &self.tau
    }

    /// `sum tau_j^2`
    pub fn square_norm(&self) -> Result<i128, WitnessError> {
        self.tau.iter().try_fold(0i128, |acc, &t| {
            acc.checked_add(i128::from(t) * i128::from(t))
                .ok_or(WitnessError::Overflow)
        })
    }
}

/// `tau = sigma1 - sigma2` for two distinct labelings with equal patterns.
pub fn witness_from_collision(
    sigma1: &Labeling,
    sigma2: &Labeling,
    cover: &CoverSpec,
) -> Result<Witness, WitnessError> {
    let p1 = pattern_of(sigma1, cover)?;
    let p2 = pattern_of(sigma2, cover)?;
    if sigma1.values == sigma2.values {
        return Err(WitnessError::IdenticalLabelings);
    }
    if let Some(entry) = p1.0.iter().zip(&p2.0).position(|(a, b)| a != b) {
        return Err(WitnessError::PatternMismatch { entry });
    }
    let tau = sigma1
        .values
        .iter()
        .zip(&sigma2.values)
        .map(|(&a, &b)| {
            let diff = i128::from(a) - i128::from(b);
            i64::try_from(diff).map_err(|_| WitnessError::Overflow)
        })
        .collect::<Result<_, _>>()?;
    Ok(Witness { tau })
}

/// Iterative deepening over the coordinate bound `B = 1..=max_bound`, returning
/// the lexicographically first valid witness in `[-B, B]^n` at the smallest
/// `B` that has one. Only enumeration and integer sums are used.
pub fn witness_by_kernel_search(
    cover: &CoverSpec,
    max_bound: u64,
) -> Result<Option<Witness>, WitnessError> {
    cover.validate()?;
    if max_bound < 1 {
        return Err(WitnessError::Precondition("kernel bound must be at least 1"));
    }
    let bound_limit = i64::try_from(max_bound).map_err(|_| WitnessError::Overflow)?;
    let n = cover.n;
    let lefts: Vec<Vec<usize>> = cover
        .bicliques
        .iter()
        .map(|b| b.left.iter().map(|&v| v - 1).collect())
        .collect();

    for bound in 1..=bound_limit {
        // The zero-total constraint pins the last coordinate, so only the
        // first n - 1 coordinates are enumerated; order is preserved.
        let mut prefix = vec![-bound; n - 1];
        let mut tau = vec![0i64; n];
        loop {
            let partial: i64 = prefix.iter().sum();
            let last = -partial;
            if last.abs() <= bound {
                tau[..n - 1].copy_from_slice(&prefix);
                tau[n - 1] = last;
                if tau.iter().any(|&t| t != 0)
                    && lefts.iter().all(|l| l.iter().map(|&j| tau[j]).sum::<i64>() == 0)
                {
                    return Ok(Some(Witness { tau }));
                }
            }
            if !step_signed(&mut prefix, bound) {
                break;
            }
        }
    }
    Ok(None)
}

fn step_signed(values: &mut [i64], bound: i64) -> bool {
    for slot in values.iter_mut().rev() {
        if *slot < bound {
            *slot += 1;
            return true;
        }
        *slot = -bound;
    }
    false
}

/// True iff `tau` is nonzero, sums to zero overall, and sums to zero on every
/// left side of the cover.
pub fn validate_witness(w: &Witness, cover: &CoverSpec) -> Result<bool, WitnessError> {
    cover.validate()?;
    check_len(cover, w.tau.len())?;
    if w.tau.iter().all(|&t| t == 0) {
        return Ok(false);
    }
    if checked_sum(w.tau.iter().copied())? != 0 {
        return Ok(false);
    }
    for b in &cover.bicliques {
        if checked_sum(b.left.iter().map(|&v| w.tau[v - 1]))? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn checked_sum(mut values: impl Iterator<Item = i64>) -> Result<i128, WitnessError> {
    values.try_fold(0i128, |acc, v| {
        acc.checked_add(i128::from(v)).ok_or(WitnessError::Overflow)
    })
}

fn checked_mul(a: i128, b: i128) -> Result<i128, WitnessError> {
    a.checked_mul(b).ok_or(WitnessError::Overflow)
}

fn checked_add(a: i128, b: i128) -> Result<i128, WitnessError> {
    a.checked_add(b).ok_or(WitnessError::Overflow)
}

/// `sum_{u<v} tau_u tau_v`, by direct enumeration of pairs.
pub fn pairwise_product_sum(tau: &[i64]) -> Result<i128, WitnessError> {
    let mut total = 0i128;
    for (u, &a) in tau.iter().enumerate() {
        for &b in &tau[u + 1..] {
            total = checked_add(total, i128::from(a) * i128::from(b))?;
        }
    }
    Ok(total)
}

/// `sum_i (sum_{L_i} tau)(sum_{R_i} tau) - sum_{u<v} tau_u tau_v`.
///
/// The first term counts `tau_u tau_v` once per biclique containing `{u, v}`,
/// so this equals `sum_{u<v} (c_uv - 1) tau_u tau_v`: zero for an exact cover,
/// and `sum tau^2 / 2` for a valid witness.
pub fn quadratic_defect(tau: &[i64], cover: &CoverSpec) -> Result<i128, WitnessError> {
    cover.validate()?;
    check_len(cover, tau.len())?;
    let mut side_products = 0i128;
    for b in &cover.bicliques {
        let left = checked_sum(b.left.iter().map(|&v| tau[v - 1]))?;
        let right = checked_sum(b.right.iter().map(|&v| tau[v - 1]))?;
        side_products = checked_add(side_products, checked_mul(left, right)?)?;
    }
    side_products
        .checked_sub(pairwise_product_sum(tau)?)
        .ok_or(WitnessError::Overflow)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSource {
    Collision,
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Culprit {
    pub edge: [usize; 2],
    pub multiplicity: u32,
}

/// Field order is the wire format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub tau: Witness,
    pub defect: i128,
    pub culprit: Option<Culprit>,
    pub strategy: WitnessSource,
    pub seed: Option<u64>,
}

impl RefutationCertificate {
    /// Re-checks the certificate against a cover using only the witness
    /// checks and the two-sided defect formula.
    pub fn check(&self, cover: &CoverSpec) -> Result<bool, WitnessError> {
        if !validate_witness(&self.tau, cover)? {
            return Ok(false);
        }
        let defect = quadratic_defect(self.tau.tau(), cover)?;
        let norm = self.tau.square_norm()?;
        Ok(defect == self.defect && defect > 0 && 2 * defect == norm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization is infallible")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefuteConfig {
    pub search: SearchConfig,
    /// Fixed label range `k`; `None` escalates through 2, 4, 8, ... up to
    /// `max_label_range`.
    pub label_range: Option<u64>,
    pub max_label_range: u64,
    pub kernel_bound: u64,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig {
            search: SearchConfig::default(),
            label_range: None,
            max_label_range: 1 << 16,
            kernel_bound: 4,
        }
    }
}

impl RefuteConfig {
    fn label_ranges(&self) -> Vec<u64> {
        match self.label_range {
            Some(k) => vec![k],
            None => std::iter::successors(Some(2u64), |&k| k.checked_mul(2))
                .take_while(|&k| k <= self.max_label_range.max(2))
                .collect(),
        }
    }
}

/// A witness together with two equal-pattern labelings realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundWitness {
    pub witness: Witness,
    pub sigma1: Labeling,
    pub sigma2: Labeling,
    pub source: WitnessSource,
    pub seed: Option<u64>,
    pub examined: u64,
}

/// Collision search first, kernel enumeration as fallback. Kernel witnesses
/// are lifted to labelings `sigma1 = tau + s`, `sigma2 = s` with the smallest
/// constant shift `s` keeping both positive.
pub fn find_witness(
    cover: &CoverSpec,
    config: &RefuteConfig,
) -> Result<Option<FoundWitness>, WitnessError> {
    cover.validate()?;
    let mut examined = 0u64;
    for k in config.label_ranges() {
        let outcome = find_pattern_collision(cover, k, &config.search)?;
        examined += outcome.examined;
        if let Some((sigma1, sigma2)) = outcome.collision {
            let witness = witness_from_collision(&sigma1, &sigma2, cover)?;
            let seed = match config.search.strategy {
                SearchStrategy::Birthday => Some(config.search.seed),
                SearchStrategy::Exhaustive => None,
            };
            return Ok(Some(FoundWitness {
                witness,
                sigma1,
                sigma2,
                source: WitnessSource::Collision,
                seed,
                examined,
            }));
        }
    }
    let Some(witness) = witness_by_kernel_search(cover, config.kernel_bound)? else {
        return Ok(None);
    };
    let (sigma1, sigma2) = lift_to_labelings(&witness)?;
    Ok(Some(FoundWitness {
        witness,
        sigma1,
        sigma2,
        source: WitnessSource::Kernel,
        seed: None,
        examined,
    }))
}

fn lift_to_labelings(w: &Witness) -> Result<(Labeling, Labeling), WitnessError> {
    let min = w.tau.iter().copied().min().unwrap_or(0);
    let shift = 1i128.max(1 - i128::from(min));
    let values1: Vec<u64> = w
        .tau
        .iter()
        .map(|&t| u64::try_from(i128::from(t) + shift).map_err(|_| WitnessError::Overflow))
        .collect::<Result<_, _>>()?;
    let shift = u64::try_from(shift).map_err(|_| WitnessError::Overflow)?;
    let k = values1.iter().copied().max().unwrap_or(1).max(shift);
    let values2 = vec![shift; w.tau.len()];
    Ok((Labeling { values: values1, k }, Labeling { values: values2, k }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Certificate(RefutationCertificate),
    /// The cover has at least `n - 1` bicliques; nothing to refute by counting.
    Rejected { m: usize, n: usize },
}

/// Produces a certificate that an undersized cover is not an exact cover.
pub fn refute(cover: &CoverSpec, config: &RefuteConfig) -> Result<Refutation, WitnessError> {
    cover.validate()?;
    if cover.len() + 1 >= cover.n {
        return Ok(Refutation::Rejected { m: cover.len(), n: cover.n });
    }
    let found = find_witness(cover, config)?.ok_or(WitnessError::Exhausted {
        collision_budget: config.search.budget,
        kernel_bound: config.kernel_bound,
    })?;
    let defect = quadratic_defect(found.witness.tau(), cover)?;
    Ok(Refutation::Certificate(RefutationCertificate {
        culprit: first_culprit(cover)?,
        tau: found.witness,
        defect,
        strategy: found.source,
        seed: found.seed,
    }))
}

/// Lexicographically first pair whose multiplicity is not exactly one.
pub fn first_culprit(cover: &CoverSpec) -> Result<Option<Culprit>, WitnessError> {
    let table = edge_multiplicities(cover)?;
    let culprit = table
        .iter()
        .find(|&(_, c)| c != 1)
        .map(|(edge, multiplicity): (Edge, u32)| Culprit {
            edge: [edge.lo(), edge.hi()],
            multiplicity,
        });
    Ok(culprit)
}
