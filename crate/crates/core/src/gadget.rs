//! Gadget graphs built from part-size vectors.
//!
//! For size vectors `p` and `q` with equal totals `N`, the vertex set `W`
//! consists of parts `V_1..V_n` (sizes `p_i`) and `V_1'..V_n'` (sizes `q_i`).
//! `H` joins vertices of distinct parts on the same side; `H'` joins `V_i` to
//! `V_j'` for `i != j`. Edge counts of the two graphs agree exactly when
//! `p = q`, and a cover of `K_n` by bicliques induces coverings of both graphs
//! that balance whenever the labelings behind `p` and `q` share a pattern.
//!
//! Everything here materializes vertex and edge sets explicitly; closed forms
//! are provided alongside for cross-checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cover::{CoverSpec, VertexId};
use crate::error::{GadgetError, WitnessError};
use crate::witness::{
    find_witness, first_culprit, pattern_of, quadratic_defect, Culprit, Labeling,
    RefuteConfig, WitnessSource,
};

/// Part sizes `|V_i| = p_i` and `|V_i'| = q_i`, all positive, equal totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSizes {
    p: Vec<u64>,
    q: Vec<u64>,
}

impl PartSizes {
    pub fn new(p: Vec<u64>, q: Vec<u64>) -> Result<Self, GadgetError> {
        if p.len() != q.len() {
            return Err(GadgetError::LengthMismatch { p: p.len(), q: q.len() });
        }
        if p.is_empty() {
            return Err(GadgetError::NoParts);
        }
        for (which, sizes) in [("p", &p), ("q", &q)] {
            if let Some(index) = sizes.iter().position(|&s| s == 0) {
                return Err(GadgetError::EmptyPart { which, index });
            }
        }
        let total = |v: &[u64]| v.iter().try_fold(0u64, |acc, &x| acc.checked_add(x));
        let (p_total, q_total) = match (total(&p), total(&q)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(WitnessError::Overflow.into()),
        };
        if p_total != q_total {
            return Err(GadgetError::UnequalTotals { p_total, q_total });
        }
        Ok(PartSizes { p, q })
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn q(&self) -> &[u64] {
        &self.q
    }

    /// Number of part indices, `n`.
    pub fn parts(&self) -> usize {
        self.p.len()
    }

    /// `N = sum p_i = sum q_i`.
    pub fn total(&self) -> u64 {
        self.p.iter().sum()
    }

    fn size(&self, half: Half, part: usize) -> u64 {
        match half {
            Half::Unprimed => self.p[part - 1],
            Half::Primed => self.q[part - 1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Unprimed,
    Primed,
}

/// Copy `copy` (1-based) of part `part` (1-based) on one half of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GadgetVertex {
    pub half: Half,
    pub part: usize,
    pub copy: u64,
}

/// Unordered pair of gadget vertices, smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GadgetEdge(GadgetVertex, GadgetVertex);

impl GadgetEdge {
    pub fn new(a: GadgetVertex, b: GadgetVertex) -> Self {
        assert_ne!(a, b);
        if a < b {
            GadgetEdge(a, b)
        } else {
            GadgetEdge(b, a)
        }
    }

    pub fn endpoints(&self) -> (GadgetVertex, GadgetVertex) {
        (self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetEdges {
    pub vertices: Vec<GadgetVertex>,
    pub h_edges: BTreeSet<GadgetEdge>,
    pub h_prime_edges: BTreeSet<GadgetEdge>,
}

impl GadgetEdges {
    /// Same-half pairs missing from `H`: the cliques on each part.
    pub fn h_complement(&self) -> BTreeSet<GadgetEdge> {
        self.pairs()
            .filter(|e| e.0.half == e.1.half && !self.h_edges.contains(e))
            .collect()
    }

    /// Cross-half pairs missing from `H'`: the bicliques `V_i x V_i'`.
    pub fn h_prime_complement(&self) -> BTreeSet<GadgetEdge> {
        self.pairs()
            .filter(|e| e.0.half != e.1.half && !self.h_prime_edges.contains(e))
            .collect()
    }

    fn pairs(&self) -> impl Iterator<Item = GadgetEdge> + '_ {
        self.vertices.iter().enumerate().flat_map(move |(i, &a)| {
            self.vertices[i + 1..].iter().map(move |&b| GadgetEdge::new(a, b))
        })
    }
}

fn part_vertices(sizes: &PartSizes, half: Half, part: usize) -> impl Iterator<Item = GadgetVertex> {
    (1..=sizes.size(half, part)).map(move |copy| GadgetVertex { half, part, copy })
}

/// Materializes `W`, `H`, and `H'`.
pub fn build_gadgets(sizes: &PartSizes) -> GadgetEdges {
    let vertices: Vec<GadgetVertex> = [Half::Unprimed, Half::Primed]
        .into_iter()
        .flat_map(|half| (1..=sizes.parts()).flat_map(move |part| part_vertices(sizes, half, part)))
        .collect();
    let mut h_edges = BTreeSet::new();
    let mut h_prime_edges = BTreeSet::new();
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            if a.part == b.part {
                continue;
            }
            if a.half == b.half {
                h_edges.insert(GadgetEdge::new(a, b));
            } else {
                h_prime_edges.insert(GadgetEdge::new(a, b));
            }
        }
    }
    GadgetEdges { vertices, h_edges, h_prime_edges }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    pub h: u128,
    pub h_prime: u128,
}

fn square_sum(v: &[u64]) -> u128 {
    v.iter().map(|&x| u128::from(x) * u128::from(x)).sum()
}

/// `E(H) = (N^2 - sum p^2)/2 + (N^2 - sum q^2)/2`, `E(H') = N^2 - sum p_i q_i`.
pub fn edge_counts(sizes: &PartSizes) -> EdgeCounts {
    let n = u128::from(sizes.total());
    let nn = n * n;
    let cross: u128 = sizes
        .p
        .iter()
        .zip(&sizes.q)
        .map(|(&a, &b)| u128::from(a) * u128::from(b))
        .sum();
    EdgeCounts {
        h: (nn - square_sum(&sizes.p)) / 2 + (nn - square_sum(&sizes.q)) / 2,
        h_prime: nn - cross,
    }
}

/// `E(H') - E(H)`, which equals `sum (p_i - q_i)^2 / 2`.
pub fn edge_gap(sizes: &PartSizes) -> u128 {
    let counts = edge_counts(sizes);
    counts
        .h_prime
        .checked_sub(counts.h)
        .expect("E(H') >= E(H) for equal totals")
}

/// Components of the complements: cliques `K_{p_i}`, `K_{q_i}` (complement of
/// `H` in two copies of `K_N`) and bicliques `K_{p_i,q_i}` (complement of `H'`
/// in `K_{N,N}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementComponents {
    pub cliques: Vec<u64>,
    pub bicliques: Vec<(u64, u64)>,
}

fn choose2(x: u128) -> u128 {
    x * x.saturating_sub(1) / 2
}

impl ComplementComponents {
    pub fn clique_edges(&self) -> u128 {
        self.cliques.iter().map(|&c| choose2(u128::from(c))).sum()
    }

    pub fn biclique_edges(&self) -> u128 {
        self.bicliques
            .iter()
            .map(|&(a, b)| u128::from(a) * u128::from(b))
            .sum()
    }

    /// `clique_edges = 2 C(N,2) - E(H)` and `biclique_edges = N^2 - E(H')`.
    pub fn accounting_holds(&self, sizes: &PartSizes) -> bool {
        let n = u128::from(sizes.total());
        let counts = edge_counts(sizes);
        self.clique_edges() + counts.h == 2 * choose2(n)
            && self.biclique_edges() + counts.h_prime == n * n
    }
}

pub fn complement_components(sizes: &PartSizes) -> ComplementComponents {
    ComplementComponents {
        cliques: sizes.p.iter().chain(&sizes.q).copied().collect(),
        bicliques: sizes.p.iter().copied().zip(sizes.q.iter().copied()).collect(),
    }
}

/// Which clique an image edge lives in: `K_p` (the smaller) or `K_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CliqueTag {
    Kp,
    Kq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TaggedEdge {
    pub clique: CliqueTag,
    pub a: u64,
    pub b: u64,
}

impl TaggedEdge {
    fn new(clique: CliqueTag, x: u64, y: u64) -> Self {
        TaggedEdge { clique, a: x.min(y), b: x.max(y) }
    }
}

/// The map from `K_{p,q}` minus its "diagonal" pairs into `K_p + K_q`:
/// `(i, j)` with `i < j <= p` goes to `ij` in `K_p`, everything else to `ij`
/// in `K_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionMap {
    pub p: u64,
    pub q: u64,
    /// Set when the caller passed the larger size first; `p`/`q` here are
    /// normalized and [`BijectionMap::caller_clique`] translates tags back.
    pub swapped: bool,
    pub entries: Vec<((u64, u64), TaggedEdge)>,
}

impl BijectionMap {
    /// Accepts sizes in either order.
    pub fn normalized(p: u64, q: u64) -> Result<Self, GadgetError> {
        if p <= q {
            clique_union_bijection(p, q)
        } else {
            let mut map = clique_union_bijection(q, p)?;
            map.swapped = true;
            Ok(map)
        }
    }

    pub fn domain_size(&self) -> usize {
        self.entries.len()
    }

    pub fn image(&self) -> BTreeSet<TaggedEdge> {
        self.entries.iter().map(|&(_, e)| e).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.entries.len()
    }

    /// Edges of `K_p + K_q` not in the image, found by enumerating the whole
    /// codomain.
    pub fn unhit_edges(&self) -> Vec<TaggedEdge> {
        let image = self.image();
        let clique = |tag, size: u64| {
            (1..=size).flat_map(move |a| (a + 1..=size).map(move |b| TaggedEdge::new(tag, a, b)))
        };
        clique(CliqueTag::Kp, self.p)
            .chain(clique(CliqueTag::Kq, self.q))
            .filter(|e| !image.contains(e))
            .collect()
    }

    /// `E(K_p) + E(K_q)`.
    pub fn codomain_size(&self) -> u128 {
        choose2(u128::from(self.p)) + choose2(u128::from(self.q))
    }

    /// Whether `pq = E(K_p) + E(K_q) + p`.
    pub fn equality_holds(&self) -> bool {
        u128::from(self.p) * u128::from(self.q) == self.codomain_size() + u128::from(self.p)
    }

    /// Name of the caller's size parameter owning a tag.
    pub fn caller_clique(&self, tag: CliqueTag) -> &'static str {
        match (tag, self.swapped) {
            (CliqueTag::Kp, false) | (CliqueTag::Kq, true) => "p",
            (CliqueTag::Kq, false) | (CliqueTag::Kp, true) => "q",
        }
    }
}

pub fn clique_union_bijection(p: u64, q: u64) -> Result<BijectionMap, GadgetError> {
    if p < 1 || p > q {
        return Err(GadgetError::BijectionRange { p, q });
    }
    let mut entries = Vec::new();
    for i in 1..=p {
        for j in (1..=q).filter(|&j| j != i) {
            let tag = if i < j && j <= p { CliqueTag::Kp } else { CliqueTag::Kq };
            entries.push(((i, j), TaggedEdge::new(tag, i, j)));
        }
    }
    Ok(BijectionMap { p, q, swapped: false, entries })
}

/// Part sizes `p_i = sigma1(i)`, `q_i = sigma2(i)` from two labelings with the
/// same pattern under `cover`.
pub fn cover_induced_gadget(
    cover: &CoverSpec,
    sigma1: &Labeling,
    sigma2: &Labeling,
) -> Result<PartSizes, GadgetError> {
    let a = pattern_of(sigma1, cover)?;
    let b = pattern_of(sigma2, cover)?;
    if let Some(entry) = a.0.iter().zip(&b.0).position(|(x, y)| x != y) {
        return Err(WitnessError::PatternMismatch { entry }.into());
    }
    PartSizes::new(sigma1.values().to_vec(), sigma2.values().to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BicliqueBalance {
    pub left_p: u128,
    pub left_q: u128,
    pub right_p: u128,
    pub right_q: u128,
    /// `L R + L' R'`: edges of the two bipartite graphs covering part of `H`.
    pub top: u128,
    /// `L R' + L' R`: edges of the two covering part of `H'`.
    pub bottom: u128,
}

/// Edge totals of the four gadget bicliques induced by biclique `index`
/// (0-based).
pub fn biclique_balance(
    cover: &CoverSpec,
    sizes: &PartSizes,
    index: usize,
) -> Result<BicliqueBalance, GadgetError> {
    cover.validate().map_err(WitnessError::from)?;
    check_parts(cover, sizes)?;
    let b = cover
        .bicliques
        .get(index)
        .ok_or(GadgetError::BicliqueIndex { index, len: cover.len() })?;
    let side_sum = |set: &BTreeSet<VertexId>, v: &[u64]| -> u128 {
        set.iter().map(|&x| u128::from(v[x - 1])).sum()
    };
    let (left_p, left_q) = (side_sum(&b.left, &sizes.p), side_sum(&b.left, &sizes.q));
    let (right_p, right_q) = (side_sum(&b.right, &sizes.p), side_sum(&b.right, &sizes.q));
    Ok(BicliqueBalance {
        left_p,
        left_q,
        right_p,
        right_q,
        top: left_p * right_p + left_q * right_q,
        bottom: left_p * right_q + left_q * right_p,
    })
}

fn check_parts(cover: &CoverSpec, sizes: &PartSizes) -> Result<(), GadgetError> {
    if sizes.parts() != cover.n {
        return Err(WitnessError::LengthMismatch { expected: cover.n, found: sizes.parts() }.into());
    }
    Ok(())
}

/// Multiplicity with which the cover-induced bipartite graphs hit each pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub h: BTreeMap<GadgetEdge, u32>,
    pub h_prime: BTreeMap<GadgetEdge, u32>,
    /// Explicit `(top, bottom)` edge counts per biclique.
    pub per_biclique: Vec<(u64, u64)>,
}

/// For each biclique `(A, B)` builds `(V_A, V_B)` and `(V'_A, V'_B)` as a
/// covering of `H`, and `(V_A, V'_B)` and `(V'_A, V_B)` as a covering of `H'`.
pub fn cover_decomposition(
    cover: &CoverSpec,
    sizes: &PartSizes,
) -> Result<Decomposition, GadgetError> {
    cover.validate().map_err(WitnessError::from)?;
    check_parts(cover, sizes)?;
    let side = |set: &BTreeSet<VertexId>, half| -> Vec<GadgetVertex> {
        set.iter().flat_map(|&v| part_vertices(sizes, half, v)).collect()
    };
    let mut out = Decomposition::default();
    for b in &cover.bicliques {
        let (a_u, a_p) = (side(&b.left, Half::Unprimed), side(&b.left, Half::Primed));
        let (b_u, b_p) = (side(&b.right, Half::Unprimed), side(&b.right, Half::Primed));
        let top = add_biclique(&mut out.h, &a_u, &b_u) + add_biclique(&mut out.h, &a_p, &b_p);
        let bottom =
            add_biclique(&mut out.h_prime, &a_u, &b_p) + add_biclique(&mut out.h_prime, &a_p, &b_u);
        out.per_biclique.push((top, bottom));
    }
    Ok(out)
}

fn add_biclique(
    target: &mut BTreeMap<GadgetEdge, u32>,
    left: &[GadgetVertex],
    right: &[GadgetVertex],
) -> u64 {
    let edges: BTreeSet<GadgetEdge> = left
        .iter()
        .flat_map(|&a| right.iter().map(move |&b| GadgetEdge::new(a, b)))
        .collect();
    for &e in &edges {
        *target.entry(e).or_default() += 1;
    }
    edges.len() as u64
}

/// How a covering multiset compares with a target edge set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoverageAccounting {
    /// Target edges never covered.
    pub missing: usize,
    /// Target edges covered more than once.
    pub overcovered: usize,
    /// Covered pairs that are not target edges.
    pub extraneous: usize,
}

impl CoverageAccounting {
    pub fn is_exact(&self) -> bool {
        self.missing == 0 && self.overcovered == 0 && self.extraneous == 0
    }
}

pub fn account(covering: &BTreeMap<GadgetEdge, u32>, target: &BTreeSet<GadgetEdge>) -> CoverageAccounting {
    let mut acc = CoverageAccounting::default();
    for e in target {
        match covering.get(e).copied().unwrap_or(0) {
            0 => acc.missing += 1,
            1 => {}
            _ => acc.overcovered += 1,
        }
    }
    acc.extraneous = covering.keys().filter(|e| !target.contains(e)).count();
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceRow {
    /// 1-based biclique index.
    pub biclique: usize,
    pub top: u64,
    pub bottom: u64,
}

/// The gadget argument run against an undersized cover, with every count
/// taken from explicit edge sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContradictionReport {
    pub n: usize,
    pub m: usize,
    pub sigma1: Vec<u64>,
    pub sigma2: Vec<u64>,
    pub source: WitnessSource,
    pub seed: Option<u64>,
    pub tau: Vec<i64>,
    pub sizes: PartSizes,
    pub total: u64,
    pub balances: Vec<BalanceRow>,
    pub all_balanced: bool,
    pub top_total: u64,
    pub bottom_total: u64,
    pub h_edges: u64,
    pub h_prime_edges: u64,
    pub edge_gap: u64,
    /// `sum (p_i - q_i)^2 / 2`, for comparison with `edge_gap`.
    pub closed_form_gap: u128,
    pub h_coverage: CoverageAccounting,
    pub h_prime_coverage: CoverageAccounting,
    pub defect: i128,
    pub culprit: Option<Culprit>,
}

/// Runs the full pipeline: find two labelings with equal patterns, build the
/// induced gadgets, show every biclique balances, measure the actual edge gap,
/// and locate the pair where the cover fails.
pub fn contradiction_demo(
    cover: &CoverSpec,
    config: &RefuteConfig,
) -> Result<ContradictionReport, GadgetError> {
    cover.validate().map_err(WitnessError::from)?;
    if cover.len() + 1 >= cover.n {
        return Err(GadgetError::Rejected { m: cover.len(), n: cover.n });
    }
    let found = find_witness(cover, config)?.ok_or(WitnessError::Exhausted {
        collision_budget: config.search.budget,
        kernel_bound: config.kernel_bound,
    })?;
    let sizes = cover_induced_gadget(cover, &found.sigma1, &found.sigma2)?;
    let gadgets = build_gadgets(&sizes);
    let decomposition = cover_decomposition(cover, &sizes)?;

    let balances: Vec<BalanceRow> = decomposition
        .per_biclique
        .iter()
        .enumerate()
        .map(|(i, &(top, bottom))| BalanceRow { biclique: i + 1, top, bottom })
        .collect();
    let h_edges = gadgets.h_edges.len() as u64;
    let h_prime_edges = gadgets.h_prime_edges.len() as u64;
    let closed_form_gap = sizes
        .p
        .iter()
        .zip(&sizes.q)
        .map(|(&a, &b)| {
            let d = u128::from(a.abs_diff(b));
            d * d
        })
        .sum::<u128>()
        / 2;

    Ok(ContradictionReport {
        n: cover.n,
        m: cover.len(),
        sigma1: found.sigma1.values().to_vec(),
        sigma2: found.sigma2.values().to_vec(),
        source: found.source,
        seed: found.seed,
        tau: found.witness.tau().to_vec(),
        total: sizes.total(),
        all_balanced: balances.iter().all(|r| r.top == r.bottom),
        top_total: balances.iter().map(|r| r.top).sum(),
        bottom_total: balances.iter().map(|r| r.bottom).sum(),
        balances,
        h_edges,
        h_prime_edges,
        edge_gap: h_prime_edges
            .checked_sub(h_edges)
            .expect("E(H') >= E(H) for equal totals"),
        closed_form_gap,
        h_coverage: account(&decomposition.h, &gadgets.h_edges),
        h_prime_coverage: account(&decomposition.h_prime, &gadgets.h_prime_edges),
        defect: quadratic_defect(found.witness.tau(), cover)?,
        culprit: first_culprit(cover)?,
        sizes,
    })
}

impl fmt::Display for ContradictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(f, "cover: n = {}, m = {} bicliques", self.n, self.m)?;
        writeln!(
            f,
            "labelings with equal patterns ({:?}): sigma1 = ({}), sigma2 = ({})",
            self.source,
            list(&self.sigma1),
            list(&self.sigma2)
        )?;
        writeln!(
            f,
            "part sizes: p = ({}), q = ({}), N = {}",
            list(self.sizes.p()),
            list(self.sizes.q()),
            self.total
        )?;
        for row in &self.balances {
            writeln!(
                f,
                "  biclique {}: top = {}, bottom = {}{}",
                row.biclique,
                row.top,
                row.bottom,
                if row.top == row.bottom { "" } else { "  (unbalanced)" }
            )?;
        }
        writeln!(
            f,
            "induced coverings: {} edges toward H, {} toward H'",
            self.top_total, self.bottom_total
        )?;
        writeln!(
            f,
            "an exact cover would make these coverings exact, forcing E(H) = E(H')"
        )?;
        writeln!(
            f,
            "explicit graphs: E(H) = {}, E(H') = {}, gap = {} (sum (p-q)^2 / 2 = {})",
            self.h_edges, self.h_prime_edges, self.edge_gap, self.closed_form_gap
        )?;
        writeln!(
            f,
            "covering of H: {} missing, {} overcovered, {} extraneous",
            self.h_coverage.missing, self.h_coverage.overcovered, self.h_coverage.extraneous
        )?;
        writeln!(
            f,
            "covering of H': {} missing, {} overcovered, {} extraneous",
            self.h_prime_coverage.missing,
            self.h_prime_coverage.overcovered,
            self.h_prime_coverage.extraneous
        )?;
        write!(f, "quadratic defect = {}; ", self.defect)?;
        match &self.culprit {
            Some(c) => writeln!(
                f,
                "not an exact cover: edge {{{},{}}} has multiplicity {}",
                c.edge[0], c.edge[1], c.multiplicity
            ),
            None => writeln!(f, "every edge has multiplicity 1"),
        }
    }
}
