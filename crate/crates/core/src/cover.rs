//! Edge-disjoint biclique covers of the complete graph `K_n`.
//!
//! A [`CoverSpec`] is a claimed family of bicliques `(L_i, R_i)` on the vertex
//! set `[1, n]`. Nothing forces the family to actually cover `K_n`: undersized,
//! oversized, and overlapping families are all representable, and
//! [`verify_cover`] decides whether the claim holds.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoverError, Side};

/// A vertex of `K_n`, 1-based.
pub type VertexId = usize;

/// An unordered pair `{u, v}` of distinct vertices, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Builds the pair `{a, b}`. Panics if `a == b`.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn lo(&self) -> VertexId {
        self.u
    }

    pub fn hi(&self) -> VertexId {
        self.v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.u, self.v].serialize(serializer)
    }
}

/// A complete bipartite graph between two disjoint, nonempty vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Biclique {
    pub left: BTreeSet<VertexId>,
    pub right: BTreeSet<VertexId>,
}

impl Biclique {
    pub fn new<L, R>(left: L, right: R) -> Self
    where
        L: IntoIterator<Item = VertexId>,
        R: IntoIterator<Item = VertexId>,
    {
        Biclique {
            left: left.into_iter().collect(),
            right: right.into_iter().collect(),
        }
    }

    /// `|L| * |R|`, the number of edges the biclique contributes.
    pub fn edge_count(&self) -> u64 {
        self.left.len() as u64 * self.right.len() as u64
    }

    /// Checks the biclique against the vertex range `[1, n]`; `index` is the
    /// 0-based position used in error messages.
    fn check(&self, index: usize, n: usize) -> Result<(), CoverError> {
        for (side, set) in [(Side::Left, &self.left), (Side::Right, &self.right)] {
            if set.is_empty() {
                return Err(CoverError::EmptySide { biclique: index, side });
            }
            if let Some(&vertex) = set.iter().find(|&&v| v == 0 || v > n) {
                return Err(CoverError::VertexOutOfRange { biclique: index, vertex, n });
            }
        }
        if let Some(&vertex) = self.left.intersection(&self.right).next() {
            return Err(CoverError::Overlap { biclique: index, vertex });
        }
        Ok(())
    }
}

/// A claimed biclique cover of `K_n`. Biclique order is significant: it fixes
/// the entry order of labeling patterns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub n: usize,
    pub bicliques: Vec<Biclique>,
}

impl CoverSpec {
    /// Builds a cover and checks every structural invariant.
    pub fn new(n: usize, bicliques: Vec<Biclique>) -> Result<Self, CoverError> {
        let cover = CoverSpec { n, bicliques };
        cover.validate()?;
        Ok(cover)
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        if self.n < 2 {
            return Err(CoverError::TooFewVertices(self.n));
        }
        for (i, b) in self.bicliques.iter().enumerate() {
            b.check(i, self.n)?;
        }
        Ok(())
    }

    /// Number of bicliques, `m`.
    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }

    /// `n(n-1)/2`.
    pub fn complete_edge_count(&self) -> u64 {
        let n = self.n as u64;
        n * (n - 1) / 2
    }

    /// Prefix of the family holding the first `m` bicliques.
    pub fn truncated(&self, m: usize) -> CoverSpec {
        CoverSpec {
            n: self.n,
            bicliques: self.bicliques.iter().take(m).cloned().collect(),
        }
    }
}

/// Dense table of pair multiplicities over `K_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMultiplicities {
    n: usize,
    // Row-major strict upper triangle.
    counts: Vec<u32>,
}

impl EdgeMultiplicities {
    fn zeroed(n: usize) -> Self {
        EdgeMultiplicities { n, counts: vec![0; n * (n - 1) / 2] }
    }

    fn slot(&self, u: VertexId, v: VertexId) -> usize {
        let (a, b) = if u < v { (u - 1, v - 1) } else { (v - 1, u - 1) };
        // Pairs (a, b) with a < b, laid out row by row.
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiplicity of `{u, v}`. Panics if `u == v` or either endpoint is out
    /// of range.
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        assert!(u != v && (1..=self.n).contains(&u) && (1..=self.n).contains(&v));
        self.counts[self.slot(u, v)]
    }

    /// All pairs with their multiplicities (zeros included), in
    /// lexicographic pair order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        let n = self.n;
        (1..=n)
            .flat_map(move |u| (u + 1..=n).map(move |v| Edge::new(u, v)))
            .zip(self.counts.iter().copied())
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

/// Counts, for every pair `{u, v}`, how many bicliques contain it as an edge.
pub fn edge_multiplicities(cover: &CoverSpec) -> Result<EdgeMultiplicities, CoverError> {
    cover.validate()?;
    let mut table = EdgeMultiplicities::zeroed(cover.n);
    for b in &cover.bicliques {
        for &l in &b.left {
            for &r in &b.right {
                let slot = table.slot(l, r);
                table.counts[slot] += 1;
            }
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    pub edge: Edge,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub is_exact_cover: bool,
    pub uncovered: Vec<Edge>,
    pub overcovered: Vec<EdgeCount>,
    pub total_biclique_edges: u64,
}

/// Decides whether the family is an edge-disjoint cover of `K_n`.
pub fn verify_cover(cover: &CoverSpec) -> Result<VerificationReport, CoverError> {
    let table = edge_multiplicities(cover)?;
    let mut uncovered = Vec::new();
    let mut overcovered = Vec::new();
    for (edge, multiplicity) in table.iter() {
        match multiplicity {
            0 => uncovered.push(edge),
            1 => {}
            _ => overcovered.push(EdgeCount { edge, multiplicity }),
        }
    }
    Ok(VerificationReport {
        is_exact_cover: uncovered.is_empty() && overcovered.is_empty(),
        uncovered,
        overcovered,
        total_biclique_edges: cover.bicliques.iter().map(Biclique::edge_count).sum(),
    })
}

/// The stars `({i}, {i+1, ..., n})` for `i = 1..n-1`.
pub fn star_decomposition(n: usize) -> Result<CoverSpec, CoverError> {
    if n < 2 {
        return Err(CoverError::TooFewVertices(n));
    }
    let bicliques = (1..n).map(|i| Biclique::new([i], i + 1..=n)).collect();
    Ok(CoverSpec { n, bicliques })
}

/// Halving construction: the biclique between the lower `ceil(n/2)` vertices
/// and the rest, followed by the decompositions of each half (pre-order).
pub fn recursive_decomposition(n: usize) -> Result<CoverSpec, CoverError> {
    if n < 2 {
        return Err(CoverError::TooFewVertices(n));
    }
    let mut bicliques = Vec::with_capacity(n - 1);
    split_range(1, n, &mut bicliques);
    Ok(CoverSpec { n, bicliques })
}

fn split_range(lo: VertexId, hi: VertexId, out: &mut Vec<Biclique>) {
    let len = hi + 1 - lo;
    if len < 2 {
        return;
    }
    let mid = lo + len.div_ceil(2);
    out.push(Biclique::new(lo..mid, mid..=hi));
    split_range(lo, mid - 1, out);
    split_range(mid, hi, out);
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    n: usize,
    bicliques: Vec<RawBiclique>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBiclique {
    left: Vec<VertexId>,
    right: Vec<VertexId>,
}

/// Parses the canonical cover JSON format. Sides may be listed in any order
/// but must not repeat a vertex.
pub fn parse_cover(text: &[u8]) -> Result<CoverSpec, CoverError> {
    let raw: RawCover = serde_json::from_slice(text).map_err(|e| CoverError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut bicliques = Vec::with_capacity(raw.bicliques.len());
    for (index, b) in raw.bicliques.into_iter().enumerate() {
        let left = collect_side(index, Side::Left, b.left)?;
        let right = collect_side(index, Side::Right, b.right)?;
        bicliques.push(Biclique { left, right });
    }
    CoverSpec::new(raw.n, bicliques)
}

fn collect_side(
    biclique: usize,
    side: Side,
    vertices: Vec<VertexId>,
) -> Result<BTreeSet<VertexId>, CoverError> {
    let mut set = BTreeSet::new();
    for vertex in vertices {
        if !set.insert(vertex) {
            return Err(CoverError::DuplicateVertex { biclique, side, vertex });
        }
    }
    Ok(set)
}

/// Canonical compact JSON: keys in fixed order, sides ascending.
pub fn serialize_cover(cover: &CoverSpec) -> Vec<u8> {
    serde_json::to_vec(cover).expect("cover serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(n: usize, bicliques: &[(&[usize], &[usize])]) -> CoverSpec {
        let bicliques = bicliques
            .iter()
            .map(|(l, r)| Biclique::new(l.iter().copied(), r.iter().copied()))
            .collect();
        CoverSpec { n, bicliques }
    }

    #[test]
    fn single_edge_multiplicities() {
        let t = edge_multiplicities(&cover(3, &[(&[1], &[2])])).unwrap();
        assert_eq!(t.get(1, 2), 1);
        assert_eq!(t.get(1, 3), 0);
        assert_eq!(t.get(2, 3), 0);
        assert_eq!(t.get(2, 1), 1);
    }

    #[test]
    fn star_multiplicities_are_all_one() {
        let t = edge_multiplicities(&star_decomposition(4).unwrap()).unwrap();
        assert_eq!(t.iter().count(), 6);
        assert!(t.iter().all(|(_, c)| c == 1));
    }

    #[test]
    fn overlapping_stars() {
        let c = cover(3, &[(&[1], &[2, 3]), (&[2], &[1, 3])]);
        let t = edge_multiplicities(&c).unwrap();
        assert_eq!(t.get(1, 2), 2);
        assert_eq!(t.get(1, 3), 1);
        assert_eq!(t.get(2, 3), 1);

        let report = verify_cover(&c).unwrap();
        assert!(!report.is_exact_cover);
        assert!(report.uncovered.is_empty());
        assert_eq!(
            report.overcovered,
            vec![EdgeCount { edge: Edge::new(1, 2), multiplicity: 2 }]
        );
    }

    #[test]
    fn single_star_leaves_triangle() {
        let report = verify_cover(&cover(4, &[(&[1], &[2, 3, 4])])).unwrap();
        assert_eq!(
            report.uncovered,
            vec![Edge::new(2, 3), Edge::new(2, 4), Edge::new(3, 4)]
        );
        assert_eq!(report.total_biclique_edges, 3);
    }

    #[test]
    fn star_shapes() {
        assert_eq!(star_decomposition(2).unwrap(), cover(2, &[(&[1], &[2])]));
        assert_eq!(
            star_decomposition(4).unwrap(),
            cover(4, &[(&[1], &[2, 3, 4]), (&[2], &[3, 4]), (&[3], &[4])])
        );
        let big = star_decomposition(100).unwrap();
        assert_eq!(big.len(), 99);
        let report = verify_cover(&big).unwrap();
        assert!(report.is_exact_cover);
        assert_eq!(report.total_biclique_edges, 4950);
    }

    #[test]
    fn recursive_shapes() {
        assert_eq!(recursive_decomposition(2).unwrap(), cover(2, &[(&[1], &[2])]));
        assert_eq!(
            recursive_decomposition(4).unwrap(),
            cover(4, &[(&[1, 2], &[3, 4]), (&[1], &[2]), (&[3], &[4])])
        );
        let nine = recursive_decomposition(9).unwrap();
        assert_eq!(nine.len(), 8);
        assert!(verify_cover(&nine).unwrap().is_exact_cover);
    }

    #[test]
    fn constructions_reject_small_n() {
        assert_eq!(star_decomposition(1), Err(CoverError::TooFewVertices(1)));
        assert_eq!(recursive_decomposition(0), Err(CoverError::TooFewVertices(0)));
    }

    #[test]
    fn malformed_covers_name_the_biclique() {
        let overlap = cover(3, &[(&[1], &[2]), (&[1, 3], &[3])]);
        assert_eq!(
            edge_multiplicities(&overlap),
            Err(CoverError::Overlap { biclique: 1, vertex: 3 })
        );
        let out_of_range = cover(3, &[(&[4], &[2])]);
        assert_eq!(
            verify_cover(&out_of_range),
            Err(CoverError::VertexOutOfRange { biclique: 0, vertex: 4, n: 3 })
        );
        let empty = cover(3, &[(&[], &[2])]);
        assert_eq!(
            empty.validate(),
            Err(CoverError::EmptySide { biclique: 0, side: Side::Left })
        );
    }

    #[test]
    fn canonical_json() {
        let c = star_decomposition(2).unwrap();
        let bytes = serialize_cover(&c);
        assert_eq!(
            std::str::from_utf8(&bytes).unwrap(),
            r#"{"n":2,"bicliques":[{"left":[1],"right":[2]}]}"#
        );
        assert_eq!(parse_cover(&bytes).unwrap(), c);
    }

    #[test]
    fn parse_sorts_sides() {
        let c = parse_cover(br#"{"n":4,"bicliques":[{"left":[3,1],"right":[4,2]}]}"#).unwrap();
        assert_eq!(
            serialize_cover(&c),
            br#"{"n":4,"bicliques":[{"left":[1,3],"right":[2,4]}]}"#.to_vec()
        );
    }

    #[test]
    fn parse_errors() {
        let err = parse_cover(br#"{"n":3,"bicliques":[{"left":[1],"right":[1]}]}"#).unwrap_err();
        assert_eq!(err.to_string(), "left/right overlap in biclique 1");

        let err = parse_cover(br#"{"n":3,"bicliques":[{"left":[1]}]}"#).unwrap_err();
        assert!(matches!(err, CoverError::Json { .. }));
        assert!(err.to_string().contains("right"), "{err}");

        let err = parse_cover(b"{\"n\":3,").unwrap_err();
        assert!(matches!(err, CoverError::Json { line: 1, .. }));

        let err = parse_cover(br#"{"n":3,"bicliques":[{"left":[],"right":[1]}]}"#).unwrap_err();
        assert_eq!(err, CoverError::EmptySide { biclique: 0, side: Side::Left });

        let err = parse_cover(br#"{"n":3,"bicliques":[{"left":[0],"right":[1]}]}"#).unwrap_err();
        assert_eq!(err, CoverError::VertexOutOfRange { biclique: 0, vertex: 0, n: 3 });

        let err = parse_cover(br#"{"n":3,"bicliques":[{"left":[2,2],"right":[1]}]}"#).unwrap_err();
        assert_eq!(
            err,
            CoverError::DuplicateVertex { biclique: 0, side: Side::Left, vertex: 2 }
        );

        let err = parse_cover(br#"{"n":1,"bicliques":[]}"#).unwrap_err();
        assert_eq!(err, CoverError::TooFewVertices(1));
    }

    #[test]
    fn duplicate_bicliques_are_representable() {
        let c = cover(2, &[(&[1], &[2]), (&[2], &[1])]);
        let report = verify_cover(&c).unwrap();
        assert_eq!(report.overcovered[0].multiplicity, 2);
    }
}
