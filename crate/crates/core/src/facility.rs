//! MUFL, DKM and DFKM objectives and their swap neighbourhoods over a unified
//! instance representation.
//!
//! One instance holds a point set with client weights and a symmetric
//! rational distance matrix. For MUFL a subset of the points are facilities
//! with per-facility opening costs; every point is a client. For DKM/DFKM
//! every point is also a candidate center and a budget `K` replaces the
//! opening cost; distance entries are read as squared Euclidean distances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{parse_rat, rat_str, rat_to_f64, rat_uint, Rat};
use crate::satcore::Literal;

/// Which objective an instance carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Mufl,
    Dkm,
    Dfkm,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Mufl => write!(f, "mufl"),
            Kind::Dkm => write!(f, "dkm"),
            Kind::Dfkm => write!(f, "dfkm"),
        }
    }
}

impl FromStr for Kind {
    type Err = FacilityError;

    fn from_str(s: &str) -> Result<Self, FacilityError> {
        match s {
            "mufl" => Ok(Kind::Mufl),
            "dkm" => Ok(Kind::Dkm),
            "dfkm" => Ok(Kind::Dfkm),
            other => Err(FacilityError::Format(format!(
                "unknown instance kind `{other}`"
            ))),
        }
    }
}

/// Provenance tag for a point of a constructed instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointLabel {
    /// The point stands for a literal.
    Literal(Literal),
    /// The point stands for clause `clause` (0-based); `copy` distinguishes
    /// the doubled pair of a not-all-equal clause (1 = as stated, 2 = both
    /// literals negated).
    Clause { clause: usize, copy: Option<u8> },
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Literal(l) => write!(f, "{l}"),
            PointLabel::Clause { clause, copy: None } => write!(f, "b{}", clause + 1),
            PointLabel::Clause {
                clause,
                copy: Some(i),
            } => write!(f, "b{}.{}", clause + 1, i),
        }
    }
}

impl FromStr for PointLabel {
    type Err = FacilityError;

    fn from_str(s: &str) -> Result<Self, FacilityError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('b') {
            let (num, copy) = match rest.split_once('.') {
                Some((n, c)) => {
                    let copy: u8 = c.parse().map_err(|_| bad_label(s))?;
                    if copy != 1 && copy != 2 {
                        return Err(bad_label(s));
                    }
                    (n, Some(copy))
                }
                None => (rest, None),
            };
            let clause: usize = num.parse().map_err(|_| bad_label(s))?;
            if clause == 0 {
                return Err(bad_label(s));
            }
            return Ok(PointLabel::Clause {
                clause: clause - 1,
                copy,
            });
        }
        let lit: Literal = s.parse().map_err(|_| bad_label(s))?;
        Ok(PointLabel::Literal(lit))
    }
}

fn bad_label(s: &str) -> FacilityError {
    FacilityError::Format(format!("invalid point label `{s}`"))
}

#[derive(Debug, Error, PartialEq)]
pub enum FacilityError {
    #[error("operation requires a {expected} instance, found {found}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("solution must open at least one facility")]
    EmptySolution,
    #[error("point {point} is not a facility")]
    NotAFacility { point: usize },
    #[error("point index {point} out of range (instance has {n_points} points)")]
    PointOutOfRange { point: usize, n_points: usize },
    #[error("solution opens {got} points, the budget requires exactly {expected}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("instance carries no (or incomplete) reduction labels")]
    MissingLabels,
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("invalid instance file: {0}")]
    Format(String),
}

/// Symmetric nonnegative rational matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl DistMatrix {
    pub fn new(n: usize, entries: Vec<Rat>) -> Result<Self, FacilityError> {
        if entries.len() != n * n {
            return Err(FacilityError::Invalid(format!(
                "distance matrix has {} entries, expected {}",
                entries.len(),
                n * n
            )));
        }
        for i in 0..n {
            if !entries[i * n + i].is_zero() {
                return Err(FacilityError::Invalid(format!(
                    "distance matrix diagonal entry ({i},{i}) is nonzero"
                )));
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(FacilityError::Invalid(format!(
                        "distance matrix not symmetric at ({i},{j})"
                    )));
                }
                if entries[i * n + j] < Rat::zero() {
                    return Err(FacilityError::Invalid(format!(
                        "negative distance at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DistMatrix { n, entries })
    }

    /// Builds the matrix from a symmetric generator; `f(i,j)` is only called
    /// for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = vec![Rat::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                entries[i * n + j] = d.clone();
                entries[j * n + i] = d;
            }
        }
        DistMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    /// First triangle-inequality violation `d(i,k) > d(i,j) + d(j,k)`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if self.get(i, k) > &(self.get(i, j) + self.get(j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Float view, row-major rows.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| rat_to_f64(self.get(i, j))).collect())
            .collect()
    }
}

/// A set of open facility / center indices, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    open: Vec<usize>,
}

impl Solution {
    pub fn new(mut open: Vec<usize>) -> Self {
        open.sort_unstable();
        open.dedup();
        Solution { open }
    }

    pub fn open(&self) -> &[usize] {
        &self.open
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.open.binary_search(&point).is_ok()
    }

    /// Solution with `point` added.
    pub fn with(&self, point: usize) -> Self {
        let mut open = self.open.clone();
        if let Err(pos) = open.binary_search(&point) {
            open.insert(pos, point);
        }
        Solution { open }
    }

    /// Solution with `point` removed.
    pub fn without(&self, point: usize) -> Self {
        let mut open = self.open.clone();
        if let Ok(pos) = open.binary_search(&point) {
            open.remove(pos);
        }
        Solution { open }
    }

    /// Solution with `out` replaced by `inn`.
    pub fn swapped(&self, out: usize, inn: usize) -> Self {
        self.without(out).with(inn)
    }

    /// Canonical `i-j-k` label used in CSV output.
    pub fn label(&self) -> String {
        self.open
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Parses the `i-j-k` label form (also accepts commas).
    pub fn parse_label(s: &str) -> Result<Self, FacilityError> {
        let mut open = Vec::new();
        for tok in s.split(['-', ',']).filter(|t| !t.is_empty()) {
            let idx: usize = tok
                .trim()
                .parse()
                .map_err(|_| FacilityError::Format(format!("invalid solution index `{tok}`")))?;
            open.push(idx);
        }
        Ok(Solution::new(open))
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Row-stochastic membership weights of every client to every open center.
#[derive(Clone, Debug)]
pub struct MembershipMatrix {
    open: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl MembershipMatrix {
    pub fn open(&self) -> &[usize] {
        &self.open
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Membership of client `c` to the `j`-th open center.
    pub fn get(&self, c: usize, j: usize) -> f64 {
        self.rows[c][j]
    }

    /// Membership of client `c` to center point `o`, if `o` is open.
    pub fn to_center(&self, c: usize, o: usize) -> Option<f64> {
        let j = self.open.iter().position(|&p| p == o)?;
        Some(self.rows[c][j])
    }
}

/// Unified MUFL / DKM / DFKM instance.
#[derive(Clone, Debug, PartialEq)]
pub struct LocationInstance {
    kind: Kind,
    weights: Vec<u64>,
    dist: DistMatrix,
    facilities: Option<Vec<usize>>,
    opening_costs: Option<Vec<Rat>>,
    k: Option<usize>,
    labels: Option<Vec<PointLabel>>,
}

impl LocationInstance {
    pub fn new_mufl(
        weights: Vec<u64>,
        dist: DistMatrix,
        facilities: Vec<usize>,
        opening_costs: Vec<Rat>,
        labels: Option<Vec<PointLabel>>,
    ) -> Result<Self, FacilityError> {
        let n = dist.n();
        validate_common(&weights, &dist, &labels)?;
        if facilities.is_empty() {
            return Err(FacilityError::Invalid(
                "facility set must be nonempty".to_string(),
            ));
        }
        let mut sorted = facilities.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != facilities {
            return Err(FacilityError::Invalid(
                "facility indices must be sorted and distinct".to_string(),
            ));
        }
        if let Some(&max) = facilities.last() {
            if max >= n {
                return Err(FacilityError::PointOutOfRange {
                    point: max,
                    n_points: n,
                });
            }
        }
        if opening_costs.len() != facilities.len() {
            return Err(FacilityError::Invalid(format!(
                "{} opening costs for {} facilities",
                opening_costs.len(),
                facilities.len()
            )));
        }
        if opening_costs.iter().any(|f| f < &Rat::zero()) {
            return Err(FacilityError::Invalid(
                "opening costs must be nonnegative".to_string(),
            ));
        }
        Ok(LocationInstance {
            kind: Kind::Mufl,
            weights,
            dist,
            facilities: Some(facilities),
            opening_costs: Some(opening_costs),
            k: None,
            labels,
        })
    }

    pub fn new_discrete(
        kind: Kind,
        weights: Vec<u64>,
        dist: DistMatrix,
        k: usize,
        labels: Option<Vec<PointLabel>>,
    ) -> Result<Self, FacilityError> {
        if kind == Kind::Mufl {
            return Err(FacilityError::KindMismatch {
                expected: Kind::Dkm,
                found: kind,
            });
        }
        validate_common(&weights, &dist, &labels)?;
        if k == 0 || k > dist.n() {
            return Err(FacilityError::Invalid(format!(
                "budget K={k} out of range 1..={}",
                dist.n()
            )));
        }
        Ok(LocationInstance {
            kind,
            weights,
            dist,
            facilities: None,
            opening_costs: None,
            k: Some(k),
            labels,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n_points(&self) -> usize {
        self.dist.n()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, point: usize) -> u64 {
        self.weights[point]
    }

    pub fn dist(&self) -> &DistMatrix {
        &self.dist
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    /// Facility indices; for DKM/DFKM every point is a candidate center.
    pub fn candidate_points(&self) -> Vec<usize> {
        match &self.facilities {
            Some(f) => f.clone(),
            None => (0..self.n_points()).collect(),
        }
    }

    pub fn facilities(&self) -> Option<&[usize]> {
        self.facilities.as_deref()
    }

    /// Opening cost of facility point `o` (MUFL only).
    pub fn opening_cost(&self, o: usize) -> Result<&Rat, FacilityError> {
        let facilities = self
            .facilities
            .as_ref()
            .ok_or(FacilityError::KindMismatch {
                expected: Kind::Mufl,
                found: self.kind,
            })?;
        let pos = facilities
            .binary_search(&o)
            .map_err(|_| FacilityError::NotAFacility { point: o })?;
        Ok(&self.opening_costs.as_ref().unwrap()[pos])
    }

    pub fn labels(&self) -> Option<&[PointLabel]> {
        self.labels.as_deref()
    }

    pub fn label_of(&self, point: usize) -> Option<&PointLabel> {
        self.labels.as_ref().map(|l| &l[point])
    }

    /// Point carrying a given label.
    pub fn point_labeled(&self, label: &PointLabel) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Per-variable `[positive point, negative point]` pairs recovered from
    /// the labels; errors unless every variable `x1..xN` appears with both
    /// polarities.
    pub fn literal_pairs(&self) -> Result<Vec<[usize; 2]>, FacilityError> {
        let labels = self.labels.as_ref().ok_or(FacilityError::MissingLabels)?;
        let mut by_var: BTreeMap<usize, [Option<usize>; 2]> = BTreeMap::new();
        for (point, label) in labels.iter().enumerate() {
            if let PointLabel::Literal(lit) = label {
                let slot =
                    &mut by_var.entry(lit.var()).or_insert([None, None])[lit.is_negated() as usize];
                if slot.is_some() {
                    return Err(FacilityError::MissingLabels);
                }
                *slot = Some(point);
            }
        }
        let n = by_var.len();
        let mut pairs = Vec::with_capacity(n);
        for var in 0..n {
            match by_var.get(&var) {
                Some([Some(pos), Some(neg)]) => pairs.push([*pos, *neg]),
                _ => return Err(FacilityError::MissingLabels),
            }
        }
        if pairs.is_empty() {
            return Err(FacilityError::MissingLabels);
        }
        Ok(pairs)
    }

    /// Checks feasibility of a solution for this instance.
    pub fn validate_solution(&self, sol: &Solution) -> Result<(), FacilityError> {
        let n = self.n_points();
        for &p in sol.open() {
            if p >= n {
                return Err(FacilityError::PointOutOfRange {
                    point: p,
                    n_points: n,
                });
            }
        }
        match self.kind {
            Kind::Mufl => {
                if sol.is_empty() {
                    return Err(FacilityError::EmptySolution);
                }
                let facilities = self.facilities.as_ref().unwrap();
                for &p in sol.open() {
                    if facilities.binary_search(&p).is_err() {
                        return Err(FacilityError::NotAFacility { point: p });
                    }
                }
            }
            Kind::Dkm | Kind::Dfkm => {
                let k = self.k.unwrap();
                if sol.len() != k {
                    return Err(FacilityError::WrongCardinality {
                        expected: k,
                        got: sol.len(),
                    });
                }
            }
        }
        Ok(())
    }

    fn nearest_distance(&self, c: usize, sol: &Solution) -> Rat {
        sol.open()
            .iter()
            .map(|&o| self.dist.get(c, o))
            .min()
            .expect("nonempty solution")
            .clone()
    }

    /// Weighted nearest-center service cost over all clients; defined for any
    /// nonempty set of open points regardless of kind.
    pub fn service_cost(&self, sol: &Solution) -> Result<Rat, FacilityError> {
        if sol.is_empty() {
            return Err(FacilityError::EmptySolution);
        }
        let n = self.n_points();
        for &p in sol.open() {
            if p >= n {
                return Err(FacilityError::PointOutOfRange {
                    point: p,
                    n_points: n,
                });
            }
        }
        let mut total = Rat::zero();
        for c in 0..n {
            total += rat_uint(self.weights[c]) * self.nearest_distance(c, sol);
        }
        Ok(total)
    }

    /// MUFL objective: weighted service cost plus opening costs.
    pub fn mufl_cost(&self, sol: &Solution) -> Result<Rat, FacilityError> {
        self.expect_kind(Kind::Mufl)?;
        self.validate_solution(sol)?;
        let mut total = self.service_cost(sol)?;
        for &o in sol.open() {
            total += self.opening_cost(o)?.clone();
        }
        Ok(total)
    }

    /// DKM objective: weighted service cost under squared-Euclidean entries.
    pub fn dkm_cost(&self, sol: &Solution) -> Result<Rat, FacilityError> {
        self.expect_kind(Kind::Dkm)?;
        self.validate_solution(sol)?;
        self.service_cost(sol)
    }

    /// DFKM objective with optimal memberships substituted:
    /// `sum_{c not in O} w(c) / sum_{o in O} d(c,o)^{-1}`, exact.
    pub fn dfkm_cost(&self, sol: &Solution) -> Result<Rat, FacilityError> {
        self.expect_kind(Kind::Dfkm)?;
        self.validate_solution(sol)?;
        let mut total = Rat::zero();
        'clients: for c in 0..self.n_points() {
            if sol.contains(c) {
                continue;
            }
            let mut inv_sum = Rat::zero();
            for &o in sol.open() {
                let d = self.dist.get(c, o);
                if d.is_zero() {
                    // a center coincides with the client: zero cost share
                    continue 'clients;
                }
                inv_sum += d.recip();
            }
            total += rat_uint(self.weights[c]) / inv_sum;
        }
        Ok(total)
    }

    /// Kind-appropriate objective value.
    pub fn cost(&self, sol: &Solution) -> Result<Rat, FacilityError> {
        match self.kind {
            Kind::Mufl => self.mufl_cost(sol),
            Kind::Dkm => self.dkm_cost(sol),
            Kind::Dfkm => self.dfkm_cost(sol),
        }
    }

    /// Optimal memberships of every client to the open centers: inverse
    /// distances normalized per row; full membership split equally among
    /// zero-distance centers.
    pub fn optimal_memberships(&self, sol: &Solution) -> Result<MembershipMatrix, FacilityError> {
        self.validate_solution(sol)?;
        if sol.is_empty() {
            return Err(FacilityError::EmptySolution);
        }
        let open = sol.open().to_vec();
        let mut rows = Vec::with_capacity(self.n_points());
        for c in 0..self.n_points() {
            let dists: Vec<f64> = open
                .iter()
                .map(|&o| rat_to_f64(self.dist.get(c, o)))
                .collect();
            let zeros = dists.iter().filter(|d| **d == 0.0).count();
            let row: Vec<f64> = if zeros > 0 {
                dists
                    .iter()
                    .map(|&d| if d == 0.0 { 1.0 / zeros as f64 } else { 0.0 })
                    .collect()
            } else {
                let inv: Vec<f64> = dists.iter().map(|d| 1.0 / d).collect();
                let sum: f64 = inv.iter().sum();
                inv.iter().map(|v| v / sum).collect()
            };
            rows.push(row);
        }
        Ok(MembershipMatrix { open, rows })
    }

    /// All solutions reachable by a single move, in lexicographic
    /// (dropped index, added index) order with pure adds first.
    ///
    /// MUFL: adds, drops (never to the empty set) and swaps. DKM/DFKM:
    /// exactly the `|O| * (|C| - |O|)` swaps.
    pub fn swap_neighbors(&self, sol: &Solution) -> Result<Vec<Solution>, FacilityError> {
        self.validate_solution(sol)?;
        let candidates = self.candidate_points();
        let closed: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|p| !sol.contains(*p))
            .collect();
        let mut neighbors = Vec::new();
        if self.kind == Kind::Mufl {
            for &a in &closed {
                neighbors.push(sol.with(a));
            }
            for &o in sol.open() {
                if sol.len() > 1 {
                    neighbors.push(sol.without(o));
                }
                for &a in &closed {
                    neighbors.push(sol.swapped(o, a));
                }
            }
        } else {
            for &o in sol.open() {
                for &a in &closed {
                    neighbors.push(sol.swapped(o, a));
                }
            }
        }
        Ok(neighbors)
    }

    /// Whether `sol` opens exactly one of `x_n`/`!x_n` per labeled variable
    /// and nothing else.
    pub fn is_reasonable(&self, sol: &Solution) -> Result<bool, FacilityError> {
        let pairs = self.literal_pairs()?;
        if sol.len() != pairs.len() {
            return Ok(false);
        }
        Ok(pairs
            .iter()
            .all(|&[pos, neg]| sol.contains(pos) || sol.contains(neg)))
    }

    fn expect_kind(&self, expected: Kind) -> Result<(), FacilityError> {
        if self.kind != expected {
            return Err(FacilityError::KindMismatch {
                expected,
                found: self.kind,
            });
        }
        Ok(())
    }

    /// File representation without a reduction block.
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            kind: self.kind.to_string(),
            n_points: self.n_points(),
            weights: self.weights.clone(),
            dist: self.dist.entries().iter().map(rat_str).collect(),
            facility_indices: self.facilities.clone(),
            opening_costs: self
                .opening_costs
                .as_ref()
                .map(|v| v.iter().map(rat_str).collect()),
            k: self.k,
            labels: self
                .labels
                .as_ref()
                .map(|v| v.iter().map(|l| l.to_string()).collect()),
            reduction: None,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, FacilityError> {
        InstanceFile::from_json(text)?.to_instance()
    }
}

fn validate_common(
    weights: &[u64],
    dist: &DistMatrix,
    labels: &Option<Vec<PointLabel>>,
) -> Result<(), FacilityError> {
    let n = dist.n();
    if n == 0 {
        return Err(FacilityError::Invalid("instance has no points".to_string()));
    }
    if weights.len() != n {
        return Err(FacilityError::Invalid(format!(
            "{} weights for {} points",
            weights.len(),
            n
        )));
    }
    if weights.contains(&0) {
        return Err(FacilityError::Invalid(
            "client weights must be positive integers".to_string(),
        ));
    }
    if let Some(l) = labels {
        if l.len() != n {
            return Err(FacilityError::Invalid(format!(
                "{} labels for {} points",
                l.len(),
                n
            )));
        }
    }
    Ok(())
}

/// JSON file schema for instances; `reduction` is attached by the reduction
/// layer and ignored when reading a bare instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: String,
    pub n_points: usize,
    pub weights: Vec<u64>,
    /// Row-major rational entries, `p/q` or decimal strings.
    pub dist: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facility_indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_costs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
}

/// Construction metadata stored next to a reduced instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionBlock {
    /// Canonical `wsat2` text of the source instance.
    pub source_wsat2: String,
    /// FNV-1a 64 hash of `source_wsat2`, hex-encoded.
    pub source_file_hash: String,
    pub target_kind: String,
    #[serde(rename = "W")]
    pub w: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    pub label_map: LabelMapJson,
}

/// Point indices of the reduction: `literals[n] = [x_n point, !x_n point]`,
/// `clauses[m]` lists the point(s) built for source clause `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMapJson {
    pub literals: Vec<[usize; 2]>,
    pub clauses: Vec<Vec<usize>>,
}

impl InstanceFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FacilityError> {
        serde_json::from_str(text).map_err(|e| FacilityError::Format(e.to_string()))
    }

    /// Builds the instance, ignoring any reduction block.
    pub fn to_instance(&self) -> Result<LocationInstance, FacilityError> {
        let kind: Kind = self.kind.parse()?;
        if self.weights.len() != self.n_points {
            return Err(FacilityError::Format(format!(
                "{} weights for n_points={}",
                self.weights.len(),
                self.n_points
            )));
        }
        let mut entries = Vec::with_capacity(self.dist.len());
        for s in &self.dist {
            entries.push(parse_rat(s).map_err(|e| FacilityError::Format(e.to_string()))?);
        }
        let dist = DistMatrix::new(self.n_points, entries)
            .map_err(|e| FacilityError::Format(e.to_string()))?;
        let labels = match &self.labels {
            None => None,
            Some(ls) => {
                let mut parsed = Vec::with_capacity(ls.len());
                for l in ls {
                    parsed.push(l.parse()?);
                }
                Some(parsed)
            }
        };
        match kind {
            Kind::Mufl => {
                let facilities = self.facility_indices.clone().ok_or_else(|| {
                    FacilityError::Format("mufl instance requires facility_indices".to_string())
                })?;
                let costs_raw = self.opening_costs.as_ref().ok_or_else(|| {
                    FacilityError::Format("mufl instance requires opening_costs".to_string())
                })?;
                if self.k.is_some() {
                    return Err(FacilityError::Format(
                        "mufl instance must not carry a budget k".to_string(),
                    ));
                }
                let mut costs = Vec::with_capacity(costs_raw.len());
                for s in costs_raw {
                    costs.push(parse_rat(s).map_err(|e| FacilityError::Format(e.to_string()))?);
                }
                LocationInstance::new_mufl(self.weights.clone(), dist, facilities, costs, labels)
                    .map_err(|e| FacilityError::Format(e.to_string()))
            }
            Kind::Dkm | Kind::Dfkm => {
                let k = self.k.ok_or_else(|| {
                    FacilityError::Format(format!("{kind} instance requires a budget k"))
                })?;
                if self.facility_indices.is_some() || self.opening_costs.is_some() {
                    return Err(FacilityError::Format(format!(
                        "{kind} instance must not carry facilities or opening costs"
                    )));
                }
                LocationInstance::new_discrete(kind, self.weights.clone(), dist, k, labels)
                    .map_err(|e| FacilityError::Format(e.to_string()))
            }
        }
    }
}
