//! Constructions turning a SAT instance into a MUFL / DKM / DFKM instance,
//! with the solution mappings between the two sides.
//!
//! All three constructions share the same point layout: two literal points
//! per variable (`x_n` at `2n`, `!x_n` at `2n+1`) followed by one point per
//! clause. A literal sits at distance 1 from its negation; a clause point is
//! nearest to the literals it contains, slightly farther from their
//! negations, and every remaining pair sits at the common large distance.
//! Literal points carry the heavy weight `W`, clause points the clause
//! weight.

use num_traits::One;
use thiserror::Error;

use crate::facility::{
    DistMatrix, FacilityError, InstanceFile, Kind, LabelMapJson, LocationInstance, PointLabel,
    ReductionBlock, Solution,
};
use crate::rational::{parse_rat, rat, rat_int, rat_str, rat_uint, Rat};
use crate::satcore::{Assignment, Literal, Mode, SatError, SatInstance};

#[derive(Debug, Error, PartialEq)]
pub enum ReduceError {
    #[error("reduction requires a {expected} instance, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("reduction requires at least one clause")]
    EmptyClauseSet,
    #[error("parameter c must satisfy 1 < c < 2, got {0}")]
    COutOfRange(String),
    #[error("constant overflow: {0}")]
    Overflow(String),
    #[error("assignment has {got} bits but the source has {want} variables")]
    LengthMismatch { want: usize, got: usize },
    #[error("invalid artifact: {0}")]
    Format(String),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Facility(#[from] FacilityError),
}

/// The numeric constants a construction fixes.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionConstants {
    /// Literal-point weight `W`.
    pub w: u64,
    /// Uniform opening cost (MUFL only), always `2W`.
    pub opening_cost: Option<Rat>,
    /// Center budget (DKM/DFKM only), always `N`.
    pub k: Option<usize>,
    /// Distance perturbation (DKM/DFKM only).
    pub epsilon: Option<Rat>,
    /// Clause-to-negated-literal stretch factor (DKM/DFKM only).
    pub c: Option<Rat>,
}

/// Which point realizes which source object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    /// `literals[n] = [point of x_n, point of !x_n]`.
    pub literals: Vec<[usize; 2]>,
    /// `clauses[m]` = point(s) built for source clause `m` (two for DFKM).
    pub clauses: Vec<Vec<usize>>,
}

/// A source instance, its constructed target, and the mapping data.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionArtifact {
    pub source: SatInstance,
    pub target: LocationInstance,
    pub constants: ReductionConstants,
    pub label_map: LabelMap,
}

/// Literal-point weight for the MUFL and DKM constructions: `M * w_max`.
pub fn mufl_weight(num_clauses: usize, max_weight: u64) -> Result<u64, ReduceError> {
    (num_clauses as u64)
        .checked_mul(max_weight)
        .ok_or_else(|| ReduceError::Overflow("M * w_max exceeds u64".to_string()))
}

/// DKM distance perturbation: `1 / (4N + 2M)`.
pub fn dkm_epsilon(num_vars: usize, num_clauses: usize) -> Rat {
    rat(1, (4 * num_vars + 2 * num_clauses) as i64)
}

/// DFKM distance perturbation over the doubled clause set:
/// `min(1/(4N+2M), (M-1)/(9N^2 M))`.
pub fn dfkm_epsilon(num_vars: usize, doubled_clauses: usize) -> Rat {
    let n = num_vars as i64;
    let m = doubled_clauses as i64;
    let a = rat(1, 4 * n + 2 * m);
    let b = rat(m - 1, 9 * n * n * m);
    a.min(b)
}

/// DFKM literal-point weight over the doubled clause set: `4N^2 M w_max`.
pub fn dfkm_weight(
    num_vars: usize,
    doubled_clauses: usize,
    max_weight: u64,
) -> Result<u64, ReduceError> {
    4u64.checked_mul((num_vars * num_vars) as u64)
        .and_then(|v| v.checked_mul(doubled_clauses as u64))
        .and_then(|v| v.checked_mul(max_weight))
        .ok_or_else(|| ReduceError::Overflow("4 N^2 M w_max exceeds u64".to_string()))
}

fn require_mode(inst: &SatInstance, expected: Mode) -> Result<(), ReduceError> {
    if inst.mode() != expected {
        return Err(ReduceError::ModeMismatch {
            expected,
            found: inst.mode(),
        });
    }
    Ok(())
}

fn require_clauses(inst: &SatInstance) -> Result<(), ReduceError> {
    if inst.num_clauses() == 0 {
        return Err(ReduceError::EmptyClauseSet);
    }
    Ok(())
}

fn check_c(c: &Rat) -> Result<(), ReduceError> {
    if *c <= Rat::one() || *c >= rat_int(2) {
        return Err(ReduceError::COutOfRange(rat_str(c)));
    }
    Ok(())
}

/// The literal point layout shared by every construction: `x_n` at `2n`,
/// `!x_n` at `2n+1`.
fn point_literal(point: usize) -> Literal {
    if point.is_multiple_of(2) {
        Literal::positive(point / 2)
    } else {
        Literal::negative(point / 2)
    }
}

/// Distance from a literal point to a clause point with effective literal
/// set `clause`: `near` when contained, `far` when the negation is
/// contained, `other` otherwise.
fn clause_literal_distance(
    lit: Literal,
    clause: &[Literal; 2],
    near: &Rat,
    far: &Rat,
    other: &Rat,
) -> Rat {
    if clause.contains(&lit) {
        near.clone()
    } else if clause.contains(&lit.complement()) {
        far.clone()
    } else {
        other.clone()
    }
}

/// Builds the distance matrix for `num_vars` variables and the given
/// effective clause literal sets, using the supplied distance ladder.
fn build_distances(
    num_vars: usize,
    clauses: &[[Literal; 2]],
    near: Rat,
    far: Rat,
    other: Rat,
) -> DistMatrix {
    let lit_points = 2 * num_vars;
    let n = lit_points + clauses.len();
    DistMatrix::from_fn(n, |i, j| {
        match (i < lit_points, j < lit_points) {
            (true, true) => {
                if i / 2 == j / 2 {
                    rat_int(1) // a literal and its negation
                } else {
                    other.clone()
                }
            }
            (true, false) => clause_literal_distance(
                point_literal(i),
                &clauses[j - lit_points],
                &near,
                &far,
                &other,
            ),
            (false, true) => clause_literal_distance(
                point_literal(j),
                &clauses[i - lit_points],
                &near,
                &far,
                &other,
            ),
            (false, false) => other.clone(),
        }
    })
}

fn literal_labels(num_vars: usize) -> Vec<PointLabel> {
    (0..2 * num_vars)
        .map(|p| PointLabel::Literal(point_literal(p)))
        .collect()
}

fn base_label_map(num_vars: usize, clause_points: Vec<Vec<usize>>) -> LabelMap {
    LabelMap {
        literals: (0..num_vars).map(|n| [2 * n, 2 * n + 1]).collect(),
        clauses: clause_points,
    }
}

/// Maps a standard Max-2-SAT instance to a metric facility-location
/// instance: distances 1, 4/3, 5/3 and 2, literal weight `W = M w_max`,
/// uniform opening cost `2W`.
pub fn reduce_sat_to_mufl(inst: &SatInstance) -> Result<ReductionArtifact, ReduceError> {
    require_mode(inst, Mode::Std)?;
    require_clauses(inst)?;
    let n = inst.num_vars();
    let m = inst.num_clauses();
    let w = mufl_weight(m, inst.max_weight())?;
    let dist = build_distances(n, inst.clauses(), rat(4, 3), rat(5, 3), rat_int(2));
    let mut weights = vec![w; 2 * n];
    weights.extend(inst.weights().iter().copied());
    let mut labels = literal_labels(n);
    labels.extend((0..m).map(|mm| PointLabel::Clause {
        clause: mm,
        copy: None,
    }));
    let opening = rat_uint(2 * w);
    let target = LocationInstance::new_mufl(
        weights,
        dist,
        (0..2 * n).collect(),
        vec![opening.clone(); 2 * n],
        Some(labels),
    )?;
    Ok(ReductionArtifact {
        source: inst.clone(),
        target,
        constants: ReductionConstants {
            w,
            opening_cost: Some(opening),
            k: None,
            epsilon: None,
            c: None,
        },
        label_map: base_label_map(n, (0..m).map(|mm| vec![2 * n + mm]).collect()),
    })
}

/// Maps a standard Max-2-SAT instance to a discrete K-means instance:
/// distances 1, 1+e, 1+ce and 1+2e with `e = 1/(4N+2M)`, budget `K = N`.
pub fn reduce_sat_to_dkm(inst: &SatInstance, c: &Rat) -> Result<ReductionArtifact, ReduceError> {
    require_mode(inst, Mode::Std)?;
    require_clauses(inst)?;
    check_c(c)?;
    let n = inst.num_vars();
    let m = inst.num_clauses();
    let w = mufl_weight(m, inst.max_weight())?;
    let eps = dkm_epsilon(n, m);
    let one = Rat::one();
    let dist = build_distances(
        n,
        inst.clauses(),
        &one + &eps,
        &one + c * &eps,
        &one + rat_int(2) * &eps,
    );
    let mut weights = vec![w; 2 * n];
    weights.extend(inst.weights().iter().copied());
    let mut labels = literal_labels(n);
    labels.extend((0..m).map(|mm| PointLabel::Clause {
        clause: mm,
        copy: None,
    }));
    let target = LocationInstance::new_discrete(Kind::Dkm, weights, dist, n, Some(labels))?;
    Ok(ReductionArtifact {
        source: inst.clone(),
        target,
        constants: ReductionConstants {
            w,
            opening_cost: None,
            k: Some(n),
            epsilon: Some(eps),
            c: Some(c.clone()),
        },
        label_map: base_label_map(n, (0..m).map(|mm| vec![2 * n + mm]).collect()),
    })
}

/// Doubles every clause of a not-all-equal instance: clause `m` yields the
/// pair `b_m^1 = {x_o, x_p}` and `b_m^2 = {!x_o, !x_p}` with the same
/// weight. Both satisfy exactly when the two variables differ, so the pair
/// is stored positive; the construction treats the second copy of each pair
/// (odd index) with negated literals when placing distances.
pub fn double_clauses(inst: &SatInstance) -> Result<SatInstance, ReduceError> {
    require_mode(inst, Mode::Nae)?;
    let mut clauses = Vec::with_capacity(2 * inst.num_clauses());
    let mut weights = Vec::with_capacity(2 * inst.num_clauses());
    for (clause, &w) in inst.clauses().iter().zip(inst.weights()) {
        clauses.push(*clause);
        clauses.push(*clause);
        weights.push(w);
        weights.push(w);
    }
    Ok(SatInstance::new(
        inst.num_vars(),
        clauses,
        weights,
        Mode::Nae,
    )?)
}

/// Maps a positive NAE-Max-2-SAT instance to a discrete fuzzy K-means
/// instance over the doubled clause set: `e = min(1/(4N+2M), (M-1)/(9N^2 M))`
/// and `W = 4 N^2 M w_max` with `M` the doubled clause count, budget `K = N`.
pub fn reduce_pnaesat_to_dfkm(
    inst: &SatInstance,
    c: &Rat,
) -> Result<ReductionArtifact, ReduceError> {
    require_mode(inst, Mode::Nae)?;
    require_clauses(inst)?;
    check_c(c)?;
    let doubled = double_clauses(inst)?;
    let n = inst.num_vars();
    let m2 = doubled.num_clauses();
    let w = dfkm_weight(n, m2, inst.max_weight())?;
    let eps = dfkm_epsilon(n, m2);
    // effective literal sets: odd copies carry the negated pair
    let effective: Vec<[Literal; 2]> = doubled
        .clauses()
        .iter()
        .enumerate()
        .map(|(j, clause)| {
            if j % 2 == 1 {
                [clause[0].complement(), clause[1].complement()]
            } else {
                *clause
            }
        })
        .collect();
    let one = Rat::one();
    let dist = build_distances(
        n,
        &effective,
        &one + &eps,
        &one + c * &eps,
        &one + rat_int(2) * &eps,
    );
    let mut weights = vec![w; 2 * n];
    weights.extend(doubled.weights().iter().copied());
    let mut labels = literal_labels(n);
    labels.extend((0..m2).map(|j| PointLabel::Clause {
        clause: j / 2,
        copy: Some((j % 2 + 1) as u8),
    }));
    let target = LocationInstance::new_discrete(Kind::Dfkm, weights, dist, n, Some(labels))?;
    Ok(ReductionArtifact {
        source: inst.clone(),
        target,
        constants: ReductionConstants {
            w,
            opening_cost: None,
            k: Some(n),
            epsilon: Some(eps),
            c: Some(c.clone()),
        },
        label_map: base_label_map(
            n,
            (0..inst.num_clauses())
                .map(|mm| vec![2 * n + 2 * mm, 2 * n + 2 * mm + 1])
                .collect(),
        ),
    })
}

/// The solution mapping: variable `n` is true exactly when the point of
/// `x_n` is open. Clause points in the solution carry no truth value.
pub fn map_solution_back(art: &ReductionArtifact, sol: &Solution) -> Assignment {
    Assignment::new(
        art.label_map
            .literals
            .iter()
            .map(|&[pos, _]| sol.contains(pos))
            .collect(),
    )
}

/// The canonical reasonable solution of an assignment: open `x_n` where
/// true, `!x_n` where false.
pub fn lift_assignment(art: &ReductionArtifact, t: &Assignment) -> Result<Solution, ReduceError> {
    if t.len() != art.source.num_vars() {
        return Err(ReduceError::LengthMismatch {
            want: art.source.num_vars(),
            got: t.len(),
        });
    }
    Ok(Solution::new(
        art.label_map
            .literals
            .iter()
            .enumerate()
            .map(|(n, &[pos, neg])| if t.get(n) { pos } else { neg })
            .collect(),
    ))
}

/// FNV-1a 64-bit, hex encoded; identifies the source text in artifacts.
pub fn fnv1a_64_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

impl ReductionArtifact {
    /// File form: the target instance plus the reduction block.
    pub fn to_file(&self) -> InstanceFile {
        let source_wsat2 = self.source.to_wsat2();
        let source_file_hash = fnv1a_64_hex(source_wsat2.as_bytes());
        let mut file = self.target.to_file();
        file.reduction = Some(ReductionBlock {
            source_wsat2,
            source_file_hash,
            target_kind: self.target.kind().to_string(),
            w: self.constants.w,
            epsilon: self.constants.epsilon.as_ref().map(rat_str),
            c: self.constants.c.as_ref().map(rat_str),
            label_map: LabelMapJson {
                literals: self.label_map.literals.clone(),
                clauses: self.label_map.clauses.clone(),
            },
        });
        file
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    /// Rebuilds an artifact from its file form. The target instance is taken
    /// as stored (so downstream audits can detect tampered data); the source
    /// text must match its recorded hash.
    pub fn from_file(file: &InstanceFile) -> Result<Self, ReduceError> {
        let block = file
            .reduction
            .as_ref()
            .ok_or_else(|| ReduceError::Format("missing reduction block".to_string()))?;
        if fnv1a_64_hex(block.source_wsat2.as_bytes()) != block.source_file_hash {
            return Err(ReduceError::Format(
                "source_file_hash does not match source_wsat2".to_string(),
            ));
        }
        let source = SatInstance::parse_wsat2(&block.source_wsat2)?;
        let target = file.to_instance()?;
        if block.target_kind != target.kind().to_string() {
            return Err(ReduceError::Format(format!(
                "reduction block targets `{}`, instance is `{}`",
                block.target_kind,
                target.kind()
            )));
        }
        let epsilon = block
            .epsilon
            .as_ref()
            .map(|s| parse_rat(s))
            .transpose()
            .map_err(|e| ReduceError::Format(e.to_string()))?;
        let c = block
            .c
            .as_ref()
            .map(|s| parse_rat(s))
            .transpose()
            .map_err(|e| ReduceError::Format(e.to_string()))?;
        let opening_cost = match target.kind() {
            Kind::Mufl => Some(rat_uint(2 * block.w)),
            _ => None,
        };
        let label_map = LabelMap {
            literals: block.label_map.literals.clone(),
            clauses: block.label_map.clauses.clone(),
        };
        if label_map.literals.len() != source.num_vars()
            || label_map.clauses.len() != source.num_clauses()
        {
            return Err(ReduceError::Format(
                "label map does not cover the source instance".to_string(),
            ));
        }
        Ok(ReductionArtifact {
            source,
            target: target.clone(),
            constants: ReductionConstants {
                w: block.w,
                opening_cost,
                k: target
                    .kind()
                    .ne(&Kind::Mufl)
                    .then(|| target.k().expect("discrete instances carry k")),
                epsilon,
                c,
            },
            label_map,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ReduceError> {
        Self::from_file(&InstanceFile::from_json(text)?)
    }

    /// Recomputes every constant from `(N, M, w_max)` and compares with the
    /// stored values; detects inconsistent artifacts.
    pub fn constants_consistent(&self) -> bool {
        let n = self.source.num_vars();
        let w_max = self.source.max_weight();
        match self.target.kind() {
            Kind::Mufl => {
                let m = self.source.num_clauses();
                mufl_weight(m, w_max)
                    .map(|w| w == self.constants.w)
                    .unwrap_or(false)
                    && self.constants.opening_cost == Some(rat_uint(2 * self.constants.w))
                    && self.constants.k.is_none()
                    && self.constants.epsilon.is_none()
            }
            Kind::Dkm => {
                let m = self.source.num_clauses();
                mufl_weight(m, w_max)
                    .map(|w| w == self.constants.w)
                    .unwrap_or(false)
                    && self.constants.k == Some(n)
                    && self.constants.epsilon == Some(dkm_epsilon(n, m))
            }
            Kind::Dfkm => {
                let m2 = 2 * self.source.num_clauses();
                dfkm_weight(n, m2, w_max)
                    .map(|w| w == self.constants.w)
                    .unwrap_or(false)
                    && self.constants.k == Some(n)
                    && self.constants.epsilon == Some(dfkm_epsilon(n, m2))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satcore::Mode;
    use crate::testutil::{asn, single_clause_dkm, single_clause_mufl, sol};

    fn single_clause_std() -> SatInstance {
        SatInstance::from_signed(2, &[(1, 2, 1)], Mode::Std).unwrap()
    }

    fn single_clause_nae() -> SatInstance {
        SatInstance::from_signed(2, &[(1, 2, 1)], Mode::Nae).unwrap()
    }

    #[test]
    fn mufl_construction_matches_hand_table() {
        let art = reduce_sat_to_mufl(&single_clause_std()).unwrap();
        assert_eq!(art.constants.w, 1);
        assert_eq!(art.constants.opening_cost, Some(rat_int(2)));
        assert_eq!(art.target.facilities().unwrap().len(), 4);
        assert_eq!(art.target.n_points(), 5);
        assert_eq!(art.target, single_clause_mufl());
    }

    #[test]
    fn mufl_distance_cases() {
        let art = reduce_sat_to_mufl(&single_clause_std()).unwrap();
        let d = art.target.dist();
        assert_eq!(d.get(0, 1), &rat_int(1)); // x1 to !x1
        assert_eq!(d.get(4, 0), &rat(4, 3)); // clause to contained literal
        assert_eq!(d.get(4, 1), &rat(5, 3)); // clause to negated literal
        assert_eq!(d.get(0, 2), &rat_int(2)); // unrelated literals
    }

    #[test]
    fn mufl_output_is_metric() {
        let inst =
            SatInstance::from_signed(3, &[(1, -2, 2), (2, 3, 1), (-1, -3, 3)], Mode::Std).unwrap();
        let art = reduce_sat_to_mufl(&inst).unwrap();
        assert_eq!(art.target.dist().triangle_violation(), None);
    }

    #[test]
    fn dkm_construction_matches_hand_table() {
        let art = reduce_sat_to_dkm(&single_clause_std(), &rat(3, 2)).unwrap();
        assert_eq!(art.constants.epsilon, Some(rat(1, 10)));
        assert_eq!(art.constants.k, Some(2));
        assert_eq!(art.constants.w, 1);
        assert_eq!(art.target, single_clause_dkm());
    }

    #[test]
    fn dkm_rejects_c_out_of_range() {
        let inst = single_clause_std();
        assert!(matches!(
            reduce_sat_to_dkm(&inst, &rat_int(1)),
            Err(ReduceError::COutOfRange(_))
        ));
        assert!(matches!(
            reduce_sat_to_dkm(&inst, &rat_int(2)),
            Err(ReduceError::COutOfRange(_))
        ));
        assert!(reduce_sat_to_dkm(&inst, &rat(199, 100)).is_ok());
    }

    #[test]
    fn mode_mismatches_rejected() {
        assert!(matches!(
            reduce_sat_to_mufl(&single_clause_nae()),
            Err(ReduceError::ModeMismatch { .. })
        ));
        assert!(matches!(
            reduce_pnaesat_to_dfkm(&single_clause_std(), &rat(3, 2)),
            Err(ReduceError::ModeMismatch { .. })
        ));
    }

    #[test]
    fn doubling_duplicates_weights() {
        let inst = SatInstance::from_signed(2, &[(1, 2, 5)], Mode::Nae).unwrap();
        let doubled = double_clauses(&inst).unwrap();
        assert_eq!(doubled.num_clauses(), 2);
        assert_eq!(doubled.weights(), &[5, 5]);

        let three =
            SatInstance::from_signed(3, &[(1, 2, 1), (2, 3, 2), (1, 3, 3)], Mode::Nae).unwrap();
        let doubled3 = double_clauses(&three).unwrap();
        assert_eq!(doubled3.num_clauses(), 6);
        assert_eq!(doubled3.weights(), &[1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn doubling_doubles_every_cost() {
        let inst = SatInstance::from_signed(3, &[(1, 2, 2), (2, 3, 4)], Mode::Nae).unwrap();
        let doubled = double_clauses(&inst).unwrap();
        for i in 0..8u32 {
            let t = Assignment::new((0..3).map(|b| i >> b & 1 == 1).collect());
            assert_eq!(
                doubled.nae_cost(&t).unwrap(),
                2 * inst.nae_cost(&t).unwrap()
            );
        }
    }

    #[test]
    fn dfkm_constants_single_clause() {
        let art = reduce_pnaesat_to_dfkm(&single_clause_nae(), &rat(3, 2)).unwrap();
        // doubled M = 2: eps = min(1/12, 1/72) = 1/72, W = 4*4*2*1 = 32
        assert_eq!(art.constants.epsilon, Some(rat(1, 72)));
        assert_eq!(art.constants.w, 32);
        assert_eq!(art.constants.k, Some(2));
        assert_eq!(art.target.n_points(), 6); // 2N + 2 M_original
        assert_eq!(art.target.kind(), Kind::Dfkm);
    }

    #[test]
    fn dfkm_negated_copy_distances() {
        let art = reduce_pnaesat_to_dfkm(&single_clause_nae(), &rat(3, 2)).unwrap();
        let eps = rat(1, 72);
        let near = rat_int(1) + &eps;
        let far = rat_int(1) + rat(3, 2) * &eps;
        let d = art.target.dist();
        // copy 1 at point 4 contains x1, x2
        assert_eq!(d.get(4, 0), &near);
        assert_eq!(d.get(4, 2), &near);
        assert_eq!(d.get(4, 1), &far);
        // copy 2 at point 5 contains !x1, !x2
        assert_eq!(d.get(5, 1), &near);
        assert_eq!(d.get(5, 3), &near);
        assert_eq!(d.get(5, 0), &far);
        // the two clause points sit at the common distance
        assert_eq!(d.get(4, 5), &(rat_int(1) + rat_int(2) * &eps));
    }

    #[test]
    fn dfkm_membership_lower_bound() {
        let art = reduce_pnaesat_to_dfkm(&single_clause_nae(), &rat(3, 2)).unwrap();
        let inst = &art.target;
        let n_points = inst.n_points();
        // exhaustive over all |O| = 2 subsets of the 6 points
        for a in 0..n_points {
            for b in a + 1..n_points {
                let o = sol(&[a, b]);
                let r = inst.optimal_memberships(&o).unwrap();
                for c in 0..n_points {
                    if o.contains(c) {
                        continue;
                    }
                    for j in 0..2 {
                        assert!(r.get(c, j) > 0.25, "membership bound violated");
                    }
                }
            }
        }
    }

    #[test]
    fn dfkm_rejects_empty_source() {
        let empty = SatInstance::new(2, vec![], vec![], Mode::Nae).unwrap();
        assert_eq!(
            reduce_pnaesat_to_dfkm(&empty, &rat(3, 2)),
            Err(ReduceError::EmptyClauseSet)
        );
    }

    #[test]
    fn psi_drops_clause_points() {
        let art = reduce_sat_to_dkm(&single_clause_std(), &rat(3, 2)).unwrap();
        assert_eq!(map_solution_back(&art, &sol(&[0, 3])), asn("10"));
        assert_eq!(map_solution_back(&art, &sol(&[1, 3])), asn("00"));
        // clause point 4 carries no truth value
        assert_eq!(map_solution_back(&art, &sol(&[0, 4])), asn("10"));
    }

    #[test]
    fn lift_produces_reasonable_solutions() {
        let art = reduce_sat_to_mufl(&single_clause_std()).unwrap();
        let lifted = lift_assignment(&art, &asn("10")).unwrap();
        assert_eq!(lifted, sol(&[0, 3]));
        assert!(art.target.is_reasonable(&lifted).unwrap());
        assert_eq!(
            lift_assignment(&art, &asn("111")).unwrap_err(),
            ReduceError::LengthMismatch { want: 2, got: 3 }
        );
    }

    #[test]
    fn psi_lift_round_trip_exhaustive() {
        let inst =
            SatInstance::from_signed(4, &[(1, -2, 1), (3, 4, 2), (-1, -4, 1)], Mode::Std).unwrap();
        let art = reduce_sat_to_mufl(&inst).unwrap();
        for i in 0..16u32 {
            let t = Assignment::new((0..4).map(|b| i >> b & 1 == 1).collect());
            let lifted = lift_assignment(&art, &t).unwrap();
            assert!(art.target.is_reasonable(&lifted).unwrap());
            assert_eq!(map_solution_back(&art, &lifted), t);
        }
    }

    #[test]
    fn artifact_json_round_trip() {
        let art = reduce_pnaesat_to_dfkm(&single_clause_nae(), &rat(3, 2)).unwrap();
        let text = art.to_json();
        let back = ReductionArtifact::from_json(&text).unwrap();
        assert_eq!(back, art);
        assert!(back.constants_consistent());
    }

    #[test]
    fn artifact_rejects_tampered_source_hash() {
        let art = reduce_sat_to_mufl(&single_clause_std()).unwrap();
        let mut file = art.to_file();
        file.reduction.as_mut().unwrap().source_wsat2 = "p wsat2 2 0 std\n".to_string();
        assert!(matches!(
            ReductionArtifact::from_file(&file),
            Err(ReduceError::Format(_))
        ));
    }

    #[test]
    fn constants_consistency_detects_corruption() {
        let art = reduce_sat_to_dkm(&single_clause_std(), &rat(3, 2)).unwrap();
        assert!(art.constants_consistent());
        let mut corrupted = art.clone();
        corrupted.constants.w = 7;
        assert!(!corrupted.constants_consistent());
    }
}
