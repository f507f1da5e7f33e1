//! Strict-improvement local search, step traces and transition graphs for
//! any (instance, cost, neighbourhood) triple.
//!
//! The engine never takes an equal-cost neighbour. Under the `best` pivot
//! rule the first neighbour attaining the best improving cost in enumeration
//! order wins, which makes every run deterministic and replayable.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::facility::{FacilityError, Kind, LocationInstance, Solution};
use crate::satcore::{Assignment, SatInstance};

/// A single move between neighbouring solutions.
///
/// Variable indices in `Flip` are stored 0-based but printed 1-based to
/// match the `x1`-style naming; point indices print as stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Flip(usize),
    Add(usize),
    Drop(usize),
    Swap { out: usize, inn: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Flip(n) => write!(f, "flip:{}", n + 1),
            Move::Add(i) => write!(f, "add:{i}"),
            Move::Drop(i) => write!(f, "drop:{i}"),
            Move::Swap { out, inn } => write!(f, "swap:{out}->{inn}"),
        }
    }
}

/// Search direction of the objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Whether `candidate` is strictly better than `incumbent`.
    pub fn improves<C: Ord>(&self, candidate: &C, incumbent: &C) -> bool {
        match self {
            Direction::Minimize => candidate < incumbent,
            Direction::Maximize => candidate > incumbent,
        }
    }
}

/// Pivot rule: `best` takes the best improving neighbour (ties broken by
/// enumeration order), `first` the first improving one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivot {
    Best,
    First,
}

impl fmt::Display for Pivot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pivot::Best => write!(f, "best"),
            Pivot::First => write!(f, "first"),
        }
    }
}

impl FromStr for Pivot {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        match s {
            "best" => Ok(Pivot::Best),
            "first" => Ok(Pivot::First),
            other => Err(SearchError::BadPivot(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("infeasible initial solution: {0}")]
    InfeasibleInit(String),
    #[error("solution space holds {size} solutions, exceeding the guard of {guard}")]
    GuardExceeded { size: u128, guard: u128 },
    #[error("invalid pivot rule `{0}` (expected best or first)")]
    BadPivot(String),
}

/// Default cap on enumerated solution spaces.
pub const DEFAULT_NODE_GUARD: u128 = 1 << 20;

/// A problem exposing everything the engine needs: costs, a deterministic
/// neighbourhood enumeration and (for transition graphs) the full solution
/// space.
pub trait SearchProblem {
    type Sol: Clone + Eq + Ord + std::hash::Hash + fmt::Debug;
    type Cost: Clone + Ord + fmt::Display + fmt::Debug;

    fn direction(&self) -> Direction;
    fn evaluate(&self, sol: &Self::Sol) -> Self::Cost;
    fn neighbors(&self, sol: &Self::Sol) -> Vec<(Move, Self::Sol)>;
    fn validate(&self, sol: &Self::Sol) -> Result<(), String>;
    /// Number of feasible solutions.
    fn solution_count(&self) -> u128;
    /// All feasible solutions in a fixed deterministic order.
    fn enumerate_solutions(&self) -> Vec<Self::Sol>;
    /// Short printable form used in CSV output.
    fn label(&self, sol: &Self::Sol) -> String;
}

/// One accepted improving move.
#[derive(Clone, Debug)]
pub struct TraceStep<S, C> {
    pub mv: Move,
    pub sol: S,
    pub cost: C,
}

/// Replayable record of a local-search run.
#[derive(Clone, Debug)]
pub struct SearchTrace<S, C> {
    pub pivot: Pivot,
    pub direction: Direction,
    pub initial_sol: S,
    pub initial_cost: C,
    pub steps: Vec<TraceStep<S, C>>,
}

impl<S: Clone, C: Clone> SearchTrace<S, C> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_sol(&self) -> &S {
        self.steps
            .last()
            .map(|s| &s.sol)
            .unwrap_or(&self.initial_sol)
    }

    pub fn final_cost(&self) -> &C {
        self.steps
            .last()
            .map(|s| &s.cost)
            .unwrap_or(&self.initial_cost)
    }
}

impl<S, C: fmt::Display> SearchTrace<S, C> {
    /// `step,move,cost` rows; step 0 is the initial solution.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,move,cost\n");
        out.push_str(&format!("0,init,{}\n", self.initial_cost));
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, step.mv, step.cost));
        }
        out
    }
}

/// Local optimum plus the trace that reached it.
pub type SearchOutcome<S, C> = Result<(S, SearchTrace<S, C>), SearchError>;

/// Runs strict-improvement local search from `init` until no neighbour
/// improves; returns the local optimum and the full trace.
pub fn local_search<P: SearchProblem>(
    problem: &P,
    init: P::Sol,
    pivot: Pivot,
) -> SearchOutcome<P::Sol, P::Cost> {
    problem
        .validate(&init)
        .map_err(SearchError::InfeasibleInit)?;
    let direction = problem.direction();
    let initial_cost = problem.evaluate(&init);
    let mut current = init.clone();
    let mut current_cost = initial_cost.clone();
    let mut steps = Vec::new();
    loop {
        let mut chosen: Option<(Move, P::Sol, P::Cost)> = None;
        for (mv, sol) in problem.neighbors(&current) {
            let cost = problem.evaluate(&sol);
            if !direction.improves(&cost, &current_cost) {
                continue;
            }
            match pivot {
                Pivot::First => {
                    chosen = Some((mv, sol, cost));
                    break;
                }
                Pivot::Best => {
                    let better = match &chosen {
                        None => true,
                        Some((_, _, best)) => direction.improves(&cost, best),
                    };
                    if better {
                        chosen = Some((mv, sol, cost));
                    }
                }
            }
        }
        match chosen {
            None => break,
            Some((mv, sol, cost)) => {
                current = sol.clone();
                current_cost = cost.clone();
                steps.push(TraceStep { mv, sol, cost });
            }
        }
    }
    let trace = SearchTrace {
        pivot,
        direction,
        initial_sol: init,
        initial_cost,
        steps,
    };
    Ok((current, trace))
}

/// Directed graph on all feasible solutions with an arc for every strictly
/// improving move; sinks are exactly the local optima.
#[derive(Clone, Debug)]
pub struct TransitionGraph<S, C> {
    pub nodes: Vec<S>,
    pub costs: Vec<C>,
    /// Arcs as (from, to) node indices, deterministic order.
    pub arcs: Vec<(usize, usize)>,
    /// Node indices without outgoing arcs.
    pub sinks: Vec<usize>,
}

impl<S: Clone + Eq + std::hash::Hash, C> TransitionGraph<S, C> {
    pub fn node_index(&self, sol: &S) -> Option<usize> {
        self.nodes.iter().position(|n| n == sol)
    }

    pub fn is_sink(&self, idx: usize) -> bool {
        self.sinks.binary_search(&idx).is_ok()
    }

    pub fn out_neighbors(&self, idx: usize) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|(u, _)| *u == idx)
            .map(|(_, v)| *v)
            .collect()
    }

    /// Kahn's algorithm; strict improvement makes the graph a DAG.
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.arcs {
            indeg[v] += 1;
            out[u].push(v);
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop() {
            seen += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        seen == n
    }

    /// `from,to` edge list with printable node labels.
    pub fn edge_csv(&self, label: impl Fn(&S) -> String) -> String {
        let mut out = String::from("from,to\n");
        for &(u, v) in &self.arcs {
            out.push_str(&format!(
                "{},{}\n",
                label(&self.nodes[u]),
                label(&self.nodes[v])
            ));
        }
        out
    }
}

/// Enumerates the full transition graph, guarded by `guard` nodes.
pub fn build_transition_graph<P: SearchProblem>(
    problem: &P,
    guard: u128,
) -> Result<TransitionGraph<P::Sol, P::Cost>, SearchError> {
    let size = problem.solution_count();
    if size > guard {
        return Err(SearchError::GuardExceeded { size, guard });
    }
    let nodes = problem.enumerate_solutions();
    let index: HashMap<&P::Sol, usize> = nodes.iter().zip(0..).collect();
    let costs: Vec<P::Cost> = nodes.iter().map(|n| problem.evaluate(n)).collect();
    let direction = problem.direction();
    let mut arcs = Vec::new();
    let mut sinks = Vec::new();
    for (u, node) in nodes.iter().enumerate() {
        let mut has_out = false;
        for (_, sol) in problem.neighbors(node) {
            let v = *index
                .get(&sol)
                .expect("neighbor outside the enumerated solution space");
            if direction.improves(&costs[v], &costs[u]) {
                arcs.push((u, v));
                has_out = true;
            }
        }
        if !has_out {
            sinks.push(u);
        }
    }
    Ok(TransitionGraph {
        nodes,
        costs,
        arcs,
        sinks,
    })
}

/// All local optima: the sinks of the transition graph.
pub fn enumerate_local_optima<P: SearchProblem>(
    problem: &P,
    guard: u128,
) -> Result<Vec<P::Sol>, SearchError> {
    let tg = build_transition_graph(problem, guard)?;
    Ok(tg.sinks.iter().map(|&i| tg.nodes[i].clone()).collect())
}

/// SAT instance under the Flip neighbourhood (maximization).
pub struct SatFlip<'a> {
    inst: &'a SatInstance,
}

impl<'a> SatFlip<'a> {
    pub fn new(inst: &'a SatInstance) -> Self {
        SatFlip { inst }
    }
}

impl SearchProblem for SatFlip<'_> {
    type Sol = Assignment;
    type Cost = u64;

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn evaluate(&self, sol: &Assignment) -> u64 {
        self.inst.cost(sol).expect("assignment length validated")
    }

    fn neighbors(&self, sol: &Assignment) -> Vec<(Move, Assignment)> {
        (0..sol.len())
            .map(|n| (Move::Flip(n), sol.flip(n)))
            .collect()
    }

    fn validate(&self, sol: &Assignment) -> Result<(), String> {
        if sol.len() != self.inst.num_vars() {
            return Err(format!(
                "assignment has {} bits, instance has {} variables",
                sol.len(),
                self.inst.num_vars()
            ));
        }
        Ok(())
    }

    fn solution_count(&self) -> u128 {
        let n = self.inst.num_vars();
        if n >= 128 {
            u128::MAX
        } else {
            1u128 << n
        }
    }

    fn enumerate_solutions(&self) -> Vec<Assignment> {
        let n = self.inst.num_vars();
        (0..1u128 << n)
            .map(|i| Assignment::new((0..n).map(|b| i >> (n - 1 - b) & 1 == 1).collect()))
            .collect()
    }

    fn label(&self, sol: &Assignment) -> String {
        sol.to_string()
    }
}

/// Facility instance under the single-swap neighbourhood (minimization).
pub struct FacilitySwap<'a> {
    inst: &'a LocationInstance,
}

impl<'a> FacilitySwap<'a> {
    pub fn new(inst: &'a LocationInstance) -> Self {
        FacilitySwap { inst }
    }

    pub fn instance(&self) -> &LocationInstance {
        self.inst
    }
}

impl SearchProblem for FacilitySwap<'_> {
    type Sol = Solution;
    type Cost = crate::rational::Rat;

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn evaluate(&self, sol: &Solution) -> Self::Cost {
        self.inst.cost(sol).expect("solution feasibility validated")
    }

    fn neighbors(&self, sol: &Solution) -> Vec<(Move, Solution)> {
        self.inst
            .swap_neighbors(sol)
            .expect("solution feasibility validated")
            .into_iter()
            .map(|n| (diff_move(sol, &n), n))
            .collect()
    }

    fn validate(&self, sol: &Solution) -> Result<(), String> {
        self.inst
            .validate_solution(sol)
            .map_err(|e: FacilityError| e.to_string())
    }

    fn solution_count(&self) -> u128 {
        match self.inst.kind() {
            Kind::Mufl => {
                let f = self.inst.facilities().unwrap().len();
                if f >= 128 {
                    u128::MAX
                } else {
                    (1u128 << f) - 1
                }
            }
            Kind::Dkm | Kind::Dfkm => {
                binomial(self.inst.n_points() as u128, self.inst.k().unwrap() as u128)
            }
        }
    }

    fn enumerate_solutions(&self) -> Vec<Solution> {
        match self.inst.kind() {
            Kind::Mufl => {
                let facilities = self.inst.facilities().unwrap();
                let f = facilities.len();
                (1u128..1 << f)
                    .map(|mask| {
                        Solution::new(
                            (0..f)
                                .filter(|&j| mask >> j & 1 == 1)
                                .map(|j| facilities[j])
                                .collect(),
                        )
                    })
                    .collect()
            }
            Kind::Dkm | Kind::Dfkm => {
                let n = self.inst.n_points();
                let k = self.inst.k().unwrap();
                let mut out = Vec::new();
                let mut comb: Vec<usize> = (0..k).collect();
                loop {
                    out.push(Solution::new(comb.clone()));
                    // next lexicographic k-combination of 0..n
                    let mut i = k;
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        if comb[i] != i + n - k {
                            break;
                        }
                    }
                    comb[i] += 1;
                    for j in i + 1..k {
                        comb[j] = comb[j - 1] + 1;
                    }
                }
            }
        }
    }

    fn label(&self, sol: &Solution) -> String {
        sol.label()
    }
}

/// Determines the move between two solutions differing by one single move.
fn diff_move(from: &Solution, to: &Solution) -> Move {
    let dropped: Vec<usize> = from
        .open()
        .iter()
        .copied()
        .filter(|p| !to.contains(*p))
        .collect();
    let added: Vec<usize> = to
        .open()
        .iter()
        .copied()
        .filter(|p| !from.contains(*p))
        .collect();
    match (dropped.as_slice(), added.as_slice()) {
        ([], [a]) => Move::Add(*a),
        ([d], []) => Move::Drop(*d),
        ([d], [a]) => Move::Swap { out: *d, inn: *a },
        _ => panic!("solutions are not single-move neighbors"),
    }
}

/// Saturating binomial coefficient.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = match result.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    result
}
