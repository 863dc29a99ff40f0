//! Weighted Hungarian method for transportation problems.
//!
//! The method works on the `m × n` cost matrix directly. Row `i` is a line
//! of weight `a_i` and column `j` a line of weight `b_j`; a cost entry
//! stands for an `a_i × b_j` block of the equivalent `η × η` assignment
//! problem. Each round:
//!
//! 1. (once) subtract row minima, then column minima;
//! 2. cover all zeros with lines of minimum total weight `ζ`, computed as a
//!    minimum cut of [`ZeroFlowNetwork`];
//! 3. stop if `ζ = η` and ship along the zero entries, otherwise subtract
//!    the smallest uncovered entry `δ` from uncovered entries and add it to
//!    doubly covered ones.
//!
//! Costs with denominators are scaled to integers first, so every `δ` is at
//! least one scaled unit and the dual objective climbs by `δ(η − ζ) ≥ 1`
//! per round.

mod expansion;
mod flow;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{
    int, BigInt, Cell, DualCertificate, Error, Matrix, Rational, Result, TransportInstance,
    TransportPlan,
};

pub use expansion::{
    aggregate_assignment_solution, expand_to_assignment, solve_assignment, Assignment, Expansion,
    DEFAULT_EXPANSION_CAP,
};
pub use flow::{MaxFlow, ZeroFlowNetwork};

/// Step 1 result: `reduced[i][j] = cost[i][j] - row_offsets[i] - col_offsets[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: Matrix,
    pub row_offsets: Vec<Rational>,
    pub col_offsets: Vec<Rational>,
}

/// Subtracts the smallest element of each row, then of each column.
pub fn reduce_matrix(cost: &Matrix) -> Reduction {
    let (m, n) = (cost.rows(), cost.cols());
    let row_offsets: Vec<Rational> = (0..m)
        .map(|i| cost.row(i).iter().min().cloned().unwrap_or_else(|| int(0)))
        .collect();
    let col_offsets: Vec<Rational> = (0..n)
        .map(|j| {
            (0..m)
                .map(|i| &cost[(i, j)] - &row_offsets[i])
                .min()
                .unwrap_or_else(|| int(0))
        })
        .collect();
    let reduced = Matrix::from_fn(m, n, |i, j| {
        &cost[(i, j)] - &row_offsets[i] - &col_offsets[j]
    });
    Reduction {
        reduced,
        row_offsets,
        col_offsets,
    }
}

/// Rows and columns covering every zero of a reduced matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineCover {
    /// Zero-based, ascending.
    pub rows: Vec<usize>,
    /// Zero-based, ascending.
    pub cols: Vec<usize>,
    /// `Σ a_i` over covered rows plus `Σ b_j` over covered columns.
    pub weight: u64,
}

impl LineCover {
    /// Builds a cover and computes its weight from the marginals.
    pub fn new(
        mut rows: Vec<usize>,
        mut cols: Vec<usize>,
        supply: &[u64],
        demand: &[u64],
    ) -> Result<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if let Some(&i) = rows.iter().find(|&&i| i >= supply.len()) {
            return Err(Error::OutOfRange {
                row: i,
                col: 0,
                rows: supply.len(),
                cols: demand.len(),
            });
        }
        if let Some(&j) = cols.iter().find(|&&j| j >= demand.len()) {
            return Err(Error::OutOfRange {
                row: 0,
                col: j,
                rows: supply.len(),
                cols: demand.len(),
            });
        }
        let weight = rows.iter().map(|&i| supply[i]).sum::<u64>()
            + cols.iter().map(|&j| demand[j]).sum::<u64>();
        Ok(LineCover { rows, cols, weight })
    }

    pub fn covers_row(&self, i: usize) -> bool {
        self.rows.binary_search(&i).is_ok()
    }

    pub fn covers_col(&self, j: usize) -> bool {
        self.cols.binary_search(&j).is_ok()
    }

    /// Number of lines through `(i, j)`: 0, 1 or 2.
    pub fn multiplicity(&self, (i, j): Cell) -> u8 {
        u8::from(self.covers_row(i)) + u8::from(self.covers_col(j))
    }

    /// Fails with the first zero entry that no line passes through.
    pub fn check_covers_zeros(&self, reduced: &Matrix) -> Result<()> {
        match reduced
            .iter_cells()
            .find(|&(i, j, v)| v.is_zero() && self.multiplicity((i, j)) == 0)
        {
            Some((row, col, _)) => Err(Error::InvalidCover { row, col }),
            None => Ok(()),
        }
    }
}

/// 1-based, e.g. `rows {1} cols {1, 2, 4}`.
impl fmt::Display for LineCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| {
            v.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "rows {{{}}} cols {{{}}}",
            list(&self.rows),
            list(&self.cols)
        )
    }
}

/// Step 2 result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCover {
    pub cover: LineCover,
    pub max_flow: u64,
    /// Maximum flow restricted to zero entries, as a (partial) plan.
    pub flow: TransportPlan,
}

fn integral(what: &'static str, values: &[Rational]) -> Result<Vec<u64>> {
    values
        .iter()
        .map(|v| {
            crate::to_u64(v).ok_or_else(|| Error::NonIntegral {
                what,
                value: v.clone(),
            })
        })
        .collect()
}

fn check_nonnegative(reduced: &Matrix) -> Result<()> {
    match reduced.iter_cells().find(|(_, _, v)| v.is_negative()) {
        Some((row, col, _)) => Err(Error::NegativeEntry { row, col }),
        None => Ok(()),
    }
}

/// Minimum-weight line cover of the zeros of `reduced`.
///
/// Max flow on the zero network, then the canonical min cut: rows not
/// reachable from the source and columns reachable from it.
pub fn min_weight_zero_cover(
    reduced: &Matrix,
    supply: &[Rational],
    demand: &[Rational],
) -> Result<ZeroCover> {
    let a = integral("supply", supply)?;
    let b = integral("demand", demand)?;
    check_nonnegative(reduced)?;
    zero_cover(reduced, &a, &b)
}

fn zero_cover(reduced: &Matrix, supply: &[u64], demand: &[u64]) -> Result<ZeroCover> {
    let flow = ZeroFlowNetwork::new(reduced, supply, demand).max_flow();
    let cover = LineCover::new(flow.cut_rows, flow.cut_cols, supply, demand)?;
    let plan = TransportPlan::from_entries(
        flow.zero_flow
            .into_iter()
            .map(|(cell, q)| (cell, Rational::from_integer(BigInt::from(q)))),
    )?;
    Ok(ZeroCover {
        cover,
        max_flow: flow.value,
        flow: plan,
    })
}

/// Step 3: subtracts the smallest uncovered entry from every uncovered entry
/// and adds it to every doubly covered one. Returns the new matrix and `δ`.
pub fn delta_adjust(reduced: &Matrix, cover: &LineCover, eta: u64) -> Result<(Matrix, Rational)> {
    if cover.weight >= eta {
        return Err(Error::CoverComplete { eta });
    }
    check_nonnegative(reduced)?;
    cover.check_covers_zeros(reduced)?;
    let delta = reduced
        .iter_cells()
        .filter(|&(i, j, _)| cover.multiplicity((i, j)) == 0)
        .map(|(_, _, v)| v)
        .min()
        .cloned()
        .ok_or(Error::NoUncoveredEntry)?;
    let adjusted = Matrix::from_fn(reduced.rows(), reduced.cols(), |i, j| {
        let v = &reduced[(i, j)];
        match cover.multiplicity((i, j)) {
            0 => v - &delta,
            1 => v.clone(),
            _ => v + &delta,
        }
    });
    Ok((adjusted, delta))
}

/// Returns the zero-entry flow as a plan after checking it ships `η` along
/// zeros only and meets every marginal.
pub fn extract_plan_from_zeros(
    reduced: &Matrix,
    supply: &[Rational],
    demand: &[Rational],
    zero_flow: &TransportPlan,
) -> Result<TransportPlan> {
    let eta: Rational = supply.iter().sum();
    let total = zero_flow.total();
    if total != eta {
        return Err(Error::FlowShort { flow: total, eta });
    }
    for &(i, j) in zero_flow.cells() {
        if i >= reduced.rows() || j >= reduced.cols() || !reduced[(i, j)].is_zero() {
            return Err(Error::InfeasiblePlan(format!(
                "flow uses non-zero entry ({},{})",
                i + 1,
                j + 1
            )));
        }
    }
    let inst = TransportInstance::new(reduced.clone(), supply.to_vec(), demand.to_vec())?;
    if let Some(v) = inst.is_feasible(zero_flow)?.first_violation() {
        return Err(Error::InfeasiblePlan(v.to_string()));
    }
    Ok(zero_flow.clone())
}

/// Hand-style assignment on the zeros of a final reduced matrix: repeatedly
/// take the active line with the fewest zeros (rows before columns, lowest
/// index first), ship as much as possible through its first zero, and retire
/// whatever is exhausted.
///
/// Returns `None` when the walk gets stuck or ends infeasible; it is not
/// guaranteed to succeed even when a zero-supported plan exists.
pub fn greedy_extract(
    reduced: &Matrix,
    supply: &[Rational],
    demand: &[Rational],
) -> Option<TransportPlan> {
    let (m, n) = (reduced.rows(), reduced.cols());
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut plan = TransportPlan::new();
    loop {
        let zeros_in_row = |i: usize, b: &[Rational]| {
            (0..n)
                .filter(|&j| b[j].is_positive() && reduced[(i, j)].is_zero())
                .collect::<Vec<_>>()
        };
        let zeros_in_col = |j: usize, a: &[Rational]| {
            (0..m)
                .filter(|&i| a[i].is_positive() && reduced[(i, j)].is_zero())
                .collect::<Vec<_>>()
        };
        let mut best: Option<(usize, Cell)> = None;
        for i in (0..m).filter(|&i| a[i].is_positive()) {
            let z = zeros_in_row(i, &b);
            let first = *z.first()?;
            if best.is_none_or(|(c, _)| z.len() < c) {
                best = Some((z.len(), (i, first)));
            }
        }
        for j in (0..n).filter(|&j| b[j].is_positive()) {
            let z = zeros_in_col(j, &a);
            let first = *z.first()?;
            if best.is_none_or(|(c, _)| z.len() < c) {
                best = Some((z.len(), (first, j)));
            }
        }
        let Some((_, (i, j))) = best else { break };
        let q = a[i].clone().min(b[j].clone());
        a[i] -= &q;
        b[j] -= &q;
        plan.add((i, j), q).ok()?;
    }
    let done = a.iter().chain(&b).all(Zero::is_zero);
    done.then_some(plan)
}

/// One pass through steps 2 and 3. Matrices and `δ` are in the instance's
/// own units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceIteration {
    pub reduced: Matrix,
    pub cover: LineCover,
    /// Maximum flow on the zero network of `reduced`.
    pub max_flow: u64,
    /// Weight of the canonical min-cut cover, whether or not it was used.
    pub min_cut_weight: u64,
    /// `None` on the final pass.
    pub delta: Option<Rational>,
    /// `Σ α_i a_i + Σ β_j b_j` for the potentials behind `reduced`.
    pub dual_objective: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveTrace {
    pub iterations: Vec<TraceIteration>,
    /// What [`greedy_extract`] makes of the final matrix, for comparison.
    pub greedy_plan: Option<TransportPlan>,
}

impl SolveTrace {
    /// Number of δ-adjustments performed.
    pub fn delta_steps(&self) -> usize {
        self.iterations
            .iter()
            .filter(|it| it.delta.is_some())
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HungarianSolution {
    pub plan: TransportPlan,
    pub certificate: DualCertificate,
    pub trace: SolveTrace,
}

/// Rows and columns (zero-based) to use instead of the canonical cover.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PinnedCover {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// `pinned_covers[k]` replaces the cover chosen on pass `k`. A pinned
    /// cover must cover every zero and have minimum weight.
    pub pinned_covers: Vec<PinnedCover>,
}

pub fn solve_weighted_hungarian(instance: &TransportInstance) -> Result<HungarianSolution> {
    solve_weighted_hungarian_with(instance, &SolveOptions::default())
}

pub fn solve_weighted_hungarian_with(
    instance: &TransportInstance,
    options: &SolveOptions,
) -> Result<HungarianSolution> {
    let (supply, demand) = instance.integral_marginals()?;
    let eta: u64 = supply.iter().sum();

    let scale = instance
        .cost()
        .iter_cells()
        .fold(BigInt::one(), |acc, (_, _, c)| acc.lcm(c.denom()));
    let scale = Rational::from_integer(scale);
    let unscale = |v: &Rational| v / &scale;

    let Reduction {
        mut reduced,
        row_offsets: mut alpha,
        col_offsets: mut beta,
    } = reduce_matrix(&instance.cost().map(|c| c * &scale));

    let dual_objective = |alpha: &[Rational], beta: &[Rational]| {
        let d = DualCertificate {
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
        };
        unscale(&d.dual_objective(instance))
    };

    let mut iterations = Vec::new();
    let final_flow = loop {
        let pass = iterations.len();
        let zc = zero_cover(&reduced, &supply, &demand)?;
        let min_cut_weight = zc.cover.weight;
        let cover = match options.pinned_covers.get(pass) {
            Some(pin) => {
                let cover = LineCover::new(pin.rows.clone(), pin.cols.clone(), &supply, &demand)?;
                cover.check_covers_zeros(&reduced)?;
                if cover.weight != zc.max_flow {
                    return Err(Error::NonMinimalCover {
                        weight: cover.weight,
                        max_flow: zc.max_flow,
                    });
                }
                cover
            }
            None => zc.cover,
        };
        let objective = dual_objective(&alpha, &beta);
        let snapshot = reduced.map(unscale);

        if cover.weight == eta {
            iterations.push(TraceIteration {
                reduced: snapshot,
                cover,
                max_flow: zc.max_flow,
                min_cut_weight,
                delta: None,
                dual_objective: objective,
            });
            break zc.flow;
        }

        let (next, delta) = delta_adjust(&reduced, &cover, eta)?;
        for (i, a) in alpha.iter_mut().enumerate() {
            if !cover.covers_row(i) {
                *a += &delta;
            }
        }
        for &j in &cover.cols {
            beta[j] -= &delta;
        }
        iterations.push(TraceIteration {
            reduced: snapshot,
            cover,
            max_flow: zc.max_flow,
            min_cut_weight,
            delta: Some(unscale(&delta)),
            dual_objective: objective,
        });
        reduced = next;
    };

    let plan =
        extract_plan_from_zeros(&reduced, instance.supply(), instance.demand(), &final_flow)?;
    let greedy_plan = greedy_extract(&reduced, instance.supply(), instance.demand());
    let certificate = DualCertificate {
        alpha: alpha.iter().map(unscale).collect(),
        beta: beta.iter().map(unscale).collect(),
    };
    Ok(HungarianSolution {
        plan,
        certificate,
        trace: SolveTrace {
            iterations,
            greedy_plan,
        },
    })
}
