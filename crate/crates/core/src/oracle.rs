//! Brute-force optimizers for tiny instances.
//!
//! These are deliberately independent of every solver in the crate: they
//! never use reductions, flows or potentials, only enumeration. With
//! integral marginals the transportation polytope has integral vertices, so
//! enumerating integer plans finds the LP optimum.

use crate::{int, BigInt, Error, Matrix, Rational, Result, TransportInstance, TransportPlan};

pub const MAX_ETA: usize = 12;
pub const MAX_CELLS: usize = 16;
pub const MAX_ASSIGNMENT_ORDER: usize = 8;

/// Size guard for [`enumerate_optimum_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_eta: usize,
    pub max_cells: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_eta: MAX_ETA,
            max_cells: MAX_CELLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Rational,
    /// Lexicographically smallest optimal plan (row-major flattening).
    pub plan: TransportPlan,
    /// Number of complete feasible integer plans visited.
    pub explored: u64,
}

struct Search<'a> {
    cost: &'a Matrix,
    m: usize,
    n: usize,
    supply: Vec<u64>,
    demand: Vec<u64>,
    current: Vec<u64>,
    best: Option<(Rational, Vec<u64>)>,
    explored: u64,
}

impl Search<'_> {
    fn visit(&mut self, cell: usize, partial: Rational) {
        if cell == self.m * self.n {
            if self.supply.iter().chain(&self.demand).all(|&v| v == 0) {
                self.explored += 1;
                if self.best.as_ref().is_none_or(|(b, _)| partial < *b) {
                    self.best = Some((partial, self.current.clone()));
                }
            }
            return;
        }
        let (i, j) = (cell / self.n, cell % self.n);
        let later_demand: u64 = self.demand[j + 1..].iter().sum();
        let later_supply: u64 = self.supply[i + 1..].iter().sum();
        let hi = self.supply[i].min(self.demand[j]);
        let lo = self.supply[i]
            .saturating_sub(later_demand)
            .max(self.demand[j].saturating_sub(later_supply));
        for q in lo..=hi {
            self.supply[i] -= q;
            self.demand[j] -= q;
            self.current[cell] = q;
            let step = &self.cost[(i, j)] * Rational::from_integer(BigInt::from(q));
            self.visit(cell + 1, &partial + step);
            self.supply[i] += q;
            self.demand[j] += q;
        }
        self.current[cell] = 0;
    }
}

/// Exact optimum by enumerating every integer plan. Requires integral
/// marginals, `η ≤ 12` and `m·n ≤ 16`.
pub fn enumerate_optimum(instance: &TransportInstance) -> Result<OracleResult> {
    enumerate_optimum_with(instance, OracleLimits::default())
}

/// [`enumerate_optimum`] with a caller-chosen size guard. The running time
/// grows with the number of integer plans, roughly `η^(mn)` in the worst
/// case.
pub fn enumerate_optimum_with(
    instance: &TransportInstance,
    limits: OracleLimits,
) -> Result<OracleResult> {
    let (supply, demand) = instance.integral_marginals()?;
    let eta = supply.iter().sum::<u64>() as usize;
    if eta > limits.max_eta {
        return Err(Error::TooLarge {
            what: "oracle eta",
            size: eta,
            limit: limits.max_eta,
        });
    }
    let (m, n) = (instance.rows(), instance.cols());
    if m * n > limits.max_cells {
        return Err(Error::TooLarge {
            what: "oracle cell count",
            size: m * n,
            limit: limits.max_cells,
        });
    }
    let mut search = Search {
        cost: instance.cost(),
        m,
        n,
        supply,
        demand,
        current: vec![0; m * n],
        best: None,
        explored: 0,
    };
    search.visit(0, int(0));
    let (optimum, flat) = search
        .best
        .expect("a balanced instance with integral marginals has an integer plan");
    let plan = TransportPlan::from_entries(
        flat.iter()
            .enumerate()
            .map(|(k, &q)| ((k / n, k % n), Rational::from_integer(BigInt::from(q)))),
    )?;
    Ok(OracleResult {
        optimum,
        plan,
        explored: search.explored,
    })
}

/// Minimum over all `n!` permutations; the lexicographically smallest
/// minimiser wins ties. Requires `n ≤ 8`.
pub fn enumerate_assignment(cost: &Matrix) -> Result<(Vec<usize>, Rational)> {
    if !cost.is_square() {
        return Err(Error::NotSquare {
            rows: cost.rows(),
            cols: cost.cols(),
        });
    }
    let n = cost.rows();
    if n > MAX_ASSIGNMENT_ORDER {
        return Err(Error::TooLarge {
            what: "assignment order",
            size: n,
            limit: MAX_ASSIGNMENT_ORDER,
        });
    }

    fn go(
        cost: &Matrix,
        row: usize,
        used: &mut [bool],
        perm: &mut Vec<usize>,
        partial: Rational,
        best: &mut Option<(Vec<usize>, Rational)>,
    ) {
        let n = used.len();
        if row == n {
            if best.as_ref().is_none_or(|(_, b)| partial < *b) {
                *best = Some((perm.clone(), partial));
            }
            return;
        }
        for col in 0..n {
            if used[col] {
                continue;
            }
            used[col] = true;
            perm.push(col);
            go(
                cost,
                row + 1,
                used,
                perm,
                &partial + &cost[(row, col)],
                best,
            );
            perm.pop();
            used[col] = false;
        }
    }

    let mut best = None;
    go(
        cost,
        0,
        &mut vec![false; n],
        &mut Vec::with_capacity(n),
        int(0),
        &mut best,
    );
    Ok(best.unwrap_or((Vec::new(), int(0))))
}
