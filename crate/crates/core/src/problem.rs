use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Pos;
use crate::{int, to_u64, Error, Matrix, Rational, Result};

/// Zero-based `(row, column)` index.
pub type Cell = (usize, usize);

/// A balanced transportation problem.
///
/// Immutable once built; [`TransportInstance::new`] is the only way in and it
/// enforces nonnegative marginals and `Σ supply = Σ demand`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportInstance {
    cost: Matrix,
    supply: Vec<Rational>,
    demand: Vec<Rational>,
    eta: Rational,
}

impl TransportInstance {
    pub fn new(cost: Matrix, supply: Vec<Rational>, demand: Vec<Rational>) -> Result<Self> {
        if supply.is_empty() || demand.is_empty() {
            return Err(Error::EmptyInstance {
                rows: supply.len(),
                cols: demand.len(),
            });
        }
        if cost.rows() != supply.len() {
            return Err(Error::DimensionMismatch {
                what: "cost matrix rows",
                expected: supply.len(),
                got: cost.rows(),
            });
        }
        if cost.cols() != demand.len() {
            return Err(Error::DimensionMismatch {
                what: "cost matrix columns",
                expected: demand.len(),
                got: cost.cols(),
            });
        }
        check_nonnegative("supply", &supply)?;
        check_nonnegative("demand", &demand)?;
        let total_supply: Rational = supply.iter().sum();
        let total_demand: Rational = demand.iter().sum();
        if total_supply != total_demand {
            return Err(Error::Unbalanced {
                supply: total_supply,
                demand: total_demand,
            });
        }
        Ok(TransportInstance {
            cost,
            supply,
            demand,
            eta: total_supply,
        })
    }

    pub fn rows(&self) -> usize {
        self.supply.len()
    }

    pub fn cols(&self) -> usize {
        self.demand.len()
    }

    pub fn cost(&self) -> &Matrix {
        &self.cost
    }

    pub fn supply(&self) -> &[Rational] {
        &self.supply
    }

    pub fn demand(&self) -> &[Rational] {
        &self.demand
    }

    /// Total shipped quantity `Σ a_i = Σ b_j`.
    pub fn eta(&self) -> &Rational {
        &self.eta
    }

    /// True when every supply and demand is an integer.
    pub fn has_integral_marginals(&self) -> bool {
        self.supply
            .iter()
            .chain(&self.demand)
            .all(|v| v.is_integer())
    }

    /// Marginals as `u64`, or the first offending value.
    pub fn integral_marginals(&self) -> Result<(Vec<u64>, Vec<u64>)> {
        let conv = |what: &'static str, vals: &[Rational]| -> Result<Vec<u64>> {
            vals.iter()
                .map(|v| {
                    to_u64(v).ok_or_else(|| Error::NonIntegral {
                        what,
                        value: v.clone(),
                    })
                })
                .collect()
        };
        Ok((conv("supply", &self.supply)?, conv("demand", &self.demand)?))
    }

    fn check_cell(&self, (row, col): Cell) -> Result<()> {
        if row >= self.rows() || col >= self.cols() {
            return Err(Error::OutOfRange {
                row,
                col,
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(())
    }

    /// Total cost `Σ c_ij x_ij` of a plan.
    pub fn plan_cost(&self, plan: &TransportPlan) -> Result<Rational> {
        let mut total = int(0);
        for (&cell, qty) in plan.iter() {
            self.check_cell(cell)?;
            total += &self.cost[cell] * qty;
        }
        Ok(total)
    }

    /// Checks every row and column constraint exactly.
    pub fn is_feasible(&self, plan: &TransportPlan) -> Result<FeasibilityReport> {
        let mut row_sums = vec![int(0); self.rows()];
        let mut col_sums = vec![int(0); self.cols()];
        for (&(i, j), qty) in plan.iter() {
            self.check_cell((i, j))?;
            row_sums[i] += qty;
            col_sums[j] += qty;
        }
        let rows = row_sums
            .into_iter()
            .zip(&self.supply)
            .enumerate()
            .map(|(i, (s, a))| (Line::Row(i), a, s));
        let cols = col_sums
            .into_iter()
            .zip(&self.demand)
            .enumerate()
            .map(|(j, (s, b))| (Line::Column(j), b, s));
        let violations = rows
            .chain(cols)
            .filter(|(_, required, shipped)| *required != shipped)
            .map(|(line, required, shipped)| Violation {
                line,
                residual: required - &shipped,
                required: required.clone(),
                shipped,
            })
            .collect();
        Ok(FeasibilityReport { violations })
    }

    /// Checks dual feasibility everywhere and complementary slackness on the
    /// plan's support. Infeasible plans are rejected before the certificate
    /// is looked at.
    pub fn verify_optimal(
        &self,
        plan: &TransportPlan,
        cert: &DualCertificate,
    ) -> Result<OptimalityReport> {
        let report = self.is_feasible(plan)?;
        if let Some(v) = report.first_violation() {
            return Err(Error::InfeasiblePlan(v.to_string()));
        }
        self.check_certificate_shape(cert)?;
        for (i, j, cost) in self.cost.iter_cells() {
            let potential = &cert.alpha[i] + &cert.beta[j];
            if potential > *cost {
                return Ok(OptimalityReport {
                    violation: Some(CertificateViolation::DualInfeasible {
                        cell: (i, j),
                        potential,
                        cost: cost.clone(),
                    }),
                });
            }
            if let Some(qty) = plan.get((i, j)) {
                if potential != *cost {
                    return Ok(OptimalityReport {
                        violation: Some(CertificateViolation::SlacknessGap {
                            cell: (i, j),
                            potential,
                            cost: cost.clone(),
                            quantity: qty.clone(),
                        }),
                    });
                }
            }
        }
        Ok(OptimalityReport { violation: None })
    }

    /// First cell where `α_i + β_j > c_ij`, if any.
    pub fn dual_infeasibility(&self, cert: &DualCertificate) -> Result<Option<Cell>> {
        self.check_certificate_shape(cert)?;
        Ok(self
            .cost
            .iter_cells()
            .find(|&(i, j, c)| &cert.alpha[i] + &cert.beta[j] > *c)
            .map(|(i, j, _)| (i, j)))
    }

    fn check_certificate_shape(&self, cert: &DualCertificate) -> Result<()> {
        if cert.alpha.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                what: "alpha",
                expected: self.rows(),
                got: cert.alpha.len(),
            });
        }
        if cert.beta.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                what: "beta",
                expected: self.cols(),
                got: cert.beta.len(),
            });
        }
        Ok(())
    }

    /// Solves `α_i + β_j = c_ij` over the plan's support plus `hints`
    /// (zero-flow basic cells of a degenerate basis), normalised by `α_1 = 0`.
    ///
    /// The cells must form a spanning tree of the bipartite row/column graph.
    /// A cycle means the plan is not basic; a forest with several components
    /// means the basis is degenerate and more hint cells are needed.
    pub fn compute_duals_from_plan(
        &self,
        plan: &TransportPlan,
        hints: &[Cell],
    ) -> Result<DualCertificate> {
        let (m, n) = (self.rows(), self.cols());
        let mut cells: BTreeSet<Cell> = BTreeSet::new();
        for &cell in plan.cells().chain(hints) {
            self.check_cell(cell)?;
            cells.insert(cell);
        }

        let mut forest = DisjointSets::new(m + n);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); m + n];
        for &(i, j) in &cells {
            if !forest.union(i, m + j) {
                return Err(Error::CyclicSupport { row: i, col: j });
            }
            adjacency[i].push(m + j);
            adjacency[m + j].push(i);
        }
        let components = forest.components();
        if components > 1 {
            return Err(Error::DegenerateSupport { components });
        }

        let mut potential: Vec<Option<Rational>> = vec![None; m + n];
        potential[0] = Some(int(0));
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let pu = potential[u].clone().expect("visited node has a potential");
            for &v in &adjacency[u] {
                if potential[v].is_some() {
                    continue;
                }
                let (i, j) = if u < m { (u, v - m) } else { (v, u - m) };
                potential[v] = Some(&self.cost[(i, j)] - &pu);
                queue.push_back(v);
            }
        }
        let mut values = potential.into_iter().map(|p| p.expect("tree is spanning"));
        let alpha = values.by_ref().take(m).collect();
        let beta = values.collect();
        Ok(DualCertificate { alpha, beta })
    }
}

fn check_nonnegative(what: &'static str, values: &[Rational]) -> Result<()> {
    match values.iter().position(|v| v.is_negative()) {
        Some(index) => Err(Error::Negative {
            what,
            index: index + 1,
            value: values[index].clone(),
        }),
        None => Ok(()),
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}

/// Sparse shipping plan; only strictly positive quantities are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TransportPlan {
    entries: BTreeMap<Cell, Rational>,
}

impl TransportPlan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a plan, summing duplicate cells. Zero quantities are dropped;
    /// negative ones are an error.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Rational)>,
    {
        let mut plan = TransportPlan::new();
        for (cell, qty) in entries {
            plan.add(cell, qty)?;
        }
        Ok(plan)
    }

    /// Adds `qty` to a cell.
    pub fn add(&mut self, (row, col): Cell, qty: Rational) -> Result<()> {
        if qty.is_negative() {
            return Err(Error::NonPositiveQuantity {
                row,
                col,
                value: qty,
            });
        }
        if qty.is_zero() {
            return Ok(());
        }
        *self.entries.entry((row, col)).or_insert_with(|| int(0)) += qty;
        Ok(())
    }

    pub fn get(&self, cell: Cell) -> Option<&Rational> {
        self.entries.get(&cell)
    }

    /// Entries in `(row, column)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &Rational)> {
        self.entries.iter()
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.entries.values().sum()
    }
}

/// Row and column potentials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualCertificate {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl DualCertificate {
    /// `Σ α_i a_i + Σ β_j b_j`.
    pub fn dual_objective(&self, instance: &TransportInstance) -> Rational {
        let rows: Rational = self
            .alpha
            .iter()
            .zip(instance.supply())
            .map(|(a, s)| a * s)
            .sum();
        let cols: Rational = self
            .beta
            .iter()
            .zip(instance.demand())
            .map(|(b, d)| b * d)
            .sum();
        rows + cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {}", i + 1),
            Line::Column(j) => write!(f, "column {}", j + 1),
        }
    }
}

/// A violated marginal constraint. `residual = required - shipped`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub line: Line,
    pub required: Rational,
    pub shipped: Rational,
    pub residual: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ships {} but requires {} (residual {})",
            self.line, self.shipped, self.required, self.residual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// Row violations first, then columns, each in index order.
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateViolation {
    /// `α_i + β_j > c_ij`.
    DualInfeasible {
        cell: Cell,
        potential: Rational,
        cost: Rational,
    },
    /// Positive flow on a cell where `α_i + β_j < c_ij`.
    SlacknessGap {
        cell: Cell,
        potential: Rational,
        cost: Rational,
        quantity: Rational,
    },
}

impl CertificateViolation {
    pub fn cell(&self) -> Cell {
        match self {
            CertificateViolation::DualInfeasible { cell, .. }
            | CertificateViolation::SlacknessGap { cell, .. } => *cell,
        }
    }
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateViolation::DualInfeasible {
                cell,
                potential,
                cost,
            } => write!(
                f,
                "dual infeasible at {}: alpha+beta = {} > cost {}",
                Pos(cell.0, cell.1),
                potential,
                cost
            ),
            CertificateViolation::SlacknessGap {
                cell,
                potential,
                cost,
                quantity,
            } => write!(
                f,
                "slackness broken at {}: flow {} but alpha+beta = {} < cost {}",
                Pos(cell.0, cell.1),
                quantity,
                potential,
                cost
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityReport {
    /// Lexicographically first offending cell, if any.
    pub violation: Option<CertificateViolation>,
}

impl OptimalityReport {
    pub fn is_optimal(&self) -> bool {
        self.violation.is_none()
    }
}
