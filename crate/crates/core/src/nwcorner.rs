//! North West corner rule and the cost structures on which it is optimal.
//!
//! The rule is optimal whenever the cost matrix satisfies the Monge
//! condition `c_ij + c_rs <= c_rj + c_is` for all `i < r`, `j < s`. That
//! covers factored costs `x_i y_j` (with `x` nonincreasing and `y`
//! nondecreasing), sum costs `x_i + y_j`, and convex difference costs
//! `f(x_i - y_j)` with sorted `x`, `y` and convex `f`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::{int, ratio, Cell, Error, Matrix, Rational, Result, TransportInstance, TransportPlan};

/// Runs the North West corner rule.
pub fn north_west_corner(instance: &TransportInstance) -> TransportPlan {
    north_west_corner_basis(instance).0
}

/// Runs the North West corner rule and also returns the zero-flow cells the
/// staircase walk passed through.
///
/// The walk always visits exactly `m + n - 1` cells from `(1,1)` to `(m,n)`,
/// so support plus the returned cells is a spanning tree usable as hints for
/// [`TransportInstance::compute_duals_from_plan`].
///
/// When a supply and a demand run out together the walk moves right first.
pub fn north_west_corner_basis(instance: &TransportInstance) -> (TransportPlan, Vec<Cell>) {
    let (m, n) = (instance.rows(), instance.cols());
    let mut supply = instance.supply().to_vec();
    let mut demand = instance.demand().to_vec();
    let mut plan = TransportPlan::new();
    let mut degenerate = Vec::new();
    let (mut i, mut j) = (0, 0);
    loop {
        let qty = supply[i].clone().min(demand[j].clone());
        supply[i] -= &qty;
        demand[j] -= &qty;
        if qty.is_zero() {
            degenerate.push((i, j));
        } else {
            plan.add((i, j), qty).expect("shipped quantity is positive");
        }
        if demand[j].is_zero() && j + 1 < n {
            j += 1;
        } else if i + 1 < m {
            i += 1;
        } else if j + 1 < n {
            j += 1;
        } else {
            break;
        }
    }
    (plan, degenerate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MongeMode {
    /// Consecutive 2×2 submatrices only, `O(mn)`.
    Adjacent,
    /// Every `i < r`, `j < s`, `O(m²n²)`.
    Exhaustive,
}

impl FromStr for MongeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adjacent" => Ok(MongeMode::Adjacent),
            "exhaustive" => Ok(MongeMode::Exhaustive),
            other => Err(format!("unknown Monge mode `{other}`")),
        }
    }
}

/// A quadruple with `c_ij + c_rs > c_rj + c_is`. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MongeWitness {
    pub i: usize,
    pub j: usize,
    pub r: usize,
    pub s: usize,
    /// `c_ij + c_rs`
    pub diagonal: Rational,
    /// `c_rj + c_is`
    pub anti_diagonal: Rational,
}

impl fmt::Display for MongeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, r, s) = (self.i + 1, self.j + 1, self.r + 1, self.s + 1);
        write!(
            f,
            "({i},{j},{r},{s}): c({i},{j}) + c({r},{s}) = {} > c({r},{j}) + c({i},{s}) = {}",
            self.diagonal, self.anti_diagonal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MongeReport {
    pub holds: bool,
    pub witness: Option<MongeWitness>,
}

/// Checks the Monge condition. Both modes give the same verdict; the
/// reported witness is the lexicographically first `(i, j, r, s)` among the
/// quadruples the mode inspects.
pub fn check_monge(cost: &Matrix, mode: MongeMode) -> MongeReport {
    let (m, n) = (cost.rows(), cost.cols());
    let test = |i: usize, j: usize, r: usize, s: usize| {
        let diagonal = &cost[(i, j)] + &cost[(r, s)];
        let anti_diagonal = &cost[(r, j)] + &cost[(i, s)];
        (diagonal > anti_diagonal).then_some(MongeWitness {
            i,
            j,
            r,
            s,
            diagonal,
            anti_diagonal,
        })
    };
    let witness = match mode {
        MongeMode::Adjacent => (0..m.saturating_sub(1))
            .flat_map(|i| (0..n.saturating_sub(1)).map(move |j| (i, j)))
            .find_map(|(i, j)| test(i, j, i + 1, j + 1)),
        MongeMode::Exhaustive => (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .flat_map(|(i, j)| (i + 1..m).flat_map(move |r| (j + 1..n).map(move |s| (i, j, r, s))))
            .find_map(|(i, j, r, s)| test(i, j, r, s)),
    };
    MongeReport {
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingWarning {
    XNotNonincreasing { index: usize },
    YNotNondecreasing { index: usize },
    NegativeX { index: usize },
    NegativeY { index: usize },
}

impl fmt::Display for OrderingWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OrderingWarning::XNotNonincreasing { index } => {
                write!(f, "x is not nonincreasing at position {}", index + 1)
            }
            OrderingWarning::YNotNondecreasing { index } => {
                write!(f, "y is not nondecreasing at position {}", index + 1)
            }
            OrderingWarning::NegativeX { index } => write!(f, "x[{}] is negative", index + 1),
            OrderingWarning::NegativeY { index } => write!(f, "y[{}] is negative", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredCost {
    pub cost: Matrix,
    /// Empty when the hypotheses for NW optimality hold.
    pub warnings: Vec<OrderingWarning>,
}

/// `c_ij = x_i · y_j`.
///
/// NW optimality needs nonnegative `x` nonincreasing and nonnegative `y`
/// nondecreasing; violations are reported as warnings and the matrix is
/// built regardless.
pub fn factored_cost(x: &[Rational], y: &[Rational]) -> FactoredCost {
    let mut warnings = Vec::new();
    if let Some(index) = x.windows(2).position(|w| w[1] > w[0]) {
        warnings.push(OrderingWarning::XNotNonincreasing { index: index + 1 });
    }
    if let Some(index) = y.windows(2).position(|w| w[1] < w[0]) {
        warnings.push(OrderingWarning::YNotNondecreasing { index: index + 1 });
    }
    if let Some(index) = x.iter().position(Signed::is_negative) {
        warnings.push(OrderingWarning::NegativeX { index });
    }
    if let Some(index) = y.iter().position(Signed::is_negative) {
        warnings.push(OrderingWarning::NegativeY { index });
    }
    FactoredCost {
        cost: Matrix::from_fn(x.len(), y.len(), |i, j| &x[i] * &y[j]),
        warnings,
    }
}

/// `c_ij = x_i + y_j`. Every feasible plan on such a matrix costs
/// `Σ a_i x_i + Σ b_j y_j`.
pub fn sum_cost(x: &[Rational], y: &[Rational]) -> Matrix {
    Matrix::from_fn(x.len(), y.len(), |i, j| &x[i] + &y[j])
}

/// The convex cost shapes the CLI knows by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `t²`
    Square,
    /// `|t|`
    Abs,
    /// `max(0, t)`
    PositivePart,
}

impl Shape {
    pub fn eval(self, t: &Rational) -> Rational {
        match self {
            Shape::Square => t * t,
            Shape::Abs => t.abs(),
            Shape::PositivePart => t.clone().max(int(0)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Square => "square",
            Shape::Abs => "abs",
            Shape::PositivePart => "pos",
        }
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "square" => Ok(Shape::Square),
            "abs" => Ok(Shape::Abs),
            "pos" | "max0" => Ok(Shape::PositivePart),
            other => Err(format!(
                "unknown cost shape `{other}` (expected square, abs or pos)"
            )),
        }
    }
}

fn check_sorted(what: &'static str, v: &[Rational]) -> Result<()> {
    match v.windows(2).position(|w| w[1] < w[0]) {
        Some(index) => Err(Error::Unsorted {
            what,
            index: index + 1,
        }),
        None => Ok(()),
    }
}

/// `c_ij = f(x_i - y_j)` for nondecreasing `x` and `y`.
///
/// Convexity of `f` is the caller's responsibility; see
/// [`spot_check_convexity`].
pub fn convex_diff_cost<F>(x: &[Rational], y: &[Rational], f: F) -> Result<Matrix>
where
    F: Fn(&Rational) -> Rational,
{
    check_sorted("x", x)?;
    check_sorted("y", y)?;
    Ok(Matrix::from_fn(
        x.len(),
        y.len(),
        |i, j| f(&(&x[i] - &y[j])),
    ))
}

/// Midpoint test `f((a+b)/2) <= (f(a)+f(b))/2` over every pair of sample
/// points. Passing is evidence, not proof.
pub fn spot_check_convexity<F>(f: F, samples: &[Rational]) -> bool
where
    F: Fn(&Rational) -> Rational,
{
    let half = ratio(1, 2);
    samples.iter().enumerate().all(|(k, a)| {
        samples[k + 1..].iter().all(|b| {
            let mid = (a + b) * &half;
            f(&mid) <= (f(a) + f(b)) * &half
        })
    })
}

/// Two discrete random variables with given marginals, coupled so as to
/// minimise `E f(X - Y)`.
#[derive(Debug, Clone)]
pub struct ProblemPSpec<F> {
    /// Values of `X`, nondecreasing.
    pub x: Vec<Rational>,
    /// Values of `Y`, nondecreasing.
    pub y: Vec<Rational>,
    /// `P(X = x_i)`
    pub p_row: Vec<Rational>,
    /// `P(Y = y_j)`
    pub p_col: Vec<Rational>,
    pub f: F,
}

/// Builds the transportation instance for a coupling problem: supplies are
/// the row marginals, demands the column marginals, `c_ij = f(x_i - y_j)`.
pub fn problem_p_instance<F>(spec: &ProblemPSpec<F>) -> Result<TransportInstance>
where
    F: Fn(&Rational) -> Rational,
{
    if spec.x.len() != spec.p_row.len() {
        return Err(Error::DimensionMismatch {
            what: "row marginals",
            expected: spec.x.len(),
            got: spec.p_row.len(),
        });
    }
    if spec.y.len() != spec.p_col.len() {
        return Err(Error::DimensionMismatch {
            what: "column marginals",
            expected: spec.y.len(),
            got: spec.p_col.len(),
        });
    }
    let rows: Rational = spec.p_row.iter().sum();
    let cols: Rational = spec.p_col.iter().sum();
    if rows != int(1) || cols != int(1) {
        return Err(Error::BadMarginals { rows, cols });
    }
    let cost = convex_diff_cost(&spec.x, &spec.y, &spec.f)?;
    TransportInstance::new(cost, spec.p_row.clone(), spec.p_col.clone())
}
