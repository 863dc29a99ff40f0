//! Block expansion of a transportation problem into an `η × η` assignment
//! problem: row `i` is copied `a_i` times and column `j` is copied `b_j`
//! times.

use crate::{int, Error, Matrix, Rational, Result, TransportInstance, TransportPlan};

use super::solve_weighted_hungarian;

pub const DEFAULT_EXPANSION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    /// `cost[(p, q)] = c[row_block[p]][col_block[q]]`.
    pub cost: Matrix,
    /// Original row for each expanded row.
    pub row_block: Vec<usize>,
    /// Original column for each expanded column.
    pub col_block: Vec<usize>,
}

/// Builds the expanded matrix. Fails if `η` exceeds `cap`.
pub fn expand_to_assignment(instance: &TransportInstance, cap: usize) -> Result<Expansion> {
    let (supply, demand) = instance.integral_marginals()?;
    let eta = supply.iter().sum::<u64>() as usize;
    if eta > cap {
        return Err(Error::TooLarge {
            what: "expanded assignment order",
            size: eta,
            limit: cap,
        });
    }
    let blocks = |marginals: &[u64]| -> Vec<usize> {
        marginals
            .iter()
            .enumerate()
            .flat_map(|(k, &count)| std::iter::repeat_n(k, count as usize))
            .collect()
    };
    let row_block = blocks(&supply);
    let col_block = blocks(&demand);
    let cost = Matrix::from_fn(eta, eta, |p, q| {
        instance.cost()[(row_block[p], col_block[q])].clone()
    });
    Ok(Expansion {
        cost,
        row_block,
        col_block,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// `permutation[i]` is the column assigned to row `i`.
    pub permutation: Vec<usize>,
    pub cost: Rational,
}

/// Solves a square assignment problem by running the weighted method with
/// unit weights.
pub fn solve_assignment(cost: &Matrix) -> Result<Assignment> {
    if !cost.is_square() {
        return Err(Error::NotSquare {
            rows: cost.rows(),
            cols: cost.cols(),
        });
    }
    let n = cost.rows();
    if n == 0 {
        return Ok(Assignment {
            permutation: Vec::new(),
            cost: int(0),
        });
    }
    let instance = TransportInstance::new(cost.clone(), vec![int(1); n], vec![int(1); n])?;
    let solution = solve_weighted_hungarian(&instance)?;
    let mut permutation = vec![usize::MAX; n];
    for (&(i, j), qty) in solution.plan.iter() {
        debug_assert_eq!(*qty, int(1));
        permutation[i] = j;
    }
    let cost = instance.plan_cost(&solution.plan)?;
    Ok(Assignment { permutation, cost })
}

/// Collapses an expanded assignment back into a plan:
/// `x_ij = |{p in block i : σ(p) in block j}|`.
pub fn aggregate_assignment_solution(
    permutation: &[usize],
    expansion: &Expansion,
) -> Result<TransportPlan> {
    let order = expansion.row_block.len();
    if permutation.len() != order {
        return Err(Error::DimensionMismatch {
            what: "permutation",
            expected: order,
            got: permutation.len(),
        });
    }
    let mut seen = vec![false; order];
    for &q in permutation {
        if q >= order || std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidPermutation(format!(
                "{permutation:?} is not a permutation of 0..{order}"
            )));
        }
    }
    TransportPlan::from_entries(
        permutation
            .iter()
            .enumerate()
            .map(|(p, &q)| ((expansion.row_block[p], expansion.col_block[q]), int(1))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn example_blocks() {
        let inst = TransportInstance::new(
            Matrix::from_i64(3, 4, &[10, 7, 3, 6, 1, 6, 8, 3, 7, 4, 5, 3]),
            ints(&[3, 5, 7]),
            ints(&[3, 2, 6, 4]),
        )
        .unwrap();
        let e = expand_to_assignment(&inst, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!((e.cost.rows(), e.cost.cols()), (15, 15));
        for p in 0..3 {
            for q in 0..3 {
                assert_eq!(e.cost[(p, q)], int(10));
            }
        }
        assert_eq!(e.cost[(3, 3)], int(6));
        assert_eq!(e.cost[(14, 14)], int(3));
        let err = expand_to_assignment(&inst, 10).unwrap_err();
        assert!(matches!(
            err,
            Error::TooLarge {
                size: 15,
                limit: 10,
                ..
            }
        ));
    }

    #[test]
    fn unit_expansion_is_identity() {
        let cost = Matrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let inst = TransportInstance::new(cost.clone(), ints(&[1, 1]), ints(&[1, 1])).unwrap();
        let e = expand_to_assignment(&inst, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(e.cost, cost);
        let plan = aggregate_assignment_solution(&[1, 0], &e).unwrap();
        assert_eq!(
            plan,
            TransportPlan::from_entries([((0, 1), int(1)), ((1, 0), int(1))]).unwrap()
        );
    }

    #[test]
    fn single_row_expansion() {
        let inst =
            TransportInstance::new(Matrix::from_i64(1, 2, &[3, 4]), ints(&[2]), ints(&[1, 1]))
                .unwrap();
        let e = expand_to_assignment(&inst, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(e.cost, Matrix::from_i64(2, 2, &[3, 4, 3, 4]));
        let plan = aggregate_assignment_solution(&[0, 1], &e).unwrap();
        assert_eq!(
            plan,
            TransportPlan::from_entries([((0, 0), int(1)), ((0, 1), int(1))]).unwrap()
        );
        assert!(aggregate_assignment_solution(&[0, 0], &e).is_err());
    }

    #[test]
    fn assignment_examples() {
        let a = solve_assignment(&Matrix::from_i64(2, 2, &[1, 2, 2, 1])).unwrap();
        assert_eq!((a.permutation, a.cost), (vec![0, 1], int(2)));
        let a = solve_assignment(&Matrix::from_i64(2, 2, &[0, 1, 1, 0])).unwrap();
        assert_eq!((a.permutation, a.cost), (vec![0, 1], int(0)));
        assert!(matches!(
            solve_assignment(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
