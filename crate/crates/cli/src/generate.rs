//! Instance builders behind `transport generate`.

use std::str::FromStr;

use transport_core::nwcorner::{self, OrderingWarning, ProblemPSpec, Shape};
use transport_core::{int, Matrix, Rational, Result, TransportInstance};

/// Parses `1,2/3,-4` into rationals.
pub fn parse_list(s: &str) -> std::result::Result<Vec<Rational>, String> {
    s.split(',')
        .map(str::trim)
        .map(|t| Rational::from_str(t).map_err(|e| format!("bad number `{t}` in list: {e}")))
        .collect()
}

fn marginals(given: Option<Vec<Rational>>, len: usize) -> Vec<Rational> {
    given.unwrap_or_else(|| vec![int(1); len])
}

/// Supplies and demands; missing ones default to all ones.
#[derive(Debug, Clone, Default)]
pub struct Marginals {
    pub supply: Option<Vec<Rational>>,
    pub demand: Option<Vec<Rational>>,
}

impl Marginals {
    fn build(self, cost: Matrix) -> Result<TransportInstance> {
        let (m, n) = (cost.rows(), cost.cols());
        TransportInstance::new(cost, marginals(self.supply, m), marginals(self.demand, n))
    }
}

pub fn factored(
    x: &[Rational],
    y: &[Rational],
    marg: Marginals,
) -> Result<(TransportInstance, Vec<OrderingWarning>)> {
    let built = nwcorner::factored_cost(x, y);
    Ok((marg.build(built.cost)?, built.warnings))
}

pub fn sum(x: &[Rational], y: &[Rational], marg: Marginals) -> Result<TransportInstance> {
    marg.build(nwcorner::sum_cost(x, y))
}

pub fn convex_diff(
    x: &[Rational],
    y: &[Rational],
    shape: Shape,
    marg: Marginals,
) -> Result<TransportInstance> {
    marg.build(nwcorner::convex_diff_cost(x, y, |t| shape.eval(t))?)
}

pub fn problem_p(
    x: Vec<Rational>,
    y: Vec<Rational>,
    shape: Shape,
    p_row: Vec<Rational>,
    p_col: Vec<Rational>,
) -> Result<TransportInstance> {
    nwcorner::problem_p_instance(&ProblemPSpec {
        x,
        y,
        p_row,
        p_col,
        f: |t: &Rational| shape.eval(t),
    })
}

/// `c_ij = |i - j|`.
pub fn survey(m: usize, n: usize, marg: Marginals) -> Result<TransportInstance> {
    let cost = Matrix::from_fn(m, n, |i, j| int(i.abs_diff(j) as i64));
    marg.build(cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use transport_core::ratio;

    #[test]
    fn survey_unit() {
        let inst = survey(3, 3, Marginals::default()).unwrap();
        assert_eq!(
            *inst.cost(),
            Matrix::from_i64(3, 3, &[0, 1, 2, 1, 0, 1, 2, 1, 0])
        );
        assert!(survey(2, 3, Marginals::default()).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(
            parse_list("1, 2/3,-4").unwrap(),
            vec![int(1), ratio(2, 3), int(-4)]
        );
        assert!(parse_list("1,,2").is_err());
    }

    #[test]
    fn sum_matrix() {
        let inst = sum(
            &parse_list("1,2").unwrap(),
            &parse_list("10,20").unwrap(),
            Marginals::default(),
        )
        .unwrap();
        assert_eq!(*inst.cost(), Matrix::from_i64(2, 2, &[11, 21, 12, 22]));
    }
}
