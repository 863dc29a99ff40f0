//! Random generators for property tests and experiments.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::{int, ratio, Matrix, Rational, TransportInstance, TransportPlan};

/// Splits `total` into `parts` nonnegative integers, uniformly over
/// compositions.
pub fn random_marginals<R: Rng + ?Sized>(rng: &mut R, parts: usize, total: u64) -> Vec<Rational> {
    assert!(parts > 0, "need at least one part");
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(parts);
    for c in cuts.into_iter().chain([total]) {
        out.push(int((c - prev) as i64));
        prev = c;
    }
    out
}

pub fn random_integer_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(lo..=hi)))
}

/// Random rationals with denominator in `1..=max_den`, sorted nondecreasing.
pub fn random_sorted_rationals<R: Rng + ?Sized>(
    rng: &mut R,
    len: usize,
    max_abs_num: i64,
    max_den: i64,
) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..len)
        .map(|_| {
            ratio(
                rng.gen_range(-max_abs_num..=max_abs_num),
                rng.gen_range(1..=max_den),
            )
        })
        .collect();
    v.sort();
    v
}

/// A random feasible plan, usually fractional and usually not a vertex.
///
/// Cells are visited twice in random orders: the first pass ships a random
/// fraction of what is still available, the second ships everything it can.
/// After the second pass every row and column is exhausted, because a row
/// with leftover supply would have found each column already exhausted.
pub fn random_feasible_plan<R: Rng + ?Sized>(
    rng: &mut R,
    instance: &TransportInstance,
) -> TransportPlan {
    let (m, n) = (instance.rows(), instance.cols());
    let mut supply = instance.supply().to_vec();
    let mut demand = instance.demand().to_vec();
    let mut plan = TransportPlan::new();
    let mut cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    for pass in 0..2 {
        cells.shuffle(rng);
        for &(i, j) in &cells {
            let room = supply[i].clone().min(demand[j].clone());
            if room.is_zero() {
                continue;
            }
            let qty = if pass == 0 {
                let k = rng.gen_range(0..=4);
                room * ratio(k, 4)
            } else {
                room
            };
            supply[i] -= &qty;
            demand[j] -= &qty;
            plan.add((i, j), qty)
                .expect("shipped quantity is nonnegative");
        }
    }
    debug_assert!(supply.iter().chain(&demand).all(Zero::is_zero));
    plan
}
