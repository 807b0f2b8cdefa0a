use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`, `d_i >= 0`.
///
/// The inverses of both transforms are tracked alongside them.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

struct Reducer {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row_i += c * row_j`
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_row_multiple(i, j, c);
        self.u.add_row_multiple(i, j, c);
        self.u_inv.add_col_multiple(j, i, &-c);
    }

    /// `col_i += c * col_j`
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_col_multiple(i, j, c);
        self.v.add_col_multiple(i, j, c);
        self.v_inv.add_row_multiple(j, i, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero |entry| in the trailing submatrix starting at `t`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.a.get(bi, bj).abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }
}

/// Quotient rounding to the nearest integer, which keeps remainders at most half the pivot.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() || (twice.abs() == b.abs() && r.sign() == b.sign()) {
        q + 1
    } else {
        q
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut r = Reducer {
        a: m.clone(),
        u: IntegerMatrix::identity(rows),
        u_inv: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = r.min_pivot(t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.a.get(t, t).clone();
            for i in t + 1..rows {
                let x = r.a.get(i, t);
                if !x.is_zero() {
                    let q = nearest_quotient(x, &pivot);
                    r.add_row(i, t, &-q);
                }
            }
            for j in t + 1..cols {
                let x = r.a.get(t, j);
                if !x.is_zero() {
                    let q = nearest_quotient(x, &pivot);
                    r.add_col(j, t, &-q);
                }
            }
            // A smaller remainder in the pivot row/column becomes the new pivot.
            let mut smaller: Option<(usize, usize)> = None;
            let mut best = pivot.abs();
            for i in t + 1..rows {
                let x = r.a.get(i, t);
                if !x.is_zero() && x.abs() < best {
                    best = x.abs();
                    smaller = Some((i, t));
                }
            }
            for j in t + 1..cols {
                let x = r.a.get(t, j);
                if !x.is_zero() && x.abs() < best {
                    best = x.abs();
                    smaller = Some((t, j));
                }
            }
            if let Some((i, j)) = smaller {
                r.swap_rows(t, i);
                r.swap_cols(t, j);
                continue;
            }
            let column_clear = (t + 1..rows).all(|i| r.a.get(i, t).is_zero());
            let row_clear = (t + 1..cols).all(|j| r.a.get(t, j).is_zero());
            if !(column_clear && row_clear) {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !r.a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a.get(t, t).is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..rows.min(cols))
        .take_while(|&i| !r.a.get(i, i).is_zero())
        .count();
    SmithForm {
        d: r.a,
        u: r.u,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
        rank,
    }
}

/// Solves `b * c == v` over the integers for many right-hand sides against one matrix.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    snf: SmithForm,
}

impl LatticeSolver {
    pub fn new(b: &IntegerMatrix) -> Self {
        LatticeSolver {
            snf: smith_normal_form(b),
        }
    }

    pub fn rows(&self) -> usize {
        self.snf.d.rows()
    }

    /// An integer solution `c`, or `None` when `v` is outside the column lattice of `b`.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.snf.u.mul_vec(v);
        let rank = self.snf.rank;
        let mut y = vec![BigInt::zero(); self.snf.d.cols()];
        for (i, wi) in w.iter().enumerate() {
            if i < rank {
                let (q, rem) = wi.div_rem(self.snf.d.get(i, i));
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    /// A basis of the integer kernel `{c : b * c == 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.snf.rank..self.snf.v.cols())
            .map(|j| self.snf.v.column(j))
            .collect()
    }
}
