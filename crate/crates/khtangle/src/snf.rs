//! Smith normal form over the integers with unimodular certificates.
//!
//! `smith_normal_form` returns D = U·A·V with U, V invertible over Z (their
//! inverses are tracked alongside), D diagonal with each entry dividing the
//! next.  All arithmetic uses arbitrary-precision integers; intermediate
//! entries in integer elimination can grow well past any fixed width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = dims(a);
    let (rb, cb) = dims(b);
    assert_eq!(ca, rb, "dimension mismatch in matrix product");
    let mut out = zeros(ra, cb);
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                if !b[k][j].is_zero() {
                    let t = &a[i][k] * &b[k][j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

pub fn dims(a: &Mat) -> (usize, usize) {
    (a.len(), a.first().map_or(0, |r| r.len()))
}

pub fn is_identity(a: &Mat) -> bool {
    let (r, c) = dims(a);
    r == c
        && a.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
}

pub struct Snf {
    /// The diagonal matrix U·A·V.
    pub d: Mat,
    pub u: Mat,
    pub u_inv: Mat,
    pub v: Mat,
    pub v_inv: Mat,
    pub rank: usize,
}

impl Snf {
    /// The nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith_normal_form(a: &Mat) -> Snf {
    let (rows, cols) = dims(a);
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);

    // Row operations: d <- E d, u <- E u, u_inv <- u_inv E^{-1}.
    fn row_add(d: &mut Mat, u: &mut Mat, u_inv: &mut Mat, dst: usize, src: usize, c: &BigInt) {
        for j in 0..d[dst].len() {
            let t = c * &d[src][j];
            d[dst][j] += t;
        }
        for j in 0..u[dst].len() {
            let t = c * &u[src][j];
            u[dst][j] += t;
        }
        // Inverse of (dst += c*src) is (dst -= c*src); applied on the right
        // it becomes a column operation: col src -= c * col dst.
        for r in u_inv.iter_mut() {
            let t = c * &r[dst];
            r[src] -= t;
        }
    }
    fn row_swap(d: &mut Mat, u: &mut Mat, u_inv: &mut Mat, i: usize, j: usize) {
        d.swap(i, j);
        u.swap(i, j);
        for r in u_inv.iter_mut() {
            r.swap(i, j);
        }
    }
    fn row_neg(d: &mut Mat, u: &mut Mat, u_inv: &mut Mat, i: usize) {
        for x in d[i].iter_mut() {
            *x = -x.clone();
        }
        for x in u[i].iter_mut() {
            *x = -x.clone();
        }
        for r in u_inv.iter_mut() {
            r[i] = -r[i].clone();
        }
    }
    // Column operations: d <- d E, v <- v E, v_inv <- E^{-1} v_inv.
    fn col_add(d: &mut Mat, v: &mut Mat, v_inv: &mut Mat, dst: usize, src: usize, c: &BigInt) {
        for r in d.iter_mut() {
            let t = c * &r[src];
            r[dst] += t;
        }
        for r in v.iter_mut() {
            let t = c * &r[src];
            r[dst] += t;
        }
        for j in 0..v_inv[src].len() {
            let t = c * &v_inv[dst][j];
            v_inv[src][j] -= t;
        }
    }
    fn col_swap(d: &mut Mat, v: &mut Mat, v_inv: &mut Mat, i: usize, j: usize) {
        for r in d.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
        v_inv.swap(i, j);
    }
    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // Find the nonzero entry of smallest absolute value in the
        // remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(&mut d, &mut u, &mut u_inv, t, pi);
        col_swap(&mut d, &mut v, &mut v_inv, t, pj);
        if d[t][t].is_negative() {
            row_neg(&mut d, &mut u, &mut u_inv, t);
        }
        // Reduce the pivot row and column.
        let mut dirty = false;
        for i in t + 1..rows {
            if !d[i][t].is_zero() {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                }
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..cols {
            if !d[t][j].is_zero() {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_add(&mut d, &mut v, &mut v_inv, j, t, &-q);
                }
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // Pivot divides everything in its row and column; enforce that it
        // divides the rest of the block too.
        let mut offender = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_add(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one());
            continue;
        }
        t += 1;
    }
    let rank = (0..n).take_while(|&i| !d[i][i].is_zero()).count();
    Snf {
        d,
        u,
        u_inv,
        v,
        v_inv,
        rank,
    }
}

/// Columns of `a` spanning its image, as a basis (from the SNF): the column
/// span of `a` has basis d_i · (column i of U⁻¹), i = 0..rank.
pub fn column_span_basis(a: &Mat) -> Mat {
    let (rows, _) = dims(a);
    let s = smith_normal_form(a);
    let mut basis = zeros(rows, s.rank);
    for j in 0..s.rank {
        for i in 0..rows {
            basis[i][j] = &s.u_inv[i][j] * &s.d[j][j];
        }
    }
    basis
}

/// A basis of the integer kernel of `a` (as columns).
pub fn kernel_basis(a: &Mat) -> Mat {
    let (_, cols) = dims(a);
    let s = smith_normal_form(a);
    let mut out = zeros(cols, cols - s.rank);
    for (k, j) in (s.rank..cols).enumerate() {
        for i in 0..cols {
            out[i][k] = s.v[i][j].clone();
        }
    }
    out
}

/// Solve a·x = b for each column of `b`; returns None if some column has no
/// integral solution.
pub fn solve(a: &Mat, b: &Mat) -> Option<Mat> {
    let (rows, cols) = dims(a);
    let (rb, cb) = dims(b);
    assert_eq!(rows, rb);
    let s = smith_normal_form(a);
    let ub = mat_mul(&s.u, b);
    let mut y = zeros(cols, cb);
    for j in 0..cb {
        for i in 0..rows {
            if i < s.rank {
                let (q, r) = ub[i][j].div_rem(&s.d[i][i]);
                if !r.is_zero() {
                    return None;
                }
                y[i][j] = q;
            } else if !ub[i][j].is_zero() {
                return None;
            }
        }
    }
    Some(mat_mul(&s.v, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &Mat) {
        let s = smith_normal_form(a);
        assert_eq!(mat_mul(&mat_mul(&s.u, a), &s.v), s.d);
        assert!(is_identity(&mat_mul(&s.u, &s.u_inv)));
        assert!(is_identity(&mat_mul(&s.v, &s.v_inv)));
        let (rows, cols) = dims(a);
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        for i in 0..s.rank.saturating_sub(1) {
            assert!((&s.d[i + 1][i + 1] % &s.d[i][i]).is_zero());
            assert!(!s.d[i][i].is_negative());
        }
        for i in s.rank..rows.min(cols) {
            assert!(s.d[i][i].is_zero());
        }
    }

    #[test]
    fn small_examples() {
        check(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        check(&from_i64(&[vec![0, 0], vec![0, 0]]));
        check(&from_i64(&[vec![1]]));
        check(&from_i64(&[vec![2, 0], vec![0, 3]]));
        let s = smith_normal_form(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn kernel_and_solve() {
        let a = from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(dims(&k).1, 2);
        let prod = mat_mul(&a, &k);
        assert!(prod.iter().all(|r| r.iter().all(|x| x.is_zero())));
        let b = from_i64(&[vec![3], vec![6]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_mul(&a, &x), b);
        let b2 = from_i64(&[vec![1], vec![1]]);
        assert!(solve(&a, &b2).is_none());
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 1usize..5, cols in 1usize..5,
                           seed in proptest::collection::vec(-20i64..20, 25)) {
            let a: Mat = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect())
                .collect();
            check(&a);
        }
    }
}
