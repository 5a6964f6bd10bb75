//! Exact rational linear algebra, a small feasibility simplex, and the
//! integer-lattice routines needed for quotient lattices of cones.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::Q;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_iq(a: &[BigInt], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .map(|(x, y)| Q::from_integer(x.clone()) * y)
        .sum()
}

pub fn to_q_vec(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Row-reduces `m` in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..cols {
                    let delta = &f * &m[r][c2];
                    m[i][c2] = &m[i][c2] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Determinant of a square matrix by fraction-free-ish Gaussian elimination.
pub fn det(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    if n == 0 {
        return Q::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut result = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(c, p);
            result = -result;
        }
        let pivot = m[c][c].clone();
        result *= pivot.clone();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for c2 in c..n {
                    let delta = &f * &m[c][c2];
                    m[i][c2] = &m[i][c2] - delta;
                }
            }
        }
    }
    result
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Rank of the affine span of a point set.
pub fn affine_rank(points: &[Vec<Q>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&rows)
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

/// One solution of a (possibly non-square) consistent system `a x = b`.
pub fn solve_any(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    if a.is_empty() {
        return Some(vec![]);
    }
    let n = a[0].len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    // inconsistent iff a pivot lands in the rhs column
    if pivots.iter().any(|&c| c == n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : rows * x = 0}`.
pub fn kernel_basis(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exact feasibility simplex: finds `x` with `cons * x >= rhs` (x free),
/// or `None` when the system is infeasible. Bland's rule, so it terminates.
pub fn feasible_point(cons: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let m = cons.len();
    if m == 0 {
        return Some(vec![]);
    }
    let n = cons[0].len();
    // standard form: cons*(xp - xn) - s = rhs, xp,xn,s >= 0, plus artificials
    let cols = 2 * n + m;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs_v: Vec<Q> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Q::zero(); cols];
        for j in 0..n {
            row[j] = cons[i][j].clone();
            row[n + j] = -cons[i][j].clone();
        }
        row[2 * n + i] = -Q::one();
        let mut r = rhs[i].clone();
        if r.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            r = -r;
        }
        tab.push(row);
        rhs_v.push(r);
    }
    // phase I: minimize the sum of artificial variables
    let total = cols + m;
    for (i, row) in tab.iter_mut().enumerate() {
        row.resize(total, Q::zero());
        row[cols + i] = Q::one();
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    let mut obj = vec![Q::zero(); total];
    for j in cols..cols + m {
        obj[j] = Q::one();
    }
    // reduced costs: obj - sum over basic rows
    let reduced = |tab: &Vec<Vec<Q>>, obj: &Vec<Q>, basis: &Vec<usize>, j: usize| -> Q {
        let mut c = obj[j].clone();
        for (i, &b) in basis.iter().enumerate() {
            c = c - &obj[b] * &tab[i][j];
        }
        c
    };
    loop {
        let Some(enter) = (0..total).find(|&j| reduced(&tab, &obj, &basis, j).is_negative())
        else {
            break;
        };
        // ratio test with Bland tie-break on the basis index
        let mut leave: Option<usize> = None;
        let mut best: Option<Q> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &rhs_v[i] / &tab[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?; // unbounded cannot happen in phase I
        let piv = tab[leave][enter].clone();
        for x in tab[leave].iter_mut() {
            *x = &*x / &piv;
        }
        rhs_v[leave] = &rhs_v[leave] / &piv;
        for i in 0..m {
            if i != leave && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..total {
                    let delta = &f * &tab[leave][j];
                    tab[i][j] = &tab[i][j] - delta;
                }
                let delta = &f * &rhs_v[leave];
                rhs_v[i] = &rhs_v[i] - delta;
            }
        }
        basis[leave] = enter;
    }
    let objective: Q = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= cols)
        .map(|(i, _)| rhs_v[i].clone())
        .sum();
    if !objective.is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = &x[b] + &rhs_v[i];
        } else if b < 2 * n {
            x[b - n] = &x[b - n] - &rhs_v[i];
        }
    }
    Some(x)
}

// ---- integer lattice routines ----

/// Column-style Hermite reduction: returns `(h, u)` with `a * u = h`,
/// `u` unimodular and `h` in column echelon form.
pub fn column_hnf(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let col_op_sub = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, src: usize, dst: usize, f: &BigInt| {
        for r in 0..rows {
            let d = f * &h[r][src];
            h[r][dst] = &h[r][dst] - d;
        }
        for r in 0..cols {
            let d = f * &u[r][src];
            u[r][dst] = &u[r][dst] - d;
        }
    };
    let mut pivot_col = 0;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        loop {
            // find nonzero entry with the smallest absolute value in this row
            let mut best: Option<usize> = None;
            for c in pivot_col..cols {
                if !h[r][c].is_zero()
                    && best.map_or(true, |b| h[r][c].abs() < h[r][b].abs())
                {
                    best = Some(c);
                }
            }
            let Some(b) = best else {
                break;
            };
            for c in pivot_col..cols {
                if c != b && !h[r][c].is_zero() {
                    let f = &h[r][c] / &h[r][b];
                    col_op_sub(&mut h, &mut u, b, c, &f);
                }
            }
            if (pivot_col..cols).all(|c| c == b || h[r][c].is_zero()) {
                if b != pivot_col {
                    for row in h.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                    for row in u.iter_mut() {
                        row.swap(b, pivot_col);
                    }
                }
                pivot_col += 1;
                break;
            }
        }
    }
    (h, u)
}

/// Solves `a x = b` over the integers, if a solution exists.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (h, u) = column_hnf(a);
    // forward-solve h y = b over the echelon columns
    let mut y = vec![BigInt::zero(); cols];
    let mut resid: Vec<BigInt> = b.to_vec();
    for c in 0..cols {
        let Some(r) = (0..rows).find(|&r| !h[r][c].is_zero()) else {
            continue;
        };
        if (&resid[r] % &h[r][c]).is_zero() {
            let f = &resid[r] / &h[r][c];
            for i in 0..rows {
                let d = &f * &h[i][c];
                resid[i] = &resid[i] - d;
            }
            y[c] = f;
        }
    }
    if resid.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let x: Vec<BigInt> = (0..cols)
        .map(|i| (0..cols).map(|j| &u[i][j] * &y[j]).sum())
        .collect();
    Some(x)
}

/// An integer matrix whose kernel is the saturated sublattice spanned by
/// `gens`, i.e. rows generate the rational orthogonal relations.
pub fn saturation_relations(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<Q>> = gens.iter().map(|g| to_q_vec(g)).collect();
    kernel_basis(&rows, dim)
        .into_iter()
        .map(|v| crate::rat::primitive_of_rational(&v))
        .collect()
}

/// Given a cone spanned by `tau` and an extra lattice vector `extra`, returns
/// `(rep, index)`: `rep` is a lattice vector whose class generates the image
/// of `extra` primitively in `Z^d / (span(tau) cap Z^d)`, and `index` is the
/// positive integer with `[extra] = index * [rep]`.
pub fn primitive_quotient_rep(
    tau: &[Vec<BigInt>],
    extra: &[BigInt],
    dim: usize,
) -> (Vec<BigInt>, BigInt) {
    let rels = saturation_relations(tau, dim);
    if rels.is_empty() {
        // tau spans everything: quotient is trivial, should not happen here
        return (extra.to_vec(), BigInt::one());
    }
    let au: Vec<BigInt> = rels
        .iter()
        .map(|row| row.iter().zip(extra).map(|(a, b)| a * b).sum())
        .collect();
    // image lattice of Z^d under the relation map, in column echelon form
    let a_cols: Vec<Vec<BigInt>> = rels.clone();
    let (h, _) = column_hnf(&a_cols);
    // express au in the echelon basis to read off the content
    let k = rels.len();
    let mut coords = Vec::new();
    let mut resid = au.clone();
    for c in 0..dim {
        let Some(r) = (0..k).find(|&r| !h[r][c].is_zero()) else {
            continue;
        };
        let f = &resid[r] / &h[r][c];
        for i in 0..k {
            let d = &f * &h[i][c];
            resid[i] = &resid[i] - d;
        }
        coords.push(f);
    }
    debug_assert!(resid.iter().all(|x| x.is_zero()));
    let mut g = BigInt::zero();
    for c in &coords {
        g = num_integer::gcd(g, c.abs());
    }
    if g.is_zero() || g.is_one() {
        return (extra.to_vec(), BigInt::one());
    }
    let target: Vec<BigInt> = au.iter().map(|x| x / &g).collect();
    let rep = solve_integer(&rels, &target).expect("primitive class has a lattice representative");
    (rep, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, q};

    #[test]
    fn solve_and_kernel() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_square(&a, &[q(5), q(10)]).unwrap();
        assert_eq!(x, vec![q(1), q(3)]);
        let k = kernel_basis(&[vec![q(1), q(2), q(3)]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(&[q(1), q(2), q(3)], v).is_zero());
        }
    }

    #[test]
    fn feasibility() {
        // x >= 1, -x >= -3 is feasible; x >= 1, -x >= 0 is not
        let x = feasible_point(&[vec![q(1)], vec![q(-1)]], &[q(1), q(-3)]).unwrap();
        assert!(x[0] >= q(1) && x[0] <= q(3));
        assert!(feasible_point(&[vec![q(1)], vec![q(-1)]], &[q(1), q(0)]).is_none());
        // strict 2d wedge
        let x = feasible_point(
            &[vec![q(1), q(-1)], vec![q(-1), q(2)]],
            &[frac(1, 2), frac(1, 3)],
        )
        .unwrap();
        assert!(&x[0] - &x[1] >= frac(1, 2));
    }

    #[test]
    fn integer_solving() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(0), BigInt::from(3)],
        ];
        let x = solve_integer(&a, &[BigInt::from(10), BigInt::from(3)]).unwrap();
        assert_eq!(
            (0..2)
                .map(|i| a[i].iter().zip(&x).map(|(p, q)| p * q).sum::<BigInt>())
                .collect::<Vec<_>>(),
            vec![BigInt::from(10), BigInt::from(3)]
        );
        assert!(solve_integer(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn quotient_rep_detects_index() {
        // tau = span{(1,0)}, extra = (1,2): image has content 2 in Z^2/tau
        let tau = vec![vec![BigInt::from(1), BigInt::from(0)]];
        let (rep, idx) = primitive_quotient_rep(&tau, &[BigInt::from(1), BigInt::from(2)], 2);
        assert_eq!(idx, BigInt::from(2));
        assert_eq!(rep[1].abs(), BigInt::one());
    }
}
