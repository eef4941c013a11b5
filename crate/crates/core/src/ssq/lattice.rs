//! Linear algebra over the 2-local integers: echelon forms, kernels,
//! membership and Smith normal form of sublattices of `Z_(2)^n`.
//!
//! Entries are `BigRational` with odd denominators. Every elimination step
//! pivots on an entry of minimal 2-adic valuation, so all multipliers stay
//! 2-integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Q = BigRational;
pub(crate) type Vector = Vec<Q>;

/// 2-adic valuation; `None` for zero.
pub(crate) fn val2(x: &Q) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut n = x.numer().abs();
    let mut v = 0;
    while n.is_even() {
        n >>= 1;
        v += 1;
    }
    Some(v)
}

pub(crate) fn pow2(e: u32) -> Q {
    Q::from(BigInt::one() << e as usize)
}

pub(crate) fn is_two_integral(x: &Q) -> bool {
    x.denom().is_odd()
}

fn axpy(y: &mut [Q], a: &Q, x: &[Q]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi -= a * xi;
        }
    }
}

/// Position of the entry with least valuation among `rows[from..]` in
/// column `col`.
fn min_val_row(rows: &[Vector], from: usize, col: usize) -> Option<usize> {
    (from..rows.len()).filter_map(|i| val2(&rows[i][col]).map(|v| (v, i))).min().map(|(_, i)| i)
}

/// Row echelon form with tracked transform: returns `(h, t, pivots)` with
/// `t * rows = h`, `t` invertible over `Z_(2)`, and pivot entries powers of 2.
/// Zero rows of `h` sit at the bottom.
fn echelon_tracked(rows: &[Vector], dim: usize) -> (Vec<Vector>, Vec<Vector>, Vec<usize>) {
    let n = rows.len();
    let mut h: Vec<Vector> = rows.to_vec();
    let mut t: Vec<Vector> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(i) = min_val_row(&h, r, col) else { continue };
        h.swap(r, i);
        t.swap(r, i);
        let v = val2(&h[r][col]).expect("nonzero pivot");
        let unit = &h[r][col] / pow2(v);
        let inv = unit.recip();
        for x in h[r].iter_mut().chain(t[r].iter_mut()) {
            *x = &*x * &inv;
        }
        let p = pow2(v);
        for k in 0..n {
            if k == r || h[k][col].is_zero() {
                continue;
            }
            let f = &h[k][col] / &p;
            let (hr, tr) = (h[r].clone(), t[r].clone());
            axpy(&mut h[k], &f, &hr);
            axpy(&mut t[k], &f, &tr);
        }
        pivots.push(col);
        r += 1;
        if r == n {
            break;
        }
    }
    (h, t, pivots)
}

/// Echelon basis of the span of `rows`.
pub(crate) fn echelon(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let (h, _, pivots) = echelon_tracked(rows, dim);
    h.into_iter().take(pivots.len()).collect()
}

/// Basis of `{ lambda : sum lambda_i rows_i = 0 }`.
pub(crate) fn left_kernel(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let (_, t, pivots) = echelon_tracked(rows, dim);
    t.into_iter().skip(pivots.len()).collect()
}

/// Coordinates of `x` in the independent rows `basis`, if `x` lies in their
/// `Z_(2)`-span.
pub(crate) fn coordinates(basis: &[Vector], x: &[Q]) -> Option<Vector> {
    let dim = x.len();
    let (h, t, pivots) = echelon_tracked(basis, dim);
    let mut rest: Vector = x.to_vec();
    let mut c = vec![Q::zero(); basis.len()];
    for (r, &col) in pivots.iter().enumerate() {
        if rest[col].is_zero() {
            continue;
        }
        let f = &rest[col] / &h[r][col];
        if !is_two_integral(&f) {
            return None;
        }
        axpy(&mut rest, &f, &h[r]);
        for (ci, ti) in c.iter_mut().zip(&t[r]) {
            *ci += &f * ti;
        }
    }
    if rest.iter().all(Zero::is_zero) {
        Some(c)
    } else {
        None
    }
}

pub(crate) fn contains(span: &[Vector], x: &[Q]) -> bool {
    x.iter().all(Zero::is_zero) || coordinates(span, x).is_some()
}

pub(crate) fn combine(coeffs: &[Q], rows: &[Vector], dim: usize) -> Vector {
    let mut out = vec![Q::zero(); dim];
    for (c, row) in coeffs.iter().zip(rows) {
        axpy(&mut out, &-c, row);
    }
    out
}

/// Generators of `span(z) / span(b)` for `span(b) ⊆ span(z)`, with order
/// `Some(e)` for `Z/2^e` and `None` for a free summand.
pub(crate) fn quotient(z: &[Vector], b: &[Vector]) -> Vec<(Vector, Option<u32>)> {
    let s = z.len();
    let mut zrows: Vec<Vector> = z.to_vec();
    let mut x: Vec<Vector> =
        b.iter().map(|v| coordinates(z, v).expect("boundaries lie in the cycles")).collect();
    let mut diag = Vec::new();
    let mut r = 0;
    while r < s && r < x.len() {
        let best = (r..x.len())
            .flat_map(|i| (r..s).map(move |j| (i, j)))
            .filter_map(|(i, j)| val2(&x[i][j]).map(|v| (v, i, j)))
            .min();
        let Some((v, i, j)) = best else { break };
        x.swap(r, i);
        for row in x.iter_mut() {
            row.swap(r, j);
        }
        zrows.swap(r, j);
        let p = x[r][r].clone();
        for k in r + 1..x.len() {
            if x[k][r].is_zero() {
                continue;
            }
            let f = &x[k][r] / &p;
            let xr = x[r].clone();
            axpy(&mut x[k], &f, &xr);
        }
        for c in r + 1..s {
            if x[r][c].is_zero() {
                continue;
            }
            let f = &x[r][c] / &p;
            for row in x.iter_mut() {
                let pr = row[r].clone();
                row[c] -= &f * &pr;
            }
            // column op on x is the inverse row op on the basis
            let zc = zrows[c].clone();
            for (a, b) in zrows[r].iter_mut().zip(&zc) {
                *a += &f * b;
            }
        }
        diag.push(v);
        r += 1;
    }
    let mut out = Vec::new();
    for (k, row) in zrows.into_iter().enumerate() {
        match diag.get(k) {
            Some(0) => {}
            Some(&v) => out.push((row, Some(v))),
            None => out.push((row, None)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Q::from(BigInt::from(x))).collect()
    }

    #[test]
    fn valuation() {
        assert_eq!(val2(&Q::from(BigInt::from(12))), Some(2));
        assert_eq!(val2(&Q::new(BigInt::from(-8), BigInt::from(3))), Some(3));
        assert_eq!(val2(&Q::zero()), None);
    }

    #[test]
    fn kernel_over_two_local_integers() {
        // 2*e0 - e1 = 0 has kernel spanned by (1, 2)
        let rows = vec![v(&[2]), v(&[1])];
        let k = left_kernel(&rows, 1);
        assert_eq!(k.len(), 1);
        let c = &k[0];
        assert_eq!(&c[0] * Q::from(BigInt::from(2)) + &c[1], Q::zero());
        assert_eq!(val2(&c[0]), Some(0));
    }

    #[test]
    fn membership_respects_integrality() {
        let span = vec![v(&[2, 0]), v(&[0, 3])];
        assert!(contains(&span, &v(&[4, 1])));
        assert!(!contains(&span, &v(&[1, 0])));
        assert!(contains(&span, &v(&[0, 1])));
    }

    #[test]
    fn quotient_invariants() {
        let z = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let b = vec![v(&[2, 0, 0]), v(&[0, 12, 0]), v(&[0, 0, 3])];
        let mut orders: Vec<_> = quotient(&z, &b).into_iter().map(|(_, o)| o).collect();
        orders.sort();
        assert_eq!(orders, vec![Some(1), Some(2)]);
        let free = quotient(&z, &[v(&[2, 2, 0])]);
        let orders: Vec<_> = free.iter().map(|(_, o)| *o).collect();
        assert_eq!(orders.iter().filter(|o| o.is_none()).count(), 2);
        assert_eq!(orders.iter().filter(|o| **o == Some(1)).count(), 1);
    }
}
