//! Small exact linear algebra on integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ConeError;
use crate::exactnum::Q;

pub type IVec = Vec<i64>;

/// Inner product, accumulated in `i128`.
pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(x, y)| i128::from(*x) * i128::from(*y))
        .sum()
}

pub fn narrow(x: i128) -> Result<i64, ConeError> {
    i64::try_from(x).map_err(|_| ConeError::Overflow)
}

pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IVec {
    let g = gcd_of(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[i64], k: i64) -> IVec {
    a.iter().map(|x| x * k).collect()
}

pub fn mat_vec(m: &[IVec], v: &[i64]) -> Result<IVec, ConeError> {
    m.iter().map(|row| narrow(dot(row, v))).collect()
}

fn to_q(rows: &[IVec]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let v = &f * &m[row][c];
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[IVec], ncols: usize) -> usize {
    let mut m = to_q(rows);
    rref(&mut m, ncols).len()
}

/// Primitive integer basis of `{x : rows·x = 0}`.
pub fn nullspace(rows: &[IVec], ncols: usize) -> Result<Vec<IVec>, ConeError> {
    let mut m = to_q(rows);
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            integerize(&v)
        })
        .collect()
}

/// Smallest integer multiple, made primitive.
pub fn integerize(v: &[Q]) -> Result<IVec, ConeError> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().ok_or(ConeError::Overflow)
        })
        .collect()
}

/// Determinant of a square integer matrix.
pub fn det(m: &[IVec]) -> BigInt {
    let n = m.len();
    let mut a = to_q(m);
    let mut acc = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            a.swap(p, col);
            acc = -acc;
        }
        let pivot = a[col][col].clone();
        acc *= &pivot;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    acc.to_integer()
}

/// Coefficients `c` with `Σ cₖ·basisₖ = x`, if `x` lies in the rational span.
pub fn solve_in_span(basis: &[IVec], x: &[i64]) -> Option<Vec<Q>> {
    let k = basis.len();
    let n = x.len();
    // augmented system: columns are basis vectors, last column is x
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            basis
                .iter()
                .map(|b| Q::from_integer(b[i].into()))
                .chain(std::iter::once(Q::from_integer(x[i].into())))
                .collect()
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Q::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        c[p] = m[r][k].clone();
    }
    Some(c)
}

/// Primitive cofactor vector orthogonal to `ρ − 1` rows in dimension `ρ`.
pub fn cross(rows: &[IVec], n: usize) -> Result<IVec, ConeError> {
    let cof: Vec<BigInt> = (0..n)
        .map(|k| {
            let minor: Vec<IVec> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != k)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let d = det(&minor);
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = cof.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    cof.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().ok_or(ConeError::Overflow)
        })
        .collect()
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|x| *x == 0)
}

pub fn abs_max(v: &[i64]) -> i64 {
    v.iter().map(|x| x.saturating_abs()).max().unwrap_or(0)
}
