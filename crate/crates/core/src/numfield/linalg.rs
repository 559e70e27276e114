//! Dense exact linear algebra over ℚ, ℤ and 𝔽_p.
//!
//! Matrices are row-major `Vec<Vec<_>>`; vectors are rows and act on the left.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QMatrix = Vec<Vec<Q>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_matrix(rows: usize, cols: usize) -> QMatrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> QMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Q::zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    *o += x * y;
                }
            }
            out
        })
        .collect()
}

/// `v · M`.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// True when no entry has `p` in its denominator.
pub fn is_p_integral(v: &[Q], p: u64) -> bool {
    let p = BigInt::from(p);
    v.iter().all(|x| !x.denom().is_multiple_of(&p))
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Q>>(entries: I) -> BigInt {
    entries.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Reduced row echelon form. Returns the non-zero rows and their pivot columns.
pub fn rref(m: &[Vec<Q>]) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !a[k][c].is_zero()) else { continue };
        a.swap(r, k);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (top, bottom) = a.split_at_mut(r.max(i));
                let (src, dst) = if i < r { (&bottom[0], &mut top[i]) } else { (&top[r], &mut bottom[0]) };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

/// Basis of `{v : M v = 0}` as rows, in the canonical order given by the free columns.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> QMatrix {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{y : y M = 0}`.
pub fn left_kernel(m: &[Vec<Q>]) -> QMatrix {
    nullspace(&transpose(m), m.len())
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(k) = (c..n).find(|&k| !a[k][c].is_zero()) else { return Q::zero() };
        if k != c {
            a.swap(k, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &f * y;
            }
        }
    }
    d
}

pub fn inverse(m: &[Vec<Q>]) -> Result<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::InvalidArgument("singular matrix".into()));
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `y · basis = v` for a basis with independent rows.
#[derive(Clone, Debug)]
pub struct RowSolver {
    basis: QMatrix,
    pivots: Vec<usize>,
    inv: QMatrix,
}

impl RowSolver {
    pub fn new(basis: &[Vec<Q>]) -> Result<RowSolver> {
        let (_, cols) = rref(basis);
        if cols.len() != basis.len() {
            return Err(Error::InvalidArgument("rows are linearly dependent".into()));
        }
        let square: QMatrix = basis.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        let inv = inverse(&square)?;
        Ok(RowSolver { basis: basis.to_vec(), pivots: cols, inv })
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the row span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let restricted: Vec<Q> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let y = vec_mat(&restricted, &self.inv);
        (vec_mat(&y, &self.basis) == v).then_some(y)
    }
}

pub fn to_integer_matrix(m: &[Vec<Q>]) -> Option<ZMatrix> {
    m.iter()
        .map(|row| row.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
        .collect()
}

pub fn to_rational_matrix(m: &[Vec<BigInt>]) -> QMatrix {
    m.iter().map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

/// Row-style Hermite normal form with the unimodular transform: `U · M = H`.
/// `H` is upper echelon with positive pivots and entries above each pivot in
/// `[0, pivot)`; zero rows are kept at the bottom.
pub fn hnf_with_transform(m: &[Vec<BigInt>]) -> (ZMatrix, ZMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h: ZMatrix = m.to_vec();
    let mut u: ZMatrix = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows).filter(|&k| !h[k][c].is_zero()).min_by_key(|&k| h[k][c].abs());
            let Some(k) = best else { break };
            h.swap(r, k);
            u.swap(r, k);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let f = h[i][c].div_floor(&h[r][c]);
                row_sub(&mut h, i, r, &f);
                row_sub(&mut u, i, r, &f);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == rows || h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let f = h[i][c].div_floor(&h[r][c]);
            if !f.is_zero() {
                row_sub(&mut h, i, r, &f);
                row_sub(&mut u, i, r, &f);
            }
        }
        r += 1;
    }
    (h, u)
}

fn row_sub(m: &mut ZMatrix, target: usize, src: usize, f: &BigInt) {
    let (a, b) = if target < src {
        let (top, bottom) = m.split_at_mut(src);
        (&mut top[target], &bottom[0])
    } else {
        let (top, bottom) = m.split_at_mut(target);
        (&mut bottom[0], &top[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

/// Hermite normal form, zero rows dropped.
pub fn hnf(m: &[Vec<BigInt>]) -> ZMatrix {
    let (h, _) = hnf_with_transform(m);
    h.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())).collect()
}

/// Basis of the integer left kernel `{x ∈ ℤ^rows : x M = 0}`.
pub fn integer_left_kernel(m: &[Vec<BigInt>]) -> ZMatrix {
    let (h, u) = hnf_with_transform(m);
    h.iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(Zero::is_zero))
        .map(|(_, urow)| urow)
        .collect()
}

/// Rational Hermite form: `HNF(D·M)/D` for the common denominator `D`.
/// Independent of `D`, so canonical for the lattice spanned by the rows.
pub fn hnf_rational(m: &[Vec<Q>]) -> QMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    let d = common_denominator(m.iter().flatten());
    let scaled: ZMatrix = m.iter().map(|row| row.iter().map(|x| (x * &d).to_integer()).collect()).collect();
    hnf(&scaled)
        .into_iter()
        .map(|row| row.into_iter().map(|x| Q::new(x, d.clone())).collect())
        .collect()
}

/// Non-zero Smith invariant factors `d₁ | d₂ | …`.
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: ZMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry in the trailing block
        let pos = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pos else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let f = a[i][t].div_floor(&a[t][t]);
            if !f.is_zero() {
                row_sub(&mut a, i, t, &f);
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let f = a[t][j].div_floor(&a[t][t]);
            if !f.is_zero() {
                for i in 0..rows {
                    let v = &f * &a[i][t];
                    a[i][j] -= v;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold any entry not divisible by the pivot back into row t
        let pivot = a[t][t].clone();
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_multiple_of(&pivot));
        if let Some((i, _)) = bad {
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in top[t].iter_mut().zip(&bottom[0]) {
                *x += y;
            }
            continue;
        }
        out.push(pivot.abs());
        t += 1;
    }
    out
}

/// Determinant of an integer matrix, computed over ℚ.
pub fn det_z(m: &[Vec<BigInt>]) -> BigInt {
    det(&to_rational_matrix(m)).to_integer()
}

/// Rank of an integer matrix reduced mod `p`.
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    rref_mod_p(m, p).1.len()
}

fn rref_mod_p(m: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut a: Vec<Vec<u64>> = m.iter().map(|row| row.iter().map(|x| x % p).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| a[k][c] != 0) else { continue };
        a.swap(r, k);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                let src = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(src) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{v ∈ 𝔽_p^rows : v M = 0}`.
pub fn left_kernel_mod_p(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let t = transpose(m);
    let (r, pivots) = rref_mod_p(&t, p);
    (0..rows)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; rows];
            v[f] = 1;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

/// Reduction of a rational with denominator prime to `p`.
pub fn reduce_mod_p(x: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    Some(num * inv_mod(den.to_u64()?, p) % p)
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Prime factors by trial division, ascending and without multiplicity.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let pb = BigInt::from(p);
        if n.is_multiple_of(&pb) {
            out.push(p);
            while n.is_multiple_of(&pb) {
                n /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("cofactor of trial division fits in u64"));
    }
    out
}

pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
