//! Linear algebra over `Z/N`, `Z`, and `Q`.
//!
//! The workhorse is the Howell normal form: every submodule of `(Z/N)^n`
//! has a unique Howell basis, so span equality, membership, and canonical
//! coset representatives are all exact syntactic operations on the form.
//! Kernels (absolute and relative to a helper submodule) fall out of the
//! Howell form of an augmented matrix.
//!
//! For structure theory of finite modules the module provides an integer
//! Smith decomposition that tracks the row transformation and its inverse,
//! so a quotient `Z^g / relations` comes with an explicit isomorphism to a
//! direct sum of cyclic groups and back. Integer determinants use Bareiss
//! fraction-free elimination; square rational systems use exact Gaussian
//! elimination; and determinants over an arbitrary commutative coefficient
//! ring (group rings in particular, where there is no division) use
//! dynamic programming over column subsets.

use crate::ring::CoeffRing;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

// ---- Howell normal form over Z/N ----

/// Unit `u` mod `n` with `u * a = gcd(a, n) mod n`.
pub fn unit_multiplier(a: &BigInt, n: &BigInt) -> BigInt {
    let a = a.mod_floor(n);
    if a.is_zero() {
        return BigInt::one();
    }
    let g = a.gcd(n);
    let a1 = &a / &g;
    let n1 = n / &g;
    // gcd(a1, n1) = 1: a common prime p would put p*g into gcd(a, n).
    let mut u = if n1.is_one() {
        BigInt::one()
    } else {
        crate::ring::mod_inverse(&a1, &n1).expect("a/g is invertible mod n/g")
    };
    while !u.gcd(n).is_one() {
        u += &n1;
    }
    u.mod_floor(n)
}

/// Canonical basis of a submodule of `(Z/N)^cols`: rows in echelon order
/// with pivots dividing `N`, entries above each pivot reduced below it,
/// and the span closed under the Howell property (any span element whose
/// first nonzero coordinate is at column `j` lies in the span of the rows
/// with pivot column at least `j`).
#[derive(Clone, Debug, PartialEq)]
pub struct HowellForm {
    modulus: BigInt,
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl HowellForm {
    pub fn new(modulus: &BigInt, cols: usize, generators: &[Vec<BigInt>]) -> HowellForm {
        assert!(*modulus >= BigInt::from(2), "modulus must be at least 2");
        let red = |v: &BigInt| v.mod_floor(modulus);
        let mut active: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "generator row has wrong length");
                r.iter().map(red).collect()
            })
            .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
            .collect();

        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for j in 0..cols {
            let mut holders: Vec<Vec<BigInt>> = Vec::new();
            let mut rest: Vec<Vec<BigInt>> = Vec::new();
            for r in active {
                if r[j].is_zero() {
                    rest.push(r);
                } else {
                    holders.push(r);
                }
            }
            active = rest;
            if holders.is_empty() {
                continue;
            }
            let mut acc = holders.pop().unwrap();
            for r in holders {
                let ea = num::Integer::extended_gcd(&acc[j], &r[j]);
                let (g, s, t) = (ea.gcd, ea.x, ea.y);
                let qa = &acc[j] / &g;
                let qr = &r[j] / &g;
                let new_acc: Vec<BigInt> = acc
                    .iter()
                    .zip(&r)
                    .map(|(x, y)| (&s * x + &t * y).mod_floor(modulus))
                    .collect();
                let new_r: Vec<BigInt> = acc
                    .iter()
                    .zip(&r)
                    .map(|(x, y)| (&qa * y - &qr * x).mod_floor(modulus))
                    .collect();
                acc = new_acc;
                if new_r.iter().any(|x| !x.is_zero()) {
                    active.push(new_r);
                }
            }
            let u = unit_multiplier(&acc[j], modulus);
            for x in acc.iter_mut() {
                *x = (&u * &*x).mod_floor(modulus);
            }
            let d = acc[j].clone();
            debug_assert_eq!(d, acc[j].gcd(modulus));
            // Shadow row: the annihilator multiple lives strictly to the
            // right of the pivot and must stay in the span.
            let ann = modulus / &d;
            if !ann.is_one() {
                let shadow: Vec<BigInt> =
                    acc.iter().map(|x| (&ann * x).mod_floor(modulus)).collect();
                debug_assert!(shadow[j].is_zero());
                if shadow.iter().any(|x| !x.is_zero()) {
                    active.push(shadow);
                }
            }
            rows.push(acc);
            pivots.push(j);
        }
        debug_assert!(active.is_empty());

        // Reduce entries above each pivot below the pivot value.
        for i in 0..rows.len() {
            let j = pivots[i];
            let pivot_row = rows[i].clone();
            let d = pivot_row[j].clone();
            for r in rows.iter_mut().take(i) {
                let q = r[j].div_floor(&d);
                if !q.is_zero() {
                    for (x, p) in r.iter_mut().zip(&pivot_row) {
                        *x = (&*x - &q * p).mod_floor(modulus);
                    }
                }
            }
        }

        HowellForm { modulus: modulus.clone(), cols, rows, pivots }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        let mut w: Vec<BigInt> = v.iter().map(|x| x.mod_floor(&self.modulus)).collect();
        for (row, &j) in self.rows.iter().zip(&self.pivots) {
            if w[j].is_zero() {
                continue;
            }
            let q = w[j].div_floor(&row[j]);
            if !q.is_zero() {
                for (x, p) in w.iter_mut().zip(row) {
                    *x = (&*x - &q * p).mod_floor(&self.modulus);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Span containment of another form.
    pub fn contains_all(&self, other: &HowellForm) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Coefficient vectors `x` with `sum x_i * rows_i` in the span of
/// `helpers`. Returns a Howell basis of the solution module.
pub fn kernel_mod(
    modulus: &BigInt,
    rows: &[Vec<BigInt>],
    helpers: &[Vec<BigInt>],
) -> Vec<Vec<BigInt>> {
    let n = rows.first().map_or_else(|| helpers.first().map_or(0, |h| h.len()), |r| r.len());
    let m = rows.len();
    let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(m + helpers.len());
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.len(), n);
        let mut a = r.clone();
        a.extend((0..m).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }));
        aug.push(a);
    }
    for h in helpers {
        assert_eq!(h.len(), n);
        let mut a = h.clone();
        a.extend(std::iter::repeat(BigInt::zero()).take(m));
        aug.push(a);
    }
    let hf = HowellForm::new(modulus, n + m, &aug);
    hf.rows()
        .iter()
        .zip(hf.pivots())
        .filter(|(_, &p)| p >= n)
        .map(|(r, _)| r[n..].to_vec())
        .collect()
}

/// Kernel of `x -> x * M` for row vectors `x`, as a Howell basis.
pub fn kernel(modulus: &BigInt, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    kernel_mod(modulus, rows, &[])
}

/// One solution of `x * M = target` over `Z/N`, if any.
pub fn solve_mod(modulus: &BigInt, rows: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = target.len();
    let m = rows.len();
    let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.len(), n);
        let mut a = r.clone();
        a.extend((0..m).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }));
        aug.push(a);
    }
    let hf = HowellForm::new(modulus, n + m, &aug);
    let mut w: Vec<BigInt> = target.iter().map(|x| x.mod_floor(modulus)).collect();
    let mut x = vec![BigInt::zero(); m];
    for (row, &j) in hf.rows().iter().zip(hf.pivots()) {
        if j >= n {
            break;
        }
        if w[j].is_zero() {
            continue;
        }
        let (q, r) = w[j].div_rem(&row[j]);
        if !r.is_zero() {
            return None;
        }
        for (wk, pk) in w.iter_mut().zip(row.iter().take(n)) {
            *wk = (&*wk - &q * pk).mod_floor(modulus);
        }
        for (xk, pk) in x.iter_mut().zip(row.iter().skip(n)) {
            *xk = (&*xk + &q * pk).mod_floor(modulus);
        }
    }
    if w.iter().all(|v| v.is_zero()) {
        Some(x)
    } else {
        None
    }
}

// ---- Integer Smith decomposition with tracked basis ----

/// `Z^g / rowspan(relations)` as an explicit direct sum of cyclic groups:
/// the class of `x` maps to `(p * x) mod factors` coordinatewise, and the
/// `i`-th standard generator of the sum lifts to column `i` of `p_inv`.
#[derive(Clone, Debug)]
pub struct SmithDecomp {
    /// Cyclic orders `d_1 | d_2 | ... | d_g`, every one positive.
    pub factors: Vec<BigInt>,
    pub p: Vec<Vec<BigInt>>,
    pub p_inv: Vec<Vec<BigInt>>,
}

impl SmithDecomp {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Coordinates of a module element in the cyclic decomposition.
    pub fn coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.p
            .iter()
            .zip(&self.factors)
            .map(|(row, d)| {
                row.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(d)
            })
            .collect()
    }

    /// Integer lift of the element with the given coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let g = self.factors.len();
        (0..g)
            .map(|row| (0..g).map(|i| &self.p_inv[row][i] * &coords[i]).sum::<BigInt>())
            .collect()
    }
}

/// Smith decomposition of `Z^g` modulo the span of the given relation
/// rows. The quotient must be finite, so the caller includes rows that
/// bound every coordinate (such as `N * e_i`).
pub fn smith_decomposition(g: usize, relation_rows: &[Vec<BigInt>]) -> SmithDecomp {
    let m = relation_rows.len();
    assert!(m >= g, "need enough relations for a finite quotient");
    // Work on the transpose: columns are relations, rows are coordinates.
    let mut w: Vec<Vec<BigInt>> = (0..g)
        .map(|i| relation_rows.iter().map(|r| r[i].clone()).collect())
        .collect();
    let mut p: Vec<Vec<BigInt>> = (0..g)
        .map(|i| (0..g).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut p_inv = p.clone();

    for pos in 0..g {
        'outer: loop {
            // Smallest nonzero entry in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in pos..g {
                for j in pos..m {
                    if !w[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| w[i][j].abs() < w[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = match best {
                Some(b) => b,
                None => panic!("quotient is not finite"),
            };
            if bi != pos {
                w.swap(pos, bi);
                p.swap(pos, bi);
                for r in p_inv.iter_mut() {
                    r.swap(pos, bi);
                }
            }
            if bj != pos {
                for r in w.iter_mut() {
                    r.swap(pos, bj);
                }
            }

            let mut clean = true;
            for i in pos + 1..g {
                if w[i][pos].is_zero() {
                    continue;
                }
                let q = rounded_div(&w[i][pos], &w[pos][pos]);
                if !q.is_zero() {
                    for j in pos..m {
                        let t = &w[pos][j] * &q;
                        w[i][j] -= t;
                    }
                    for j in 0..g {
                        let t = &p[pos][j] * &q;
                        p[i][j] -= t;
                        let t = &p_inv[j][i] * &q;
                        p_inv[j][pos] += t;
                    }
                }
                if !w[i][pos].is_zero() {
                    clean = false;
                }
            }
            for j in pos + 1..m {
                if w[pos][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&w[pos][j], &w[pos][pos]);
                if !q.is_zero() {
                    for i in pos..g {
                        let t = &w[i][pos] * &q;
                        w[i][j] -= t;
                    }
                }
                if !w[pos][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            for i in pos + 1..g {
                for j in pos + 1..m {
                    if !(&w[i][j] % &w[pos][pos]).is_zero() {
                        for jj in pos..m {
                            let t = w[i][jj].clone();
                            w[pos][jj] += t;
                        }
                        for jj in 0..g {
                            let t = p[i][jj].clone();
                            p[pos][jj] += t;
                            let t = p_inv[jj][pos].clone();
                            p_inv[jj][i] -= t;
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if w[pos][pos].is_negative() {
            for j in pos..m {
                w[pos][j] = -w[pos][j].clone();
            }
            for j in 0..g {
                p[pos][j] = -p[pos][j].clone();
                p_inv[j][pos] = -p_inv[j][pos].clone();
            }
        }
    }

    let factors: Vec<BigInt> = (0..g).map(|i| w[i][i].clone()).collect();
    SmithDecomp { factors, p, p_inv }
}

fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

// ---- Determinants and rational solving ----

/// Integer determinant by Bareiss fraction-free elimination.
pub fn det_bareiss(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut w: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "matrix must be square");
            r.clone()
        })
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if w[k][k].is_zero() {
            match (k + 1..n).find(|&i| !w[i][k].is_zero()) {
                Some(i) => {
                    w.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &w[i][j] * &w[k][k] - &w[i][k] * &w[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                w[i][j] = q;
            }
            w[i][k] = BigInt::zero();
        }
        prev = w[k][k].clone();
    }
    if sign < 0 {
        -w[n - 1][n - 1].clone()
    } else {
        w[n - 1][n - 1].clone()
    }
}

/// Unique rational solution of a square system `M * x = b`, if `M` is
/// invertible.
pub fn solve_rational(matrix: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = matrix.len();
    assert_eq!(b.len(), n);
    let mut w: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(b)
        .map(|(r, bv)| {
            assert_eq!(r.len(), n);
            let mut row = r.clone();
            row.push(bv.clone());
            row
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !w[i][k].is_zero())?;
        w.swap(k, piv);
        let inv = w[k][k].recip();
        for j in k..=n {
            w[k][j] = &w[k][j] * &inv;
        }
        for i in 0..n {
            if i != k && !w[i][k].is_zero() {
                let f = w[i][k].clone();
                for j in k..=n {
                    let t = &f * &w[k][j];
                    w[i][j] = &w[i][j] - &t;
                }
            }
        }
    }
    Some(w.into_iter().map(|r| r[n].clone()).collect())
}

/// Determinant over any commutative coefficient ring, by dynamic
/// programming over column subsets (no division needed).
pub fn det_generic<R: CoeffRing>(ring: &R, matrix: &[Vec<R::Elem>]) -> R::Elem {
    let n = matrix.len();
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 16, "determinant size out of range");
    for r in matrix {
        assert_eq!(r.len(), n);
    }
    let mut state: Vec<Option<R::Elem>> = vec![None; 1 << n];
    state[0] = Some(ring.one());
    for row in matrix {
        let mut next: Vec<Option<R::Elem>> = vec![None; 1 << n];
        for (mask, acc) in state.iter().enumerate() {
            let acc = match acc {
                Some(a) => a,
                None => continue,
            };
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || ring.is_zero(entry) {
                    continue;
                }
                let inversions = (mask >> (j + 1)).count_ones();
                let mut term = ring.mul(acc, entry);
                if inversions % 2 == 1 {
                    term = ring.neg(&term);
                }
                let slot = &mut next[mask | (1 << j)];
                *slot = Some(match slot.take() {
                    Some(s) => ring.add(&s, &term),
                    None => term,
                });
            }
        }
        state = next;
    }
    state[(1 << n) - 1].take().unwrap_or_else(|| ring.zero())
}
