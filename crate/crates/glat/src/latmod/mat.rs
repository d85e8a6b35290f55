//! Exact integer matrix kernel for the localized-at-p lattice model.
//!
//! All arithmetic is checked `i64`; overflow is reported as an error, never
//! wrapped. Column spans are always taken over the localization of the
//! integers at the prime `p`, so multiplying a column by an integer prime to
//! `p` never changes the span.

use super::LatError;

pub type Int = i64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Int>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Int>]) -> Mat {
        let mut m = Mat::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, k: Int) -> Result<Mat, LatError> {
        let mut m = self.clone();
        for x in m.a.iter_mut() {
            *x = mul(*x, k)?;
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LatError> {
        assert_eq!(self.cols, other.rows);
        let mut m = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Int = 0;
                for k in 0..self.cols {
                    acc = add(acc, mul(self[(i, k)], other[(k, j)])?)?;
                }
                m[(i, j)] = acc;
            }
        }
        Ok(m)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.a[i * self.cols + j]
    }
}

pub fn add(x: Int, y: Int) -> Result<Int, LatError> {
    x.checked_add(y).ok_or(LatError::Overflow)
}

pub fn mul(x: Int, y: Int) -> Result<Int, LatError> {
    x.checked_mul(y).ok_or(LatError::Overflow)
}

pub fn pow(p: Int, e: u32) -> Result<Int, LatError> {
    let mut r: Int = 1;
    for _ in 0..e {
        r = mul(r, p)?;
    }
    Ok(r)
}

/// p-adic valuation of a nonzero integer.
pub fn val_p(mut x: Int, p: Int) -> u32 {
    assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Inverse of `u` modulo `m > 1`, for `gcd(u, m) = 1`.
pub fn mod_inv(u: Int, m: Int) -> Int {
    let (mut r0, mut r1) = (m as i128, (u.rem_euclid(m)) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "not invertible");
    (t0.rem_euclid(m as i128)) as Int
}

fn mulmod(x: Int, y: Int, m: Int) -> Int {
    ((x as i128 * y as i128).rem_euclid(m as i128)) as Int
}

/// Result of the p-adic Hermite reduction: a lower-triangular square matrix
/// with diagonal `p^{diag_vals[i]}` and the entry at `(i, j)` (for `i > j`)
/// reduced into `[0, p^{diag_vals[i]})`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: Mat,
    pub diag_vals: Vec<u32>,
}

/// Canonical basis of the span of the columns of `g` over the integers
/// localized at `p`.
///
/// If `modulus = Some(t)` the caller guarantees that `p^t * R^rows` is
/// contained in the span. Columns `p^t * e_i` are then appended as extra
/// generators, which both caps the diagonal valuations at `t` and licenses
/// reducing every other column modulo `p^t`, so the arithmetic stays small.
pub fn hnf_p(g: &Mat, p: Int, modulus: Option<u32>) -> Result<Hnf, LatError> {
    let n = g.rows;
    let mut cols = g.columns();
    let m_red = match modulus {
        Some(t) => Some(pow(p, t)?),
        None => None,
    };

    // Triangularize: after round r, cols[r] has its pivot at row r and all
    // later columns vanish in rows <= r.
    for r in 0..n {
        if let Some(md) = m_red {
            // Fresh p^t * e_i generators are appended first: their presence
            // licenses the entrywise reduction of every other active column.
            // Stale copies from earlier rounds are harmless extra generators.
            let fresh_from = cols.len();
            for i in r..n {
                let mut e = vec![0; n];
                e[i] = md;
                cols.push(e);
            }
            for c in cols[r..fresh_from].iter_mut() {
                for x in c.iter_mut() {
                    *x = x.rem_euclid(md);
                }
            }
        }
        let mut best: Option<(usize, u32)> = None;
        for c in r..cols.len() {
            let x = cols[c][r];
            if x != 0 {
                let v = val_p(x, p);
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((c, v));
                }
            }
        }
        let (c_star, v) = best.ok_or(LatError::NotFullRank)?;
        cols.swap(r, c_star);
        let pv = pow(p, v)?;
        let u = cols[r][r] / pv;
        let pivot = cols[r].clone();
        for c in cols[(r + 1)..].iter_mut() {
            let x = c[r];
            if x == 0 {
                continue;
            }
            let q = x / pv;
            // col := u * col - q * pivot; zeroes the entry at row r.
            for i in r..n {
                c[i] = add(mul(u, c[i])?, -mul(q, pivot[i])?)?;
            }
            debug_assert_eq!(c[r], 0);
        }
    }
    if cols.len() < n {
        return Err(LatError::NotFullRank);
    }

    let diag_vals: Vec<u32> = (0..n).map(|i| val_p(cols[i][i], p)).collect();
    if let Some(t) = modulus {
        debug_assert!(diag_vals.iter().all(|&a| a <= t));
    }

    // Normalization: make each diagonal exactly p^{a_i} and reduce the
    // below-diagonal entries. Working modulo p^B with B = sum(a) + max(a) + 1
    // keeps enough precision for every extracted residue.
    let total: u32 = diag_vals.iter().sum();
    let amax: u32 = diag_vals.iter().copied().max().unwrap_or(0);
    let big = pow(p, total + amax + 1)?;
    let mut h = Mat::zero(n, n);
    for j in (0..n).rev() {
        let pj = pow(p, diag_vals[j])?;
        let uj = (cols[j][j] / pj).rem_euclid(big);
        let inv = mod_inv(uj, big);
        let mut col: Vec<Int> = (j..n)
            .map(|i| mulmod(cols[j][i].rem_euclid(big), inv, big))
            .collect();
        debug_assert_eq!(col[0], pj);
        col[0] = pj;
        for i in (j + 1)..n {
            let pi = pow(p, diag_vals[i])?;
            let r = col[i - j].rem_euclid(pi);
            let c = (col[i - j] - r) / pi;
            col[i - j] = r;
            for l in (i + 1)..n {
                let t = col[l - j] - mulmod(c, h[(l, i)], big);
                col[l - j] = t.rem_euclid(big);
            }
        }
        for i in j..n {
            h[(i, j)] = col[i - j];
        }
    }
    Ok(Hnf { h, diag_vals })
}

/// p-adic Smith exponents of a full-rank square integer matrix, sorted
/// nonincreasingly. Diagonalization by row and column operations that are
/// invertible over the localization at `p`.
pub fn snf_vals(g: &Mat, p: Int) -> Result<Vec<u32>, LatError> {
    let n = g.rows;
    assert_eq!(g.cols, n);
    let mut w = g.clone();
    let mut vals = Vec::with_capacity(n);
    for r in 0..n {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in r..n {
            for j in r..n {
                let x = w[(i, j)];
                if x != 0 {
                    let v = val_p(x, p);
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, v) = best.ok_or(LatError::NotFullRank)?;
        if pi != r {
            for j in 0..n {
                w.a.swap(pi * n + j, r * n + j);
            }
        }
        if pj != r {
            for i in 0..n {
                w.a.swap(i * n + pj, i * n + r);
            }
        }
        vals.push(v);
        let pv = pow(p, v)?;
        let u = w[(r, r)] / pv;
        for c in (r + 1)..n {
            let x = w[(r, c)];
            if x == 0 {
                continue;
            }
            let q = x / pv;
            for i in r..n {
                w[(i, c)] = add(mul(u, w[(i, c)])?, -mul(q, w[(i, r)])?)?;
            }
        }
        for i in (r + 1)..n {
            let x = w[(i, r)];
            if x == 0 {
                continue;
            }
            let q = x / pv;
            for j in r..n {
                w[(i, j)] = add(mul(u, w[(i, j)])?, -mul(q, w[(r, j)])?)?;
            }
        }
    }
    vals.sort_unstable_by(|a, b| b.cmp(a));
    Ok(vals)
}

/// Determinant by Laplace expansion; matrices here are tiny.
pub fn det(m: &Mat) -> Result<Int, LatError> {
    let n = m.rows;
    assert_eq!(m.cols, n);
    if n == 0 {
        return Ok(1);
    }
    if n == 1 {
        return Ok(m[(0, 0)]);
    }
    let mut acc: Int = 0;
    for j in 0..n {
        let x = m[(0, j)];
        if x == 0 {
            continue;
        }
        let sub = minor(m, 0, j);
        let term = mul(x, det(&sub)?)?;
        acc = add(acc, if j % 2 == 0 { term } else { -term })?;
    }
    Ok(acc)
}

fn minor(m: &Mat, row: usize, col: usize) -> Mat {
    let n = m.rows;
    let mut s = Mat::zero(n - 1, n - 1);
    let mut ii = 0;
    for i in 0..n {
        if i == row {
            continue;
        }
        let mut jj = 0;
        for j in 0..n {
            if j == col {
                continue;
            }
            s[(ii, jj)] = m[(i, j)];
            jj += 1;
        }
        ii += 1;
    }
    s
}

/// Adjugate matrix: `m * adj(m) = det(m) * I`.
pub fn adjugate(m: &Mat) -> Result<Mat, LatError> {
    let n = m.rows;
    let mut adj = Mat::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, i, j))?;
            adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_basic_span() {
        // span{(2,0),(0,2),(1,1)} over Z_(2) is spanned by (1,1),(0,2)
        let g = Mat::from_columns(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]);
        let hnf = hnf_p(&g, 2, None).unwrap();
        assert_eq!(hnf.diag_vals, vec![0, 1]);
        assert_eq!(hnf.h.a, vec![1, 0, 1, 2]);
    }

    #[test]
    fn hnf_keeps_unit_off_diagonal_content() {
        // span{(2,1),(0,2)}: canonical form has diagonal (2,2) and a unit
        // below the pivot, so the matrix is primitive despite min diag val 1.
        let g = Mat::from_columns(2, &[vec![2, 1], vec![0, 2]]);
        let hnf = hnf_p(&g, 2, None).unwrap();
        assert_eq!(hnf.diag_vals, vec![1, 1]);
        assert_eq!(hnf.h.a, vec![2, 0, 1, 2]);
        assert_eq!(snf_vals(&hnf.h, 2).unwrap(), vec![2, 0]);
    }

    #[test]
    fn hnf_rejects_rank_deficient() {
        let g = Mat::from_columns(2, &[vec![1, 0], vec![2, 0]]);
        assert!(matches!(hnf_p(&g, 2, None), Err(LatError::NotFullRank)));
    }

    #[test]
    fn hnf_unit_normalization() {
        // 3 is a unit at p=2: span{(3,0),(0,5)} = R^2
        let g = Mat::from_columns(2, &[vec![3, 0], vec![0, 5]]);
        let hnf = hnf_p(&g, 2, None).unwrap();
        assert_eq!(hnf.h, Mat::identity(2));
    }

    #[test]
    fn hnf_with_modulus_matches_plain() {
        // join with p^2 R^3: appended generators + reduction must agree with
        // the unreduced computation on the union of generators.
        let g = Mat::from_columns(3, &[vec![4, 2, 1], vec![0, 2, 1], vec![0, 0, 8]]);
        let frozen = Mat::from_columns(3, &[vec![4, 0, 0], vec![0, 4, 0], vec![0, 0, 4]]);
        let plain = hnf_p(&g.hcat(&frozen), 2, None).unwrap();
        let reduced = hnf_p(&g, 2, Some(2)).unwrap();
        assert_eq!(plain.h, reduced.h);
    }

    #[test]
    fn snf_triangular_with_unit() {
        let g = Mat::from_columns(2, &[vec![4, 1], vec![0, 4]]);
        assert_eq!(snf_vals(&g, 2).unwrap(), vec![4, 0]);
    }

    #[test]
    fn adjugate_identity() {
        let m = Mat::from_columns(3, &[vec![1, 0, 1], vec![0, 2, 1], vec![0, 0, 4]]);
        let adj = adjugate(&m).unwrap();
        let prod = m.mul(&adj).unwrap();
        let d = det(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[(i, j)], if i == j { d } else { 0 });
            }
        }
    }
}
