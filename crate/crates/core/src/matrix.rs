//! Small dense linear algebra over runtime finite fields: 2x2 matrices for
//! fractional-linear substitutions, 3x3 matrices for plane coordinate
//! changes, and row-reduction helpers behind determinants, kernels and
//! subfield membership tests.

use crate::field::{Field, FieldElem};

/// Row-major 2x2 matrix over a fixed field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2(pub [[FieldElem; 2]; 2]);

impl Mat2 {
    pub fn identity(f: &Field) -> Mat2 {
        Mat2([[f.one(), f.zero()], [f.zero(), f.one()]])
    }

    pub fn mul(&self, o: &Mat2, f: &Field) -> Mat2 {
        let mut out = Mat2::identity(f);
        for i in 0..2 {
            for j in 0..2 {
                let mut s = f.zero();
                for (l, row) in o.0.iter().enumerate() {
                    s = f.add(&s, &f.mul(&self.0[i][l], &row[j]));
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        f.sub(
            &f.mul(&self.0[0][0], &self.0[1][1]),
            &f.mul(&self.0[0][1], &self.0[1][0]),
        )
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        f.add(&self.0[0][0], &self.0[1][1])
    }

    /// Adjugate: self * adjugate = det * identity, so this is the inverse up
    /// to the (projectively irrelevant) determinant factor.
    pub fn adjugate(&self, f: &Field) -> Mat2 {
        Mat2([
            [self.0[1][1].clone(), f.neg(&self.0[0][1])],
            [f.neg(&self.0[1][0]), self.0[0][0].clone()],
        ])
    }

    /// Image of a projective point (x : w) of the line.
    pub fn apply(&self, x: &FieldElem, w: &FieldElem, f: &Field) -> (FieldElem, FieldElem) {
        (
            f.add(&f.mul(&self.0[0][0], x), &f.mul(&self.0[0][1], w)),
            f.add(&f.mul(&self.0[1][0], x), &f.mul(&self.0[1][1], w)),
        )
    }

    pub fn is_scalar(&self, f: &Field) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero() && self.0[0][0] == self.0[1][1] && {
            let _ = f;
            true
        }
    }

    /// Canonical representative of the projective class: scale so the first
    /// nonzero entry in row-major order becomes 1.
    pub fn normalized(&self, f: &Field) -> Mat2 {
        let lead = self
            .entries()
            .find(|e| !e.is_zero())
            .expect("zero matrix has no projective class");
        let li = f.inv(lead).unwrap();
        let mut out = self.clone();
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e = f.mul(e, &li);
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = &FieldElem> {
        self.0.iter().flatten()
    }

    /// Ordering key; matrices must be over the same field and already
    /// normalized for the order to be projectively meaningful.
    pub fn key(&self) -> Vec<FieldElem> {
        self.entries().cloned().collect()
    }
}

/// Row-major 3x3 matrix over a fixed field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat3(pub [[FieldElem; 3]; 3]);

impl Mat3 {
    pub fn identity(f: &Field) -> Mat3 {
        let mut m = Mat3::zero(f);
        for i in 0..3 {
            m.0[i][i] = f.one();
        }
        m
    }

    pub fn zero(f: &Field) -> Mat3 {
        Mat3(std::array::from_fn(|_| std::array::from_fn(|_| f.zero())))
    }

    pub fn from_cols(c0: &[FieldElem; 3], c1: &[FieldElem; 3], c2: &[FieldElem; 3]) -> Mat3 {
        Mat3(std::array::from_fn(|i| {
            [c0[i].clone(), c1[i].clone(), c2[i].clone()]
        }))
    }

    pub fn mul(&self, o: &Mat3, f: &Field) -> Mat3 {
        let mut out = Mat3::zero(f);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = f.zero();
                for (l, row) in o.0.iter().enumerate() {
                    s = f.add(&s, &f.mul(&self.0[i][l], &row[j]));
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        let m = &self.0;
        let mut s = f.zero();
        let perms: [([usize; 3], bool); 6] = [
            ([0, 1, 2], true),
            ([1, 2, 0], true),
            ([2, 0, 1], true),
            ([0, 2, 1], false),
            ([1, 0, 2], false),
            ([2, 1, 0], false),
        ];
        for (perm, pos) in perms {
            let t = f.mul(&f.mul(&m[0][perm[0]], &m[1][perm[1]]), &m[2][perm[2]]);
            s = if pos { f.add(&s, &t) } else { f.sub(&s, &t) };
        }
        s
    }

    pub fn apply(&self, v: &[FieldElem; 3], f: &Field) -> [FieldElem; 3] {
        std::array::from_fn(|i| {
            let mut s = f.zero();
            for (j, vj) in v.iter().enumerate() {
                s = f.add(&s, &f.mul(&self.0[i][j], vj));
            }
            s
        })
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> Mat3 {
        let mut out = self.clone();
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e = f.mul(e, c);
            }
        }
        out
    }

    pub fn add(&self, o: &Mat3, f: &Field) -> Mat3 {
        let mut out = self.clone();
        for (i, row) in out.0.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f.add(e, &o.0[i][j]);
            }
        }
        out
    }

    pub fn normalized(&self, f: &Field) -> Mat3 {
        let lead = self
            .entries()
            .find(|e| !e.is_zero())
            .expect("zero matrix has no projective class");
        let li = f.inv(lead).unwrap();
        self.scale(&li, f)
    }

    pub fn entries(&self) -> impl Iterator<Item = &FieldElem> {
        self.0.iter().flatten()
    }

    pub fn key(&self) -> Vec<FieldElem> {
        self.entries().cloned().collect()
    }
}

/// Reduces `rows` to reduced row-echelon form in place and returns the pivot
/// columns.
pub fn rref(rows: &mut [Vec<FieldElem>], f: &Field) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let li = f.inv(&rows[r][c]).unwrap();
        for e in rows[r].iter_mut() {
            *e = f.mul(e, &li);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = f.mul(&factor, &rows[r][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of the matrix, one vector per free column, in
/// ascending free-column order (the canonical RREF basis).
pub fn kernel_basis(rows: &[Vec<FieldElem>], ncols: usize, f: &Field) -> Vec<Vec<FieldElem>> {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let pivots = rref(&mut m, f);
    let mut basis = Vec::new();
    for j in 0..ncols {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = vec![f.zero(); ncols];
        v[j] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&m[r][j]);
        }
        basis.push(v);
    }
    basis
}

/// Determinant of a square matrix by Gaussian elimination with sign tracking.
pub fn det(mut rows: Vec<Vec<FieldElem>>, f: &Field) -> FieldElem {
    let n = rows.len();
    let mut sign_flip = false;
    let mut acc = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return f.zero();
        };
        if pr != c {
            rows.swap(c, pr);
            sign_flip = !sign_flip;
        }
        acc = f.mul(&acc, &rows[c][c]);
        let li = f.inv(&rows[c][c]).unwrap();
        for i in c + 1..n {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = f.mul(&rows[i][c], &li);
            for j in c..n {
                let t = f.mul(&factor, &rows[c][j]);
                rows[i][j] = f.sub(&rows[i][j], &t);
            }
        }
    }
    if sign_flip {
        f.neg(&acc)
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn f7() -> Field {
        Field::new(7, 1).unwrap()
    }

    #[test]
    fn mat2_adjugate_inverts() {
        let f = f7();
        let m = Mat2([[f.from_u64(2), f.from_u64(3)], [f.from_u64(1), f.from_u64(4)]]);
        let adj = m.adjugate(&f);
        let prod = m.mul(&adj, &f);
        let d = m.det(&f);
        assert_eq!(prod.0[0][0], d);
        assert_eq!(prod.0[1][1], d);
        assert!(prod.0[0][1].is_zero() && prod.0[1][0].is_zero());
    }

    #[test]
    fn det3_matches_cofactor_expansion() {
        let f = f7();
        let m = Mat3([
            [f.from_u64(1), f.from_u64(2), f.from_u64(3)],
            [f.from_u64(0), f.from_u64(4), f.from_u64(5)],
            [f.from_u64(1), f.from_u64(0), f.from_u64(6)],
        ]);
        // 1*(24-0) - 2*(0-5) + 3*(0-4) = 24 + 10 - 12 = 22 = 1 mod 7.
        assert_eq!(m.det(&f), f.from_u64(1));
        let rows: Vec<Vec<FieldElem>> = m.0.iter().map(|r| r.to_vec()).collect();
        assert_eq!(det(rows, &f), f.from_u64(1));
    }

    #[test]
    fn gaussian_det_tracks_row_swaps() {
        let f = f7();
        // Antidiagonal 2x2: det = -1.
        let rows = vec![
            vec![f.zero(), f.one()],
            vec![f.one(), f.zero()],
        ];
        assert_eq!(det(rows, &f), f.from_i64(-1));
    }

    #[test]
    fn kernel_of_single_functional() {
        let f = f7();
        // ker(x + 2y + 3z): basis from RREF is (-2,1,0), (-3,0,1).
        let rows = vec![vec![f.from_u64(1), f.from_u64(2), f.from_u64(3)]];
        let basis = kernel_basis(&rows, 3, &f);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], vec![f.from_i64(-2), f.one(), f.zero()]);
        assert_eq!(basis[1], vec![f.from_i64(-3), f.zero(), f.one()]);
    }

    #[test]
    fn rank_deficient_det_is_zero() {
        let f = f7();
        let rows = vec![
            vec![f.from_u64(1), f.from_u64(2)],
            vec![f.from_u64(2), f.from_u64(4)],
        ];
        assert_eq!(det(rows, &f), f.zero());
    }
}
