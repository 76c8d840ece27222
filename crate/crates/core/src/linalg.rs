//! Dense matrices over `A` with column echelon and Smith normal form.
//!
//! Column echelon (column operations only) is the cheap tool for kernels,
//! span bases and solving; Smith normal form is used where the module
//! structure or a change of generators is needed.

use crate::base_ring::{BaseRing, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: RingElem::zeros(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = RingElem::one();
        }
        m
    }

    /// Diagonal `rows x entries.len()` matrix.
    pub fn diagonal(rows: usize, entries: &[RingElem]) -> Self {
        let mut m = Matrix::zeros(rows, entries.len());
        for (j, e) in entries.iter().enumerate() {
            m.set(j, j, e.clone());
        }
        m
    }

    /// Builds from rows; all rows must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<RingElem>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<RingElem>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, e) in c.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<RingElem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Rows `[start, end)`.
    pub fn row_range(&self, start: usize, end: usize) -> Matrix {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Vertical concatenation; all blocks must share the column count.
    pub fn vstack(cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn block_diagonal(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn mul(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        let nonzero: Vec<Vec<usize>> = (0..other.rows)
            .map(|k| (0..other.cols).filter(|&j| !other.get(k, j).is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &nonzero[k] {
                    let cur = out.get(i, j);
                    let v = ring.add_mul(cur, a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &BaseRing, v: &[RingElem]) -> Vec<RingElem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = RingElem::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = ring.add_mul(&acc, self.get(i, k), x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, ring: &BaseRing, c: &RingElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| ring.mul(a, c)).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, ring.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    // ---- elementary operations ----

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a += c * row_b
    fn row_add(&mut self, ring: &BaseRing, a: usize, c: &RingElem, b: usize) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let src = &self.data[b * self.cols + j];
            if src.is_zero() {
                continue;
            }
            let v = ring.add_mul(&self.data[a * self.cols + j], c, src);
            self.data[a * self.cols + j] = v;
        }
    }

    /// col_a += c * col_b
    fn col_add(&mut self, ring: &BaseRing, a: usize, c: &RingElem, b: usize) {
        self.col_add_from(ring, a, c, b, 0);
    }

    /// col_a += c * col_b, touching rows `start..` only.
    fn col_add_from(&mut self, ring: &BaseRing, a: usize, c: &RingElem, b: usize, start: usize) {
        if c.is_zero() {
            return;
        }
        for i in start..self.rows {
            let src = &self.data[i * self.cols + b];
            if src.is_zero() {
                continue;
            }
            let v = ring.add_mul(&self.data[i * self.cols + a], c, src);
            self.data[i * self.cols + a] = v;
        }
    }

    /// `(row_a, row_b) <- (p row_a + q row_b, r row_a + s row_b)`.
    fn rows_combine(&mut self, ring: &BaseRing, a: usize, b: usize, [p, q, r, s]: [&RingElem; 4]) {
        for j in 0..self.cols {
            let (x, y) = (&self.data[a * self.cols + j], &self.data[b * self.cols + j]);
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let nx = ring.add(&ring.mul(p, x), &ring.mul(q, y));
            let ny = ring.add(&ring.mul(r, x), &ring.mul(s, y));
            self.data[a * self.cols + j] = nx;
            self.data[b * self.cols + j] = ny;
        }
    }

    /// `(col_a, col_b) <- (p col_a + q col_b, r col_a + s col_b)`.
    fn cols_combine(&mut self, ring: &BaseRing, a: usize, b: usize, [p, q, r, s]: [&RingElem; 4]) {
        for i in 0..self.rows {
            let (x, y) = (&self.data[i * self.cols + a], &self.data[i * self.cols + b]);
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let nx = ring.add(&ring.mul(p, x), &ring.mul(q, y));
            let ny = ring.add(&ring.mul(r, x), &ring.mul(s, y));
            self.data[i * self.cols + a] = nx;
            self.data[i * self.cols + b] = ny;
        }
    }

    fn row_scale(&mut self, ring: &BaseRing, a: usize, s: u32) {
        for j in 0..self.cols {
            let v = ring.scale(&self.data[a * self.cols + j], s);
            self.data[a * self.cols + j] = v;
        }
    }

    fn col_scale(&mut self, ring: &BaseRing, a: usize, s: u32) {
        for i in 0..self.rows {
            let v = ring.scale(&self.data[i * self.cols + a], s);
            self.data[i * self.cols + a] = v;
        }
    }

    pub fn render(&self, ring: &BaseRing) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|e| format!("\"{}\"", ring.render(e))).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

fn unit_inverse_scalar(ring: &BaseRing, lc: u32) -> u32 {
    ring.unit_inverse(&RingElem::from_raw(&[lc]))
        .expect("nonzero scalar")
        .coeffs()[0]
}

/// `m * v = h` with `h` in column echelon form and `v` unimodular.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: Matrix,
    /// Absent when built by [`span_echelon`].
    pub v: Option<Matrix>,
    /// `(row, column)` of each pivot; pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the kernel of the original matrix, as columns.
    pub fn kernel(&self) -> Matrix {
        let v = self.v.as_ref().expect("kernel needs the column transform");
        let idx: Vec<usize> = (self.rank()..v.cols()).collect();
        v.select_columns(&idx)
    }

    /// Basis of the column span of the original matrix.
    pub fn span_basis(&self) -> Matrix {
        let idx: Vec<usize> = (0..self.rank()).collect();
        self.h.select_columns(&idx)
    }

    /// Coordinates `y` with `span_basis * y = b`, if `b` is in the span.
    pub fn span_coordinates(&self, ring: &BaseRing, b: &[RingElem]) -> Option<Vec<RingElem>> {
        assert_eq!(b.len(), self.h.rows(), "vector length mismatch");
        let mut rest = b.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for &(r, t) in &self.pivots {
            let q = if rest[r].is_zero() {
                RingElem::zero()
            } else {
                ring.exact_div(&rest[r], self.h.get(r, t))?
            };
            if !q.is_zero() {
                for (i, x) in rest.iter_mut().enumerate().skip(r) {
                    let hv = self.h.get(i, t);
                    if !hv.is_zero() {
                        *x = ring.sub(x, &ring.mul(&q, hv));
                    }
                }
            }
            y.push(q);
        }
        if rest.iter().all(RingElem::is_zero) {
            Some(y)
        } else {
            None
        }
    }

    /// A solution `x` of `m * x = b`, if one exists.
    pub fn solve(&self, ring: &BaseRing, b: &[RingElem]) -> Option<Vec<RingElem>> {
        let v = self.v.as_ref().expect("solve needs the column transform");
        let y = self.span_coordinates(ring, b)?;
        let mut x = RingElem::zeros(v.rows());
        for (t, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, xi) in x.iter_mut().enumerate() {
                let vt = v.get(i, t);
                if !vt.is_zero() {
                    *xi = ring.add_mul(xi, c, vt);
                }
            }
        }
        Some(x)
    }

    pub fn contains(&self, ring: &BaseRing, b: &[RingElem]) -> bool {
        self.span_coordinates(ring, b).is_some()
    }
}

pub fn column_echelon(ring: &BaseRing, m: &Matrix) -> ColumnEchelon {
    echelon(ring, m, true)
}

/// Column echelon form without the column transform; only the span methods apply.
pub fn span_echelon(ring: &BaseRing, m: &Matrix) -> ColumnEchelon {
    echelon(ring, m, false)
}

fn echelon(ring: &BaseRing, m: &Matrix, track: bool) -> ColumnEchelon {
    let rows = m.rows();
    let n = m.cols();
    let mut h = m.clone();
    let mut v = track.then(|| Matrix::identity(n));
    let mut pivots = Vec::new();
    let mut k = 0;
    for r in 0..rows {
        if k == n {
            break;
        }
        loop {
            let best = (k..n)
                .filter(|&c| !h.get(r, c).is_zero())
                .min_by_key(|&c| h.get(r, c).degree());
            let Some(best) = best else { break };
            h.swap_cols(k, best);
            if let Some(v) = v.as_mut() {
                v.swap_cols(k, best);
            }
            let mut clear = true;
            for c in k + 1..n {
                if h.get(r, c).is_zero() {
                    continue;
                }
                let (q, rem) = ring.div_rem(h.get(r, c), h.get(r, k)).expect("nonzero pivot");
                let nq = ring.neg(&q);
                h.col_add_from(ring, c, &nq, k, r);
                if let Some(v) = v.as_mut() {
                    v.col_add(ring, c, &nq, k);
                }
                if !rem.is_zero() {
                    clear = false;
                }
            }
            if clear {
                let lc = h.get(r, k).leading();
                if lc != 1 {
                    let s = unit_inverse_scalar(ring, lc);
                    h.col_scale(ring, k, s);
                    if let Some(v) = v.as_mut() {
                        v.col_scale(ring, k, s);
                    }
                }
                pivots.push((r, k));
                k += 1;
                break;
            }
        }
    }
    ColumnEchelon { h, v, pivots }
}

/// `u * m * v = d` with `d` diagonal, monic, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal of length `min(rows, cols)`; entries past `rank` are zero.
    pub diag: Vec<RingElem>,
    pub rank: usize,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    /// The full diagonal matrix with the shape of the input.
    pub fn d_matrix(&self) -> Matrix {
        let mut d = Matrix::zeros(self.u.rows(), self.v.rows());
        for (i, e) in self.diag.iter().enumerate() {
            d.set(i, i, e.clone());
        }
        d
    }

    /// Recomputes the certificate: `u m v = d`, `u u_inv = 1`, `v v_inv = 1`,
    /// monic diagonal with the divisibility chain.
    pub fn verify(&self, ring: &BaseRing, m: &Matrix) -> bool {
        let prod = self.u.mul(ring, m).mul(ring, &self.v);
        if prod != self.d_matrix() {
            return false;
        }
        if self.u.mul(ring, &self.u_inv) != Matrix::identity(self.u.rows())
            || self.v.mul(ring, &self.v_inv) != Matrix::identity(self.v.rows())
        {
            return false;
        }
        let nonzero = &self.diag[..self.rank];
        if nonzero.iter().any(|d| d.is_zero() || d.leading() != 1) {
            return false;
        }
        if self.diag[self.rank..].iter().any(|d| !d.is_zero()) {
            return false;
        }
        nonzero.windows(2).all(|w| ring.divides(&w[0], &w[1]))
    }
}

struct SmithWork<'a> {
    ring: &'a BaseRing,
    a: Matrix,
    track: bool,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl SmithWork<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// row_i += c row_j
    fn row_add(&mut self, i: usize, c: &RingElem, j: usize) {
        let ring = self.ring;
        self.a.row_add(ring, i, c, j);
        if self.track {
            self.u.row_add(ring, i, c, j);
            let nc = ring.neg(c);
            self.u_inv.col_add(ring, j, &nc, i);
        }
    }

    /// col_i += c col_j
    fn col_add(&mut self, i: usize, c: &RingElem, j: usize) {
        let ring = self.ring;
        self.a.col_add(ring, i, c, j);
        if self.track {
            self.v.col_add(ring, i, c, j);
            let nc = ring.neg(c);
            self.v_inv.row_add(ring, j, &nc, i);
        }
    }

    /// Replaces `(a_ti, a_ji)`-style pairs by `(gcd, 0)`: rows `t, j` get
    /// `[[s, x], [-b/g, a/g]]` where `g = s a + x b`.
    fn rows_gcd(&mut self, t: usize, j: usize, a: &RingElem, b: &RingElem) {
        let ring = self.ring;
        let (g, s, x) = ring.xgcd(a, b);
        let a1 = ring.exact_div(a, &g).expect("gcd divides");
        let b1 = ring.exact_div(b, &g).expect("gcd divides");
        let nb1 = ring.neg(&b1);
        self.a.rows_combine(ring, t, j, [&s, &x, &nb1, &a1]);
        if self.track {
            self.u.rows_combine(ring, t, j, [&s, &x, &nb1, &a1]);
            let nx = ring.neg(&x);
            self.u_inv.cols_combine(ring, t, j, [&a1, &b1, &nx, &s]);
        }
    }

    /// Column version of [`Self::rows_gcd`].
    fn cols_gcd(&mut self, t: usize, j: usize, a: &RingElem, b: &RingElem) {
        let ring = self.ring;
        let (g, s, x) = ring.xgcd(a, b);
        let a1 = ring.exact_div(a, &g).expect("gcd divides");
        let b1 = ring.exact_div(b, &g).expect("gcd divides");
        let nb1 = ring.neg(&b1);
        self.a.cols_combine(ring, t, j, [&s, &x, &nb1, &a1]);
        if self.track {
            self.v.cols_combine(ring, t, j, [&s, &x, &nb1, &a1]);
            let nx = ring.neg(&x);
            self.v_inv.rows_combine(ring, t, j, [&a1, &b1, &nx, &s]);
        }
    }

    fn row_scale(&mut self, i: usize, s: u32) {
        let ring = self.ring;
        self.a.row_scale(ring, i, s);
        if self.track {
            let inv = unit_inverse_scalar(ring, s);
            self.u.row_scale(ring, i, s);
            self.u_inv.col_scale(ring, i, inv);
        }
    }

    /// Diagonalizes `a` in place and returns the rank.
    fn run(&mut self) -> usize {
        let ring = self.ring;
        let rows = self.a.rows();
        let cols = self.a.cols();
        let mut rank = 0;
        for t in 0..rows.min(cols) {
            let mut best: Option<(usize, usize)> = None;
            'search: for i in t..rows {
                for j in t..cols {
                    let e = self.a.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| e.degree() < self.a.get(bi, bj).degree()) {
                        best = Some((i, j));
                        if e.degree() == Some(0) {
                            break 'search;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..rows {
                    let b = self.a.get(i, t).clone();
                    if b.is_zero() {
                        continue;
                    }
                    let a = self.a.get(t, t).clone();
                    match ring.exact_div(&b, &a) {
                        Some(q) => self.row_add(i, &ring.neg(&q), t),
                        None => self.rows_gcd(t, i, &a, &b),
                    }
                }
                for j in t + 1..cols {
                    let b = self.a.get(t, j).clone();
                    if b.is_zero() {
                        continue;
                    }
                    let a = self.a.get(t, t).clone();
                    match ring.exact_div(&b, &a) {
                        Some(q) => self.col_add(j, &ring.neg(&q), t),
                        None => self.cols_gcd(t, j, &a, &b),
                    }
                }
                if (t + 1..rows).any(|i| !self.a.get(i, t).is_zero()) {
                    continue;
                }
                let pivot = self.a.get(t, t).clone();
                if pivot.degree() == Some(0) {
                    break;
                }
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !ring.divides(&pivot, self.a.get(i, j)))
                });
                match offender {
                    Some(i) => self.row_add(t, &RingElem::one(), i),
                    None => break,
                }
            }
            let lc = self.a.get(t, t).leading();
            if lc != 1 {
                self.row_scale(t, unit_inverse_scalar(ring, lc));
            }
            rank += 1;
        }
        rank
    }
}

pub fn smith_normal_form(ring: &BaseRing, m: &Matrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = SmithWork {
        ring,
        a: m.clone(),
        track: true,
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
        v_inv: Matrix::identity(cols),
    };
    let rank = w.run();
    let diag = (0..rows.min(cols)).map(|i| w.a.get(i, i).clone()).collect();
    let s = Smith {
        diag,
        rank,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    };
    #[cfg(debug_assertions)]
    debug_assert!(
        rows * cols > 4096 || s.verify(ring, m),
        "Smith normal form certificate failed"
    );
    s
}

/// The nonzero invariant factors of `m` (monic, `d_1 | d_2 | ...`), without transforms.
pub fn invariant_factors(ring: &BaseRing, m: &Matrix) -> Vec<RingElem> {
    let mut w = SmithWork {
        ring,
        a: m.clone(),
        track: false,
        u: Matrix::zeros(0, 0),
        u_inv: Matrix::zeros(0, 0),
        v: Matrix::zeros(0, 0),
        v_inv: Matrix::zeros(0, 0),
    };
    let rank = w.run();
    (0..rank).map(|i| w.a.get(i, i).clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: &BaseRing, rows: &[&[&str]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| ring.parse(s).unwrap()).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn snf_examples() {
        let a = BaseRing::univariate(2, "u").unwrap();
        let s = smith_normal_form(&a, &mat(&a, &[&["u", "0"], &["0", "u^2"]]));
        assert_eq!(s.diag, vec![a.parse("u").unwrap(), a.parse("u^2").unwrap()]);
        let m = mat(&a, &[&["u", "u"], &["0", "u"]]);
        let s = smith_normal_form(&a, &m);
        assert_eq!(s.diag, vec![a.parse("u").unwrap(), a.parse("u").unwrap()]);
        assert!(s.verify(&a, &m));
        let f5 = BaseRing::prime_field(5).unwrap();
        let s = smith_normal_form(&f5, &mat(&f5, &[&["2"]]));
        assert_eq!(s.diag, vec![RingElem::one()]);
    }

    #[test]
    fn snf_fixes_divisibility() {
        // diag(u, u+1) has invariant factors 1, u(u+1).
        let a = BaseRing::univariate(2, "u").unwrap();
        let m = mat(&a, &[&["u", "0"], &["0", "u + 1"]]);
        let s = smith_normal_form(&a, &m);
        assert_eq!(s.diag, vec![RingElem::one(), a.parse("u^2 + u").unwrap()]);
        assert!(s.verify(&a, &m));
    }

    #[test]
    fn empty_matrices() {
        let a = BaseRing::univariate(3, "u").unwrap();
        let s = smith_normal_form(&a, &Matrix::zeros(2, 0));
        assert!(s.diag.is_empty());
        assert_eq!(s.rank, 0);
        let e = column_echelon(&a, &Matrix::zeros(0, 3));
        assert_eq!(e.kernel().cols(), 3);
    }

    #[test]
    fn echelon_kernel_and_solve() {
        let a = BaseRing::univariate(2, "u").unwrap();
        let m = mat(&a, &[&["u", "u + 1"]]);
        let e = column_echelon(&a, &m);
        assert_eq!(e.rank(), 1);
        // Span is the unit ideal.
        assert!(e.contains(&a, &[RingElem::one()]));
        let k = e.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&a, &k).is_zero());
        let x = e.solve(&a, &[a.parse("u^3").unwrap()]).unwrap();
        assert_eq!(m.mul_vec(&a, &x), vec![a.parse("u^3").unwrap()]);
        let m2 = mat(&a, &[&["u"], &["0"]]);
        let e2 = column_echelon(&a, &m2);
        assert!(!e2.contains(&a, &[RingElem::one(), RingElem::zero()]));
        assert!(!e2.contains(&a, &[RingElem::zero(), RingElem::one()]));
    }

    #[test]
    fn kron_shape() {
        let a = BaseRing::prime_field(3).unwrap();
        let x = mat(&a, &[&["1", "2"]]);
        let y = Matrix::identity(2);
        let k = x.kron(&a, &y);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.get(1, 3), &a.constant(2));
    }
}
