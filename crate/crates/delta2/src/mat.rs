//! Dense integer matrices and exact linear algebra: Smith normal form with
//! unimodular transforms, integer/rational system solving, kernel bases.

use num_rational::Rational64;

pub type Rat = Rational64;

#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IMat { rows: r, cols: c, data: rows.concat() }
    }

    pub fn column(col: &[i64]) -> Self {
        IMat { rows: col.len(), cols: 1, data: col.to_vec() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn mul_qvec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_qvec");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from_integer(self[(i, j)]) * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> IMat {
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IMat) -> IMat {
        assert_eq!(self.rows, other.rows);
        let mut out = IMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Kronecker product self ⊗ other, row-major index convention.
    pub fn kronecker(&self, other: &IMat) -> IMat {
        let mut out = IMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == 0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        out
    }

}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of Smith normal form: u * a * v = d with u, v unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub uinv: IMat,
    pub d: IMat,
    pub v: IMat,
    pub vinv: IMat,
}

impl Snf {
    pub fn diag(&self, i: usize) -> i64 {
        if i < self.d.nrows() && i < self.d.ncols() {
            self.d[(i, i)]
        } else {
            0
        }
    }

    pub fn rank(&self) -> usize {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).take_while(|&i| self.d[(i, i)] != 0).count()
    }
}

/// Working matrix for the elimination; i128 so intermediate transforms
/// cannot overflow before the final conversion back to i64.
struct Work {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl Work {
    fn from_imat(a: &IMat) -> Work {
        Work {
            rows: a.nrows(),
            cols: a.ncols(),
            data: (0..a.nrows())
                .flat_map(|i| (0..a.ncols()).map(move |j| (i, j)))
                .map(|ij| a[ij] as i128)
                .collect(),
        }
    }

    fn identity(n: usize) -> Work {
        let mut w = Work { rows: n, cols: n, data: vec![0; n * n] };
        for i in 0..n {
            w.data[i * n + i] = 1;
        }
        w
    }

    fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn add_row(&mut self, i: usize, j: usize, k: i128) {
        for c in 0..self.cols {
            let v = self.get(j, c);
            self.data[i * self.cols + c] += k * v;
        }
    }

    fn add_col(&mut self, i: usize, j: usize, k: i128) {
        for r in 0..self.rows {
            let v = self.get(r, j);
            self.data[r * self.cols + i] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self.data[i * self.cols + c] = -self.data[i * self.cols + c];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            self.data[r * self.cols + j] = -self.data[r * self.cols + j];
        }
    }

    fn to_imat(&self) -> IMat {
        let mut m = IMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = i64::try_from(self.get(i, j))
                    .expect("normal form transform exceeds 64 bits");
            }
        }
        m
    }

    #[cfg(debug_assertions)]
    fn mul(&self, other: &Work) -> Work {
        assert_eq!(self.cols, other.rows);
        let mut out = Work {
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..other.cols {
                        out.data[i * other.cols + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    #[cfg(debug_assertions)]
    fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == i128::from(i == j)))
    }
}

pub fn smith_normal_form(a: &IMat) -> Snf {
    let mut d = Work::from_imat(a);
    let (r, c) = (d.rows, d.cols);
    let mut u = Work::identity(r);
    let mut uinv = Work::identity(r);
    let mut v = Work::identity(c);
    let mut vinv = Work::identity(c);

    // elementary ops applied to d are mirrored on u/v; inverses get the
    // opposite-side inverse op so u*a*v = d and u*uinv = I hold throughout
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            u.swap_rows($i, $j);
            uinv.swap_cols($i, $j);
        }};
    }
    macro_rules! row_add {
        ($i:expr, $j:expr, $k:expr) => {{
            d.add_row($i, $j, $k);
            u.add_row($i, $j, $k);
            uinv.add_col($j, $i, -$k);
        }};
    }
    macro_rules! row_neg {
        ($i:expr) => {{
            d.negate_row($i);
            u.negate_row($i);
            uinv.negate_col($i);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            v.swap_cols($i, $j);
            vinv.swap_rows($i, $j);
        }};
    }
    macro_rules! col_add {
        ($i:expr, $j:expr, $k:expr) => {{
            d.add_col($i, $j, $k);
            v.add_col($i, $j, $k);
            vinv.add_row($j, $i, -$k);
        }};
    }

    let n = r.min(c);
    let mut t = 0;
    while t < n {
        // repeatedly bring a trailing entry of minimal absolute value to the
        // pivot and reduce its row and column; the pivot shrinks strictly
        // between passes, which also keeps coefficient growth in check
        let mut exhausted = false;
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d.get(i, j) != 0
                        && pivot.is_none_or(|(pi, pj): (usize, usize)| {
                            d.get(i, j).abs() < d.get(pi, pj).abs()
                        })
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                exhausted = true;
                break;
            };
            row_swap!(t, pi);
            col_swap!(t, pj);
            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = d.get(i, t).div_euclid(p);
                if q != 0 {
                    row_add!(i, t, -q);
                }
                if d.get(i, t) != 0 {
                    clean = false;
                }
            }
            if !clean {
                // leftover remainders are smaller than the pivot; re-select
                continue;
            }
            // the column is clear, so these ops touch row t only
            for j in t + 1..c {
                let q = d.get(t, j).div_euclid(p);
                if q != 0 {
                    col_add!(j, t, -q);
                }
                if d.get(t, j) != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if exhausted {
            break;
        }

        if d.get(t, t) < 0 {
            row_neg!(t);
        }

        // divisibility: d[t][t] must divide every trailing entry
        let p = d.get(t, t);
        let mut fixed = true;
        'outer: for i in t + 1..r {
            for j in t + 1..c {
                if d.get(i, j) % p != 0 {
                    row_add!(t, i, 1);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    // verified in i128 so the check itself cannot overflow
    #[cfg(debug_assertions)]
    {
        let uav = u.mul(&Work::from_imat(a)).mul(&v);
        debug_assert_eq!(uav.data, d.data);
        debug_assert!(u.mul(&uinv).is_identity());
        debug_assert!(vinv.mul(&v).is_identity());
    }
    Snf {
        u: u.to_imat(),
        uinv: uinv.to_imat(),
        d: d.to_imat(),
        v: v.to_imat(),
        vinv: vinv.to_imat(),
    }
}

/// Basis of the integer kernel lattice of `a` (saturated), as matrix columns.
pub fn kernel_basis(a: &IMat) -> IMat {
    let snf = smith_normal_form(a);
    let free: Vec<usize> = (0..a.ncols()).filter(|&j| snf.diag(j) == 0).collect();
    let mut k = IMat::zeros(a.ncols(), free.len());
    for (idx, &j) in free.iter().enumerate() {
        for i in 0..a.ncols() {
            k[(i, idx)] = snf.v[(i, j)];
        }
    }
    k
}

/// Solve a x = b over the integers.
pub fn solve_integer(a: &IMat, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.nrows(), b.len());
    let snf = smith_normal_form(a);
    solve_integer_with(&snf, b)
}

/// Solve with a precomputed Smith form of the coefficient matrix.
pub fn solve_integer_with(snf: &Snf, b: &[i64]) -> Option<Vec<i64>> {
    let (nrows, ncols) = (snf.u.nrows(), snf.v.nrows());
    assert_eq!(nrows, b.len());
    let ub = snf.u.mul_vec(b);
    let mut y = vec![0i64; ncols];
    for i in 0..nrows {
        let di = snf.diag(i);
        if di == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % di != 0 {
                return None;
            }
            if i < ncols {
                y[i] = ub[i] / di;
            }
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Solve a x = b over the rationals.
pub fn solve_rational(a: &IMat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.nrows(), b.len());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_qvec(b);
    let mut y = vec![Rat::from_integer(0); a.ncols()];
    for i in 0..a.nrows() {
        let di = snf.diag(i);
        if di == 0 {
            if ub[i] != Rat::from_integer(0) {
                return None;
            }
        } else if i < a.ncols() {
            y[i] = ub[i] / Rat::from_integer(di);
        }
    }
    Some(snf.v.mul_qvec(&y))
}

pub fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(k: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| k * x).collect()
}

pub fn basis_vec(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
