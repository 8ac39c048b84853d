//! Linear algebra over the principal ideal domains `K[t]` and `K[t,t⁻¹]`:
//! Smith normal form, kernels, and quotient-module decompositions.

use std::fmt;

use crate::poly::{Laurent, Poly};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense rectangular matrix with polynomial entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut m = PolyMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
            }
            acc
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add(&other[(i, j)]))
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mul(p))
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<Poly>>) -> Self {
        let c = cols.len();
        let mut m = PolyMatrix::zero(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, p) in col.into_iter().enumerate() {
                m[(i, j)] = p;
            }
        }
        m
    }

    /// Determinant by Laplace expansion; intended for the small matrices
    /// that arise here (transforms of rank ≤ 5 in tests).
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = Poly::zero();
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let minor = PolyMatrix::from_fn(n - 1, n - 1, |r, c| {
                self[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = self[(0, j)].mul(&minor.det());
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Inverse when the matrix is unimodular over `K[t]` (all Smith
    /// invariant factors are units); `None` otherwise.
    pub fn inverse_if_unimodular(&self) -> Option<PolyMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self);
        let n = self.rows;
        if snf.invariant_factors.len() != n {
            return None;
        }
        // u·m·v = s  =>  m⁻¹ = v·s⁻¹·u with s diagonal of units.
        let mut s_inv = PolyMatrix::zero(n, n);
        for i in 0..n {
            let d = &snf.s[(i, i)];
            if !d.is_unit() {
                return None;
            }
            s_inv[(i, i)] = Poly::constant(d.coeff(0).inv().ok()?);
        }
        Some(snf.v.mul(&s_inv).mul(&snf.u))
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form `u·m·v = s` with `u, v` invertible over `K[t]`,
/// `s` diagonal, entries monic and each dividing the next.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: PolyMatrix,
    pub s: PolyMatrix,
    pub v: PolyMatrix,
    /// Nonzero diagonal entries in divisibility order.
    pub invariant_factors: Vec<Poly>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct SnfCalc {
    m: PolyMatrix,
    u: PolyMatrix,
    v: PolyMatrix,
}

impl SnfCalc {
    fn new(m: PolyMatrix) -> Self {
        let (r, c) = (m.rows, m.cols);
        SnfCalc {
            m,
            u: PolyMatrix::identity(r),
            v: PolyMatrix::identity(c),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols {
            let tmp = self.m[(a, j)].clone();
            self.m[(a, j)] = self.m[(b, j)].clone();
            self.m[(b, j)] = tmp;
        }
        for j in 0..self.u.cols {
            let tmp = self.u[(a, j)].clone();
            self.u[(a, j)] = self.u[(b, j)].clone();
            self.u[(b, j)] = tmp;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows {
            let tmp = self.m[(i, a)].clone();
            self.m[(i, a)] = self.m[(i, b)].clone();
            self.m[(i, b)] = tmp;
        }
        for i in 0..self.v.rows {
            let tmp = self.v[(i, a)].clone();
            self.v[(i, a)] = self.v[(i, b)].clone();
            self.v[(i, b)] = tmp;
        }
    }

    /// row[a] += q·row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &Poly) {
        for j in 0..self.m.cols {
            self.m[(a, j)] = self.m[(a, j)].add(&q.mul(&self.m[(b, j)]));
        }
        for j in 0..self.u.cols {
            self.u[(a, j)] = self.u[(a, j)].add(&q.mul(&self.u[(b, j)]));
        }
    }

    /// col[a] += q·col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &Poly) {
        for i in 0..self.m.rows {
            self.m[(i, a)] = self.m[(i, a)].add(&q.mul(&self.m[(i, b)]));
        }
        for i in 0..self.v.rows {
            self.v[(i, a)] = self.v[(i, a)].add(&q.mul(&self.v[(i, b)]));
        }
    }

    fn scale_row(&mut self, a: usize, c: &Scalar) {
        let p = Poly::constant(c.clone());
        for j in 0..self.m.cols {
            self.m[(a, j)] = self.m[(a, j)].mul(&p);
        }
        for j in 0..self.u.cols {
            self.u[(a, j)] = self.u[(a, j)].mul(&p);
        }
    }

    /// Pivot selection: nonzero entry of minimal degree in the trailing
    /// submatrix anchored at (k, k); ties broken by lowest (row, col).
    fn select_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..self.m.rows {
            for j in k..self.m.cols {
                if let Some(d) = self.m[(i, j)].degree() {
                    let better = match best {
                        None => true,
                        Some((bd, _, _)) => d < bd,
                    };
                    if better {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn eliminate(&mut self, k: usize) -> bool {
        let Some((pi, pj)) = self.select_pivot(k) else {
            return false;
        };
        self.swap_rows(k, pi);
        self.swap_cols(k, pj);
        let mut pass = 0u32;
        loop {
            pass += 1;
            if std::env::var("SNF_DEBUG").is_ok() {
                let max_bits = (0..self.m.rows)
                    .flat_map(|i| (0..self.m.cols).map(move |j| (i, j)))
                    .flat_map(|(i, j)| {
                        self.m[(i, j)].iter().map(|(_, c)| c.re.numer().bits()).collect::<Vec<_>>()
                    })
                    .max()
                    .unwrap_or(0);
                eprintln!("eliminate k={k} pass={pass} max_bits={max_bits} pivot_deg={:?}",
                    self.m[(k, k)].degree());
            }
            // Reduce column k below and above the pivot.
            let mut dirty = false;
            for i in 0..self.m.rows {
                if i == k || self.m[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = self.m[(i, k)].divmod(&self.m[(k, k)]).unwrap();
                self.add_row(i, k, &q.neg());
                if !r.is_zero() {
                    // Remainder has strictly smaller degree: promote it.
                    self.swap_rows(i, k);
                    dirty = true;
                }
            }
            for j in 0..self.m.cols {
                if j == k || self.m[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = self.m[(k, j)].divmod(&self.m[(k, k)]).unwrap();
                self.add_col(j, k, &q.neg());
                if !r.is_zero() {
                    self.swap_cols(j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let row_clear = (0..self.m.rows).all(|i| i == k || self.m[(i, k)].is_zero());
            let col_clear = (0..self.m.cols).all(|j| j == k || self.m[(k, j)].is_zero());
            if row_clear && col_clear {
                break;
            }
        }
        true
    }

    /// `[[a11,a12],[a21,a22]]` applied to rows (i, j); must have unit det.
    fn combine_rows(&mut self, i: usize, j: usize, t: [&Poly; 4]) {
        for c in 0..self.m.cols {
            let x = self.m[(i, c)].clone();
            let y = self.m[(j, c)].clone();
            self.m[(i, c)] = t[0].mul(&x).add(&t[1].mul(&y));
            self.m[(j, c)] = t[2].mul(&x).add(&t[3].mul(&y));
        }
        for c in 0..self.u.cols {
            let x = self.u[(i, c)].clone();
            let y = self.u[(j, c)].clone();
            self.u[(i, c)] = t[0].mul(&x).add(&t[1].mul(&y));
            self.u[(j, c)] = t[2].mul(&x).add(&t[3].mul(&y));
        }
    }

    /// `[[a11,a12],[a21,a22]]` applied to columns (i, j) from the right.
    fn combine_cols(&mut self, i: usize, j: usize, t: [&Poly; 4]) {
        for r in 0..self.m.rows {
            let x = self.m[(r, i)].clone();
            let y = self.m[(r, j)].clone();
            self.m[(r, i)] = x.mul(t[0]).add(&y.mul(t[2]));
            self.m[(r, j)] = x.mul(t[1]).add(&y.mul(t[3]));
        }
        for r in 0..self.v.rows {
            let x = self.v[(r, i)].clone();
            let y = self.v[(r, j)].clone();
            self.v[(r, i)] = x.mul(t[0]).add(&y.mul(t[2]));
            self.v[(r, j)] = x.mul(t[1]).add(&y.mul(t[3]));
        }
    }

    /// Enforce the divisibility chain on the diagonal. With
    /// d = gcd(x, y) = s·x + t·y, a = x/d, b = y/d, the unit-determinant pair
    ///   [1  1 ] [x 0] [s -b]   [d   0  ]
    ///   [-tb sa] [0 y] [t  a] = [0 xy/d]
    /// replaces (x, y) by (gcd, lcm) touching only the two rows/columns.
    fn normalize_chain(&mut self, rank: usize) {
        if rank < 2 {
            return;
        }
        loop {
            let mut changed = false;
            for i in 0..rank - 1 {
                let x = self.m[(i, i)].clone();
                let y = self.m[(i + 1, i + 1)].clone();
                if x.divides(&y) {
                    continue;
                }
                let (d, s, t) = x.gcd_ext(&y).unwrap();
                let a = x.div_exact(&d).unwrap();
                let b = y.div_exact(&d).unwrap();
                let tb = t.mul(&b).neg();
                let sa = s.mul(&a);
                let one = Poly::one();
                let nb = b.neg();
                self.combine_rows(i, i + 1, [&one, &one, &tb, &sa]);
                self.combine_cols(i, i + 1, [&s, &nb, &t, &a]);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    fn make_monic(&mut self, rank: usize) {
        for i in 0..rank {
            let lead = self.m[(i, i)].leading_coeff();
            if !lead.is_one() && !lead.is_zero() {
                self.scale_row(i, &lead.inv().unwrap());
            }
        }
    }

    fn run(mut self) -> SnfResult {
        let n = self.m.rows.min(self.m.cols);
        let mut rank = 0;
        for k in 0..n {
            if !self.eliminate(k) {
                break;
            }
            rank = k + 1;
        }
        self.normalize_chain(rank);
        self.make_monic(rank);
        let invariant_factors = (0..rank).map(|i| self.m[(i, i)].clone()).collect();
        SnfResult {
            u: self.u,
            s: self.m,
            v: self.v,
            invariant_factors,
        }
    }
}

/// Smith normal form over `K[t]`. Deterministic: pivot of minimal degree,
/// ties by lowest (row, col); invariant factors monic.
pub fn smith_normal_form(m: &PolyMatrix) -> SnfResult {
    SnfCalc::new(m.clone()).run()
}

/// An `R`-basis of `{x : m·x = 0}` as matrix columns. The kernel of a map
/// of free modules over a PID is free, and this basis is saturated.
pub fn kernel_basis(m: &PolyMatrix) -> PolyMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let cols: Vec<Vec<Poly>> = (rank..m.cols).map(|j| snf.v.column(j)).collect();
    PolyMatrix::from_columns(m.cols, cols)
}

/// Decomposition of a finitely generated module over the PID `R = K[t]`
/// as `⊕ R/(d_i) ⊕ R^free_rank` with non-unit `d_i` in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDecomposition {
    pub torsion: Vec<Poly>,
    pub free_rank: usize,
}

impl QuotientDecomposition {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

/// `R^ambient_rank / column-span(sub)` via the Smith normal form of `sub`.
pub fn quotient_decomposition(ambient_rank: usize, sub: &PolyMatrix) -> QuotientDecomposition {
    assert_eq!(sub.rows, ambient_rank, "submodule columns must live in R^ambient");
    let snf = smith_normal_form(sub);
    let torsion: Vec<Poly> = snf
        .invariant_factors
        .iter()
        .filter(|d| !d.is_unit())
        .cloned()
        .collect();
    QuotientDecomposition {
        torsion,
        free_rank: ambient_rank - snf.rank(),
    }
}

/// Solve `basis · c = target` exactly over `R` for a saturated column basis
/// (all invariant factors units). Errors if `target` is outside the span.
pub fn solve_in_span(basis: &PolyMatrix, target: &[Poly]) -> Result<Vec<Poly>> {
    assert_eq!(basis.rows, target.len());
    let snf = smith_normal_form(basis);
    let rank = snf.rank();
    // u·basis·v = s  =>  basis·(v·y) = u⁻¹·s·y; with b = u·target we need
    // s·y = b, i.e. y_i = b_i / d_i and b_i = 0 past the rank.
    let b: Vec<Poly> = (0..basis.rows)
        .map(|i| {
            let mut acc = Poly::zero();
            for k in 0..basis.rows {
                acc = acc.add(&snf.u[(i, k)].mul(&target[k]));
            }
            acc
        })
        .collect();
    let mut y = vec![Poly::zero(); basis.cols];
    for (i, bi) in b.iter().enumerate() {
        if i < rank {
            y[i] = bi.div_exact(&snf.s[(i, i)]).map_err(|_| Error::NotInSpan)?;
        } else if !bi.is_zero() {
            return Err(Error::NotInSpan);
        }
    }
    let c: Vec<Poly> = (0..basis.cols)
        .map(|i| {
            let mut acc = Poly::zero();
            for k in 0..basis.cols {
                acc = acc.add(&snf.v[(i, k)].mul(&y[k]));
            }
            acc
        })
        .collect();
    Ok(c)
}

/// Dense rectangular matrix over the Laurent ring `K[t,t⁻¹]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Laurent>,
}

impl LaurentMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![Laurent::zero(); rows * cols],
        }
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> Self {
        let mut out = LaurentMatrix::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out[(i, j)] = Laurent::from_poly(&m[(i, j)]);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = Laurent;
    fn index(&self, (i, j): (usize, usize)) -> &Laurent {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Laurent {
        &mut self.entries[i * self.cols + j]
    }
}

/// Invariant factors of a Laurent matrix, normalized to monic polynomials
/// with nonzero constant term (the units of `R₀` are `c·t^k`, so every
/// `t`-power is stripped). Units are dropped.
///
/// `K[t,t⁻¹]` is a PID whose primes are those of `K[t]` other than `t`:
/// clear the minimal `t`-powers row- and column-wise, run the `K[t]`
/// routine, then strip remaining `t`-powers off the diagonal.
pub fn laurent_invariant_factors(m: &LaurentMatrix) -> Vec<Poly> {
    let mut cleared = PolyMatrix::zero(m.rows, m.cols);
    // Row-wise clearing is enough to land in K[t]; the t-parts of the
    // invariant factors are stripped at the end anyway.
    for i in 0..m.rows {
        let vmin = (0..m.cols)
            .filter_map(|j| m[(i, j)].min_exp())
            .min()
            .unwrap_or(0);
        for j in 0..m.cols {
            let shifted = m[(i, j)].shift(-vmin);
            cleared[(i, j)] = shifted.to_poly().expect("cleared row has no negative exponents");
        }
    }
    let snf = smith_normal_form(&cleared);
    snf.invariant_factors
        .iter()
        .map(|d| {
            let (_, unit_free) = Laurent::from_poly(d).split_unit();
            unit_free.monic()
        })
        .filter(|d| !d.is_unit())
        .collect()
}

/// Rank over the fraction field (number of nonzero invariant factors).
pub fn laurent_rank(m: &LaurentMatrix) -> usize {
    let mut cleared = PolyMatrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        let vmin = (0..m.cols)
            .filter_map(|j| m[(i, j)].min_exp())
            .min()
            .unwrap_or(0);
        for j in 0..m.cols {
            cleared[(i, j)] = m[(i, j)].shift(-vmin).to_poly().unwrap();
        }
    }
    smith_normal_form(&cleared).rank()
}
