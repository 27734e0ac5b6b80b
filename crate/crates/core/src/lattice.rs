//! The subspace lattice L(F_q^n): enumeration, canonical RREF subspaces,
//! meet/join, orthogonal complement, covers and intervals.
//!
//! Every subspace is identified by its reduced row echelon basis matrix, so
//! equal subspaces are bit-identical and the whole lattice carries a total
//! order: dimension first, then lexicographic on the basis matrix. All table
//! indexing and file formats rely on that order.

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Default cap on the number of subspaces a lattice may have.
pub const DEFAULT_LATTICE_CAP: u64 = 10_000_000;

static CONFIGURED_CAP: std::sync::atomic::AtomicU64 =
    std::sync::atomic::AtomicU64::new(DEFAULT_LATTICE_CAP);

/// Overrides the cap used by `enumerate_lattice` for the whole process; the
/// CLI wires this to the QMAT_LATTICE_CAP environment variable.
pub fn set_default_lattice_cap(cap: u64) {
    CONFIGURED_CAP.store(cap, std::sync::atomic::Ordering::Relaxed);
}

pub fn default_lattice_cap() -> u64 {
    CONFIGURED_CAP.load(std::sync::atomic::Ordering::Relaxed)
}

/// A subspace of F_q^n in canonical form: RREF basis rows, zero rows dropped.
/// The zero space is the 0 x n matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rows
            .len()
            .cmp(&other.rows.len())
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "<0:{}>", self.n);
        }
        write!(f, "<")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for &v in row {
                match char::from_digit(v, 36) {
                    Some(c) => write!(f, "{c}")?,
                    None => write!(f, "({v})")?,
                }
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    /// The zero subspace of F_q^n.
    pub fn zero(n: usize) -> Subspace {
        Subspace { n, rows: vec![] }
    }

    /// The full space F_q^n.
    pub fn full(n: usize) -> Subspace {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u32; n];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pivot column of each basis row (strictly increasing).
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("canonical row"))
            .collect()
    }

    /// Reduces `v` against the basis; returns the residue. Zero residue means
    /// membership.
    fn reduce_vector(&self, field: &FieldSpec, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = row.iter().position(|&x| x != 0).unwrap();
            if v[p] != 0 {
                let c = v[p];
                for j in 0..self.n {
                    v[j] = field.sub(v[j], field.mul(c, row[j]));
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, field: &FieldSpec, v: &[u32]) -> bool {
        self.reduce_vector(field, v).iter().all(|&x| x == 0)
    }

    /// Containment test: every basis vector of `other` lies in `self`.
    pub fn contains(&self, field: &FieldSpec, other: &Subspace) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    /// All q^dim vectors of the subspace, including zero.
    pub fn vectors(&self, field: &FieldSpec) -> Vec<Vec<u32>> {
        let q = field.order() as usize;
        let k = self.dim();
        let mut out = Vec::with_capacity(q.pow(k as u32));
        let mut coeffs = vec![0u32; k];
        loop {
            let mut v = vec![0u32; self.n];
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for j in 0..self.n {
                        v[j] = field.add(v[j], field.mul(c, self.rows[i][j]));
                    }
                }
            }
            out.push(v);
            // odometer
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] < q as u32 {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// Text form: rows as base-q digit strings joined by commas, `-` for the
    /// zero space. `100,010` is the span of (1,0,0) and (0,1,0) over GF(2).
    pub fn text(&self, field: &FieldSpec) -> String {
        if self.rows.is_empty() {
            return "-".into();
        }
        self.rows
            .iter()
            .map(|r| row_text(field, r))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(field: &FieldSpec, n: usize, s: &str) -> Result<Subspace> {
        let s = s.trim();
        if s == "-" {
            return Ok(Subspace::zero(n));
        }
        let rows = s
            .split(',')
            .map(|r| parse_row(field, n, r.trim()))
            .collect::<Result<Vec<_>>>()?;
        rref(field, n, &rows)
    }
}

fn digit_char(v: u32) -> char {
    char::from_digit(v, 36).expect("digit in range")
}

fn row_text(field: &FieldSpec, row: &[u32]) -> String {
    debug_assert!(field.order() <= 36, "digit encoding needs q <= 36");
    row.iter().map(|&v| digit_char(v)).collect()
}

fn parse_row(field: &FieldSpec, n: usize, s: &str) -> Result<Vec<u32>> {
    let digits: Vec<u32> = s
        .chars()
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| d < field.order())
                .ok_or_else(|| Error::Parse(format!("bad coordinate '{c}'")))
        })
        .collect::<Result<_>>()?;
    if digits.len() != n {
        return Err(Error::ColumnCountMismatch {
            expected: n,
            got: digits.len(),
        });
    }
    Ok(digits)
}

/// Canonical RREF of arbitrary generating rows; zero rows dropped. Idempotent
/// and row-space preserving.
pub fn rref(field: &FieldSpec, n: usize, rows: &[Vec<u32>]) -> Result<Subspace> {
    for r in rows {
        if r.len() != n {
            return Err(Error::ColumnCountMismatch {
                expected: n,
                got: r.len(),
            });
        }
    }
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(r) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = field.inv(m[pivot_row][col]).expect("nonzero pivot");
        for j in 0..n {
            m[pivot_row][j] = field.mul(m[pivot_row][j], inv);
        }
        for rr in 0..m.len() {
            if rr != pivot_row && m[rr][col] != 0 {
                let c = m[rr][col];
                for j in 0..n {
                    let sub = field.mul(c, m[pivot_row][j]);
                    m[rr][j] = field.sub(m[rr][j], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    Ok(Subspace { n, rows: m })
}

/// Row space of a single vector (the zero space if v = 0).
pub fn span_of_vector(field: &FieldSpec, v: &[u32]) -> Subspace {
    rref(field, v.len(), &[v.to_vec()]).expect("consistent width")
}

/// Sum of subspaces: RREF of the stacked bases.
pub fn join(field: &FieldSpec, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::MixedLattices);
    }
    let mut rows = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    rref(field, a.n, &rows)
}

/// Intersection, computed by duality: (A^perp + B^perp)^perp.
pub fn meet(field: &FieldSpec, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::MixedLattices);
    }
    let pa = perp(field, a);
    let pb = perp(field, b);
    Ok(perp(field, &join(field, &pa, &pb)?))
}

/// Intersection by direct elimination (Zassenhaus); cross-check for `meet`.
pub fn meet_direct(field: &FieldSpec, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::MixedLattices);
    }
    let n = a.n;
    let mut stacked: Vec<Vec<u32>> = Vec::new();
    for r in &a.rows {
        let mut row = r.clone();
        row.extend(r.iter().cloned());
        stacked.push(row);
    }
    for r in &b.rows {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(0, n));
        stacked.push(row);
    }
    let red = rref(field, 2 * n, &stacked)?;
    let inter_rows: Vec<Vec<u32>> = red
        .rows
        .iter()
        .filter(|r| r[..n].iter().all(|&x| x == 0))
        .map(|r| r[n..].to_vec())
        .collect();
    rref(field, n, &inter_rows)
}

/// Orthogonal complement under the standard dot product: the null space of
/// the basis matrix. Involutive, dimension-complementing.
pub fn perp(field: &FieldSpec, a: &Subspace) -> Subspace {
    kernel(field, a.n, &a.rows)
}

/// Null space {x : M x^T = 0} of a k x n matrix, canonicalized.
pub fn kernel(field: &FieldSpec, n: usize, m: &[Vec<u32>]) -> Subspace {
    let red = rref(field, n, m).expect("consistent width");
    let pivots = red.pivots();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut rows = Vec::with_capacity(n - pivots.len());
    for j in 0..n {
        if is_pivot[j] {
            continue;
        }
        let mut v = vec![0u32; n];
        v[j] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(red.rows[i][j]);
        }
        rows.push(v);
    }
    rref(field, n, &rows).expect("consistent width")
}

/// Matrix product over GF(q); `a` is r x s, `b` is s x t.
pub fn mat_mul(field: &FieldSpec, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let t = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            let mut out = vec![0u32; t];
            for (k, &aik) in row.iter().enumerate() {
                if aik == 0 {
                    continue;
                }
                for j in 0..t {
                    out[j] = field.add(out[j], field.mul(aik, b[k][j]));
                }
            }
            out
        })
        .collect()
}

/// Rank of an arbitrary matrix over GF(q).
pub fn mat_rank(field: &FieldSpec, n_cols: usize, m: &[Vec<u32>]) -> usize {
    rref(field, n_cols, m).expect("consistent width").dim()
}

/// Number of k-dimensional subspaces of F_q^n, by the exact q-factorial
/// product formula.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> Result<u64> {
    if k > n {
        return Err(Error::OutOfRange(format!("binomial ({n},{k})")));
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    Ok((num / den) as u64)
}

fn lattice_size(n: u32, q: u32) -> u64 {
    (0..=n)
        .map(|k| gaussian_binomial(n, k, q).expect("k <= n"))
        .sum()
}

/// An invertible change of coordinates, acting on subspaces by right
/// multiplication of basis rows followed by re-canonicalization.
#[derive(Clone, Debug)]
pub struct LatticeIso {
    field: Arc<FieldSpec>,
    matrix: Vec<Vec<u32>>,
}

impl LatticeIso {
    pub fn new(field: Arc<FieldSpec>, matrix: Vec<Vec<u32>>) -> Result<LatticeIso> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::ColumnCountMismatch {
                expected: n,
                got: matrix.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        if mat_rank(&field, n, &matrix) != n {
            return Err(Error::SingularMatrix);
        }
        Ok(LatticeIso { field, matrix })
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> LatticeIso {
        let matrix = (0..n)
            .map(|i| {
                let mut r = vec![0u32; n];
                r[i] = 1;
                r
            })
            .collect();
        LatticeIso { field, matrix }
    }

    /// Permutation matrix sending e_i to e_{perm[i]}.
    pub fn permutation(field: Arc<FieldSpec>, perm: &[usize]) -> LatticeIso {
        let n = perm.len();
        let matrix = (0..n)
            .map(|i| {
                let mut r = vec![0u32; n];
                r[perm[i]] = 1;
                r
            })
            .collect();
        LatticeIso { field, matrix }
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, a: &Subspace) -> Result<Subspace> {
        if a.ambient() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "iso on dim {} applied to subspace of F^{}",
                self.n(),
                a.ambient()
            )));
        }
        let image = mat_mul(&self.field, &a.rows, &self.matrix);
        rref(&self.field, self.n(), &image)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> LatticeIso {
        let n = self.n();
        let f = &self.field;
        let mut aug: Vec<Vec<u32>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        // invertibility guarantees a pivot in every column, so the pivot row
        // for column `col` is `col` itself
        for col in 0..n {
            let r = (col..n)
                .find(|&r| aug[r][col] != 0)
                .expect("matrix is invertible");
            aug.swap(col, r);
            let inv = f.inv(aug[col][col]).unwrap();
            for j in 0..2 * n {
                aug[col][j] = f.mul(aug[col][j], inv);
            }
            for rr in 0..n {
                if rr != col && aug[rr][col] != 0 {
                    let c = aug[rr][col];
                    for j in 0..2 * n {
                        let sub = f.mul(c, aug[col][j]);
                        aug[rr][j] = f.sub(aug[rr][j], sub);
                    }
                }
            }
        }
        let matrix = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        LatticeIso {
            field: self.field.clone(),
            matrix,
        }
    }

    pub fn compose(&self, then: &LatticeIso) -> LatticeIso {
        LatticeIso {
            field: self.field.clone(),
            matrix: mat_mul(&self.field, &self.matrix, &then.matrix),
        }
    }
}

/// The fully enumerated lattice of subspaces of F_q^n.
pub struct SubspaceLattice {
    field: Arc<FieldSpec>,
    n: usize,
    spaces: Vec<Subspace>,
    index_of: HashMap<Subspace, u32>,
    dim_buckets: Vec<Vec<u32>>,
    cover_lists: Vec<Vec<u32>>,
    lower_covers: Vec<Vec<u32>>,
    perp_of: Vec<u32>,
    /// join with each atom, row-major: atom_join[a * n_atoms + t]
    atom_join: Vec<u32>,
    join_table: OnceLock<Vec<u32>>,
    downsets: OnceLock<Vec<Vec<u32>>>,
}

impl fmt::Debug for SubspaceLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubspaceLattice({}, n={}, |L|={})",
            self.field.literal(),
            self.n,
            self.spaces.len()
        )
    }
}

/// Enumerates L(F_q^n) with the configured default size cap.
pub fn enumerate_lattice(field: Arc<FieldSpec>, n: usize) -> Result<Arc<SubspaceLattice>> {
    enumerate_lattice_with_cap(field, n, default_lattice_cap())
}

/// Enumerates L(F_q^n), refusing when the total subspace count exceeds `cap`.
/// Enumeration is by recursive RREF pivot-pattern generation, so each
/// subspace is produced exactly once, already canonical.
pub fn enumerate_lattice_with_cap(
    field: Arc<FieldSpec>,
    n: usize,
    cap: u64,
) -> Result<Arc<SubspaceLattice>> {
    let q = field.order();
    let total = lattice_size(n as u32, q);
    if total > cap {
        return Err(Error::LatticeTooLarge { size: total, cap });
    }
    let mut spaces: Vec<Subspace> = Vec::with_capacity(total as usize);
    for k in 0..=n {
        enumerate_pivot_patterns(&field, n, k, &mut spaces);
    }
    spaces.sort();
    debug_assert_eq!(spaces.len() as u64, total);

    let index_of: HashMap<Subspace, u32> = spaces
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    let mut dim_buckets = vec![Vec::new(); n + 1];
    for (i, s) in spaces.iter().enumerate() {
        dim_buckets[s.dim()].push(i as u32);
    }

    // perp indices under the standard dot product
    let perp_of: Vec<u32> = spaces
        .iter()
        .map(|s| index_of[&perp(&field, s)])
        .collect();

    // joins with atoms; covers fall out as the dim+1 joins
    let atoms: Vec<u32> = dim_buckets.get(1).cloned().unwrap_or_default();
    let mut atom_join = vec![0u32; spaces.len() * atoms.len()];
    let mut cover_lists: Vec<Vec<u32>> = vec![Vec::new(); spaces.len()];
    let mut lower_covers: Vec<Vec<u32>> = vec![Vec::new(); spaces.len()];
    for (i, s) in spaces.iter().enumerate() {
        for (t, &a) in atoms.iter().enumerate() {
            let j = if s.contains(&field, &spaces[a as usize]) {
                i as u32
            } else {
                let joined = join(&field, s, &spaces[a as usize])?;
                index_of[&joined]
            };
            atom_join[i * atoms.len() + t] = j;
            if j != i as u32 && !cover_lists[i].contains(&j) {
                cover_lists[i].push(j);
            }
        }
        cover_lists[i].sort_unstable();
    }
    for (i, covers) in cover_lists.iter().enumerate() {
        for &c in covers {
            lower_covers[c as usize].push(i as u32);
        }
    }

    Ok(Arc::new(SubspaceLattice {
        field,
        n,
        spaces,
        index_of,
        dim_buckets,
        cover_lists,
        lower_covers,
        perp_of,
        atom_join,
        join_table: OnceLock::new(),
        downsets: OnceLock::new(),
    }))
}

/// All RREF matrices with k pivot rows in F_q^n, appended to `out`.
fn enumerate_pivot_patterns(field: &FieldSpec, n: usize, k: usize, out: &mut Vec<Subspace>) {
    if k == 0 {
        out.push(Subspace::zero(n));
        return;
    }
    if k > n {
        return;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, n, k, 0, &mut pivots, out);
}

fn choose_pivots(
    field: &FieldSpec,
    n: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Subspace>,
) {
    if pivots.len() == k {
        fill_free_entries(field, n, pivots, out);
        return;
    }
    let remaining = k - pivots.len();
    for c in start..=n - remaining {
        pivots.push(c);
        choose_pivots(field, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free_entries(field: &FieldSpec, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    // free positions: (row i, col j) with j > pivots[i] and j not a pivot col
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..n {
            if !is_pivot[j] {
                free.push((i, j));
            }
        }
    }
    let q = field.order();
    let mut vals = vec![0u32; free.len()];
    loop {
        let mut rows = vec![vec![0u32; n]; k];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = 1;
        }
        for (idx, &(i, j)) in free.iter().enumerate() {
            rows[i][j] = vals[idx];
        }
        out.push(Subspace { n, rows });
        // odometer over free values
        let mut i = 0;
        loop {
            if i == vals.len() {
                return;
            }
            vals[i] += 1;
            if vals[i] < q {
                break;
            }
            vals[i] = 0;
            i += 1;
        }
    }
}

impl SubspaceLattice {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn space(&self, idx: u32) -> &Subspace {
        &self.spaces[idx as usize]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<u32> {
        self.index_of.get(s).copied()
    }

    /// Index of a subspace that must belong to this lattice.
    pub fn expect_index(&self, s: &Subspace) -> Result<u32> {
        self.index_of(s).ok_or(Error::SubspaceNotInLattice)
    }

    pub fn dim_of(&self, idx: u32) -> usize {
        self.spaces[idx as usize].dim()
    }

    pub fn dim_buckets(&self) -> &[Vec<u32>] {
        &self.dim_buckets
    }

    pub fn atoms(&self) -> &[u32] {
        self.dim_buckets.get(1).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn zero_idx(&self) -> u32 {
        0
    }

    pub fn full_idx(&self) -> u32 {
        (self.spaces.len() - 1) as u32
    }

    /// Upward covers (spaces of dimension +1 containing the given one).
    pub fn covers(&self, idx: u32) -> &[u32] {
        &self.cover_lists[idx as usize]
    }

    pub fn lower_covers(&self, idx: u32) -> &[u32] {
        &self.lower_covers[idx as usize]
    }

    pub fn perp_idx(&self, idx: u32) -> u32 {
        self.perp_of[idx as usize]
    }

    pub fn join_with_atom(&self, idx: u32, atom_pos: usize) -> u32 {
        self.atom_join[idx as usize * self.atoms().len() + atom_pos]
    }

    /// Join by folding `b`'s basis rows through the atom-join table.
    pub fn join_idx(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = self.join_table.get() {
            return t[a as usize * self.spaces.len() + b as usize];
        }
        self.join_idx_uncached(a, b)
    }

    fn join_idx_uncached(&self, a: u32, b: u32) -> u32 {
        let mut acc = a;
        for row in self.spaces[b as usize].rows.clone() {
            let atom = span_of_vector(&self.field, &row);
            let atom_idx = self.index_of[&atom];
            let pos = self
                .atoms()
                .binary_search(&atom_idx)
                .expect("atom is in the atom bucket");
            acc = self.join_with_atom(acc, pos);
        }
        acc
    }

    /// Meet via the anti-isomorphism: (a^perp v b^perp)^perp.
    pub fn meet_idx(&self, a: u32, b: u32) -> u32 {
        self.perp_idx(self.join_idx(self.perp_idx(a), self.perp_idx(b)))
    }

    /// Builds the full L x L join table (meets come free through perp).
    pub fn ensure_pair_tables(&self) {
        self.join_table.get_or_init(|| {
            let len = self.spaces.len();
            let mut t = vec![0u32; len * len];
            for a in 0..len as u32 {
                for b in a..len as u32 {
                    let j = self.join_idx_uncached(a, b);
                    t[a as usize * len + b as usize] = j;
                    t[b as usize * len + a as usize] = j;
                }
            }
            t
        });
    }

    /// Sorted indices of every subspace contained in each space.
    pub fn downsets(&self) -> &[Vec<u32>] {
        self.downsets.get_or_init(|| {
            let mut d: Vec<Vec<u32>> = vec![Vec::new(); self.spaces.len()];
            for (i, s) in self.spaces.iter().enumerate() {
                for (j, t) in self.spaces.iter().enumerate() {
                    if t.dim() <= s.dim() && s.contains(&self.field, t) {
                        d[i].push(j as u32);
                    }
                }
            }
            d
        })
    }

    pub fn contains_idx(&self, sup: u32, sub: u32) -> bool {
        if let Some(d) = self.downsets.get() {
            return d[sup as usize].binary_search(&sub).is_ok();
        }
        self.spaces[sup as usize].contains(&self.field, &self.spaces[sub as usize])
    }

    /// The interval [A, B] in canonical order. Errors unless A is contained
    /// in B.
    pub fn interval(&self, a: &Subspace, b: &Subspace) -> Result<Vec<Subspace>> {
        let ai = self.expect_index(a)?;
        let bi = self.expect_index(b)?;
        if !self.contains_idx(bi, ai) {
            return Err(Error::NotNested);
        }
        Ok(self
            .interval_idx(ai, bi)
            .into_iter()
            .map(|i| self.spaces[i as usize].clone())
            .collect())
    }

    pub fn interval_idx(&self, a: u32, b: u32) -> Vec<u32> {
        self.downsets()[b as usize]
            .iter()
            .copied()
            .filter(|&x| self.contains_idx(x, a))
            .collect()
    }

    /// Canonical image of each lattice point under an iso, as an index
    /// permutation.
    pub fn iso_permutation(&self, t: &LatticeIso) -> Result<Vec<u32>> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "iso on dim {}, lattice on dim {}",
                t.n(),
                self.n
            )));
        }
        self.spaces
            .iter()
            .map(|s| self.expect_index(&t.apply(s)?))
            .collect()
    }
}

/// A pluggable involutive anti-isomorphism given by a nondegenerate bilinear
/// form; the crate default (and the one the duality theory uses) is the
/// standard dot product, whose Gram matrix is the identity.
pub struct Perp {
    lattice: Arc<SubspaceLattice>,
    form: Vec<Vec<u32>>,
}

impl Perp {
    pub fn standard(lattice: Arc<SubspaceLattice>) -> Perp {
        let n = lattice.ambient_dim();
        let form = (0..n)
            .map(|i| {
                let mut r = vec![0u32; n];
                r[i] = 1;
                r
            })
            .collect();
        Perp { lattice, form }
    }

    pub fn with_form(lattice: Arc<SubspaceLattice>, form: Vec<Vec<u32>>) -> Result<Perp> {
        let n = lattice.ambient_dim();
        if form.len() != n || form.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("form matrix shape".into()));
        }
        if mat_rank(lattice.field(), n, &form) != n {
            return Err(Error::SingularMatrix);
        }
        Ok(Perp { lattice, form })
    }

    pub fn apply(&self, a: &Subspace) -> Subspace {
        let field = self.lattice.field();
        let gram = mat_mul(field, &a.rows, &self.form);
        kernel(field, self.lattice.ambient_dim(), &gram)
    }

    pub fn apply_idx(&self, idx: u32) -> u32 {
        let image = self.apply(self.lattice.space(idx));
        self.lattice.index_of(&image).expect("perp stays in lattice")
    }
}
