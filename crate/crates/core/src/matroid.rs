//! The q-matroid type: rank tables over a subspace lattice, exhaustive axiom
//! verification, derived families, duality, minors, bicolouring and
//! isomorphism testing.

use crate::error::{Error, Result};
use crate::lattice::{
    enumerate_lattice, mat_mul, rref, LatticeIso, Subspace, SubspaceLattice,
};
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Default cap on the GL(n,q) isomorphism search.
pub const DEFAULT_ISO_SEARCH_CAP: u64 = 10_000_000;

/// A q-matroid (E, r): a subspace lattice plus an integer rank table in
/// canonical lattice order. Construction verifies the rank axioms
/// exhaustively, so a value of this type is always a genuine q-matroid.
#[derive(Clone)]
pub struct QMatroid {
    lattice: Arc<SubspaceLattice>,
    rank: Vec<u16>,
}

impl fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QMatroid({}, n={}, r={})",
            self.lattice.field().literal(),
            self.lattice.ambient_dim(),
            self.rank()
        )
    }
}

/// Outcome of a rank-axiom scan; `ok` holds exactly when all three witness
/// lists are empty.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    /// Subspaces violating 0 <= r(A) <= dim A.
    pub r1_violations: Vec<u32>,
    /// Pairs (A, B) with A contained in B but r(A) > r(B).
    pub r2_violations: Vec<(u32, u32)>,
    /// Pairs (A, B) with r(A+B) + r(A meet B) > r(A) + r(B).
    pub r3_violations: Vec<(u32, u32)>,
    pub ok: bool,
}

impl AxiomReport {
    pub fn summary(&self) -> String {
        if self.ok {
            "ok".into()
        } else {
            format!(
                "R1 violations: {}, R2 violations: {}, R3 violations: {}",
                self.r1_violations.len(),
                self.r2_violations.len(),
                self.r3_violations.len()
            )
        }
    }
}

/// Exhaustive rank-axiom verification of a candidate table: (R1) over all
/// subspaces, (R2) over all comparable pairs, (R3) over all pairs.
pub fn check_rank_axioms(lattice: &SubspaceLattice, rank: &[u16]) -> Result<AxiomReport> {
    if rank.len() != lattice.len() {
        return Err(Error::TableSizeMismatch {
            expected: lattice.len(),
            got: rank.len(),
        });
    }
    let mut report = AxiomReport::default();
    for i in 0..lattice.len() as u32 {
        if rank[i as usize] as usize > lattice.dim_of(i) {
            report.r1_violations.push(i);
        }
    }
    let downsets = lattice.downsets();
    for sup in 0..lattice.len() as u32 {
        for &sub in &downsets[sup as usize] {
            if rank[sub as usize] > rank[sup as usize] {
                report.r2_violations.push((sub, sup));
            }
        }
    }
    lattice.ensure_pair_tables();
    for a in 0..lattice.len() as u32 {
        for b in a..lattice.len() as u32 {
            let j = lattice.join_idx(a, b);
            let m = lattice.meet_idx(a, b);
            if rank[j as usize] + rank[m as usize] > rank[a as usize] + rank[b as usize] {
                report.r3_violations.push((a, b));
            }
        }
    }
    report.ok = report.r1_violations.is_empty()
        && report.r2_violations.is_empty()
        && report.r3_violations.is_empty();
    Ok(report)
}

/// Outcome of a circuit-axiom scan of a candidate circuit family.
#[derive(Debug, Clone, Default)]
pub struct CircuitAxiomReport {
    /// (C1): the zero space listed as a circuit.
    pub c1_violations: Vec<u32>,
    /// (C2): nested pairs.
    pub c2_violations: Vec<(u32, u32)>,
    /// (C3): triples (C1, C2, X) with no circuit inside (C1+C2) meet X.
    pub c3_violations: Vec<(u32, u32, u32)>,
    pub ok: bool,
}

impl CircuitAxiomReport {
    pub fn summary(&self) -> String {
        if self.ok {
            "ok".into()
        } else {
            format!(
                "C1 violations: {}, C2 violations: {}, C3 violations: {}",
                self.c1_violations.len(),
                self.c2_violations.len(),
                self.c3_violations.len()
            )
        }
    }
}

/// Verifies the circuit axioms (C1)-(C3) for a family of subspace indices:
/// the zero space is excluded, members are pairwise incomparable, and for
/// distinct members C1, C2 and every codimension-1 space X some member lies
/// inside (C1+C2) meet X.
pub fn check_circuit_axioms(
    lattice: &SubspaceLattice,
    circuits: &BTreeSet<u32>,
) -> CircuitAxiomReport {
    let mut report = CircuitAxiomReport::default();
    let cs: Vec<u32> = circuits.iter().copied().collect();
    for &c in &cs {
        if lattice.dim_of(c) == 0 {
            report.c1_violations.push(c);
        }
    }
    for (i, &c1) in cs.iter().enumerate() {
        for &c2 in &cs[i + 1..] {
            if lattice.contains_idx(c2, c1) || lattice.contains_idx(c1, c2) {
                report.c2_violations.push((c1, c2));
            }
        }
    }
    let n = lattice.ambient_dim();
    if n >= 1 {
        let coatoms = &lattice.dim_buckets()[n - 1];
        for (i, &c1) in cs.iter().enumerate() {
            for &c2 in &cs[i + 1..] {
                let joined = lattice.join_idx(c1, c2);
                for &x in coatoms {
                    let target = lattice.meet_idx(joined, x);
                    let found = cs.iter().any(|&c| lattice.contains_idx(target, c));
                    if !found {
                        report.c3_violations.push((c1, c2, x));
                    }
                }
            }
        }
    }
    report.ok = report.c1_violations.is_empty()
        && report.c2_violations.is_empty()
        && report.c3_violations.is_empty();
    report
}

/// The families a rank table determines.
#[derive(Debug, Clone)]
pub struct DerivedFamilies {
    pub independent: Vec<u32>,
    pub bases: Vec<u32>,
    pub circuits: Vec<u32>,
    pub spanning: Vec<u32>,
    pub flats: Vec<u32>,
    pub hyperplanes: Vec<u32>,
    /// Join of all loops; loops come in subspaces.
    pub loopspace: Subspace,
}

/// Cover-edge colour: red when the rank goes up along the cover, green when
/// it stays the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    Red,
    Green,
}

#[derive(Debug, Clone)]
pub struct Bicolouring {
    /// (lower, upper, colour), lower index major, canonical order.
    pub edges: Vec<(u32, u32, Colour)>,
}

impl Bicolouring {
    pub fn colour_of(&self, lower: u32, upper: u32) -> Option<Colour> {
        self.edges
            .iter()
            .find(|(l, u, _)| *l == lower && *u == upper)
            .map(|(_, _, c)| *c)
    }
}

impl QMatroid {
    /// Builds a q-matroid from a rank table, rejecting tables that fail the
    /// axioms.
    pub fn from_rank_table(lattice: Arc<SubspaceLattice>, rank: Vec<u16>) -> Result<QMatroid> {
        let report = check_rank_axioms(&lattice, &rank)?;
        if !report.ok {
            return Err(Error::AxiomsFailed(report.summary()));
        }
        Ok(QMatroid { lattice, rank })
    }

    /// Builds a q-matroid by evaluating a rank function on every subspace.
    pub fn from_rank_fn(
        lattice: Arc<SubspaceLattice>,
        f: impl Fn(&Subspace) -> u16,
    ) -> Result<QMatroid> {
        let rank = lattice.spaces().iter().map(f).collect();
        QMatroid::from_rank_table(lattice, rank)
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        &self.lattice
    }

    pub fn rank_table(&self) -> &[u16] {
        &self.rank
    }

    pub fn rank_idx(&self, idx: u32) -> u16 {
        self.rank[idx as usize]
    }

    pub fn rank_of(&self, s: &Subspace) -> Result<u16> {
        Ok(self.rank[self.lattice.expect_index(s)? as usize])
    }

    /// r(E), the rank of the whole matroid.
    pub fn rank(&self) -> u16 {
        *self.rank.last().expect("lattice is nonempty")
    }

    pub fn same_ground(&self, other: &QMatroid) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice)
            || (self.lattice.field() == other.lattice.field()
                && self.lattice.ambient_dim() == other.lattice.ambient_dim())
    }

    /// The dual q-matroid r*(A) = dim(A) - r(E) + r(A^perp), with perp the
    /// standard dot product. An involution.
    pub fn dual(&self) -> QMatroid {
        let r_e = self.rank() as i32;
        let rank: Vec<u16> = (0..self.lattice.len() as u32)
            .map(|i| {
                let d = self.lattice.dim_of(i) as i32;
                let rp = self.rank[self.lattice.perp_idx(i) as usize] as i32;
                (d - r_e + rp) as u16
            })
            .collect();
        QMatroid::from_rank_table(self.lattice.clone(), rank)
            .expect("dual of a q-matroid is a q-matroid")
    }

    /// Restriction M|_X on a fresh ambient space of dimension dim(X), ranks
    /// copied through the echelon-basis embedding of X.
    pub fn restrict(&self, x: &Subspace) -> Result<QMatroid> {
        self.lattice.expect_index(x)?;
        let field = self.lattice.field().clone();
        let k = x.dim();
        let sub = enumerate_lattice(field.clone(), k)?;
        let n = self.lattice.ambient_dim();
        let rank: Vec<u16> = sub
            .spaces()
            .iter()
            .map(|a| {
                let image_rows = mat_mul(&field, a.rows(), x.rows());
                let image = rref(&field, n, &image_rows).expect("width n");
                self.rank[self.lattice.index_of(&image).expect("inside lattice") as usize]
            })
            .collect();
        QMatroid::from_rank_table(sub, rank)
    }

    /// Contraction M/X on a fresh ambient space of dimension n - dim(X),
    /// ranks r(X + A) - r(X) through the complement-coordinate quotient (the
    /// non-pivot columns of X's echelon basis).
    pub fn contract(&self, x: &Subspace) -> Result<QMatroid> {
        let xi = self.lattice.expect_index(x)?;
        let field = self.lattice.field().clone();
        let n = self.lattice.ambient_dim();
        let k = x.dim();
        let quot = enumerate_lattice(field.clone(), n - k)?;
        let pivots: BTreeSet<usize> = x.pivots().into_iter().collect();
        let comp_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let r_x = self.rank[xi as usize];
        let rank: Vec<u16> = quot
            .spaces()
            .iter()
            .map(|a| {
                let mut rows: Vec<Vec<u32>> = a
                    .rows()
                    .iter()
                    .map(|r| {
                        let mut v = vec![0u32; n];
                        for (i, &c) in comp_cols.iter().enumerate() {
                            v[c] = r[i];
                        }
                        v
                    })
                    .collect();
                rows.extend(x.rows().iter().cloned());
                let w = rref(&field, n, &rows).expect("width n");
                let wi = self.lattice.index_of(&w).expect("inside lattice");
                self.rank[wi as usize] - r_x
            })
            .collect();
        QMatroid::from_rank_table(quot, rank)
    }

    /// Pushforward along a lattice isomorphism: the matroid T(M) with
    /// r'(T(A)) = r(A).
    pub fn transform(&self, t: &LatticeIso) -> Result<QMatroid> {
        let perm = self.lattice.iso_permutation(t)?;
        let mut rank = vec![0u16; self.rank.len()];
        for (i, &img) in perm.iter().enumerate() {
            rank[img as usize] = self.rank[i];
        }
        QMatroid::from_rank_table(self.lattice.clone(), rank)
    }

    /// All derived families. Minimality/maximality is with respect to
    /// inclusion; circuits are the minimal dependent spaces.
    pub fn derive_families(&self) -> DerivedFamilies {
        let l = &self.lattice;
        let len = l.len() as u32;
        let is_indep = |i: u32| self.rank[i as usize] as usize == l.dim_of(i);

        let independent: Vec<u32> = (0..len).filter(|&i| is_indep(i)).collect();
        let bases: Vec<u32> = independent
            .iter()
            .copied()
            .filter(|&i| l.covers(i).iter().all(|&c| !is_indep(c)))
            .collect();
        let circuits: Vec<u32> = (0..len)
            .filter(|&i| !is_indep(i) && l.lower_covers(i).iter().all(|&c| is_indep(c)))
            .collect();
        let spanning: Vec<u32> = (0..len)
            .filter(|&i| self.rank[i as usize] == self.rank())
            .collect();

        let n_atoms = l.atoms().len();
        let flats: Vec<u32> = (0..len)
            .filter(|&i| {
                (0..n_atoms).all(|t| {
                    let j = l.join_with_atom(i, t);
                    j == i || self.rank[j as usize] > self.rank[i as usize]
                })
            })
            .collect();
        let full = l.full_idx();
        let hyperplanes: Vec<u32> = flats
            .iter()
            .copied()
            .filter(|&f| f != full)
            .filter(|&f| {
                flats
                    .iter()
                    .all(|&g| g == f || g == full || !l.contains_idx(g, f))
            })
            .collect();

        let mut loop_idx = l.zero_idx();
        for (t, &a) in l.atoms().iter().enumerate() {
            if self.rank[a as usize] == 0 {
                loop_idx = l.join_with_atom(loop_idx, t);
            }
        }
        DerivedFamilies {
            independent,
            bases,
            circuits,
            spanning,
            flats,
            hyperplanes,
            loopspace: l.space(loop_idx).clone(),
        }
    }

    /// Cover-edge bicolouring. Along every maximal chain the number of red
    /// edges equals r(E).
    pub fn bicolour(&self) -> Bicolouring {
        let mut edges = Vec::new();
        for i in 0..self.lattice.len() as u32 {
            for &c in self.lattice.covers(i) {
                let colour = if self.rank[c as usize] == self.rank[i as usize] + 1 {
                    Colour::Red
                } else {
                    Colour::Green
                };
                edges.push((i, c, colour));
            }
        }
        Bicolouring { edges }
    }

    /// Per-dimension multiset of ranks; equal signatures are a necessary
    /// condition for isomorphism.
    pub fn rank_signature(&self) -> Vec<Vec<u16>> {
        self.lattice
            .dim_buckets()
            .iter()
            .map(|bucket| {
                let mut v: Vec<u16> = bucket.iter().map(|&i| self.rank[i as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Exhaustive search for a lattice isomorphism T with r1(A) = r2(T(A))
    /// for all A, over GL(n, q) with the default cap.
    pub fn is_isomorphic(&self, other: &QMatroid) -> Result<Option<LatticeIso>> {
        self.is_isomorphic_capped(other, DEFAULT_ISO_SEARCH_CAP)
    }

    pub fn is_isomorphic_capped(
        &self,
        other: &QMatroid,
        cap: u64,
    ) -> Result<Option<LatticeIso>> {
        if !self.same_ground(other) {
            return Err(Error::MixedLattices);
        }
        let l = &self.lattice;
        let n = l.ambient_dim();
        let q = l.field().order() as u64;
        let gl_size = gl_order(n as u32, q);
        if gl_size > cap {
            return Err(Error::SearchCapExceeded { size: gl_size, cap });
        }
        if self.rank_signature() != other.rank_signature() {
            return Ok(None);
        }
        if self.rank == other.rank {
            return Ok(Some(LatticeIso::identity(l.field().clone(), n)));
        }
        if n == 0 {
            // equal signatures on a point lattice mean equal matroids
            return Ok(Some(LatticeIso::identity(l.field().clone(), 0)));
        }

        // Group lattice points by width: the last coordinate any basis row
        // touches. Once row w of T is chosen, every subspace of width w has a
        // determined image, so a rank mismatch prunes the whole subtree.
        let mut by_width: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, s) in l.spaces().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let w = s
                .rows()
                .iter()
                .flat_map(|r| r.iter().rposition(|&x| x != 0))
                .max()
                .expect("nonzero space");
            by_width[w].push(i as u32);
        }

        let field = l.field().clone();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        let found = search_iso(
            &field,
            l,
            &other.lattice,
            &self.rank,
            &other.rank,
            &by_width,
            &mut rows,
        );
        match found {
            Some(matrix) => Ok(Some(LatticeIso::new(field, matrix)?)),
            None => Ok(None),
        }
    }
}

/// |GL(n, q)| = prod_{i<n} (q^n - q^i), saturating.
pub fn gl_order(n: u32, q: u64) -> u64 {
    let qn = q.checked_pow(n).unwrap_or(u64::MAX);
    let mut acc: u64 = 1;
    for i in 0..n {
        let qi = q.checked_pow(i).unwrap_or(u64::MAX);
        acc = acc.saturating_mul(qn.saturating_sub(qi));
    }
    acc
}

fn search_iso(
    field: &Arc<crate::gf::FieldSpec>,
    l1: &Arc<SubspaceLattice>,
    l2: &Arc<SubspaceLattice>,
    rank1: &[u16],
    rank2: &[u16],
    by_width: &[Vec<u32>],
    rows: &mut Vec<Vec<u32>>,
) -> Option<Vec<Vec<u32>>> {
    let n = l1.ambient_dim();
    let w = rows.len();
    if w == n {
        return Some(rows.clone());
    }
    let q = field.order() as u64;
    let count = q.pow(n as u32);
    'candidates: for v in 1..count {
        // decode candidate row, coordinate 0 least significant
        let mut row = Vec::with_capacity(n);
        let mut x = v;
        for _ in 0..n {
            row.push((x % q) as u32);
            x /= q;
        }
        // must be independent from the rows already chosen
        {
            let mut stacked = rows.clone();
            stacked.push(row.clone());
            if crate::lattice::mat_rank(field, n, &stacked) != rows.len() + 1 {
                continue;
            }
        }
        rows.push(row);
        // every width-w subspace now has a determined image
        for &a in &by_width[w] {
            let s = l1.space(a);
            let image_rows: Vec<Vec<u32>> = s
                .rows()
                .iter()
                .map(|r| {
                    let mut out = vec![0u32; n];
                    for (j, &c) in r.iter().enumerate() {
                        if c != 0 {
                            for t in 0..n {
                                out[t] = field.add(out[t], field.mul(c, rows[j][t]));
                            }
                        }
                    }
                    out
                })
                .collect();
            let image = rref(field, n, &image_rows).expect("width n");
            let img_idx = l2.index_of(&image).expect("image is a subspace");
            if rank2[img_idx as usize] != rank1[a as usize] {
                rows.pop();
                continue 'candidates;
            }
        }
        if let Some(found) = search_iso(field, l1, l2, rank1, rank2, by_width, rows) {
            return Some(found);
        }
        rows.pop();
    }
    None
}

/// Enumerates every valid rank table on the lattice by depth-first search in
/// canonical order, pruning with the axioms; `limit` guards against runaway
/// output.
pub fn enumerate_rank_tables(
    lattice: &Arc<SubspaceLattice>,
    limit: usize,
) -> Result<Vec<Vec<u16>>> {
    let mut out: Vec<Vec<u16>> = Vec::new();
    let ctx = DfsContext::new(lattice);
    let mut table = vec![0u16; lattice.len()];
    dfs_tables(&ctx, &mut table, 1, &mut |t| {
        if out.len() >= limit {
            return Err(Error::SearchCapExceeded {
                size: (limit + 1) as u64,
                cap: limit as u64,
            });
        }
        out.push(t.to_vec());
        Ok(())
    })?;
    Ok(out)
}

/// A seeded valid rank table, for randomized harnesses: the same DFS with
/// shuffled value choices, taking the first completion.
pub fn random_rank_table(lattice: &Arc<SubspaceLattice>, rng: &mut impl Rng) -> Vec<u16> {
    let ctx = DfsContext::new(lattice);
    let mut table = vec![0u16; lattice.len()];
    loop {
        if dfs_random(&ctx, &mut table, 1, rng) {
            return table;
        }
    }
}

struct DfsContext<'a> {
    lattice: &'a Arc<SubspaceLattice>,
    /// For each join index: incomparable pairs (a, b, meet) joining to it.
    pairs_by_join: Vec<Vec<(u32, u32, u32)>>,
}

impl<'a> DfsContext<'a> {
    fn new(lattice: &'a Arc<SubspaceLattice>) -> Self {
        lattice.ensure_pair_tables();
        let len = lattice.len() as u32;
        let mut pairs_by_join: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); len as usize];
        for a in 0..len {
            for b in a + 1..len {
                let j = lattice.join_idx(a, b);
                if j != a && j != b {
                    let m = lattice.meet_idx(a, b);
                    pairs_by_join[j as usize].push((a, b, m));
                }
            }
        }
        DfsContext {
            lattice,
            pairs_by_join,
        }
    }

    /// Feasible values at index i given all earlier assignments: bounded by
    /// monotonicity and unit increase over the lower covers, then filtered
    /// by submodularity of every pair joining to i.
    fn candidates(&self, table: &[u16], i: u32) -> Vec<u16> {
        let lc = self.lattice.lower_covers(i);
        let lo = lc.iter().map(|&c| table[c as usize]).max().unwrap_or(0);
        let hi_cover = lc
            .iter()
            .map(|&c| table[c as usize] + 1)
            .min()
            .unwrap_or(u16::MAX);
        let hi = hi_cover.min(self.lattice.dim_of(i) as u16);
        if lo > hi {
            return Vec::new();
        }
        (lo..=hi)
            .filter(|&v| {
                self.pairs_by_join[i as usize].iter().all(|&(a, b, m)| {
                    v + table[m as usize] <= table[a as usize] + table[b as usize]
                })
            })
            .collect()
    }
}

fn dfs_tables(
    ctx: &DfsContext,
    table: &mut [u16],
    i: u32,
    sink: &mut impl FnMut(&[u16]) -> Result<()>,
) -> Result<()> {
    if i as usize == table.len() {
        return sink(table);
    }
    for v in ctx.candidates(table, i) {
        table[i as usize] = v;
        dfs_tables(ctx, table, i + 1, sink)?;
    }
    table[i as usize] = 0;
    Ok(())
}

fn dfs_random(ctx: &DfsContext, table: &mut [u16], i: u32, rng: &mut impl Rng) -> bool {
    if i as usize == table.len() {
        return true;
    }
    let mut cands = ctx.candidates(table, i);
    while !cands.is_empty() {
        let pick = rng.gen_range(0..cands.len());
        table[i as usize] = cands.swap_remove(pick);
        if dfs_random(ctx, table, i + 1, rng) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::new(2, 1, None).unwrap()
    }

    fn lat(n: usize) -> Arc<SubspaceLattice> {
        enumerate_lattice(f2(), n).unwrap()
    }

    /// The uniform table min(k, dim).
    fn uniform_table(l: &Arc<SubspaceLattice>, k: u16) -> Vec<u16> {
        l.spaces().iter().map(|s| (s.dim() as u16).min(k)).collect()
    }

    /// Rank-1 matroid whose loops are the subspaces of `loopspace`.
    fn rank1_with_loopspace(l: &Arc<SubspaceLattice>, loopspace: &str) -> QMatroid {
        let f = l.field().clone();
        let ls = Subspace::parse(&f, l.ambient_dim(), loopspace).unwrap();
        QMatroid::from_rank_fn(l.clone(), |s| u16::from(!ls.contains(&f, s))).unwrap()
    }

    fn p1() -> QMatroid {
        rank1_with_loopspace(&lat(3), "100")
    }

    fn p2() -> QMatroid {
        rank1_with_loopspace(&lat(3), "100,010")
    }

    #[test]
    fn uniform_tables_pass_axioms() {
        let l = lat(3);
        for k in 0..=3 {
            let report = check_rank_axioms(&l, &uniform_table(&l, k)).unwrap();
            assert!(report.ok, "U_{{{k},3}}: {}", report.summary());
        }
    }

    #[test]
    fn rank_of_zero_space_must_be_zero() {
        let l = lat(3);
        let mut t = uniform_table(&l, 2);
        t[0] = 1;
        let report = check_rank_axioms(&l, &t).unwrap();
        assert!(!report.ok);
        assert_eq!(report.r1_violations, vec![0]);
    }

    #[test]
    fn table_size_mismatch_is_rejected() {
        let l = lat(2);
        assert!(matches!(
            check_rank_axioms(&l, &[0, 1]),
            Err(Error::TableSizeMismatch { .. })
        ));
    }

    #[test]
    fn circuit_axioms_of_u13() {
        // circuits of U_{1,3}: all 2-spaces
        let l = lat(3);
        let circuits: BTreeSet<u32> = l.dim_buckets()[2].iter().copied().collect();
        assert!(check_circuit_axioms(&l, &circuits).ok);
    }

    #[test]
    fn nested_circuits_violate_c2() {
        let l = lat(3);
        let f = f2();
        let a = l.index_of(&Subspace::parse(&f, 3, "100").unwrap()).unwrap();
        let b = l
            .index_of(&Subspace::parse(&f, 3, "100,010").unwrap())
            .unwrap();
        let report = check_circuit_axioms(&l, &BTreeSet::from([a, b]));
        assert!(!report.ok);
        assert_eq!(report.c2_violations, vec![(a, b)]);
    }

    #[test]
    fn p1_circuits_match_the_catalogue() {
        let m = p1();
        let f = f2();
        let fam = m.derive_families();
        let got: BTreeSet<String> = fam
            .circuits
            .iter()
            .map(|&i| m.lattice().space(i).text(&f))
            .collect();
        let expected: BTreeSet<String> = ["100", "010,001", "101,010", "101,011", "110,001"]
            .iter()
            .map(|s| Subspace::parse(&f, 3, s).unwrap().text(&f))
            .collect();
        assert_eq!(got, expected);
        // and the derived circuits satisfy the circuit axioms
        let set: BTreeSet<u32> = fam.circuits.iter().copied().collect();
        assert!(check_circuit_axioms(m.lattice(), &set).ok);
    }

    #[test]
    fn u33_has_no_circuits_and_basis_e() {
        let l = lat(3);
        let m = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 3)).unwrap();
        let fam = m.derive_families();
        assert!(fam.circuits.is_empty());
        assert_eq!(fam.bases, vec![l.full_idx()]);
    }

    #[test]
    fn p2_hyperplanes() {
        let m = p2();
        let f = f2();
        let fam = m.derive_families();
        let got: Vec<String> = fam
            .hyperplanes
            .iter()
            .map(|&i| m.lattice().space(i).text(&f))
            .collect();
        assert_eq!(got, vec!["100,010"]);
        assert_eq!(fam.loopspace, Subspace::parse(&f, 3, "100,010").unwrap());
    }

    #[test]
    fn duals_of_uniform_matroids() {
        let l = lat(3);
        let u1 = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 1)).unwrap();
        assert_eq!(u1.dual().rank_table(), uniform_table(&l, 2).as_slice());
        let u0 = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 0)).unwrap();
        assert_eq!(u0.dual().rank_table(), uniform_table(&l, 3).as_slice());
    }

    #[test]
    fn dual_swaps_bases_through_perp() {
        for m in [p1(), p2()] {
            let d = m.dual();
            let bases: BTreeSet<u32> = m.derive_families().bases.into_iter().collect();
            let dual_bases: BTreeSet<u32> = d.derive_families().bases.into_iter().collect();
            let mapped: BTreeSet<u32> = bases.iter().map(|&b| m.lattice().perp_idx(b)).collect();
            assert_eq!(mapped, dual_bases);
        }
    }

    #[test]
    fn dual_is_an_involution_on_random_tables() {
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let t = random_rank_table(&l, &mut rng);
            let m = QMatroid::from_rank_table(l.clone(), t.clone()).unwrap();
            assert_eq!(m.dual().dual().rank_table(), t.as_slice());
        }
    }

    #[test]
    fn restrict_to_full_and_contract_by_zero_are_identity() {
        let m = p1();
        let full = Subspace::full(3);
        let zero = Subspace::zero(3);
        assert_eq!(m.restrict(&full).unwrap().rank_table(), m.rank_table());
        assert_eq!(m.contract(&zero).unwrap().rank_table(), m.rank_table());
    }

    #[test]
    fn minors_reject_foreign_subspaces() {
        let m = p1();
        let foreign = Subspace::parse(&f2(), 4, "1000").unwrap();
        assert!(matches!(
            m.restrict(&foreign),
            Err(Error::SubspaceNotInLattice)
        ));
        assert!(matches!(
            m.contract(&foreign),
            Err(Error::SubspaceNotInLattice)
        ));
    }

    #[test]
    fn minor_duality_theorem_on_p1() {
        // (M/X)* iso M*|_{X^perp} and (M|_X)* iso M*/X^perp, all X
        let m = p1();
        let f = f2();
        for x in m.lattice().spaces() {
            let xp = crate::lattice::perp(&f, x);
            let lhs = m.contract(x).unwrap().dual();
            let rhs = m.dual().restrict(&xp).unwrap();
            assert!(lhs.is_isomorphic(&rhs).unwrap().is_some(), "contract {x:?}");
            let lhs2 = m.restrict(x).unwrap().dual();
            let rhs2 = m.dual().contract(&xp).unwrap();
            assert!(
                lhs2.is_isomorphic(&rhs2).unwrap().is_some(),
                "restrict {x:?}"
            );
        }
    }

    #[test]
    fn isomorphism_finds_identity_on_self() {
        let m = p1();
        let t = m.is_isomorphic(&m).unwrap().expect("self-isomorphic");
        for s in m.lattice().spaces() {
            assert_eq!(t.apply(s).unwrap(), *s);
        }
    }

    #[test]
    fn mixed_diamonds_with_different_loops_are_isomorphic() {
        let l = lat(2);
        let m1 = rank1_with_loopspace(&l, "10");
        let m2 = rank1_with_loopspace(&l, "01");
        let t = m1.is_isomorphic(&m2).unwrap().expect("witness exists");
        // witness property: r1(A) = r2(T(A))
        for (i, s) in m1.lattice().spaces().iter().enumerate() {
            let img = t.apply(s).unwrap();
            let j = m2.lattice().index_of(&img).unwrap();
            assert_eq!(m1.rank_table()[i], m2.rank_table()[j as usize]);
        }
    }

    #[test]
    fn prime_and_mixed_diamond_are_not_isomorphic() {
        let l = lat(2);
        let prime = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 1)).unwrap();
        let mixed = rank1_with_loopspace(&l, "10");
        assert!(prime.is_isomorphic(&mixed).unwrap().is_none());
    }

    #[test]
    fn iso_search_cap_is_enforced() {
        let m = p1();
        assert!(matches!(
            m.is_isomorphic_capped(&m.dual(), 5),
            Err(Error::SearchCapExceeded { .. })
        ));
    }

    #[test]
    fn bicolour_examples() {
        let l = lat(3);
        let u3 = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 3)).unwrap();
        assert!(u3.bicolour().edges.iter().all(|(_, _, c)| *c == Colour::Red));
        let u0 = QMatroid::from_rank_table(l.clone(), uniform_table(&l, 0)).unwrap();
        assert!(u0
            .bicolour()
            .edges
            .iter()
            .all(|(_, _, c)| *c == Colour::Green));

        let m = p1();
        let f = f2();
        let zero = l.index_of(&Subspace::zero(3)).unwrap();
        let e100 = l.index_of(&Subspace::parse(&f, 3, "100").unwrap()).unwrap();
        let e010 = l.index_of(&Subspace::parse(&f, 3, "010").unwrap()).unwrap();
        let b = m.bicolour();
        assert_eq!(b.colour_of(zero, e100), Some(Colour::Green));
        assert_eq!(b.colour_of(zero, e010), Some(Colour::Red));
    }

    #[test]
    fn bicolour_chain_property() {
        // along every maximal chain the red-edge count equals r(E)
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let b = m.bicolour();
            let mut stack = vec![(l.zero_idx(), 0u16)];
            while let Some((node, reds)) = stack.pop() {
                let covers = l.covers(node);
                if covers.is_empty() {
                    assert_eq!(reds, m.rank());
                    continue;
                }
                for &c in covers {
                    let add = u16::from(b.colour_of(node, c) == Some(Colour::Red));
                    stack.push((c, reds + add));
                }
            }
        }
    }

    #[test]
    fn all_red_on_top_interval() {
        // {A : r(E) - r(A) = dim E - dim A} is an up-interval: closed under
        // intersection and upward inclusion
        let l = lat(3);
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let m =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let co: Vec<u32> = (0..l.len() as u32)
                .filter(|&i| (m.rank() - m.rank_idx(i)) as usize == 3 - l.dim_of(i))
                .collect();
            for &a in &co {
                for &b in &co {
                    let mt = l
                        .index_of(&crate::lattice::meet(&f, l.space(a), l.space(b)).unwrap())
                        .unwrap();
                    assert!(co.contains(&mt));
                }
                for &c in l.covers(a) {
                    assert!(co.contains(&c));
                }
            }
        }
    }

    #[test]
    fn loops_come_in_subspaces() {
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let m =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let fam = m.derive_families();
            for &a in l.atoms() {
                if fam.loopspace.contains(&f2(), l.space(a)) {
                    assert_eq!(m.rank_idx(a), 0);
                } else {
                    assert!(m.rank_idx(a) >= 1);
                }
            }
        }
    }

    #[test]
    fn derived_circuits_always_satisfy_circuit_axioms() {
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let m =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let set: BTreeSet<u32> = m.derive_families().circuits.into_iter().collect();
            assert!(check_circuit_axioms(&l, &set).ok);
        }
    }

    #[test]
    fn enumerating_all_dim2_tables_finds_six() {
        let l = lat(2);
        let tables = enumerate_rank_tables(&l, 10_000).unwrap();
        assert_eq!(tables.len(), 6);
        for t in &tables {
            assert!(check_rank_axioms(&l, t).unwrap().ok);
        }
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(gl_order(4, 2), 20160);
    }
}
