//! Constructions of new q-matroids from old: uniform q-matroids, q-matroids
//! induced by integer-valued submodular functions, matroid union and
//! intersection, loop extension, and the direct sum.
//!
//! Union is coordinate-sensitive, so the binary operations insist on the
//! same ground lattice and never re-coordinatize behind the caller's back.

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::lattice::{enumerate_lattice, LatticeIso, Subspace, SubspaceLattice};
use crate::matroid::QMatroid;
use std::sync::Arc;

/// The uniform q-matroid U_{k,n}: rank(A) = min(k, dim A).
pub fn uniform(k: u16, n: usize, field: Arc<FieldSpec>) -> Result<QMatroid> {
    if k as usize > n {
        return Err(Error::OutOfRange(format!("uniform rank {k} > dim {n}")));
    }
    let lattice = enumerate_lattice(field, n)?;
    QMatroid::from_rank_fn(lattice, |s| (s.dim() as u16).min(k))
}

/// Properties of a table verified exhaustively at construction. The
/// circuit pathway needs `increasing` and `submodular`; the rank-function
/// pathway additionally needs `nonneg` and `zero_at_zero`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubmodularFlags {
    pub nonneg: bool,
    pub increasing: bool,
    pub submodular: bool,
    pub zero_at_zero: bool,
}

/// An integer-valued function on the subspace lattice, tagged with which
/// preconditions it satisfies.
#[derive(Clone)]
pub struct SubmodularFn {
    lattice: Arc<SubspaceLattice>,
    values: Vec<i32>,
    flags: SubmodularFlags,
}

impl SubmodularFn {
    pub fn new(lattice: Arc<SubspaceLattice>, values: Vec<i32>) -> Result<SubmodularFn> {
        if values.len() != lattice.len() {
            return Err(Error::TableSizeMismatch {
                expected: lattice.len(),
                got: values.len(),
            });
        }
        let nonneg = values.iter().all(|&v| v >= 0);
        let zero_at_zero = values[0] == 0;
        let mut increasing = true;
        for i in 0..lattice.len() as u32 {
            for &c in lattice.covers(i) {
                if values[i as usize] > values[c as usize] {
                    increasing = false;
                }
            }
        }
        lattice.ensure_pair_tables();
        let mut submodular = true;
        'outer: for a in 0..lattice.len() as u32 {
            for b in a..lattice.len() as u32 {
                let j = lattice.join_idx(a, b);
                let m = lattice.meet_idx(a, b);
                if values[j as usize] + values[m as usize]
                    > values[a as usize] + values[b as usize]
                {
                    submodular = false;
                    break 'outer;
                }
            }
        }
        Ok(SubmodularFn {
            lattice,
            values,
            flags: SubmodularFlags {
                nonneg,
                increasing,
                submodular,
                zero_at_zero,
            },
        })
    }

    /// The pointwise sum of two rank functions on the same lattice; always
    /// satisfies all four flags.
    pub fn sum_of_ranks(m1: &QMatroid, m2: &QMatroid) -> Result<SubmodularFn> {
        if !m1.same_ground(m2) {
            return Err(Error::MixedLattices);
        }
        let values = m1
            .rank_table()
            .iter()
            .zip(m2.rank_table())
            .map(|(&a, &b)| a as i32 + b as i32)
            .collect();
        SubmodularFn::new(m1.lattice().clone(), values)
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn value(&self, idx: u32) -> i32 {
        self.values[idx as usize]
    }

    pub fn flags(&self) -> SubmodularFlags {
        self.flags
    }
}

/// The circuit family of M(f): minimal nonzero spaces C with f(C) < dim C.
/// Requires f increasing and submodular (integer-valued by construction);
/// f(0) = 0 is NOT required on this pathway.
pub fn circuits_from_submodular(f: &SubmodularFn) -> Result<Vec<u32>> {
    if !f.flags.increasing || !f.flags.submodular {
        return Err(Error::FlagsMissing("increasing, submodular".into()));
    }
    let l = &f.lattice;
    let defect = |i: u32| f.values[i as usize] < l.dim_of(i) as i32;
    let downsets = l.downsets();
    Ok((1..l.len() as u32)
        .filter(|&i| {
            defect(i)
                && downsets[i as usize]
                    .iter()
                    .all(|&d| d == i || l.dim_of(d) == 0 || !defect(d))
        })
        .collect())
}

/// The q-matroid M(f) with rank(A) = min over X inside A of
/// f(X) + dim A - dim X; the minimum over subspaces of A equals the minimum
/// over the whole lattice. Requires all four flags.
pub fn matroid_from_submodular(f: &SubmodularFn) -> Result<QMatroid> {
    let fl = f.flags;
    if !(fl.nonneg && fl.increasing && fl.submodular && fl.zero_at_zero) {
        return Err(Error::FlagsMissing(
            "nonneg, increasing, submodular, zero_at_zero".into(),
        ));
    }
    let l = f.lattice.clone();
    let downsets = l.downsets();
    let rank: Vec<u16> = (0..l.len() as u32)
        .map(|a| {
            let da = l.dim_of(a) as i32;
            downsets[a as usize]
                .iter()
                .map(|&x| f.values[x as usize] + da - l.dim_of(x) as i32)
                .min()
                .expect("downset contains the zero space") as u16
        })
        .collect();
    QMatroid::from_rank_table(l, rank)
}

/// Matroid union M1 v M2:
/// r(A) = min over X inside A of r1(X) + r2(X) + dim A - dim X.
/// Operands must live on the same ground lattice; union is not invariant
/// under re-coordinatizing one side.
pub fn union(m1: &QMatroid, m2: &QMatroid) -> Result<QMatroid> {
    if !m1.same_ground(m2) {
        return Err(Error::MixedLattices);
    }
    let l = m1.lattice().clone();
    let downsets = l.downsets();
    let rank: Vec<u16> = (0..l.len() as u32)
        .map(|a| {
            let da = l.dim_of(a) as u16;
            downsets[a as usize]
                .iter()
                .map(|&x| m1.rank_idx(x) + m2.rank_idx(x) + da - l.dim_of(x) as u16)
                .min()
                .expect("downset contains the zero space")
        })
        .collect();
    QMatroid::from_rank_table(l, rank)
}

/// Brute-force oracle for the independent spaces of the union: I qualifies
/// when every subspace J of I splits as J = I1 (+) I2 with I1 independent in
/// M1 and I2 independent in M2.
pub fn union_independents_oracle(m1: &QMatroid, m2: &QMatroid) -> Result<Vec<u32>> {
    if !m1.same_ground(m2) {
        return Err(Error::MixedLattices);
    }
    let l = m1.lattice().clone();
    let downsets = l.downsets();
    let indep1: Vec<bool> = (0..l.len() as u32)
        .map(|i| m1.rank_idx(i) as usize == l.dim_of(i))
        .collect();
    let indep2: Vec<bool> = (0..l.len() as u32)
        .map(|i| m2.rank_idx(i) as usize == l.dim_of(i))
        .collect();
    l.ensure_pair_tables();
    let splits = |j: u32| -> bool {
        let dj = l.dim_of(j);
        for &i1 in &downsets[j as usize] {
            if !indep1[i1 as usize] {
                continue;
            }
            for &i2 in &downsets[j as usize] {
                if !indep2[i2 as usize] {
                    continue;
                }
                if l.dim_of(i1) + l.dim_of(i2) == dj && l.join_idx(i1, i2) == j {
                    return true;
                }
            }
        }
        false
    };
    Ok((0..l.len() as u32)
        .filter(|&i| downsets[i as usize].iter().all(|&j| splits(j)))
        .collect())
}

/// Matroid intersection via duality: M1 ^ M2 = (M1* v M2*)*.
pub fn intersection(m1: &QMatroid, m2: &QMatroid) -> Result<QMatroid> {
    Ok(union(&m1.dual(), &m2.dual())?.dual())
}

/// Extends M by one loop: the new ambient space gains a trailing coordinate
/// axis `l`, and r'(A') = r(A) for the unique A with A' + l = A (+) l.
pub fn add_loop(m: &QMatroid) -> Result<QMatroid> {
    let field = m.lattice().field().clone();
    let n = m.lattice().ambient_dim();
    let big = enumerate_lattice(field.clone(), n + 1)?;
    let mut loop_row = vec![0u32; n + 1];
    loop_row[n] = 1;
    let loop_axis = crate::lattice::rref(&field, n + 1, &[loop_row])?;
    let e_embed = crate::lattice::rref(
        &field,
        n + 1,
        &(0..n)
            .map(|i| {
                let mut r = vec![0u32; n + 1];
                r[i] = 1;
                r
            })
            .collect::<Vec<_>>(),
    )?;
    let rank: Vec<u16> = big
        .spaces()
        .iter()
        .map(|a_prime| {
            let s = crate::lattice::join(&field, a_prime, &loop_axis).expect("same ambient");
            let a_big = crate::lattice::meet(&field, &s, &e_embed).expect("same ambient");
            // rows of a_big have zero last coordinate; drop it
            let rows: Vec<Vec<u32>> = a_big.rows().iter().map(|r| r[..n].to_vec()).collect();
            let a = crate::lattice::rref(&field, n, &rows).expect("width n");
            m.rank_of(&a).expect("projected space is in the lattice")
        })
        .collect();
    QMatroid::from_rank_table(big, rank)
}

/// The two loop-extended summands placed on the combined ground space, with
/// E1 the first n1 coordinates and E2 the last n2; E1^perp = E2 under the
/// standard dot product.
pub struct DirectSumContext {
    pub lattice: Arc<SubspaceLattice>,
    pub e1: Subspace,
    pub e2: Subspace,
    /// M1 on E1, loops on E2.
    pub m1_ext: QMatroid,
    /// M2 on E2, loops on E1.
    pub m2_ext: QMatroid,
}

/// Builds the direct-sum context: repeated loop extension puts the loops on
/// trailing coordinates, so M2's extension is rotated by a fixed coordinate
/// permutation to land on the canonical E1/E2 split.
pub fn direct_sum_context(m1: &QMatroid, m2: &QMatroid) -> Result<DirectSumContext> {
    let field = m1.lattice().field().clone();
    if m2.lattice().field() != &field {
        return Err(Error::MixedFields);
    }
    let n1 = m1.lattice().ambient_dim();
    let n2 = m2.lattice().ambient_dim();
    let n = n1 + n2;

    let mut m1_ext = m1.clone();
    for _ in 0..n2 {
        m1_ext = add_loop(&m1_ext)?;
    }
    let mut m2_ext = m2.clone();
    for _ in 0..n1 {
        m2_ext = add_loop(&m2_ext)?;
    }
    if n1 > 0 && n > 0 {
        let perm: Vec<usize> = (0..n).map(|j| (j + n1) % n).collect();
        let rot = LatticeIso::permutation(field.clone(), &perm);
        m2_ext = m2_ext.transform(&rot)?;
    }
    // place both on one shared lattice object
    let lattice = m1_ext.lattice().clone();
    let e1_rows: Vec<Vec<u32>> = (0..n1)
        .map(|i| {
            let mut r = vec![0u32; n];
            r[i] = 1;
            r
        })
        .collect();
    let e2_rows: Vec<Vec<u32>> = (n1..n)
        .map(|i| {
            let mut r = vec![0u32; n];
            r[i] = 1;
            r
        })
        .collect();
    let e1 = crate::lattice::rref(&field, n, &e1_rows)?;
    let e2 = crate::lattice::rref(&field, n, &e2_rows)?;
    Ok(DirectSumContext {
        lattice,
        e1,
        e2,
        m1_ext,
        m2_ext,
    })
}

/// The direct sum M1 (+) M2 = M1' v M2': add loops to put both summands on
/// E = E1 (+) E2, then take the matroid union.
pub fn direct_sum(m1: &QMatroid, m2: &QMatroid) -> Result<QMatroid> {
    let ctx = direct_sum_context(m1, m2)?;
    union(&ctx.m1_ext, &ctx.m2_ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::perp;
    use crate::matroid::random_rank_table;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::new(2, 1, None).unwrap()
    }

    fn lat(n: usize) -> Arc<SubspaceLattice> {
        enumerate_lattice(f2(), n).unwrap()
    }

    fn u(k: u16, n: usize) -> QMatroid {
        uniform(k, n, f2()).unwrap()
    }

    /// Rank-1 matroid with the given loopspace.
    fn rank1_with_loopspace(n: usize, loopspace: &str) -> QMatroid {
        let l = lat(n);
        let f = f2();
        let ls = Subspace::parse(&f, n, loopspace).unwrap();
        QMatroid::from_rank_fn(l, |s| u16::from(!ls.contains(&f, s))).unwrap()
    }

    fn mixed_diamond(loop_at: &str) -> QMatroid {
        rank1_with_loopspace(2, loop_at)
    }

    fn p1() -> QMatroid {
        rank1_with_loopspace(3, "100")
    }

    fn p2() -> QMatroid {
        rank1_with_loopspace(3, "100,010")
    }

    /// The four dimension-2 q-matroids over F_2 in canonical coordinates.
    fn dim2_catalogue() -> Vec<QMatroid> {
        vec![u(0, 2), mixed_diamond("01"), u(1, 2), u(2, 2)]
    }

    #[test]
    fn uniform_examples() {
        let u01 = u(0, 1);
        assert_eq!(u01.derive_families().loopspace, Subspace::full(1));

        let u23 = u(2, 3);
        let bases = u23.derive_families().bases;
        assert_eq!(bases.len(), 7);
        assert!(bases.iter().all(|&b| u23.lattice().dim_of(b) == 2));

        for n in 0..=3usize {
            for k in 0..=n as u16 {
                let d = u(k, n).dual();
                assert_eq!(d.rank_table(), u(n as u16 - k, n).rank_table());
            }
        }
        assert!(matches!(uniform(4, 3, f2()), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn submodular_flags_are_detected() {
        let l = lat(2);
        let dim_fn = SubmodularFn::new(
            l.clone(),
            l.spaces().iter().map(|s| s.dim() as i32).collect(),
        )
        .unwrap();
        assert_eq!(
            dim_fn.flags(),
            SubmodularFlags {
                nonneg: true,
                increasing: true,
                submodular: true,
                zero_at_zero: true
            }
        );
        let not_zero =
            SubmodularFn::new(l.clone(), l.spaces().iter().map(|_| 1).collect()).unwrap();
        assert!(!not_zero.flags().zero_at_zero);
        assert!(not_zero.flags().increasing);

        // quadratic growth in dimension is not submodular on a diamond
        let values: Vec<i32> = l
            .spaces()
            .iter()
            .map(|s| (s.dim() * s.dim()) as i32)
            .collect();
        let sq = SubmodularFn::new(l, values).unwrap();
        assert!(!sq.flags().submodular);
    }

    #[test]
    fn circuits_from_dim_are_empty() {
        let l = lat(3);
        let f = SubmodularFn::new(
            l.clone(),
            l.spaces().iter().map(|s| s.dim() as i32).collect(),
        )
        .unwrap();
        assert!(circuits_from_submodular(&f).unwrap().is_empty());
    }

    #[test]
    fn circuits_from_u12_rank_are_the_full_space() {
        let m = u(1, 2);
        let l = m.lattice().clone();
        let f = SubmodularFn::new(
            l.clone(),
            m.rank_table().iter().map(|&v| v as i32).collect(),
        )
        .unwrap();
        let circuits = circuits_from_submodular(&f).unwrap();
        assert_eq!(circuits, vec![l.full_idx()]);
    }

    #[test]
    fn circuits_of_summed_prime_diamonds_are_empty() {
        let f = SubmodularFn::sum_of_ranks(&u(1, 2), &u(1, 2)).unwrap();
        assert!(circuits_from_submodular(&f).unwrap().is_empty());
    }

    #[test]
    fn matroid_from_submodular_extremes() {
        let l = lat(3);
        let dim_fn = SubmodularFn::new(
            l.clone(),
            l.spaces().iter().map(|s| s.dim() as i32).collect(),
        )
        .unwrap();
        assert_eq!(
            matroid_from_submodular(&dim_fn).unwrap().rank_table(),
            u(3, 3).rank_table()
        );
        let zero_fn = SubmodularFn::new(l.clone(), vec![0; l.len()]).unwrap();
        assert_eq!(
            matroid_from_submodular(&zero_fn).unwrap().rank_table(),
            u(0, 3).rank_table()
        );
    }

    #[test]
    fn flags_are_required() {
        let l = lat(2);
        let not_zero =
            SubmodularFn::new(l.clone(), l.spaces().iter().map(|_| 1).collect()).unwrap();
        assert!(matches!(
            matroid_from_submodular(&not_zero),
            Err(Error::FlagsMissing(_))
        ));
        // but the circuit pathway accepts it
        assert!(circuits_from_submodular(&not_zero).is_ok());
    }

    #[test]
    fn same_loop_mixed_diamonds_give_rank_one() {
        // the minimizing X is the shared loop
        let m = mixed_diamond("10");
        let f = SubmodularFn::sum_of_ranks(&m, &m).unwrap();
        let viaf = matroid_from_submodular(&f).unwrap();
        assert_eq!(viaf.rank(), 1);
        let viau = union(&m, &m).unwrap();
        assert_eq!(viau.rank(), 1);

        let other = mixed_diamond("01");
        assert_eq!(union(&m, &other).unwrap().rank(), 2);
    }

    #[test]
    fn union_with_zero_matroid_is_identity() {
        for m in [u(0, 2), u(1, 2), u(2, 2), mixed_diamond("10"), p1(), p2()] {
            let n = m.lattice().ambient_dim();
            let zero = u(0, n);
            assert_eq!(union(&m, &zero).unwrap().rank_table(), m.rank_table());
        }
    }

    #[test]
    fn union_refuses_mixed_lattices() {
        assert!(matches!(
            union(&u(1, 2), &u(1, 3)),
            Err(Error::MixedLattices)
        ));
    }

    #[test]
    fn jointly_independent_spaces_stay_independent_in_the_union() {
        let l = lat(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m1 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let m2 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let un = union(&m1, &m2).unwrap();
            for i in 0..l.len() as u32 {
                let d = l.dim_of(i) as u16;
                if m1.rank_idx(i) == d && m2.rank_idx(i) == d {
                    assert_eq!(un.rank_idx(i), d);
                }
            }
        }
    }

    #[test]
    fn union_independents_match_oracle_on_all_dim2_pairs() {
        // all ordered pairs of all six valid dim-2 tables, not just classes
        let l = lat(2);
        let tables = crate::matroid::enumerate_rank_tables(&l, 100).unwrap();
        assert_eq!(tables.len(), 6);
        for t1 in &tables {
            for t2 in &tables {
                let m1 = QMatroid::from_rank_table(l.clone(), t1.clone()).unwrap();
                let m2 = QMatroid::from_rank_table(l.clone(), t2.clone()).unwrap();
                let got: Vec<u32> = union(&m1, &m2).unwrap().derive_families().independent;
                let want = union_independents_oracle(&m1, &m2).unwrap();
                assert_eq!(got, want);
            }
        }
        // U_{n,n} with itself: everything qualifies
        let top = u(2, 2);
        assert_eq!(
            union_independents_oracle(&top, &top).unwrap().len(),
            top.lattice().len()
        );
        // same-loop mixed diamonds: the loop does not decompose
        let m = mixed_diamond("10");
        let f = f2();
        let loop_idx = m
            .lattice()
            .index_of(&Subspace::parse(&f, 2, "10").unwrap())
            .unwrap();
        assert!(!union_independents_oracle(&m, &m)
            .unwrap()
            .contains(&loop_idx));
    }

    #[test]
    fn intersection_with_top_uniform_is_identity() {
        for m in [u(0, 2), u(1, 2), u(2, 2), mixed_diamond("10"), p1()] {
            let n = m.lattice().ambient_dim();
            let top = u(n as u16, n);
            assert_eq!(
                intersection(&m, &top).unwrap().rank_table(),
                m.rank_table()
            );
        }
    }

    #[test]
    fn intersection_spanning_spaces_versus_pairwise_intersections() {
        // Every spanning space of M1 ^ M2 is an intersection of spanning
        // spaces of the operands. The reverse containment fails in general:
        // two spanning spaces can meet in a space of too-small rank. The
        // mixed diamond against itself is the smallest counterexample, where
        // <10> and <11> are both spanning but meet in the zero space.
        let l = lat(2);
        let tables = crate::matroid::enumerate_rank_tables(&l, 100).unwrap();
        let mut equality_failures = Vec::new();
        for t1 in &tables {
            for t2 in &tables {
                let m1 = QMatroid::from_rank_table(l.clone(), t1.clone()).unwrap();
                let m2 = QMatroid::from_rank_table(l.clone(), t2.clone()).unwrap();
                let inter = intersection(&m1, &m2).unwrap();
                let got: std::collections::BTreeSet<u32> =
                    inter.derive_families().spanning.into_iter().collect();
                let s1 = m1.derive_families().spanning;
                let s2 = m2.derive_families().spanning;
                let mut meets = std::collections::BTreeSet::new();
                for &a in &s1 {
                    for &b in &s2 {
                        meets.insert(l.meet_idx(a, b));
                    }
                }
                assert!(got.is_subset(&meets));
                if got != meets {
                    equality_failures.push((t1.clone(), t2.clone()));
                }
            }
        }
        // frozen oracle outcome: equality fails exactly when both operands
        // have positive rank and the meet set picks up under-rank spaces
        assert!(!equality_failures.is_empty());
        let mixed = mixed_diamond("01");
        let inter = intersection(&mixed, &mixed).unwrap();
        assert_eq!(inter.rank_table(), mixed.rank_table());
        let spanning = inter.derive_families().spanning;
        assert!(!spanning.contains(&l.zero_idx()));
    }

    #[test]
    fn restriction_distributes_over_union_and_contraction_over_intersection() {
        let l = lat(2);
        let tables = crate::matroid::enumerate_rank_tables(&l, 100).unwrap();
        for t1 in &tables {
            for t2 in &tables {
                let m1 = QMatroid::from_rank_table(l.clone(), t1.clone()).unwrap();
                let m2 = QMatroid::from_rank_table(l.clone(), t2.clone()).unwrap();
                for t in l.spaces() {
                    let lhs = union(&m1, &m2).unwrap().restrict(t).unwrap();
                    let rhs =
                        union(&m1.restrict(t).unwrap(), &m2.restrict(t).unwrap()).unwrap();
                    assert_eq!(lhs.rank_table(), rhs.rank_table());

                    let lhs2 = intersection(&m1, &m2).unwrap().contract(t).unwrap();
                    let rhs2 =
                        intersection(&m1.contract(t).unwrap(), &m2.contract(t).unwrap())
                            .unwrap();
                    assert!(lhs2.is_isomorphic(&rhs2).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn add_loop_examples() {
        // U_{1,1} + loop = mixed diamond with the loop at <01>
        let ext = add_loop(&u(1, 1)).unwrap();
        assert_eq!(ext.rank_table(), mixed_diamond("01").rank_table());

        // U_{0,n} + loop = U_{0,n+1}
        let ext0 = add_loop(&u(0, 2)).unwrap();
        assert_eq!(ext0.rank_table(), u(0, 3).rank_table());

        // U_{1,2} + loop is isomorphic to P1 (our embedding trails the loop,
        // P1 carries it on the first coordinate)
        let ext12 = add_loop(&u(1, 2)).unwrap();
        assert!(ext12.is_isomorphic(&p1()).unwrap().is_some());
        assert_eq!(ext12.rank(), 1);

        // two loops on U_{1,1} give something isomorphic to P2
        let ext2 = add_loop(&add_loop(&u(1, 1)).unwrap()).unwrap();
        assert!(ext2.is_isomorphic(&p2()).unwrap().is_some());
    }

    #[test]
    fn direct_sum_context_invariants() {
        let ctx = direct_sum_context(&u(1, 2), &u(1, 1)).unwrap();
        let f = f2();
        assert_eq!(perp(&f, &ctx.e1), ctx.e2);
        // restrictions of the extensions recover the summands and zero matroids
        let r11 = ctx.m1_ext.restrict(&ctx.e1).unwrap();
        assert_eq!(r11.rank_table(), u(1, 2).rank_table());
        let r12 = ctx.m1_ext.restrict(&ctx.e2).unwrap();
        assert_eq!(r12.rank_table(), u(0, 1).rank_table());
        let r21 = ctx.m2_ext.restrict(&ctx.e1).unwrap();
        assert_eq!(r21.rank_table(), u(0, 2).rank_table());
        let r22 = ctx.m2_ext.restrict(&ctx.e2).unwrap();
        assert_eq!(r22.rank_table(), u(1, 1).rank_table());
    }

    #[test]
    fn direct_sum_of_single_loops_and_points() {
        assert_eq!(
            direct_sum(&u(0, 1), &u(0, 1)).unwrap().rank_table(),
            u(0, 2).rank_table()
        );
        assert_eq!(
            direct_sum(&u(1, 1), &u(1, 1)).unwrap().rank_table(),
            u(2, 2).rank_table()
        );
        assert_eq!(
            direct_sum(&u(0, 1), &u(1, 1)).unwrap().rank_table(),
            mixed_diamond("10").rank_table()
        );
    }

    #[test]
    fn direct_sum_u12_u11_is_p1_star() {
        let sum = direct_sum(&u(1, 2), &u(1, 1)).unwrap();
        let p1_star = p1().dual();
        assert_eq!(sum.rank(), 2);
        assert!(sum.is_isomorphic(&p1_star).unwrap().is_some());
    }

    #[test]
    fn direct_sum_u12_u12_has_only_e1_e2_dependent() {
        let sum = direct_sum(&u(1, 2), &u(1, 2)).unwrap();
        assert_eq!(sum.rank(), 2);
        let f = f2();
        let l = sum.lattice();
        let e1 = Subspace::parse(&f, 4, "1000,0100").unwrap();
        let e2 = Subspace::parse(&f, 4, "0010,0001").unwrap();
        for &i in &l.dim_buckets()[2] {
            let s = l.space(i);
            let expected = if *s == e1 || *s == e2 { 1 } else { 2 };
            assert_eq!(sum.rank_idx(i), expected, "{s:?}");
        }
        // self-dual
        assert_eq!(sum.dual().rank_table(), sum.rank_table());
    }

    #[test]
    fn rank_of_direct_sum_is_additive_on_small_pairs() {
        // all ordered pairs with summand dimensions 1 and 2
        let mut cat = dim2_catalogue();
        cat.push(u(0, 1));
        cat.push(u(1, 1));
        for m1 in &cat {
            for m2 in &cat {
                let s = direct_sum(m1, m2).unwrap();
                assert_eq!(s.rank(), m1.rank() + m2.rank());
            }
        }
    }

    #[test]
    fn split_subspaces_have_additive_rank() {
        let cat = dim2_catalogue();
        let f = f2();
        for m1 in &cat {
            for m2 in &cat {
                let s = direct_sum(m1, m2).unwrap();
                for a1 in m1.lattice().spaces() {
                    for a2 in m2.lattice().spaces() {
                        // embed a1 on the first coordinates, a2 on the last
                        let mut rows: Vec<Vec<u32>> = a1
                            .rows()
                            .iter()
                            .map(|r| {
                                let mut v = r.clone();
                                v.extend(std::iter::repeat_n(0, 2));
                                v
                            })
                            .collect();
                        rows.extend(a2.rows().iter().map(|r| {
                            let mut v = vec![0u32; 2];
                            v.extend(r.iter().copied());
                            v
                        }));
                        let a = crate::lattice::rref(&f, 4, &rows).unwrap();
                        assert_eq!(
                            s.rank_of(&a).unwrap(),
                            m1.rank_of(a1).unwrap() + m2.rank_of(a2).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dual_of_direct_sum_is_direct_sum_of_duals() {
        let cat = dim2_catalogue();
        for m1 in &cat {
            for m2 in &cat {
                let lhs = direct_sum(m1, m2).unwrap().dual();
                let rhs = direct_sum(&m1.dual(), &m2.dual()).unwrap();
                assert_eq!(lhs.rank_table(), rhs.rank_table());
            }
        }
    }

    #[test]
    fn four_minor_property_of_the_direct_sum() {
        let cat = dim2_catalogue();
        for m1 in &cat {
            for m2 in &cat {
                let ctx = direct_sum_context(m1, m2).unwrap();
                let s = union(&ctx.m1_ext, &ctx.m2_ext).unwrap();
                assert!(s
                    .restrict(&ctx.e1)
                    .unwrap()
                    .is_isomorphic(m1)
                    .unwrap()
                    .is_some());
                assert!(s
                    .contract(&ctx.e2)
                    .unwrap()
                    .is_isomorphic(m1)
                    .unwrap()
                    .is_some());
                assert!(s
                    .restrict(&ctx.e2)
                    .unwrap()
                    .is_isomorphic(m2)
                    .unwrap()
                    .is_some());
                assert!(s
                    .contract(&ctx.e1)
                    .unwrap()
                    .is_isomorphic(m2)
                    .unwrap()
                    .is_some());
            }
        }
    }

    fn random_gl(f: &Arc<FieldSpec>, n: usize, rng: &mut impl rand::Rng) -> LatticeIso {
        loop {
            let m: Vec<Vec<u32>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect())
                .collect();
            if let Ok(t) = LatticeIso::new(f.clone(), m) {
                return t;
            }
        }
    }

    #[test]
    fn direct_sum_is_invariant_under_summand_coordinatization() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let canonical = direct_sum(&u(1, 2), &mixed_diamond("10")).unwrap();
        let f = f2();
        for _ in 0..5 {
            let t1 = random_gl(&f, 2, &mut rng);
            let t2 = random_gl(&f, 2, &mut rng);
            let m1 = u(1, 2).transform(&t1).unwrap();
            let m2 = mixed_diamond("10").transform(&t2).unwrap();
            let s = direct_sum(&m1, &m2).unwrap();
            assert!(s.is_isomorphic(&canonical).unwrap().is_some());
        }
    }

    #[test]
    fn loopspace_of_sum_is_sum_of_loopspaces() {
        let cat = dim2_catalogue();
        for m1 in &cat {
            for m2 in &cat {
                let s = direct_sum(m1, m2).unwrap();
                let l1 = m1.derive_families().loopspace.dim();
                let l2 = m2.derive_families().loopspace.dim();
                let ls = s.derive_families().loopspace.dim();
                assert_eq!(ls, l1 + l2);
                // coloop-free summands give a coloop-free sum
                let c1 = m1.dual().derive_families().loopspace.dim();
                let c2 = m2.dual().derive_families().loopspace.dim();
                let cs = s.dual().derive_families().loopspace.dim();
                if c1 == 0 && c2 == 0 {
                    assert_eq!(cs, 0);
                }
            }
        }
    }

    #[test]
    fn union_rank_agrees_with_submodular_construction() {
        // the minimum over X inside A equals the minimum over all X
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let m1 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let m2 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let f = SubmodularFn::sum_of_ranks(&m1, &m2).unwrap();
            let via_f = matroid_from_submodular(&f).unwrap();
            let via_union = union(&m1, &m2).unwrap();
            assert_eq!(via_f.rank_table(), via_union.rank_table());

            // full-lattice minimum, computed the expensive way
            for a in 0..l.len() as u32 {
                let da = l.dim_of(a) as i32;
                let full_min = (0..l.len() as u32)
                    .map(|x| {
                        let mx = l.meet_idx(a, x);
                        f.value(x) + da - l.dim_of(mx) as i32
                    })
                    .min()
                    .unwrap();
                assert_eq!(via_f.rank_idx(a) as i32, full_min);
            }
        }
    }

    #[test]
    fn submodular_and_circuit_pathways_agree() {
        // both pathways define the same q-matroid
        let l = lat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let m1 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let m2 =
                QMatroid::from_rank_table(l.clone(), random_rank_table(&l, &mut rng)).unwrap();
            let f = SubmodularFn::sum_of_ranks(&m1, &m2).unwrap();
            let m = matroid_from_submodular(&f).unwrap();
            let circuits = circuits_from_submodular(&f).unwrap();
            // independents of M(f) = spaces containing no circuit
            let downsets = l.downsets();
            for i in 0..l.len() as u32 {
                let indep = m.rank_idx(i) as usize == l.dim_of(i);
                let contains_circuit = circuits
                    .iter()
                    .any(|c| downsets[i as usize].binary_search(c).is_ok());
                assert_eq!(indep, !contains_circuit);
            }
        }
    }
}
