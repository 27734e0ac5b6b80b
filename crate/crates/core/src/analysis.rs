//! Connectedness relations and conjecture harnesses, the non-uniqueness
//! demonstration on F_2^4, spreads, and exhaustive catalogue generation for
//! small parameters.

use crate::construct::{direct_sum, uniform};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::lattice::{enumerate_lattice, LatticeIso, Subspace, SubspaceLattice};
use crate::matroid::{
    check_circuit_axioms, enumerate_rank_tables, QMatroid, DEFAULT_ISO_SEARCH_CAP,
};
use crate::repr::named_two_spaces;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Which relation on 1-dimensional spaces was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// x ~ y when some circuit contains both (not transitive in general).
    Circuit,
    /// x ~ y when some hyperplane contains neither (always an equivalence).
    Hyperplane,
}

/// A reflexive symmetric relation on the 1-spaces, with its transitivity
/// status and the partition into classes when it is an equivalence.
#[derive(Debug, Clone)]
pub struct RelationClasses {
    pub relation_kind: RelationKind,
    /// Off-diagonal related pairs (a < b), as atom indices into the lattice.
    pub pairs: Vec<(u32, u32)>,
    pub is_equivalence: bool,
    /// Partition of the atoms when `is_equivalence`; empty otherwise.
    pub classes: Vec<Vec<u32>>,
    pub notes: Vec<String>,
}

fn relation_from_adjacency(
    kind: RelationKind,
    atoms: &[u32],
    related: &[Vec<bool>],
    notes: Vec<String>,
) -> RelationClasses {
    let n = atoms.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if related[i][j] {
                pairs.push((atoms[i], atoms[j]));
            }
        }
    }
    let mut transitive = true;
    'scan: for i in 0..n {
        for j in 0..n {
            if !related[i][j] || i == j {
                continue;
            }
            for k in 0..n {
                if related[j][k] && !related[i][k] {
                    transitive = false;
                    break 'scan;
                }
            }
        }
    }
    let mut classes = Vec::new();
    if transitive {
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut class = Vec::new();
            for j in 0..n {
                if related[i][j] {
                    class.push(atoms[j]);
                    seen[j] = true;
                }
            }
            classes.push(class);
        }
    }
    RelationClasses {
        relation_kind: kind,
        pairs,
        is_equivalence: transitive,
        classes,
        notes,
    }
}

/// The circuit relation: x ~ y when x = y or some circuit of M contains
/// both. Reflexive and symmetric by construction; transitivity is tested
/// exhaustively and classes are populated only when it holds.
pub fn circuit_relation(m: &QMatroid) -> RelationClasses {
    let l = m.lattice();
    let atoms = l.atoms().to_vec();
    let n = atoms.len();
    let mut related = vec![vec![false; n]; n];
    for i in 0..n {
        related[i][i] = true;
    }
    let circuits = m.derive_families().circuits;
    for &c in &circuits {
        let members: Vec<usize> = (0..n)
            .filter(|&i| l.contains_idx(c, atoms[i]))
            .collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                related[i][j] = true;
                related[j][i] = true;
            }
        }
    }
    relation_from_adjacency(RelationKind::Circuit, &atoms, &related, Vec::new())
}

/// The hyperplane relation: x ~ y when x = y or some hyperplane contains
/// neither. This is always an equivalence; a transitivity failure would
/// contradict the hyperplane axioms and panics as a fatal inconsistency.
pub fn hyperplane_relation(m: &QMatroid) -> RelationClasses {
    let l = m.lattice();
    let atoms = l.atoms().to_vec();
    let n = atoms.len();
    let mut related = vec![vec![false; n]; n];
    for i in 0..n {
        related[i][i] = true;
    }
    let hyperplanes = m.derive_families().hyperplanes;
    let mut notes = Vec::new();
    if hyperplanes.is_empty() {
        notes.push(
            "no hyperplanes: the literal relation is the diagonal, so every \
             1-space sits in its own class"
                .into(),
        );
    }
    for &h in &hyperplanes {
        let outside: Vec<usize> = (0..n)
            .filter(|&i| !l.contains_idx(h, atoms[i]))
            .collect();
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                related[i][j] = true;
                related[j][i] = true;
            }
        }
    }
    let rel = relation_from_adjacency(RelationKind::Hyperplane, &atoms, &related, notes);
    assert!(
        rel.is_equivalence,
        "hyperplane relation failed transitivity: inconsistent q-matroid state"
    );
    rel
}

/// One matroid's row in the conjecture report.
#[derive(Debug, Clone)]
pub struct ConjectureEntry {
    pub name: String,
    pub circuit_rel_equivalence: bool,
    pub dual_circuit_rel_equivalence: bool,
    /// No circuit/cocircuit pair meets in dimension 1.
    pub no_dim1_circuit_cocircuit_meet: bool,
    /// Conjecture: circuit relation transitive in M or M*.
    pub conj_either_side_ok: bool,
    /// Conjecture: the dimension-1 precondition forces transitivity.
    pub conj_precondition_ok: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ConjectureReport {
    pub entries: Vec<ConjectureEntry>,
    /// Names violating the either-side conjecture.
    pub counterexamples_either_side: Vec<String>,
    /// Names violating the precondition conjecture.
    pub counterexamples_precondition: Vec<String>,
}

impl ConjectureReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{}: circuit relation transitive: {} (dual: {}); \
                 circuit/cocircuit meets avoid dim 1: {}; \
                 either-side conjecture: {}; precondition conjecture: {}\n",
                e.name,
                e.circuit_rel_equivalence,
                e.dual_circuit_rel_equivalence,
                e.no_dim1_circuit_cocircuit_meet,
                if e.conj_either_side_ok { "holds" } else { "COUNTEREXAMPLE" },
                if e.conj_precondition_ok { "holds" } else { "COUNTEREXAMPLE" },
            ));
        }
        out.push_str(&format!(
            "counterexamples: either-side {}, precondition {}\n",
            self.counterexamples_either_side.len(),
            self.counterexamples_precondition.len()
        ));
        out
    }
}

/// Evaluates both connectedness conjectures on each matroid: the circuit
/// relation should be an equivalence in at least one of M and M*, and when
/// no circuit meets a cocircuit in dimension exactly 1 it should be an
/// equivalence in M itself. Counterexamples are findings, not failures.
pub fn conjecture_harness(ms: &[(String, QMatroid)]) -> ConjectureReport {
    let mut report = ConjectureReport::default();
    for (name, m) in ms {
        let rel = circuit_relation(m);
        let dual = m.dual();
        let rel_dual = circuit_relation(&dual);
        let circuits = m.derive_families().circuits;
        let cocircuits = dual.derive_families().circuits;
        let l = m.lattice();
        let mut no_dim1 = true;
        'outer: for &c in &circuits {
            for &cc in &cocircuits {
                if l.dim_of(l.meet_idx(c, cc)) == 1 {
                    no_dim1 = false;
                    break 'outer;
                }
            }
        }
        let either = rel.is_equivalence || rel_dual.is_equivalence;
        let precond = !no_dim1 || rel.is_equivalence;
        if !either {
            report.counterexamples_either_side.push(name.clone());
        }
        if !precond {
            report.counterexamples_precondition.push(name.clone());
        }
        report.entries.push(ConjectureEntry {
            name: name.clone(),
            circuit_rel_equivalence: rel.is_equivalence,
            dual_circuit_rel_equivalence: rel_dual.is_equivalence,
            no_dim1_circuit_cocircuit_meet: no_dim1,
            conj_either_side_ok: either,
            conj_precondition_ok: precond,
        });
    }
    report
}

/// One of the four rank tables on F_2^4 satisfying the naive direct-sum
/// description of U_{1,2} (+) U_{1,2}.
#[derive(Debug, Clone)]
pub struct NonUniquenessVariant {
    /// Number of 2-dimensional circuits (2, 3, 4 or 5).
    pub two_dim_circuits: usize,
    pub matroid: QMatroid,
    pub circuit_axioms_ok: bool,
    pub four_minor_ok: bool,
}

#[derive(Debug, Clone)]
pub struct NonUniquenessReport {
    pub variants: Vec<NonUniquenessVariant>,
    pub pairwise_non_isomorphic: bool,
    /// The 2-circuit variant equals the constructed direct sum exactly.
    pub two_circuit_matches_direct_sum: bool,
}

impl NonUniquenessReport {
    pub fn render(&self) -> String {
        let mut out = String::from(
            "naive direct sum of two prime diamonds on F_2^4: four valid completions\n",
        );
        for v in &self.variants {
            out.push_str(&format!(
                "{} two-dim circuits: rank axioms ok, circuit axioms {}, four-minor property {}\n",
                v.two_dim_circuits,
                if v.circuit_axioms_ok { "ok" } else { "FAILED" },
                if v.four_minor_ok { "ok" } else { "FAILED" },
            ));
        }
        out.push_str(&format!(
            "pairwise non-isomorphic: {}\ntwo-circuit variant equals the matroid-union direct sum: {}\n",
            self.pairwise_non_isomorphic, self.two_circuit_matches_direct_sum
        ));
        out
    }
}

/// Builds the four F_2^4 rank tables with 2-dim circuits E1, E2 plus none,
/// one, two or all of the spread side {A, B, C}; checks rank and circuit
/// axioms, the four-minor property against U_{1,2}, pairwise
/// non-isomorphism, and agreement of the 2-circuit table with the
/// constructed direct sum.
pub fn nonuniqueness_demo() -> Result<NonUniquenessReport> {
    let field = FieldSpec::new(2, 1, None)?;
    let lattice = enumerate_lattice(field.clone(), 4)?;
    let named = named_two_spaces(&field);
    let u12 = uniform(1, 2, field.clone())?;

    let side = [&named.a, &named.b, &named.c];
    let mut variants = Vec::new();
    for extra in 0..=3usize {
        let mut circuit_spaces: Vec<&Subspace> = vec![&named.e1, &named.e2];
        circuit_spaces.extend(&side[..extra]);
        let matroid = QMatroid::from_rank_fn(lattice.clone(), |s| match s.dim() {
            0 => 0,
            1 => 1,
            2
                if circuit_spaces.iter().any(|c| **c == *s) => {
                    1
                }
            _ => 2,
        })?;
        let derived: BTreeSet<u32> = matroid.derive_families().circuits.into_iter().collect();
        let circuit_axioms_ok = check_circuit_axioms(&lattice, &derived).ok;
        let four_minor_ok = matroid
            .restrict(&named.e1)?
            .is_isomorphic(&u12)?
            .is_some()
            && matroid.restrict(&named.e2)?.is_isomorphic(&u12)?.is_some()
            && matroid.contract(&named.e1)?.is_isomorphic(&u12)?.is_some()
            && matroid.contract(&named.e2)?.is_isomorphic(&u12)?.is_some();
        variants.push(NonUniquenessVariant {
            two_dim_circuits: 2 + extra,
            matroid,
            circuit_axioms_ok,
            four_minor_ok,
        });
    }

    let mut pairwise_non_isomorphic = true;
    for i in 0..variants.len() {
        for j in i + 1..variants.len() {
            if variants[i]
                .matroid
                .is_isomorphic(&variants[j].matroid)?
                .is_some()
            {
                pairwise_non_isomorphic = false;
            }
        }
    }
    let sum = direct_sum(&u12, &u12)?;
    let two_circuit_matches_direct_sum =
        variants[0].matroid.rank_table() == sum.rank_table();
    Ok(NonUniquenessReport {
        variants,
        pairwise_non_isomorphic,
        two_circuit_matches_direct_sum,
    })
}

/// A spread: equal-dimension subspaces meeting pairwise trivially and
/// covering every 1-space.
#[derive(Debug, Clone)]
pub struct SpreadSet {
    pub members: Vec<Subspace>,
}

#[derive(Debug, Clone)]
pub struct SpreadReport {
    pub abc: SpreadSet,
    pub dfg: SpreadSet,
    /// Every 3-space contains a member, for each spread.
    pub three_space_cover_ok: bool,
    /// A change of basis carrying one spread onto the other.
    pub change_of_basis: Option<LatticeIso>,
}

/// Builds the two spreads of F_2^4 through E1 and E2 and verifies their
/// defining properties plus the 3-space covering lemma; also finds a change
/// of basis mapping one spread onto the other.
pub fn spread_tools(lattice: &Arc<SubspaceLattice>) -> Result<SpreadReport> {
    let field = lattice.field();
    if field.order() != 2 || lattice.ambient_dim() != 4 {
        return Err(Error::WrongAmbient);
    }
    let named = named_two_spaces(field);
    let abc = SpreadSet {
        members: vec![
            named.e1.clone(),
            named.e2.clone(),
            named.a.clone(),
            named.b.clone(),
            named.c.clone(),
        ],
    };
    let dfg = SpreadSet {
        members: vec![
            named.e1.clone(),
            named.e2.clone(),
            named.d.clone(),
            named.f.clone(),
            named.g.clone(),
        ],
    };
    for spread in [&abc, &dfg] {
        if spread.members.len() != 5 {
            return Err(Error::AxiomsFailed("spread must have 5 members".into()));
        }
        for (i, s) in spread.members.iter().enumerate() {
            for t in spread.members.iter().skip(i + 1) {
                if crate::lattice::meet(field, s, t)?.dim() != 0 {
                    return Err(Error::AxiomsFailed("spread members overlap".into()));
                }
            }
        }
        // 5 members x 3 atoms each = all 15 one-spaces
        let mut covered = BTreeSet::new();
        for s in &spread.members {
            let si = lattice.expect_index(s)?;
            for &a in lattice.atoms() {
                if lattice.contains_idx(si, a) {
                    covered.insert(a);
                }
            }
        }
        if covered.len() != lattice.atoms().len() {
            return Err(Error::AxiomsFailed("spread does not cover".into()));
        }
    }
    let three_space_cover_ok = lattice.dim_buckets()[3].iter().all(|&t| {
        let ts = lattice.space(t);
        [&abc, &dfg].iter().all(|spread| {
            spread
                .members
                .iter()
                .any(|s| ts.contains(field, s))
        })
    });
    let change_of_basis = find_spread_iso(lattice, &abc, &dfg)?;
    Ok(SpreadReport {
        abc,
        dfg,
        three_space_cover_ok,
        change_of_basis,
    })
}

fn find_spread_iso(
    lattice: &Arc<SubspaceLattice>,
    from: &SpreadSet,
    to: &SpreadSet,
) -> Result<Option<LatticeIso>> {
    let field = lattice.field().clone();
    let to_set: BTreeSet<&Subspace> = to.members.iter().collect();
    // exhaustive over GL(4,2), first match wins
    let n = 4usize;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    fn rec(
        field: &Arc<FieldSpec>,
        rows: &mut Vec<Vec<u32>>,
        n: usize,
        from: &SpreadSet,
        to_set: &BTreeSet<&Subspace>,
    ) -> Option<Vec<Vec<u32>>> {
        if rows.len() == n {
            let t = LatticeIso::new(field.clone(), rows.clone()).ok()?;
            let ok = from
                .members
                .iter()
                .all(|s| to_set.contains(&t.apply(s).expect("dim 4")));
            return if ok { Some(rows.clone()) } else { None };
        }
        for v in 1u32..16 {
            let row: Vec<u32> = (0..n).map(|i| v >> i & 1).collect();
            let mut stacked = rows.clone();
            stacked.push(row.clone());
            if crate::lattice::mat_rank(field, n, &stacked) != rows.len() + 1 {
                continue;
            }
            rows.push(row);
            if let Some(found) = rec(field, rows, n, from, to_set) {
                return Some(found);
            }
            rows.pop();
        }
        None
    }
    Ok(rec(&field, &mut rows, n, from, &to_set)
        .map(|m| LatticeIso::new(field, m).expect("invertible by construction")))
}

/// A named isomorphism-class representative in the catalogue.
#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub matroid: QMatroid,
    /// Number of raw rank tables in the class.
    pub class_size: usize,
}

/// Constructions of the named small q-matroids over F_2 in their
/// canonical coordinates: P1 and P2 are the rank-1 matroids with loopspaces <100> and
/// <100,010>; the starred ones are their duals.
pub fn named_f2_matroid(name: &str) -> Result<QMatroid> {
    let field = FieldSpec::new(2, 1, None)?;
    let rank1_with_loopspace = |n: usize, ls: &str| -> Result<QMatroid> {
        let lattice = enumerate_lattice(field.clone(), n)?;
        let f = field.clone();
        let ls = Subspace::parse(&f, n, ls)?;
        QMatroid::from_rank_fn(lattice, move |s| u16::from(!ls.contains(&f, s)))
    };
    match name {
        "U_{0,0}" => uniform(0, 0, field),
        "U_{0,1}" => uniform(0, 1, field),
        "U_{1,1}" => uniform(1, 1, field),
        "U_{0,2}" => uniform(0, 2, field),
        "mixed" => rank1_with_loopspace(2, "01"),
        "U_{1,2}" => uniform(1, 2, field),
        "U_{2,2}" => uniform(2, 2, field),
        "U_{0,3}" => uniform(0, 3, field),
        "U_{1,3}" => uniform(1, 3, field),
        "P1" => rank1_with_loopspace(3, "100"),
        "P2" => rank1_with_loopspace(3, "100,010"),
        "P1*" => Ok(named_f2_matroid("P1")?.dual()),
        "P2*" => Ok(named_f2_matroid("P2")?.dual()),
        "U_{2,3}" => uniform(2, 3, field),
        "U_{3,3}" => uniform(3, 3, field),
        _ => Err(Error::Parse(format!("unknown catalogue name {name}"))),
    }
}

/// Canonical listing order of the dimension-3 catalogue.
pub const DIM3_NAMES: [&str; 8] = [
    "U_{0,3}", "U_{1,3}", "P1", "P2", "P2*", "P1*", "U_{2,3}", "U_{3,3}",
];

fn expected_names(n: usize) -> Option<Vec<&'static str>> {
    match n {
        0 => Some(vec!["U_{0,0}"]),
        1 => Some(vec!["U_{0,1}", "U_{1,1}"]),
        2 => Some(vec!["U_{0,2}", "mixed", "U_{1,2}", "U_{2,2}"]),
        3 => Some(DIM3_NAMES.to_vec()),
        _ => None,
    }
}

/// Enumerates ALL valid rank tables on F_q^n and partitions them into
/// isomorphism classes. Representatives are the canonically coordinatized
/// matroids when n <= 3 over F_2, otherwise the lexicographically least
/// table in the class.
pub fn generate_catalogue(
    field: Arc<FieldSpec>,
    n: usize,
    iso_cap: u64,
) -> Result<Vec<CatalogueEntry>> {
    let lattice = enumerate_lattice(field.clone(), n)?;
    let tables = enumerate_rank_tables(&lattice, 5_000_000)?;
    // group into isomorphism classes
    let mut classes: Vec<Vec<Vec<u16>>> = Vec::new();
    let mut reps: Vec<QMatroid> = Vec::new();
    for t in tables {
        let m = QMatroid::from_rank_table(lattice.clone(), t.clone())
            .expect("enumerated tables satisfy the axioms");
        let mut placed = false;
        for (ci, rep) in reps.iter().enumerate() {
            if rep.is_isomorphic_capped(&m, iso_cap)?.is_some() {
                classes[ci].push(t.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![t]);
            reps.push(m);
        }
    }
    // deterministic order: by (rank, lex-least table) of the class
    let mut order: Vec<usize> = (0..classes.len()).collect();
    for class in &mut classes {
        class.sort();
    }
    order.sort_by_key(|&i| (reps[i].rank(), classes[i][0].clone()));

    let named = if field.order() == 2 {
        expected_names(n)
    } else {
        None
    };
    let mut entries = Vec::new();
    for (pos, &ci) in order.iter().enumerate() {
        let (name, matroid) = if let Some(names) = &named {
            // match the class to its named representative
            let mut found = None;
            for cand in names {
                let nm = named_f2_matroid(cand)?;
                if nm.is_isomorphic_capped(&reps[ci], iso_cap)?.is_some() {
                    found = Some((cand.to_string(), nm));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::AxiomsFailed("generated class matches no named matroid".into())
            })?
        } else {
            let rep = QMatroid::from_rank_table(lattice.clone(), classes[ci][0].clone())
                .expect("class member");
            (format!("M{}_{}", n, pos), rep)
        };
        entries.push(CatalogueEntry {
            name,
            matroid,
            class_size: classes[ci].len(),
        });
    }
    // named entries follow the canonical listing; others keep the sort order
    if let Some(names) = &named {
        entries.sort_by_key(|e| names.iter().position(|n| *n == e.name).unwrap_or(usize::MAX));
        if entries.len() != names.len() {
            return Err(Error::AxiomsFailed(format!(
                "expected {} classes at n={n}, found {}",
                names.len(),
                entries.len()
            )));
        }
    }
    Ok(entries)
}

/// All decompositions of M as a direct sum of two catalogue classes of
/// smaller dimension, up to isomorphism of the summands.
pub fn direct_sum_decompositions(
    m: &QMatroid,
    iso_cap: u64,
) -> Result<Vec<(String, String)>> {
    let field = m.lattice().field().clone();
    let n = m.lattice().ambient_dim();
    let mut found = Vec::new();
    for n1 in 1..n {
        let n2 = n - n1;
        let cat1 = generate_catalogue(field.clone(), n1, iso_cap)?;
        let cat2 = generate_catalogue(field.clone(), n2, iso_cap)?;
        for e1 in &cat1 {
            for e2 in &cat2 {
                let s = direct_sum(&e1.matroid, &e2.matroid)?;
                if s.is_isomorphic_capped(m, iso_cap)?.is_some() {
                    found.push((e1.name.clone(), e2.name.clone()));
                }
            }
        }
    }
    Ok(found)
}

/// Seeded random valid q-matroids, for the randomized harnesses.
pub fn random_matroids(
    lattice: &Arc<SubspaceLattice>,
    count: usize,
    seed: u64,
) -> Vec<QMatroid> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = crate::matroid::random_rank_table(lattice, &mut rng);
            QMatroid::from_rank_table(lattice.clone(), t).expect("valid by construction")
        })
        .collect()
}

pub fn default_iso_cap() -> u64 {
    DEFAULT_ISO_SEARCH_CAP
}
