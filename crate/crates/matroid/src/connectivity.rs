use crate::error::{Error, Result};
use crate::ground::{bits, popcount, subsets_of, Mask};
use crate::matroid::{Matroid, MinorSpec};
use serde::Serialize;

/// The connectivity function lambda(X) = r(X) + r(E - X) - r(M).
pub fn lambda(m: &Matroid, x: Mask) -> u32 {
    m.rank(x) + m.rank(m.full_mask() & !x) - m.full_rank()
}

/// Local connectivity of disjoint sets: (meet, dual meet).
pub fn local_conn(m: &Matroid, x: Mask, y: Mask) -> Result<(u32, u32)> {
    if x & y != 0 {
        return Err(Error::Domain("local connectivity needs disjoint sets".into()));
    }
    Ok((meet(m, x, y), meet(&m.dual(), x, y)))
}

pub fn meet(m: &Matroid, x: Mask, y: Mask) -> u32 {
    m.rank(x) + m.rank(y) - m.rank(x | y)
}

/// Sets are fully skew when both meets vanish.
pub fn fully_skew(m: &Matroid, x: Mask, y: Mask) -> bool {
    meet(m, x, y) == 0 && meet(&m.dual(), x, y) == 0
}

/// kappa(X, Y): the minimum of lambda(A) over X ⊆ A ⊆ E - Y, by
/// branch-and-bound over the free elements. The running bound is
/// max(meet, dual meet) of the two grown sides, which lower-bounds every
/// completion since lambda of a partition side equals its meet with the
/// complement.
pub fn kappa(m: &Matroid, x: Mask, y: Mask) -> Result<u32> {
    if x & y != 0 || x == 0 || y == 0 {
        return Err(Error::Domain(
            "kappa needs disjoint nonempty sides".into(),
        ));
    }
    let free: Vec<usize> = bits(m.full_mask() & !(x | y)).collect();
    let dual = m.dual();
    // two cheap completions seed the bound: all free elements to either side
    let mut best = lambda(m, x).min(lambda(m, m.full_mask() & !y));
    fn go(
        m: &Matroid,
        dual: &Matroid,
        free: &[usize],
        idx: usize,
        a: Mask,
        b: Mask,
        best: &mut u32,
    ) {
        if *best == 0 {
            return;
        }
        let bound = meet(m, a, b).max(meet(dual, a, b));
        if bound >= *best {
            return;
        }
        if idx == free.len() {
            *best = (*best).min(lambda(m, a));
            return;
        }
        let e = 1u32 << free[idx];
        go(m, dual, free, idx + 1, a | e, b, best);
        go(m, dual, free, idx + 1, a, b | e, best);
    }
    go(m, &dual, &free, 0, x, y, &mut best);
    Ok(best)
}

/// Plain exhaustive kappa used as the test oracle for the branch-and-bound
/// implementation.
pub fn kappa_exhaustive(m: &Matroid, x: Mask, y: Mask) -> Result<u32> {
    if x & y != 0 || x == 0 || y == 0 {
        return Err(Error::Domain(
            "kappa needs disjoint nonempty sides".into(),
        ));
    }
    let free = m.full_mask() & !(x | y);
    Ok(subsets_of(free)
        .map(|s| lambda(m, x | s))
        .min()
        .expect("nonempty subset iteration"))
}

/// Realize Tutte linking: a partition (I, J) of E - X - Y with
/// lambda_{M/I\J}(X) = kappa(X, Y) and meet(X, I) = meet(Y, I) = 0.
/// Deterministic: least |I| first, then lexicographic.
pub fn realize_linking(m: &Matroid, x: Mask, y: Mask) -> Result<(Mask, Mask)> {
    let k = kappa(m, x, y)?;
    let z = m.full_mask() & !(x | y);
    let mut candidates: Vec<Mask> = subsets_of(z).collect();
    candidates.sort_by_key(|&i| (popcount(i), i));
    for i in candidates {
        if meet(m, x, i) != 0 || meet(m, y, i) != 0 {
            continue;
        }
        let j = z & !i;
        let minor = m.minor(MinorSpec::new(i, j)?)?;
        let xm = remap(m, &minor, x);
        if lambda(&minor, xm) == k {
            return Ok((i, j));
        }
    }
    Err(Error::Domain(
        "no linking witness found; rank oracle violates Tutte linking".into(),
    ))
}

/// Map a mask of `m` into the coordinates of a minor of `m` whose labels
/// are a subsequence of m's labels.
pub fn remap(m: &Matroid, minor: &Matroid, x: Mask) -> Mask {
    let mut out = 0;
    for (i, l) in minor.ground().labels().iter().enumerate() {
        let orig = m.ground().index_of(l).expect("minor label in parent");
        if x >> orig & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// Full closure: the least fixed point of alternating closure and
/// coclosure containing X.
pub fn fcl(m: &Matroid, x: Mask) -> Mask {
    let dual = m.dual();
    let mut cur = x;
    loop {
        let next = dual.closure(m.closure(cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// A 3-separating side is sequential when the full closure of its
/// complement is everything.
pub fn is_sequential_side(m: &Matroid, x: Mask) -> bool {
    fcl(m, m.full_mask() & !x) == m.full_mask()
}

/// Check k-connectivity by definition: no (k-1)-or-lower separations.
pub fn is_3connected(m: &Matroid) -> bool {
    find_small_separation(m).is_none()
}

/// A violating side with lambda < 2 (connectivity or 2-separation), if any.
pub fn find_small_separation(m: &Matroid) -> Option<(Mask, u32)> {
    let full = m.full_mask();
    for x in 1..full {
        let l = lambda(m, x);
        let (a, b) = (popcount(x), popcount(full & !x));
        if l == 0 && a >= 1 && b >= 1 {
            return Some((x, 0));
        }
        if l <= 1 && a >= 2 && b >= 2 {
            return Some((x, l));
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationRecord {
    /// Lexicographically least side of the unordered pair.
    pub side: Mask,
    pub lambda: u32,
    pub sequential: bool,
    pub fcl_side: Mask,
    pub fcl_coside: Mask,
}

/// All exact 3-separations with both sides of size at least 3, one record
/// per unordered pair, least side stored; each tagged sequential when
/// either side is sequential.
pub fn enumerate_3seps(m: &Matroid) -> Result<Vec<SeparationRecord>> {
    if let Some((side, l)) = find_small_separation(m) {
        return Err(Error::NotThreeConnected(m.ground().labels_of(side), l));
    }
    let full = m.full_mask();
    let mut out = Vec::new();
    for x in 1..full {
        let co = full & !x;
        if x > co {
            continue; // one record per unordered pair
        }
        if popcount(x) < 3 || popcount(co) < 3 {
            continue;
        }
        if lambda(m, x) != 2 {
            continue;
        }
        let fs = fcl(m, x);
        let fc = fcl(m, co);
        out.push(SeparationRecord {
            side: x,
            lambda: 2,
            sequential: fs == full || fc == full,
            fcl_side: fs,
            fcl_coside: fc,
        });
    }
    Ok(out)
}

/// Equivalence of exactly 3-separating partitions: in the sequential case
/// both full closures must match under some ordering, in the
/// non-sequential case one side's full closure match suffices.
pub fn seps_equivalent(m: &Matroid, a: Mask, b: Mask) -> Result<bool> {
    let full = m.full_mask();
    for s in [a, b] {
        if lambda(m, s) != 2 {
            return Err(Error::Domain(
                "separation equivalence needs exactly 3-separating sides".into(),
            ));
        }
    }
    let (a1, a2) = (a, full & !a);
    let (b1, b2) = (b, full & !b);
    let sequential = fcl(m, a1) == full || fcl(m, a2) == full;
    let f = |x: Mask| fcl(m, x);
    if sequential {
        Ok((f(a1) == f(b1) && f(a2) == f(b2)) || (f(a1) == f(b2) && f(a2) == f(b1)))
    } else {
        Ok(f(a1) == f(b1) || f(a1) == f(b2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SideClass {
    Guts,
    Coguts,
}

/// Classify x against the partition (A, {x}, B) with
/// lambda(A) = lambda(A + x): guts iff x in cl(A) ∩ cl(B), coguts iff
/// x in cl*(A) ∩ cl*(B).
pub fn side_classify(m: &Matroid, a: Mask, x: usize) -> Result<SideClass> {
    let e = 1u32 << x;
    if a & e != 0 {
        return Err(Error::Domain("element lies inside the side".into()));
    }
    let b = m.full_mask() & !(a | e);
    if lambda(m, a) != lambda(m, a | e) {
        return Err(Error::Domain(
            "element changes the side's connectivity".into(),
        ));
    }
    let in_guts = m.closure(a) & e != 0 && m.closure(b) & e != 0;
    let d = m.dual();
    let in_coguts = d.closure(a) & e != 0 && d.closure(b) & e != 0;
    match (in_guts, in_coguts) {
        (true, false) => Ok(SideClass::Guts),
        (false, true) => Ok(SideClass::Coguts),
        _ => Err(Error::Domain(
            "element is neither cleanly guts nor coguts".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum BridgeStatus {
    /// The separation extends to one of M with the same lambda; the witness
    /// partition side containing A is given.
    Induced { extended_side: Mask },
    Bridged,
}

/// Whether the exactly k-separating partition (A, E(N)-A) of the minor
/// N = M(spec) is induced in M or bridged.
pub fn bridging_status(m: &Matroid, spec: MinorSpec, a: Mask) -> Result<BridgeStatus> {
    let n = m.minor(spec)?;
    let b = n.full_mask() & !a;
    if a == 0 || b == 0 {
        return Err(Error::Domain("separation sides must be nonempty".into()));
    }
    let ln = lambda(&n, a);
    // lift A and B to parent coordinates
    let am = lift(&n, m, a);
    let bm = lift(&n, m, b);
    let k = kappa(m, am, bm)?;
    if k == ln {
        // find the realizing side deterministically
        let free = m.full_mask() & !(am | bm);
        let mut sides: Vec<Mask> = subsets_of(free).map(|s| am | s).collect();
        sides.sort_by_key(|&s| (popcount(s), s));
        for s in sides {
            if lambda(m, s) == ln {
                return Ok(BridgeStatus::Induced { extended_side: s });
            }
        }
        unreachable!("kappa found a minimum but no side realizes it");
    }
    Ok(BridgeStatus::Bridged)
}

/// Lift a minor-coordinate mask into parent coordinates by label.
pub fn lift(minor: &Matroid, parent: &Matroid, x: Mask) -> Mask {
    let mut out = 0;
    for i in bits(x) {
        let l = minor.ground().label(i);
        let j = parent
            .ground()
            .index_of(l)
            .expect("minor label present in parent");
        out |= 1 << j;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgingSequence {
    /// Removal elements in sequence order, as parent indices.
    pub order: Vec<usize>,
    /// Parallel to `order`: true = delete element, false = contract.
    pub deletes: Vec<bool>,
}

/// Search for a bridging sequence for the exact k-separation (A, E(N)-A)
/// of N = M(spec): an ordering of E(M)-E(N) satisfying
///   (i) the delete set is coindependent and the contract set independent,
///       and the roles alternate along the ordering (the delete set is
///       exactly the even- or exactly the odd-indexed elements),
///   (ii) each split of the ordering has lambda = k,
///   (iii/iv) removing the pivot element drops it back to k-1.
/// Returns the lexicographically least valid ordering.
pub fn bridging_sequence(
    m: &Matroid,
    spec: MinorSpec,
    a: Mask,
) -> Result<Option<BridgingSequence>> {
    let n = m.minor(spec)?;
    let removed: Vec<usize> = bits(spec.contract | spec.delete).collect();
    if removed.len() > 8 {
        return Err(Error::Capacity(
            "bridging sequence search capped at 8 removed elements".into(),
        ));
    }
    let k = lambda(&n, a) + 1; // exact k-separation of N
    if popcount(a) < k || popcount(n.full_mask() & !a) < k {
        return Err(Error::Domain(
            "sides too small for an exact k-separation".into(),
        ));
    }
    // role of each removed element is fixed by the minor spec
    let is_delete = |e: usize| spec.delete >> e & 1 == 1;
    // condition (i)
    if m.rank(spec.contract) != popcount(spec.contract)
        || m.dual().rank(spec.delete) != popcount(spec.delete)
    {
        return Ok(None);
    }
    let x1 = lift(&n, m, a);

    let mut order: Vec<usize> = Vec::new();
    let mut used = vec![false; removed.len()];
    fn search(
        m: &Matroid,
        removed: &[usize],
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        x1: Mask,
        k: u32,
        is_delete: &dyn Fn(usize) -> bool,
    ) -> bool {
        if order.len() == removed.len() {
            return true;
        }
        for idx in 0..removed.len() {
            if used[idx] {
                continue;
            }
            let v = removed[idx];
            // the delete elements sit at exactly the even or exactly the
            // odd positions, so roles alternate along the ordering
            let pos = order.len();
            if pos >= 1 {
                let first_delete = is_delete(order[0]);
                let want_delete = if pos % 2 == 0 {
                    first_delete
                } else {
                    !first_delete
                };
                if is_delete(v) != want_delete {
                    continue;
                }
            }
            let mut pre: Mask = 0;
            for &p in order.iter() {
                pre |= 1 << p;
            }
            // condition (ii) at this split
            if lambda(m, x1 | pre | 1 << v) != k {
                continue;
            }
            // conditions (iii)/(iv): without the pivot the split drops back
            // to an exact (k-1)-separation
            let ok = if is_delete(v) {
                m.delete(1 << v).map_or(false, |md| {
                    lambda(&md, remap(m, &md, x1 | pre)) == k - 1
                })
            } else {
                m.contract(1 << v).map_or(false, |mc| {
                    lambda(&mc, remap(m, &mc, x1 | pre)) == k - 1
                })
            };
            if !ok {
                continue;
            }
            used[idx] = true;
            order.push(v);
            if search(m, removed, used, order, x1, k, is_delete) {
                return true;
            }
            order.pop();
            used[idx] = false;
        }
        false
    }
    let found = search(m, &removed, &mut used, &mut order, x1, k, &|e| {
        is_delete(e)
    });
    if !found {
        return Ok(None);
    }
    let deletes = order.iter().map(|&v| is_delete(v)).collect();
    Ok(Some(BridgingSequence { order, deletes }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathKind {
    Path3,
    Path2,
    Strict2,
}

#[derive(Debug, Clone)]
pub struct SepPath {
    pub kind: PathKind,
    pub steps: Vec<Mask>,
    /// Optional declared clonal pairs per internal step (step index, pair).
    pub strong_pairs: Vec<(usize, Mask)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub valid: bool,
    pub failures: Vec<String>,
    /// Maximal flowers displayed by the path, as petal mask lists.
    pub displayed_flowers: Vec<Vec<Mask>>,
}

/// Verify the defining conditions of a path of separations.
pub fn verify_path(m: &Matroid, path: &SepPath) -> Result<PathReport> {
    let mut failures = Vec::new();
    let full = m.full_mask();
    let union: Mask = path.steps.iter().fold(0, |a, &s| a | s);
    let overlap = path
        .steps
        .iter()
        .enumerate()
        .any(|(i, &s)| path.steps.iter().skip(i + 1).any(|&t| s & t != 0));
    if union != full || overlap {
        return Err(Error::Structural(
            "steps must partition the ground set".into(),
        ));
    }
    let l = path.steps.len();
    if l < 2 {
        return Err(Error::Structural("a path needs at least two steps".into()));
    }
    if path.steps[0] == 0 || path.steps[l - 1] == 0 {
        failures.push("end steps must be nonempty".into());
    }
    match path.kind {
        PathKind::Path3 => {
            let mut prefix: Mask = 0;
            for (i, &s) in path.steps.iter().enumerate().take(l - 1) {
                prefix |= s;
                if lambda(m, prefix) != 2 {
                    failures.push(format!(
                        "lambda of prefix through step {i} is {} (want 2)",
                        lambda(m, prefix)
                    ));
                }
            }
            if path.steps[0] != 0 && path.steps[l - 1] != 0 {
                let k = kappa(m, path.steps[0], path.steps[l - 1])?;
                if k != 2 {
                    failures.push(format!("kappa of end steps is {k} (want 2)"));
                }
            }
        }
        PathKind::Path2 | PathKind::Strict2 => {
            let mut prefix: Mask = 0;
            for (i, &s) in path.steps.iter().enumerate().take(l - 1) {
                prefix |= s;
                if lambda(m, prefix) != 1 {
                    failures.push(format!(
                        "lambda of prefix through step {i} is {} (want 1)",
                        lambda(m, prefix)
                    ));
                }
            }
            if path.kind == PathKind::Strict2 {
                for (i, &s) in path.steps.iter().enumerate().skip(1).take(l.saturating_sub(2)) {
                    if s == 0 {
                        failures.push(format!("strict path has empty internal step {i}"));
                    } else if lambda(m, s) != 2 {
                        failures.push(format!(
                            "internal step {i} has lambda {} (want 2)",
                            lambda(m, s)
                        ));
                    }
                }
                // condition (ii): every 2-separation that is not P-relevant
                // has a side inside a step
                for x in 1..full {
                    let y = full & !x;
                    if popcount(x) < 2 || popcount(y) < 2 || lambda(m, x) > 1 {
                        continue;
                    }
                    if is_path_relevant(&path.steps, x) || is_path_relevant(&path.steps, y) {
                        continue;
                    }
                    if !path
                        .steps
                        .iter()
                        .any(|&s| x & !s == 0 || y & !s == 0)
                    {
                        failures.push(format!(
                            "2-separation {:?} is neither path-relevant nor inside a step",
                            m.ground().labels_of(x)
                        ));
                    }
                }
            }
        }
    }
    // declared strong clonal pairs
    for &(i, pair) in &path.strong_pairs {
        if i >= l || pair & !path.steps[i] != 0 {
            failures.push(format!("declared pair at step {i} is not inside the step"));
            continue;
        }
        if popcount(pair) != 2 {
            failures.push(format!("declared pair at step {i} is not a pair"));
            continue;
        }
        let mut els = bits(pair);
        let (e, fel) = (els.next().unwrap(), els.next().unwrap());
        if !crate::freedom::are_clones(m, e, fel) {
            failures.push(format!("declared pair at step {i} is not clonal"));
        }
        let rest = full & !path.steps[i];
        let want = 2;
        match kappa(m, pair, rest) {
            Ok(k) if k == want => {}
            Ok(k) => failures.push(format!(
                "declared pair at step {i} has kappa {k} (want {want})"
            )),
            Err(e) => failures.push(format!("kappa failed at step {i}: {e}")),
        }
    }
    // displayed flowers (shape per the maximal-displayed-flower lemma):
    // contiguous runs of steps with the two tails as end petals
    let mut displayed = Vec::new();
    if path.kind == PathKind::Path3 {
        for i in 0..l {
            for j in i..l {
                let mut petals: Vec<Mask> = Vec::new();
                let before: Mask = path.steps[..i].iter().fold(0, |a, &s| a | s);
                if before != 0 {
                    petals.push(before);
                }
                for &s in &path.steps[i..=j] {
                    if s != 0 {
                        petals.push(s);
                    }
                }
                let after: Mask = path.steps[j + 1..].iter().fold(0, |a, &s| a | s);
                if after != 0 {
                    petals.push(after);
                }
                if petals.len() < 3 {
                    continue;
                }
                if crate::flowers::is_flower(m, &petals) {
                    displayed.push(petals);
                }
            }
        }
        displayed.sort();
        displayed.dedup();
        // keep only maximal ones (not refined by another displayed flower)
        let coarser = |a: &Vec<Mask>, b: &Vec<Mask>| {
            // true if every petal of a is a union of petals of b and a != b
            a != b && a.iter().all(|&p| {
                let covered: Mask = b.iter().filter(|&&q| q & p == q).fold(0, |x, &q| x | q);
                covered == p
            })
        };
        let all = displayed.clone();
        displayed.retain(|f| !all.iter().any(|g| coarser(f, g)));
    }
    Ok(PathReport {
        valid: failures.is_empty(),
        failures,
        displayed_flowers: displayed,
    })
}

fn is_path_relevant(steps: &[Mask], x: Mask) -> bool {
    // x = P_0 ∪ ... ∪ P_{j-1} ∪ P'_j for some j >= 1 and P'_j ⊆ P_j
    let mut prefix: Mask = 0;
    for j in 1..steps.len() {
        prefix |= steps[j - 1];
        if x & prefix == prefix && x & !(prefix | steps[j]) == 0 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, leg_mask, FamilySpec};
    use crate::matroid::uniform;

    #[test]
    fn lambda_symmetric_and_empty() {
        let m = uniform(2, 4, "e").unwrap();
        assert_eq!(lambda(&m, 0), 0);
        for x in subsets_of(m.full_mask()) {
            assert_eq!(lambda(&m, x), lambda(&m, m.full_mask() & !x));
        }
    }

    #[test]
    fn swirl_quad_lambda_is_two() {
        let d5 = generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap();
        let pair = leg_mask(0) | leg_mask(1);
        assert_eq!(lambda(&d5, pair), 2);
    }

    #[test]
    fn swirl_petal_meets() {
        let d5 = generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap();
        // consecutive legs: meet 1
        let (p, _) = local_conn(&d5, leg_mask(0), leg_mask(1)).unwrap();
        assert_eq!(p, 1);
        // non-consecutive: fully skew
        assert!(fully_skew(&d5, leg_mask(0), leg_mask(2)));
        // empty side
        assert_eq!(local_conn(&d5, 0, leg_mask(1)).unwrap(), (0, 0));
    }

    #[test]
    fn lambda_meet_identity_exhaustive_u36() {
        let m = generate(&FamilySpec::FreeSwirl { n: 3 }).unwrap();
        let full = m.full_mask();
        for x in subsets_of(full) {
            for y in subsets_of(full & !x) {
                let (p, pd) = local_conn(&m, x, y).unwrap();
                assert_eq!(lambda(&m, x | y) + p + pd, lambda(&m, x) + lambda(&m, y));
            }
        }
    }

    #[test]
    fn kappa_matches_exhaustive_oracle() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let full = d4.full_mask();
        let mut checked = 0;
        for x in 1..64u32 {
            let y = (full & !x) & 0b11110000;
            if y == 0 || x & y != 0 {
                continue;
            }
            assert_eq!(
                kappa(&d4, x, y).unwrap(),
                kappa_exhaustive(&d4, x, y).unwrap()
            );
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn kappa_of_full_partition_is_lambda() {
        let m = uniform(3, 6, "e").unwrap();
        let x = 0b000111;
        let y = m.full_mask() & !x;
        assert_eq!(kappa(&m, x, y).unwrap(), lambda(&m, x));
    }

    #[test]
    fn fcl_fixed_points_and_wheel_triangle() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        // legs are fully closed
        assert_eq!(fcl(&d4, leg_mask(0)), leg_mask(0));
        // wheels are fans: the full closure of any triangle is everything
        let w4 = generate(&FamilySpec::Wheel { n: 4 }).unwrap();
        let tri = w4
            .circuits()
            .into_iter()
            .find(|&c| popcount(c) == 3)
            .unwrap();
        assert_eq!(fcl(&w4, tri), w4.full_mask());
    }

    #[test]
    fn three_separations_of_swirls_are_consecutive_leg_unions() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let seps = enumerate_3seps(&d4).unwrap();
        // consecutive pairs only (both sides >= 3 forces 2 vs 2 legs)
        for rec in &seps {
            let x = rec.side;
            let is_leg_union = (0..4).any(|i| x == leg_mask(i) | leg_mask((i + 1) % 4));
            assert!(is_leg_union, "side {:?}", d4.ground().labels_of(x));
            assert!(!rec.sequential);
        }
        assert_eq!(seps.len(), 2);
    }

    #[test]
    fn wheel_3seps_all_sequential() {
        let w5 = generate(&FamilySpec::Wheel { n: 5 }).unwrap();
        for rec in enumerate_3seps(&w5).unwrap() {
            assert!(rec.sequential);
        }
    }

    #[test]
    fn u24_has_no_3seps_and_is_3connected() {
        let m = uniform(2, 4, "e").unwrap();
        assert!(is_3connected(&m));
        assert!(enumerate_3seps(&m).unwrap().is_empty());
    }

    #[test]
    fn not_3connected_reports_separation() {
        let m = uniform(1, 4, "e").unwrap(); // lots of parallel elements
        assert!(!is_3connected(&m));
        assert!(enumerate_3seps(&m).is_err());
    }

    #[test]
    fn seps_equivalent_reflexive() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let pair = leg_mask(0) | leg_mask(1);
        assert!(seps_equivalent(&d4, pair, pair).unwrap());
        let other = leg_mask(1) | leg_mask(2);
        assert!(!seps_equivalent(&d4, pair, other).unwrap());
    }

    #[test]
    fn realize_linking_full_partition_trivial() {
        let m = uniform(3, 6, "e").unwrap();
        let x = 0b000111;
        let y = m.full_mask() & !x;
        let (i, j) = realize_linking(&m, x, y).unwrap();
        assert_eq!((i, j), (0, 0));
    }

    #[test]
    fn realize_linking_post_verifies() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let x = leg_mask(0);
        let y = d4.full_mask() & !(leg_mask(0) | leg_mask(1));
        let k = kappa(&d4, x, y).unwrap();
        let (i, j) = realize_linking(&d4, x, y).unwrap();
        assert_eq!(i | j, leg_mask(1));
        assert_eq!(meet(&d4, x, i), 0);
        assert_eq!(meet(&d4, y, i), 0);
        let minor = d4.minor(MinorSpec::new(i, j).unwrap()).unwrap();
        assert_eq!(lambda(&minor, remap(&d4, &minor, x)), k);
    }

    #[test]
    fn guts_and_coguts_classification() {
        // swirl with joints: b0 lies in cl(P0) and cl(P_{n-1} ∪ rest)
        let m = generate(&FamilySpec::SwirlWithJoints { n: 4 }).unwrap();
        // delete all joints except b0 -> 9-element matroid
        let b_others = m.ground().mask_of(&["b1", "b2", "b3"]).unwrap();
        let m9 = m.delete(b_others).unwrap();
        let a = m9.ground().mask_of(&["p0", "q0"]).unwrap();
        let b0 = m9.ground().index_of("b0").unwrap();
        assert_eq!(
            side_classify(&m9, a, b0).unwrap(),
            SideClass::Guts
        );
        // a coloop adjoined is a coguts element of any side pair
        let d = m9.dual();
        let a_d = d.ground().mask_of(&["p0", "q0"]).unwrap();
        assert_eq!(side_classify(&d, a_d, b0).unwrap(), SideClass::Coguts);
    }

    #[test]
    fn side_classify_rejects_lambda_change() {
        let m = uniform(3, 6, "e").unwrap();
        // adding e5 to {e0} changes lambda (1 -> 2)
        assert!(side_classify(&m, 0b000001, 5).is_err());
    }

    #[test]
    fn path3_verifies_on_swirl_legs() {
        let d5 = generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap();
        let steps: Vec<Mask> = (0..5).map(leg_mask).collect();
        let pairs: Vec<(usize, Mask)> = (1..4).map(|i| (i, leg_mask(i))).collect();
        let path = SepPath {
            kind: PathKind::Path3,
            steps,
            strong_pairs: pairs,
        };
        let rep = verify_path(&d5, &path).unwrap();
        assert!(rep.valid, "failures: {:?}", rep.failures);
        assert!(!rep.displayed_flowers.is_empty());
    }

    #[test]
    fn path3_rejects_bad_prefix() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let steps = vec![
            leg_mask(0) | leg_mask(2),
            leg_mask(1),
            leg_mask(3),
        ];
        let path = SepPath {
            kind: PathKind::Path3,
            steps,
            strong_pairs: vec![],
        };
        let rep = verify_path(&d4, &path).unwrap();
        assert!(!rep.valid);
    }

    #[test]
    fn strict2_path_from_swirl_with_petal_deleted() {
        // delete a coclosed petal of a swirl: the remainder carries a
        // strict path of 2-separations
        let d5 = generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap();
        let rest = d5.delete(leg_mask(0)).unwrap();
        let steps: Vec<Mask> = (1..5)
            .map(|i| {
                rest.ground()
                    .mask_of(&[format!("p{i}"), format!("q{i}")])
                    .unwrap()
            })
            .collect();
        let path = SepPath {
            kind: PathKind::Strict2,
            steps,
            strong_pairs: vec![],
        };
        let rep = verify_path(&rest, &path).unwrap();
        assert!(rep.valid, "failures: {:?}", rep.failures);
    }
}
