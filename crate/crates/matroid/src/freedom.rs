use crate::connectivity::{kappa, lambda, meet};
use crate::error::{Error, Result};
use crate::ground::{bits, popcount, subsets_of, Mask};
use crate::matroid::Matroid;
use serde::Serialize;
use std::collections::HashSet;

/// Flats that are unions of circuits, ordered by inclusion.
#[derive(Debug, Clone, Serialize)]
pub struct CyclicFlatLattice {
    pub flats: Vec<Mask>,
}

/// All flats of the matroid (closed sets), ascending by mask.
pub fn all_flats(m: &Matroid) -> Vec<Mask> {
    subsets_of(m.full_mask())
        .filter(|&x| m.closure(x) == x)
        .collect()
}

/// Cyclic flats: closed sets in which every element lies in an internal
/// circuit, i.e. e ∈ cl(F - e) for all e in F.
pub fn cyclic_flats(m: &Matroid) -> CyclicFlatLattice {
    let flats = subsets_of(m.full_mask())
        .filter(|&x| {
            m.closure(x) == x && bits(x).all(|e| m.closure(x & !(1u32 << e)) >> e & 1 == 1)
        })
        .collect();
    CyclicFlatLattice { flats }
}

/// Clones: elements lying in exactly the same cyclic flats.
pub fn are_clones(m: &Matroid, e: usize, f: usize) -> bool {
    let lattice = cyclic_flats(m);
    clones_in(&lattice, e, f)
}

fn clones_in(lattice: &CyclicFlatLattice, e: usize, f: usize) -> bool {
    lattice
        .flats
        .iter()
        .all(|&fl| (fl >> e & 1) == (fl >> f & 1))
}

/// Independent test: swapping two elements is an automorphism of the rank
/// function. Used as an oracle for the cyclic-flat clone criterion.
pub fn swap_is_automorphism(m: &Matroid, e: usize, f: usize) -> bool {
    let swap = |x: Mask| -> Mask {
        let be = x >> e & 1;
        let bf = x >> f & 1;
        (x & !(1u32 << e) & !(1u32 << f)) | (be << f) | (bf << e)
    };
    subsets_of(m.full_mask()).all(|x| m.rank(x) == m.rank(swap(x)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClonalAnalysis {
    /// Clonal classes, each sorted ascending; singletons included.
    pub classes: Vec<Vec<usize>>,
    /// freer[a][b]: every cyclic flat containing a contains b.
    pub freer: Vec<Vec<bool>>,
}

pub fn clonal_analysis(m: &Matroid) -> ClonalAnalysis {
    let lattice = cyclic_flats(m);
    let n = m.size();
    let mut freer = vec![vec![true; n]; n];
    for &fl in &lattice.flats {
        for a in 0..n {
            if fl >> a & 1 == 1 {
                for b in 0..n {
                    if fl >> b & 1 == 0 {
                        freer[a][b] = false;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for e in 0..n {
        if assigned[e] {
            continue;
        }
        let mut class = vec![e];
        assigned[e] = true;
        for f in (e + 1)..n {
            if !assigned[f] && freer[e][f] && freer[f][e] {
                class.push(f);
                assigned[f] = true;
            }
        }
        classes.push(class);
    }
    ClonalAnalysis { classes, freer }
}

/// A modular cut: an up-closed family of flats closed under intersections
/// of modular pairs. Determines a single-element extension.
#[derive(Debug, Clone, Serialize)]
pub struct ModularCut {
    pub flats: Vec<Mask>,
}

impl ModularCut {
    pub fn contains(&self, f: Mask) -> bool {
        self.flats.binary_search(&f).is_ok()
    }
}

/// Close a family of flats into the smallest modular cut containing it:
/// up-closure among flats plus intersections of modular pairs, iterated
/// to a fixed point.
pub fn modular_cut_closure(m: &Matroid, flats: &[Mask], seed: &[Mask]) -> ModularCut {
    let mut members: HashSet<Mask> = seed.iter().copied().collect();
    loop {
        let mut added = false;
        // up-closure
        let snapshot: Vec<Mask> = members.iter().copied().collect();
        for &f in flats {
            if members.contains(&f) {
                continue;
            }
            if snapshot.iter().any(|&g| g & !f == 0) {
                members.insert(f);
                added = true;
            }
        }
        // modular-pair intersections
        let snapshot: Vec<Mask> = members.iter().copied().collect();
        for (i, &f) in snapshot.iter().enumerate() {
            for &g in &snapshot[i + 1..] {
                let join = m.closure(f | g);
                if m.rank(f) + m.rank(g) == m.rank(join) + m.rank(f & g)
                    && !members.contains(&(f & g))
                {
                    members.insert(f & g);
                    added = true;
                }
            }
        }
        if !added {
            let mut v: Vec<Mask> = members.into_iter().collect();
            v.sort();
            return ModularCut { flats: v };
        }
    }
}

/// Validate that a family is a modular cut of `m`.
pub fn is_modular_cut(m: &Matroid, flats_all: &[Mask], cut: &ModularCut) -> bool {
    let set: HashSet<Mask> = cut.flats.iter().copied().collect();
    for &f in &cut.flats {
        if m.closure(f) != f {
            return false;
        }
        for &g in flats_all {
            if f & !g == 0 && !set.contains(&g) {
                return false;
            }
        }
        for &g in &cut.flats {
            let join = m.closure(f | g);
            if m.rank(f) + m.rank(g) == m.rank(join) + m.rank(f & g) && !set.contains(&(f & g)) {
                return false;
            }
        }
    }
    true
}

/// Rank function of the single-element extension of `m` by the cut: the
/// new element index is `m.size()`.
pub fn extension_rank(m: &Matroid, cut: &ModularCut, x: Mask) -> u32 {
    let n = m.size();
    let base = x & m.full_mask();
    if x >> n & 1 == 0 {
        m.rank(base)
    } else {
        let r = m.rank(base);
        if cut.contains(m.closure(base)) {
            r
        } else {
            r + 1
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedWitness {
    /// e already has an independent clone.
    ExistingClone(usize),
    /// The minimal candidate cut admits an independent-clone extension.
    ExtensionCut(ModularCut),
    /// The minimal cut is forced to contain cl({e}) or a flat avoiding e,
    /// so no admissible extension exists.
    ForcedFlat(Mask),
    Loop,
    Coloop,
}

/// Exact fixedness via single-element extensions. An element is not fixed
/// iff some extension adds an independent clone; any such extension's
/// modular cut must contain every cyclic flat through e (up-closure then
/// forces every flat spanning e) and must avoid cl({e}) and every flat
/// avoiding e. So e is not fixed iff the modular-cut closure of the cyclic
/// flats through e avoids those forbidden flats; the induced extension is
/// verified to make e and its clone independent clones.
pub fn is_fixed(m: &Matroid, e: usize) -> Result<(bool, FixedWitness)> {
    if e >= m.size() {
        return Err(Error::Domain(format!("element {e} outside ground set")));
    }
    if m.rank(1 << e) == 0 {
        return Ok((true, FixedWitness::Loop));
    }
    if m.dual().rank(1 << e) == 0 {
        return Ok((false, FixedWitness::Coloop));
    }
    // fast path: an existing independent clone
    let lattice = cyclic_flats(m);
    for f in 0..m.size() {
        if f != e && clones_in(&lattice, e, f) && m.rank(1 << e | 1 << f) == 2 {
            return Ok((false, FixedWitness::ExistingClone(f)));
        }
    }
    let flats = all_flats(m);
    let through_e: Vec<Mask> = lattice
        .flats
        .iter()
        .copied()
        .filter(|&f| f >> e & 1 == 1)
        .collect();
    let cut = modular_cut_closure(m, &flats, &through_e);
    let cl_e = m.closure(1 << e);
    for &f in &cut.flats {
        if f == cl_e || f >> e & 1 == 0 {
            return Ok((true, FixedWitness::ForcedFlat(f)));
        }
    }
    // verification: the extension really makes {e, e'} independent clones
    debug_assert!(extension_makes_clones(m, &cut, e));
    Ok((false, FixedWitness::ExtensionCut(cut)))
}

/// Whether the extension by `cut` makes e and the new element independent
/// clones (swap automorphism of the extension's rank function plus rank-2
/// on the pair).
pub fn extension_makes_clones(m: &Matroid, cut: &ModularCut, e: usize) -> bool {
    let n = m.size();
    let ep = n;
    if extension_rank(m, cut, 1 << e | 1 << ep) != 2 {
        return false;
    }
    let full: Mask = (1u32 << (n + 1)) - 1;
    let swap = |x: Mask| -> Mask {
        let be = x >> e & 1;
        let bp = x >> ep & 1;
        (x & !(1u32 << e) & !(1u32 << ep)) | (be << ep) | (bp << e)
    };
    subsets_of(full).all(|x| extension_rank(m, cut, x) == extension_rank(m, cut, swap(x)))
}

pub fn is_cofixed(m: &Matroid, e: usize) -> Result<(bool, FixedWitness)> {
    is_fixed(&m.dual(), e)
}

/// Exhaustive oracle: enumerate every modular cut extending the forced
/// cyclic-flat family and avoiding cl({e}) and flats without e, and test
/// whether any makes e and e' independent clones. Exponential in the flat
/// count; guarded for use on small fixtures.
pub fn is_fixed_exhaustive(m: &Matroid, e: usize) -> Result<bool> {
    if m.rank(1 << e) == 0 {
        return Ok(true);
    }
    if m.dual().rank(1 << e) == 0 {
        return Ok(false);
    }
    let flats = all_flats(m);
    if flats.len() > 22 {
        return Err(Error::Capacity(format!(
            "modular-cut enumeration declined: {} flats exceeds guard 22",
            flats.len()
        )));
    }
    let lattice = cyclic_flats(m);
    let through_e: Vec<Mask> = lattice
        .flats
        .iter()
        .copied()
        .filter(|&f| f >> e & 1 == 1)
        .collect();
    let base = modular_cut_closure(m, &flats, &through_e);
    let cl_e = m.closure(1 << e);
    if base.flats.iter().any(|&f| f == cl_e || f >> e & 1 == 0) {
        return Ok(true); // every admissible cut is impossible
    }
    let optional: Vec<Mask> = flats
        .iter()
        .copied()
        .filter(|&f| !base.contains(f) && f != cl_e && f >> e & 1 == 1)
        .collect();
    // enumerate subsets of optional flats, close, validate, test clones
    let mut found = false;
    for sel in subsets_of((1u32 << optional.len().min(20)) - 1) {
        let mut seed = base.flats.clone();
        for (i, &f) in optional.iter().enumerate() {
            if sel >> i & 1 == 1 {
                seed.push(f);
            }
        }
        let cut = modular_cut_closure(m, &flats, &seed);
        if cut.flats.iter().any(|&f| f == cl_e || f >> e & 1 == 0) {
            continue;
        }
        if extension_makes_clones(m, &cut, e) {
            found = true;
            break;
        }
    }
    Ok(!found)
}

#[derive(Debug, Clone, Serialize)]
pub struct FreedomReport {
    pub fixed: Vec<bool>,
    pub cofixed: Vec<bool>,
    /// Clonal class index per element.
    pub clonal_class: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

pub fn freedom_report(m: &Matroid) -> Result<FreedomReport> {
    let analysis = clonal_analysis(m);
    let n = m.size();
    let mut clonal_class = vec![0usize; n];
    for (ci, class) in analysis.classes.iter().enumerate() {
        for &e in class {
            clonal_class[e] = ci;
        }
    }
    let mut fixed = Vec::with_capacity(n);
    let mut cofixed = Vec::with_capacity(n);
    for e in 0..n {
        fixed.push(is_fixed(m, e)?.0);
        cofixed.push(is_cofixed(m, e)?.0);
    }
    Ok(FreedomReport {
        fixed,
        cofixed,
        clonal_class,
        classes: analysis.classes,
    })
}

/// Lemma-style upper bound on the freedom of e: when e lies in the closure
/// of two disjoint sets, fr(e) <= meet(X, Y). A bound of one certifies
/// that e is fixed.
pub fn freedom_bound(m: &Matroid, e: usize, x: Mask, y: Mask) -> Result<u32> {
    if x & y != 0 {
        return Err(Error::Domain("bound needs disjoint sets".into()));
    }
    if (x | y) >> e & 1 == 1 {
        return Err(Error::Domain("element must avoid both sets".into()));
    }
    if m.closure(x) >> e & 1 == 0 || m.closure(y) >> e & 1 == 0 {
        return Err(Error::Domain(
            "element must lie in the closure of both sets".into(),
        ));
    }
    let bound = meet(m, x, y);
    if bound == 0 && m.rank(1 << e) > 0 {
        return Err(Error::Domain(
            "bound zero for a non-loop is inconsistent".into(),
        ));
    }
    Ok(bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrandVerdict {
    FixedLeft,
    FixedRight,
    NotFixed,
    Inconclusive,
}

/// Fast fixedness certificate for a guts singleton on a path of
/// 3-separations (A, {x}, B): x is fixed iff some A- or B-strand (minimal
/// subset with meet one against the far side) spans x.
pub fn strand_certificate(m: &Matroid, a: Mask, x: usize, b: Mask) -> Result<StrandVerdict> {
    let e = 1u32 << x;
    if a & b != 0 || (a | b | e) != m.full_mask() || (a | b) & e != 0 {
        return Err(Error::Domain("(A, {x}, B) must partition E".into()));
    }
    if a == 0 || b == 0 {
        return Err(Error::Domain("path ends must be nonempty".into()));
    }
    if lambda(m, a) != 2 || lambda(m, a | e) != 2 {
        return Err(Error::Domain("(A, {x}, B) is not a path of 3-separations".into()));
    }
    if kappa(m, a, b)? != 2 {
        return Err(Error::Domain("kappa of the path ends must be 2".into()));
    }
    if m.closure(a) & e == 0 || m.closure(b) & e == 0 {
        return Err(Error::Domain("x is not a guts singleton".into()));
    }
    if popcount(a).max(popcount(b)) > 16 {
        return Ok(StrandVerdict::Inconclusive);
    }
    if spanned_by_strand(m, a, b, x) {
        return Ok(StrandVerdict::FixedRight);
    }
    if spanned_by_strand(m, b, a, x) {
        return Ok(StrandVerdict::FixedLeft);
    }
    Ok(StrandVerdict::NotFixed)
}

/// Whether some `far`-strand (minimal X ⊆ far with meet(near, X) = 1)
/// spans x.
fn spanned_by_strand(m: &Matroid, near: Mask, far: Mask, x: usize) -> bool {
    for s in subsets_of(far) {
        if s == 0 || meet(m, near, s) != 1 {
            continue;
        }
        // inclusion-minimal: removing any element drops the meet
        if bits(s).any(|e| meet(m, near, s & !(1u32 << e)) == 1) {
            continue;
        }
        if m.closure(s) >> x & 1 == 1 {
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
    fn u24_cyclic_flats_are_empty_and_full() {
        let m = uniform(2, 4, "e").unwrap();
        let lattice = cyclic_flats(&m);
        assert_eq!(lattice.flats, vec![0, m.full_mask()]);
    }

    #[test]
    fn u36_cyclic_flats() {
        let m = generate(&FamilySpec::FreeSwirl { n: 3 }).unwrap();
        let lattice = cyclic_flats(&m);
        assert_eq!(lattice.flats, vec![0, m.full_mask()]);
    }

    #[test]
    fn spike_pair_planes_are_cyclic() {
        let l4 = generate(&FamilySpec::FreeSpike { n: 4 }).unwrap();
        let lattice = cyclic_flats(&l4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let plane = leg_mask(i) | leg_mask(j);
                assert!(lattice.flats.contains(&plane));
            }
        }
    }

    #[test]
    fn clones_agree_with_swap_oracle() {
        for m in [
            uniform(2, 4, "e").unwrap(),
            generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap(),
            generate(&FamilySpec::Wheel { n: 4 }).unwrap(),
        ] {
            for e in 0..m.size() {
                for f in (e + 1)..m.size() {
                    assert_eq!(
                        are_clones(&m, e, f),
                        swap_is_automorphism(&m, e, f),
                        "elements {e},{f}"
                    );
                }
            }
        }
    }

    #[test]
    fn swirl_legs_are_clonal_pairs_wheel_all_singletons() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let analysis = clonal_analysis(&d4);
        assert_eq!(analysis.classes.len(), 4);
        assert!(analysis.classes.iter().all(|c| c.len() == 2));
        let w4 = generate(&FamilySpec::Wheel { n: 4 }).unwrap();
        let analysis_w = clonal_analysis(&w4);
        assert!(analysis_w.classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn u24_all_one_clonal_class() {
        let m = uniform(2, 4, "e").unwrap();
        assert_eq!(clonal_analysis(&m).classes, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn swirl_leg_elements_not_fixed() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let (fixed, witness) = is_fixed(&d4, 0).unwrap();
        assert!(!fixed);
        assert!(matches!(witness, FixedWitness::ExistingClone(1)));
    }

    #[test]
    fn uniform_elements_not_fixed_not_cofixed() {
        let m = generate(&FamilySpec::FreeSwirl { n: 3 }).unwrap();
        for e in 0..6 {
            assert!(!is_fixed(&m, e).unwrap().0);
            assert!(!is_cofixed(&m, e).unwrap().0);
        }
    }

    #[test]
    fn wheel_triangle_elements_fixed() {
        // spokes of a wheel lie in triangles and separate cyclic flats:
        // they are fixed
        let w4 = generate(&FamilySpec::Wheel { n: 4 }).unwrap();
        let (fixed, _) = is_fixed(&w4, 0).unwrap();
        assert!(fixed);
    }

    #[test]
    fn exhaustive_agrees_with_candidate_path_small() {
        for m in [uniform(2, 4, "e").unwrap(), uniform(2, 5, "e").unwrap()] {
            for e in 0..m.size() {
                let fast = is_fixed(&m, e).unwrap().0;
                let slow = is_fixed_exhaustive(&m, e).unwrap();
                assert_eq!(fast, slow, "element {e}");
            }
        }
    }

    #[test]
    fn loops_fixed_coloops_not() {
        // U_{1,2} plus via contraction: contract e0 in U_{2,3} leaves
        // parallel pair; contract twice leaves loops
        let m = uniform(2, 3, "e").unwrap().contract(0b11).unwrap();
        assert!(is_fixed(&m, 0).unwrap().0); // loop
        let free = uniform(3, 3, "e").unwrap(); // three coloops
        assert!(!is_fixed(&free, 0).unwrap().0);
    }

    #[test]
    fn freedom_bound_guts() {
        // b0 of the joints construction lies on the lines of legs 0 and 3
        let m = generate(&FamilySpec::SwirlWithJoints { n: 4 }).unwrap();
        let m9 = m
            .delete(m.ground().mask_of(&["b1", "b2", "b3"]).unwrap())
            .unwrap();
        let b0 = m9.ground().index_of("b0").unwrap();
        let leg0 = m9.ground().mask_of(&["p0", "q0"]).unwrap();
        let leg3 = m9.ground().mask_of(&["p3", "q3"]).unwrap();
        let bound = freedom_bound(&m9, b0, leg0, leg3).unwrap();
        assert_eq!(bound, 1);
        // bound one certifies fixedness
        assert!(is_fixed(&m9, b0).unwrap().0);
    }

    #[test]
    fn strand_certificate_on_guts_fixture() {
        let m = generate(&FamilySpec::SwirlWithJoints { n: 4 }).unwrap();
        let m9 = m
            .delete(m.ground().mask_of(&["b1", "b2", "b3"]).unwrap())
            .unwrap();
        let b0 = m9.ground().index_of("b0").unwrap();
        let a = m9.ground().mask_of(&["p0", "q0"]).unwrap();
        let b = m9.full_mask() & !a & !(1u32 << b0);
        let verdict = strand_certificate(&m9, a, b0, b).unwrap();
        assert!(
            matches!(verdict, StrandVerdict::FixedLeft | StrandVerdict::FixedRight),
            "expected a fixed verdict, got {verdict:?}"
        );
        assert!(is_fixed(&m9, b0).unwrap().0);
    }
}
