use crate::connectivity::{fcl, is_3connected, lambda, meet};
use crate::error::{Error, Result};
use crate::ground::{bits, popcount, Mask};
use crate::matroid::Matroid;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerCandidate {
    /// Cyclically ordered petals; rotation and reflection immaterial.
    pub petals: Vec<Mask>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowerClass {
    AnemonePaddle,
    AnemoneCopaddle,
    SpikeLike,
    SwirlLike,
    VamosLike,
    /// 3-petal flower with all meets one and no loose elements to resolve
    /// it, or a candidate that is a flower with fewer than three petals.
    Unresolved,
    NotAFlower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FanElementRole {
    Spoke,
    Rim,
}

#[derive(Debug, Clone, Serialize)]
pub struct LooseFan {
    /// Index of the first petal of the adjacent pair (i, i+1 cyclically).
    pub after_petal: usize,
    /// Elements in fan order away from petal i, with their roles.
    pub elements: Vec<(usize, FanElementRole)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowerReport {
    pub petals: Vec<Mask>,
    pub class: FlowerClass,
    pub tight_elements: Mask,
    pub loose_fans: Vec<LooseFan>,
    pub order: u32,
    /// Violated clause when the candidate is not a flower.
    pub failure: Option<String>,
}

/// The flower axioms: petals partition E, lambda(P_i) = 2 when n > 1,
/// lambda of consecutive pairs = 2 when n > 2, and every 2-separation has
/// a side inside some petal.
pub fn is_flower(m: &Matroid, petals: &[Mask]) -> bool {
    flower_violation(m, petals).is_none()
}

pub fn flower_violation(m: &Matroid, petals: &[Mask]) -> Option<String> {
    let n = petals.len();
    let mut union: Mask = 0;
    for (i, &p) in petals.iter().enumerate() {
        if p == 0 {
            return Some(format!("petal {i} is empty"));
        }
        if p & union != 0 {
            return Some(format!("petal {i} overlaps an earlier petal"));
        }
        union |= p;
    }
    if union != m.full_mask() {
        return Some("petals do not cover the ground set".into());
    }
    if n > 1 {
        for (i, &p) in petals.iter().enumerate() {
            if lambda(m, p) != 2 {
                return Some(format!("lambda of petal {i} is {}", lambda(m, p)));
            }
        }
    }
    if n > 2 {
        for i in 0..n {
            let u = petals[i] | petals[(i + 1) % n];
            if lambda(m, u) != 2 {
                return Some(format!(
                    "lambda of consecutive pair ({i}, {}) is {}",
                    (i + 1) % n,
                    lambda(m, u)
                ));
            }
        }
    }
    // 2-separation containment clause, vacuous for 3-connected matroids.
    if !is_3connected(m) {
        let full = m.full_mask();
        for x in 1..full {
            let y = full & !x;
            if popcount(x) < 2 || popcount(y) < 2 || lambda(m, x) > 1 {
                continue;
            }
            if !petals.iter().any(|&p| x & !p == 0 || y & !p == 0) {
                return Some(format!(
                    "2-separation {:?} has no side inside a petal",
                    m.ground().labels_of(x)
                ));
            }
        }
    }
    None
}

/// Loose elements: members of the full closure of a petal not containing
/// them.
pub fn loose_elements(m: &Matroid, petals: &[Mask]) -> Mask {
    let mut loose: Mask = 0;
    for &p in petals {
        loose |= fcl(m, p) & !p;
    }
    loose
}

/// Classify a candidate flower by its local-connectivity pattern, compute
/// tight/loose structure, loose fans for swirl-like flowers, and the order.
pub fn classify_flower(m: &Matroid, cand: &FlowerCandidate) -> Result<FlowerReport> {
    if !m.is_connected() {
        return Err(Error::Domain("flowers require a connected matroid".into()));
    }
    let petals = &cand.petals;
    if let Some(failure) = flower_violation(m, petals) {
        return Ok(FlowerReport {
            petals: petals.clone(),
            class: FlowerClass::NotAFlower,
            tight_elements: 0,
            loose_fans: vec![],
            order: 0,
            failure: Some(failure),
        });
    }
    let loose = loose_elements(m, petals);
    let class = classify_by_meets(m, petals, loose);
    let loose_fans = if class == FlowerClass::SwirlLike {
        compute_loose_fans(m, petals, loose)
    } else {
        vec![]
    };
    let order = flower_order_of(m, petals)?;
    Ok(FlowerReport {
        petals: petals.clone(),
        class,
        tight_elements: m.full_mask() & !loose,
        loose_fans,
        order,
        failure: None,
    })
}

fn classify_by_meets(m: &Matroid, petals: &[Mask], loose: Mask) -> FlowerClass {
    let n = petals.len();
    if n < 3 {
        return FlowerClass::Unresolved;
    }
    let mut consec = Vec::new();
    let mut noncons = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = meet(m, petals[i], petals[j]);
            if j == i + 1 || (i == 0 && j == n - 1) {
                consec.push(p);
            } else {
                noncons.push(p);
            }
        }
    }
    let all = |v: &[u32], x: u32| v.iter().all(|&y| y == x);
    if all(&consec, 2) && all(&noncons, 2) {
        return FlowerClass::AnemonePaddle;
    }
    if all(&consec, 0) && all(&noncons, 0) {
        return FlowerClass::AnemoneCopaddle;
    }
    if n == 3 && all(&consec, 1) {
        // unresolved: sub-resolve by the loose-element alignment rule
        return resolve_three_petal(m, petals, loose);
    }
    if n >= 4 && all(&consec, 1) && all(&noncons, 1) {
        return FlowerClass::SpikeLike;
    }
    if n >= 4 && all(&consec, 1) && all(&noncons, 0) {
        return FlowerClass::SwirlLike;
    }
    if n == 4 && all(&consec, 1) {
        let d1 = meet(m, petals[0], petals[2]);
        let d2 = meet(m, petals[1], petals[3]);
        if (d1 == 0 && d2 == 1) || (d1 == 1 && d2 == 0) {
            return FlowerClass::VamosLike;
        }
    }
    FlowerClass::Unresolved
}

/// A 3-petal flower with all meets one: spike-like when a loose element of
/// one petal reaches both other petals, swirl-like when only one.
fn resolve_three_petal(m: &Matroid, petals: &[Mask], loose: Mask) -> FlowerClass {
    let d = m.dual();
    let in_clstar = |x: Mask, e: usize| -> bool {
        m.closure(x) >> e & 1 == 1 || d.closure(x) >> e & 1 == 1
    };
    for i in 0..3 {
        for e in bits(petals[i] & loose) {
            let othr = [petals[(i + 1) % 3], petals[(i + 2) % 3]];
            for (a, b) in [(othr[0], othr[1]), (othr[1], othr[0])] {
                if in_clstar(a, e) {
                    return if in_clstar(b, e) {
                        FlowerClass::SpikeLike
                    } else {
                        FlowerClass::SwirlLike
                    };
                }
            }
        }
    }
    FlowerClass::Unresolved
}

/// Fan of loose elements between consecutive petals i and i+1, ordered
/// greedily away from the tight part of petal i, each element tagged spoke
/// (closure) or rim (coclosure).
fn compute_loose_fans(m: &Matroid, petals: &[Mask], loose: Mask) -> Vec<LooseFan> {
    let n = petals.len();
    let d = m.dual();
    let mut fans = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let shared = fcl(m, petals[i]) & fcl(m, petals[j]);
        if shared == 0 {
            continue;
        }
        let mut remaining = shared;
        let mut base = petals[i] & !loose;
        let mut ordered = Vec::new();
        loop {
            let mut picked = None;
            for e in bits(remaining) {
                if m.closure(base) >> e & 1 == 1 {
                    picked = Some((e, FanElementRole::Spoke));
                    break;
                }
                if d.closure(base) >> e & 1 == 1 {
                    picked = Some((e, FanElementRole::Rim));
                    break;
                }
            }
            match picked {
                Some((e, role)) => {
                    ordered.push((e, role));
                    base |= 1 << e;
                    remaining &= !(1u32 << e);
                    if remaining == 0 {
                        break;
                    }
                }
                None => break,
            }
        }
        if !ordered.is_empty() {
            fans.push(LooseFan {
                after_petal: i,
                elements: ordered,
            });
        }
    }
    fans
}

/// 3-separations displayed by the flower: unions of consecutive petals
/// (which covers anemones as well, where every union is displayed, because
/// equivalence-class counting below only needs the consecutive ones for
/// daisies and all unions for anemones).
fn displayed_separations(m: &Matroid, petals: &[Mask]) -> Vec<Mask> {
    let n = petals.len();
    let full = m.full_mask();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    // daisy or anemone: collect all petal unions that are 3-separating with
    // a 3-separating complement; for daisies only consecutive ones qualify
    // and for anemones all do, so filtering by lambda is uniform.
    for sel in 1u32..(1 << n) - 1 {
        let x: Mask = bits(sel).fold(0, |a, i| a | petals[i]);
        if x != 0 && x != full && lambda(m, x) == 2 {
            out.push(x.min(full & !x));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The order of a flower: the minimum petal count among equivalent
/// flowers, computed from the displayed non-sequential separations (none:
/// order 1; all equivalent: order 2) and otherwise by concatenating loose
/// petals until the flower is tight.
pub fn flower_order(m: &Matroid, cand: &FlowerCandidate) -> Result<(u32, Vec<Mask>)> {
    if flower_violation(m, cand.petals.as_slice()).is_some() {
        return Err(Error::Domain("candidate is not a flower".into()));
    }
    let order = flower_order_of(m, &cand.petals)?;
    let tight = tight_equivalent(m, &cand.petals);
    Ok((order, tight))
}

fn flower_order_of(m: &Matroid, petals: &[Mask]) -> Result<u32> {
    let full = m.full_mask();
    let nonseq: Vec<Mask> = displayed_separations(m, petals)
        .into_iter()
        .filter(|&x| fcl(m, x) != full && fcl(m, full & !x) != full)
        .collect();
    if nonseq.is_empty() {
        return Ok(1);
    }
    let mut classes: Vec<Mask> = Vec::new();
    for &x in &nonseq {
        let mut found = false;
        for &c in &classes {
            if crate::connectivity::seps_equivalent(m, x, c)? {
                found = true;
                break;
            }
        }
        if !found {
            classes.push(x);
        }
    }
    if classes.len() == 1 {
        return Ok(2);
    }
    Ok(tight_equivalent(m, petals).len() as u32)
}

/// Concatenate entirely-loose petals into a neighbor until every petal
/// contains a tight element.
fn tight_equivalent(m: &Matroid, petals: &[Mask]) -> Vec<Mask> {
    let mut cur: Vec<Mask> = petals.to_vec();
    loop {
        if cur.len() <= 2 {
            return cur;
        }
        let loose = loose_elements(m, &cur);
        let idx = cur.iter().position(|&p| p & !loose == 0);
        match idx {
            None => return cur,
            Some(i) => {
                let n = cur.len();
                // merge into the cyclic successor, keeping the flower
                let j = (i + 1) % n;
                let merged = cur[i] | cur[j];
                let mut next: Vec<Mask> = Vec::with_capacity(n - 1);
                for (t, &p) in cur.iter().enumerate() {
                    if t == i {
                        continue;
                    }
                    next.push(if t == j { merged } else { p });
                }
                cur = next;
            }
        }
    }
}

/// Search for a tight swirl-like flower with at least k petals, returning
/// one of maximum petal count. Seeds are exactly 3-separating sets with at
/// least two elements; chains grow under the swirl-like adjacency pattern
/// (consecutive meets one, non-consecutive fully skew, prefixes
/// 3-separating) and complete candidates are verified as tight swirl-like
/// flowers of order at least 3.
pub fn find_k_fracture(m: &Matroid, k: u32) -> Result<Option<FlowerReport>> {
    if k < 4 {
        return Err(Error::Domain("fracture search needs k >= 4".into()));
    }
    if !is_3connected(m) {
        let (side, l) = crate::connectivity::find_small_separation(m).unwrap();
        return Err(Error::NotThreeConnected(m.ground().labels_of(side), l));
    }
    let n = m.size();
    let max_petals = (n / 2) as u32;
    if max_petals < k {
        return Ok(None);
    }
    let sides: Vec<Mask> = (1..m.full_mask())
        .filter(|&x| popcount(x) >= 2 && lambda(m, x) == 2)
        .collect();
    for target in (k..=max_petals).rev() {
        if let Some(petals) = search_tight_swirl(m, target as usize, &sides)? {
            let cand = FlowerCandidate { petals };
            return Ok(Some(classify_flower(m, &cand)?));
        }
    }
    Ok(None)
}

fn search_tight_swirl(m: &Matroid, target: usize, sides: &[Mask]) -> Result<Option<Vec<Mask>>> {
    // petal 1 contains element 0 to kill rotational symmetry
    let first: Vec<Mask> = sides.iter().copied().filter(|&s| s & 1 == 1).collect();
    let mut chain: Vec<Mask> = Vec::with_capacity(target);
    fn grow(
        m: &Matroid,
        sides: &[Mask],
        chain: &mut Vec<Mask>,
        union: Mask,
        target: usize,
    ) -> Result<Option<Vec<Mask>>> {
        let t = chain.len();
        if t == target - 1 {
            // last petal forced: the rest of the ground set
            let rest = m.full_mask() & !union;
            if rest == 0 || popcount(rest) < 2 || lambda(m, rest) != 2 {
                return Ok(None);
            }
            if meet(m, *chain.last().unwrap(), rest) != 1 || meet(m, chain[0], rest) != 1 {
                return Ok(None);
            }
            for &p in chain[1..t - 1].iter() {
                if meet(m, p, rest) != 0 {
                    return Ok(None);
                }
            }
            let mut petals = chain.clone();
            petals.push(rest);
            if accept_tight_swirl(m, &petals)? {
                return Ok(Some(petals));
            }
            return Ok(None);
        }
        for &s in sides {
            if s & union != 0 {
                continue;
            }
            // leave at least 2 elements per remaining petal
            let remaining = m.size() as u32 - popcount(union | s);
            if remaining < 2 * (target - t - 1) as u32 {
                continue;
            }
            if meet(m, *chain.last().unwrap(), s) != 1 {
                continue;
            }
            if chain[..t - 1].iter().any(|&p| meet(m, p, s) != 0) {
                continue;
            }
            if lambda(m, union | s) != 2 {
                continue;
            }
            chain.push(s);
            if let Some(found) = grow(m, sides, chain, union | s, target)? {
                return Ok(Some(found));
            }
            chain.pop();
        }
        Ok(None)
    }
    for &p1 in &first {
        if popcount(m.full_mask() & !p1) < 2 * (target - 1) as u32 {
            continue;
        }
        chain.clear();
        chain.push(p1);
        if let Some(found) = grow(m, sides, &mut chain, p1, target)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn accept_tight_swirl(m: &Matroid, petals: &[Mask]) -> Result<bool> {
    if flower_violation(m, petals).is_some() {
        return Ok(false);
    }
    let loose = loose_elements(m, petals);
    // tight flower: every petal keeps a tight element
    if petals.iter().any(|&p| p & !loose == 0) {
        return Ok(false);
    }
    if classify_by_meets(m, petals, loose) != FlowerClass::SwirlLike {
        return Ok(false);
    }
    // exclude low-order degeneracies: need two inequivalent displayed
    // non-sequential separations
    Ok(flower_order_of(m, petals)? >= 3)
}

/// Independent exhaustive oracle: enumerate set partitions of E into
/// exactly k nonempty parts and all cyclic arrangements, and report
/// whether any is a tight swirl-like flower of order at least 3 (which,
/// having k >= 3 petals, has order exactly k). Intended for catalog-sized
/// matroids (|E| <= 12) as the completeness certificate for
/// `find_k_fracture`.
pub fn exhaustive_fracture_oracle(m: &Matroid, k: u32) -> Result<bool> {
    if !is_3connected(m) {
        return Err(Error::Domain("oracle needs a 3-connected matroid".into()));
    }
    let n = m.size();
    let k = k as usize;
    if n > 16 {
        return Err(Error::Capacity("oracle capped at 16 elements".into()));
    }
    if n < 2 * k {
        return Ok(false);
    }
    // lambda lookup for speed
    let lam: Vec<u32> = (0..=m.full_mask()).map(|x| lambda(m, x)).collect();
    let mut parts: Vec<Mask> = vec![0; k];
    let mut found = false;
    fn assign(
        m: &Matroid,
        lam: &[u32],
        parts: &mut Vec<Mask>,
        el: usize,
        used: usize,
        n: usize,
        k: usize,
        found: &mut bool,
    ) -> Result<()> {
        if *found {
            return Ok(());
        }
        if el == n {
            if used == k {
                try_arrangements(m, lam, parts, found)?;
            }
            return Ok(());
        }
        // el may join an existing part or open the next one; parts stay
        // ordered by least element, enumerating each set partition once
        let slots = if used < k { used + 1 } else { used };
        for p in 0..slots {
            parts[p] |= 1 << el;
            let next_used = used.max(p + 1);
            // feasibility: enough elements left to fill the rest
            let left = n - el - 1;
            if left + next_used >= k {
                assign(m, lam, parts, el + 1, next_used, n, k, found)?;
            }
            parts[p] &= !(1u32 << el);
            if *found {
                return Ok(());
            }
        }
        Ok(())
    }
    fn try_arrangements(
        m: &Matroid,
        lam: &[u32],
        parts: &[Mask],
        found: &mut bool,
    ) -> Result<()> {
        let k = parts.len();
        // quick filters independent of arrangement
        if parts.iter().any(|&p| lam[p as usize] != 2) {
            return Ok(());
        }
        // arrangements: fix part 0 first; permute the rest, reflection
        // killed by comparing the neighbors of part 0
        let mut idx: Vec<usize> = (1..k).collect();
        permute(&mut idx, 0, &mut |perm: &[usize]| -> Result<bool> {
            if k > 2 && perm[0] > perm[k - 2] {
                return Ok(false); // reflection representative only
            }
            let mut petals: Vec<Mask> = Vec::with_capacity(k);
            petals.push(parts[0]);
            for &i in perm {
                petals.push(parts[i]);
            }
            // swirl-like pattern
            for i in 0..k {
                for j in (i + 1)..k {
                    let want = if j == i + 1 || (i == 0 && j == k - 1) {
                        1
                    } else {
                        0
                    };
                    if meet(m, petals[i], petals[j]) != want {
                        return Ok(false);
                    }
                }
            }
            for i in 0..k {
                let u = petals[i] | petals[(i + 1) % k];
                if lam[u as usize] != 2 {
                    return Ok(false);
                }
            }
            if accept_tight_swirl(m, &petals)? {
                return Ok(true);
            }
            Ok(false)
        })?
        .then(|| *found = true);
        Ok(())
    }
    assign(m, &lam, &mut parts, 0, 0, n, k, &mut found)?;
    Ok(found)
}

/// Heap-style permutation walk calling `f` on each arrangement; stops
/// early when `f` returns true.
fn permute(
    items: &mut Vec<usize>,
    at: usize,
    f: &mut impl FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    if at == items.len() {
        return f(items);
    }
    for i in at..items.len() {
        items.swap(at, i);
        if permute(items, at + 1, f)? {
            items.swap(at, i);
            return Ok(true);
        }
        items.swap(at, i);
    }
    Ok(false)
}

/// k-coherence: 3-connected with no swirl-like flower of order k.
pub fn is_k_coherent(m: &Matroid, k: u32) -> Result<bool> {
    if k < 5 {
        return Err(Error::Domain("coherence is defined for k >= 5".into()));
    }
    if !is_3connected(m) {
        return Ok(false);
    }
    Ok(find_k_fracture(m, k)?.is_none())
}
