use crate::error::Result;
use crate::families::{generate, FamilySpec};
use crate::matroid::{uniform, Matroid};

/// The named instances the test and acceptance suites run over.
pub fn catalog() -> Result<Vec<(String, Matroid)>> {
    let mut out: Vec<(String, Matroid)> = Vec::new();
    let mut push = |name: &str, m: Matroid| out.push((name.to_string(), m));
    push("U24", uniform(2, 4, "e")?);
    push("U25", uniform(2, 5, "e")?);
    push("U26", uniform(2, 6, "e")?);
    push("U35", uniform(3, 5, "e")?);
    push("U36", uniform(3, 6, "e")?);
    for n in [3usize, 4, 5] {
        push(&format!("W{n}"), generate(&FamilySpec::Wheel { n })?);
        push(&format!("Wh{n}"), generate(&FamilySpec::Whirl { n })?);
    }
    push("W6", generate(&FamilySpec::Wheel { n: 6 })?);
    push("Wh6", generate(&FamilySpec::Whirl { n: 6 })?);
    for n in [3usize, 4, 5] {
        push(&format!("Delta{n}"), generate(&FamilySpec::FreeSwirl { n })?);
    }
    push("Delta6", generate(&FamilySpec::FreeSwirl { n: 6 })?);
    for n in [4usize, 5] {
        push(&format!("Lambda{n}"), generate(&FamilySpec::FreeSpike { n })?);
    }
    push("MK33", generate(&FamilySpec::Mk3n { n: 3 })?);
    push("MK34", generate(&FamilySpec::Mk3n { n: 4 })?);
    push("MK33dual", generate(&FamilySpec::Mk3nDual { n: 3 })?);
    push("MK34dual", generate(&FamilySpec::Mk3nDual { n: 4 })?);
    push("Joints3", generate(&FamilySpec::SwirlWithJoints { n: 3 })?);
    push("K5", k5()?);
    Ok(out)
}

/// Catalog members with at most `cap` elements.
pub fn catalog_at_most(cap: usize) -> Result<Vec<(String, Matroid)>> {
    Ok(catalog()?
        .into_iter()
        .filter(|(_, m)| m.size() <= cap)
        .collect())
}

/// The cycle matroid of K5: 10 elements, rank 4, with triangles that lie
/// in no 4-element fan.
pub fn k5() -> Result<Matroid> {
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for u in 0..5usize {
        for v in (u + 1)..5 {
            edges.push((u, v));
            labels.push(format!("v{u}{v}"));
        }
    }
    let g = crate::ground::GroundSet::new(labels)?;
    Matroid::from_rank_fn(g, move |mask| {
        let mut parent = [0usize, 1, 2, 3, 4];
        fn find(p: &mut [usize; 5], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                i = p[i];
            }
            i
        }
        let mut r = 0;
        for e in crate::ground::bits(mask) {
            let (u, v) = edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                r += 1;
            }
        }
        r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_and_axioms_hold_small() {
        for (name, m) in catalog_at_most(10).unwrap() {
            assert!(m.check_axioms().valid, "{name} fails axioms");
        }
    }

    #[test]
    fn k5_shape() {
        let m = k5().unwrap();
        assert_eq!(m.size(), 10);
        assert_eq!(m.full_rank(), 4);
        // K5 has 10 triangles
        let tri = m
            .circuits()
            .into_iter()
            .filter(|&c| crate::ground::popcount(c) == 3)
            .count();
        assert_eq!(tri, 10);
    }
}
