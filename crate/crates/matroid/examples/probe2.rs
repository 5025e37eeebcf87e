// Scratch probe: locate delta-y clause violations and the skeleton
// duality mismatch.
use matroid::catalog::catalog_at_most;
use matroid::connectivity::{self, lambda};
use matroid::ground::{bits, popcount, subsets_of, Mask};
use matroid::skeleton;
use matroid::structures;

fn main() {
    for (name, m) in catalog_at_most(10).unwrap() {
        if !connectivity::is_3connected(&m) {
            continue;
        }
        let tris: Vec<Mask> = m
            .circuits()
            .into_iter()
            .filter(|&c| popcount(c) == 3)
            .collect();
        for t in tris {
            let Ok(dm) = structures::delta_y(&m, t) else {
                continue;
            };
            let to_dm = |x: Mask| -> Mask {
                let labels = m.ground().labels_of(x);
                dm.ground().mask_of(&labels).unwrap()
            };
            let mut v1 = 0;
            let mut v2 = 0;
            let mut v3 = 0;
            let mut example = None;
            for a in subsets_of(m.full_mask()) {
                let da = to_dm(a);
                if t & !a == 0 {
                    if dm.rank(da) != m.rank(a) + 1 {
                        v1 += 1;
                        if example.is_none() {
                            example = Some((a, m.rank(a), dm.rank(da)));
                        }
                    }
                    if lambda(&dm, da) != lambda(&m, a) {
                        v3 += 1;
                    }
                } else if t & a == 0 && dm.rank(da) != m.rank(a) {
                    v2 += 1;
                    if example.is_none() {
                        example = Some((a, m.rank(a), dm.rank(da)));
                    }
                }
            }
            if v1 + v2 + v3 > 0 {
                println!(
                    "{name}: triangle {:?}: v1={v1} v2={v2} v3={v3}, example {:?}",
                    m.ground().labels_of(t),
                    example.map(|(a, rm, rd)| (m.ground().labels_of(a), rm, rd))
                );
            }
            // clause (iv): M \ t = Delta M / t under the relabeling
            for e in bits(t) {
                let lbl = m.ground().label(e).to_string();
                let left = m.delete(1 << e).unwrap();
                let td = dm.ground().mask_of(&[lbl.clone()]).unwrap();
                let right = dm.contract(td).unwrap();
                let mut v4 = 0;
                let mut ex = None;
                for x in subsets_of(left.full_mask()) {
                    let labels = left.ground().labels_of(x);
                    let rx = right.ground().mask_of(&labels).unwrap();
                    if left.rank(x) != right.rank(rx) {
                        v4 += 1;
                        if ex.is_none() {
                            ex = Some((labels.clone(), left.rank(x), right.rank(rx)));
                        }
                    }
                }
                if v4 > 0 {
                    println!(
                        "{name}: triangle {:?} pivot {lbl}: v4={v4} example {ex:?}",
                        m.ground().labels_of(t)
                    );
                }
            }
        }
        // skeleton duality
        let s = skeleton::is_k_skeleton(&m, 5).unwrap().is_skeleton;
        let sd = skeleton::is_k_skeleton(&m.dual().materialize().unwrap(), 5)
            .unwrap()
            .is_skeleton;
        if s != sd {
            println!("{name}: skeleton {s} but dual skeleton {sd}");
        }
        if s {
            let fans = structures::find_fans_quads(&m).unwrap();
            if fans.fans.iter().any(|f| f.ordering.len() >= 4) {
                println!("{name}: skeleton with a 4-element fan");
            }
            for q in &fans.quads {
                for e in bits(q.elements) {
                    let md = m.delete(1 << e).unwrap();
                    let mc = m.contract(1 << e).unwrap();
                    let okd = connectivity::is_3connected(&md)
                        && matroid::flowers::is_k_coherent(&md, 5).unwrap();
                    let okc = connectivity::is_3connected(&mc)
                        && matroid::flowers::is_k_coherent(&mc, 5).unwrap();
                    if !okd || !okc {
                        println!(
                            "{name}: quad element {} removal coherence d={okd} c={okc}",
                            m.ground().label(e)
                        );
                    }
                }
            }
        }
    }
}
