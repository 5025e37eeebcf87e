// Scratch probe used while freezing golden acceptance values.
use matroid::families::{generate, FamilySpec};
use matroid::field::FieldSpec;
use matroid::rep;
use std::time::Instant;

fn main() {
    let d3 = generate(&FamilySpec::FreeSwirl { n: 3 }).unwrap();
    let f7 = FieldSpec::new(7).unwrap();
    let t = Instant::now();
    let c7 = rep::enumerate_inequivalent(&d3, &f7, rep::DEFAULT_BUDGET).unwrap();
    println!("count(Delta3, GF7) = {} in {:?}", c7.len(), t.elapsed());

    let l3 = generate(&FamilySpec::FreeSpike { n: 3 }).unwrap();
    let f8 = FieldSpec::new(8).unwrap();
    let t = Instant::now();
    let c8 = rep::enumerate_inequivalent(&l3, &f8, rep::DEFAULT_BUDGET).unwrap();
    println!("count(Lambda3, GF8) = {} in {:?}", c8.len(), t.elapsed());

    let f4 = FieldSpec::new(4).unwrap();
    let t = Instant::now();
    println!(
        "alpha(3, GF4) = {:?} in {:?}",
        rep::swirl_alpha_search(3, &f4).unwrap(),
        t.elapsed()
    );
    let f5 = FieldSpec::new(5).unwrap();
    println!(
        "alpha(3, GF5) = {:?}",
        rep::swirl_alpha_search(3, &f5).unwrap()
    );
    let t = Instant::now();
    println!(
        "alpha(16, GF4) = {:?} in {:?}",
        rep::swirl_alpha_search(16, &f4).unwrap(),
        t.elapsed()
    );
    let f3 = FieldSpec::new(3).unwrap();
    let t = Instant::now();
    println!(
        "find_rep(Lambda3, GF3) = {:?} in {:?}",
        rep::find_representation(&l3, &f3, rep::DEFAULT_BUDGET)
            .unwrap()
            .map(|_| "some"),
        t.elapsed()
    );
}
