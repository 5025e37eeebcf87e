//! DOT emitters: cyclic petal diagrams for flowers and chain graphs for
//! paths of separations.

use crate::connectivity::{lambda, meet, SepPath};
use crate::flowers::FlowerReport;
use crate::matroid::Matroid;

fn quote(labels: &[String]) -> String {
    labels.join(",")
}

/// Cyclic petal diagram with local-connectivity edge annotations.
pub fn flower_dot(m: &Matroid, report: &FlowerReport) -> String {
    let mut out = String::from("graph flower {\n  layout=circo;\n");
    let n = report.petals.len();
    for (i, &p) in report.petals.iter().enumerate() {
        out.push_str(&format!(
            "  p{i} [shape=ellipse,label=\"P{}: {}\"];\n",
            i + 1,
            quote(&m.ground().labels_of(p))
        ));
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if n > 1 && (i < j || n > 2) {
            let w = meet(m, report.petals[i], report.petals[j]);
            out.push_str(&format!("  p{i} -- p{j} [label=\"meet={w}\"];\n"));
        }
    }
    out.push_str(&format!(
        "  label=\"class={:?} order={}\";\n}}\n",
        report.class, report.order
    ));
    out
}

/// Chain graph of a path of separations with lambda-annotated edges.
pub fn path_dot(m: &Matroid, path: &SepPath) -> String {
    let mut out = String::from("digraph path {\n  rankdir=LR;\n");
    for (i, &s) in path.steps.iter().enumerate() {
        out.push_str(&format!(
            "  s{i} [shape=box,label=\"P{i}: {}\"];\n",
            quote(&m.ground().labels_of(s))
        ));
    }
    let mut prefix = 0u32;
    for i in 0..path.steps.len().saturating_sub(1) {
        prefix |= path.steps[i];
        out.push_str(&format!(
            "  s{i} -> s{} [label=\"lambda={}\"];\n",
            i + 1,
            lambda(m, prefix)
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::PathKind;
    use crate::families::{generate, leg_mask, FamilySpec};
    use crate::flowers::{classify_flower, FlowerCandidate};

    #[test]
    fn emitters_produce_dot() {
        let d4 = generate(&FamilySpec::FreeSwirl { n: 4 }).unwrap();
        let rep = classify_flower(
            &d4,
            &FlowerCandidate {
                petals: (0..4).map(leg_mask).collect(),
            },
        )
        .unwrap();
        let dot = flower_dot(&d4, &rep);
        assert!(dot.contains("graph flower"));
        assert!(dot.contains("meet=1"));

        let path = SepPath {
            kind: PathKind::Path3,
            steps: (0..4).map(leg_mask).collect(),
            strong_pairs: vec![],
        };
        let pd = path_dot(&d4, &path);
        assert!(pd.contains("lambda=2"));
    }
}
