use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ground::{bits, popcount, GroundSet, Mask};
use crate::matrix::Matrix;
use crate::matroid::Matroid;
use crate::rep;
use serde::{Deserialize, Serialize};

/// Parameters for the named matroid families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Uniform { rank: u32, size: usize },
    Wheel { n: usize },
    Whirl { n: usize },
    FreeSwirl { n: usize },
    /// Swirl with the given leg transversals declared as circuit-hyperplanes.
    /// A transversal is a choice vector over legs: bit i set picks q_i,
    /// clear picks p_i.
    Swirl { n: usize, circuit_transversals: Vec<u32> },
    FreeSpike { n: usize },
    /// Tipless spike with declared circuit-hyperplane transversals, encoded
    /// as for `Swirl`.
    Spike { n: usize, circuit_transversals: Vec<u32> },
    /// Cycle matroid of the complete bipartite graph K_{3,n}.
    Mk3n { n: usize },
    /// Its dual.
    Mk3nDual { n: usize },
    K4,
    /// The swirl construction with its basis joints kept: basis b_1..b_n
    /// plus leg pairs placed freely on consecutive basis lines.
    SwirlWithJoints { n: usize },
}

/// A small undirected multigraph for graphic rank oracles.
struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    fn rank(&self, mask: Mask) -> u32 {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            while p[i] != i {
                let gp = p[p[i]];
                p[i] = gp;
                return find(p, p[i]);
            }
            i
        }
        let mut rank = 0;
        for e in bits(mask) {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                rank += 1;
            }
        }
        rank
    }
}

fn wheel_graph(n: usize) -> (Graph, Vec<String>) {
    // vertex 0 = hub, 1..=n = rim vertices; spokes first, then rim edges.
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        edges.push((0, i + 1));
        labels.push(format!("s{i}"));
    }
    for i in 0..n {
        edges.push((i + 1, (i + 1) % n + 1));
        labels.push(format!("r{i}"));
    }
    (
        Graph {
            vertices: n + 1,
            edges,
        },
        labels,
    )
}

/// Rim-edge mask of wheel/whirl labeling above.
pub fn wheel_rim_mask(n: usize) -> Mask {
    ((1u32 << n) - 1) << n
}

/// Leg masks of swirls/spikes with the labeling p0,q0,p1,q1,...
pub fn leg_mask(i: usize) -> Mask {
    0b11 << (2 * i)
}

/// Free-swirl rank: full legs capture both endpoints of their basis line;
/// a single point on a line with one captured endpoint captures the other;
/// remaining singles are generic points. Derived from the joints
/// construction (legs placed freely on the lines of a basis cycle).
fn swirl_rank(n: usize, joints: bool, mask: Mask) -> u32 {
    // With joints, elements 0..2n are legs and 2n..3n are basis joints.
    let mut captured = vec![false; n];
    let mut rank = 0u32;
    if joints {
        for j in 0..n {
            if mask >> (2 * n + j) & 1 == 1 && !captured[j] {
                captured[j] = true;
                rank += 1;
            }
        }
    }
    let mut single = vec![false; n];
    for i in 0..n {
        let leg = (mask >> (2 * i)) & 0b11;
        match popcount(leg) {
            2 => {
                // full leg spans its line: both endpoints captured
                for v in [i, (i + 1) % n] {
                    if !captured[v] {
                        captured[v] = true;
                        rank += 1;
                    }
                }
            }
            1 => single[i] = true,
            _ => {}
        }
    }
    // Propagate: a single on an edge with exactly one captured endpoint
    // pins down the other endpoint.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            if single[i] {
                let (a, b) = (i, (i + 1) % n);
                match (captured[a], captured[b]) {
                    (true, true) => {
                        single[i] = false; // absorbed, rank unchanged
                        changed = true;
                    }
                    (true, false) | (false, true) => {
                        captured[a] = true;
                        captured[b] = true;
                        rank += 1;
                        single[i] = false;
                        changed = true;
                    }
                    (false, false) => {}
                }
            }
        }
    }
    // Remaining singles sit on fully uncaptured lines: generic points.
    rank + single.iter().filter(|&&s| s).count() as u32
}

/// Tipless spike rank: min(n, s + d + [d >= 1]) with d full legs and s
/// half legs, from the truncation of M(K_{2,n}).
fn spike_rank(n: usize, mask: Mask) -> u32 {
    let mut d = 0u32;
    let mut s = 0u32;
    for i in 0..n {
        match popcount((mask >> (2 * i)) & 0b11) {
            2 => d += 1,
            1 => s += 1,
            _ => {}
        }
    }
    (s + d + u32::from(d >= 1)).min(n as u32)
}

fn leg_labels(n: usize) -> Vec<String> {
    (0..n)
        .flat_map(|i| [format!("p{i}"), format!("q{i}")])
        .collect()
}

/// A transversal choice vector into an element mask over the legs.
fn transversal_mask(n: usize, choice: u32) -> Mask {
    let mut m = 0;
    for i in 0..n {
        m |= 1 << (2 * i + ((choice >> i & 1) as usize));
    }
    m
}

/// Apply declared circuit-hyperplane transversals to a base rank function:
/// each declared transversal's rank drops from n to n - 1. The declared
/// family must keep the rank function submodular, which `generate`
/// re-validates via the axiom checker.
fn tighten<'a>(
    n: usize,
    base: impl Fn(Mask) -> u32 + 'a,
    declared: &'a [Mask],
) -> impl Fn(Mask) -> u32 + 'a {
    move |m: Mask| {
        if declared.contains(&m) {
            n as u32 - 1
        } else {
            base(m)
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Matroid> {
    match spec {
        FamilySpec::Uniform { rank, size } => {
            let g = GroundSet::numbered(*size, "e")?;
            Matroid::from_rank_fn(g, |m| popcount(m).min(*rank))
        }
        FamilySpec::Wheel { n } => {
            if *n < 2 {
                return Err(Error::Domain("wheel needs n >= 2".into()));
            }
            let (graph, labels) = wheel_graph(*n);
            Matroid::from_rank_fn(GroundSet::new(labels)?, move |m| graph.rank(m))
        }
        FamilySpec::Whirl { n } => {
            if *n < 2 {
                return Err(Error::Domain("whirl needs n >= 2".into()));
            }
            let (graph, labels) = wheel_graph(*n);
            let rim = wheel_rim_mask(*n);
            // Relaxing the rim circuit-hyperplane changes only its own rank.
            Matroid::from_rank_fn(GroundSet::new(labels)?, move |m| {
                if m == rim {
                    graph.rank(m) + 1
                } else {
                    graph.rank(m)
                }
            })
        }
        FamilySpec::FreeSwirl { n } => {
            if *n < 3 {
                return Err(Error::Domain("swirl needs n >= 3".into()));
            }
            let n = *n;
            Matroid::from_rank_fn(GroundSet::new(leg_labels(n))?, move |m| {
                swirl_rank(n, false, m)
            })
        }
        FamilySpec::Swirl {
            n,
            circuit_transversals,
        } => {
            if *n < 3 {
                return Err(Error::Domain("swirl needs n >= 3".into()));
            }
            let n = *n;
            let declared: Vec<Mask> = circuit_transversals
                .iter()
                .map(|&c| transversal_mask(n, c))
                .collect();
            let rank_fn = tighten(n, move |m| swirl_rank(n, false, m), &declared);
            let m = Matroid::from_rank_fn(GroundSet::new(leg_labels(n))?, rank_fn)?;
            validate_declared(&m, &declared)?;
            Ok(m)
        }
        FamilySpec::FreeSpike { n } => {
            if *n < 3 {
                return Err(Error::Domain("spike needs n >= 3".into()));
            }
            let n = *n;
            Matroid::from_rank_fn(GroundSet::new(leg_labels(n))?, move |m| spike_rank(n, m))
        }
        FamilySpec::Spike {
            n,
            circuit_transversals,
        } => {
            if *n < 3 {
                return Err(Error::Domain("spike needs n >= 3".into()));
            }
            let n = *n;
            let declared: Vec<Mask> = circuit_transversals
                .iter()
                .map(|&c| transversal_mask(n, c))
                .collect();
            let rank_fn = tighten(n, move |m| spike_rank(n, m), &declared);
            let m = Matroid::from_rank_fn(GroundSet::new(leg_labels(n))?, rank_fn)?;
            validate_declared(&m, &declared)?;
            Ok(m)
        }
        FamilySpec::Mk3n { n } => {
            if *n < 2 {
                return Err(Error::Domain("K_{3,n} needs n >= 2".into()));
            }
            let mut edges = Vec::new();
            let mut labels = Vec::new();
            // vertices 0..3 on one side, 3..3+n on the other
            for j in 0..*n {
                for i in 0..3 {
                    edges.push((i, 3 + j));
                    labels.push(format!("a{i}b{j}"));
                }
            }
            let graph = Graph {
                vertices: 3 + n,
                edges,
            };
            Matroid::from_rank_fn(GroundSet::new(labels)?, move |m| graph.rank(m))
        }
        FamilySpec::Mk3nDual { n } => {
            let m = generate(&FamilySpec::Mk3n { n: *n })?;
            m.dual().materialize()
        }
        FamilySpec::K4 => generate(&FamilySpec::Wheel { n: 3 }),
        FamilySpec::SwirlWithJoints { n } => {
            if *n < 3 {
                return Err(Error::Domain("swirl needs n >= 3".into()));
            }
            let n = *n;
            let mut labels = leg_labels(n);
            labels.extend((0..n).map(|i| format!("b{i}")));
            Matroid::from_rank_fn(GroundSet::new(labels)?, move |m| swirl_rank(n, true, m))
        }
    }
}

fn validate_declared(m: &Matroid, declared: &[Mask]) -> Result<()> {
    let rep = m.check_axioms();
    if !rep.valid {
        let (kind, sets) = rep.violation.unwrap();
        return Err(Error::Invalid(format!(
            "declared circuit-hyperplane transversals are not hyperplane-compatible: \
             {kind} fails at {sets:?}"
        )));
    }
    // Each declared set must now be a circuit-hyperplane.
    for &t in declared {
        let n = m.full_rank();
        if m.rank(t) != n - 1 || m.closure(t) != t || !bits(t).all(|e| {
            let s = t & !(1 << e);
            m.rank(s) == popcount(s)
        }) {
            return Err(Error::Invalid(format!(
                "declared transversal {:?} is not a circuit-hyperplane",
                m.ground().labels_of(t)
            )));
        }
    }
    Ok(())
}

/// Representation seeded from the family's natural normal form, falling
/// back to the exhaustive canonical search; the output is re-verified
/// against the rank oracle of `generate(spec)`.
pub fn generate_rep(spec: &FamilySpec, field: &FieldSpec, budget: u64) -> Result<Option<Matrix>> {
    let m = generate(spec)?;
    // Natural seed for free swirls: the alpha normal form of the joints
    // construction, restricted to the legs, with every wrap coefficient
    // tried for the unparameterized last column.
    if let FamilySpec::FreeSwirl { n } = spec {
        if let Some(alpha) = rep::swirl_alpha_search(*n, field)? {
            for wrap in field.units() {
                let mat = rep::swirl_joint_matrix(*n, field, &alpha, wrap);
                // keep the leg columns only (the first 2n)
                let legs = Matrix {
                    rows: mat.rows,
                    cols: 2 * n,
                    entries: (0..mat.rows)
                        .flat_map(|r| (0..2 * n).map(move |c| (r, c)))
                        .map(|(r, c)| mat.get(r, c))
                        .collect(),
                    labels: mat.labels[..2 * n].to_vec(),
                };
                if rep::matrix_represents(&legs, field, &m) {
                    return Ok(Some(legs));
                }
            }
        }
    }
    rep::find_representation(&m, field, budget)
}
