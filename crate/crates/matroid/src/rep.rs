use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ground::{bits, popcount, subsets_of, Mask};
use crate::matrix::Matrix;
use crate::matroid::Matroid;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// One equivalence class of GF(q)-representations: the chosen basis and the
/// canonical standard-form matrix with a spanning forest of the support
/// normalized to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepClass {
    pub basis: Mask,
    pub canonical: Matrix,
}

/// True iff the column matroid of `mat` equals `m` on every subset.
pub fn matrix_represents(mat: &Matrix, f: &FieldSpec, m: &Matroid) -> bool {
    subsets_of(m.full_mask()).all(|x| mat.rank_of_columns(f, x) == m.rank(x))
}

/// Support of the standard form [I | A] for `basis`: entry (i, j) is
/// nonzero exactly when basis element i lies in the fundamental circuit of
/// non-basis element j.
fn standard_support(m: &Matroid, basis: Mask) -> (Vec<usize>, Vec<usize>, Vec<Vec<bool>>) {
    let basis_els: Vec<usize> = bits(basis).collect();
    let other_els: Vec<usize> = bits(m.full_mask() & !basis).collect();
    let mut support = vec![vec![false; other_els.len()]; basis_els.len()];
    for (j, &e) in other_els.iter().enumerate() {
        for (i, &b) in basis_els.iter().enumerate() {
            // b is in the fundamental circuit of e iff e is not spanned by
            // B - b.
            let without_b = basis & !(1u32 << b);
            if m.rank(without_b | 1 << e) != m.rank(without_b) {
                support[i][j] = true;
            }
        }
    }
    (basis_els, other_els, support)
}

/// Spanning forest of the bipartite row/column support graph, built from
/// edges in (row, col) lexicographic order.
fn support_forest(support: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let rows = support.len();
    let cols = support.first().map_or(0, |r| r.len());
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    let mut forest = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if support[i][j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                    forest.push((i, j));
                }
            }
        }
    }
    forest
}

/// Canonicalize a matrix under row operations and column scalings: reduce
/// to standard form on the lexicographically least basis of its column
/// matroid, then scale a spanning forest of the support to one.
pub fn canonical_form(mat: &Matrix, f: &FieldSpec) -> Result<RepClass> {
    let mut basis: Mask = 0;
    let mut r = 0;
    for c in 0..mat.cols {
        if mat.rank_of_columns(f, basis | 1 << c) > r {
            basis |= 1 << c;
            r += 1;
        }
    }
    let std_form = mat.reduce_to_standard_form(f, basis)?;
    let basis_cols: Vec<usize> = bits(basis).collect();
    let other_cols: Vec<usize> = (0..mat.cols).filter(|c| basis & 1 << c == 0).collect();
    let rows = basis_cols.len();
    let support: Vec<Vec<bool>> = (0..rows)
        .map(|i| other_cols.iter().map(|&c| std_form.get(i, c) != 0).collect())
        .collect();
    let forest = support_forest(&support);

    // Solve d_row(i) * a_ij * d_col(j) = 1 along forest edges, rooting each
    // component at its least row (scale 1).
    let mut drow: Vec<Option<u8>> = vec![None; rows];
    let mut dcol: Vec<Option<u8>> = vec![None; other_cols.len()];
    loop {
        let mut progressed = false;
        for &(i, j) in &forest {
            let a = std_form.get(i, other_cols[j]);
            match (drow[i], dcol[j]) {
                (Some(dr), None) => {
                    dcol[j] = Some(f.inv(f.mul(dr, a)));
                    progressed = true;
                }
                (None, Some(dc)) => {
                    drow[i] = Some(f.inv(f.mul(dc, a)));
                    progressed = true;
                }
                _ => {}
            }
        }
        if !progressed {
            if let Some(i) = drow.iter().position(|d| d.is_none()) {
                drow[i] = Some(1);
            } else if let Some(j) = dcol.iter().position(|d| d.is_none()) {
                dcol[j] = Some(1);
            } else {
                break;
            }
        }
    }

    let mut canon = std_form;
    for i in 0..rows {
        let dr = drow[i].unwrap();
        if dr != 1 {
            for c in 0..canon.cols {
                canon.set(i, c, f.mul(canon.get(i, c), dr));
            }
        }
    }
    for (j, &c) in other_cols.iter().enumerate() {
        let dc = dcol[j].unwrap();
        if dc != 1 {
            for i in 0..rows {
                canon.set(i, c, f.mul(canon.get(i, c), dc));
            }
        }
    }
    // Row scalings moved the basis columns off the identity; column
    // scalings on those columns restore it without touching anything else.
    for (i, &c) in basis_cols.iter().enumerate() {
        let v = canon.get(i, c);
        if v != 0 && v != 1 {
            let inv = f.inv(v);
            for rr in 0..rows {
                canon.set(rr, c, f.mul(canon.get(rr, c), inv));
            }
        }
    }
    Ok(RepClass {
        basis,
        canonical: canon,
    })
}

/// Equivalence under row operations and column scalings, decided by
/// canonical forms.
pub fn are_equivalent(a: &Matrix, b: &Matrix, f: &FieldSpec) -> Result<bool> {
    if a.rows != b.rows || a.cols != b.cols || a.labels != b.labels {
        return Err(Error::Domain("matrix shapes or labels differ".into()));
    }
    Ok(canonical_form(a, f)? == canonical_form(b, f)?)
}

/// Exhaustive enumeration of inequivalent representations for a fixed
/// lexicographically least basis: the support of [I | A] is forced by
/// fundamental circuits, a spanning forest of the support is scaled to one,
/// and the remaining entries range over the units. Each partial assignment
/// is pruned at the first completed column whose rank constraints fail, and
/// every complete matrix is re-verified against the rank oracle on all
/// subsets.
pub fn enumerate_inequivalent(m: &Matroid, f: &FieldSpec, budget: u64) -> Result<Vec<RepClass>> {
    if !m.is_connected() {
        return Err(Error::Domain(
            "enumeration requires a connected matroid".into(),
        ));
    }
    if m.circuits().iter().any(|&c| popcount(c) <= 2)
        || m.cocircuits().iter().any(|&c| popcount(c) <= 2)
    {
        return Err(Error::Domain(
            "enumeration requires a simple, cosimple matroid".into(),
        ));
    }
    let mut out = search_reps(m, f, budget, false)?;
    out.sort_by(|a, b| a.canonical.entries.cmp(&b.canonical.entries));
    Ok(out)
}

/// First representation found, or none once the normalized search space is
/// exhausted. Disconnected matroids are represented componentwise.
pub fn find_representation(m: &Matroid, f: &FieldSpec, budget: u64) -> Result<Option<Matrix>> {
    if m.size() == 0 {
        return Ok(Some(Matrix::new(0, 0, vec![])));
    }
    let comps = m.components();
    if comps.len() > 1 {
        let mut blocks = Vec::new();
        for &c in &comps {
            let sub = m.restrict(c)?;
            match find_representation(&sub, f, budget)? {
                None => return Ok(None),
                Some(mat) => blocks.push((c, mat)),
            }
        }
        let total_rows: usize = blocks.iter().map(|(_, b)| b.rows).sum();
        let mut out = Matrix::new(total_rows, m.size(), m.ground().labels().to_vec());
        let mut row0 = 0;
        for (cmask, b) in blocks {
            for (bj, ej) in bits(cmask).enumerate() {
                for r in 0..b.rows {
                    out.set(row0 + r, ej, b.get(r, bj));
                }
            }
            row0 += b.rows;
        }
        return Ok(Some(out));
    }
    Ok(search_reps(m, f, budget, true)?
        .into_iter()
        .next()
        .map(|r| r.canonical))
}

struct Search<'a> {
    m: &'a Matroid,
    f: &'a FieldSpec,
    basis: Mask,
    other_els: Vec<usize>,
    // per column: free row positions, in row order
    col_free: Vec<Vec<usize>>,
    units: Vec<u8>,
    budget: u64,
    used: u64,
    stop_at_first: bool,
    results: Vec<RepClass>,
}

fn search_reps(m: &Matroid, f: &FieldSpec, budget: u64, first_only: bool) -> Result<Vec<RepClass>> {
    let basis = m.lex_least_basis();
    let (basis_els, other_els, support) = standard_support(m, basis);
    let forest = support_forest(&support);
    let col_free: Vec<Vec<usize>> = (0..other_els.len())
        .map(|j| {
            (0..basis_els.len())
                .filter(|&i| support[i][j] && !forest.contains(&(i, j)))
                .collect()
        })
        .collect();
    let units: Vec<u8> = f.units().collect();
    let total_free: usize = col_free.iter().map(|v| v.len()).sum();
    if (units.len() as f64).powi(total_free as i32) > budget as f64 {
        return Err(Error::Capacity(format!(
            "representation search space {}^{total_free} exceeds budget {budget}",
            units.len()
        )));
    }

    // Seed matrix: identity on basis columns, forest entries set to one.
    let mut seed = Matrix::new(basis_els.len(), m.size(), m.ground().labels().to_vec());
    for (i, &b) in basis_els.iter().enumerate() {
        seed.set(i, b, 1);
    }
    for &(i, j) in &forest {
        seed.set(i, other_els[j], 1);
    }

    let mut search = Search {
        m,
        f,
        basis,
        other_els,
        col_free,
        units,
        budget,
        used: 0,
        stop_at_first: first_only,
        results: Vec::new(),
    };
    let mut mat = seed;
    place_entry(&mut search, &mut mat, 0, 0)?;
    Ok(search.results)
}

fn place_entry(search: &mut Search, mat: &mut Matrix, j: usize, k: usize) -> Result<bool> {
    if j == search.other_els.len() {
        if matrix_represents(mat, search.f, search.m) {
            search.results.push(RepClass {
                basis: search.basis,
                canonical: mat.clone(),
            });
            return Ok(search.stop_at_first);
        }
        return Ok(false);
    }
    if k == search.col_free[j].len() {
        // column complete: prune unless its rank constraints hold
        search.used += 1;
        if search.used > search.budget {
            return Err(Error::Capacity(format!(
                "representation search exceeded budget {}",
                search.budget
            )));
        }
        if column_consistent(search, mat, j) {
            return place_entry(search, mat, j + 1, 0);
        }
        return Ok(false);
    }
    let row = search.col_free[j][k];
    let el = search.other_els[j];
    for ui in 0..search.units.len() {
        mat.set(row, el, search.units[ui]);
        if place_entry(search, mat, j, k + 1)? {
            return Ok(true);
        }
    }
    mat.set(row, el, 0);
    Ok(false)
}

/// Rank constraints for every subset of the basis plus the first j+1
/// non-basis columns that contains column j.
fn column_consistent(search: &Search, mat: &Matrix, j: usize) -> bool {
    let el = search.other_els[j];
    let mut scope: Mask = search.basis;
    for &e in search.other_els.iter().take(j) {
        scope |= 1 << e;
    }
    for x in subsets_of(scope) {
        let x = x | 1 << el;
        if mat.rank_of_columns(search.f, x) != search.m.rank(x) {
            return false;
        }
    }
    true
}

/// The normalized matrix of the swirl-with-joints construction: joints b_i
/// as identity columns, p_i = b_i + b_{i+1}, q_i = b_i + alpha_i * b_{i+1}
/// for i < n, and wrap leg p_{n-1} = wrap * b_0 + b_{n-1},
/// q_{n-1} = alpha_{n-1} * b_0 + b_{n-1}. The wrap coefficient on the last
/// p column is a genuine extra parameter: it cannot be scaled away once
/// the other columns are normalized.
pub fn swirl_joint_matrix(n: usize, _f: &FieldSpec, alphas: &[u8], wrap: u8) -> Matrix {
    let mut labels: Vec<String> = (0..n)
        .flat_map(|i| [format!("p{i}"), format!("q{i}")])
        .collect();
    labels.extend((0..n).map(|i| format!("b{i}")));
    let mut mat = Matrix::new(n, 3 * n, labels);
    for i in 0..n {
        if i < n - 1 {
            mat.set(i, 2 * i, 1);
            mat.set(i + 1, 2 * i, 1);
            mat.set(i, 2 * i + 1, 1);
            mat.set(i + 1, 2 * i + 1, alphas[i]);
        } else {
            mat.set(n - 1, 2 * i, 1);
            mat.set(0, 2 * i, wrap);
            mat.set(n - 1, 2 * i + 1, 1);
            mat.set(0, 2 * i + 1, alphas[n - 1]);
        }
        mat.set(i, 2 * n + i, 1);
    }
    mat
}

/// Search the normalized swirl form for leg coefficients making every
/// leg-transversal submatrix nonsingular: alpha_i ranges over the units
/// other than one for i < n, the wrap coefficient over all units, and each
/// candidate is abandoned at its first singular transversal. Transversals
/// take e_i or f_i from legs 1..n-1 and the parameterized wrap column from
/// the last leg.
pub fn swirl_alpha_search(n: usize, f: &FieldSpec) -> Result<Option<Vec<u8>>> {
    if n < 3 {
        return Err(Error::Domain("swirl search needs n >= 3".into()));
    }
    if n > 24 {
        return Err(Error::Capacity("swirl search capped at n = 24".into()));
    }
    let units: Vec<u8> = f.units().collect();
    let inner: Vec<u8> = units.iter().copied().filter(|&u| u != 1).collect();
    let mut alphas = vec![0u8; n];
    fn assign(
        idx: usize,
        n: usize,
        f: &FieldSpec,
        inner: &[u8],
        units: &[u8],
        alphas: &mut Vec<u8>,
    ) -> Option<Vec<u8>> {
        if idx == n - 1 {
            for &last in units {
                alphas[n - 1] = last;
                if all_transversals_nonsingular(n, f, alphas) {
                    return Some(alphas.clone());
                }
            }
            return None;
        }
        for &u in inner {
            alphas[idx] = u;
            if let Some(w) = assign(idx + 1, n, f, inner, units, alphas) {
                return Some(w);
            }
        }
        None
    }
    Ok(assign(0, n, f, &inner, &units, &mut alphas))
}

fn all_transversals_nonsingular(n: usize, f: &FieldSpec, alphas: &[u8]) -> bool {
    let labels: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    for choice in 0..1u32 << (n - 1) {
        let mut sq = Matrix::new(n, n, labels.clone());
        for i in 0..n - 1 {
            let coeff = if choice >> i & 1 == 1 { alphas[i] } else { 1 };
            sq.set(i, i, 1);
            sq.set(i + 1, i, coeff);
        }
        sq.set(0, n - 1, alphas[n - 1]);
        sq.set(n - 1, n - 1, 1);
        if sq.det(f) == 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    #[test]
    fn u24_gf2_has_no_representation() {
        let m = uniform(2, 4, "e").unwrap();
        let f = FieldSpec::new(2).unwrap();
        assert!(find_representation(&m, &f, DEFAULT_BUDGET)
            .unwrap()
            .is_none());
    }

    #[test]
    fn u24_gf3_is_representable() {
        let m = uniform(2, 4, "e").unwrap();
        let f = FieldSpec::new(3).unwrap();
        let rep = find_representation(&m, &f, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert!(matrix_represents(&rep, &f, &m));
    }

    #[test]
    fn u24_gf5_count_is_three() {
        // the independent brute-force orbit oracle lives in tests/rep_oracle.rs
        let m = uniform(2, 4, "e").unwrap();
        let f = FieldSpec::new(5).unwrap();
        let classes = enumerate_inequivalent(&m, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(classes.len(), 3);
        for c in &classes {
            assert!(matrix_represents(&c.canonical, &f, &m));
        }
    }

    #[test]
    fn equivalence_is_invariant_under_scalings_and_row_ops() {
        let f = FieldSpec::new(5).unwrap();
        let a = Matrix::from_rows(
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]],
            (0..4).map(|i| format!("e{i}")).collect(),
        )
        .unwrap();
        let mut b = a.clone();
        for r in 0..2 {
            b.set(r, 3, f.mul(b.get(r, 3), 2));
        }
        assert!(are_equivalent(&a, &b, &f).unwrap());
        let c = Matrix::from_rows(
            vec![vec![0, 1, 1, 2], vec![1, 0, 1, 1]],
            (0..4).map(|i| format!("e{i}")).collect(),
        )
        .unwrap();
        assert!(are_equivalent(&a, &c, &f).unwrap());
        let d = Matrix::from_rows(
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 3]],
            (0..4).map(|i| format!("e{i}")).collect(),
        )
        .unwrap();
        assert!(!are_equivalent(&a, &d, &f).unwrap());
    }

    #[test]
    fn canonicalization_idempotent() {
        let f = FieldSpec::new(7).unwrap();
        let a = Matrix::from_rows(
            vec![vec![2, 0, 3, 1], vec![0, 4, 1, 2]],
            (0..4).map(|i| format!("e{i}")).collect(),
        )
        .unwrap();
        let c1 = canonical_form(&a, &f).unwrap();
        let c2 = canonical_form(&c1.canonical, &f).unwrap();
        assert_eq!(c1, c2);
    }
}
