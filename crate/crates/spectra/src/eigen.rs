//! Block-wise diagonalization of sparse operators.
//!
//! Operators in a field along z conserve a combination of Landau index and
//! spin projection, so their sparsity graph splits into small connected
//! components that are diagonalized densely one at a time.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use crate::ops::{from_triplets, triplets, Op, C};

/// Connected components of the sparsity graph, each sorted.
pub fn blocks(a: &Op) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j, _) in triplets(a) {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn dense_block(a: &Op, idx: &[usize]) -> DMatrix<C> {
    let mut local = std::collections::HashMap::with_capacity(idx.len());
    for (k, &i) in idx.iter().enumerate() {
        local.insert(i, k);
    }
    let mut m = DMatrix::zeros(idx.len(), idx.len());
    for (r, &i) in idx.iter().enumerate() {
        let row = a.row(i);
        for (&j, v) in row.col_indices().iter().zip(row.values()) {
            if let Some(&c) = local.get(&j) {
                m[(r, c)] = *v;
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: C,
    /// Normalized eigenvector as `(global index, component)`.
    pub vector: Vec<(usize, C)>,
}

/// All eigenpairs. Hermitian operators use a symmetric solver; anything
/// else goes through a complex Schur form and null vectors of `A − λI`.
pub fn eigenpairs(a: &Op, hermitian: bool) -> Vec<Eigenpair> {
    let mut out = Vec::with_capacity(a.nrows());
    for idx in blocks(a) {
        let m = dense_block(a, &idx);
        let local: Vec<(C, DVector<C>)> = if hermitian {
            let eig = SymmetricEigen::new(m);
            (0..idx.len())
                .map(|k| (C::new(eig.eigenvalues[k], 0.0), eig.eigenvectors.column(k).into_owned()))
                .collect()
        } else {
            general_block(m)
        };
        for (value, v) in local {
            out.push(Eigenpair {
                value,
                vector: idx.iter().zip(v.iter()).map(|(&i, c)| (i, *c)).collect(),
            });
        }
    }
    out
}

fn general_block(m: DMatrix<C>) -> Vec<(C, DVector<C>)> {
    let n = m.nrows();
    if n == 1 {
        return vec![(m[(0, 0)], DVector::from_element(1, C::new(1.0, 0.0)))];
    }
    let values = Schur::new(m.clone())
        .eigenvalues()
        .expect("complex Schur form is triangular");
    values
        .iter()
        .map(|&lambda| {
            let shifted = &m - DMatrix::from_diagonal_element(n, n, lambda);
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.expect("right singular vectors requested");
            let k = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .map(|(k, _)| k)
                .unwrap_or(0);
            let v = v_t.row(k).adjoint();
            let norm = v.norm();
            (lambda, v / C::new(norm, 0.0))
        })
        .collect()
}

/// Applies a real function to a Hermitian operator through its eigendecomposition.
///
/// Returns the smallest eigenvalue as the error when `domain` rejects it.
pub fn hermitian_function(
    a: &Op,
    f: impl Fn(f64) -> f64,
    domain: impl Fn(f64) -> bool,
) -> Result<Op, f64> {
    let mut entries = Vec::new();
    let mut bad: Option<f64> = None;
    for idx in blocks(a) {
        let eig = SymmetricEigen::new(dense_block(a, &idx));
        for &x in eig.eigenvalues.iter() {
            if !domain(x) {
                bad = Some(bad.map_or(x, |b: f64| b.min(x)));
            }
        }
        if bad.is_some() {
            continue;
        }
        let fd = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| C::new(f(x), 0.0)));
        let q = &eig.eigenvectors;
        let r = q * fd * q.adjoint();
        for (p, &i) in idx.iter().enumerate() {
            for (s, &j) in idx.iter().enumerate() {
                entries.push((i, j, r[(p, s)]));
            }
        }
    }
    match bad {
        Some(x) => Err(x),
        None => Ok(from_triplets(a.nrows(), entries)),
    }
}
