//! Product-form representation of the basis inverse.
//!
//! `B^-1 = E_k^-1 ... E_1^-1` where each elementary matrix replaces one column of the identity.
//! Reinversion rebuilds the eta file from scratch, picking row singletons first so that the
//! triangular part of the basis produces no fill.

/// Entries below this magnitude are dropped from eta columns.
const DROP_TOL: f64 = 1e-14;

#[derive(Clone, Debug, Default)]
pub(crate) struct EtaFile {
    pivot: Vec<usize>,
    pivot_val: Vec<f64>,
    start: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl EtaFile {
    pub fn clear(&mut self) {
        self.pivot.clear();
        self.pivot_val.clear();
        self.start.clear();
        self.idx.clear();
        self.val.clear();
    }

    #[cfg(test)]
    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    /// Appends the eta for a pivot on row `p` of the transformed column `alpha`.
    pub fn push(&mut self, p: usize, alpha: &[f64]) {
        self.pivot.push(p);
        self.pivot_val.push(alpha[p]);
        self.start.push(self.idx.len());
        for (i, &a) in alpha.iter().enumerate() {
            if i != p && a.abs() > DROP_TOL {
                self.idx.push(i);
                self.val.push(a);
            }
        }
    }

    /// Appends an eta from a sparse column whose nonzero positions are listed in `nz`.
    pub fn push_sparse(&mut self, p: usize, v: &[f64], nz: &[usize]) {
        self.pivot.push(p);
        self.pivot_val.push(v[p]);
        self.start.push(self.idx.len());
        for &i in nz {
            if i != p && v[i].abs() > DROP_TOL {
                self.idx.push(i);
                self.val.push(v[i]);
            }
        }
    }

    /// [`EtaFile::ftran`] that also records newly nonzero positions in `nz` / `mark`.
    pub fn ftran_sparse(&self, v: &mut [f64], nz: &mut Vec<usize>, mark: &mut [bool]) {
        for k in 0..self.pivot.len() {
            let p = self.pivot[k];
            let vp = v[p];
            if vp == 0.0 {
                continue;
            }
            let vp = vp / self.pivot_val[k];
            v[p] = vp;
            for e in self.range(k) {
                let i = self.idx[e];
                if !mark[i] {
                    mark[i] = true;
                    nz.push(i);
                }
                v[i] -= self.val[e] * vp;
            }
        }
    }

    fn range(&self, k: usize) -> std::ops::Range<usize> {
        let end = self.start.get(k + 1).copied().unwrap_or(self.idx.len());
        self.start[k]..end
    }

    /// Overwrites `v` with `B^-1 v`.
    pub fn ftran(&self, v: &mut [f64]) {
        for k in 0..self.pivot.len() {
            let p = self.pivot[k];
            let vp = v[p];
            if vp == 0.0 {
                continue;
            }
            let vp = vp / self.pivot_val[k];
            v[p] = vp;
            for e in self.range(k) {
                v[self.idx[e]] -= self.val[e] * vp;
            }
        }
    }

    /// Overwrites the row vector `y` with `y B^-1`.
    pub fn btran(&self, y: &mut [f64]) {
        for k in (0..self.pivot.len()).rev() {
            let p = self.pivot[k];
            let mut s = y[p];
            for e in self.range(k) {
                s -= y[self.idx[e]] * self.val[e];
            }
            y[p] = s / self.pivot_val[k];
        }
    }
}

/// Column access used by reinversion: structural column `j` as (row, value) pairs.
pub(crate) trait Columns {
    fn num_rows(&self) -> usize;
    fn num_structural(&self) -> usize;
    fn column(&self, j: usize) -> (&[usize], &[f64]);
}

pub(crate) struct Reinversion {
    /// Variable basic at each row position.
    pub head: Vec<usize>,
    /// Structural variables that were dropped because the basis was singular.
    pub dropped: Vec<usize>,
}

/// Rebuilds `etas` for the basis made of `basics` (structural indices `< n`, logical `n + i`).
///
/// Row singletons are peeled off first and column singletons second. Both triangles give etas
/// equal to the original columns provided the row-singleton part is laid down first, the
/// remaining bump next and the column-singleton part last in reverse peel order. Only the
/// bump is pivoted numerically.
pub(crate) fn reinvert<C: Columns>(cols: &C, basics: &[usize], etas: &mut EtaFile) -> Reinversion {
    let m = cols.num_rows();
    let n = cols.num_structural();
    etas.clear();

    let mut head = vec![usize::MAX; m];
    let mut assigned = vec![false; m];
    let mut structs: Vec<usize> = Vec::new();
    for &j in basics {
        if j >= n {
            head[j - n] = j;
            assigned[j - n] = true;
        } else {
            structs.push(j);
        }
    }

    let k = structs.len();
    let mut row_count = vec![0usize; m];
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (c, &j) in structs.iter().enumerate() {
        for &r in cols.column(j).0 {
            if !assigned[r] {
                row_count[r] += 1;
                row_cols[r].push(c);
            }
        }
    }
    let mut done = vec![false; k];

    // Row singletons.
    let mut forward: Vec<(usize, usize)> = Vec::new();
    let mut queue: Vec<usize> = (0..m).filter(|&r| !assigned[r] && row_count[r] == 1).collect();
    while let Some(r) = queue.pop() {
        if assigned[r] || row_count[r] != 1 {
            continue;
        }
        let Some(c) = row_cols[r].iter().copied().find(|&c| !done[c]) else {
            continue;
        };
        done[c] = true;
        assigned[r] = true;
        forward.push((c, r));
        for &r2 in cols.column(structs[c]).0 {
            if !assigned[r2] {
                row_count[r2] -= 1;
                if row_count[r2] == 1 {
                    queue.push(r2);
                }
            }
        }
    }

    // Column singletons among what is left.
    let mut col_count = vec![0usize; k];
    for c in (0..k).filter(|&c| !done[c]) {
        col_count[c] = cols.column(structs[c]).0.iter().filter(|&&r| !assigned[r]).count();
    }
    let mut backward: Vec<(usize, usize)> = Vec::new();
    let mut queue: Vec<usize> = (0..k).filter(|&c| !done[c] && col_count[c] == 1).collect();
    while let Some(c) = queue.pop() {
        if done[c] || col_count[c] != 1 {
            continue;
        }
        let r = cols.column(structs[c]).0.iter().copied().find(|&r| !assigned[r]).expect("count is 1");
        done[c] = true;
        assigned[r] = true;
        backward.push((c, r));
        for &c2 in &row_cols[r] {
            if !done[c2] {
                col_count[c2] -= 1;
                if col_count[c2] == 1 {
                    queue.push(c2);
                }
            }
        }
    }

    let mut work = vec![0.0; m];
    let mut mark = vec![false; m];
    let mut nz: Vec<usize> = Vec::new();
    let mut push_original = |etas: &mut EtaFile, c: usize, r: usize, head: &mut [usize]| {
        let (rows, vals) = cols.column(structs[c]);
        for (&i, &v) in rows.iter().zip(vals) {
            work[i] = v;
        }
        etas.push_sparse(r, &work, rows);
        for &i in rows {
            work[i] = 0.0;
        }
        head[r] = structs[c];
    };
    for &(c, r) in &forward {
        push_original(etas, c, r, &mut head);
    }

    // Bump: threshold pivoting on the transformed columns, sparsest column first.
    let mut dropped = Vec::new();
    let mut bump: Vec<usize> = (0..k).filter(|&c| !done[c]).collect();
    if !bump.is_empty() {
        log::trace!("reinversion bump: {} of {} structural columns", bump.len(), k);
    }
    let mut work = vec![0.0; m];
    while !bump.is_empty() {
        let at = (0..bump.len())
            .min_by_key(|&i| (col_count[bump[i]], bump[i]))
            .expect("non-empty");
        let c = bump.swap_remove(at);
        let (rows, vals) = cols.column(structs[c]);
        for (&r, &v) in rows.iter().zip(vals) {
            work[r] = v;
            mark[r] = true;
            nz.push(r);
        }
        etas.ftran_sparse(&mut work, &mut nz, &mut mark);
        let max_active = nz
            .iter()
            .filter(|&&r| !assigned[r])
            .fold(0f64, |acc, &r| acc.max(work[r].abs()));
        let threshold = (0.01 * max_active).max(1e-9);
        let pivot_row = nz
            .iter()
            .copied()
            .filter(|&r| !assigned[r] && work[r].abs() >= threshold)
            .min_by(|&a, &b| {
                row_count[a]
                    .cmp(&row_count[b])
                    .then(work[b].abs().total_cmp(&work[a].abs()))
                    .then(a.cmp(&b))
            });
        done[c] = true;
        for &r in rows {
            if !assigned[r] {
                row_count[r] -= 1;
            }
        }
        match pivot_row {
            Some(r) => {
                etas.push_sparse(r, &work, &nz);
                head[r] = structs[c];
                assigned[r] = true;
                for &c2 in &row_cols[r] {
                    if !done[c2] {
                        col_count[c2] = col_count[c2].saturating_sub(1);
                    }
                }
            }
            None => dropped.push(structs[c]),
        }
        for &i in &nz {
            work[i] = 0.0;
            mark[i] = false;
        }
        nz.clear();
    }

    for &(c, r) in backward.iter().rev() {
        push_original(etas, c, r, &mut head);
    }

    for r in 0..m {
        if head[r] == usize::MAX {
            head[r] = n + r;
        }
    }
    Reinversion { head, dropped }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense {
        m: usize,
        cols: Vec<(Vec<usize>, Vec<f64>)>,
    }

    impl Columns for Dense {
        fn num_rows(&self) -> usize {
            self.m
        }
        fn num_structural(&self) -> usize {
            self.cols.len()
        }
        fn column(&self, j: usize) -> (&[usize], &[f64]) {
            (&self.cols[j].0, &self.cols[j].1)
        }
    }

    fn dense(m: usize, data: &[&[f64]]) -> Dense {
        let cols = data
            .iter()
            .map(|col| {
                let (r, v): (Vec<usize>, Vec<f64>) = col
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i, v))
                    .unzip();
                (r, v)
            })
            .collect();
        Dense { m, cols }
    }

    fn basis_matrix(d: &Dense, head: &[usize]) -> Vec<Vec<f64>> {
        let n = d.cols.len();
        let mut b = vec![vec![0.0; d.m]; d.m];
        for (pos, &j) in head.iter().enumerate() {
            if j >= n {
                b[j - n][pos] = 1.0;
            } else {
                for (&r, &v) in d.cols[j].0.iter().zip(&d.cols[j].1) {
                    b[r][pos] = v;
                }
            }
        }
        b
    }

    #[test]
    fn ftran_inverts_the_reinverted_basis() {
        let d = dense(
            3,
            &[&[2.0, 1.0, 0.0], &[0.0, 3.0, 1.0], &[1.0, 0.0, 4.0], &[0.0, 0.0, 1.0]],
        );
        let mut etas = EtaFile::default();
        let inv = reinvert(&d, &[0, 1, 2], &mut etas);
        assert!(inv.dropped.is_empty());
        let b = basis_matrix(&d, &inv.head);
        let rhs = [1.0, -2.0, 0.5];
        let mut x = rhs.to_vec();
        etas.ftran(&mut x);
        for (i, row) in b.iter().enumerate() {
            let lhs: f64 = row.iter().zip(&x).map(|(a, xi)| a * xi).sum();
            assert!((lhs - rhs[i]).abs() < 1e-12);
        }
        // y B = c
        let c = [0.3, 1.0, -1.0];
        let mut y = c.to_vec();
        etas.btran(&mut y);
        for pos in 0..3 {
            let lhs: f64 = (0..3).map(|i| y[i] * b[i][pos]).sum();
            assert!((lhs - c[pos]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_basis_is_repaired_with_logicals() {
        let d = dense(2, &[&[1.0, 1.0], &[2.0, 2.0]]);
        let mut etas = EtaFile::default();
        let inv = reinvert(&d, &[0, 1], &mut etas);
        assert_eq!(inv.dropped.len(), 1);
        assert!(inv.head.iter().any(|&j| j >= 2));
    }

    #[test]
    fn triangular_basis_has_no_fill() {
        // Lower bidiagonal: every column is a row singleton after the previous pivot.
        let d = dense(
            4,
            &[
                &[1.0, -1.0, 0.0, 0.0],
                &[0.0, 1.0, -1.0, 0.0],
                &[0.0, 0.0, 1.0, -1.0],
                &[0.0, 0.0, 0.0, 1.0],
            ],
        );
        let mut etas = EtaFile::default();
        let inv = reinvert(&d, &[0, 1, 2, 3], &mut etas);
        assert!(inv.dropped.is_empty());
        assert_eq!(etas.nnz(), 3);
    }
}
