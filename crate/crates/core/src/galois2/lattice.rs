//! Small integer lattices: kernels, Hermite normal form, saturation.

/// Basis of `{t ∈ ℤ^n : Σ_j m[i][j] t_j = 0 for every row i}`, in Hermite
/// normal form.
pub fn integer_kernel(m: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Unimodular column operations on m, mirrored on the identity.
    let mut cols: Vec<Vec<i64>> = (0..n).map(|j| m.iter().map(|row| row[j]).collect()).collect();
    let mut u: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    let rows = m.len();
    let mut pivot_col = 0;
    for r in 0..rows {
        if pivot_col == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot_col..n).filter(|&j| cols[j][r] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| cols[j][r].abs()).unwrap();
            cols.swap(pivot_col, p);
            u.swap(pivot_col, p);
            let mut done = true;
            for j in pivot_col + 1..n {
                if cols[j][r] != 0 {
                    let f = cols[j][r] / cols[pivot_col][r];
                    axpy(&mut cols, j, pivot_col, f);
                    axpy(&mut u, j, pivot_col, f);
                    if cols[j][r] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if cols[pivot_col][r] != 0 {
            pivot_col += 1;
        }
    }
    let kernel: Vec<Vec<i64>> = (pivot_col..n).filter(|&j| cols[j].iter().all(|&x| x == 0)).map(|j| u[j].clone()).collect();
    hnf(&kernel)
}

fn axpy(v: &mut [Vec<i64>], dst: usize, src: usize, f: i64) {
    let s = v[src].clone();
    for (a, b) in v[dst].iter_mut().zip(s) {
        *a -= f * b;
    }
}

/// Row Hermite normal form of the lattice spanned by `basis`; zero rows dropped.
pub fn hnf(basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = basis.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let Some(n) = rows.first().map(|r| r.len()) else { return Vec::new() };
    let mut out: Vec<Vec<i64>> = Vec::new();
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let f = rows[i][c] / rows[p][c];
                    let pr = rows[p].clone();
                    for (a, b) in rows[i].iter_mut().zip(pr) {
                        *a -= f * b;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
            let mut r = rows.remove(i);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let c = out[i].iter().position(|&x| x != 0).unwrap();
        let pv = out[i][c];
        for k in 0..i {
            let f = out[k][c].div_euclid(pv);
            if f != 0 {
                let pr = out[i].clone();
                for (a, b) in out[k].iter_mut().zip(pr) {
                    *a -= f * b;
                }
            }
        }
    }
    out
}

pub fn contains(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut rest = v.to_vec();
    for row in hnf(basis) {
        let c = row.iter().position(|&x| x != 0).unwrap();
        if rest[..c].iter().any(|&x| x != 0) {
            return false;
        }
        if rest[c] % row[c] != 0 {
            return false;
        }
        let f = rest[c] / row[c];
        for (a, b) in rest.iter_mut().zip(&row) {
            *a -= f * b;
        }
    }
    rest.iter().all(|&x| x == 0)
}

pub fn same_lattice(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    hnf(a) == hnf(b)
}

/// `(span_ℚ sub) ∩ sup`, for `sub ⊆ sup`.
pub fn saturate_in(sub: &[Vec<i64>], sup: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let sub = hnf(sub);
    let sup = hnf(sup);
    if sub.is_empty() {
        return Vec::new();
    }
    if sub.len() == sup.len() {
        return sup;
    }
    // Express sup in coordinates, then ask which coordinate vectors lie in span(sub).
    // The rational span of sub is the kernel of its orthogonal complement.
    let n = sub[0].len();
    let perp = integer_kernel(&sub, n);
    let mut constraints: Vec<Vec<i64>> = Vec::new();
    for p in &perp {
        constraints.push(sup.iter().map(|s| dot(p, s)).collect());
    }
    let coords = integer_kernel(&constraints, sup.len());
    let vecs: Vec<Vec<i64>> = coords
        .iter()
        .map(|c| (0..n).map(|j| c.iter().zip(&sup).map(|(ci, s)| ci * s[j]).sum()).collect())
        .collect();
    hnf(&vecs)
}

pub fn saturate(sub: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let id: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    saturate_in(sub, &id)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
