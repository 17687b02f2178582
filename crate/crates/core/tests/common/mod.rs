//! Brute-force oracles over machine integers. Nothing here calls into the
//! library's determinant, Smith form, or lattice code.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use fixindex::IntMatrix;
use num_traits::ToPrimitive;

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntMatrix) -> Mat {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_i128().expect("entry fits in i128")).collect())
        .collect()
}

pub fn from_mat(m: &Mat) -> IntMatrix {
    let rows: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    IntMatrix::from_rows(&rows)
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (r, inner, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..inner).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

/// `L^k` by repeated multiplication.
pub fn power(l: &Mat, k: u64) -> Mat {
    (0..k).fold(identity(l.len()), |acc, _| mul(&acc, l))
}

/// `I + L + ... + L^(k-1)`.
pub fn geometric(l: &Mat, k: u64) -> Mat {
    let n = l.len();
    let mut sum = vec![vec![0; n]; n];
    let mut term = identity(n);
    for _ in 0..k {
        sum = add(&sum, &term);
        term = mul(&term, l);
    }
    sum
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &Mat) -> i128 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Mat = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * a[0][j] * cofactor_det(&minor)
        })
        .sum()
}

pub fn columns(a: &Mat) -> Vec<Vec<i128>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Canonical coset representatives for `Z^n / L` where `L` is spanned by
/// the given generators: an upper-triangular echelon basis with positive
/// pivots, built by Euclidean row reduction.
pub struct Quotient {
    basis: Vec<Vec<i128>>,
}

impl Quotient {
    /// `None` when the generators do not span a full-rank lattice.
    pub fn new(n: usize, gens: &[Vec<i128>]) -> Option<Quotient> {
        let mut rows: Vec<Vec<i128>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let mut basis = Vec::with_capacity(n);
        for col in 0..n {
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
                for &i in &nz {
                    if i != p {
                        let q = rows[i][col].div_euclid(rows[p][col]);
                        let pr = rows[p].clone();
                        for (x, y) in rows[i].iter_mut().zip(&pr) {
                            *x -= q * y;
                        }
                    }
                }
            }
            let pos = rows.iter().position(|r| r[col] != 0)?;
            let mut pivot = rows.swap_remove(pos);
            if pivot[col] < 0 {
                pivot.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(pivot);
        }
        Some(Quotient { basis })
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let mut x = v.to_vec();
        for (i, b) in self.basis.iter().enumerate() {
            let q = x[i].div_euclid(b[i]);
            for (xj, bj) in x.iter_mut().zip(b) {
                *xj -= q * bj;
            }
        }
        x
    }

    /// Order of the subgroup generated by `gens` in the quotient, by
    /// breadth-first closure. Gives up past `limit` elements.
    pub fn subgroup_order(&self, gens: &[Vec<i128>], limit: usize) -> Option<usize> {
        let n = self.basis.len();
        let zero = vec![0; n];
        let mut seen = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.reduce(&x.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>());
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen.len())
    }

    /// Number of cosets, by enumeration.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let n = self.basis.len();
        self.subgroup_order(&identity(n), limit)
    }
}

/// `[Gamma : p(fix phi^k)]` by enumeration: the number of distinct classes
/// of `rho_k(u)` in `Z^n / (I - L^k) Z^n`.
pub fn projection_index_oracle(l: &Mat, r: &Mat, k: u64, limit: usize) -> Option<usize> {
    let n = l.len();
    let a = sub(&identity(n), &power(l, k));
    let rk = mul(&geometric(l, k), r);
    let q = Quotient::new(n, &columns(&a))?;
    q.subgroup_order(&columns(&rk), limit)
}
