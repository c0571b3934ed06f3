//! Exact rational linear algebra: sparse symmetric matrices, determinants by
//! congruence elimination, and positive-semidefiniteness certificates.
//!
//! Pivots are always taken on the diagonal (with a 2x2 antidiagonal fallback
//! for determinants), so every step is a congruence and the recorded pivots
//! certify inertia. Pivot order prefers sparse rows; the graphs this crate
//! produces are tree-like, which keeps fill-in near zero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::Rat;

/// Symmetric rational matrix stored as sparse rows. Both mirror entries are
/// kept so row structure is directly available.
#[derive(Clone, Debug)]
pub struct SymRatMatrix {
    size: usize,
    rows: Vec<BTreeMap<usize, Rat>>,
}

impl SymRatMatrix {
    pub fn zeros(size: usize) -> Self {
        SymRatMatrix {
            size,
            rows: vec![BTreeMap::new(); size],
        }
    }

    /// Builds from dense rows, validating symmetry.
    pub fn from_dense(rows: &[Vec<Rat>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[i].insert(j, v.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.rows[i].iter().map(|(&j, v)| (j, v))
    }

    /// Adds `v` at `(i, j)` and mirrors to `(j, i)`.
    pub fn add_sym(&mut self, i: usize, j: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        Self::bump(&mut self.rows[i], j, v);
        if i != j {
            Self::bump(&mut self.rows[j], i, v);
        }
    }

    fn bump(row: &mut BTreeMap<usize, Rat>, j: usize, v: &Rat) {
        match row.entry(j) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + v;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn quadratic_form(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.size);
        let mut acc = Rat::zero();
        for (i, row) in self.rows.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (j, a) in row {
                acc += &v[i] * a * &v[*j];
            }
        }
        acc
    }

    /// Exact determinant via symmetric congruence elimination with diagonal
    /// pivots, falling back to 2x2 antidiagonal pivots when every remaining
    /// diagonal entry is zero.
    pub fn det(&self) -> Rat {
        let mut work = Elimination::new(self.clone(), false);
        let mut det = Rat::one();
        loop {
            if work.active_count == 0 {
                return det;
            }
            if let Some(i) = work.best_nonzero_diagonal() {
                det *= work.diag(i);
                work.eliminate(i);
            } else if let Some((i, j)) = work.zero_diag_offdiag_pair() {
                let b = work.residual.get(i, j);
                det = det * (-(&b * &b));
                work.eliminate_pair(i, j, &b);
            } else {
                // all remaining rows are zero
                return Rat::zero();
            }
        }
    }

    /// Exact PSD/PD decision with a checkable certificate.
    pub fn psd_certificate(&self) -> PsdCertificate {
        let mut work = Elimination::new(self.clone(), true);
        let mut pivots: Vec<(usize, Rat)> = Vec::new();
        let mut null_dims = 0usize;
        loop {
            if let Some(i) = work.any_negative_diagonal() {
                let mut w = vec![Rat::zero(); self.size];
                w[i] = Rat::one();
                return work.not_psd(self, w, pivots);
            }
            // zero diagonals: either a certified failure or a null direction
            while let Some(i) = work.first_zero_diagonal() {
                if let Some((j, b)) = work.first_offdiag(i) {
                    // v = t e_i + e_j with t = -(R_jj + 1)/(2 b) gives value -1
                    let rjj = work.diag(j);
                    let t = -(rjj + Rat::one()) / (Rat::from_integer(2.into()) * &b);
                    let mut w = vec![Rat::zero(); self.size];
                    w[i] = t;
                    w[j] = Rat::one();
                    return work.not_psd(self, w, pivots);
                }
                work.deactivate(i);
                null_dims += 1;
            }
            if work.active_count == 0 {
                break;
            }
            let i = work
                .best_positive_diagonal()
                .expect("remaining active rows must have positive diagonals");
            pivots.push((i, work.diag(i)));
            work.eliminate(i);
        }
        let verdict = if null_dims == 0 && pivots.len() == self.size {
            PsdVerdict::PositiveDefinite
        } else {
            PsdVerdict::PositiveSemidefinite
        };
        PsdCertificate {
            verdict,
            pivots,
            witness: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum DiagClass {
    Negative(usize),
    Zero,
    Positive(usize),
}

/// Shared state for the congruence elimination. Active rows are indexed by
/// diagonal sign so pivot selection never rescans the matrix.
struct Elimination {
    residual: SymRatMatrix,
    active: Vec<bool>,
    active_count: usize,
    class: Vec<Option<DiagClass>>,
    neg: BTreeSet<(usize, usize)>,
    zero: BTreeSet<usize>,
    pos: BTreeSet<(usize, usize)>,
    /// Rows of the accumulated congruence transform `C` with
    /// `residual = C * M * C^T`; only tracked when a witness may be needed.
    transform: Option<Vec<BTreeMap<usize, Rat>>>,
}

impl Elimination {
    fn new(m: SymRatMatrix, track_transform: bool) -> Self {
        let n = m.size;
        let transform = track_transform.then(|| {
            (0..n)
                .map(|i| {
                    let mut row = BTreeMap::new();
                    row.insert(i, Rat::one());
                    row
                })
                .collect()
        });
        let mut e = Elimination {
            residual: m,
            active: vec![true; n],
            active_count: n,
            class: vec![None; n],
            neg: BTreeSet::new(),
            zero: BTreeSet::new(),
            pos: BTreeSet::new(),
            transform,
        };
        for i in 0..n {
            e.reclassify(i);
        }
        e
    }

    fn diag(&self, i: usize) -> Rat {
        self.residual.get(i, i)
    }

    fn reclassify(&mut self, i: usize) {
        match self.class[i].take() {
            Some(DiagClass::Negative(nnz)) => {
                self.neg.remove(&(nnz, i));
            }
            Some(DiagClass::Zero) => {
                self.zero.remove(&i);
            }
            Some(DiagClass::Positive(nnz)) => {
                self.pos.remove(&(nnz, i));
            }
            None => {}
        }
        if !self.active[i] {
            return;
        }
        let nnz = self.residual.rows[i].len();
        let d = self.diag(i);
        let class = if d.is_negative() {
            self.neg.insert((nnz, i));
            DiagClass::Negative(nnz)
        } else if d.is_zero() {
            self.zero.insert(i);
            DiagClass::Zero
        } else {
            self.pos.insert((nnz, i));
            DiagClass::Positive(nnz)
        };
        self.class[i] = Some(class);
    }

    fn deactivate(&mut self, i: usize) {
        self.active[i] = false;
        self.active_count -= 1;
        self.reclassify(i);
    }

    fn any_negative_diagonal(&self) -> Option<usize> {
        self.neg.first().map(|&(_, i)| i)
    }

    fn first_zero_diagonal(&self) -> Option<usize> {
        self.zero.first().copied()
    }

    fn best_positive_diagonal(&self) -> Option<usize> {
        self.pos.first().map(|&(_, i)| i)
    }

    fn best_nonzero_diagonal(&self) -> Option<usize> {
        match (self.pos.first(), self.neg.first()) {
            (Some(&(np, ip)), Some(&(nn, jn))) => Some(if np <= nn { ip } else { jn }),
            (Some(&(_, i)), None) | (None, Some(&(_, i))) => Some(i),
            (None, None) => None,
        }
    }

    fn first_offdiag(&self, i: usize) -> Option<(usize, Rat)> {
        self.residual.rows[i]
            .iter()
            .find(|&(&j, _)| j != i)
            .map(|(&j, v)| (j, v.clone()))
    }

    /// A zero-diagonal row with some off-diagonal entry (its partner then
    /// also has a zero diagonal, else a diagonal pivot would exist).
    fn zero_diag_offdiag_pair(&self) -> Option<(usize, usize)> {
        for &i in &self.zero {
            if let Some((j, _)) = self.first_offdiag(i) {
                return Some((i, j));
            }
        }
        None
    }

    /// Rank-one congruence update removing row/column `i`:
    /// `R <- R - (1/p) c c^T` with `c = R[:, i]`, `p = R[i][i] != 0`.
    fn eliminate(&mut self, i: usize) {
        let p = self.diag(i);
        assert!(!p.is_zero());
        let col: Vec<(usize, Rat)> = self.residual.rows[i]
            .iter()
            .map(|(&j, v)| (j, v.clone()))
            .collect();
        if let Some(transform) = &mut self.transform {
            // row_j(C) -= (c_j / p) row_i(C) for active j != i
            let base = transform[i].clone();
            for (j, cj) in &col {
                if *j == i {
                    continue;
                }
                let alpha = cj / &p;
                for (&col_idx, v) in &base {
                    let delta = -(v * &alpha);
                    SymRatMatrix::bump(&mut transform[*j], col_idx, &delta);
                }
            }
        }
        for (a, (j, cj)) in col.iter().enumerate() {
            for (l, cl) in col.iter().skip(a) {
                let delta = -(cj * cl / &p);
                self.residual.add_sym(*j, *l, &delta);
            }
        }
        self.active[i] = false;
        self.active_count -= 1;
        // row/column i cancels exactly; drop any numerically-surviving mirror
        debug_assert!(self.residual.rows[i].is_empty());
        self.residual.rows[i].clear();
        self.reclassify(i);
        for (j, _) in &col {
            if *j != i {
                self.residual.rows[*j].remove(&i);
                self.reclassify(*j);
            }
        }
    }

    /// 2x2 antidiagonal pivot on `(i, j)` where both diagonals are zero and
    /// `b = R[i][j] != 0`: `R <- R - (1/b)(c_i c_j^T + c_j c_i^T)`.
    fn eliminate_pair(&mut self, i: usize, j: usize, b: &Rat) {
        let ci: Vec<(usize, Rat)> = self.residual.rows[i]
            .iter()
            .map(|(&l, v)| (l, v.clone()))
            .collect();
        let cj: Vec<(usize, Rat)> = self.residual.rows[j]
            .iter()
            .map(|(&l, v)| (l, v.clone()))
            .collect();
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for (u, cu) in &ci {
            touched.insert(*u);
            for (w, cw) in &cj {
                touched.insert(*w);
                let t = -(cu * cw / b);
                if u == w {
                    let t2 = &t + &t;
                    self.residual.add_sym(*u, *u, &t2);
                } else {
                    // covers this ordered product; the swapped product is
                    // handled by the (w, u) iteration when it is nonzero
                    self.residual.add_sym(*u, *w, &t);
                }
            }
        }
        for v in [i, j] {
            self.active[v] = false;
            self.active_count -= 1;
            debug_assert!(self.residual.rows[v].is_empty());
            self.residual.rows[v].clear();
        }
        touched.insert(i);
        touched.insert(j);
        for u in touched {
            self.residual.rows[u].remove(&i);
            self.residual.rows[u].remove(&j);
            self.reclassify(u);
        }
    }

    /// Maps a residual-space witness back to the original coordinates and
    /// packages the certificate.
    fn not_psd(
        &self,
        original: &SymRatMatrix,
        w: Vec<Rat>,
        pivots: Vec<(usize, Rat)>,
    ) -> PsdCertificate {
        let v = match &self.transform {
            Some(transform) => {
                // v = C^T w, i.e. v = sum_j w_j * row_j(C)
                let mut v = vec![Rat::zero(); original.size];
                for (j, wj) in w.iter().enumerate() {
                    if wj.is_zero() {
                        continue;
                    }
                    for (&col_idx, c) in &transform[j] {
                        v[col_idx] += wj * c;
                    }
                }
                v
            }
            None => w,
        };
        debug_assert!(original.quadratic_form(&v).is_negative());
        PsdCertificate {
            verdict: PsdVerdict::NotPsd,
            pivots,
            witness: Some(v),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PsdVerdict {
    PositiveDefinite,
    PositiveSemidefinite,
    NotPsd,
}

/// Outcome of the exact elimination. For `NotPsd` the witness `v` satisfies
/// `v^T M v < 0`, checkable by one quadratic-form evaluation; otherwise the
/// pivot sequence is the certificate.
#[derive(Clone, Debug)]
pub struct PsdCertificate {
    pub verdict: PsdVerdict,
    pub pivots: Vec<(usize, Rat)>,
    pub witness: Option<Vec<Rat>>,
}

impl PsdCertificate {
    /// Re-checks the witness against the matrix it was issued for.
    pub fn witness_valid(&self, m: &SymRatMatrix) -> bool {
        match (&self.verdict, &self.witness) {
            (PsdVerdict::NotPsd, Some(v)) => m.quadratic_form(v).is_negative(),
            (PsdVerdict::NotPsd, None) => false,
            _ => self.witness.is_none(),
        }
    }
}

/// Determinant of a square matrix of polynomials by expansion along rows,
/// memoized on the set of unused columns. Division-free, so it works over
/// the polynomial ring directly. Guarded to 20 columns.
pub fn poly_det(mat: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = mat.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if n > 20 {
        return Err(Error::EdgeBudgetExceeded { edges: n, limit: 20 });
    }
    let dim = mat[0][0].ambient_dim();
    for row in mat {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    let mut memo: std::collections::HashMap<u32, Polynomial> = std::collections::HashMap::new();
    let full: u32 = (1u32 << n) - 1;
    Ok(poly_det_rec(mat, full, dim, &mut memo))
}

fn poly_det_rec(
    mat: &[Vec<Polynomial>],
    mask: u32,
    dim: usize,
    memo: &mut std::collections::HashMap<u32, Polynomial>,
) -> Polynomial {
    if mask == 0 {
        return Polynomial::one(dim);
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let n = mat.len();
    let row = n - mask.count_ones() as usize;
    let mut acc = Polynomial::zero(dim);
    let mut sign_positive = true;
    for col in 0..n {
        let bit = 1u32 << col;
        if mask & bit == 0 {
            continue;
        }
        let entry = &mat[row][col];
        if !entry.is_zero() {
            let sub = poly_det_rec(mat, mask & !bit, dim, memo);
            let term = entry * &sub;
            acc = if sign_positive { &acc + &term } else { &acc - &term };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(mask, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{rat_int, rat_vec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(entries: &[&[i64]]) -> SymRatMatrix {
        let rows: Vec<Vec<Rat>> = entries
            .iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        SymRatMatrix::from_dense(&rows).unwrap()
    }

    /// Leibniz-formula determinant, the independent oracle for small sizes.
    fn det_leibniz(m: &SymRatMatrix) -> Rat {
        fn perms(n: usize) -> Vec<(Vec<usize>, i64)> {
            if n == 1 {
                return vec![(vec![0], 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut q: Vec<usize> = p.iter().map(|&v| v + 1).collect();
                    q.insert(pos, 0);
                    let sign = if pos % 2 == 0 { s } else { -s };
                    out.push((q, sign));
                }
            }
            out
        }
        let n = m.size();
        let mut acc = Rat::zero();
        for (p, s) in perms(n) {
            let mut term = rat_int(s);
            for (i, &j) in p.iter().enumerate() {
                term *= m.get(i, j);
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn psd_certificates_on_small_matrices() {
        let id = dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id.psd_certificate().verdict, PsdVerdict::PositiveDefinite);

        let rank1 = dense(&[&[1, 1], &[1, 1]]);
        let cert = rank1.psd_certificate();
        assert_eq!(cert.verdict, PsdVerdict::PositiveSemidefinite);
        assert_eq!(cert.pivots.len(), 1);

        let indef = dense(&[&[0, 1], &[1, 0]]);
        let cert = indef.psd_certificate();
        assert_eq!(cert.verdict, PsdVerdict::NotPsd);
        assert!(cert.witness_valid(&indef));

        let neg = dense(&[&[2, 0], &[0, -3]]);
        let cert = neg.psd_certificate();
        assert_eq!(cert.verdict, PsdVerdict::NotPsd);
        assert!(cert.witness_valid(&neg));
    }

    #[test]
    fn witness_found_after_elimination_steps() {
        // indefiniteness only visible after one elimination step
        let m = dense(&[&[1, 2], &[2, 1]]);
        let cert = m.psd_certificate();
        assert_eq!(cert.verdict, PsdVerdict::NotPsd);
        assert!(cert.witness_valid(&m));
        assert_eq!(m.det(), rat_int(-3));
    }

    #[test]
    fn determinant_matches_leibniz_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let n = 1 + (trial % 5) as usize;
            let mut rows = vec![vec![Rat::zero(); n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rat_int(rng.gen_range(-4..=4));
                    rows[i][j] = v.clone();
                    rows[j][i] = v;
                }
            }
            let m = SymRatMatrix::from_dense(&rows).unwrap();
            assert_eq!(m.det(), det_leibniz(&m), "trial {trial}");
        }
    }

    #[test]
    fn psd_verdict_matches_eigen_structure_on_random_diagonal_congruences() {
        // D diagonal with known inertia, congruped by random unit
        // triangular T: inertia is preserved, so the verdict is known.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let n = 2 + (trial % 4) as usize;
            let diag: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=3)).collect();
            let mut t = vec![vec![Rat::zero(); n]; n];
            for i in 0..n {
                t[i][i] = rat_int(1);
                for j in 0..i {
                    t[i][j] = rat_int(rng.gen_range(-2..=2));
                }
            }
            // M = T D T^T
            let mut rows = vec![vec![Rat::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rat::zero();
                    for l in 0..n {
                        acc += &t[i][l] * rat_int(diag[l]) * &t[j][l];
                    }
                    rows[i][j] = acc;
                }
            }
            let m = SymRatMatrix::from_dense(&rows).unwrap();
            let cert = m.psd_certificate();
            let has_neg = diag.iter().any(|&d| d < 0);
            let has_zero = diag.iter().any(|&d| d == 0);
            let expect = if has_neg {
                PsdVerdict::NotPsd
            } else if has_zero {
                PsdVerdict::PositiveSemidefinite
            } else {
                PsdVerdict::PositiveDefinite
            };
            assert_eq!(cert.verdict, expect, "trial {trial} diag {diag:?}");
            if expect == PsdVerdict::NotPsd {
                assert!(cert.witness_valid(&m), "trial {trial}");
            }
        }
    }

    #[test]
    fn zero_diagonal_determinants_need_pair_pivots() {
        let m = dense(&[&[0, 5], &[5, 0]]);
        assert_eq!(m.det(), rat_int(-25));
        let m = dense(&[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]]);
        assert_eq!(m.det(), det_leibniz(&m));
        let m = dense(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 0]]);
        assert_eq!(m.det(), det_leibniz(&m));
    }

    #[test]
    fn asymmetry_rejected() {
        let rows = vec![rat_vec(&[1, 2]), rat_vec(&[3, 4])];
        assert!(matches!(
            SymRatMatrix::from_dense(&rows),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn poly_det_matches_rational_det_after_evaluation() {
        let x = |i| Polynomial::variable(2, i).unwrap();
        let zero = Polynomial::zero(2);
        let mat = vec![
            vec![&x(1) + &x(2), -&x(1), zero.clone()],
            vec![-&x(1), &x(1) + &x(2), -&x(2)],
            vec![zero.clone(), -&x(2), x(2)],
        ];
        let d = poly_det(&mat).unwrap();
        let point = rat_vec(&[3, 5]);
        let dense_rows: Vec<Vec<Rat>> = mat
            .iter()
            .map(|r| r.iter().map(|p| p.eval(&point)).collect())
            .collect();
        let m = SymRatMatrix::from_dense(&dense_rows).unwrap();
        assert_eq!(d.eval(&point), m.det());
    }

    #[test]
    fn quadratic_form_evaluates() {
        let m = dense(&[&[1, 2], &[2, 1]]);
        let v = rat_vec(&[1, -1]);
        assert_eq!(m.quadratic_form(&v), rat_int(-2));
    }
}
