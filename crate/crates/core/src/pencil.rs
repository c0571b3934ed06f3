//! Integer symmetric pencils `B_1, ..., B_n` realizing the hyperbolicity
//! cone of `e_{k+1}` as a semidefinite slice, exact cone membership, and the
//! derivative-cone pencils obtained from products of linear forms.
//!
//! The pencil for `(n, k)` is the reduced weighted Laplacian of the word
//! graph at weight parameter `r = k`, with the sink row/column deleted and
//! the coefficient of each variable collected into one matrix. The deleted
//! vertex and the vertex order are fixed, so the matrices are canonical and
//! exported files are reproducible byte for byte.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::WordGraph;
use crate::linalg::{PsdCertificate, PsdVerdict, SymRatMatrix};
use crate::poly::{factor_product_eval, Polynomial};
use crate::util::ones;
use crate::{Int, Rat};

/// Cone membership of a point, decided exactly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConeVerdict {
    Interior,
    Boundary,
    Outside,
}

impl ConeVerdict {
    /// Boundary points belong to the (closed) cone.
    pub fn is_member(self) -> bool {
        !matches!(self, ConeVerdict::Outside)
    }

    pub fn from_psd(v: PsdVerdict) -> Self {
        match v {
            PsdVerdict::PositiveDefinite => ConeVerdict::Interior,
            PsdVerdict::PositiveSemidefinite => ConeVerdict::Boundary,
            PsdVerdict::NotPsd => ConeVerdict::Outside,
        }
    }
}

impl fmt::Display for ConeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeVerdict::Interior => write!(f, "INTERIOR"),
            ConeVerdict::Boundary => write!(f, "BOUNDARY"),
            ConeVerdict::Outside => write!(f, "OUTSIDE"),
        }
    }
}

/// Sparse symmetric integer matrix; only the upper triangle is stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymIntMatrix {
    size: usize,
    upper: BTreeMap<(usize, usize), Int>,
}

impl SymIntMatrix {
    pub fn zeros(size: usize) -> Self {
        SymIntMatrix {
            size,
            upper: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add(&mut self, i: usize, j: usize, v: &Int) {
        if v.is_zero() {
            return;
        }
        let key = (i.min(j), i.max(j));
        let entry = self.upper.entry(key).or_insert_with(Int::zero);
        *entry += v;
        if entry.is_zero() {
            self.upper.remove(&key);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        let key = (i.min(j), i.max(j));
        self.upper.get(&key).cloned().unwrap_or_else(Int::zero)
    }

    /// Upper-triangle entries `((row, col), value)` with `row <= col`, sorted.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Int)> {
        self.upper.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn to_rat_matrix(&self) -> SymRatMatrix {
        let mut m = SymRatMatrix::zeros(self.size);
        for (&(i, j), v) in &self.upper {
            m.add_sym(i, j, &Rat::from_integer(v.clone()));
        }
        m
    }
}

/// Where a pencil came from; serialized alongside the matrices.
#[derive(Clone, PartialEq, Debug)]
pub struct Provenance {
    /// "elementary" for the direct construction, "derivative-cone" or
    /// "substitution" for pencils obtained by a linear change of variables.
    pub kind: String,
    /// Variable count of the underlying elementary pencil.
    pub base_n: usize,
    pub deleted_vertex: String,
    pub vertex_order: Vec<String>,
    /// `det(sum_j x_j B_j) = constant * F(x)` where `F` is the factor
    /// product of the underlying `(base_n, k)` construction, composed with
    /// the substitution when one was applied.
    pub constant: Rat,
    /// Positive integer by which all matrices were scaled to clear
    /// denominators introduced by a substitution; 1 for direct builds.
    pub scale: Int,
}

/// An ordered family of symmetric integer matrices `B_1, ..., B_n`
/// representing the map `x -> sum_j x_j B_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct Pencil {
    n: usize,
    k: usize,
    m: usize,
    matrices: Vec<SymIntMatrix>,
    provenance: Provenance,
}

impl Pencil {
    /// The pencil for the hyperbolicity cone of `e_{k+1}(x_1,..,x_n)`.
    ///
    /// `k = 0` is allowed as the degenerate halfspace `e_1 >= 0` (a 1x1
    /// pencil); the derivative-cone construction needs it for the highest
    /// derivative order.
    pub fn elementary(n: usize, k: usize) -> Result<Self> {
        let graph = WordGraph::build(n, k)?;
        let weights = graph.edge_weights(k)?;
        debug_assert!(weights.all_linear_forms());
        let sink = graph.sink_index();
        let m = graph.vertex_count() - 1;
        let mut matrices = vec![SymIntMatrix::zeros(m); n];
        for e in graph.edges() {
            let w = weights.weight(e.id);
            for (mono, coef) in w.numerator().terms() {
                let powers = mono.powers();
                assert!(powers.len() == 1 && powers[0].1 == 1, "linear-form weight");
                let var = powers[0].0 as usize - 1;
                assert!(coef.denom().is_one() && coef.numer().is_positive());
                let c = coef.numer().clone();
                let b = &mut matrices[var];
                // sink row/column is deleted; z is last so indices carry over
                if e.b == sink {
                    b.add(e.a, e.a, &c);
                } else {
                    b.add(e.a, e.a, &c);
                    b.add(e.b, e.b, &c);
                    b.add(e.a, e.b, &(-c));
                }
            }
        }
        let mut vertex_order = graph.vertex_labels();
        vertex_order.pop(); // drop z, it indexes nothing in the pencil
        let mut pencil = Pencil {
            n,
            k,
            m,
            matrices,
            provenance: Provenance {
                kind: "elementary".to_string(),
                base_n: n,
                deleted_vertex: "z".to_string(),
                vertex_order,
                constant: Rat::zero(),
                scale: Int::one(),
            },
        };
        // the determinant constant, fixed by one exact evaluation at all-ones
        let det_at_ones = pencil.det_at(&ones(n));
        let product_at_ones = factor_product_eval(n, k, &ones(n))?;
        pencil.provenance.constant = det_at_ones / product_at_ones;
        assert!(pencil.provenance.constant.is_positive());
        Ok(pencil)
    }

    /// Reassembles a pencil from parts (deserialization); trusts the caller.
    pub fn from_parts(
        n: usize,
        k: usize,
        m: usize,
        matrices: Vec<SymIntMatrix>,
        provenance: Provenance,
    ) -> Result<Self> {
        if matrices.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrices.len(),
            });
        }
        for b in &matrices {
            if b.size() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: b.size(),
                });
            }
        }
        Ok(Pencil {
            n,
            k,
            m,
            matrices,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrices(&self) -> &[SymIntMatrix] {
        &self.matrices
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `det(sum_j x_j B_j) / constant` is the factor product; see
    /// [`Provenance::constant`].
    pub fn constant(&self) -> &Rat {
        &self.provenance.constant
    }

    /// `sum_j x_j B_j` with exact rational entries.
    pub fn eval(&self, x: &[Rat]) -> Result<SymRatMatrix> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut m = SymRatMatrix::zeros(self.m);
        for (b, xj) in self.matrices.iter().zip(x) {
            if xj.is_zero() {
                continue;
            }
            for (&(r, c), v) in b.entries() {
                m.add_sym(r, c, &(xj * Rat::from_integer(v.clone())));
            }
        }
        Ok(m)
    }

    /// `sum_j B_j`, the pencil at the all-ones point.
    pub fn sum_matrix(&self) -> SymRatMatrix {
        self.eval(&ones(self.n)).expect("dimension is fixed")
    }

    pub fn det_at(&self, x: &[Rat]) -> Rat {
        self.eval(x).expect("dimension checked by caller").det()
    }

    /// Exact membership of `x` in the spectrahedral cone.
    pub fn membership(&self, x: &[Rat]) -> Result<ConeVerdict> {
        Ok(self.membership_certificate(x)?.0)
    }

    /// Membership plus the elimination certificate that proves it.
    pub fn membership_certificate(&self, x: &[Rat]) -> Result<(ConeVerdict, PsdCertificate)> {
        let m = self.eval(x)?;
        let cert = m.psd_certificate();
        Ok((ConeVerdict::from_psd(cert.verdict), cert))
    }

    /// The symbolic matrix `sum_j x_j B_j`; entries are linear forms.
    pub fn symbolic_matrix(&self) -> Vec<Vec<Polynomial>> {
        let mut rows = vec![vec![Polynomial::zero(self.n); self.m]; self.m];
        for (j, b) in self.matrices.iter().enumerate() {
            let var = Polynomial::variable(self.n, j as u32 + 1).expect("in range");
            for (&(r, c), v) in b.entries() {
                let term = var.scaled(&Rat::from_integer(v.clone()));
                rows[r][c] = &rows[r][c] + &term;
                if r != c {
                    rows[c][r] = &rows[c][r] + &term;
                }
            }
        }
        rows
    }

    /// Linear change of variables: the new pencil has
    /// `A_i = sum_j T[j][i] B_j`, so its symbolic matrix is the old one with
    /// `x_j` replaced by the `j`-th coordinate of `T x`. Rational `T` entries
    /// are cleared by one common positive integer scale, which leaves the
    /// cone unchanged.
    pub fn substitute(&self, t: &[Vec<Rat>]) -> Result<Pencil> {
        self.substitute_with_kind(t, "substitution")
    }

    fn substitute_with_kind(&self, t: &[Vec<Rat>], kind: &str) -> Result<Pencil> {
        if t.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: t.len(),
            });
        }
        let n_new = t.first().map_or(0, Vec::len);
        if n_new == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for row in t {
            if row.len() != n_new {
                return Err(Error::DimensionMismatch {
                    expected: n_new,
                    got: row.len(),
                });
            }
        }
        let mut scale = Int::one();
        for row in t {
            for v in row {
                scale = scale.lcm(v.denom());
            }
        }
        let scale_rat = Rat::from_integer(scale.clone());
        let mut matrices = vec![SymIntMatrix::zeros(self.m); n_new];
        for (j, b) in self.matrices.iter().enumerate() {
            for (i, a) in matrices.iter_mut().enumerate() {
                let coef = &t[j][i] * &scale_rat;
                debug_assert!(coef.denom().is_one());
                let coef = coef.numer().clone();
                if coef.is_zero() {
                    continue;
                }
                for (&(r, c), v) in b.entries() {
                    a.add(r, c, &(v * &coef));
                }
            }
        }
        // det(sum_i x_i A_i) = scale^m * det(base pencil at T x)
        let mut constant = self.provenance.constant.clone();
        for _ in 0..self.m {
            constant *= &scale_rat;
        }
        Ok(Pencil {
            n: n_new,
            k: self.k,
            m: self.m,
            matrices,
            provenance: Provenance {
                kind: kind.to_string(),
                base_n: self.provenance.base_n,
                deleted_vertex: self.provenance.deleted_vertex.clone(),
                vertex_order: self.provenance.vertex_order.clone(),
                constant,
                scale: &self.provenance.scale * &scale,
            },
        })
    }

    /// Pencil for the hyperbolicity cone of the `kderiv`-th directional
    /// derivative (in direction `e`) of the product of the given linear
    /// forms: substitute the forms into the elementary pencil of parameters
    /// `(d, d - kderiv - 1)`.
    pub fn derivative_cone(forms: &LinearFormsSystem, kderiv: usize) -> Result<Pencil> {
        let d = forms.d();
        if kderiv < 1 || kderiv + 1 > d {
            return Err(Error::KOutOfRange {
                n: d,
                k: kderiv,
                min: 1,
                max: d.saturating_sub(1),
            });
        }
        let base = Pencil::elementary(d, d - kderiv - 1)?;
        base.substitute_with_kind(forms.rows(), "derivative-cone")
    }
}

/// A family of linear forms `l_1, ..., l_d` on `R^n` together with a base
/// point `e` at which all of them are strictly positive. Forms are
/// sign-normalized at construction; a form vanishing at `e` is rejected.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearFormsSystem {
    rows: Vec<Vec<Rat>>,
    base: Vec<Rat>,
}

impl LinearFormsSystem {
    pub fn new(rows: Vec<Vec<Rat>>, base: Vec<Rat>) -> Result<Self> {
        let n = base.len();
        if rows.is_empty() || n == 0 {
            return Err(Error::Parse("empty linear-forms system".into()));
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for (index, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            let at_base: Rat = row.iter().zip(&base).map(|(c, e)| c * e).sum();
            if at_base.is_zero() {
                return Err(Error::InadmissibleBasePoint { index });
            }
            if at_base.is_negative() {
                normalized.push(row.iter().map(|c| -c.clone()).collect());
            } else {
                normalized.push(row);
            }
        }
        Ok(LinearFormsSystem {
            rows: normalized,
            base,
        })
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    /// `(l_1(x), ..., l_d(x))`.
    pub fn eval_forms(&self, x: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
            .collect()
    }

    pub fn form_polynomial(&self, j: usize) -> Polynomial {
        Polynomial::linear_form(&self.rows[j])
    }

    /// The product `h = l_1 * ... * l_d`, positive at the base point.
    pub fn product_polynomial(&self) -> Polynomial {
        let mut h = Polynomial::one(self.n());
        for j in 0..self.d() {
            h = &h * &self.form_polynomial(j);
        }
        h
    }
}
