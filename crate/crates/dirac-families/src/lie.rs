//! Algebraic families of Lie algebras over `R = K[t]` with Cartan
//! involution and invariant form, and the deformation-like families
//! `g_(n) = k ⊕ tⁿ·p` inside a constant family.

use std::collections::BTreeMap;
use std::fmt;

use crate::matrix::PolyMatrix;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Eigenspace tag of the Cartan involution θ: +1 on `Compact` (k),
/// −1 on `Noncompact` (p).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Compact,
    Noncompact,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasisElement {
    pub label: String,
    pub kind: Kind,
}

/// Optional θ-stable triangular decomposition data. All fields are lists of
/// basis indices: `g = n⁻ ⊕ h ⊕ n⁺` with `h = t ⊕ a`, `t = h ∩ k`,
/// `a = h ∩ p`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CartanData {
    pub n_minus: Vec<usize>,
    pub h: Vec<usize>,
    pub n_plus: Vec<usize>,
    pub t: Vec<usize>,
    pub a: Vec<usize>,
}

/// A finite free `R`-module with labeled basis, structure constants in `R`,
/// a Cartan involution (through the basis tags) and a symmetric invariant
/// form. Houses the families `g_(n) = k ⊕ tⁿ·p`; `n_deform = 0` is the
/// constant family.
#[derive(Clone, Debug)]
pub struct LieFamily {
    pub basis: Vec<BasisElement>,
    /// `(i, j) → [(k, c)]` for i < j only: `[b_i, b_j] = Σ c·b_k`.
    structure: BTreeMap<(usize, usize), Vec<(usize, Poly)>>,
    pub n_deform: u32,
    /// The fixed generator `r = tⁿ` of the ideal scaling `p`.
    pub r_generator: Poly,
    /// Symmetric form on the full basis.
    pub form: PolyMatrix,
    pub cartan: Option<CartanData>,
    /// Weyl-group elements as invertible scalar matrices acting on the
    /// `h`-basis (column convention: `w(h_j) = Σ_i w[i][j]·h_i`).
    pub weyl: Option<Vec<Vec<Vec<Scalar>>>>,
}

/// One failed validation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

impl LieFamily {
    /// Build a family from the brackets of the ordered basis pairs. The map
    /// may mention either orientation; antisymmetry fills in the rest.
    pub fn new(
        basis: Vec<BasisElement>,
        brackets: Vec<(usize, usize, Vec<(usize, Poly)>)>,
        n_deform: u32,
        form: PolyMatrix,
        cartan: Option<CartanData>,
        weyl: Option<Vec<Vec<Vec<Scalar>>>>,
    ) -> Self {
        let mut structure = BTreeMap::new();
        for (i, j, terms) in brackets {
            let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
            let stored: Vec<(usize, Poly)> = terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, if flip { c.neg() } else { c }))
                .collect();
            if !stored.is_empty() {
                structure.insert(key, stored);
            }
        }
        LieFamily {
            basis,
            structure,
            n_deform,
            r_generator: Poly::monomial(Scalar::one(), n_deform),
            form,
            cartan,
            weyl,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn is_compact(&self, i: usize) -> bool {
        self.basis[i].kind == Kind::Compact
    }

    /// Indices of the compact part `k`.
    pub fn compact_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_compact(i)).collect()
    }

    /// Indices of the noncompact part `p`.
    pub fn noncompact_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_compact(i)).collect()
    }

    /// `[b_i, b_j]` as a list of `(k, coefficient)`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Poly)> {
        if i == j {
            return vec![];
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.structure.get(&key) {
            None => vec![],
            Some(terms) => terms
                .iter()
                .map(|(k, c)| (*k, if flip { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// Replace one stored bracket; used by tests to corrupt families.
    pub fn set_bracket(&mut self, i: usize, j: usize, terms: Vec<(usize, Poly)>) {
        assert!(i < j, "store brackets with i < j");
        if terms.is_empty() {
            self.structure.remove(&(i, j));
        } else {
            self.structure.insert((i, j), terms);
        }
    }

    /// Bracket of two coefficient vectors: `[Σ x_i b_i, Σ y_j b_j]`.
    pub fn bracket_vectors(&self, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.rank()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket(i, j) {
                    out[k] = out[k].add(&xi.mul(yj).mul(&c));
                }
            }
        }
        out
    }

    /// `β(Σ x_i b_i, Σ y_j b_j)`.
    pub fn form_vectors(&self, x: &[Poly], y: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc = acc.add(&xi.mul(yj).mul(&self.form[(i, j)]));
            }
        }
        acc
    }

    /// PBW generator order: `n⁻` block, then `h`, then `n⁺` when Cartan data
    /// exists (declaration order within blocks); plain declaration order
    /// otherwise. Returns `positions[decl_index] = pbw_position`.
    pub fn pbw_positions(&self) -> Vec<usize> {
        let mut order: Vec<usize> = match &self.cartan {
            Some(c) => c
                .n_minus
                .iter()
                .chain(c.h.iter())
                .chain(c.n_plus.iter())
                .copied()
                .collect(),
            None => (0..self.rank()).collect(),
        };
        if order.len() != self.rank() {
            order = (0..self.rank()).collect();
        }
        let mut positions = vec![0; self.rank()];
        for (pos, idx) in order.iter().enumerate() {
            positions[*idx] = pos;
        }
        positions
    }

    /// Run every family invariant and report all failures.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.rank();
        let basis_vec = |i: usize| {
            let mut v = vec![Poly::zero(); n];
            v[i] = Poly::one();
            v
        };

        // Bracket targets land in the correct θ-eigenspace; this is the
        // θ-automorphism property in basis form.
        for i in 0..n {
            for j in (i + 1)..n {
                let same = self.is_compact(i) == self.is_compact(j);
                for (k, c) in self.bracket(i, j) {
                    if c.is_zero() {
                        continue;
                    }
                    let ok = if same { self.is_compact(k) } else { !self.is_compact(k) };
                    if !ok {
                        out.push(Diagnostic {
                            check: "theta-grading",
                            detail: format!(
                                "[{}, {}] hits {} outside the θ-eigenspace",
                                self.label(i),
                                self.label(j),
                                self.label(k)
                            ),
                        });
                    }
                }
            }
        }

        // Jacobi identity on all basis triples.
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (bi, bj, bk) = (basis_vec(i), basis_vec(j), basis_vec(k));
                    let t1 = self.bracket_vectors(&bi, &self.bracket_vectors(&bj, &bk));
                    let t2 = self.bracket_vectors(&bj, &self.bracket_vectors(&bk, &bi));
                    let t3 = self.bracket_vectors(&bk, &self.bracket_vectors(&bi, &bj));
                    let sum: Vec<Poly> = t1
                        .iter()
                        .zip(&t2)
                        .zip(&t3)
                        .map(|((a, b), c)| a.add(b).add(c))
                        .collect();
                    if sum.iter().any(|p| !p.is_zero()) {
                        out.push(Diagnostic {
                            check: "jacobi",
                            detail: format!(
                                "Jacobi fails on ({}, {}, {})",
                                self.label(i),
                                self.label(j),
                                self.label(k)
                            ),
                        });
                    }
                }
            }
        }

        // Form symmetry and θ-orthogonality β(k, p) = 0.
        for i in 0..n {
            for j in 0..n {
                if self.form[(i, j)] != self.form[(j, i)] {
                    out.push(Diagnostic {
                        check: "form-symmetric",
                        detail: format!("β({0},{1}) ≠ β({1},{0})", self.label(i), self.label(j)),
                    });
                }
                if self.is_compact(i) != self.is_compact(j) && !self.form[(i, j)].is_zero() {
                    out.push(Diagnostic {
                        check: "form-theta-orthogonal",
                        detail: format!("β({}, {}) ≠ 0 across k ⊥ p", self.label(i), self.label(j)),
                    });
                }
            }
        }

        // g-invariance β([X,Y],Z) = β(X,[Y,Z]) on all basis triples; taking
        // X ∈ k this is also the infinitesimal K-equivariance of the form.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (bi, bj, bk) = (basis_vec(i), basis_vec(j), basis_vec(k));
                    let lhs = self.form_vectors(&self.bracket_vectors(&bi, &bj), &bk);
                    let rhs = self.form_vectors(&bi, &self.bracket_vectors(&bj, &bk));
                    if lhs != rhs {
                        out.push(Diagnostic {
                            check: "form-invariant",
                            detail: format!(
                                "β([{0},{1}],{2}) ≠ β({0},[{1},{2}])",
                                self.label(i),
                                self.label(j),
                                self.label(k)
                            ),
                        });
                    }
                }
            }
        }

        // Cartan partition sanity.
        if let Some(c) = &self.cartan {
            let mut seen = vec![false; n];
            for &idx in c.n_minus.iter().chain(c.h.iter()).chain(c.n_plus.iter()) {
                if idx >= n || seen[idx] {
                    out.push(Diagnostic {
                        check: "cartan-partition",
                        detail: format!("index {idx} repeated or out of range"),
                    });
                } else {
                    seen[idx] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                out.push(Diagnostic {
                    check: "cartan-partition",
                    detail: "n⁻ ∪ h ∪ n⁺ does not cover the basis".to_string(),
                });
            }
            let t_ok = c.t.iter().all(|&i| c.h.contains(&i) && self.is_compact(i));
            let a_ok = c.a.iter().all(|&i| c.h.contains(&i) && !self.is_compact(i));
            if !t_ok || !a_ok || c.t.len() + c.a.len() != c.h.len() {
                out.push(Diagnostic {
                    check: "cartan-split",
                    detail: "h must split as t ⊔ a with t compact and a noncompact".to_string(),
                });
            }
            for &hi in &c.h {
                for &hj in &c.h {
                    if hi < hj && !self.bracket(hi, hj).is_empty() {
                        out.push(Diagnostic {
                            check: "cartan-abelian",
                            detail: format!("[{}, {}] ≠ 0", self.label(hi), self.label(hj)),
                        });
                    }
                }
            }
        }

        out
    }

    /// Structure constants with `t` specialized to a scalar (the fiber of
    /// the family at that point). Returns `(i, j, k) → scalar` for i < j.
    pub fn fiber_structure(&self, at: &Scalar) -> BTreeMap<(usize, usize, usize), Scalar> {
        let mut out = BTreeMap::new();
        for ((i, j), terms) in &self.structure {
            for (k, c) in terms {
                let v = c.eval(at);
                if !v.is_zero() {
                    out.insert((*i, *j, *k), v);
                }
            }
        }
        out
    }
}

/// Build `g_(n)` from a constant family: keep the compact basis, rescale the
/// noncompact basis by `tⁿ`. Brackets `[k,p]` keep their constants in the
/// new basis, `[p,p]` gains `t^{2n}`, and the form gains `t^{2n}` on `p×p`.
pub fn build_deformation_family(constant: &LieFamily, n: u32) -> Result<LieFamily> {
    if constant.n_deform != 0 {
        return Err(Error::InvalidFamily(
            "input must be a constant family (n = 0)".to_string(),
        ));
    }
    let diags = constant.validate();
    if !diags.is_empty() {
        return Err(Error::InvalidFamily(diags[0].to_string()));
    }
    for terms in constant.structure.values() {
        for (_, c) in terms {
            if c.degree().map(|d| d > 0).unwrap_or(false) {
                return Err(Error::InvalidFamily(
                    "constant family must have degree-0 structure constants".to_string(),
                ));
            }
        }
    }
    if n == 0 {
        return Ok(constant.clone());
    }
    let t2n = Poly::monomial(Scalar::one(), 2 * n);
    let rank = constant.rank();
    let mut brackets = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            let terms = constant.bracket(i, j);
            if terms.is_empty() {
                continue;
            }
            let both_noncompact = !constant.is_compact(i) && !constant.is_compact(j);
            let scaled: Vec<(usize, Poly)> = terms
                .into_iter()
                .map(|(k, c)| (k, if both_noncompact { c.mul(&t2n) } else { c }))
                .collect();
            brackets.push((i, j, scaled));
        }
    }
    let form = PolyMatrix::from_fn(rank, rank, |i, j| {
        let e = constant.form[(i, j)].clone();
        if !constant.is_compact(i) && !constant.is_compact(j) {
            e.mul(&t2n)
        } else {
            e
        }
    });
    Ok(LieFamily::new(
        constant.basis.clone(),
        brackets,
        n,
        form,
        constant.cartan.clone(),
        constant.weyl.clone(),
    ))
}

/// A family of quadratic spaces `(p, β^r)` with user-supplied dual maximal
/// isotropic subspaces `p⁻`, `p⁺` and, in odd rank, the line `p⁰`.
/// Indices refer to the `p`-sub-basis (0-based over the noncompact part).
#[derive(Clone, Debug)]
pub struct QuadraticSpaceFamily {
    pub labels: Vec<String>,
    pub form: PolyMatrix,
    pub iso_minus: Vec<usize>,
    pub iso_plus: Vec<usize>,
    pub iso_zero: Vec<usize>,
}

impl QuadraticSpaceFamily {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// A rank-0 space is vacuously split.
    pub fn has_split(&self) -> bool {
        self.iso_minus.len() + self.iso_plus.len() + self.iso_zero.len() == self.rank()
    }

    /// Checks the isotropic-split invariants; a family without split data
    /// (empty index sets) passes vacuously and only supports Clifford
    /// arithmetic, not spin actions.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let covered = self.iso_minus.len() + self.iso_plus.len() + self.iso_zero.len();
        if covered == 0 {
            return out;
        }
        if covered != self.rank() || self.iso_zero.len() > 1 {
            out.push(Diagnostic {
                check: "iso-cover",
                detail: "p⁻ ⊔ p⁺ ⊔ p⁰ must cover the basis with |p⁰| ≤ 1".to_string(),
            });
            return out;
        }
        for set in [&self.iso_minus, &self.iso_plus] {
            for &i in set {
                for &j in set {
                    if !self.form[(i, j)].is_zero() {
                        out.push(Diagnostic {
                            check: "iso-isotropic",
                            detail: format!("β^r({}, {}) ≠ 0", self.labels[i], self.labels[j]),
                        });
                    }
                }
            }
        }
        // Pairing p⁻ × p⁺ invertible over R (determinant a nonzero scalar).
        if self.iso_minus.len() == self.iso_plus.len() && !self.iso_minus.is_empty() {
            let pairing = PolyMatrix::from_fn(self.iso_minus.len(), self.iso_plus.len(), |a, b| {
                self.form[(self.iso_minus[a], self.iso_plus[b])].clone()
            });
            if !pairing.det().is_unit() {
                out.push(Diagnostic {
                    check: "iso-pairing",
                    detail: "pairing between p⁻ and p⁺ is not invertible over R".to_string(),
                });
            }
        } else if self.iso_minus.len() != self.iso_plus.len() {
            out.push(Diagnostic {
                check: "iso-pairing",
                detail: "p⁻ and p⁺ must have equal rank".to_string(),
            });
        }
        if let Some(&z) = self.iso_zero.first() {
            for &i in self.iso_minus.iter().chain(self.iso_plus.iter()) {
                if !self.form[(z, i)].is_zero() {
                    out.push(Diagnostic {
                        check: "iso-zero-orthogonal",
                        detail: format!("β^r({}, {}) ≠ 0", self.labels[z], self.labels[i]),
                    });
                }
            }
            if self.form[(z, z)] != Poly::from_int(2) {
                out.push(Diagnostic {
                    check: "iso-zero-norm",
                    detail: format!("β^r(e₀,e₀) = {} ≠ 2", self.form[(z, z)]),
                });
            }
        }
        out
    }
}

/// The rescaled form `β^r = β|_p / r²` on the noncompact part.
/// Errors when some `p×p` entry is not divisible by `r²`.
pub fn rescaled_form(fam: &LieFamily) -> Result<QuadraticSpaceFamily> {
    rescaled_form_with_iso(fam, &[], &[], &[])
}

/// As [`rescaled_form`], attaching user-supplied isotropic data (indices
/// into the `p`-sub-basis).
pub fn rescaled_form_with_iso(
    fam: &LieFamily,
    iso_minus: &[usize],
    iso_plus: &[usize],
    iso_zero: &[usize],
) -> Result<QuadraticSpaceFamily> {
    let p_idx = fam.noncompact_indices();
    let r2 = fam.r_generator.mul(&fam.r_generator);
    let mut form = PolyMatrix::zero(p_idx.len(), p_idx.len());
    for (a, &i) in p_idx.iter().enumerate() {
        for (b, &j) in p_idx.iter().enumerate() {
            let entry = &fam.form[(i, j)];
            form[(a, b)] = entry.div_exact(&r2).map_err(|_| {
                Error::NonDivisibleFormEntry(format!(
                    "β({}, {}) = {}",
                    fam.label(i),
                    fam.label(j),
                    entry
                ))
            })?;
        }
    }
    let q = QuadraticSpaceFamily {
        labels: p_idx.iter().map(|&i| fam.label(i).to_string()).collect(),
        form,
        iso_minus: iso_minus.to_vec(),
        iso_plus: iso_plus.to_vec(),
        iso_zero: iso_zero.to_vec(),
    };
    // β^r must be unimodular (orthogonalizable over R up to unit scalars):
    // all Smith invariant factors are units.
    if q.rank() > 0 && q.form.inverse_if_unimodular().is_none() {
        return Err(Error::DegenerateForm(
            "rescaled form on p is not unimodular over R".to_string(),
        ));
    }
    let diags = q.validate();
    if !diags.is_empty() {
        return Err(Error::InvalidFamily(diags[0].to_string()));
    }
    Ok(q)
}

/// Half-sums of positive roots and their squared norms for the constant
/// fiber, via the dual of `β|_h` evaluated at `t = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoData {
    /// ρ on the `h`-basis (order of `cartan.h`).
    pub rho: Vec<Scalar>,
    /// ρ_k on the `t`-basis (order of `cartan.t`).
    pub rho_k: Vec<Scalar>,
    pub rho_norm_sq: Scalar,
    pub rho_k_norm_sq: Scalar,
}

/// The constant-fiber root of `v` (a basis vector of `n⁺` or `n⁻`) under a
/// Cartan basis vector `h_i`: the family-basis eigencoefficient divided by
/// `r` when `h_i` is noncompact.
fn root_value(fam: &LieFamily, h_idx: usize, v_idx: usize) -> Result<Scalar> {
    let terms = fam.bracket(h_idx, v_idx);
    let mut value = Poly::zero();
    for (k, c) in terms {
        if k == v_idx {
            value = c;
        } else if !c.is_zero() {
            return Err(Error::AdjointNotDiagonal(format!(
                "[{}, {}] has a component on {}",
                fam.label(h_idx),
                fam.label(v_idx),
                fam.label(k)
            )));
        }
    }
    let value = if fam.is_compact(h_idx) {
        value
    } else {
        value.div_exact(&fam.r_generator).map_err(|_| {
            Error::AdjointNotDiagonal(format!(
                "a-part eigencoefficient of [{}, {}] is not divisible by r",
                fam.label(h_idx),
                fam.label(v_idx)
            ))
        })?
    };
    match value.degree() {
        None => Ok(Scalar::zero()),
        Some(0) => Ok(value.coeff(0)),
        Some(_) => Err(Error::AdjointNotDiagonal(format!(
            "root value of [{}, {}] is not constant",
            fam.label(h_idx),
            fam.label(v_idx)
        ))),
    }
}

/// Solve the scalar linear system `m·x = b` by Gaussian elimination.
fn solve_scalar_system(m: &[Vec<Scalar>], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = b.len();
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::DegenerateForm("singular Cartan form".to_string()))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].inv()?;
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = &aug[r][col] * &inv;
            for c in col..=n {
                let delta = &factor * &aug[col][c];
                aug[r][c] = &aug[r][c] - &delta;
            }
        }
    }
    (0..n).map(|r| Ok(&aug[r][n] * &aug[r][r].inv()?)).collect()
}

/// ρ, ρ_k and their β-dual norms from the degree-0 fiber.
pub fn compute_rho_data(fam: &LieFamily) -> Result<RhoData> {
    let cartan = fam.cartan.as_ref().ok_or(Error::MissingCartan)?;
    let one = Scalar::one();
    let half = Scalar::from_ratio(1, 2);

    // ρ = ½ Σ_{v ∈ n⁺} root(v), as a functional on the h-basis.
    let mut rho = vec![Scalar::zero(); cartan.h.len()];
    let mut rho_k = vec![Scalar::zero(); cartan.t.len()];
    for &v in &cartan.n_plus {
        for (pos, &h_idx) in cartan.h.iter().enumerate() {
            let val = root_value(fam, h_idx, v)?;
            rho[pos] = &rho[pos] + &(&half * &val);
        }
        if fam.is_compact(v) {
            for (pos, &t_idx) in cartan.t.iter().enumerate() {
                let val = root_value(fam, t_idx, v)?;
                rho_k[pos] = &rho_k[pos] + &(&half * &val);
            }
        }
    }

    // Norms via the dual form: solve β(t_ρ, ·) = ρ on the constant fiber.
    let norm_sq = |indices: &[usize], functional: &[Scalar]| -> Result<Scalar> {
        if indices.is_empty() {
            return Ok(Scalar::zero());
        }
        let m: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| fam.form[(i, j)].eval(&one)).collect())
            .collect();
        let coords = solve_scalar_system(&m, functional)?;
        let mut acc = Scalar::zero();
        for (f, c) in functional.iter().zip(&coords) {
            acc = &acc + &(f * c);
        }
        Ok(acc)
    };

    let rho_norm_sq = norm_sq(&cartan.h, &rho)?;
    let rho_k_norm_sq = norm_sq(&cartan.t, &rho_k)?;
    Ok(RhoData {
        rho,
        rho_k,
        rho_norm_sq,
        rho_k_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn deformation_brackets_match() {
        let fam = sl2::sl2_family(1).unwrap();
        let (h, x, y) = (0, 1, 2);
        assert_eq!(fam.bracket(h, x), vec![(x, Poly::from_int(2))]);
        assert_eq!(fam.bracket(h, y), vec![(y, Poly::from_int(-2))]);
        assert_eq!(fam.bracket(x, y), vec![(h, Poly::monomial(s(1), 2))]);
        // antisymmetry through the accessor
        assert_eq!(fam.bracket(y, x), vec![(h, Poly::monomial(s(-1), 2))]);

        let fam2 = sl2::sl2_family(2).unwrap();
        assert_eq!(fam2.bracket(x, y), vec![(h, Poly::monomial(s(1), 4))]);

        let fam0 = sl2::sl2_family(0).unwrap();
        assert_eq!(fam0.bracket(x, y), vec![(h, Poly::one())]);
    }

    #[test]
    fn deformation_output_validates() {
        for n in [0, 1, 2] {
            let fam = sl2::sl2_family(n).unwrap();
            assert!(fam.validate().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn fibers_specialize() {
        let fam = sl2::sl2_family(1).unwrap();
        // t := 1 recovers the sl2 constants; t := 0 the motion fiber.
        let at1 = fam.fiber_structure(&Scalar::one());
        assert_eq!(at1.get(&(1, 2, 0)), Some(&s(1)));
        let at0 = fam.fiber_structure(&Scalar::zero());
        assert_eq!(at0.get(&(1, 2, 0)), None);
        assert_eq!(at0.get(&(0, 1, 1)), Some(&s(2)));
    }

    #[test]
    fn rescaled_form_examples() {
        for n in [1u32, 2] {
            let fam = sl2::sl2_family(n).unwrap();
            let q = sl2::sl2_quadratic(&fam).unwrap();
            assert_eq!(q.form[(0, 1)], Poly::from_int(4));
            assert_eq!(q.form[(1, 0)], Poly::from_int(4));
            assert!(q.form[(0, 0)].is_zero() && q.form[(1, 1)].is_zero());
            // r²·β^r = β|_p entrywise
            let r2 = fam.r_generator.mul(&fam.r_generator);
            let p = fam.noncompact_indices();
            for (a, &i) in p.iter().enumerate() {
                for (b, &j) in p.iter().enumerate() {
                    assert_eq!(q.form[(a, b)].mul(&r2), fam.form[(i, j)]);
                }
            }
        }
        // constant family: unchanged
        let fam0 = sl2::sl2_family(0).unwrap();
        let q0 = sl2::sl2_quadratic(&fam0).unwrap();
        assert_eq!(q0.form[(0, 1)], Poly::from_int(4));
    }

    #[test]
    fn malformed_family_rejected() {
        let fam = sl2::sl2_family(1).unwrap();
        let mut bad = fam.clone();
        // p×p entry not divisible by r² = t².
        bad.form[(1, 2)] = Poly::one();
        bad.form[(2, 1)] = Poly::one();
        assert!(matches!(
            rescaled_form(&bad),
            Err(Error::NonDivisibleFormEntry(_))
        ));
    }

    #[test]
    fn rho_data_sl2() {
        let fam = sl2::sl2_family(1).unwrap();
        let rho = compute_rho_data(&fam).unwrap();
        assert_eq!(rho.rho, vec![s(1)]);
        assert!(rho.rho_k.iter().all(Scalar::is_zero));
        assert_eq!(rho.rho_norm_sq, Scalar::from_ratio(1, 8));
        assert_eq!(rho.rho_k_norm_sq, Scalar::zero());
    }

    #[test]
    fn rho_data_abelian() {
        let fam = abelian_family();
        let rho = compute_rho_data(&fam).unwrap();
        assert!(rho.rho.iter().all(Scalar::is_zero));
        assert_eq!(rho.rho_norm_sq, Scalar::zero());
    }

    #[test]
    fn rho_data_block_sum() {
        let fam = sl2::sl2_block_pair_family(1).unwrap();
        let rho = compute_rho_data(&fam).unwrap();
        assert_eq!(rho.rho_norm_sq, Scalar::from_ratio(1, 4));
        assert_eq!(rho.rho_k_norm_sq, Scalar::zero());
    }

    #[test]
    fn validate_flags_corruptions() {
        let fam = sl2::sl2_family(1).unwrap();
        assert!(fam.validate().is_empty());

        // Corrupt one form entry: β([x,y],h) ≠ β(x,[y,h]).
        let mut bad = fam.clone();
        bad.form[(0, 0)] = Poly::from_int(7);
        assert!(bad.validate().iter().any(|d| d.check == "form-invariant"));

        // Corrupt a bracket: Jacobi violation.
        let mut bad2 = fam.clone();
        bad2.set_bracket(0, 1, vec![(1, Poly::from_int(3))]);
        assert!(bad2.validate().iter().any(|d| d.check == "jacobi"));

        // Bracket landing in the wrong θ-eigenspace.
        let mut bad3 = fam;
        bad3.set_bracket(1, 2, vec![(1, Poly::one())]);
        assert!(bad3.validate().iter().any(|d| d.check == "theta-grading"));
    }

    /// One-generator abelian family, all compact, identity form.
    fn abelian_family() -> LieFamily {
        LieFamily::new(
            vec![BasisElement {
                label: "z".to_string(),
                kind: Kind::Compact,
            }],
            vec![],
            0,
            PolyMatrix::identity(1),
            Some(CartanData {
                n_minus: vec![],
                h: vec![0],
                n_plus: vec![],
                t: vec![0],
                a: vec![],
            }),
            None,
        )
    }
}
