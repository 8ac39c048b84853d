//! The Clifford algebra `Cl(p, β^r)` over `R`, the embeddings of
//! `so(p, β^r)` and of `k` into it, and the spin module `Λp⁻` with its
//! Clifford and `k` actions.

use std::collections::BTreeMap;
use std::fmt;

use crate::lie::{LieFamily, QuadraticSpaceFamily};
use crate::matrix::PolyMatrix;
use crate::poly::{Coeff, Poly};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Strictly increasing index word over the `p`-basis; the normal form
/// under the relation `γ(X)γ(Y) + γ(Y)γ(X) = β(X,Y)·1` (no factor 2).
pub type ClWord = Vec<usize>;

/// Element of the Clifford algebra in normal form.
#[derive(Clone, PartialEq, Debug)]
pub struct CliffordElement<C: Coeff = Poly> {
    terms: BTreeMap<ClWord, C>,
}

impl<C: Coeff> CliffordElement<C> {
    pub fn zero() -> Self {
        CliffordElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CliffordElement::term(vec![], C::one())
    }

    pub fn term(word: ClWord, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        CliffordElement { terms }
    }

    /// `γ(e_i)`.
    pub fn generator(i: usize) -> Self {
        CliffordElement::term(vec![i], C::one())
    }

    /// `γ` of a coefficient vector over the `p`-basis.
    pub fn gamma_vector(coeffs: &[C]) -> Self {
        let mut out = CliffordElement::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_term(vec![i], c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClWord, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &ClWord) -> C {
        self.terms.get(word).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, word: ClWord, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get(&word).map(|c| c.add_ref(&coeff)) {
            Some(sum) => {
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    self.terms.insert(word, sum);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = CliffordElement::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul_ref(c));
        }
        out
    }

    /// Normal-form product under the anticommutation rewriting.
    pub fn mul(&self, other: &Self, q: &QuadraticSpaceFamily) -> Self {
        let half = Scalar::from_ratio(1, 2);
        let mut out = CliffordElement::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                let mut work = vec![(word, ca.mul_ref(cb))];
                while let Some((w, c)) = work.pop() {
                    if c.is_zero() {
                        continue;
                    }
                    let clash = (0..w.len().saturating_sub(1)).find(|&k| w[k] >= w[k + 1]);
                    match clash {
                        None => out.add_term(w, c),
                        Some(k) if w[k] == w[k + 1] => {
                            // γ(e)² = ½β(e,e)
                            let mut dropped = w.clone();
                            dropped.drain(k..k + 2);
                            let norm = q.form[(w[k], w[k])].scale(&half);
                            work.push((dropped, c.mul_ref(&C::from_poly(&norm))));
                        }
                        Some(k) => {
                            let mut swapped = w.clone();
                            swapped.swap(k, k + 1);
                            let mut dropped = w.clone();
                            dropped.drain(k..k + 2);
                            let pairing = &q.form[(w[k], w[k + 1])];
                            work.push((dropped, c.mul_ref(&C::from_poly(pairing))));
                            work.push((swapped, c.neg_ref()));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self, q: &QuadraticSpaceFamily) -> Self {
        self.mul(other, q).sub(&other.mul(self, q))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> CliffordElement<D> {
        let mut out = CliffordElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn display<'a>(&'a self, q: &'a QuadraticSpaceFamily) -> ClDisplay<'a, C> {
        ClDisplay { elt: self, q }
    }
}

pub struct ClDisplay<'a, C: Coeff> {
    elt: &'a CliffordElement<C>,
    q: &'a QuadraticSpaceFamily,
}

impl<C: Coeff + fmt::Display> fmt::Display for ClDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elt.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, coeff) in &self.elt.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for &i in word {
                write!(f, "·γ({})", self.q.labels[i])?;
            }
        }
        Ok(())
    }
}

/// A `β^r`-antisymmetric operator on `p`, as a matrix in the `p`-basis
/// (column convention: `T(e_j) = Σ_i matrix[i][j]·e_i`).
#[derive(Clone, PartialEq, Debug)]
pub struct SoOperator {
    pub matrix: PolyMatrix,
}

impl SoOperator {
    /// `β(Tu, v) + β(u, Tv) = 0`, i.e. `MᵀB + BM = 0`.
    pub fn is_antisymmetric(&self, q: &QuadraticSpaceFamily) -> bool {
        let mt_b = self.matrix.transpose().mul(&q.form);
        let b_m = q.form.mul(&self.matrix);
        mt_b.add(&b_m).is_zero()
    }

    pub fn commutator(&self, other: &SoOperator) -> SoOperator {
        SoOperator {
            matrix: self
                .matrix
                .mul(&other.matrix)
                .add(&other.matrix.mul(&self.matrix).scale(&Poly::from_int(-1))),
        }
    }
}

/// The rank-≤2 operator `R_{β,a,b}(v) = β(b,v)·a − β(a,v)·b`; such
/// operators span `so(p, β^r)`.
pub fn so_from_pair(a_idx: usize, b_idx: usize, q: &QuadraticSpaceFamily) -> SoOperator {
    let n = q.rank();
    let matrix = PolyMatrix::from_fn(n, n, |i, j| {
        let mut entry = Poly::zero();
        if i == a_idx {
            entry = entry.add(&q.form[(b_idx, j)]);
        }
        if i == b_idx {
            entry = entry.sub(&q.form[(a_idx, j)]);
        }
        entry
    });
    SoOperator { matrix }
}

/// The Lie-algebra embedding `so(p, β^r) → Cl(p, β^r)`.
///
/// Every antisymmetric `T` decomposes through a `β`-dual pair of bases as
/// `T = ½·Σ_i R_{T e_i, e'_i}`, and `R_{a,b} ↦ ½[γ(a), γ(b)]`, so
/// `φ(T) = ¼·Σ_i [γ(T e_i), γ(e'_i)]` — coordinate-free, no square roots.
pub fn phi(t: &SoOperator, q: &QuadraticSpaceFamily) -> Result<CliffordElement> {
    if !t.is_antisymmetric(q) {
        return Err(Error::NotAntisymmetric);
    }
    let n = q.rank();
    if n == 0 {
        return Ok(CliffordElement::zero());
    }
    let inv = q
        .form
        .inverse_if_unimodular()
        .ok_or_else(|| Error::DegenerateForm("β^r is not unimodular".to_string()))?;
    let quarter = Poly::constant(Scalar::from_ratio(1, 4));
    let mut acc = CliffordElement::zero();
    for i in 0..n {
        let te_i = CliffordElement::gamma_vector(&t.matrix.column(i));
        // e'_i = Σ_k inv[k][i]·e_k
        let dual = CliffordElement::gamma_vector(&inv.column(i));
        acc = acc.add(&te_i.commutator(&dual, q));
    }
    Ok(acc.scale(&quarter))
}

/// The matrix of `ad X|_p` in the `p`-basis, for a compact generator `X`.
pub fn ad_on_p(x_idx: usize, fam: &LieFamily) -> Result<SoOperator> {
    if !fam.is_compact(x_idx) {
        return Err(Error::InvalidInput(format!(
            "{} is not a k-generator",
            fam.label(x_idx)
        )));
    }
    let p_idx = fam.noncompact_indices();
    let pos_of: BTreeMap<usize, usize> = p_idx.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    let mut matrix = PolyMatrix::zero(p_idx.len(), p_idx.len());
    for (j, &pj) in p_idx.iter().enumerate() {
        for (k, c) in fam.bracket(x_idx, pj) {
            let i = *pos_of
                .get(&k)
                .ok_or_else(|| Error::InvalidFamily("[k,p] ⊄ p".to_string()))?;
            matrix[(i, j)] = c;
        }
    }
    Ok(SoOperator { matrix })
}

/// The action of `k` on the Clifford algebra: `α = φ ∘ ad|_p`.
pub fn alpha(x_idx: usize, fam: &LieFamily, q: &QuadraticSpaceFamily) -> Result<CliffordElement> {
    phi(&ad_on_p(x_idx, fam)?, q)
}

/// Element of the spin module `Λp⁻`: strictly increasing words over the
/// `p⁻` index set. `epsilon` selects one of the two odd-rank module
/// structures and is ignored in even rank.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinVector<C: Coeff = Poly> {
    pub terms: BTreeMap<ClWord, C>,
    pub epsilon: i8,
}

impl<C: Coeff> SpinVector<C> {
    pub fn zero() -> Self {
        SpinVector {
            terms: BTreeMap::new(),
            epsilon: 1,
        }
    }

    /// The vacuum vector `1 ∈ Λ⁰p⁻`.
    pub fn vacuum() -> Self {
        SpinVector::term(vec![], C::one(), 1)
    }

    pub fn term(word: ClWord, coeff: C, epsilon: i8) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        SpinVector { terms, epsilon }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: ClWord, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get(&word).map(|c| c.add_ref(&coeff)) {
            Some(sum) => {
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    self.terms.insert(word, sum);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = SpinVector {
            terms: BTreeMap::new(),
            epsilon: self.epsilon,
        };
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg_ref());
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum IsoClass {
    Minus,
    Plus,
    Zero,
}

fn classify(q: &QuadraticSpaceFamily) -> Result<Vec<IsoClass>> {
    if !q.has_split() {
        return Err(Error::MissingIsotropicSplit);
    }
    let mut classes = vec![None; q.rank()];
    for &i in &q.iso_minus {
        classes[i] = Some(IsoClass::Minus);
    }
    for &i in &q.iso_plus {
        classes[i] = Some(IsoClass::Plus);
    }
    for &i in &q.iso_zero {
        classes[i] = Some(IsoClass::Zero);
    }
    classes
        .into_iter()
        .map(|c| c.ok_or(Error::MissingIsotropicSplit))
        .collect()
}

/// Action of a single Clifford generator on the spin module:
/// wedge for `p⁻`, the degree −1 graded derivation pairing by `β^r` for
/// `p⁺`, and the `±ε` parity sign for the odd generator.
fn generator_act<C: Coeff>(
    gen: usize,
    class: IsoClass,
    s: &SpinVector<C>,
    q: &QuadraticSpaceFamily,
) -> SpinVector<C> {
    let mut out = SpinVector {
        terms: BTreeMap::new(),
        epsilon: s.epsilon,
    };
    for (word, coeff) in &s.terms {
        match class {
            IsoClass::Minus => {
                // γ(e)·w = e ∧ w
                match word.binary_search(&gen) {
                    Ok(_) => {}
                    Err(pos) => {
                        let mut w = word.clone();
                        w.insert(pos, gen);
                        let c = if pos % 2 == 0 { coeff.clone() } else { coeff.neg_ref() };
                        out.add_term(w, c);
                    }
                }
            }
            IsoClass::Plus => {
                for (j, &wj) in word.iter().enumerate() {
                    let pairing = &q.form[(gen, wj)];
                    if pairing.is_zero() {
                        continue;
                    }
                    let mut w = word.clone();
                    w.remove(j);
                    let c = coeff.mul_ref(&C::from_poly(pairing));
                    out.add_term(w, if j % 2 == 0 { c } else { c.neg_ref() });
                }
            }
            IsoClass::Zero => {
                let sign = if word.len() % 2 == 0 { s.epsilon } else { -s.epsilon };
                let c = if sign >= 0 { coeff.clone() } else { coeff.neg_ref() };
                out.add_term(word.clone(), c);
            }
        }
    }
    out
}

/// The spin-module action of a Clifford element.
pub fn spin_act<C: Coeff>(
    c: &CliffordElement<C>,
    s: &SpinVector<C>,
    q: &QuadraticSpaceFamily,
) -> Result<SpinVector<C>> {
    let classes = classify(q)?;
    let mut out = SpinVector {
        terms: BTreeMap::new(),
        epsilon: s.epsilon,
    };
    for (word, coeff) in c.terms() {
        let mut acc = s.scale(coeff);
        for &g in word.iter().rev() {
            acc = generator_act(g, classes[g], &acc, q);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Monomial basis of `Λp⁻`: all strictly increasing words over the `p⁻`
/// index set, ordered by degree then lexicographically.
pub fn spin_basis(q: &QuadraticSpaceFamily) -> Vec<ClWord> {
    let gens = {
        let mut g = q.iso_minus.clone();
        g.sort_unstable();
        g
    };
    let mut out: Vec<ClWord> = vec![vec![]];
    for &g in &gens {
        let mut extended: Vec<ClWord> = out
            .iter()
            .map(|w| {
                let mut v = w.clone();
                v.push(g);
                v
            })
            .collect();
        out.append(&mut extended);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// The `t`-weight of each exterior-monomial basis vector of `Λp⁻` under
/// the `α`-action (the weights of the spin double cover; half-integral
/// values are possible in general). Errors if the action is not diagonal
/// on the monomial basis.
pub fn spin_weights(
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<Vec<(Vec<Scalar>, ClWord)>> {
    let cartan = fam.cartan.as_ref().ok_or(Error::MissingCartan)?;
    let basis = spin_basis(q);
    let alphas: Vec<CliffordElement> = cartan
        .t
        .iter()
        .map(|&h| alpha(h, fam, q))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for word in &basis {
        let vector = SpinVector::term(word.clone(), Poly::one(), 1);
        let mut weight = Vec::new();
        for a in &alphas {
            let image = spin_act(a, &vector, q)?;
            let mut value = Poly::zero();
            for (w, c) in &image.terms {
                if w == word {
                    value = c.clone();
                } else if !c.is_zero() {
                    return Err(Error::SpinActionNotDiagonal(format!(
                        "monomial {word:?} maps onto {w:?}"
                    )));
                }
            }
            match value.degree() {
                None => weight.push(Scalar::zero()),
                Some(0) => weight.push(value.coeff(0)),
                Some(_) => {
                    return Err(Error::SpinActionNotDiagonal(format!(
                        "non-constant weight {value} on {word:?}"
                    )))
                }
            }
        }
        out.push((weight, word.clone()));
    }
    Ok(out)
}
