//! PBW-normal-form arithmetic in the universal enveloping algebra of a
//! family, Casimir elements, the Harish-Chandra projection and
//! homomorphism, infinitesimal characters, and Verma-like families.

use std::collections::BTreeMap;
use std::fmt;

use crate::lie::{CartanData, LieFamily};
use crate::poly::{Coeff, Poly};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// PBW monomial: exponent per basis generator, indexed by declaration
/// order. The normal form places generators in PBW order
/// (`n⁻ < h < n⁺` when Cartan data exists).
pub type PbwMono = Vec<u32>;

/// Element of `U(g)` in PBW normal form, generic over the coefficient ring
/// so the same engine serves `R = K[t]` and its localization.
#[derive(Clone, PartialEq, Debug)]
pub struct UeElement<C: Coeff = Poly> {
    terms: BTreeMap<PbwMono, C>,
}

impl<C: Coeff> UeElement<C> {
    pub fn zero() -> Self {
        UeElement { terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        UeElement::monomial(vec![0; rank], C::one())
    }

    pub fn monomial(mono: PbwMono, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        UeElement { terms }
    }

    /// The generator `b_i`.
    pub fn generator(i: usize, rank: usize) -> Self {
        let mut mono = vec![0; rank];
        mono[i] = 1;
        UeElement::monomial(mono, C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &PbwMono) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, mono: PbwMono, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.get(&mono).map(|c| c.add_ref(&coeff));
        match entry {
            Some(sum) => {
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UeElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = UeElement::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_ref(c));
        }
        out
    }

    /// Expand a PBW monomial into the generator word it stands for,
    /// ordered by ascending PBW position.
    fn word_of(mono: &PbwMono, positions: &[usize]) -> Vec<usize> {
        let mut indices: Vec<usize> = (0..mono.len()).filter(|&i| mono[i] > 0).collect();
        indices.sort_by_key(|&i| positions[i]);
        let mut word = Vec::new();
        for i in indices {
            for _ in 0..mono[i] {
                word.push(i);
            }
        }
        word
    }

    fn mono_of(word: &[usize], rank: usize) -> PbwMono {
        let mut mono = vec![0; rank];
        for &i in word {
            mono[i] += 1;
        }
        mono
    }

    /// Product in normal form. Rewrites with
    /// `b_i·b_j = b_j·b_i + [b_i, b_j]` until every word respects the PBW
    /// order of `fam`.
    pub fn mul(&self, other: &Self, fam: &LieFamily) -> Self {
        let rank = fam.rank();
        let positions = fam.pbw_positions();
        let mut out = UeElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut word = Self::word_of(ma, &positions);
                word.extend(Self::word_of(mb, &positions));
                let coeff = ca.mul_ref(cb);
                let mut work = vec![(word, coeff)];
                while let Some((w, c)) = work.pop() {
                    if c.is_zero() {
                        continue;
                    }
                    let inversion = (0..w.len().saturating_sub(1))
                        .find(|&k| positions[w[k]] > positions[w[k + 1]]);
                    match inversion {
                        None => out.add_term(Self::mono_of(&w, rank), c),
                        Some(k) => {
                            let mut swapped = w.clone();
                            swapped.swap(k, k + 1);
                            for (target, cb2) in fam.bracket(w[k], w[k + 1]) {
                                let mut shorter = w.clone();
                                shorter.remove(k + 1);
                                shorter[k] = target;
                                work.push((shorter, c.mul_ref(&C::from_poly(&cb2))));
                            }
                            work.push((swapped, c));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32, fam: &LieFamily) -> Self {
        let mut acc = UeElement::one(fam.rank());
        for _ in 0..e {
            acc = acc.mul(self, fam);
        }
        acc
    }

    pub fn commutator(&self, other: &Self, fam: &LieFamily) -> Self {
        self.mul(other, fam).sub(&other.mul(self, fam))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> UeElement<D> {
        let mut out = UeElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn display<'a>(&'a self, fam: &'a LieFamily) -> UeDisplay<'a, C> {
        UeDisplay { elt: self, fam }
    }
}

pub struct UeDisplay<'a, C: Coeff> {
    elt: &'a UeElement<C>,
    fam: &'a LieFamily,
}

impl<C: Coeff + fmt::Display> fmt::Display for UeDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elt.is_zero() {
            return write!(f, "0");
        }
        let positions = self.fam.pbw_positions();
        let mut first = true;
        for (mono, coeff) in &self.elt.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            let mut indices: Vec<usize> = (0..mono.len()).filter(|&i| mono[i] > 0).collect();
            indices.sort_by_key(|&i| positions[i]);
            for i in indices {
                if mono[i] == 1 {
                    write!(f, "·{}", self.fam.label(i))?;
                } else {
                    write!(f, "·{}^{}", self.fam.label(i), mono[i])?;
                }
            }
        }
        Ok(())
    }
}

/// `Σ_i e'_i·e_i` over a β-dual pair of bases of the span of `indices`
/// (a θ-homogeneous block), with the form given by `form_lookup`.
fn block_casimir(
    fam: &LieFamily,
    indices: &[usize],
    form: &crate::matrix::PolyMatrix,
) -> Result<UeElement> {
    if indices.is_empty() {
        return Ok(UeElement::zero());
    }
    let inv = form.inverse_if_unimodular().ok_or_else(|| {
        Error::DegenerateForm("block form is not unimodular over R".to_string())
    })?;
    let rank = fam.rank();
    let mut acc = UeElement::zero();
    for (a, &i) in indices.iter().enumerate() {
        // e'_i = Σ_b inv[b][a]·e_b, so e'_i·e_i = Σ_b inv[b][a]·(e_b·e_i).
        let ei = UeElement::generator(i, rank);
        let mut dual = UeElement::zero();
        for (b, &j) in indices.iter().enumerate() {
            dual = dual.add(&UeElement::generator(j, rank).scale(&inv[(b, a)]));
        }
        acc = acc.add(&dual.mul(&ei, fam));
    }
    Ok(acc)
}

/// The `k`-part Casimir `Ω(k, β_k)` of the family, an element of
/// `U(k) ⊂ U(g)` (no `r²` factor).
pub fn compact_casimir(fam: &LieFamily) -> Result<UeElement> {
    let k_idx = fam.compact_indices();
    let form = crate::matrix::PolyMatrix::from_fn(k_idx.len(), k_idx.len(), |a, b| {
        fam.form[(k_idx[a], k_idx[b])].clone()
    });
    block_casimir(fam, &k_idx, &form)
}

/// The `p`-part Casimir `Ω(p_r, β^r)` in the family basis.
pub fn noncompact_casimir(fam: &LieFamily) -> Result<UeElement> {
    let p_idx = fam.noncompact_indices();
    if p_idx.is_empty() {
        return Ok(UeElement::zero());
    }
    let q = crate::lie::rescaled_form(fam)?;
    block_casimir(fam, &p_idx, &q.form)
}

/// The Casimir `Ω(g, β, r) = r²·Ω(k, β_k) + Ω(p_r, β^r)` of the family,
/// in PBW normal form. Central in `U(g)`.
pub fn casimir(fam: &LieFamily) -> Result<UeElement> {
    let r2 = fam.r_generator.mul(&fam.r_generator);
    let k_part = compact_casimir(fam)?.scale(&r2);
    let p_part = noncompact_casimir(fam)?;
    Ok(k_part.add(&p_part))
}

/// Image of the Harish-Chandra projection: an element of the symmetric
/// algebra `S(h)`, stored as a `UeElement` supported on `h`-monomials.
#[derive(Clone, PartialEq, Debug)]
pub struct HcImage(pub UeElement);

impl HcImage {
    pub fn as_ue(&self) -> &UeElement {
        &self.0
    }

    /// Evaluate at a functional on `h` (the `hat` homomorphism
    /// `S(h) → R`): substitute `h_i ↦ values[i]`.
    pub fn eval_at(&self, fam: &LieFamily, values: &[Poly]) -> Result<Poly> {
        let cartan = fam.cartan.as_ref().ok_or(Error::MissingCartan)?;
        let mut acc = Poly::zero();
        for (mono, coeff) in self.0.terms() {
            let mut term = coeff.clone();
            for (pos, &h_idx) in cartan.h.iter().enumerate() {
                for _ in 0..mono[h_idx] {
                    term = term.mul(&values[pos]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Product inside `S(h)` (the generators commute).
    pub fn mul(&self, other: &HcImage, fam: &LieFamily) -> HcImage {
        HcImage(self.0.mul(&other.0, fam))
    }
}

fn cartan_of(fam: &LieFamily) -> Result<&CartanData> {
    fam.cartan.as_ref().ok_or(Error::MissingCartan)
}

/// Drop every PBW monomial containing an `n⁻` or `n⁺` generator, keeping
/// the pure Cartan part: the projection along
/// `n⁻·U(g) + U(g)·n⁺` onto `S(h)`.
pub fn hc_project(z: &UeElement, fam: &LieFamily) -> Result<HcImage> {
    let cartan = cartan_of(fam)?;
    let mut keep = UeElement::zero();
    'mono: for (mono, coeff) in z.terms() {
        for &i in cartan.n_minus.iter().chain(cartan.n_plus.iter()) {
            if mono[i] > 0 {
                continue 'mono;
            }
        }
        keep.add_term(mono.clone(), coeff.clone());
    }
    Ok(HcImage(keep))
}

/// ρ as a family-coordinate functional on the `h`-basis: the constant
/// fiber value, times `r` on the `a`-part generators.
pub fn rho_family_values(fam: &LieFamily) -> Result<Vec<Poly>> {
    let cartan = cartan_of(fam)?;
    let rho = crate::lie::compute_rho_data(fam)?;
    Ok(cartan
        .h
        .iter()
        .zip(&rho.rho)
        .map(|(&h_idx, v)| {
            let base = Poly::constant(v.clone());
            if fam.is_compact(h_idx) {
                base
            } else {
                base.mul(&fam.r_generator)
            }
        })
        .collect())
}

/// Substitute each Cartan generator by a linear combination of Cartan
/// generators plus a constant: `h_j ↦ Σ_i coeffs[i][j]·h_i + shift[j]`.
/// Everything commutes, so the expansion happens inside `S(h)`.
fn substitute_cartan(
    img: &UeElement,
    fam: &LieFamily,
    coeffs: &[Vec<Scalar>],
    shift: &[Poly],
) -> Result<UeElement> {
    let cartan = cartan_of(fam)?;
    let rank = fam.rank();
    let mut out = UeElement::zero();
    for (mono, coeff) in img.terms() {
        let mut acc = UeElement::one(rank);
        for (pos_j, &h_j) in cartan.h.iter().enumerate() {
            if mono[h_j] == 0 {
                continue;
            }
            let mut lin = UeElement::monomial(vec![0; rank], shift[pos_j].clone());
            for (pos_i, &h_i) in cartan.h.iter().enumerate() {
                let c = coeffs[pos_i][pos_j].clone();
                if !c.is_zero() {
                    lin = lin.add(&UeElement::generator(h_i, rank).scale(&Poly::constant(c)));
                }
            }
            acc = acc.mul(&lin.pow(mono[h_j], fam), fam);
        }
        out = out.add(&acc.scale(coeff));
    }
    Ok(out)
}

/// Multiply each monomial coefficient by `r^(total noncompact degree)`,
/// re-expressing a family-coordinate element in constant-family
/// coordinates of `g_(0)` (the inclusion `U(g_(n)) ⊆ U(g_(0))`).
pub fn to_constant_coordinates(z: &UeElement, fam: &LieFamily) -> UeElement {
    let mut out = UeElement::zero();
    for (mono, coeff) in z.terms() {
        let nc_degree: u32 = (0..fam.rank())
            .filter(|&i| !fam.is_compact(i))
            .map(|i| mono[i])
            .sum();
        let mut factor = Poly::one();
        for _ in 0..nc_degree {
            factor = factor.mul(&fam.r_generator);
        }
        out.add_term(mono.clone(), coeff.mul(&factor));
    }
    out
}

fn check_weyl_invariance(img: &UeElement, fam: &LieFamily) -> Result<()> {
    let Some(weyl) = &fam.weyl else {
        return Ok(());
    };
    let cartan = cartan_of(fam)?;
    // Invariance is a statement in constant coordinates.
    let constant = to_constant_coordinates(img, fam);
    let zero_shift = vec![Poly::zero(); cartan.h.len()];
    for w in weyl {
        let moved = substitute_cartan(&constant, fam, w, &zero_shift)?;
        if moved != constant {
            return Err(Error::NotWeylInvariant);
        }
    }
    Ok(())
}

/// The Harish-Chandra homomorphism: ρ-twist of the projection,
/// `h ↦ h − ρ(h)·1` applied to `hc_project(z)`. Verifies Weyl invariance
/// of the result when Weyl data is present (signals non-central input).
pub fn hc_homomorphism(z: &UeElement, fam: &LieFamily) -> Result<HcImage> {
    let cartan = cartan_of(fam)?;
    let projected = hc_project(z, fam)?;
    let rho = rho_family_values(fam)?;
    let identity: Vec<Vec<Scalar>> = (0..cartan.h.len())
        .map(|i| {
            (0..cartan.h.len())
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect();
    let shift: Vec<Poly> = rho.iter().map(Poly::neg).collect();
    let twisted = substitute_cartan(&projected.0, fam, &identity, &shift)?;
    check_weyl_invariance(&twisted, fam)?;
    Ok(HcImage(twisted))
}

/// Reconstruct the constant family `g_(0)` underlying a deformation-like
/// family: divide the `[p,p]` brackets and the `p×p` form by `r²`.
pub fn constant_counterpart(fam: &LieFamily) -> Result<LieFamily> {
    if fam.n_deform == 0 {
        return Ok(fam.clone());
    }
    let r2 = fam.r_generator.mul(&fam.r_generator);
    let rank = fam.rank();
    let mut brackets = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            let terms = fam.bracket(i, j);
            if terms.is_empty() {
                continue;
            }
            let both_p = !fam.is_compact(i) && !fam.is_compact(j);
            let mut scaled = Vec::new();
            for (k, c) in terms {
                let c = if both_p {
                    c.div_exact(&r2).map_err(|_| {
                        Error::InvalidFamily("p×p bracket not divisible by r²".to_string())
                    })?
                } else {
                    c
                };
                scaled.push((k, c));
            }
            brackets.push((i, j, scaled));
        }
    }
    let mut form = crate::matrix::PolyMatrix::zero(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            let e = fam.form[(i, j)].clone();
            form[(i, j)] = if !fam.is_compact(i) && !fam.is_compact(j) {
                e.div_exact(&r2).map_err(|_| {
                    Error::InvalidFamily("p×p form entry not divisible by r²".to_string())
                })?
            } else {
                e
            };
        }
    }
    Ok(LieFamily::new(
        fam.basis.clone(),
        brackets,
        0,
        form,
        fam.cartan.clone(),
        fam.weyl.clone(),
    ))
}

/// Membership of the Harish-Chandra image in the symmetric algebra of the
/// Cartan subfamily `h_(n) = t ⊕ r·a`: every monomial's coefficient must
/// be divisible by `r^(its a-degree)`. The input element is given in
/// constant-family coordinates.
pub fn hc_subfamily_check(z_constant_coords: &UeElement, fam: &LieFamily) -> Result<bool> {
    let fam0 = constant_counterpart(fam)?;
    let cartan = cartan_of(&fam0)?;
    let img = hc_homomorphism(z_constant_coords, &fam0)?;
    for (mono, coeff) in img.0.terms() {
        let a_degree: u32 = cartan.a.iter().map(|&i| mono[i]).sum();
        if a_degree == 0 {
            continue;
        }
        let mut needed = Poly::one();
        for _ in 0..a_degree {
            needed = needed.mul(&fam.r_generator);
        }
        if coeff.div_exact(&needed).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A functional on the Cartan subfamily, one `R`-value per `h`-basis
/// element (in `cartan.h` order). Defined up to the Weyl action.
#[derive(Clone, PartialEq, Debug)]
pub struct InfinitesimalCharacter {
    pub values: Vec<Poly>,
}

impl InfinitesimalCharacter {
    pub fn constant(values: Vec<Scalar>) -> Self {
        InfinitesimalCharacter {
            values: values.into_iter().map(Poly::constant).collect(),
        }
    }

    /// Apply a Weyl element: `(λ∘w)(h_j) = Σ_i w[i][j]·λ(h_i)`.
    pub fn apply_weyl(&self, w: &[Vec<Scalar>]) -> Self {
        let n = self.values.len();
        let values = (0..n)
            .map(|j| {
                let mut acc = Poly::zero();
                for (i, v) in self.values.iter().enumerate() {
                    acc = acc.add(&v.scale(&w[i][j]));
                }
                acc
            })
            .collect();
        InfinitesimalCharacter { values }
    }

    /// Whether `self` and `other` lie in the same Weyl orbit.
    pub fn weyl_conjugate(&self, other: &InfinitesimalCharacter, fam: &LieFamily) -> bool {
        match &fam.weyl {
            None => self == other,
            Some(weyl) => weyl.iter().any(|w| &self.apply_weyl(w) == other),
        }
    }

    /// The sign signature used by the canonical-representative rule: the
    /// first nonzero coefficient in basis order, then ascending degree.
    fn leading_coeff(&self) -> Option<Scalar> {
        for v in &self.values {
            if let Some(d) = v.degree() {
                for k in 0..=d {
                    let c = v.coeff(k);
                    if !c.is_zero() {
                        return Some(c);
                    }
                }
            }
        }
        None
    }

    fn is_canonical_form(&self) -> bool {
        use num_traits::{Signed, Zero};
        match self.leading_coeff() {
            None => true,
            Some(c) => {
                if !c.re.is_zero() {
                    c.re.is_positive()
                } else {
                    c.im.is_positive()
                }
            }
        }
    }

    fn sort_key(&self) -> String {
        self.values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    /// The canonical Weyl-orbit representative: first nonzero coefficient
    /// (basis order, then degree order) with positive real part, ties by
    /// positive imaginary part.
    pub fn canonicalize(&self, fam: &LieFamily) -> InfinitesimalCharacter {
        let orbit: Vec<InfinitesimalCharacter> = match &fam.weyl {
            None => vec![self.clone()],
            Some(weyl) => weyl.iter().map(|w| self.apply_weyl(w)).collect(),
        };
        let mut candidates: Vec<&InfinitesimalCharacter> =
            orbit.iter().filter(|l| l.is_canonical_form()).collect();
        if candidates.is_empty() {
            candidates = orbit.iter().collect();
        }
        candidates
            .into_iter()
            .min_by_key(|l| l.sort_key())
            .cloned()
            .unwrap()
    }
}

/// Solve `ω = r²/8·(λ² − 1)` for a constant-or-polynomial `λ = λ(h)` in
/// `R`, for a family with an sl2-shaped center (single Cartan generator).
/// Returns `None` when `8ω/r² + 1` is not a perfect square in `R`; errors
/// when `ω` is not divisible by `r²`.
pub fn infinitesimal_character_from_casimir_scalar(
    omega: &Poly,
    fam: &LieFamily,
) -> Result<Option<InfinitesimalCharacter>> {
    let cartan = cartan_of(fam)?;
    if cartan.h.len() != 1 || !cartan.a.is_empty() {
        return Err(Error::NotSl2Shaped(
            "casimir-scalar inversion needs a single θ-fixed Cartan generator".to_string(),
        ));
    }
    let r2 = fam.r_generator.mul(&fam.r_generator);
    let scaled = omega
        .scale(&Scalar::from_int(8))
        .div_exact(&r2)
        .map_err(|_| Error::CasimirScalarNotDivisible(omega.to_string()))?;
    let square = scaled.add(&Poly::one());
    match square.sqrt() {
        None => Ok(None),
        Some(root) => Ok(Some(
            InfinitesimalCharacter { values: vec![root] }.canonicalize(fam),
        )),
    }
}

/// A Verma-like module family for a θ-fixed Cartan, materialized up to a
/// truncation degree in the lowering generators.
#[derive(Clone, Debug)]
pub struct VermaModule {
    /// λ on the `t`-basis (equal to the `h`-basis here).
    pub lam: Vec<Poly>,
    pub truncation: usize,
}

/// Vectors are maps from lowering multi-exponents (indexed like PBW
/// monomials, supported on `n⁻`) to coefficients.
pub type VermaVector = BTreeMap<PbwMono, Poly>;

pub fn verma_family(fam: &LieFamily, lam: Vec<Poly>, truncation: usize) -> Result<VermaModule> {
    let cartan = cartan_of(fam)?;
    if !cartan.a.is_empty() || cartan.t.len() != cartan.h.len() {
        return Err(Error::CartanNotThetaFixed);
    }
    if lam.len() != cartan.h.len() {
        return Err(Error::InvalidInput(
            "λ must assign one value per Cartan generator".to_string(),
        ));
    }
    if truncation == 0 {
        return Err(Error::InvalidInput("truncation must be ≥ 1".to_string()));
    }
    Ok(VermaModule { lam, truncation })
}

impl VermaModule {
    /// Basis monomials: lowering exponents of total degree ≤ truncation.
    pub fn basis(&self, fam: &LieFamily) -> Vec<PbwMono> {
        let cartan = fam.cartan.as_ref().expect("verma requires cartan");
        let rank = fam.rank();
        let mut out = vec![vec![0u32; rank]];
        let mut frontier = out.clone();
        for _ in 0..self.truncation {
            let mut next = Vec::new();
            for mono in &frontier {
                for &i in &cartan.n_minus {
                    let mut m = mono.clone();
                    m[i] += 1;
                    if !next.contains(&m) && !out.contains(&m) {
                        next.push(m);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }

    /// Apply a normal-form element of `U(g)` to a module vector: rewrite
    /// the product, kill `n⁺` factors, evaluate Cartan factors at λ, and
    /// keep the lowering part. Errors when the result leaves the
    /// truncation window.
    pub fn apply(&self, z: &UeElement, vec: &VermaVector, fam: &LieFamily) -> Result<VermaVector> {
        let cartan = cartan_of(fam)?;
        let rank = fam.rank();
        let mut out: VermaVector = BTreeMap::new();
        for (vm, vc) in vec {
            let base = UeElement::monomial(vm.clone(), vc.clone());
            let product = z.mul(&base, fam);
            'mono: for (mono, coeff) in product.terms() {
                // n⁺ kills the highest-weight vector.
                for &i in &cartan.n_plus {
                    if mono[i] > 0 {
                        continue 'mono;
                    }
                }
                // Cartan part acts through λ.
                let mut scalar = coeff.clone();
                for (pos, &h_idx) in cartan.h.iter().enumerate() {
                    for _ in 0..mono[h_idx] {
                        scalar = scalar.mul(&self.lam[pos]);
                    }
                }
                let mut lowered = vec![0u32; rank];
                let mut degree = 0u32;
                for &i in &cartan.n_minus {
                    lowered[i] = mono[i];
                    degree += mono[i];
                }
                if degree as usize > self.truncation {
                    return Err(Error::TruncationExceeded(self.truncation));
                }
                if scalar.is_zero() {
                    continue;
                }
                let entry = out.get(&lowered).map(|c| c.add(&scalar)).unwrap_or(scalar);
                if entry.is_zero() {
                    out.remove(&lowered);
                } else {
                    out.insert(lowered, entry);
                }
            }
        }
        Ok(out)
    }

    /// The scalar by which the Casimir acts; verified to be the same on
    /// every basis monomial (quasi-simplicity within the window).
    pub fn casimir_scalar(&self, fam: &LieFamily) -> Result<Poly> {
        let omega = casimir(fam)?;
        let mut scalar: Option<Poly> = None;
        for mono in self.basis(fam) {
            let mut vec: VermaVector = BTreeMap::new();
            vec.insert(mono.clone(), Poly::one());
            let image = self.apply(&omega, &vec, fam)?;
            // Must be a multiple of the same basis monomial.
            for key in image.keys() {
                if key != &mono {
                    return Err(Error::InvalidFamily(
                        "Casimir does not act diagonally on the Verma basis".to_string(),
                    ));
                }
            }
            let value = image.get(&mono).cloned().unwrap_or_else(Poly::zero);
            match &scalar {
                None => scalar = Some(value),
                Some(prev) if *prev != value => {
                    return Err(Error::InvalidFamily(
                        "Casimir scalar differs across the Verma basis".to_string(),
                    ))
                }
                _ => {}
            }
        }
        Ok(scalar.unwrap_or_else(Poly::zero))
    }

    /// The infinitesimal character λ + ρ, cross-checked against the
    /// Casimir scalar through the Harish-Chandra image.
    pub fn infinitesimal_character(&self, fam: &LieFamily) -> Result<InfinitesimalCharacter> {
        let rho = rho_family_values(fam)?;
        let values: Vec<Poly> = self.lam.iter().zip(&rho).map(|(l, r)| l.add(r)).collect();
        let character = InfinitesimalCharacter { values };
        let omega = casimir(fam)?;
        let image = hc_homomorphism(&omega, fam)?;
        let predicted = image.eval_at(fam, &character.values)?;
        let actual = self.casimir_scalar(fam)?;
        if predicted != actual {
            return Err(Error::InvalidFamily(
                "Verma Casimir scalar disagrees with the Harish-Chandra prediction".to_string(),
            ));
        }
        Ok(character)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2;

    fn sl2_fam() -> LieFamily {
        sl2::sl2_family(1).unwrap()
    }

    fn gen(i: usize, fam: &LieFamily) -> UeElement {
        UeElement::generator(i, fam.rank())
    }

    /// Monomial by (y-exp, h-exp, x-exp) in the sl2 declaration order
    /// h = 0, x = 1, y = 2.
    fn mono(y: u32, h: u32, x: u32) -> PbwMono {
        vec![h, x, y]
    }

    #[test]
    fn commutator_gives_bracket() {
        let fam = sl2_fam();
        let (h, x, y) = (gen(0, &fam), gen(1, &fam), gen(2, &fam));
        // x·y − y·x = t²·h
        let c = x.commutator(&y, &fam);
        let mut expect = UeElement::zero();
        expect.add_term(mono(0, 1, 0), Poly::monomial(Scalar::one(), 2));
        assert_eq!(c, expect);
        // 1·a = a
        let one = UeElement::one(fam.rank());
        assert_eq!(one.mul(&h, &fam), h);
    }

    #[test]
    fn associativity_instance() {
        let fam = sl2_fam();
        let (h, x, y) = (gen(0, &fam), gen(1, &fam), gen(2, &fam));
        let lhs = h.mul(&x, &fam).mul(&y, &fam);
        let rhs = h.mul(&x.mul(&y, &fam), &fam);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn casimir_normal_form_sl2() {
        let fam = sl2_fam();
        let omega = casimir(&fam).unwrap();
        // Ω_d = ⅛t²h² + ¼t²h + ½y·x in PBW normal form (y < h < x).
        let mut expect = UeElement::zero();
        expect.add_term(mono(0, 2, 0), Poly::monomial(Scalar::from_ratio(1, 8), 2));
        expect.add_term(mono(0, 1, 0), Poly::monomial(Scalar::from_ratio(1, 4), 2));
        expect.add_term(mono(1, 0, 1), Poly::constant(Scalar::from_ratio(1, 2)));
        assert_eq!(omega, expect);

        // Equivalently, the unnormalized sum ⅛t²h² + ¼x·y + ¼y·x.
        let (h, x, y) = (gen(0, &fam), gen(1, &fam), gen(2, &fam));
        let quarter = Poly::constant(Scalar::from_ratio(1, 4));
        let sum = h
            .mul(&h, &fam)
            .scale(&Poly::monomial(Scalar::from_ratio(1, 8), 2))
            .add(&x.mul(&y, &fam).scale(&quarter))
            .add(&y.mul(&x, &fam).scale(&quarter));
        assert_eq!(omega, sum);
    }

    #[test]
    fn casimir_block_decomposition() {
        // Ω = r²·Ω_k + Ω_p symbolically, and Ω is central.
        for n in [0, 1, 2] {
            let fam = sl2::sl2_family(n).unwrap();
            let omega = casimir(&fam).unwrap();
            let r2 = fam.r_generator.mul(&fam.r_generator);
            let rebuilt = compact_casimir(&fam)
                .unwrap()
                .scale(&r2)
                .add(&noncompact_casimir(&fam).unwrap());
            assert_eq!(omega, rebuilt);
            for i in 0..fam.rank() {
                let g = gen(i, &fam);
                assert!(omega.commutator(&g, &fam).is_zero(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn casimir_abelian_identity_form() {
        use crate::lie::{BasisElement, Kind, LieFamily};
        let fam = LieFamily::new(
            vec![
                BasisElement { label: "a".into(), kind: Kind::Compact },
                BasisElement { label: "b".into(), kind: Kind::Compact },
            ],
            vec![],
            0,
            crate::matrix::PolyMatrix::identity(2),
            None,
            None,
        );
        let omega = casimir(&fam).unwrap();
        let mut expect = UeElement::zero();
        expect.add_term(vec![2, 0], Poly::one());
        expect.add_term(vec![0, 2], Poly::one());
        assert_eq!(omega, expect);
    }

    #[test]
    fn hc_projection_examples() {
        let fam = sl2_fam();
        let omega = casimir(&fam).unwrap();
        let p = hc_project(&omega, &fam).unwrap();
        let mut expect = UeElement::zero();
        expect.add_term(mono(0, 2, 0), Poly::monomial(Scalar::from_ratio(1, 8), 2));
        expect.add_term(mono(0, 1, 0), Poly::monomial(Scalar::from_ratio(1, 4), 2));
        assert_eq!(p.0, expect);

        // P(h^k) = h^k; P(y·h) = 0.
        let hk = UeElement::monomial(mono(0, 3, 0), Poly::one());
        assert_eq!(hc_project(&hk, &fam).unwrap().0, hk);
        let yh = UeElement::monomial(mono(1, 1, 0), Poly::one());
        assert!(hc_project(&yh, &fam).unwrap().0.is_zero());
    }

    #[test]
    fn hc_homomorphism_of_casimir() {
        let fam = sl2_fam();
        let omega = casimir(&fam).unwrap();
        let hc = hc_homomorphism(&omega, &fam).unwrap();
        // t²/8·(h² − 1)
        let mut expect = UeElement::zero();
        expect.add_term(mono(0, 2, 0), Poly::monomial(Scalar::from_ratio(1, 8), 2));
        expect.add_term(mono(0, 0, 0), Poly::monomial(Scalar::from_ratio(-1, 8), 2));
        assert_eq!(hc.0, expect);

        // HC(1) = 1.
        let one = UeElement::one(fam.rank());
        assert_eq!(hc_homomorphism(&one, &fam).unwrap().0, one);

        // Multiplicativity on powers: HC(Ω^k) = HC(Ω)^k for k ≤ 3.
        let mut power = omega.clone();
        let mut image_power = hc.clone();
        for _ in 2..=3 {
            power = power.mul(&omega, &fam);
            image_power = image_power.mul(&hc, &fam);
            let direct = hc_homomorphism(&power, &fam).unwrap();
            assert_eq!(direct.0, image_power.0);
        }
    }

    #[test]
    fn hc_rejects_noncentral() {
        let fam = sl2_fam();
        // h projects to h; its ρ-twist h − 1 is not {±1}-invariant.
        let h = gen(0, &fam);
        assert!(matches!(
            hc_homomorphism(&h, &fam),
            Err(Error::NotWeylInvariant)
        ));
    }

    #[test]
    fn subfamily_check_sl2_and_constant() {
        let fam = sl2_fam();
        let omega0 = casimir(&sl2::sl2_family(0).unwrap()).unwrap();
        // a = 0 for sl2, so membership always holds.
        assert!(hc_subfamily_check(&omega0, &fam).unwrap());
        let fam0 = sl2::sl2_family(0).unwrap();
        assert!(hc_subfamily_check(&omega0, &fam0).unwrap());
    }

    #[test]
    fn subfamily_check_detects_a_part() {
        use crate::lie::{BasisElement, CartanData, Kind, LieFamily};
        // Abelian rank-1 family with a noncompact Cartan generator, n = 1.
        let constant = LieFamily::new(
            vec![BasisElement { label: "a".into(), kind: Kind::Noncompact }],
            vec![],
            0,
            crate::matrix::PolyMatrix::identity(1),
            Some(CartanData {
                n_minus: vec![],
                h: vec![0],
                n_plus: vec![],
                t: vec![],
                a: vec![0],
            }),
            None,
        );
        let fam1 = crate::lie::build_deformation_family(&constant, 1).unwrap();
        // z = a in constant coordinates: coefficient 1 on an a-monomial.
        let z = UeElement::generator(0, 1);
        assert!(!hc_subfamily_check(&z, &fam1).unwrap());
        // t·a is in S(h_(1)).
        let tz = z.scale(&Poly::t());
        assert!(hc_subfamily_check(&tz, &fam1).unwrap());
    }

    #[test]
    fn casimir_scalar_inversion() {
        let fam = sl2_fam();
        // ω = t²/8·m(m+2) → λ = m+1 (canonical representative).
        for m in 1..=4i64 {
            let omega = Poly::monomial(Scalar::from_ratio(m * (m + 2), 8), 2);
            let lam = infinitesimal_character_from_casimir_scalar(&omega, &fam)
                .unwrap()
                .unwrap();
            assert_eq!(lam.values, vec![Poly::from_int(m + 1)]);
        }
        // ω = −t²/8 → λ = 0.
        let omega = Poly::monomial(Scalar::from_ratio(-1, 8), 2);
        let lam = infinitesimal_character_from_casimir_scalar(&omega, &fam)
            .unwrap()
            .unwrap();
        assert_eq!(lam.values, vec![Poly::zero()]);
        // ω = t²/8·(t²−1) → λ = ±t, canonical t.
        let omega = Poly::monomial(Scalar::from_ratio(1, 8), 4)
            .add(&Poly::monomial(Scalar::from_ratio(-1, 8), 2));
        let lam = infinitesimal_character_from_casimir_scalar(&omega, &fam)
            .unwrap()
            .unwrap();
        assert_eq!(lam.values, vec![Poly::t()]);
        // non-square → None (8·(1/4) + 1 = 3 is not a rational square).
        let omega = Poly::monomial(Scalar::from_ratio(1, 4), 2);
        assert!(infinitesimal_character_from_casimir_scalar(&omega, &fam)
            .unwrap()
            .is_none());
        assert!(matches!(
            infinitesimal_character_from_casimir_scalar(&Poly::one(), &fam),
            Err(Error::CasimirScalarNotDivisible(_))
        ));
    }

    #[test]
    fn verma_casimir_and_character() {
        let fam = sl2_fam();
        for c in [0i64, 1, 5, -3] {
            let verma = verma_family(&fam, vec![Poly::from_int(c)], 3).unwrap();
            let omega_scalar = verma.casimir_scalar(&fam).unwrap();
            // ⅛t²c(c+2)
            assert_eq!(
                omega_scalar,
                Poly::monomial(Scalar::from_ratio(c * (c + 2), 8), 2),
                "c={c}"
            );
            let character = verma.infinitesimal_character(&fam).unwrap();
            assert_eq!(character.values, vec![Poly::from_int(c + 1)]);
        }
        // λ = −ρ gives infinitesimal character 0.
        let verma = verma_family(&fam, vec![Poly::from_int(-1)], 2).unwrap();
        let character = verma.infinitesimal_character(&fam).unwrap();
        assert_eq!(character.values, vec![Poly::zero()]);
    }

    #[test]
    fn verma_requires_theta_fixed_cartan() {
        use crate::lie::{BasisElement, CartanData, Kind, LieFamily};
        let fam = LieFamily::new(
            vec![BasisElement { label: "a".into(), kind: Kind::Noncompact }],
            vec![],
            0,
            crate::matrix::PolyMatrix::identity(1),
            Some(CartanData {
                n_minus: vec![],
                h: vec![0],
                n_plus: vec![],
                t: vec![],
                a: vec![0],
            }),
            None,
        );
        assert!(matches!(
            verma_family(&fam, vec![Poly::zero()], 2),
            Err(Error::CartanNotThetaFixed)
        ));
    }

    #[test]
    fn canonical_representative_rule() {
        let fam = sl2_fam();
        let lam = InfinitesimalCharacter::constant(vec![Scalar::from_int(-2)]);
        assert_eq!(
            lam.canonicalize(&fam).values,
            vec![Poly::from_int(2)]
        );
        let lam_i = InfinitesimalCharacter::constant(vec![-&Scalar::i()]);
        assert_eq!(
            lam_i.canonicalize(&fam).values,
            vec![Poly::constant(Scalar::i())]
        );
        // Conjugacy respects the orbit.
        let a = InfinitesimalCharacter::constant(vec![Scalar::from_int(3)]);
        let b = InfinitesimalCharacter::constant(vec![Scalar::from_int(-3)]);
        assert!(a.weyl_conjugate(&b, &fam));
    }
}
