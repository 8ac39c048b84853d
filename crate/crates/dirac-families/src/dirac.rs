//! The algebra `A = U(g) ⊗_R Cl(p, β^r)`, the diagonal embedding, the
//! Dirac element and its square identity, admissible weight-ladder module
//! families, and Dirac cohomology via PID linear algebra.

use std::collections::BTreeMap;
use std::fmt;

use crate::bipoly::BiPoly;
use crate::clifford::{alpha, spin_act, CliffordElement, ClWord, SpinVector};
use crate::lie::{compute_rho_data, LieFamily, QuadraticSpaceFamily};
use crate::matrix::{
    kernel_basis, quotient_decomposition, smith_normal_form, solve_in_span, PolyMatrix,
};
use crate::poly::{Coeff, Poly};
use crate::scalar::Scalar;
use crate::ue::{
    casimir, compact_casimir, infinitesimal_character_from_casimir_scalar, InfinitesimalCharacter,
    PbwMono, UeElement,
};
use crate::{Error, Result};

/// Element of `A = U(g) ⊗_R Cl(p, β^r)`; both components in their normal
/// forms. The two tensor factors commute (plain tensor product of
/// algebras).
#[derive(Clone, PartialEq, Debug)]
pub struct AElement<C: Coeff = Poly> {
    terms: BTreeMap<(PbwMono, ClWord), C>,
}

impl<C: Coeff> AElement<C> {
    pub fn zero() -> Self {
        AElement { terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        AElement::term(vec![0; rank], vec![], C::one())
    }

    pub fn term(ue: PbwMono, cl: ClWord, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((ue, cl), coeff);
        }
        AElement { terms }
    }

    /// `u ⊗ c`.
    pub fn tensor(u: &UeElement<C>, c: &CliffordElement<C>) -> Self {
        let mut out = AElement::zero();
        for (mu, cu) in u.terms() {
            for (wc, cc) in c.terms() {
                out.add_term(mu.clone(), wc.clone(), cu.mul_ref(cc));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMono, ClWord), &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, ue: PbwMono, cl: ClWord, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        let key = (ue, cl);
        match self.terms.get(&key).map(|c| c.add_ref(&coeff)) {
            Some(sum) => {
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((u, c), a) in &other.terms {
            out.add_term(u.clone(), c.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AElement {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = AElement::zero();
        for ((u, w), a) in &self.terms {
            out.add_term(u.clone(), w.clone(), a.mul_ref(c));
        }
        out
    }

    /// Componentwise product, bilinear over `R`.
    pub fn mul(&self, other: &Self, fam: &LieFamily, q: &QuadraticSpaceFamily) -> Self {
        let mut out = AElement::zero();
        for ((ua, ca), xa) in &self.terms {
            for ((ub, cb), xb) in &other.terms {
                let ue = UeElement::monomial(ua.clone(), C::one())
                    .mul(&UeElement::monomial(ub.clone(), C::one()), fam);
                let cl = CliffordElement::term(ca.clone(), C::one())
                    .mul(&CliffordElement::term(cb.clone(), C::one()), q);
                let coeff = xa.mul_ref(xb);
                for (mu, cu) in ue.terms() {
                    for (wc, cc) in cl.terms() {
                        out.add_term(
                            mu.clone(),
                            wc.clone(),
                            coeff.mul_ref(cu).mul_ref(cc),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self, fam: &LieFamily, q: &QuadraticSpaceFamily) -> Self {
        self.mul(other, fam, q).sub(&other.mul(self, fam, q))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> AElement<D> {
        let mut out = AElement::zero();
        for ((u, w), c) in &self.terms {
            out.add_term(u.clone(), w.clone(), f(c));
        }
        out
    }

    pub fn display<'a>(
        &'a self,
        fam: &'a LieFamily,
        q: &'a QuadraticSpaceFamily,
    ) -> ADisplay<'a, C> {
        ADisplay { elt: self, fam, q }
    }
}

pub struct ADisplay<'a, C: Coeff> {
    elt: &'a AElement<C>,
    fam: &'a LieFamily,
    q: &'a QuadraticSpaceFamily,
}

impl<C: Coeff + fmt::Display> fmt::Display for ADisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elt.is_zero() {
            return write!(f, "0");
        }
        let positions = self.fam.pbw_positions();
        let mut first = true;
        for ((mono, word), coeff) in &self.elt.terms {
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
            write!(f, "⊗")?;
            if word.is_empty() {
                write!(f, "1")?;
            }
            for &i in word {
                write!(f, "γ({})", self.q.labels[i])?;
            }
        }
        Ok(())
    }
}

/// The diagonal embedding `Δ(X) = X ⊗ 1 + 1 ⊗ α(X)` of a `k`-generator.
pub fn diagonal_embedding(
    x_idx: usize,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<AElement> {
    let rank = fam.rank();
    let ue_part = AElement::tensor(&UeElement::generator(x_idx, rank), &CliffordElement::one());
    let cl_part = AElement::tensor(&UeElement::one(rank), &alpha(x_idx, fam, q)?);
    Ok(ue_part.add(&cl_part))
}

/// Push an element of `U(k) ⊆ U(g)` through the diagonal embedding
/// multiplicatively: each monomial becomes the ordered product of the
/// `Δ`-images of its generators.
pub fn diagonal_embedding_ue(
    z: &UeElement,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<AElement> {
    let rank = fam.rank();
    let positions = fam.pbw_positions();
    let mut deltas: BTreeMap<usize, AElement> = BTreeMap::new();
    let mut out = AElement::zero();
    for (mono, coeff) in z.terms() {
        let mut acc = AElement::one(rank);
        let mut indices: Vec<usize> = (0..rank).filter(|&i| mono[i] > 0).collect();
        indices.sort_by_key(|&i| positions[i]);
        for i in indices {
            if !fam.is_compact(i) {
                return Err(Error::InvalidInput(
                    "diagonal embedding applies to U(k) elements".to_string(),
                ));
            }
            if !deltas.contains_key(&i) {
                deltas.insert(i, diagonal_embedding(i, fam, q)?);
            }
            let d = &deltas[&i];
            for _ in 0..mono[i] {
                acc = acc.mul(d, fam, q);
            }
        }
        out = out.add(&acc.scale(coeff));
    }
    Ok(out)
}

/// The Dirac element `D = Σ_i e'_i ⊗ γ(e_i)` over a `β^r`-dual pair of
/// bases of `p`, pushed into `A`. Independent of the chosen dual pair and
/// `k`-invariant.
pub fn dirac_element(fam: &LieFamily, q: &QuadraticSpaceFamily) -> Result<AElement> {
    let p_idx = fam.noncompact_indices();
    let rank = fam.rank();
    if p_idx.is_empty() {
        return Ok(AElement::zero());
    }
    let inv = q
        .form
        .inverse_if_unimodular()
        .ok_or_else(|| Error::DegenerateForm("β^r is not unimodular".to_string()))?;
    let mut out = AElement::zero();
    for (i, _) in p_idx.iter().enumerate() {
        // e'_i = Σ_k inv[k][i]·e_k in U(g); γ(e_i) on the Clifford side.
        let mut dual = UeElement::zero();
        for (k, &decl) in p_idx.iter().enumerate() {
            dual = dual.add(&UeElement::generator(decl, rank).scale(&inv[(k, i)]));
        }
        out = out.add(&AElement::tensor(&dual, &CliffordElement::generator(i)));
    }
    Ok(out)
}

/// Both sides of the square identity
/// `2D² = Ω(g,β,r) ⊗ 1 − r²·Δ(Ω(k,β_k)) + r²(‖ρ‖² − ‖ρ_k‖²)·1`
/// and their exact comparison.
pub fn dirac_square_check(
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<(AElement, AElement, bool)> {
    let rank = fam.rank();
    let d = dirac_element(fam, q)?;
    let lhs = d.mul(&d, fam, q).scale(&Poly::from_int(2));

    let r2 = fam.r_generator.mul(&fam.r_generator);
    let omega = casimir(fam)?;
    let omega_term = AElement::tensor(&omega, &CliffordElement::one());
    let k_casimir = compact_casimir(fam)?;
    let delta_term = diagonal_embedding_ue(&k_casimir, fam, q)?.scale(&r2);
    let rho = compute_rho_data(fam)?;
    let norm_diff = &rho.rho_norm_sq - &rho.rho_k_norm_sq;
    let constant = AElement::one(rank).scale(&r2.scale(&norm_diff));
    let rhs = omega_term.sub(&delta_term).add(&constant);
    let equal = lhs == rhs;
    Ok((lhs, rhs, equal))
}

/// Integer weight set of a ladder: rays, finite strings, or full parity
/// classes, all with spacing 2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WeightSet {
    /// `{min, min+2, ...}`
    RayUp(i64),
    /// `{max, max−2, ...}`
    RayDown(i64),
    /// `{−m, −m+2, ..., m}`
    Finite(i64),
    /// All even integers.
    LatticeEven,
    /// All odd integers.
    LatticeOdd,
}

impl WeightSet {
    pub fn contains(&self, n: i64) -> bool {
        match *self {
            WeightSet::RayUp(min) => n >= min && (n - min) % 2 == 0,
            WeightSet::RayDown(max) => n <= max && (max - n) % 2 == 0,
            WeightSet::Finite(m) => n >= -m && n <= m && (n + m) % 2 == 0,
            WeightSet::LatticeEven => n.rem_euclid(2) == 0,
            WeightSet::LatticeOdd => n.rem_euclid(2) == 1,
        }
    }

    /// A transition rung carries both `n` and `n+2`.
    pub fn has_transition(&self, n: i64) -> bool {
        self.contains(n) && self.contains(n + 2)
    }
}

/// An admissible weight-ladder module family: rank-one `K`-isotypic rungs
/// with spacing 2, connected by the transition polynomials
/// `x·v_n = A_n(t)·v_{n+2}`, `y·v_{n+2} = B_n(t)·v_n`
/// (zero off the weight set).
#[derive(Clone, Debug)]
pub struct LadderModule {
    pub weights: WeightSet,
    pub a_expr: BiPoly,
    pub b_expr: BiPoly,
    omega: Poly,
}

impl LadderModule {
    /// Validates the Casimir-consistency invariant (the scalar
    /// `ω = ⅛t²n² + ¼t²n + ½A_nB_n` is rung-independent) and the generic
    /// irreducibility proxy (`A_nB_n ≠ 0` on every transition rung).
    pub fn new(weights: WeightSet, a_expr: BiPoly, b_expr: BiPoly) -> Result<Self> {
        if let WeightSet::Finite(m) = weights {
            if m < 0 {
                return Err(Error::InvalidLadder("finite ladder needs m ≥ 0".to_string()));
            }
        }
        let omega = Self::validate_omega(&weights, &a_expr, &b_expr)?;
        let ladder = LadderModule {
            weights,
            a_expr,
            b_expr,
            omega,
        };
        ladder.validate_generic_irreducibility()?;
        Ok(ladder)
    }

    fn omega_bipoly(a: &BiPoly, b: &BiPoly) -> BiPoly {
        // ⅛t²n² + ¼t²n + ½A·B
        let t2 = BiPoly::monomial(Scalar::one(), 0, 2);
        let n2t2 = BiPoly::monomial(Scalar::from_ratio(1, 8), 2, 2);
        let _ = t2;
        let nt2 = BiPoly::monomial(Scalar::from_ratio(1, 4), 1, 2);
        let half = BiPoly::monomial(Scalar::from_ratio(1, 2), 0, 0);
        n2t2.add(&nt2).add(&half.mul(a).mul(b))
    }

    fn structural_omega(weights: &WeightSet, a: &BiPoly, b: &BiPoly, n: i64) -> Poly {
        let eighth = Scalar::from_ratio(n * n, 8);
        let quarter = Scalar::from_ratio(n, 4);
        let mut out = Poly::monomial(eighth, 2).add(&Poly::monomial(quarter, 2));
        if weights.has_transition(n) {
            let prod = a.eval_n(n).mul(&b.eval_n(n));
            out = out.add(&prod.scale(&Scalar::from_ratio(1, 2)));
        }
        out
    }

    fn validate_omega(weights: &WeightSet, a: &BiPoly, b: &BiPoly) -> Result<Poly> {
        match *weights {
            WeightSet::Finite(m) => {
                let mut value: Option<Poly> = None;
                let mut n = -m;
                while n <= m {
                    let omega_n = Self::structural_omega(weights, a, b, n);
                    match &value {
                        None => value = Some(omega_n),
                        Some(prev) if *prev != omega_n => {
                            return Err(Error::InvalidLadder(format!(
                                "Casimir scalar differs at rung {n}: {omega_n} vs {prev}"
                            )))
                        }
                        _ => {}
                    }
                    n += 2;
                }
                Ok(value.unwrap_or_else(Poly::zero))
            }
            _ => {
                let omega = Self::omega_bipoly(a, b);
                let coeffs = omega.n_coefficients();
                for (k, c) in coeffs.iter().enumerate().skip(1) {
                    if !c.is_zero() {
                        return Err(Error::InvalidLadder(format!(
                            "Casimir scalar depends on the rung: n^{k} coefficient {c}"
                        )));
                    }
                }
                let generic = coeffs.into_iter().next().unwrap_or_else(Poly::zero);
                // Rays with a structurally-annihilated top rung: that rung's
                // scalar must agree with the generic one.
                if let WeightSet::RayDown(max) = *weights {
                    let top = Self::structural_omega(weights, a, b, max);
                    if top != generic {
                        return Err(Error::InvalidLadder(format!(
                            "Casimir scalar differs at the top rung {max}: {top} vs {generic}"
                        )));
                    }
                }
                Ok(generic)
            }
        }
    }

    /// Generic irreducibility proxy. For infinite weight sets this is
    /// decided exactly: with ω rung-independent, `A_nB_n = 2ω − t²/4·n(n+2)`
    /// vanishes identically at an integer rung iff `ω = c·t²` with
    /// `8c + 1` an odd integer square; candidate rungs are `−1 ± √(8c+1)`.
    fn validate_generic_irreducibility(&self) -> Result<()> {
        match self.weights {
            WeightSet::Finite(m) => {
                let mut n = -m;
                while n <= m - 2 {
                    if self.a_at(n).mul(&self.b_at(n)).is_zero() {
                        return Err(Error::InvalidLadder(format!(
                            "transition product vanishes at interior rung {n}"
                        )));
                    }
                    n += 2;
                }
                Ok(())
            }
            _ => {
                let check_rung = |n: i64| -> Result<()> {
                    if self.weights.has_transition(n)
                        && self.a_expr.eval_n(n).mul(&self.b_expr.eval_n(n)).is_zero()
                    {
                        return Err(Error::InvalidLadder(format!(
                            "transition product vanishes at rung {n}"
                        )));
                    }
                    Ok(())
                };
                // ω must be c·t² for any vanishing to occur.
                let c = match self.omega.degree() {
                    None => Scalar::zero(),
                    Some(2) if self.omega.coeff(0).is_zero() && self.omega.coeff(1).is_zero() => {
                        self.omega.coeff(2)
                    }
                    _ => return Ok(()),
                };
                let disc = &(&Scalar::from_int(8) * &c) + &Scalar::one();
                let Some(root) = disc.sqrt() else {
                    return Ok(());
                };
                if !root.is_rational() {
                    return Ok(());
                }
                for sign in [1i64, -1] {
                    let candidate = &Scalar::from_int(-1)
                        + &(&Scalar::from_int(sign) * &root);
                    // Integer candidates only.
                    if !candidate.is_rational() {
                        continue;
                    }
                    if !candidate.re.is_integer() {
                        continue;
                    }
                    let n: i64 = match candidate.re.to_integer().try_into() {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    check_rung(n)?;
                }
                Ok(())
            }
        }
    }

    /// `A_n`, honoring the off-range convention.
    pub fn a_at(&self, n: i64) -> Poly {
        if self.weights.has_transition(n) {
            self.a_expr.eval_n(n)
        } else {
            Poly::zero()
        }
    }

    /// `B_n`, honoring the off-range convention.
    pub fn b_at(&self, n: i64) -> Poly {
        if self.weights.has_transition(n) {
            self.b_expr.eval_n(n)
        } else {
            Poly::zero()
        }
    }

    /// The rung-independent scalar by which the Casimir acts.
    pub fn casimir_scalar(&self) -> Poly {
        self.omega.clone()
    }
}

/// Basis indices of an sl2-shaped family with its quadratic space: the
/// declaration indices of (h, x, y) and the `p`-sub-basis indices of x, y.
#[derive(Clone, Copy, Debug)]
pub struct Sl2Shape {
    pub h: usize,
    pub x: usize,
    pub y: usize,
    pub p_x: usize,
    pub p_y: usize,
}

/// Ladder and cohomology machinery is scoped to sl2-shaped deformation
/// families (`n = 1`): rank 3, θ-fixed Cartan `span(h)`, `n⁺ = span(x)`,
/// `n⁻ = span(y)`, brackets `[h,x] = 2x`, `[h,y] = −2y`, `[x,y] = t²·h`,
/// and the isotropic split `p⁻ = span(y)`, `p⁺ = span(x)`.
pub fn ensure_sl2_shape(fam: &LieFamily, q: &QuadraticSpaceFamily) -> Result<Sl2Shape> {
    let fail = |msg: &str| Err(Error::NotSl2Shaped(msg.to_string()));
    if fam.rank() != 3 {
        return fail("rank must be 3");
    }
    if fam.n_deform != 1 {
        return fail("ladder classification applies to the n = 1 deformation family");
    }
    let Some(cartan) = &fam.cartan else {
        return fail("cartan data required");
    };
    if cartan.h.len() != 1 || cartan.n_plus.len() != 1 || cartan.n_minus.len() != 1 {
        return fail("triangular decomposition must be one-dimensional in each part");
    }
    let (h, x, y) = (cartan.h[0], cartan.n_plus[0], cartan.n_minus[0]);
    if !fam.is_compact(h) || fam.is_compact(x) || fam.is_compact(y) {
        return fail("need compact h and noncompact x, y");
    }
    if fam.bracket(h, x) != vec![(x, Poly::from_int(2))]
        || fam.bracket(h, y) != vec![(y, Poly::from_int(-2))]
        || fam.bracket(x, y) != vec![(h, Poly::monomial(Scalar::one(), 2))]
    {
        return fail("brackets do not match the sl2 deformation relations");
    }
    let p_idx = fam.noncompact_indices();
    let p_x = p_idx.iter().position(|&i| i == x).unwrap();
    let p_y = p_idx.iter().position(|&i| i == y).unwrap();
    if q.iso_minus != vec![p_y] || q.iso_plus != vec![p_x] {
        return fail("isotropic split must be p⁻ = span(y), p⁺ = span(x)");
    }
    Ok(Sl2Shape { h, x, y, p_x, p_y })
}

/// Apply a normal-form `U(g)`-element to a ladder rung vector `v_n`,
/// spreading over rungs. Generators act by
/// `x: v_n ↦ A_n·v_{n+2}`, `y: v_n ↦ B_{n−2}·v_{n−2}`, `h: v_n ↦ n·v_n`.
pub fn ladder_apply_ue(
    z: &UeElement,
    rung: i64,
    ladder: &LadderModule,
    shape: &Sl2Shape,
    fam: &LieFamily,
) -> BTreeMap<i64, Poly> {
    let positions = fam.pbw_positions();
    let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
    if !ladder.weights.contains(rung) {
        return out;
    }
    for (mono, coeff) in z.terms() {
        // Rightmost factors act first: iterate the PBW word in reverse.
        let mut indices: Vec<usize> = (0..mono.len()).filter(|&i| mono[i] > 0).collect();
        indices.sort_by_key(|&i| positions[i]);
        let mut state: BTreeMap<i64, Poly> = BTreeMap::new();
        state.insert(rung, coeff.clone());
        for &gen in indices.iter().rev() {
            for _ in 0..mono[gen] {
                let mut next: BTreeMap<i64, Poly> = BTreeMap::new();
                for (&n, c) in &state {
                    let (target, factor) = if gen == shape.x {
                        (n + 2, ladder.a_at(n))
                    } else if gen == shape.y {
                        (n - 2, ladder.b_at(n - 2))
                    } else {
                        (n, Poly::from_int(n))
                    };
                    let scaled = c.mul(&factor);
                    if scaled.is_zero() {
                        continue;
                    }
                    let entry = next.get(&target).map(|p| p.add(&scaled)).unwrap_or(scaled);
                    if entry.is_zero() {
                        next.remove(&target);
                    } else {
                        next.insert(target, entry);
                    }
                }
                state = next;
            }
        }
        for (n, c) in state {
            let entry = out.get(&n).map(|p| p.add(&c)).unwrap_or(c);
            if entry.is_zero() {
                out.remove(&n);
            } else {
                out.insert(n, entry);
            }
        }
    }
    out
}

/// Basis of the weight-μ subspace of `V ⊗ S`, as `(rung, spin word)`
/// pairs ordered `(v_{μ−1}⊗1, v_{μ+1}⊗y)`.
fn weight_space_basis(
    mu: i64,
    ladder: &LadderModule,
    spin_wts: &[(Vec<Scalar>, ClWord)],
) -> Vec<(i64, ClWord)> {
    let mut out = Vec::new();
    for (wt, word) in spin_wts {
        // Integer spin weights for the sl2 ladder: ±1.
        let w = wt[0].re.to_integer();
        let w: i64 = w.try_into().expect("small weight");
        let rung = mu - w;
        if ladder.weights.contains(rung) {
            out.push((rung, word.clone()));
        }
    }
    out.sort_by_key(|(rung, _)| *rung);
    out
}

/// Apply an `A`-element to `v_rung ⊗ word`.
fn apply_a_element(
    elt: &AElement,
    rung: i64,
    word: &ClWord,
    ladder: &LadderModule,
    shape: &Sl2Shape,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<BTreeMap<(i64, ClWord), Poly>> {
    let mut out: BTreeMap<(i64, ClWord), Poly> = BTreeMap::new();
    for ((ue_mono, cl_word), coeff) in elt.terms() {
        let ue_part = ladder_apply_ue(
            &UeElement::monomial(ue_mono.clone(), coeff.clone()),
            rung,
            ladder,
            shape,
            fam,
        );
        if ue_part.is_empty() {
            continue;
        }
        let spin_part = spin_act(
            &CliffordElement::term(cl_word.clone(), Poly::one()),
            &SpinVector::term(word.clone(), Poly::one(), 1),
            q,
        )?;
        for (n, cu) in &ue_part {
            for (w, cs) in &spin_part.terms {
                let add = cu.mul(cs);
                if add.is_zero() {
                    continue;
                }
                let key = (*n, w.clone());
                let entry = out.get(&key).map(|p| p.add(&add)).unwrap_or(add);
                if entry.is_zero() {
                    out.remove(&key);
                } else {
                    out.insert(key, entry);
                }
            }
        }
    }
    Ok(out)
}

/// The matrix of the Dirac action on the weight-μ subspace of `V ⊗ S` in
/// the ordered basis `(v_{μ−1}⊗1, v_{μ+1}⊗y)` (absent rungs omitted).
pub fn ladder_weight_space_matrix(
    ladder: &LadderModule,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
    mu: i64,
) -> Result<PolyMatrix> {
    let shape = ensure_sl2_shape(fam, q)?;
    let spin_wts = crate::clifford::spin_weights(fam, q)?;
    let basis = weight_space_basis(mu, ladder, &spin_wts);
    if basis.is_empty() {
        return Err(Error::WeightOutsideRange(mu));
    }
    let d = dirac_element(fam, q)?;
    weight_matrix_of(&d, &basis, ladder, &shape, fam, q)
}

fn weight_matrix_of(
    elt: &AElement,
    basis: &[(i64, ClWord)],
    ladder: &LadderModule,
    shape: &Sl2Shape,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<PolyMatrix> {
    let mut m = PolyMatrix::zero(basis.len(), basis.len());
    for (j, (rung, word)) in basis.iter().enumerate() {
        let image = apply_a_element(elt, *rung, word, ladder, shape, fam, q)?;
        for ((n, w), c) in image {
            match basis.iter().position(|(bn, bw)| *bn == n && *bw == w) {
                Some(i) => m[(i, j)] = c,
                None => {
                    return Err(Error::InvalidLadder(format!(
                        "action leaks outside the weight space: v_{n}⊗{w:?}"
                    )))
                }
            }
        }
    }
    Ok(m)
}

/// Decomposition of one weight space's cohomology
/// `ker D / (ker D ∩ im D)` plus ambient-coordinates representatives of
/// the free summands.
pub fn weight_space_cohomology(
    m: &PolyMatrix,
) -> (crate::matrix::QuotientDecomposition, Vec<Vec<Poly>>) {
    let ker = kernel_basis(m);
    if ker.cols == 0 {
        return (
            crate::matrix::QuotientDecomposition {
                torsion: vec![],
                free_rank: 0,
            },
            vec![],
        );
    }
    // ker ∩ im = m · ker(m²): x = m·y lies in ker iff m²·y = 0.
    let m2 = m.mul(m);
    let intersection = m.mul(&kernel_basis(&m2));
    // Express in kernel coordinates (the kernel basis is saturated).
    let coords: Vec<Vec<Poly>> = (0..intersection.cols)
        .map(|j| solve_in_span(&ker, &intersection.column(j)).expect("ker∩im ⊆ ker"))
        .collect();
    let coord_matrix = PolyMatrix::from_columns(ker.cols, coords);
    let decomp = quotient_decomposition(ker.cols, &coord_matrix);

    // Free-summand representatives: transform by the row operations of the
    // Smith form of the coordinate matrix.
    let snf = smith_normal_form(&coord_matrix);
    let rank = snf.rank();
    let u_inv = snf
        .u
        .inverse_if_unimodular()
        .expect("SNF transform is invertible");
    let mut reps = Vec::new();
    for i in rank..ker.cols {
        let mut ambient = vec![Poly::zero(); ker.rows];
        for (row, item) in ambient.iter_mut().enumerate() {
            for k in 0..ker.cols {
                *item = item.add(&ker[(row, k)].mul(&u_inv[(k, i)]));
            }
        }
        reps.push(ambient);
    }
    (decomp, reps)
}

/// Per-weight decomposition of the Dirac cohomology as
/// `⊕ R/(d_i) ⊕ R^free`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyEntry {
    pub weight: i64,
    pub free_rank: usize,
    pub torsion: Vec<Poly>,
    pub representatives: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CohomologyReport {
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyReport {
    pub fn total_free_rank(&self) -> usize {
        self.entries.iter().map(|e| e.free_rank).sum()
    }

    pub fn nonzero_weights(&self) -> Vec<i64> {
        self.entries
            .iter()
            .filter(|e| e.free_rank > 0 || !e.torsion.is_empty())
            .map(|e| e.weight)
            .collect()
    }
}

fn render_representative(
    vector: &[Poly],
    basis: &[(i64, ClWord)],
    q: &QuadraticSpaceFamily,
) -> String {
    let mut parts = Vec::new();
    for (coeff, (rung, word)) in vector.iter().zip(basis) {
        if coeff.is_zero() {
            continue;
        }
        let word_name = if word.is_empty() {
            "1".to_string()
        } else {
            word.iter()
                .map(|&i| q.labels[i].clone())
                .collect::<Vec<_>>()
                .join("∧")
        };
        if coeff.is_one() {
            parts.push(format!("v_{rung}⊗{word_name}"));
        } else {
            parts.push(format!("({coeff})·v_{rung}⊗{word_name}"));
        }
    }
    parts.join(" + ")
}

/// Validates that the requested window covers all boundary phenomena of
/// the weight set: finite ladders need the whole range, rays the endpoint
/// weight plus at least two interior weights, lattices at least three
/// consecutive weights.
fn check_window(weights: &WeightSet, window: (i64, i64)) -> Result<()> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::WindowTooSmall("empty window".to_string()));
    }
    let need = |w: i64| -> Result<()> {
        if w < lo || w > hi {
            return Err(Error::WindowTooSmall(format!(
                "window [{lo}, {hi}] must contain weight {w}"
            )));
        }
        Ok(())
    };
    match *weights {
        WeightSet::Finite(m) => {
            need(-m - 1)?;
            need(m + 1)
        }
        WeightSet::RayUp(min) => {
            need(min - 1)?;
            need(min + 1)?;
            need(min + 3)
        }
        WeightSet::RayDown(max) => {
            need(max + 1)?;
            need(max - 1)?;
            need(max - 3)
        }
        WeightSet::LatticeEven | WeightSet::LatticeOdd => {
            // weights are opposite parity to the rungs
            let parity = if *weights == WeightSet::LatticeEven { 1 } else { 0 };
            let count = (lo..=hi).filter(|w| w.rem_euclid(2) == parity).count();
            if count < 3 {
                return Err(Error::WindowTooSmall(
                    "lattice windows need at least three weights".to_string(),
                ));
            }
            Ok(())
        }
    }
}

/// Dirac cohomology of a ladder family over the window of weights
/// (inclusive), one entry per weight with a nonempty weight space.
pub fn dirac_cohomology(
    ladder: &LadderModule,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
    window: (i64, i64),
) -> Result<CohomologyReport> {
    let shape = ensure_sl2_shape(fam, q)?;
    check_window(&ladder.weights, window)?;
    let spin_wts = crate::clifford::spin_weights(fam, q)?;
    let d = dirac_element(fam, q)?;
    let mut entries = Vec::new();
    for mu in window.0..=window.1 {
        let basis = weight_space_basis(mu, ladder, &spin_wts);
        if basis.is_empty() {
            continue;
        }
        let m = weight_matrix_of(&d, &basis, ladder, &shape, fam, q)?;
        let (decomp, reps) = weight_space_cohomology(&m);
        entries.push(CohomologyEntry {
            weight: mu,
            free_rank: decomp.free_rank,
            torsion: decomp.torsion,
            representatives: reps
                .iter()
                .map(|v| render_representative(v, &basis, q))
                .collect(),
        });
    }
    Ok(CohomologyReport { entries })
}

/// Outcome of the Vogan-conjecture instance check: the infinitesimal
/// character extracted from the Casimir scalar must be Weyl-conjugate to
/// `μ + ρ_k` for every cohomology weight μ.
#[derive(Clone, Debug)]
pub struct VoganReport {
    pub omega: Poly,
    pub lambda: InfinitesimalCharacter,
    /// `(weight, target value μ + ρ_k, conjugate?)` per nonzero weight.
    pub weights: Vec<(i64, Scalar, bool)>,
    pub pass: bool,
}

/// Default cohomology window covering all boundary phenomena.
pub fn default_window(weights: &WeightSet) -> (i64, i64) {
    match *weights {
        WeightSet::Finite(m) => (-m - 1, m + 1),
        WeightSet::RayUp(min) => (min - 1, min + 5),
        WeightSet::RayDown(max) => (max - 5, max + 1),
        WeightSet::LatticeEven | WeightSet::LatticeOdd => (-5, 6),
    }
}

pub fn vogan_check(
    ladder: &LadderModule,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
) -> Result<VoganReport> {
    let shape = ensure_sl2_shape(fam, q)?;
    let report = dirac_cohomology(ladder, fam, q, default_window(&ladder.weights))?;
    let nonzero = report.nonzero_weights();
    if nonzero.is_empty() {
        return Err(Error::EmptyCohomology);
    }

    // ω from the ladder, cross-checked against the actual Casimir action
    // on a represented rung.
    let omega = ladder.casimir_scalar();
    let rung = (-200..=200)
        .find(|&n| ladder.weights.contains(n))
        .expect("weight set is nonempty");
    let omega_elt = casimir(fam)?;
    let action = ladder_apply_ue(&omega_elt, rung, ladder, &shape, fam);
    let acted = action.get(&rung).cloned().unwrap_or_else(Poly::zero);
    if action.len() > 1 || acted != omega {
        return Err(Error::InvalidLadder(format!(
            "Casimir action on rung {rung} gives {acted}, ladder says {omega}"
        )));
    }

    let lambda = infinitesimal_character_from_casimir_scalar(&omega, fam)?
        .ok_or(Error::NoInfinitesimalCharacter)?;
    let rho = compute_rho_data(fam)?;
    let rho_k = rho.rho_k.first().cloned().unwrap_or_else(Scalar::zero);
    let mut weights = Vec::new();
    let mut pass = true;
    for mu in nonzero {
        let target_value = &Scalar::from_int(mu) + &rho_k;
        let target = InfinitesimalCharacter::constant(vec![target_value.clone()]);
        let ok = lambda.weyl_conjugate(&target, fam);
        pass &= ok;
        weights.push((mu, target_value, ok));
    }
    Ok(VoganReport {
        omega,
        lambda,
        weights,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::{self, make_ladder, LadderKind};

    fn setup() -> (LieFamily, QuadraticSpaceFamily) {
        let fam = sl2::sl2_family(1).unwrap();
        let q = sl2::sl2_quadratic(&fam).unwrap();
        (fam, q)
    }

    // declaration indices
    const H: usize = 0;
    const X: usize = 1;
    const Y: usize = 2;
    // p-sub indices
    const PX: usize = 0;
    const PY: usize = 1;

    fn quarter() -> Poly {
        Poly::constant(Scalar::from_ratio(1, 4))
    }

    #[test]
    fn a_mul_tensor_exchange() {
        let (fam, q) = setup();
        let rank = fam.rank();
        let x_tensor_1: AElement = AElement::tensor(
            &UeElement::generator(X, rank),
            &CliffordElement::one(),
        );
        let one_tensor_gy = AElement::tensor(
            &UeElement::one(rank),
            &CliffordElement::generator(PY),
        );
        let prod = x_tensor_1.mul(&one_tensor_gy, &fam, &q);
        let expect = AElement::tensor(
            &UeElement::generator(X, rank),
            &CliffordElement::generator(PY),
        );
        assert_eq!(prod, expect);
        // (x⊗γ(y))·(y⊗γ(x)) = x·y ⊗ γ(y)γ(x)
        let a: AElement = AElement::tensor(
            &UeElement::generator(X, rank),
            &CliffordElement::generator(PY),
        );
        let b = AElement::tensor(
            &UeElement::generator(Y, rank),
            &CliffordElement::generator(PX),
        );
        let xy = UeElement::generator(X, rank).mul(&UeElement::generator(Y, rank), &fam);
        let gygx = CliffordElement::generator(PY).mul(&CliffordElement::generator(PX), &q);
        assert_eq!(a.mul(&b, &fam, &q), AElement::tensor(&xy, &gygx));
    }

    #[test]
    fn dirac_element_formula() {
        let (fam, q) = setup();
        let d = dirac_element(&fam, &q).unwrap();
        // D = ¼(x⊗γ(y) + y⊗γ(x))
        let rank = fam.rank();
        let expect = AElement::tensor(
            &UeElement::generator(X, rank).scale(&quarter()),
            &CliffordElement::generator(PY),
        )
        .add(&AElement::tensor(
            &UeElement::generator(Y, rank).scale(&quarter()),
            &CliffordElement::generator(PX),
        ));
        assert_eq!(d, expect);
    }

    #[test]
    fn dirac_element_basis_independent() {
        let (fam, q) = setup();
        let d = dirac_element(&fam, &q).unwrap();
        // Alternative route: D = Σ_{i,j} β^r(e'_i, e'_j)·e_i ⊗ γ(e_j),
        // the dual-Gram form of the same canonical element.
        let inv = q.form.inverse_if_unimodular().unwrap();
        let p_idx = fam.noncompact_indices();
        let rank = fam.rank();
        let mut alt = AElement::zero();
        // β^r(e'_i, e'_j) = (B⁻¹·B·B⁻¹)[i][j] = B⁻¹[i][j]
        for i in 0..p_idx.len() {
            for j in 0..p_idx.len() {
                let c = inv[(i, j)].clone();
                if c.is_zero() {
                    continue;
                }
                alt = alt.add(&AElement::tensor(
                    &UeElement::generator(p_idx[i], rank).scale(&c),
                    &CliffordElement::generator(j),
                ));
            }
        }
        assert_eq!(d, alt);
        // Rank-0 p gives D = 0.
        let abelian = crate::lie::LieFamily::new(
            vec![crate::lie::BasisElement {
                label: "z".into(),
                kind: crate::lie::Kind::Compact,
            }],
            vec![],
            0,
            PolyMatrix::identity(1),
            None,
            None,
        );
        let q0 = crate::lie::rescaled_form(&abelian).unwrap();
        assert!(dirac_element(&abelian, &q0).unwrap().is_zero());
    }

    #[test]
    fn dirac_square_displayed_form() {
        let (fam, q) = setup();
        let d = dirac_element(&fam, &q).unwrap();
        let d2 = d.mul(&d, &fam, &q);
        // D² = 1/16·(x·y ⊗ γ(y)γ(x) + y·x ⊗ γ(x)γ(y))
        let rank = fam.rank();
        let sixteenth = Poly::constant(Scalar::from_ratio(1, 16));
        let xy = UeElement::generator(X, rank).mul(&UeElement::generator(Y, rank), &fam);
        let yx = UeElement::generator(Y, rank).mul(&UeElement::generator(X, rank), &fam);
        let gygx = CliffordElement::generator(PY).mul(&CliffordElement::generator(PX), &q);
        let gxgy = CliffordElement::generator(PX).mul(&CliffordElement::generator(PY), &q);
        let expect = AElement::tensor(&xy, &gygx)
            .add(&AElement::tensor(&yx, &gxgy))
            .scale(&sixteenth);
        assert_eq!(d2, expect);
    }

    #[test]
    fn diagonal_embedding_examples() {
        let (fam, q) = setup();
        let rank = fam.rank();
        let delta_h = diagonal_embedding(H, &fam, &q).unwrap();
        // Δ(h) = h⊗1 + 1⊗(½γ(x)γ(y) − 1)
        let mut alpha_h = CliffordElement::zero();
        alpha_h.add_term(vec![PX, PY], Poly::constant(Scalar::from_ratio(1, 2)));
        alpha_h.add_term(vec![], Poly::from_int(-1));
        let expect = AElement::tensor(&UeElement::generator(H, rank), &CliffordElement::one())
            .add(&AElement::tensor(&UeElement::one(rank), &alpha_h));
        assert_eq!(delta_h, expect);

        // [Δ(h), x⊗1] = 2·x⊗1
        let x_tensor = AElement::tensor(&UeElement::generator(X, rank), &CliffordElement::one());
        assert_eq!(
            delta_h.commutator(&x_tensor, &fam, &q),
            x_tensor.scale(&Poly::from_int(2))
        );
    }

    #[test]
    fn diagonal_embedding_is_lie_map_and_d_invariant() {
        let (fam, q) = setup();
        let d = dirac_element(&fam, &q).unwrap();
        for &x in &fam.compact_indices() {
            let dx = diagonal_embedding(x, &fam, &q).unwrap();
            // [Δ(X), D] = 0
            assert!(dx.commutator(&d, &fam, &q).is_zero());
            for &y in &fam.compact_indices() {
                let dy = diagonal_embedding(y, &fam, &q).unwrap();
                let lhs = dx.commutator(&dy, &fam, &q);
                let mut rhs = AElement::zero();
                for (k, c) in fam.bracket(x, y) {
                    rhs = rhs.add(
                        &diagonal_embedding(k, &fam, &q).unwrap().scale(&c),
                    );
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn square_identity_all_n() {
        for n in [0u32, 1, 2] {
            let fam = sl2::sl2_family(n).unwrap();
            let q = sl2::sl2_quadratic(&fam).unwrap();
            let (_, _, equal) = dirac_square_check(&fam, &q).unwrap();
            assert!(equal, "square identity fails for n = {n}");
        }
        // Rank-0 p: both sides vanish.
        let abelian = crate::lie::LieFamily::new(
            vec![crate::lie::BasisElement {
                label: "z".into(),
                kind: crate::lie::Kind::Compact,
            }],
            vec![],
            0,
            PolyMatrix::identity(1),
            Some(crate::lie::CartanData {
                n_minus: vec![],
                h: vec![0],
                n_plus: vec![],
                t: vec![0],
                a: vec![],
            }),
            None,
        );
        let q0 = crate::lie::rescaled_form(&abelian).unwrap();
        let (lhs, rhs, equal) = dirac_square_check(&abelian, &q0).unwrap();
        assert!(equal);
        assert!(lhs.is_zero() && rhs.is_zero());
    }

    #[test]
    fn ladder_weight_matrices() {
        let (fam, q) = setup();
        // Spherical lattice, μ = 2m+1: [[0, B_{2m}], [¼·A_{2m}, 0]].
        let ladder =
            make_ladder(LadderKind::LatticeEven, 0, Some(Scalar::from_ratio(1, 2))).unwrap();
        for m in [-2i64, 0, 3] {
            let mu = 2 * m + 1;
            let mat = ladder_weight_space_matrix(&ladder, &fam, &q, mu).unwrap();
            assert_eq!(mat.rows, 2);
            assert!(mat[(0, 0)].is_zero() && mat[(1, 1)].is_zero());
            assert_eq!(mat[(1, 0)], ladder.a_at(2 * m).scale(&Scalar::from_ratio(1, 4)));
            assert_eq!(mat[(0, 1)], ladder.b_at(2 * m));
        }
        // DS_m^+ at μ = m−1: the 1×1 zero matrix on v_m⊗y.
        let ds = make_ladder(LadderKind::DiscreteSeriesUp, 3, None).unwrap();
        let mat = ladder_weight_space_matrix(&ds, &fam, &q, 2).unwrap();
        assert_eq!(mat.rows, 1);
        assert!(mat[(0, 0)].is_zero());
        // F_m at μ = m+1: 1×1 zero on v_m⊗1.
        let f = make_ladder(LadderKind::Finite, 2, None).unwrap();
        let mat = ladder_weight_space_matrix(&f, &fam, &q, 3).unwrap();
        assert_eq!(mat.rows, 1);
        assert!(mat[(0, 0)].is_zero());
        // Weight outside range errors.
        assert!(matches!(
            ladder_weight_space_matrix(&ds, &fam, &q, -10),
            Err(Error::WeightOutsideRange(-10))
        ));
    }

    #[test]
    fn cohomology_trichotomy_small() {
        let (fam, q) = setup();
        // DS_2^+: free rank 1 at weight 1 only.
        let ds = make_ladder(LadderKind::DiscreteSeriesUp, 2, None).unwrap();
        let report = dirac_cohomology(&ds, &fam, &q, (1, 9)).unwrap();
        assert_eq!(report.total_free_rank(), 1);
        assert_eq!(report.nonzero_weights(), vec![1]);
        let entry = &report.entries[0];
        assert!(entry.torsion.is_empty());
        assert_eq!(entry.representatives, vec!["v_2⊗y".to_string()]);

        // F_2: rank 1 at each of ±3.
        let f = make_ladder(LadderKind::Finite, 2, None).unwrap();
        let report = dirac_cohomology(&f, &fam, &q, (-3, 3)).unwrap();
        assert_eq!(report.total_free_rank(), 2);
        assert_eq!(report.nonzero_weights(), vec![-3, 3]);

        // Lattices: identically zero across a 10-weight window.
        for kind in [LadderKind::LatticeEven, LadderKind::LatticeOdd] {
            let ps = make_ladder(kind, 0, Some(Scalar::from_ratio(1, 2))).unwrap();
            let report = dirac_cohomology(&ps, &fam, &q, (-9, 10)).unwrap();
            assert_eq!(report.total_free_rank(), 0);
            assert!(report.nonzero_weights().is_empty());
            assert!(report.entries.len() >= 10);
        }
    }

    #[test]
    fn window_preconditions_enforced() {
        let (fam, q) = setup();
        let f = make_ladder(LadderKind::Finite, 2, None).unwrap();
        assert!(matches!(
            dirac_cohomology(&f, &fam, &q, (-2, 3)),
            Err(Error::WindowTooSmall(_))
        ));
        let ds = make_ladder(LadderKind::DiscreteSeriesUp, 1, None).unwrap();
        assert!(matches!(
            dirac_cohomology(&ds, &fam, &q, (0, 2)),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn torsion_is_representable() {
        // Synthetic 2×2 block [[0, t²],[0, 0]]: kernel e₁, image t²·e₁,
        // H = R/(t²) — the quotient machinery carries torsion.
        let mut m = PolyMatrix::zero(2, 2);
        m[(0, 1)] = Poly::monomial(Scalar::one(), 2);
        let (decomp, reps) = weight_space_cohomology(&m);
        assert_eq!(decomp.free_rank, 0);
        assert_eq!(decomp.torsion, vec![Poly::monomial(Scalar::one(), 2)]);
        assert!(reps.is_empty());
        // Diagonal-free 2×2 blocks with both entries nonzero: H = 0.
        let mut m2 = PolyMatrix::zero(2, 2);
        m2[(0, 1)] = Poly::monomial(Scalar::one(), 2);
        m2[(1, 0)] = Poly::t();
        let (decomp, _) = weight_space_cohomology(&m2);
        assert!(decomp.is_trivial());
    }

    #[test]
    fn vogan_examples() {
        let (fam, q) = setup();
        // F_2: ω = t²/8·2·4 = t², λ = ±3, weights ±3 — pass.
        let f = make_ladder(LadderKind::Finite, 2, None).unwrap();
        let report = vogan_check(&f, &fam, &q).unwrap();
        assert!(report.pass);
        assert_eq!(report.lambda.values, vec![Poly::from_int(3)]);
        assert_eq!(report.omega, Poly::monomial(Scalar::one(), 2));

        // DS_3^+: ω = t²/8·3·1, λ = ±2, weight 2 — pass.
        let ds = make_ladder(LadderKind::DiscreteSeriesUp, 3, None).unwrap();
        let report = vogan_check(&ds, &fam, &q).unwrap();
        assert!(report.pass);
        assert_eq!(report.lambda.values, vec![Poly::from_int(2)]);

        // Principal series: empty cohomology is an error.
        let ps = make_ladder(LadderKind::LatticeEven, 0, Some(Scalar::from_ratio(1, 2))).unwrap();
        assert!(matches!(
            vogan_check(&ps, &fam, &q),
            Err(Error::EmptyCohomology)
        ));
    }

    #[test]
    fn corrupted_ladder_rejected() {
        // n-dependent Casimir scalar: A = t, B = t on a lattice.
        let a = BiPoly::parse("t").unwrap();
        let b = BiPoly::parse("t").unwrap();
        assert!(matches!(
            LadderModule::new(WeightSet::LatticeEven, a, b),
            Err(Error::InvalidLadder(_))
        ));
        // Vanishing interior product: F_2 with A = t/2·(2−n) is fine, but
        // a lattice whose product vanishes at a rung is rejected: c = 3
        // gives A_2·B_2 = 0 on the even lattice.
        let err = make_ladder(LadderKind::LatticeEven, 0, Some(Scalar::from_int(3)));
        assert!(matches!(err, Err(Error::InvalidLadder(_))));
    }
}
