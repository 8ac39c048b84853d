//! Base change from `R = K[t]` to `R₀ = K[t,t⁻¹]`: the localization
//! functor on elements, the isomorphism ψ between the localized
//! deformation family and the localized constant family, and the checks
//! that localization intertwines Dirac operators and commutes with Dirac
//! cohomology.

use crate::clifford::CliffordElement;
use crate::dirac::{dirac_element, ensure_sl2_shape, weight_space_cohomology, AElement, LadderModule};
use crate::lie::{LieFamily, QuadraticSpaceFamily};
use crate::matrix::{
    kernel_basis, laurent_invariant_factors, laurent_rank, solve_in_span, LaurentMatrix,
    PolyMatrix,
};
use crate::poly::{Laurent, Poly};
use crate::ue::{constant_counterpart, UeElement};
use crate::{Error, Result};

pub type LaurentUeElement = UeElement<Laurent>;
pub type LaurentCliffordElement = CliffordElement<Laurent>;
pub type LaurentAElement = AElement<Laurent>;

/// The family viewed over `R₀`; structure constants are shared with the
/// `R`-side description, coefficientwise included in `K[t,t⁻¹]`.
#[derive(Clone, Debug)]
pub struct LaurentFamily {
    pub base: LieFamily,
}

pub fn localize_family(fam: &LieFamily) -> LaurentFamily {
    LaurentFamily { base: fam.clone() }
}

/// Coefficientwise inclusion `K[t] ⊆ K[t,t⁻¹]` on a normal form.
pub fn localize_ue(z: &UeElement) -> LaurentUeElement {
    z.map_coeffs(Laurent::from_poly)
}

pub fn localize_cl(z: &CliffordElement) -> LaurentCliffordElement {
    z.map_coeffs(Laurent::from_poly)
}

pub fn localize_a(z: &AElement) -> LaurentAElement {
    z.map_coeffs(Laurent::from_poly)
}

/// The isomorphism `ψ` onto the localized constant family, on the
/// enveloping side: the family generator over `p` maps to `tⁿ` times the
/// constant-family generator, so a PBW monomial picks up
/// `t^(n · noncompact degree)`. The monomial indexing is unchanged (the
/// constant family shares the basis labels).
pub fn psi_transport_ue(z: &LaurentUeElement, fam: &LieFamily) -> LaurentUeElement {
    let n = fam.n_deform as i64;
    let mut out = LaurentUeElement::zero();
    for (mono, coeff) in z.terms() {
        let nc_degree: i64 = (0..fam.rank())
            .filter(|&i| !fam.is_compact(i))
            .map(|i| mono[i] as i64)
            .sum();
        out.add_term(mono.clone(), coeff.shift(n * nc_degree));
    }
    out
}

/// `ψ ⊗ T_n⁻¹` on the algebra `A`: the enveloping part is transported by
/// ψ while the Clifford part maps isometrically (`γ(tⁿ⊗e) ↦ γ(e)`, no
/// `t`-factor).
pub fn psi_transport_a(z: &LaurentAElement, fam: &LieFamily) -> LaurentAElement {
    let n = fam.n_deform as i64;
    let mut out = LaurentAElement::zero();
    for ((mono, word), coeff) in z.terms() {
        let nc_degree: i64 = (0..fam.rank())
            .filter(|&i| !fam.is_compact(i))
            .map(|i| mono[i] as i64)
            .sum();
        out.add_term(mono.clone(), word.clone(), coeff.shift(n * nc_degree));
    }
    out
}

/// ψ is a Lie isomorphism over `R₀`: `ψ[a, b] = [ψa, ψb]` on all basis
/// pairs, where the right side brackets in the constant family.
pub fn psi_is_lie_isomorphism(fam: &LieFamily) -> Result<bool> {
    let fam0 = constant_counterpart(fam)?;
    let rank = fam.rank();
    for i in 0..rank {
        for j in 0..rank {
            let gi = LaurentUeElement::generator(i, rank);
            let gj = LaurentUeElement::generator(j, rank);
            // ψ of the family bracket:
            let mut bracket_n = LaurentUeElement::zero();
            for (k, c) in fam.bracket(i, j) {
                bracket_n =
                    bracket_n.add(&LaurentUeElement::generator(k, rank).scale(&Laurent::from_poly(&c)));
            }
            let lhs = psi_transport_ue(&bracket_n, fam);
            // bracket of the ψ-images in the constant family:
            let rhs = psi_transport_ue(&gi, fam)
                .mul(&psi_transport_ue(&gj, fam), &fam0)
                .sub(&psi_transport_ue(&gj, fam).mul(&psi_transport_ue(&gi, fam), &fam0));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Transporting the localized Dirac element of `g_(n)` must give exactly
/// `tⁿ` times the constant-family Dirac element.
pub fn localized_dirac_check(fam: &LieFamily, q: &QuadraticSpaceFamily) -> Result<bool> {
    let fam0 = constant_counterpart(fam)?;
    let q0 = crate::lie::rescaled_form_with_iso(
        &fam0,
        &q.iso_minus,
        &q.iso_plus,
        &q.iso_zero,
    )?;
    let d_n = dirac_element(fam, q)?;
    let transported = psi_transport_a(&localize_a(&d_n), fam);
    let d_0 = localize_a(&dirac_element(&fam0, &q0)?);
    let target = d_0.scale(&Laurent::monomial(crate::scalar::Scalar::one(), fam.n_deform as i64));
    Ok(transported == target)
}

/// Compare the `R`-side and `R₀`-side cohomology of one weight-space
/// coordinate matrix: free ranks must agree, and the `R`-side torsion
/// factors map to the `R₀` factors by stripping `t`-powers (pure
/// `t`-powers become units and vanish).
fn localized_factors_match(
    decomp_r: &crate::matrix::QuotientDecomposition,
    free_r0: usize,
    torsion_r0: &[Poly],
) -> bool {
    if decomp_r.free_rank != free_r0 {
        return false;
    }
    let mut expected: Vec<Poly> = decomp_r
        .torsion
        .iter()
        .filter_map(|d| {
            let (_, core) = Laurent::from_poly(d).split_unit();
            if core.is_unit() {
                None
            } else {
                Some(core.monic())
            }
        })
        .collect();
    expected.sort_by_key(|p| p.to_string());
    let mut actual = torsion_r0.to_vec();
    actual.sort_by_key(|p| p.to_string());
    expected == actual
}

/// Per-weight comparison of `H_D` over `R` with the localized cohomology
/// over `R₀` (its own Smith normal form over `K[t,t⁻¹]`), for every
/// weight in the window.
pub fn cohomology_localization_check(
    ladder: &LadderModule,
    fam: &LieFamily,
    q: &QuadraticSpaceFamily,
    window: (i64, i64),
) -> Result<bool> {
    ensure_sl2_shape(fam, q)?;
    // Enforces the window preconditions.
    crate::dirac::dirac_cohomology(ladder, fam, q, window)?;
    for mu in window.0..=window.1 {
        let m = match crate::dirac::ladder_weight_space_matrix(ladder, fam, q, mu) {
            Ok(m) => m,
            Err(Error::WeightOutsideRange(_)) => continue,
            Err(e) => return Err(e),
        };
        let (decomp_r, _) = weight_space_cohomology(&m);
        let (free_r0, torsion_r0) = laurent_weight_cohomology(&m);
        if !localized_factors_match(&decomp_r, free_r0, &torsion_r0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cohomology of one weight space over `R₀`: the kernel of a polynomial
/// matrix is unchanged by localization, while ranks and invariant factors
/// are recomputed with the Laurent Smith normal form.
pub fn laurent_weight_cohomology(m: &PolyMatrix) -> (usize, Vec<Poly>) {
    let ker = kernel_basis(m);
    if ker.cols == 0 {
        return (0, vec![]);
    }
    let m2 = m.mul(m);
    let intersection = m.mul(&kernel_basis(&m2));
    let coords: Vec<Vec<Poly>> = (0..intersection.cols)
        .map(|j| solve_in_span(&ker, &intersection.column(j)).expect("ker∩im ⊆ ker"))
        .collect();
    let coord_matrix = PolyMatrix::from_columns(ker.cols, coords);
    let l = LaurentMatrix::from_poly_matrix(&coord_matrix);
    let free = ker.cols - laurent_rank(&l);
    (free, laurent_invariant_factors(&l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::default_window;
    use crate::scalar::Scalar;
    use crate::sl2::{self, make_ladder, LadderKind};
    use crate::ue::casimir;

    #[test]
    fn localize_is_inclusion() {
        let fam = sl2::sl2_family(1).unwrap();
        let rank = fam.rank();
        let t2h = UeElement::generator(0, rank).scale(&Poly::monomial(Scalar::one(), 2));
        let loc = localize_ue(&t2h);
        assert_eq!(
            loc.coeff(&vec![1, 0, 0]),
            Laurent::monomial(Scalar::one(), 2)
        );
    }

    #[test]
    fn localize_is_multiplicative() {
        let fam = sl2::sl2_family(1).unwrap();
        let rank = fam.rank();
        let h = UeElement::generator(0, rank);
        let x = UeElement::generator(1, rank);
        let y = UeElement::generator(2, rank);
        let omega = casimir(&fam).unwrap();
        let samples = vec![
            x.clone(),
            y.clone(),
            h.mul(&x, &fam).add(&y.scale(&Poly::t())),
            omega.clone(),
            y.mul(&y, &fam).sub(&h.scale(&Poly::from_int(3))),
            x.mul(&y, &fam).mul(&h, &fam),
        ];
        for a in &samples {
            for b in &samples {
                let lhs = localize_ue(&a.mul(b, &fam));
                let rhs = localize_ue(a).mul(&localize_ue(b), &fam);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn psi_on_generators_and_casimir() {
        let fam = sl2::sl2_family(1).unwrap();
        let fam0 = constant_counterpart(&fam).unwrap();
        let rank = fam.rank();
        // ψ(x) = t·(1⊗x); ψ(h) = 1⊗h.
        let x = localize_ue(&UeElement::generator(1, rank));
        let px = psi_transport_ue(&x, &fam);
        assert_eq!(
            px,
            LaurentUeElement::generator(1, rank).scale(&Laurent::monomial(Scalar::one(), 1))
        );
        let h = localize_ue(&UeElement::generator(0, rank));
        assert_eq!(psi_transport_ue(&h, &fam), h);

        // ψ(Ω_d) = t²·Ω_constant.
        let omega_n = localize_ue(&casimir(&fam).unwrap());
        let omega_0 = localize_ue(&casimir(&fam0).unwrap());
        assert_eq!(
            psi_transport_ue(&omega_n, &fam),
            omega_0.scale(&Laurent::monomial(Scalar::one(), 2))
        );
        assert!(psi_is_lie_isomorphism(&fam).unwrap());
        assert!(psi_is_lie_isomorphism(&sl2::sl2_family(2).unwrap()).unwrap());
    }

    #[test]
    fn dirac_transport_all_n() {
        for n in [0u32, 1, 2] {
            let fam = sl2::sl2_family(n).unwrap();
            let q = sl2::sl2_quadratic(&fam).unwrap();
            assert!(localized_dirac_check(&fam, &q).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn cohomology_commutes_with_localization() {
        let fam = sl2::sl2_family(1).unwrap();
        let q = sl2::sl2_quadratic(&fam).unwrap();
        let half = Scalar::from_ratio(1, 2);
        let ladders = vec![
            make_ladder(LadderKind::DiscreteSeriesUp, 2, None).unwrap(),
            make_ladder(LadderKind::DiscreteSeriesDown, 2, None).unwrap(),
            make_ladder(LadderKind::Finite, 2, None).unwrap(),
            make_ladder(LadderKind::LatticeEven, 0, Some(half.clone())).unwrap(),
            make_ladder(LadderKind::LatticeOdd, 0, Some(half)).unwrap(),
        ];
        for ladder in &ladders {
            let window = default_window(&ladder.weights);
            assert!(
                cohomology_localization_check(ladder, &fam, &q, window).unwrap(),
                "{:?}",
                ladder.weights
            );
        }
    }

    #[test]
    fn torsion_strips_t_powers() {
        // Coordinate matrix [t²] inside a rank-1 kernel: R-side torsion
        // R/(t²); over R₀ the factor is a unit and the torsion vanishes.
        let mut m = PolyMatrix::zero(2, 2);
        m[(0, 1)] = Poly::monomial(Scalar::one(), 2);
        let (decomp_r, _) = weight_space_cohomology(&m);
        assert_eq!(decomp_r.torsion, vec![Poly::monomial(Scalar::one(), 2)]);
        let (free_r0, torsion_r0) = laurent_weight_cohomology(&m);
        assert_eq!(free_r0, 0);
        assert!(torsion_r0.is_empty());
        assert!(localized_factors_match(&decomp_r, free_r0, &torsion_r0));

        // A non-t factor persists: coordinate matrix [t²·(t+1)].
        let mut m2 = PolyMatrix::zero(2, 2);
        m2[(0, 1)] = Poly::monomial(Scalar::one(), 2).mul(&Poly::from_dense(vec![
            Scalar::one(),
            Scalar::one(),
        ]));
        let (decomp_r, _) = weight_space_cohomology(&m2);
        let (free_r0, torsion_r0) = laurent_weight_cohomology(&m2);
        assert_eq!(
            torsion_r0,
            vec![Poly::from_dense(vec![Scalar::one(), Scalar::one()])]
        );
        assert!(localized_factors_match(&decomp_r, free_r0, &torsion_r0));
    }
}
