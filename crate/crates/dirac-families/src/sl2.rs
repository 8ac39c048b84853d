//! The canned SL(2,R) family data: the deformation families built on the
//! sl2-triple {h, x, y} with the Killing form, plus ladder-module presets.

use crate::bipoly::BiPoly;
use crate::dirac::{LadderModule, WeightSet};
use crate::lie::{
    build_deformation_family, rescaled_form_with_iso, BasisElement, CartanData, Kind, LieFamily,
    QuadraticSpaceFamily,
};
use crate::matrix::PolyMatrix;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::Result;

fn elem(label: &str, kind: Kind) -> BasisElement {
    BasisElement {
        label: label.to_string(),
        kind,
    }
}

/// The constant sl2 family on basis (h, x, y): `[h,x] = 2x`, `[h,y] = −2y`,
/// `[x,y] = h`, with the Killing form (β(h,h) = 8, β(x,y) = 4), the
/// θ-fixed Cartan `h = t = span(h)`, `n⁻ = span(y)`, `n⁺ = span(x)`, and
/// Weyl group {±1} on the Cartan.
pub fn sl2_constant_family() -> LieFamily {
    let basis = vec![
        elem("h", Kind::Compact),
        elem("x", Kind::Noncompact),
        elem("y", Kind::Noncompact),
    ];
    let brackets = vec![
        (0, 1, vec![(1, Poly::from_int(2))]),
        (0, 2, vec![(2, Poly::from_int(-2))]),
        (1, 2, vec![(0, Poly::one())]),
    ];
    let mut form = PolyMatrix::zero(3, 3);
    form[(0, 0)] = Poly::from_int(8);
    form[(1, 2)] = Poly::from_int(4);
    form[(2, 1)] = Poly::from_int(4);
    let cartan = CartanData {
        n_minus: vec![2],
        h: vec![0],
        n_plus: vec![1],
        t: vec![0],
        a: vec![],
    };
    let weyl = vec![vec![vec![Scalar::one()]], vec![vec![Scalar::from_int(-1)]]];
    LieFamily::new(basis, brackets, 0, form, Some(cartan), Some(weyl))
}

/// The deformation-like family `g_(n)` of sl2; `n = 1` is the deformation
/// family proper, `n = 0` the constant family.
pub fn sl2_family(n: u32) -> Result<LieFamily> {
    build_deformation_family(&sl2_constant_family(), n)
}

/// The quadratic space `(p, β^r)` of an sl2-shaped family, with the
/// isotropic split `p⁻ = span(y)`, `p⁺ = span(x)`.
pub fn sl2_quadratic(fam: &LieFamily) -> Result<QuadraticSpaceFamily> {
    // p-sub-basis order is (x, y): x is index 0, y index 1.
    rescaled_form_with_iso(fam, &[1], &[0], &[])
}

/// Two commuting copies of sl2 (used in tests): basis
/// (h1, x1, y1, h2, x2, y2), block Killing form, product Cartan data.
pub fn sl2_block_pair_constant() -> LieFamily {
    let basis = vec![
        elem("h1", Kind::Compact),
        elem("x1", Kind::Noncompact),
        elem("y1", Kind::Noncompact),
        elem("h2", Kind::Compact),
        elem("x2", Kind::Noncompact),
        elem("y2", Kind::Noncompact),
    ];
    let brackets = vec![
        (0, 1, vec![(1, Poly::from_int(2))]),
        (0, 2, vec![(2, Poly::from_int(-2))]),
        (1, 2, vec![(0, Poly::one())]),
        (3, 4, vec![(4, Poly::from_int(2))]),
        (3, 5, vec![(5, Poly::from_int(-2))]),
        (4, 5, vec![(3, Poly::one())]),
    ];
    let mut form = PolyMatrix::zero(6, 6);
    for base in [0, 3] {
        form[(base, base)] = Poly::from_int(8);
        form[(base + 1, base + 2)] = Poly::from_int(4);
        form[(base + 2, base + 1)] = Poly::from_int(4);
    }
    let cartan = CartanData {
        n_minus: vec![2, 5],
        h: vec![0, 3],
        n_plus: vec![1, 4],
        t: vec![0, 3],
        a: vec![],
    };
    LieFamily::new(basis, brackets, 0, form, Some(cartan), None)
}

pub fn sl2_block_pair_family(n: u32) -> Result<LieFamily> {
    build_deformation_family(&sl2_block_pair_constant(), n)
}

/// Quadratic space of the block pair, `p⁻ = span(y1, y2)`,
/// `p⁺ = span(x1, x2)` (p-sub-basis order: x1, y1, x2, y2).
pub fn sl2_block_pair_quadratic(fam: &LieFamily) -> Result<QuadraticSpaceFamily> {
    rescaled_form_with_iso(fam, &[1, 3], &[0, 2], &[])
}

/// Ladder kinds of the generically irreducible module families of the sl2
/// deformation family, keyed by their K-type sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LadderKind {
    /// Lowest-weight discrete series: K-types {m, m+2, ...}, m ≥ 1.
    DiscreteSeriesUp,
    /// Highest-weight discrete series: K-types {−m, −m−2, ...}, m ≥ 1.
    DiscreteSeriesDown,
    /// Finite-dimensional: K-types {−m, −m+2, ..., m}, m ≥ 0.
    Finite,
    /// Spherical principal series: K-types 2Z.
    LatticeEven,
    /// Non-spherical principal series: K-types 2Z+1.
    LatticeOdd,
}

/// Canonical transition polynomials for the given kind.
///
/// The Casimir constraint fixes only the product A_n·B_n; the canonical
/// splits here put boundary zeros where the weight set forces them and are
/// nonvanishing on every represented transition:
///   DS_m^±:  A_n = t/2·(m−2−n),  B_n = t/2·(m+n)
///   F_m:     A_n = t/2·(m−n),    B_n = t/2·(m+n+2)
///   lattice: A_n = t/2·(c−1−n),  B_n = t/2·(c+1+n)  (Casimir parameter c)
pub fn make_ladder(kind: LadderKind, m: i64, casimir: Option<Scalar>) -> Result<LadderModule> {
    use crate::Error;
    let half_t = |c: BiPoly| -> BiPoly { c.mul(&BiPoly::monomial(Scalar::from_ratio(1, 2), 0, 1)) };
    let n_var = BiPoly::monomial(Scalar::one(), 1, 0);
    let c_of = |v: Scalar| BiPoly::monomial(v, 0, 0);
    match kind {
        LadderKind::DiscreteSeriesUp | LadderKind::DiscreteSeriesDown => {
            if m < 1 {
                return Err(Error::InvalidInput(
                    "discrete series require m ≥ 1".to_string(),
                ));
            }
            let a = half_t(c_of(Scalar::from_int(m - 2)).sub(&n_var));
            let b = half_t(c_of(Scalar::from_int(m)).add(&n_var));
            let set = if kind == LadderKind::DiscreteSeriesUp {
                WeightSet::RayUp(m)
            } else {
                WeightSet::RayDown(-m)
            };
            LadderModule::new(set, a, b)
        }
        LadderKind::Finite => {
            if m < 0 {
                return Err(Error::InvalidInput(
                    "finite ladders require m ≥ 0".to_string(),
                ));
            }
            let a = half_t(c_of(Scalar::from_int(m)).sub(&n_var));
            let b = half_t(c_of(Scalar::from_int(m + 2)).add(&n_var));
            LadderModule::new(WeightSet::Finite(m), a, b)
        }
        LadderKind::LatticeEven | LadderKind::LatticeOdd => {
            let c = casimir.ok_or_else(|| {
                Error::InvalidInput("lattice ladders take a Casimir parameter".to_string())
            })?;
            let a = half_t(c_of(&c - &Scalar::one()).sub(&n_var));
            let b = half_t(c_of(&c + &Scalar::one()).add(&n_var));
            let set = if kind == LadderKind::LatticeEven {
                WeightSet::LatticeEven
            } else {
                WeightSet::LatticeOdd
            };
            LadderModule::new(set, a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        assert!(sl2_constant_family().validate().is_empty());
        assert!(sl2_block_pair_constant().validate().is_empty());
        let fam = sl2_family(1).unwrap();
        let q = sl2_quadratic(&fam).unwrap();
        assert!(q.validate().is_empty());
        assert!(q.has_split());
    }

    #[test]
    fn ds_ladder_satisfies_product_relation() {
        // A_n·B_n = t²/4·(m(m−2) − n(n+2)) on every rung.
        for m in 1..=5i64 {
            let ladder = make_ladder(LadderKind::DiscreteSeriesUp, m, None).unwrap();
            for k in 0..5 {
                let n = m + 2 * k;
                let prod = ladder.a_at(n).mul(&ladder.b_at(n));
                let expect = Poly::monomial(Scalar::from_ratio(m * (m - 2) - n * (n + 2), 4), 2);
                assert_eq!(prod, expect, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn lattice_products_match_casimir() {
        // Interior products equal 2ω − t²/4·n(n+2) with ω = t²/8(c²−1).
        let c = Scalar::from_ratio(1, 2);
        let ladder = make_ladder(LadderKind::LatticeEven, 0, Some(c.clone())).unwrap();
        let omega = ladder.casimir_scalar();
        let c2m1 = &(&c * &c) - &Scalar::one();
        assert_eq!(omega, Poly::monomial(&c2m1 * &Scalar::from_ratio(1, 8), 2));
        for n in [-6i64, -2, 0, 4] {
            let prod = ladder.a_at(n).mul(&ladder.b_at(n));
            let expect = omega
                .scale(&Scalar::from_int(2))
                .sub(&Poly::monomial(Scalar::from_ratio(n * (n + 2), 4), 2));
            assert_eq!(prod, expect, "n={n}");
        }
    }
}
