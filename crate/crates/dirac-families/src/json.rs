//! JSON wire formats: families, ladders, enveloping/Clifford elements,
//! and cohomology reports. Polynomials serialize as coefficient lists in
//! ascending exponent order; scalars as exact strings `a/b` or
//! `a/b+c/d*i`.

use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::clifford::CliffordElement;
use crate::dirac::{AElement, CohomologyReport, LadderModule, WeightSet};
use crate::lie::{BasisElement, CartanData, Kind, LieFamily, QuadraticSpaceFamily};
use crate::matrix::PolyMatrix;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::ue::UeElement;
use crate::{Error, Result};

pub fn poly_to_json(p: &Poly) -> Vec<String> {
    p.dense_coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn poly_from_json(coeffs: &[String]) -> Result<Poly> {
    let parsed: Result<Vec<Scalar>> = coeffs.iter().map(|s| s.parse()).collect();
    Ok(Poly::from_dense(parsed?))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BasisJson {
    pub label: String,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CartanJson {
    pub n_minus: Vec<usize>,
    pub h: Vec<usize>,
    pub n_plus: Vec<usize>,
    pub t: Vec<usize>,
    pub a: Vec<usize>,
}

/// Optional isotropic-split data; indices refer to the `p`-sub-basis.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IsoJson {
    pub minus: Vec<usize>,
    pub plus: Vec<usize>,
    #[serde(default)]
    pub zero: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FamilyJson {
    pub basis: Vec<BasisJson>,
    /// `[i, j, [[k, poly], ...]]` rows: `[b_i, b_j] = Σ poly·b_k`.
    pub structure: Vec<(usize, usize, Vec<(usize, Vec<String>)>)>,
    pub n: u32,
    pub form: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cartan: Option<CartanJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iso: Option<IsoJson>,
}

pub fn family_to_json(fam: &LieFamily, iso: Option<&QuadraticSpaceFamily>) -> FamilyJson {
    let rank = fam.rank();
    let mut structure = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            let terms = fam.bracket(i, j);
            if terms.is_empty() {
                continue;
            }
            structure.push((
                i,
                j,
                terms
                    .into_iter()
                    .map(|(k, c)| (k, poly_to_json(&c)))
                    .collect(),
            ));
        }
    }
    FamilyJson {
        basis: fam
            .basis
            .iter()
            .map(|b| BasisJson {
                label: b.label.clone(),
                kind: match b.kind {
                    Kind::Compact => "compact".to_string(),
                    Kind::Noncompact => "noncompact".to_string(),
                },
            })
            .collect(),
        structure,
        n: fam.n_deform,
        form: (0..rank)
            .map(|i| (0..rank).map(|j| poly_to_json(&fam.form[(i, j)])).collect())
            .collect(),
        cartan: fam.cartan.as_ref().map(|c| CartanJson {
            n_minus: c.n_minus.clone(),
            h: c.h.clone(),
            n_plus: c.n_plus.clone(),
            t: c.t.clone(),
            a: c.a.clone(),
        }),
        weyl: fam.weyl.as_ref().map(|ws| {
            ws.iter()
                .map(|w| {
                    w.iter()
                        .map(|row| row.iter().map(|s| s.to_string()).collect())
                        .collect()
                })
                .collect()
        }),
        iso: iso.map(|q| IsoJson {
            minus: q.iso_minus.clone(),
            plus: q.iso_plus.clone(),
            zero: q.iso_zero.clone(),
        }),
    }
}

pub fn family_from_json(json: &FamilyJson) -> Result<LieFamily> {
    let rank = json.basis.len();
    let basis: Result<Vec<BasisElement>> = json
        .basis
        .iter()
        .map(|b| {
            let kind = match b.kind.as_str() {
                "compact" => Kind::Compact,
                "noncompact" => Kind::Noncompact,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "basis type must be compact|noncompact, got {other:?}"
                    )))
                }
            };
            Ok(BasisElement {
                label: b.label.clone(),
                kind,
            })
        })
        .collect();
    let basis = basis?;
    let mut brackets = Vec::new();
    for (i, j, terms) in &json.structure {
        if *i >= rank || *j >= rank {
            return Err(Error::InvalidInput(format!(
                "structure index ({i},{j}) out of range"
            )));
        }
        let parsed: Result<Vec<(usize, Poly)>> = terms
            .iter()
            .map(|(k, coeffs)| {
                if *k >= rank {
                    return Err(Error::InvalidInput(format!("target index {k} out of range")));
                }
                Ok((*k, poly_from_json(coeffs)?))
            })
            .collect();
        brackets.push((*i, *j, parsed?));
    }
    if json.form.len() != rank || json.form.iter().any(|row| row.len() != rank) {
        return Err(Error::InvalidInput("form must be a rank×rank grid".to_string()));
    }
    let mut form = PolyMatrix::zero(rank, rank);
    for (i, row) in json.form.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            form[(i, j)] = poly_from_json(entry)?;
        }
    }
    let cartan = json.cartan.as_ref().map(|c| CartanData {
        n_minus: c.n_minus.clone(),
        h: c.h.clone(),
        n_plus: c.n_plus.clone(),
        t: c.t.clone(),
        a: c.a.clone(),
    });
    let weyl = match &json.weyl {
        None => None,
        Some(ws) => {
            let parsed: Result<Vec<Vec<Vec<Scalar>>>> = ws
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|row| row.iter().map(|s| s.parse()).collect())
                        .collect()
                })
                .collect();
            Some(parsed?)
        }
    };
    Ok(LieFamily::new(basis, brackets, json.n, form, cartan, weyl))
}

/// The quadratic space of a family JSON: explicit `iso` data when given,
/// otherwise derived from the triangular decomposition when `n±` lie in
/// `p` (the sl2-shaped situation).
pub fn quadratic_from_json(json: &FamilyJson, fam: &LieFamily) -> Result<QuadraticSpaceFamily> {
    if let Some(iso) = &json.iso {
        return crate::lie::rescaled_form_with_iso(fam, &iso.minus, &iso.plus, &iso.zero);
    }
    if let Some(cartan) = &fam.cartan {
        let p_idx = fam.noncompact_indices();
        let sub_index = |decl: usize| p_idx.iter().position(|&i| i == decl);
        let minus: Option<Vec<usize>> = cartan.n_minus.iter().map(|&i| sub_index(i)).collect();
        let plus: Option<Vec<usize>> = cartan.n_plus.iter().map(|&i| sub_index(i)).collect();
        if let (Some(minus), Some(plus)) = (minus, plus) {
            if minus.len() + plus.len() == p_idx.len() {
                return crate::lie::rescaled_form_with_iso(fam, &minus, &plus, &[]);
            }
        }
    }
    crate::lie::rescaled_form(fam)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LadderJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casimir: Option<String>,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

pub fn ladder_to_json(ladder: &LadderModule) -> LadderJson {
    let (kind, m) = match ladder.weights {
        WeightSet::RayUp(min) => ("ray_up", Some(min)),
        WeightSet::RayDown(max) => ("ray_down", Some(-max)),
        WeightSet::Finite(m) => ("finite", Some(m)),
        WeightSet::LatticeEven => ("lattice_even", None),
        WeightSet::LatticeOdd => ("lattice_odd", None),
    };
    LadderJson {
        kind: kind.to_string(),
        m,
        casimir: None,
        a: ladder.a_expr.to_string(),
        b: ladder.b_expr.to_string(),
    }
}

pub fn ladder_from_json(json: &LadderJson) -> Result<LadderModule> {
    let m = json.m;
    let need_m = || m.ok_or_else(|| Error::InvalidInput("this ladder kind needs m".to_string()));
    let weights = match json.kind.as_str() {
        "ray_up" => WeightSet::RayUp(need_m()?),
        "ray_down" => WeightSet::RayDown(-need_m()?),
        "finite" => WeightSet::Finite(need_m()?),
        "lattice_even" => WeightSet::LatticeEven,
        "lattice_odd" => WeightSet::LatticeOdd,
        other => {
            return Err(Error::InvalidInput(format!("unknown ladder kind {other:?}")))
        }
    };
    let a = BiPoly::parse(&json.a)?;
    let b = BiPoly::parse(&json.b)?;
    LadderModule::new(weights, a, b)
}

/// `[[exponent-vector, poly], ...]` with exponents indexed by the
/// declaration order of the family basis.
pub type UeJson = Vec<(Vec<u32>, Vec<String>)>;

pub fn ue_to_json(z: &UeElement) -> UeJson {
    z.terms()
        .map(|(mono, coeff)| (mono.clone(), poly_to_json(coeff)))
        .collect()
}

pub fn ue_from_json(json: &UeJson, rank: usize) -> Result<UeElement> {
    let mut out = UeElement::zero();
    for (mono, coeff) in json {
        if mono.len() != rank {
            return Err(Error::InvalidInput(format!(
                "exponent vector length {} ≠ rank {rank}",
                mono.len()
            )));
        }
        out.add_term(mono.clone(), poly_from_json(coeff)?);
    }
    Ok(out)
}

/// `[[index-word, poly], ...]` over the `p`-sub-basis.
pub type CliffordJson = Vec<(Vec<usize>, Vec<String>)>;

pub fn clifford_to_json(z: &CliffordElement) -> CliffordJson {
    z.terms()
        .map(|(word, coeff)| (word.clone(), poly_to_json(coeff)))
        .collect()
}

/// `[[exponent-vector, index-word, poly], ...]`.
pub type AJson = Vec<(Vec<u32>, Vec<usize>, Vec<String>)>;

pub fn a_to_json(z: &AElement) -> AJson {
    z.terms()
        .map(|((mono, word), coeff)| (mono.clone(), word.clone(), poly_to_json(coeff)))
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CohomologyEntryJson {
    pub weight: i64,
    pub free_rank: usize,
    pub torsion: Vec<Vec<String>>,
    pub representatives: Vec<String>,
}

pub fn report_to_json(report: &CohomologyReport) -> Vec<CohomologyEntryJson> {
    report
        .entries
        .iter()
        .map(|e| CohomologyEntryJson {
            weight: e.weight,
            free_rank: e.free_rank,
            torsion: e.torsion.iter().map(poly_to_json).collect(),
            representatives: e.representatives.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2;

    #[test]
    fn family_roundtrip() {
        let fam = sl2::sl2_family(1).unwrap();
        let q = sl2::sl2_quadratic(&fam).unwrap();
        let json = family_to_json(&fam, Some(&q));
        let text = serde_json::to_string_pretty(&json).unwrap();
        let parsed: FamilyJson = serde_json::from_str(&text).unwrap();
        let fam2 = family_from_json(&parsed).unwrap();
        assert_eq!(fam2.basis, fam.basis);
        assert_eq!(fam2.form, fam.form);
        assert_eq!(fam2.n_deform, 1);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fam.bracket(i, j), fam2.bracket(i, j));
            }
        }
        let q2 = quadratic_from_json(&parsed, &fam2).unwrap();
        assert_eq!(q2.iso_minus, q.iso_minus);
        assert_eq!(q2.form, q.form);
    }

    #[test]
    fn quadratic_derived_without_iso() {
        let fam = sl2::sl2_family(1).unwrap();
        let mut json = family_to_json(&fam, None);
        json.iso = None;
        let fam2 = family_from_json(&json).unwrap();
        let q = quadratic_from_json(&json, &fam2).unwrap();
        // p-sub order (x, y): p⁻ = span(y) = index 1.
        assert_eq!(q.iso_minus, vec![1]);
        assert_eq!(q.iso_plus, vec![0]);
    }

    #[test]
    fn ladder_roundtrip() {
        for (kind, m, cas) in [
            (sl2::LadderKind::DiscreteSeriesUp, 3, None),
            (sl2::LadderKind::DiscreteSeriesDown, 2, None),
            (sl2::LadderKind::Finite, 4, None),
            (
                sl2::LadderKind::LatticeEven,
                0,
                Some(Scalar::from_ratio(1, 2)),
            ),
        ] {
            let ladder = sl2::make_ladder(kind, m, cas).unwrap();
            let json = ladder_to_json(&ladder);
            let text = serde_json::to_string(&json).unwrap();
            let parsed: LadderJson = serde_json::from_str(&text).unwrap();
            let ladder2 = ladder_from_json(&parsed).unwrap();
            assert_eq!(ladder2.weights, ladder.weights);
            assert_eq!(ladder2.a_expr, ladder.a_expr);
            assert_eq!(ladder2.b_expr, ladder.b_expr);
        }
    }

    #[test]
    fn ue_roundtrip() {
        let fam = sl2::sl2_family(1).unwrap();
        let omega = crate::ue::casimir(&fam).unwrap();
        let json = ue_to_json(&omega);
        let back = ue_from_json(&json, fam.rank()).unwrap();
        assert_eq!(back, omega);
    }

    #[test]
    fn bad_inputs_rejected() {
        let fam = sl2::sl2_family(1).unwrap();
        let mut json = family_to_json(&fam, None);
        json.basis[0].kind = "weird".to_string();
        assert!(family_from_json(&json).is_err());
        let ladder = LadderJson {
            kind: "spiral".to_string(),
            m: Some(1),
            casimir: None,
            a: "t".to_string(),
            b: "t".to_string(),
        };
        assert!(ladder_from_json(&ladder).is_err());
    }
}
