//! The Haar state: numeric evaluation through the GNS representation, and
//! an exact small-degree oracle obtained by solving the left-invariance
//! equations over the field of rational functions of `q`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::gns::{LeftAction, TruncatedSpace};
use crate::qalgebra::{AlgebraElement, PBWMonomial};
use crate::scalar::QRat;
use crate::{check_q, Error};

/// Haar value of `x` as a vacuum expectation in a Peter-Weyl truncation.
///
/// `cutoff` is the truncation level `twolmax`; it must dominate the total
/// generator degree of `x` so the vacuum orbit stays strictly inside the
/// truncation.
pub fn haar(x: &AlgebraElement, q: f64, cutoff: u32) -> Result<Complex64, Error> {
    check_q(q)?;
    let degree = x.degree();
    if degree > cutoff {
        return Err(Error::CutoffTooSmall { cutoff, degree });
    }
    let space = TruncatedSpace::new(cutoff as i64);
    let action = LeftAction::new(&space, q)?;
    let mut vac = vec![Complex64::new(0.0, 0.0); space.dim()];
    vac[0] = Complex64::new(1.0, 0.0);
    let v = action.apply_element(x, &vac);
    Ok(v[0])
}

/// Exact Haar values on weight-zero basis monomials of degree at most
/// `maxdegree`, as rational functions of `q`.
///
/// The values are reconstructed by solving the finite linear system imposed
/// by left invariance, `(id ⊗ φ)Δ(x) = φ(x)·1`, together with `φ(1) = 1`,
/// on all basis monomials of bounded degree. If the truncated system does
/// not pin down every unknown the rank defect is reported instead of
/// guessing.
pub fn haar_invariance_oracle(
    maxdegree: u32,
) -> Result<BTreeMap<PBWMonomial, QRat>, Error> {
    if maxdegree > 8 {
        return Err(Error::InvalidInput(format!(
            "invariance oracle is a desk-scale tool, maxdegree {maxdegree} > 8"
        )));
    }
    let unknowns = PBWMonomial::all_up_to_degree(maxdegree);
    let index: BTreeMap<PBWMonomial, usize> =
        unknowns.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = unknowns.len();

    // Assemble the equations. Row layout: coefficients for each unknown,
    // then the right-hand side in the last slot.
    let mut rows: Vec<Vec<QRat>> = Vec::new();
    // Normalization φ(1) = 1.
    {
        let mut row = vec![QRat::zero(); n + 1];
        row[index[&PBWMonomial::unit()]] = QRat::one();
        row[n] = QRat::one();
        rows.push(row);
    }
    for m in &unknowns {
        let delta = AlgebraElement::monomial(*m).comultiply();
        // Group Δ(m) by the first leg: Σ_u u ⊗ (Σ c φ(v)).
        let mut by_first: BTreeMap<PBWMonomial, Vec<(PBWMonomial, QRat)>> = BTreeMap::new();
        for ((u, v), c) in delta.terms() {
            by_first
                .entry(*u)
                .or_default()
                .push((*v, QRat::from_laurent(c.clone())));
        }
        for (u, contributions) in by_first {
            let mut row = vec![QRat::zero(); n + 1];
            for (v, c) in contributions {
                let slot = index[&v];
                row[slot] = row[slot].clone() + c;
            }
            if u.is_unit() {
                let slot = index[m];
                row[slot] = row[slot].clone() - QRat::one();
            }
            // (id⊗φ)Δ(m) has coefficient of u equal to φ(m)·[u = 1].
            rows.push(row);
        }
    }

    let solution = gauss_solve(rows, n).map_err(|defect| Error::SingularSystem {
        degree: maxdegree,
        defect,
    })?;

    Ok(unknowns
        .into_iter()
        .filter(|m| m.weights() == (0, 0))
        .map(|m| {
            let v = solution[index[&m]].clone();
            (m, v)
        })
        .collect())
}

/// Gauss-Jordan elimination over the rational function field. Returns the
/// unique solution or the rank defect if free variables remain.
fn gauss_solve(rows: Vec<Vec<QRat>>, n: usize) -> Result<Vec<QRat>, usize> {
    // pivot column -> reduced row
    let mut pivots: BTreeMap<usize, Vec<QRat>> = BTreeMap::new();
    for mut row in rows {
        // Reduce against the existing pivots.
        for (col, prow) in &pivots {
            let factor = row[*col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in 0..=n {
                row[k] = row[k].clone() - factor.clone() * prow[k].clone();
            }
        }
        let Some(col) = (0..n).find(|k| !row[*k].is_zero()) else {
            debug_assert!(row[n].is_zero(), "inconsistent invariance system");
            continue;
        };
        // Normalize and back-eliminate from stored pivots.
        let inv = row[col].recip();
        for k in 0..=n {
            row[k] = row[k].clone() * inv.clone();
        }
        for prow in pivots.values_mut() {
            let factor = prow[col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in 0..=n {
                prow[k] = prow[k].clone() - factor.clone() * row[k].clone();
            }
        }
        pivots.insert(col, row);
        if pivots.len() == n {
            break;
        }
    }
    if pivots.len() < n {
        return Err(n - pivots.len());
    }
    Ok((0..n).map(|col| pivots[&col][n].clone()).collect())
}

/// Exact Haar value of a normal-form element against a precomputed oracle:
/// weight-zero monomials contribute their oracle value, every other
/// monomial contributes zero. Errors if a needed value is missing from the
/// oracle (degree too small).
pub fn haar_exact(
    x: &AlgebraElement,
    oracle: &BTreeMap<PBWMonomial, QRat>,
) -> Result<QRat, Error> {
    let mut out = QRat::zero();
    for (m, c) in x.terms() {
        if m.weights() != (0, 0) {
            continue;
        }
        let v = if m.is_unit() {
            QRat::one()
        } else {
            oracle
                .get(m)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!(
                    "oracle lacks the degree-{} monomial {m:?}; rebuild it \
                     with a larger degree bound",
                    m.degree()
                )))?
        };
        out = out + QRat::from_laurent(c.clone()) * v;
    }
    Ok(out)
}

/// The modular property `haar(xy) = haar(y · (δ⇀x↼δ))` as an exact rational
/// function of `q`: the returned difference is identically zero when the
/// property holds. All cancellation happens in exact arithmetic, so this is
/// immune to the q-power amplification that plagues the floating-point
/// defect at small `q`.
pub fn modular_defect_exact(
    x: &AlgebraElement,
    y: &AlgebraElement,
    oracle: &BTreeMap<PBWMonomial, QRat>,
) -> Result<QRat, Error> {
    let lhs = haar_exact(&x.multiply(y), oracle)?;
    let rhs = haar_exact(&y.multiply(&x.modular_twist()), oracle)?;
    Ok(lhs - rhs)
}

/// Exact statement of the modular property at a numeric `q`:
/// `haar(xy) - haar(y · (δ⇀x↼δ))`.
pub fn modular_defect(
    x: &AlgebraElement,
    y: &AlgebraElement,
    q: f64,
    cutoff: u32,
) -> Result<f64, Error> {
    let lhs = haar(&x.multiply(y), q, cutoff)?;
    let twisted = x.modular_twist();
    let rhs = haar(&y.multiply(&twisted), q, cutoff)?;
    Ok((lhs - rhs).norm())
}

#[allow(unused_imports)]
use crate::qalgebra::Functional;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{Generator, MonKind};
    use crate::scalar::LaurentQ;

    fn gamma_star_gamma() -> AlgebraElement {
        let g = AlgebraElement::generator(Generator::Gamma);
        g.star().multiply(&g)
    }

    #[test]
    fn haar_of_unit_and_generator() {
        let one = AlgebraElement::one();
        assert!((haar(&one, 0.5, 4).unwrap().re - 1.0).abs() < 1e-15);
        let a = AlgebraElement::generator(Generator::Alpha);
        assert!(haar(&a, 0.5, 4).unwrap().norm() < 1e-15);
    }

    #[test]
    fn haar_gamma_star_gamma() {
        // 1/(1+q²) = 0.8 at q = 1/2
        let h = haar(&gamma_star_gamma(), 0.5, 6).unwrap();
        assert!((h.re - 0.8).abs() < 1e-12, "{h}");
    }

    #[test]
    fn cutoff_guard() {
        let x = gamma_star_gamma();
        assert!(matches!(
            haar(&x, 0.5, 1),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(matches!(haar(&x, 1.0, 8), Err(Error::QOutOfRange(_))));
    }

    #[test]
    fn oracle_small_degree() {
        let table = haar_invariance_oracle(2).unwrap();
        // φ(1) = 1
        let unit = table.get(&PBWMonomial::unit()).unwrap();
        assert_eq!(unit.clone(), QRat::one());
        // φ(γγ*) = 1/(1+q²)
        let ggs = PBWMonomial::new(MonKind::Plain, 0, 1, 1);
        let expected = QRat::new(LaurentQ::one(), LaurentQ::one() + LaurentQ::q_pow(2));
        assert_eq!(table.get(&ggs).unwrap().clone(), expected);
    }

    #[test]
    fn oracle_matches_numeric_haar() {
        let table = haar_invariance_oracle(3).unwrap();
        for (m, exact) in &table {
            for q in [0.3, 0.5, 0.8] {
                let h = haar(&AlgebraElement::monomial(*m), q, 8).unwrap();
                assert!(
                    (h.re - exact.eval(q)).abs() < 1e-10,
                    "{m} at q={q}: {} vs {}",
                    h.re,
                    exact.eval(q)
                );
            }
        }
    }
}
