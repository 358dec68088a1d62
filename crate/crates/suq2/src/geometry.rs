//! The standard Podles sphere and its Dirac geometry, at truncation level.
//!
//! The sphere is the weight-zero subalgebra of the quantized function
//! algebra; the line bundle of degree `k` is the weight subspace `H_k`. The
//! spinor space is `H_{+1} ⊕ H_{-1}`, the Dirac operator scales the sector
//! swap by the q-number `[l + 1/2]_q`, and its phase is the plain sector
//! swap. Compactness statements are replaced by measured tail-norm
//! sequences, which is all a finite truncation can honestly certify.
//!
//! ```
//! // |D| scales each twol sector by [l + 1/2]_q, and the phase satisfies
//! // F² = 1 and F = F* exactly.
//! let report = suq2::geometry::verify_spectrum(0.5, 8, 1e-12).unwrap();
//! assert!(report.pass);
//! ```

use num_complex::Complex64;

use crate::gns::{LeftAction, PWIndex, RightAction, SparseOperator, TruncatedSpace};
use crate::qalgebra::{AlgebraElement, Functional, Generator, PBWMonomial, Side};
use crate::report::{Check, Report};
use crate::{check_q, q_number, Error};

/// The section space of the line bundle of degree `k`: the `H_k` slice of a
/// truncation, with its sector bookkeeping.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub k: i64,
    /// Global basis positions within the ambient truncation, ordered by
    /// `(twol, twoi)`.
    pub indices: Vec<usize>,
    /// The Peter-Weyl labels of those positions.
    pub labels: Vec<PWIndex>,
}

impl SectionSpace {
    pub fn new(space: &TruncatedSpace, k: i64) -> SectionSpace {
        let indices = space.weight_subspace(k);
        let labels = indices.iter().map(|p| space.basis()[*p]).collect();
        SectionSpace { k, indices, labels }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Multiplicity of the `twol` sector (0 or 1).
    pub fn sector_multiplicity(&self, twol: i64) -> usize {
        self.labels.iter().filter(|l| l.twol == twol).count() / ((twol + 1) as usize).max(1)
    }

    /// Positions (within this section) with `twol >= bound`.
    fn tail_positions(&self, bound: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|p| self.labels[*p].twol >= bound)
            .collect()
    }

    fn interior_positions(&self, twol_bound: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|p| self.labels[*p].twol <= twol_bound)
            .collect()
    }
}

/// The spinor space `H_{+1} ⊕ H_{-1}`. The two halves run through the same
/// `(twol, twoi)` labels, so their bases align position-by-position; the
/// plus half occupies spinor coordinates `0..n`, the minus half `n..2n`.
#[derive(Clone, Debug)]
pub struct SpinorSpace {
    pub plus: SectionSpace,
    pub minus: SectionSpace,
}

impl SpinorSpace {
    pub fn new(space: &TruncatedSpace) -> SpinorSpace {
        let plus = SectionSpace::new(space, 1);
        let minus = SectionSpace::new(space, -1);
        assert_eq!(plus.dim(), minus.dim());
        for (p, m) in plus.labels.iter().zip(&minus.labels) {
            assert_eq!((p.twol, p.twoi), (m.twol, m.twoi));
        }
        SpinorSpace { plus, minus }
    }

    pub fn half_dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim()
    }

    /// Spinor coordinates with `twol >= bound` (both halves).
    pub fn tail_positions(&self, bound: i64) -> Vec<usize> {
        let n = self.half_dim();
        let mut out = self.plus.tail_positions(bound);
        out.extend(self.minus.tail_positions(bound).into_iter().map(|p| p + n));
        out
    }

    pub fn interior_positions(&self, twol_bound: i64) -> Vec<usize> {
        let n = self.half_dim();
        let mut out = self.plus.interior_positions(twol_bound);
        out.extend(
            self.minus
                .interior_positions(twol_bound)
                .into_iter()
                .map(|p| p + n),
        );
        out
    }

    /// Lift two half-space operators to the block-diagonal spinor operator.
    pub fn diagonal(&self, on_plus: &SparseOperator, on_minus: &SparseOperator) -> SparseOperator {
        let n = self.half_dim();
        assert_eq!(on_plus.dim(), n);
        assert_eq!(on_minus.dim(), n);
        let mut out = SparseOperator::zero(2 * n);
        for (r, c, v) in on_plus.entries() {
            out.add_entry(r, c, v);
        }
        for (r, c, v) in on_minus.entries() {
            out.add_entry(r + n, c + n, v);
        }
        out
    }
}

/// An odd operator on the spinor space: an upper block `H_- -> H_+` and a
/// lower block `H_+ -> H_-` in the aligned half-space bases.
#[derive(Clone, Debug)]
pub struct OddOperator {
    pub upper: SparseOperator,
    pub lower: SparseOperator,
}

impl OddOperator {
    /// The full matrix `[[0, upper], [lower, 0]]` on the spinor space.
    pub fn to_spinor_matrix(&self) -> SparseOperator {
        let n = self.upper.dim();
        assert_eq!(self.lower.dim(), n);
        let mut out = SparseOperator::zero(2 * n);
        for (r, c, v) in self.upper.entries() {
            out.add_entry(r, c + n, v);
        }
        for (r, c, v) in self.lower.entries() {
            out.add_entry(r + n, c, v);
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        let m = self.to_spinor_matrix();
        m.sub(&m.adjoint()).norm() == 0.0
    }
}

/// The minimal weight-zero generators of the sphere: `γ*γ`, `αγ*`, `γα*`.
pub fn podles_generators() -> Vec<AlgebraElement> {
    let alpha = AlgebraElement::generator(Generator::Alpha);
    let gamma = AlgebraElement::generator(Generator::Gamma);
    vec![
        gamma.star().multiply(&gamma),
        alpha.multiply(&gamma.star()),
        gamma.multiply(&alpha.star()),
    ]
}

/// Rank evidence that the three sphere generators *-generate the
/// weight-zero subalgebra degree-by-degree: words in the generators of
/// length `<= d` linearly span every right-weight-zero PBW monomial of
/// degree `<= 2d`. Returns `(rank, dimension)` of the coefficient matrix at
/// a generic numeric `q`.
pub fn podles_generation_dimension(maxhalfdeg: u32) -> (usize, usize) {
    let gens = podles_generators();
    let mut span: Vec<AlgebraElement> = vec![AlgebraElement::one()];
    let mut frontier = vec![AlgebraElement::one()];
    for _ in 0..maxhalfdeg {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                next.push(x.multiply(g));
                next.push(x.multiply(&g.star()));
            }
        }
        span.extend(next.iter().cloned());
        frontier = next;
    }
    let columns: Vec<PBWMonomial> = PBWMonomial::all_up_to_degree(2 * maxhalfdeg)
        .into_iter()
        .filter(|m| m.weights().1 == 0)
        .collect();
    let col_of: std::collections::HashMap<PBWMonomial, usize> =
        columns.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let q = 0.4735; // generic evaluation point, away from small roots
    let mut mat = nalgebra::DMatrix::<f64>::zeros(span.len(), columns.len());
    for (r, x) in span.iter().enumerate() {
        for (m, c) in x.terms() {
            if let Some(col) = col_of.get(m) {
                mat[(r, *col)] = c.eval(q);
            }
        }
    }
    let svd = mat.svd(false, false);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > 1e-9 * smax.max(1.0))
        .count();
    (rank, columns.len())
}

/// The Dirac operator: sector swap scaled by `[l + 1/2]_q`.
pub fn build_dirac(space: &TruncatedSpace, q: f64) -> Result<(SpinorSpace, OddOperator), Error> {
    check_q(q)?;
    let spinor = SpinorSpace::new(space);
    let n = spinor.half_dim();
    let mut block = SparseOperator::zero(n);
    for (p, label) in spinor.plus.labels.iter().enumerate() {
        let ev = q_number(label.twol as f64 / 2.0 + 0.5, q);
        block.add_entry(p, p, Complex64::new(ev, 0.0));
    }
    Ok((spinor, OddOperator { upper: block.clone(), lower: block }))
}

/// The phase of the Dirac operator: the sector-swap partial isometry (the
/// Dirac builder with every scalar replaced by 1). Exactly a 0/1 matrix, so
/// `F² = 1` and `F = F*` hold with no tolerance.
pub fn build_phase(space: &TruncatedSpace) -> (SpinorSpace, OddOperator) {
    let spinor = SpinorSpace::new(space);
    let n = spinor.half_dim();
    let block = SparseOperator::identity(n);
    (spinor, OddOperator { upper: block.clone(), lower: block })
}

/// Compress a full-space operator to a section, returning the compressed
/// block together with the leakage norm (how far the operator is from
/// actually preserving the section on the given interior columns).
pub fn compress_to_section(
    op: &SparseOperator,
    section: &SectionSpace,
    interior_twol: i64,
) -> (SparseOperator, f64) {
    let keep: std::collections::HashMap<usize, usize> = section
        .indices
        .iter()
        .enumerate()
        .map(|(n, k)| (*k, n))
        .collect();
    let interior_cols: std::collections::HashSet<usize> = section
        .indices
        .iter()
        .enumerate()
        .filter(|(p, _)| section.labels[*p].twol <= interior_twol)
        .map(|(_, k)| *k)
        .collect();
    let mut block = SparseOperator::zero(section.dim());
    let mut leak = SparseOperator::zero(op.dim());
    for (r, c, v) in op.entries() {
        if let Some(nc) = keep.get(&c) {
            if let Some(nr) = keep.get(&r) {
                block.add_entry(*nr, *nc, v);
            } else if interior_cols.contains(&c) {
                leak.add_entry(r, c, v);
            }
        }
    }
    (block, leak.norm())
}

/// Tail norms `t(L0) = ‖P_{>=L0} C P_{>=L0}‖` of a spinor-space operator.
fn tail_norms(
    c: &SparseOperator,
    spinor: &SpinorSpace,
    interior_twol: i64,
    cutoffs: &[i64],
) -> Vec<f64> {
    let interior = spinor.interior_positions(interior_twol);
    let c = c.compress(&interior);
    let labels: Vec<i64> = {
        let n = spinor.half_dim();
        interior
            .iter()
            .map(|p| {
                if *p < n {
                    spinor.plus.labels[*p].twol
                } else {
                    spinor.minus.labels[*p - n].twol
                }
            })
            .collect()
    };
    cutoffs
        .iter()
        .map(|l0| {
            let keep: Vec<usize> = (0..labels.len()).filter(|p| labels[*p] >= *l0).collect();
            c.compress(&keep).norm()
        })
        .collect()
}

fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

/// Tail-norm evidence for compactness of `[F, π(x)]`, `x` a weight-zero
/// element acting by left multiplication on both spinor halves.
pub fn commutator_decay(
    x: &AlgebraElement,
    q: f64,
    twolmax: i64,
    cutoffs: &[i64],
    decay_threshold: f64,
) -> Result<Report, Error> {
    check_q(q)?;
    if x.terms().any(|(m, _)| m.weights().1 != 0) {
        return Err(Error::InvalidInput(format!(
            "commutator decay needs a right-weight-zero element, got {}",
            x.to_text()
        )));
    }
    let space = TruncatedSpace::new(twolmax);
    let action = crate::gns::LeftAction::new(&space, q)?;
    let full = action.represent(x);
    let (spinor, phase) = build_phase(&space);
    let margin = x.degree() as i64;
    let interior_twol = twolmax - margin;
    let (on_plus, leak_p) = compress_to_section(&full, &spinor.plus, interior_twol);
    let (on_minus, leak_m) = compress_to_section(&full, &spinor.minus, interior_twol);
    let pi = spinor.diagonal(&on_plus, &on_minus);
    let f = phase.to_spinor_matrix();
    let comm = f.commutator(&pi);
    let tails = tail_norms(&comm, &spinor, interior_twol, cutoffs);

    let mut report = Report::new("commutators");
    report.set_param("element", x.to_text());
    report.set_param("q", q);
    report.set_param("twolmax", twolmax);
    report.set_param("cutoffs", cutoffs);
    report.set_param("decay_threshold", decay_threshold);
    report.add_check(Check::residual(
        "section leakage (weight-zero elements preserve H_k)",
        leak_p.max(leak_m),
        1e-10,
    ));
    report.add_check(Check::sequence(
        "tail norms non-increasing",
        non_increasing(&tails),
        &tails,
        "non-increasing in L0",
    ));
    report.add_check(Check::residual(
        "final tail below threshold",
        *tails.last().unwrap_or(&0.0),
        decay_threshold,
    ));
    Ok(report.finalize())
}

/// The adjoint action `f · h = f₍₁₎ h (δ ⇀ S(f₍₂₎))` of a generator on the
/// GNS space, as a sparse operator with columns on the requested weight
/// subspaces.
pub fn drinfeld_action(
    g: Generator,
    action: &LeftAction<'_>,
    right: &RightAction<'_>,
    col_weights: Option<&[i64]>,
) -> Result<SparseOperator, Error> {
    let space = action.space();
    let q = action.q();
    let mut out = SparseOperator::zero(space.dim());
    for ((m1, m2), c) in AlgebraElement::generator(g).comultiply().terms() {
        let twisted = AlgebraElement::monomial(*m2)
            .antipode()
            .act_functional(Functional::Delta, Side::Left);
        let rmat = match col_weights {
            Some(ws) => right.represent_filtered(&twisted, |idx| ws.contains(&idx.twoj)),
            None => right.represent(&twisted),
        };
        let left = action.represent(&AlgebraElement::monomial(*m1));
        out = out.add(&left.matmul(&rmat).scale(Complex64::new(c.eval(q), 0.0)));
    }
    Ok(out)
}

/// Tail-norm evidence for near-commutation of the phase with the adjoint
/// action of a generator on the spinor space.
pub fn drinfeld_commutator_decay(
    g: Generator,
    q: f64,
    twolmax: i64,
    cutoffs: &[i64],
    decay_threshold: f64,
) -> Result<Report, Error> {
    check_q(q)?;
    let space = TruncatedSpace::new(twolmax);
    let left = LeftAction::new(&space, q)?;
    let right = RightAction::new(&space, q)?;
    let op = drinfeld_action(g, &left, &right, Some(&[1, -1]))?;
    let (spinor, phase) = build_phase(&space);
    // The action has total degree two, so columns within two levels of the
    // truncation edge see dropped contributions; stay inside them.
    let interior_twol = twolmax - 3;
    let (on_plus, leak_p) = compress_to_section(&op, &spinor.plus, interior_twol);
    let (on_minus, leak_m) = compress_to_section(&op, &spinor.minus, interior_twol);
    let act = spinor.diagonal(&on_plus, &on_minus);
    let f = phase.to_spinor_matrix();
    let comm = f.commutator(&act);
    let tails = tail_norms(&comm, &spinor, interior_twol, cutoffs);

    let mut report = Report::new("drinfeld-commutators");
    report.set_param("generator", format!("{g:?}"));
    report.set_param("q", q);
    report.set_param("twolmax", twolmax);
    report.set_param("cutoffs", cutoffs);
    report.set_param("decay_threshold", decay_threshold);
    report.add_check(Check::residual(
        "adjoint action preserves H_{+1} and H_{-1}",
        leak_p.max(leak_m),
        1e-8,
    ));
    report.add_check(Check::sequence(
        "tail norms non-increasing",
        non_increasing(&tails),
        &tails,
        "non-increasing in L0",
    ));
    report.add_check(Check::residual(
        "final tail below threshold",
        *tails.last().unwrap_or(&0.0),
        decay_threshold,
    ));
    Ok(report.finalize())
}

/// Spectrum check: `|D|` acts on the `twol` sector as `[l + 1/2]_q`, and the
/// phase squares to the identity exactly.
pub fn verify_spectrum(q: f64, twolmax: i64, tol: f64) -> Result<Report, Error> {
    let space = TruncatedSpace::new(twolmax);
    let (spinor, dirac) = build_dirac(&space, q)?;
    let (_, phase) = build_phase(&space);

    let mut report = Report::new("spectrum");
    report.set_param("q", q);
    report.set_param("twolmax", twolmax);
    report.set_param("tol", tol);

    let d = dirac.to_spinor_matrix();
    report.add_check(Check::boolean("D = D*", dirac.is_self_adjoint()));

    // |D| eigenvalues per sector, read from D*D on the aligned bases.
    let dd = d.adjoint().matmul(&d);
    let mut worst = 0.0f64;
    let n = spinor.half_dim();
    for (p, label) in spinor.plus.labels.iter().enumerate() {
        if label.twol > twolmax - 2 {
            continue;
        }
        let expected = q_number(label.twol as f64 / 2.0 + 0.5, q);
        for pos in [p, p + n] {
            let got = dd.get(pos, pos).re.sqrt();
            worst = worst.max((got - expected).abs());
        }
    }
    report.add_check(Check::residual(
        "|D| eigenvalue on twol sector = [l+1/2]_q",
        worst,
        tol,
    ));
    // Off-diagonal of D*D would spoil the sector statement; it is zero by
    // construction, assert anyway.
    let diag_defect: f64 = dd
        .entries()
        .filter(|(r, c, _)| r != c)
        .map(|(_, _, v)| v.norm())
        .fold(0.0, f64::max);
    report.add_check(Check::residual("D*D diagonal", diag_defect, 0.0));

    let f = phase.to_spinor_matrix();
    let f2 = f.matmul(&f).sub(&SparseOperator::identity(spinor.dim()));
    report.add_check(Check::residual("F^2 = 1 (exact)", f2.norm(), 0.0));
    report.add_check(Check::residual(
        "F = F* (exact)",
        f.sub(&f.adjoint()).norm(),
        0.0,
    ));

    // Kernel: both halves start at twol = 1, no unmatched sector.
    let min_sector = spinor
        .plus
        .labels
        .iter()
        .map(|l| l.twol)
        .min()
        .unwrap_or(i64::MAX);
    report.add_check(Check::exact("lowest spinor sector twol", min_sector, 1));
    let dirac_min_ev = q_number(1.0, q); // [1]_q = 1 for every q
    report.add_check(Check::exact(
        "eigenvalue on twol = 1 sector",
        format!("{dirac_min_ev}"),
        "1",
    ));
    Ok(report.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::word_element;

    #[test]
    fn podles_generators_have_weight_zero() {
        for x in podles_generators() {
            for (m, _) in x.terms() {
                assert_eq!(m.weights().1, 0, "{m}");
            }
        }
        // counit values: ε(γ*γ) = 0, ε(αγ*) = 0
        let gens = podles_generators();
        assert!(gens[0].counit().is_zero());
        assert!(gens[1].counit().is_zero());
    }

    #[test]
    fn podles_generators_generate_weight_zero_subalgebra() {
        let (spanned, total) = podles_generation_dimension(2);
        assert_eq!(spanned, total);
    }

    #[test]
    fn sector_multiplicities() {
        let space = TruncatedSpace::new(9);
        for k in -4i64..=4 {
            let section = SectionSpace::new(&space, k);
            for twol in 0..=9 {
                let expected = usize::from(twol >= k.abs() && (twol - k) % 2 == 0);
                assert_eq!(
                    section.sector_multiplicity(twol),
                    expected,
                    "k={k} twol={twol}"
                );
            }
        }
    }

    #[test]
    fn dirac_eigenvalues() {
        let space = TruncatedSpace::new(9);
        let q = 0.5;
        let (spinor, dirac) = build_dirac(&space, q).unwrap();
        // twol = 1 sector: [1]_q = 1 for every q.
        let p = spinor
            .plus
            .labels
            .iter()
            .position(|l| l.twol == 1)
            .unwrap();
        assert!((dirac.upper.get(p, p).re - 1.0).abs() < 1e-15);
        // twol = 3 sector at q = 0.5: [2]_q = q + 1/q = 2.5
        let p = spinor
            .plus
            .labels
            .iter()
            .position(|l| l.twol == 3)
            .unwrap();
        assert!((dirac.upper.get(p, p).re - 2.5).abs() < 1e-12);
        assert!(dirac.is_self_adjoint());
    }

    #[test]
    fn phase_squares_to_identity() {
        let report = verify_spectrum(0.5, 7, 1e-12).unwrap();
        assert!(report.pass, "{}", report.to_text());
    }

    #[test]
    fn commutator_of_unit_vanishes() {
        let report =
            commutator_decay(&AlgebraElement::one(), 0.5, 7, &[1, 3, 5], 1e-6).unwrap();
        assert!(report.pass, "{}", report.to_text());
    }

    #[test]
    fn commutator_decay_podles_generator() {
        let x = podles_generators().remove(0);
        let report = commutator_decay(&x, 0.5, 13, &[3, 5, 7, 9], 1.0).unwrap();
        assert!(report.pass, "{}", report.to_text());
    }

    #[test]
    fn weight_nonzero_rejected() {
        let x = word_element(&[Generator::Alpha]);
        assert!(matches!(
            commutator_decay(&x, 0.5, 7, &[1], 1e-6),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn drinfeld_action_of_expansion_matches_direct_formula() {
        // f = α: Δ(α) = α⊗α - qγ*⊗γ, δ⇀S(α) = qα*, δ⇀S(γ) = -γ, so the
        // action is q·(L(α)R(α*) + L(γ*)R(γ)).
        let space = TruncatedSpace::new(7);
        let q = 0.5;
        let action = LeftAction::new(&space, q).unwrap();
        let right = RightAction::new(&space, q).unwrap();
        let op = drinfeld_action(Generator::Alpha, &action, &right, None).unwrap();
        let alpha = AlgebraElement::generator(Generator::Alpha);
        let gamma = AlgebraElement::generator(Generator::Gamma);
        let direct = action
            .represent(&alpha)
            .matmul(&right.represent(&alpha.star()))
            .add(
                &action
                    .represent(&gamma.star())
                    .matmul(&right.represent(&gamma)),
            )
            .scale(Complex64::new(q, 0.0));
        let interior = space.interior_indices(3);
        assert!(op.sub(&direct).restrict_columns(&interior).norm() < 1e-9);
    }

    #[test]
    fn drinfeld_symbolic_expansions() {
        // δ⇀S(α) = q α* and δ⇀S(γ) = -γ, used in the expansion above.
        use crate::scalar::LaurentQ;
        let alpha = AlgebraElement::generator(Generator::Alpha);
        let gamma = AlgebraElement::generator(Generator::Gamma);
        assert_eq!(
            alpha.antipode().act_functional(Functional::Delta, Side::Left),
            alpha.star().scale(&LaurentQ::q_pow(1))
        );
        assert_eq!(
            gamma.antipode().act_functional(Functional::Delta, Side::Left),
            gamma.neg()
        );
    }

    #[test]
    fn drinfeld_vacuum_collapse() {
        // On the class of 1, the action of x gives x₍₁₎ (δ⇀S(x₍₂₎)), which
        // collapses to ε-like projections symbolically.
        let x = AlgebraElement::generator(Generator::Alpha);
        let mut collapsed = AlgebraElement::zero();
        for ((m1, m2), c) in x.comultiply().terms() {
            let twisted = AlgebraElement::monomial(*m2)
                .antipode()
                .act_functional(Functional::Delta, Side::Left);
            collapsed = collapsed.add(
                &AlgebraElement::monomial(*m1)
                    .multiply(&twisted)
                    .scale(c),
            );
        }
        // Numeric cross-check at the vacuum.
        let space = TruncatedSpace::new(6);
        let q = 0.5;
        let action = LeftAction::new(&space, q).unwrap();
        let right = RightAction::new(&space, q).unwrap();
        let op = drinfeld_action(Generator::Alpha, &action, &right, Some(&[0])).unwrap();
        let mut vac = vec![Complex64::new(0.0, 0.0); space.dim()];
        vac[0] = Complex64::new(1.0, 0.0);
        let lhs = op.apply(&vac);
        let rhs = action.apply_element(&collapsed, &vac);
        let diff: f64 = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn drinfeld_decay_small() {
        let report = drinfeld_commutator_decay(Generator::Alpha, 0.5, 11, &[3, 5, 7], 1.0)
            .unwrap();
        assert!(report.pass, "{}", report.to_text());
    }

    #[test]
    fn section_spaces_match_frobenius() {
        let space = TruncatedSpace::new(24);
        for k in -6i64..=6 {
            let section = SectionSpace::new(&space, k);
            for twol in 0..=24 {
                assert_eq!(
                    section.sector_multiplicity(twol) as i64,
                    crate::ktheory::frobenius_mult(twol, k),
                    "k={k} twol={twol}"
                );
            }
        }
    }

    #[test]
    fn odd_operator_kind() {
        let space = TruncatedSpace::new(5);
        let (_, dirac) = build_dirac(&space, 0.3).unwrap();
        let m = dirac.to_spinor_matrix();
        // Off-diagonal with respect to the grading: no entries within a half.
        let n = dirac.upper.dim();
        for (r, c, _) in m.entries() {
            assert!((r < n) != (c < n));
        }
    }
}
