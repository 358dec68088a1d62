//! Representation-ring arithmetic for the maximal torus and for the quantum
//! SU(2), and the equivariant index identities built on it.
//!
//! R(T) is the Laurent ring Z[z, z^-1] in a weight variable; R(G_q) is the
//! free Z-module on the irreducibles `V_l`, `l` a half-integer stored as
//! `twol`, with the classical fusion product (no q-dimensions enter). The
//! twisted Dirac index is computed two independent ways, a closed form and a
//! kernel enumeration on the model operator, and the duality suites reduce
//! to exact identities in these rings.
//!
//! ```
//! use suq2::ktheory::{index_operator, pairing, GRepElement};
//!
//! // Twist m = 1: the index is minus the trivial representation, by the
//! // closed form and by kernel enumeration on the model operator.
//! assert_eq!(pairing(1, 0), GRepElement::irrep(0).neg());
//! assert_eq!(index_operator(1, 10, 0.5).unwrap(), pairing(1, 0));
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::gns::TruncatedSpace;
use crate::report::{Check, Report};
use crate::{check_q, q_number, Error};

/// An element of R(T) = Z[z, z^-1]: integer coefficients by z-exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TCharacter {
    coeffs: BTreeMap<i64, i64>,
}

impl TCharacter {
    pub fn zero() -> TCharacter {
        TCharacter::default()
    }

    pub fn z_pow(k: i64) -> TCharacter {
        let mut c = TCharacter::zero();
        c.add_term(k, 1);
        c
    }

    pub fn one() -> TCharacter {
        TCharacter::z_pow(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, k: i64) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, k: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, other: &TCharacter) -> TCharacter {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, *c);
        }
        out
    }

    pub fn sub(&self, other: &TCharacter) -> TCharacter {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, -c);
        }
        out
    }

    pub fn mul(&self, other: &TCharacter) -> TCharacter {
        let mut out = TCharacter::zero();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, k: i64) -> TCharacter {
        self.mul(&TCharacter::z_pow(k))
    }
}

impl fmt::Display for TCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("{c}*z^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of R(G_q): integer multiplicities of the irreducibles `V_l`,
/// keyed by `twol = 2l`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GRepElement {
    coeffs: BTreeMap<i64, i64>,
}

impl GRepElement {
    pub fn zero() -> GRepElement {
        GRepElement::default()
    }

    /// The class of the irreducible `V_l`, `twol = 2l`.
    pub fn irrep(twol: i64) -> GRepElement {
        assert!(twol >= 0);
        let mut v = GRepElement::zero();
        v.add_term(twol, 1);
        v
    }

    pub fn one() -> GRepElement {
        GRepElement::irrep(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, twol: i64) -> i64 {
        self.coeffs.get(&twol).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn add_term(&mut self, twol: i64, c: i64) {
        assert!(twol >= 0);
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(twol).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&twol);
        }
    }

    pub fn add(&self, other: &GRepElement) -> GRepElement {
        let mut out = self.clone();
        for (twol, c) in &other.coeffs {
            out.add_term(*twol, *c);
        }
        out
    }

    pub fn sub(&self, other: &GRepElement) -> GRepElement {
        let mut out = self.clone();
        for (twol, c) in &other.coeffs {
            out.add_term(*twol, -c);
        }
        out
    }

    pub fn neg(&self) -> GRepElement {
        GRepElement::zero().sub(self)
    }

    /// Canonical text form: `0`, or terms `c*V[l]` joined by ` + `, with `l`
    /// printed as an integer or as `twol/2` when `twol` is odd.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(twol, c)| format!("{c}*V[{}]", spin_label(*twol)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(s: &str) -> Result<GRepElement, Error> {
        let s = s.trim();
        if s == "0" {
            return Ok(GRepElement::zero());
        }
        let mut out = GRepElement::zero();
        for term in s.split(" + ") {
            let (c, v) = term
                .split_once("*V[")
                .ok_or_else(|| Error::Parse(format!("bad rep term {term:?}")))?;
            let c: i64 = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?;
            let v = v
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("missing ']' in {term:?}")))?;
            let twol = match v.split_once('/') {
                Some((num, "2")) => num
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad label in {term:?}")))?,
                Some(_) => return Err(Error::Parse(format!("bad label in {term:?}"))),
                None => {
                    2 * v
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad label in {term:?}")))?
                }
            };
            out.add_term(twol, c);
        }
        Ok(out)
    }
}

fn spin_label(twol: i64) -> String {
    if twol % 2 == 0 {
        format!("{}", twol / 2)
    } else {
        format!("{twol}/2")
    }
}

impl fmt::Display for GRepElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Restriction to the torus: `res(V_l) = Σ_{m=-l}^{l} z^{2m}` (symmetric
/// weights, step 2 in twice-weight units), extended linearly.
pub fn t_restrict(v: &GRepElement) -> TCharacter {
    let mut out = TCharacter::zero();
    for (twol, c) in v.terms() {
        let mut w = -twol;
        while w <= twol {
            out.add_term(w, c);
            w += 2;
        }
    }
    out
}

/// Frobenius multiplicity of the weight `k` in `V_l`: 1 when `twol >= |k|`
/// with matching parity, else 0.
pub fn frobenius_mult(twol: i64, k: i64) -> i64 {
    i64::from(twol >= k.abs() && (twol - k) % 2 == 0)
}

/// The fusion (Clebsch-Gordan) product, extended bilinearly:
/// `V_a ⊗ V_b = ⊕ V_j`, `twoj` from `|twoa - twob|` to `twoa + twob` step 2.
pub fn fusion(a: &GRepElement, b: &GRepElement) -> GRepElement {
    let mut out = GRepElement::zero();
    for (twoa, ca) in a.terms() {
        for (twob, cb) in b.terms() {
            let mut twoj = (twoa - twob).abs();
            while twoj <= twoa + twob {
                out.add_term(twoj, ca * cb);
                twoj += 2;
            }
        }
    }
    out
}

/// Sector decomposition of the truncated `L²(E_k)`:
/// `Σ_{twol <= twolmax} frobenius_mult(twol, k) · V_l`.
pub fn l2_sectors(k: i64, twolmax: i64) -> GRepElement {
    let mut out = GRepElement::zero();
    for twol in 0..=twolmax {
        out.add_term(twol, frobenius_mult(twol, k));
    }
    out
}

/// Closed form for the index of the Dirac operator twisted by `E_m`:
/// `-V_{(m-1)/2}` for `m > 0`, `0` for `m = 0`, `+V_{-(m+1)/2}` for `m < 0`.
pub fn index_combinatorial(m: i64) -> GRepElement {
    use std::cmp::Ordering;
    match m.cmp(&0) {
        Ordering::Greater => GRepElement::irrep(m - 1).neg(),
        Ordering::Equal => GRepElement::zero(),
        Ordering::Less => GRepElement::irrep(-m - 1),
    }
}

/// Independent index oracle: build the model twisted operator
/// `D_m⁺: L²(E_{m+1}) -> L²(E_{m-1})` (sector-matching map scaled by the
/// Dirac eigenvalue `[l+1/2]_q`) on a truncation, enumerate the kernels of
/// both sides per `twol` sector by singular values, and return
/// `[ker D_m⁺] - [ker D_m⁻]`.
pub fn index_operator(m: i64, twolmax: i64, q: f64) -> Result<GRepElement, Error> {
    check_q(q)?;
    if twolmax < m.abs() + 4 {
        return Err(Error::MarginTooSmall { m, twolmax });
    }
    let space = TruncatedSpace::new(twolmax);
    let source = crate::geometry::SectionSpace::new(&space, m + 1);
    let target = crate::geometry::SectionSpace::new(&space, m - 1);

    let mut out = GRepElement::zero();
    for twol in 0..=twolmax {
        let cols: Vec<usize> = (0..source.dim())
            .filter(|p| source.labels[*p].twol == twol)
            .collect();
        let rows: Vec<usize> = (0..target.dim())
            .filter(|p| target.labels[*p].twol == twol)
            .collect();
        if cols.is_empty() && rows.is_empty() {
            continue;
        }
        // Block of D_m⁺ on the sector: matrix entries pair equal twoi.
        let mut block = nalgebra::DMatrix::<f64>::zeros(rows.len().max(1), cols.len().max(1));
        for (ci, cp) in cols.iter().enumerate() {
            for (ri, rp) in rows.iter().enumerate() {
                if source.labels[*cp].twoi == target.labels[*rp].twoi {
                    block[(ri, ci)] = q_number(twol as f64 / 2.0 + 0.5, q);
                }
            }
        }
        let svd = block.svd(false, false);
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|s| **s > 1e-9 * smax.max(1.0))
            .count();
        let ker_plus = cols.len() - rank;
        let ker_minus = rows.len() - rank;
        // A sector of V_l has dimension twol + 1; the kernel must fill whole
        // sectors or the model operator was assembled wrong.
        let sector_dim = (twol + 1) as usize;
        assert!(ker_plus % sector_dim == 0 && ker_minus % sector_dim == 0);
        out.add_term(twol, (ker_plus / sector_dim) as i64);
        out.add_term(twol, -((ker_minus / sector_dim) as i64));
    }
    Ok(out)
}

/// The Kasparov-product pairing `[E_k] ∘ [D ⊗ E_l]`, which depends only on
/// `k + l`.
pub fn pairing(k: i64, l: i64) -> GRepElement {
    index_combinatorial(k + l)
}

/// A table of pairings over a rectangle of `(k, l)`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingTable {
    pub entries: Vec<PairingEntry>,
    pub conventions: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingEntry {
    pub k: i64,
    pub l: i64,
    pub result: String,
}

impl PairingTable {
    pub fn build(krange: (i64, i64), lrange: (i64, i64)) -> PairingTable {
        let mut entries = Vec::new();
        for k in krange.0..=krange.1 {
            for l in lrange.0..=lrange.1 {
                entries.push(PairingEntry { k, l, result: pairing(k, l).to_text() });
            }
        }
        let mut conventions = BTreeMap::new();
        conventions.insert(
            "weight_convention".to_string(),
            "H_k = { e^(l)_ij : 2j = +k }".to_string(),
        );
        conventions.insert("eps_restriction".to_string(), "[E_b] -> z^b".to_string());
        PairingTable { entries, conventions }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l,result\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.k, e.l, e.result));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }
}

/// First duality composite: `comp(a) = res(pairing(a,-1)) - res(pairing(a,0))·z`.
pub fn comp(a: i64) -> TCharacter {
    t_restrict(&pairing(a, -1)).sub(&t_restrict(&pairing(a, 0)).shift(1))
}

/// Second duality composite: `comp2(a) = z⁻¹·res(pairing(0,a)) - res(pairing(1,a))`.
pub fn comp2(a: i64) -> TCharacter {
    t_restrict(&pairing(0, a))
        .shift(-1)
        .sub(&t_restrict(&pairing(1, a)))
}

/// The unit/counit identities of the duality: `comp(a) = comp2(a) = z^a`.
pub fn verify_pd_unit_counit(arange: (i64, i64)) -> Report {
    let mut report = Report::new("duality");
    report.set_param("amin", arange.0);
    report.set_param("amax", arange.1);
    for a in arange.0..=arange.1 {
        let want = TCharacter::z_pow(a);
        report.add_check(Check::exact(
            &format!("comp({a}) = z^{a}"),
            format!("{}", comp(a)),
            format!("{want}"),
        ));
        report.add_check(Check::exact(
            &format!("comp2({a}) = z^{a}"),
            format!("{}", comp2(a)),
            format!("{want}"),
        ));
    }
    report.finalize()
}

/// The 2x2 identity certifying the rank-2 duality:
/// `M = [[-pairing(1,0), -pairing(1,-1)], [pairing(0,0), pairing(0,-1)]]`
/// must be the identity matrix over R(G_q).
pub fn verify_ds_double() -> Report {
    let mut report = Report::new("ds-double");
    let m = [
        [pairing(1, 0).neg(), pairing(1, -1).neg()],
        [pairing(0, 0), pairing(0, -1)],
    ];
    let id = [
        [GRepElement::one(), GRepElement::zero()],
        [GRepElement::zero(), GRepElement::one()],
    ];
    for r in 0..2 {
        for c in 0..2 {
            report.add_check(Check::exact(
                &format!("M[{r}][{c}]"),
                m[r][c].to_text(),
                id[r][c].to_text(),
            ));
        }
    }
    // The transposed composite reduces to the duality identities at 0 and 1.
    for a in [0i64, 1] {
        report.add_check(Check::exact(
            &format!("comp({a}) = z^{a}"),
            format!("{}", comp(a)),
            format!("{}", TCharacter::z_pow(a)),
        ));
    }
    report.finalize()
}

/// Index stability across a grid of deformation parameters: the operator
/// oracle must return the same class at every `q`.
pub fn q_grid_consistency(qs: &[f64], twolmax: i64) -> Result<Report, Error> {
    let mut report = Report::new("q-grid");
    report.set_param("qs", qs);
    report.set_param("twolmax", twolmax);
    for m in -4i64..=4 {
        let reference = index_combinatorial(m);
        for &q in qs {
            let got = index_operator(m, twolmax, q)?;
            report.add_check(Check::exact(
                &format!("index(m={m}) at q={q}"),
                got.to_text(),
                reference.to_text(),
            ));
        }
    }
    Ok(report.finalize())
}
