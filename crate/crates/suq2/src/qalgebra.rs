//! The Hopf *-algebra of polynomial functions on the quantum SU(2).
//!
//! Elements are kept in a Poincare-Birkhoff-Witt normal form with respect to
//! the basis
//!
//! ```text
//!   { a^m g^b gs^c }  ∪  { as^m g^b gs^c : m >= 1 }
//! ```
//!
//! where `a`, `as`, `g`, `gs` stand for the generators α, α*, γ, γ*. The
//! defining relations
//!
//! ```text
//!   αγ = qγα,  αγ* = qγ*α,  γγ* = γ*γ,  α*α + γ*γ = 1,  αα* + q²γγ* = 1
//! ```
//!
//! give a terminating and confluent rewriting system on words; termination is
//! by the lexicographic measure (star-degree, total degree), and confluence is
//! exercised by the overlap tests below.
//!
//! ```
//! use suq2::qalgebra::{word_element, Generator};
//! use suq2::scalar::LaurentQ;
//!
//! // αγ and qγα normalize to the same element.
//! let ag = word_element(&[Generator::Alpha, Generator::Gamma]);
//! let ga = word_element(&[Generator::Gamma, Generator::Alpha]);
//! assert_eq!(ag, ga.scale(&LaurentQ::q_pow(1)));
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::LaurentQ;
use crate::Error;

/// One of the four algebra generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Alpha,
    AlphaStar,
    Gamma,
    GammaStar,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Alpha,
        Generator::AlphaStar,
        Generator::Gamma,
        Generator::GammaStar,
    ];

    /// The *-involution on generators.
    pub fn star(self) -> Generator {
        match self {
            Generator::Alpha => Generator::AlphaStar,
            Generator::AlphaStar => Generator::Alpha,
            Generator::Gamma => Generator::GammaStar,
            Generator::GammaStar => Generator::Gamma,
        }
    }

    /// Right torus weight of the generator.
    pub fn wt_r(self) -> i64 {
        match self {
            Generator::Alpha | Generator::Gamma => 1,
            Generator::AlphaStar | Generator::GammaStar => -1,
        }
    }

    /// Left torus weight of the generator.
    pub fn wt_l(self) -> i64 {
        match self {
            Generator::Alpha | Generator::GammaStar => 1,
            Generator::AlphaStar | Generator::Gamma => -1,
        }
    }
}

/// Which power sits in the first slot of a PBW monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonKind {
    /// `a^m g^b gs^c` (also covers `m = 0`)
    Plain,
    /// `as^m g^b gs^c` with `m >= 1`
    Star,
}

/// A basis monomial `α^a γ^b γ*^c` or `α*^a γ^b γ*^c` (the latter with
/// `a >= 1` so the two families do not overlap).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWMonomial {
    kind: MonKind,
    a: u32,
    b: u32,
    c: u32,
}

impl PBWMonomial {
    pub fn new(kind: MonKind, a: u32, b: u32, c: u32) -> PBWMonomial {
        assert!(
            !(kind == MonKind::Star && a == 0),
            "star monomial requires a >= 1"
        );
        PBWMonomial { kind, a, b, c }
    }

    pub fn unit() -> PBWMonomial {
        PBWMonomial { kind: MonKind::Plain, a: 0, b: 0, c: 0 }
    }

    pub fn kind(&self) -> MonKind {
        self.kind
    }

    pub fn powers(&self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }

    /// `(wt_L, wt_R)` of the monomial.
    pub fn weights(&self) -> (i64, i64) {
        let s: i64 = match self.kind {
            MonKind::Plain => 1,
            MonKind::Star => -1,
        };
        let a = self.a as i64;
        let b = self.b as i64;
        let c = self.c as i64;
        (s * a - b + c, s * a + b - c)
    }

    /// The monomial spelled out as a generator word in basis order.
    pub fn word(&self) -> Vec<Generator> {
        let head = match self.kind {
            MonKind::Plain => Generator::Alpha,
            MonKind::Star => Generator::AlphaStar,
        };
        let mut w = Vec::with_capacity(self.degree() as usize);
        w.extend(std::iter::repeat(head).take(self.a as usize));
        w.extend(std::iter::repeat(Generator::Gamma).take(self.b as usize));
        w.extend(std::iter::repeat(Generator::GammaStar).take(self.c as usize));
        w
    }

    /// All basis monomials of total degree at most `maxdeg`.
    pub fn all_up_to_degree(maxdeg: u32) -> Vec<PBWMonomial> {
        let mut out = Vec::new();
        for a in 0..=maxdeg {
            for b in 0..=(maxdeg - a) {
                for c in 0..=(maxdeg - a - b) {
                    out.push(PBWMonomial::new(MonKind::Plain, a, b, c));
                    if a >= 1 {
                        out.push(PBWMonomial::new(MonKind::Star, a, b, c));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.a > 0 {
            let sym = match self.kind {
                MonKind::Plain => "a",
                MonKind::Star => "as",
            };
            parts.push(format!("{}^{}", sym, self.a));
        }
        if self.b > 0 {
            parts.push(format!("g^{}", self.b));
        }
        if self.c > 0 {
            parts.push(format!("gs^{}", self.c));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// An element of the algebra in PBW normal form: a finite linear combination
/// of basis monomials with [`LaurentQ`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<PBWMonomial, LaurentQ>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn one() -> AlgebraElement {
        AlgebraElement::monomial(PBWMonomial::unit())
    }

    pub fn monomial(m: PBWMonomial) -> AlgebraElement {
        AlgebraElement::term(m, LaurentQ::one())
    }

    pub fn term(m: PBWMonomial, c: LaurentQ) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    pub fn generator(g: Generator) -> AlgebraElement {
        let m = match g {
            Generator::Alpha => PBWMonomial::new(MonKind::Plain, 1, 0, 0),
            Generator::AlphaStar => PBWMonomial::new(MonKind::Star, 1, 0, 0),
            Generator::Gamma => PBWMonomial::new(MonKind::Plain, 0, 1, 0),
            Generator::GammaStar => PBWMonomial::new(MonKind::Plain, 0, 0, 1),
        };
        AlgebraElement::monomial(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &PBWMonomial) -> LaurentQ {
        self.terms.get(m).cloned().unwrap_or_else(LaurentQ::zero)
    }

    /// Maximal total degree over the support (0 for the zero element).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: LaurentQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentQ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, k) in &self.terms {
            out.add_term(*m, k * c);
        }
        out
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&-LaurentQ::one())
    }

    /// Multiply a normal-form element by a single generator on the right.
    ///
    /// This is the whole rewriting system: every case below is a closed-form
    /// consequence of the five defining relations, producing at most two
    /// basis monomials per input monomial.
    pub fn mul_generator(&self, g: Generator) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, coef) in &self.terms {
            for (m2, c2) in mono_mul_generator(*m, g) {
                out.add_term(m2, coef * &c2);
            }
        }
        out
    }

    pub fn multiply(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m2, c2) in &other.terms {
            let mut acc = self.scale(c2);
            for g in m2.word() {
                acc = acc.mul_generator(g);
            }
            out = out.add(&acc);
        }
        out
    }

    /// The *-involution. Coefficients are rational in `q`, hence fixed by
    /// complex conjugation.
    pub fn star(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            // (g1 g2 ... gn)* = gn* ... g1*
            let mut acc = AlgebraElement::one();
            for g in m.word().into_iter().rev() {
                acc = acc.mul_generator(g.star());
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// The counit: the character `ε(α) = ε(α*) = 1`, `ε(γ) = ε(γ*) = 0`.
    pub fn counit(&self) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (m, c) in &self.terms {
            if m.b == 0 && m.c == 0 {
                out += c.clone();
            }
        }
        out
    }

    /// The antipode, an algebra antihomomorphism with `S(α) = α*`,
    /// `S(α*) = α`, `S(γ) = -qγ`, `S(γ*) = -q⁻¹γ*`.
    pub fn antipode(&self) -> AlgebraElement {
        self.anti_map(antipode_of_generator)
    }

    /// The inverse antipode: `S⁻¹(α) = α*`, `S⁻¹(α*) = α`, `S⁻¹(γ) = -q⁻¹γ`,
    /// `S⁻¹(γ*) = -qγ*`.
    pub fn antipode_inverse(&self) -> AlgebraElement {
        self.anti_map(|g| match g {
            Generator::Alpha => (LaurentQ::one(), Generator::AlphaStar),
            Generator::AlphaStar => (LaurentQ::one(), Generator::Alpha),
            Generator::Gamma => (-LaurentQ::q_pow(-1), Generator::Gamma),
            Generator::GammaStar => (-LaurentQ::q_pow(1), Generator::GammaStar),
        })
    }

    fn anti_map(
        &self,
        image: impl Fn(Generator) -> (LaurentQ, Generator),
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            let mut acc = AlgebraElement::one();
            for g in m.word().into_iter().rev() {
                let (cg, hg) = image(g);
                acc = acc.mul_generator(hg).scale(&cg);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// The comultiplication `Δ`, an algebra homomorphism into the tensor
    /// square determined by `Δ(α) = α⊗α - qγ*⊗γ` and `Δ(γ) = γ⊗α + α*⊗γ`.
    pub fn comultiply(&self) -> TensorElement {
        let mut out = TensorElement::zero();
        for (m, c) in &self.terms {
            let mut acc = TensorElement::unit();
            for g in m.word() {
                acc = acc.multiply(&coproduct_of_generator(g));
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// `f ⇀ x = x₍₁₎ f(x₍₂₎)` (left) or `x ↼ f = f(x₍₁₎) x₍₂₎` (right).
    pub fn act_functional(&self, f: Functional, side: Side) -> AlgebraElement {
        let delta = self.comultiply();
        let mut out = AlgebraElement::zero();
        for ((m1, m2), c) in &delta.terms {
            let (keep, hit) = match side {
                Side::Left => (m1, m2),
                Side::Right => (m2, m1),
            };
            let fval = f.on_monomial(hit);
            if !fval.is_zero() {
                out.add_term(*keep, c * &fval);
            }
        }
        out
    }

    /// Shorthand for the modular conjugation `δ ⇀ x ↼ δ`.
    pub fn modular_twist(&self) -> AlgebraElement {
        self.act_functional(Functional::Delta, Side::Left)
            .act_functional(Functional::Delta, Side::Right)
    }

    /// Canonical text form, the interchange format: terms sorted by monomial,
    /// each as `(laurent) * mono`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("({}) * {}", c, m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parse the canonical text form.
    pub fn parse(s: &str) -> Result<AlgebraElement, Error> {
        let s = s.trim();
        if s == "0" {
            return Ok(AlgebraElement::zero());
        }
        let mut out = AlgebraElement::zero();
        for chunk in split_top_level(s)? {
            let chunk = chunk.trim();
            let (coef, mono) = match chunk.split_once(") * ") {
                Some((c, m)) => {
                    let c = c
                        .strip_prefix('(')
                        .ok_or_else(|| Error::Parse(format!("missing '(' in term {chunk:?}")))?;
                    (LaurentQ::parse(c).map_err(Error::Parse)?, parse_monomial(m)?)
                }
                None => {
                    // bare monomial, coefficient 1
                    (LaurentQ::one(), parse_monomial(chunk)?)
                }
            };
            out.add_term(mono, coef);
        }
        Ok(out)
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>, Error> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced ')' in {s:?}")))?;
            }
            b'+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in {s:?}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_monomial(s: &str) -> Result<PBWMonomial, Error> {
    let s = s.trim();
    if s == "1" {
        return Ok(PBWMonomial::unit());
    }
    let mut kind = MonKind::Plain;
    let (mut a, mut b, mut c) = (0u32, 0u32, 0u32);
    for factor in s.split_whitespace() {
        let (sym, pow) = factor
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("bad monomial factor {factor:?}")))?;
        let pow: u32 = pow
            .parse()
            .map_err(|_| Error::Parse(format!("bad power in {factor:?}")))?;
        match sym {
            "a" => a = pow,
            "as" => {
                a = pow;
                kind = MonKind::Star;
            }
            "g" => b = pow,
            "gs" => c = pow,
            _ => return Err(Error::Parse(format!("unknown generator symbol {sym:?}"))),
        }
    }
    if kind == MonKind::Star && a == 0 {
        return Err(Error::Parse(format!("star monomial with zero power: {s:?}")));
    }
    Ok(PBWMonomial::new(kind, a, b, c))
}

fn antipode_of_generator(g: Generator) -> (LaurentQ, Generator) {
    match g {
        Generator::Alpha => (LaurentQ::one(), Generator::AlphaStar),
        Generator::AlphaStar => (LaurentQ::one(), Generator::Alpha),
        Generator::Gamma => (-LaurentQ::q_pow(1), Generator::Gamma),
        Generator::GammaStar => (-LaurentQ::q_pow(-1), Generator::GammaStar),
    }
}

/// `m · g` in normal form, as a list of at most two terms.
fn mono_mul_generator(m: PBWMonomial, g: Generator) -> Vec<(PBWMonomial, LaurentQ)> {
    let PBWMonomial { kind, a, b, c } = m;
    let bc = (b + c) as i64;
    match (kind, g) {
        // γ and γ* commute with each other, so they just append.
        (k, Generator::Gamma) => vec![(PBWMonomial { kind: k, a, b: b + 1, c }, LaurentQ::one())],
        (k, Generator::GammaStar) => {
            vec![(PBWMonomial { kind: k, a, b, c: c + 1 }, LaurentQ::one())]
        }
        (MonKind::Plain, Generator::Alpha) => {
            // γ^b γ*^c α = q^{-(b+c)} α γ^b γ*^c
            vec![(
                PBWMonomial { kind: MonKind::Plain, a: a + 1, b, c },
                LaurentQ::q_pow(-bc),
            )]
        }
        (MonKind::Plain, Generator::AlphaStar) => {
            // γ^b γ*^c α* = q^{b+c} α* γ^b γ*^c, then α^a α* for a >= 1
            // reduces by αα* = 1 - q²γγ*.
            if a == 0 {
                vec![(
                    PBWMonomial { kind: MonKind::Star, a: 1, b, c },
                    LaurentQ::q_pow(bc),
                )]
            } else {
                vec![
                    (
                        PBWMonomial { kind: MonKind::Plain, a: a - 1, b, c },
                        LaurentQ::q_pow(bc),
                    ),
                    (
                        PBWMonomial { kind: MonKind::Plain, a: a - 1, b: b + 1, c: c + 1 },
                        -LaurentQ::q_pow(bc + 2),
                    ),
                ]
            }
        }
        (MonKind::Star, Generator::AlphaStar) => {
            vec![(
                PBWMonomial { kind: MonKind::Star, a: a + 1, b, c },
                LaurentQ::q_pow(bc),
            )]
        }
        (MonKind::Star, Generator::Alpha) => {
            // α*^a γ^b γ*^c α = q^{-(b+c)} α*^{a-1} (α*α) γ^b γ*^c
            // with α*α = 1 - γ*γ.
            let tail_kind = if a == 1 { MonKind::Plain } else { MonKind::Star };
            vec![
                (
                    PBWMonomial { kind: tail_kind, a: a - 1, b, c },
                    LaurentQ::q_pow(-bc),
                ),
                (
                    PBWMonomial { kind: tail_kind, a: a - 1, b: b + 1, c: c + 1 },
                    -LaurentQ::q_pow(-bc),
                ),
            ]
        }
    }
}

fn coproduct_of_generator(g: Generator) -> TensorElement {
    let a = || PBWMonomial::new(MonKind::Plain, 1, 0, 0);
    let astar = || PBWMonomial::new(MonKind::Star, 1, 0, 0);
    let gam = || PBWMonomial::new(MonKind::Plain, 0, 1, 0);
    let gstar = || PBWMonomial::new(MonKind::Plain, 0, 0, 1);
    let mut t = TensorElement::zero();
    match g {
        Generator::Alpha => {
            t.add_term(a(), a(), LaurentQ::one());
            t.add_term(gstar(), gam(), -LaurentQ::q_pow(1));
        }
        Generator::AlphaStar => {
            t.add_term(astar(), astar(), LaurentQ::one());
            t.add_term(gam(), gstar(), -LaurentQ::q_pow(1));
        }
        Generator::Gamma => {
            t.add_term(gam(), a(), LaurentQ::one());
            t.add_term(astar(), gam(), LaurentQ::one());
        }
        Generator::GammaStar => {
            t.add_term(gstar(), astar(), LaurentQ::one());
            t.add_term(a(), gstar(), LaurentQ::one());
        }
    }
    t
}

/// Side of a functional action in Sweedler calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The distinguished characters on the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// The counit ε.
    Counit,
    /// The modular character δ with `δ(α) = q⁻¹`, `δ(α*) = q`, `δ(γ) = 0`.
    Delta,
    /// Its convolution inverse δ⁻¹ with `δ⁻¹(α) = q`, `δ⁻¹(α*) = q⁻¹`.
    DeltaInverse,
}

impl Functional {
    pub fn on_monomial(&self, m: &PBWMonomial) -> LaurentQ {
        let (a, b, c) = m.powers();
        if b != 0 || c != 0 {
            return LaurentQ::zero();
        }
        let a = a as i64;
        match (self, m.kind()) {
            (Functional::Counit, _) => LaurentQ::one(),
            (Functional::Delta, MonKind::Plain) => LaurentQ::q_pow(-a),
            (Functional::Delta, MonKind::Star) => LaurentQ::q_pow(a),
            (Functional::DeltaInverse, MonKind::Plain) => LaurentQ::q_pow(a),
            (Functional::DeltaInverse, MonKind::Star) => LaurentQ::q_pow(-a),
        }
    }

    pub fn on_element(&self, x: &AlgebraElement) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (m, coef) in x.terms() {
            out += coef * &self.on_monomial(m);
        }
        out
    }
}

/// An element of the algebraic tensor square, in PBW normal form leg-wise.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(PBWMonomial, PBWMonomial), LaurentQ>,
}

impl TensorElement {
    pub fn zero() -> TensorElement {
        TensorElement::default()
    }

    pub fn unit() -> TensorElement {
        let mut t = TensorElement::zero();
        t.add_term(PBWMonomial::unit(), PBWMonomial::unit(), LaurentQ::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PBWMonomial, PBWMonomial), &LaurentQ)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m1: PBWMonomial, m2: PBWMonomial, c: LaurentQ) {
        if c.is_zero() {
            return;
        }
        let key = (m1, m2);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((m1, m2), c) in &other.terms {
            out.add_term(*m1, *m2, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((m1, m2), c) in &other.terms {
            out.add_term(*m1, *m2, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentQ) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((m1, m2), k) in &self.terms {
            out.add_term(*m1, *m2, k * c);
        }
        out
    }

    pub fn multiply(&self, other: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((x1, x2), cx) in &self.terms {
            let ex1 = AlgebraElement::monomial(*x1);
            let ex2 = AlgebraElement::monomial(*x2);
            for ((y1, y2), cy) in &other.terms {
                let p1 = ex1.multiply(&AlgebraElement::monomial(*y1));
                let p2 = ex2.multiply(&AlgebraElement::monomial(*y2));
                let coef = cx * cy;
                for (m1, c1) in p1.terms() {
                    for (m2, c2) in p2.terms() {
                        out.add_term(*m1, *m2, &(&coef * c1) * c2);
                    }
                }
            }
        }
        out
    }

    /// Apply `Δ` to one leg, giving a triple tensor.
    pub fn comultiply_leg(&self, leg: Side) -> Tensor3Element {
        let mut out = Tensor3Element::default();
        for ((m1, m2), c) in &self.terms {
            match leg {
                Side::Left => {
                    for ((n1, n2), d) in AlgebraElement::monomial(*m1).comultiply().terms {
                        out.add_term(n1, n2, *m2, c * &d);
                    }
                }
                Side::Right => {
                    for ((n1, n2), d) in AlgebraElement::monomial(*m2).comultiply().terms {
                        out.add_term(*m1, n1, n2, c * &d);
                    }
                }
            }
        }
        out
    }

    /// Collapse `Σ x ⊗ y ↦ Σ f(x)·g(y)·x·y` style contractions; used for the
    /// antipode axiom. `map1`/`map2` transform the legs before multiplying.
    pub fn collapse(
        &self,
        map1: impl Fn(&AlgebraElement) -> AlgebraElement,
        map2: impl Fn(&AlgebraElement) -> AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ((m1, m2), c) in &self.terms {
            let x = map1(&AlgebraElement::monomial(*m1));
            let y = map2(&AlgebraElement::monomial(*m2));
            out = out.add(&x.multiply(&y).scale(c));
        }
        out
    }
}

/// A triple tensor, only needed to state coassociativity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor3Element {
    terms: BTreeMap<(PBWMonomial, PBWMonomial, PBWMonomial), LaurentQ>,
}

impl Tensor3Element {
    pub fn add_term(&mut self, m1: PBWMonomial, m2: PBWMonomial, m3: PBWMonomial, c: LaurentQ) {
        if c.is_zero() {
            return;
        }
        let key = (m1, m2, m3);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }
}

/// The Hopf-axiom suite, checked exactly (Laurent-polynomial equality) on
/// every PBW basis monomial of degree at most `maxdeg`: coassociativity,
/// both counit laws, both antipode convolution laws, the *-compatibility
/// `S(S(x*)*) = x`, and the modular formula `S⁻¹ = δ⇀S(·)↼δ⁻¹`.
pub fn verify_hopf_axioms(maxdeg: u32) -> crate::report::Report {
    use crate::report::{Check, Report};
    let mut report = Report::new("check-hopf");
    report.set_param("degree", maxdeg);
    let monos = PBWMonomial::all_up_to_degree(maxdeg);
    report.set_param("monomials", monos.len());

    let mut coassoc = true;
    let mut counit_left = true;
    let mut counit_right = true;
    let mut antipode_left = true;
    let mut antipode_right = true;
    let mut star_square = true;
    let mut inv_formula = true;
    for m in &monos {
        let x = AlgebraElement::monomial(*m);
        let d = x.comultiply();
        coassoc &= d.comultiply_leg(Side::Left) == d.comultiply_leg(Side::Right);
        let eps_scalar =
            |e: &AlgebraElement| AlgebraElement::term(PBWMonomial::unit(), e.counit());
        counit_left &= d.collapse(eps_scalar, |e| e.clone()) == x;
        counit_right &= d.collapse(|e| e.clone(), eps_scalar) == x;
        let eps_unit = AlgebraElement::term(PBWMonomial::unit(), x.counit());
        antipode_left &= d.collapse(|e| e.antipode(), |e| e.clone()) == eps_unit;
        antipode_right &= d.collapse(|e| e.clone(), |e| e.antipode()) == eps_unit;
        star_square &= x.star().antipode().star().antipode() == x;
        let twisted = x
            .antipode()
            .act_functional(Functional::Delta, Side::Left)
            .act_functional(Functional::DeltaInverse, Side::Right);
        inv_formula &= twisted == x.antipode_inverse()
            && x.antipode().antipode_inverse() == x;
    }
    report.add_check(Check::boolean("coassociativity", coassoc));
    report.add_check(Check::boolean("counit law (left)", counit_left));
    report.add_check(Check::boolean("counit law (right)", counit_right));
    report.add_check(Check::boolean("antipode convolution (left)", antipode_left));
    report.add_check(Check::boolean("antipode convolution (right)", antipode_right));
    report.add_check(Check::boolean("S(S(x*)*) = x", star_square));
    report.add_check(Check::boolean("inverse antipode = modular twist of S", inv_formula));
    report.finalize()
}

/// Build an element from an explicit generator word with a scalar.
pub fn normal_form(word: &[(Generator, LaurentQ)]) -> AlgebraElement {
    let mut acc = AlgebraElement::one();
    for (g, c) in word {
        acc = acc.mul_generator(*g).scale(c);
    }
    acc
}

/// Convenience: normal form of a plain generator word.
pub fn word_element(word: &[Generator]) -> AlgebraElement {
    let mut acc = AlgebraElement::one();
    for g in word {
        acc = acc.mul_generator(*g);
    }
    acc
}

pub use crate::haar::{
    haar, haar_exact, haar_invariance_oracle, modular_defect, modular_defect_exact,
};

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> LaurentQ {
        LaurentQ::q_pow(1)
    }

    fn gen(g: Generator) -> AlgebraElement {
        AlgebraElement::generator(g)
    }

    #[test]
    fn rewrite_examples() {
        use Generator::*;
        // γ·α → q⁻¹ αγ
        let x = word_element(&[Gamma, Alpha]);
        let expected = AlgebraElement::term(
            PBWMonomial::new(MonKind::Plain, 1, 1, 0),
            LaurentQ::q_pow(-1),
        );
        assert_eq!(x, expected);
        // α*·α → 1 - γ*γ
        let x = word_element(&[AlphaStar, Alpha]);
        let expected = AlgebraElement::one().sub(&AlgebraElement::monomial(
            PBWMonomial::new(MonKind::Plain, 0, 1, 1),
        ));
        assert_eq!(x, expected);
        // α·α* → 1 - q²γγ*
        let x = word_element(&[Alpha, AlphaStar]);
        let expected = AlgebraElement::one().sub(
            &AlgebraElement::monomial(PBWMonomial::new(MonKind::Plain, 0, 1, 1))
                .scale(&LaurentQ::q_pow(2)),
        );
        assert_eq!(x, expected);
        // α·γ → the monomial αγ (coefficient 1 in PBW order)
        let x = word_element(&[Alpha, Gamma]);
        assert_eq!(
            x,
            AlgebraElement::monomial(PBWMonomial::new(MonKind::Plain, 1, 1, 0))
        );
    }

    #[test]
    fn normal_form_is_idempotent_on_basis() {
        for m in PBWMonomial::all_up_to_degree(4) {
            let w = m.word();
            assert_eq!(word_element(&w), AlgebraElement::monomial(m), "{m}");
        }
    }

    /// Overlap (critical pair) check for the rewriting system: reducing a
    /// word must not depend on the association order.
    #[test]
    fn rewrite_overlaps_confluent() {
        use Generator::*;
        let gens = [Alpha, AlphaStar, Gamma, GammaStar];
        for g1 in gens {
            for g2 in gens {
                for g3 in gens {
                    let left = word_element(&[g1, g2]).multiply(&gen(g3));
                    let right = gen(g1).multiply(&word_element(&[g2, g3]));
                    assert_eq!(left, right, "{g1:?} {g2:?} {g3:?}");
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        use Generator::*;
        assert_eq!(gen(Alpha).star(), gen(AlphaStar));
        let x = gen(Gamma).scale(&q());
        assert_eq!(x.star(), gen(GammaStar).scale(&q()));
    }

    #[test]
    fn star_is_involutive_antihomomorphism() {
        for m in PBWMonomial::all_up_to_degree(3) {
            let x = AlgebraElement::monomial(m);
            assert_eq!(x.star().star(), x, "{m}");
        }
        for m in PBWMonomial::all_up_to_degree(2) {
            for n in PBWMonomial::all_up_to_degree(2) {
                let x = AlgebraElement::monomial(m);
                let y = AlgebraElement::monomial(n);
                assert_eq!(
                    x.multiply(&y).star(),
                    y.star().multiply(&x.star()),
                    "{m} {n}"
                );
            }
        }
    }

    #[test]
    fn comultiply_examples() {
        use Generator::*;
        assert_eq!(AlgebraElement::one().comultiply(), TensorElement::unit());
        // Δ(α) = α⊗α - qγ*⊗γ
        let d = gen(Alpha).comultiply();
        let mut expected = TensorElement::zero();
        expected.add_term(
            PBWMonomial::new(MonKind::Plain, 1, 0, 0),
            PBWMonomial::new(MonKind::Plain, 1, 0, 0),
            LaurentQ::one(),
        );
        expected.add_term(
            PBWMonomial::new(MonKind::Plain, 0, 0, 1),
            PBWMonomial::new(MonKind::Plain, 0, 1, 0),
            -q(),
        );
        assert_eq!(d, expected);
        // Δ(γ*) = γ*⊗α* + α⊗γ*
        let d = gen(GammaStar).comultiply();
        let mut expected = TensorElement::zero();
        expected.add_term(
            PBWMonomial::new(MonKind::Plain, 0, 0, 1),
            PBWMonomial::new(MonKind::Star, 1, 0, 0),
            LaurentQ::one(),
        );
        expected.add_term(
            PBWMonomial::new(MonKind::Plain, 1, 0, 0),
            PBWMonomial::new(MonKind::Plain, 0, 0, 1),
            LaurentQ::one(),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn counit_examples() {
        use Generator::*;
        assert_eq!(gen(Alpha).counit(), LaurentQ::one());
        assert_eq!(gen(Gamma).counit(), LaurentQ::zero());
        let x = gen(Alpha).multiply(&gen(Alpha)).multiply(&gen(GammaStar));
        assert_eq!(x.counit(), LaurentQ::zero());
    }

    #[test]
    fn antipode_examples() {
        use Generator::*;
        assert_eq!(gen(Alpha).antipode(), gen(AlphaStar));
        assert_eq!(gen(Gamma).antipode(), gen(Gamma).scale(&-q()));
        assert_eq!(
            gen(GammaStar).antipode(),
            gen(GammaStar).scale(&-LaurentQ::q_pow(-1))
        );
        assert_eq!(gen(Gamma).antipode().antipode_inverse(), gen(Gamma));
    }

    #[test]
    fn functional_action_examples() {
        use Generator::*;
        // δ ⇀ α = q⁻¹ α
        assert_eq!(
            gen(Alpha).act_functional(Functional::Delta, Side::Left),
            gen(Alpha).scale(&LaurentQ::q_pow(-1))
        );
        // δ ⇀ α* = q α*
        assert_eq!(
            gen(AlphaStar).act_functional(Functional::Delta, Side::Left),
            gen(AlphaStar).scale(&q())
        );
        // ε ⇀ x = x
        for m in PBWMonomial::all_up_to_degree(3) {
            let x = AlgebraElement::monomial(m);
            assert_eq!(x.act_functional(Functional::Counit, Side::Left), x);
        }
    }

    #[test]
    fn weight_examples() {
        let m = PBWMonomial::new(MonKind::Plain, 1, 0, 1); // αγ*
        assert_eq!(m.weights(), (2, 0));
        assert_eq!(PBWMonomial::unit().weights(), (0, 0));
        let m = PBWMonomial::new(MonKind::Plain, 0, 1, 1); // γγ*
        assert_eq!(m.weights(), (0, 0));
    }

    #[test]
    fn weights_additive_under_multiplication() {
        for m in PBWMonomial::all_up_to_degree(2) {
            for n in PBWMonomial::all_up_to_degree(2) {
                let (l1, r1) = m.weights();
                let (l2, r2) = n.weights();
                let p = AlgebraElement::monomial(m).multiply(&AlgebraElement::monomial(n));
                for (k, _) in p.terms() {
                    assert_eq!(k.weights(), (l1 + l2, r1 + r2), "{m} {n} -> {k}");
                }
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        use Generator::*;
        let x = gen(Alpha)
            .multiply(&gen(Gamma))
            .scale(&(LaurentQ::one() + q()))
            .sub(&gen(GammaStar).scale(&LaurentQ::q_pow(-2)));
        let s = x.to_text();
        assert_eq!(AlgebraElement::parse(&s).unwrap(), x);
        assert_eq!(AlgebraElement::parse("0").unwrap(), AlgebraElement::zero());
    }

    proptest! {
        #[test]
        fn multiply_associative(
            i in 0usize..20, j in 0usize..20, k in 0usize..20
        ) {
            let monos = PBWMonomial::all_up_to_degree(2);
            let x = AlgebraElement::monomial(monos[i % monos.len()]);
            let y = AlgebraElement::monomial(monos[j % monos.len()]);
            let z = AlgebraElement::monomial(monos[k % monos.len()]);
            prop_assert_eq!(
                x.multiply(&y).multiply(&z),
                x.multiply(&y.multiply(&z))
            );
        }

        #[test]
        fn unit_law(i in 0usize..40) {
            let monos = PBWMonomial::all_up_to_degree(3);
            let x = AlgebraElement::monomial(monos[i % monos.len()]);
            prop_assert_eq!(AlgebraElement::one().multiply(&x), x.clone());
            prop_assert_eq!(x.multiply(&AlgebraElement::one()), x);
        }
    }
}
