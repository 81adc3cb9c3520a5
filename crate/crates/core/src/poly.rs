//! Bivariate Laurent polynomials in `x` and `p` with rational or parametric
//! coefficients: parsing, canonical rendering, variable swap and the
//! versal-family presets of the simple singularities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, Rational};
use crate::lattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial has empty support")]
    EmptySupport,
    #[error("term at byte {pos} mixes parameters `{first}` and `{second}`")]
    MixedParameters { pos: usize, first: String, second: String },
    #[error("unsupported Dynkin type `{0}`")]
    UnsupportedType(String),
}

/// Coefficient of one monomial: a rational constant plus a rational
/// combination of named deformation parameters.
///
/// A freshly parsed term carries either a constant or a single parameter;
/// combining like terms may produce sums such as `1 + a1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coefficient {
    constant: Rational,
    params: BTreeMap<String, Rational>,
}

impl Coefficient {
    pub fn constant(q: Rational) -> Self {
        Coefficient {
            constant: q,
            params: BTreeMap::new(),
        }
    }

    pub fn parameter(name: &str, scale: Rational) -> Self {
        let mut params = BTreeMap::new();
        if !scale.is_zero() {
            params.insert(name.to_string(), scale);
        }
        Coefficient {
            constant: Rational::zero(),
            params,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.params.is_empty()
    }

    /// The rational value when no parameter is involved.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.params.is_empty().then_some(&self.constant)
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn parameters(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.params.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn add_assign(&mut self, other: &Coefficient) {
        self.constant += &other.constant;
        for (name, q) in &other.params {
            let entry = self.params.entry(name.clone()).or_insert_with(Rational::zero);
            *entry += q;
            if entry.is_zero() {
                self.params.remove(name);
            }
        }
    }

    /// Instantiates parameters with the given values (missing ones read as zero).
    pub fn evaluate(&self, values: &BTreeMap<String, Rational>) -> Rational {
        let mut total = self.constant.clone();
        for (name, q) in &self.params {
            if let Some(v) = values.get(name) {
                total += q * v;
            }
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LatticePoint, Coefficient>,
}

impl LaurentPolynomial {
    /// Combines like terms and drops cancelled ones.
    pub fn from_terms<I>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (LatticePoint, Coefficient)>,
    {
        let mut map: BTreeMap<LatticePoint, Coefficient> = BTreeMap::new();
        for (m, c) in terms {
            map.entry(m).or_default().add_assign(&c);
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(PolyError::EmptySupport);
        }
        Ok(LaurentPolynomial { terms: map })
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, Coefficient> {
        &self.terms
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: i64, b: i64) -> Option<&Coefficient> {
        self.terms.get(&LatticePoint::new(a, b))
    }

    /// Transposes exponents, `x^a p^b -> x^b p^a`.
    pub fn swap_variables(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.transpose(), c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial `x^da p^db`.
    pub fn shift(&self, da: i64, db: i64) -> Self {
        LaurentPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (LatticePoint::new(m.a + da, m.b + db), c.clone()))
                .collect(),
        }
    }

    /// Names of all deformation parameters, sorted.
    pub fn parameters(&self) -> Vec<String> {
        let mut names: Vec<String> = self.terms.values().flat_map(|c| c.params.keys().cloned()).collect();
        names.sort_by_key(|a| param_order(a));
        names.dedup();
        names
    }
}

fn param_order(name: &str) -> (usize, String) {
    (name.len(), name.to_string())
}

impl FromStr for LaurentPolynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

/// Canonical rendering: terms sorted by `(b, a)` descending, one summand per
/// coefficient component.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&LatticePoint> = self.terms.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse((k.b, k.a)));
        let mut first = true;
        for m in keys {
            let c = &self.terms[m];
            let mut parts: Vec<(Rational, Option<&str>)> = Vec::new();
            if !c.constant.is_zero() {
                parts.push((c.constant.clone(), None));
            }
            let mut params: Vec<_> = c.params.iter().collect();
            params.sort_by_key(|a| param_order(a.0));
            for (name, q) in params {
                parts.push((q.clone(), Some(name.as_str())));
            }
            for (q, name) in parts {
                let negative = q.is_negative();
                if first {
                    if negative {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if negative { " - " } else { " + " })?;
                }
                first = false;
                write_term(f, &q.abs(), name, m)?;
            }
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, q: &Rational, name: Option<&str>, m: &LatticePoint) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    if !q.is_one() {
        factors.push(exact::to_string(q));
    }
    if let Some(name) = name {
        factors.push(name.to_string());
    }
    for (var, e) in [("x", m.a), ("p", m.b)] {
        match e {
            0 => {}
            1 => factors.push(var.to_string()),
            _ => factors.push(format!("{var}^{e}")),
        }
    }
    if factors.is_empty() {
        factors.push("1".to_string());
    }
    f.write_str(&factors.join("*"))
}

/// Parses the textual form of a symbol.
///
/// Grammar: a signed sum of terms; a term is a product (by `*` or
/// juxtaposition) of rationals `m` or `m/n`, at most one parameter `a<digits>`,
/// and powers `x^k`, `p^k` with integer, possibly negative, exponents
/// (`x^-2` or `x^(-2)`).
pub fn parse_polynomial(text: &str) -> Result<LaurentPolynomial, PolyError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
    }
    .polynomial()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        BigInt::from_str(s).ok()
    }

    fn polynomial(&mut self) -> Result<LaurentPolynomial, PolyError> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut sign = Rational::one();
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            if c == b'-' {
                sign = -sign;
            }
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (m, c) = self.term(&sign)?;
            terms.push((m, c));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
            }
            self.pos += 1;
        }
        LaurentPolynomial::from_terms(terms)
    }

    fn term(&mut self, sign: &Rational) -> Result<(LatticePoint, Coefficient), PolyError> {
        let start = self.pos;
        let mut scale = sign.clone();
        let mut param: Option<String> = None;
        let (mut a, mut b) = (0i64, 0i64);
        let mut factors = 0usize;
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { break };
            match c {
                b'0'..=b'9' => {
                    let num = self.digits().expect("digit present");
                    let mut q = Rational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let Some(den) = self.digits() else {
                            return self.err("expected denominator");
                        };
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                        q /= Rational::from_integer(den);
                    }
                    scale *= q;
                }
                b'x' | b'p' => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    if c == b'x' {
                        a += e;
                    } else {
                        b += e;
                    }
                }
                b'a' => {
                    let at = self.pos;
                    self.pos += 1;
                    let Some(idx) = self.digits() else {
                        return self.err("parameter name must be `a` followed by digits");
                    };
                    let name = format!("a{idx}");
                    if let Some(prev) = &param {
                        return Err(PolyError::MixedParameters {
                            pos: at,
                            first: prev.clone(),
                            second: name,
                        });
                    }
                    param = Some(name);
                }
                b'*' => {
                    if factors == 0 {
                        return self.err("`*` without left factor");
                    }
                    self.pos += 1;
                    self.skip_ws();
                    if !matches!(self.peek(), Some(b'0'..=b'9' | b'x' | b'p' | b'a')) {
                        return self.err("`*` without right factor");
                    }
                    continue;
                }
                b'+' | b'-' => break,
                _ => return self.err(format!("unexpected `{}`", c as char)),
            }
            factors += 1;
        }
        if factors == 0 {
            self.pos = start;
            return self.err("expected a term");
        }
        let coeff = match param {
            Some(name) => Coefficient::parameter(&name, scale),
            None => Coefficient::constant(scale),
        };
        Ok((LatticePoint::new(a, b), coeff))
    }

    fn exponent(&mut self) -> Result<i64, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let close = match self.peek() {
            Some(b'(') => Some(b')'),
            Some(b'{') => Some(b'}'),
            _ => None,
        };
        if close.is_some() {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') if close.is_some() => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let Some(value) = self.digits() else {
            return self.err("expected integer exponent");
        };
        let Ok(value) = i64::try_from(value) else {
            return self.err("exponent out of range");
        };
        if let Some(close) = close {
            if self.peek() != Some(close) {
                return self.err(format!("expected `{}`", close as char));
            }
            self.pos += 1;
        }
        Ok(if negative { -value } else { value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

/// A simply laced Dynkin type `A_n (n>=1)`, `D_n (n>=4)` or `E_6, E_7, E_8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    family: DynkinFamily,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: DynkinFamily, rank: usize) -> Result<Self, PolyError> {
        let ok = match family {
            DynkinFamily::A => rank >= 1,
            DynkinFamily::D => rank >= 4,
            DynkinFamily::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DynkinType { family, rank })
        } else {
            Err(PolyError::UnsupportedType(format!("{family:?}{rank}")))
        }
    }

    pub fn a(rank: usize) -> Self {
        Self::new(DynkinFamily::A, rank).expect("A_n needs n >= 1")
    }

    pub fn d(rank: usize) -> Self {
        Self::new(DynkinFamily::D, rank).expect("D_n needs n >= 4")
    }

    pub fn e(rank: usize) -> Self {
        Self::new(DynkinFamily::E, rank).expect("E_n needs n in 6..=8")
    }

    pub fn family(&self) -> DynkinFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || PolyError::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinFamily::A,
            Some('D') => DynkinFamily::D,
            Some('E') => DynkinFamily::E,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        DynkinType::new(family, rank).map_err(|_| bad())
    }
}

impl Serialize for DynkinType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Monomials `(a, b)` of the principal part of each normal form.
pub fn principal_part(ty: DynkinType) -> Vec<LatticePoint> {
    let n = ty.rank as i64;
    let pts: Vec<(i64, i64)> = match (ty.family, ty.rank) {
        (DynkinFamily::A, _) => vec![(0, 2), (n + 1, 0)],
        (DynkinFamily::D, 4) => vec![(0, 3), (2, 1)],
        // written as printed for the D_n family, exponent n+1 included
        (DynkinFamily::D, _) => vec![(1, 2), (n + 1, 0)],
        (DynkinFamily::E, 6) => vec![(0, 3), (4, 0)],
        (DynkinFamily::E, 7) => vec![(0, 3), (3, 1)],
        (DynkinFamily::E, _) => vec![(5, 0), (0, 3)],
    };
    pts.into_iter().map(|(a, b)| LatticePoint::new(a, b)).collect()
}

/// Deformation monomials, in parameter order `a1, a2, ...`.
///
/// The lists for `D_n (n>=5)`, `E_6` and `E_7` are a monomial basis of the
/// Milnor algebra of the principal part; they are frozen here and checked
/// against a linear-algebra computation in the test suite.
pub fn deformation_monomials(ty: DynkinType) -> Vec<LatticePoint> {
    let n = ty.rank as i64;
    let pts: Vec<(i64, i64)> = match (ty.family, ty.rank) {
        (DynkinFamily::A, _) => (0..n).map(|i| (i, 0)).collect(),
        (DynkinFamily::D, 4) => vec![(0, 0), (0, 1), (0, 2), (1, 0)],
        (DynkinFamily::D, _) => (0..n).map(|i| (i, 0)).chain([(0, 1), (0, 2)]).collect(),
        (DynkinFamily::E, 6) => vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
        (DynkinFamily::E, 7) => vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2), (1, 2)],
        (DynkinFamily::E, _) => vec![(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)],
    };
    pts.into_iter().map(|(a, b)| LatticePoint::new(a, b)).collect()
}

/// The versal family: principal part with unit coefficients plus one
/// parameter `a_i` per deformation monomial.
pub fn preset_family(ty: DynkinType) -> LaurentPolynomial {
    let principal = principal_part(ty)
        .into_iter()
        .map(|m| (m, Coefficient::constant(Rational::one())));
    let deformation = deformation_monomials(ty)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, Coefficient::parameter(&format!("a{}", i + 1), Rational::one())));
    LaurentPolynomial::from_terms(principal.chain(deformation)).expect("preset monomials are distinct and nonzero")
}

/// Resolves a preset name such as `E8` or `a5`.
pub fn preset_by_name(name: &str) -> Result<LaurentPolynomial, PolyError> {
    Ok(preset_family(name.parse()?))
}
