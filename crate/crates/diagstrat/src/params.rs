//! Category parameters: the ground field, the cyclotomic parameter vector u,
//! loop (bubble) values, orbit/content symbolics and the closed-form
//! semisimplicity / Morita predicates.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldElement};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    CyclotomicBrauer,
    CyclotomicOrientedBrauer,
}

/// A point of the index set I_u, written as `u_orbit + offset` (degenerate
/// arithmetic) or `u_orbit · q^{2·offset}` (quantum predicate layer).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Content {
    pub orbit: usize,
    pub offset: i64,
}

impl Content {
    pub fn new(orbit: usize, offset: i64) -> Self {
        Content { orbit, offset }
    }
}

impl fmt::Display for Content {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.orbit, self.offset)
    }
}

/// Image of a content under the sharp map `i -> -i` (resp. `i -> i^{-1}`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SharpImage {
    Inside(Content),
    /// `-i` does not lie in any declared orbit.
    Outside,
}

/// Symbolic scalar `coef · q^{exp}` for the quantum predicate layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QScalar {
    pub coef: BigRational,
    pub exp: i64,
}

impl QScalar {
    pub fn parse(s: &str) -> Result<Self> {
        // accepted forms: "q^3", "q", "1/3", "1/3*q^-2"
        let s = s.trim();
        let (coef_s, q_s) = match s.split_once('*') {
            Some((c, q)) => (c.trim(), Some(q.trim())),
            None if s.starts_with('q') => ("1", Some(s)),
            None => (s, None),
        };
        let coef = match FieldElement::parse(coef_s, 0)? {
            FieldElement::Q(r) => r,
            _ => unreachable!(),
        };
        let exp = match q_s {
            None => 0,
            Some("q") => 1,
            Some(q) => {
                let rest = q
                    .strip_prefix("q^")
                    .ok_or_else(|| Error::Config(format!("bad quantum literal '{s}'")))?;
                rest.parse::<i64>()
                    .map_err(|_| Error::Config(format!("bad quantum exponent in '{s}'")))?
            }
        };
        Ok(QScalar { coef, exp })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumParams {
    /// Quantum characteristic of q^2; `None` means infinite.
    pub e: Option<u64>,
    pub u: Vec<QScalar>,
}

/// Partition of the parameter indices `{0..m-1}` into orbits, with the
/// integer offset of each parameter against its orbit base.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrbitData {
    /// orbit id for each u index
    pub orbit_of: Vec<usize>,
    /// offset of u_i against the base parameter of its orbit
    pub offset_of: Vec<i64>,
    /// index into u of each orbit's base parameter
    pub base_of: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CategoryConfig {
    pub flavor: Flavor,
    pub m: usize,
    pub u: Vec<FieldElement>,
    pub char_p: u64,
    /// ω_0..ω_{m-1} (unoriented) resp. the counterclockwise family Δ_0..Δ_{m-1}.
    pub bubbles: Vec<FieldElement>,
    /// Second orientation family for the oriented flavor.
    pub bubbles_cw: Option<Vec<FieldElement>>,
    pub orbit_data: OrbitData,
    pub quantum: Option<QuantumParams>,
    pub truncation_n: usize,
}

/// On-disk schema. Rationals are reduced "p/q" strings.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RawConfig {
    pub flavor: Flavor,
    pub m: usize,
    pub u: Vec<String>,
    #[serde(default)]
    pub char_p: u64,
    #[serde(default)]
    pub bubbles: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bubbles_cw: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_data: Option<OrbitData>,
    /// Quantum-layer parameters ("q^k" or "c*q^k" strings); presence selects
    /// the quantum predicate arithmetic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_u: Option<Vec<String>>,
    /// Quantum characteristic e; null/absent means infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    pub truncation_n: usize,
}

pub fn make_config(raw: &RawConfig) -> Result<CategoryConfig> {
    if raw.m == 0 {
        return Err(Error::Config("m must be >= 1".into()));
    }
    if raw.char_p != 0 && !is_prime(raw.char_p) {
        return Err(Error::InvalidChar(format!("{} is not prime", raw.char_p)));
    }
    if raw.char_p == 2 {
        // Brauer-flavor computations assume char != 2.
        return Err(Error::InvalidChar("characteristic 2 is not supported".into()));
    }
    if raw.u.len() != raw.m {
        return Err(Error::LengthMismatch(format!(
            "u has length {}, expected m = {}",
            raw.u.len(),
            raw.m
        )));
    }
    let u: Vec<FieldElement> = raw
        .u
        .iter()
        .map(|s| FieldElement::parse(s, raw.char_p))
        .collect::<Result<_>>()?;

    let bubbles: Vec<FieldElement> = raw
        .bubbles
        .iter()
        .map(|s| FieldElement::parse(s, raw.char_p))
        .collect::<Result<_>>()?;
    if raw.m >= 2 && bubbles.len() != raw.m {
        return Err(Error::LengthMismatch(format!(
            "bubbles has length {}, expected m = {} values ω_0..ω_{}",
            bubbles.len(),
            raw.m,
            raw.m - 1
        )));
    }
    let bubbles = if raw.m == 1 && bubbles.is_empty() {
        vec![FieldElement::zero_of(raw.char_p)]
    } else {
        bubbles
    };
    let bubbles_cw = match &raw.bubbles_cw {
        None => None,
        Some(v) => Some(
            v.iter()
                .map(|s| FieldElement::parse(s, raw.char_p))
                .collect::<Result<Vec<_>>>()?,
        ),
    };

    let derived = derive_orbits(&u, raw.char_p);
    let orbit_data = match &raw.orbit_data {
        None => derived,
        Some(decl) => {
            if !orbits_equivalent(decl, &derived) {
                return Err(Error::InconsistentOrbits(format!(
                    "declared {:?}, derived {:?}",
                    decl, derived
                )));
            }
            decl.clone()
        }
    };

    let quantum = match &raw.quantum_u {
        None => None,
        Some(us) => {
            if us.len() != raw.m {
                return Err(Error::LengthMismatch("quantum_u length != m".into()));
            }
            Some(QuantumParams {
                e: raw.e,
                u: us.iter().map(|s| QScalar::parse(s)).collect::<Result<_>>()?,
            })
        }
    };

    Ok(CategoryConfig {
        flavor: raw.flavor,
        m: raw.m,
        u,
        char_p: raw.char_p,
        bubbles,
        bubbles_cw,
        orbit_data,
        quantum,
        truncation_n: raw.truncation_n,
    })
}

/// i and j share an orbit iff u_i - u_j ∈ Z·1 (degenerate arithmetic). In
/// GF(p) the prime ring is everything, so all parameters share one orbit.
fn derive_orbits(u: &[FieldElement], _char_p: u64) -> OrbitData {
    let mut orbit_of = vec![usize::MAX; u.len()];
    let mut offset_of = vec![0i64; u.len()];
    let mut base_of = Vec::new();
    for i in 0..u.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = base_of.len();
        base_of.push(i);
        orbit_of[i] = id;
        offset_of[i] = 0;
        for j in i + 1..u.len() {
            if orbit_of[j] != usize::MAX {
                continue;
            }
            let diff = u[j].clone() - u[i].clone();
            if let Some(n) = diff.as_prime_integer() {
                orbit_of[j] = id;
                offset_of[j] = n;
            }
        }
    }
    OrbitData { orbit_of, offset_of, base_of }
}

fn orbits_equivalent(a: &OrbitData, b: &OrbitData) -> bool {
    if a.orbit_of.len() != b.orbit_of.len() {
        return false;
    }
    let n = a.orbit_of.len();
    for i in 0..n {
        for j in 0..n {
            let same_a = a.orbit_of[i] == a.orbit_of[j];
            let same_b = b.orbit_of[i] == b.orbit_of[j];
            if same_a != same_b {
                return false;
            }
            if same_a && (a.offset_of[i] - a.offset_of[j]) != (b.offset_of[i] - b.offset_of[j]) {
                return false;
            }
        }
    }
    true
}

impl CategoryConfig {
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("{:?}|{}|{}", self.flavor, self.m, self.char_p));
        for x in &self.u {
            h.update(x.to_ratio_string());
            h.update("|");
        }
        for x in &self.bubbles {
            h.update(x.to_ratio_string());
            h.update("|");
        }
        if let Some(cw) = &self.bubbles_cw {
            for x in cw {
                h.update(x.to_ratio_string());
                h.update("|");
            }
        }
        h.update(format!("N{}", self.truncation_n));
        hex_digest(&h.finalize())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero_of(self.char_p)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one_of(self.char_p)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_integer(self.char_p, n)
    }

    /// Quantum characteristic for content congruence: char p for the
    /// degenerate flavor, e for the quantum layer; 0 encodes infinity.
    pub fn effective_e(&self) -> u64 {
        match &self.quantum {
            Some(q) => q.e.unwrap_or(0),
            None => self.char_p,
        }
    }

    /// Field value of a content (degenerate arithmetic only).
    pub fn content_value(&self, c: &Content) -> FieldElement {
        let base = &self.u[self.orbit_data.base_of[c.orbit]];
        base.add_int(c.offset)
    }

    pub fn content_of_param(&self, j: usize) -> Content {
        Content::new(self.orbit_data.orbit_of[j], self.orbit_data.offset_of[j])
    }

    pub fn content_eq(&self, c1: &Content, c2: &Content) -> bool {
        if c1.orbit != c2.orbit {
            return false;
        }
        let e = self.effective_e();
        if e == 0 {
            c1.offset == c2.offset
        } else {
            (c1.offset - c2.offset).rem_euclid(e as i64) == 0
        }
    }

    pub fn canonical_content(&self, c: &Content) -> Content {
        let e = self.effective_e();
        if e == 0 {
            *c
        } else {
            Content::new(c.orbit, c.offset.rem_euclid(e as i64))
        }
    }

    /// The sharp map on contents: `-(u_j + z)` resp. `(u_j q^{2z})^{-1}`,
    /// re-expressed in orbit/offset form when possible.
    pub fn sharp(&self, c: &Content) -> SharpImage {
        match &self.quantum {
            None => {
                let val = -(self.content_value(c));
                self.locate(&val)
            }
            Some(q) => {
                // (c_j q^{k_j + 2z})^{-1} = c_j^{-1} q^{-k_j - 2z}
                let base = &q.u[self.orbit_data.base_of[c.orbit]];
                let inv_coef = BigRational::one() / base.coef.clone();
                let inv_exp = -(base.exp + 2 * c.offset);
                self.locate_quantum(&inv_coef, inv_exp)
            }
        }
    }

    /// Orbit/offset form of a field value, if it lies in some orbit.
    pub fn locate(&self, val: &FieldElement) -> SharpImage {
        for (orbit, &bi) in self.orbit_data.base_of.iter().enumerate() {
            let diff = val.clone() - self.u[bi].clone();
            if let Some(n) = diff.as_prime_integer() {
                return SharpImage::Inside(self.canonical_content(&Content::new(orbit, n)));
            }
        }
        SharpImage::Outside
    }

    fn locate_quantum(&self, coef: &BigRational, exp: i64) -> SharpImage {
        let q = self.quantum.as_ref().unwrap();
        for (orbit, &bi) in self.orbit_data.base_of.iter().enumerate() {
            let base = &q.u[bi];
            if &base.coef != coef {
                continue;
            }
            let d = exp - base.exp;
            if d % 2 != 0 {
                continue;
            }
            return SharpImage::Inside(self.canonical_content(&Content::new(orbit, d / 2)));
        }
        SharpImage::Outside
    }

    /// Quantum orbit structure uses u_i u_j^{-1} ∈ q^{2Z} instead of
    /// differences; validated when quantum params are present.
    fn quantum_same_orbit(&self, i: usize, j: usize) -> bool {
        let q = self.quantum.as_ref().unwrap();
        q.u[i].coef == q.u[j].coef && (q.u[i].exp - q.u[j].exp) % 2 == 0
    }

    fn quantum_product_in_q2z(&self, i: usize, j: usize) -> bool {
        let q = self.quantum.as_ref().unwrap();
        (q.u[i].coef.clone() * q.u[j].coef.clone()).is_one() && (q.u[i].exp + q.u[j].exp) % 2 == 0
    }

    /// Semisimplicity of the whole category algebra, from the parameters
    /// alone. Degenerate: p = 0, 2u_i ∉ Z and u_i ± u_j ∉ Z for i ≠ j.
    /// Quantum: e = ∞, u_i u_j ∉ q^{2Z} for all i, j and u_i u_j^{-1} ∉ q^{2Z}
    /// for i < j.
    pub fn semisimple_predicate(&self) -> bool {
        match &self.quantum {
            None => {
                if self.char_p != 0 {
                    return false;
                }
                for i in 0..self.m {
                    if (self.u[i].clone() + self.u[i].clone()).as_prime_integer().is_some() {
                        return false;
                    }
                    for j in 0..self.m {
                        if i == j {
                            continue;
                        }
                        let sum = self.u[i].clone() + self.u[j].clone();
                        let dif = self.u[i].clone() - self.u[j].clone();
                        if sum.as_prime_integer().is_some() || dif.as_prime_integer().is_some() {
                            return false;
                        }
                    }
                }
                true
            }
            Some(q) => {
                if q.e.is_some() {
                    return false;
                }
                for i in 0..self.m {
                    for j in 0..self.m {
                        if self.quantum_product_in_q2z(i, j) {
                            return false;
                        }
                        if i < j && self.quantum_same_orbit(i, j) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// I_0 ∩ I_0^♯ = ∅: every u_i + u_j ∉ Z (degenerate) resp.
    /// u_i u_j ∉ q^{2Z} (quantum), for i <= j.
    pub fn morita_predicate(&self) -> bool {
        match &self.quantum {
            None => {
                if self.char_p != 0 {
                    return false;
                }
                for i in 0..self.m {
                    for j in i..self.m {
                        if (self.u[i].clone() + self.u[j].clone()).as_prime_integer().is_some() {
                            return false;
                        }
                    }
                }
                true
            }
            Some(_) => {
                for i in 0..self.m {
                    for j in i..self.m {
                        if self.quantum_product_in_q2z(i, j) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// Orbits hit by the sharp map: orbit -> (sharp orbit, base offset) with
    /// `-(u_base + z) = u_base' + (shift - z)`.
    pub fn sharp_orbit_map(&self) -> BTreeMap<usize, (usize, i64)> {
        let mut map = BTreeMap::new();
        for (orbit, &bi) in self.orbit_data.base_of.iter().enumerate() {
            let neg = -(self.u[bi].clone());
            if let SharpImage::Inside(c) = self.locate(&neg) {
                map.insert(orbit, (c.orbit, c.offset));
            }
        }
        map
    }

    pub fn check_object_size(&self, size: usize) -> Result<()> {
        if size > self.truncation_n {
            Err(Error::TruncationExceeded(format!(
                "object size {size} > truncation {}",
                self.truncation_n
            )))
        } else {
            Ok(())
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn config_from_json(s: &str) -> Result<CategoryConfig> {
    let raw: RawConfig = serde_json::from_str(s)?;
    make_config(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn raw(m: usize, u: &[&str], bubbles: &[&str], n: usize) -> RawConfig {
        RawConfig {
            flavor: Flavor::CyclotomicBrauer,
            m,
            u: u.iter().map(|s| s.to_string()).collect(),
            char_p: 0,
            bubbles: bubbles.iter().map(|s| s.to_string()).collect(),
            bubbles_cw: None,
            orbit_data: None,
            quantum_u: None,
            e: None,
            truncation_n: n,
        }
    }

    #[test]
    fn single_parameter_config() {
        let cfg = make_config(&raw(1, &["1/3"], &["1"], 4)).unwrap();
        assert_eq!(cfg.orbit_data.base_of.len(), 1);
    }

    #[test]
    fn orbit_derivation_difference_two() {
        let cfg = make_config(&raw(2, &["1/3", "7/3"], &["1", "2"], 4)).unwrap();
        assert_eq!(cfg.orbit_data.orbit_of, vec![0, 0]);
        assert_eq!(cfg.orbit_data.offset_of, vec![0, 2]);
    }

    #[test]
    fn char_two_rejected() {
        let mut r = raw(1, &["1/3"], &["1"], 4);
        r.char_p = 2;
        assert!(matches!(make_config(&r), Err(Error::InvalidChar(_))));
        let mut r = raw(1, &["1/3"], &["1"], 4);
        r.char_p = 6;
        assert!(matches!(make_config(&r), Err(Error::InvalidChar(_))));
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            make_config(&raw(2, &["1/3"], &["1", "2"], 4)),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn inconsistent_orbits_rejected() {
        let mut r = raw(2, &["1/3", "7/3"], &["1", "2"], 4);
        r.orbit_data = Some(OrbitData {
            orbit_of: vec![0, 1],
            offset_of: vec![0, 0],
            base_of: vec![0, 1],
        });
        assert!(matches!(make_config(&r), Err(Error::InconsistentOrbits(_))));
    }

    #[test]
    fn content_equality() {
        let cfg = make_config(&raw(2, &["1/3", "1/5"], &["1", "2"], 4)).unwrap();
        let a = Content::new(0, 1);
        assert!(cfg.content_eq(&a, &a));
        assert!(!cfg.content_eq(&Content::new(0, 0), &Content::new(1, 0)));

        // GF(3): offsets coincide mod p
        let mut r = raw(1, &["1"], &["1"], 4);
        r.char_p = 3;
        let cfg3 = make_config(&r).unwrap();
        assert!(cfg3.content_eq(&Content::new(0, 0), &Content::new(0, 3)));
        assert!(!cfg3.content_eq(&Content::new(0, 0), &Content::new(0, 2)));
    }

    #[test]
    fn content_eq_is_equivalence() {
        let mut r = raw(1, &["1"], &["1"], 4);
        r.char_p = 5;
        let cfg = make_config(&r).unwrap();
        let cs: Vec<Content> = (-4..8).map(|z| Content::new(0, z)).collect();
        for a in &cs {
            assert!(cfg.content_eq(a, a));
            for b in &cs {
                assert_eq!(cfg.content_eq(a, b), cfg.content_eq(b, a));
                for c in &cs {
                    if cfg.content_eq(a, b) && cfg.content_eq(b, c) {
                        assert!(cfg.content_eq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn sharp_examples() {
        // u = 1/2: -(1/2) = 1/2 - 1, same orbit, offset -1
        let cfg = make_config(&raw(1, &["1/2"], &["1"], 4)).unwrap();
        assert_eq!(
            cfg.sharp(&Content::new(0, 0)),
            SharpImage::Inside(Content::new(0, -1))
        );
        // u = 1/3: -(1/3) - 1/3 = -2/3 ∉ Z
        let cfg = make_config(&raw(1, &["1/3"], &["1"], 4)).unwrap();
        assert_eq!(cfg.sharp(&Content::new(0, 0)), SharpImage::Outside);
    }

    #[test]
    fn sharp_is_involution_inside() {
        let cfg = make_config(&raw(2, &["1/2", "9/2"], &["1", "2"], 4)).unwrap();
        for z in -3..4 {
            let c = cfg.canonical_content(&Content::new(0, z));
            if let SharpImage::Inside(s) = cfg.sharp(&c) {
                if let SharpImage::Inside(ss) = cfg.sharp(&s) {
                    assert!(cfg.content_eq(&ss, &c));
                } else {
                    panic!("sharp left the index set on the way back");
                }
            }
        }
    }

    #[test]
    fn quantum_sharp() {
        let mut r = raw(1, &["1"], &["1"], 4);
        r.quantum_u = Some(vec!["q".into()]);
        let cfg = make_config(&r).unwrap();
        // (q·q^0)^{-1} = q^{-1} = q·q^{-2}: orbit 0, offset -1
        assert_eq!(
            cfg.sharp(&Content::new(0, 0)),
            SharpImage::Inside(Content::new(0, -1))
        );
    }

    #[test]
    fn predicate_examples() {
        let cfg = make_config(&raw(2, &["1/5", "1/7"], &["1", "2"], 4)).unwrap();
        assert!(cfg.semisimple_predicate());
        assert!(cfg.morita_predicate());

        let cfg = make_config(&raw(1, &["1/2"], &["1"], 4)).unwrap();
        assert!(!cfg.semisimple_predicate());
        assert!(!cfg.morita_predicate());

        let cfg = make_config(&raw(1, &["1/3"], &["1"], 4)).unwrap();
        assert!(cfg.morita_predicate());

        let cfg = make_config(&raw(2, &["1/4", "3/4"], &["1", "2"], 4)).unwrap();
        assert!(!cfg.morita_predicate());
    }

    #[test]
    fn quantum_predicates() {
        let mut r = raw(2, &["1", "2"], &["1", "2"], 4);
        r.quantum_u = Some(vec!["q".into(), "q^5".into()]);
        let cfg = make_config(&r).unwrap();
        // u1·u2 = q^6 ∈ q^{2Z}
        assert!(!cfg.semisimple_predicate());
        assert!(!cfg.morita_predicate());

        let mut r = raw(2, &["1", "2"], &["1", "2"], 4);
        r.quantum_u = Some(vec!["1/3*q".into(), "1/5*q^2".into()]);
        let cfg = make_config(&r).unwrap();
        assert!(cfg.semisimple_predicate());
        assert!(cfg.morita_predicate());
    }

    #[test]
    fn semisimple_implies_morita_on_grid() {
        let us = [
            vec!["1/5", "1/7"],
            vec!["1/2", "1/3"],
            vec!["1/4", "3/4"],
            vec!["2/7", "3/7"],
        ];
        for u in &us {
            let b: Vec<&str> = vec!["1"; u.len()];
            let cfg = make_config(&raw(u.len(), u, &b, 4)).unwrap();
            if cfg.semisimple_predicate() {
                assert!(cfg.morita_predicate());
            }
        }
    }
}
