//! Dotted (oriented) Brauer diagrams: normal-order bases, composition by
//! rewriting, the tensor-with-identity embedding, the flip anti-involution
//! and the triangular classification.

pub mod brauer;
pub mod curve;
pub mod geom;
pub mod oriented;

use std::collections::BTreeMap;
use std::fmt;

use crate::field::FieldElement;

pub use brauer::{BrauerDiagram, BrauerEngine};
pub use oriented::{Arrow, OrientedDiagram, OrientedEngine};

/// Object of the category: a size (unoriented flavor) or an arrow word
/// (oriented flavor).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ObjectLabel {
    N(usize),
    Word(Vec<Arrow>),
}

impl fmt::Display for ObjectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectLabel::N(n) => write!(f, "{n}"),
            ObjectLabel::Word(w) => {
                for a in w {
                    write!(f, "{}", if *a == Arrow::Up { '^' } else { 'v' })?;
                }
                Ok(())
            }
        }
    }
}

/// Finite formal sum of basis diagrams with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<D: Ord + Clone> {
    pub terms: BTreeMap<D, FieldElement>,
}

impl<D: Ord + Clone> Default for LinComb<D> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<D: Ord + Clone> LinComb<D> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(d: D, c: FieldElement) -> Self {
        let mut l = Self::new();
        l.add_term(d, c);
        l
    }

    pub fn add_term(&mut self, d: D, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    pub fn add(&mut self, other: &LinComb<D>) {
        for (d, c) in &other.terms {
            self.add_term(d.clone(), c.clone());
        }
    }

    pub fn scaled(&self, c: &FieldElement) -> LinComb<D> {
        let mut out = LinComb::new();
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &D) -> Option<&FieldElement> {
        self.terms.get(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&D, &FieldElement)> {
        self.terms.iter()
    }
}

/// Triangular classification of a basis diagram (Y/H/X membership).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TriFlags {
    pub minus: bool,
    pub circ: bool,
    pub plus: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriClass {
    Minus,
    Circ,
    Plus,
    None,
}

impl TriFlags {
    /// Identities carry all three flags; they report as CIRC.
    pub fn primary(&self) -> TriClass {
        if self.circ {
            TriClass::Circ
        } else if self.minus {
            TriClass::Minus
        } else if self.plus {
            TriClass::Plus
        } else {
            TriClass::None
        }
    }
}
