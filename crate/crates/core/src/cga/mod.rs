//! Truncated completions of graded algebras.
//!
//! Every algebra used here is a truncated weighted polynomial algebra over a
//! coefficient ring: R[[T]] has one symbol T of weight 1, the algebra of
//! higher differentials has symbols d^(i)t_j of weight i, and tensor products
//! concatenate the symbol sets of their factors.  Terms of weighted degree
//! above the truncation order are dropped.

mod element;
mod map;

pub use element::{CgaElement, Monomial};
pub use map::{eval_ratfunc, CoeffRule, Coefficient, PositiveMap};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CgaError {
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("denominator is not a unit: degree-0 part {0} is not invertible")]
    DenominatorNotUnit(String),
    #[error("no image recorded for symbol {0}")]
    MissingSymbol(String),
    #[error("map is not positive on {0}")]
    NotPositive(String),
}

/// One tensor factor of a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// R[[T]].
    PowerSeries,
    /// Higher differentials of K[t_1..t_m] (or of K(t) when m = 1).
    Dif { m: usize },
    /// R itself, concentrated in degree 0.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CgaDescriptor {
    factors: Vec<Factor>,
    order: usize,
}

impl CgaDescriptor {
    pub fn new(factors: Vec<Factor>, order: usize) -> Arc<Self> {
        Arc::new(CgaDescriptor { factors, order })
    }

    pub fn power_series(order: usize) -> Arc<Self> {
        Self::new(vec![Factor::PowerSeries], order)
    }

    pub fn dif(m: usize, order: usize) -> Arc<Self> {
        Self::new(vec![Factor::Dif { m }], order)
    }

    pub fn trivial(order: usize) -> Arc<Self> {
        Self::new(vec![Factor::Trivial], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Descriptor of the graded tensor product.
    pub fn tensor(&self, other: &Self) -> Result<Arc<Self>, CgaError> {
        if self.order != other.order {
            return Err(CgaError::DescriptorMismatch(format!("truncation orders {} and {}", self.order, other.order)));
        }
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().copied());
        Ok(Self::new(f, self.order))
    }

    pub fn allows(&self, s: &Sym) -> bool {
        match (self.factors.get(s.factor as usize), s.kind) {
            (Some(Factor::PowerSeries), SymKind::T) => true,
            (Some(Factor::Dif { m }), SymKind::D { order, var }) => order >= 1 && (var as usize) < *m,
            _ => false,
        }
    }

    /// All symbols of weight ≤ order, in canonical order.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        for (fi, f) in self.factors.iter().enumerate() {
            match f {
                Factor::PowerSeries => out.push(Sym::t(fi as u8)),
                Factor::Dif { m } => {
                    for var in 0..*m {
                        for order in 1..=self.order {
                            out.push(Sym::d(fi as u8, order as u32, var as u16));
                        }
                    }
                }
                Factor::Trivial => {}
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymKind {
    T,
    /// d^(order) t_var (var is 0-based).
    D {
        var: u16,
        order: u32,
    },
}

/// A generator of the symbol algebra, tagged with its tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub factor: u8,
    pub kind: SymKind,
}

impl Sym {
    pub fn t(factor: u8) -> Self {
        Sym { factor, kind: SymKind::T }
    }

    pub fn d(factor: u8, order: u32, var: u16) -> Self {
        Sym { factor, kind: SymKind::D { var, order } }
    }

    pub fn weight(&self) -> usize {
        match self.kind {
            SymKind::T => 1,
            SymKind::D { order, .. } => order as usize,
        }
    }

    fn render(&self, desc: &CgaDescriptor) -> String {
        let tag = if desc.factors.len() > 1 { format!("{}", self.factor + 1) } else { String::new() };
        match self.kind {
            SymKind::T => format!("T{tag}"),
            SymKind::D { var, order } => {
                let m = match desc.factors.get(self.factor as usize) {
                    Some(Factor::Dif { m }) => *m,
                    _ => 1,
                };
                let v = if m == 1 { "t".to_string() } else { format!("t{}", var + 1) };
                format!("d{order}_{v}{}", if tag.is_empty() { String::new() } else { format!("'{tag}") })
            }
        }
    }
}

impl fmt::Display for CgaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::PowerSeries => "R[[T]]".to_string(),
                Factor::Dif { m } => format!("Dif(m={m})"),
                Factor::Trivial => "R".to_string(),
            })
            .collect();
        write!(f, "{} mod deg>{}", parts.join(" (x) "), self.order)
    }
}
