//! Labelled scalar quantities with a provenance note, shared by the state
//! closed forms, the channel oracles and the numeric pipelines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub label: String,
    pub re: f64,
    pub im: f64,
    /// Where the value comes from, e.g. "oscillator closed form".
    pub source: String,
}

impl Quantity {
    pub fn real(label: impl Into<String>, value: f64, source: impl Into<String>) -> Quantity {
        Quantity { label: label.into(), re: value, im: 0.0, source: source.into() }
    }

    pub fn complex(label: impl Into<String>, value: Complex64, source: impl Into<String>) -> Quantity {
        Quantity { label: label.into(), re: value.re, im: value.im, source: source.into() }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// An ordered collection of quantities with unique labels.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuantityCard {
    pub entries: Vec<Quantity>,
}

impl QuantityCard {
    pub fn new() -> QuantityCard {
        QuantityCard::default()
    }

    /// Adds or replaces an entry.
    pub fn push(&mut self, q: Quantity) {
        match self.entries.iter_mut().find(|e| e.label == q.label) {
            Some(e) => *e = q,
            None => self.entries.push(q),
        }
    }

    pub fn get(&self, label: &str) -> Option<&Quantity> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn value(&self, label: &str) -> Option<Complex64> {
        self.get(label).map(Quantity::value)
    }

    pub fn real(&self, label: &str) -> Option<f64> {
        self.get(label).map(|q| q.re)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
