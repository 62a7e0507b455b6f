use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the distinguished order symbol added by order expansions.
pub const ORDER_SYMBOL: &str = "<";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

/// A finite relational signature, optionally with one binary symbol
/// flagged as a strict linear order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
    order: Option<usize>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>, order_symbol: Option<&str>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.arity == 0 {
                return Err(Error::InvalidSignature(format!("symbol `{}` has arity 0", s.name)));
            }
            if s.name.is_empty() {
                return Err(Error::InvalidSignature("empty symbol name".into()));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        let order = match order_symbol {
            None => None,
            Some(name) => {
                let idx = symbols.iter().position(|s| s.name == name).ok_or_else(|| {
                    Error::InvalidSignature(format!("order symbol `{name}` is not declared"))
                })?;
                if symbols[idx].arity != 2 {
                    return Err(Error::InvalidSignature(format!(
                        "order symbol `{name}` must be binary"
                    )));
                }
                Some(idx)
            }
        };
        Ok(Signature { symbols, order })
    }

    pub fn empty() -> Self {
        Signature { symbols: Vec::new(), order: None }
    }

    /// `{E/2}`: graphs and their relatives.
    pub fn graph() -> Self {
        Signature { symbols: vec![Symbol::new("E", 2)], order: None }
    }

    pub fn tournament() -> Self {
        Signature { symbols: vec![Symbol::new("T", 2)], order: None }
    }

    pub fn linear_order() -> Self {
        Signature { symbols: vec![Symbol::new(ORDER_SYMBOL, 2)], order: Some(0) }
    }

    pub fn ordered_graph() -> Self {
        Signature {
            symbols: vec![Symbol::new(ORDER_SYMBOL, 2), Symbol::new("E", 2)],
            order: Some(0),
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn order_index(&self) -> Option<usize> {
        self.order
    }

    pub fn order_symbol(&self) -> Option<&str> {
        self.order.map(|i| self.symbols[i].name.as_str())
    }

    /// The signature with `<` prepended as order symbol.
    pub fn with_order(&self) -> Result<Signature> {
        if self.order.is_some() {
            return Err(Error::InvalidSignature("signature already has an order symbol".into()));
        }
        if self.index_of(ORDER_SYMBOL).is_some() {
            return Err(Error::InvalidSignature(format!("`{ORDER_SYMBOL}` is already a symbol")));
        }
        let mut symbols = vec![Symbol::new(ORDER_SYMBOL, 2)];
        symbols.extend(self.symbols.iter().cloned());
        Ok(Signature { symbols, order: Some(0) })
    }

    /// The reduct signature with the order symbol removed.
    pub fn without_order(&self) -> Signature {
        match self.order {
            None => self.clone(),
            Some(o) => Signature {
                symbols: self
                    .symbols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != o)
                    .map(|(_, s)| s.clone())
                    .collect(),
                order: None,
            },
        }
    }

    pub fn shared(self) -> Arc<Signature> {
        Arc::new(self)
    }
}
