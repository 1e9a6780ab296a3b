use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::SymError;

/// Ordered symbol table shared by every polynomial of one computation.
///
/// Map variables, the curve variable, fiber coordinates and parameters all
/// live in one ring; the declared order fixes the graded-lex term order.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

struct RingInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring, SymError> {
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if !is_identifier(&n) {
                return Err(SymError::BadSymbol(n));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(SymError::DuplicateSymbol(n));
            }
            out.push(n);
        }
        Ok(Ring(Arc::new(RingInner { names: out, index })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, SymError> {
        self.index_of(name)
            .ok_or_else(|| SymError::UndeclaredSymbol(name.to_string()))
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring{:?}", self.0.names)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
