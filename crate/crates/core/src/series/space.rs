use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Ordered coordinate names of a series. Variable index `i` of a
/// [`MultiIndex`](super::MultiIndex) refers to `names[i]`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableSpace(Arc<[String]>);

impl VariableSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VariableSpace(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    /// `x1, …, xn`.
    pub fn x(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("x{i}")))
    }

    /// `t, x1, …, xn`.
    pub fn tx(n: usize) -> Self {
        Self::new(std::iter::once("t".to_string()).chain((1..=n).map(|i| format!("x{i}"))))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.0.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn name(&self, var: u32) -> Option<&str> {
        self.0.get(var as usize).map(String::as_str)
    }
}

impl PartialEq for VariableSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VariableSpace {}

impl fmt::Debug for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}
