//! Tri-state decisions and the evidence they carry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of a partial decision procedure. `Yes` always carries a witness
/// that replays by direct substitution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum TriState<W> {
    Yes { witness: W },
    No { trace: ProofTrace },
    Unknown { reason: String },
}

impl<W> TriState<W> {
    pub fn yes(w: W) -> Self {
        TriState::Yes { witness: w }
    }

    pub fn no(t: ProofTrace) -> Self {
        TriState::No { trace: t }
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        TriState::Unknown {
            reason: reason.into(),
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, TriState::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, TriState::No { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriState::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            TriState::Yes { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn trace(&self) -> Option<&ProofTrace> {
        match self {
            TriState::No { trace } => Some(trace),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> TriState<V> {
        match self {
            TriState::Yes { witness } => TriState::Yes {
                witness: f(witness),
            },
            TriState::No { trace } => TriState::No { trace },
            TriState::Unknown { reason } => TriState::Unknown { reason },
        }
    }

    /// Short verdict word for reports, e.g. `("Member", "NonMember")`.
    pub fn label(&self, yes: &'static str, no: &'static str) -> &'static str {
        match self {
            TriState::Yes { .. } => yes,
            TriState::No { .. } => no,
            TriState::Unknown { .. } => "Unknown",
        }
    }
}

/// Evidence that a diagonal form is isotropic. The form itself is known from
/// context; representation witnesses are isotropic vectors of `q + <-x>`
/// with nonzero last coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// Exact zero over the field itself.
    Exact { vector: Vec<String> },
    /// Rational vector whose exact p-adic zero exists by Hensel's lemma:
    /// for some `i` with `x_i != 0`, `v(q(x)) - v(c_i) - 2 v(x_i) >= 1`.
    Hensel { prime: u64, vector: Vec<String> },
    /// Over `Q_p(t)`: coefficients `c_j = k_j * P * s_j^2` (j in `indices`) share
    /// the factor `P`; a p-adic zero `y` of `<k_j>` gives `x_j = y_j / s_j`.
    Lifted {
        indices: Vec<usize>,
        base_coeffs: Vec<String>,
        scalings: Vec<String>,
        base: Box<Witness>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    /// Springer: anisotropic because both residue forms are.
    ResidueSplit,
    /// Anisotropic at a finite place of Q by the Hilbert-symbol criterion.
    LocalSymbol,
    /// A replayable vector.
    ExplicitVector,
    /// Anisotropic over the reals.
    Definiteness,
    /// One Pfister slot rewrite.
    SlotRule,
    /// Anisotropy over a finite field (dimension at most 2).
    FiniteField,
    /// The zero form or a one-dimensional form.
    Trivial,
    /// A bundle of sub-facts.
    Conjunction,
}

/// A node of a replayable proof tree. Anisotropy nodes state that `form`
/// over `field` is anisotropic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub kind: NodeKind,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ProofTrace>,
}

impl ProofTrace {
    pub fn new(kind: NodeKind, claim: impl Into<String>) -> Self {
        ProofTrace {
            kind,
            claim: claim.into(),
            field: None,
            form: Vec::new(),
            place: None,
            data: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub fn with_field(mut self, f: impl Into<String>) -> Self {
        self.field = Some(f.into());
        self
    }

    pub fn with_form(mut self, form: Vec<String>) -> Self {
        self.form = form;
        self
    }

    pub fn with_place(mut self, p: impl Into<String>) -> Self {
        self.place = Some(p.into());
        self
    }

    pub fn with_data(mut self, k: &str, v: impl Into<serde_json::Value>) -> Self {
        self.data.insert(k.to_string(), v.into());
        self
    }

    pub fn with_child(mut self, c: ProofTrace) -> Self {
        self.children.push(c);
        self
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTrace::size).sum::<usize>()
    }

    pub fn kinds(&self) -> Vec<NodeKind> {
        let mut out = vec![self.kind];
        for c in &self.children {
            out.extend(c.kinds());
        }
        out
    }
}
