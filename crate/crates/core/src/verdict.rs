//! Pass/fail outcomes of the axiom checks, with minimal witnesses.

use std::fmt;

use crate::linalg::{Matrix, Scalar};

/// The identity a check found violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    Associativity,
    NonDegenerate,
    /// `R(a)R(b) = R(R(a)b + aS(b))`
    RotaBaxterR,
    /// `S(a)S(b) = S(R(a)b + aS(b))`
    RotaBaxterS,
    /// `R(a)R(b) = R(R(a)b + aR(b) + λab)`
    WeightedRotaBaxter,
    LeftAction,
    RightAction,
    ActionCompatibility,
    /// `R(a)R_M(m) = R_M(R(a)m + aS_M(m))`
    ModuleLeftR,
    /// `R_M(m)R(a) = R_M(R_M(m)a + mS(a))`
    ModuleRightR,
    /// `S(a)S_M(m) = S_M(R(a)m + aS_M(m))`
    ModuleLeftS,
    /// `S_M(m)S(a) = S_M(R_M(m)a + mS(a))`
    ModuleRightS,
    Multiplicative,
    CommutesWithR,
    CommutesWithS,
    Invertible,
    Exactness,
    Ideal,
    TrivialProduct,
    InvariantKernel,
    Section,
    Retraction,
    Diagram,
    RestrictsToIdentity,
    Cocycle,
    SameCocycle,
    SameBimodule,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Associativity => "associativity (ab)c = a(bc)",
            Law::NonDegenerate => "non-degeneracy (bA = 0 or Ab = 0 implies b = 0)",
            Law::RotaBaxterR => "R(a)R(b) = R(R(a)b + aS(b))",
            Law::RotaBaxterS => "S(a)S(b) = S(R(a)b + aS(b))",
            Law::WeightedRotaBaxter => "R(a)R(b) = R(R(a)b + aR(b) + λab)",
            Law::LeftAction => "left action (ab)m = a(bm)",
            Law::RightAction => "right action m(ab) = (ma)b",
            Law::ActionCompatibility => "compatibility (am)b = a(mb)",
            Law::ModuleLeftR => "R(a)R_M(m) = R_M(R(a)m + aS_M(m))",
            Law::ModuleRightR => "R_M(m)R(a) = R_M(R_M(m)a + mS(a))",
            Law::ModuleLeftS => "S(a)S_M(m) = S_M(R(a)m + aS_M(m))",
            Law::ModuleRightS => "S_M(m)S(a) = S_M(R_M(m)a + mS(a))",
            Law::Multiplicative => "f(ab) = f(a)f(b)",
            Law::CommutesWithR => "f∘R = R'∘f",
            Law::CommutesWithS => "f∘S = S'∘f",
            Law::Invertible => "map is invertible",
            Law::Exactness => "exactness of 0 → M → Â → A → 0",
            Law::Ideal => "image of M is an ideal",
            Law::TrivialProduct => "uv = 0 on M",
            Law::InvariantKernel => "operators preserve the image of M",
            Law::Section => "p∘t = Id",
            Law::Retraction => "s∘i = Id, s∘t = 0, i∘s + t∘p = Id",
            Law::Diagram => "p₂∘ζ = p₁ and ζ∘i₁ = i₂",
            Law::RestrictsToIdentity => "ζ restricted to M is the identity",
            Law::Cocycle => "2-cocycle condition",
            Law::SameCocycle => "extracted cocycles agree",
            Law::SameBimodule => "induced bimodule structures agree",
        };
        f.write_str(s)
    }
}

/// A failed identity: basis indices (0-based) and both sides evaluated there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub indices: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        let side = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{} fails at basis ({}): lhs [{}], rhs [{}]",
            self.law,
            idx.join(","),
            side(&self.lhs),
            side(&self.rhs)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Violation),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }

    /// Chains checks, keeping the first failure.
    pub fn and_then(self, next: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => next(),
            fail => fail,
        }
    }

    pub fn into_result<E>(self, wrap: impl FnOnce(Violation) -> E) -> Result<(), E> {
        match self {
            Verdict::Pass => Ok(()),
            Verdict::Fail(v) => Err(wrap(v)),
        }
    }
}

/// Compares two linear maps column by column; the first differing column
/// becomes the witness, with `decode` turning its index into basis indices.
pub fn compare_maps(law: Law, lhs: &Matrix, rhs: &Matrix, decode: impl Fn(usize) -> Vec<usize>) -> Verdict {
    match lhs.first_difference(rhs) {
        None => Verdict::Pass,
        Some((_, col)) => {
            Verdict::Fail(Violation { law, indices: decode(col), lhs: lhs.column(col), rhs: rhs.column(col) })
        }
    }
}
