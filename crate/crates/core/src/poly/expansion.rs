use super::{IntPoly, PolyError};

/// `f = Σ terms[i] · phi^i` with every `deg terms[i] < deg phi`.
///
/// The expansion of the zero polynomial has no terms; otherwise the last
/// term is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiExpansion {
    phi: IntPoly,
    terms: Vec<IntPoly>,
}

impl PhiExpansion {
    /// Checks that `phi` is monic of positive degree and every term is
    /// reduced modulo `phi`. Trailing zero terms are dropped.
    pub fn new(phi: IntPoly, mut terms: Vec<IntPoly>) -> Result<Self, PolyError> {
        let bound = check_phi(&phi)?;
        for (index, t) in terms.iter().enumerate() {
            if let Some(degree) = t.degree().filter(|&d| d >= bound) {
                return Err(PolyError::TermTooLarge {
                    index,
                    degree,
                    bound,
                });
            }
        }
        while terms.last().is_some_and(IntPoly::is_zero) {
            terms.pop();
        }
        Ok(Self { phi, terms })
    }

    pub fn phi(&self) -> &IntPoly {
        &self.phi
    }

    pub fn terms(&self) -> &[IntPoly] {
        &self.terms
    }

    /// Coefficient of `phi^i`, zero beyond the top index.
    pub fn term(&self, i: usize) -> IntPoly {
        self.terms.get(i).cloned().unwrap_or_default()
    }

    /// Index of the highest nonzero term; `None` for zero.
    pub fn top_index(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn assemble(&self) -> IntPoly {
        self.terms
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, b| &(&acc * &self.phi) + b)
    }
}

fn check_phi(phi: &IntPoly) -> Result<usize, PolyError> {
    match phi.degree() {
        None | Some(0) => Err(PolyError::ConstantDivisor),
        Some(_) if !phi.is_monic() => Err(PolyError::NonMonicDivisor),
        Some(d) => Ok(d),
    }
}

/// The unique `phi`-adic expansion of `f`, by repeated division by `phi`.
pub fn phi_expand(f: &IntPoly, phi: &IntPoly) -> Result<PhiExpansion, PolyError> {
    check_phi(phi)?;
    let mut terms = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (q, r) = rest.divrem_monic(phi)?;
        terms.push(r);
        rest = q;
    }
    Ok(PhiExpansion {
        phi: phi.clone(),
        terms,
    })
}

pub fn phi_assemble(e: &PhiExpansion) -> IntPoly {
    e.assemble()
}
