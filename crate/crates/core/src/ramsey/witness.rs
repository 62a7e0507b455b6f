use serde::{Deserialize, Serialize};

use super::coloring::{ColoringOutcome, PatternFamily};
use crate::classes::ClassSpec;
use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::structures::{copies_of, Structure};

/// A coloring of the listed copies (point subsets of the candidate) that
/// satisfies no pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub copies: Vec<Vec<usize>>,
    pub colors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyCheck {
    pub verdict: Verdict,
    pub certificate: Option<ColoringCertificate>,
    pub nodes: u64,
}

pub(crate) fn run_family(copies: Vec<Vec<usize>>, family: &PatternFamily, colors: usize, budget: u64) -> RamseyCheck {
    let (outcome, nodes) = family.search(colors, budget);
    match outcome {
        ColoringOutcome::NoBadColoring => RamseyCheck { verdict: Verdict::True, certificate: None, nodes },
        ColoringOutcome::Bad(c) => {
            RamseyCheck { verdict: Verdict::False, certificate: Some(ColoringCertificate { copies, colors: c }), nodes }
        }
        ColoringOutcome::BudgetExhausted => RamseyCheck { verdict: Verdict::Inconclusive, certificate: None, nodes },
    }
}

pub(crate) fn require_member(k: &ClassSpec, s: &Structure, role: &'static str) -> Result<()> {
    if k.member(s)? {
        Ok(())
    } else {
        Err(Error::NotAMember(role))
    }
}

/// Copies of `a` in `c`, and one pattern per copy of `b` in `c` whose only
/// group is the copies of `a` inside it.
pub fn ramsey_family(a: &Structure, b: &Structure, c: &Structure) -> Result<(Vec<Vec<usize>>, PatternFamily)> {
    let copies = copies_of(a, c)?;
    let patterns = copies_of(b, c)?
        .into_iter()
        .map(|bc| {
            let inside = copies.iter().enumerate().filter(|(_, s)| s.iter().all(|p| bc.binary_search(p).is_ok()));
            vec![inside.map(|(i, _)| i).collect()]
        })
        .collect();
    let family = PatternFamily::new(copies.len(), patterns);
    Ok((copies, family))
}

/// Whether every `colors`-coloring of the copies of `a` in `c` is constant
/// on the copies of `a` inside some copy of `b`.
pub fn verify_ramsey_witness(k: &ClassSpec, a: &Structure, b: &Structure, colors: usize, c: &Structure, budget: u64) -> Result<RamseyCheck> {
    require_member(k, a, "A")?;
    require_member(k, b, "B")?;
    require_member(k, c, "C")?;
    if colors == 0 {
        return Err(Error::Precondition("at least one color is required".into()));
    }
    let (copies, family) = ramsey_family(a, b, c)?;
    Ok(run_family(copies, &family, colors, budget))
}

/// Whether `cert` still defeats every copy of `b` in `c`.
pub fn replay_ramsey_certificate(a: &Structure, b: &Structure, c: &Structure, cert: &ColoringCertificate) -> Result<bool> {
    let (copies, family) = ramsey_family(a, b, c)?;
    Ok(copies == cert.copies && family.is_bad(&cert.colors))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub candidate: Structure,
    pub certificate: ColoringCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseySearch {
    /// `True` with a witness, `False` if no member up to the size cap works,
    /// `Inconclusive` if some candidate ran out of budget first.
    pub verdict: Verdict,
    pub witness: Option<Structure>,
    /// Every rejected candidate before the witness, with its coloring.
    pub refuted: Vec<Refutation>,
    pub inconclusive_at: Option<Structure>,
    pub nodes: u64,
}

/// The first member `C` with `|C| <= max` (by size, then canonical order)
/// that passes [`verify_ramsey_witness`].
pub fn find_ramsey_witness(k: &ClassSpec, a: &Structure, b: &Structure, colors: usize, max: usize, budget: u64) -> Result<RamseySearch> {
    require_member(k, a, "A")?;
    require_member(k, b, "B")?;
    if colors == 0 {
        return Err(Error::Precondition("at least one color is required".into()));
    }
    let mut out = RamseySearch { verdict: Verdict::False, witness: None, refuted: Vec::new(), inconclusive_at: None, nodes: 0 };
    if max < b.size() {
        return Ok(out);
    }
    let levels = k.members_up_to(max);
    for c in levels[b.size()..].iter().flatten() {
        let (copies, family) = ramsey_family(a, b, c)?;
        let check = run_family(copies, &family, colors, budget);
        out.nodes += check.nodes;
        match check.verdict {
            Verdict::True | Verdict::VacuousTrue => {
                out.verdict = Verdict::True;
                out.witness = Some(c.clone());
                return Ok(out);
            }
            Verdict::False => out.refuted.push(Refutation {
                candidate: c.clone(),
                certificate: check.certificate.expect("false verdicts carry a coloring"),
            }),
            Verdict::Inconclusive => {
                out.verdict = Verdict::Inconclusive;
                out.inconclusive_at = Some(c.clone());
                return Ok(out);
            }
        }
    }
    Ok(out)
}
