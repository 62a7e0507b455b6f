use std::collections::HashMap;

use super::coloring::PatternFamily;
use super::witness::{require_member, run_family, ColoringCertificate, RamseyCheck};
use crate::classes::ClassSpec;
use crate::error::{Error, Result};
use crate::structures::{canonical_form, copies_of, find_embeddings, Structure};

/// Reading used for the relative Ramsey property.
pub const RELATIVE_RAMSEY_CONVENTION: &str =
    "the witness called C and C0 is one base-signature structure C0; B0 is the reduct of B to the base signature";

/// Copies of `a0` in `c0`, and one pattern per embedding of `B|L0` into
/// `c0`. The groups of a pattern are the images of the copies of `a0` in
/// `B|L0` that carry isomorphic expanded structures in `b`.
pub fn relative_family(k0: &ClassSpec, a0: &Structure, b: &Structure, c0: &Structure) -> Result<(Vec<Vec<usize>>, PatternFamily)> {
    let b0 = b.reduct(k0.signature())?;
    let copies = copies_of(a0, c0)?;
    let index: HashMap<&[usize], usize> = copies.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();

    let mut groups: Vec<(crate::structures::CanonicalForm, Vec<Vec<usize>>)> = Vec::new();
    for s in copies_of(a0, &b0)? {
        let form = canonical_form(&b.induced_substructure(&s)?);
        match groups.iter_mut().find(|(f, _)| *f == form) {
            Some((_, g)) => g.push(s),
            None => groups.push((form, vec![s])),
        }
    }

    let mut patterns = Vec::new();
    for phi in find_embeddings(&b0, c0)? {
        let pattern = groups
            .iter()
            .map(|(_, members)| {
                members
                    .iter()
                    .map(|s| {
                        let mut image: Vec<usize> = s.iter().map(|&p| phi[p]).collect();
                        image.sort_unstable();
                        index[image.as_slice()]
                    })
                    .collect()
            })
            .collect();
        patterns.push(pattern);
    }
    Ok((copies.clone(), PatternFamily::new(copies.len(), patterns)))
}

/// Whether every `colors`-coloring of the copies of `a0` in `c0` admits an
/// embedding of `B|L0` into `c0` on which copies with isomorphic expanded
/// structures in `b` get equal colors.
pub fn verify_relative_ramsey_witness(
    k0: &ClassSpec,
    k: &ClassSpec,
    a0: &Structure,
    b: &Structure,
    colors: usize,
    c0: &Structure,
    budget: u64,
) -> Result<RamseyCheck> {
    k.check_expands(k0)?;
    require_member(k0, a0, "A0")?;
    require_member(k, b, "B")?;
    require_member(k0, c0, "C0")?;
    if colors == 0 {
        return Err(Error::Precondition("at least one color is required".into()));
    }
    let (copies, family) = relative_family(k0, a0, b, c0)?;
    Ok(run_family(copies, &family, colors, budget))
}

pub fn replay_relative_certificate(
    k0: &ClassSpec,
    a0: &Structure,
    b: &Structure,
    c0: &Structure,
    cert: &ColoringCertificate,
) -> Result<bool> {
    let (copies, family) = relative_family(k0, a0, b, c0)?;
    Ok(copies == cert.copies && family.is_bad(&cert.colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Builtin;
    use crate::ramsey::DEFAULT_BUDGET;
    use crate::report::Verdict;
    use crate::structures::builders::*;

    fn classes() -> (ClassSpec, ClassSpec) {
        (ClassSpec::builtin(Builtin::PureSets), ClassSpec::builtin(Builtin::LinearOrders))
    }

    #[test]
    fn pigeonhole() {
        let (k0, k) = classes();
        let yes = verify_relative_ramsey_witness(&k0, &k, &pure_set(1), &chain(2), 2, &pure_set(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(yes.verdict, Verdict::True);
        let no = verify_relative_ramsey_witness(&k0, &k, &pure_set(1), &chain(2), 2, &pure_set(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(no.verdict, Verdict::False);
        let cert = no.certificate.unwrap();
        assert_eq!(cert.colors, vec![0, 1]);
        assert!(replay_relative_certificate(&k0, &pure_set(1), &chain(2), &pure_set(2), &cert).unwrap());
    }

    #[test]
    fn one_color() {
        let (k0, k) = classes();
        let r = verify_relative_ramsey_witness(&k0, &k, &pure_set(2), &chain(3), 1, &pure_set(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::True);
    }

    #[test]
    fn wrong_classes_rejected() {
        let (k0, k) = classes();
        assert!(verify_relative_ramsey_witness(&k, &k0, &chain(1), &pure_set(2), 2, &chain(3), DEFAULT_BUDGET).is_err());
    }
}
