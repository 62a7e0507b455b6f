use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{
    canonical_form, canonical_representative, embeds, enumerate_levels, Domain, RelKind, Signature, Structure, Symbol,
};

/// Classes with a fixed membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    PureSets,
    Graphs,
    K3FreeGraphs,
    Tournaments,
    EquivalenceRelations,
    LinearOrders,
    OrderedGraphs,
    /// Pure sets of even size. Not hereditary; kept as a negative fixture.
    EvenSizeSets,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::PureSets,
        Builtin::Graphs,
        Builtin::K3FreeGraphs,
        Builtin::Tournaments,
        Builtin::EquivalenceRelations,
        Builtin::LinearOrders,
        Builtin::OrderedGraphs,
        Builtin::EvenSizeSets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::PureSets => "pure-sets",
            Builtin::Graphs => "graphs",
            Builtin::K3FreeGraphs => "k3-free-graphs",
            Builtin::Tournaments => "tournaments",
            Builtin::EquivalenceRelations => "equivalence-relations",
            Builtin::LinearOrders => "linear-orders",
            Builtin::OrderedGraphs => "ordered-graphs",
            Builtin::EvenSizeSets => "even-size-sets",
        }
    }

    pub fn from_name(name: &str) -> Result<Builtin> {
        let norm = name.trim().to_ascii_lowercase().replace('_', "-");
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == norm)
            .ok_or_else(|| Error::UnknownBuiltin(name.to_owned()))
    }

    pub fn signature(self) -> Signature {
        match self {
            Builtin::PureSets | Builtin::EvenSizeSets => Signature::empty(),
            Builtin::Graphs | Builtin::K3FreeGraphs | Builtin::EquivalenceRelations => Signature::graph(),
            Builtin::Tournaments => Signature::tournament(),
            Builtin::LinearOrders => Signature::linear_order(),
            Builtin::OrderedGraphs => Signature::ordered_graph(),
        }
    }

    fn kinds(self) -> Vec<RelKind> {
        match self {
            Builtin::PureSets | Builtin::EvenSizeSets => vec![],
            Builtin::Graphs | Builtin::K3FreeGraphs => vec![RelKind::Graph],
            Builtin::EquivalenceRelations => vec![RelKind::Equivalence],
            Builtin::Tournaments => vec![RelKind::Tournament],
            Builtin::LinearOrders => vec![RelKind::Order],
            Builtin::OrderedGraphs => vec![RelKind::Order, RelKind::Graph],
        }
    }

    fn contains(self, a: &Structure) -> bool {
        let n = a.size();
        let sym_graph = |e: usize| (0..n).all(|x| !a.holds(e, &[x, x]) && (0..x).all(|y| a.holds(e, &[x, y]) == a.holds(e, &[y, x])));
        match self {
            Builtin::PureSets | Builtin::LinearOrders => true,
            Builtin::EvenSizeSets => n % 2 == 0,
            Builtin::Graphs => sym_graph(0),
            Builtin::OrderedGraphs => sym_graph(1),
            Builtin::K3FreeGraphs => {
                sym_graph(0)
                    && !(0..n).any(|x| {
                        ((x + 1)..n).any(|y| a.holds(0, &[x, y]) && ((y + 1)..n).any(|z| a.holds(0, &[x, z]) && a.holds(0, &[y, z])))
                    })
            }
            Builtin::Tournaments => (0..n).all(|x| !a.holds(0, &[x, x]) && (0..x).all(|y| a.holds(0, &[x, y]) != a.holds(0, &[y, x]))),
            Builtin::EquivalenceRelations => {
                (0..n).all(|x| a.holds(0, &[x, x]))
                    && (0..n).all(|x| (0..n).all(|y| a.holds(0, &[x, y]) == a.holds(0, &[y, x])))
                    && (0..n).all(|x| {
                        (0..n).all(|y| !a.holds(0, &[x, y]) || (0..n).all(|z| !a.holds(0, &[y, z]) || a.holds(0, &[x, z])))
                    })
            }
        }
    }
}

/// Named predicates selecting the admissible orderings of an order expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Admissibility {
    /// Every linear ordering.
    AllOrders,
    /// Classes of the first binary base symbol (an equivalence) are intervals.
    ConvexWrtEquivalence,
    /// Every pair `(a, b)` with `a != b` in a binary base relation has `a < b`.
    IncreasingEdges,
}

impl Admissibility {
    pub const ALL: [Admissibility; 3] =
        [Admissibility::AllOrders, Admissibility::ConvexWrtEquivalence, Admissibility::IncreasingEdges];

    pub fn name(self) -> &'static str {
        match self {
            Admissibility::AllOrders => "all_orders",
            Admissibility::ConvexWrtEquivalence => "convex_wrt_equivalence",
            Admissibility::IncreasingEdges => "increasing_edges",
        }
    }

    pub fn from_name(name: &str) -> Result<Admissibility> {
        let norm = name.trim().to_ascii_lowercase().replace('-', "_");
        Admissibility::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| Error::UnknownPredicate(name.to_owned()))
    }

    /// `reduct` is in the base signature, `rank[v]` is the position of `v`.
    fn admits(self, reduct: &Structure, rank: &[usize]) -> bool {
        let sig = reduct.signature();
        let n = reduct.size();
        match self {
            Admissibility::AllOrders => true,
            Admissibility::ConvexWrtEquivalence => {
                let Some(e) = (0..sig.len()).find(|&s| sig.arity(s) == 2) else { return true };
                let mut by_rank = vec![0; n];
                for (v, &r) in rank.iter().enumerate() {
                    by_rank[r] = v;
                }
                (0..n).all(|i| {
                    ((i + 2)..n).all(|k| {
                        !reduct.holds(e, &[by_rank[i], by_rank[k]])
                            || ((i + 1)..k).all(|j| reduct.holds(e, &[by_rank[i], by_rank[j]]))
                    })
                })
            }
            Admissibility::IncreasingEdges => (0..sig.len()).filter(|&s| sig.arity(s) == 2).all(|s| {
                (0..n).all(|a| (0..n).all(|b| a == b || !reduct.holds(s, &[a, b]) || rank[a] < rank[b]))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassMode {
    Builtin(Builtin),
    /// All structures omitting each listed structure (stored canonically).
    Forbidden(Vec<Structure>),
    OrderExpansion { base: Box<ClassSpec>, admissibility: Admissibility },
}

/// A class of finite structures with decidable membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    sig: Arc<Signature>,
    mode: ClassMode,
}

impl ClassSpec {
    pub fn builtin(b: Builtin) -> ClassSpec {
        ClassSpec { sig: Arc::new(b.signature()), mode: ClassMode::Builtin(b) }
    }

    pub fn builtin_named(name: &str) -> Result<ClassSpec> {
        Builtin::from_name(name).map(ClassSpec::builtin)
    }

    pub fn forbidden(sig: Arc<Signature>, forbidden: Vec<Structure>) -> Result<ClassSpec> {
        let mut canon = Vec::with_capacity(forbidden.len());
        for f in forbidden {
            if **f.signature() != *sig {
                return Err(Error::SignatureMismatch("forbidden structure in another signature".into()));
            }
            canon.push((canonical_form(&f), canonical_representative(&f)));
        }
        canon.sort_by(|a, b| (a.1.size(), &a.0).cmp(&(b.1.size(), &b.0)));
        canon.dedup_by(|a, b| a.0 == b.0);
        Ok(ClassSpec { sig, mode: ClassMode::Forbidden(canon.into_iter().map(|(_, s)| s).collect()) })
    }

    pub fn order_expansion(base: ClassSpec, admissibility: Admissibility) -> Result<ClassSpec> {
        let sig = Arc::new(base.sig.with_order()?);
        if admissibility == Admissibility::ConvexWrtEquivalence && !base.sig.symbols().iter().any(|s| s.arity == 2) {
            return Err(Error::InvalidSignature("convexity needs a binary base symbol".into()));
        }
        Ok(ClassSpec { sig, mode: ClassMode::OrderExpansion { base: Box::new(base), admissibility } })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn mode(&self) -> &ClassMode {
        &self.mode
    }

    /// Short human label.
    pub fn label(&self) -> String {
        match &self.mode {
            ClassMode::Builtin(b) => b.name().to_owned(),
            ClassMode::Forbidden(f) => format!("forbidden[{}]", f.len()),
            ClassMode::OrderExpansion { base, admissibility } => format!("{}+<[{}]", base.label(), admissibility.name()),
        }
    }

    pub fn member(&self, a: &Structure) -> Result<bool> {
        if **a.signature() != *self.sig {
            return Err(Error::SignatureMismatch(format!("structure is not over the signature of {}", self.label())));
        }
        Ok(self.contains(a))
    }

    /// Membership without the signature check.
    pub(crate) fn contains(&self, a: &Structure) -> bool {
        match &self.mode {
            ClassMode::Builtin(b) => b.contains(a),
            ClassMode::Forbidden(fs) => fs.iter().all(|f| f.size() > a.size() || !embeds(f, a).unwrap_or(false)),
            ClassMode::OrderExpansion { base, admissibility } => {
                let Ok(reduct) = a.reduct(&base.sig) else { return false };
                let rank = a.order_ranks().expect("expansion signature has an order");
                base.contains(&reduct) && admissibility.admits(&reduct, &rank)
            }
        }
    }

    /// Closed under induced substructures by construction.
    pub fn is_hereditary(&self) -> bool {
        match &self.mode {
            ClassMode::Builtin(b) => *b != Builtin::EvenSizeSets,
            ClassMode::Forbidden(_) => true,
            ClassMode::OrderExpansion { base, .. } => base.is_hereditary(),
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.mode {
            ClassMode::Builtin(b) => Domain::new(self.sig.clone(), b.kinds()).expect("builtin kinds are consistent"),
            ClassMode::Forbidden(_) => Domain::free(self.sig.clone()),
            ClassMode::OrderExpansion { base, .. } => {
                let mut kinds = vec![RelKind::Order];
                kinds.extend_from_slice(base.domain().kinds());
                Domain::new(self.sig.clone(), kinds).expect("expansion kinds are consistent")
            }
        }
    }

    /// The reduct class when `self` is a known order expansion.
    pub fn base_class(&self) -> Option<ClassSpec> {
        match &self.mode {
            ClassMode::Builtin(Builtin::LinearOrders) => Some(ClassSpec::builtin(Builtin::PureSets)),
            ClassMode::Builtin(Builtin::OrderedGraphs) => Some(ClassSpec::builtin(Builtin::Graphs)),
            ClassMode::OrderExpansion { base, .. } => Some((**base).clone()),
            _ => None,
        }
    }

    /// Canonical members of each size `0..=max`.
    pub fn members_up_to(&self, max: usize) -> Vec<Vec<Structure>> {
        let filter = |s: &Structure| self.contains(s);
        enumerate_levels(&self.domain(), max, self.is_hereditary(), Some(&filter))
    }

    pub fn members(&self, n: usize) -> Vec<Structure> {
        self.members_up_to(n).pop().unwrap_or_default()
    }

    /// Checks that `self` is an order expansion of `base`: same signature
    /// plus an order symbol.
    pub fn check_expands(&self, base: &ClassSpec) -> Result<()> {
        if self.sig.order_index().is_none() {
            return Err(Error::NotAnOrderExpansion(format!("{} has no order symbol", self.label())));
        }
        if self.sig.without_order() != *base.sig {
            return Err(Error::NotAnOrderExpansion(format!(
                "{} minus `<` is not the signature of {}",
                self.label(),
                base.label()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<ClassSpec> {
        let repr: ClassSpecRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ClassSpec::from_repr(repr)
    }

    fn from_repr(repr: ClassSpecRepr) -> Result<ClassSpec> {
        let declared = match &repr.signature {
            Some(symbols) => Some(Arc::new(Signature::new(symbols.clone(), repr.order_symbol.as_deref())?)),
            None => None,
        };
        let spec = match repr.mode.as_str() {
            "builtin" => {
                let name = repr.builtin_name.ok_or_else(|| Error::Parse("builtin mode needs `builtin_name`".into()))?;
                ClassSpec::builtin_named(&name)?
            }
            "forbidden" => {
                let forbidden = repr.forbidden.ok_or_else(|| Error::Parse("forbidden mode needs `forbidden`".into()))?;
                let sig = match (&declared, forbidden.first()) {
                    (Some(s), _) => s.clone(),
                    (None, Some(f)) => f.signature().clone(),
                    (None, None) => return Err(Error::Parse("forbidden mode needs a signature".into())),
                };
                ClassSpec::forbidden(sig, forbidden)?
            }
            "order_expansion" => {
                let base = repr.base.ok_or_else(|| Error::Parse("order_expansion needs `base`".into()))?;
                let adm = repr
                    .admissibility
                    .ok_or_else(|| Error::Parse("order_expansion needs `admissibility`".into()))?;
                let adm = Admissibility::from_name(&adm)?;
                ClassSpec::order_expansion(ClassSpec::from_repr(*base)?, adm)?
            }
            other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
        };
        if let Some(sig) = declared {
            if *sig != *spec.sig {
                return Err(Error::SignatureMismatch(format!("declared signature does not match {}", spec.label())));
            }
        }
        Ok(spec)
    }

    fn to_repr(&self) -> ClassSpecRepr {
        let mut repr = ClassSpecRepr {
            signature: Some(self.sig.symbols().to_vec()),
            order_symbol: self.sig.order_symbol().map(str::to_owned),
            mode: String::new(),
            builtin_name: None,
            forbidden: None,
            base: None,
            admissibility: None,
        };
        match &self.mode {
            ClassMode::Builtin(b) => {
                repr.mode = "builtin".into();
                repr.builtin_name = Some(b.name().into());
            }
            ClassMode::Forbidden(f) => {
                repr.mode = "forbidden".into();
                repr.forbidden = Some(f.clone());
            }
            ClassMode::OrderExpansion { base, admissibility } => {
                repr.mode = "order_expansion".into();
                repr.base = Some(Box::new(base.to_repr()));
                repr.admissibility = Some(admissibility.name().into());
            }
        }
        repr
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassSpecRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<Vec<Symbol>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order_symbol: Option<String>,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    builtin_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forbidden: Option<Vec<Structure>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Box<ClassSpecRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    admissibility: Option<String>,
}

impl Serialize for ClassSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ClassSpec::from_repr(ClassSpecRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
