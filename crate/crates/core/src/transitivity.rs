//! Transitivity elimination: the transitivity-free TBox Ω together with the
//! datalog role program Ξ for role inclusions and transitivity.

use std::collections::BTreeSet;

use crate::logic::{Clause, Literal, Name, Term};
use crate::ontology::{Axiom, Concept, NormalAxiom, OntologyError, Role, TBox};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivitySplit {
    pub omega: TBox,
    /// Function-free Horn clauses, one per RIA and per transitivity axiom.
    pub xi: Vec<Clause>,
}

fn role_names(r: &Role) -> String {
    if r.inverse {
        format!("INV_{}", r.name)
    } else {
        r.name.to_string()
    }
}

fn transitive_roles(t: &TBox) -> Vec<Role> {
    t.transitive_role_names()
        .into_iter()
        .flat_map(|n| {
            let r = Role { name: n, inverse: false };
            [r.clone(), r.inv()]
        })
        .collect()
}

/// Θ_T extended with the `B^R` axioms for each `∃S.A ⊑ B` and transitive
/// `R ⊑* S`. ELU-bool inputs get Θ_T unchanged.
pub fn upsilon(t: &TBox) -> Result<TBox, OntologyError> {
    let normal = t.normal_axioms()?;
    let mut out = TBox::from_axioms(t.axioms().iter().filter(|a| !matches!(a, Axiom::Transitive(_))).cloned());
    if t.classify_fragment().is_bool() {
        return Ok(out);
    }
    let hierarchy = t.role_hierarchy();
    let mut used: BTreeSet<String> = t.atomic_concepts().iter().map(|n| n.to_string()).collect();
    let mut fresh = std::collections::BTreeMap::new();
    let transitive = transitive_roles(t);
    for ax in &normal {
        let NormalAxiom::ExistsLeft { role: s, filler, head } = ax else {
            continue;
        };
        for r in &transitive {
            if !hierarchy.subsumed(r, s) {
                continue;
            }
            let key = (head.clone(), r.clone());
            let br = fresh
                .entry(key)
                .or_insert_with(|| {
                    let b = head.as_deref().unwrap_or("Bottom");
                    let base = format!("Q__{b}__{}", role_names(r));
                    let mut candidate = base.clone();
                    let mut k = 1;
                    while used.contains(&candidate) {
                        k += 1;
                        candidate = format!("{base}_{k}");
                    }
                    used.insert(candidate.clone());
                    crate::logic::name(&candidate)
                })
                .clone();
            let filler = NormalAxiom::ExistsLeft { role: r.clone(), filler: filler.clone(), head: Some(br.clone()) };
            let step = NormalAxiom::ExistsLeft { role: r.clone(), filler: Some(br.clone()), head: Some(br.clone()) };
            let down = NormalAxiom::Prop { body: vec![br.clone()], head: head.iter().cloned().collect() };
            for n in [filler, step, down] {
                out.add(n.to_axiom());
            }
        }
    }
    Ok(out)
}

/// Ω_T = Υ_T plus `A ⊑ ∃R.Self` axioms (when `with_self`), and Ξ_T.
pub fn split_with(t: &TBox, with_self: bool) -> Result<TransitivitySplit, OntologyError> {
    let mut omega = upsilon(t)?;
    let hierarchy = t.role_hierarchy();
    if with_self {
        let normal = t.normal_axioms()?;
        for name in t.transitive_role_names() {
            let r = Role { name: name.clone(), inverse: false };
            for ax in &normal {
                let NormalAxiom::ExistsRight { body, role: s, .. } = ax else {
                    continue;
                };
                if hierarchy.subsumed(s, &r) && hierarchy.subsumed(s, &r.inv()) {
                    let a = body.clone().map(Concept::Atomic).unwrap_or(Concept::Top);
                    omega.add(Axiom::SubClass(a, Concept::HasSelf(r.clone())));
                }
            }
        }
    }
    let mut xi = Vec::new();
    let (x, y, z) = (Term::var(0), Term::var(1), Term::var(2));
    for ax in t.axioms() {
        let clause = match ax {
            Axiom::SubRole(r, s) => Clause::new(vec![
                Literal::neg(r.atom(x.clone(), y.clone())),
                Literal::pos(s.atom(x.clone(), y.clone())),
            ]),
            Axiom::Transitive(r) => {
                let r = Role { name: r.name.clone(), inverse: false };
                Clause::new(vec![
                    Literal::neg(r.atom(x.clone(), y.clone())),
                    Literal::neg(r.atom(y.clone(), z.clone())),
                    Literal::pos(r.atom(x.clone(), z.clone())),
                ])
            }
            Axiom::SubClass(..) => continue,
        }
        .expect("function-free role clause");
        if !xi.contains(&clause) {
            xi.push(clause);
        }
    }
    Ok(TransitivitySplit { omega, xi })
}

pub fn split(t: &TBox) -> Result<TransitivitySplit, OntologyError> {
    split_with(t, true)
}

/// Fresh concept names introduced by [`upsilon`].
pub fn is_transitivity_name(n: &Name) -> bool {
    n.starts_with("Q__")
}
