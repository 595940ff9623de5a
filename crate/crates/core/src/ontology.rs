//! SHI concepts, roles, axioms and TBoxes; role-hierarchy closure, fragment
//! classification and structural normalization.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::logic::{name, Atom, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("axiom is not in normal form: {0}")]
    NotNormalized(String),
    #[error("malformed concept: {0}")]
    Malformed(String),
}

/// An atomic role or its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: Name,
    pub inverse: bool,
}

impl Role {
    pub fn atomic(n: &str) -> Role {
        Role { name: name(n), inverse: false }
    }

    pub fn inv(&self) -> Role {
        Role { name: self.name.clone(), inverse: !self.inverse }
    }

    /// The atom `R(s,t)`, written `R'(t,s)` when `R = R'⁻`.
    pub fn atom(&self, s: Term, t: Term) -> Atom {
        if self.inverse {
            Atom { pred: self.name.clone(), args: vec![t, s] }
        } else {
            Atom { pred: self.name.clone(), args: vec![s, t] }
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "Inv({})", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(Name),
    Not(Box<Concept>),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    Some(Role, Box<Concept>),
    All(Role, Box<Concept>),
    HasSelf(Role),
}

impl Concept {
    pub fn atomic(n: &str) -> Concept {
        Concept::Atomic(name(n))
    }

    pub fn negate(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn some(r: Role, c: Concept) -> Concept {
        Concept::Some(r, Box::new(c))
    }

    pub fn all(r: Role, c: Concept) -> Concept {
        Concept::All(r, Box::new(c))
    }

    fn is_simple(&self) -> bool {
        matches!(self, Concept::Atomic(_) | Concept::Top | Concept::Bottom)
    }

    fn visit(&self, f: &mut impl FnMut(&Concept)) {
        f(self);
        match self {
            Concept::Not(c) | Concept::Some(_, c) | Concept::All(_, c) => c.visit(f),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().for_each(|c| c.visit(f)),
            _ => {}
        }
    }

    /// Light algebraic simplification: flattening, unit laws, double negation.
    fn simplify(&self) -> Concept {
        match self {
            Concept::Not(c) => match c.simplify() {
                Concept::Not(d) => *d,
                Concept::Top => Concept::Bottom,
                Concept::Bottom => Concept::Top,
                d => Concept::negate(d),
            },
            Concept::And(cs) => {
                let mut items = Vec::new();
                for c in cs {
                    match c.simplify() {
                        Concept::Top => {}
                        Concept::Bottom => return Concept::Bottom,
                        Concept::And(inner) => items.extend(inner),
                        d => items.push(d),
                    }
                }
                items.dedup();
                match items.len() {
                    0 => Concept::Top,
                    1 => items.pop().expect("one item"),
                    _ => Concept::And(items),
                }
            }
            Concept::Or(cs) => {
                let mut items = Vec::new();
                for c in cs {
                    match c.simplify() {
                        Concept::Bottom => {}
                        Concept::Top => return Concept::Top,
                        Concept::Or(inner) => items.extend(inner),
                        d => items.push(d),
                    }
                }
                items.dedup();
                match items.len() {
                    0 => Concept::Bottom,
                    1 => items.pop().expect("one item"),
                    _ => Concept::Or(items),
                }
            }
            Concept::Some(r, c) => match c.simplify() {
                Concept::Bottom => Concept::Bottom,
                d => Concept::some(r.clone(), d),
            },
            Concept::All(r, c) => match c.simplify() {
                Concept::Top => Concept::Top,
                d => Concept::all(r.clone(), d),
            },
            c => c.clone(),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, op: &str, cs: &[Concept]) -> fmt::Result {
            write!(f, "{op}(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
        match self {
            Concept::Top => write!(f, "Top"),
            Concept::Bottom => write!(f, "Bottom"),
            Concept::Atomic(n) => write!(f, "{n}"),
            Concept::Not(c) => write!(f, "Not({c})"),
            Concept::And(cs) => list(f, "And", cs),
            Concept::Or(cs) => list(f, "Or", cs),
            Concept::Some(r, c) => write!(f, "Some({r}, {c})"),
            Concept::All(r, c) => write!(f, "All({r}, {c})"),
            Concept::HasSelf(r) => write!(f, "HasSelf({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClass(Concept, Concept),
    SubRole(Role, Role),
    Transitive(Role),
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClass(c, d) => write!(f, "SubClassOf({c}, {d})"),
            Axiom::SubRole(r, s) => write!(f, "SubRole({r}, {s})"),
            Axiom::Transitive(r) => write!(f, "Transitive({r})"),
        }
    }
}

/// The shapes of normalized axioms. `None` in a concept slot stands for ⊤
/// on the left of ⊑ and ⊥ on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalAxiom {
    /// `A1 ⊓ … ⊓ An ⊑ B1 ⊔ … ⊔ Bm`
    Prop {
        body: Vec<Name>,
        head: Vec<Name>,
    },
    /// `∃R.A ⊑ B`
    ExistsLeft {
        role: Role,
        filler: Option<Name>,
        head: Option<Name>,
    },
    /// `∃R.Self ⊑ B`
    SelfLeft {
        role: Role,
        head: Option<Name>,
    },
    /// `A ⊑ ∃R.B`
    ExistsRight {
        body: Option<Name>,
        role: Role,
        filler: Option<Name>,
    },
    /// `A ⊑ ∃R.Self`
    SelfRight {
        body: Option<Name>,
        role: Role,
    },
    SubRole(Role, Role),
    Transitive(Role),
}

fn conjuncts(c: &Concept) -> Vec<&Concept> {
    match c {
        Concept::And(cs) => cs.iter().flat_map(conjuncts).collect(),
        Concept::Top => Vec::new(),
        c => vec![c],
    }
}

fn disjuncts(c: &Concept) -> Vec<&Concept> {
    match c {
        Concept::Or(cs) => cs.iter().flat_map(disjuncts).collect(),
        Concept::Bottom => Vec::new(),
        c => vec![c],
    }
}

fn atom_or_top(c: &Concept) -> Option<Option<Name>> {
    match c {
        Concept::Top => Some(None),
        Concept::Atomic(n) => Some(Some(n.clone())),
        _ => None,
    }
}

fn atom_or_bottom(c: &Concept) -> Option<Option<Name>> {
    match c {
        Concept::Bottom => Some(None),
        Concept::Atomic(n) => Some(Some(n.clone())),
        _ => None,
    }
}

fn opt_concept(n: &Option<Name>, top: bool) -> Concept {
    match n {
        Some(n) => Concept::Atomic(n.clone()),
        None if top => Concept::Top,
        None => Concept::Bottom,
    }
}

impl Axiom {
    /// Recognizes the normal-form shapes.
    pub fn as_normal(&self) -> Option<NormalAxiom> {
        match self {
            Axiom::SubRole(r, s) => Some(NormalAxiom::SubRole(r.clone(), s.clone())),
            Axiom::Transitive(r) => Some(NormalAxiom::Transitive(r.clone())),
            Axiom::SubClass(lhs, rhs) => {
                match (lhs, rhs) {
                    (Concept::Some(r, f), _) => {
                        if let (Some(filler), Some(head)) = (atom_or_top(f), atom_or_bottom(rhs)) {
                            return Some(NormalAxiom::ExistsLeft { role: r.clone(), filler, head });
                        }
                        return None;
                    }
                    (Concept::HasSelf(r), _) => {
                        return atom_or_bottom(rhs).map(|head| NormalAxiom::SelfLeft { role: r.clone(), head });
                    }
                    (_, Concept::Some(r, f)) => {
                        if let (Some(body), Some(filler)) = (atom_or_top(lhs), atom_or_top(f)) {
                            return Some(NormalAxiom::ExistsRight { body, role: r.clone(), filler });
                        }
                        return None;
                    }
                    (_, Concept::HasSelf(r)) => {
                        return atom_or_top(lhs).map(|body| NormalAxiom::SelfRight { body, role: r.clone() });
                    }
                    _ => {}
                }
                let mut body = Vec::new();
                for c in conjuncts(lhs) {
                    match c {
                        Concept::Atomic(n) => body.push(n.clone()),
                        _ => return None,
                    }
                }
                let mut head = Vec::new();
                for c in disjuncts(rhs) {
                    match c {
                        Concept::Atomic(n) => head.push(n.clone()),
                        _ => return None,
                    }
                }
                Some(NormalAxiom::Prop { body, head })
            }
        }
    }
}

impl NormalAxiom {
    pub fn to_axiom(&self) -> Axiom {
        let and = |ns: &[Name]| match ns.len() {
            0 => Concept::Top,
            1 => Concept::Atomic(ns[0].clone()),
            _ => Concept::And(ns.iter().map(|n| Concept::Atomic(n.clone())).collect()),
        };
        let or = |ns: &[Name]| match ns.len() {
            0 => Concept::Bottom,
            1 => Concept::Atomic(ns[0].clone()),
            _ => Concept::Or(ns.iter().map(|n| Concept::Atomic(n.clone())).collect()),
        };
        match self {
            NormalAxiom::Prop { body, head } => Axiom::SubClass(and(body), or(head)),
            NormalAxiom::ExistsLeft { role, filler, head } => {
                Axiom::SubClass(Concept::some(role.clone(), opt_concept(filler, true)), opt_concept(head, false))
            }
            NormalAxiom::SelfLeft { role, head } => {
                Axiom::SubClass(Concept::HasSelf(role.clone()), opt_concept(head, false))
            }
            NormalAxiom::ExistsRight { body, role, filler } => {
                Axiom::SubClass(opt_concept(body, true), Concept::some(role.clone(), opt_concept(filler, true)))
            }
            NormalAxiom::SelfRight { body, role } => {
                Axiom::SubClass(opt_concept(body, true), Concept::HasSelf(role.clone()))
            }
            NormalAxiom::SubRole(r, s) => Axiom::SubRole(r.clone(), s.clone()),
            NormalAxiom::Transitive(r) => Axiom::Transitive(r.clone()),
        }
    }
}

/// Reflexive-transitive closure of the role inclusions, closed under inverses.
#[derive(Debug, Clone, Default)]
pub struct RoleHierarchy {
    supers: BTreeMap<Role, BTreeSet<Role>>,
}

impl RoleHierarchy {
    pub fn new<'a>(inclusions: impl IntoIterator<Item = (&'a Role, &'a Role)>) -> RoleHierarchy {
        let mut edges: BTreeMap<Role, BTreeSet<Role>> = BTreeMap::new();
        for (r, s) in inclusions {
            edges.entry(r.clone()).or_default().insert(s.clone());
            edges.entry(r.inv()).or_default().insert(s.inv());
        }
        let mut supers = BTreeMap::new();
        for start in edges.keys() {
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::from([start.clone()]);
            while let Some(r) = queue.pop_front() {
                if !seen.insert(r.clone()) {
                    continue;
                }
                if let Some(next) = edges.get(&r) {
                    queue.extend(next.iter().cloned());
                }
            }
            supers.insert(start.clone(), seen);
        }
        RoleHierarchy { supers }
    }

    pub fn subsumed(&self, r: &Role, s: &Role) -> bool {
        r == s || self.supers.get(r).is_some_and(|sup| sup.contains(s))
    }
}

/// Syntactic fragment flags of a TBox.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Fragment {
    pub transitivity: bool,
    pub role_inclusions: bool,
    pub inverses: bool,
    pub self_concepts: bool,
    pub bottom: bool,
    pub negation: bool,
    pub universal: bool,
    /// Some `∃R.C` has `C ≠ ⊤`.
    pub qualified_existential: bool,
}

impl Fragment {
    pub fn is_alchi(&self) -> bool {
        !self.transitivity
    }

    pub fn is_bool(&self) -> bool {
        !self.universal && !self.qualified_existential
    }

    pub fn is_elu(&self) -> bool {
        self.is_alchi()
            && !self.role_inclusions
            && !self.inverses
            && !self.self_concepts
            && !self.bottom
            && !self.negation
            && !self.universal
    }

    /// Most specific label among ELU, ELU-bool, ALCHI and SHI.
    pub fn label(&self) -> &'static str {
        if self.is_elu() {
            "ELU"
        } else if self.is_bool() {
            "ELU-bool"
        } else if self.is_alchi() {
            "ALCHI"
        } else {
            "SHI"
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    axioms: Vec<Axiom>,
}

impl TBox {
    pub fn new() -> TBox {
        TBox::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> TBox {
        let mut t = TBox::new();
        for a in axioms {
            t.add(a);
        }
        t
    }

    /// Adds an axiom unless already present.
    pub fn add(&mut self, a: Axiom) {
        if !self.axioms.contains(&a) {
            self.axioms.push(a);
        }
    }

    /// `C ≡ D` as the two inclusions.
    pub fn add_equivalence(&mut self, c: Concept, d: Concept) {
        self.add(Axiom::SubClass(c.clone(), d.clone()));
        self.add(Axiom::SubClass(d, c));
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.axioms.iter().flat_map(|a| match a {
            Axiom::SubClass(c, d) => vec![c, d],
            _ => vec![],
        })
    }

    fn roles(&self) -> Vec<Role> {
        let mut out = Vec::new();
        for a in &self.axioms {
            match a {
                Axiom::SubRole(r, s) => {
                    out.push(r.clone());
                    out.push(s.clone());
                }
                Axiom::Transitive(r) => out.push(r.clone()),
                Axiom::SubClass(c, d) => {
                    for x in [c, d] {
                        x.visit(&mut |k| match k {
                            Concept::Some(r, _) | Concept::All(r, _) | Concept::HasSelf(r) => out.push(r.clone()),
                            _ => {}
                        });
                    }
                }
            }
        }
        out
    }

    pub fn atomic_concepts(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for c in self.concepts() {
            c.visit(&mut |k| {
                if let Concept::Atomic(n) = k {
                    out.insert(n.clone());
                }
            });
        }
        out
    }

    pub fn atomic_roles(&self) -> BTreeSet<Name> {
        self.roles().into_iter().map(|r| r.name).collect()
    }

    pub fn role_hierarchy(&self) -> RoleHierarchy {
        RoleHierarchy::new(self.axioms.iter().filter_map(|a| match a {
            Axiom::SubRole(r, s) => Some((r, s)),
            _ => None,
        }))
    }

    /// `R ⊑*_T S`.
    pub fn role_subsumed(&self, r: &Role, s: &Role) -> bool {
        self.role_hierarchy().subsumed(r, s)
    }

    /// Atomic roles `R` with `Tra(R)` or `Tra(R⁻)` in the TBox.
    pub fn transitive_role_names(&self) -> BTreeSet<Name> {
        self.axioms
            .iter()
            .filter_map(|a| match a {
                Axiom::Transitive(r) => Some(r.name.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn is_transitive(&self, r: &Role) -> bool {
        self.transitive_role_names().contains(&r.name)
    }

    pub fn is_normalized(&self) -> bool {
        self.axioms.iter().all(|a| a.as_normal().is_some())
    }

    pub fn normal_axioms(&self) -> Result<Vec<NormalAxiom>, OntologyError> {
        self.axioms.iter().map(|a| a.as_normal().ok_or_else(|| OntologyError::NotNormalized(a.to_string()))).collect()
    }

    pub fn classify_fragment(&self) -> Fragment {
        let mut fr = Fragment::default();
        for a in &self.axioms {
            match a {
                Axiom::Transitive(r) => {
                    fr.transitivity = true;
                    fr.inverses |= r.inverse;
                }
                Axiom::SubRole(r, s) => {
                    fr.role_inclusions = true;
                    fr.inverses |= r.inverse || s.inverse;
                }
                Axiom::SubClass(c, d) => {
                    for x in [c, d] {
                        x.visit(&mut |k| match k {
                            Concept::Bottom => fr.bottom = true,
                            Concept::Not(_) => fr.negation = true,
                            Concept::All(r, _) => {
                                fr.universal = true;
                                fr.inverses |= r.inverse;
                            }
                            Concept::Some(r, f) => {
                                fr.inverses |= r.inverse;
                                if **f != Concept::Top {
                                    fr.qualified_existential = true;
                                }
                            }
                            Concept::HasSelf(r) => {
                                fr.self_concepts = true;
                                fr.inverses |= r.inverse;
                            }
                            _ => {}
                        });
                    }
                }
            }
        }
        fr
    }
}

impl fmt::Display for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Structural transformation into normal form. Fresh concepts `X1, X2, …`
/// are introduced in axiom order, one per (subconcept, polarity).
pub fn normalize(t: &TBox) -> TBox {
    let mut n = Normalizer {
        out: TBox::new(),
        names: HashMap::new(),
        used: t.atomic_concepts().into_iter().map(|n| n.to_string()).collect(),
        counter: 0,
    };
    for a in t.axioms() {
        match a {
            Axiom::SubClass(c, d) if a.as_normal().is_none() => n.process(c.clone(), d.clone()),
            _ => n.out.add(a.clone()),
        }
    }
    n.out
}

struct Normalizer {
    out: TBox,
    names: HashMap<(Concept, bool), Name>,
    used: HashSet<String>,
    counter: usize,
}

impl Normalizer {
    fn fresh(&mut self) -> Name {
        loop {
            self.counter += 1;
            let candidate = format!("X{}", self.counter);
            if self.used.insert(candidate.clone()) {
                return name(&candidate);
            }
        }
    }

    /// Name `X` with `c ⊑ X` (for negative occurrences).
    fn negative_name(&mut self, c: &Concept) -> Concept {
        if let Some(n) = self.names.get(&(c.clone(), false)) {
            return Concept::Atomic(n.clone());
        }
        let x = self.fresh();
        self.names.insert((c.clone(), false), x.clone());
        self.process(c.clone(), Concept::Atomic(x.clone()));
        Concept::Atomic(x)
    }

    /// Name `X` with `X ⊑ c` (for positive occurrences).
    fn positive_name(&mut self, c: &Concept) -> Concept {
        if let Some(n) = self.names.get(&(c.clone(), true)) {
            return Concept::Atomic(n.clone());
        }
        let x = self.fresh();
        self.names.insert((c.clone(), true), x.clone());
        self.process(Concept::Atomic(x.clone()), c.clone());
        Concept::Atomic(x)
    }

    fn emit(&mut self, lhs: Concept, rhs: Concept) {
        let a = Axiom::SubClass(lhs, rhs);
        debug_assert!(a.as_normal().is_some(), "emitted non-normal axiom {a}");
        self.out.add(a);
    }

    fn process(&mut self, lhs: Concept, rhs: Concept) {
        let original = Axiom::SubClass(lhs.clone(), rhs.clone());
        if original.as_normal().is_some() {
            self.out.add(original);
            return;
        }
        let lhs = lhs.simplify();
        let rhs = rhs.simplify();
        let mut conj: Vec<Concept> = conjuncts(&lhs).into_iter().cloned().collect();
        let mut disj: Vec<Concept> = disjuncts(&rhs).into_iter().cloned().collect();

        // move negations and universals across ⊑
        loop {
            let mut changed = false;
            let mut next_conj = Vec::new();
            for c in conj.drain(..) {
                match c {
                    Concept::Not(e) => {
                        disj.push(*e);
                        changed = true;
                    }
                    Concept::All(r, e) => {
                        disj.push(Concept::some(r, Concept::negate(*e)).simplify());
                        changed = true;
                    }
                    Concept::And(cs) => {
                        next_conj.extend(cs);
                        changed = true;
                    }
                    Concept::Top => changed = true,
                    c => next_conj.push(c),
                }
            }
            conj = next_conj;
            let mut next_disj = Vec::new();
            for d in disj.drain(..) {
                match d {
                    Concept::Not(e) => {
                        conj.push(*e);
                        changed = true;
                    }
                    Concept::Or(ds) => {
                        next_disj.extend(ds);
                        changed = true;
                    }
                    Concept::Bottom => changed = true,
                    d => next_disj.push(d),
                }
            }
            disj = next_disj;
            if !changed {
                break;
            }
        }
        if conj.contains(&Concept::Bottom) || disj.contains(&Concept::Top) {
            return;
        }
        let and = |cs: &[Concept]| match cs.len() {
            0 => Concept::Top,
            1 => cs[0].clone(),
            _ => Concept::And(cs.to_vec()),
        };
        let or = |ds: &[Concept]| match ds.len() {
            0 => Concept::Bottom,
            1 => ds[0].clone(),
            _ => Concept::Or(ds.to_vec()),
        };

        if disj.len() == 1 {
            match &disj[0] {
                Concept::And(items) => {
                    for item in items.clone() {
                        self.process(and(&conj), item);
                    }
                    return;
                }
                Concept::All(r, e) => {
                    self.process(Concept::some(r.inv(), and(&conj)), (**e).clone());
                    return;
                }
                _ => {}
            }
        }
        if conj.len() == 1 {
            if let Concept::Or(items) = &conj[0] {
                for item in items.clone() {
                    self.process(item, or(&disj));
                }
                return;
            }
        }

        let rhs_simple = disj.len() <= 1 && disj.iter().all(Concept::is_simple);
        let lhs_simple = conj.len() <= 1 && conj.iter().all(Concept::is_simple);

        if conj.len() == 1 {
            match &conj[0] {
                Concept::Some(r, e) => {
                    let filler =
                        if e.is_simple() && **e != Concept::Bottom { (**e).clone() } else { self.negative_name(e) };
                    let head = if rhs_simple { or(&disj) } else { self.positive_name(&or(&disj)) };
                    self.emit(Concept::some(r.clone(), filler), head);
                    return;
                }
                Concept::HasSelf(r) => {
                    let head = if rhs_simple { or(&disj) } else { self.positive_name(&or(&disj)) };
                    self.emit(Concept::HasSelf(r.clone()), head);
                    return;
                }
                _ => {}
            }
        }
        if disj.len() == 1 {
            match &disj[0] {
                Concept::Some(r, e) => {
                    let filler = if e.is_simple() { (**e).clone() } else { self.positive_name(e) };
                    let body = if lhs_simple { and(&conj) } else { self.negative_name(&and(&conj)) };
                    self.emit(body, Concept::some(r.clone(), filler));
                    return;
                }
                Concept::HasSelf(r) => {
                    let body = if lhs_simple { and(&conj) } else { self.negative_name(&and(&conj)) };
                    self.emit(body, Concept::HasSelf(r.clone()));
                    return;
                }
                _ => {}
            }
        }

        let body: Vec<Concept> =
            conj.iter().map(|c| if c.is_simple() { c.clone() } else { self.negative_name(c) }).collect();
        let head: Vec<Concept> =
            disj.iter().map(|d| if d.is_simple() { d.clone() } else { self.positive_name(d) }).collect();
        self.emit(and(&body), or(&head));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: &str) -> Concept {
        Concept::atomic(n)
    }

    fn r(n: &str) -> Role {
        Role::atomic(n)
    }

    pub(crate) fn university() -> TBox {
        let takes = r("takes");
        TBox::from_axioms([
            Axiom::SubClass(a("Student"), Concept::Or(vec![a("Grad"), a("Undergrad")])),
            Axiom::SubClass(a("Course"), Concept::Or(vec![a("GradCo"), a("UndergradCo")])),
            Axiom::SubClass(a("PHD"), Concept::some(takes.clone(), a("PHDco"))),
            Axiom::SubClass(a("PHDco"), a("GradCo")),
            Axiom::SubClass(Concept::some(takes.clone(), a("GradCo")), a("Grad")),
            Axiom::SubClass(Concept::And(vec![a("Undergrad"), Concept::some(takes, a("GradCo"))]), Concept::Bottom),
        ])
    }

    fn self_loop() -> TBox {
        TBox::from_axioms([
            Axiom::SubClass(a("A"), Concept::some(r("S"), a("B"))),
            Axiom::SubRole(r("S"), r("R")),
            Axiom::SubRole(r("S"), r("R").inv()),
            Axiom::Transitive(r("R")),
        ])
    }

    #[test]
    fn inverse_is_an_involution() {
        let s = r("S");
        assert_eq!(s.inv().inv(), s);
    }

    #[test]
    fn normalize_splits_only_the_disjointness_axiom() {
        let t = university();
        let n = normalize(&t);
        let mut expected: Vec<Axiom> = t.axioms()[..5].to_vec();
        expected.push(Axiom::SubClass(Concept::some(r("takes"), a("GradCo")), a("X1")));
        expected.push(Axiom::SubClass(Concept::And(vec![a("Undergrad"), a("X1")]), Concept::Bottom));
        assert_eq!(n.axioms(), &expected[..]);
        assert!(n.is_normalized());
    }

    #[test]
    fn normalize_empty_and_universal() {
        assert!(normalize(&TBox::new()).is_empty());
        let t = TBox::from_axioms([Axiom::SubClass(a("A"), Concept::all(r("R"), a("B")))]);
        let n = normalize(&t);
        assert_eq!(n.axioms(), &[Axiom::SubClass(Concept::some(r("R").inv(), a("A")), a("B"))]);
    }

    #[test]
    fn normalize_names_nested_fillers() {
        let t = TBox::from_axioms([Axiom::SubClass(
            a("A"),
            Concept::some(r("R"), Concept::And(vec![a("B"), Concept::some(r("S"), a("C"))])),
        )]);
        let n = normalize(&t);
        assert!(n.is_normalized());
        assert_eq!(normalize(&n), n);
        // A ⊑ ∃R.X1, X1 ⊑ B, X1 ⊑ ∃S.C
        assert_eq!(n.len(), 3);
    }

    #[test]
    fn role_subsumption_examples() {
        let t = TBox::from_axioms([Axiom::SubRole(r("S"), r("R"))]);
        assert!(t.role_subsumed(&r("S"), &r("R")));
        assert!(t.role_subsumed(&r("S").inv(), &r("R").inv()));
        assert!(!t.role_subsumed(&r("R"), &r("S")));
        let t = self_loop();
        assert!(t.role_subsumed(&r("S"), &r("R")));
        assert!(t.role_subsumed(&r("S"), &r("R").inv()));
    }

    #[test]
    fn fragment_labels() {
        let fr = university().classify_fragment();
        assert_eq!(fr.label(), "ALCHI");
        assert!(!fr.is_bool());
        let fr = self_loop().classify_fragment();
        assert_eq!(fr.label(), "SHI");
        assert!(fr.transitivity);
        let bool_t = TBox::from_axioms([
            Axiom::SubClass(a("A"), Concept::some(r("R"), Concept::Top)),
            Axiom::Transitive(r("R")),
        ]);
        assert_eq!(bool_t.classify_fragment().label(), "ELU-bool");
    }

    fn arb_concept() -> impl Strategy<Value = Concept> {
        let leaf = prop_oneof![
            Just(Concept::Top),
            Just(Concept::Bottom),
            prop_oneof![Just("A"), Just("B"), Just("C")].prop_map(Concept::atomic),
            prop_oneof![Just("R"), Just("S")].prop_map(|n| Concept::HasSelf(Role::atomic(n))),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            let role = (prop_oneof![Just("R"), Just("S")], any::<bool>())
                .prop_map(|(n, i)| Role { name: name(n), inverse: i });
            prop_oneof![
                inner.clone().prop_map(Concept::negate),
                prop::collection::vec(inner.clone(), 2..3).prop_map(Concept::And),
                prop::collection::vec(inner.clone(), 2..3).prop_map(Concept::Or),
                (role.clone(), inner.clone()).prop_map(|(r, c)| Concept::some(r, c)),
                (role, inner).prop_map(|(r, c)| Concept::all(r, c)),
            ]
        })
    }

    proptest! {
        #[test]
        fn normalize_output_is_normal_and_idempotent(c in arb_concept(), d in arb_concept()) {
            let t = TBox::from_axioms([Axiom::SubClass(c, d)]);
            let n = normalize(&t);
            prop_assert!(n.is_normalized(), "{}", n);
            prop_assert_eq!(normalize(&n), n);
        }

        #[test]
        fn role_hierarchy_matches_brute_force(
            edges in prop::collection::vec((0u8..3, any::<bool>(), 0u8..3, any::<bool>()), 0..5)
        ) {
            let role = |i: u8, inv: bool| Role { name: name(&format!("R{i}")), inverse: inv };
            let t = TBox::from_axioms(edges.iter().map(|(a, ai, b, bi)| Axiom::SubRole(role(*a, *ai), role(*b, *bi))));
            let all: Vec<Role> = (0..3).flat_map(|i| [role(i, false), role(i, true)]).collect();
            // Floyd–Warshall style closure
            let idx = |r: &Role| all.iter().position(|x| x == r).unwrap();
            let mut m = vec![vec![false; all.len()]; all.len()];
            for (i, row) in m.iter_mut().enumerate() { row[i] = true; }
            for (a, ai, b, bi) in &edges {
                let (x, y) = (role(*a, *ai), role(*b, *bi));
                m[idx(&x)][idx(&y)] = true;
                m[idx(&x.inv())][idx(&y.inv())] = true;
            }
            for k in 0..all.len() { for i in 0..all.len() { for j in 0..all.len() {
                if m[i][k] && m[k][j] { m[i][j] = true; }
            }}}
            for x in &all { for y in &all {
                prop_assert_eq!(t.role_subsumed(x, y), m[idx(x)][idx(y)]);
            }}
        }
    }
}
