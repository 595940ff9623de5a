//! Packaged example ontologies, clause sets, ABoxes and programs.

use crate::datalog::{ABox, Fact, Program};
use crate::logic::Clause;
use crate::ontology::TBox;
use crate::syntax::{parse_abox, parse_tbox};

pub const UNIVERSITY_TBOX: &str = include_str!("../fixtures/university.tbox");
pub const UNIVERSITY_ABOX: &str = include_str!("../fixtures/university.abox");
pub const TRANSITIVITY_TBOX: &str = include_str!("../fixtures/transitivity.tbox");
pub const PARITY_TBOX: &str = include_str!("../fixtures/parity.tbox");
pub const CHAIN_TBOX: &str = include_str!("../fixtures/chain.tbox");
pub const CONDENSATION_TBOX: &str = include_str!("../fixtures/condensation.tbox");
pub const COLORING_TBOX: &str = include_str!("../fixtures/coloring.tbox");
pub const K4_ABOX: &str = include_str!("../fixtures/k4.abox");
pub const TRIANGLE_ABOX: &str = include_str!("../fixtures/triangle.abox");
pub const PARITY_REWRITING: &str = include_str!("../fixtures/parity_rewriting.dl");

fn tbox(text: &str) -> TBox {
    parse_tbox(text).expect("packaged TBox parses")
}

fn clauses(v: &[&str]) -> Vec<Clause> {
    v.iter().map(|s| Clause::parse(s).expect("packaged clause parses")).collect()
}

pub fn university_tbox() -> TBox {
    tbox(UNIVERSITY_TBOX)
}

pub fn transitivity_tbox() -> TBox {
    tbox(TRANSITIVITY_TBOX)
}

pub fn parity_tbox() -> TBox {
    tbox(PARITY_TBOX)
}

pub fn chain_tbox() -> TBox {
    tbox(CHAIN_TBOX)
}

pub fn condensation_tbox() -> TBox {
    tbox(CONDENSATION_TBOX)
}

pub fn coloring_tbox() -> TBox {
    tbox(COLORING_TBOX)
}

/// C1 to C6, the disjunctive program of the university TBox.
pub fn university_dd() -> Vec<Clause> {
    clauses(&[
        "~Student(?x) | Grad(?x) | Undergrad(?x)",
        "~Course(?x) | GradCo(?x) | UndergradCo(?x)",
        "~PHD(?x) | Grad(?x)",
        "~PHDco(?x) | GradCo(?x)",
        "~takes(?x,?y) | ~GradCo(?y) | Grad(?x)",
        "~Undergrad(?x) | ~takes(?x,?y) | ~GradCo(?y)",
    ])
}

/// Clause (1), derived on the way to the Horn program.
pub fn university_clause_1() -> Clause {
    clauses(&["~takes(?x,?y) | ~Course(?y) | Grad(?x) | UndergradCo(?y)"]).remove(0)
}

/// Clause (2), in the Horn program.
pub fn university_clause_2() -> Clause {
    clauses(&["~takes(?x,?y) | ~Undergrad(?x) | ~Course(?y) | UndergradCo(?y)"]).remove(0)
}

/// Clause (3) as listed for the Horn program.
pub fn university_clause_3() -> Clause {
    clauses(&["~takes(?x,?y) | ~Student(?x) | ~GradCo(?y) | Grad(?x)"]).remove(0)
}

pub fn university_abox() -> ABox {
    parse_abox(UNIVERSITY_ABOX).expect("packaged ABox parses")
}

pub fn parity_program() -> Vec<Clause> {
    clauses(&["G(?x) | B(?x)", "B(?x1) | ~E(?x1,?x0) | ~G(?x0)", "G(?x1) | ~E(?x1,?x0) | ~B(?x0)"])
}

/// `G(x_n) ∨ ¬E(x_n,x_0) ∨ ⋁ ¬E(x_i,x_{i-1})`.
pub fn parity_horn(n: usize) -> Clause {
    let mut s = format!("G(?x{n}) | ~E(?x{n},?x0)");
    for i in 1..=n {
        s += &format!(" | ~E(?x{i},?x{})", i - 1);
    }
    Clause::parse(&s).expect("well-formed")
}

/// `G(x_n) ∨ ⋁ ¬E(x_i,x_{i-1}) ∨ B(x_0)`.
pub fn parity_chain(n: usize) -> Clause {
    let mut s = format!("G(?x{n}) | B(?x0)");
    for i in 1..=n {
        s += &format!(" | ~E(?x{i},?x{})", i - 1);
    }
    Clause::parse(&s).expect("well-formed")
}

pub fn chain_program() -> Vec<Clause> {
    clauses(&["B1(?x0) | B2(?x0) | ~A(?x0)", "A(?x1) | ~E(?x1,?x0) | ~B1(?x0)", "A(?x1) | ~E(?x1,?x0) | ~B2(?x0)"])
}

/// `A(x_n) ∨ ⋁ ¬E(x_i,x_{i-1}) ∨ ¬A(x_0)`.
pub fn chain_clause(n: usize) -> Clause {
    let mut s = format!("A(?x{n}) | ~A(?x0)");
    for i in 1..=n {
        s += &format!(" | ~E(?x{i},?x{})", i - 1);
    }
    Clause::parse(&s).expect("well-formed")
}

pub fn condensation_program() -> Vec<Clause> {
    clauses(&["~R(?x,?y) | A(?x)", "~R(?x,?y) | B(?x)", "~A(?x) | ~B(?x) | C(?x) | D(?x)"])
}

/// The resolvent with two role atoms, and its condensation.
pub fn condensation_pair() -> (Clause, Clause) {
    let c = clauses(&["~R(?x,?y1) | ~R(?x,?y2) | C(?x) | D(?x)", "~R(?x,?y) | C(?x) | D(?x)"]);
    (c[0].clone(), c[1].clone())
}

pub fn parity_rewriting() -> Program {
    Program::parse(PARITY_REWRITING).expect("packaged program parses")
}

pub fn k4_abox() -> ABox {
    parse_abox(K4_ABOX).expect("packaged ABox parses")
}

pub fn triangle_abox() -> ABox {
    parse_abox(TRIANGLE_ABOX).expect("packaged ABox parses")
}

/// Undirected graph on `a1..an` attached to the query individual `v`.
pub fn coloring_abox(n: usize, edges: &[(usize, usize)]) -> ABox {
    let a = |i: usize| format!("a{i}");
    let mut out = ABox::new();
    for i in 1..=n {
        out.insert(Fact::new("V", &[&a(i)]));
        out.insert(Fact::new("vertex", &["v", &a(i)]));
    }
    for &(i, j) in edges {
        out.insert(Fact::new("edge", &[&a(i), &a(j)]));
        out.insert(Fact::new("edge", &[&a(j), &a(i)]));
    }
    out
}

/// Directed `E` edges over `v0..v(n-1)`.
pub fn digraph_abox(edges: &[(usize, usize)]) -> ABox {
    edges.iter().map(|(i, j)| Fact::new("E", &[&format!("v{i}"), &format!("v{j}")])).collect()
}
