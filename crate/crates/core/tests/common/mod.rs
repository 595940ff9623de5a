//! Random inputs shared by the integration tests.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dlrewrite::datalog::{ABox, Fact};
use dlrewrite::logic::name;
use dlrewrite::ontology::{NormalAxiom, Role, TBox};

/// A normalized ELU-bool TBox over at most four concepts and two roles,
/// with role inclusions, transitivity, disjunction and `∃R.⊤`.
pub fn random_bool_tbox(rng: &mut ChaCha8Rng) -> TBox {
    let nc = rng.gen_range(2..=4);
    let nr = rng.gen_range(1..=2);
    let concepts: Vec<String> = (0..nc).map(|i| format!("C{i}")).collect();
    let roles: Vec<String> = (0..nr).map(|i| format!("R{i}")).collect();
    let pick_concept = |rng: &mut ChaCha8Rng| name(&concepts[rng.gen_range(0..nc)]);
    let pick_role = |rng: &mut ChaCha8Rng| {
        let r = Role::atomic(&roles[rng.gen_range(0..nr)]);
        if rng.gen_bool(0.3) {
            r.inv()
        } else {
            r
        }
    };
    let mut t = TBox::new();
    for _ in 0..rng.gen_range(1..=12) {
        let ax = match rng.gen_range(0..6) {
            0 | 1 => {
                let body: BTreeSet<_> = (0..rng.gen_range(0..=2)).map(|_| pick_concept(rng)).collect();
                let head: BTreeSet<_> = (0..rng.gen_range(1..=3)).map(|_| pick_concept(rng)).collect();
                let head = if rng.gen_bool(0.1) { BTreeSet::new() } else { head };
                if body.is_empty() && head.is_empty() {
                    continue;
                }
                NormalAxiom::Prop { body: body.into_iter().collect(), head: head.into_iter().collect() }
            }
            2 => NormalAxiom::ExistsLeft {
                role: pick_role(rng),
                filler: None,
                head: if rng.gen_bool(0.1) { None } else { Some(pick_concept(rng)) },
            },
            3 => NormalAxiom::ExistsRight {
                body: if rng.gen_bool(0.2) { None } else { Some(pick_concept(rng)) },
                role: pick_role(rng),
                filler: None,
            },
            4 => NormalAxiom::SubRole(pick_role(rng), pick_role(rng)),
            _ => NormalAxiom::Transitive(Role::atomic(&roles[rng.gen_range(0..nr)])),
        };
        t.add(ax.to_axiom());
    }
    t
}

/// One to six facts over the TBox signature and at most three individuals.
pub fn random_abox(rng: &mut ChaCha8Rng, t: &TBox) -> ABox {
    let inds = ["a", "b", "c"];
    let n = rng.gen_range(1..=3);
    let concepts: Vec<String> = t.atomic_concepts().iter().map(|c| c.to_string()).collect();
    let roles: Vec<String> = t.atomic_roles().iter().map(|r| r.to_string()).collect();
    let mut a = ABox::new();
    for _ in 0..rng.gen_range(1..=6) {
        let x = inds[rng.gen_range(0..n)];
        if !roles.is_empty() && (concepts.is_empty() || rng.gen_bool(0.5)) {
            let y = inds[rng.gen_range(0..n)];
            a.insert(Fact::new(&roles[rng.gen_range(0..roles.len())], &[x, y]));
        } else if !concepts.is_empty() {
            a.insert(Fact::new(&concepts[rng.gen_range(0..concepts.len())], &[x]));
        }
    }
    a
}
