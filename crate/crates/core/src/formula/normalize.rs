use std::collections::{BTreeSet, HashMap};

use super::{Formula, Term};

/// Renames bound variables apart, replaces predicate arguments that are not distinct
/// variables by fresh existentially bound ones, rewrites `forall` as `not exists not`,
/// and flattens nested conjunctions and disjunctions.
pub fn normalize(phi: &Formula) -> Formula {
    let mut names = BTreeSet::new();
    all_names(phi, &mut names);
    let mut n = Normalizer {
        used: names,
        claimed: phi.free_vars(),
    };
    n.walk(phi, &HashMap::new())
}

fn all_names(phi: &Formula, out: &mut BTreeSet<String>) {
    let add = |t: &Term, out: &mut BTreeSet<String>| out.extend(t.vars().cloned());
    match phi {
        Formula::True | Formula::False => {}
        Formula::Eq(l, r)
        | Formula::Geq(l, r)
        | Formula::Shift { x: l, y: r, .. }
        | Formula::Vq { x: l, y: r } => {
            add(l, out);
            add(r, out);
        }
        Formula::Power { x, .. } => add(x, out),
        Formula::Not(f) => all_names(f, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| all_names(f, out)),
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            out.insert(v.clone());
            all_names(f, out);
        }
    }
}

struct Normalizer {
    /// Every name occurring anywhere, plus every name handed out.
    used: BTreeSet<String>,
    /// Free names and names already used by a binder.
    claimed: BTreeSet<String>,
}

impl Normalizer {
    fn fresh(&mut self, base: &str) -> String {
        let name = (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !self.used.contains(n))
            .unwrap();
        self.used.insert(name.clone());
        self.claimed.insert(name.clone());
        name
    }

    fn binder(&mut self, v: &str) -> String {
        if self.claimed.contains(v) {
            self.fresh(v)
        } else {
            self.claimed.insert(v.to_string());
            v.to_string()
        }
    }

    fn walk(&mut self, phi: &Formula, env: &HashMap<String, String>) -> Formula {
        let rn =
            |t: &Term| t.rename(&|v: &str| env.get(v).cloned().unwrap_or_else(|| v.to_string()));
        match phi {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Eq(l, r) => Formula::Eq(rn(l), rn(r)),
            Formula::Geq(l, r) => Formula::Geq(rn(l), rn(r)),
            Formula::Shift { ell, x, y } => {
                let ell = *ell;
                self.predicate(vec![rn(x), rn(y)], move |a| {
                    Formula::shift(ell, &a[0], &a[1])
                })
            }
            Formula::Power { ell, x } => {
                let ell = *ell;
                self.predicate(vec![rn(x)], move |a| Formula::power(ell, &a[0]))
            }
            Formula::Vq { x, y } => {
                self.predicate(vec![rn(x), rn(y)], |a| Formula::vq(&a[0], &a[1]))
            }
            Formula::Not(f) => Formula::not(self.walk(f, env)),
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match self.walk(f, env) {
                        Formula::And(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                Formula::And(out)
            }
            Formula::Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match self.walk(f, env) {
                        Formula::Or(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                Formula::Or(out)
            }
            Formula::Exists(v, f) => {
                let name = self.binder(v);
                let mut inner = env.clone();
                inner.insert(v.clone(), name.clone());
                Formula::Exists(name, Box::new(self.walk(f, &inner)))
            }
            Formula::Forall(v, f) => {
                let name = self.binder(v);
                let mut inner = env.clone();
                inner.insert(v.clone(), name.clone());
                let body = self.walk(f, &inner);
                Formula::not(Formula::Exists(name, Box::new(Formula::not(body))))
            }
        }
    }

    /// `p(T_1, ..)` with each argument that is not a fresh-enough plain variable replaced
    /// by `z` under `exists z (z = T and ..)`.
    fn predicate(&mut self, args: Vec<Term>, build: impl Fn(&[String]) -> Formula) -> Formula {
        let mut names: Vec<String> = Vec::new();
        let mut defs: Vec<(String, Term)> = Vec::new();
        for t in args {
            match t.as_var() {
                Some(v) if !names.iter().any(|n| n == v) => names.push(v.to_string()),
                _ => {
                    let z = self.fresh("z");
                    names.push(z.clone());
                    defs.push((z, t));
                }
            }
        }
        let mut f = build(&names);
        for (z, t) in defs.into_iter().rev() {
            f = Formula::exists(&z, Formula::And(vec![Formula::eq(Term::var(&z), t), f]));
        }
        f
    }
}
