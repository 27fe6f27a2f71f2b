//! Exhaustive, type-directed enumeration of small well-typed programs.
//!
//! Depth is tree height: names and `()` have height 0, every constructor,
//! binder and cut adds one. So `< () | tp >` has depth 1 and
//! `< box () | mu~box x:1. < x | tp > >` has depth 3.

use std::collections::HashMap;
use std::sync::Arc;

use lbox_core::name::Name;
use lbox_core::term::{Binder, Command, Side, Term};
use lbox_core::types::{Polarity, Type};
use lbox_core::typing::{check_command, TypingContext};

/// The fixed type universe: `1, 1 + 1, box 1, ~1, 1 & 1, ~1 @ 1, 1 * 1`.
pub fn universe() -> Vec<Type> {
    let u = Type::Unit;
    vec![
        u.clone(),
        Type::sum(u.clone(), u.clone()),
        Type::boxed(u.clone()),
        Type::not(u.clone()),
        Type::with(u.clone(), u.clone()),
        Type::par(Type::not(u.clone()), u.clone()),
        Type::tensor(u.clone(), u),
    ]
}

/// Return types the corpus is built for.
pub fn return_types() -> Vec<Type> {
    vec![Type::Unit, Type::sum(Type::Unit, Type::Unit), Type::boxed(Type::Unit)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Zone {
    Gamma,
    Theta,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Entry {
    name: Name,
    ty: Type,
    zone: Zone,
}

/// Names in scope, outermost first. Binder names are derived from the
/// scope length, so each scope shape yields one canonical naming.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Env {
    entries: Vec<Entry>,
}

impl Env {
    fn with(&self, zone: Zone, ty: &Type) -> (Env, Name) {
        let base = if zone == Zone::Delta { "a" } else { "x" };
        let name = Name::new(format!("{base}{}", self.entries.len()));
        let mut e = self.clone();
        e.entries.push(Entry { name: name.clone(), ty: ty.clone(), zone });
        (e, name)
    }

    fn with2(&self, zone: Zone, a: &Type, b: &Type) -> (Env, Name, Name) {
        let (e, n1) = self.with(zone, a);
        let (e, n2) = e.with(zone, b);
        (e, n1, n2)
    }

    fn vars<'a>(&'a self, ty: &'a Type) -> impl Iterator<Item = &'a Name> + 'a {
        self.entries.iter().filter(move |e| e.zone != Zone::Delta && &e.ty == ty).map(|e| &e.name)
    }

    fn covars<'a>(&'a self, ty: &'a Type) -> impl Iterator<Item = &'a Name> + 'a {
        self.entries.iter().filter(move |e| e.zone == Zone::Delta && &e.ty == ty).map(|e| &e.name)
    }

    fn context(&self, ret: &Type) -> TypingContext {
        let mut ctx = TypingContext::new(ret.clone());
        for e in &self.entries {
            match e.zone {
                Zone::Gamma => ctx.push_gamma(e.name.clone(), e.ty.clone()),
                Zone::Theta => ctx.push_theta(e.name.clone(), e.ty.clone()),
                Zone::Delta => ctx.push_delta(e.name.clone(), e.ty.clone()),
            }
        }
        ctx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Sort {
    Value,
    Expression,
    CoValue,
    Environment,
}

type Key = (Env, Sort, Type, usize);

/// Memoised enumerator for one return type.
pub struct Enumerator {
    ret: Type,
    universe: Vec<Type>,
    memo: HashMap<Key, Arc<Vec<Term>>>,
    cmd_memo: HashMap<(Env, usize), Arc<Vec<Command>>>,
}

impl Enumerator {
    pub fn new(ret: Type) -> Self {
        Enumerator { ret, universe: universe(), memo: HashMap::new(), cmd_memo: HashMap::new() }
    }

    /// Commands of height at most `d` in `env`.
    fn commands(&mut self, env: &Env, d: usize) -> Arc<Vec<Command>> {
        if let Some(v) = self.cmd_memo.get(&(env.clone(), d)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if d >= 1 {
            for ty in self.universe.clone() {
                let eps = ty.polarity();
                let (ls, rs) = if eps.is_box_plus() {
                    (Sort::Expression, Sort::CoValue)
                } else {
                    (Sort::Value, Sort::Environment)
                };
                let lefts = self.terms(env, ls, &ty, d - 1);
                if lefts.is_empty() {
                    continue;
                }
                let rights = self.terms(env, rs, &ty, d - 1);
                for l in lefts.iter() {
                    for r in rights.iter() {
                        out.push(Command::new(eps, l.clone(), r.clone()));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.cmd_memo.insert((env.clone(), d), out.clone());
        out
    }

    fn terms(&mut self, env: &Env, sort: Sort, ty: &Type, d: usize) -> Arc<Vec<Term>> {
        let key = (env.clone(), sort, ty.clone(), d);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = Arc::new(self.build(env, sort, ty, d));
        self.memo.insert(key, out.clone());
        out
    }

    fn build(&mut self, env: &Env, sort: Sort, ty: &Type, d: usize) -> Vec<Term> {
        let mut out = Vec::new();
        match sort {
            Sort::Value | Sort::Expression => {
                out.extend(env.vars(ty).cloned().map(Term::Var));
                if *ty == Type::Unit {
                    out.push(Term::Unit);
                }
                if d == 0 {
                    return out;
                }
                match ty {
                    Type::Tensor(a, b) => {
                        let xs = self.terms(env, Sort::Value, a, d - 1);
                        let ys = self.terms(env, Sort::Value, b, d - 1);
                        for x in xs.iter() {
                            for y in ys.iter() {
                                out.push(Term::pair(x.clone(), y.clone()));
                            }
                        }
                    }
                    Type::Sum(a, b) => {
                        for (side, t) in [(Side::First, a), (Side::Second, b)] {
                            for v in self.terms(env, Sort::Value, t, d - 1).iter() {
                                out.push(Term::inj(side, v.clone()));
                            }
                        }
                    }
                    Type::Box(a) => {
                        for v in self.terms(env, Sort::Value, a, d - 1).iter() {
                            out.push(Term::boxed(v.clone()));
                        }
                    }
                    Type::Not(a) => {
                        let (e, x) = env.with(Zone::Gamma, a);
                        for c in self.commands(&e, d - 1).iter() {
                            out.push(Term::mu_not(Binder::new(x.clone(), (**a).clone()), c.clone()));
                        }
                    }
                    Type::With(a, b) => {
                        let (e1, x) = env.with(Zone::Delta, a);
                        let (e2, y) = env.with(Zone::Delta, b);
                        let c1s = self.commands(&e1, d - 1);
                        let c2s = self.commands(&e2, d - 1);
                        for c1 in c1s.iter() {
                            for c2 in c2s.iter() {
                                out.push(Term::mu_with(
                                    Binder::new(x.clone(), (**a).clone()),
                                    c1.clone(),
                                    Binder::new(y.clone(), (**b).clone()),
                                    c2.clone(),
                                ));
                            }
                        }
                    }
                    Type::Par(a, b) => {
                        let (e, x, y) = env.with2(Zone::Delta, a, b);
                        for c in self.commands(&e, d - 1).iter() {
                            out.push(Term::mu_par(
                                Binder::new(x.clone(), (**a).clone()),
                                Binder::new(y.clone(), (**b).clone()),
                                c.clone(),
                            ));
                        }
                    }
                    Type::Unit => {}
                }
                if sort == Sort::Expression || ty.polarity() == Polarity::Neg {
                    let (e, a) = env.with(Zone::Delta, ty);
                    for c in self.commands(&e, d - 1).iter() {
                        out.push(Term::mu(Binder::new(a.clone(), ty.clone()), c.clone()));
                    }
                }
            }
            Sort::CoValue | Sort::Environment => {
                out.extend(env.covars(ty).cloned().map(Term::CoVar));
                if *ty == self.ret {
                    out.push(Term::covar(Name::toplevel()));
                }
                if d == 0 {
                    return out;
                }
                match ty {
                    Type::Unit => {
                        for c in self.commands(env, d - 1).iter() {
                            out.push(Term::mu_tilde_unit(c.clone()));
                        }
                    }
                    Type::Tensor(a, b) => {
                        let (e, x, y) = env.with2(Zone::Gamma, a, b);
                        for c in self.commands(&e, d - 1).iter() {
                            out.push(Term::mu_tilde_pair(
                                Binder::new(x.clone(), (**a).clone()),
                                Binder::new(y.clone(), (**b).clone()),
                                c.clone(),
                            ));
                        }
                    }
                    Type::Sum(a, b) => {
                        let (e1, x) = env.with(Zone::Gamma, a);
                        let (e2, y) = env.with(Zone::Gamma, b);
                        let c1s = self.commands(&e1, d - 1);
                        let c2s = self.commands(&e2, d - 1);
                        for c1 in c1s.iter() {
                            for c2 in c2s.iter() {
                                out.push(Term::mu_tilde_match(
                                    Binder::new(x.clone(), (**a).clone()),
                                    c1.clone(),
                                    Binder::new(y.clone(), (**b).clone()),
                                    c2.clone(),
                                ));
                            }
                        }
                    }
                    Type::Box(a) => {
                        let (e, x) = env.with(Zone::Theta, a);
                        for c in self.commands(&e, d - 1).iter() {
                            out.push(Term::mu_tilde_box(Binder::new(x.clone(), (**a).clone()), c.clone()));
                        }
                    }
                    Type::Not(a) => {
                        for v in self.terms(env, Sort::Value, a, d - 1).iter() {
                            out.push(Term::neg(v.clone()));
                        }
                    }
                    Type::With(a, b) => {
                        for (side, t) in [(Side::First, a), (Side::Second, b)] {
                            for s in self.terms(env, Sort::CoValue, t, d - 1).iter() {
                                out.push(Term::proj(side, s.clone()));
                            }
                        }
                    }
                    Type::Par(a, b) => {
                        let xs = self.terms(env, Sort::CoValue, a, d - 1);
                        let ys = self.terms(env, Sort::CoValue, b, d - 1);
                        for x in xs.iter() {
                            for y in ys.iter() {
                                out.push(Term::copair(x.clone(), y.clone()));
                            }
                        }
                    }
                }
                if sort == Sort::Environment || ty.polarity().is_box_plus() {
                    let (e, x) = env.with(Zone::Gamma, ty);
                    for c in self.commands(&e, d - 1).iter() {
                        out.push(Term::mu_tilde(Binder::new(x.clone(), ty.clone()), c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Closed commands of height at most `depth`, unfiltered.
    pub fn raw(&mut self, depth: usize) -> Vec<Command> {
        self.commands(&Env::default(), depth).to_vec()
    }

    /// Number of closed commands of height at most `depth`, unfiltered.
    pub fn raw_count(&mut self, depth: usize) -> usize {
        self.commands(&Env::default(), depth).len()
    }

    pub fn context(&self) -> TypingContext {
        Env::default().context(&self.ret)
    }
}

/// Every well-typed closed command of height at most `depth` over
/// `tp : ret`, with all types drawn from [`universe`].
pub fn enumerate_commands(depth: usize, ret: &Type) -> Vec<Command> {
    let mut en = Enumerator::new(ret.clone());
    let ctx = en.context();
    en.raw(depth).into_iter().filter(|c| check_command(&ctx, c).is_ok()).collect()
}
