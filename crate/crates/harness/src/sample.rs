//! Seeded random generation of well-typed programs deeper than the
//! exhaustive corpus reaches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lbox_core::name::Name;
use lbox_core::term::{Binder, Command, Side, Term};
use lbox_core::types::{Polarity, Type};
use lbox_core::typing::{check_command, TypingContext};

use crate::enumerate::universe;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Zone {
    Gamma,
    Theta,
    Delta,
}

struct Gen {
    rng: ChaCha8Rng,
    ret: Type,
    universe: Vec<Type>,
    scope: Vec<(Name, Type, Zone)>,
}

impl Gen {
    fn bind(&mut self, zone: Zone, ty: &Type) -> Binder {
        let base = if zone == Zone::Delta { "a" } else { "x" };
        let name = Name::new(format!("{base}{}", self.scope.len()));
        self.scope.push((name.clone(), ty.clone(), zone));
        Binder::new(name, ty.clone())
    }

    fn under<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> T {
        let n = self.scope.len();
        let out = f(self);
        self.scope.truncate(n);
        out
    }

    fn command(&mut self, d: usize) -> Command {
        let ty = self.universe.choose(&mut self.rng).cloned().unwrap_or(Type::Unit);
        let eps = ty.polarity();
        let (l, r) = if eps.is_box_plus() {
            (self.producer(&ty, d - 1, false), self.consumer(&ty, d - 1, true))
        } else {
            (self.producer(&ty, d - 1, true), self.consumer(&ty, d - 1, false))
        };
        Command::new(eps, l, r)
    }

    fn leaf_producer(&mut self, ty: &Type) -> Option<Term> {
        let mut options: Vec<Term> =
            self.scope.iter().filter(|(_, t, z)| *z != Zone::Delta && t == ty).map(|(n, _, _)| Term::Var(n.clone())).collect();
        if *ty == Type::Unit {
            options.push(Term::Unit);
        }
        options.choose(&mut self.rng).cloned()
    }

    fn leaf_consumer(&mut self, ty: &Type) -> Option<Term> {
        let mut options: Vec<Term> = self
            .scope
            .iter()
            .filter(|(_, t, z)| *z == Zone::Delta && t == ty)
            .map(|(n, _, _)| Term::CoVar(n.clone()))
            .collect();
        if *ty == self.ret {
            options.push(Term::covar(Name::toplevel()));
        }
        options.choose(&mut self.rng).cloned()
    }

    /// A producer of `ty`; falls back to a `mu` when nothing smaller fits.
    fn producer(&mut self, ty: &Type, d: usize, value: bool) -> Term {
        let leaf = self.leaf_producer(ty);
        if d < 2 || (leaf.is_some() && self.rng.gen_bool(0.3)) {
            return leaf.unwrap_or_else(|| self.min_producer(ty));
        }
        let use_mu = self.rng.gen_bool(0.25) && d >= 2 && (!value || ty.polarity() == Polarity::Neg);
        if use_mu {
            return self.under(|g| {
                let a = g.bind(Zone::Delta, ty);
                let c = g.command(d - 1);
                Term::mu(a, c)
            });
        }
        match ty {
            Type::Unit => Term::Unit,
            Type::Tensor(a, b) => Term::pair(self.producer(a, d - 1, true), self.producer(b, d - 1, true)),
            Type::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Term::inj(Side::First, self.producer(a, d - 1, true))
                } else {
                    Term::inj(Side::Second, self.producer(b, d - 1, true))
                }
            }
            Type::Box(a) => Term::boxed(self.producer(a, d - 1, true)),
            Type::Not(a) => self.under(|g| {
                let x = g.bind(Zone::Gamma, a);
                let c = g.command(d - 1);
                Term::mu_not(x, c)
            }),
            Type::With(a, b) => {
                let (x, c1) = self.under(|g| (g.bind(Zone::Delta, a), g.command(d - 1)));
                let (y, c2) = self.under(|g| (g.bind(Zone::Delta, b), g.command(d - 1)));
                Term::mu_with(x, c1, y, c2)
            }
            Type::Par(a, b) => self.under(|g| {
                let x = g.bind(Zone::Delta, a);
                let y = g.bind(Zone::Delta, b);
                let c = g.command(d - 1);
                Term::mu_par(x, y, c)
            }),
        }
    }

    fn consumer(&mut self, ty: &Type, d: usize, covalue: bool) -> Term {
        let leaf = self.leaf_consumer(ty);
        if d < 2 || (leaf.is_some() && self.rng.gen_bool(0.3)) {
            return leaf.unwrap_or_else(|| self.min_consumer(ty));
        }
        let use_mu = self.rng.gen_bool(0.25) && d >= 2 && (!covalue || ty.polarity().is_box_plus());
        if use_mu {
            return self.under(|g| {
                let x = g.bind(Zone::Gamma, ty);
                let c = g.command(d - 1);
                Term::mu_tilde(x, c)
            });
        }
        match ty {
            Type::Unit => {
                let c = self.command(d - 1);
                Term::mu_tilde_unit(c)
            }
            Type::Tensor(a, b) => self.under(|g| {
                let x = g.bind(Zone::Gamma, a);
                let y = g.bind(Zone::Gamma, b);
                let c = g.command(d - 1);
                Term::mu_tilde_pair(x, y, c)
            }),
            Type::Sum(a, b) => {
                let (x, c1) = self.under(|g| (g.bind(Zone::Gamma, a), g.command(d - 1)));
                let (y, c2) = self.under(|g| (g.bind(Zone::Gamma, b), g.command(d - 1)));
                Term::mu_tilde_match(x, c1, y, c2)
            }
            Type::Box(a) => self.under(|g| {
                let x = g.bind(Zone::Theta, a);
                let c = g.command(d - 1);
                Term::mu_tilde_box(x, c)
            }),
            Type::Not(a) => Term::neg(self.producer(a, d.saturating_sub(1), true)),
            Type::With(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Term::proj(Side::First, self.consumer(a, d.saturating_sub(1), true))
                } else {
                    Term::proj(Side::Second, self.consumer(b, d.saturating_sub(1), true))
                }
            }
            Type::Par(a, b) => {
                Term::copair(self.consumer(a, d.saturating_sub(1), true), self.consumer(b, d.saturating_sub(1), true))
            }
        }
    }

    /// `< V | tp >` for a fixed closed `V : ret`.
    fn min_command(&self) -> Command {
        let ret = self.ret.clone();
        Command::new(ret.polarity(), self.min_producer(&ret), Term::covar(Name::toplevel()))
    }

    // Fixed closed forms, used when the depth budget runs out. Binder
    // names here are never referenced, so they cannot clash.
    fn min_producer(&self, ty: &Type) -> Term {
        let b = |t: &Type| Binder::new("_", t.clone());
        match ty {
            Type::Unit => Term::Unit,
            Type::Tensor(a, c) => Term::pair(self.min_producer(a), self.min_producer(c)),
            Type::Sum(a, _) => Term::inj(Side::First, self.min_producer(a)),
            Type::Box(a) => Term::boxed(self.min_producer(a)),
            Type::Not(a) => Term::mu_not(b(a), self.min_command()),
            Type::With(a, c) => Term::mu_with(b(a), self.min_command(), b(c), self.min_command()),
            Type::Par(a, c) => {
                Term::mu_par(Binder::new("_0", (**a).clone()), Binder::new("_1", (**c).clone()), self.min_command())
            }
        }
    }

    fn min_consumer(&self, ty: &Type) -> Term {
        match ty {
            Type::Unit => Term::mu_tilde_unit(self.min_command()),
            Type::Tensor(a, c) => Term::mu_tilde_pair(
                Binder::new("_0", (**a).clone()),
                Binder::new("_1", (**c).clone()),
                self.min_command(),
            ),
            Type::Sum(a, c) => Term::mu_tilde_match(
                Binder::new("_", (**a).clone()),
                self.min_command(),
                Binder::new("_", (**c).clone()),
                self.min_command(),
            ),
            Type::Box(a) => Term::mu_tilde_box(Binder::new("_", (**a).clone()), self.min_command()),
            Type::Not(a) => Term::neg(self.min_producer(a)),
            Type::With(a, _) => Term::proj(Side::First, self.min_consumer(a)),
            Type::Par(a, c) => Term::copair(self.min_consumer(a), self.min_consumer(c)),
        }
    }
}

/// `count` random closed commands of height about `depth` over
/// `tp : ret`, keeping only well-typed ones. Deterministic in `seed`.
pub fn sample_commands(seed: u64, count: usize, depth: usize, ret: &Type) -> Vec<Command> {
    assert_eq!(ret.polarity(), Polarity::Modal, "return type must be modal");
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), ret: ret.clone(), universe: universe(), scope: Vec::new() };
    let ctx = TypingContext::new(ret.clone());
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 20 {
        attempts += 1;
        let d = g.rng.gen_range(2..=depth.max(2));
        let c = g.command(d);
        if check_command(&ctx, &c).is_ok() {
            out.push(c);
        }
    }
    out
}
