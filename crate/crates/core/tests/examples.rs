//! Worked examples for each public operation, written as oracles.

use lbox_core::machine::{
    eval_covalue, eval_value, machine_run, readback_command, type_memory, Binding, Frame, Machine,
    MachineRule, MachineStep, Memory, RunOptions,
};
use lbox_core::opsem::{self, Rule, StepResult};
use lbox_core::parse::{parse_program, parse_type};
use lbox_core::subst::{alpha_eq_command, free_vars, free_vars_command, substitute, Substitution};
use lbox_core::sugar;
use lbox_core::term::classify;
use lbox_core::typing::{
    apply_renaming, check_command, check_value, modal_restriction, Renaming, TypeErrorKind, TypingContext,
};
use lbox_core::{odot, polarity_of, Binder, Class, Command, Name, Polarity, Side, Term, Type};

const M: Polarity = Polarity::Modal;
const N: Polarity = Polarity::Neg;

fn ty(s: &str) -> Type {
    parse_type(s).unwrap()
}

fn tp() -> Term {
    Term::covar("tp")
}

fn cut(p: Polarity, l: Term, r: Term) -> Command {
    Command::new(p, l, r)
}

fn done() -> Command {
    cut(M, Term::Unit, tp())
}

fn thunk() -> Term {
    Term::mu_not(Binder::new("w", Type::Unit), done())
}

#[test]
fn polarity_table() {
    assert_eq!(polarity_of(&Type::Unit), M);
    assert_eq!(polarity_of(&ty("1 * (1 & 1)")), Polarity::Pos);
    assert_eq!(polarity_of(&ty("1 + 1")), M);
    assert_eq!(polarity_of(&ty("box ~1")), M);
    assert_eq!(polarity_of(&ty("~1")), N);
}

#[test]
fn odot_table() {
    assert_eq!(odot(M, M), M);
    assert_eq!(odot(M, N), Polarity::Pos);
    assert_eq!(odot(Polarity::Pos, Polarity::Pos), Polarity::Pos);
}

#[test]
fn grammar_stratification() {
    let body = done();
    let neg_mu = Term::mu(Binder::new("a", ty("~1")), body.clone());
    assert_eq!(classify(&neg_mu).classes(), vec![Class::Value, Class::Expression]);
    let modal_mu = Term::mu(Binder::new("a", Type::Unit), body.clone());
    assert_eq!(classify(&modal_mu).classes(), vec![Class::Expression]);
    let neg_mu_tilde = Term::mu_tilde(Binder::new("x", ty("~1")), body);
    assert_eq!(classify(&neg_mu_tilde).classes(), vec![Class::Environment]);
}

#[test]
fn substitution_examples() {
    let c = cut(M, Term::var("x"), Term::covar("a"));
    let s = Substitution::new().var("x", Term::Unit).unwrap();
    assert_eq!(substitute(&c, &s), cut(M, Term::Unit, Term::covar("a")));

    let shadow = cut(
        M,
        Term::mu(Binder::new("a", Type::Unit), cut(M, Term::var("x"), Term::covar("a"))),
        tp(),
    );
    let s = Substitution::new().covar("a", tp()).unwrap();
    assert_eq!(substitute(&shadow, &s), shadow);

    let redex = cut(
        M,
        Term::pair(Term::Unit, Term::inj(Side::First, Term::Unit)),
        Term::mu_tilde_pair(
            Binder::new("x", Type::Unit),
            Binder::new("y", ty("1 + 1")),
            cut(M, Term::var("x"), Term::covar("b")),
        ),
    );
    assert_eq!(opsem::contract(Rule::Tensor, &redex), cut(M, Term::Unit, Term::covar("b")));
}

#[test]
fn free_name_examples() {
    let fv = free_vars_command(&cut(M, Term::var("x"), Term::covar("a")));
    assert_eq!(fv.vars.into_iter().collect::<Vec<_>>(), vec![Name::new("x")]);
    assert_eq!(fv.covars.into_iter().collect::<Vec<_>>(), vec![Name::new("a")]);

    let fv = free_vars(&Term::mu(Binder::new("a", Type::Unit), cut(M, Term::var("x"), Term::covar("a"))));
    assert_eq!(fv.vars.len(), 1);
    assert!(fv.covars.is_empty());

    let fv = free_vars(&Term::boxed(Term::pair(Term::var("y"), Term::var("y"))));
    assert_eq!(fv.vars.into_iter().collect::<Vec<_>>(), vec![Name::new("y")]);
    assert!(fv.covars.is_empty());
}

#[test]
fn parser_examples() {
    let p = parse_program("ret 1; < () | mu~(). <() | tp> >").unwrap();
    assert_eq!(p.return_type(), Type::Unit);
    assert_eq!(p.command, cut(M, Term::Unit, Term::mu_tilde_unit(done())));

    let p = parse_program("< box () | mu~box x:1. <x | tp> >").unwrap();
    let expected = cut(
        M,
        Term::boxed(Term::Unit),
        Term::mu_tilde_box(Binder::new("x", Type::Unit), cut(M, Term::var("x"), tp())),
    );
    assert_eq!(p.command, expected);

    let p = parse_program("< (inl (), ()) | mu~(x:1+1, y:1). <x | tp> >").unwrap();
    assert!(matches!(opsem::step(&p.command), StepResult::Stepped(Rule::Tensor, _)));
    let again = parse_program(&p.to_string()).unwrap();
    assert!(alpha_eq_command(&again.command, &p.command));
}

#[test]
fn printer_examples() {
    assert_eq!(done().to_string(), "< () | tp >");
    assert_eq!(Type::par(Type::not(Type::Unit), Type::Unit).to_string(), "~1 @ 1");
}

#[test]
fn command_typing_examples() {
    let ctx = TypingContext::new(Type::Unit);
    assert_eq!(check_command(&ctx, &cut(M, Term::Unit, Term::mu_tilde_unit(done()))), Ok(Type::Unit));

    let l = Term::mu(Binder::new("a", ty("~1")), done());
    let r = Term::mu_tilde(Binder::new("x", ty("1 * ~1")), done());
    let e = check_command(&ctx, &cut(Polarity::Pos, l, r)).unwrap_err();
    assert!(matches!(e.kind, TypeErrorKind::PolarityMismatch { .. }), "{e}");

    let e = check_command(&ctx, &cut(M, Term::var("x"), tp())).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::UnboundVar(Name::new("x")));
}

#[test]
fn value_typing_examples() {
    let a = ty("~1");
    let mut ctx = TypingContext::empty();
    ctx.push_gamma(Name::new("z"), a.clone());
    let pair = Term::pair(Term::var("z"), Term::var("z"));
    assert_eq!(check_value(&ctx, &pair, None), Ok(Type::tensor(a.clone(), a.clone())));

    let b = Type::Unit;
    let mut ctx = TypingContext::empty();
    ctx.push_theta(Name::new("x"), a.clone());
    ctx.push_theta(Name::new("y"), b.clone());
    let swapped = Term::pair(Term::var("y"), Term::var("x"));
    assert_eq!(check_value(&ctx, &swapped, None), Ok(Type::tensor(b, a)));

    let mut ctx = TypingContext::empty();
    ctx.push_gamma(Name::new("x"), ty("1 * (1 & 1)"));
    let e = check_value(&ctx, &Term::boxed(Term::var("x")), None).unwrap_err();
    assert!(matches!(e.kind, TypeErrorKind::ModalCapture(_)), "{e}");
}

#[test]
fn modal_restriction_examples() {
    let ctx = TypingContext::empty();
    assert!(modal_restriction(&ctx, &Term::boxed(Term::Unit)).is_ok());

    let mut ctx = TypingContext::empty();
    ctx.push_theta(Name::new("x"), Type::Unit);
    assert!(modal_restriction(&ctx, &Term::var("x")).is_ok());

    let mut ctx = TypingContext::empty();
    ctx.push_gamma(Name::new("x"), ty("~1"));
    assert!(modal_restriction(&ctx, &Term::var("x")).is_err());
    assert!(check_value(&ctx, &Term::boxed(Term::var("x")), None).is_err());
}

#[test]
fn renaming_examples() {
    let a = ty("1 * ~1");
    let mut from = TypingContext::empty();
    from.push_gamma(Name::new("x"), a.clone());
    from.push_gamma(Name::new("y"), a.clone());
    let mut to = TypingContext::empty();
    to.push_gamma(Name::new("z"), a.clone());
    let theta = Renaming::new().var("x", "z").var("y", "z");
    let pair = Term::pair(Term::var("x"), Term::var("y"));
    let renamed = apply_renaming(&theta, &from, &to, &pair).unwrap();
    assert_eq!(renamed, Term::pair(Term::var("z"), Term::var("z")));
    assert_eq!(check_value(&to, &renamed, None), Ok(Type::tensor(a.clone(), a)));

    assert_eq!(apply_renaming(&Renaming::new(), &from, &from, &pair).unwrap(), pair);

    let mut small = TypingContext::new(Type::Unit);
    small.push_delta(Name::new("a"), Type::Unit);
    let mut big = small.clone();
    big.push_delta(Name::new("b"), ty("~1"));
    let s = Term::covar("a");
    let theta = Renaming::new().covar("a", "a");
    assert_eq!(apply_renaming(&theta, &small, &big, &s).unwrap(), s);
    let c = cut(M, Term::Unit, s);
    assert_eq!(check_command(&big, &c), Ok(Type::Unit));
}

#[test]
fn reduction_examples() {
    let c = cut(M, Term::Unit, Term::mu_tilde_unit(done()));
    assert_eq!(opsem::step(&c), StepResult::Stepped(Rule::Unit, done()));

    let v = Term::inj(Side::Second, Term::Unit);
    let c = cut(
        M,
        Term::pair(v.clone(), Term::Unit),
        Term::mu_tilde_pair(
            Binder::new("x", ty("1 + 1")),
            Binder::new("y", Type::Unit),
            cut(M, Term::var("x"), tp()),
        ),
    );
    assert_eq!(opsem::step(&c), StepResult::Stepped(Rule::Tensor, cut(M, v, tp())));

    let c = cut(
        M,
        Term::inj(Side::Second, Term::Unit),
        Term::mu_tilde_match(
            Binder::new("x", Type::Unit),
            cut(M, Term::var("x"), tp()),
            Binder::new("y", Type::Unit),
            cut(M, Term::var("y"), tp()),
        ),
    );
    assert_eq!(opsem::step(&c), StepResult::Stepped(Rule::Sum, done()));
}

#[test]
fn run_examples() {
    let c = cut(
        M,
        Term::boxed(Term::Unit),
        Term::mu_tilde_box(Binder::new("x", Type::Unit), cut(M, Term::var("x"), tp())),
    );
    let out = opsem::run(&c, 10).unwrap();
    assert_eq!((out.steps, out.result), (1, StepResult::Terminal(Term::Unit)));

    let id = sugar::lambda(Binder::new("x", Type::Unit), Term::var("x"), Type::Unit);
    let app = sugar::apply(id, Term::Unit, Type::Unit);
    let c = cut(M, app, tp());
    assert_eq!(check_command(&TypingContext::new(Type::Unit), &c), Ok(Type::Unit));
    let out = opsem::run(&c, 10).unwrap();
    assert_eq!(out.result, StepResult::Terminal(Term::Unit));

    let out = opsem::run(&cut(M, Term::var("x"), tp()), 10).unwrap();
    assert_eq!(out.steps, 0);
    assert!(matches!(out.result, StepResult::Stuck(_)));
}

fn var(x: &str, t: &str, v: Term) -> Binding {
    Binding::var(Name::new(x), ty(t), v)
}

fn covar(a: &str, t: &str, s: Term) -> Binding {
    Binding::covar(Name::new(a), ty(t), s)
}

#[test]
fn allocation_examples() {
    let mut m = Memory::new();
    m.alloc(vec![var("x", "1", Term::Unit)]);
    assert_eq!((m.heap.len(), m.depth()), (1, 0));

    let mut m = Memory::new();
    m.alloc(vec![covar("a", "1", tp()), covar("b", "1", tp())]);
    assert_eq!((m.heap.len(), m.depth()), (0, 1));
    assert_eq!(m.stack[0].bindings.len(), 2);

    let mut m = Memory::new();
    m.alloc(vec![var("x", "1", Term::Unit), covar("a", "1", tp())]);
    assert_eq!((m.heap.len(), m.depth()), (1, 1));
    assert_eq!(m.stack[0].bindings[0].name, Name::new("a"));
}

#[test]
fn restriction_examples() {
    let frame = |bs: Vec<Binding>| Frame { bindings: bs };
    let base = Memory { heap: vec![var("x", "1", Term::Unit)], stack: vec![frame(vec![covar("g", "1", tp())])] };

    let mut m = base.clone();
    m.stack.push(frame(vec![covar("a", "1", tp())]));
    assert_eq!(m.restrict(&Name::new("a")).unwrap(), base);

    let mut m = base.clone();
    m.stack.push(frame(vec![covar("a", "1", tp())]));
    m.stack.push(frame(vec![covar("b", "1", tp()), covar("c", "1", tp())]));
    assert_eq!(m.restrict(&Name::new("a")).unwrap(), base);

    for pair in [["b", "a"], ["a", "b"]] {
        let mut m = base.clone();
        m.stack.push(frame(pair.iter().map(|n| covar(n, "1", tp())).collect()));
        assert_eq!(m.restrict(&Name::new("a")).unwrap(), base);
    }
}

#[test]
fn value_evaluation_examples() {
    let mut m = Memory::new();
    m.alloc(vec![var("x", "1", Term::Unit)]);
    m.alloc(vec![var("y", "~1", thunk())]);
    let v = eval_value(&m, &Term::pair(Term::var("x"), Term::var("y"))).unwrap();
    assert_eq!(v, Term::pair(Term::Unit, Term::var("y")));

    assert_eq!(eval_value(&m, &thunk()).unwrap(), thunk());

    let mut m = Memory::new();
    m.alloc(vec![covar("a", "1 * ~1", tp())]);
    assert_eq!(eval_covalue(&m, &Term::covar("a")).unwrap(), Term::covar("a"));
}

#[test]
fn machine_step_examples() {
    let c = cut(M, Term::Unit, Term::mu_tilde_unit(done()));
    let mut m = Machine::new(c, Type::Unit);
    assert_eq!(m.step(), Ok(MachineStep::Stepped(MachineRule::EvalMuTildeUnit)));
    assert_eq!(m.command, done());
    assert_eq!(m.memory, Memory::new());

    let body = cut(M, Term::var("x"), tp());
    let c = cut(M, Term::boxed(Term::Unit), Term::mu_tilde_box(Binder::new("x", Type::Unit), body.clone()));
    let mut m = Machine::new(c, Type::Unit);
    assert_eq!(m.step(), Ok(MachineStep::Stepped(MachineRule::EvalMuTildeBox)));
    assert_eq!(m.command, body);
    assert_eq!(m.memory.heap, vec![var("x", "1", Term::Unit)]);
    assert_eq!(m.depth(), 0);
}

#[test]
fn machine_run_examples() {
    let c = cut(
        M,
        Term::boxed(Term::Unit),
        Term::mu_tilde_box(Binder::new("x", Type::Unit), cut(M, Term::var("x"), tp())),
    );
    let run = machine_run(&c, &Type::Unit, RunOptions::default()).unwrap();
    assert_eq!(run.value, Term::Unit);
    assert_eq!(run.memory.heap, vec![var("x", "1", Term::Unit)]);

    let run = machine_run(&done(), &Type::Unit, RunOptions::default()).unwrap();
    assert_eq!((&run.value, run.memory.depth(), run.steps()), (&Term::Unit, 0, 0));
}

#[test]
fn readback_examples() {
    let mut m = Memory::new();
    m.alloc(vec![var("x", "1", Term::Unit)]);
    assert_eq!(readback_command(&m, &cut(M, Term::var("x"), tp())).unwrap(), done());
}

#[test]
fn memory_typing_examples() {
    let empty = type_memory(&Memory::new(), &Type::Unit).unwrap();
    let ctx = empty.context();
    assert!(ctx.gamma().is_empty() && ctx.theta().is_empty());
    assert_eq!(ctx.delta().len(), 1);
    assert_eq!(ctx.ret(), Some(&Type::Unit));

    let z = Term::mu_not(Binder::new("w", Type::Unit), cut(M, Term::var("w"), Term::covar("a")));
    let m = Memory {
        heap: vec![var("x", "1", Term::Unit), var("y", "1 + 1", Term::inj(Side::First, Term::Unit))],
        stack: vec![
            Frame { bindings: vec![covar("a", "1", tp()), covar("b", "box 1", Term::mu_tilde(Binder::new("v", ty("box 1")), done()))] },
            Frame { bindings: vec![var("z", "~1", z.clone())] },
        ],
    };
    let ctx = type_memory(&m, &Type::Unit).unwrap().context();
    let names = |map: &indexmap::IndexMap<Name, Type>| map.keys().map(|n| n.to_string()).collect::<Vec<_>>();
    assert_eq!(names(ctx.theta()), ["x", "y"]);
    assert_eq!(names(ctx.gamma()), ["z"]);
    assert_eq!(names(ctx.delta()), ["tp", "a", "b"]);

    let bad = Memory {
        heap: Vec::new(),
        stack: vec![
            Frame { bindings: vec![var("z", "~1", z)] },
            Frame { bindings: vec![covar("a", "1", tp())] },
        ],
    };
    assert!(type_memory(&bad, &Type::Unit).is_err());
}
