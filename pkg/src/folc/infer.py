"""The infer-policy contract, six concrete policies, unification and the
linear-equation rewriter.

A policy maps a state to a set of states and has to satisfy the five
healthiness conditions (equivalence, renaming-insensitivity, sound
inconsistency, error preservation, identity on empty stores).  All policies
here except the baseline are maximal repetitions of a single propagation
step over a passive/active split of the store.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Algebra,
    JSubst,
    apply_subst,
    atom_truth,
    compose,
    j_eval,
    literal_truth,
    make_subst,
    subst_names,
    term_is_ground,
)
from .state import (
    ERROR,
    Classification,
    Pair,
    Store,
    classify,
    dedup,
    drop_subst,
    pair,
)
from .syntax import (
    And,
    App,
    Atom,
    Bottom,
    Eq,
    Exists,
    Formula,
    Neq,
    Not,
    Or,
    Term,
    Val,
    Var,
    all_names,
    rename_free,
    term_vars,
)

_FRESH_RE = re.compile(r"\$u(\d+)$")


# ---------------------------------------------------------------------------
# Unification (Herbrand)


def _apply_dict(t: Term, subs: dict) -> Term:
    if isinstance(t, Var):
        return subs.get(t.name, t)
    if isinstance(t, App):
        return App(t.symbol, tuple(_apply_dict(a, subs) for a in t.args))
    return t


def _occurs(name: str, t: Term) -> bool:
    return name in term_vars(t)


def mgu(s: Term, t: Term):
    """Most general unifier of two Herbrand terms, or None.

    Occurs check included; the result is idempotent.
    """
    subs: dict[str, Term] = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = _apply_dict(a, subs)
        b = _apply_dict(b, subs)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b):
                return None
            one = {a.name: b}
            subs = {k: _apply_dict(v, one) for k, v in subs.items()}
            subs[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a):
                return None
            one = {b.name: a}
            subs = {k: _apply_dict(v, one) for k, v in subs.items()}
            subs[b.name] = a
        elif (
            isinstance(a, App)
            and isinstance(b, App)
            and a.symbol == b.symbol
            and len(a.args) == len(b.args)
        ):
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return JSubst(tuple(sorted(subs.items())))


# ---------------------------------------------------------------------------
# Single-constraint resolution (shared by the baseline and the passive-store
# policies)


def equation_step(s: Term, t: Term, theta: JSubst, J: Algebra):
    """One equation resolution: ('bind', theta'), ('drop',), ('fail',) or ('error',).

    bind: one side applies to a variable absent from the other side.
    drop: both sides have identical J-values.  fail: ground with distinct
    values.  error: anything else (the equation is not decidable yet).
    """
    sa = apply_subst(s, theta)
    ta = apply_subst(t, theta)
    if isinstance(sa, Var) and not _occurs(sa.name, ta):
        eta = make_subst([(sa.name, j_eval(ta, J))], J)
        return ("bind", compose(theta, eta, J))
    if isinstance(ta, Var) and not isinstance(sa, Var) and not _occurs(ta.name, sa):
        eta = make_subst([(ta.name, j_eval(sa, J))], J)
        return ("bind", compose(theta, eta, J))
    if j_eval(sa, J) == j_eval(ta, J):
        return ("drop",)
    if term_is_ground(sa) and term_is_ground(ta):
        return ("fail",)
    return ("error",)


def as_literal(f: Formula):
    """(positive?, atom) with the s /= t spelling folded into negated s = t.

    Returns None for non-literals; classification treats Neq(s, t) and
    Not(Eq(s, t)) identically everywhere.
    """
    if isinstance(f, (Atom, Eq)):
        return (True, f)
    if isinstance(f, Neq):
        return (False, Eq(f.lhs, f.rhs))
    if isinstance(f, Not) and isinstance(f.body, (Atom, Eq)):
        return (False, f.body)
    return None


# ---------------------------------------------------------------------------
# Linear-equation rewriting (exact rationals)


@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class Contradiction:
    pass


@dataclass(frozen=True)
class Pivot:
    var: str
    expr: Term


@dataclass(frozen=True)
class NonLinear:
    pass


def _linear_form(t: Term):
    """(constant, {var: coefficient}) over Fractions, or None if non-linear."""
    if isinstance(t, Val):
        return Fraction(t.value), {}
    if isinstance(t, Var):
        return Fraction(0), {t.name: Fraction(1)}
    if isinstance(t, App) and t.symbol in ("+", "-"):
        left = _linear_form(t.args[0])
        right = _linear_form(t.args[1])
        if left is None or right is None:
            return None
        sign = 1 if t.symbol == "+" else -1
        const = left[0] + sign * right[0]
        coeffs = dict(left[1])
        for v, c in right[1].items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + sign * c
        return const, {v: c for v, c in coeffs.items() if c != 0}
    if isinstance(t, App) and t.symbol == "*":
        left = _linear_form(t.args[0])
        right = _linear_form(t.args[1])
        if left is None or right is None:
            return None
        if not left[1]:
            k = left[0]
            return k * right[0], {v: k * c for v, c in right[1].items() if k * c != 0}
        if not right[1]:
            k = right[0]
            return k * left[0], {v: k * c for v, c in left[1].items() if k * c != 0}
        return None
    return None


def _affine_term(const: Fraction, coeffs: dict) -> Term:
    """Canonical term for const + sum(coef * var), variables in name order."""
    expr = None
    if const != 0 or not coeffs:
        expr = Val(const)
    for v, c in sorted(coeffs.items()):
        part = Var(v) if abs(c) == 1 else App("*", (Val(abs(c)), Var(v)))
        if expr is None:
            expr = part if c > 0 else App("*", (Val(c), Var(v)))
        elif c < 0:
            expr = App("-", (expr, part))
        else:
            expr = App("+", (expr, part))
    return expr


def rewrite_linear(e: Eq, theta: JSubst, J: Algebra):
    """Normalize (lhs = rhs) under theta to one of the three linear shapes.

    Trivial for 0 = 0, Contradiction for r = 0 with r nonzero, otherwise a
    Pivot x = u on the lexicographically first variable with a nonzero
    coefficient; NonLinear when products of variables survive.
    """
    left = _linear_form(apply_subst(e.lhs, theta))
    right = _linear_form(apply_subst(e.rhs, theta))
    if left is None or right is None:
        return NonLinear()
    const = left[0] - right[0]
    coeffs = dict(left[1])
    for v, c in right[1].items():
        coeffs[v] = coeffs.get(v, Fraction(0)) - c
    coeffs = {v: c for v, c in coeffs.items() if c != 0}
    if not coeffs:
        return Trivial() if const == 0 else Contradiction()
    x = min(coeffs)
    cx = coeffs[x]
    rest_const = -const / cx
    rest_coeffs = {v: -c / cx for v, c in coeffs.items() if v != x}
    return Pivot(x, _affine_term(rest_const, rest_coeffs))


# ---------------------------------------------------------------------------
# split / step / aux


@dataclass(frozen=True)
class SplitState:
    """A store partitioned into passive and active lists under a substitution."""

    passive: tuple[Formula, ...]
    active: tuple[Formula, ...]
    subst: JSubst


def aux(sigma, step, split, J: Algebra):
    """Maximal repetition of split-then-step until no active constraints remain."""
    finished = []
    work = [sigma]
    while work:
        current = work.pop(0)
        ss = split(current, J)
        if not ss.active:
            finished.append(current)
        else:
            work.extend(step(ss, J))
    return dedup(finished)


class InferPolicy:
    """Base for the shipped store-management policies."""

    name = "?"
    algebras: tuple[str, ...] | None = None  # None: any algebra

    def special(self, sigma, J: Algebra) -> bool:
        raise NotImplementedError

    def apply(self, sigma, J: Algebra):
        raise NotImplementedError

    def check_algebra(self, J: Algebra) -> None:
        if self.algebras is not None and J.name not in self.algebras:
            raise ValueError(
                f"policy {self.name!r} is only sound over {'/'.join(self.algebras)}, "
                f"not {J.name}"
            )

    def __repr__(self):
        return f"<policy {self.name}>"


class StorePolicy(InferPolicy):
    """aux-driven policy: error/{}/inconsistent handled first, then propagation."""

    def admits(self, f: Formula) -> bool:
        raise NotImplementedError

    def resolve(self, f: Formula, theta: JSubst, J: Algebra):
        """('bind', theta') | ('drop',) | ('fail',) | ('passive',) for one constraint."""
        raise NotImplementedError

    def special(self, sigma, J: Algebra) -> bool:
        if sigma is ERROR:
            return False
        return all(self.admits(f) for f in sigma.store)

    def split(self, sigma, J: Algebra) -> SplitState:
        passive = []
        active = []
        for f in sigma.store:
            if self.resolve(f, sigma.subst, J)[0] == "passive":
                passive.append(f)
            else:
                active.append(f)
        return SplitState(tuple(passive), tuple(active), sigma.subst)

    def step(self, ss: SplitState, J: Algebra):
        if not ss.active:
            return (Pair(Store(ss.passive), ss.subst),)
        f = ss.active[-1]
        rest = ss.passive + ss.active[:-1]
        outcome = self.resolve(f, ss.subst, J)
        if outcome[0] == "bind":
            return (Pair(Store(rest), outcome[1]),)
        if outcome[0] == "drop":
            return (Pair(Store(rest), ss.subst),)
        if outcome[0] == "fail":
            return ()
        raise AssertionError("step reached a passive constraint")

    def apply(self, sigma, J: Algebra):
        if sigma is ERROR:
            return (ERROR,)
        if len(sigma.store) == 0:
            return (sigma,)
        if classify(sigma, J) is Classification.INCONSISTENT:
            return ()
        if not self.special(sigma, J):
            return (ERROR,)
        return aux(sigma, self.step, self.split, J)


class UnifyPolicy(StorePolicy):
    """Equations as active constraints: every step is a unification."""

    name = "unify"
    algebras = ("herbrand",)

    def admits(self, f):
        return isinstance(f, Eq)

    def resolve(self, f, theta, J):
        eta = mgu(apply_subst(f.lhs, theta), apply_subst(f.rhs, theta))
        if eta is None:
            return ("fail",)
        return ("bind", compose(theta, eta, J))


class AtomsPolicy(StorePolicy):
    """Atoms as passive constraints: whatever would evaluate to error waits."""

    name = "atoms"

    def admits(self, f):
        lit = as_literal(f)
        return lit is not None and lit[0]

    def resolve(self, f, theta, J):
        if isinstance(f, Eq):
            outcome = equation_step(f.lhs, f.rhs, theta, J)
            return ("passive",) if outcome[0] == "error" else outcome
        truth = atom_truth(f, theta, J)
        if truth is None:
            return ("passive",)
        return ("drop",) if truth else ("fail",)


class LiteralsPolicy(StorePolicy):
    """Atoms-as-passive extended with negative literals as passive constraints."""

    name = "literals"

    def admits(self, f):
        return as_literal(f) is not None

    def resolve(self, f, theta, J):
        if isinstance(f, Eq):
            outcome = equation_step(f.lhs, f.rhs, theta, J)
            return ("passive",) if outcome[0] == "error" else outcome
        truth = literal_truth(f, theta, J)
        if truth is None:
            return ("passive",)
        return ("drop",) if truth else ("fail",)


class DiseqPolicy(StorePolicy):
    """Equality and disequality constraints over Herbrand.

    Equations are always active (full unification); a disequation is active
    when it is ground under the substitution or both sides coincide.
    """

    name = "diseq"
    algebras = ("herbrand",)

    def admits(self, f):
        lit = as_literal(f)
        return lit is not None and isinstance(lit[1], Eq)

    def resolve(self, f, theta, J):
        if isinstance(f, Eq):
            eta = mgu(apply_subst(f.lhs, theta), apply_subst(f.rhs, theta))
            if eta is None:
                return ("fail",)
            return ("bind", compose(theta, eta, J))
        _, eq = as_literal(f)
        sa = apply_subst(eq.lhs, theta)
        ta = apply_subst(eq.rhs, theta)
        if sa == ta:
            return ("fail",)
        if term_is_ground(sa) and term_is_ground(ta):
            return ("drop",)  # ground and distinct: the disequation holds
        return ("passive",)


class LinearPolicy(StorePolicy):
    """Linear equations active (Gaussian elimination), non-linear ones passive."""

    name = "linear"
    algebras = ("rat",)

    def admits(self, f):
        return isinstance(f, Eq)

    def resolve(self, f, theta, J):
        shape = rewrite_linear(f, theta, J)
        if isinstance(shape, Trivial):
            return ("drop",)
        if isinstance(shape, Contradiction):
            return ("fail",)
        if isinstance(shape, Pivot):
            eta = make_subst([(shape.var, shape.expr)], J)
            return ("bind", compose(theta, eta, J))
        return ("passive",)


# ---------------------------------------------------------------------------
# The baseline (store-free) policy


def _literal_lift(f: Formula, theta: JSubst, J: Algebra):
    """Baseline resolution of a single atomic constraint to an answer set."""
    if isinstance(f, Eq):
        outcome = equation_step(f.lhs, f.rhs, theta, J)
        if outcome[0] == "bind":
            return (pair((), outcome[1]),)
        if outcome[0] == "drop":
            return (pair((), theta),)
        if outcome[0] == "fail":
            return ()
        return (ERROR,)
    truth = literal_truth(f, theta, J)
    if truth is None:
        return (ERROR,)
    return (pair((), theta),) if truth else ()


def baseline_infer(sigma, J: Algebra):
    """The reference infer: singleton atomic stores resolved, all else errors."""
    if sigma is ERROR:
        return (ERROR,)
    if len(sigma.store) == 0:
        return (sigma,)
    if len(sigma.store) == 1:
        f = sigma.store.items[0]
        if isinstance(f, (Atom, Eq, Neq, Bottom)):
            return _literal_lift(f, sigma.subst, J)
    return (ERROR,)


class BaselinePolicy(InferPolicy):
    name = "baseline"
    algebras = None

    def special(self, sigma, J):
        return (
            sigma is not ERROR
            and len(sigma.store) == 1
            and isinstance(sigma.store.items[0], (Atom, Eq, Neq, Bottom))
        )

    def apply(self, sigma, J):
        return baseline_infer(sigma, J)


# module-level policy singletons and free-function views of split/step

BASELINE = BaselinePolicy()
UNIFY = UnifyPolicy()
ATOMS = AtomsPolicy()
LINEAR = LinearPolicy()
LITERALS = LiteralsPolicy()
DISEQ = DiseqPolicy()

POLICIES = {p.name: p for p in (BASELINE, UNIFY, ATOMS, LINEAR, LITERALS, DISEQ)}


def get_policy(name: str) -> InferPolicy:
    try:
        return POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown policy {name!r}; known: {', '.join(sorted(POLICIES))}")


def split_atoms(sigma, J: Algebra) -> SplitState:
    return ATOMS.split(sigma, J)


def step_atoms(ss: SplitState, J: Algebra):
    return ATOMS.step(ss, J)


def step_unify(ss: SplitState, J: Algebra):
    return UNIFY.step(ss, J)


def step_linear(ss: SplitState, J: Algebra):
    return LINEAR.step(ss, J)


def step_literals(ss: SplitState, J: Algebra):
    return LITERALS.step(ss, J)


def step_diseq(ss: SplitState, J: Algebra):
    return DISEQ.step(ss, J)


# ---------------------------------------------------------------------------
# The store-free reference semantics


def _max_fresh_index(names) -> int:
    top = 0
    for n in names:
        m = _FRESH_RE.match(n)
        if m:
            top = max(top, int(m.group(1)))
    return top


def storeless_eval(phi: Formula, theta: JSubst, J: Algebra):
    """The store-free reference semantics: a set of substitutions and errors.

    Atoms must be decidable under the current substitution or the whole
    evaluation degrades to the error state; the baseline policy embeds this
    semantics into the store-carrying evaluator.  Used as the reference
    side of the embedding differential test.
    """
    counter = [_max_fresh_index(all_names(phi) | subst_names(theta))]

    def fresh() -> str:
        counter[0] += 1
        return f"$u{counter[0]}"

    def rec(f: Formula, th: JSubst):
        if isinstance(f, (Atom, Eq, Neq, Bottom)):
            out = []
            for st in _literal_lift(f, th, J):
                out.append(ERROR if st is ERROR else st.subst)
            return dedup(out)
        if isinstance(f, And):
            out = []
            for r in rec(f.lhs, th):
                if r is ERROR:
                    out.append(ERROR)
                else:
                    out.extend(rec(f.rhs, r))
            return dedup(out)
        if isinstance(f, Or):
            return dedup(rec(f.lhs, th) + rec(f.rhs, th))
        if isinstance(f, Not):
            inner = rec(f.body, th)
            if not inner:
                return (th,)
            if th in inner:
                return ()
            return (ERROR,)
        if isinstance(f, Exists):
            u = fresh()
            out = []
            for r in rec(rename_free(f.body, f.var, u), th):
                out.append(ERROR if r is ERROR else drop_subst(u, r))
            return dedup(out)
        raise TypeError(f"not a formula: {f!r}")

    return rec(phi, theta)
