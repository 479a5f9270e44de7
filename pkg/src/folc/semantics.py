"""The denotational evaluator: states to answer sets, parameterized by a policy.

Atoms are pushed into the store and handed to the policy's infer; disjunction
is nondeterministic choice, conjunction sequential composition.  Negation
evaluates its body first and either keeps the input state, fails, or records
the negated formula as a constraint.  Existential quantification renames the
bound variable to a machine-fresh one and drops it from every surviving
state afterwards.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import Algebra, subst_names
from .infer import InferPolicy
from .state import ERROR, Pair, cons, cons_plus, dedup, drop_state
from .syntax import And, Atom, Bottom, Eq, Exists, Formula, Neq, Not, Or, all_names, rename_free

_FRESH_RE = re.compile(r"\$u(\d+)$")


@dataclass
class EvalContext:
    """Evaluation environment: algebra, policy, fresh-name counter, trace sink.

    The counter is primed past any $u<n> names already present in the
    inputs, so issued names are globally unused.
    """

    algebra: Algebra
    policy: InferPolicy
    fresh_counter: int = 0
    trace: object = None  # optional callable taking one dict per event

    def fresh_name(self) -> str:
        self.fresh_counter += 1
        return f"$u{self.fresh_counter}"

    def emit(self, event: dict) -> None:
        if self.trace is not None:
            self.trace(event)


def make_context(algebra: Algebra, policy: InferPolicy, trace=None) -> EvalContext:
    policy.check_algebra(algebra)
    return EvalContext(algebra=algebra, policy=policy, trace=trace)


def _prime_counter(ctx: EvalContext, phi: Formula, sigma) -> None:
    names = set(all_names(phi))
    if sigma is not ERROR:
        names |= subst_names(sigma.subst)
        for f in sigma.store:
            names |= all_names(f)
    top = ctx.fresh_counter
    for n in names:
        m = _FRESH_RE.match(n)
        if m:
            top = max(top, int(m.group(1)))
    ctx.fresh_counter = top


def evaluate(phi: Formula, sigma, ctx: EvalContext):
    """The meaning of phi in sigma: an answer set of states."""
    _prime_counter(ctx, phi, sigma)
    return _eval(phi, sigma, ctx)


def eval_set(phi: Formula, states, ctx: EvalContext):
    """Pointwise union of evaluate over a set of states (the conjunction lift)."""
    out = []
    for sigma in states:
        out.extend(_eval(phi, sigma, ctx))
    return dedup(out)


def _infer(sigma, ctx: EvalContext):
    result = ctx.policy.apply(sigma, ctx.algebra)
    ctx.emit(
        {
            "event": "infer",
            "policy": ctx.policy.name,
            "state": str(sigma),
            "output": [str(s) for s in result],
        }
    )
    return result


def _eval(phi: Formula, sigma, ctx: EvalContext):
    result = _eval_clause(phi, sigma, ctx)
    ctx.emit(
        {
            "event": "clause",
            "clause": type(phi).__name__.lower(),
            "formula": str(phi),
            "state": str(sigma),
            "output": [str(s) for s in result],
        }
    )
    return result


def _eval_clause(phi: Formula, sigma, ctx: EvalContext):
    if sigma is ERROR:
        return (ERROR,)  # there is no recovery from error
    J = ctx.algebra
    if isinstance(phi, (Atom, Eq, Neq, Bottom)):
        return dedup(_infer(Pair(sigma.store.add(phi), sigma.subst), ctx))
    if isinstance(phi, Or):
        return dedup(_eval(phi.lhs, sigma, ctx) + _eval(phi.rhs, sigma, ctx))
    if isinstance(phi, And):
        return eval_set(phi.rhs, _eval(phi.lhs, sigma, ctx), ctx)
    if isinstance(phi, Not):
        inner = _eval(phi.body, sigma, ctx)
        if not cons_plus(inner, J):
            return dedup(_infer(sigma, ctx))
        if any(st == sigma for st in cons(inner, J)):
            return ()
        return dedup(_infer(Pair(sigma.store.add(phi), sigma.subst), ctx))
    if isinstance(phi, Exists):
        u = ctx.fresh_name()
        inner = _eval(rename_free(phi.body, phi.var, u), sigma, ctx)
        out = []
        for st in cons_plus(inner, J):
            out.extend(_infer(drop_state(u, st), ctx))
        return dedup(out)
    raise TypeError(f"not a formula: {phi!r}")
