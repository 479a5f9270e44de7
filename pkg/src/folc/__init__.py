"""First-order formula evaluation over pluggable algebras with a
constraint-store semantics, six store-management policies and a bounded
ground-truth oracle."""

from .algebra import (
    Algebra,
    EMPTY_SUBST,
    JSubst,
    apply_subst,
    atom_truth,
    compose,
    herbrand_algebra,
    int_algebra,
    j_eval,
    make_subst,
    parse_subst,
    rat_algebra,
)
from .infer import (
    POLICIES,
    storeless_eval,
    aux,
    baseline_infer,
    get_policy,
    mgu,
    rewrite_linear,
)
from .oracle import (
    DepthBound,
    IntervalBound,
    check_soundness,
    models,
    satisfiable,
)
from .semantics import EvalContext, eval_set, evaluate, make_context
from .state import (
    ERROR,
    EMPTY_STORE,
    Classification,
    Pair,
    Store,
    classify,
    cons,
    cons_plus,
    drop_state,
    drop_subst,
    pair,
)
from .syntax import (
    Atom,
    And,
    App,
    BOTTOM,
    Bottom,
    Eq,
    Exists,
    Formula,
    Neq,
    Not,
    Or,
    ParseError,
    Signature,
    Term,
    Val,
    Var,
    formula_to_str,
    free_vars,
    parse_formula,
    parse_term,
    rename_free,
    term_to_str,
)

__all__ = [n for n in dir() if not n.startswith("_")]
