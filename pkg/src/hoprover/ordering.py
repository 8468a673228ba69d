"""Heuristic term ordering on beta-eta normal forms.

Only used to orient unit equations and to prune paramodulation; the
calculus makes no completeness claim that depends on it.  Terms are
compared by symbol count, then head precedence, then left to right on the
spine.  A term can only be greater than another if every free variable
occurs in it at least as often.
"""

from __future__ import annotations

from collections import Counter

from .terms import App, Bound, Const, Lam, Term, Var, head_args, is_logical

GENERATED_PREFIXES = ("sk", "def", "inj")


def precedence(c: Const) -> tuple:
    """Generated symbols above signature constants above logical ones.
    Within a class, alphabetically earlier names are greater."""
    if is_logical(c):
        cls = 0
    elif c.name.startswith(GENERATED_PREFIXES):
        cls = 2
    else:
        cls = 1
    return (cls, tuple(-ord(ch) for ch in c.name), len(c.name) * -1)


def _var_counts(t: Term, acc: Counter) -> Counter:
    if not t.has_vars:
        return acc
    if isinstance(t, Var):
        acc[t.id] += 1
    elif isinstance(t, Lam):
        _var_counts(t.body, acc)
    elif isinstance(t, App):
        _var_counts(t.head, acc)
        for a in t.args:
            _var_counts(a, acc)
    return acc


def greater(s: Term, t: Term) -> bool:
    if s == t:
        return False
    if t.has_vars:
        vs, vt = _var_counts(s, Counter()), _var_counts(t, Counter())
        if any(vs[k] < n for k, n in vt.items()):
            return False
    return _greater_nv(s, t)


def _greater_nv(s: Term, t: Term) -> bool:
    if s.size != t.size:
        return s.size > t.size
    if isinstance(s, Lam) and isinstance(t, Lam):
        return _greater_nv(s.body, t.body)
    if isinstance(s, Lam) or isinstance(t, Lam):
        return isinstance(s, Lam)
    hs, as_ = head_args(s)
    ht, at = head_args(t)
    if isinstance(hs, Var) or isinstance(ht, Var):
        return False
    if hs != ht:
        if isinstance(hs, Const) and isinstance(ht, Const):
            return precedence(hs) > precedence(ht)
        if isinstance(hs, Bound) and isinstance(ht, Bound):
            return hs.index < ht.index
        return isinstance(hs, Const)
    for a, b in zip(as_, at):
        if a != b:
            return _greater_nv(a, b)
    return len(as_) > len(at)


def compare(s: Term, t: Term) -> str | None:
    """'>', '<', '=' or None when incomparable."""
    if s == t:
        return "="
    if greater(s, t):
        return ">"
    if greater(t, s):
        return "<"
    return None
