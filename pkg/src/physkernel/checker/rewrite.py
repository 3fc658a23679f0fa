"""Capture-aware rewriting over expression and proposition trees."""

from __future__ import annotations

import dataclasses
from typing import Callable

from ..lang import nodes as N


def _binder_name(node) -> str | None:
    if isinstance(node, (N.ForallFn, N.ForallFinite)):
        return node.var
    return None


def transform(node, fn: Callable, *, shadowed: frozenset[str] = frozenset()):
    """Rebuild ``node`` bottom-up, applying ``fn(node, shadowed)`` at each level.

    ``fn`` returns either a replacement node (taken as-is, not descended into)
    or None to keep the node with its children transformed.  Quantifier
    binders extend ``shadowed`` for their bodies.
    """
    replacement = fn(node, shadowed)
    if replacement is not None:
        return replacement
    inner = shadowed
    bound = _binder_name(node)
    if bound is not None:
        inner = shadowed | {bound}
    changed = {}
    for field in dataclasses.fields(node):
        value = getattr(node, field.name)
        new_value = _transform_value(value, fn, inner)
        if new_value is not value:
            changed[field.name] = new_value
    if not changed:
        return node
    return dataclasses.replace(node, **changed)


def _transform_value(value, fn, shadowed):
    if isinstance(value, N.Node):
        return transform(value, fn, shadowed=shadowed)
    if isinstance(value, tuple):
        items = tuple(_transform_value(v, fn, shadowed) for v in value)
        if all(a is b for a, b in zip(items, value)) and len(items) == len(value):
            return value
        return items
    return value


def subst_var(node, name: str, replacement: N.Expr):
    """Substitute ``replacement`` for every free occurrence of variable ``name``."""

    def visit(n, shadowed):
        if isinstance(n, N.Var) and n.name == name and name not in shadowed:
            return replacement
        return None

    return transform(node, visit)


def expand_fn(node, fname: str, binder: str, body: N.Expr):
    """Unfold ``fname`` applications: ``fname(arg)`` becomes ``body[binder := arg]``.

    Arguments are expanded before the body is instantiated, so nested
    applications unfold in one pass.  ``body`` must not apply ``fname``.
    """

    def visit(n, shadowed):
        if isinstance(n, N.Apply) and n.fn == fname:
            arg = transform(n.arg, visit, shadowed=shadowed)
            return subst_var(body, binder, arg)
        return None

    return transform(node, visit)


def rewrite_ground(node, pattern: N.Expr, replacement: N.Expr):
    """Replace every subtree structurally equal to ``pattern``."""

    def visit(n, shadowed):
        if isinstance(n, N.Expr) and N.ast_eq(n, pattern):
            return replacement
        return None

    return transform(node, visit)


def free_vars(node) -> set[str]:
    """Names of free variables (including function heads in Apply/Deriv)."""
    out: set[str] = set()

    def visit(n, shadowed):
        if isinstance(n, N.Var) and n.name not in shadowed:
            out.add(n.name)
        elif isinstance(n, (N.Apply, N.Deriv)) and n.fn not in shadowed:
            out.add(n.fn)
        return None

    transform(node, visit)
    return out


def applied_fns(node) -> set[str]:
    """Function names appearing as Apply or Deriv heads."""
    out: set[str] = set()

    def visit(n, shadowed):
        if isinstance(n, (N.Apply, N.Deriv)) and n.fn not in shadowed:
            out.add(n.fn)
        return None

    transform(node, visit)
    return out
