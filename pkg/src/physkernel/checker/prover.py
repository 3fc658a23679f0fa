"""The proof engine: automatic search and derivation-script replay.

Both entry points drive the same small-step engine, so an automatic proof is
replayable as a script and a script is checked with exactly the machinery
that found it.  A statement is first gated by the dimension checker; the
engine then works on a stack of subgoals, each carrying its hypotheses, its
accumulated variable bindings, and any constraints derived by coefficient
matching.

Soundness posture: equality goals close either by exact evaluation (with the
documented tolerance rule for approximate operands), by rational-function
identity, or by eliminating pivots of derived constraints; every division
performed symbolically is surfaced as a non-vanishing side condition, and a
Refuted verdict is only issued when the goal is *exactly* false under an
assignment forced by the hypotheses, all of which verify exactly true.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import (
    CyclicDefinitions, DivisionByZero, MalformedScript, ParseError,
    PhysKernelError,
)
from ..lang import nodes as N
from ..lang.printer import print_expr
from ..quantity import DEFAULT_CONTEXT, NumericContext, Quantity, compare_values
from ..unitdb import UnitDatabase, builtin_database
from . import ring
from .dims import DimReport, check_dimensions, resolve_statement
from .evaluate import eval_numeric, eval_prop
from .rewrite import applied_fns, expand_fn, free_vars, rewrite_ground, subst_var
from .script import (
    CaseSplit, ExactHyp, Instantiate, Intro, NumericCheck, PolyMatch,
    RingCheck, Split, Step, Subst,
)

# -- verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class SideCondition:
    """A non-vanishing claim a proof relies on.

    ``verified`` is True when the claim was checked numerically (possible
    only when it involves no statement variables), None when it is surfaced
    for the reader.
    """

    claim: str
    verified: bool | None


@dataclass(frozen=True)
class Proved:
    steps: tuple[Step, ...]
    approx_decided: bool
    side_conditions: tuple[SideCondition, ...]
    eval_count: int = 0

    kind = "proved"


@dataclass(frozen=True)
class Refuted:
    env: tuple[tuple[str, str], ...]
    detail: str

    kind = "refuted"


@dataclass(frozen=True)
class Unknown:
    reason: str
    dim_report: DimReport | None = None
    failed_step: int | None = None

    kind = "unknown"


Verdict = Proved | Refuted | Unknown


@dataclass(frozen=True)
class ProverConfig:
    ctx: NumericContext = DEFAULT_CONTEXT
    strict_cycles: bool = False
    max_elim_depth: int = 6


class _StepFailure(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# -- session state ------------------------------------------------------------------


@dataclass(frozen=True)
class _Hyp:
    name: str
    prop: N.Prop
    consumed: bool = False


@dataclass
class _Subgoal:
    goal: N.Prop
    hyps: list[_Hyp]
    derived: list[ring.Constraint] = field(default_factory=list)
    bindings: dict[str, N.Expr] = field(default_factory=dict)

    def clone(self, goal: N.Prop | None = None,
              hyps: list[_Hyp] | None = None) -> "_Subgoal":
        return _Subgoal(self.goal if goal is None else goal,
                        list(self.hyps) if hyps is None else hyps,
                        list(self.derived), dict(self.bindings))

    def hyp(self, name: str) -> _Hyp:
        for h in self.hyps:
            if h.name == name:
                return h
        raise MalformedScript(f"no hypothesis named '{name}' in scope")


def _flatten_and(p: N.Prop):
    if isinstance(p, N.And):
        yield from _flatten_and(p.lhs)
        yield from _flatten_and(p.rhs)
    else:
        yield p


def _flatten_or(p: N.Prop):
    if isinstance(p, N.Or):
        yield from _flatten_or(p.lhs)
        yield from _flatten_or(p.rhs)
    else:
        yield p


class _Session:
    def __init__(self, stmt: N.Statement, db: UnitDatabase,
                 config: ProverConfig):
        self.stmt = stmt
        self.db = db
        self.config = config
        self.subgoals: list[_Subgoal] = [
            _Subgoal(stmt.goal, [_Hyp(n, p) for n, p in stmt.hyps])
        ]
        self.trace: list[Step] = []
        self.sides: list[SideCondition] = []
        self.approx = False
        self.eval_count = 0
        self.intro_count = 0
        self.inst_counts: dict[str, int] = {}
        self.used_names = {d.name for d in stmt.decls}
        self.fn_decls = {d.name for d in stmt.decls if isinstance(d, N.FnDecl)}

    # -- shared helpers ---------------------------------------------------------

    def _eval_prop(self, p: N.Prop, env=None) -> tuple[bool, bool]:
        self.eval_count += 1
        return eval_prop(p, env or {}, self.db, self.config.ctx)

    def _eval_expr(self, e: N.Expr, env=None) -> Quantity:
        self.eval_count += 1
        return eval_numeric(e, env or {}, self.db, self.config.ctx)

    def _fresh(self, base: str) -> str:
        name, k = base, 0
        while name in self.used_names:
            k += 1
            name = f"{base}!{k}"
        self.used_names.add(name)
        return name

    # -- definitional classification ---------------------------------------------

    def _as_var_def(self, p: N.Prop) -> tuple[str, N.Expr] | None:
        if (isinstance(p, N.Eq) and isinstance(p.lhs, N.Var)
                and p.lhs.name not in self.fn_decls
                and p.lhs.name not in free_vars(p.rhs)):
            return p.lhs.name, p.rhs
        return None

    def _as_fn_def(self, p: N.Prop) -> tuple[str, str, N.Expr] | None:
        if not isinstance(p, N.ForallFn):
            return None
        body = p.body
        if (isinstance(body, N.Eq) and isinstance(body.lhs, N.Apply)
                and isinstance(body.lhs.arg, N.Var)
                and body.lhs.arg.name == p.var
                and body.lhs.fn not in applied_fns(body.rhs)):
            return body.lhs.fn, p.var, body.rhs
        return None

    def _as_ground_def(self, p: N.Prop) -> tuple[N.Expr, N.Expr] | None:
        if (isinstance(p, N.Eq) and isinstance(p.lhs, N.Apply)
                and p.lhs.fn not in applied_fns(p.rhs)
                and p.lhs.fn not in applied_fns(p.lhs.arg)):
            return p.lhs, p.rhs
        return None

    # -- side conditions -----------------------------------------------------------

    def _record_poly_side(self, poly: ring.Poly, claim: str) -> None:
        if any(s.claim == claim for s in self.sides):
            return
        atoms = ring.poly_atoms(poly)
        if any(a[0] in (ring._VAR, ring._OPAQUE) for a in atoms):
            self.sides.append(SideCondition(claim, None))
            return
        env = {}
        for a in atoms:
            rank, name = a
            if rank == ring._BASE:
                env[a] = Quantity.scalar(1)
            else:
                env[a] = Quantity.scalar(self.db.constant(name).value)
        total = Quantity.scalar(0)
        for mono, coeff in poly.items():
            term = Quantity.scalar(coeff)
            for a, e in mono:
                term = term.mul(env[a].pow(e, ctx=self.config.ctx),
                                ctx=self.config.ctx)
            total = total.add(term, ctx=self.config.ctx)
        cmp = compare_values(total.value, Fraction(0), self.config.ctx)
        if cmp.equal:
            raise _StepFailure(f"side condition failed: {claim}")
        if not cmp.exact:
            self.approx = True
        self.sides.append(SideCondition(claim, True))

    def _record_rf_sides(self, pairs) -> None:
        for rf, src in pairs:
            self._record_poly_side(rf.num, f"{src} ≠ 0")

    # -- step application -----------------------------------------------------------

    def apply(self, step: Step) -> Refuted | None:
        if not self.subgoals:
            raise MalformedScript("no goals remain open")
        sg = self.subgoals[0]
        if isinstance(step, Split):
            outcome = self._apply_split(sg)
        elif isinstance(step, Intro):
            outcome = self._apply_intro(sg)
        elif isinstance(step, CaseSplit):
            outcome = self._apply_cases(sg, step)
        elif isinstance(step, Subst):
            outcome = self._apply_subst(sg, step)
        elif isinstance(step, Instantiate):
            outcome = self._apply_inst(sg, step)
        elif isinstance(step, PolyMatch):
            outcome = self._apply_polymatch(sg, step)
        elif isinstance(step, RingCheck):
            outcome = self._apply_ring(sg)
        elif isinstance(step, NumericCheck):
            outcome = self._apply_numeric(sg)
        elif isinstance(step, ExactHyp):
            outcome = self._apply_exact(sg, step)
        else:
            raise MalformedScript(f"unknown step object {step!r}")
        self.trace.append(step)
        return outcome

    def _close(self) -> None:
        self.subgoals.pop(0)

    def _apply_split(self, sg: _Subgoal) -> None:
        if not isinstance(sg.goal, N.And):
            raise MalformedScript("'split' requires a conjunction goal")
        self.subgoals[0:1] = [sg.clone(goal=sg.goal.lhs),
                              sg.clone(goal=sg.goal.rhs)]
        return None

    def _apply_intro(self, sg: _Subgoal) -> None:
        g = sg.goal
        if isinstance(g, N.Implies):
            name = f"h!{self.intro_count + 1}"
            self.intro_count += 1
            sg.hyps = sg.hyps + [_Hyp(name, g.lhs)]
            sg.goal = g.rhs
            return None
        if isinstance(g, N.ForallFn):
            fresh = self._fresh(g.var)
            body = g.body
            if fresh != g.var:
                body = subst_var(body, g.var, N.Var(fresh))
            sg.goal = body
            return None
        raise MalformedScript(
            "'intro' requires an implication or quantified goal")

    def _case_branch_values(self, step: CaseSplit):
        return sorted(step.values)

    def _apply_cases(self, sg: _Subgoal, step: CaseSplit) -> None:
        g = sg.goal
        if (isinstance(g, N.ForallFinite) and g.var == step.var
                and sorted(g.values) == self._case_branch_values(step)):
            branches = [
                sg.clone(goal=subst_var(g.body, g.var, N.NumLit(v)))
                for v in step.values
            ]
            self.subgoals[0:1] = branches
            return None
        # Otherwise branch on a disjunctive hypothesis enumerating the values.
        for i, h in enumerate(sg.hyps):
            if h.consumed or not isinstance(h.prop, N.Or):
                continue
            leaves = list(_flatten_or(h.prop))
            vals = []
            for leaf in leaves:
                if (isinstance(leaf, N.Eq) and isinstance(leaf.lhs, N.Var)
                        and leaf.lhs.name == step.var
                        and isinstance(leaf.rhs, N.NumLit)):
                    vals.append(leaf.rhs.value)
                else:
                    vals = None
                    break
            if vals is None or sorted(vals) != self._case_branch_values(step):
                continue
            branches = []
            for v in step.values:
                case_hyp = _Hyp(h.name, N.Eq(N.Var(step.var), N.NumLit(v)))
                hyps = sg.hyps[:i] + [case_hyp] + sg.hyps[i + 1:]
                branches.append(sg.clone(hyps=hyps))
            self.subgoals[0:1] = branches
            return None
        raise MalformedScript(
            f"'cases {step.var}' matches neither the goal quantifier nor a "
            "disjunctive hypothesis")

    def _apply_subst(self, sg: _Subgoal, step: Subst) -> None:
        h = sg.hyp(step.hyp)
        var_def = self._as_var_def(h.prop)
        fn_def = self._as_fn_def(h.prop)
        ground = self._as_ground_def(h.prop)
        if var_def is not None:
            x, rhs = var_def
            rw = lambda p: subst_var(p, x, rhs)  # noqa: E731
        elif fn_def is not None:
            f, v, body = fn_def
            rw = lambda p: expand_fn(p, f, v, body)  # noqa: E731
        elif ground is not None:
            pattern, rhs = ground
            rw = lambda p: rewrite_ground(p, pattern, rhs)  # noqa: E731
        else:
            raise MalformedScript(
                f"'{step.hyp}' is not a definitional hypothesis")
        sg.goal = rw(sg.goal)
        sg.hyps = [
            hh if hh.name == h.name
            else dataclasses.replace(hh, prop=rw(hh.prop))
            for hh in sg.hyps
        ]
        sg.hyps = [
            dataclasses.replace(hh, consumed=True)
            if hh.name == h.name else hh
            for hh in sg.hyps
        ]
        if var_def is not None:
            x, rhs = var_def
            sg.bindings = {k: subst_var(e, x, rhs)
                           for k, e in sg.bindings.items()}
            sg.bindings[x] = rhs
        return None

    def _apply_inst(self, sg: _Subgoal, step: Instantiate) -> None:
        h = sg.hyp(step.hyp)
        if not isinstance(h.prop, N.ForallFn):
            raise MalformedScript(
                f"'{step.hyp}' is not a quantified hypothesis")
        n = self.inst_counts.get(step.hyp, 0) + 1
        self.inst_counts[step.hyp] = n
        prop = subst_var(h.prop.body, h.prop.var, step.arg)
        sg.hyps = sg.hyps + [_Hyp(f"{step.hyp}@{n}", prop)]
        return None

    def _fn_def_of(self, sg: _Subgoal, fname: str):
        for h in sg.hyps:
            d = self._as_fn_def(h.prop)
            if d is not None and d[0] == fname:
                return d
        return None

    def _apply_polymatch(self, sg: _Subgoal, step: PolyMatch) -> None:
        h = sg.hyp(step.hyp)
        p = h.prop
        if not (isinstance(p, N.Eq) and isinstance(p.lhs, N.Var)
                and isinstance(p.rhs, N.Var)
                and p.lhs.name in self.fn_decls
                and p.rhs.name in self.fn_decls):
            raise MalformedScript(
                f"'{step.hyp}' is not a function-equality hypothesis")
        sides = []
        bodies = []
        for fname in (p.lhs.name, p.rhs.name):
            d = self._fn_def_of(sg, fname)
            if d is None:
                raise _StepFailure(
                    f"no pointwise definition of '{fname}' is in scope")
            _, binder, body = d
            if step.param != binder:
                if step.param in free_vars(body) - {binder}:
                    raise _StepFailure(
                        f"parameter '{step.param}' collides with a free "
                        f"variable of the definition of '{fname}'")
                body = subst_var(body, binder, N.Var(step.param))
            bodies.append(body)
        try:
            match = ring.poly_coeff_eqs(bodies[0], bodies[1], step.param,
                                        self.db)
        except PhysKernelError as exc:
            raise _StepFailure(str(exc)) from exc
        self._record_rf_sides(match.sides)
        for eq in match.eqs:
            sg.derived.append(ring.Constraint(
                eq.poly, f"{step.hyp}[{step.param}^{eq.degree}]"))
        sg.hyps = [
            dataclasses.replace(hh, consumed=True)
            if hh.name == h.name else hh
            for hh in sg.hyps
        ]
        return None

    def _is_fn_equality(self, p: N.Prop) -> bool:
        return (isinstance(p, N.Eq) and isinstance(p.lhs, N.Var)
                and isinstance(p.rhs, N.Var)
                and p.lhs.name in self.fn_decls
                and p.rhs.name in self.fn_decls)

    def _apply_ring(self, sg: _Subgoal) -> None:
        g = sg.goal
        if not isinstance(g, N.Eq):
            raise MalformedScript("'ring' requires an equality goal")
        if self._is_fn_equality(g):
            raise _StepFailure(
                "ring arithmetic cannot decide function equality")
        try:
            goal_tr = ring.translate_difference(g.lhs, g.rhs, self.db)
        except PhysKernelError as exc:
            raise _StepFailure(str(exc)) from exc
        if goal_tr.rf.is_zero:
            self._record_rf_sides(goal_tr.sides)
            self._close()
            return None
        constraints: list[ring.Constraint] = []
        cons_sides: dict[str, list] = {}
        for h in sg.hyps:
            if h.consumed or self._is_fn_equality(h.prop):
                continue
            leaves = list(_flatten_and(h.prop))
            for j, leaf in enumerate(leaves):
                if not isinstance(leaf, N.Eq):
                    continue
                label = h.name if len(leaves) == 1 else f"{h.name}[{j}]"
                try:
                    tr = ring.translate_difference(leaf.lhs, leaf.rhs, self.db)
                except PhysKernelError:
                    continue
                if tr.rf.is_zero:
                    continue
                constraints.append(ring.Constraint.make(tr.rf.num, label))
                cons_sides[label] = tr.sides
        constraints.extend(sg.derived)
        ordered = list(reversed(constraints))
        found = ring.eliminate(goal_tr.rf, ordered,
                               self.config.max_elim_depth)
        if found is None:
            residual = goal_tr.rf.canonical().render()
            raise _StepFailure(
                "the goal does not follow by ring arithmetic; "
                f"residual: {residual}")
        self._record_rf_sides(goal_tr.sides)
        used = []
        for st in found.steps:
            used.append(st.label)
            self._record_poly_side(
                {m: c for m, c in st.nonzero},
                f"{ring.poly_render({m: c for m, c in st.nonzero})} ≠ 0")
        for label in used:
            base = label.split("[", 1)[0]
            for tr_sides in (cons_sides.get(label), cons_sides.get(base)):
                if tr_sides:
                    self._record_rf_sides(tr_sides)
        self._close()
        return None

    def _closure_env(self, sg: _Subgoal) -> dict[str, Quantity]:
        env: dict[str, Quantity] = {}
        pending = dict(sg.bindings)
        for _ in range(len(pending) + 1):
            for name, expr in list(pending.items()):
                if name in env:
                    continue
                if free_vars(expr) <= set(env):
                    env[name] = self._eval_expr(expr, env)
        return env

    def _apply_numeric(self, sg: _Subgoal) -> Refuted | None:
        g = sg.goal
        if isinstance(g, (N.ForallFn, N.ForallFinite)):
            raise MalformedScript(
                "'numeric' cannot decide a quantified goal")
        unbound = sorted(free_vars(g))
        if unbound:
            raise _StepFailure(
                "the goal still mentions "
                + ", ".join(f"'{v}'" for v in unbound)
                + "; 'numeric' needs a fully instantiated goal")
        try:
            truth, exact = self._eval_prop(g)
        except PhysKernelError as exc:
            raise _StepFailure(f"evaluation failed: {exc}") from exc
        if truth:
            if not exact:
                self.approx = True
            self._close()
            return None
        if not exact:
            raise _StepFailure(
                "the goal is false at the working precision, which is not "
                "exact enough to refute")
        return self._refute(sg)

    def _refute(self, sg: _Subgoal) -> Refuted:
        for h in sg.hyps:
            if h.consumed:
                continue  # definitional; true under the forced assignment
            if isinstance(h.prop, (N.ForallFn, N.ForallFinite)):
                raise _StepFailure(
                    f"goal is exactly false, but the quantified hypothesis "
                    f"'{h.name}' cannot be verified numerically")
            if free_vars(h.prop):
                raise _StepFailure(
                    f"goal is exactly false, but hypothesis '{h.name}' "
                    "still has unbound variables")
            try:
                truth, exact = self._eval_prop(h.prop)
            except PhysKernelError as exc:
                raise _StepFailure(
                    f"goal is exactly false, but hypothesis '{h.name}' "
                    f"failed to evaluate: {exc}") from exc
            if not truth:
                raise _StepFailure(
                    f"hypothesis '{h.name}' is false under the forced "
                    "assignment; the statement is vacuous there")
            if not exact:
                raise _StepFailure(
                    f"hypothesis '{h.name}' only verifies approximately; "
                    "approximate agreement never refutes")
        env_pairs = []
        closure = self._closure_env(sg)
        for name in sorted(closure):
            env_pairs.append((name, closure[name].render()))
        return Refuted(tuple(env_pairs),
                       "the goal is exactly false under the assignment "
                       "forced by the hypotheses")

    def _apply_exact(self, sg: _Subgoal, step: ExactHyp) -> None:
        h = sg.hyp(step.hyp)
        if not N.ast_eq(h.prop, sg.goal):
            raise _StepFailure(
                f"hypothesis '{step.hyp}' is not syntactically identical "
                "to the goal")
        self._close()
        return None


# -- statement-level constant overrides --------------------------------------------


def database_for(stmt: N.Statement, db: UnitDatabase | None = None,
                 ctx: NumericContext = DEFAULT_CONTEXT) -> UnitDatabase:
    """The unit database with the statement's constant overrides applied."""
    base = db or builtin_database()
    if not stmt.constants:
        return base
    overrides: dict[str, Quantity] = {}
    for name, expr in stmt.constants:
        existing = base.constants.get(name)
        if existing is not None and not existing.overridable:
            raise ParseError(f"constant '{name}' is not overridable")
        overrides[name] = eval_numeric(expr, {}, base, ctx)
    return base.with_constants(overrides)


# -- orientation ---------------------------------------------------------------------


def _orient(session: _Session, sg: _Subgoal) -> list[str]:
    """Order the definitional hypotheses for substitution.

    Variable and function definitions are accepted greedily in hypothesis
    order; a definition that would close a dependency cycle is demoted to an
    ordinary constraint (or rejected under strict_cycles).  Accepted
    definitions are emitted so that a definition precedes everything it
    mentions; ground rewrites follow in hypothesis order.
    """
    accepted: list[tuple[str, str, set[str]]] = []  # (hyp, symbol, deps)
    grounds: list[str] = []
    edges: dict[str, set[str]] = {}
    defined: set[str] = set()

    def reaches(start: str, target: str, seen: set[str]) -> bool:
        if start == target:
            return True
        if start in seen:
            return False
        seen.add(start)
        return any(reaches(n, target, seen) for n in edges.get(start, ()))

    for h in sg.hyps:
        if h.consumed:
            continue
        var_def = session._as_var_def(h.prop)
        fn_def = session._as_fn_def(h.prop)
        if var_def is not None:
            symbol, rhs = var_def
            deps = free_vars(rhs)
        elif fn_def is not None:
            symbol, binder, body = fn_def
            deps = free_vars(body) - {binder}
        else:
            if session._as_ground_def(h.prop) is not None:
                grounds.append(h.name)
            continue
        if symbol in defined:
            continue  # a second definition stays a constraint
        if any(reaches(d, symbol, set()) for d in deps):
            if session.config.strict_cycles:
                raise CyclicDefinitions((symbol, *sorted(deps & defined)))
            continue  # demoted: closing the loop stays a constraint
        edges[symbol] = set(deps)
        defined.add(symbol)
        accepted.append((h.name, symbol, set(deps)))

    # Kahn's algorithm: emit a definition before anything it mentions.
    emitted: list[str] = []
    remaining = list(accepted)
    while remaining:
        mentioned = set()
        for _, _, deps in remaining:
            mentioned |= deps
        batch = [entry for entry in remaining if entry[1] not in mentioned]
        if not batch:  # unreachable given the acyclicity check
            batch = [remaining[0]]
        first = batch[0]
        emitted.append(first[0])
        remaining.remove(first)
    return emitted + grounds


# -- entry points ----------------------------------------------------------------------


def _prepare(stmt: N.Statement, db: UnitDatabase | None,
             config: ProverConfig):
    cfg = config or ProverConfig()
    full_db = database_for(stmt, db, cfg.ctx)
    resolved = resolve_statement(stmt, full_db)
    report = check_dimensions(resolved, full_db)
    return cfg, full_db, resolved, report


def check_derivation(stmt: N.Statement, steps, db: UnitDatabase | None = None,
                     config: ProverConfig | None = None) -> Verdict:
    """Replay a derivation script against a statement."""
    cfg, full_db, resolved, report = _prepare(stmt, db, config)
    if not report.homogeneous:
        return Unknown("the statement is not dimensionally homogeneous",
                       dim_report=report)
    steps = tuple(steps)
    session = _Session(resolved, full_db, cfg)
    for i, step in enumerate(steps):
        if not session.subgoals:
            raise MalformedScript("steps remain after all goals closed", i)
        try:
            outcome = session.apply(step)
        except _StepFailure as f:
            return Unknown(f.reason, failed_step=i)
        except MalformedScript as m:
            if m.step_index is None:
                raise MalformedScript(str(m), i) from None
            raise
        if isinstance(outcome, Refuted):
            return outcome
    if session.subgoals:
        return Unknown(f"{len(session.subgoals)} goal(s) remain open",
                       failed_step=len(steps))
    return Proved(tuple(session.trace), session.approx, tuple(session.sides),
                  session.eval_count)


def auto_prove(stmt: N.Statement, db: UnitDatabase | None = None,
               config: ProverConfig | None = None) -> Verdict:
    """Search for a proof; any Proved verdict carries a replayable script."""
    cfg, full_db, resolved, report = _prepare(stmt, db, config)
    if not report.homogeneous:
        return Unknown("the statement is not dimensionally homogeneous",
                       dim_report=report)
    session = _Session(resolved, full_db, cfg)
    while session.subgoals:
        sg = session.subgoals[0]
        step = _structural_step(session, sg)
        if step is not None:
            session.apply(step)  # structural steps cannot fail here
            continue
        outcome = _leaf(session, sg)
        if outcome is not None:
            return outcome
    return Proved(tuple(session.trace), session.approx, tuple(session.sides),
                  session.eval_count)


def _structural_step(session: _Session, sg: _Subgoal) -> Step | None:
    for h in sg.hyps:
        if not h.consumed and N.ast_eq(h.prop, sg.goal):
            return ExactHyp(h.name)
    g = sg.goal
    if isinstance(g, N.And):
        return Split()
    if isinstance(g, N.ForallFinite):
        return CaseSplit(g.var, g.values)
    if isinstance(g, (N.Implies, N.ForallFn)):
        return Intro()
    return None


def _leaf(session: _Session, sg: _Subgoal) -> Verdict | None:
    """Close the focused comparison subgoal, or report why it stays open."""
    for name in _orient(session, sg):
        session.apply(Subst(name))

    # Function-equality hypotheses contribute coefficient constraints.
    for h in list(sg.hyps):
        if h.consumed or not session._is_fn_equality(h.prop):
            continue
        d = session._fn_def_of(sg, h.prop.lhs.name)
        if d is None:
            continue
        probe = PolyMatch(h.name, d[1])
        saved = (list(sg.hyps), list(sg.derived), list(session.sides))
        try:
            session.apply(probe)
        except (_StepFailure, MalformedScript):
            sg.hyps, sg.derived = saved[0], saved[1]
            session.sides[:] = saved[2]
            continue

    g = sg.goal
    if isinstance(g, N.Or):
        return Unknown("disjunctive goals require a derivation script")
    if session._is_fn_equality(g):
        return Unknown("function-equality goals close only via an "
                       "identical hypothesis")
    if not isinstance(g, (N.Eq, N.Ne, N.Le, N.Lt)):
        return Unknown(f"no automatic rule applies to this goal shape "
                       f"({type(g).__name__})")
    if not free_vars(g):
        try:
            outcome = session.apply(NumericCheck())
        except _StepFailure as f:
            return Unknown(f.reason)
        return outcome if isinstance(outcome, Refuted) else None
    if isinstance(g, N.Eq):
        try:
            session.apply(RingCheck())
        except _StepFailure as f:
            return Unknown(f.reason)
        return None
    return Unknown("comparison goals with unbound variables cannot be "
                   "decided automatically")
