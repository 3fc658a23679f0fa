"""Prover: auto search, script replay, verdict taxonomy, side conditions."""

import textwrap
from fractions import Fraction

import pytest

from physkernel.checker.prover import (
    Proved, ProverConfig, Refuted, Unknown, auto_prove, check_derivation,
    database_for,
)
from physkernel.checker.script import (
    ExactHyp, MalformedScript, NumericCheck, RingCheck, Split, Subst,
    parse_script, print_script,
)
from physkernel.errors import CyclicDefinitions, ParseError
from physkernel.lang.parser import parse_statement


def stmt_of(body: str, db):
    return parse_statement(textwrap.dedent(body).strip() + "\n", db)


def test_concrete_chain_proves_and_replays(db):
    s = stmt_of("""
        theorem free_fall_depth
        (d : Length) (t : Time)
        (ht := t = 3 • second)
        (hd := d = (1/2) * g * t**2)
        : d = (441/10) • meter
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Proved)
    assert not v.approx_decided
    # The returned script replays to the same verdict through the replayer.
    replay = check_derivation(s, parse_script(print_script(v.steps), s, db), db)
    assert isinstance(replay, Proved)
    assert replay.eval_count == v.eval_count


def test_every_auto_corpus_entry_proves_and_replays(db, corpus_dir):
    from physkernel.corpus import Tier, load_corpus
    for entry in load_corpus(corpus_dir, db):
        if entry.tier is not Tier.AUTO:
            continue
        v = auto_prove(entry.statement, db)
        assert isinstance(v, Proved), f"{entry.name}: {v}"
        script = parse_script(print_script(v.steps), entry.statement, db)
        replay = check_derivation(entry.statement, script, db)
        assert isinstance(replay, Proved), f"{entry.name} replay: {replay}"


def test_orientation_is_order_insensitive(db):
    # Definitions arrive in reverse dependency order; orientation sorts them.
    s = stmt_of("""
        theorem chain
        (a : Real) (b : Real) (c : Real)
        (ha := a = b + 1)
        (hb := b = c * 2)
        (hc := c = 5)
        : a = 11
    """, db)
    assert isinstance(auto_prove(s, db), Proved)

    flipped = stmt_of("""
        theorem chain_flipped
        (a : Real) (b : Real) (c : Real)
        (hc := c = 5)
        (hb := b = c * 2)
        (ha := a = b + 1)
        : a = 11
    """, db)
    assert isinstance(auto_prove(flipped, db), Proved)


def test_cyclic_definitions_demote_to_constraints(db):
    s = stmt_of("""
        theorem cycle
        (x : Real) (y : Real)
        (hx := x = y + 1)
        (hy := y = x - 1)
        (hval := x = 4)
        : y = 3
    """, db)
    # Default mode: one direction is accepted, the cycle-closing hypothesis
    # stays a constraint, and the goal still follows.
    assert isinstance(auto_prove(s, db), Proved)
    with pytest.raises(CyclicDefinitions):
        auto_prove(s, db, config=ProverConfig(strict_cycles=True))


def test_ring_closure_counts_no_numeric_evaluations(db):
    s = stmt_of("""
        theorem rearrange
        (a : Real) (m_1 : Real) (m_2 : Real) (q : Real)
        (ha := a = m_2 * q / (m_1 + m_2))
        : a = (m_2 / (m_1 + m_2)) * q
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Proved)
    assert v.eval_count == 0
    assert any(isinstance(step, RingCheck) for step in v.steps)
    # The hidden non-vanishing assumption is surfaced, not silently used.
    assert any("m_1 + m_2" in sc.claim for sc in v.side_conditions)
    assert all(sc.verified is None for sc in v.side_conditions
               if "m_1" in sc.claim)


def test_concrete_side_conditions_are_verified(db):
    s = stmt_of("""
        theorem concrete_div
        (r : Real)
        (hr := r = 10 / 4)
        : r = 5/2
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Proved)
    assert all(sc.verified is not False for sc in v.side_conditions)


def test_refutation_carries_a_witness(db):
    s = stmt_of("""
        theorem wrong_sum
        (x : Length)
        (hx := x = 2 • meter)
        : x + x = 5 • meter
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Refuted)
    assert v.detail
    env = dict(v.env)
    assert "x" in env


def test_inhomogeneous_statement_reports_dimensions(db):
    s = stmt_of("""
        theorem bad_dims
        (x : Length) (t : Time)
        (h := x = t)
        : x = x
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Unknown)
    assert "homogeneous" in v.reason
    assert v.dim_report is not None
    assert not v.dim_report.homogeneous


def test_free_variable_comparison_stays_open(db):
    s = stmt_of("""
        theorem open_goal
        (x : Length)
        (h := x = x)
        : 0 • meter < x
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Unknown)
    assert "cannot be decided automatically" in v.reason


def test_disjunctive_goal_requires_a_script(db):
    s = stmt_of("""
        theorem pick_side
        (u : Real)
        (hu := u = 2)
        : u = 2 ∨ u = 7
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Unknown)
    assert "script" in v.reason


def test_script_replay_failure_pinpoints_step(db):
    s = stmt_of("""
        theorem two_facts
        (u : Real)
        (hu := u = 3)
        : u = 3 ∧ u < 4
    """, db)
    auto = auto_prove(s, db)
    assert isinstance(auto, Proved)

    # A subst naming a missing hypothesis is structurally malformed.
    with pytest.raises(MalformedScript) as exc:
        check_derivation(s, (Split(), Subst("nope")), db)
    assert exc.value.step_index == 1

    # A well-formed step that cannot close its goal fails at its own index.
    off = stmt_of("""
        theorem off_by_two
        (u : Real) (w : Real)
        (hu := u = w + 3)
        : u = w + 5
    """, db)
    v = check_derivation(off, (RingCheck(),), db)
    assert isinstance(v, Unknown)
    assert v.failed_step == 0
    assert "residual" in v.reason

    # A truncated script leaves goals open; the index points past the end.
    truncated = (Split(), Subst("hu"), NumericCheck())
    v2 = check_derivation(s, truncated, db)
    assert isinstance(v2, Unknown)
    assert "open" in v2.reason
    assert v2.failed_step == len(truncated)

    # Steps after the last goal closes are malformed, not silently ignored.
    full = tuple(auto.steps)
    with pytest.raises(MalformedScript):
        check_derivation(s, full + (ExactHyp("hu"),), db)


def test_exact_hypothesis_closes_immediately(db):
    s = stmt_of("""
        theorem by_assumption
        (f : Time -> Length) (g : Time -> Length)
        (h := f = g)
        : f = g
    """, db)
    v = auto_prove(s, db)
    assert isinstance(v, Proved)
    assert any(isinstance(step, ExactHyp) for step in v.steps)
    assert v.eval_count == 0


def test_statement_constants_override_database(db):
    s = stmt_of("""
        name: moon_fall
        constants: g = (8/5) • meter / second**2
        theorem moon_fall
        (d : Length) (t : Time)
        (ht := t = 5 • second)
        (hd := d = (1/2) * g * t**2)
        : d = 20 • meter
    """, db)
    local = database_for(s, db)
    assert local.constant("g").value == Fraction(8, 5)
    assert db.constant("g").value == Fraction(49, 5)  # base db untouched
    assert isinstance(auto_prove(s, db), Proved)


def test_non_overridable_constant_is_rejected(db):
    s = stmt_of("""
        name: bad_pi
        constants: pi = 3
        theorem bad_pi
        (u : Real)
        (h := u = 1)
        : u = 1
    """, db)
    with pytest.raises(ParseError, match="not overridable"):
        auto_prove(s, db)
