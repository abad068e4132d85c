"""Strategy logic with history variables: construction, printing, bounded
evaluation."""

import pytest

from ratsynth.esl import (EslError, alternation_depth, build_solution_formula,
                          esl_eval_bounded, free_variables, pretty)
from ratsynth.fixtures import load_fixture
from ratsynth.ltl import parse

OBJS = (parse("p0"), parse("p1"), parse("p2"))

GOLDEN = {
    "ds": "(forall z1:1. forall z2:2. ([p1](y0,z1,z2) -> [p1](y0,y1,z2))"
          " & forall z1:1. forall z2:2. ([p2](y0,z1,z2) -> [p2](y0,z1,y2)))",
    "nash": "(forall z1:1. ([p1](y0,z1,y2) -> [p1](y0,y1,y2))"
            " & forall z2:2. ([p2](y0,y1,z2) -> [p2](y0,y1,y2)))",
    "spe": "forall h. (forall z1:1. ([p1](y0,z1,y2; h) -> [p1](y0,y1,y2; h))"
           " & forall z2:2. ([p2](y0,y1,z2; h) -> [p2](y0,y1,y2; h)))",
}


@pytest.mark.parametrize("gamma", sorted(GOLDEN))
def test_solution_formula_golden(gamma):
    psi, phi = build_solution_formula(gamma, OBJS)
    assert pretty(psi) == GOLDEN[gamma]
    assert pretty(phi) == ("exists y0:0. exists y1:1. exists y2:2. "
                           f"([p0](y0,y1,y2) & {GOLDEN[gamma]})")


@pytest.mark.parametrize("gamma", sorted(GOLDEN))
def test_solution_formula_shape(gamma):
    psi, phi = build_solution_formula(gamma, OBJS)
    assert alternation_depth(phi) == 1
    assert free_variables(phi) == frozenset()
    assert free_variables(psi) == frozenset({"y0", "y1", "y2"})


def test_unknown_concept_rejected():
    with pytest.raises(EslError):
        build_solution_formula("pareto", OBJS)


def test_bounded_eval_finds_fig1_nash_profile():
    arena = load_fixture("fig1")
    objectives = (parse("true"),) + tuple(load_fixture("fig1-F"))[1:]
    _, phi = build_solution_formula("nash", objectives)
    assert esl_eval_bounded(phi, arena, {}, memory_bound=1, history_bound=2)


def test_bounded_eval_rejects_unsatisfiable_system_objective():
    arena = load_fixture("fig1")
    objectives = (parse("false"),) + tuple(load_fixture("fig1-F"))[1:]
    _, phi = build_solution_formula("nash", objectives)
    assert not esl_eval_bounded(phi, arena, {}, memory_bound=1,
                                history_bound=2)


def test_unbound_variable_rejected():
    psi, _ = build_solution_formula("nash", OBJS)
    arena = load_fixture("fig1")
    with pytest.raises(EslError):
        esl_eval_bounded(psi, arena, {}, 1, 1)
