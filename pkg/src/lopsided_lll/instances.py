"""Ready-made systems: the five-trial running example and random small systems."""

from __future__ import annotations

import random
from fractions import Fraction

from .model import EQ, NE, Atom, EventExpr, EventSystem, VariableSpec


def example1(x=Fraction(1, 2)) -> EventSystem:
    """Five Bernoulli(x) trials X1..X5 (ids 0..4) and three events.

    E1 = (X1=0 or X3=1) and X2=0,  E2 = X3=1 and X4=0,  E3 = X4=1 and X5=0.
    """
    x = Fraction(x)
    variables = [VariableSpec.bernoulli(i, x) for i in range(5)]
    e1 = EventExpr(
        (
            (Atom(0, EQ, 0), Atom(1, EQ, 0)),
            (Atom(2, EQ, 1), Atom(1, EQ, 0)),
        )
    )
    e2 = EventExpr.conj(Atom(2, EQ, 1), Atom(3, EQ, 0))
    e3 = EventExpr.conj(Atom(3, EQ, 1), Atom(4, EQ, 0))
    return EventSystem.build(variables, [e1, e2, e3])


def _random_weights(rng: random.Random, k: int, allow_zero: bool) -> tuple:
    low = 0 if allow_zero else 1
    while True:
        raw = [rng.randint(low, 4) for _ in range(k)]
        if sum(raw):
            break
    total = sum(raw)
    return tuple(Fraction(r, total) for r in raw)


def random_system(
    rng: random.Random,
    max_vars: int = 4,
    max_domain: int = 3,
    max_events: int = 4,
    allow_zero_weights: bool = True,
) -> EventSystem:
    """Small random system for property sweeps.

    Events are random DNFs of one or two terms; conjunctions are biased
    towards several atoms so that a fair share of systems have low
    event probabilities.
    """
    l = rng.randint(1, max_vars)
    variables = []
    for i in range(l):
        k = rng.randint(1, max_domain)
        if rng.random() < 0.3:
            variables.append(VariableSpec.uniform(i, k))
        else:
            variables.append(VariableSpec(i, _random_weights(rng, k, allow_zero_weights and rng.random() < 0.2)))
    m = rng.randint(1, max_events)
    exprs = []
    for _ in range(m):
        roll = rng.random()
        if roll < 0.03:
            exprs.append(EventExpr.never())
            continue
        terms = []
        for _ in range(1 if roll < 0.65 else 2):
            width = rng.randint(1, l)
            chosen = rng.sample(range(l), width)
            term = []
            for v in chosen:
                k = variables[v].domain_size
                rel = NE if (k > 1 and rng.random() < 0.25) else EQ
                term.append(Atom(v, rel, rng.randrange(k)))
            terms.append(tuple(term))
        exprs.append(EventExpr(terms))
    return EventSystem.build(variables, exprs)
