"""Random instance generators shared by the tests."""

from __future__ import annotations

import random

from sidocert.complex import ReflectionComplex, reflect_step, trivial


def random_trace_steps(k: int, rng: random.Random, max_vertices: int = 8, max_steps: int = 6) -> list:
    """Replayable (L, X) steps keeping the complex within ``max_vertices``."""
    M = trivial(k)
    steps = []
    for _ in range(rng.randint(0, max_steps)):
        room = max_vertices - len(M.vertices)
        if room <= 0:
            break
        L = rng.choice(sorted((sorted(e) for e in M.edges), key=lambda e: (len(e), e)))
        X = [v for v in L if rng.random() < 0.5]
        while len(L) - len(X) > room:
            X.append(rng.choice([v for v in L if v not in X]))
        M = reflect_step(M, L, X).after
        steps.append((frozenset(L), frozenset(X)))
    return steps


def random_complex(k: int, rng: random.Random, max_vertices: int = 8, max_steps: int = 6) -> ReflectionComplex:
    M = trivial(k)
    for L, X in random_trace_steps(k, rng, max_vertices, max_steps):
        M = reflect_step(M, L, X).after
    return M
