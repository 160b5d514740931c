"""Seeded random inputs for tests and the CLI.

All generation is driven by ``random.Random(seed)`` and rational-valued so
the same seed yields the same functions in both scalar backends: the exact
values are small dyadic rationals, the float values are their (exact)
binary representations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .scalars import ExactComplex
from .stepfn import IntervalSet, PiecewiseAffineMap, StepFunction


def random_step_function(rng: random.Random, max_abs: float = 0.3,
                         max_segments: int = 3, span: int = 4,
                         exact: bool = False,
                         complex_values: bool = True) -> StepFunction:
    """Random rational step function with sup norm strictly below max_abs."""
    denom = 32
    # largest numerator keeping |re + i*im| < max_abs
    bound = int(max_abs * denom / (1.4142135623730951 if complex_values else 1.0))
    bound = max(bound, 1)
    n_segs = rng.randint(1, max_segments)
    cuts = sorted(rng.sample(range(0, 4 * span + 1), 2 * n_segs))
    segs = []
    for i in range(n_segs):
        l = Fraction(cuts[2 * i], 4)
        r = Fraction(cuts[2 * i + 1], 4)
        if l == r:
            continue
        re = Fraction(rng.randint(-bound, bound), denom)
        im = Fraction(rng.randint(-bound, bound), denom) if complex_values else Fraction(0)
        if re == 0 and im == 0:
            re = Fraction(1, denom)
        v = ExactComplex(re, im) if exact else complex(re, im)
        segs.append((l, r, v))
    if not segs:
        return random_step_function(rng, max_abs, max_segments, span,
                                    exact, complex_values)
    return StepFunction.from_segments(segs)


def random_family(rng: random.Random, size: int, *, max_abs: float = 0.3,
                  exact: bool = False, span: int = 4) -> list[StepFunction]:
    """Pairwise-distinct random step functions."""
    out: list[StepFunction] = []
    while len(out) < size:
        f = random_step_function(rng, max_abs=max_abs, exact=exact, span=span)
        if f not in out:
            out.append(f)
    return out


_SLOPES = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
           Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-3, 2)]


def random_injective_operator(rng: random.Random, *, exact: bool = False,
                              max_pieces: int = 2,
                              max_attempts: int = 200):
    """Random weighted-composition operator with injective piecewise-affine
    map (disjoint piece images).  Returns a QuadOperator."""
    from .quantization import QuadOperator

    for _ in range(max_attempts):
        n = rng.randint(1, max_pieces)
        cuts = sorted(rng.sample(range(-8, 9), 2 * n))
        pieces = []
        for i in range(n):
            l, r = Fraction(cuts[2 * i]), Fraction(cuts[2 * i + 1])
            if l == r:
                break
            a = rng.choice(_SLOPES)
            b = Fraction(rng.randint(-4, 4))
            pieces.append((l, r, a, b))
        if len(pieces) != n:
            continue
        phi = PiecewiseAffineMap.from_pieces(pieces)
        images = sorted(p.image() for p in phi.pieces)
        if any(b0 < a1 for (_, a1), (b0, _) in zip(images, images[1:])):
            continue
        E = phi.domain()
        h_segs = []
        for l, r in E.intervals:
            re = Fraction(rng.randint(-8, 8), 16)
            im = Fraction(rng.randint(-8, 8), 16)
            if re == 0 and im == 0:
                re = Fraction(1, 2)
            v = ExactComplex(re, im) if exact else complex(re, im)
            h_segs.append((l, r, v))
        h = StepFunction.from_segments(h_segs)
        return QuadOperator(E, h, phi)
    raise RuntimeError("failed to draw an injective operator")


def reflection_operator(weight=0.9, exact: bool = False):
    """phi(x) = 1 - x on [0, 1) with a real constant weight: the canonical
    operator whose quadratic quantization is self-adjoint."""
    from .quantization import QuadOperator

    E = IntervalSet.from_intervals([(0, 1)])
    v = ExactComplex.of(Fraction(weight) if not isinstance(weight, float)
                        else Fraction(weight)) if exact else complex(weight)
    h = StepFunction.from_segments([(0, 1, v)])
    phi = PiecewiseAffineMap.from_pieces([(0, 1, -1, 1)])
    return QuadOperator(E, h, phi)
