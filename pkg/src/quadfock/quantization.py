"""Weighted-composition operators and their quadratic quantization.

An operator here is the normal form  T(f) = chi_E * h * (f o phi)  with a
support set E, a bounded weight h and a piecewise-affine map phi.  The
module provides the exact L^2 adjoint, matrix elements of the induced map
on exponential vectors, structural and numeric self-adjointness checks,
contraction certificates, and the dilation counter-example showing that
quantizing the adjoint differs from the adjoint of the quantization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .fock import FockConfig, exp_inner_closed, exp_inner_series, gram_matrix, gram_min_eig
from .scalars import ExactComplex
from .stepfn import (
    IntervalSet,
    PiecewiseAffineMap,
    StepFunction,
    compose,
    inner,
    is_measure_preserving,
    map_compose,
    map_invert,
    restrict,
    step_allclose,
    value_signature,
)


@dataclass(frozen=True)
class QuadOperator:
    """T(f) = chi_E * h * (f o phi).

    supp(h) must lie in E and phi's domain must cover E.  ||h||_inf <= 1 is
    *not* required at construction; it is one of the self-adjointness
    conditions checked later.
    """

    E: IntervalSet
    h: StepFunction
    phi: PiecewiseAffineMap

    def __post_init__(self):
        if not self.E.contains_set(self.h.support()):
            raise ValueError("supp(h) must be contained in E")
        if not self.phi.domain().contains_set(self.E):
            raise ValueError("phi's domain must cover E")

    def to_json(self) -> dict:
        return {"E": self.E.to_json(), "h": self.h.to_json(),
                "phi": self.phi.to_json()}

    @staticmethod
    def from_json(data: dict, exact: bool = False) -> "QuadOperator":
        return QuadOperator(IntervalSet.from_json(data["E"]),
                            StepFunction.from_json(data["h"], exact=exact),
                            PiecewiseAffineMap.from_json(data["phi"]))


def apply_operator(T: QuadOperator, f: StepFunction) -> StepFunction:
    """Exact evaluation of chi_E * h * (f o phi)."""
    return restrict(T.h * compose(f, T.phi), T.E)


def adjoint_operator(T: QuadOperator) -> QuadOperator:
    """Exact L^2 adjoint, computed per affine piece by change of variables.

    On the image of a piece with slope a:  (T* g)(y) =
    (1/|a|) * conj(h)(phi^-1(y)) * g(phi^-1(y)), so the adjoint is again a
    weighted-composition operator with map phi^-1 and weight
    |1/a| * conj(h) o phi^-1.  Requires phi injective on E.
    """
    phi_e = T.phi.restrict(T.E)
    phi_inv = map_invert(phi_e)
    e_star = phi_inv.domain()
    weight = StepFunction.zero()
    h_conj = T.h.conj()
    exact = any(isinstance(v, ExactComplex) for _, _, v in T.h.segments)
    for p in phi_inv.pieces:
        piece_map = PiecewiseAffineMap((p,))
        w = abs(p.slope)
        scale = w if exact else float(w)
        weight = weight + compose(h_conj, piece_map).scale(scale)
    return QuadOperator(e_star, weight, phi_inv)


def dilation_operator(radius, factor=2, one=1.0) -> QuadOperator:
    """(T f)(x) = f(factor * x) on the window E = [-radius, radius).

    ``one`` selects the scalar backend for the unit weight."""
    E = IntervalSet.from_intervals([(-radius, radius)])
    h = E.indicator(one)
    phi = PiecewiseAffineMap.from_pieces([(-radius, radius, factor, 0)])
    return QuadOperator(E, h, phi)


def window_radius(*fs: StepFunction, minimum=2) -> Fraction:
    """Window half-width making chi_E act as the identity on the inputs:
    at least twice the largest breakpoint magnitude."""
    r = Fraction(minimum)
    for f in fs:
        for p in f.breakpoints():
            r = max(r, 2 * abs(p))
    return r


# ---------------------------------------------------------------------------
# Gamma_2 matrix elements
# ---------------------------------------------------------------------------


def gamma2_matrix_element(T: QuadOperator, f: StepFunction, g: StepFunction,
                          cfg: FockConfig) -> complex:
    """<Gamma_2(T) Psi(f), Psi(g)> = <Psi(T f), Psi(g)>."""
    if not _admissible(f):
        raise DomainError("sup norm of f >= 1/2")
    tf = apply_operator(T, f)
    if not _admissible(tf):
        raise DomainError("sup norm of T f >= 1/2; Gamma_2(T) Psi(f) undefined")
    return exp_inner_closed(tf, g, cfg)


def _admissible(f: StepFunction) -> bool:
    from .fock import exp_vector_exists
    return exp_vector_exists(f)


# ---------------------------------------------------------------------------
# Self-adjointness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelfAdjointReport:
    """Structural conditions for Gamma_2(T) = Gamma_2(T)*."""

    involutive: bool
    maps_into: bool
    measure_preserving: bool
    weight_bounded: bool
    weight_symmetric: bool

    @property
    def verdict(self) -> bool:
        return (self.involutive and self.maps_into and self.measure_preserving
                and self.weight_bounded and self.weight_symmetric)

    def to_dict(self) -> dict:
        return {
            "involutive": self.involutive,
            "maps_into": self.maps_into,
            "measure_preserving": self.measure_preserving,
            "weight_bounded": self.weight_bounded,
            "weight_symmetric": self.weight_symmetric,
            "verdict": self.verdict,
        }


def check_selfadjoint_structure(T: QuadOperator, tol: float = 0.0) -> SelfAdjointReport:
    """Evaluate the five structural conditions, exactly where possible:
    phi involutive on E, phi(E) inside E, phi measure preserving,
    ||h||_inf <= 1, and conj(h) = h o phi on E."""
    phi_e = T.phi.restrict(T.E)
    maps_into = T.E.contains_set(phi_e.image())

    involutive = False
    if maps_into:
        phi2 = map_compose(phi_e, phi_e)
        involutive = phi2.is_identity() and phi2.domain().contains_set(T.E)

    mp = is_measure_preserving(T.phi, T.E, tol)

    sup_sq = T.h.sup_norm_sq()
    if isinstance(sup_sq, Fraction):
        weight_bounded = sup_sq <= 1
    else:
        weight_bounded = float(sup_sq) <= 1 + tol

    h_pulled = restrict(compose(T.h, phi_e), T.E)
    weight_symmetric = step_allclose(T.h.conj(), h_pulled, tol)

    return SelfAdjointReport(involutive, maps_into, mp.ok,
                             weight_bounded, weight_symmetric)


@dataclass(frozen=True)
class SelfAdjointNumericReport:
    """Numeric evidence for / against self-adjointness of Gamma_2(T).

    ``hermitian_defect`` is max |M_ij - conj(M_ji)| for the matrix
    M_ij = <Psi(T f_i), Psi(f_j)>.  ``adjoint_defect`` compares against the
    quantized L^2 adjoint, max |M_ij - conj(<Psi(T* f_j), Psi(f_i)>)|; for
    the dilation this is exactly the counter-example gap even on a single
    test function, where the plain Hermitian defect vanishes.
    ``moment_defect`` is max_n,i,j |<(T f_i)^n, f_j^n> - <f_i^n, (T f_j)^n>|.
    ``exact_zero`` certifies a zero defect through exact value-signature
    rearrangement, independent of floating point.
    """

    hermitian_defect: float
    adjoint_defect: float
    moment_defect: float
    exact_zero: bool

    @property
    def defect(self) -> float:
        return max(self.hermitian_defect, self.adjoint_defect)

    def to_dict(self) -> dict:
        return {
            "hermitian_defect": self.hermitian_defect,
            "adjoint_defect": self.adjoint_defect,
            "moment_defect": self.moment_defect,
            "exact_zero": self.exact_zero,
            "defect": self.defect,
        }


def _log_signatures_equal(u: StepFunction, w: StepFunction) -> bool:
    # equal value->length signatures force equal integrals of log(1 - 4 v)
    return value_signature(u) == value_signature(w)


def check_selfadjoint_numeric(T: QuadOperator, family: Sequence[StepFunction],
                              cfg: FockConfig, depth: int = 8) -> SelfAdjointNumericReport:
    """Moment-identity and matrix-element defects of Gamma_2(T) over a family."""
    tf = [apply_operator(T, f) for f in family]
    for i, (f, g) in enumerate(zip(family, tf)):
        if not (_admissible(f) and _admissible(g)):
            raise DomainError(f"family member {i} or its image is inadmissible")

    T_star = adjoint_operator(T)
    tsf = [apply_operator(T_star, f) for f in family]

    herm = 0.0
    adj = 0.0
    exact_zero = True
    n = len(family)
    M = np.empty((n, n), dtype=complex)
    Ms = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            M[i, j] = exp_inner_closed(tf[i], family[j], cfg)
            if not _admissible(tsf[j]):
                raise DomainError(f"adjoint image of member {j} is inadmissible")
            Ms[i, j] = exp_inner_closed(tsf[j], family[i], cfg)
    for i in range(n):
        for j in range(n):
            herm = max(herm, float(abs(M[i, j] - M[j, i].conjugate())))
            adj = max(adj, float(abs(M[i, j] - Ms[i, j].conjugate())))
            u_ij = tf[i].conj() * family[j]
            if not _log_signatures_equal(u_ij, (tf[j].conj() * family[i]).conj()):
                exact_zero = False
            if not _log_signatures_equal(u_ij, (tsf[j].conj() * family[i]).conj()):
                exact_zero = False

    moment = 0
    for i in range(n):
        for j in range(n):
            for k in range(1, depth + 1):
                lhs = inner(tf[i] ** k, family[j] ** k)
                rhs = inner(family[i] ** k, tf[j] ** k)
                diff = lhs - rhs
                if diff != 0:
                    exact_zero = False
                moment = max(moment, abs(complex(diff)))

    return SelfAdjointNumericReport(herm, adj, float(moment), exact_zero)


# ---------------------------------------------------------------------------
# Homomorphism / power behaviour
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerCheckReport:
    """Whether (T f)^m = T(f^m) for m = 2..M, and the same for T*."""

    operator_equal: dict[int, bool]
    adjoint_equal: dict[int, bool]

    def to_dict(self) -> dict:
        return {
            "operator_equal": {str(k): v for k, v in self.operator_equal.items()},
            "adjoint_equal": {str(k): v for k, v in self.adjoint_equal.items()},
        }


def check_homomorphism_powers(T: QuadOperator, f: StepFunction,
                              M: int) -> PowerCheckReport:
    if M < 2:
        raise ValueError("M must be >= 2")
    T_star = adjoint_operator(T)
    op_eq: dict[int, bool] = {}
    adj_eq: dict[int, bool] = {}
    for m in range(2, M + 1):
        op_eq[m] = (apply_operator(T, f) ** m) == apply_operator(T, f ** m)
        adj_eq[m] = (apply_operator(T_star, f) ** m) == apply_operator(T_star, f ** m)
    return PowerCheckReport(op_eq, adj_eq)


# ---------------------------------------------------------------------------
# Derivative identity and contraction checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivativeCheckReport:
    derivative: float
    expected: float            # 2c ||sum alpha_i f_i||^2
    expected_as_stated: float  # the uncorrected constant c
    abs_error: float
    rel_error: float
    ratio_to_stated: float

    def to_dict(self) -> dict:
        return {
            "derivative": self.derivative,
            "expected": self.expected,
            "expected_as_stated": self.expected_as_stated,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "ratio_to_stated": self.ratio_to_stated,
        }


def lemma4_derivative_check(family: Sequence[StepFunction],
                            coeffs: Sequence[complex],
                            cfg: FockConfig,
                            t0: float = 1.0) -> DerivativeCheckReport:
    """d/dt at 0 of the Gram quadratic form versus 2c ||sum alpha_i f_i||^2.

    The quadratic form q(t) = sum conj(a_i) a_j <Psi(sqrt(t) f_i),
    Psi(sqrt(t) f_j)> extends analytically to small negative t, so q'(0) is
    estimated by Richardson-extrapolated central differences at
    t in {2^-6, 2^-7, 2^-8} * t0.  The published constant is c, not 2c;
    both are reported and the ratio exposes the factor-2 discrepancy.
    """
    if len(family) != len(coeffs):
        raise ValueError("family and coeffs must have equal length")
    alpha = np.asarray([complex(a) for a in coeffs])

    def q(t: float) -> float:
        G = gram_matrix(family, cfg, t)
        return float((alpha.conj() @ G @ alpha).real)

    hs = [t0 * 2.0 ** (-6), t0 * 2.0 ** (-7), t0 * 2.0 ** (-8)]
    central = [(q(h) - q(-h)) / (2 * h) for h in hs]
    richardson = [(4 * d1 - d0) / 3 for d0, d1 in zip(central, central[1:])]
    deriv = richardson[-1]

    combo = StepFunction.zero()
    for a, f in zip(coeffs, family):
        combo = combo + f.scale(complex(a))
    norm_sq = float(combo.l2_norm_sq())

    c = float(cfg.c)
    expected = 2 * c * norm_sq
    stated = c * norm_sq
    abs_err = abs(deriv - expected)
    rel_err = abs_err / max(abs(expected), 1e-300)
    ratio = deriv / stated if stated != 0 else math.nan
    return DerivativeCheckReport(deriv, expected, stated, abs_err, rel_err, ratio)


@dataclass(frozen=True)
class ContractionGramReport:
    min_eig: float
    psd: bool

    def to_dict(self) -> dict:
        return {"min_eig": self.min_eig, "psd": self.psd}


def check_contraction_gram(T: QuadOperator, family: Sequence[StepFunction],
                           cfg: FockConfig, t: float = 1.0) -> ContractionGramReport:
    """Finite-family certificate that Gamma_2(T) contracts the sampled span:
    the difference of Gram matrices G(f_i) - G(T f_i) must be PSD."""
    G = gram_matrix(family, cfg, t)
    G_T = gram_matrix([apply_operator(T, f) for f in family], cfg, t)
    D = G - G_T
    me = gram_min_eig(D, tol=max(cfg.tol, 1e-10))
    return ContractionGramReport(me, me >= -cfg.tol)


@dataclass(frozen=True)
class L2ContractionReport:
    max_ratio: float
    ratios: tuple[float, ...]
    contraction: bool

    def to_dict(self) -> dict:
        return {"max_ratio": self.max_ratio, "ratios": list(self.ratios),
                "contraction": self.contraction}


def check_l2_contraction(T: QuadOperator, samples: Sequence[StepFunction],
                         tol: float = 1e-12) -> L2ContractionReport:
    """max ||T f||_2 / ||f||_2 over the nonzero samples."""
    ratios = []
    for f in samples:
        nf = f.l2_norm()
        if nf == 0:
            continue
        ratios.append(apply_operator(T, f).l2_norm() / nf)
    mx = max(ratios, default=0.0)
    return L2ContractionReport(mx, tuple(ratios), mx <= 1 + tol)


# ---------------------------------------------------------------------------
# The dilation counter-example
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    """Evidence that quantizing T* differs from the adjoint of Gamma_2(T)
    for the dilation (T f)(x) = f(2x)."""

    lhs: complex                 # <Gamma_2(T) Psi(f), Psi(g)>
    rhs: complex                 # <Psi(f), Gamma_2(T*) Psi(g)>
    gap: float
    lhs_series: complex
    lhs_tail: float
    rhs_series: complex
    rhs_tail: float
    adjoint_power_witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "gap": self.gap,
            "lhs_series": [self.lhs_series.real, self.lhs_series.imag],
            "lhs_tail": self.lhs_tail,
            "rhs_series": [self.rhs_series.real, self.rhs_series.imag],
            "rhs_tail": self.rhs_tail,
            "adjoint_power_witness": self.adjoint_power_witness,
        }


def default_counterexample_input() -> StepFunction:
    return StepFunction.indicator(0, 1, 0.25 + 0j)


def counterexample_report(cfg: FockConfig,
                          f: Optional[StepFunction] = None,
                          g: Optional[StepFunction] = None) -> CounterexampleReport:
    """Compute both pairings for the dilation, cross-checked by series.

    The right-hand side <Psi(f), Gamma_2(T*) Psi(g)> is evaluated through
    conjugate symmetry as conj(<Psi(T* g), Psi(f)>), so no adjoint on Fock
    space is ever needed.
    """
    if f is None:
        f = default_counterexample_input()
    if g is None:
        g = default_counterexample_input()
    R = window_radius(f, g)
    one = _unit_like(f, g)
    T = dilation_operator(R, 2, one)
    T_star = adjoint_operator(T)

    lhs = gamma2_matrix_element(T, f, g, cfg)
    rhs = gamma2_matrix_element(T_star, g, f, cfg).conjugate()

    lhs_series, lhs_tail = exp_inner_series(apply_operator(T, f), g, cfg)
    rs, rhs_tail = exp_inner_series(apply_operator(T_star, g), f, cfg)
    rhs_series = rs.conjugate()

    # k = 2 power witness: T*(g^2) = (1/2) g^2(./2) but (T* g)^2 = (1/4) g^2(./2)
    witness = {
        "adjoint_of_square": apply_operator(T_star, g ** 2).to_json(),
        "square_of_adjoint": (apply_operator(T_star, g) ** 2).to_json(),
        "equal": apply_operator(T_star, g ** 2) == apply_operator(T_star, g) ** 2,
    }

    return CounterexampleReport(
        lhs=lhs, rhs=rhs, gap=abs(lhs - rhs),
        lhs_series=lhs_series, lhs_tail=lhs_tail,
        rhs_series=rhs_series, rhs_tail=rhs_tail,
        adjoint_power_witness=witness,
    )


def _unit_like(*fs: StepFunction):
    for f in fs:
        for _, _, v in f.segments:
            if isinstance(v, ExactComplex):
                return ExactComplex.of(1)
    return 1.0 + 0.0j
