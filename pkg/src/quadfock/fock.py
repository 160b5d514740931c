"""Inner products in the quadratic Fock space.

The scalars ``m_k = <f^k, g^k>`` determine everything.  The n-particle
inner products ``a_n`` obey the recursion

    n * b_n = c * sum_{k=0}^{n-1} 2^(2k+1) * m_{k+1} * b_{n-k-1},
    b_n = a_n / (n!)^2,   b_0 = 1,

which is the log-derivative of the generating function

    F(t) = exp( (c/2) * sum_{k>=1} 4^k m_k t^k / k ),

whose value at t = 1 is the closed-form exponential-vector inner product
exp(-c/2 * integral of log(1 - 4 conj(f) g)).  The partition sum expresses
the coefficient of F directly; see ``n_particle_inner_partition`` for the
``corrected`` versus ``as_printed`` coefficient conventions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, NotHermitianError, UnconvergedError
from .scalars import conj_value
from .stepfn import StepFunction, inner, refine

ADMISSIBLE_SUP_SQ = Fraction(1, 4)  # existence radius: sup norm < 1/2


@dataclass(frozen=True)
class FockConfig:
    """Representation constant, series truncation depth and tolerance.

    ``c`` may be a Fraction for fully exact n-particle computations; it is
    never assumed to be 1.
    """

    c: object = 1.0
    depth: int = 40
    tol: float = 1e-10

    def __post_init__(self):
        if not (float(self.c) > 0):
            raise ValueError("c must be positive")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if not (self.tol > 0):
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class MomentSequence:
    """The scalars m_k = <f^k, g^k> for k = 1..K, with provenance."""

    entries: tuple
    f: StepFunction = field(default_factory=StepFunction.zero)
    g: StepFunction = field(default_factory=StepFunction.zero)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int):
        """m_k, 1-based as in the formulas."""
        if not 1 <= k <= len(self.entries):
            raise IndexError(f"moment index {k} out of range 1..{len(self.entries)}")
        return self.entries[k - 1]


def moments(f: StepFunction, g: StepFunction, K: int) -> MomentSequence:
    """m_k = <f^k, g^k> for k = 1..K, evaluated exactly on the refinement."""
    if K < 1:
        raise ValueError("K must be >= 1")
    entries = []
    fk, gk = f, g
    for k in range(1, K + 1):
        if k > 1:
            fk, gk = fk * f, gk * g
        entries.append(inner(fk, gk))
    return MomentSequence(tuple(entries), f, g)


def _b_sequence(m: MomentSequence, n: int, cfg: FockConfig) -> list:
    """Normalized coefficients b_0..b_n of the generating function."""
    c = cfg.c
    b = [1]
    for nn in range(1, n + 1):
        acc = 0
        for k in range(nn):
            acc = acc + (2 ** (2 * k + 1)) * (m[k + 1] * b[nn - k - 1])
        b.append((c / nn) * acc)
    return b


def n_particle_inner_rec(m: MomentSequence, n: int, cfg: FockConfig):
    """a_n = <B+^n_f Phi, B+^n_g Phi> via the moment recursion; a_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if len(m) < n:
        raise ValueError(f"need at least {n} moments, got {len(m)}")
    b = _b_sequence(m, n, cfg)
    return (math.factorial(n) ** 2) * b[n]


def n_particle_table(m: MomentSequence, n_max: int, cfg: FockConfig) -> "NParticleTable":
    b = _b_sequence(m, n_max, cfg)
    a = tuple((math.factorial(n) ** 2) * b[n] for n in range(n_max + 1))
    return NParticleTable(a, tuple(b))


@dataclass(frozen=True)
class NParticleTable:
    """a_n for n = 0..N together with b_n = a_n / (n!)^2."""

    a: tuple
    b: tuple


def partitions_multiplicity(n: int) -> Iterator[dict[int, int]]:
    """All multi-indices {j: i_j} with sum(j * i_j) = n, deterministic order.

    Enumeration is lexicographic in the part sizes chosen largest-first.
    """

    def rec(remaining: int, largest: int, current: dict[int, int]):
        if remaining == 0:
            yield dict(current)
            return
        for j in range(min(remaining, largest), 0, -1):
            current[j] = current.get(j, 0) + 1
            yield from rec(remaining - j, j, current)
            if current[j] == 1:
                del current[j]
            else:
                current[j] -= 1

    if n < 0:
        raise ValueError("n must be nonnegative")
    yield from rec(n, n, {})


def partition_coefficient(multi: dict[int, int], n: int, mode: str) -> Fraction:
    """Exact rational coefficient of prod_j m_j^{i_j} in a_n, without the
    c^{sum i_j} factor.

    ``corrected``:  (n!)^2 * 4^n * prod_j (1/(2j))^{i_j} / i_j!
    ``as_printed``: 2^(2n-1) * (n!)^2 / (prod_j i_j! * prod_{j>=2} j^{i_j})

    The two differ per multi-index by exactly 2^{(sum_j i_j) - 1}.
    """
    fact_sq = Fraction(math.factorial(n)) ** 2
    denom_fact = 1
    for j, ij in multi.items():
        denom_fact *= math.factorial(ij)
    if mode == "corrected":
        coef = fact_sq * (4 ** n)
        for j, ij in multi.items():
            coef *= Fraction(1, (2 * j) ** ij)
        return coef / denom_fact
    if mode == "as_printed":
        denom_pow = 1
        for j, ij in multi.items():
            if j >= 2:
                denom_pow *= j ** ij
        return fact_sq * (2 ** (2 * n - 1)) / Fraction(denom_fact * denom_pow)
    raise ValueError(f"unknown mode {mode!r}")


def partition_terms(m: MomentSequence, n: int, cfg: FockConfig,
                    mode: str = "corrected"):
    """Yields (multi_index, coefficient, term) in deterministic order."""
    c = cfg.c
    for multi in partitions_multiplicity(n):
        coef = partition_coefficient(multi, n, mode)
        q = sum(multi.values())
        term = coef * (c ** q)
        for j, ij in multi.items():
            term = term * (m[j] ** ij)
        yield multi, coef, term


def n_particle_inner_partition(m: MomentSequence, n: int, cfg: FockConfig,
                               mode: str = "corrected"):
    """a_n by direct partition sum.

    ``as_printed`` reproduces the published coefficient verbatim and is
    kept solely to make the discrepancy with the recursion auditable; it is
    undefined at n = 0.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        if mode == "as_printed":
            raise ValueError("as_printed coefficient is undefined at n = 0")
        return 1
    if len(m) < n:
        raise ValueError(f"need at least {n} moments, got {len(m)}")
    total = 0
    for _, _, term in partition_terms(m, n, cfg, mode):
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Exponential vectors
# ---------------------------------------------------------------------------


def exp_vector_exists(f: StepFunction) -> bool:
    """True iff the quadratic exponential vector of f exists: sup|f| < 1/2.

    The boundary sup|f| = 1/2 is rejected; that keeps every logarithm
    strictly off the branch point."""
    return abs_lt(f.sup_norm_sq(), ADMISSIBLE_SUP_SQ)


def abs_lt(value, bound) -> bool:
    if isinstance(value, Fraction) and isinstance(bound, Fraction):
        return value < bound
    return float(value) < float(bound)


def _require_admissible(*fs: StepFunction) -> None:
    bad = [i for i, f in enumerate(fs) if not exp_vector_exists(f)]
    if bad:
        raise DomainError(f"sup norm >= 1/2 for argument(s) {bad}; "
                          "exponential vector does not exist")


def _log_integral(f: StepFunction, g: StepFunction, t: float = 1.0) -> complex:
    """integral of log(1 - 4 t conj(f) g), principal branch, exact lengths."""
    total = 0.0 + 0.0j
    for l, r, vf, vg in refine(f, g):
        if vf == 0 or vg == 0:
            continue
        arg = 1 - 4 * t * complex(conj_value(vf) * vg)
        if arg == 0 or arg.real < 0 and arg.imag == 0:
            raise DomainError("log argument on the branch cut; inputs inadmissible")
        total += float(r - l) * cmath.log(arg)
    return total


def exp_inner_closed(f: StepFunction, g: StepFunction, cfg: FockConfig) -> complex:
    """<Psi(f), Psi(g)> = exp(-c/2 * integral of log(1 - 4 conj(f) g))."""
    _require_admissible(f, g)
    return cmath.exp(-float(cfg.c) / 2 * _log_integral(f, g))


def exp_inner_closed_scaled(f: StepFunction, g: StepFunction, t: float,
                            cfg: FockConfig) -> complex:
    """<Psi(sqrt(t) f), Psi(sqrt(t) g)> as an analytic function of t.

    Valid for any real t with |t| * sup|f| * sup|g| < 1/4, including small
    negative t (used for centered difference quotients at t = 0)."""
    if abs(t) * f.sup_norm() * g.sup_norm() >= 0.25:
        raise DomainError(f"scale t = {t} leaves the admissible region")
    return cmath.exp(-float(cfg.c) / 2 * _log_integral(f, g, t))


def exp_inner_series(f: StepFunction, g: StepFunction,
                     cfg: FockConfig) -> tuple[complex, float]:
    """Truncated series sum_{n<=N} b_n with a rigorous geometric tail bound.

    |m_k| <= (sup|f| sup|g|)^k * S with S the overlap length, so |b_n| is
    dominated by the n-th Taylor coefficient of (1 - 4*rho)^(-c*S/2) at
    rho = sup|f| sup|g|; the tail bound is the tail of that scalar series.
    """
    _require_admissible(f, g)
    rho = f.sup_norm() * g.sup_norm()
    x = 4.0 * rho
    if x >= 1.0:
        raise DomainError("sup|f| * sup|g| >= 1/4; series does not converge")
    N = cfg.depth
    m = moments(f, g, N) if not (f.is_zero() or g.is_zero()) else None
    if m is None:
        return (1.0 + 0.0j, 0.0)
    b = _b_sequence(m, N, cfg)
    value = sum((complex(bn) for bn in b), 0j)

    overlap = f.support().intersect(g.support()).measure()
    beta = float(cfg.c) * float(overlap) / 2.0
    # dominating scalar series: d_n = [t^n] (1 - x t)^(-beta)
    d, partial = 1.0, 1.0
    for nn in range(1, N + 1):
        d = d * x * (nn - 1 + beta) / nn
        partial += d
    tail = max((1.0 - x) ** (-beta) - partial, 0.0)
    if tail > cfg.tol:
        raise UnconvergedError(
            f"tail bound {tail:.3e} exceeds tol {cfg.tol:.3e} at depth {N}")
    return (value, tail)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


def gram_matrix(family: Sequence[StepFunction], cfg: FockConfig,
                t: float = 1.0) -> np.ndarray:
    """G_ij = <Psi(sqrt(t) f_i), Psi(sqrt(t) f_j)>, Hermitian by construction."""
    bad = [i for i, f in enumerate(family)
           if abs(t) * f.sup_norm() ** 2 >= 0.25]
    if bad:
        raise DomainError(f"sqrt(t)-scaled sup norm >= 1/2 at indices {bad}")
    n = len(family)
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            G[i, j] = exp_inner_closed_scaled(family[i], family[j], t, cfg)
    return G


def gram_min_eig(G: np.ndarray, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    defect = float(np.max(np.abs(G - G.conj().T)))
    if defect > tol:
        raise NotHermitianError(f"Hermitian defect {defect:.3e} exceeds tol {tol:.3e}")
    return float(np.linalg.eigvalsh((G + G.conj().T) / 2)[0])


def is_psd(G: np.ndarray, tol: float = 1e-10) -> bool:
    return gram_min_eig(G, tol) >= -tol
