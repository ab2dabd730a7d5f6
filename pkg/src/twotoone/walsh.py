"""Walsh spectra over GF(2^n) and the spectral 2-to-1 test.

Conventions.  For a map F of GF(2^n),

    W_F(u, v) = sum_x (-1)^(Tr(v F(x)) + Tr(u x)).

Component transforms use the fast Walsh-Hadamard transform on index bits;
``GF.dual_basis_map`` converts Tr(u x) into a bit dot product, so that
W_F(u, v) = FWHT(signs_v)[dual[u]].

The spectral statistic is

    T(F) = 2^(-2n) S3 - 2^(2-n) S2 + 2^(n+2),
    S2 = sum_v W_F(0, v)^2,   S3 = sum_{v1, v2} W_F(0, v1) W_F(0, v2) W_F(0, v1 + v2),

which equals sum_b N_b (N_b - 2)^2 with N_b the fiber sizes; T = 0 exactly
for 2-to-1 maps.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .census import MapTable, census_moment, fiber_sizes
from .errors import DimensionMismatch, InvalidPhi, OddCharacteristic, OutOfRange

# largest n for which the O(4^n) direct triple sum is also evaluated
DIRECT_MAX_N = 10
MAX_WALSH_J = 3


@dataclass(frozen=True)
class WalshSpectrum:
    n: int
    values: np.ndarray
    v: int | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "v": self.v, "values": [int(x) for x in np.ravel(self.values)]}

    def parseval_ok(self) -> bool:
        vals = np.atleast_2d(self.values).astype(object)
        if self.v is not None:
            vals = vals.reshape(1, -1)
            sq = (vals ** 2).sum(axis=1)
        else:
            sq = (vals ** 2).sum(axis=0)
        return bool(np.all(sq == 4 ** self.n))


def _check_binary(F: MapTable):
    if F.domain.p != 2 or F.codomain.p != 2:
        raise OddCharacteristic("Walsh characterization is for characteristic 2 only")
    if F.domain.q != F.codomain.q:
        raise DimensionMismatch("domain and codomain must have the same order")


def _signs(bits: np.ndarray) -> np.ndarray:
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def walsh_component(F: MapTable, v: int) -> np.ndarray:
    """``W_F(u, v)`` for every ``u`` (array indexed by u)."""
    _check_binary(F)
    K = F.codomain
    comp = K.abs_trace(K.mul(int(v), F.values))
    w = kernels.fwht(_signs(comp))
    return w[F.domain.dual_basis_map]


def walsh_spectrum(F: MapTable, v: int | None = None) -> WalshSpectrum:
    """One component (``v`` given) or the full table ``values[u, v]``."""
    _check_binary(F)
    n = F.domain.n
    if v is not None:
        return WalshSpectrum(n, walsh_component(F, v), int(v))
    K = F.codomain
    vs = K.elements()
    comps = K.abs_trace(K.mul(vs[:, None], F.values[None, :]))
    rows = kernels.fwht_rows(_signs(comps))
    return WalshSpectrum(n, rows[:, F.domain.dual_basis_map].T.copy())


def walsh_row_zero(F: MapTable, method: str = "fast") -> np.ndarray:
    """``W_F(0, v)`` for every ``v``.

    ``fast`` transforms the fiber-size vector once; ``components`` sums
    (-1)^Tr(v F(x)) per v straight from the definition.
    """
    _check_binary(F)
    K = F.codomain
    if method == "fast":
        w = kernels.fwht(fiber_sizes(F))
        return w[K.dual_basis_map]
    if method == "components":
        vs = K.elements()
        comps = K.abs_trace(K.mul(vs[:, None], F.values[None, :]))
        return _signs(comps).sum(axis=1)
    raise ValueError(f"unknown method {method!r}")


def boolean_walsh(bits: Sequence[int]) -> np.ndarray:
    """Walsh values of a Boolean table under the bit dot product.

    Any nondegenerate inner product (for instance the trace form) only
    permutes these values, so bent-type verdicts do not depend on the choice.
    """
    return kernels.fwht(_signs(bits))


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


def _triple_sum_transform(w0_bits: np.ndarray) -> int:
    """sum_{a,b} w[a] w[b] w[a^b] via one more transform (convolution theorem)."""
    n_pts = w0_bits.shape[0]
    hat = kernels.fwht(w0_bits).astype(object)
    return _exact_div(int((hat ** 3).sum()), n_pts)


def triple_sum(F: MapTable, method: str = "both") -> int:
    """sum over (v1, v2) of W(0,v1) W(0,v2) W(0,v1+v2).

    ``direct`` is the O(4^n) double loop, ``transform`` the O(n 2^n) path;
    ``both`` evaluates both (direct only up to n = DIRECT_MAX_N) and
    insists that they agree.
    """
    _check_binary(F)
    # indexed by dual[v]; field addition is XOR on both sides since dual is linear
    w_bits = kernels.fwht(fiber_sizes(F))
    if method == "transform":
        return _triple_sum_transform(w_bits)
    if method == "direct":
        return kernels.walsh_triple_sum(walsh_row_zero(F))
    if method != "both":
        raise ValueError(f"unknown method {method!r}")
    t = _triple_sum_transform(w_bits)
    if F.domain.n <= DIRECT_MAX_N:
        d = kernels.walsh_triple_sum(walsh_row_zero(F))
        if d != t:
            raise AssertionError(f"triple sum paths disagree: direct {d}, transform {t}")
    return t


def moment_sum(F: MapTable, j: int, method: str = "walsh") -> int:
    """``sum_b N_b^j`` from Walsh values (j <= 3) or from the census."""
    _check_binary(F)
    if j < 1:
        raise OutOfRange("j must be >= 1")
    # the convolution identity is only wired up to j = 3
    if method == "census" or j > MAX_WALSH_J:
        return census_moment(F, j)
    if method != "walsh":
        raise ValueError(f"unknown method {method!r}")
    n = F.domain.n
    w0 = walsh_row_zero(F).astype(object)
    if j == 1:
        return int(w0[0])
    if j == 2:
        return _exact_div(int((w0 ** 2).sum()), 1 << n)
    return _exact_div(triple_sum(F), 1 << (2 * n))


def two_to_one_statistic(F: MapTable, method: str = "both") -> int:
    """The spectral statistic T(F); zero iff F is 2-to-1, positive otherwise."""
    _check_binary(F)
    n = F.domain.n
    s2 = int((walsh_row_zero(F).astype(object) ** 2).sum())
    s3 = triple_sum(F, method)
    return _exact_div(s3, 1 << (2 * n)) - _exact_div(4 * s2, 1 << n) + (1 << (n + 2))


def spectral_two_to_one(F: MapTable) -> bool:
    return two_to_one_statistic(F) == 0


def _phi(A: Sequence, x: int) -> Fraction:
    return sum((Fraction(a) * x ** j for j, a in enumerate(A)), Fraction(0))


def validate_phi(A: Sequence, upto: int) -> None:
    """Check phi(0) = phi(2) = 0 and phi(x) > 0 for the other x in [1, upto]."""
    if _phi(A, 0) != 0 or _phi(A, 2) != 0:
        raise InvalidPhi("phi must vanish at 0 and 2")
    for x in range(1, upto + 1):
        if x != 2 and _phi(A, x) <= 0:
            raise InvalidPhi(f"phi({x}) = {_phi(A, x)} is not positive")


def general_phi_statistic(F: MapTable, A: Sequence) -> Fraction:
    """``sum_b phi(N_b)`` assembled from the moments, phi = sum_j A_j X^j.

    Moments up to j = 3 come from the Walsh identity; higher ones from the
    census.  Zero iff F is 2-to-1 for any admissible phi.
    """
    _check_binary(F)
    validate_phi(A, F.domain.q)
    total = Fraction(A[0]) * F.codomain.q if len(A) else Fraction(0)
    for j, a in enumerate(A[1:], start=1):
        if a:
            total += Fraction(a) * moment_sum(F, j)
    return total
