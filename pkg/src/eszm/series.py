"""Trigonometric R-matrices of the six non-exceptional affine series.

Supported series (CLI spellings in parentheses): A^(1)_{n-1} ("a1"),
A^(2)_{2n-1} ("a2odd"), A^(2)_{2n} ("a2even"), B^(1)_n ("b1"),
C^(1)_n ("c1"), D^(1)_n ("d1").  All of them are purely 2*pi*i-periodic in
the spectral parameter u, which makes u = i*pi the distinguished half-period
point used throughout the package.

The Boltzmann weights are polynomials in e^u, so the u-derivatives are
evaluated in closed form.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import (
    embed_operator,
    max_abs,
    permutation_operator,
    proportionality_residual,
    tensor4_to_matrix,
)

__all__ = [
    "PERIOD",
    "HALF_PERIOD",
    "SERIES_NAMES",
    "SeriesSpec",
    "CouplingParams",
    "RMatrix",
    "MutatedRMatrix",
    "SingularTransposeError",
    "make_series_spec",
    "check_ybe",
    "check_unitarity",
    "check_crossing",
    "periodicity_residual",
    "regularity_residual",
    "sample_strip",
]

PERIOD = 2j * np.pi
HALF_PERIOD = 1j * np.pi

SERIES_NAMES = ("a1", "a2odd", "a2even", "b1", "c1", "d1")

# local dimension N(n) and xi = sign * q**power per series; for a1 the
# "xi" entry only fixes the crossing parameter rho = -log(q**n)
_SERIES_TABLE = {
    "a1": {"dim": lambda n: n, "xi": lambda n: (1, n), "min_n": 1},
    "a2odd": {"dim": lambda n: 2 * n, "xi": lambda n: (-1, 2 * n), "min_n": 1},
    "a2even": {"dim": lambda n: 2 * n + 1, "xi": lambda n: (-1, 2 * n + 1), "min_n": 1},
    "b1": {"dim": lambda n: 2 * n + 1, "xi": lambda n: (1, 2 * n - 1), "min_n": 1},
    "c1": {"dim": lambda n: 2 * n, "xi": lambda n: (1, 2 * n + 2), "min_n": 1},
    "d1": {"dim": lambda n: 2 * n, "xi": lambda n: (1, 2 * n - 2), "min_n": 2},
}


class SingularTransposeError(RuntimeError):
    """Partially transposed R-matrix is (near-)singular at the sampled point."""


@dataclass(frozen=True)
class SeriesSpec:
    """Static algebraic data of one (series, rank) pair.

    ``bar`` and ``eps`` are the shifted-index and sign tables entering the
    anti-diagonal weights (1-based positions stored at offsets 0..N-1); for
    the "a1" series they are unused.  The crossing data xi, rho and the
    diagonal crossing matrix M depend on the coupling q and are exposed as
    methods.
    """

    series: str
    n: int
    N: int
    xi_sign: int
    xi_power: int
    bar: tuple
    eps: tuple

    def prime(self, i):
        """Conjugate index i' = N - i + 1 (1-based)."""
        return self.N - i + 1

    def xi(self, q):
        return self.xi_sign * q**self.xi_power

    def rho(self, q):
        return -np.log(complex(self.xi(q)))

    def m_matrix(self, q):
        """Diagonal crossing matrix M."""
        if self.series == "a1":
            expo = [self.n + 1 - 2 * i for i in range(1, self.N + 1)]
        elif self.series == "a2even":
            expo = [2 * self.n + 2 - 2 * b for b in self.bar]
        else:
            expo = [2 * self.n + 1 - 2 * b for b in self.bar]
        return np.diag([complex(q) ** e for e in expo])


def make_series_spec(series, n):
    """Build the :class:`SeriesSpec` for a series name and rank n."""
    if series not in _SERIES_TABLE:
        raise ValueError(f"unknown series {series!r}; expected one of {SERIES_NAMES}")
    entry = _SERIES_TABLE[series]
    if n < entry["min_n"]:
        raise ValueError(f"series {series!r} requires n >= {entry['min_n']}, got {n}")
    N = entry["dim"](n)
    sign, power = entry["xi"](n)
    if series == "a1":
        bar = tuple(float(i) for i in range(1, N + 1))
        eps = tuple(1 for _ in range(N))
    elif series == "c1":
        bar = tuple(i - 0.5 if i <= n else i + 0.5 for i in range(1, N + 1))
        eps = tuple(1 if i <= n else -1 for i in range(1, N + 1))
    else:
        mid = (N + 1) / 2
        bar = tuple(
            i + 0.5 if i < mid else (float(i) if i == mid else i - 0.5)
            for i in range(1, N + 1)
        )
        eps = tuple(1 for _ in range(N))
    return SeriesSpec(series, n, N, sign, power, bar, eps)


@dataclass(frozen=True)
class CouplingParams:
    """Coupling q and the induced anisotropy Delta = (q + 1/q) / 2."""

    q: complex

    @property
    def delta(self):
        return (self.q + 1.0 / self.q) / 2.0

    @classmethod
    def from_delta(cls, delta):
        """Branch q = Delta + sqrt(Delta^2 - 1), flipped if needed so |q| >= 1."""
        delta = complex(delta)
        root = np.sqrt(delta**2 - 1.0)
        q = delta + root
        if abs(q) < 1.0:
            q = delta - root
        return cls(q=complex(q))


@dataclass(frozen=True)
class RMatrix:
    """Evaluator for R(u) and its analytic u-derivative, as (N,N,N,N) tensors.

    Index convention: ``R[a, b, c, d] = <a,b| R |c,d>`` with 0-based indices.
    """

    spec: SeriesSpec
    params: CouplingParams

    @cached_property
    def _q(self):
        return complex(self.params.q)

    @cached_property
    def _xi(self):
        return complex(self.spec.xi(self._q))

    def a1_weight(self, u, derivative=False):
        """The weight a_1(u) entering unitarity and crossing normalizations."""
        q, x = self._q, np.exp(u)
        if self.spec.series == "a1":
            return x if derivative else x - q**2
        if derivative:
            return x * (2 * x - q**2 - self._xi)
        return (x - q**2) * (x - self._xi)

    def evaluate(self, u):
        return self._assemble(u, derivative=False)

    def derivative(self, u):
        return self._assemble(u, derivative=True)

    def _assemble(self, u, derivative):
        spec, q, xi = self.spec, self._q, self._xi
        N = spec.N
        x = np.exp(complex(u))
        r = np.zeros((N, N, N, N), dtype=complex)

        if spec.series == "a1":
            if derivative:
                a1, a2, a3, a4 = x, q * x, 0.0, -x * (q**2 - 1)
            else:
                a1 = x - q**2
                a2 = q * (x - 1)
                a3 = -(q**2 - 1)
                a4 = -x * (q**2 - 1)
            for i in range(N):
                r[i, i, i, i] = a1
                for j in range(N):
                    if i == j:
                        continue
                    r[i, j, i, j] = a2
                    r[i, j, j, i] = a3 if i < j else a4
            return r

        if derivative:
            a1 = x * (2 * x - q**2 - xi)
            a2 = q * x * (2 * x - 1 - xi)
            a3 = -(q**2 - 1) * x
            a4 = -(q**2 - 1) * x * (2 * x - xi)
        else:
            a1 = (x - q**2) * (x - xi)
            a2 = q * (x - 1) * (x - xi)
            a3 = -(q**2 - 1) * (x - xi)
            a4 = x * a3
        bar, eps = spec.bar, spec.eps
        for i in range(1, N + 1):
            ip = spec.prime(i)
            if i != ip:
                r[i - 1, i - 1, i - 1, i - 1] = a1
            for j in range(1, N + 1):
                jp = spec.prime(j)
                if i != j and i != jp:
                    r[i - 1, j - 1, i - 1, j - 1] += a2
                    r[i - 1, j - 1, j - 1, i - 1] += a3 if i < j else a4
                # anti-diagonal block a_{ij} E_{ij} (x) E_{i'j'}
                r[i - 1, ip - 1, j - 1, jp - 1] += self._a_cross(
                    i, j, x, bar, eps, derivative
                )
        return r

    def _a_cross(self, i, j, x, bar, eps, derivative):
        q, xi = self._q, self._xi
        spec = self.spec
        if i == j:
            if i != spec.prime(i):
                if derivative:
                    return x * (2 * q**2 * x - q**2 - xi)
                return (q**2 * x - xi) * (x - 1)
            if derivative:
                return q * x * (2 * x - 1 - xi) + (xi - 1) * (q**2 - 1) * x
            return q * (x - xi) * (x - 1) + (xi - 1) * (q**2 - 1) * x
        e = eps[i - 1] * eps[j - 1]
        qb = q ** (bar[i - 1] - bar[j - 1])
        delta = 1.0 if i == spec.prime(j) else 0.0
        if i < j:
            if derivative:
                return (q**2 - 1) * x * (e * xi * qb - delta)
            return (q**2 - 1) * (e * xi * qb * (x - 1) - delta * (x - xi))
        if derivative:
            return (q**2 - 1) * x * (e * qb * (2 * x - 1) - delta * (2 * x - xi))
        return (q**2 - 1) * x * (e * qb * (x - 1) - delta * (x - xi))


@dataclass(frozen=True)
class MutatedRMatrix:
    """Wrapper corrupting one R-matrix entry; used to exercise the detectors."""

    base: RMatrix
    rel_eps: float
    entry: tuple = (0, 0, 0, 0)

    @property
    def spec(self):
        return self.base.spec

    @property
    def params(self):
        return self.base.params

    def a1_weight(self, u, derivative=False):
        return self.base.a1_weight(u, derivative)

    def evaluate(self, u):
        r = self.base.evaluate(u)
        r[self.entry] += self.rel_eps * max_abs(r)
        return r

    def derivative(self, u):
        return self.base.derivative(u)


def _r_on_pair(fn, u):
    return tensor4_to_matrix(fn.evaluate(u))


def _r_swapped(fn, u):
    """R acting on the pair in swapped order, i.e. R_{21}(u) = P R(u) P."""
    return tensor4_to_matrix(fn.evaluate(u).transpose(1, 0, 3, 2))


def _partial_transpose_1(m, N):
    return tensor4_to_matrix(m.reshape(N, N, N, N).transpose(2, 1, 0, 3))


def _partial_transpose_2(m, N):
    return tensor4_to_matrix(m.reshape(N, N, N, N).transpose(0, 3, 2, 1))


def check_ybe(fn, u, v):
    """Normalized max-norm residual of the Yang-Baxter equation on V^3."""
    N = fn.spec.N
    dims = [N, N, N]
    r12 = embed_operator(_r_on_pair(fn, u - v), dims, (1, 2))
    r13 = embed_operator(_r_on_pair(fn, u), dims, (1, 3))
    r23 = embed_operator(_r_on_pair(fn, v), dims, (2, 3))
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return max_abs(lhs - rhs) / max(max_abs(lhs), max_abs(rhs))


def check_unitarity(fn, v):
    """Residual of R_12(v) R_21(-v) = a_1(v) a_1(-v) * identity."""
    N = fn.spec.N
    c = fn.a1_weight(v) * fn.a1_weight(-v)
    lhs = _r_on_pair(fn, v) @ _r_swapped(fn, -v)
    return max_abs(lhs - c * np.eye(N * N)) / abs(c)


def check_crossing(fn, u):
    """Residual of the crossing-unitarity relation at spectral parameter u.

    For the "a1" series this is the generalized double transpose-inverse
    relation, checked up to its overall scalar (proportionality residual);
    for the other five series it is the M-conjugated identity

        R^{t1}(u) M_1 R^{t2}(-u-2 rho) M_1^{-1} = xi^2 a_1(u+rho) a_1(-u-rho) 1.
    """
    spec = fn.spec
    N = spec.N
    q = fn.params.q
    rho = spec.rho(q)
    m = spec.m_matrix(q)
    if spec.series == "a1":
        r = _r_on_pair(fn, u)
        rt = _partial_transpose_2(r, N)
        if np.linalg.cond(rt) > 1e12:
            raise SingularTransposeError(f"partial transpose singular at u={u}")
        step = _partial_transpose_2(np.linalg.inv(rt), N)
        if np.linalg.cond(step) > 1e12:
            raise SingularTransposeError(f"second inverse singular at u={u}")
        lhs = np.linalg.inv(step)
        m2 = np.kron(np.eye(N), m)
        rhs = m2 @ _r_on_pair(fn, u + 2 * rho) @ np.linalg.inv(m2)
        return proportionality_residual(lhs, rhs)
    m1 = np.kron(m, np.eye(N))
    lhs = (
        _partial_transpose_1(_r_on_pair(fn, u), N)
        @ m1
        @ _partial_transpose_2(_r_on_pair(fn, -u - 2 * rho), N)
        @ np.linalg.inv(m1)
    )
    scalar = spec.xi(q) ** 2 * fn.a1_weight(u + rho) * fn.a1_weight(-u - rho)
    return max_abs(lhs - scalar * np.eye(N * N)) / abs(scalar)


def periodicity_residual(fn, u):
    """Relative entrywise residual of R(u + 2*pi*i) = R(u)."""
    r = fn.evaluate(u)
    return max_abs(fn.evaluate(u + PERIOD) - r) / max_abs(r)


def regularity_residual(fn):
    """Proportionality residual of R(0) against the permutation operator."""
    return proportionality_residual(
        tensor4_to_matrix(fn.evaluate(0.0)), permutation_operator(fn.spec.N)
    )


def sample_strip(rng, count=1):
    """Spectral parameters uniform on Re in [-2, 2], Im in [-pi, pi]."""
    re = rng.uniform(-2.0, 2.0, size=count)
    im = rng.uniform(-np.pi, np.pi, size=count)
    u = re + 1j * im
    return u[0] if count == 1 else u
