"""Boundary K-matrix catalog and reflection-equation diagnostics.

One right-boundary template K^-(u | {beta}) is shipped per series (two
branches for d1, which has an extra free parameter at n = 2).  The left
matrix is induced by the isomorphism

    K^+(u | {beta^+}) = (K^-(-u - rho | {beta^+}))^t  M .

Every template is regular, K^-(0) = 1, and satisfies K^-(i pi) prop. 1 at
the half-period point.  The analytic u-derivatives are produced by
evaluating the same template code on forward-mode dual scalars.

Boundary parameters are keyed by strings: "1,1" everywhere, plus "2,2" for
d1 at n = 2 and "i,i'" for the uniform anti-diagonal family of the a2even
template.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import max_abs, permutation_operator, proportionality_residual, tensor4_to_matrix
from .series import HALF_PERIOD, CouplingParams, RMatrix, SeriesSpec, make_series_spec

__all__ = [
    "KPoleError",
    "BoundaryPair",
    "allowed_beta_keys",
    "localization_beta_plus",
    "bell_state",
    "dual_boundary_vector",
    "orthogonality",
    "check_sre",
    "check_regularity",
    "check_half_period",
    "check_pull_through",
    "load_boundary_json",
    "boundary_pair_from_dict",
]

_POLE_TOL = 1e-8


class KPoleError(ZeroDivisionError):
    """A K-matrix denominator vanished at the requested spectral parameter."""


class _Dual:
    """Scalar carrying a value and its u-derivative (forward mode)."""

    __slots__ = ("v", "d")

    def __init__(self, v, d=0j):
        self.v = complex(v)
        self.d = complex(d)

    def __add__(self, o):
        o = _as_dual(o)
        return _Dual(self.v + o.v, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return _Dual(-self.v, -self.d)

    def __sub__(self, o):
        return self + (-_as_dual(o))

    def __rsub__(self, o):
        return _as_dual(o) + (-self)

    def __mul__(self, o):
        o = _as_dual(o)
        return _Dual(self.v * o.v, self.d * o.v + self.v * o.d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _as_dual(o)
        return _Dual(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))

    def __rtruediv__(self, o):
        return _as_dual(o) / self


def _as_dual(x):
    return x if isinstance(x, _Dual) else _Dual(x)


def _exp(z):
    if isinstance(z, _Dual):
        e = np.exp(z.v)
        return _Dual(e, z.d * e)
    return np.exp(z)


def _val(x):
    return x.v if isinstance(x, _Dual) else complex(x)


def _checked_div(num, den, u, what):
    if abs(_val(den)) < _POLE_TOL:
        raise KPoleError(f"{what} denominator vanishes at u = {_val(u)}")
    return num / den


def allowed_beta_keys(spec):
    """Boundary-parameter keys admitted by the series' K template."""
    if spec.series == "d1" and spec.n == 2:
        return ("1,1", "2,2")
    if spec.series == "a2even":
        return ("1,1", "i,i'")
    return ("1,1",)


def _k_minus_scalars(spec, q, beta, u):
    """K^-(u) entries with generic scalar arithmetic (complex or dual).

    Returns a dense N x N list-of-lists.
    """
    N, n = spec.N, spec.n
    x = _exp(u)
    xm = _exp(-u)
    b11 = beta["1,1"]
    K = [[0j] * N for _ in range(N)]

    if spec.series == "a1":
        f = b11 * (x - 1) + 1
        fm = b11 * (xm - 1) + 1
        K[0][0] = f
        for l in range(1, N):
            K[l][l] = x * x * fm
        return K

    if spec.series == "b1":
        K[0][0] = _checked_div(b11 * (xm - 1) + 2, b11 * (x - 1) + 2, u, "b1 K(1,1)")
        for l in range(1, 2 * n):
            K[l][l] = 1.0 + 0j
        qq = q ** (2 * n - 3)
        K[2 * n][2 * n] = _checked_div(
            b11 * (qq * x - 1) + 2, b11 * (qq * xm - 1) + 2, u, "b1 K(N,N)"
        )
        return K

    if spec.series == "c1":
        g = _checked_div(b11 * (x - 1) - 2, b11 * (xm - 1) - 2, u, "c1 ratio")
        for l in range(n):
            K[l][l] = 1.0 + 0j
        for l in range(n, 2 * n):
            K[l][l] = g
        return K

    if spec.series == "d1":
        g1 = _checked_div(b11 * (x - 1) - 2, b11 * (xm - 1) - 2, u, "d1 ratio")
        if n == 2:
            b22 = beta["2,2"]
            g2 = _checked_div(b22 * (x - 1) - 2, b22 * (xm - 1) - 2, u, "d1 ratio 2")
            K[0][0] = 1.0 + 0j
            K[1][1] = g1
            K[2][2] = g2
            K[3][3] = g1 * g2
            return K
        qq = q ** (2 * n - 4)
        gt = _checked_div(b11 * (qq * x - 1) - 2, b11 * (qq * xm - 1) - 2, u, "d1 tail")
        K[0][0] = 1.0 + 0j
        for l in range(1, 2 * n - 1):
            K[l][l] = g1
        K[2 * n - 1][2 * n - 1] = g1 * gt
        return K

    if spec.series == "a2odd":
        g = _checked_div(b11 * (x - 1) - 2, b11 * (xm - 1) - 2, u, "a2odd ratio")
        qq = q ** (2 * n - 2)
        h = _checked_div(
            b11 * (xm + qq) + 2 * qq, b11 * (x + qq) + 2 * qq, u, "a2odd middle"
        )
        for l in range(n - 1):
            K[l][l] = 1.0 + 0j
        K[n - 1][n - 1] = g
        K[n][n] = x * x * h
        for l in range(n + 1, 2 * n):
            K[l][l] = x * x
        return K

    # a2even: diagonal entries from beta_{1,1}, anti-diagonal family from
    # beta_{i,i'}
    boff = beta["i,i'"]
    for l in range(n):
        K[l][l] = 1 + b11 * (x - 1)
    K[n][n] = b11 * x - _checked_div(x * x - q, 1 - q, u, "a2even middle") * (b11 - 1)
    for l in range(n + 1, 2 * n + 1):
        K[l][l] = x * x * (1 + b11 * (xm - 1))
    x2m1 = x * x - 1
    for i in range(1, n + 1):
        ip = spec.prime(i)
        K[i - 1][ip - 1] = 0.5 * boff * x2m1
    for i in range(n + 2, 2 * n + 2):
        ip = spec.prime(i)
        frac = _checked_div((b11 - 1) * (b11 - 1), (q - 1) * (q - 1), u, "a2even corner")
        K[i - 1][ip - 1] = frac * _checked_div(2 * q, boff, u, "a2even 1/beta") * x2m1
    return K


def _as_matrix(entries):
    return np.array([[_val(e) for e in row] for row in entries], dtype=complex)


def _as_deriv(entries):
    return np.array(
        [[e.d if isinstance(e, _Dual) else 0j for e in row] for row in entries],
        dtype=complex,
    )


@dataclass(frozen=True)
class BoundaryPair:
    """Right K^-(u | beta^-) plus the induced left K^+(u | beta^+)."""

    spec: SeriesSpec
    params: CouplingParams
    beta_minus: dict
    beta_plus: dict

    def __post_init__(self):
        allowed = set(allowed_beta_keys(self.spec))
        for label, beta in (("beta_minus", self.beta_minus), ("beta_plus", self.beta_plus)):
            keys = set(beta)
            if keys != allowed:
                raise ValueError(
                    f"{label} keys {sorted(keys)} do not match the "
                    f"{self.spec.series} template keys {sorted(allowed)}"
                )

    @cached_property
    def rmatrix(self):
        return RMatrix(self.spec, self.params)

    @cached_property
    def _rho(self):
        return self.spec.rho(self.params.q)

    @cached_property
    def _m(self):
        return self.spec.m_matrix(self.params.q)

    def k_minus(self, u, beta=None):
        entries = _k_minus_scalars(self.spec, self.params.q, beta or self.beta_minus, u)
        return _as_matrix(entries)

    def k_minus_prime(self, u, beta=None):
        entries = _k_minus_scalars(
            self.spec, self.params.q, beta or self.beta_minus, _Dual(u, 1.0)
        )
        return _as_deriv(entries)

    def k_plus(self, u):
        return self.k_minus(-u - self._rho, beta=self.beta_plus).T @ self._m

    def k_plus_prime(self, u):
        return -self.k_minus_prime(-u - self._rho, beta=self.beta_plus).T @ self._m


def boundary_pair_from_dict(doc):
    """Build a :class:`BoundaryPair` from a parsed boundary JSON document."""
    spec = make_series_spec(doc["series"], int(doc["n"]))
    if "q" in doc:
        params = CouplingParams(q=_complex_from_json(doc["q"]))
    else:
        params = CouplingParams.from_delta(doc["delta"])
    bm = {k: _complex_from_json(v) for k, v in doc["beta_minus"].items()}
    bp = {k: _complex_from_json(v) for k, v in doc["beta_plus"].items()}
    return BoundaryPair(spec, params, bm, bp)


def load_boundary_json(path):
    with open(path) as fh:
        return json.load(fh)


def _complex_from_json(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def localization_beta_plus(spec, q):
    """The constrained beta^+_{1,1} values making Tr K^+(p/2) vanish.

    Returns a list of candidate values (b1 admits two branches).
    """
    n = spec.n
    if spec.series == "a1":
        return [q ** (n - 2) / (1 + q ** (n - 2))]
    if spec.series == "b1":
        return [1.0 + 0j, 2.0 / (1 + q ** (2 * n - 3))]
    if spec.series == "a2even":
        return [0.5 + 0j]
    return [-1.0 + 0j]


def bell_state(N):
    """Product of two maximally entangled pair states, unit 2-norm vector."""
    if N < 2:
        raise ValueError("bell_state needs local dimension N >= 2")
    vec_id = np.eye(N, dtype=complex).reshape(-1)
    return np.kron(vec_id, vec_id) / N


def dual_boundary_vector(pair):
    """The length-N^4 bra built from K^+(p/2) and its conjugate."""
    kp = pair.k_plus(HALF_PERIOD)
    kvec = kp.T.reshape(-1)
    return np.kron(kvec.conj(), kvec)


def orthogonality(pair):
    """Overlap of the boundary dual vector with the Bell state.

    Vanishes iff Tr K^+(p/2) = 0; the exact identity
    overlap = |Tr K^+(p/2)|^2 / N is asserted in the tests.
    """
    return complex(dual_boundary_vector(pair) @ bell_state(pair.spec.N))


def check_sre(pair, u, v):
    """Normalized max-norm residual of Sklyanin's reflection equation."""
    N = pair.spec.N
    fn = pair.rmatrix
    eye = np.eye(N, dtype=complex)

    def r12(w):
        return tensor4_to_matrix(fn.evaluate(w))

    def r21(w):
        return tensor4_to_matrix(fn.evaluate(w).transpose(1, 0, 3, 2))

    k1u = np.kron(pair.k_minus(u), eye)
    k2v = np.kron(eye, pair.k_minus(v))
    lhs = r12(u - v) @ k1u @ r21(u + v) @ k2v
    rhs = k2v @ r12(u + v) @ k1u @ r21(u - v)
    return max_abs(lhs - rhs) / max(max_abs(lhs), max_abs(rhs))


def check_regularity(pair):
    """Proportionality residual of K^-(0) against the identity."""
    return proportionality_residual(pair.k_minus(0.0), np.eye(pair.spec.N))


def check_half_period(pair):
    """Proportionality residual of K^-(p/2) against the identity."""
    return proportionality_residual(pair.k_minus(HALF_PERIOD), np.eye(pair.spec.N))


def check_pull_through(pair, v):
    """Residual of R(p/2+v) K^-_0(p/2) R_{j0}(p/2-v) being proportional to 1."""
    N = pair.spec.N
    fn = pair.rmatrix
    r_a = tensor4_to_matrix(fn.evaluate(HALF_PERIOD + v))
    r_b = tensor4_to_matrix(fn.evaluate(HALF_PERIOD - v).transpose(1, 0, 3, 2))
    k0 = np.kron(pair.k_minus(HALF_PERIOD), np.eye(N, dtype=complex))
    return proportionality_residual(r_a @ k0 @ r_b, np.eye(N * N))
