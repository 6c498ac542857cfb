"""Bicomplex numbers W = u + j v with u, v complex, j**2 = -1 and ij = ji.

A :class:`Bicomplex` stores its scalar part ``sc`` and vector part ``vec``.
Both fields may be complex scalars or complex numpy arrays of a common
shape, so the same class represents a single algebra element or a sampled
field (one element per grid node).

Products, inverses, powers and exponentials are evaluated in idempotent
coordinates

    W = p+ W+ + p- W-,   p± = (1 ± ij)/2,   W± = Sc W ∓ i Vec W,

in which the algebra is the direct sum of two copies of C.
"""

import numbers
import re
from typing import NamedTuple

import numpy as np

from .errors import ZeroDivisor

ZERO_DIVISOR_RTOL = 1e-14


_PLAIN = (numbers.Number, np.ndarray, np.generic)


class IdempotentPair(NamedTuple):
    plus: complex
    minus: complex


class Bicomplex:
    __slots__ = ("sc", "vec")
    # make ndarray * Bicomplex dispatch to Bicomplex.__rmul__
    __array_ufunc__ = None

    def __init__(self, sc=0.0, vec=0.0):
        sc = np.asarray(sc, dtype=complex)
        vec = np.asarray(vec, dtype=complex)
        if sc.shape != vec.shape:
            sc, vec = np.broadcast_arrays(sc, vec)
            sc, vec = sc.copy(), vec.copy()
        if sc.ndim == 0:
            sc, vec = complex(sc), complex(vec)
        self.sc = sc
        self.vec = vec

    @classmethod
    def from_idempotent(cls, plus, minus):
        plus = np.asarray(plus, dtype=complex)
        minus = np.asarray(minus, dtype=complex)
        return cls((plus + minus) / 2, 1j * (plus - minus) / 2)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Bicomplex):
            return value
        return cls(value, 0.0)

    # idempotent components
    @property
    def plus(self):
        return self.sc - 1j * self.vec

    @property
    def minus(self):
        return self.sc + 1j * self.vec

    @property
    def shape(self):
        return np.shape(self.sc)

    def __len__(self):
        return len(self.sc)

    def __getitem__(self, idx):
        return Bicomplex(self.sc[idx], self.vec[idx])

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Bicomplex):
            if not isinstance(other, _PLAIN):
                return NotImplemented
            return Bicomplex(self.sc + other, self.vec)
        return Bicomplex(self.sc + other.sc, self.vec + other.vec)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Bicomplex):
            if not isinstance(other, _PLAIN):
                return NotImplemented
            return Bicomplex(self.sc - other, self.vec)
        return Bicomplex(self.sc - other.sc, self.vec - other.vec)

    def __rsub__(self, other):
        if not isinstance(other, _PLAIN):
            return NotImplemented
        return (-self) + other

    def __neg__(self):
        return Bicomplex(-self.sc, -self.vec)

    def __mul__(self, other):
        if not isinstance(other, Bicomplex):
            if not isinstance(other, _PLAIN):
                return NotImplemented
            # complex scalar (or complex array) times W
            return Bicomplex(self.sc * other, self.vec * other)
        return Bicomplex.from_idempotent(self.plus * other.plus,
                                         self.minus * other.minus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Bicomplex):
            if not isinstance(other, _PLAIN):
                return NotImplemented
            return Bicomplex(self.sc / other, self.vec / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, _PLAIN):
            return NotImplemented
        return Bicomplex.coerce(other) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            self._check_invertible()
        return Bicomplex.from_idempotent(self.plus ** n, self.minus ** n)

    # involutions
    def bar(self):
        """Bicomplex conjugate u - jv."""
        return Bicomplex(self.sc, -self.vec)

    def dagger(self):
        """(Sc W)* - j (Vec W)*; conjugates both idempotent components."""
        return Bicomplex(np.conj(self.sc), -np.conj(self.vec))

    def star(self):
        """(Sc W)* + j (Vec W)*, componentwise complex conjugation."""
        return Bicomplex(np.conj(self.sc), np.conj(self.vec))

    def times_j(self):
        return Bicomplex(-self.vec, self.sc)

    # structure
    def is_zero_divisor(self):
        scale = np.maximum(1.0, self.norm())
        tol = ZERO_DIVISOR_RTOL * scale
        return (np.abs(self.plus) < tol) | (np.abs(self.minus) < tol)

    def _check_invertible(self):
        if np.any(self.is_zero_divisor()):
            raise ZeroDivisor(f"{self!r} is a zero divisor")

    def inverse(self):
        self._check_invertible()
        return Bicomplex.from_idempotent(1 / self.plus, 1 / self.minus)

    def norm(self):
        return np.sqrt(np.abs(self.sc) ** 2 + np.abs(self.vec) ** 2)

    def inner(self, other):
        """<W, V>_B = Sc(W V†) = Sc W (Sc V)* + Vec W (Vec V)*."""
        other = Bicomplex.coerce(other)
        return self.sc * np.conj(other.sc) + self.vec * np.conj(other.vec)

    def exp(self):
        return Bicomplex.from_idempotent(np.exp(self.plus), np.exp(self.minus))

    def split(self):
        return IdempotentPair(self.plus, self.minus)

    def allclose(self, other, atol=1e-12, rtol=0.0):
        other = Bicomplex.coerce(other)
        return bool(np.allclose(self.sc, other.sc, atol=atol, rtol=rtol)
                    and np.allclose(self.vec, other.vec, atol=atol, rtol=rtol))

    def __repr__(self):
        if np.ndim(self.sc) == 0:
            return f"Bicomplex({format_bicomplex(self)})"
        return f"Bicomplex(shape={self.shape})"


ONE = Bicomplex(1.0, 0.0)
J = Bicomplex(0.0, 1.0)
K = Bicomplex(0.0, 1j)          # k = ij
P_PLUS = Bicomplex(0.5, 0.5j)   # (1 + k)/2
P_MINUS = Bicomplex(0.5, -0.5j)


def mul(w, v):
    return Bicomplex.coerce(w) * Bicomplex.coerce(v)


def idempotent_split(w):
    return Bicomplex.coerce(w).split()


def recompose(pair):
    return Bicomplex.from_idempotent(pair[0], pair[1])


def conj_bar(w):
    return Bicomplex.coerce(w).bar()


def conj_dagger(w):
    return Bicomplex.coerce(w).dagger()


def conj_star(w):
    return Bicomplex.coerce(w).star()


def inverse(w):
    return Bicomplex.coerce(w).inverse()


def is_zero_divisor(w):
    return Bicomplex.coerce(w).is_zero_divisor()


def inner(w, v):
    return Bicomplex.coerce(w).inner(v)


def norm(w):
    return Bicomplex.coerce(w).norm()


def exp(w):
    return Bicomplex.coerce(w).exp()


def hat(z):
    """The bicomplexification x + jy of z = x + iy."""
    z = np.asarray(z, dtype=complex)
    return Bicomplex(z.real, z.imag)


def hat_power(z, z0=0.0, n=1):
    """(ẑ - ẑ0)**n, with idempotent components ((z - z0)*)**n and (z - z0)**n."""
    d = np.asarray(z, dtype=complex) - z0
    if n < 0 and np.any(d == 0):
        raise ZeroDivisor("negative power of ẑ - ẑ0 at z = z0")
    with np.errstate(divide="ignore", invalid="ignore"):
        return Bicomplex.from_idempotent(np.conj(d) ** n, d ** n)


def _fmt_complex(c):
    c = complex(c)
    return f"{c.real:.17g}{c.imag:+.17g}i"


def format_bicomplex(w):
    """Text form ``a+bi + j(c+di)``."""
    w = Bicomplex.coerce(w)
    return f"{_fmt_complex(w.sc)} + j({_fmt_complex(w.vec)})"


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:inf|nan)"
_COMPLEX = rf"\s*({_NUM})\s*({_NUM})\s*i\s*"
_TEXT_RE = re.compile(rf"^{_COMPLEX}\+\s*j\({_COMPLEX}\)\s*$")


def parse_bicomplex(text):
    m = _TEXT_RE.match(text)
    if m is None:
        raise ValueError(f"not a bicomplex literal: {text!r}")
    a, b, c, d = (float(g) for g in m.groups())
    return Bicomplex(complex(a, b), complex(c, d))
