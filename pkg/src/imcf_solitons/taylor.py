"""Second-order forward-mode differentiation over numpy arrays.

A :class:`Taylor2` carries a value together with its gradient and Hessian with
respect to ``n`` seed variables, for a whole batch of evaluation points at
once.  Arithmetic and the elementary functions below propagate the truncated
Taylor expansion exactly, so a formula written once yields analytic first and
second partial derivatives (up to rounding).

The elementary functions (:func:`sin`, :func:`exp`, ...) also accept plain
arrays, in which case they fall through to numpy.  A formula written with them
can therefore be evaluated cheaply for values only.

Complex values are supported; the derivative arrays then carry the complex
dtype as well.
"""

from __future__ import annotations

import numpy as np


class Taylor2:
    """Value, gradient and Hessian of a scalar quantity over a batch.

    Shapes are ``val: B``, ``grad: B + (n,)``, ``hess: B + (n, n)`` where ``B``
    is an arbitrary batch shape.
    """

    __slots__ = ("val", "grad", "hess")
    __array_ufunc__ = None

    def __init__(self, val, grad, hess):
        self.val = val
        self.grad = grad
        self.hess = hess

    @classmethod
    def variables(cls, u):
        """Seed one variable per trailing component of ``u`` (shape ``B + (n,)``)."""
        u = np.asarray(u, dtype=float)
        n = u.shape[-1]
        batch = u.shape[:-1]
        out = []
        for i in range(n):
            g = np.zeros(batch + (n,))
            g[..., i] = 1.0
            out.append(cls(u[..., i], g, np.zeros(batch + (n, n))))
        return out

    @property
    def nvars(self):
        return self.grad.shape[-1]

    def _lift(self, other):
        if isinstance(other, Taylor2):
            return other
        other = np.asarray(other)
        shape = np.broadcast_shapes(np.shape(self.val), other.shape)
        n = self.nvars
        dtype = np.result_type(other, float)
        return Taylor2(
            np.broadcast_to(other, shape),
            np.zeros(shape + (n,), dtype=dtype),
            np.zeros(shape + (n, n), dtype=dtype),
        )

    def _chain(self, f0, f1, f2):
        g = self.grad
        hess = g[..., :, None] * g[..., None, :]
        hess *= f2[..., None, None]
        hess += f1[..., None, None] * self.hess
        return Taylor2(f0, f1[..., None] * g, hess)

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return Taylor2(-self.val, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Taylor2):
            return Taylor2(self.val + other, self.grad, self.hess)
        return Taylor2(self.val + other.val, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Taylor2):
            c = np.asarray(other)
            return Taylor2(self.val * c, self.grad * c[..., None], self.hess * c[..., None, None])
        ga, gb = self.grad, other.grad
        cross = ga[..., :, None] * gb[..., None, :]
        cross += np.swapaxes(cross, -1, -2).copy()
        cross += self.val[..., None, None] * other.hess
        cross += other.val[..., None, None] * self.hess
        return Taylor2(self.val * other.val, self.val[..., None] * gb + other.val[..., None] * ga, cross)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.val
        r = 1.0 / v
        return self._chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, other):
        if not isinstance(other, Taylor2):
            return self * (1.0 / np.asarray(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Taylor2):
            return exp(p * log(self))
        if p == 2:
            return self * self
        v = self.val
        return self._chain(v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    # complex helpers --------------------------------------------------------

    @property
    def real(self):
        return Taylor2(np.real(self.val), np.real(self.grad), np.real(self.hess))

    @property
    def imag(self):
        return Taylor2(np.imag(self.val), np.imag(self.grad), np.imag(self.hess))

    def conj(self):
        return Taylor2(np.conj(self.val), np.conj(self.grad), np.conj(self.hess))

    def __repr__(self):
        return f"Taylor2(val={self.val!r})"


def lift(x, like):
    """Return ``x`` as a :class:`Taylor2` compatible with ``like`` (constant if needed)."""
    if isinstance(x, Taylor2):
        return x
    return like._lift(x)


def _unary(name, f0, f1, f2):
    def fn(x):
        if isinstance(x, Taylor2):
            v = x.val
            return x._chain(f0(v), f1(v), f2(v))
        return f0(x)

    fn.__name__ = name
    fn.__doc__ = f"{name}() acting on arrays or :class:`Taylor2` values."
    return fn


sin = _unary("sin", np.sin, np.cos, lambda v: -np.sin(v))
cos = _unary("cos", np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v))
sinh = _unary("sinh", np.sinh, np.cosh, np.sinh)
cosh = _unary("cosh", np.cosh, np.sinh, np.cosh)
exp = _unary("exp", np.exp, np.exp, np.exp)
sqrt = _unary("sqrt", np.sqrt, lambda v: 0.5 / np.sqrt(v), lambda v: -0.25 / (v * np.sqrt(v)))


def log(x, branch=None):
    """Logarithm; for complex input ``branch`` overrides the imaginary part of the value.

    Only the value depends on the branch of a complex logarithm, the derivatives
    do not, which is what makes continuous roots and powers of curves cheap.
    """
    if isinstance(x, Taylor2):
        v = x.val
        f0 = np.log(v)
        if branch is not None:
            f0 = np.log(np.abs(v)) + 1j * branch
        r = 1.0 / v
        return x._chain(f0, r, -r * r)
    f0 = np.log(x)
    if branch is not None:
        f0 = np.log(np.abs(x)) + 1j * branch
    return f0


def value(x):
    """Strip derivative information."""
    return x.val if isinstance(x, Taylor2) else x
