"""Dense float64 tensors with reverse-mode automatic differentiation.

The tape is implicit: each operation returns a Tensor that keeps references to
its parents and a backward closure. backward() on a scalar walks the graph once
in reverse topological order and accumulates gradients into every tensor built
with requires_grad=True. numpy does the arithmetic; this module owns the
calculus. Everything is 64-bit so finite-difference checks stay meaningful.
"""

from __future__ import annotations

import numpy as np


class DimensionError(ValueError):
    """Operand shapes are incompatible; the message names both shapes."""


class GradientError(RuntimeError):
    """A non-finite value surfaced while computing or checking gradients."""


def _as_array(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to the original operand shape."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for ax, n in enumerate(shape):
        if n == 1 and grad.shape[ax] != 1:
            grad = grad.sum(axis=ax, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = _as_array(data)
        self.grad: np.ndarray | None = None
        self.requires_grad = bool(requires_grad)
        self._parents: tuple["Tensor", ...] = ()
        self._backward = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def T(self) -> "Tensor":
        return transpose(self)

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def _accumulate(self, grad: np.ndarray) -> None:
        if self.grad is None:
            self.grad = grad.copy()
        else:
            self.grad = self.grad + grad

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        """Reverse-mode pass from a scalar output."""
        if self.data.size != 1:
            raise ValueError(f"backward() needs a scalar, got shape {self.shape}")
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self._accumulate(np.ones_like(self.data))
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # operators ------------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __sub__(self, other):
        return add(self, mul(_wrap(other), -1.0))

    def __rsub__(self, other):
        return add(_wrap(other), mul(self, -1.0))

    def __matmul__(self, other):
        return matmul(self, other)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __getitem__(self, key):
        return getitem(self, key)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


def _wrap(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _result(data: np.ndarray, parents: tuple[Tensor, ...], backward) -> Tensor:
    out = Tensor(data)
    if any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = parents
        out._backward = backward
    return out


def add(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)
    data = a.data + b.data

    def backward(grad):
        if a.requires_grad:
            a._accumulate(_unbroadcast(grad, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(grad, b.shape))

    return _result(data, (a, b), backward)


def mul(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)
    data = a.data * b.data

    def backward(grad):
        if a.requires_grad:
            a._accumulate(_unbroadcast(grad * b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(grad * a.data, b.shape))

    return _result(data, (a, b), backward)


def power(a, exponent: float) -> Tensor:
    a = _wrap(a)
    data = a.data ** exponent

    def backward(grad):
        if a.requires_grad:
            a._accumulate(grad * exponent * a.data ** (exponent - 1))

    return _result(data, (a,), backward)


def matmul(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: incompatible shapes {a.shape} @ {b.shape}")
    data = a.data @ b.data

    def backward(grad):
        if a.requires_grad:
            a._accumulate(grad @ b.data.T)
        if b.requires_grad:
            b._accumulate(a.data.T @ grad)

    return _result(data, (a, b), backward)


def transpose(a) -> Tensor:
    a = _wrap(a)
    data = a.data.T

    def backward(grad):
        if a.requires_grad:
            a._accumulate(grad.T)

    return _result(data, (a,), backward)


def reshape(a, shape) -> Tensor:
    a = _wrap(a)
    data = a.data.reshape(shape)

    def backward(grad):
        if a.requires_grad:
            a._accumulate(grad.reshape(a.shape))

    return _result(data, (a,), backward)


def getitem(a, key) -> Tensor:
    a = _wrap(a)
    data = a.data[key]

    def backward(grad):
        if a.requires_grad:
            g = np.zeros_like(a.data)
            g[key] = grad
            a._accumulate(g)

    return _result(data, (a,), backward)


def take(a, indices) -> Tensor:
    """Axis-0 gather with repeats allowed (embedding/bias lookup)."""
    a = _wrap(a)
    idx = np.asarray(indices)
    data = a.data[idx]

    def backward(grad):
        if a.requires_grad:
            g = np.zeros_like(a.data)
            np.add.at(g, idx, grad)
            a._accumulate(g)

    return _result(data, (a,), backward)


def concat(tensors, axis: int = 0) -> Tensor:
    tensors = [_wrap(t) for t in tensors]
    data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]

    def backward(grad):
        offset = 0
        for t, size in zip(tensors, sizes):
            if t.requires_grad:
                sl = [slice(None)] * grad.ndim
                sl[axis] = slice(offset, offset + size)
                t._accumulate(grad[tuple(sl)])
            offset += size

    return _result(data, tuple(tensors), backward)


def relu(a) -> Tensor:
    a = _wrap(a)
    data = np.maximum(a.data, 0.0)

    def backward(grad):
        if a.requires_grad:
            a._accumulate(grad * (a.data > 0))

    return _result(data, (a,), backward)


def softmax(a, axis: int = -1) -> Tensor:
    """Numerically stable softmax; shift-invariant along `axis`."""
    a = _wrap(a)
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    ex = np.exp(shifted)
    data = ex / ex.sum(axis=axis, keepdims=True)

    def backward(grad):
        if a.requires_grad:
            inner = (grad * data).sum(axis=axis, keepdims=True)
            a._accumulate(data * (grad - inner))

    return _result(data, (a,), backward)


def sum_all(a) -> Tensor:
    a = _wrap(a)
    data = np.array(a.data.sum())

    def backward(grad):
        if a.requires_grad:
            a._accumulate(np.full(a.shape, float(grad)))

    return _result(data, (a,), backward)


def mean_pool(a) -> Tensor:
    """Arithmetic mean across rows of an (n, d) tensor."""
    a = _wrap(a)
    if a.data.ndim != 2:
        raise DimensionError(f"mean_pool: expected a 2-d tensor, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("mean_pool: empty input")
    data = a.data.mean(axis=0)

    def backward(grad):
        if a.requires_grad:
            a._accumulate(np.tile(grad / n, (n, 1)))

    return _result(data, (a,), backward)


def linear(x, W, b=None) -> Tensor:
    """y = x @ W (+ b). x is (n, p), W is (p, q), b is (q,)."""
    x, W = _wrap(x), _wrap(W)
    if x.data.ndim != 2 or W.data.ndim != 2 or x.shape[1] != W.shape[0]:
        raise DimensionError(f"linear: x{x.shape} is incompatible with W{W.shape}")
    out = matmul(x, W)
    if b is not None:
        b = _wrap(b)
        if b.shape != (W.shape[1],):
            raise DimensionError(f"linear: bias{b.shape} does not match W{W.shape}")
        out = add(out, b)
    return out


def cross_entropy(logits, gold: int) -> Tensor:
    """-log softmax(logits)[gold] for a 1-d logits vector."""
    logits = _wrap(logits)
    if logits.data.ndim != 1:
        raise DimensionError(f"cross_entropy: expected 1-d logits, got shape {logits.shape}")
    c = logits.shape[0]
    if not (0 <= gold < c):
        raise ValueError(f"cross_entropy: gold class {gold} out of range [0, {c})")
    z = logits.data
    m = z.max()
    lse = m + np.log(np.exp(z - m).sum())
    data = np.array(lse - z[gold])

    def backward(grad):
        if logits.requires_grad:
            p = np.exp(z - lse)
            p[gold] -= 1.0
            logits._accumulate(float(grad) * p)

    return _result(data, (logits,), backward)


# ---------------------------------------------------------------------------
# Parameters and gradient verification
# ---------------------------------------------------------------------------

class Parameters:
    """Named trainable tensors, created in a fixed order from one seeded RNG."""

    INIT_SCALE = 0.08

    def __init__(self, rng: np.random.Generator | None = None):
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.store: dict[str, Tensor] = {}

    def create(self, name: str, shape: tuple[int, ...]) -> Tensor:
        if name in self.store:
            raise ValueError(f"parameter {name!r} already exists")
        t = Tensor(self.rng.uniform(-self.INIT_SCALE, self.INIT_SCALE, size=shape),
                   requires_grad=True)
        self.store[name] = t
        return t

    def __getitem__(self, name: str) -> Tensor:
        return self.store[name]

    def __contains__(self, name: str) -> bool:
        return name in self.store

    def names(self) -> list[str]:
        return sorted(self.store)

    def items(self):
        return sorted(self.store.items())

    def zero_grad(self) -> None:
        for t in self.store.values():
            t.zero_grad()

    def subset(self, prefixes: tuple[str, ...]) -> list[str]:
        return [n for n in self.names() if n.startswith(prefixes)]


def gradient_check(f, params: dict[str, np.ndarray], step: float = 1e-6) -> float:
    """Compare reverse-mode gradients of f against central finite differences.

    f takes a dict of Tensors keyed like `params` and returns a scalar Tensor.
    Returns max over all coordinates of |g_a - g_fd| / max(1, |g_a|, |g_fd|).
    """
    tensors = {k: Tensor(v.copy(), requires_grad=True) for k, v in params.items()}
    loss = f(tensors)
    if not np.isfinite(loss.data).all():
        raise GradientError("non-finite loss in gradient check")
    loss.backward()
    analytic = {}
    for name, t in tensors.items():
        g = t.grad if t.grad is not None else np.zeros_like(t.data)
        if not np.isfinite(g).all():
            raise GradientError(f"non-finite gradient for parameter {name!r}")
        analytic[name] = g

    def evaluate(values: dict[str, np.ndarray]) -> float:
        frozen = {k: Tensor(v) for k, v in values.items()}
        out = f(frozen)
        val = float(out.data)
        if not np.isfinite(val):
            raise GradientError("non-finite loss during finite differencing")
        return val

    worst = 0.0
    work = {k: v.copy() for k, v in params.items()}
    for name, base in params.items():
        flat = work[name].reshape(-1)
        ga = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = evaluate(work)
            flat[i] = orig - step
            down = evaluate(work)
            flat[i] = orig
            gfd = (up - down) / (2.0 * step)
            err = abs(ga[i] - gfd) / max(1.0, abs(ga[i]), abs(gfd))
            worst = max(worst, err)
    return worst
