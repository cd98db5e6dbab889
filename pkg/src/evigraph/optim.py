"""AdamW with decoupled weight decay and bias-corrected moments."""

from __future__ import annotations

import numpy as np

from .tensor import Parameters


class AdamW:
    def __init__(self, params: Parameters, names: list[str] | None = None,
                 lr: float = 1e-3, betas: tuple[float, float] = (0.9, 0.999),
                 eps: float = 1e-8, weight_decay: float = 0.01):
        self.params = params
        self.names = sorted(names) if names is not None else params.names()
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.weight_decay = weight_decay
        self.t = 0
        self._m = {n: np.zeros_like(params[n].data) for n in self.names}
        self._v = {n: np.zeros_like(params[n].data) for n in self.names}

    def zero_grad(self) -> None:
        for n in self.names:
            self.params[n].zero_grad()

    def step(self) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for n in self.names:
            p = self.params[n]
            g = p.grad if p.grad is not None else np.zeros_like(p.data)
            m = self._m[n] = b1 * self._m[n] + (1.0 - b1) * g
            v = self._v[n] = b2 * self._v[n] + (1.0 - b2) * g * g
            m_hat = m / (1.0 - b1 ** self.t)
            v_hat = v / (1.0 - b2 ** self.t)
            p.data = p.data - self.lr * (m_hat / (np.sqrt(v_hat) + self.eps)
                                         + self.weight_decay * p.data)
