"""Dense networks with analytic backprop and Adam, on plain numpy.

Three head types cover every network in the stack:
  softmax  categorical action policies
  scalar   value estimates
  sigmoid  discriminator probabilities

``forward`` returns a cache that ``backward`` consumes to produce exact
gradients of a scalar loss given dL/d(output). Optimizer state lives in
``AdamState``; ``adam_step`` mutates the network and state in place (one
trainer owns a network at a time).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HEADS = ("softmax", "scalar", "sigmoid")

CHECKPOINT_VERSION = 1


class NonFiniteGradientError(RuntimeError):
    """A gradient or parameter went NaN/inf; training must stop cleanly."""


@dataclass(eq=False)
class Mlp:
    layer_sizes: list[int]
    head: str
    weights: list[np.ndarray]  # weights[i]: (layer_sizes[i], layer_sizes[i+1])
    biases: list[np.ndarray]

    @property
    def in_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def out_dim(self) -> int:
        return self.layer_sizes[-1]


@dataclass(eq=False)
class Gradients:
    weights: list[np.ndarray]
    biases: list[np.ndarray]


@dataclass(eq=False)
class AdamState:
    learning_rate: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m_w: list[np.ndarray] = field(default_factory=list)
    v_w: list[np.ndarray] = field(default_factory=list)
    m_b: list[np.ndarray] = field(default_factory=list)
    v_b: list[np.ndarray] = field(default_factory=list)


def _orthogonal(rng: np.random.Generator, rows: int, cols: int, gain: float) -> np.ndarray:
    a = rng.normal(size=(rows, cols))
    q, r = np.linalg.qr(a if rows >= cols else a.T)
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return gain * q[:rows, :cols]


def build_mlp(
    layer_sizes: list[int],
    head: str,
    rng: np.random.Generator,
    out_gain: float = 1.0,
) -> Mlp:
    """Orthogonally initialized network; ``out_gain`` scales the last layer.

    Policies use a small out_gain (0.01) so the initial distribution is
    near uniform.
    """
    if head not in HEADS:
        raise ValueError(f"head must be one of {HEADS}, got {head!r}")
    if len(layer_sizes) < 2:
        raise ValueError("need at least an input and an output size")
    weights, biases = [], []
    n_layers = len(layer_sizes) - 1
    for i in range(n_layers):
        gain = out_gain if i == n_layers - 1 else np.sqrt(2.0)
        weights.append(_orthogonal(rng, layer_sizes[i], layer_sizes[i + 1], gain))
        biases.append(np.zeros(layer_sizes[i + 1]))
    return Mlp(list(layer_sizes), head, weights, biases)


def adam_state_for(net: Mlp, learning_rate: float) -> AdamState:
    return AdamState(
        learning_rate=learning_rate,
        m_w=[np.zeros_like(w) for w in net.weights],
        v_w=[np.zeros_like(w) for w in net.weights],
        m_b=[np.zeros_like(b) for b in net.biases],
        v_b=[np.zeros_like(b) for b in net.biases],
    )


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, dict]:
    """Run the network; returns (output, cache for backward).

    ``x`` may be a single vector or a (batch, in_dim) matrix; the output
    matches the input's dimensionality.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    a = x[None, :] if single else x
    if a.shape[1] != net.in_dim:
        raise ValueError(f"input dim {a.shape[1]} != expected {net.in_dim}")
    activations = [a]
    n_layers = len(net.weights)
    for i in range(n_layers - 1):
        a = np.tanh(a @ net.weights[i] + net.biases[i])
        activations.append(a)
    z = a @ net.weights[-1] + net.biases[-1]
    if net.head == "softmax":
        out = _softmax(z)
    elif net.head == "sigmoid":
        out = _sigmoid(z)
    else:
        out = z
    cache = {"activations": activations, "out": out, "single": single}
    return (out[0] if single else out), cache


def backward(net: Mlp, cache: dict, dout: np.ndarray) -> Gradients:
    """Exact gradients of a scalar loss wrt parameters, given dL/d(output)."""
    dout = np.asarray(dout, dtype=float)
    if cache["single"]:
        dout = dout[None, :]
    out = cache["out"]
    if dout.shape != out.shape:
        raise ValueError(f"output gradient shape {dout.shape} != {out.shape}")
    if net.head == "softmax":
        # chain through the softmax Jacobian: dz = p * (dout - sum(dout * p))
        dz = out * (dout - (dout * out).sum(axis=1, keepdims=True))
    elif net.head == "sigmoid":
        dz = dout * out * (1.0 - out)
    else:
        dz = dout
    acts = cache["activations"]
    gw = [np.empty(0)] * len(net.weights)
    gb = [np.empty(0)] * len(net.biases)
    for i in range(len(net.weights) - 1, -1, -1):
        gw[i] = acts[i].T @ dz
        gb[i] = dz.sum(axis=0)
        if i > 0:
            da = dz @ net.weights[i].T
            dz = da * (1.0 - acts[i] ** 2)  # tanh'
    return Gradients(gw, gb)


def adam_step(net: Mlp, state: AdamState, grads: Gradients) -> tuple[Mlp, AdamState]:
    """One Adam update with bias correction; mutates net and state in place."""
    for g in grads.weights + grads.biases:
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradientError("non-finite gradient")
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1**state.step
    bc2 = 1.0 - b2**state.step
    for params, grad_list, m_list, v_list in (
        (net.weights, grads.weights, state.m_w, state.v_w),
        (net.biases, grads.biases, state.m_b, state.v_b),
    ):
        for p, g, m, v in zip(params, grad_list, m_list, v_list):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= state.learning_rate * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return net, state


# --- checkpoint (de)serialization -------------------------------------------


def net_to_dict(net: Mlp, adam: AdamState | None = None) -> dict:
    d = {
        "version": CHECKPOINT_VERSION,
        "layer_sizes": list(net.layer_sizes),
        "head": net.head,
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }
    if adam is not None:
        d["adam"] = {
            "learning_rate": adam.learning_rate,
            "beta1": adam.beta1,
            "beta2": adam.beta2,
            "eps": adam.eps,
            "step": adam.step,
            "m_w": [m.tolist() for m in adam.m_w],
            "v_w": [v.tolist() for v in adam.v_w],
            "m_b": [m.tolist() for m in adam.m_b],
            "v_b": [v.tolist() for v in adam.v_b],
        }
    return d


def net_from_dict(d: dict) -> tuple[Mlp, AdamState | None]:
    if d.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported network checkpoint version: {d.get('version')}")
    net = Mlp(
        layer_sizes=list(d["layer_sizes"]),
        head=d["head"],
        weights=[np.asarray(w, dtype=float) for w in d["weights"]],
        biases=[np.asarray(b, dtype=float) for b in d["biases"]],
    )
    adam = None
    if "adam" in d:
        a = d["adam"]
        adam = AdamState(
            learning_rate=a["learning_rate"],
            beta1=a["beta1"],
            beta2=a["beta2"],
            eps=a["eps"],
            step=a["step"],
            m_w=[np.asarray(m, dtype=float) for m in a["m_w"]],
            v_w=[np.asarray(v, dtype=float) for v in a["v_w"]],
            m_b=[np.asarray(m, dtype=float) for m in a["m_b"]],
            v_b=[np.asarray(v, dtype=float) for v in a["v_b"]],
        )
    return net, adam
