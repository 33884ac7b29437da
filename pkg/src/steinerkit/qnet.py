"""Graph Q-network: encode / process / decode with explicit gradients.

The network scores "add vertex v to the partial tree" actions.  Encoding
mixes each vertex's tree-membership and terminal bits with its nearest-
terminal distance features; processing runs one neighborhood-difference
aggregation through a two-layer perceptron; decoding combines a pooled
graph summary with the candidate vertex embedding into a scalar score.

Everything is plain numpy with a hand-written backward pass.  Batches are
tiny (16) and graphs small (tens to hundreds of vertices), so dense
matrices beat any framework overhead here, and exact reproducibility is
trivial to guarantee.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

import numpy as np

PARAM_SHAPES = ("theta1", "theta2", "w1", "b1", "w2", "b2", "theta3", "theta4", "theta5")
CHECKPOINT_FORMAT = "qnet-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass
class QNetParams:
    """All trainable tensors.  P is the embedding width, K the feature width."""

    theta1: np.ndarray  # (P, 2) encoder weights for [in-tree, is-terminal]
    theta2: np.ndarray  # (P, K) encoder weights for distance features
    w1: np.ndarray      # (P, 2P) processor layer 1
    b1: np.ndarray      # (P,)
    w2: np.ndarray      # (P, P) processor layer 2
    b2: np.ndarray      # (P,)
    theta3: np.ndarray  # (2P,) decoder readout
    theta4: np.ndarray  # (P, P) decoder pooled-summary mix
    theta5: np.ndarray  # (P, P) decoder candidate mix

    @property
    def p_dim(self) -> int:
        return self.theta1.shape[0]

    @property
    def k(self) -> int:
        return self.theta2.shape[1]

    def copy(self) -> "QNetParams":
        return QNetParams(**{f.name: getattr(self, f.name).copy() for f in fields(self)})

    def as_dict(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def init_params(p_dim: int, k: int, seed: int) -> QNetParams:
    """Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) init, fixed tensor order."""
    if p_dim < 1 or k < 1:
        raise ValueError("p_dim and k must be positive")
    rng = np.random.default_rng(np.random.PCG64(seed))

    def u(shape, fan_in):
        s = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-s, s, size=shape)

    return QNetParams(
        theta1=u((p_dim, 2), 2),
        theta2=u((p_dim, k), k),
        w1=u((p_dim, 2 * p_dim), 2 * p_dim),
        b1=u((p_dim,), 2 * p_dim),
        w2=u((p_dim, p_dim), p_dim),
        b2=u((p_dim,), p_dim),
        theta3=u((2 * p_dim,), 2 * p_dim),
        theta4=u((p_dim, p_dim), p_dim),
        theta5=u((p_dim, p_dim), p_dim),
    )


@dataclass(frozen=True)
class NetInput:
    """Per-state network input: features, state bits, and graph structure."""

    x: np.ndarray         # (n, K) normalized nearest-terminal distances
    s_bits: np.ndarray    # (n,) 1.0 when the vertex is in the partial tree
    t_bits: np.ndarray    # (n,) 1.0 when the vertex is a terminal
    adjacency: np.ndarray  # (n, n) dense 0/1, symmetric
    degrees: np.ndarray   # (n,) row sums of adjacency


def _relu(a: np.ndarray) -> np.ndarray:
    return np.maximum(a, 0.0)


def encode(params: QNetParams, x, s_bits, t_bits) -> np.ndarray:
    """Vertex embeddings from state bits and distance features."""
    st = np.stack([np.asarray(s_bits, dtype=float), np.asarray(t_bits, dtype=float)], axis=1)
    return _relu(st @ params.theta1.T + np.asarray(x, dtype=float) @ params.theta2.T)


def process(params: QNetParams, mu, adjacency, degrees) -> np.ndarray:
    """One aggregation round: rectified [mu, neighborhood difference] through the MLP."""
    agg = degrees[:, None] * mu - adjacency @ mu
    z = _relu(np.concatenate([mu, agg], axis=1))
    h = _relu(z @ params.w1.T + params.b1)
    return _relu(h @ params.w2.T + params.b2)


def decode_q(params: QNetParams, mu_p, v: int) -> float:
    """Scalar action value for adding vertex v, given processed embeddings."""
    g4 = params.theta4 @ mu_p.sum(axis=0)
    v5 = params.theta5 @ mu_p[v]
    return float(params.theta3 @ _relu(np.concatenate([g4, v5])))


@dataclass
class ForwardCache:
    st: np.ndarray
    pre0: np.ndarray
    mu: np.ndarray
    zpre: np.ndarray
    z: np.ndarray
    pre1: np.ndarray
    h: np.ndarray
    pre2: np.ndarray
    mu_p: np.ndarray
    pooled: np.ndarray


def forward(params: QNetParams, inp: NetInput) -> ForwardCache:
    st = np.stack([inp.s_bits.astype(float), inp.t_bits.astype(float)], axis=1)
    pre0 = st @ params.theta1.T + inp.x @ params.theta2.T
    mu = _relu(pre0)
    agg = inp.degrees[:, None] * mu - inp.adjacency @ mu
    zpre = np.concatenate([mu, agg], axis=1)
    z = _relu(zpre)
    pre1 = z @ params.w1.T + params.b1
    h = _relu(pre1)
    pre2 = h @ params.w2.T + params.b2
    mu_p = _relu(pre2)
    return ForwardCache(st=st, pre0=pre0, mu=mu, zpre=zpre, z=z, pre1=pre1,
                        h=h, pre2=pre2, mu_p=mu_p, pooled=mu_p.sum(axis=0))


def q_values(params: QNetParams, inp: NetInput) -> np.ndarray:
    """Action values for every vertex at once (callers mask to the frontier)."""
    cache = forward(params, inp)
    g4 = params.theta4 @ cache.pooled
    v5 = cache.mu_p @ params.theta5.T
    qpre = np.concatenate([np.broadcast_to(g4, v5.shape), v5], axis=1)
    return _relu(qpre) @ params.theta3


def grad(params: QNetParams, inp: NetInput, v: int, target: float):
    """Squared-error loss (target - Q)^2 and its gradient for one sample.

    Backward mirrors ``forward`` exactly; relu passes gradient only where
    the pre-activation was strictly positive.  The pooled decoder summary
    sends its gradient to every vertex row, the candidate arm only to v.
    """
    c = forward(params, inp)
    if not np.all(np.isfinite(c.mu)):
        raise FloatingPointError("non-finite values after the encoder")
    if not np.all(np.isfinite(c.mu_p)):
        raise FloatingPointError("non-finite values after the processor")
    p = params.p_dim
    g4 = params.theta4 @ c.pooled
    v5 = params.theta5 @ c.mu_p[v]
    qpre = np.concatenate([g4, v5])
    qr = _relu(qpre)
    q = float(params.theta3 @ qr)
    if not np.isfinite(q) or not np.isfinite(target):
        raise FloatingPointError("non-finite value in the decoder output")
    diff = q - target
    loss = diff * diff

    dq = 2.0 * diff
    g = {}
    g["theta3"] = dq * qr
    dqpre = dq * params.theta3 * (qpre > 0)
    d_g4, d_v5 = dqpre[:p], dqpre[p:]
    g["theta4"] = np.outer(d_g4, c.pooled)
    g["theta5"] = np.outer(d_v5, c.mu_p[v])

    dmu_p = np.tile(params.theta4.T @ d_g4, (c.mu_p.shape[0], 1))
    dmu_p[v] += params.theta5.T @ d_v5

    dpre2 = dmu_p * (c.pre2 > 0)
    g["w2"] = dpre2.T @ c.h
    g["b2"] = dpre2.sum(axis=0)
    dh = dpre2 @ params.w2
    dpre1 = dh * (c.pre1 > 0)
    g["w1"] = dpre1.T @ c.z
    g["b1"] = dpre1.sum(axis=0)
    dz = dpre1 @ params.w1
    dzpre = dz * (c.zpre > 0)
    dz_mu, dz_agg = dzpre[:, :p], dzpre[:, p:]
    dmu = dz_mu + inp.degrees[:, None] * dz_agg - inp.adjacency @ dz_agg
    dpre0 = dmu * (c.pre0 > 0)
    g["theta1"] = dpre0.T @ c.st
    g["theta2"] = dpre0.T @ inp.x
    return loss, g


def zero_like(params: QNetParams) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(arr) for name, arr in params.as_dict().items()}


def add_grads(acc: dict[str, np.ndarray], g: dict[str, np.ndarray]) -> None:
    for name in acc:
        acc[name] += g[name]


def sgd_step(params: QNetParams, grads: dict[str, np.ndarray], lr: float) -> None:
    """In-place vanilla SGD update."""
    for name, arr in params.as_dict().items():
        arr -= lr * grads[name]


def save_checkpoint(params: QNetParams, path, meta: dict | None = None) -> None:
    """JSON checkpoint; float repr round-trips exactly, so reloads are bitwise."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "p_dim": params.p_dim,
        "k": params.k,
        "meta": meta or {},
        "params": {name: arr.tolist() for name, arr in params.as_dict().items()},
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_checkpoint(path) -> tuple[QNetParams, dict]:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a {CHECKPOINT_FORMAT} file: {path}")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {payload.get('version')}")
    raw = payload["params"]
    arrays = {name: np.asarray(raw[name], dtype=float) for name in PARAM_SHAPES}
    params = QNetParams(**arrays)
    if params.p_dim != payload["p_dim"] or params.k != payload["k"]:
        raise ValueError("checkpoint header disagrees with stored tensor shapes")
    return params, payload.get("meta", {})
