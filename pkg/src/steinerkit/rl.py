"""Episode environment and DDQN training for the greedy tree builder.

An episode grows a partial solution S from a start terminal, one frontier
vertex per step, until every terminal is covered.  Rewards are the
negative attachment cost minus the vertex's remaining nearest-terminal
distance mass, plus a bonus for reaching a terminal.  Training is double
deep Q-learning: actions picked by the live network, valued by a frozen
target copy, from uniformly sampled replay.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .features import (
    TerminalFeatures,
    feature_scale,
    knn_features,
    terminal_distance_matrix,
)
from .graph import StpInstance
from .qnet import (
    NetInput,
    QNetParams,
    add_grads,
    grad,
    init_params,
    q_values,
    sgd_step,
    zero_like,
)
from .solvers import SteinerTree, kmb, prune, verify_tree


@dataclass(frozen=True)
class InstanceStatic:
    """Per-instance constants shared by every episode on that instance."""

    table: np.ndarray      # (n, |T|) full vertex-to-terminal distances
    scale: float
    t_bits: np.ndarray     # (n,) terminal indicator
    adjacency: np.ndarray
    degrees: np.ndarray
    t_index: dict[int, int]
    bonus_c: float


@lru_cache(maxsize=256)
def instance_static(instance: StpInstance) -> InstanceStatic:
    table = terminal_distance_matrix(instance)
    adjacency = instance.graph.adjacency_matrix()
    t_bits = np.zeros(instance.graph.vertex_count)
    terms = instance.terminal_list
    for t in terms:
        t_bits[t] = 1.0
    return InstanceStatic(
        table=table,
        scale=feature_scale(table),
        t_bits=t_bits,
        adjacency=adjacency,
        degrees=adjacency.sum(axis=1),
        t_index={t: i for i, t in enumerate(terms)},
        bonus_c=instance.graph.mean_edge_weight(),
    )


@dataclass
class EpisodeState:
    """Mutable episode: partial solution, frontier, features, and cost."""

    instance: StpInstance
    static: InstanceStatic
    order: list[int]
    in_tree: np.ndarray
    frontier: set[int]
    chosen_edges: list[tuple[int, int, float]]
    cost: float
    active_mask: np.ndarray
    features: TerminalFeatures
    x: np.ndarray  # normalized feature rows, replaced (never mutated) on updates
    done: bool

    @property
    def frontier_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.frontier))

    def net_input(self) -> NetInput:
        return NetInput(
            x=self.x,
            s_bits=self.in_tree.astype(float),
            t_bits=self.static.t_bits,
            adjacency=self.static.adjacency,
            degrees=self.static.degrees,
        )

    def snapshot(self) -> "StateSnapshot":
        return StateSnapshot(
            x=self.x,
            s_bits=self.in_tree.astype(float),
            frontier=self.frontier_sorted,
            done=self.done,
        )


@dataclass(frozen=True)
class StateSnapshot:
    """Immutable view of an episode moment, enough to re-run the network."""

    x: np.ndarray
    s_bits: np.ndarray
    frontier: tuple[int, ...]
    done: bool


@dataclass(frozen=True)
class Transition:
    instance: StpInstance
    before: StateSnapshot
    action: int
    reward: float
    after: StateSnapshot

    @property
    def done(self) -> bool:
        return self.after.done


def snapshot_net_input(instance: StpInstance, snap: StateSnapshot) -> NetInput:
    st = instance_static(instance)
    return NetInput(x=snap.x, s_bits=snap.s_bits, t_bits=st.t_bits,
                    adjacency=st.adjacency, degrees=st.degrees)


DEFAULT_K = 2


def reset(instance: StpInstance, rng: np.random.Generator | None = None,
          start: int | None = None, k: int = DEFAULT_K) -> EpisodeState:
    """Begin an episode at a terminal (random under rng, else the lowest).

    ``k`` must match the network's feature width; rows are zero-filled when
    fewer than k terminals remain active, so any k >= 1 is legal.
    """
    if k < 1:
        raise ValueError("k must be positive")
    terms = instance.terminal_list
    if start is not None:
        if start not in instance.terminals:
            raise ValueError(f"start vertex {start} is not a terminal")
        v1 = start
    elif rng is not None:
        v1 = terms[int(rng.integers(len(terms)))]
    else:
        v1 = terms[0]

    st = instance_static(instance)
    n = instance.graph.vertex_count
    in_tree = np.zeros(n, dtype=bool)
    in_tree[v1] = True
    active = np.ones(len(terms), dtype=bool)
    active[st.t_index[v1]] = False
    feats = knn_features(st.table, active, k)
    frontier = {u for u, _ in instance.graph.neighbors(v1)}
    return EpisodeState(
        instance=instance, static=st, order=[v1], in_tree=in_tree,
        frontier=frontier, chosen_edges=[], cost=0.0, active_mask=active,
        features=feats, x=feats.rows / st.scale, done=not active.any(),
    )


def step(state: EpisodeState, v: int) -> tuple[EpisodeState, float]:
    """Attach frontier vertex v by its cheapest edge into S; reward per Eq.-style
    rule: -(attachment weight) - (v's normalized remaining-distance mass),
    plus the instance bonus when v is a terminal.  Mutates and returns state."""
    if state.done:
        raise ValueError("episode already finished")
    if v not in state.frontier:
        raise ValueError(f"vertex {v} is not on the frontier")

    g = state.instance.graph
    w_min, attach = math.inf, -1
    for u, w in g.neighbors(v):
        if state.in_tree[u] and w < w_min:
            w_min, attach = w, u
    assert attach >= 0, "frontier vertex with no tree neighbor"

    reward = -w_min - float(state.x[v].sum())
    is_terminal = bool(state.static.t_bits[v])
    if is_terminal:
        reward += state.static.bonus_c

    state.order.append(v)
    state.in_tree[v] = True
    a, b = (attach, v) if attach < v else (v, attach)
    state.chosen_edges.append((a, b, w_min))
    state.cost += w_min
    state.frontier.discard(v)
    for u, _ in g.neighbors(v):
        if not state.in_tree[u]:
            state.frontier.add(u)

    if is_terminal:
        state.active_mask[state.static.t_index[v]] = False
        state.features = knn_features(state.static.table, state.active_mask,
                                      state.features.k)
        state.x = state.features.rows / state.static.scale
        state.done = not state.active_mask.any()
    return state, reward


def frontier_q_values(params: QNetParams, state: EpisodeState) -> dict[int, float]:
    """Action-value map restricted to the legal actions."""
    if not state.frontier:
        raise ValueError("empty frontier")
    q = q_values(params, state.net_input())
    return {v: float(q[v]) for v in state.frontier_sorted}


def select_action(state: EpisodeState, q_map: dict[int, float], epsilon: float,
                  rng: np.random.Generator | None = None) -> int:
    """epsilon-greedy over the frontier; greedy ties go to the lowest vertex."""
    frontier = state.frontier_sorted
    if not frontier:
        raise ValueError("empty frontier")
    if epsilon > 0:
        if rng is None:
            raise ValueError("exploration needs an rng")
        if rng.random() < epsilon:
            return int(frontier[int(rng.integers(len(frontier)))])
    best_v, best_q = frontier[0], q_map[frontier[0]]
    for v in frontier[1:]:
        if q_map[v] > best_q:
            best_v, best_q = v, q_map[v]
    return best_v


def ddqn_target(transition: Transition, env_params: QNetParams,
                target_params: QNetParams, gamma: float) -> float:
    """Double estimator: live net picks the successor action, frozen net prices it."""
    if transition.done:
        return transition.reward
    after = transition.after
    if not after.frontier:
        raise ValueError("non-terminal transition with empty next frontier")
    inp = snapshot_net_input(transition.instance, after)
    q_env = q_values(env_params, inp)
    frontier = np.array(after.frontier)
    v_star = int(frontier[int(np.argmax(q_env[frontier]))])
    q_tgt = q_values(target_params, inp)
    return transition.reward + gamma * float(q_tgt[v_star])


class ReplayBuffer:
    """Bounded ring of transitions with seeded uniform batch sampling."""

    def __init__(self, capacity: int, rng: np.random.Generator):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.rng = rng
        self._data: list[Transition] = []
        self._pos = 0

    def push(self, t: Transition) -> None:
        if len(self._data) < self.capacity:
            self._data.append(t)
        else:
            self._data[self._pos] = t
        self._pos = (self._pos + 1) % self.capacity

    def sample(self, batch: int) -> list[Transition]:
        if batch > len(self._data):
            raise ValueError(f"buffer holds {len(self._data)} < batch {batch}")
        idx = self.rng.choice(len(self._data), size=batch, replace=False)
        return [self._data[int(i)] for i in idx]

    def __len__(self) -> int:
        return len(self._data)


@dataclass(frozen=True)
class DdqnConfig:
    """Trainer knobs; defaults follow the reported best settings."""

    p_dim: int = 64
    k: int = 2
    gamma: float = 0.2
    lr: float = 1e-4
    batch: int = 16
    epsilon_start: float = 0.1
    epsilon_end: float = 0.0
    epsilon_fraction: float = 0.8
    target_sync: int = 100
    replay_cap: int = 50_000
    warmup_batches: int = 10
    rounds: int = 6000
    seed: int = 0
    validation_every: int = 500

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        for name in ("p_dim", "k", "batch", "target_sync", "replay_cap",
                     "warmup_batches", "validation_every"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.rounds < 0:
            raise ValueError("rounds must be non-negative")


def epsilon_at(config: DdqnConfig, round_idx: int) -> float:
    """Linear anneal over the first epsilon_fraction of rounds, then flat end."""
    horizon = int(config.rounds * config.epsilon_fraction)
    if horizon <= 0 or round_idx >= horizon:
        return config.epsilon_end
    t = round_idx / horizon
    return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * t


def train_step(buffer: ReplayBuffer, env_params: QNetParams,
               target_params: QNetParams, config: DdqnConfig) -> float:
    """One SGD update from a uniform replay batch; returns the mean loss."""
    batch = buffer.sample(config.batch)
    acc = zero_like(env_params)
    total_loss = 0.0
    for tr in batch:
        y = ddqn_target(tr, env_params, target_params, config.gamma)
        inp = snapshot_net_input(tr.instance, tr.before)
        loss, g = grad(env_params, inp, tr.action, y)
        total_loss += loss
        add_grads(acc, g)
    for name in acc:
        acc[name] /= config.batch
        if not np.all(np.isfinite(acc[name])):
            raise FloatingPointError(f"non-finite gradient in {name}")
    sgd_step(env_params, acc, config.lr)
    return total_loss / config.batch


def sync_target(env_params: QNetParams) -> QNetParams:
    """Deep snapshot; later updates to the live params leave it untouched."""
    return env_params.copy()


@dataclass
class CurveRow:
    round: int
    episode_cost: float
    mean_loss: float
    epsilon: float
    gain_on_validation: float = math.nan


def write_curve_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "episode_cost", "mean_loss", "epsilon",
                    "gain_on_validation"])
        for r in rows:
            w.writerow([
                r.round,
                repr(r.episode_cost),
                "" if math.isnan(r.mean_loss) else repr(r.mean_loss),
                repr(r.epsilon),
                "" if math.isnan(r.gain_on_validation) else repr(r.gain_on_validation),
            ])


def run_episode(instance: StpInstance, params: QNetParams, epsilon: float,
                rng: np.random.Generator,
                buffer: ReplayBuffer | None = None) -> EpisodeState:
    """Play one full episode, optionally recording transitions."""
    state = reset(instance, rng=rng, k=params.k)
    while not state.done:
        q_map = frontier_q_values(params, state)
        before = state.snapshot()
        action = select_action(state, q_map, epsilon, rng)
        _, reward = step(state, action)
        if buffer is not None:
            buffer.push(Transition(instance=instance, before=before,
                                   action=action, reward=reward,
                                   after=state.snapshot()))
    return state


def train(instance_stream, config: DdqnConfig,
          validation_instances=None,
          train_hook=None) -> tuple[QNetParams, list[CurveRow]]:
    """DDQN over a stream of instances, one episode per round.

    Returns the parameters that scored the best validation Gain (mean
    rollout cost over the classic baseline), or the final parameters when
    no validation set is supplied, plus the per-round learning curve.
    """
    ss = np.random.SeedSequence(config.seed)
    init_ss, episode_ss, buffer_ss = ss.spawn(3)
    env_params = init_params(config.p_dim, config.k, init_ss)
    target_params = sync_target(env_params)
    episode_rng = np.random.default_rng(np.random.PCG64(episode_ss))
    buffer = ReplayBuffer(config.replay_cap,
                          np.random.default_rng(np.random.PCG64(buffer_ss)))

    val_classic = None
    if validation_instances is not None:
        validation_instances = list(validation_instances)
        val_classic = [kmb(inst).cost for inst in validation_instances]

    stream = iter(instance_stream)
    curve: list[CurveRow] = []
    best_params = env_params.copy()
    best_gain = math.inf
    last_gain = math.nan
    train_steps = 0
    warmup = config.warmup_batches * config.batch

    for round_idx in range(config.rounds):
        try:
            instance = next(stream)
        except StopIteration:
            raise ValueError(f"instance stream exhausted at round {round_idx}")
        eps = epsilon_at(config, round_idx)
        state = reset(instance, rng=episode_rng, k=config.k)
        losses = []
        while not state.done:
            q_map = frontier_q_values(env_params, state)
            before = state.snapshot()
            action = select_action(state, q_map, eps, episode_rng)
            _, reward = step(state, action)
            buffer.push(Transition(instance=instance, before=before,
                                   action=action, reward=reward,
                                   after=state.snapshot()))
            if len(buffer) >= max(warmup, config.batch):
                losses.append(train_step(buffer, env_params, target_params, config))
                train_steps += 1
                if train_steps % config.target_sync == 0:
                    target_params = sync_target(env_params)

        if validation_instances and (round_idx + 1) % config.validation_every == 0:
            costs = [greedy_rollout(inst, env_params).cost
                     for inst in validation_instances]
            last_gain = float(np.mean([c / ref for c, ref
                                       in zip(costs, val_classic)]))
            if last_gain < best_gain:
                best_gain = last_gain
                best_params = env_params.copy()

        curve.append(CurveRow(
            round=round_idx,
            episode_cost=state.cost,
            mean_loss=float(np.mean(losses)) if losses else math.nan,
            epsilon=eps,
            gain_on_validation=last_gain,
        ))
        if train_hook is not None:
            train_hook(round_idx, env_params)

    if validation_instances and best_gain < math.inf:
        return best_params, curve
    return env_params, curve


def greedy_rollout(instance: StpInstance, params: QNetParams) -> SteinerTree:
    """Deterministic policy from every terminal start; cheapest pruned tree wins."""
    best: SteinerTree | None = None
    for start in instance.terminal_list:
        state = reset(instance, start=start, k=params.k)
        while not state.done:
            q_map = frontier_q_values(params, state)
            action = select_action(state, q_map, 0.0)
            step(state, action)
        tree = prune(verify_tree(instance, state.chosen_edges), instance.terminals)
        if best is None or tree.cost < best.cost:
            best = tree
    assert best is not None
    return best


def active_search(instance: StpInstance, params: QNetParams, budget_rounds: int,
                  config: DdqnConfig | None = None, seed: int = 0,
                  rollout_every: int = 50) -> tuple[SteinerTree, QNetParams]:
    """Fine-tune a private parameter copy on one instance while searching.

    Every exploration episode is itself a candidate solution; greedy
    rollouts under the adapted parameters are retried periodically.  The
    returned tree is never worse than the initial greedy rollout.
    """
    if budget_rounds < 0:
        raise ValueError("budget must be non-negative")
    if config is None:
        config = DdqnConfig(p_dim=params.p_dim, k=params.k, seed=seed)
    local = params.copy()
    target = sync_target(local)
    ss = np.random.SeedSequence(seed)
    episode_ss, buffer_ss = ss.spawn(2)
    episode_rng = np.random.default_rng(np.random.PCG64(episode_ss))
    buffer = ReplayBuffer(config.replay_cap,
                          np.random.default_rng(np.random.PCG64(buffer_ss)))

    best = greedy_rollout(instance, local)
    warmup = config.warmup_batches * config.batch
    train_steps = 0
    schedule = replace(config, rounds=max(budget_rounds, 1))

    for round_idx in range(budget_rounds):
        eps = epsilon_at(schedule, round_idx)
        state = reset(instance, rng=episode_rng, k=params.k)
        while not state.done:
            q_map = frontier_q_values(local, state)
            before = state.snapshot()
            action = select_action(state, q_map, eps, episode_rng)
            _, reward = step(state, action)
            buffer.push(Transition(instance=instance, before=before,
                                   action=action, reward=reward,
                                   after=state.snapshot()))
            if len(buffer) >= max(warmup, config.batch):
                train_step(buffer, local, target, config)
                train_steps += 1
                if train_steps % config.target_sync == 0:
                    target = sync_target(local)
        candidate = prune(verify_tree(instance, state.chosen_edges),
                          instance.terminals)
        if candidate.cost < best.cost:
            best = candidate
        if (round_idx + 1) % rollout_every == 0:
            candidate = greedy_rollout(instance, local)
            if candidate.cost < best.cost:
                best = candidate
    return best, local
