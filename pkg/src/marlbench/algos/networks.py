"""Per-agent network stacks with optional parameter sharing."""

from __future__ import annotations

import numpy as np

from ..autodiff import Mlp, Tensor, concat, reshape
from ..autodiff.nn import copy_params
from ..rng import Rng
from .common import EnvInfo

# additive logit penalty that zeroes softmax mass and loses every argmax
_MASK_VALUE = -1e9


def build_inputs(obs: np.ndarray, info: EnvInfo, sharing: bool) -> np.ndarray:
    """Assemble per-agent network inputs from a [..., N, Dmax] obs array.

    With sharing, inputs are zero-padded observations plus a one-hot agent
    identity, shaped [..., N, Dmax + N]; without sharing they are returned
    as given (each agent consumes its own slice).
    """
    if not sharing:
        return obs
    n = info.n_agents
    shape = obs.shape[:-1] + (n,)
    ids = np.zeros(shape, dtype=np.float64)
    idx = np.arange(n)
    ids[..., idx, idx] = 1.0
    return np.concatenate([obs, ids], axis=-1)


class MultiAgentMlp:
    """One MLP per agent, or a single shared MLP with identity inputs.

    ``forward_all`` evaluates every agent on a batch in one call and
    returns a Tensor of shape [B, N, out].  For shared heads over action
    spaces of unequal size, logits of invalid actions are pinned to a
    large negative constant so downstream softmax/argmax assign them
    exactly zero probability.
    """

    def __init__(self, info: EnvInfo, out_dims: int, hidden: int, sharing: bool, rng: Rng):
        self.info = info
        self.sharing = sharing
        self.out_dim = out_dims
        if sharing:
            in_dim = info.max_obs_dim + info.n_agents
            self.nets = [Mlp([in_dim, hidden, hidden, out_dims], rng)]
        else:
            self.nets = [
                Mlp([info.obs_dims[i], hidden, hidden, out_dims], rng.spawn(i))
                for i in range(info.n_agents)
            ]
        self._mask = None
        if out_dims == info.max_actions and len(set(info.n_actions)) > 1:
            mask = np.zeros((info.n_agents, out_dims))
            for i, count in enumerate(info.n_actions):
                mask[i, count:] = _MASK_VALUE
            self._mask = mask

    def parameters(self) -> list[Tensor]:
        return [p for net in self.nets for p in net.parameters()]

    def freeze(self) -> "MultiAgentMlp":
        for p in self.parameters():
            p.requires_grad = False
        return self

    def sync_from(self, other: "MultiAgentMlp") -> None:
        copy_params(other.parameters(), self.parameters())

    def forward_all(self, obs: np.ndarray) -> Tensor:
        """obs: [B, N, Dmax] (padded) -> Tensor [B, N, out]."""
        batch = obs.shape[0]
        n = self.info.n_agents
        if self.sharing:
            inputs = build_inputs(obs, self.info, True)
            flat = inputs.reshape(batch * n, -1)
            out = self.nets[0](Tensor(flat))
            out = reshape(out, (batch, n, self.out_dim))
        else:
            per_agent = [
                reshape(
                    self.nets[i](Tensor(obs[:, i, : self.info.obs_dims[i]])),
                    (batch, 1, self.out_dim),
                )
                for i in range(n)
            ]
            out = concat(per_agent, axis=1)
        if self._mask is not None:
            out = out + Tensor(self._mask)
        return out

    def forward_agent(self, obs_row: np.ndarray, agent: int) -> Tensor:
        """Single-agent forward for one unbatched observation row."""
        if self.sharing:
            padded = np.zeros(self.info.max_obs_dim + self.info.n_agents)
            padded[: len(obs_row)] = obs_row
            padded[self.info.max_obs_dim + agent] = 1.0
            out = self.nets[0](Tensor(padded[None, :]))
        else:
            out = self.nets[agent](Tensor(np.asarray(obs_row, dtype=np.float64)[None, :]))
        if self._mask is not None:
            out = out + Tensor(self._mask[agent][None, :])
        return out


def pad_obs_batch(obs_lists: list[list[np.ndarray]], info: EnvInfo) -> np.ndarray:
    """[B][N] ragged observation lists -> [B, N, Dmax] padded array."""
    out = np.zeros((len(obs_lists), info.n_agents, info.max_obs_dim), dtype=np.float64)
    for b, obs_list in enumerate(obs_lists):
        for i, vec in enumerate(obs_list):
            out[b, i, : len(vec)] = vec
    return out


class TargetNetwork:
    """Frozen copy of a MultiAgentMlp with hard or soft synchronisation."""

    def __init__(self, online: MultiAgentMlp, mode: str, interval: int, rate: float, rng: Rng):
        self.net = MultiAgentMlp(online.info, online.out_dim, online.nets[0].widths[1], online.sharing, rng)
        self.net.freeze()
        self.net.sync_from(online)
        self.mode = mode
        self.interval = interval
        self.rate = rate

    def maybe_update(self, online: MultiAgentMlp, update_count: int) -> None:
        update_target(online.parameters(), self.net.parameters(), self.mode, self.interval, self.rate, update_count)

    def forward_all(self, obs: np.ndarray) -> Tensor:
        return self.net.forward_all(obs)


def update_target(
    online_params: list[Tensor],
    target_params: list[Tensor],
    mode: str,
    interval: int,
    rate: float,
    update_count: int,
) -> None:
    """Hard copy every ``interval`` updates, or polyak-blend every update."""
    if mode == "hard":
        if update_count % interval == 0:
            for o, t in zip(online_params, target_params):
                t.data = o.data.copy()
    elif mode == "soft":
        for o, t in zip(online_params, target_params):
            t.data = rate * o.data + (1.0 - rate) * t.data
    else:
        raise ValueError(f"unknown target mode {mode!r}")
