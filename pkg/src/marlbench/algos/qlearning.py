"""Value-based trainers: IQL, VDN, and QMIX.

All three learn per-agent Q networks from replayed episodes with
epsilon-greedy exploration and Double Q-learning targets.  They differ
only in how per-agent values combine into the trained objective:
independently (IQL), by summation (VDN), or through a state-conditioned
monotonic mixing network (QMIX).
"""

from __future__ import annotations

import numpy as np

from ..autodiff import Adam, Linear, Mlp, Tensor, elu, gather, matmul, reshape, square, sub, tabs, tmean, tsum
from ..autodiff.tensor import narrow
from ..autodiff.nn import copy_params
from ..rng import Rng
from .common import EnvInfo, TrainerConfig, epsilon, q_targets_double
from .networks import MultiAgentMlp, TargetNetwork, pad_obs_batch, update_target

MIXER_EMBED = 32


class QmixMixer:
    """Hypernetwork mixer; absolute weights keep dQ_tot/dQ_i >= 0."""

    def __init__(self, n_agents: int, state_dim: int, rng: Rng, embed: int = MIXER_EMBED):
        self.n_agents = n_agents
        self.embed = embed
        self.hyper_w1 = Linear(state_dim, n_agents * embed, rng.spawn(0))
        self.hyper_b1 = Linear(state_dim, embed, rng.spawn(1))
        self.hyper_w2 = Linear(state_dim, embed, rng.spawn(2))
        self.hyper_b2 = Mlp([state_dim, embed, 1], rng.spawn(3))

    def __call__(self, agent_qs: Tensor, state: np.ndarray) -> Tensor:
        m = agent_qs.shape[0]
        s = Tensor(state)
        w1 = reshape(tabs(self.hyper_w1(s)), (m, self.n_agents, self.embed))
        b1 = reshape(self.hyper_b1(s), (m, 1, self.embed))
        hidden = elu(matmul(reshape(agent_qs, (m, 1, self.n_agents)), w1) + b1)
        w2 = reshape(tabs(self.hyper_w2(s)), (m, self.embed, 1))
        b2 = reshape(self.hyper_b2(s), (m, 1, 1))
        return reshape(matmul(hidden, w2) + b2, (m,))

    def parameters(self) -> list[Tensor]:
        return (
            self.hyper_w1.parameters()
            + self.hyper_b1.parameters()
            + self.hyper_w2.parameters()
            + self.hyper_b2.parameters()
        )

    def freeze(self) -> "QmixMixer":
        for p in self.parameters():
            p.requires_grad = False
        return self

    def sync_from(self, other: "QmixMixer") -> None:
        copy_params(other.parameters(), self.parameters())


def vdn_total(agent_qs: Tensor) -> Tensor:
    """VDN decomposition: the joint value is the exact sum of agent values."""
    return tsum(agent_qs, axis=1)


class QLearner:
    """IQL / VDN / QMIX trainer over an episode replay buffer."""

    kind = "replay"

    def __init__(self, info: EnvInfo, cfg: TrainerConfig, rng: Rng):
        if cfg.algo not in ("iql", "vdn", "qmix"):
            raise ValueError(f"QLearner cannot run {cfg.algo!r}")
        self.info = info
        self.cfg = cfg
        self.mode = cfg.algo
        self.nets = MultiAgentMlp(info, info.max_actions, cfg.hidden_dim, cfg.parameter_sharing, rng.spawn(0))
        self.target = TargetNetwork(self.nets, cfg.target_mode, cfg.target_interval, cfg.target_rate, rng.spawn(1))
        params = self.nets.parameters()
        self.mixer = None
        self.target_mixer = None
        if self.mode == "qmix":
            self.mixer = QmixMixer(info.n_agents, info.state_dim, rng.spawn(2))
            self.target_mixer = QmixMixer(info.n_agents, info.state_dim, rng.spawn(2)).freeze()
            self.target_mixer.sync_from(self.mixer)
            params = params + self.mixer.parameters()
        self.optimizer = Adam(params, lr=cfg.lr)
        self.updates = 0

    # -- acting -----------------------------------------------------------

    def _greedy(self, obs_padded: np.ndarray) -> np.ndarray:
        q = self.nets.forward_all(obs_padded).data
        return q.argmax(axis=-1)

    def act_batch(self, obs_padded: np.ndarray, explore: bool, rng: Rng, step: int = 0) -> np.ndarray:
        eps = epsilon(step, self.cfg.epsilon_anneal_steps) if explore else self.cfg.evaluation_epsilon
        actions = self._greedy(obs_padded)
        if eps > 0.0:
            for w in range(actions.shape[0]):
                for i in range(self.info.n_agents):
                    if rng.random() < eps:
                        actions[w, i] = rng.randrange(self.info.n_actions[i])
        return actions

    def act_single(self, obs_list, explore: bool, rng: Rng, step: int = 0) -> list[int]:
        padded = pad_obs_batch([obs_list], self.info)
        return [int(a) for a in self.act_batch(padded, explore, rng, step)[0]]

    # -- learning ----------------------------------------------------------

    def _state_of(self, obs: np.ndarray) -> np.ndarray:
        if len(set(self.info.obs_dims)) == 1:
            return obs.reshape(obs.shape[0], -1)
        parts = [obs[:, i, : d] for i, d in enumerate(self.info.obs_dims)]
        return np.concatenate(parts, axis=1)

    def compute_losses(self, episodes: list[dict], rng: Rng | None = None) -> Tensor:
        """The TD loss graph for a batch of episodes (no parameter update)."""
        obs_t = np.concatenate([ep["obs"][:-1] for ep in episodes])
        obs_t1 = np.concatenate([ep["obs"][1:] for ep in episodes])
        actions = np.concatenate([ep["actions"] for ep in episodes])
        rewards = np.concatenate([ep["rewards"] for ep in episodes])
        dones = np.concatenate([ep["dones"] for ep in episodes])
        m = len(rewards)

        # one fused pass over t and t+1 rows for the online net
        fused = self.nets.forward_all(np.concatenate([obs_t, obs_t1]))
        next_online = fused.data[m:]
        next_target = self.target.forward_all(obs_t1).data

        chosen = gather(narrow(fused, 0, 0, m), actions)  # [M, N]

        if self.mode == "iql":
            targets = q_targets_double(
                rewards[:, None], dones[:, None], next_online, next_target, self.cfg.gamma
            )
            # per-agent TD losses, summed over agents
            return tsum(tmean(square(sub(chosen, Tensor(targets))), axis=0))
        picked = next_online.argmax(axis=-1)
        q_next = np.take_along_axis(next_target, picked[..., None], axis=-1)[..., 0]
        if self.mode == "vdn":
            y = rewards + self.cfg.gamma * (1.0 - dones) * q_next.sum(axis=1)
            return tmean(square(sub(vdn_total(chosen), Tensor(y))))
        y_tot = self.target_mixer(Tensor(q_next), self._state_of(obs_t1)).data
        y = rewards + self.cfg.gamma * (1.0 - dones) * y_tot
        q_tot = self.mixer(chosen, self._state_of(obs_t))
        return tmean(square(sub(q_tot, Tensor(y))))

    def update(self, episodes: list[dict], rng: Rng | None = None) -> float:
        loss = self.compute_losses(episodes)
        self.optimizer.zero_grad()
        loss.backward()
        self.optimizer.step()
        self.updates += 1
        self.target.maybe_update(self.nets, self.updates)
        if self.target_mixer is not None:
            update_target(
                self.mixer.parameters(),
                self.target_mixer.parameters(),
                self.cfg.target_mode,
                self.cfg.target_interval,
                self.cfg.target_rate,
                self.updates,
            )
        return loss.item()

    def checkpoint_params(self) -> list[Tensor]:
        params = self.nets.parameters()
        if self.mixer is not None:
            params = params + self.mixer.parameters()
        return params
