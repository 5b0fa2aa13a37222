"""MADDPG with Gumbel-Softmax relaxation for discrete actions.

Per-agent critics score the joint observation and joint one-hot action;
actors are trained by pushing their own differentiable (straight-through)
action through the critic, plus a quadratic penalty on the raw logits.
"""

from __future__ import annotations

import numpy as np

from ..autodiff import Adam, Mlp, Tensor, concat, gumbel_softmax, mse, one_hot, square, sub, tmean, tsum
from ..autodiff.nn import copy_params
from ..rng import Rng
from .common import EnvInfo, TrainerConfig
from .networks import MultiAgentMlp, TargetNetwork, pad_obs_batch, update_target

GUMBEL_TEMPERATURE = 1.0


class MaddpgTrainer:
    kind = "replay"

    def __init__(self, info: EnvInfo, cfg: TrainerConfig, rng: Rng):
        self.info = info
        self.cfg = cfg
        self.actor = MultiAgentMlp(info, info.max_actions, cfg.hidden_dim, cfg.parameter_sharing, rng.spawn(0))
        self.target_actor = TargetNetwork(self.actor, cfg.target_mode, cfg.target_interval, cfg.target_rate, rng.spawn(1))
        critic_in = info.state_dim + sum(info.n_actions)
        h = cfg.hidden_dim
        self.critics = [Mlp([critic_in, h, h, 1], rng.spawn(10 + i)) for i in range(info.n_agents)]
        self.target_critics = [Mlp([critic_in, h, h, 1], rng.spawn(10 + i)) for i in range(info.n_agents)]
        for tc, c in zip(self.target_critics, self.critics):
            for p in tc.parameters():
                p.requires_grad = False
            copy_params(c.parameters(), tc.parameters())
        self.actor_opt = Adam(self.actor.parameters(), lr=cfg.lr)
        self.critic_opt = Adam([p for c in self.critics for p in c.parameters()], lr=cfg.lr)
        self.updates = 0
        self._offsets = np.concatenate([[0], np.cumsum(info.n_actions)[:-1]])

    # -- acting ---------------------------------------------------------

    def act_batch(self, obs_padded: np.ndarray, explore: bool, rng: Rng, step: int = 0) -> np.ndarray:
        logits = self.actor.forward_all(obs_padded)
        if explore:
            sample = gumbel_softmax(Tensor(logits.data), GUMBEL_TEMPERATURE, hard=True, rng=rng)
            return sample.data.argmax(axis=-1)
        return logits.data.argmax(axis=-1)

    def act_single(self, obs_list, explore: bool, rng: Rng, step: int = 0) -> list[int]:
        padded = pad_obs_batch([obs_list], self.info)
        return [int(a) for a in self.act_batch(padded, explore, rng, step)[0]]

    # -- learning ----------------------------------------------------------

    def _state_of(self, obs: np.ndarray) -> np.ndarray:
        if len(set(self.info.obs_dims)) == 1:
            return obs.reshape(obs.shape[0], -1)
        parts = [obs[:, i, : d] for i, d in enumerate(self.info.obs_dims)]
        return np.concatenate(parts, axis=1)

    def _joint_onehot(self, actions: np.ndarray) -> np.ndarray:
        m = actions.shape[0]
        joint = np.zeros((m, sum(self.info.n_actions)))
        for i in range(self.info.n_agents):
            joint[np.arange(m), self._offsets[i] + actions[:, i]] = 1.0
        return joint

    @staticmethod
    def _flatten(episodes: list[dict]):
        obs_t = np.concatenate([ep["obs"][:-1] for ep in episodes])
        obs_t1 = np.concatenate([ep["obs"][1:] for ep in episodes])
        actions = np.concatenate([ep["actions"] for ep in episodes])
        rewards = np.concatenate([ep["rewards"] for ep in episodes])
        dones = np.concatenate([ep["dones"] for ep in episodes])
        return obs_t, obs_t1, actions, rewards, dones

    def _critic_loss(self, episodes: list[dict], rng: Rng):
        obs_t, obs_t1, actions, rewards, dones = self._flatten(episodes)
        m, n = len(rewards), self.info.n_agents
        state = self._state_of(obs_t)
        state1 = self._state_of(obs_t1)
        joint_now = self._joint_onehot(actions)

        # targets from target actors' sampled next actions
        next_logits = self.target_actor.forward_all(obs_t1).data
        next_joint = np.zeros((m, sum(self.info.n_actions)))
        for i in range(n):
            sampled = gumbel_softmax(
                Tensor(next_logits[:, i, : self.info.n_actions[i]]), GUMBEL_TEMPERATURE, hard=True, rng=rng
            ).data
            lo = self._offsets[i]
            next_joint[:, lo : lo + self.info.n_actions[i]] = sampled

        critic_loss = None
        critic_rows_next = np.concatenate([state1, next_joint], axis=1)
        critic_rows_now = np.concatenate([state, joint_now], axis=1)
        for i in range(n):
            q_next = self.target_critics[i](Tensor(critic_rows_next)).data[:, 0]
            y = rewards + self.cfg.gamma * (1.0 - dones) * q_next
            q = self.critics[i](Tensor(critic_rows_now))
            term = mse(q, Tensor(y[:, None]))
            critic_loss = term if critic_loss is None else critic_loss + term
        return critic_loss

    def _actor_loss(self, episodes: list[dict], rng: Rng, hard: bool = True):
        """Each actor pushes its straight-through action through its critic,
        with a quadratic penalty on its own logits."""
        obs_t, _, actions, _, _ = self._flatten(episodes)
        n = self.info.n_agents
        joint_now = self._joint_onehot(actions)
        logits_all = self.actor.forward_all(obs_t)
        actor_loss = None
        state_t = Tensor(self._state_of(obs_t))
        for i in range(n):
            lo = self._offsets[i]
            hi = lo + self.info.n_actions[i]
            own_logits = _slice_agent(logits_all, i, self.info)
            relaxed = gumbel_softmax(own_logits, GUMBEL_TEMPERATURE, hard=hard, rng=rng)
            before = Tensor(joint_now[:, :lo])
            after = Tensor(joint_now[:, hi:])
            pieces = [p for p in (before, relaxed, after) if p.shape[-1] > 0]
            joint = concat(pieces, axis=1)
            q = self.critics[i](concat([state_t, joint], axis=1))
            term = -tmean(q) + self.cfg.actor_regularisation * tmean(square(own_logits))
            actor_loss = term if actor_loss is None else actor_loss + term
        return actor_loss

    def compute_losses(self, episodes: list[dict], rng: Rng):
        return self._actor_loss(episodes, rng), self._critic_loss(episodes, rng)

    def update(self, episodes: list[dict], rng: Rng) -> float:
        critic_loss = self._critic_loss(episodes, rng)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        actor_loss = self._actor_loss(episodes, rng)
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        self.updates += 1
        self.target_actor.maybe_update(self.actor, self.updates)
        for c, tc in zip(self.critics, self.target_critics):
            update_target(
                c.parameters(), tc.parameters(), self.cfg.target_mode,
                self.cfg.target_interval, self.cfg.target_rate, self.updates,
            )
        return critic_loss.item() + actor_loss.item()

    def checkpoint_params(self):
        return self.actor.parameters() + [p for c in self.critics for p in c.parameters()]


def _slice_agent(logits_all: Tensor, agent: int, info: EnvInfo) -> Tensor:
    """Select one agent's valid logits [M, A_i] from the [M, N, A] tensor."""
    from ..autodiff.tensor import narrow, reshape

    row = narrow(logits_all, 1, agent, 1)
    flat = reshape(row, (row.shape[0], row.shape[2]))
    return narrow(flat, 1, 0, info.n_actions[agent])
