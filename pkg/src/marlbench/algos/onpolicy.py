"""On-policy trainers: A2C (independent and centralised), PPO, and COMA.

All consume synchronous rollouts of shape [T, W] collected from parallel
workers, with T equal to the configured n-step.  Targets are n-step
bootstrapped returns except for COMA's critic, which uses TD(lambda)
targets over the rollout window.
"""

from __future__ import annotations

import numpy as np

from ..autodiff import (
    Adam,
    Mlp,
    Tensor,
    categorical_entropy,
    clip,
    exp,
    gather,
    log_softmax,
    minimum,
    mse,
    mul,
    one_hot,
    sample_categorical,
    softmax,
    square,
    sub,
    tmean,
    tsum,
)
from ..autodiff.nn import copy_params
from ..rng import Rng
from .common import EnvInfo, TrainerConfig, nstep_returns, td_lambda_targets
from .networks import MultiAgentMlp, TargetNetwork, pad_obs_batch, update_target


def coma_advantage(q_values: np.ndarray, policy: np.ndarray, chosen: int) -> float:
    """Counterfactual advantage: Q(chosen) minus the policy-expected Q."""
    return float(q_values[chosen] - np.dot(policy, q_values))


def _state_of(obs: np.ndarray, info: EnvInfo) -> np.ndarray:
    """Concatenate raw per-agent observations into the global state."""
    if len(set(info.obs_dims)) == 1:
        return obs.reshape(obs.shape[:-2] + (-1,))
    parts = [obs[..., i, : d] for i, d in enumerate(info.obs_dims)]
    return np.concatenate(parts, axis=-1)


class _StochasticActor:
    """Categorical actor shared by the on-policy trainers."""

    def __init__(self, info: EnvInfo, cfg: TrainerConfig, rng: Rng):
        self.info = info
        self.cfg = cfg
        self.net = MultiAgentMlp(info, info.max_actions, cfg.hidden_dim, cfg.parameter_sharing, rng)

    def logits(self, obs_padded: np.ndarray) -> Tensor:
        return self.net.forward_all(obs_padded)

    def act_batch(self, obs_padded: np.ndarray, rng: Rng) -> np.ndarray:
        probs = softmax(self.logits(obs_padded)).data
        return sample_categorical(probs, rng)

    def parameters(self):
        return self.net.parameters()


class ActorCriticTrainer:
    """IA2C (local critics) or MAA2C (one critic on the global state)."""

    kind = "rollout"

    def __init__(self, info: EnvInfo, cfg: TrainerConfig, rng: Rng, central: bool):
        self.info = info
        self.cfg = cfg
        self.central = central
        self.actor = _StochasticActor(info, cfg, rng.spawn(0))
        if central:
            h = cfg.hidden_dim
            self.critic = Mlp([info.state_dim, h, h, 1], rng.spawn(1))
            self.target_critic = Mlp([info.state_dim, h, h, 1], rng.spawn(1))
            for p in self.target_critic.parameters():
                p.requires_grad = False
            copy_params(self.critic.parameters(), self.target_critic.parameters())
        else:
            self.critic = MultiAgentMlp(info, 1, cfg.hidden_dim, cfg.parameter_sharing, rng.spawn(1))
            self.target_critic = TargetNetwork(
                self.critic, cfg.target_mode, cfg.target_interval, cfg.target_rate, rng.spawn(2)
            )
        self.actor_opt = Adam(self.actor.parameters(), lr=cfg.lr)
        self.critic_opt = Adam(self._critic_params(), lr=cfg.lr)
        self.updates = 0

    def _critic_params(self):
        return self.critic.parameters()

    # values ---------------------------------------------------------------

    def _values(self, obs: np.ndarray, target: bool) -> np.ndarray:
        """obs [M, N, D] -> [M] central values or [M, N] local values."""
        if self.central:
            net = self.target_critic if target else self.critic
            return net(Tensor(_state_of(obs, self.info))).data[:, 0]
        net = self.target_critic.net if target else self.critic
        return net.forward_all(obs).data[..., 0]

    def _targets_and_adv(self, batch) -> tuple[np.ndarray, np.ndarray]:
        """Both arrays come back shaped [T, W, N] (targets repeat over N
        for the central critic)."""
        obs, rewards, dones = batch["obs"], batch["rewards"], batch["dones"]
        T, W = rewards.shape
        n = self.info.n_agents
        after = obs[1:].reshape(T * W, n, -1)
        v_after = self._values(after, target=True)
        if self.central:
            v_after = v_after.reshape(T, W)
            targets = np.stack(
                [nstep_returns(rewards[:, w], v_after[:, w], dones[:, w], self.cfg.gamma, self.cfg.n_step) for w in range(W)],
                axis=1,
            )
            targets = np.repeat(targets[..., None], n, axis=2)
        else:
            v_after = v_after.reshape(T, W, n)
            targets = np.empty((T, W, n))
            for w in range(W):
                for i in range(n):
                    targets[:, w, i] = nstep_returns(
                        rewards[:, w], v_after[:, w, i], dones[:, w], self.cfg.gamma, self.cfg.n_step
                    )
        before = obs[:-1].reshape(T * W, n, -1)
        v_now = self._values(before, target=False)
        v_now = v_now.reshape(T, W) if self.central else v_now.reshape(T, W, n)
        if self.central:
            v_now = np.repeat(v_now[..., None], n, axis=2)
        return targets, targets - v_now

    def _critic_loss(self, obs_flat: np.ndarray, targets: np.ndarray) -> Tensor:
        if self.central:
            v = self.critic(Tensor(_state_of(obs_flat, self.info)))
            return mse(v, Tensor(targets[:, :, 0].reshape(-1, 1)))
        v = self.critic.forward_all(obs_flat)  # [M, N, 1]
        return mse(v, Tensor(targets.reshape(-1, self.info.n_agents, 1)))

    def compute_losses(self, batch, rng: Rng | None = None):
        """Actor plus critic loss graph for one rollout batch."""
        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = self.info.n_agents
        targets, adv = self._targets_and_adv(batch)
        obs_flat = obs[:-1].reshape(T * W, n, -1)

        logits = self.actor.logits(obs_flat)
        logp = gather(log_softmax(logits), actions.reshape(T * W, n))
        pg = -tmean(mul(logp, Tensor(adv.reshape(T * W, n))))
        ent = categorical_entropy(logits)
        actor_loss = pg - self.cfg.entropy_coef * ent
        critic_loss = self._critic_loss(obs_flat, targets)
        return actor_loss, critic_loss

    def update(self, batch, rng: Rng | None = None) -> float:
        actor_loss, critic_loss = self.compute_losses(batch)

        self.actor_opt.zero_grad()
        self.critic_opt.zero_grad()
        (actor_loss + critic_loss).backward()
        self.actor_opt.step()
        self.critic_opt.step()

        self.updates += 1
        if self.central:
            update_target(
                self.critic.parameters(),
                self.target_critic.parameters(),
                self.cfg.target_mode,
                self.cfg.target_interval,
                self.cfg.target_rate,
                self.updates,
            )
        else:
            self.target_critic.maybe_update(self.critic, self.updates)
        return actor_loss.item() + critic_loss.item()

    def act_batch(self, obs_padded: np.ndarray, explore: bool, rng: Rng, step: int = 0) -> np.ndarray:
        return self.actor.act_batch(obs_padded, rng)

    def act_single(self, obs_list, explore: bool, rng: Rng, step: int = 0) -> list[int]:
        padded = pad_obs_batch([obs_list], self.info)
        return [int(a) for a in self.act_batch(padded, explore, rng, step)[0]]

    def checkpoint_params(self):
        return self.actor.parameters() + self._critic_params()


class PpoTrainer(ActorCriticTrainer):
    """IPPO / MAPPO: clipped-surrogate updates, several epochs per batch."""

    def ratios(self, obs_flat: np.ndarray, acts: np.ndarray, logp_old: np.ndarray):
        logits = self.actor.logits(obs_flat)
        logp = gather(log_softmax(logits), acts)
        return exp(sub(logp, Tensor(logp_old))), logits

    def _epoch_losses(self, obs_flat, acts, adv_flat, targets, logp_old):
        ratio, logits = self.ratios(obs_flat, acts, logp_old)
        clipped = clip(ratio, 1.0 - self.cfg.ppo_clip, 1.0 + self.cfg.ppo_clip)
        surrogate = minimum(mul(ratio, adv_flat), mul(clipped, adv_flat))
        actor_loss = -tmean(surrogate) - self.cfg.entropy_coef * categorical_entropy(logits)
        critic_loss = self._critic_loss(obs_flat, targets)
        return actor_loss, critic_loss

    def compute_losses(self, batch, rng: Rng | None = None):
        """First-epoch PPO loss (ratios identically 1 before any update)."""
        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = self.info.n_agents
        targets, adv = self._targets_and_adv(batch)
        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts = actions.reshape(T * W, n)
        logp_old = gather(log_softmax(self.actor.logits(obs_flat)), acts).data
        return self._epoch_losses(obs_flat, acts, Tensor(adv.reshape(T * W, n)), targets, logp_old)

    def update(self, batch, rng: Rng | None = None) -> float:
        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = self.info.n_agents
        targets, adv = self._targets_and_adv(batch)
        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts = actions.reshape(T * W, n)
        adv_flat = Tensor(adv.reshape(T * W, n))

        logp_old = gather(log_softmax(self.actor.logits(obs_flat)), acts).data
        total = 0.0
        for _ in range(self.cfg.ppo_epochs):
            actor_loss, critic_loss = self._epoch_losses(obs_flat, acts, adv_flat, targets, logp_old)

            self.actor_opt.zero_grad()
            self.critic_opt.zero_grad()
            (actor_loss + critic_loss).backward()
            self.actor_opt.step()
            self.critic_opt.step()
            total += actor_loss.item() + critic_loss.item()

        self.updates += 1
        if self.central:
            update_target(
                self.critic.parameters(),
                self.target_critic.parameters(),
                self.cfg.target_mode,
                self.cfg.target_interval,
                self.cfg.target_rate,
                self.updates,
            )
        else:
            self.target_critic.maybe_update(self.critic, self.updates)
        return total / self.cfg.ppo_epochs


class ComaTrainer:
    """Counterfactual multi-agent policy gradient.

    The centralised critic maps (state, other agents' actions, agent id)
    to Q-values over the agent's own actions and is trained on TD(lambda)
    targets; each actor ascends the counterfactual advantage.
    """

    kind = "rollout"

    def __init__(self, info: EnvInfo, cfg: TrainerConfig, rng: Rng):
        self.info = info
        self.cfg = cfg
        self.actor = _StochasticActor(info, cfg, rng.spawn(0))
        a_total = sum(info.n_actions)
        in_dim = info.state_dim + a_total + info.n_agents
        h = cfg.hidden_dim
        self.critic = Mlp([in_dim, h, h, info.max_actions], rng.spawn(1))
        self.target_critic = Mlp([in_dim, h, h, info.max_actions], rng.spawn(1))
        for p in self.target_critic.parameters():
            p.requires_grad = False
        copy_params(self.critic.parameters(), self.target_critic.parameters())
        self.actor_opt = Adam(self.actor.parameters(), lr=cfg.lr)
        self.critic_opt = Adam(self.critic.parameters(), lr=cfg.lr)
        self.updates = 0
        self._action_offsets = np.concatenate([[0], np.cumsum(info.n_actions)[:-1]])

    def _critic_inputs(self, obs: np.ndarray, actions: np.ndarray) -> np.ndarray:
        """Rows for every (sample, agent): state + joint one-hot actions
        with the agent's own slot zeroed + agent one-hot."""
        m = obs.shape[0]
        n = self.info.n_agents
        state = _state_of(obs, self.info)
        joint = np.zeros((m, sum(self.info.n_actions)))
        for i in range(n):
            joint[np.arange(m), self._action_offsets[i] + actions[:, i]] = 1.0
        rows = np.zeros((m, n, state.shape[1] + joint.shape[1] + n))
        for i in range(n):
            own = joint.copy()
            lo = self._action_offsets[i]
            own[:, lo : lo + self.info.n_actions[i]] = 0.0
            ids = np.zeros((m, n))
            ids[:, i] = 1.0
            rows[:, i] = np.concatenate([state, own, ids], axis=1)
        return rows.reshape(m * n, -1)

    def _q_all(self, obs: np.ndarray, actions: np.ndarray, target: bool) -> Tensor:
        net = self.target_critic if target else self.critic
        rows = self._critic_inputs(obs, actions)
        out = net(Tensor(rows))
        m = obs.shape[0]
        return out.reshape(m, self.info.n_agents, self.info.max_actions)

    def _critic_loss(self, batch):
        obs, actions, rewards, dones = batch["obs"], batch["actions"], batch["rewards"], batch["dones"]
        boot_actions = batch["bootstrap_actions"]  # [W, N]
        T, W = rewards.shape
        n = self.info.n_agents

        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts_flat = actions.reshape(T * W, n)

        # TD(lambda) critic targets from the target critic
        all_obs = obs.reshape((T + 1) * W, n, -1)
        all_actions = np.concatenate([actions, boot_actions[None]], axis=0).reshape((T + 1) * W, n)
        q_target = self._q_all(all_obs, all_actions, target=True).data
        q_target_chosen = np.take_along_axis(q_target, all_actions[..., None], axis=-1)[..., 0]
        q_target_chosen = q_target_chosen.reshape(T + 1, W, n)

        targets = np.empty((T, W, n))
        for w in range(W):
            for i in range(n):
                targets[:, w, i] = td_lambda_targets(
                    rewards[:, w],
                    dones[:, w],
                    q_target_chosen[1:, w, i],
                    float(q_target_chosen[T, w, i]),
                    self.cfg.gamma,
                    self.cfg.td_lambda,
                )

        q_online = self._q_all(obs_flat, acts_flat, target=False)
        q_chosen = gather(q_online, acts_flat)
        return tsum(tmean(square(sub(q_chosen, Tensor(targets.reshape(T * W, n)))), axis=0))

    def counterfactual_advantages(self, batch) -> np.ndarray:
        """Per-(step, agent) advantage: Q(chosen) minus the policy-expected
        Q over own actions with the others' actions fixed.  Returned as a
        plain array: the baseline is a control variate, not a gradient path."""
        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = self.info.n_agents
        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts_flat = actions.reshape(T * W, n)
        q_eval = self._q_all(obs_flat, acts_flat, target=False).data
        probs = softmax(self.actor.logits(obs_flat)).data
        baseline = (probs * q_eval).sum(axis=-1)
        chosen_q = np.take_along_axis(q_eval, acts_flat[..., None], axis=-1)[..., 0]
        return chosen_q - baseline

    def _actor_loss(self, batch, advantages: np.ndarray | None = None):
        """Counterfactual policy-gradient loss using the current critic."""
        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = self.info.n_agents
        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts_flat = actions.reshape(T * W, n)
        if advantages is None:
            advantages = self.counterfactual_advantages(batch)
        logits = self.actor.logits(obs_flat)
        logp = gather(log_softmax(logits), acts_flat)
        return -tmean(mul(logp, Tensor(advantages))) - self.cfg.entropy_coef * categorical_entropy(logits)

    def compute_losses(self, batch, rng: Rng | None = None):
        return self._actor_loss(batch), self._critic_loss(batch)

    def update(self, batch, rng: Rng | None = None) -> float:
        critic_loss = self._critic_loss(batch)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        # advantage comes from the freshly updated critic
        actor_loss = self._actor_loss(batch)
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        self.updates += 1
        update_target(
            self.critic.parameters(),
            self.target_critic.parameters(),
            self.cfg.target_mode,
            self.cfg.target_interval,
            self.cfg.target_rate,
            self.updates,
        )
        return critic_loss.item() + actor_loss.item()

    def act_batch(self, obs_padded: np.ndarray, explore: bool, rng: Rng, step: int = 0) -> np.ndarray:
        return self.actor.act_batch(obs_padded, rng)

    def act_single(self, obs_list, explore: bool, rng: Rng, step: int = 0) -> list[int]:
        padded = pad_obs_batch([obs_list], self.info)
        return [int(a) for a in self.act_batch(padded, explore, rng, step)[0]]

    def checkpoint_params(self):
        return self.actor.parameters() + self.critic.parameters()
