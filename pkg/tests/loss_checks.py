"""Shared finite-difference gradient checks for all nine trainer losses.

Each check compares the analytic gradient of a loss with central finite
differences over the parameters that loss trains.  Terms the algorithms
deliberately treat as constants (advantages, TD targets, straight-through
samples) stay constant on both sides: actor and critic losses are checked
against their own parameters, and the MADDPG actor loss is checked in its
differentiable (soft Gumbel) form.
"""

from __future__ import annotations

import numpy as np

from marlbench.algos import EnvInfo, TrainerConfig, build_trainer
from marlbench.rng import Rng

ALL_NINE = ("iql", "vdn", "qmix", "ia2c", "maa2c", "ippo", "mappo", "coma", "maddpg")

_INFO = EnvInfo(n_agents=2, obs_dims=(3, 3), n_actions=(3, 3), time_limit=4)


def _tiny_config(algo: str) -> TrainerConfig:
    return TrainerConfig(
        algo=algo,
        hidden_dim=8,
        lr=1e-3,
        n_step=4,
        parameter_sharing=True,
        entropy_coef=0.01,
        td_lambda=0.8,
    )


def _synthetic_episode(rng: Rng, T: int = 4) -> dict:
    n, d = _INFO.n_agents, _INFO.max_obs_dim
    return {
        "obs": np.asarray(rng.uniform_array((T + 1, n, d), -1, 1)),
        "actions": np.array([[rng.randrange(3) for _ in range(n)] for _ in range(T)], dtype=np.int64),
        "rewards": np.asarray(rng.uniform_array((T,), -1, 1)),
        "dones": np.array([0.0] * (T - 1) + [1.0]),
    }


def _synthetic_rollout(rng: Rng, T: int = 4, W: int = 2) -> dict:
    n, d = _INFO.n_agents, _INFO.max_obs_dim
    return {
        "obs": np.asarray(rng.uniform_array((T + 1, W, n, d), -1, 1)),
        "actions": np.array(
            [[[rng.randrange(3) for _ in range(n)] for _ in range(W)] for _ in range(T)], dtype=np.int64
        ),
        "rewards": np.asarray(rng.uniform_array((T, W), -1, 1)),
        "dones": np.array([[0.0] * W] * (T - 1) + [[1.0] * W]),
        "bootstrap_actions": np.array([[rng.randrange(3) for _ in range(n)] for _ in range(W)], dtype=np.int64),
    }


def _loss_parts(algo: str, trainer, batch):
    """(name, loss_fn, params) triples; loss_fn must be re-evaluable."""
    if algo in ("iql", "vdn", "qmix"):
        params = trainer.nets.parameters()
        if trainer.mixer is not None:
            params = params + trainer.mixer.parameters()
        return [("td", lambda: trainer.compute_losses(batch), params)]
    if algo == "maddpg":
        return [
            ("actor", lambda: trainer._actor_loss(batch, Rng(808), hard=False), trainer.actor.parameters()),
            ("critic", lambda: trainer._critic_loss(batch, Rng(809)),
             [p for c in trainer.critics for p in c.parameters()]),
        ]
    if algo == "coma":
        adv = trainer.counterfactual_advantages(batch)
        return [
            ("actor", lambda: trainer._actor_loss(batch, adv), trainer.actor.parameters()),
            ("critic", lambda: trainer._critic_loss(batch), trainer.critic.parameters()),
        ]
    if algo in ("ippo", "mappo"):
        # freeze the epoch inputs (old log-probs, targets, advantages) so the
        # finite differences see the same constants the analytic pass does
        from marlbench.autodiff import Tensor, gather, log_softmax

        obs, actions, rewards = batch["obs"], batch["actions"], batch["rewards"]
        T, W = rewards.shape
        n = trainer.info.n_agents
        targets, adv = trainer._targets_and_adv(batch)
        obs_flat = obs[:-1].reshape(T * W, n, -1)
        acts = actions.reshape(T * W, n)
        adv_flat = Tensor(adv.reshape(T * W, n))
        logp_old = gather(log_softmax(trainer.actor.logits(obs_flat)), acts).data + 0.05
        epoch = lambda: trainer._epoch_losses(obs_flat, acts, adv_flat, targets, logp_old)
        return [
            ("actor", lambda: epoch()[0], trainer.actor.parameters()),
            ("critic", lambda: epoch()[1], trainer._critic_params()),
        ]
    # a2c family returns (actor_loss, critic_loss)
    return [
        ("actor", lambda: trainer.compute_losses(batch)[0], trainer.actor.parameters()),
        ("critic", lambda: trainer.compute_losses(batch)[1], trainer._critic_params()),
    ]


def check_algorithm_gradients(algo: str, coords_per_param: int = 3, h: float = 1e-5, tol: float = 1e-3) -> float:
    """Run the FD check for one algorithm; returns the worst relative error."""
    cfg = _tiny_config(algo)
    trainer = build_trainer(_INFO, cfg, Rng(1000 + hash(algo) % 1000))
    data_rng = Rng(55)
    if trainer.kind == "replay":
        batch = [_synthetic_episode(data_rng) for _ in range(2)]
    else:
        batch = _synthetic_rollout(data_rng)

    worst = 0.0
    for name, loss_fn, params in _loss_parts(algo, trainer, batch):
        for p in params:
            p.grad = None
        loss_fn().backward()
        coord_rng = Rng(77)
        for p in params:
            assert p.grad is not None, f"{algo}:{name} left a parameter without gradient"
            for _ in range(coords_per_param):
                i = coord_rng.randrange(p.data.size)
                orig = p.data.flat[i]
                p.data.flat[i] = orig + h
                up = loss_fn().item()
                p.data.flat[i] = orig - h
                down = loss_fn().item()
                p.data.flat[i] = orig
                numeric = (up - down) / (2 * h)
                analytic = p.grad.flat[i]
                scale = max(abs(numeric), abs(analytic), 1e-6)
                rel = abs(numeric - analytic) / scale
                worst = max(worst, rel)
                assert rel < tol, f"{algo}:{name} grad mismatch {analytic} vs {numeric} (rel {rel:.2e})"
    return worst
