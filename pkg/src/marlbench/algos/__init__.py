from ..rng import Rng
from .common import (
    ALGORITHMS,
    ON_POLICY,
    VALUE_BASED,
    EnvInfo,
    EpisodeBuffer,
    RewardStandardiser,
    TrainerConfig,
    epsilon,
    mask_invalid_logits,
    masked_probabilities,
    nstep_returns,
    pad_and_tag,
    q_targets_double,
    td_lambda_targets,
)
from .maddpg import MaddpgTrainer
from .networks import MultiAgentMlp, build_inputs, pad_obs_batch, update_target
from .onpolicy import ActorCriticTrainer, ComaTrainer, PpoTrainer, coma_advantage
from .presets import preset, preset_names
from .qlearning import QLearner, QmixMixer, vdn_total


def build_trainer(info: EnvInfo, cfg: TrainerConfig, rng: Rng):
    """Instantiate the trainer named by ``cfg.algo``."""
    algo = cfg.algo
    if algo in ("iql", "vdn", "qmix"):
        return QLearner(info, cfg, rng)
    if algo == "ia2c":
        return ActorCriticTrainer(info, cfg, rng, central=False)
    if algo == "maa2c":
        return ActorCriticTrainer(info, cfg, rng, central=True)
    if algo == "ippo":
        return PpoTrainer(info, cfg, rng, central=False)
    if algo == "mappo":
        return PpoTrainer(info, cfg, rng, central=True)
    if algo == "coma":
        return ComaTrainer(info, cfg, rng)
    if algo == "maddpg":
        return MaddpgTrainer(info, cfg, rng)
    raise ValueError(f"unknown algorithm {algo!r}")


__all__ = [
    "ALGORITHMS",
    "ON_POLICY",
    "VALUE_BASED",
    "ActorCriticTrainer",
    "ComaTrainer",
    "EnvInfo",
    "EpisodeBuffer",
    "MaddpgTrainer",
    "MultiAgentMlp",
    "PpoTrainer",
    "QLearner",
    "QmixMixer",
    "RewardStandardiser",
    "TrainerConfig",
    "build_inputs",
    "build_trainer",
    "coma_advantage",
    "epsilon",
    "mask_invalid_logits",
    "masked_probabilities",
    "nstep_returns",
    "pad_and_tag",
    "pad_obs_batch",
    "preset",
    "preset_names",
    "q_targets_double",
    "td_lambda_targets",
    "update_target",
    "vdn_total",
]
