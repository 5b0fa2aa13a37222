"""Registers the repeated matrix games with the gym shim."""

from marlbench.envs import make as _native_make

import gym


def _register_all():
    from gym.registry import BoundEnv, register

    for name in ("climbing", "penalty-k0", "penalty-k-25", "penalty-k-50", "penalty-k-75", "penalty-k-100"):
        register(name, (lambda nm: (lambda: BoundEnv(_native_make(nm))))(name))


_register_all()
