"""Registers the level-based foraging task names with the gym shim.

Square grids from 5x5 to 20x20, 2 to 5 agents, 1 to 10 food items, with
optional "-2s" partial observability and "-coop" forced cooperation, per
``Foraging[-2s]-<x>x<y>-<n>p-<f>f[-coop]-v1``.
"""

from marlbench.envs import make as _native_make

import gym


def _register_all():
    from gym.registry import BoundEnv, register

    for side in range(5, 21):
        for agents in range(2, 6):
            for food in range(1, 11):
                for sight in ("", "-2s"):
                    for coop in ("", "-coop"):
                        if coop and agents > 4:
                            continue
                        name = f"Foraging{sight}-{side}x{side}-{agents}p-{food}f{coop}-v1"
                        register(name, (lambda nm: (lambda: BoundEnv(_native_make(nm))))(name))


_register_all()
