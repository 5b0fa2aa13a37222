"""Registers every warehouse task name with the gym shim on import.

Names follow ``rware-<size>-<n>ag[-easy|-hard]-v1`` with sizes tiny,
small, medium, and large and agent counts 1 to 20.
"""

from marlbench.envs import make as _native_make

import gym


def _register_all():
    from gym.registry import BoundEnv, register

    for size in ("tiny", "small", "medium", "large"):
        for n in range(1, 21):
            for diff in ("", "-easy", "-hard"):
                name = f"rware-{size}-{n}ag{diff}-v1"
                register(name, (lambda nm: (lambda: BoundEnv(_native_make(nm))))(name))


_register_all()
