"""Minimal gym-compatible front end for the marlbench engines.

This module exists so the classic single-episode loop runs verbatim:

    import gym
    import robotic_warehouse

    env = gym.make("rware-tiny-2ag-v1")
    obs = env.reset()
    done = [False] * env.n_agents
    while not all(done):
        actions = env.action_space.sample()
        next_obs, reward, done, info = env.step(actions)

It implements only the registry, ``make``, and the tuple/discrete/box
space types that loop touches.  Environments are registered by importing
``robotic_warehouse``, ``lbforaging``, or ``matrixgames``.  Install the
real OpenAI gym in the same interpreter and this shim must be removed;
the two cannot coexist.
"""

from __future__ import annotations

from .registry import make, register, registry
from .spaces import Box, Discrete, Tuple

__version__ = "0.1.0-marlbench-shim"

__all__ = ["Box", "Discrete", "Tuple", "make", "register", "registry"]
