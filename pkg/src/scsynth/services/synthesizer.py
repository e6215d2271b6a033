"""Markov-chain Monte Carlo circuit search.

One chain starts from a random program and repeatedly proposes a rewrite,
scores it, and moves to it with the Metropolis probability
``min(1, exp(-beta * (c_new - c_old)))``. The best program tracks the
*proposal* cost, so an improvement counts even if the chain does not move.
The chain stops after ``budget`` proposals or as soon as the best cost drops
to ``early_stop_cost``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from scsynth.config import settings
from scsynth.errors import TargetSpecError
from scsynth.log_setup import configure_logging
from scsynth.models import Program, random_program
from scsynth.services.cost import CostFunction, TestSuite
from scsynth.services.rewrites.definitions import (
    DEFAULT_RULE_WEIGHTS,
    RewriteRule,
    draw_rule,
    normalize_mixture,
)
from scsynth.services.rewrites.executors import (
    execute_random_restart,
    execute_replace_instruction,
    execute_replace_opcode,
    execute_replace_operand,
    execute_swap_all_operands,
)

log = structlog.get_logger()

Observer = Callable[[int, Program, float, float], None]

# Static dispatch table -- one executor per rule.
DISPATCH: dict[RewriteRule, Callable[[Program, np.random.Generator], Program]] = {
    RewriteRule.REPLACE_OPERAND: execute_replace_operand,
    RewriteRule.REPLACE_OPCODE: execute_replace_opcode,
    RewriteRule.REPLACE_INSTRUCTION: execute_replace_instruction,
    RewriteRule.SWAP_ALL_OPERANDS: execute_swap_all_operands,
    RewriteRule.RANDOM_RESTART: execute_random_restart,
}


class Termination(str, Enum):
    BUDGET = "budget"
    EXACT_SOLUTION = "exact_solution"


class SynthConfig(BaseModel, frozen=True, extra="forbid"):
    """Parameters of one synthesis run (shared by all of its chains)."""

    n_inputs: int = Field(ge=1)
    program_length: int = Field(ge=1)
    beta: float = Field(default_factory=lambda: settings.DEFAULT_BETA, gt=0)
    budget: int = Field(default_factory=lambda: settings.DEFAULT_BUDGET, ge=1)
    mixture: dict[RewriteRule, float] = Field(
        default_factory=lambda: dict(DEFAULT_RULE_WEIGHTS)
    )
    # Force a restart after this many proposals without a new best; None disables.
    restart_after_stall: int | None = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    early_stop_cost: float | None = Field(
        default_factory=lambda: settings.DEFAULT_EARLY_STOP_COST
    )

    @model_validator(mode="after")
    def _check_mixture(self) -> SynthConfig:
        normalize_mixture(self.mixture)
        return self


@dataclass(frozen=True)
class SynthesisResult:
    best: Program
    best_cost: float
    proposals_evaluated: int
    accepted: int
    restarts: int
    terminated_by: Termination
    trajectory: list[tuple[int, float]] = field(default_factory=list)
    chain: int = 0

    @property
    def acceptance_rate(self) -> float:
        if self.proposals_evaluated == 0:
            return 0.0
        return self.accepted / self.proposals_evaluated


def propose_with_rule(
    program: Program, probabilities: np.ndarray, rng: np.random.Generator
) -> tuple[RewriteRule, Program]:
    """Draw one rule from the normalized mixture and apply it."""
    rule = draw_rule(probabilities, rng)
    return rule, DISPATCH[rule](program, rng)


def propose(
    program: Program,
    mixture: dict[RewriteRule, float],
    rng: np.random.Generator,
) -> Program:
    """Apply exactly one randomly selected rewrite rule to *program*."""
    return propose_with_rule(program, normalize_mixture(mixture), rng)[1]


def metropolis_accept(
    c_old: float, c_new: float, beta: float, rng: np.random.Generator
) -> bool:
    """Metropolis acceptance; downhill and flat moves never consume randomness."""
    delta = c_new - c_old
    if delta <= 0:
        return True
    return bool(rng.random() < math.exp(-beta * delta))


def _reached(cost: float, cfg: SynthConfig) -> bool:
    return cfg.early_stop_cost is not None and cost <= cfg.early_stop_cost


def synthesize(
    cfg: SynthConfig,
    suite: TestSuite,
    chain_index: int = 0,
    observer: Observer | None = None,
) -> SynthesisResult:
    """Run one chain; deterministic given ``cfg.seed`` and *chain_index*.

    *observer*, if given, is called after every proposal with
    ``(proposal_index, current_program, current_cost, best_cost)``.
    """
    if cfg.n_inputs != suite.n_inputs:
        raise TargetSpecError(
            f"config has {cfg.n_inputs} inputs but the suite binds {suite.n_inputs}"
        )
    rng = np.random.default_rng([cfg.seed, chain_index])
    probabilities = normalize_mixture(cfg.mixture)
    cost_of = CostFunction(suite)
    every = settings.TRAJECTORY_EVERY
    chain_log = log.bind(chain=chain_index, seed=cfg.seed)

    current = random_program(cfg.n_inputs, cfg.program_length, rng)
    current_cost = cost_of(current)
    best, best_cost = current, current_cost
    trajectory = [(0, best_cost)]
    accepted = restarts = stall = proposals = 0
    terminated_by = Termination.BUDGET

    chain_log.info(
        "synthesis_started",
        length=cfg.program_length,
        budget=cfg.budget,
        beta=cfg.beta,
        initial_cost=current_cost,
    )

    if _reached(best_cost, cfg):
        terminated_by = Termination.EXACT_SOLUTION
    else:
        for proposals in range(1, cfg.budget + 1):
            rule, candidate = propose_with_rule(current, probabilities, rng)
            candidate_cost = cost_of(candidate)

            if metropolis_accept(current_cost, candidate_cost, cfg.beta, rng):
                current, current_cost = candidate, candidate_cost
                accepted += 1
                if rule is RewriteRule.RANDOM_RESTART:
                    restarts += 1

            if candidate_cost < best_cost:
                best, best_cost = candidate, candidate_cost
                stall = 0
                trajectory.append((proposals, best_cost))
                chain_log.debug("synthesis_improved", proposal=proposals, best_cost=best_cost)
            else:
                stall += 1
                if every > 1 and proposals % every == 0:
                    trajectory.append((proposals, best_cost))
                if cfg.restart_after_stall is not None and stall >= cfg.restart_after_stall:
                    current = random_program(cfg.n_inputs, cfg.program_length, rng)
                    current_cost = cost_of(current)
                    restarts += 1
                    stall = 0
                    chain_log.debug("synthesis_restart", proposal=proposals)

            if observer is not None:
                observer(proposals, current, current_cost, best_cost)

            if _reached(best_cost, cfg):
                terminated_by = Termination.EXACT_SOLUTION
                break

    chain_log.info(
        "synthesis_finished",
        best_cost=best_cost,
        proposals=proposals,
        accepted=accepted,
        restarts=restarts,
        terminated_by=terminated_by.value,
        cache_hits=cost_of.hits,
        cache_misses=cost_of.misses,
    )
    return SynthesisResult(
        best=best,
        best_cost=best_cost,
        proposals_evaluated=proposals,
        accepted=accepted,
        restarts=restarts,
        terminated_by=terminated_by,
        trajectory=trajectory,
        chain=chain_index,
    )


def _run_chain(cfg: SynthConfig, suite: TestSuite, chain_index: int) -> SynthesisResult:
    return synthesize(cfg, suite, chain_index)


def synthesize_chains(
    cfg: SynthConfig, suite: TestSuite, chains: int = 1
) -> SynthesisResult:
    """Run *chains* independent chains and keep the best by ``(cost, chain)``.

    A single chain runs in-process; more chains run in worker processes.
    """
    if chains < 1:
        raise ValueError("chains must be at least 1")
    if chains == 1:
        return synthesize(cfg, suite, 0)

    with ProcessPoolExecutor(max_workers=chains, initializer=configure_logging) as pool:
        results = list(
            pool.map(_run_chain, [cfg] * chains, [suite] * chains, range(chains))
        )
    for result in results:
        log.info("chain_finished", chain=result.chain, best_cost=result.best_cost)
    return min(results, key=lambda r: (r.best_cost, r.chain))
