"""Rewrite rules for program proposals and their selection weights.

Local rules (operand / opcode replacement) are drawn far more often than
global ones (instruction replacement, operand swaps, restarts).
"""

from __future__ import annotations

from enum import Enum

import numpy as np


class RewriteRule(str, Enum):
    """Canonical names of every program rewrite."""

    REPLACE_OPERAND = "replace_operand"
    REPLACE_OPCODE = "replace_opcode"
    REPLACE_INSTRUCTION = "replace_instruction"
    SWAP_ALL_OPERANDS = "swap_all_operands"
    RANDOM_RESTART = "random_restart"


DEFAULT_RULE_WEIGHTS: dict[RewriteRule, float] = {
    RewriteRule.REPLACE_OPERAND: 0.817,
    RewriteRule.REPLACE_OPCODE: 0.091,
    RewriteRule.REPLACE_INSTRUCTION: 0.045,
    RewriteRule.SWAP_ALL_OPERANDS: 0.045,
    RewriteRule.RANDOM_RESTART: 0.001,
}

RULES: tuple[RewriteRule, ...] = tuple(RewriteRule)


def normalize_mixture(weights: dict[RewriteRule, float]) -> np.ndarray:
    """Selection probabilities in ``RULES`` order, scaled to sum to 1.

    Missing rules get weight 0.
    """
    raw = np.array([float(weights.get(rule, 0.0)) for rule in RULES])
    if np.any(raw < 0) or raw.sum() <= 0:
        raise ValueError("rule weights must be non-negative with a positive sum")
    return raw / raw.sum()


def draw_rule(probabilities: np.ndarray, rng: np.random.Generator) -> RewriteRule:
    """Pick one rule according to normalized *probabilities*."""
    return RULES[int(rng.choice(len(RULES), p=probabilities))]
