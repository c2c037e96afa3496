"""One configuration layer for every tunable.

Defaults are overridable through ``PUMPKIN_*`` environment variables and,
for the CLI, through command-line flags.  Library entry points accept an
optional ``Config``; ``None`` means the environment-derived default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace


def _tower_threshold(c: int) -> int:
    # (4c)^(4c): the analysis-grade hedgehog threshold.  Astronomical for
    # c >= 2, so effective parameters below cap it.
    return (4 * c) ** (4 * c)


@dataclass(frozen=True)
class Config:
    # Exact detection search: node expansions before BudgetExceeded.
    detect_budget: int = 10_000_000
    # Edge multiplicities past this cap raise MultiplicityOverflow.
    multiplicity_cap: int = 1 << 16
    # Hard vertex-count limits for the enumeration oracles and brute solvers.
    oracle_vertex_limit: int = 14
    brute_vertex_limit: int = 16
    # Z2 skips outgrowths whose component is larger than this cap.
    z2_component_cap: int = 64
    # Maximum path length tried by the exact solver's path-branching rule.
    rule_b_max_len: int = 6
    # Effective hedgehog extraction threshold (caps (4c)^(4c)).  Kept at or
    # below r_path(c) so a full-length skeleton path can host a long run.
    hedgehog_run_cap: int = 16
    # Skeleton parameters: degree threshold k = degree_factor * c^2 and
    # path length r = path_factor * c.
    skeleton_degree_factor: int = 4
    skeleton_path_factor: int = 32
    # Component size bound b; None means the construction bound k^r.
    component_size_cap: int | None = None
    # Certificate constant: |cover| <= f_eff(c) * log2(n) * |packing| with
    # f_eff(c) = f_scale * c.  Calibrated empirically; the size assertion in
    # the small-model pipeline makes any shortfall loud.
    f_scale: float = 16.0
    # Dense-minor size budget h_eff(c) = h_scale * c + h_offset.
    h_scale: float = 4.0
    h_offset: float = 8.0

    # Derived parameter accessors -------------------------------------

    def k_degree(self, c: int) -> int:
        return max(2, self.skeleton_degree_factor * c * c)

    def r_path(self, c: int) -> int:
        return max(4, self.skeleton_path_factor * c)

    def b_component(self, c: int) -> int:
        if self.component_size_cap is not None:
            return self.component_size_cap
        return self.k_degree(c) ** self.r_path(c)

    def dense_min_degree(self, c: int) -> int:
        # Minimum simple degree expected by the dense-minor search; the
        # pipeline guarantees k / c^2 on its input.
        return max(3, self.k_degree(c) // (c * c))

    def hedgehog_threshold(self, c: int) -> int:
        return min(_tower_threshold(c), max(6, self.hedgehog_run_cap))

    def f_eff(self, c: int) -> float:
        return self.f_scale * c

    def h_eff(self, c: int) -> float:
        return self.h_scale * c + self.h_offset


_ENV_FIELDS = {
    "PUMPKIN_DETECT_BUDGET": ("detect_budget", int),
    "PUMPKIN_MULTIPLICITY_CAP": ("multiplicity_cap", int),
    "PUMPKIN_ORACLE_LIMIT": ("oracle_vertex_limit", int),
    "PUMPKIN_BRUTE_LIMIT": ("brute_vertex_limit", int),
    "PUMPKIN_Z2_COMPONENT_CAP": ("z2_component_cap", int),
    "PUMPKIN_RULE_B_LEN": ("rule_b_max_len", int),
    "PUMPKIN_HEDGEHOG_RUN_CAP": ("hedgehog_run_cap", int),
    "PUMPKIN_SKELETON_K_FACTOR": ("skeleton_degree_factor", int),
    "PUMPKIN_SKELETON_R_FACTOR": ("skeleton_path_factor", int),
    "PUMPKIN_COMPONENT_CAP": ("component_size_cap", int),
    "PUMPKIN_F_SCALE": ("f_scale", float),
    "PUMPKIN_H_SCALE": ("h_scale", float),
    "PUMPKIN_H_OFFSET": ("h_offset", float),
}


def config_from_env(base: Config | None = None) -> Config:
    """Build a Config from the environment on top of ``base``."""
    cfg = base or Config()
    overrides = {}
    for env_name, (field_name, conv) in _ENV_FIELDS.items():
        raw = os.environ.get(env_name)
        if raw is None:
            continue
        try:
            overrides[field_name] = conv(raw)
        except ValueError as exc:
            raise ValueError(f"bad value for {env_name}: {raw!r}") from exc
    return replace(cfg, **overrides) if overrides else cfg


DEFAULT_CONFIG = config_from_env()


def resolve(cfg: Config | None) -> Config:
    return cfg if cfg is not None else DEFAULT_CONFIG
