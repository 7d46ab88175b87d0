"""Layered architecture configurations: finite models, denotational
semantics, behavior updates, and syntactic/semantic dependency analysis."""

from ._core import (
    BudgetExceeded,
    ClosureResult,
    Model,
    ModelError,
    TheoremReport,
    attachment_closure,
    check_theorems,
    config_semantics,
    dependents_of,
    export_dot,
    fixture,
    fixture_ids,
    is_usable,
    layers,
    modular_mult_tables,
    modular_mult_universe,
    open_inputs,
    parse_config,
    ports_all,
    ports_in,
    ports_out,
    project,
    random_configuration,
    semantic_dependency,
    semantic_dependency_relation,
    semantics_table,
    serialize_config,
    syntactic_dependency,
    update_configuration,
    validate,
    valuation_space,
)

__all__ = [
    "BudgetExceeded",
    "ClosureResult",
    "Model",
    "ModelError",
    "TheoremReport",
    "attachment_closure",
    "check_theorems",
    "config_semantics",
    "dependents_of",
    "export_dot",
    "fixture",
    "fixture_ids",
    "is_usable",
    "layers",
    "modular_mult_tables",
    "modular_mult_universe",
    "open_inputs",
    "parse_config",
    "ports_all",
    "ports_in",
    "ports_out",
    "project",
    "random_configuration",
    "semantic_dependency",
    "semantic_dependency_relation",
    "semantics_table",
    "serialize_config",
    "syntactic_dependency",
    "update_configuration",
    "validate",
    "valuation_space",
]
