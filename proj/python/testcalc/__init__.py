"""Program graph, propositional logic, behavior set and statechart analysis."""

from ._testcalc import (
    AnalysisError,
    Error,
    InputError,
    LimitError,
    analyze_graph,
    analyze_source,
    classify,
    decompose,
    entails,
    flatten,
    run_chart,
    run_cli,
    truth_table,
)

__all__ = [
    "AnalysisError",
    "Error",
    "InputError",
    "LimitError",
    "analyze_graph",
    "analyze_source",
    "classify",
    "decompose",
    "entails",
    "flatten",
    "run_chart",
    "run_cli",
    "truth_table",
]
