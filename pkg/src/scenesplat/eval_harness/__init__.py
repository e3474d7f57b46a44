from .maps import MAP_TEMPLATES, map_template
from .generate import (
    DEFAULT_SECTORS,
    LabeledScenario,
    SyntheticSpec,
    default_acceptance_spec,
    default_test_spec,
    generate_corpus,
    training_examples,
)
from .benchmarks import (
    BenchmarkReport,
    MotionMetricsTable,
    QueryAccuracyTable,
    TaskCompletionTable,
    render_tables,
    run_motion_benchmark,
    run_query_benchmark,
    run_task_benchmark,
)
from .suites import (
    ambiguity_suite,
    conflict_suite,
    task_command_suite,
    trap_scenario,
)

__all__ = [
    "MAP_TEMPLATES",
    "map_template",
    "SyntheticSpec",
    "LabeledScenario",
    "DEFAULT_SECTORS",
    "generate_corpus",
    "training_examples",
    "default_acceptance_spec",
    "default_test_spec",
    "BenchmarkReport",
    "QueryAccuracyTable",
    "TaskCompletionTable",
    "MotionMetricsTable",
    "run_query_benchmark",
    "run_task_benchmark",
    "run_motion_benchmark",
    "render_tables",
    "ambiguity_suite",
    "task_command_suite",
    "conflict_suite",
    "trap_scenario",
]
