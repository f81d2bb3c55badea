"""Graph-reasoning toolkit: tool algorithms, benchmark generation, a staged
instruction pipeline over pluggable completion backends, matching-function
dataset filtering with Alpaca export, and an evaluation harness."""

__version__ = "0.1.0"

from .graphs import Graph, WeightKind, build_graph, canonical_edge_set, graphs_equal
from .tools import Answer, dispatch, TOOL_NAMES
from .toolset import ToolRegistry, ToolSpec, default_registry, retrieve_tool_template
from .codec import (
    ExtractionResult,
    extract_file_path,
    extract_graph,
    extract_parameters,
    extract_tool_name,
    read_el_graph_file,
    render_edge_list,
    write_el_graph_file,
)
from .generator import (
    ALL_KINDS,
    GenConfig,
    SizeClass,
    TaskInstance,
    TaskKind,
    classify_size,
    generate_corpus,
    generate_graph,
    generate_instance,
)
from .pipeline import (
    PipelineTrace,
    StageKind,
    build_graph_instruction,
    build_parameter_instruction,
    build_task_instruction,
    run_corpus,
    run_pipeline,
)
from .backends import (
    CompletionConfig,
    FaultBackend,
    FaultPlan,
    HttpBackend,
    OracleBackend,
    make_fault_backend,
    make_oracle_backend,
)
from .dataset import DatasetEntry, build_dataset, export_alpaca, matching_function
from .evaluation import (
    Category,
    EvalRecord,
    Report,
    aggregate,
    evaluate_traces,
    render_report,
    score_trace,
)
