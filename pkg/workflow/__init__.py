"""
Workflow module: the simulate, run, evaluate and render stages.
"""

from .inputs import RunInputs, load_inputs
from .simulate import SimulationSummary, run_generator, simulate_run, simulate_all
from .process import RunResult, ingest, process_detections, write_run_outputs, run_pipeline, run_all
from .evaluate import EvaluationSummary, evaluate_run, evaluate_all, render_all

__all__ = [
    'RunInputs',
    'load_inputs',
    'SimulationSummary',
    'run_generator',
    'simulate_run',
    'simulate_all',
    'RunResult',
    'ingest',
    'process_detections',
    'write_run_outputs',
    'run_pipeline',
    'run_all',
    'EvaluationSummary',
    'evaluate_run',
    'evaluate_all',
    'render_all',
]
