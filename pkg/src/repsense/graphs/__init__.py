from repsense.graphs.pipeline import STEPS, build_pipeline_graph, run_pipeline

__all__ = ["STEPS", "build_pipeline_graph", "run_pipeline"]
