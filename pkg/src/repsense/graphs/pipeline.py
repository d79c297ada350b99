import logging
from pathlib import Path
from typing import Any, Dict

from langgraph.checkpoint.base import BaseCheckpointSaver
from langgraph.checkpoint.sqlite import SqliteSaver
from langgraph.graph import END, START, StateGraph

from repsense.config import AppConfig
from repsense.nodes import (
    evaluate_node,
    label_node,
    pairs_node,
    segment_node,
    synth_node,
    train_node,
)
from repsense.states import PipelineState

logger = logging.getLogger(__name__)

STEPS = ("synth", "segment", "label", "pairs", "train", "evaluate")


def build_pipeline_graph(
    config: AppConfig,
    checkpointer: BaseCheckpointSaver | None = None,
    jobs: int = 1,
):
    def synth(state: Dict[str, Any]) -> Dict[str, Any]:
        return synth_node(state, config)

    def segment(state: Dict[str, Any]) -> Dict[str, Any]:
        return segment_node(state, config)

    def label(state: Dict[str, Any]) -> Dict[str, Any]:
        return label_node(state, config)

    def pairs(state: Dict[str, Any]) -> Dict[str, Any]:
        return pairs_node(state, config)

    def train(state: Dict[str, Any]) -> Dict[str, Any]:
        return train_node(state, config)

    def evaluate(state: Dict[str, Any]) -> Dict[str, Any]:
        return evaluate_node(state, config, jobs=jobs)

    graph = StateGraph(PipelineState)
    graph.add_node("synth", synth)
    graph.add_node("segment", segment)
    graph.add_node("label", label)
    graph.add_node("pairs", pairs)
    graph.add_node("train", train)
    graph.add_node("evaluate", evaluate)

    graph.add_edge(START, "synth")
    for before, after in zip(STEPS, STEPS[1:]):
        graph.add_edge(before, after)
    graph.add_edge("evaluate", END)

    return graph.compile(checkpointer=checkpointer)


def run_pipeline(
    config: AppConfig,
    thread_id: str = "default",
    checkpoint_db: str | Path | None = None,
    jobs: int = 1,
) -> Dict[str, Any]:
    """
    Run every pipeline step, checkpointing after each one.

    If the thread stopped part-way (an error or interruption), re-running
    with the same thread_id resumes at the first unfinished step.
    """
    db = Path(checkpoint_db) if checkpoint_db else Path(config.out_dir) / "checkpoints.db"
    db.parent.mkdir(parents=True, exist_ok=True)
    with SqliteSaver.from_conn_string(str(db)) as checkpointer:
        graph = build_pipeline_graph(config, checkpointer=checkpointer, jobs=jobs)
        run_config = {"configurable": {"thread_id": thread_id}}
        snapshot = graph.get_state(run_config)
        if snapshot.next:
            logger.info("⏯️ Resuming thread %s at %s", thread_id, ", ".join(snapshot.next))
            return graph.invoke(None, config=run_config)
        return graph.invoke({"out_dir": str(config.out_dir)}, config=run_config)
