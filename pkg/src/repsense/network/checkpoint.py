"""
Binary checkpoint codec.

Layout: b"RSCK", little-endian u32 header length, JSON header
{version, config, tensors, scaler, metadata}, then every tensor as
little-endian float32 in header order.
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, NamedTuple, Optional

import numpy as np
import torch
from pydantic import ValidationError

from repsense.errors import CheckpointError
from repsense.models import AxisScaler, ModelConfig
from repsense.network.siamese import SiameseNet

MAGIC = b"RSCK"
CHECKPOINT_VERSION = 1
_LEN = struct.Struct("<I")


class LoadedCheckpoint(NamedTuple):
    model: SiameseNet
    scaler: Optional[AxisScaler]
    metadata: Dict[str, Any]


def encode_checkpoint(
    model: SiameseNet,
    scaler: AxisScaler | None = None,
    metadata: Dict[str, Any] | None = None,
) -> bytes:
    tensors, chunks, offset = [], [], 0
    for name, tensor in model.state_dict().items():
        data = tensor.detach().cpu().numpy().astype("<f4")
        tensors.append(
            {"name": name, "shape": list(data.shape), "offset": offset, "count": int(data.size)}
        )
        chunks.append(data.tobytes())
        offset += int(data.size)
    header = {
        "version": CHECKPOINT_VERSION,
        "config": model.config.model_dump(mode="json"),
        "tensors": tensors,
        "scaler": scaler.model_dump(mode="json") if scaler is not None else None,
        "metadata": metadata or {},
    }
    raw = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return MAGIC + _LEN.pack(len(raw)) + raw + b"".join(chunks)


def decode_checkpoint(blob: bytes, expected: ModelConfig | None = None) -> LoadedCheckpoint:
    if len(blob) < 8 or blob[:4] != MAGIC:
        raise CheckpointError("not a repsense checkpoint (bad magic)")
    (size,) = _LEN.unpack_from(blob, 4)
    try:
        header = json.loads(blob[8 : 8 + size].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable checkpoint header: {exc}") from exc

    version = header.get("version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint version {version} is not supported (expected {CHECKPOINT_VERSION})"
        )
    try:
        cfg = ModelConfig.model_validate(header["config"])
    except ValidationError as exc:
        raise CheckpointError(f"checkpoint config is invalid: {exc}") from exc
    if expected is not None and expected != cfg:
        raise CheckpointError("checkpoint was trained with a different model config")

    model = SiameseNet(cfg)
    state = model.state_dict()
    try:
        payload = np.frombuffer(blob, dtype="<f4", offset=8 + size)
    except ValueError as exc:
        raise CheckpointError(f"checkpoint payload is corrupt: {exc}") from exc
    names = {t["name"] for t in header["tensors"]}
    if names != set(state):
        raise CheckpointError("checkpoint tensor names do not match the model")

    loaded = {}
    for entry in header["tensors"]:
        name, shape = entry["name"], tuple(entry["shape"])
        if shape != tuple(state[name].shape):
            raise CheckpointError(
                f"shape mismatch for {name}: checkpoint {shape}, model {tuple(state[name].shape)}"
            )
        start, count = entry["offset"], entry["count"]
        if start + count > payload.size:
            raise CheckpointError(f"payload truncated at {name}")
        loaded[name] = torch.from_numpy(payload[start : start + count].reshape(shape).copy())
    model.load_state_dict(loaded)

    scaler = AxisScaler.model_validate(header["scaler"]) if header.get("scaler") else None
    return LoadedCheckpoint(model=model, scaler=scaler, metadata=header.get("metadata", {}))


def save_checkpoint(
    model: SiameseNet,
    path: str | Path,
    scaler: AxisScaler | None = None,
    metadata: Dict[str, Any] | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(model, scaler, metadata))
    return path


def load_checkpoint(path: str | Path, expected: ModelConfig | None = None) -> LoadedCheckpoint:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    return decode_checkpoint(blob, expected)
