import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from loguru import logger
from pydantic import BaseModel, Field

Model = TypeVar("Model", bound=BaseModel)


class Invocation(BaseModel):
    """Header written into every CLI output: the subcommand and all of its parameters."""

    subcommand: str
    inputs: List[str] = Field(default_factory=list, description="Input paths or group names")
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output: Optional[str] = None


def read_json(path: str) -> Any:
    with open(path, "r") as f:
        return json.load(f)


def read_model(path: str, model: Type[Model]) -> Model:
    """Load `model` from a file, unwrapping the CLI envelope when present."""
    data = read_json(path)
    if isinstance(data, dict) and "invocation" in data and "result" in data:
        data = data["result"]
    return model.model_validate(data)


def _dump(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, list):
        return [_dump(item) for item in payload]
    return payload


def write_json(payload: Any, invocation: Invocation) -> None:
    """Write payload wrapped with the invocation header to the output path, or stdout."""
    result = _dump(payload)
    text = json.dumps({"invocation": invocation.model_dump(mode="json"), "result": result}, indent=2, sort_keys=False)
    if invocation.output:
        Path(invocation.output).write_text(text + "\n")
        logger.info(f"Wrote {invocation.subcommand} result to {invocation.output}")
    else:
        sys.stdout.write(text + "\n")
