"""
JSON interchange for state property spaces and axiom reports.
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from .exceptions import SpsFormatError
from .spa import AxiomReport, FiniteStatePropertySpace

logger = logging.getLogger(__name__)

FIELDS = ("states", "properties", "xi", "ortho")
REQUIRED = ("states", "properties", "xi")


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _labels(doc: dict, name: str, path: Optional[str]) -> List[str]:
    value = doc[name]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise SpsFormatError(f"'{name}' must be an array of strings", field=name, path=path)
    if len(set(value)) != len(value):
        raise SpsFormatError(f"'{name}' contains duplicate labels", field=name, path=path)
    return value


def _pairs(doc: dict, name: str, left: List[str], right: List[str],
           path: Optional[str]) -> List[Tuple[str, str]]:
    value = doc[name]
    if not isinstance(value, list):
        raise SpsFormatError(f"'{name}' must be an array of pairs", field=name, path=path)
    out = []
    for entry in value:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise SpsFormatError(f"'{name}' entry is not a pair: {entry!r}", field=name, path=path)
        x, y = entry
        if x not in left or y not in right:
            raise SpsFormatError(f"'{name}' entry names an unknown label: {entry!r}",
                                 field=name, path=path)
        out.append((x, y))
    return out


class SpsDocument:
    """Codec between FiniteStatePropertySpace and its JSON document."""
    @staticmethod
    def pack(sps: FiniteStatePropertySpace) -> str:
        """Serialize with fields in a fixed order; xi pairs are listed state by state."""
        doc = {
            "states": list(sps.states),
            "properties": list(sps.properties),
            "xi": [list(pair) for pair in sps.actual_pairs()],
        }
        if sps.ortho is not None:
            doc["ortho"] = [list(pair) for pair in sps.ortho]
        return _dumps(doc)

    @staticmethod
    def unpack(text: str, path: Optional[str] = None) -> FiniteStatePropertySpace:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpsFormatError(f"Invalid JSON: {e}", path=path)
        if not isinstance(doc, dict):
            raise SpsFormatError("Document must be a JSON object", path=path)
        unknown = sorted(set(doc) - set(FIELDS))
        if unknown:
            raise SpsFormatError(f"Unknown field '{unknown[0]}'", field=unknown[0], path=path)
        for name in REQUIRED:
            if name not in doc:
                raise SpsFormatError(f"Missing field '{name}'", field=name, path=path)
        states = _labels(doc, "states", path)
        properties = _labels(doc, "properties", path)
        xi = _pairs(doc, "xi", states, properties, path)
        ortho = _pairs(doc, "ortho", properties, properties, path) if "ortho" in doc else None
        return FiniteStatePropertySpace.from_pairs(states, properties, xi, ortho)

    @staticmethod
    def read(path: Union[str, Path]) -> FiniteStatePropertySpace:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpsFormatError(f"Cannot read SPS document: {e.strerror}", path=str(path))
        sps = SpsDocument.unpack(text, str(path))
        logger.debug(f"Read {path}: {len(sps.states)} states, {len(sps.properties)} properties")
        return sps

    @staticmethod
    def write(sps: FiniteStatePropertySpace, path: Union[str, Path]) -> None:
        Path(path).write_text(SpsDocument.pack(sps), encoding="utf-8")

    @staticmethod
    def pack_report(report: AxiomReport) -> str:
        return _dumps(report.to_dict())
