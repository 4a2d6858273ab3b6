"""Strategy documents: a JSON schema tying an ensemble to a strategy.

A document records the ensemble parameters, the measurement elements as real
quadruples [a, re(b), im(b), d], the retransmission amplitudes as quadruples
[re+, im+, re-, im-], and provenance (who generated it, with what
parameters). Floats are rendered with 17 significant digits so every value
survives the round trip exactly; loading re-validates everything before any
simulation may consume the file.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .ensembles import SymmetricEnsemble, symmetric_ensemble
from .errors import DomainError, ValidationError
from .fidelity import Strategy
from .measurements import Pom, validate_pom
from .qubit import Hermitian2, PureQubit

FORMAT_VERSION = 1


def _render(value: Any, indent: int) -> str:
    pad = " " * indent
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"cannot serialize non-finite float {value!r}")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in items):
            return "[" + ", ".join(_render(x, 0) for x in items) + "]"
        inner = ",\n".join(pad + "  " + _render(x, indent + 2) for x in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 2)}'
            for k, v in value.items())
        return "{\n" + inner + "\n" + pad + "}"
    raise DomainError(f"cannot serialize {type(value).__name__} values")


def strategy_document(e: SymmetricEnsemble, s: Strategy, generator: str,
                      parameters: dict[str, Any] | None = None) -> dict[str, Any]:
    """Plain-data document describing the strategy; ready to render."""
    return {
        "format": "strategy",
        "version": FORMAT_VERSION,
        "generator": generator,
        "parameters": dict(parameters or {}),
        "ensemble": {"m": e.m, "theta": float(e.theta)},
        "pom": [[el.a, el.b.real, el.b.imag, el.d] for el in s.pom.elements],
        "retransmit": [[q.amp_plus.real, q.amp_plus.imag,
                        q.amp_minus.real, q.amp_minus.imag] for q in s.retransmit],
    }


def render_document(doc: dict[str, Any]) -> str:
    return _render(doc, 0) + "\n"


def save_strategy(path: str | Path, e: SymmetricEnsemble, s: Strategy,
                  generator: str, parameters: dict[str, Any] | None = None) -> None:
    Path(path).write_text(render_document(strategy_document(e, s, generator, parameters)))


def _fail(msg: str) -> ValidationError:
    return ValidationError(msg)


def _quadruples(doc: dict[str, Any], key: str) -> list[list[float]]:
    rows = doc.get(key)
    if not isinstance(rows, list) or not rows:
        raise _fail(f'"{key}" must be a non-empty list')
    out = []
    for pos, row in enumerate(rows):
        if (not isinstance(row, list) or len(row) != 4
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row)):
            raise _fail(f'"{key}"[{pos}] must be a list of 4 numbers')
        if not all(math.isfinite(float(x)) for x in row):
            raise _fail(f'"{key}"[{pos}] contains a non-finite number')
        out.append([float(x) for x in row])
    return out


def parse_strategy_document(doc: Any) -> tuple[SymmetricEnsemble, Strategy, dict[str, Any]]:
    """Validate a parsed document and rebuild the ensemble and strategy.

    Raises ValidationError naming the first violation found.
    """
    if not isinstance(doc, dict):
        raise _fail("document root must be an object")
    for key in ("format", "version", "generator", "parameters", "ensemble", "pom", "retransmit"):
        if key not in doc:
            raise _fail(f'missing required key "{key}"')
    if doc["format"] != "strategy":
        raise _fail(f'unknown format {doc["format"]!r}')
    if doc["version"] != FORMAT_VERSION:
        raise _fail(f'unsupported version {doc["version"]!r}')
    ens = doc["ensemble"]
    if not isinstance(ens, dict) or "m" not in ens or "theta" not in ens:
        raise _fail('"ensemble" must be an object with "m" and "theta"')
    m, theta = ens["m"], ens["theta"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise _fail('"ensemble.m" must be an integer')
    if not isinstance(theta, (int, float)) or isinstance(theta, bool):
        raise _fail('"ensemble.theta" must be a number')
    try:
        ensemble = symmetric_ensemble(m, float(theta))
    except DomainError as exc:
        raise _fail(f"ensemble: {exc}") from exc
    pom_rows = _quadruples(doc, "pom")
    state_rows = _quadruples(doc, "retransmit")
    if len(state_rows) != len(pom_rows):
        raise _fail(f"{len(state_rows)} retransmission states for {len(pom_rows)} elements")
    elements = tuple(Hermitian2(a=row[0], d=row[3], b=complex(row[1], row[2]))
                     for row in pom_rows)
    pom = Pom(elements=elements, labels=tuple(range(len(elements))))
    violations = validate_pom(pom)
    if violations:
        raise _fail(f"pom: {violations[0]}")
    states = []
    for pos, row in enumerate(state_rows):
        try:
            states.append(PureQubit(complex(row[0], row[1]), complex(row[2], row[3])))
        except DomainError as exc:
            raise _fail(f'"retransmit"[{pos}]: {exc}') from exc
    strategy = Strategy(pom=pom, retransmit=tuple(states))
    meta = {"generator": doc["generator"], "parameters": doc["parameters"],
            "version": doc["version"]}
    return ensemble, strategy, meta


def load_strategy(path: str | Path) -> tuple[SymmetricEnsemble, Strategy, dict[str, Any]]:
    """Read and validate a strategy document from disk."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(f"not valid JSON: {exc}") from exc
    return parse_strategy_document(doc)
