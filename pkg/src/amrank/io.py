"""Text file formats: weights, scores, vertex lists, priors and configs.

All vertex references in files use the graph's original labels.
"""

from __future__ import annotations

import dataclasses
import logging
from pathlib import Path

import numpy as np

from .bum import clamp_zero_weights
from .graph import Graph
from .module_space import ModulePrior

log = logging.getLogger(__name__)


def _rows(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _split(line: str) -> list[str]:
    return [p.strip() for p in (line.split("\t") if "\t" in line else line.split())]


def parse_vertex_values(text: str, g: Graph, what: str = "value") -> np.ndarray:
    """Parse ``label<TAB>number`` lines into a per-vertex array.

    Every vertex of ``g`` must be listed once; labels unknown to the graph
    are skipped with a warning.
    """
    out = np.full(g.n, np.nan)
    unknown = 0
    for lineno, line in _rows(text):
        parts = _split(line)
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'label<TAB>{what}'")
        label, raw = parts
        try:
            val = float(raw)
        except ValueError:
            raise ValueError(f"line {lineno}: bad {what} {raw!r}") from None
        try:
            v = g.vertex_of(label)
        except KeyError:
            unknown += 1
            continue
        if not np.isnan(out[v]):
            raise ValueError(f"line {lineno}: vertex {label!r} listed twice")
        out[v] = val
    if unknown:
        log.warning("ignored %d %s(s) for labels not in the graph", unknown, what)
    missing = [g.labels[v] for v in np.flatnonzero(np.isnan(out))]
    if missing:
        raise ValueError(f"no {what} for vertices: {', '.join(missing[:10])}"
                         + (" ..." if len(missing) > 10 else ""))
    return out


def parse_weights(text: str, g: Graph) -> np.ndarray:
    w = parse_vertex_values(text, g, "weight")
    if np.any(w < 0) or np.any(w > 1):
        raise ValueError("weights must lie in [0, 1]")
    return clamp_zero_weights(w)


def parse_weight_column(text: str) -> np.ndarray:
    """Weights from the last column of each line, labels ignored."""
    vals = []
    for lineno, line in _rows(text):
        raw = _split(line)[-1]
        try:
            vals.append(float(raw))
        except ValueError:
            raise ValueError(f"line {lineno}: bad weight {raw!r}") from None
    w = np.array(vals)
    if np.any(w < 0) or np.any(w > 1):
        raise ValueError("weights must lie in [0, 1]")
    return clamp_zero_weights(w)


def format_vertex_values(g: Graph, values) -> str:
    return "".join(f"{g.labels[v]}\t{float(x)!r}\n" for v, x in enumerate(values))


def parse_vertex_list(text: str, g: Graph) -> list[int]:
    """One label per line, order preserved; duplicates rejected."""
    out = []
    seen = set()
    for lineno, line in _rows(text):
        v = g.vertex_of(line)
        if v in seen:
            raise ValueError(f"line {lineno}: vertex {line!r} repeated")
        seen.add(v)
        out.append(v)
    return out


def format_vertex_list(g: Graph, vertices) -> str:
    return "".join(f"{g.labels[v]}\n" for v in vertices)


def parse_prior(text: str, g: Graph) -> ModulePrior:
    """``label,label,...<TAB>probability`` lines into an empirical prior."""
    items = []
    for lineno, line in _rows(text):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'labels<TAB>probability'")
        labels = [x.strip() for x in parts[0].split(",") if x.strip()]
        items.append(({g.vertex_of(x) for x in labels}, float(parts[1])))
    return ModulePrior.empirical(items, graph=g)


def format_prior(g: Graph, prior: ModulePrior) -> str:
    from .graph import mask_members
    lines = []
    for mask, p in zip(prior.support, prior.probs):
        labels = ",".join(g.labels[v] for v in mask_members(mask))
        lines.append(f"{labels}\t{p!r}\n")
    return "".join(lines)


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, line in _rows(text):
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def experiment_config_from_text(text: str):
    """Build an :class:`~amrank.evaluation.ExperimentConfig` from a config file."""
    from .evaluation import ExperimentConfig

    raw = parse_config(text)
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    kwargs = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in fields:
            raise ValueError(f"unknown config key {key!r}")
        default = getattr(ExperimentConfig, name, None)
        if name == "methods":
            kwargs[name] = tuple(x.strip() for x in value.split(",") if x.strip())
        elif value.lower() in ("none", ""):
            kwargs[name] = None
        elif name in ("graph_file", "sampler", "prior"):
            kwargs[name] = value
        elif isinstance(default, float) or name in ("time_limit",):
            kwargs[name] = float(value)
        else:
            kwargs[name] = int(value)
    return ExperimentConfig(**kwargs)


def read_text(path) -> str:
    return Path(path).read_text()


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
