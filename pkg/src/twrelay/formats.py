"""JSON/CSV documents: channel specs in, regions and schedules out."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .channel import ChannelModel, DiscreteChannel, GaussianNetwork, MITable
from .errors import ChannelSpecError
from .geometry import Frontier, RatePentagon, RegionUnion
from .schedule import CSV_HEADER, ScheduleTable

_FIELDS = {
    "gaussian": {"kind", "nodes", "gains", "powers", "noises"},
    "table": {"kind", "nodes", "entries"},
    "discrete": {"kind", "nodes", "alphabets", "pmfs", "transition", "state_cap"},
}
_REQUIRED = {
    "gaussian": {"kind", "nodes", "gains", "powers", "noises"},
    "table": {"kind", "nodes", "entries"},
    "discrete": {"kind", "nodes", "pmfs", "transition"},
}


def channel_from_dict(doc: dict) -> ChannelModel:
    if not isinstance(doc, dict):
        raise ChannelSpecError("channel spec must be a JSON object")
    kind = doc.get("kind")
    if kind not in _FIELDS:
        raise ChannelSpecError(f"unknown channel kind {kind!r}")
    unknown = set(doc) - _FIELDS[kind]
    if unknown:
        raise ChannelSpecError(f"unknown field(s) for {kind} channel: {sorted(unknown)}")
    missing = _REQUIRED[kind] - set(doc)
    if missing:
        raise ChannelSpecError(f"missing field(s) for {kind} channel: {sorted(missing)}")
    m = doc["nodes"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ChannelSpecError(f"'nodes' must be an integer >= 2, got {m!r}")

    if kind == "gaussian":
        try:
            model = GaussianNetwork(np.array(doc["gains"], dtype=float),
                                    np.array(doc["powers"], dtype=float),
                                    np.array(doc["noises"], dtype=float))
        except (TypeError, ValueError) as exc:
            raise ChannelSpecError(f"bad gaussian channel: {exc}") from exc
    elif kind == "table":
        entries = {}
        for k, e in enumerate(doc["entries"]):
            if not isinstance(e, dict) or set(e) != {"A", "B", "C", "bits"}:
                raise ChannelSpecError(f"entry {k} must have exactly the keys A, B, C, bits")
            entries[(frozenset(e["A"]), frozenset(e["B"]), frozenset(e["C"]))] = e["bits"]
        model = MITable(m, entries)
    else:
        pmfs = doc["pmfs"]
        if "alphabets" in doc and list(doc["alphabets"]) != [len(p) for p in pmfs]:
            raise ChannelSpecError("'alphabets' disagrees with the pmf lengths")
        try:
            model = DiscreteChannel(tuple(pmfs), np.array(doc["transition"], dtype=float),
                                    int(doc.get("state_cap", 10**7)))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ChannelSpecError):
                raise
            raise ChannelSpecError(f"bad discrete channel: {exc}") from exc
    if model.node_count != m:
        raise ChannelSpecError(f"'nodes' is {m} but the parameters describe "
                               f"{model.node_count} nodes")
    return model


def load_channel(text: str) -> ChannelModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(f"channel spec is not valid JSON: {exc}") from exc
    return channel_from_dict(doc)


def channel_to_dict(model: ChannelModel) -> dict:
    m = model.node_count
    if isinstance(model, GaussianNetwork):
        return {"kind": "gaussian", "nodes": m, "gains": model.gains.tolist(),
                "powers": model.powers.tolist(), "noises": model.noises.tolist()}
    if isinstance(model, MITable):
        entries = [{"A": sorted(a), "B": sorted(b), "C": sorted(c), "bits": v}
                   for (a, b, c), v in model.entries.items()]
        entries.sort(key=lambda e: (e["A"], e["B"], e["C"]))
        return {"kind": "table", "nodes": m, "entries": entries}
    if isinstance(model, DiscreteChannel):
        return {"kind": "discrete", "nodes": m, "alphabets": list(model.input_alphabets),
                "pmfs": [p.tolist() for p in model.input_pmfs],
                "transition": model.transition.tolist(), "state_cap": model.state_cap}
    raise TypeError(f"cannot serialise {type(model).__name__}")


def _num(x: float):
    return x if math.isfinite(x) else None


def _unnum(x) -> float:
    return math.inf if x is None else float(x)


def frontier_csv(fr: Frontier) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("r1", "rm"))
    for x, y in fr.points:
        w.writerow((repr(x), repr(y)))
    return buf.getvalue()


def read_frontier_csv(text: str) -> Frontier:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["r1", "rm"]:
        raise ValueError("frontier CSV must start with the header r1,rm")
    return Frontier([(float(a), float(b)) for a, b in rows[1:]])


def _label(lab):
    ranks = getattr(lab, "ranks", None)
    if ranks is not None and hasattr(ranks, "ranks"):
        return {"ranks": list(ranks.ranks)}
    if isinstance(lab, int):
        return {"index": lab}
    return {"label": str(lab)}


def region_dict(union: RegionUnion, frontier: Frontier | None = None) -> dict:
    fr = union.frontier if frontier is None else frontier
    members = []
    for lab, p in union.members:
        entry = _label(lab)
        entry["caps"] = [_num(c) for c in p.caps]
        members.append(entry)
    return {"members": members, "frontier": [[x, y] for x, y in fr.points]}


def region_json(union: RegionUnion, frontier: Frontier | None = None) -> str:
    return json.dumps(region_dict(union, frontier), indent=2)


def read_region_json(text: str) -> tuple:
    """Return ``(members, frontier)`` with members as ``(ranks, RatePentagon)``."""
    doc = json.loads(text)
    if set(doc) != {"members", "frontier"}:
        raise ValueError("region JSON must hold exactly 'members' and 'frontier'")
    members = [(tuple(e.get("ranks", ())), RatePentagon(*(_unnum(c) for c in e["caps"])))
               for e in doc["members"]]
    return members, Frontier([tuple(p) for p in doc["frontier"]])


def schedule_csv(schedule: ScheduleTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in schedule.rows():
        w.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def read_schedule_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"schedule CSV must start with {','.join(CSV_HEADER)}")
    return [tuple(None if v == "" else int(v) for v in r) for r in rows[1:]]
