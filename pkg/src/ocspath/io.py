"""JSON documents for systems and paths.

A system document::

    {"kind": "ocs" | "oca" | "zocs",
     "states": [names...],
     "transitions": [{"src", "eff", "dst", "guard", ["label"]}...],
     ["alphabet", "initial", "final"]}          # oca only

A path document lists ``{"state", "counter", "transition_index"}`` steps, the
``final`` configuration and a ``summary`` of length, zeros and max counter.
Transition indices refer to the system document's transition list, which is
always written in canonical order.  Serialization uses fixed key order and
ends with a newline, so equal values give byte-identical text.
"""

from __future__ import annotations

import json

from .core import NEG, POS, ZERO, Config, Ocs, Path
from .words import Oca
from .zcounter import ZOcs

KINDS = ("ocs", "oca", "zocs")


class SchemaError(ValueError):
    """A document does not match the published schema."""


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SchemaError(f"{where}.{key}: expected an integer, got {value!r}")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def system_to_doc(system) -> dict:
    if isinstance(system, Oca):
        ocs = system.ocs
        doc = {"kind": "oca", "states": list(ocs.names)}
        doc["transitions"] = [
            {"src": ocs.names[t.src], "eff": t.eff, "dst": ocs.names[t.dst], "guard": t.guard, "label": lab}
            for t, lab in zip(ocs.transitions, system.labels)
        ]
        doc["alphabet"] = list(system.alphabet)
        doc["initial"] = [ocs.names[i] for i in sorted(system.initial)]
        doc["final"] = [ocs.names[i] for i in sorted(system.final)]
        return doc
    kind = "zocs" if isinstance(system, ZOcs) else "ocs"
    names = system.names
    return {
        "kind": kind,
        "states": list(names),
        "transitions": [
            {"src": names[t.src], "eff": t.eff, "dst": names[t.dst], "guard": t.guard}
            for t in system.transitions
        ],
    }


def serialize_system(system) -> str:
    return _dump(system_to_doc(system))


def system_from_doc(doc):
    if not isinstance(doc, dict):
        raise SchemaError("document: expected a JSON object")
    kind = _require(doc, "kind", str, "document")
    if kind not in KINDS:
        raise SchemaError(f"document.kind: expected one of {KINDS}, got {kind!r}")
    states = _require(doc, "states", list, "document")
    if not states or not all(isinstance(s, str) for s in states):
        raise SchemaError("document.states: expected a nonempty list of names")
    if len(set(states)) != len(states):
        raise SchemaError("document.states: names must be distinct")
    index = {s: i for i, s in enumerate(states)}
    sets = {POS: [], ZERO: [], NEG: []}
    labels = {}
    for i, rec in enumerate(_require(doc, "transitions", list, "document")):
        where = f"transitions[{i}]"
        src = _require(rec, "src", str, where)
        dst = _require(rec, "dst", str, where)
        eff = _require(rec, "eff", int, where)
        guard = _require(rec, "guard", str, where)
        for name in (src, dst):
            if name not in index:
                raise SchemaError(f"{where}: unknown state {name!r}")
        if eff not in (-1, 0, 1):
            raise SchemaError(f"{where}.eff: expected -1, 0 or 1, got {eff}")
        if guard not in (POS, ZERO, NEG):
            raise SchemaError(f"{where}.guard: expected 'pos', 'zero' or 'neg', got {guard!r}")
        if guard == NEG and kind != "zocs":
            raise SchemaError(f"{where}: guard 'neg' is only allowed in kind 'zocs'")
        if guard == ZERO and kind != "zocs" and eff == -1:
            raise SchemaError(f"{where}: a zero test cannot decrement in kind {kind!r}")
        if kind == "oca":
            if "label" not in rec:
                raise SchemaError(f"{where}: missing field 'label'")
            lab = rec["label"]
            if lab is not None and not isinstance(lab, str):
                raise SchemaError(f"{where}.label: expected a string or null")
            key = (index[src], eff, index[dst], guard)
            if labels.get(key, lab) != lab:
                raise SchemaError(f"{where}: conflicting labels for a repeated transition")
            labels[key] = lab
        elif "label" in rec:
            raise SchemaError(f"{where}: labels are only allowed in kind 'oca'")
        sets[guard].append((index[src], eff, index[dst]))
    if kind == "zocs":
        return ZOcs(len(states), sets[POS], sets[NEG], sets[ZERO], tuple(states))
    ocs = Ocs(len(states), sets[POS], sets[ZERO], tuple(states))
    if kind == "ocs":
        return ocs
    alphabet = _require(doc, "alphabet", list, "document")
    initial = _require(doc, "initial", list, "document")
    final = _require(doc, "final", list, "document")
    for field, names in (("initial", initial), ("final", final)):
        for name in names:
            if name not in index:
                raise SchemaError(f"document.{field}: unknown state {name!r}")
    for lab in labels.values():
        if lab is not None and lab not in alphabet:
            raise SchemaError(f"label {lab!r} is not in the alphabet")
    return Oca(
        ocs,
        tuple(labels[tuple(t)] for t in ocs.transitions),
        tuple(alphabet),
        frozenset(index[s] for s in initial),
        frozenset(index[s] for s in final),
    )


def parse_system(text: str):
    return system_from_doc(_load(text))


def path_to_doc(rho: Path, system) -> dict:
    names = system.names if not isinstance(system, Oca) else system.ocs.names
    table = system.transition_index if not isinstance(system, Oca) else system.ocs.transition_index
    return {
        "steps": [
            {"state": names[c.state], "counter": c.counter, "transition_index": table[t]}
            for c, t in zip(rho.configs, rho.transitions)
        ],
        "final": {"state": names[rho.targ.state], "counter": rho.targ.counter},
        "summary": summary(rho),
    }


def summary(rho: Path) -> dict:
    return {"length": len(rho), "zeros": rho.zeros, "max_counter": rho.max_counter}


def serialize_path(rho: Path, system) -> str:
    return _dump(path_to_doc(rho, system))


def path_from_doc(doc, system) -> Path:
    if isinstance(system, Oca):
        system = system.ocs
    index = {s: i for i, s in enumerate(system.names)}
    trans = system.transitions

    def config(rec, where):
        state = _require(rec, "state", str, where)
        if state not in index:
            raise SchemaError(f"{where}: unknown state {state!r}")
        return Config(index[state], _require(rec, "counter", int, where))

    configs, steps = [], []
    for i, rec in enumerate(_require(doc, "steps", list, "path")):
        where = f"steps[{i}]"
        configs.append(config(rec, where))
        ti = _require(rec, "transition_index", int, where)
        if not 0 <= ti < len(trans):
            raise SchemaError(f"{where}.transition_index: {ti} is out of range")
        steps.append(trans[ti])
    configs.append(config(_require(doc, "final", dict, "path"), "final"))
    rho = Path(tuple(configs), tuple(steps))
    if "summary" in doc and doc["summary"] != summary(rho):
        raise SchemaError("path.summary does not match the steps")
    return rho


def parse_path(text: str, system) -> Path:
    return path_from_doc(_load(text), system)
