"""JSON documents for specs, plans, traces and verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .apparatus import ScaleOutcome, Weight
from .engine import BagSpec, ExecutionTrace, ProtocolKind, ProtocolPlan, Reference, ResourceCount
from .functions import And, FunctionSpec, PlayerInputs, SpecError, Symmetric, Threshold, TruthTable
from .verification import VerificationReport

_SPEC_FIELDS = {
    "and": {"type", "n"},
    "threshold": {"type", "n", "k"},
    "symmetric": {"type", "n", "x_set"},
    "truth_table": {"type", "n", "ones"},
}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], doc: Any) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path: Union[str, Path]) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# ------------------------------------------------------------------ specs


def spec_to_json(spec: FunctionSpec) -> dict:
    if isinstance(spec, And):
        return {"type": "and", "n": spec.n}
    if isinstance(spec, Threshold):
        return {"type": "threshold", "n": spec.n, "k": spec.k}
    if isinstance(spec, Symmetric):
        return {"type": "symmetric", "n": spec.n, "x_set": sorted(spec.x_set)}
    if isinstance(spec, TruthTable):
        return {"type": "truth_table", "n": spec.n, "ones": sorted(spec.ones)}
    raise TypeError(f"not a function spec: {spec!r}")


def spec_from_json(doc: Any) -> FunctionSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a JSON object")
    kind = doc.get("type")
    if kind not in _SPEC_FIELDS:
        raise SpecError(f"spec type must be one of {sorted(_SPEC_FIELDS)}, got {kind!r}")
    present, required = set(doc), _SPEC_FIELDS[kind]
    if present != required:
        missing, extra = sorted(required - present), sorted(present - required)
        raise SpecError(f"{kind} spec requires exactly fields {sorted(required)}"
                        f" (missing {missing}, unexpected {extra})")
    n = doc["n"]
    if kind == "and":
        return And(n)
    if kind == "threshold":
        return Threshold(n, doc["k"])
    if kind == "symmetric":
        xs = doc["x_set"]
        if not isinstance(xs, list) or len(set(xs)) != len(xs):
            raise SpecError("x_set must be a list of distinct integers")
        return Symmetric(n, frozenset(xs))
    ones = doc["ones"]
    if not isinstance(ones, list) or len(set(ones)) != len(ones):
        raise SpecError("ones must be a list of distinct bit strings")
    return TruthTable(n, frozenset(ones))


# ------------------------------------------------------------------ plans


def _weight_to_json(w: Optional[Weight]):
    return None if w is None else {"w_units": w.w_units, "half_delta_units": w.half_delta_units}


def _weight_from_json(d) -> Optional[Weight]:
    return None if d is None else Weight(int(d["w_units"]), int(d["half_delta_units"]))


def plan_to_json(plan: ProtocolPlan) -> dict:
    ref = plan.reference
    return {
        "kind": plan.kind.value,
        "n": plan.n,
        "player_issue": [list(p) for p in plan.player_issue],
        "prepared_bags": [
            {"heavy": b.heavy, "light": b.light, "target": b.target, "special": b.special}
            for b in plan.prepared_bags
        ],
        "custom_weight": _weight_to_json(plan.custom_weight),
        "reference": None if ref is None else {
            "heavy": ref.heavy, "light": ref.light, "custom": _weight_to_json(ref.custom)},
        "decision_rule": {
            "accept_outcome": plan.accept_outcome.label,
            "stop_on_accept": plan.stop_on_accept,
            "negate_output": plan.negate_output,
        },
        "pair_shuffle": plan.pair_shuffle,
        "resources": {
            "coins": plan.resources.coins,
            "bags": plan.resources.bags,
            "comparisons_max": plan.resources.comparisons_max,
            "uses_custom_weight": plan.resources.uses_custom_weight,
            "uses_pen": plan.resources.uses_pen,
        },
        "notes": list(plan.notes),
        "source": None if plan.source is None else spec_to_json(plan.source),
    }


def plan_from_json(doc: dict) -> ProtocolPlan:
    try:
        ref = doc["reference"]
        rule = doc["decision_rule"]
        return ProtocolPlan(
            kind=ProtocolKind(doc["kind"]),
            n=int(doc["n"]),
            player_issue=tuple((int(h), int(l)) for h, l in doc["player_issue"]),
            prepared_bags=tuple(
                BagSpec(int(b["heavy"]), int(b["light"]), b["target"], bool(b["special"]))
                for b in doc["prepared_bags"]
            ),
            custom_weight=_weight_from_json(doc["custom_weight"]),
            reference=None if ref is None else Reference(
                int(ref["heavy"]), int(ref["light"]), _weight_from_json(ref["custom"])),
            accept_outcome=ScaleOutcome.from_label(rule["accept_outcome"]),
            stop_on_accept=bool(rule["stop_on_accept"]),
            negate_output=bool(rule["negate_output"]),
            pair_shuffle=bool(doc["pair_shuffle"]),
            resources=ResourceCount(**doc["resources"]),
            notes=tuple(doc["notes"]),
            source=None if doc["source"] is None else spec_from_json(doc["source"]),
        )
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed plan document: {exc!r}") from exc


# ------------------------------------------------------------------ traces


@dataclass
class TraceDocument:
    inputs: str
    view: list
    output: int
    transcript: Optional[list] = None
    raw_output: Optional[int] = None
    weighings: Optional[list] = None

    @classmethod
    def from_trace(cls, trace: ExecutionTrace, x: PlayerInputs, reveal: bool = False) -> "TraceDocument":
        doc = cls(inputs=str(x), view=[o.label for o in trace.view], output=trace.output)
        if reveal:
            doc.transcript = [list(p) for p in trace.transcript]
            doc.raw_output = trace.raw_output
            doc.weighings = [
                {"left": _weight_to_json(e.left), "right": _weight_to_json(e.right), "outcome": e.outcome.label}
                for e in trace.events
            ]
        return doc

    def to_json(self) -> dict:
        doc = {"inputs": self.inputs, "view": list(self.view), "output": self.output}
        for key in ("transcript", "raw_output", "weighings"):
            if getattr(self, key) is not None:
                doc[key] = getattr(self, key)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TraceDocument":
        return cls(**doc)


# ------------------------------------------------------------------ reports


@dataclass
class ReportDocument:
    spec: Optional[dict]
    plan_kind: str
    reports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.reports)

    @classmethod
    def from_reports(cls, spec: Optional[FunctionSpec], plan: ProtocolPlan,
                     reports: list[VerificationReport]) -> "ReportDocument":
        return cls(
            spec=None if spec is None else spec_to_json(spec),
            plan_kind=plan.kind.value,
            reports=[
                {
                    "check": r.check,
                    "passed": r.passed,
                    "failures": r.failures,
                    "counterexamples": r.counterexamples,
                    "inputs_visited": r.inputs_visited,
                    "transcripts_visited": r.transcripts_visited,
                    "notes": list(r.notes),
                }
                for r in reports
            ],
        )

    def to_json(self) -> dict:
        return {"spec": self.spec, "plan_kind": self.plan_kind, "passed": self.passed, "reports": self.reports}

    @classmethod
    def from_json(cls, doc: dict) -> "ReportDocument":
        return cls(spec=doc["spec"], plan_kind=doc["plan_kind"], reports=doc["reports"])
