"""Canonical data types and JSON (de)serialization for the verification pipeline.

Everything that crosses a file or process boundary lives here: SRL documents
(a claim sentence plus its retrieved evidence sentences), labeled dataset
instances, predictions, and run configuration. All types are immutable after
construction, so they are safe to share across threads; parsing is pure.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

SCHEMA_VERSION = 1

_PUNCT = string.punctuation


class ParseError(ValueError):
    """Malformed JSON input. ``offset`` is the byte position where decoding failed."""

    def __init__(self, message: str, offset: int = -1):
        super().__init__(message)
        self.offset = offset


class SchemaError(ValueError):
    """Structurally valid JSON that violates a schema invariant.

    ``field`` names the offending location, e.g.
    ``evidence[1].tuples[0].arguments[2].span``.
    """

    def __init__(self, message: str, field_name: str = ""):
        super().__init__(message)
        self.field = field_name


class Role(str, Enum):
    VERB = "verb"
    ARGUMENT = "argument"
    LOCATION = "location"
    TEMPORAL = "temporal"
    OTHER = "other"


class Label(str, Enum):
    SUPPORTED = "SUPPORTED"
    REFUTED = "REFUTED"
    NEI = "NEI"


# Fixed class order; also the argmax tie-break order for predictions.
LABEL_ORDER = (Label.SUPPORTED, Label.REFUTED, Label.NEI)
LABEL_INDEX = {label: i for i, label in enumerate(LABEL_ORDER)}


def tokenize(text: str) -> list[str]:
    """Lowercase, whitespace-split, and strip leading/trailing punctuation.

    Tokens that are pure punctuation vanish; interior punctuation (e.g. the
    apostrophe in "winter's") survives. Deterministic and idempotent on its
    own space-joined output.
    """
    out = []
    for raw in text.lower().split():
        tok = raw.strip(_PUNCT)
        if tok:
            out.append(tok)
    return out


@dataclass(frozen=True)
class Token:
    text: str
    index: int


@dataclass(frozen=True)
class SrlArgument:
    role: Role
    text: str
    span: tuple[int, int]  # [start, end) token positions within the sentence


@dataclass(frozen=True)
class SrlTuple:
    tuple_id: str
    sentence_id: str
    arguments: tuple[SrlArgument, ...]

    @property
    def verb(self) -> SrlArgument:
        return next(a for a in self.arguments if a.role is Role.VERB)


@dataclass(frozen=True)
class Sentence:
    sentence_id: str
    source_doc: str
    tokens: tuple[Token, ...]
    tuples: tuple[SrlTuple, ...]

    @property
    def token_texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)


@dataclass(frozen=True)
class EvidenceSet:
    claim: Sentence
    evidence: tuple[Sentence, ...]

    def sentence(self, sentence_id: str) -> Sentence:
        if self.claim.sentence_id == sentence_id:
            return self.claim
        for s in self.evidence:
            if s.sentence_id == sentence_id:
                return s
        raise KeyError(sentence_id)


@dataclass(frozen=True)
class Instance:
    instance_id: str
    claim_text: str
    label: Label
    # Each group is a jointly sufficient set of (doc_id, sentence_index) pairs.
    gold_evidence_groups: tuple[frozenset[tuple[str, int]], ...]


@dataclass(frozen=True)
class Prediction:
    instance_id: str
    predicted_label: Label
    probabilities: tuple[float, float, float]
    predicted_evidence: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Config:
    """Model and pipeline hyperparameters.

    Defaults mirror the reference setup (node_dim 100, lr 2e-6, batch 6,
    top 10 documents / top 5 sentences); ``Config.desk()`` swaps in the
    small-scale training preset used by the synthetic experiments.
    Dropout is intentionally unsupported at this scale.
    """

    node_dim: int = 100
    gcn_layers: int = 2
    attention_dim: int = 100
    encoder_dim: int = 64
    encoder_layers: int = 2
    max_seq_len: int = 256
    learning_rate: float = 2e-6
    batch_size: int = 6
    top_docs: int = 10
    top_sentences: int = 5
    seed: int = 0
    rel_window: int = 16
    weight_decay: float = 0.01
    stage1_epochs: int = 30
    stage2_epochs: int = 60
    tied_gcn: bool = True

    @classmethod
    def desk(cls, **overrides) -> "Config":
        base = dict(learning_rate=1e-3, batch_size=8)
        base.update(overrides)
        return cls(**base)

    def validate(self) -> "Config":
        for name in ("node_dim", "gcn_layers", "attention_dim", "encoder_dim",
                     "encoder_layers", "batch_size", "top_docs", "top_sentences"):
            if getattr(self, name) < 1:
                raise SchemaError(f"{name} must be >= 1, got {getattr(self, name)}", name)
        if self.max_seq_len < 2:
            raise SchemaError(f"max_seq_len must be >= 2, got {self.max_seq_len}", "max_seq_len")
        if self.learning_rate <= 0:
            raise SchemaError(f"learning_rate must be > 0, got {self.learning_rate}", "learning_rate")
        if self.rel_window < 1:
            raise SchemaError(f"rel_window must be >= 1, got {self.rel_window}", "rel_window")
        return self

    def to_json(self) -> dict:
        return {
            "node_dim": self.node_dim,
            "gcn_layers": self.gcn_layers,
            "attention_dim": self.attention_dim,
            "encoder_dim": self.encoder_dim,
            "encoder_layers": self.encoder_layers,
            "max_seq_len": self.max_seq_len,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "top_docs": self.top_docs,
            "top_sentences": self.top_sentences,
            "seed": self.seed,
            "rel_window": self.rel_window,
            "weight_decay": self.weight_decay,
            "stage1_epochs": self.stage1_epochs,
            "stage2_epochs": self.stage2_epochs,
            "tied_gcn": self.tied_gcn,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Config":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}", "config")
        return cls(**obj).validate()


def load_config(path: str | Path) -> Config:
    """Read a config file: JSON object, or flat ``key=value`` lines."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return Config.from_json(json.loads(text))
    obj: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SchemaError(f"line {lineno}: expected key=value, got {line!r}", "config")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        fields = Config.__dataclass_fields__
        if key not in fields:
            raise SchemaError(f"line {lineno}: unknown config key {key!r}", key)
        kind = fields[key].type
        if kind == "bool":
            obj[key] = value.lower() in ("1", "true", "yes")
        elif kind == "float":
            obj[key] = float(value)
        else:
            obj[key] = int(value)
    return Config(**obj).validate()


# ---------------------------------------------------------------------------
# SRL document schema (version 1)
# ---------------------------------------------------------------------------

def _expect(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field '{key}'", f"{where}.{key}" if where else key)
    return obj[key]


def _parse_sentence(obj: dict, where: str) -> Sentence:
    sentence_id = str(_expect(obj, "sentence_id", where))
    source_doc = str(_expect(obj, "source_doc", where))
    raw_tokens = _expect(obj, "tokens", where)
    if not isinstance(raw_tokens, list):
        raise SchemaError("tokens must be a list of strings", f"{where}.tokens")
    tokens = []
    for i, t in enumerate(raw_tokens):
        if not isinstance(t, str) or not t:
            raise SchemaError(f"token {i} must be a non-empty string", f"{where}.tokens[{i}]")
        tokens.append(Token(text=t, index=i))
    n = len(tokens)
    tuples = []
    raw_tuples = _expect(obj, "tuples", where)
    for ti, rt in enumerate(raw_tuples):
        twhere = f"{where}.tuples[{ti}]"
        tuple_id = str(_expect(rt, "tuple_id", twhere))
        args = []
        verb_count = 0
        for ai, ra in enumerate(_expect(rt, "arguments", twhere)):
            awhere = f"{twhere}.arguments[{ai}]"
            role_str = _expect(ra, "role", awhere)
            try:
                role = Role(role_str)
            except ValueError:
                raise SchemaError(f"unknown role {role_str!r}", f"{awhere}.role") from None
            span = _expect(ra, "span", awhere)
            if (not isinstance(span, list)) or len(span) != 2:
                raise SchemaError("span must be [start, end]", f"{awhere}.span")
            start, end = int(span[0]), int(span[1])
            if not (0 <= start < end <= n):
                raise SchemaError(
                    f"token_span out of range: [{start}, {end}) in sentence of {n} tokens",
                    f"{awhere}.span",
                )
            text = str(_expect(ra, "text", awhere))
            joined = " ".join(t.text for t in tokens[start:end])
            if text != joined:
                raise SchemaError(
                    f"text {text!r} does not match span tokens {joined!r}", f"{awhere}.text"
                )
            if role is Role.VERB:
                verb_count += 1
            args.append(SrlArgument(role=role, text=text, span=(start, end)))
        if verb_count != 1:
            raise SchemaError(
                f"tuple must contain exactly one verb argument, found {verb_count}",
                f"{twhere}.arguments",
            )
        tuples.append(SrlTuple(tuple_id=tuple_id, sentence_id=sentence_id, arguments=tuple(args)))
    return Sentence(
        sentence_id=sentence_id,
        source_doc=source_doc,
        tokens=tuple(tokens),
        tuples=tuple(tuples),
    )


def parse_srl_document(json_text: str) -> EvidenceSet:
    """Parse and fully validate a version-1 SRL document."""
    try:
        obj = json.loads(json_text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at byte {e.pos}: {e.msg}", e.pos) from None
    return evidence_set_from_json(obj)


def evidence_set_from_json(obj: dict) -> EvidenceSet:
    version = _expect(obj, "version", "")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {version!r}", "version")
    claim = _parse_sentence(_expect(obj, "claim", ""), "claim")
    evidence = []
    seen_ids = {claim.sentence_id}
    for i, raw in enumerate(_expect(obj, "evidence", "")):
        s = _parse_sentence(raw, f"evidence[{i}]")
        if s.sentence_id in seen_ids:
            raise SchemaError(
                f"duplicate sentence_id {s.sentence_id!r}", f"evidence[{i}].sentence_id"
            )
        seen_ids.add(s.sentence_id)
        evidence.append(s)
    return EvidenceSet(claim=claim, evidence=tuple(evidence))


def sentence_to_json(s: Sentence) -> dict:
    return {
        "sentence_id": s.sentence_id,
        "source_doc": s.source_doc,
        "tokens": [t.text for t in s.tokens],
        "tuples": [
            {
                "tuple_id": t.tuple_id,
                "arguments": [
                    {"role": a.role.value, "text": a.text, "span": [a.span[0], a.span[1]]}
                    for a in t.arguments
                ],
            }
            for t in s.tuples
        ],
    }


def evidence_set_to_json(es: EvidenceSet) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "claim": sentence_to_json(es.claim),
        "evidence": [sentence_to_json(s) for s in es.evidence],
    }


def serialize_srl_document(es: EvidenceSet) -> str:
    return json.dumps(evidence_set_to_json(es), sort_keys=True)


# ---------------------------------------------------------------------------
# Dataset JSONL
# ---------------------------------------------------------------------------

# Shared-task label spellings accepted as aliases of the canonical enum.
_LABEL_ALIASES = {
    "SUPPORTS": Label.SUPPORTED,
    "REFUTES": Label.REFUTED,
    "NOT ENOUGH INFO": Label.NEI,
}


def _parse_label(label_str, where: str) -> Label:
    try:
        return Label(label_str)
    except ValueError:
        if label_str in _LABEL_ALIASES:
            return _LABEL_ALIASES[label_str]
        raise SchemaError(f"unknown label {label_str!r}", f"{where}.label") from None


def instance_from_json(obj: dict, where: str = "") -> Instance:
    if "instance_id" in obj:
        instance_id = str(obj["instance_id"])
    else:
        instance_id = str(_expect(obj, "id", where))
    claim = str(_expect(obj, "claim", where))
    label = _parse_label(_expect(obj, "label", where), where)
    groups = []
    if "evidence_groups" in obj:
        for gi, group in enumerate(obj["evidence_groups"]):
            pairs = set()
            for pi, pair in enumerate(group):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise SchemaError(
                        "evidence item must be [doc, index]",
                        f"{where}.evidence_groups[{gi}][{pi}]",
                    )
                pairs.add((str(pair[0]), int(pair[1])))
            groups.append(frozenset(pairs))
    else:
        # shared-task layout: groups of [annotation_id, evidence_id, page, index]
        for group in _expect(obj, "evidence", where):
            pairs = {(str(item[2]), int(item[3]))
                     for item in group if item[2] is not None}
            if pairs:
                groups.append(frozenset(pairs))
    return Instance(
        instance_id=instance_id,
        claim_text=claim,
        label=label,
        gold_evidence_groups=tuple(groups),
    )


def instance_to_json(inst: Instance) -> dict:
    return {
        "instance_id": inst.instance_id,
        "claim": inst.claim_text,
        "label": inst.label.value,
        "evidence_groups": [
            [[doc, idx] for doc, idx in sorted(group)]
            for group in inst.gold_evidence_groups
        ],
    }


def load_dataset(path: str | Path) -> list[Instance]:
    """Read a JSONL dataset, one instance per line. Order is preserved."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    instances = []
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"line {lineno}: malformed JSON: {e.msg}", e.pos) from None
            try:
                instances.append(instance_from_json(obj))
            except SchemaError as e:
                raise SchemaError(f"line {lineno}: {e}", e.field) from None
    return instances


def write_dataset(instances: list[Instance], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for inst in instances:
            f.write(json.dumps(instance_to_json(inst), sort_keys=True) + "\n")


def prediction_to_json(p: Prediction) -> dict:
    return {
        "instance_id": p.instance_id,
        "predicted_label": p.predicted_label.value,
        "probabilities": list(p.probabilities),
        "predicted_evidence": [[doc, idx] for doc, idx in p.predicted_evidence],
    }


def prediction_from_json(obj: dict, where: str = "") -> Prediction:
    label = Label(_expect(obj, "predicted_label", where))
    probs = tuple(float(x) for x in obj.get("probabilities", (0.0, 0.0, 0.0)))
    ev = tuple((str(d), int(i)) for d, i in obj.get("predicted_evidence", []))
    return Prediction(
        instance_id=str(_expect(obj, "instance_id", where)),
        predicted_label=label,
        probabilities=probs,  # type: ignore[arg-type]
        predicted_evidence=ev,
    )


def load_predictions(path: str | Path) -> list[Prediction]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"predictions file not found: {path}")
    preds = []
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                preds.append(prediction_from_json(json.loads(line)))
            except json.JSONDecodeError as e:
                raise ParseError(f"line {lineno}: malformed JSON: {e.msg}", e.pos) from None
    return preds


def write_predictions(preds: list[Prediction], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for p in preds:
            f.write(json.dumps(prediction_to_json(p), sort_keys=True) + "\n")
