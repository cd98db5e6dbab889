"""Official evaluation: label accuracy, the combined label+evidence score, and
sentence-level evidence precision/recall/F1.

An instance counts toward the combined score when its label is correct and
either the gold label is NEI or some complete gold evidence group is covered
by the prediction. Evidence precision/recall are micro-averaged over non-NEI
instances against the union of gold-group sentences.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datamodel import Instance, Label, Prediction


@dataclass(frozen=True)
class EvalReport:
    label_accuracy: float
    fever_score: float
    evidence_precision: float
    evidence_recall: float
    evidence_f1: float
    confusion: dict  # gold label -> predicted label -> count
    total: int

    def to_json(self) -> dict:
        return {
            "label_accuracy": self.label_accuracy,
            "fever_score": self.fever_score,
            "evidence_precision": self.evidence_precision,
            "evidence_recall": self.evidence_recall,
            "evidence_f1": self.evidence_f1,
            "confusion": self.confusion,
            "total": self.total,
        }


def evidence_correct(gold_groups, predicted_evidence) -> bool:
    """True iff some gold group is fully contained in the predicted sentences.

    Empty gold groups are vacuously false (a non-NEI instance with missing
    annotation can never score).
    """
    predicted = set(predicted_evidence)
    return any(group and set(group) <= predicted for group in gold_groups)


def instance_correct(gold_label: Label, pred_label: Label,
                     gold_groups, predicted_evidence) -> bool:
    if gold_label != pred_label:
        return False
    return gold_label is Label.NEI or evidence_correct(gold_groups, predicted_evidence)


def evaluate(predictions: list[Prediction], gold: list[Instance], k_ev: int = 5) -> EvalReport:
    """Score predictions against gold instances, matched by instance_id.

    Predicted evidence is truncated to the first k_ev items before scoring.
    """
    by_id: dict[str, Prediction] = {}
    for p in predictions:
        if p.instance_id in by_id:
            raise ValueError(f"duplicate prediction for instance {p.instance_id!r}")
        by_id[p.instance_id] = p
    gold_ids = {inst.instance_id for inst in gold}
    missing = sorted(gold_ids - set(by_id))
    extra = sorted(set(by_id) - gold_ids)
    if missing or extra:
        raise ValueError(
            f"predictions do not match gold instances; missing={missing} extra={extra}"
        )
    if not gold:
        raise ValueError("no gold instances to evaluate")

    confusion = {g.value: {p.value: 0 for p in Label} for g in Label}
    correct_labels = 0
    correct_instances = 0
    ev_hits = 0
    ev_predicted = 0
    ev_gold = 0
    for inst in gold:
        pred = by_id[inst.instance_id]
        predicted_evidence = list(pred.predicted_evidence)[:k_ev]
        confusion[inst.label.value][pred.predicted_label.value] += 1
        if inst.label == pred.predicted_label:
            correct_labels += 1
        if instance_correct(inst.label, pred.predicted_label,
                            inst.gold_evidence_groups, predicted_evidence):
            correct_instances += 1
        if inst.label is not Label.NEI:
            gold_union = set().union(*inst.gold_evidence_groups) if inst.gold_evidence_groups else set()
            ev_hits += len(set(predicted_evidence) & gold_union)
            ev_predicted += len(predicted_evidence)
            ev_gold += len(gold_union)

    n = len(gold)
    precision = ev_hits / ev_predicted if ev_predicted else 0.0
    recall = ev_hits / ev_gold if ev_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(
        label_accuracy=correct_labels / n,
        fever_score=correct_instances / n,
        evidence_precision=precision,
        evidence_recall=recall,
        evidence_f1=f1,
        confusion=confusion,
        total=n,
    )
