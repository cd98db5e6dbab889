"""Synthetic fact-checking world: templated claims with template-emitted SRL.

Claims assert a two-part chain, "P was born in C and C is located in K".
Evidence always contains the birth sentence plus distractors with the same
sentence-type mix (one born, one located, one occupation, one founded), so no
class is recognizable from surface statistics alone:

  SUPPORTED  the located sentence is about C and names the claim's country,
  REFUTED    the located sentence is about C but names a different country,
  NEI        the located sentence is about some other city, so the claim's
             second half is unverifiable.

Evidence order is shuffled so that chained sentences are rarely adjacent in
document order. SRL parses come straight from the templates, so no external
parser is needed anywhere in the pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datamodel import (
    EvidenceSet,
    Instance,
    Label,
    Role,
    Sentence,
    SrlArgument,
    SrlTuple,
    Token,
    evidence_set_from_json,
    evidence_set_to_json,
    instance_to_json,
)
from .retrieval import Document, document_to_json

PERSONS = (
    "Alric", "Brisa", "Cato", "Dalia", "Emrik", "Farah", "Goran", "Hilda",
    "Ivor", "Jana", "Kellan", "Lira", "Marek", "Nadia", "Orin", "Petra",
    "Quill", "Rosa", "Stellan", "Tovah", "Ulric", "Vera", "Wendel", "Xenia",
    "Yorick", "Zelda", "Ansel", "Beata", "Corin", "Delphine", "Edmund",
    "Freya", "Gideon", "Helga", "Isolde", "Jasper", "Katrin", "Leopold",
    "Mireille", "Nestor",
)
CITIES = (
    "Marston", "Veldora", "Quorin", "Tessane", "Brivale", "Norwick",
    "Ashford", "Larkspur", "Feldmoor", "Ostara", "Penrose", "Kelvane",
    "Drospool", "Ilverton", "Greymoor", "Suthwick",
)
COUNTRIES = (
    "Ardalia", "Bexland", "Corvia", "Drenmark", "Elvania", "Fenwick",
    "Galdora", "Holmsted", "Ingria", "Jutemark",
)
OCCUPATIONS = (
    "baker", "chemist", "glassblower", "mason", "pilot", "printer",
    "weaver", "cartographer",
)


def city_of(person: str) -> str:
    return CITIES[PERSONS.index(person) % len(CITIES)]


def country_of(city: str) -> str:
    return COUNTRIES[CITIES.index(city) % len(COUNTRIES)]


def occupation_of(person: str) -> str:
    return OCCUPATIONS[PERSONS.index(person) % len(OCCUPATIONS)]


def founding_year(city: str) -> str:
    return str(1800 + 7 * CITIES.index(city))


def _sentence(sentence_id: str, source_doc: str, tokens: list[str],
              tuples: list[tuple[str, list[tuple[Role, int, int]]]]) -> Sentence:
    token_objs = tuple(Token(text=t, index=i) for i, t in enumerate(tokens))
    tuple_objs = []
    for tuple_id, args in tuples:
        arguments = tuple(
            SrlArgument(role=role, text=" ".join(tokens[s:e]), span=(s, e))
            for role, s, e in args
        )
        tuple_objs.append(SrlTuple(tuple_id=tuple_id, sentence_id=sentence_id,
                                   arguments=arguments))
    return Sentence(sentence_id=sentence_id, source_doc=source_doc,
                    tokens=token_objs, tuples=tuple(tuple_objs))


def born_sentence(person: str, city: str) -> Sentence:
    tokens = [person, "was", "born", "in", city]
    return _sentence(
        f"{person}:0", person, tokens,
        [("t0", [(Role.ARGUMENT, 0, 1), (Role.VERB, 2, 3), (Role.LOCATION, 3, 5)])],
    )


def occupation_sentence(person: str) -> Sentence:
    tokens = [person, "works", "as", "a", occupation_of(person)]
    return _sentence(
        f"{person}:1", person, tokens,
        [("t0", [(Role.ARGUMENT, 0, 1), (Role.VERB, 1, 2), (Role.ARGUMENT, 2, 5)])],
    )


def located_sentence(city: str, country: str) -> Sentence:
    tokens = [city, "is", "located", "in", country]
    return _sentence(
        f"{city}:0", city, tokens,
        [("t0", [(Role.ARGUMENT, 0, 1), (Role.VERB, 2, 3), (Role.LOCATION, 3, 5)])],
    )


def founded_sentence(city: str) -> Sentence:
    tokens = [city, "was", "founded", "in", founding_year(city)]
    return _sentence(
        f"{city}:1", city, tokens,
        [("t0", [(Role.ARGUMENT, 0, 1), (Role.VERB, 2, 3), (Role.TEMPORAL, 3, 5)])],
    )


def claim_sentence(instance_id: str, person: str, city: str, country: str) -> Sentence:
    tokens = [person, "was", "born", "in", city, "and", city, "is", "located", "in", country]
    return _sentence(
        f"claim:{instance_id}", "claim", tokens,
        [
            ("t0", [(Role.ARGUMENT, 0, 1), (Role.VERB, 2, 3), (Role.LOCATION, 3, 5)]),
            ("t1", [(Role.ARGUMENT, 6, 7), (Role.VERB, 8, 9), (Role.LOCATION, 9, 11)]),
        ],
    )


def claim_text(person: str, city: str, country: str) -> str:
    return f"{person} was born in {city} and {city} is located in {country}."


@dataclass(frozen=True)
class SynthData:
    train: tuple[Instance, ...]
    dev: tuple[Instance, ...]
    srl: dict  # instance_id -> EvidenceSet
    corpus: tuple[Document, ...]


def _choice(rng: np.random.Generator, pool) -> str:
    return pool[int(rng.integers(len(pool)))]


def _choice_not(rng: np.random.Generator, pool, excluded: set) -> str:
    allowed = [x for x in pool if x not in excluded]
    return allowed[int(rng.integers(len(allowed)))]


def build_corpus() -> tuple[Document, ...]:
    docs = []
    for person in PERSONS:
        docs.append(Document(
            doc_id=person, title=person,
            sentences=(
                born_sentence(person, city_of(person)).text,
                occupation_sentence(person).text,
            ),
        ))
    for city in CITIES:
        docs.append(Document(
            doc_id=city, title=city,
            sentences=(
                located_sentence(city, country_of(city)).text,
                founded_sentence(city).text,
            ),
        ))
    for country in COUNTRIES:
        docs.append(Document(
            doc_id=country, title=country,
            sentences=(f"{country} is a country of the old federation",),
        ))
    return tuple(docs)


def _make_instance(i: int, rng: np.random.Generator) -> tuple[Instance, EvidenceSet]:
    label = (Label.SUPPORTED, Label.REFUTED, Label.NEI)[i % 3]
    instance_id = f"synth-{i:04d}"
    person = _choice(rng, PERSONS)
    city = city_of(person)
    true_country = country_of(city)

    if label is Label.SUPPORTED:
        claimed_country = true_country
    elif label is Label.REFUTED:
        claimed_country = _choice_not(rng, COUNTRIES, {true_country})
    else:
        claimed_country = _choice(rng, COUNTRIES)

    other_person = _choice_not(rng, PERSONS, {person})
    filler_city = _choice_not(rng, CITIES, {city})

    evidence = [
        born_sentence(person, city),
        occupation_sentence(other_person),
        founded_sentence(filler_city),
    ]
    if label is Label.NEI:
        extra_city = _choice_not(rng, CITIES, {city, filler_city})
        evidence.append(located_sentence(extra_city, country_of(extra_city)))
        groups: tuple = ()
    else:
        evidence.append(located_sentence(city, true_country))
        if label is Label.SUPPORTED:
            groups = (frozenset({(person, 0), (city, 0)}),)
        else:
            groups = (frozenset({(city, 0)}),)

    order = rng.permutation(len(evidence))
    evidence = [evidence[int(j)] for j in order]

    instance = Instance(
        instance_id=instance_id,
        claim_text=claim_text(person, city, claimed_country),
        label=label,
        gold_evidence_groups=groups,
    )
    es = EvidenceSet(
        claim=claim_sentence(instance_id, person, city, claimed_country),
        evidence=tuple(evidence),
    )
    return instance, es


def generate(n_train: int = 300, n_dev: int = 60, seed: int = 7) -> SynthData:
    """Deterministic dataset: balanced classes, shuffled evidence, fixed world."""
    rng = np.random.default_rng(seed)
    train: list[Instance] = []
    dev: list[Instance] = []
    srl: dict = {}
    for i in range(n_train + n_dev):
        instance, es = _make_instance(i, rng)
        srl[instance.instance_id] = es
        (train if i < n_train else dev).append(instance)
    return SynthData(train=tuple(train), dev=tuple(dev), srl=srl,
                     corpus=build_corpus())


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def write_srl_map(srl: dict, path: str | Path) -> None:
    """JSONL of {"instance_id", "document"} with canonical SRL documents."""
    with Path(path).open("w", encoding="utf-8") as f:
        for instance_id in sorted(srl):
            record = {"instance_id": instance_id,
                      "document": evidence_set_to_json(srl[instance_id])}
            f.write(json.dumps(record, sort_keys=True) + "\n")


def load_srl_map(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"SRL file not found: {path}")
    srl = {}
    with path.open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            srl[str(obj["instance_id"])] = evidence_set_from_json(obj["document"])
    return srl


def write_corpus(corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for doc in corpus:
            f.write(json.dumps(document_to_json(doc), sort_keys=True) + "\n")


def write_synth(data: SynthData, out_dir: str | Path) -> dict:
    """Write train/dev/srl/corpus files; returns the path map."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "train": out / "train.jsonl",
        "dev": out / "dev.jsonl",
        "srl": out / "srl.jsonl",
        "corpus": out / "corpus.jsonl",
    }
    with paths["train"].open("w", encoding="utf-8") as f:
        for inst in data.train:
            f.write(json.dumps(instance_to_json(inst), sort_keys=True) + "\n")
    with paths["dev"].open("w", encoding="utf-8") as f:
        for inst in data.dev:
            f.write(json.dumps(instance_to_json(inst), sort_keys=True) + "\n")
    write_srl_map(data.srl, paths["srl"])
    write_corpus(data.corpus, paths["corpus"])
    return {k: str(v) for k, v in paths.items()}
