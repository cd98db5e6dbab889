import json
from collections import Counter

import pytest

from evigraph.datamodel import Label, load_dataset, parse_srl_document
from evigraph.graphs import build_graph
from evigraph.retrieval import select_evidence, retrieve_documents
from evigraph.synthdata import (
    build_corpus,
    city_of,
    country_of,
    generate,
    load_srl_map,
    write_synth,
)


@pytest.fixture(scope="module")
def data():
    return generate(n_train=30, n_dev=9, seed=7)


class TestGenerate:
    def test_counts_and_balance(self, data):
        assert len(data.train) == 30 and len(data.dev) == 9
        counts = Counter(i.label for i in data.train)
        assert counts[Label.SUPPORTED] == counts[Label.REFUTED] == counts[Label.NEI] == 10

    def test_every_instance_has_srl(self, data):
        for inst in list(data.train) + list(data.dev):
            assert inst.instance_id in data.srl

    def test_srl_validates_and_round_trips(self, data):
        from evigraph.datamodel import evidence_set_to_json

        for es in data.srl.values():
            text = json.dumps(evidence_set_to_json(es))
            assert parse_srl_document(text) == es

    def test_surface_statistics_identical_across_classes(self, data):
        # every instance has exactly one born, located, works, founded sentence
        for inst in data.train:
            es = data.srl[inst.instance_id]
            verbs = Counter(t.verb.text for s in es.evidence for t in s.tuples)
            assert verbs == {"born": 1, "located": 1, "works": 1, "founded": 1}, inst.label

    def test_label_semantics(self, data):
        for inst in list(data.train) + list(data.dev):
            es = data.srl[inst.instance_id]
            claim_tokens = es.claim.token_texts
            city = claim_tokens[4]
            claimed_country = claim_tokens[10]
            located = {s.tokens[0].text: s.tokens[4].text
                       for s in es.evidence if s.tokens[2].text == "located"}
            if inst.label is Label.NEI:
                assert city not in located
            elif inst.label is Label.SUPPORTED:
                assert located[city] == claimed_country
            else:
                assert located[city] != claimed_country

    def test_gold_groups(self, data):
        for inst in data.train:
            if inst.label is Label.NEI:
                assert inst.gold_evidence_groups == ()
            else:
                assert len(inst.gold_evidence_groups) == 1
                group = inst.gold_evidence_groups[0]
                refs = {(s.source_doc, int(s.sentence_id.split(":")[1]))
                        for s in data.srl[inst.instance_id].evidence}
                assert group <= refs  # gold is present in the evidence set

    def test_cross_edges_reflect_the_chain(self, data):
        # supported/refuted evidence links born(P, C) to located(C, K) through C;
        # NEI evidence shares no entities across sentences, so no cross edges
        for inst in data.train:
            g = build_graph(data.srl[inst.instance_id], "evidence")
            has_cross = any(e.kind == "cross_tuple" for e in g.edges)
            assert has_cross == (inst.label is not Label.NEI), inst.instance_id


class TestWorldConsistency:
    def test_corpus_contains_located_fact_for_every_city(self):
        corpus = {d.doc_id: d for d in build_corpus()}
        for inst_city in ("Marston", "Kelvane"):
            assert f"is located in {country_of(inst_city)}" in corpus[inst_city].sentences[0]

    def test_retrieval_finds_gold_documents(self, data):
        corpus = list(data.corpus)
        hits = 0
        for inst in data.train[:12]:
            got = set(retrieve_documents(inst.claim_text, corpus, m=10))
            person = inst.claim_text.split()[0]
            city = city_of(person)
            if person in got and city in got:
                hits += 1
        assert hits == 12

    def test_gold_sentence_selected_top5(self, data):
        corpus = list(data.corpus)
        for inst in data.train:
            if inst.label is Label.NEI:
                continue
            doc_ids = set(retrieve_documents(inst.claim_text, corpus, m=10))
            docs = [d for d in corpus if d.doc_id in doc_ids]
            top5 = set(select_evidence(inst.claim_text, docs, k=5).pairs())
            for group in inst.gold_evidence_groups:
                for ref in group:
                    assert ref in top5


class TestFiles:
    def test_write_and_reload(self, data, tmp_path):
        paths = write_synth(data, tmp_path)
        train = load_dataset(paths["train"])
        assert len(train) == 30
        srl = load_srl_map(paths["srl"])
        assert set(srl) == set(data.srl)
        assert srl[train[0].instance_id] == data.srl[train[0].instance_id]

    def test_byte_stable(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        write_synth(generate(12, 3, seed=5), a)
        write_synth(generate(12, 3, seed=5), b)
        for name in ("train.jsonl", "dev.jsonl", "srl.jsonl", "corpus.jsonl"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_different_seed_differs(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        write_synth(generate(12, 3, seed=5), a)
        write_synth(generate(12, 3, seed=6), b)
        assert (a / "train.jsonl").read_bytes() != (b / "train.jsonl").read_bytes()
