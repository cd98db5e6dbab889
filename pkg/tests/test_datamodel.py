import json

import pytest
from hypothesis import given, strategies as st

from evigraph.datamodel import (
    Config,
    Instance,
    Label,
    ParseError,
    SchemaError,
    instance_to_json,
    load_config,
    load_dataset,
    parse_srl_document,
    serialize_srl_document,
    tokenize,
    write_dataset,
)

MINIMAL_DOC = {
    "version": 1,
    "claim": {
        "sentence_id": "c",
        "source_doc": "claim",
        "tokens": ["Cats", "purr"],
        "tuples": [
            {
                "tuple_id": "t0",
                "arguments": [
                    {"role": "argument", "text": "Cats", "span": [0, 1]},
                    {"role": "verb", "text": "purr", "span": [1, 2]},
                ],
            }
        ],
    },
    "evidence": [
        {
            "sentence_id": "s0",
            "source_doc": "doc",
            "tokens": ["Cats", "purr", "loudly"],
            "tuples": [
                {
                    "tuple_id": "t0",
                    "arguments": [
                        {"role": "argument", "text": "Cats", "span": [0, 1]},
                        {"role": "verb", "text": "purr", "span": [1, 2]},
                        {"role": "argument", "text": "loudly", "span": [2, 3]},
                    ],
                }
            ],
        }
    ],
}


class TestTokenize:
    def test_basic(self):
        assert tokenize("Los Angeles County") == ["los", "angeles", "county"]

    def test_empty(self):
        assert tokenize("") == []

    def test_golden_punctuation(self):
        # Hand-applied rule: lowercase, whitespace split, strip edge punctuation.
        assert tokenize("Winter's Tale is a 1983 novel.") == [
            "winter's", "tale", "is", "a", "1983", "novel",
        ]

    def test_pure_punctuation_token_vanishes(self):
        assert tokenize("wait ... what ?!") == ["wait", "what"]

    @given(st.text(max_size=60))
    def test_idempotent_on_joined_output(self, text):
        once = tokenize(text)
        assert tokenize(" ".join(once)) == once


class TestSrlParsing:
    def test_minimal_valid(self):
        es = parse_srl_document(json.dumps(MINIMAL_DOC))
        assert len(es.evidence) == 1
        assert len(es.evidence[0].tuples) == 1

    def test_span_out_of_range(self):
        doc = json.loads(json.dumps(MINIMAL_DOC))
        doc["evidence"][0]["tuples"][0]["arguments"][1]["span"] = [1, 9]
        with pytest.raises(SchemaError, match="token_span out of range") as exc:
            parse_srl_document(json.dumps(doc))
        assert "span" in exc.value.field

    def test_malformed_json_reports_offset(self):
        with pytest.raises(ParseError) as exc:
            parse_srl_document('{"version": 1, "claim": ')
        assert exc.value.offset >= 0

    def test_two_verbs_rejected(self):
        doc = json.loads(json.dumps(MINIMAL_DOC))
        doc["claim"]["tuples"][0]["arguments"][0]["role"] = "verb"
        with pytest.raises(SchemaError, match="exactly one verb"):
            parse_srl_document(json.dumps(doc))

    def test_text_must_match_span(self):
        doc = json.loads(json.dumps(MINIMAL_DOC))
        doc["claim"]["tuples"][0]["arguments"][0]["text"] = "Dogs"
        with pytest.raises(SchemaError, match="does not match span"):
            parse_srl_document(json.dumps(doc))

    def test_duplicate_sentence_id(self):
        doc = json.loads(json.dumps(MINIMAL_DOC))
        doc["evidence"][0]["sentence_id"] = "c"
        with pytest.raises(SchemaError, match="duplicate sentence_id"):
            parse_srl_document(json.dumps(doc))

    def test_fig3_fixture_shape(self, fig3_document):
        assert len(fig3_document.evidence) == 2
        total_tuples = sum(len(s.tuples) for s in fig3_document.evidence)
        assert total_tuples >= 2

    def test_round_trip(self, fig3_document):
        again = parse_srl_document(serialize_srl_document(fig3_document))
        assert again == fig3_document

    def test_round_trip_minimal(self):
        es = parse_srl_document(json.dumps(MINIMAL_DOC))
        assert parse_srl_document(serialize_srl_document(es)) == es


class TestDataset:
    def _instances(self):
        return [
            Instance("i0", "a claim", Label.SUPPORTED,
                     (frozenset({("d1", 0), ("d1", 1)}),)),
            Instance("i1", "another", Label.REFUTED, (frozenset({("d2", 3)}),)),
            Instance("i2", "third", Label.NEI, ()),
        ]

    def test_round_trip(self, tmp_path):
        path = tmp_path / "data.jsonl"
        instances = self._instances()
        write_dataset(instances, path)
        assert load_dataset(path) == instances

    def test_three_classes(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_dataset(self._instances(), path)
        loaded = load_dataset(path)
        assert [x.label for x in loaded] == [Label.SUPPORTED, Label.REFUTED, Label.NEI]

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        obj = instance_to_json(self._instances()[0])
        obj["label"] = "MAYBE"
        path.write_text(json.dumps(obj) + "\n")
        with pytest.raises(SchemaError, match="line 1.*unknown label"):
            load_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path / "nope.jsonl")

    def test_bad_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(instance_to_json(self._instances()[0]))
        path.write_text(good + "\n{broken\n")
        with pytest.raises(ParseError, match="line 2"):
            load_dataset(path)


class TestConfig:
    def test_defaults(self):
        cfg = Config()
        assert cfg.node_dim == 100
        assert cfg.learning_rate == 2e-6
        assert cfg.batch_size == 6
        assert cfg.top_docs == 10
        assert cfg.top_sentences == 5

    def test_desk_preset(self):
        cfg = Config.desk()
        assert cfg.learning_rate == 1e-3
        assert cfg.batch_size == 8

    def test_validation(self):
        with pytest.raises(SchemaError):
            Config(node_dim=0).validate()
        with pytest.raises(SchemaError):
            Config(learning_rate=0.0).validate()
        with pytest.raises(SchemaError):
            Config(max_seq_len=1).validate()

    def test_key_value_file(self, tmp_path):
        path = tmp_path / "conf.txt"
        path.write_text("node_dim = 32\nlearning_rate = 0.01\ntied_gcn = false\n")
        cfg = load_config(path)
        assert cfg.node_dim == 32
        assert cfg.learning_rate == 0.01
        assert cfg.tied_gcn is False

    def test_json_file(self, tmp_path):
        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"node_dim": 16, "seed": 3}))
        cfg = load_config(path)
        assert cfg.node_dim == 16 and cfg.seed == 3

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"nodes": 16}))
        with pytest.raises(SchemaError, match="unknown config key"):
            load_config(path)
