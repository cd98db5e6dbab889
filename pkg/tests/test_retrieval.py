import math

import numpy as np
import pytest

from evigraph.retrieval import (
    Document,
    load_corpus,
    retrieve_documents,
    score_evidence,
    select_evidence,
)


def doc(doc_id, title, sentences=()):
    return Document(doc_id=doc_id, title=title, sentences=tuple(sentences))


class TestRetrieveDocuments:
    def test_overlap_ranks_first(self):
        corpus = [doc("d2", "Paris"), doc("d1", "1992 Los Angeles riots")]
        got = retrieve_documents("Rodney King riots occurred in Los Angeles",
                                 corpus, m=2)
        # hand counts: 3 overlapping title tokens vs 0
        assert got[0] == "d1"

    def test_no_overlap_returns_lowest_ids(self, caplog):
        corpus = [doc("b", "xxx"), doc("a", "yyy"), doc("c", "zzz")]
        with caplog.at_level("WARNING"):
            got = retrieve_documents("nothing matches here", corpus, m=2)
        assert got == ["a", "b"]
        assert any("no document title overlaps" in r.message for r in caplog.records)

    def test_m_larger_than_corpus(self):
        corpus = [doc("a", "alpha"), doc("b", "beta")]
        assert len(retrieve_documents("alpha beta", corpus, m=10)) == 2

    def test_empty_corpus(self):
        assert retrieve_documents("anything", [], m=5) == []

    def test_title_in_claim_bonus_breaks_overlap_tie(self):
        corpus = [doc("a", "king riots"), doc("b", "riots king")]
        got = retrieve_documents("the king riots happened", corpus, m=2)
        assert got[0] == "a"  # contiguous in the claim

    def test_deterministic_tie_break_by_doc_id(self):
        corpus = [doc("z", "same title"), doc("a", "same title")]
        assert retrieve_documents("same title indeed", corpus, m=2) == ["a", "z"]


class TestScoreEvidence:
    def test_identical(self):
        assert score_evidence("Los Angeles riots", "Los Angeles riots") == 1.0

    def test_disjoint(self):
        assert score_evidence("cats purr", "dogs bark") == 0.0

    def test_hand_ratio(self):
        claim = "one two three four"
        sentence = "one two three aa bb cc dd ee ff"
        assert math.isclose(score_evidence(claim, sentence), 3 / 6)

    def test_empty_side_scores_zero(self):
        assert score_evidence("", "words here") == 0.0
        assert score_evidence("...", "words here") == 0.0


class TestSelectEvidence:
    def test_single_sentence_always_selected(self):
        docs = [doc("d", "title", ["completely unrelated text"])]
        ranked = select_evidence("some claim", docs, k=5)
        assert ranked.pairs() == [("d", 0)]

    def test_gold_with_overlap_ranks_first(self):
        docs = [
            doc("gold", "g", ["Rodney King riots occurred in Los Angeles County"]),
            doc("noise1", "n1", ["the sea is deep"]),
            doc("noise2", "n2", ["violets are blue"]),
        ]
        ranked = select_evidence("Rodney King riots occurred in Los Angeles",
                                 docs, k=2)
        assert ranked.pairs()[0] == ("gold", 0)

    def test_exact_ties_use_doc_then_index(self):
        docs = [
            doc("b", "b", ["same words", "same words"]),
            doc("a", "a", ["same words"]),
        ]
        ranked = select_evidence("same words", docs, k=3)
        assert ranked.pairs() == [("a", 0), ("b", 0), ("b", 1)]

    def test_prefix_consistency_under_k_growth(self):
        rng = np.random.default_rng(21)
        vocab = ["ash", "birch", "cedar", "dell", "elm", "fen", "gorse"]
        docs = []
        for d in range(4):
            sentences = [" ".join(rng.choice(vocab, size=5)) for _ in range(4)]
            docs.append(doc(f"d{d}", f"t{d}", sentences))
        claim = "ash birch cedar"
        small = select_evidence(claim, docs, k=3).items
        big = select_evidence(claim, docs, k=7).items
        assert big[:3] == small

    def test_no_sentences(self):
        assert select_evidence("claim", [doc("d", "t", [])], k=5).items == ()


class TestCorpusIO:
    def test_round_trip(self, tmp_path):
        from evigraph.synthdata import write_corpus

        docs = [doc("a", "alpha", ["one", "two"]), doc("b", "beta", ["three"])]
        path = tmp_path / "corpus.jsonl"
        write_corpus(docs, path)
        assert load_corpus(path) == docs

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_corpus(tmp_path / "none.jsonl")


class TestTrainedScorer:
    def test_interface_and_overfit(self):
        from evigraph.datamodel import Config
        from evigraph.retrieval import train_scorer, select_evidence

        cfg = Config(node_dim=8, attention_dim=8, encoder_dim=16, encoder_layers=1,
                     rel_window=4, max_seq_len=48, learning_rate=3e-3, batch_size=4,
                     seed=5)
        pairs = [
            ("Alric was born in Marston", "Alric was born in Marston"),
            ("Vera works as a pilot", "Vera works as a pilot"),
            ("Quorin is located in Corvia", "Quorin is located in Corvia"),
        ]
        pool = [gold for _, gold in pairs] + [
            "unrelated words entirely",
            "the weather was mild",
            "a stone wall stood",
        ]
        scorer = train_scorer(pairs, pool, cfg, epochs=12)
        for claim, gold in pairs:
            gold_score = scorer.score(claim, gold)
            assert 0.0 <= gold_score <= 1.0
            junk = scorer.score(claim, "the weather was mild")
            assert gold_score > junk, (claim, gold_score, junk)

    def test_pluggable_into_select_evidence(self):
        from evigraph.datamodel import Config
        from evigraph.retrieval import train_scorer

        cfg = Config(node_dim=8, attention_dim=8, encoder_dim=16, encoder_layers=1,
                     rel_window=4, max_seq_len=48, learning_rate=3e-3, batch_size=4,
                     seed=5)
        pairs = [("Alric was born in Marston", "Alric was born in Marston")]
        pool = ["Alric was born in Marston", "dull sentence one", "dull sentence two"]
        scorer = train_scorer(pairs, pool, cfg, epochs=12)
        docs = [doc("d", "t", pool)]
        ranked = select_evidence("Alric was born in Marston", docs, k=1, scorer=scorer)
        assert ranked.pairs() == [("d", 0)]

    def test_empty_inputs_score_zero(self):
        from evigraph.datamodel import Config
        from evigraph.encoder import Vocab, init_encoder_params
        from evigraph.retrieval import TrainedScorer
        from evigraph.tensor import Parameters

        import numpy as np

        cfg = Config(node_dim=8, attention_dim=8, encoder_dim=16, encoder_layers=1,
                     rel_window=4, max_seq_len=48, learning_rate=1e-3)
        vocab = Vocab.build([["stub"]])
        params = Parameters(np.random.default_rng(0))
        init_encoder_params(params, vocab.size, cfg)
        params.create("scorer.W", (cfg.encoder_dim, 2))
        params.create("scorer.b", (2,))
        scorer = TrainedScorer(cfg, vocab, params)
        assert scorer.score("", "anything") == 0.0
