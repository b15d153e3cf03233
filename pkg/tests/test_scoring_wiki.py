import numpy as np
import pytest

from termrank.candidates import CandidateFilterConfig, collect_candidates
from termrank.errors import ConfigError, DataError, ParseError
from termrank.scoring.wiki import (EmbeddingModel, KeyConceptConfig,
                                   LinkStatsTable, extract_key_concepts,
                                   load_embeddings, load_link_stats,
                                   score_key_concept_relatedness,
                                   score_link_probability,
                                   score_wiki_presence)

import _oracles as oracle
from conftest import build_candidate_set, make_corpus, nn_sentence, \
    random_corpus

TOL = 1e-9


class TestLinkStatsLoader:
    def test_basic_row(self, tmp_path):
        path = tmp_path / "links.tsv"
        path.write_text("neural_network\t5\t100\n")
        table = load_link_stats(path)
        assert table.entries["neural_network"] == (5, 100)

    def test_h_above_w(self, tmp_path):
        path = tmp_path / "links.tsv"
        path.write_text("term\t10\t5\n")
        with pytest.raises(ParseError, match="links.tsv:1"):
            load_link_stats(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "links.tsv"
        path.write_text("term\tfive\t10\n")
        with pytest.raises(ParseError):
            load_link_stats(path)


class TestEmbeddingLoader:
    def test_round_vectors(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("2 3\nalpha 1 0 0\nbeta 0.5 0.5 0\n")
        emb = load_embeddings(path)
        assert emb.dimension == 3
        np.testing.assert_allclose(emb.vectors["beta"], [0.5, 0.5, 0.0])

    def test_dimension_mismatch(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("1 3\nalpha 1 0\n")
        with pytest.raises(ParseError, match="vec.txt:2"):
            load_embeddings(path)

    def test_empty_body_is_valid(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("0 4\n")
        emb = load_embeddings(path)
        assert "anything" not in emb

    def test_nan_rejected(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("1 2\nalpha nan 1\n")
        with pytest.raises(ParseError, match="NaN"):
            load_embeddings(path)


class TestPresenceAndLinkProbability:
    def _cset(self):
        return build_candidate_set({
            "alpha": (2, {"d1": 2}),
            "beta": (2, {"d1": 2}),
            "gamma": (2, {"d1": 2}),
        })

    def test_presence(self):
        links = LinkStatsTable({"alpha": (5, 10), "beta": (0, 10)})
        scores = score_wiki_presence(self._cset(), links).scores
        assert scores == {"alpha": 1.0, "beta": 0.0, "gamma": 0.0}

    def test_link_probability_above_threshold(self):
        links = LinkStatsTable({"alpha": (5, 100)})
        assert score_link_probability(self._cset(), links).scores["alpha"] == \
            pytest.approx(0.05, abs=TOL)

    def test_link_probability_below_threshold(self):
        links = LinkStatsTable({"alpha": (1, 100)})
        assert score_link_probability(self._cset(), links).scores["alpha"] == 0.0

    def test_absent_term_scores_zero(self):
        links = LinkStatsTable({})
        assert score_link_probability(self._cset(), links).scores["beta"] == 0.0

    def test_lowering_threshold_is_monotone(self, rng):
        cset = self._cset()
        entries = {c: (int(rng.integers(0, 10)), 100) for c in cset.candidates}
        high = score_link_probability(cset, LinkStatsTable(entries, 0.05)).scores
        low = score_link_probability(cset, LinkStatsTable(entries, 0.01)).scores
        for c in high:
            if high[c] > 0:
                assert low[c] == high[c]

    def test_values_in_threshold_band(self, rng):
        cset = self._cset()
        entries = {c: (int(rng.integers(0, 101)), 100) for c in cset.candidates}
        table = score_link_probability(cset, LinkStatsTable(entries))
        for value in table.scores.values():
            assert value == 0.0 or 0.018 <= value <= 1.0


def make_embeddings(vectors):
    dim = len(next(iter(vectors.values())))
    return EmbeddingModel(dim, {k: np.asarray(v, dtype=np.float64)
                                for k, v in vectors.items()})


class TestKeyConcepts:
    def test_rule_trace(self):
        # "alpha_beta" occurs 3 times early in the document and is in vocab
        sentences = [nn_sentence("alpha", "beta", "gamma")] * 3
        corpus = make_corpus({"d1": sentences})
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=2))
        emb = make_embeddings({"alpha_beta": [1, 0], "gamma": [0, 1]})
        concepts = extract_key_concepts(corpus, cset, emb, KeyConceptConfig(per_doc=1))
        # rank score: alpha_beta = 2 words * 3 occurrences = 6 > gamma's 1*3
        assert concepts == [("alpha_beta", 1)]

    def test_single_occurrence_ineligible(self):
        corpus = make_corpus({
            "d1": [nn_sentence("alpha", "beta"), nn_sentence("alpha",)],
        })
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=1))
        emb = make_embeddings({"alpha": [1, 0], "beta": [0, 1]})
        concepts = extract_key_concepts(corpus, cset, emb)
        assert ("beta", 1) not in concepts
        assert ("alpha", 1) in concepts

    def test_first_words_limit(self):
        filler = ["omega"] * 30
        late = nn_sentence(*(filler + ["kappa"]), )
        corpus = make_corpus({"d1": [late, nn_sentence("kappa",)]})
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=2))
        emb = make_embeddings({"kappa": [1.0], "omega": [0.5]})
        cfg = KeyConceptConfig(first_words_limit=20)
        concepts = extract_key_concepts(corpus, cset, emb, cfg)
        assert all(c != "kappa" for c, _ in concepts)
        # raising the limit past the first occurrence flips eligibility
        cfg = KeyConceptConfig(first_words_limit=32)
        concepts = extract_key_concepts(corpus, cset, emb, cfg)
        assert ("kappa", 1) in concepts

    def test_matches_oracle_on_random_corpora(self, rng):
        for _ in range(10):
            corpus = random_corpus(rng, n_docs=int(rng.integers(2, 6)),
                                   sentences_per_doc=3, sentence_len=6)
            cfg = CandidateFilterConfig(min_term_frequency=2)
            cset = collect_candidates(corpus, cfg)
            if not cset.candidates:
                continue
            vocab = [c for i, c in enumerate(sorted(cset.candidates))
                     if i % 2 == 0]
            emb = make_embeddings(
                {c: rng.normal(size=3) for c in vocab} or {"x": [1.0, 0, 0]})
            kc = KeyConceptConfig(per_doc=int(rng.integers(1, 4)),
                                  total=10, k=1)
            got = extract_key_concepts(corpus, cset, emb, kc)
            stats = {c: {"occurrences": tc.occurrences}
                     for c, tc in cset.candidates.items()}
            expected = oracle.key_concepts(
                corpus, stats, set(emb.vectors), kc.per_doc, kc.total,
                kc.first_words_limit)
            assert got == expected


class TestRelatedness:
    def test_top_k_mean(self):
        emb = make_embeddings({
            "cand": [1, 0, 0],
            "k1": [0.9, np.sqrt(1 - 0.81), 0],   # cos = 0.9
            "k2": [0.7, np.sqrt(1 - 0.49), 0],   # cos = 0.7
            "k3": [0.1, np.sqrt(1 - 0.01), 0],   # cos = 0.1
        })
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        keys = [("k1", 3), ("k2", 2), ("k3", 1)]
        table = score_key_concept_relatedness(cset, emb, keys,
                                              KeyConceptConfig(k=2))
        assert table.scores["cand"] == pytest.approx(0.8, abs=TOL)

    def test_missing_candidate_scores_zero(self):
        emb = make_embeddings({"k1": [1, 0]})
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        table = score_key_concept_relatedness(cset, emb, [("k1", 1)],
                                              KeyConceptConfig(k=1))
        assert table.scores["cand"] == 0.0

    def test_k_one_is_max_cosine(self, rng):
        names = [f"k{i}" for i in range(5)]
        emb = make_embeddings({n: rng.normal(size=4) for n in names}
                              | {"cand": rng.normal(size=4)})
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        keys = [(n, 1) for n in names]
        table = score_key_concept_relatedness(cset, emb, keys,
                                              KeyConceptConfig(k=1))
        best = max(oracle.cosine(emb.vectors["cand"], emb.vectors[n])
                   for n in names)
        assert table.scores["cand"] == pytest.approx(best, abs=TOL)

    def test_zero_vector_cosine_is_zero(self):
        emb = make_embeddings({"cand": [0.0, 0.0], "k1": [1.0, 0.0]})
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        table = score_key_concept_relatedness(cset, emb, [("k1", 1)],
                                              KeyConceptConfig(k=1))
        assert table.scores["cand"] == 0.0

    def test_k_larger_than_keys_rejected(self):
        emb = make_embeddings({"k1": [1.0, 0.0]})
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        with pytest.raises(ConfigError):
            score_key_concept_relatedness(cset, emb, [("k1", 1)],
                                          KeyConceptConfig(k=2, total=2))

    def test_empty_keys_rejected(self):
        emb = make_embeddings({"k1": [1.0, 0.0]})
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        with pytest.raises(DataError):
            score_key_concept_relatedness(cset, emb, [], KeyConceptConfig(k=1))

    def test_matches_oracle(self, rng):
        for _ in range(30):
            dim = int(rng.integers(2, 6))
            names = [f"k{i}" for i in range(int(rng.integers(2, 8)))]
            vectors = {n: rng.normal(size=dim) for n in names}
            cands = {}
            for i in range(int(rng.integers(1, 6))):
                c = f"cand{i}"
                cands[c] = (2, {"d1": 2})
                if rng.random() < 0.8:
                    vectors[c] = rng.normal(size=dim)
            emb = make_embeddings(vectors)
            cset = build_candidate_set(cands)
            k = int(rng.integers(1, len(names) + 1))
            keys = [(n, 1) for n in names]
            table = score_key_concept_relatedness(
                cset, emb, keys, KeyConceptConfig(k=k, total=len(names)))
            for c in cands:
                if c not in emb.vectors:
                    assert table.scores[c] == 0.0
                else:
                    expected = oracle.sim_k(
                        emb.vectors[c], [emb.vectors[n] for n in names], k)
                    assert table.scores[c] == pytest.approx(expected, abs=TOL)

    def test_scores_within_cosine_bounds(self, rng):
        names = [f"k{i}" for i in range(4)]
        vectors = {n: rng.normal(size=3) for n in names}
        vectors["cand"] = rng.normal(size=3)
        emb = make_embeddings(vectors)
        cset = build_candidate_set({"cand": (2, {"d1": 2})})
        table = score_key_concept_relatedness(
            cset, emb, [(n, 1) for n in names], KeyConceptConfig(k=3, total=4))
        assert -1.0 - TOL <= table.scores["cand"] <= 1.0 + TOL
