import math

import pytest

from termrank.candidates import CandidateFilterConfig, collect_candidates
from termrank.corpus import AnnotatedCorpus
from termrank.scoring.context import (DomainCoherenceConfig,
                                      build_context_stats, npmi,
                                      score_domain_coherence)

import _oracles as oracle
from conftest import make_corpus, make_sentence, nn_sentence, random_corpus

TOL = 1e-9


class TestNpmi:
    def test_hand_value(self):
        assert npmi(0.1, 0.2, 0.25) == pytest.approx(
            math.log(2) / -math.log(0.1), abs=TOL)
        assert npmi(0.1, 0.2, 0.25) == pytest.approx(0.3010299957, abs=1e-9)

    def test_independent_pair_is_zero(self):
        assert npmi(0.06, 0.2, 0.3) == pytest.approx(0.0, abs=TOL)

    def test_perfect_dependence_is_one(self):
        assert npmi(0.4, 0.4, 0.4) == pytest.approx(1.0, abs=TOL)

    def test_joint_probability_one_convention(self):
        assert npmi(1.0, 1.0, 1.0) == 0.0

    def test_symmetry(self, rng):
        for _ in range(50):
            p_t, p_w = rng.uniform(0.01, 0.9, size=2)
            p_tw = rng.uniform(0.001, min(p_t, p_w))
            assert npmi(p_tw, p_t, p_w) == pytest.approx(
                npmi(p_tw, p_w, p_t), abs=TOL)

    def test_range_for_consistent_inputs(self, rng):
        for _ in range(100):
            p_t, p_w = rng.uniform(0.05, 0.8, size=2)
            p_tw = rng.uniform(1e-6, min(p_t, p_w))
            value = npmi(p_tw, p_t, p_w)
            assert -1.0 - TOL <= value <= 1.0 + TOL


class TestContextStats:
    def test_window_respects_sentence_boundaries(self):
        corpus = make_corpus({
            "d1": [nn_sentence("alpha", "beta"), nn_sentence("gamma", "alpha", "beta")],
        })
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=2))
        stats = build_context_stats(cset, corpus, window=5)
        # "gamma" precedes the second occurrence only; never crosses sentences
        assert stats.cooccurrence.get(("alpha", "gamma"), 0) == 1
        assert stats.cooccurrence.get(("alpha_beta", "gamma"), 0) == 1

    def test_window_size_limits_pairs(self):
        lemmas = ["alpha", "omega", "omega", "omega", "beta"]
        corpus = make_corpus({"d1": [nn_sentence(*lemmas)] * 2})
        cset = collect_candidates(corpus, CandidateFilterConfig(
            ngram_orders=(1,), min_term_frequency=2))
        stats = build_context_stats(cset, corpus, window=1)
        assert stats.cooccurrence.get(("alpha", "omega"), 0) == 2
        assert stats.cooccurrence.get(("alpha", "beta"), 0) == 0

    def test_candidate_tokens_excluded_from_own_context(self):
        corpus = make_corpus({"d1": [nn_sentence("alpha", "beta")] * 2})
        cset = collect_candidates(corpus, CandidateFilterConfig(
            min_term_frequency=2))
        stats = build_context_stats(cset, corpus, window=5)
        assert ("alpha_beta", "alpha") not in stats.cooccurrence
        assert ("alpha_beta", "beta") not in stats.cooccurrence


class TestDomainCoherence:
    def _oracle_scores(self, corpus, cfg, dc):
        stats = oracle.collect_naive(
            corpus, cfg.ngram_orders, cfg.min_lemma_length, cfg.noise_pattern,
            cfg.stop_words, cfg.pos_pattern, cfg.min_term_frequency)
        return oracle.domain_coherence(
            corpus, stats, window=dc.window, top_terms=dc.top_terms,
            context_words=dc.context_words, basic_alpha=dc.basic_alpha,
            min_doc_fraction=dc.min_doc_fraction)

    def test_matches_oracle_on_random_corpora(self, rng):
        for _ in range(20):
            corpus = random_corpus(rng,
                                   n_docs=int(rng.integers(2, 8)),
                                   sentences_per_doc=int(rng.integers(2, 5)),
                                   sentence_len=int(rng.integers(3, 9)))
            cfg = CandidateFilterConfig(min_term_frequency=2)
            cset = collect_candidates(corpus, cfg)
            if not cset.candidates:
                continue
            dc = DomainCoherenceConfig(window=int(rng.integers(1, 4)),
                                       top_terms=10, context_words=5)
            table = score_domain_coherence(cset, corpus, dc)
            expected = self._oracle_scores(corpus, cfg, dc)
            assert set(table.scores) == set(expected)
            for c, value in expected.items():
                assert table.scores[c] == pytest.approx(value, abs=TOL)

    def test_planted_term_gets_top_score(self):
        # "theta" shares every context window with the seed candidates
        docs = {}
        for d in range(10):
            docs[f"d{d}"] = [
                nn_sentence("theta", "alpha", "omega"),
                nn_sentence("theta", "beta", "omega"),
            ]
        corpus = make_corpus(docs)
        cset = collect_candidates(corpus)
        table = score_domain_coherence(
            cset, corpus, DomainCoherenceConfig(window=5))
        ranked = sorted(table.scores, key=lambda c: -table.scores[c])
        assert "theta" in ranked[:2]
        assert table.scores["theta"] == max(table.scores.values())

    def test_disjoint_candidate_gets_sentinel(self):
        docs = {f"d{d}": [nn_sentence("alpha", "beta", "omega")] for d in range(4)}
        # "kappa" lives in its own sentences, sharing no context with anything
        docs["d4"] = [nn_sentence("alpha", "beta", "omega"),
                      nn_sentence("kappa",), nn_sentence("kappa",)]
        corpus = make_corpus(docs)
        cset = collect_candidates(corpus)
        table = score_domain_coherence(cset, corpus)
        # "alpha_beta_omega" spans its whole sentence, so it has no context
        # either; both sentinel candidates sit one below the measured minimum
        measured = [v for c, v in table.scores.items()
                    if c not in ("kappa", "alpha_beta_omega")]
        assert table.scores["kappa"] == pytest.approx(min(measured) - 1.0, abs=TOL)
        assert table.scores["alpha_beta_omega"] == table.scores["kappa"]

    def test_single_document_corpus_df_filter(self):
        corpus = make_corpus({"d1": [nn_sentence("alpha", "beta", "gamma")] * 3})
        cset = collect_candidates(corpus)
        # ceil(1/4) = 1: every eligible word passes the document filter
        table = score_domain_coherence(cset, corpus)
        assert len(table.scores) == len(cset.candidates)

    def test_no_eligible_context_words_warns(self):
        corpus = make_corpus({
            "d1": [make_sentence(("alpha", "NN"), ("xyz", "FW"))] * 2,
            "d2": [make_sentence(("beta", "FW"),)] * 2,
            "d3": [make_sentence(("beta", "FW"),)],
            "d4": [make_sentence(("beta", "FW"),)],
            "d5": [make_sentence(("beta", "FW"),)],
            "d6": [make_sentence(("beta", "FW"),)],
            "d7": [make_sentence(("beta", "FW"),)],
            "d8": [make_sentence(("beta", "FW"),)],
        })
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=2))
        assert "alpha" in cset.candidates
        with pytest.warns(UserWarning, match="no eligible context words"):
            table = score_domain_coherence(cset, corpus)
        assert all(v == 0.0 for v in table.scores.values())

    def test_invariant_under_document_reordering(self, rng):
        corpus = random_corpus(rng, n_docs=5)
        reordered = AnnotatedCorpus(tuple(reversed(corpus.documents)))
        cfg = CandidateFilterConfig(min_term_frequency=2)
        cset_a = collect_candidates(corpus, cfg)
        cset_b = collect_candidates(reordered, cfg)
        table_a = score_domain_coherence(cset_a, corpus)
        table_b = score_domain_coherence(cset_b, reordered)
        assert table_a.scores == table_b.scores

    def test_parallel_matches_serial(self, rng):
        corpus = random_corpus(rng, n_docs=6)
        cset = collect_candidates(corpus, CandidateFilterConfig(min_term_frequency=2))
        serial = score_domain_coherence(cset, corpus, threads=1)
        parallel = score_domain_coherence(cset, corpus, threads=4)
        assert serial.scores == parallel.scores
