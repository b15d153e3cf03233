"""termrank: terminology recognition from domain text corpora.

Pipeline: corpus ingestion -> candidate collection -> termhood scoring
(frequency, context, reference-corpus, topic-model and encyclopedia-backed
methods) -> ranking (single score, linear combination, Voting,
positive-unlabeled learning) -> average-precision evaluation with a
cross-validation parameter-selection harness.
"""

from .corpus import (AnnotatedCorpus, Document, Token, load_annotated_corpus,
                     load_plain_corpus, save_annotated_corpus, tokenize_and_tag)
from .candidates import (CandidateFilterConfig, CandidateSet, TermCandidate,
                         canonicalize, collect_candidates, pos_pattern_match)
from .scores import ScoreTable, export_scores_tsv, sorted_items
from .scoring.frequency import (score_atf, score_basic, score_combobasic,
                                score_cvalue, score_ridf, score_tf, score_tfidf)
from .scoring.context import npmi, score_domain_coherence
from .scoring.reference import (ReferenceTable, build_reference_table,
                                load_reference_table, score_domain_pertinence,
                                score_relevance, score_weirdness)
from .scoring.topic import (TopicModel, TopicModelConfig, fit_topic_model,
                            score_novel_topic_model)
from .scoring.wiki import (EmbeddingModel, KeyConceptConfig, LinkStatsTable,
                           extract_key_concepts, load_embeddings,
                           load_link_stats, score_key_concept_relatedness,
                           score_link_probability, score_wiki_presence)
from .ranking import (FeatureMatrix, PuConfig, build_feature_matrix,
                      linear_combination, pu_atr, rank_by_score, train_logreg,
                      voting)
from .evaluation import (EvalResult, GoldStandard, avp, choose_k, cv_select,
                         grid_search, load_gold, param_grid)
from .config import default_config, load_config, save_config
from .pipeline import PipelinePaths, PipelineResult, run_pipeline
from .errors import ConfigError, DataError, EmptyCorpusError, ParseError, TermrankError

__version__ = "0.1.0"
