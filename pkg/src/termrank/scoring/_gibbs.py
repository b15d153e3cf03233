"""Inner loops of the collapsed Gibbs sampler.

Compiled with numba when available; the plain-Python definitions are the
fallback and compute bit-identical results (same uniform stream, same
floating-point expression order), just slower.

Token assignment encoding: 0 = background, 1 = document-specific,
2 + t = general topic t.
"""

import numpy as np

try:
    from numba import njit
except ImportError:                   # pragma: no cover - numba is a default dep
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


@njit(cache=True)
def _init_tokens(words, docs, z, uniforms, lam_bg, lam_doc,
                 n_bg_word, n_doc_word, n_topic_word, n_doc_topic,
                 n_bg_total, n_doc_total, n_topic_total, n_doc_general,
                 n_topics):
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        u = uniforms[i]
        if u < lam_bg:
            z[i] = 0
            n_bg_word[w] += 1
            n_bg_total[0] += 1
        elif u < lam_bg + lam_doc:
            z[i] = 1
            n_doc_word[d, w] += 1
            n_doc_total[d] += 1
        else:
            frac = (u - lam_bg - lam_doc) / (1.0 - lam_bg - lam_doc)
            t = int(frac * n_topics)
            if t >= n_topics:
                t = n_topics - 1
            z[i] = 2 + t
            n_topic_word[t, w] += 1
            n_topic_total[t] += 1
            n_doc_topic[d, t] += 1
            n_doc_general[d] += 1


@njit(cache=True)
def _sweep(words, docs, z, uniforms, probs,
           lam_bg, lam_doc, lam_gen, alpha, beta,
           n_bg_word, n_doc_word, n_topic_word, n_doc_topic,
           n_bg_total, n_doc_total, n_topic_total, n_doc_general,
           n_topics, vocab_size):
    v_beta = vocab_size * beta
    t_alpha = n_topics * alpha
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        a = z[i]

        if a == 0:
            n_bg_word[w] -= 1
            n_bg_total[0] -= 1
        elif a == 1:
            n_doc_word[d, w] -= 1
            n_doc_total[d] -= 1
        else:
            t = a - 2
            n_topic_word[t, w] -= 1
            n_topic_total[t] -= 1
            n_doc_topic[d, t] -= 1
            n_doc_general[d] -= 1

        probs[0] = lam_bg * (n_bg_word[w] + beta) / (n_bg_total[0] + v_beta)
        probs[1] = lam_doc * (n_doc_word[d, w] + beta) / (n_doc_total[d] + v_beta)
        doc_denom = n_doc_general[d] + t_alpha
        total = probs[0] + probs[1]
        for t in range(n_topics):
            p = (lam_gen
                 * ((n_doc_topic[d, t] + alpha) / doc_denom)
                 * ((n_topic_word[t, w] + beta) / (n_topic_total[t] + v_beta)))
            probs[2 + t] = p
            total += p

        target = uniforms[i] * total
        acc = 0.0
        choice = n_topics + 1
        for j in range(n_topics + 2):
            acc += probs[j]
            if target < acc:
                choice = j
                break

        z[i] = choice
        if choice == 0:
            n_bg_word[w] += 1
            n_bg_total[0] += 1
        elif choice == 1:
            n_doc_word[d, w] += 1
            n_doc_total[d] += 1
        else:
            t = choice - 2
            n_topic_word[t, w] += 1
            n_topic_total[t] += 1
            n_doc_topic[d, t] += 1
            n_doc_general[d] += 1
