"""Brute-force reference implementations used to validate the package.

Everything here works directly on parsed (Document, tokens) streams with
plain loops and dicts. Nothing imports the index or kernel machinery, so
these stay an independent route for every count the library produces.
"""

from collections import Counter

CLOSED_PREPS = {"of", "in", "for", "to", "with", "on", "as", "into", "like", "about"}
NOMINAL = {"NOUN", "PROPN"}
MODIFIER_POS = {"ADJ", "NOUN", "PROPN"}
MODIFIER_CAP = 3


def sentences(doc, tokens):
    """Split a document's tokens into sentence lists."""
    starts = [s for s in (doc.sent_starts or [0]) if s < len(tokens)]
    out = []
    for i, s in enumerate(starts):
        e = starts[i + 1] if i + 1 < len(starts) else len(tokens)
        out.append(tokens[s:e])
    return out


def lemma_counts(docs):
    """Per-lemma (f, docf) over the whole stream."""
    f = Counter()
    docf = Counter()
    for doc, tokens in docs:
        seen = set()
        for tok in tokens:
            lemma = tok.lemma.lower()
            f[lemma] += 1
            seen.add(lemma)
        for lemma in seen:
            docf[lemma] += 1
    return f, docf


def node_positions(docs, node):
    """Global hit positions of a node by linear scan."""
    hits = []
    for doc, tokens in docs:
        for sent in sentences(doc, tokens):
            for i, tok in enumerate(sent):
                if node.kind.value == "lemma":
                    if tok.lemma.lower() == node.forms[0]:
                        hits.append(tok.position)
                elif node.kind.value == "initialism":
                    if tok.surface == node.forms[0]:
                        hits.append(tok.position)
                else:
                    if (
                        i + 1 < len(sent)
                        and tok.lemma.lower() == node.forms[0]
                        and sent[i + 1].lemma.lower() == node.forms[1]
                    ):
                        hits.append(tok.position)
    return sorted(hits)


def node_docf(docs, node):
    count = 0
    for doc, tokens in docs:
        if node_positions([(doc, tokens)], node):
            count += 1
    return count


def window_cooccurrences(docs, node, window, skip_tags=("PUNCT",)):
    """All-pairs scan: for each hit, count same-sentence neighbors in range."""
    span = len(node.forms)
    counts = Counter()
    hit_set = set(node_positions(docs, node))
    for doc, tokens in docs:
        for sent in sentences(doc, tokens):
            for tok in sent:
                if tok.position not in hit_set:
                    continue
                p = tok.position
                for q_tok in sent:
                    q = q_tok.position
                    if p - window <= q <= p - 1 or p + span <= q <= p + span + window - 1:
                        if q_tok.pos not in skip_tags:
                            counts[q_tok.lemma.lower()] += 1
    return counts


def _is_prep(tok):
    return tok.pos == "ADP" or (tok.pos == "X" and tok.lemma.lower() in CLOSED_PREPS)


def _is_comma(tok):
    return tok.pos == "PUNCT" and tok.lemma == ","


def relation_counts(docs, node):
    """Independent matcher for the five grammatical relations."""
    span = len(node.forms)
    out = {
        "modifier_of": Counter(),
        "noun_modified_by": Counter(),
        "and_or": Counter(),
        "prep_phrase_pre": Counter(),
        "prep_phrase_post": Counter(),
    }
    hit_set = set(node_positions(docs, node))
    for doc, tokens in docs:
        for sent in sentences(doc, tokens):
            base = sent[0].position
            n = len(sent)
            for i, tok in enumerate(sent):
                if tok.position not in hit_set:
                    continue
                head = sent[i + span - 1]
                # modifier run, nearest first, capped
                j = i - 1
                taken = 0
                while j >= 0 and taken < MODIFIER_CAP and sent[j].pos in MODIFIER_POS:
                    out["modifier_of"][sent[j].lemma.lower()] += 1
                    j -= 1
                    taken += 1
                # following noun
                k = i + span
                if k < n and sent[k].pos in NOMINAL:
                    out["noun_modified_by"][sent[k].lemma.lower()] += 1
                # and/or forward: node (,)? conj X
                k = i + span
                if k < n and _is_comma(sent[k]):
                    k += 1
                if (
                    k + 1 < n
                    and sent[k].lemma.lower() in ("and", "or")
                    and sent[k + 1].pos == head.pos
                ):
                    out["and_or"][sent[k + 1].lemma.lower()] += 1
                # and/or backward: X (,)? conj node
                j = i - 1
                if j >= 0 and sent[j].lemma.lower() in ("and", "or"):
                    j -= 1
                    if j >= 0 and _is_comma(sent[j]):
                        j -= 1
                    if j >= 0 and sent[j].pos == head.pos:
                        out["and_or"][sent[j].lemma.lower()] += 1
                # prepositions
                if i - 1 >= 0 and _is_prep(sent[i - 1]):
                    out["prep_phrase_pre"][sent[i - 1].lemma.lower()] += 1
                k = i + span
                if k < n and _is_prep(sent[k]):
                    out["prep_phrase_post"][sent[k].lemma.lower()] += 1
    return out


def arf_reference(positions, n):
    """Direct evaluation of the average reduced frequency definition."""
    f = len(positions)
    if f == 0:
        return 0.0
    v = n / f
    gaps = [positions[i + 1] - positions[i] for i in range(f - 1)]
    gaps.append(n - positions[-1] + positions[0])
    return sum(min(d, v) for d in gaps) / v


def aldf_reference(positions, n):
    """Geometric-over-arithmetic mean gap ratio times the raw frequency."""
    import math

    f = len(positions)
    if f == 0:
        return 0.0
    gaps = [positions[i + 1] - positions[i] for i in range(f - 1)]
    gaps.append(n - positions[-1] + positions[0])
    h = sum(math.log2(d * f / n) for d in gaps) / f
    return min(f * 2.0 ** h, float(f))
