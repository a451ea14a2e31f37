"""High-level wiring: articles + registry -> instances -> datasets/views.

These helpers chain the lower modules in the canonical order so that
the CLI, the demos, and tests all agree on how a corpus is prepared.
"""

from __future__ import annotations

import datetime
from collections import Counter
from typing import Sequence

from . import corpus, features, preprocess
from .corpus import Article, LabeledInstance, PoliticianRecord
from .features import FeatureSpace, LexiconSet, PosLexicon
from .interpret import DocView
from .learn import Dataset
from .preprocess import DEFAULT_GENDERED_SIGNALS, MARKER


def filter_by_date(
    articles: Sequence[Article],
    date_from: datetime.date | None = None,
    date_to: datetime.date | None = None,
) -> list[Article]:
    """Keep articles with date_from <= date < date_to (either bound optional)."""
    out = []
    for art in articles:
        if date_from is not None and art.date < date_from:
            continue
        if date_to is not None and art.date >= date_to:
            continue
        out.append(art)
    return out


def build_instances(
    articles: Sequence[Article],
    registry: Sequence[PoliticianRecord],
    *,
    signals: frozenset[str] = DEFAULT_GENDERED_SIGNALS,
    stoplist: frozenset[str] | None = None,
    apply_stem: bool = False,
    date_from: datetime.date | None = None,
    date_to: datetime.date | None = None,
) -> list[LabeledInstance]:
    articles = filter_by_date(articles, date_from, date_to)
    return corpus.label_instances(
        articles, registry, signals=signals, stoplist=stoplist, apply_stem=apply_stem
    )


def instance_terms(
    instances: Sequence[LabeledInstance],
    scheme: str,
    window: str = "article",
    *,
    pos_lexicon: PosLexicon | None = None,
    lexicon: LexiconSet | None = None,
) -> list[Counter]:
    return [
        features.extract_terms(
            inst, scheme, window=window, pos_lexicon=pos_lexicon, lexicon=lexicon
        )
        for inst in instances
    ]


def build_dataset(
    instances: Sequence[LabeledInstance],
    *,
    scheme: str,
    window: str = "article",
    representation: str = "boolean",
    min_df: int = features.DEFAULT_MIN_DF,
    pos_lexicon: PosLexicon | None = None,
    lexicon: LexiconSet | None = None,
    space: FeatureSpace | None = None,
) -> tuple[Dataset, FeatureSpace]:
    """Vectorize instances under one scheme/window/representation.

    Pass an existing space to vectorize a new batch against a fixed
    vocabulary; otherwise the space is built from these instances.
    """
    terms = instance_terms(
        instances, scheme, window, pos_lexicon=pos_lexicon, lexicon=lexicon
    )
    if space is None:
        space = features.build_space(terms, min_df)
    vectors = tuple(features.vectorize(t, space, representation) for t in terms)
    labels = tuple(inst.label for inst in instances)
    return Dataset(vectors=vectors, labels=labels, space=space), space


def _mention_sentence_ids(stream, positions) -> frozenset[int]:
    spans = stream.sentence_spans
    out = set()
    for pos in positions:
        for idx, (start, end) in enumerate(spans):
            if start <= pos < end:
                out.add(idx)
                break
    return frozenset(out)


def build_doc_views(
    articles: Sequence[Article],
    registry: Sequence[PoliticianRecord],
    *,
    masked: bool = True,
    signals: frozenset[str] = DEFAULT_GENDERED_SIGNALS,
    stoplist: frozenset[str] | None = None,
    apply_stem: bool = False,
) -> list[DocView]:
    """Per-article query views over masked or raw token streams.

    Masked views show exactly what the classifiers saw; raw views keep
    the original tokens (names, pronouns and all) for corpus analyses.
    Group membership is the set of genders the article features.
    """
    gender_of = {r.id: r.gender for r in registry}
    views: list[DocView] = []
    for scan in corpus.scan_corpus(articles, registry):
        groups = frozenset(gender_of[m.politician_id] for m in scan.matches)
        if masked:
            stream = preprocess.mask_gender_signals(scan.stream, scan.mention_spans, signals)
            if stoplist:
                stream = preprocess.remove_stopwords(stream, stoplist)
            if apply_stem:
                stream = preprocess.stem(stream)
            positions = [i for i, t in enumerate(stream.tokens) if t.kind == MARKER]
        else:
            stream = scan.stream
            positions = [span.start for span in scan.mention_spans]
        views.append(
            DocView(
                article_id=scan.article.id,
                stream=stream,
                groups=groups,
                mention_sentences=_mention_sentence_ids(stream, positions),
            )
        )
    return views
