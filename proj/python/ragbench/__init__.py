"""RAG benchmarking toolkit: corpus chunking, retrieval, and answer metrics."""

from ._core import (
    Bm25Index,
    CorpusStore,
    Document,
    Error,
    LanguageDetector,
    Passage,
    PromptBundle,
    RankedList,
    __version__,
    adapt_prompt,
    analyze,
    build_closed_book_prompt,
    build_rag_prompt,
    char3_grams,
    char3_recall,
    chunk_document,
    correct_language_rate,
    correlate_metrics,
    doc_id_of,
    exact_match,
    ingest_collection,
    ingest_documents,
    judge_prompt,
    kendall_tau,
    match,
    normalize,
    normalize_tokens,
    oracle_context,
    parse_judge_verdict,
    recall_at_k,
    rouge_l,
    rouge_n,
    rouge_tokens,
    token_prf,
)

__all__ = [
    "Bm25Index",
    "CorpusStore",
    "Document",
    "Error",
    "LanguageDetector",
    "Passage",
    "PromptBundle",
    "RankedList",
    "__version__",
    "adapt_prompt",
    "analyze",
    "build_closed_book_prompt",
    "build_rag_prompt",
    "char3_grams",
    "char3_recall",
    "chunk_document",
    "correct_language_rate",
    "correlate_metrics",
    "doc_id_of",
    "exact_match",
    "ingest_collection",
    "ingest_documents",
    "judge_prompt",
    "kendall_tau",
    "match",
    "normalize",
    "normalize_tokens",
    "oracle_context",
    "parse_judge_verdict",
    "recall_at_k",
    "rouge_l",
    "rouge_n",
    "rouge_tokens",
    "token_prf",
]
