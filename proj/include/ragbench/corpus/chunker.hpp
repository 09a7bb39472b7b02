#pragma once

#include "ragbench/corpus/types.hpp"

#include <vector>

namespace ragbench::corpus {

// Splits a document into non-overlapping passages.
//
// Words mode: a word is a maximal run of non-whitespace Unicode scalars; each
// passage body holds `size` words joined by single spaces (the final passage
// may hold fewer). Characters mode: the whitespace-trimmed text is cut into
// consecutive `size`-scalar slices. The title is carried on every passage and
// never counts toward the budget. A document shorter than one full chunk
// yields exactly one passage.
//
// Throws Error::data("EmptyDocument") when text is whitespace-only.
std::vector<Passage> chunk_document(const Document& doc, const ChunkPolicy& policy);

} // namespace ragbench::corpus
