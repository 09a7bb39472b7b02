#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ragbench::retrieval {

// Index-side tokenizer: lowercased terms split at non-alphanumeric
// boundaries, so punctuation separates terms instead of being deleted.
// Non-ASCII letters and ideographs count as term characters.
std::vector<std::string> analyze(std::string_view text);

} // namespace ragbench::retrieval
