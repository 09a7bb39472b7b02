#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ragbench::evaluation {

// Answer normalization used by Match / ExactMatch / token P-R-F1:
// Unicode lowercase, punctuation deleted, standalone articles "a"/"an"/"the"
// dropped, whitespace collapsed to single spaces.
std::string normalize(std::string_view text);

// normalize() split into tokens (article removal applied).
std::vector<std::string> normalize_tokens(std::string_view text);

// ROUGE tokenization: same pipeline but articles are kept.
std::vector<std::string> rouge_tokens(std::string_view text);

} // namespace ragbench::evaluation
