#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragbench::generation {

enum class PromptKind { Rag, ClosedBook };
enum class PromptVariant { Basic, ReplyInUL, BasicTranslated, ReplyInULTranslated };

std::string to_string(PromptVariant variant);
PromptVariant variant_from_string(const std::string& name);
std::string to_string(PromptKind kind);
PromptKind prompt_kind_from_string(const std::string& name);

// These strings are pinned byte-for-byte by golden fixtures; never edit them.
inline constexpr const char* kRagSystemPrompt =
    "You are a helpful assistant. Your task is to extract relevant information from "
    "provided documents and to answer to questions as briefly as possible.";
inline constexpr const char* kClosedBookSystemPrompt =
    "You are a helpful assistant. Answer the questions as briefly as possible.";

struct PromptBundle {
    std::string system;
    std::string user;
    std::string language = "en";
    PromptVariant variant = PromptVariant::Basic;
    PromptKind kind = PromptKind::Rag;
};

// user = "Background:\n" + passages joined by "\n" + "\n\nQuestion: " + question.
// Throws Error::data("NoContext") on an empty passage list.
PromptBundle build_rag_prompt(const std::string& question,
                              const std::vector<std::string>& passages);

// user = "Question: " + question.
PromptBundle build_closed_book_prompt(const std::string& question);

// Per-language prompt resources. The reply instruction exists twice: phrased
// in English ("+reply in UL" mode keeps the English system prompt) and in the
// user language (for the fully translated mode).
struct LanguagePrompts {
    std::string rag_system;
    std::string closed_book_system;
    std::string reply_instruction_en;
    std::string reply_instruction;
};

using TranslationTable = std::map<std::string, LanguagePrompts>;

TranslationTable load_translations(const std::filesystem::path& path);

// Rewrites the bundle for a user language. ReplyInUL appends the reply
// instruction (joined by one space); Translated variants swap in the
// translated system prompt for the bundle's kind. Missing table fields raise
// Error::data("MissingTranslation"). Non-Basic variants for "en" need
// allow_english=true, mirroring the variant invariant.
PromptBundle apply_language_variant(const PromptBundle& bundle, const std::string& language,
                                    PromptVariant variant, const TranslationTable& translations,
                                    bool allow_english = false);

} // namespace ragbench::generation
