#include "ragbench/generation/prompt.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <fstream>

namespace ragbench::generation {

std::string to_string(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::Basic: return "basic";
        case PromptVariant::ReplyInUL: return "reply_in_ul";
        case PromptVariant::BasicTranslated: return "basic_translated";
        case PromptVariant::ReplyInULTranslated: return "reply_in_ul_translated";
    }
    throw Error::config("UnknownVariant", "unreachable variant value");
}

PromptVariant variant_from_string(const std::string& name) {
    if (name == "basic") return PromptVariant::Basic;
    if (name == "reply_in_ul") return PromptVariant::ReplyInUL;
    if (name == "basic_translated") return PromptVariant::BasicTranslated;
    if (name == "reply_in_ul_translated") return PromptVariant::ReplyInULTranslated;
    throw Error::config("UnknownVariant", "no prompt variant named '" + name + "'");
}

std::string to_string(PromptKind kind) {
    return kind == PromptKind::Rag ? "rag" : "closed_book";
}

PromptKind prompt_kind_from_string(const std::string& name) {
    if (name == "rag") return PromptKind::Rag;
    if (name == "closed_book") return PromptKind::ClosedBook;
    throw Error::config("UnknownPromptKind", "no prompt kind named '" + name + "'");
}

PromptBundle build_rag_prompt(const std::string& question,
                              const std::vector<std::string>& passages) {
    if (passages.empty()) {
        throw Error::data("NoContext", "a context prompt needs at least one passage");
    }
    PromptBundle bundle;
    bundle.kind = PromptKind::Rag;
    bundle.system = kRagSystemPrompt;
    bundle.user = "Background:\n";
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i > 0) bundle.user += '\n';
        bundle.user += passages[i];
    }
    bundle.user += "\n\nQuestion: ";
    bundle.user += question;
    return bundle;
}

PromptBundle build_closed_book_prompt(const std::string& question) {
    PromptBundle bundle;
    bundle.kind = PromptKind::ClosedBook;
    bundle.system = kClosedBookSystemPrompt;
    bundle.user = "Question: " + question;
    return bundle;
}

TranslationTable load_translations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
    auto root = nlohmann::json::parse(in, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw Error::data("MalformedJson", path.string() + ": expected a JSON object");
    }
    TranslationTable table;
    for (const auto& [language, entry] : root.items()) {
        if (!entry.is_object()) {
            throw Error::data("SchemaError", path.string() + ": entry for '" + language +
                                                 "' must be an object");
        }
        LanguagePrompts prompts;
        auto read_field = [&](const char* key, std::string& out) {
            if (entry.contains(key)) {
                if (!entry[key].is_string()) {
                    throw Error::data("SchemaError", path.string() + ": '" + language + "." +
                                                         key + "' must be a string");
                }
                out = entry[key].get<std::string>();
            }
        };
        read_field("rag_system", prompts.rag_system);
        read_field("closed_book_system", prompts.closed_book_system);
        read_field("reply_instruction_en", prompts.reply_instruction_en);
        read_field("reply_instruction", prompts.reply_instruction);
        table.emplace(language, std::move(prompts));
    }
    return table;
}

namespace {

const std::string& require_field(const std::string& language, const std::string& value,
                                 const char* what) {
    if (value.empty()) {
        throw Error::data("MissingTranslation",
                          "language '" + language + "' has no " + what + " entry");
    }
    return value;
}

} // namespace

PromptBundle apply_language_variant(const PromptBundle& bundle, const std::string& language,
                                    PromptVariant variant, const TranslationTable& translations,
                                    bool allow_english) {
    PromptBundle out = bundle;
    out.language = language;
    out.variant = variant;
    if (variant == PromptVariant::Basic) {
        return out;
    }
    if (language == "en" && !allow_english) {
        throw Error::config("VariantNeedsLanguage",
                            "variant " + to_string(variant) + " is meant for non-English runs");
    }

    const auto it = translations.find(language);
    if (it == translations.end()) {
        throw Error::data("MissingTranslation", "no prompt resources for language '" +
                                                    language + "'");
    }
    const auto& prompts = it->second;

    if (variant == PromptVariant::BasicTranslated ||
        variant == PromptVariant::ReplyInULTranslated) {
        out.system = bundle.kind == PromptKind::Rag
                         ? require_field(language, prompts.rag_system, "rag_system")
                         : require_field(language, prompts.closed_book_system,
                                         "closed_book_system");
    }
    if (variant == PromptVariant::ReplyInUL) {
        out.system += " ";
        out.system += require_field(language, prompts.reply_instruction_en,
                                    "reply_instruction_en");
    } else if (variant == PromptVariant::ReplyInULTranslated) {
        out.system += " ";
        out.system += require_field(language, prompts.reply_instruction, "reply_instruction");
    }
    return out;
}

} // namespace ragbench::generation
