#include "ragbench/evaluation/language.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/unicode.hpp"

#include <cmath>

namespace ragbench::evaluation {

namespace {

// Character trigrams over the lowercased text with whitespace runs collapsed
// to single spaces; spaces stay in the grams so word boundaries count.
std::map<std::string, double> trigram_counts(const std::string& text) {
    std::vector<char32_t> scalars;
    bool pending_space = false;
    for (char32_t cp : unicode::decode(text)) {
        cp = unicode::to_lower(cp);
        if (unicode::is_space(cp)) {
            pending_space = !scalars.empty();
            continue;
        }
        if (pending_space) {
            scalars.push_back(U' ');
            pending_space = false;
        }
        scalars.push_back(cp);
    }

    std::map<std::string, double> counts;
    if (scalars.empty()) return counts;
    if (scalars.size() < 3) {
        counts[unicode::encode(scalars)] += 1.0;
        return counts;
    }
    for (std::size_t i = 0; i + 3 <= scalars.size(); ++i) {
        std::string gram;
        unicode::append_utf8(gram, scalars[i]);
        unicode::append_utf8(gram, scalars[i + 1]);
        unicode::append_utf8(gram, scalars[i + 2]);
        counts[gram] += 1.0;
    }
    return counts;
}

enum class Script { Latin, Cyrillic, Arabic, Hangul, Kana, Han, Thai, Other };

Script script_of(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
        (cp >= 0x00C0 && cp <= 0x024F) || (cp >= 0x1E00 && cp <= 0x1EFF)) {
        return Script::Latin;
    }
    if (cp >= 0x0400 && cp <= 0x04FF) return Script::Cyrillic;
    if ((cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F)) return Script::Arabic;
    if ((cp >= 0xAC00 && cp <= 0xD7AF) || (cp >= 0x1100 && cp <= 0x11FF) ||
        (cp >= 0x3130 && cp <= 0x318F)) {
        return Script::Hangul;
    }
    if ((cp >= 0x3040 && cp <= 0x309F) || (cp >= 0x30A0 && cp <= 0x30FF)) return Script::Kana;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return Script::Han;
    if (cp >= 0x0E00 && cp <= 0x0E7F) return Script::Thai;
    return Script::Other;
}

Script dominant_script(const std::string& text) {
    std::size_t counts[8] = {};
    for (const char32_t cp : unicode::decode(text)) {
        counts[static_cast<std::size_t>(script_of(cp))]++;
    }
    // Any kana marks Japanese: Japanese text mixes Han with kana, Chinese
    // text never carries kana.
    if (counts[static_cast<std::size_t>(Script::Kana)] > 0) return Script::Kana;
    auto best = Script::Other;
    std::size_t best_count = 0;
    for (std::size_t s = 0; s < 7; ++s) { // Other never wins
        if (counts[s] > best_count) {
            best_count = counts[s];
            best = static_cast<Script>(s);
        }
    }
    return best;
}

double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (const auto& [gram, count] : a) {
        norm_a += count * count;
        const auto it = b.find(gram);
        if (it != b.end()) dot += count * it->second;
    }
    for (const auto& [gram, count] : b) norm_b += count * count;
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

struct LanguageSample {
    const char* tag;
    const char* text;
};

// Short everyday-topic passages, one per supported language, from which the
// default trigram profiles are built.
constexpr LanguageSample kSamples[] = {
    {"en",
     "The quick brown fox jumps over the lazy dog. This is a short passage of English text "
     "used to build a language profile. It talks about everyday things such as the weather, "
     "food, music, and travel plans for the summer holidays."},
    {"fr",
     "Le renard brun saute par-dessus le chien paresseux. Ceci est un court passage de texte "
     "français utilisé pour construire un profil de langue. Il parle de choses quotidiennes "
     "comme la météo, la nourriture, la musique et les projets de voyage pour les vacances."},
    {"de",
     "Der schnelle braune Fuchs springt über den faulen Hund. Dies ist ein kurzer deutscher "
     "Text, der verwendet wird, um ein Sprachprofil zu erstellen. Er handelt von alltäglichen "
     "Dingen wie dem Wetter, dem Essen, der Musik und den Reiseplänen für die Ferien."},
    {"es",
     "El rápido zorro marrón salta sobre el perro perezoso. Este es un breve pasaje de texto "
     "en español utilizado para construir un perfil de idioma. Habla de cosas cotidianas como "
     "el clima, la comida, la música y los planes de viaje para las vacaciones."},
    {"it",
     "La rapida volpe marrone salta sopra il cane pigro. Questo è un breve passaggio di testo "
     "italiano usato per costruire un profilo della lingua. Parla di cose quotidiane come il "
     "tempo, il cibo, la musica e i programmi di viaggio per le vacanze."},
    {"pt",
     "A rápida raposa marrom salta sobre o cão preguiçoso. Este é um breve trecho de texto em "
     "português usado para construir um perfil de idioma. Fala de coisas do dia a dia como o "
     "tempo, a comida, a música e os planos de viagem para as férias."},
    {"fi",
     "Nopea ruskea kettu hyppää laiskan koiran yli. Tämä on lyhyt suomenkielinen teksti, jota "
     "käytetään kieliprofiilin rakentamiseen. Se kertoo arkisista asioista kuten säästä, "
     "ruoasta, musiikista ja lomamatkojen suunnitelmista."},
    {"ru",
     "Быстрая коричневая лиса перепрыгивает через ленивую собаку. Это короткий текст на "
     "русском языке, который используется для создания языкового профиля. В нём говорится о "
     "повседневных вещах, таких как погода, еда, музыка и планы путешествий на каникулы."},
    {"ar",
     "الثعلب البني السريع يقفز فوق الكلب الكسول. هذا نص قصير باللغة العربية يستخدم لبناء ملف "
     "تعريف اللغة. يتحدث عن أشياء يومية مثل الطقس والطعام والموسيقى وخطط السفر في العطلة."},
    {"ko",
     "빠른 갈색 여우가 게으른 개를 뛰어넘는다. 이것은 언어 프로필을 만들기 위해 사용되는 짧은 "
     "한국어 텍스트이다. 날씨, 음식, 음악, 그리고 휴가 여행 계획과 같은 일상적인 것들에 대해 "
     "이야기한다."},
    {"ja",
     "すばやい茶色の狐はのろまな犬を飛び越える。これは言語プロファイルを作るために使われる短い"
     "日本語の文章である。天気や食べ物や音楽、休暇の旅行の計画といった日常のことについて述べて"
     "いる。"},
    {"zh",
     "敏捷的棕色狐狸跳过了懒惰的狗。这是一段用于构建语言档案的简短中文文本。它谈论天气、食物、"
     "音乐以及假期旅行计划等日常事物。"},
    {"th",
     "สุนัขจิ้งจอกสีน้ำตาลที่ว่องไวกระโดดข้ามสุนัขขี้เกียจ "
     "นี่คือข้อความภาษาไทยสั้นๆที่ใช้สร้างโปรไฟล์ภาษา "
     "มันพูดถึงสิ่งของในชีวิตประจำวัน เช่น สภาพอากาศ อาหาร ดนตรี และแผนการเดินทางในวันหยุด"},
};

} // namespace

TrigramLanguageDetector::TrigramLanguageDetector() {
    for (const auto& sample : kSamples) {
        add_profile(sample.tag, sample.text);
    }
}

void TrigramLanguageDetector::add_profile(const std::string& language,
                                          const std::string& sample) {
    auto counts = trigram_counts(sample);
    if (counts.empty()) {
        throw Error::config("EmptyProfile", "sample text for '" + language + "' is empty");
    }
    profiles_[language] = std::move(counts);
    profile_scripts_[language] = static_cast<int>(dominant_script(sample));
}

bool TrigramLanguageDetector::supports(const std::string& language) const {
    return profiles_.count(language) > 0;
}

std::vector<std::string> TrigramLanguageDetector::languages() const {
    std::vector<std::string> out;
    out.reserve(profiles_.size());
    for (const auto& [tag, profile] : profiles_) out.push_back(tag);
    return out;
}

std::string TrigramLanguageDetector::detect(const std::string& text) const {
    const auto input = trigram_counts(text);
    const auto script = static_cast<int>(dominant_script(text));
    const auto scriptless = static_cast<int>(Script::Other);

    // Two passes: first only profiles sharing the input's script, then (when
    // no profile does, or the input has no recognizable script) everything.
    for (const bool filtered : {true, false}) {
        std::string best_tag;
        double best_score = -1.0;
        for (const auto& [tag, profile] : profiles_) {
            if (filtered && script != scriptless &&
                profile_scripts_.at(tag) != script) {
                continue;
            }
            const auto score = cosine(input, profile);
            if (score > best_score) { // map order makes ties resolve to the smaller tag
                best_score = score;
                best_tag = tag;
            }
        }
        if (!best_tag.empty()) return best_tag;
    }
    return {};
}

ClrResult correct_language_rate(const std::vector<std::string>& responses,
                                const std::string& expected, const LanguageDetector& detector) {
    if (!detector.supports(expected)) {
        throw Error::config("UnsupportedLanguage",
                            "detector has no profile for '" + expected + "'");
    }
    ClrResult result;
    std::size_t correct = 0;
    for (const auto& response : responses) {
        if (unicode::scalar_count(response) <= 20) continue; // too short to judge
        ++result.included;
        if (detector.detect(response) == expected) ++correct;
    }
    if (result.included > 0) {
        result.rate = static_cast<double>(correct) / static_cast<double>(result.included);
    }
    return result;
}

} // namespace ragbench::evaluation
