#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ragbench::evaluation {

// Pluggable response-language classifier.
class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;
    virtual bool supports(const std::string& language) const = 0;
    virtual std::string detect(const std::string& text) const = 0;
};

// Built-in detector: the input's dominant Unicode script first narrows the
// candidates (two Korean sentences share a script even when their syllable
// trigrams are disjoint), then character trigram profiles (built from
// embedded sample text) compared by cosine similarity pick within the
// script. Ships profiles for en, fr, de, es, it, pt, fi, ru, ar, ko, ja,
// zh, th.
class TrigramLanguageDetector : public LanguageDetector {
public:
    TrigramLanguageDetector();
    // Additional or replacement profile built from sample text.
    void add_profile(const std::string& language, const std::string& sample);

    bool supports(const std::string& language) const override;
    std::string detect(const std::string& text) const override;
    std::vector<std::string> languages() const;

private:
    std::map<std::string, std::map<std::string, double>> profiles_;
    std::map<std::string, int> profile_scripts_; // dominant Unicode script per profile
};

struct ClrResult {
    std::optional<double> rate; // nullopt when nothing was long enough to judge
    std::size_t included = 0;
};

// Fraction of responses the detector labels as `expected`, skipping
// responses of 20 or fewer Unicode scalars. Throws UnsupportedLanguage when
// the detector has no profile for `expected`.
ClrResult correct_language_rate(const std::vector<std::string>& responses,
                                const std::string& expected, const LanguageDetector& detector);

} // namespace ragbench::evaluation
