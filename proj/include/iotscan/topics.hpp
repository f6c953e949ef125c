#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iotscan/model.hpp"

namespace iotscan {

// Fixed category order; doubles as the tie-break precedence.
const std::vector<std::string>& topic_categories();

struct ClassifierConfig {
    double threshold = 0.85;
};

struct TopicClassification {
    std::string topic;
    std::map<std::string, double> scores;
    std::optional<std::string> assigned;
};

// Pluggable scorer; must be safe for concurrent read-only use.
class TopicScorer {
public:
    virtual ~TopicScorer() = default;
    // 0 (no match) to 1 (perfect match); throwing counts as score 0.
    virtual double score(const std::string& topic, const std::string& category) const = 0;
};

// Deterministic offline baseline: score 1.0 when any normalized token of the
// topic appears in the category's wordlist, else 0.0.
class KeywordScorer : public TopicScorer {
public:
    // Built-in wordlists.
    KeywordScorer();
    // One wordlist file per category: <dir>/<category>.txt, one token per line.
    static KeywordScorer from_directory(const std::string& dir);

    double score(const std::string& topic, const std::string& category) const override;

private:
    std::map<std::string, std::set<std::string>> wordlists_;
};

// Splits on '/', '_', '-' and camelCase boundaries; lowercases; drops empties.
std::vector<std::string> normalize_topic(const std::string& topic);

// Precondition: topic does not start with "$SYS/".
TopicClassification classify(const std::string& topic, const TopicScorer& scorer,
                             const ClassifierConfig& config = {});

enum class SensitiveMatchMode { Token, Substring };

struct SensitivePattern {
    std::string group;  // "credential", "actuator", "firmware"
    SensitiveMatchMode mode = SensitiveMatchMode::Token;
    std::string value;
};

const std::vector<SensitivePattern>& default_sensitive_patterns();
// File format: "<group> token:<word>" or "<group> substr:<fragment>" per line.
std::vector<SensitivePattern> load_sensitive_patterns(const std::string& path);

// InformationLeakage findings; evidence carries the topic name only.
std::vector<Finding> flag_sensitive_topics(const std::vector<std::string>& topics,
                                           const std::vector<SensitivePattern>& patterns =
                                               default_sensitive_patterns());

}  // namespace iotscan
