#include "vpg/orchestrator.hpp"

namespace vpg {

namespace detail {
// fewshot_data.cpp, generated from data/fewshot/*.txt
extern const char* const kFewShotText[];
extern const char* const kFewShotName[];
extern const std::size_t kFewShotCount;
} // namespace detail

const std::vector<FewShotPair>& builtin_examples() {
    static const std::vector<FewShotPair> pairs = [] {
        std::vector<FewShotPair> out;
        for (std::size_t i = 0; i < detail::kFewShotCount; ++i) {
            // request paragraph, a "---" line, then the script
            const std::string text = detail::kFewShotText[i];
            const auto sep = text.find("\n---\n");
            if (sep == std::string::npos) {
                throw Error(Errc::MalformedDocument, "few-shot example " + std::to_string(i + 1) + " has no '---' line");
            }
            out.push_back({text.substr(0, sep), text.substr(sep + 5)});
        }
        return out;
    }();
    return pairs;
}

} // namespace vpg
