#include "vpg/registry.hpp"

#include "vpg/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace vpg {

namespace {

const std::set<std::string, std::less<>>& stopwords() {
    static const std::set<std::string, std::less<>> words = {
        "a",    "about", "all",  "an",   "and",  "any",  "are",   "as",   "at",   "be",    "by",   "can",
        "do",   "each",  "for",  "from", "has",  "have", "i",     "if",   "in",   "into",  "is",   "it",
        "its",  "me",    "my",   "of",   "on",   "one",  "or",    "our",  "so",   "some",  "such", "than",
        "that", "the",   "them", "then", "there", "these", "this", "to",   "was",  "we",    "what", "when",
        "which", "while", "will", "with", "would", "you",  "your"};
    return words;
}

constexpr double kTitleWeight = 3.0;

void add_terms(IndexedDoc& doc, std::string_view text, double weight) {
    for (auto& t : tokenize(text)) {
        doc.terms[t] += weight;
    }
}

} // namespace

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stopwords().contains(cur)) {
            out.push_back(cur);
        }
        cur.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

double LexicalScorer::score(const IndexedDoc& doc, const std::vector<std::string>& query_terms) const {
    double s = 0;
    for (const auto& t : query_terms) {
        if (auto it = doc.terms.find(t); it != doc.terms.end()) {
            s += it->second;
        }
    }
    return s;
}

SearchIndex::SearchIndex(const Registry& registry, std::shared_ptr<const Scorer> scorer)
    : scorer_(scorer ? std::move(scorer) : std::make_shared<LexicalScorer>()) {
    for (const auto& d : registry.all()) {
        IndexedDoc doc;
        doc.chunk.type_id = d.type_id;
        doc.chunk.text = render_record(d);
        doc.chunk.token_estimate = estimate_tokens(doc.chunk.text);
        add_terms(doc, d.name, kTitleWeight);
        add_terms(doc, d.nickname, kTitleWeight);
        add_terms(doc, d.category, 1.0);
        add_terms(doc, d.description, 1.0);
        for (const auto* ports : {&d.inputs, &d.outputs}) {
            for (const auto& p : *ports) {
                add_terms(doc, p.name, 1.0);
            }
        }
        docs_.push_back(std::move(doc));
    }
}

std::vector<SearchHit> SearchIndex::search(std::string_view query, int k) const {
    if (k < 1) {
        throw Error(Errc::InvalidArgument, "k must be at least 1");
    }
    const bool blank = std::all_of(query.begin(), query.end(),
                                   [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) {
        throw Error(Errc::EmptyQuery, "search query is empty");
    }
    const std::vector<std::string> terms = tokenize(query);
    std::vector<SearchHit> hits;
    hits.reserve(docs_.size());
    for (const auto& doc : docs_) {
        hits.push_back({doc.chunk, scorer_->score(doc, terms)});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.chunk.type_id < b.chunk.type_id;
    });
    hits.resize(std::min<std::size_t>(hits.size(), static_cast<std::size_t>(k)));
    return hits;
}

} // namespace vpg
