#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// binary. Each returns how many cases ran and the first few failures.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vpg::testing {

struct PropertyResult {
    explicit PropertyResult(std::string name = {}) : name(std::move(name)) {}

    std::string name;
    int cases = 0;
    int failed = 0;
    std::vector<std::string> failures;  // first few only

    bool pass() const { return cases > 0 && failed == 0; }
    void fail(std::string what);
};

// Incremental re-evaluation after random slider/literal edits matches a full
// evaluation of the same graph. `sequences` counts graphs that evaluated.
PropertyResult incremental_equivalence(int sequences, std::uint64_t seed);

// Every mutation family yields exactly its error code.
PropertyResult validator_soundness(int per_family, std::uint64_t seed);

// Random valid scripts validate clean and execute.
PropertyResult validator_completeness(int scripts, std::uint64_t seed);

// Longest-list matching and flatten, on random lists and trees.
PropertyResult tree_laws(int cases, std::uint64_t seed);

// Expression evaluator against the oracle table (expr_oracle.json).
PropertyResult expression_table(const std::filesystem::path& table, double tol = 1e-12);

// parse_docs(export_docs(builtin)) == builtin descriptors.
PropertyResult docs_round_trip();

std::string summary(const PropertyResult& r);

} // namespace vpg::testing
