#pragma once

#include "vpg/value.hpp"

#include <map>
#include <string>
#include <vector>

namespace vpg {

using Path = std::vector<int>;
using Branch = std::vector<Value>;

std::string format_path(const Path& path);  // "{0;1}"

// Branch-addressed values. std::map keeps paths unique and in
// lexicographic order.
class DataTree {
public:
    DataTree() = default;
    static DataTree single(Value v, Path path = {0});

    const std::map<Path, Branch>& branches() const { return branches_; }
    Branch& branch(const Path& path) { return branches_[path]; }
    const Branch* find(const Path& path) const;

    std::size_t branch_count() const { return branches_.size(); }
    std::size_t item_count() const;
    bool empty() const { return branches_.empty(); }

    // All items in one branch {0}, in path order.
    DataTree flattened() const;
    // All items in path order.
    std::vector<Value> items() const;

    friend bool operator==(const DataTree&, const DataTree&) = default;

private:
    std::map<Path, Branch> branches_;
};

} // namespace vpg
