#pragma once

#include "vpg/graph.hpp"

namespace vpg::detail {

// Inputs of one component evaluation. Item ports see one value, list ports
// a whole branch, tree ports the whole tree. Absent optional inputs are null.
struct SolveArgs {
    const Node& node;
    std::vector<const Value*> items;
    std::vector<const Branch*> lists;
    std::vector<const DataTree*> trees;

    const Value& item(int i) const;
    const Branch& list(int i) const;
    const DataTree& tree(int i) const;
    double state(std::string_view field) const;
};

// One branch per output port; item outputs hold exactly one value.
using Solver = std::vector<Branch> (*)(const SolveArgs&);

const Solver* find_solver(std::string_view type_id);

} // namespace vpg::detail
