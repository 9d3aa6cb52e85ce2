#include "vpg/data_tree.hpp"

namespace vpg {

std::string format_path(const Path& path) {
    std::string out = "{";
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) {
            out += ';';
        }
        out += std::to_string(path[i]);
    }
    return out + "}";
}

DataTree DataTree::single(Value v, Path path) {
    DataTree t;
    t.branches_[std::move(path)].push_back(std::move(v));
    return t;
}

const Branch* DataTree::find(const Path& path) const {
    const auto it = branches_.find(path);
    return it == branches_.end() ? nullptr : &it->second;
}

std::size_t DataTree::item_count() const {
    std::size_t n = 0;
    for (const auto& [path, b] : branches_) {
        n += b.size();
    }
    return n;
}

std::vector<Value> DataTree::items() const {
    std::vector<Value> out;
    out.reserve(item_count());
    for (const auto& [path, b] : branches_) {
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

DataTree DataTree::flattened() const {
    DataTree t;
    t.branches_[{0}] = items();
    return t;
}

} // namespace vpg
