#include "solvers.hpp"

#include "vpg/error.hpp"
#include "vpg/graph.hpp"

#include <algorithm>
#include <set>

namespace vpg {

namespace {

struct InputData {
    const DataTree* tree = nullptr;  // null: absent optional input
    DataTree owned;
};

} // namespace

std::string WorkflowGraph::upstream_chain(std::size_t index) const {
    std::vector<std::string> chain{nodes_[index].id};
    std::set<std::size_t> seen{index};
    std::size_t cur = index;
    while (true) {
        const auto& in = incoming_[cur];
        const auto it = std::find_if(in.begin(), in.end(), [](int w) { return w >= 0; });
        if (it == in.end()) {
            break;
        }
        cur = index_of(wires_[static_cast<std::size_t>(*it)].from.node);
        if (!seen.insert(cur).second) {
            break;
        }
        chain.push_back(nodes_[cur].id);
    }
    std::string out;
    for (auto i = chain.rbegin(); i != chain.rend(); ++i) {
        out += (out.empty() ? "" : " -> ") + *i;
    }
    return out;
}

NodeOutputs WorkflowGraph::solve_node(std::size_t index) const {
    const Node& node = nodes_[index];
    const ComponentDescriptor& d = *node.descriptor;
    const auto* solver = detail::find_solver(d.type_id);
    if (!solver) {
        throw Error(Errc::EvaluationError, "no evaluator for component '" + d.type_id + "'", node.id);
    }

    const std::size_t n_in = d.inputs.size();
    std::vector<InputData> inputs(n_in);
    for (std::size_t p = 0; p < n_in; ++p) {
        const PortDescriptor& port = d.inputs[p];
        InputData& in = inputs[p];
        if (const int w = incoming_[index][p]; w >= 0) {
            const PortRef& from = wires_[static_cast<std::size_t>(w)].from;
            in.tree = &(*cache_[index_of(from.node)])[static_cast<std::size_t>(from.port)];
            for (const auto& [path, branch] : in.tree->branches()) {
                for (const Value& v : branch) {
                    if (!kind_accepts(port.kind, v.kind())) {
                        throw Error(Errc::KindMismatch,
                                    "input " + std::to_string(p) + " (" + port.name + ") expects " +
                                        std::string(to_string(port.kind)) + " but received " +
                                        std::string(to_string(v.kind())) + " from '" + from.node + "'",
                                    node.id);
                    }
                }
            }
            continue;
        }
        const Literal* lit = nullptr;
        if (const auto it = node.literals.find(static_cast<int>(p)); it != node.literals.end()) {
            lit = &it->second;
        } else if (port.default_value) {
            lit = &*port.default_value;
        }
        if (lit) {
            in.owned = DataTree::single(*literal_to_value(*lit, port.kind));
            in.tree = &in.owned;
        } else if (!port.optional) {
            throw Error(Errc::MissingRequiredInput,
                        "input " + std::to_string(p) + " (" + port.name + ") of '" + node.id +
                            "' is not connected and has no value",
                        node.id + "." + std::to_string(p));
        }
    }

    detail::SolveArgs args{node, std::vector<const Value*>(n_in), std::vector<const Branch*>(n_in),
                           std::vector<const DataTree*>(n_in)};
    NodeOutputs out(d.outputs.size());
    auto emit = [&](std::vector<Branch>&& result, const Path& path, std::size_t iteration, std::size_t iterations) {
        for (std::size_t o = 0; o < d.outputs.size(); ++o) {
            Branch& values = result[o];
            if (d.outputs[o].access == Access::Item) {
                out[o].branch(path).push_back(std::move(values.at(0)));
                continue;
            }
            Path dest = path;
            if (iterations > 1) {
                dest.push_back(static_cast<int>(iteration));
            }
            Branch& target = out[o].branch(dest);
            std::move(values.begin(), values.end(), std::back_inserter(target));
        }
    };

    const bool tree_mode = std::any_of(d.inputs.begin(), d.inputs.end(),
                                       [](const PortDescriptor& p) { return p.access == Access::Tree; });
    if (tree_mode) {
        for (std::size_t p = 0; p < n_in; ++p) {
            args.trees[p] = inputs[p].tree;
        }
        emit((*solver)(args), {0}, 0, 1);
        return out;
    }

    // Paths: every multi-branch input must carry the same path set; a
    // single-branch input is broadcast to all of them.
    std::vector<Path> paths;
    const DataTree* reference = nullptr;
    std::size_t reference_port = 0;
    for (std::size_t p = 0; p < n_in; ++p) {
        const DataTree* t = inputs[p].tree;
        if (!t || t->branch_count() <= 1) {
            continue;
        }
        if (!reference) {
            reference = t;
            reference_port = p;
            continue;
        }
        const bool same = t->branch_count() == reference->branch_count() &&
                          std::equal(t->branches().begin(), t->branches().end(), reference->branches().begin(),
                                     [](const auto& a, const auto& b) { return a.first == b.first; });
        if (!same) {
            throw Error(Errc::EvaluationError,
                        "branch paths of input " + std::to_string(p) + " do not match those of input " +
                            std::to_string(reference_port),
                        node.id);
        }
    }
    if (reference) {
        for (const auto& [path, b] : reference->branches()) {
            paths.push_back(path);
        }
    } else {
        for (std::size_t p = 0; p < n_in && paths.empty(); ++p) {
            if (inputs[p].tree && inputs[p].tree->branch_count() == 1) {
                paths.push_back(inputs[p].tree->branches().begin()->first);
            }
        }
        if (paths.empty()) {
            paths.push_back({0});
        }
    }

    std::vector<const Branch*> branch(n_in);
    for (const Path& path : paths) {
        std::size_t longest = 0;
        bool any_item = false, any_empty = false;
        for (std::size_t p = 0; p < n_in; ++p) {
            const DataTree* t = inputs[p].tree;
            branch[p] = nullptr;
            if (!t || t->empty()) {
                continue;
            }
            branch[p] = t->branch_count() == 1 ? &t->branches().begin()->second : t->find(path);
            if (d.inputs[p].access == Access::Item) {
                any_item = true;
                any_empty = any_empty || branch[p]->empty();
                longest = std::max(longest, branch[p]->size());
            }
        }
        const std::size_t iterations = !any_item ? 1 : any_empty ? 0 : longest;
        // List outputs of a repeated evaluation go to sub-branches instead.
        for (std::size_t o = 0; o < out.size(); ++o) {
            if (iterations <= 1 || d.outputs[o].access == Access::Item) {
                out[o].branch(path);
            }
        }
        for (std::size_t it = 0; it < iterations; ++it) {
            for (std::size_t p = 0; p < n_in; ++p) {
                args.items[p] = nullptr;
                args.lists[p] = branch[p];
                if (branch[p] && d.inputs[p].access == Access::Item && !branch[p]->empty()) {
                    args.items[p] = &(*branch[p])[std::min(it, branch[p]->size() - 1)];
                }
            }
            emit((*solver)(args), path, it, iterations);
        }
    }
    return out;
}

void WorkflowGraph::run(bool full) {
    last_recomputed_.clear();
    if (full) {
        for (auto& c : cache_) {
            c.reset();
        }
    }
    for (std::size_t i : order()) {
        if (cache_[i]) {
            continue;
        }
        try {
            cache_[i] = solve_node(i);
        } catch (const Error& e) {
            if (e.code() == Errc::EvaluationError && e.subject() == nodes_[i].id) {
                throw;
            }
            if (e.code() == Errc::MissingRequiredInput) {
                throw;
            }
            throw Error(Errc::EvaluationError,
                        "node '" + nodes_[i].id + "' (" + nodes_[i].type_id() + "): " + e.what() + " [upstream: " +
                            upstream_chain(i) + "]",
                        nodes_[i].id);
        } catch (const geo::GeometryError& e) {
            throw Error(Errc::EvaluationError,
                        "node '" + nodes_[i].id + "' (" + nodes_[i].type_id() + "): " + std::string(geo::to_string(e.code())) +
                            ": " + e.what() + " [upstream: " +
                            upstream_chain(i) + "]",
                        nodes_[i].id);
        }
        last_recomputed_.push_back(nodes_[i].id);
    }
}

void WorkflowGraph::evaluate() { run(true); }

void WorkflowGraph::reevaluate_dirty() { run(false); }

bool WorkflowGraph::evaluated() const {
    return std::all_of(cache_.begin(), cache_.end(), [](const auto& c) { return c.has_value(); });
}

const NodeOutputs& WorkflowGraph::outputs(std::string_view node) const {
    const std::size_t i = index_of(node);
    if (!cache_[i]) {
        throw Error(Errc::NotEvaluated, "node '" + std::string(node) + "' has not been evaluated", std::string(node));
    }
    return *cache_[i];
}

std::map<std::string, NodeOutputs> WorkflowGraph::results() const {
    std::map<std::string, NodeOutputs> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (cache_[i]) {
            out.emplace(nodes_[i].id, *cache_[i]);
        }
    }
    return out;
}

std::vector<PreviewMesh> WorkflowGraph::preview_geometry(double chord_tolerance) const {
    std::vector<PreviewMesh> meshes;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (!n.preview) {
            continue;
        }
        const NodeOutputs& outs = outputs(n.id);
        for (std::size_t o = 0; o < outs.size(); ++o) {
            for (const auto& [path, branch] : outs[o].branches()) {
                for (std::size_t k = 0; k < branch.size(); ++k) {
                    const Value& v = branch[k];
                    if (!v.is_geometry()) {
                        continue;
                    }
                    PreviewMesh m{n.id, static_cast<int>(o), path, static_cast<int>(k), {}};
                    m.mesh = v.kind() == ValueKind::Curve ? geo::tessellate(v.as_curve(), chord_tolerance)
                                                          : geo::tessellate(v.as_solid(), chord_tolerance);
                    meshes.push_back(std::move(m));
                }
            }
        }
    }
    return meshes;
}

} // namespace vpg
