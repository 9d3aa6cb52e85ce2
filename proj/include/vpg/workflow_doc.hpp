#pragma once

// Versioned JSON workflow document:
//   {format_version, nodes:[{id,type,position,state,literals,preview}],
//    wires:[{from:[id,idx], to:[id,idx]}]}
// Nodes are written sorted by id and wires sorted by endpoints, so saving the
// same graph twice gives identical bytes.

#include "vpg/graph.hpp"

#include <filesystem>
#include <string>

namespace vpg {

inline constexpr int kWorkflowFormatVersion = 1;

std::string save_workflow_json(const WorkflowGraph& graph);

// Throws Error(UnsupportedVersion) for any other format_version and
// Error(MalformedDocument) with a line/column or JSON-pointer location.
WorkflowGraph load_workflow_json(std::string_view text,
                                 std::shared_ptr<const Registry> registry = builtin_registry());

void save_workflow(const WorkflowGraph& graph, const std::filesystem::path& path);
WorkflowGraph load_workflow(const std::filesystem::path& path,
                            std::shared_ptr<const Registry> registry = builtin_registry());

} // namespace vpg
