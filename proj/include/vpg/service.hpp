#pragma once

// HTTP service for the browser UI: in-memory workflow sessions, slider
// PATCHes with incremental re-evaluation, previewed meshes and the component
// catalog.
//
//   POST  /workflows                 {script[, evaluate]} | {prompt[, provider][, transcript]}
//   GET   /workflows/{id}
//   PATCH /workflows/{id}/params     {node_id, field, value[, base_revision]}
//   PATCH /workflows/{id}/preview    {node_id, preview[, base_revision]}
//   GET   /workflows/{id}/meshes?tol=
//   GET   /components/docs           Accept: text/markdown | application/json

#include "vpg/bench.hpp"
#include "vpg/workflow_doc.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace vpg::service {

enum class Origin { Script, Prompt, File };
std::string_view to_string(Origin o);

struct Session {
    Session(std::string id, Origin origin, WorkflowGraph graph) : id(std::move(id)), origin(origin), graph(std::move(graph)) {}

    const std::string id;
    const Origin origin;

    // guards everything below; one writer per graph
    std::mutex mutex;
    WorkflowGraph graph;
    std::optional<GenerationOutcome> outcome;
    std::uint64_t revision = 1;
    std::optional<std::uint64_t> evaluated_revision;

    // Re-evaluates dirty nodes and records the revision on success.
    // Caller holds the mutex.
    void reevaluate();
};

class SessionStore {
public:
    std::shared_ptr<Session> create(WorkflowGraph graph, Origin origin);
    std::shared_ptr<Session> find(std::string_view id) const;
    std::size_t size() const;

    // Workflow document of the session graph.
    static void save(Session& session, const std::filesystem::path& path);
    // New session with origin File, evaluated.
    std::shared_ptr<Session> load(const std::filesystem::path& path);

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
    std::uint64_t next_ = 1;
};

// Builds the provider for a prompt request. `body` is the request JSON text.
using ProviderFactory = std::function<std::unique_ptr<Provider>(const std::string& body)>;

struct ServiceOptions {
    // Default: a replay provider when the body has "transcript", else an
    // HttpProvider from the body's "provider" object.
    ProviderFactory provider;
    GenerationConfig generation;
    double default_tolerance = 0.01;
};

class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    SessionStore& sessions();

    // Blocks until stop().
    bool listen(const std::string& host, int port);
    // Binds to a free port and returns it; serve with listen_after_bind().
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ASCII STL of previewed meshes (triangles only; curves are filled).
std::string meshes_to_stl(const std::vector<PreviewMesh>& meshes, std::string_view name = "vpg");
// {revision, tolerance, meshes:[{node, output, path, item, vertices, triangles, edges}]}
std::string meshes_to_json(const std::vector<PreviewMesh>& meshes, double tolerance,
                           std::optional<std::uint64_t> revision = {});

} // namespace vpg::service
