#include "vpg/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace vpg::service {

using nlohmann::json;

std::string_view to_string(Origin o) {
    switch (o) {
    case Origin::Script:
        return "script";
    case Origin::Prompt:
        return "prompt";
    case Origin::File:
        return "file";
    }
    return "script";
}

void Session::reevaluate() {
    evaluated_revision.reset();
    graph.reevaluate_dirty();
    evaluated_revision = revision;
}

// ---------------------------------------------------------------- store

std::shared_ptr<Session> SessionStore::create(WorkflowGraph graph, Origin origin) {
    std::lock_guard lock(mutex_);
    std::string id;
    do {
        id = "w" + std::to_string(next_++);
    } while (sessions_.count(id));
    auto s = std::make_shared<Session>(id, origin, std::move(graph));
    sessions_.emplace(id, s);
    return s;
}

std::shared_ptr<Session> SessionStore::find(std::string_view id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

void SessionStore::save(Session& session, const std::filesystem::path& path) {
    std::lock_guard lock(session.mutex);
    save_workflow(session.graph, path);
}

std::shared_ptr<Session> SessionStore::load(const std::filesystem::path& path) {
    WorkflowGraph g = load_workflow(path);
    g.evaluate();
    auto s = create(std::move(g), Origin::File);
    s->evaluated_revision = s->revision;
    return s;
}

// ---------------------------------------------------------------- mesh output

std::string meshes_to_json(const std::vector<PreviewMesh>& meshes, double tolerance,
                           std::optional<std::uint64_t> revision) {
    json out{{"tolerance", tolerance}, {"meshes", json::array()}};
    if (revision) {
        out["revision"] = *revision;
    }
    for (const auto& m : meshes) {
        json vs = json::array(), ts = json::array(), es = json::array();
        for (const auto& v : m.mesh.vertices) {
            vs.push_back({v.x(), v.y(), v.z()});
        }
        for (const auto& t : m.mesh.triangles) {
            ts.push_back({t[0], t[1], t[2]});
        }
        for (const auto& e : m.mesh.edges) {
            es.push_back({e[0], e[1]});
        }
        out["meshes"].push_back({{"node", m.node},
                                 {"output", m.output},
                                 {"path", format_path(m.path)},
                                 {"item", m.item},
                                 {"vertices", std::move(vs)},
                                 {"triangles", std::move(ts)},
                                 {"edges", std::move(es)}});
    }
    return out.dump();
}

std::string meshes_to_stl(const std::vector<PreviewMesh>& meshes, std::string_view name) {
    std::string out = "solid " + std::string(name) + "\n";
    char buf[160];
    for (const auto& m : meshes) {
        const auto& v = m.mesh.vertices;
        for (const auto& t : m.mesh.triangles) {
            const geo::Vector3 n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]).normalized();
            std::snprintf(buf, sizeof buf, "  facet normal %.9g %.9g %.9g\n    outer loop\n", n.x(), n.y(), n.z());
            out += buf;
            for (const auto i : t) {
                std::snprintf(buf, sizeof buf, "      vertex %.9g %.9g %.9g\n", v[i].x(), v[i].y(), v[i].z());
                out += buf;
            }
            out += "    endloop\n  endfacet\n";
        }
    }
    out += "endsolid " + std::string(name) + "\n";
    return out;
}

// ---------------------------------------------------------------- http

namespace {

json diagnostics_json(const std::vector<script::Diagnostic>& diags) {
    json arr = json::array();
    for (const auto& d : diags) {
        arr.push_back({{"severity", d.severity == script::Severity::Error ? "error" : "warning"},
                       {"code", to_string(d.code)},
                       {"line", d.loc.line},
                       {"column", d.loc.column},
                       {"message", d.message},
                       {"subject", d.subject}});
    }
    return arr;
}

json sliders_json(const WorkflowGraph& g) {
    json arr = json::array();
    for (const Node& n : g.nodes()) {
        if (!n.descriptor->is_slider()) {
            continue;
        }
        const double decimals = n.state.at("decimals");
        arr.push_back({{"node", n.id},
                       {"type", n.type_id()},
                       {"label", n.label ? json(*n.label) : json()},
                       {"min", n.state.at("min")},
                       {"max", n.state.at("max")},
                       {"value", n.state.at("value")},
                       {"decimals", decimals},
                       {"step", std::pow(10.0, -decimals)}});
    }
    return arr;
}

// Caller holds the session mutex.
json session_json(const Session& s) {
    json j{{"session_id", s.id},
           {"origin", to_string(s.origin)},
           {"revision", s.revision},
           {"evaluated_revision", s.evaluated_revision ? json(*s.evaluated_revision) : json()},
           {"document", json::parse(save_workflow_json(s.graph))},
           {"sliders", sliders_json(s.graph)}};
    if (s.outcome) {
        j["generation"] = json::parse(outcome_to_json(*s.outcome));
    }
    return j;
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                 json extra = json::object()) {
    extra["error"] = code;
    extra["message"] = message;
    reply(res, status, extra);
}

int status_for(Errc code) {
    switch (code) {
    case Errc::NotEvaluated:
        return 409;
    case Errc::ProviderError:
        return 502;
    case Errc::MalformedDocument:
        return 400;
    default:
        return 422;
    }
}

std::unique_ptr<Provider> default_provider(const std::string& body) {
    const json j = json::parse(body);
    if (j.contains("transcript")) {
        return std::make_unique<ReplayProvider>(parse_transcript(j["transcript"].dump()));
    }
    const std::string cfg = j.contains("provider") ? j["provider"].dump() : "{}";
    return std::make_unique<HttpProvider>(provider_config_from_json(cfg));
}

} // namespace

struct Service::Impl {
    ServiceOptions options;
    SessionStore store;
    httplib::Server server;

    explicit Impl(ServiceOptions o) : options(std::move(o)) {
        if (!options.provider) {
            options.provider = default_provider;
        }
        routes();
    }

    std::shared_ptr<Session> session_or_404(const httplib::Request& req, httplib::Response& res) {
        auto s = store.find(req.path_params.at("id"));
        if (!s) {
            reply_error(res, 404, "UnknownSession", "no workflow session '" + req.path_params.at("id") + "'");
        }
        return s;
    }

    static std::optional<json> body_or_400(const httplib::Request& req, httplib::Response& res) {
        try {
            json j = json::parse(req.body);
            if (j.is_object()) {
                return j;
            }
        } catch (const json::parse_error&) {
        }
        reply_error(res, 400, "BadRequest", "request body must be a JSON object");
        return std::nullopt;
    }

    // 409 when the client edited an older revision
    static bool stale(const json& body, const Session& s, httplib::Response& res) {
        if (body.contains("base_revision") && body["base_revision"].get<std::uint64_t>() != s.revision) {
            reply_error(res, 409, "RevisionConflict",
                        "edit was based on revision " + std::to_string(body["base_revision"].get<std::uint64_t>()) +
                            "; current revision is " + std::to_string(s.revision),
                        {{"revision", s.revision}});
            return true;
        }
        return false;
    }

    void create_from_script(const json& body, httplib::Response& res) {
        const bool evaluate = body.value("evaluate", true);
        auto built = build_workflow(body["script"].get<std::string>(), builtin_registry(), evaluate);
        if (!built.graph) {
            reply_error(res, 422, "InvalidScript", "script has errors",
                        {{"diagnostics", diagnostics_json(built.diagnostics)}});
            return;
        }
        auto s = store.create(std::move(*built.graph), Origin::Script);
        std::lock_guard lock(s->mutex);
        if (evaluate) {
            s->evaluated_revision = s->revision;
        }
        json j = session_json(*s);
        j["diagnostics"] = diagnostics_json(built.diagnostics);
        reply(res, 201, j);
    }

    void create_from_prompt(const json& body, const std::string& raw, httplib::Response& res) {
        GenerationConfig config = options.generation;
        // replaying a case fixture needs the acceptance check it was recorded with
        if (body.contains("transcript")) {
            const auto t = parse_transcript(body["transcript"].dump());
            if (t.case_name) {
                if (const auto* tc = bench::find_case(*t.case_name)) {
                    config = bench::fixture_config(*tc);
                }
            }
        }
        auto provider = options.provider(raw);
        // no store or session lock is held while the provider runs
        GenerationOutcome outcome =
            generate_workflow(body["prompt"].get<std::string>(), *provider, builtin_registry(), config);
        const json generation = json::parse(outcome_to_json(outcome));
        if (outcome.status != GenerationStatus::Success) {
            reply_error(res, 422, "Exhausted",
                        "no working workflow after " + std::to_string(outcome.attempts.size()) + " attempts",
                        {{"generation", generation}});
            return;
        }
        auto s = store.create(*outcome.graph, Origin::Prompt);
        std::lock_guard lock(s->mutex);
        s->outcome = std::move(outcome);
        s->evaluated_revision = s->revision;
        reply(res, 201, session_json(*s));
    }

    void routes() {
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const Error& e) {
                reply_error(res, status_for(e.code()), to_string(e.code()), e.what(), {{"subject", e.subject()}});
            } catch (const json::exception& e) {
                reply_error(res, 400, "BadRequest", e.what());
            } catch (const std::exception& e) {
                reply_error(res, 500, "InternalError", e.what());
            }
        });

        server.Post("/workflows", [this](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_or_400(req, res);
            if (!body) {
                return;
            }
            if (body->contains("script") && (*body)["script"].is_string()) {
                create_from_script(*body, res);
            } else if (body->contains("prompt") && (*body)["prompt"].is_string()) {
                create_from_prompt(*body, req.body, res);
            } else {
                reply_error(res, 400, "BadRequest", "body needs a \"script\" or a \"prompt\" string");
            }
        });

        server.Get("/workflows/:id", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) {
                return;
            }
            std::lock_guard lock(s->mutex);
            reply(res, 200, session_json(*s));
        });

        server.Patch("/workflows/:id/params", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            const auto body = s ? body_or_400(req, res) : std::nullopt;
            if (!body) {
                return;
            }
            std::lock_guard lock(s->mutex);
            if (stale(*body, *s, res)) {
                return;
            }
            const std::string node = body->at("node_id").get<std::string>();
            const std::string field = body->value("field", std::string("value"));
            const double stored = s->graph.set_param(node, field, body->at("value").get<double>());
            ++s->revision;
            json j{{"revision", s->revision}, {"node_id", node}, {"field", field}, {"value", stored}};
            try {
                s->reevaluate();
                j["evaluated"] = true;
                j["recomputed"] = s->graph.last_recomputed_nodes();
            } catch (const Error& e) {
                j["evaluated"] = false;
                j["error"] = {{"code", to_string(e.code())}, {"message", e.what()}, {"subject", e.subject()}};
            }
            reply(res, 200, j);
        });

        server.Patch("/workflows/:id/preview", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            const auto body = s ? body_or_400(req, res) : std::nullopt;
            if (!body) {
                return;
            }
            std::lock_guard lock(s->mutex);
            if (stale(*body, *s, res)) {
                return;
            }
            const std::string node = body->at("node_id").get<std::string>();
            s->graph.set_preview(node, body->at("preview").get<bool>());
            // preview does not change results, so an evaluated graph stays current
            const bool current = s->evaluated_revision == s->revision;
            ++s->revision;
            if (current) {
                s->evaluated_revision = s->revision;
            }
            reply(res, 200, {{"revision", s->revision}, {"node_id", node}, {"preview", s->graph.node(node).preview}});
        });

        server.Get("/workflows/:id/meshes", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) {
                return;
            }
            double tol = options.default_tolerance;
            if (req.has_param("tol")) {
                try {
                    tol = std::stod(req.get_param_value("tol"));
                } catch (const std::exception&) {
                    tol = -1;
                }
                if (!(tol > 0) || !std::isfinite(tol)) {
                    reply_error(res, 400, "BadRequest", "tol must be a positive number");
                    return;
                }
            }
            std::lock_guard lock(s->mutex);
            if (s->evaluated_revision != s->revision || !s->graph.evaluated()) {
                reply_error(res, 409, "NotEvaluated",
                            "revision " + std::to_string(s->revision) +
                                " has not been evaluated; change a parameter or fix the failing node first",
                            {{"revision", s->revision}});
                return;
            }
            res.status = 200;
            res.set_content(meshes_to_json(s->graph.preview_geometry(tol), tol, s->revision), "application/json");
        });

        server.Get("/components/docs", [](const httplib::Request& req, httplib::Response& res) {
            const std::string accept = req.get_header_value("Accept");
            if (accept.find("text/markdown") != std::string::npos) {
                res.set_content(export_docs(*builtin_registry()), "text/markdown; charset=utf-8");
            } else {
                res.set_content(export_catalog_json(*builtin_registry()), "application/json");
            }
        });
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Service::~Service() = default;

SessionStore& Service::sessions() { return impl_->store; }
bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int Service::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }
void Service::stop() { impl_->server.stop(); }

} // namespace vpg::service
