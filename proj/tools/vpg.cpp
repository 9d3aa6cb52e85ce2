// vpg: command-line front end (serve, run, generate, docs, bench, fixtures)

#include "vpg/service.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace vpg;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Error(Errc::InvalidArgument, "cannot read '" + p.string() + "'", p.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(Errc::InvalidArgument, "cannot write '" + p.string() + "'", p.string());
    }
}

service::Service* g_service = nullptr;
void on_signal(int) {
    if (g_service) {
        g_service->stop();
    }
}

// ---------------------------------------------------------------- run

struct RunArgs {
    std::string input;
    std::vector<std::string> sets;
    std::string out;
    std::string save;
    double tol = 0.01;
};

int cmd_run(const RunArgs& a) {
    WorkflowGraph graph;
    if (std::filesystem::path(a.input).extension() == ".json") {
        graph = load_workflow(a.input);
    } else {
        auto built = build_workflow(slurp(a.input), builtin_registry(), false);
        for (const auto& d : built.diagnostics) {
            std::cerr << a.input << ": " << script::format_diagnostic(d) << "\n";
        }
        if (!built.graph) {
            return 1;
        }
        graph = std::move(*built.graph);
    }
    for (const auto& s : a.sets) {
        // node.field=value
        const auto eq = s.find('=');
        const auto dot = s.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw Error(Errc::InvalidArgument, "--set expects node.field=value, got '" + s + "'", s);
        }
        double v = 0;
        try {
            v = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(Errc::InvalidArgument, "--set value is not a number: '" + s + "'", s);
        }
        const double stored = graph.set_param(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), v);
        if (stored != v) {
            std::cerr << "note: " << s.substr(0, eq) << " stored as " << stored << "\n";
        }
    }
    graph.evaluate();

    const auto meshes = graph.preview_geometry(a.tol);
    if (!a.save.empty()) {
        save_workflow(graph, a.save);
    }
    if (a.out.empty()) {
        std::cout << graph.nodes().size() << " nodes, " << graph.wires().size() << " wires\n";
        for (const auto& m : meshes) {
            std::cout << "  " << m.node << "." << m.output << " " << format_path(m.path) << "[" << m.item
                      << "]: " << m.mesh.vertices.size() << " vertices, " << m.mesh.triangles.size()
                      << " triangles\n";
        }
        return 0;
    }
    const auto ext = std::filesystem::path(a.out).extension();
    if (ext == ".stl") {
        spill(a.out, service::meshes_to_stl(meshes, std::filesystem::path(a.input).stem().string()));
    } else if (ext == ".json") {
        spill(a.out, service::meshes_to_json(meshes, a.tol) + "\n");
    } else {
        throw Error(Errc::InvalidArgument, "--out must end in .json or .stl", a.out);
    }
    std::cout << "wrote " << meshes.size() << " meshes to " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string prompt_file;
    std::string provider;
    std::string replay;
    std::string record;
    std::string out;
    std::string case_name;
    bool json = false;
    int max_attempts = 0;
};

void print_outcome(const GenerationOutcome& o) {
    for (const auto& a : o.attempts) {
        std::cout << "attempt " << a.index << ": " << (a.accepted ? "accepted" : "rejected");
        if (a.graph) {
            std::cout << " (" << a.graph->nodes().size() << " nodes evaluated)";
        }
        std::cout << "\n";
        for (const auto& d : a.diagnostics) {
            std::cout << "  " << script::format_diagnostic(d) << "\n";
        }
    }
    std::cout << to_string(o.status) << " after " << o.attempts.size() << " attempt"
              << (o.attempts.size() == 1 ? "" : "s") << "\n";
}

int cmd_generate(const GenerateArgs& a) {
    std::optional<Transcript> transcript;
    if (!a.replay.empty()) {
        transcript = load_transcript(a.replay);
    }
    std::string request;
    if (!a.prompt_file.empty()) {
        request = slurp(a.prompt_file);
    } else if (transcript && transcript->request) {
        request = *transcript->request;
    } else {
        throw Error(Errc::InvalidArgument, "--prompt-file is required unless the transcript records its request");
    }

    GenerationConfig config;
    std::string case_name = a.case_name;
    if (case_name.empty() && transcript && transcript->case_name) {
        case_name = *transcript->case_name;
    }
    if (!case_name.empty()) {
        const auto* tc = bench::find_case(case_name);
        if (!tc) {
            throw Error(Errc::InvalidArgument, "unknown case '" + case_name + "'", case_name);
        }
        config = bench::fixture_config(*tc);
    }

    std::unique_ptr<Provider> provider;
    if (transcript) {
        provider = std::make_unique<ReplayProvider>(*transcript);
    } else {
        const ProviderConfig pc = a.provider.empty() ? ProviderConfig{} : provider_config_from_json(slurp(a.provider));
        config.max_attempts = pc.max_attempts;
        provider = std::make_unique<HttpProvider>(pc);
    }
    if (a.max_attempts > 0) {
        config.max_attempts = a.max_attempts;
    }

    std::optional<RecordingProvider> recorder;
    Provider* use = provider.get();
    if (!a.record.empty()) {
        use = &recorder.emplace(*provider);
    }
    const GenerationOutcome outcome = generate_workflow(request, *use, builtin_registry(), config);

    if (recorder) {
        Transcript t = recorder->transcript();
        t.request = request;
        if (!case_name.empty()) {
            t.case_name = case_name;
        }
        spill(a.record, transcript_to_json(t));
    }
    if (a.json) {
        std::cout << outcome_to_json(outcome);
    } else {
        print_outcome(outcome);
    }
    if (!a.out.empty() && !outcome.attempts.empty()) {
        spill(a.out, outcome.attempts.back().script);
    }
    return outcome.status == GenerationStatus::Success ? 0 : 1;
}

// ---------------------------------------------------------------- fixtures

int cmd_fixtures(const std::filesystem::path& src, const std::filesystem::path& out, bool check) {
    std::vector<std::filesystem::path> dirs;
    for (const auto& e : std::filesystem::directory_iterator(src)) {
        if (e.is_directory()) {
            dirs.push_back(e.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    int stale = 0;
    for (const auto& d : dirs) {
        const std::string text = transcript_to_json(bench::record_fixture_dir(d));
        const auto target = out / (d.filename().string() + ".json");
        if (check) {
            const bool same = std::filesystem::exists(target) && slurp(target) == text;
            std::cout << (same ? "current " : "STALE   ") << target.string() << "\n";
            stale += same ? 0 : 1;
        } else {
            spill(target, text);
            std::cout << "wrote " << target.string() << "\n";
        }
    }
    return stale ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vpg: parametric workflow engine"};
    app.require_subcommand(1);

    int port = 7878;
    std::string host = "127.0.0.1";
    std::vector<std::string> preload;
    auto* serve = app.add_subcommand("serve", "HTTP API for the browser UI");
    serve->add_option("--port", port, "listen port")->capture_default_str();
    serve->add_option("--host", host, "listen address")->capture_default_str();
    serve->add_option("--load", preload, "workflow documents to open as sessions")->check(CLI::ExistingFile);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "execute a script or workflow document");
    run->add_option("input", run_args.input, "script (.gfs) or workflow document (.json)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--set", run_args.sets, "node.field=value, repeatable");
    run->add_option("--out", run_args.out, "previewed meshes to .json or .stl");
    run->add_option("--save", run_args.save, "write the workflow document");
    run->add_option("--tol", run_args.tol, "chord tolerance")->capture_default_str()->check(CLI::PositiveNumber);

    GenerateArgs gen_args;
    auto* generate = app.add_subcommand("generate", "request -> script via a model provider");
    generate->add_option("--prompt-file", gen_args.prompt_file, "request text")->check(CLI::ExistingFile);
    generate->add_option("--provider", gen_args.provider, "provider config JSON")->check(CLI::ExistingFile);
    generate->add_option("--replay", gen_args.replay, "replay a recorded transcript")->check(CLI::ExistingFile);
    generate->add_option("--record", gen_args.record, "write the transcript of this run");
    generate->add_option("--case", gen_args.case_name, "check the result against a reference case");
    generate->add_option("--max-attempts", gen_args.max_attempts, "override the attempt budget");
    generate->add_option("--out", gen_args.out, "write the last attempt's script");
    generate->add_flag("--json", gen_args.json, "print the outcome as JSON");
    generate->get_option("--provider")->excludes("--replay");

    std::string docs_format = "md";
    std::string docs_out;
    auto* docs = app.add_subcommand("docs", "component documentation");
    auto* docs_export = docs->add_subcommand("export", "write the catalog");
    docs->require_subcommand(1);
    docs_export->add_option("--format", docs_format)->check(CLI::IsMember({"md", "json"}))->capture_default_str();
    docs_export->add_option("--out", docs_out, "file instead of stdout");

    std::string bench_case;
    auto* bench_cmd = app.add_subcommand("bench", "run the four reference cases");
    bench_cmd->add_option("--case", bench_case, "run one case");

    std::string fx_src, fx_out;
    bool fx_check = false;
    auto* fixtures = app.add_subcommand("fixtures", "record generation fixtures from canned responses");
    fixtures->add_option("src", fx_src, "directory of fixture sources")->required()->check(CLI::ExistingDirectory);
    fixtures->add_option("out", fx_out, "directory for transcripts")->required()->check(CLI::ExistingDirectory);
    fixtures->add_flag("--check", fx_check, "compare instead of writing; nonzero if any differ");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) {
            service::Service svc;
            for (const auto& p : preload) {
                const auto s = svc.sessions().load(p);
                std::cout << "session " << s->id << " <- " << p << "\n";
            }
            g_service = &svc;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on http://" << host << ":" << port << std::endl;
            if (!svc.listen(host, port)) {
                std::cerr << "cannot listen on " << host << ":" << port << "\n";
                return 1;
            }
            return 0;
        }
        if (*run) {
            return cmd_run(run_args);
        }
        if (*generate) {
            return cmd_generate(gen_args);
        }
        if (*docs_export) {
            const auto& reg = *builtin_registry();
            const std::string text = docs_format == "md" ? export_docs(reg) : export_catalog_json(reg);
            if (docs_out.empty()) {
                std::cout << text;
            } else {
                spill(docs_out, text);
            }
            return 0;
        }
        if (*bench_cmd) {
            bench::BenchOptions opt;
            if (!bench_case.empty()) {
                opt.only = bench_case;
            }
            const auto reports = bench::run_benchmarks(opt);
            std::cout << bench::format_report(reports);
            const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass(); });
            return ok ? 0 : 1;
        }
        if (*fixtures) {
            return cmd_fixtures(fx_src, fx_out, fx_check);
        }
    } catch (const Error& e) {
        std::cerr << "error " << to_string(e.code()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
