#pragma once

// The four reference modeling tasks: slider specs, parameter rows, and
// closed-form oracles checked against the evaluated workflow.

#include "vpg/orchestrator.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vpg::bench {

struct SliderSpec {
    std::string node;
    double min = 0;
    double max = 1;
    double value = 0;
    int decimals = 0;
    bool integer = false;
};

// Slider values keyed by node id of the reference script.
using Params = std::map<std::string, double, std::less<>>;

struct Check {
    std::string what;
    bool pass = true;
    double delta = 0;  // largest deviation seen (0 for structural checks)
    std::string detail;
};

struct OracleOptions {
    // Volume used for the measured side of volume checks; replaceable so the
    // harness can be shown to catch a broken kernel.
    std::function<double(const geo::Solid&)> volume;
    double tolerance = 1e-9;
};

struct TestCase {
    std::string name;     // e.g. single_object_2d
    std::string request;  // request text used for generation fixtures
    std::string script;   // reference script name (data/scripts/<script>.gfs)
    std::vector<SliderSpec> sliders;
    std::vector<Params> rows;  // first row: defaults
    // Checks the geometry shown by the workflow against the closed form.
    std::function<std::vector<Check>(const std::vector<Value>& shown, const Params& p, const OracleOptions& opt)> oracle;

    Params defaults() const;
};

const std::vector<TestCase>& cases();
const TestCase* find_case(std::string_view name);

// Compiled-in reference scripts by name ("test1" ... "test4").
const std::string& reference_script(std::string_view name);

// Geometry values of every previewed node's outputs, in node order.
std::vector<Value> shown_geometry(const WorkflowGraph& graph);

struct RowReport {
    Params params;
    std::vector<Check> checks;
    bool pass() const;
};

struct CaseReport {
    std::string name;
    std::vector<Check> setup;  // script executes, slider specs
    std::vector<RowReport> rows;
    std::chrono::duration<double> elapsed{0};
    double time_limit_s = 1.0;
    bool pass() const;
    double max_delta() const;
};

struct BenchOptions {
    std::optional<std::string> only;  // case name
    OracleOptions oracle;
};

CaseReport run_case(const TestCase& tc, const BenchOptions& options = {});
std::vector<CaseReport> run_benchmarks(const BenchOptions& options = {});

// One line per case plus indented failing checks.
std::string format_report(const std::vector<CaseReport>& reports);

// Rejects a generated workflow whose default geometry misses the oracle;
// diagnostics are OracleMismatch warnings.
AcceptanceCheck acceptance_check(const TestCase& tc, OracleOptions options = {});

// ---------------------------------------------------------------- fixtures
// A generation fixture is a transcript tagged with a case name. It is
// recorded from canned responses and replayed with the case's request and
// acceptance check, so both sides build identical prompts.

GenerationConfig fixture_config(const TestCase& tc);

// Runs generation over the responses and returns the tagged transcript.
Transcript record_fixture(const TestCase& tc, std::vector<std::string> responses);

// Source directory layout: case.txt (case name) and 1.txt, 2.txt, ...
Transcript record_fixture_dir(const std::filesystem::path& dir);

// InvalidArgument if the transcript has no known case.
GenerationOutcome replay_fixture(const Transcript& transcript);

} // namespace vpg::bench
