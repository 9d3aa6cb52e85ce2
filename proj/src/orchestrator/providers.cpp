#include "vpg/orchestrator.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vpg {

using nlohmann::json;

namespace {

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw Error(Errc::InvalidArgument, "endpoint '" + url + "' has no scheme", url);
    }
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, slash), url.substr(slash)};
}

} // namespace

// ---------------------------------------------------------------- config

ProviderConfig provider_config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidArgument, std::string("provider config: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(Errc::InvalidArgument, "provider config must be a JSON object");
    }
    ProviderConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "endpoint") {
                c.endpoint = v.get<std::string>();
            } else if (key == "model") {
                c.model = v.get<std::string>();
            } else if (key == "api_key_env") {
                c.api_key_env = v.get<std::string>();
            } else if (key == "temperature") {
                c.temperature = v.get<double>();
            } else if (key == "timeout_s") {
                c.timeout_s = v.get<double>();
            } else if (key == "max_attempts") {
                c.max_attempts = v.get<int>();
            } else {
                throw Error(Errc::InvalidArgument, "provider config: unknown key '" + key + "'", key);
            }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("provider config: ") + e.what());
    }
    if (c.max_attempts < 1) {
        throw Error(Errc::InvalidArgument, "provider config: max_attempts must be at least 1", "max_attempts");
    }
    if (c.timeout_s <= 0) {
        throw Error(Errc::InvalidArgument, "provider config: timeout_s must be positive", "timeout_s");
    }
    return c;
}

std::string provider_config_to_json(const ProviderConfig& c) {
    // the key itself never goes to disk, only the variable name
    return json{{"endpoint", c.endpoint},       {"model", c.model},         {"api_key_env", c.api_key_env},
                {"temperature", c.temperature}, {"timeout_s", c.timeout_s}, {"max_attempts", c.max_attempts}}
        .dump(2);
}

// ---------------------------------------------------------------- http

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) { split_url(config_.endpoint); }

std::string HttpProvider::complete(const std::vector<Message>& messages) {
    const Endpoint ep = split_url(config_.endpoint);
    httplib::Client client(ep.base);
    const auto secs = static_cast<time_t>(config_.timeout_s);
    const auto usecs = static_cast<time_t>((config_.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    json body{{"model", config_.model}, {"temperature", config_.temperature}, {"messages", json::array()}};
    for (const auto& m : messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }

    const auto res = client.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
        throw Error(Errc::ProviderError,
                    "request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()), config_.endpoint);
    }
    if (res->status != 200) {
        throw Error(Errc::ProviderError,
                    "provider answered HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300),
                    config_.endpoint);
    }
    try {
        const json reply = json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(Errc::ProviderError, std::string("unexpected provider reply: ") + e.what(), config_.endpoint);
    }
}

// ---------------------------------------------------------------- transcripts

Transcript parse_transcript(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedDocument, std::string("transcript: ") + e.what());
    }
    if (!j.is_array()) {
        throw Error(Errc::MalformedDocument, "transcript must be a JSON array");
    }
    Transcript t;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        if (!e.is_object() || !e.contains("prompt_hash") || !e.contains("response") || !e["prompt_hash"].is_string() ||
            !e["response"].is_string()) {
            throw Error(Errc::MalformedDocument,
                        "transcript entry " + std::to_string(i) + " needs string prompt_hash and response");
        }
        t.entries.push_back({e["prompt_hash"].get<std::string>(), e["response"].get<std::string>()});
        if (i == 0 && e.contains("request") && e["request"].is_string()) {
            t.request = e["request"].get<std::string>();
        }
        if (i == 0 && e.contains("case") && e["case"].is_string()) {
            t.case_name = e["case"].get<std::string>();
        }
    }
    return t;
}

std::string transcript_to_json(const Transcript& t) {
    json arr = json::array();
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        json e{{"prompt_hash", t.entries[i].prompt_hash}, {"response", t.entries[i].response}};
        if (i == 0 && t.request) {
            e["request"] = *t.request;
        }
        if (i == 0 && t.case_name) {
            e["case"] = *t.case_name;
        }
        arr.push_back(std::move(e));
    }
    return arr.dump(2) + "\n";
}

Transcript load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::InvalidArgument, "cannot read transcript '" + path.string() + "'", path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_transcript(ss.str());
}

ReplayProvider::ReplayProvider(Transcript transcript) : transcript_(std::move(transcript)) {}

std::string ReplayProvider::complete(const std::vector<Message>& messages) {
    if (next_ >= transcript_.entries.size()) {
        throw Error(Errc::TranscriptExhausted, "transcript has only " + std::to_string(transcript_.entries.size()) +
                                                   " responses; call " + std::to_string(next_ + 1) + " has none");
    }
    const std::string hash = prompt_hash(messages);
    const auto& e = transcript_.entries[next_];
    if (hash != e.prompt_hash) {
        throw Error(Errc::TranscriptMismatch,
                    "prompt for call " + std::to_string(next_ + 1) + " hashes to " + hash.substr(0, 12) +
                        "..., transcript recorded " + e.prompt_hash.substr(0, 12) + "...",
                    hash);
    }
    ++next_;
    return e.response;
}

std::string RecordingProvider::complete(const std::vector<Message>& messages) {
    std::string response = inner_.complete(messages);
    transcript_.entries.push_back({prompt_hash(messages), response});
    return response;
}

std::string ScriptedProvider::complete(const std::vector<Message>&) {
    if (next_ >= responses_.size()) {
        throw Error(Errc::TranscriptExhausted, "no scripted response left");
    }
    return responses_[next_++];
}

} // namespace vpg
