#include "roe/llm_client.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>
#include <httplib.h>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;

std::string render_for_match(const std::vector<ChatMessage>& messages, double temperature) {
    char temp_buf[32];
    std::snprintf(temp_buf, sizeof(temp_buf), "%g", temperature);
    std::ostringstream out;
    out << "TEMP=" << temp_buf;
    for (const auto& m : messages) {
        std::string role = m.role;
        for (auto& c : role) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        out << "\n" << role << ":\n" << m.content;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// ScriptTable
// ---------------------------------------------------------------------------

std::string ScriptTable::to_json_string() const {
    json rules_json = json::array();
    for (const auto& r : rules) {
        rules_json.push_back(
            {{"match", r.match}, {"is_regex", r.is_regex}, {"response", r.response}});
    }
    return json{{"rules", rules_json}, {"default_response", default_response}}.dump(2);
}

ScriptTable ScriptTable::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("script table is not valid JSON: ") + e.what());
    }
    ScriptTable t;
    try {
        for (const auto& r : j.at("rules")) {
            ScriptRule rule;
            rule.match = r.at("match").get<std::string>();
            rule.is_regex = r.value("is_regex", false);
            rule.response = r.at("response").get<std::string>();
            t.rules.push_back(std::move(rule));
        }
        t.default_response = j.at("default_response").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("script table field error: ") + e.what());
    }
    return t;
}

ScriptTable ScriptTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open script table: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

// ---------------------------------------------------------------------------
// ScriptedBackend
// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(ScriptTable table) : table_(std::move(table)) {}

std::string ScriptedBackend::query(const std::vector<ChatMessage>& messages, double temperature) {
    const std::string rendered = render_for_match(messages, temperature);
    std::string response = table_.default_response;
    for (const auto& rule : table_.rules) {
        bool hit = false;
        if (rule.is_regex) {
            hit = std::regex_search(rendered, std::regex(rule.match));
        } else {
            hit = rendered.find(rule.match) != std::string::npos;
        }
        if (hit) {
            response = rule.response;
            break;
        }
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        log_.push_back({messages, temperature, response});
    }
    return response;
}

std::vector<CallRecord> ScriptedBackend::call_log() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_.size();
}

// ---------------------------------------------------------------------------
// HttpBackend
// ---------------------------------------------------------------------------

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.endpoint_url.empty()) {
        throw ConfigError("http backend requires endpoint_url");
    }
    if (!config_.api_key_env_var.empty()) {
        if (const char* key = std::getenv(config_.api_key_env_var.c_str())) {
            api_key_ = key;
        }
    }
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::query(const std::vector<ChatMessage>& messages, double temperature) {
    json body;
    body["model"] = config_.model_name;
    body["temperature"] = temperature;
    json msgs = json::array();
    for (const auto& m : messages) {
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    body["messages"] = msgs;

    httplib::Client client(config_.endpoint_url);
    client.set_connection_timeout(static_cast<time_t>(config_.timeout_s));
    client.set_read_timeout(static_cast<time_t>(config_.timeout_s));
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError("chat completion request failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status >= 400) {
        throw TransportError("chat completion returned HTTP " + std::to_string(res->status));
    }
    try {
        json parsed = json::parse(res->body);
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed chat completion response: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Record / replay
// ---------------------------------------------------------------------------

namespace {

json record_to_json(const CallRecord& r) {
    json msgs = json::array();
    for (const auto& m : r.messages) {
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    return json{{"messages", msgs}, {"temperature", r.temperature}, {"response", r.response}};
}

CallRecord record_from_json(const json& j) {
    CallRecord r;
    for (const auto& m : j.at("messages")) {
        r.messages.push_back({m.at("role").get<std::string>(),
                              m.at("content").get<std::string>()});
    }
    r.temperature = j.at("temperature").get<double>();
    r.response = j.at("response").get<std::string>();
    return r;
}

} // namespace

void append_session_record(const std::string& path, const CallRecord& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw ConfigError("cannot open session file for append: " + path);
    }
    out << record_to_json(record).dump() << "\n";
}

std::vector<CallRecord> load_session(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open session file: " + path);
    }
    std::vector<CallRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ProtocolError("session file line " + std::to_string(line_no) +
                                " is malformed: " + e.what());
        }
    }
    return records;
}

RecordingBackend::RecordingBackend(std::shared_ptr<LlmBackend> inner, std::string session_path)
    : inner_(std::move(inner)), session_path_(std::move(session_path)) {}

std::string RecordingBackend::query(const std::vector<ChatMessage>& messages,
                                    double temperature) {
    std::string response = inner_->query(messages, temperature);
    std::lock_guard<std::mutex> lock(mutex_);
    append_session_record(session_path_, {messages, temperature, response});
    return response;
}

ReplayBackend::ReplayBackend(const std::string& session_path)
    : records_(load_session(session_path)) {}

std::string ReplayBackend::query(const std::vector<ChatMessage>& messages, double temperature) {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& r : records_) {
        if (r.temperature != temperature || r.messages.size() != messages.size()) {
            continue;
        }
        bool equal = true;
        for (std::size_t i = 0; i < messages.size(); ++i) {
            if (messages[i].role != r.messages[i].role ||
                messages[i].content != r.messages[i].content) {
                equal = false;
                break;
            }
        }
        if (equal) {
            return r.response;
        }
    }
    throw ReplayMissError("no recorded response matches the request (temperature " +
                          std::to_string(temperature) + ", " +
                          std::to_string(messages.size()) + " messages)");
}

} // namespace roe
