#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace roe {

struct ChatMessage {
    std::string role; // system | user | assistant
    std::string content;
};

// One recorded backend call.
struct CallRecord {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::string response;
};

// Canonical single-string view of a request, used by scripted-rule matching
// and by record/replay keying. Format:
//   TEMP=<t>\nSYSTEM:\n<...>\nUSER:\n<...>
std::string render_for_match(const std::vector<ChatMessage>& messages, double temperature);

// ---------------------------------------------------------------------------
// Backend interface
// ---------------------------------------------------------------------------

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    // Throws TransportError (retryable) or ProtocolError.
    virtual std::string query(const std::vector<ChatMessage>& messages, double temperature) = 0;
};

// ---------------------------------------------------------------------------
// Scripted backend
// ---------------------------------------------------------------------------

struct ScriptRule {
    std::string match;            // substring, or ECMAScript regex when is_regex
    bool is_regex = false;
    std::string response;
};

struct ScriptTable {
    std::vector<ScriptRule> rules; // first matching rule wins
    std::string default_response;

    std::string to_json_string() const;
    static ScriptTable from_json_string(const std::string& text);
    static ScriptTable load_file(const std::string& path);
};

// Deterministic offline backend: answers from an ordered rule table and
// keeps an append-only call log. Safe to share across episode runners.
class ScriptedBackend : public LlmBackend {
public:
    explicit ScriptedBackend(ScriptTable table);

    std::string query(const std::vector<ChatMessage>& messages, double temperature) override;

    std::vector<CallRecord> call_log() const;
    std::size_t call_count() const;

private:
    ScriptTable table_;
    mutable std::mutex mutex_;
    std::vector<CallRecord> log_;
};

// ---------------------------------------------------------------------------
// HTTP backend (OpenAI-compatible chat completions)
// ---------------------------------------------------------------------------

struct HttpBackendConfig {
    std::string endpoint_url;          // e.g. http://localhost:8080
    std::string model_name = "gpt-3.5-turbo";
    std::string api_key_env_var = "ROE_API_KEY";
    double timeout_s = 60.0;
};

class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    // POST {endpoint}/v1/chat/completions; returns choices[0].message.content.
    std::string query(const std::vector<ChatMessage>& messages, double temperature) override;

private:
    HttpBackendConfig config_;
    std::string api_key_;
};

// ---------------------------------------------------------------------------
// Record / replay
// ---------------------------------------------------------------------------

// Wraps another backend and appends every call to a JSONL session file.
class RecordingBackend : public LlmBackend {
public:
    RecordingBackend(std::shared_ptr<LlmBackend> inner, std::string session_path);

    std::string query(const std::vector<ChatMessage>& messages, double temperature) override;

private:
    std::shared_ptr<LlmBackend> inner_;
    std::string session_path_;
    std::mutex mutex_;
};

// Serves recorded responses by exact match on (messages, temperature).
// A miss raises ReplayMissError; there is no silent live fallback.
class ReplayBackend : public LlmBackend {
public:
    explicit ReplayBackend(const std::string& session_path);

    std::string query(const std::vector<ChatMessage>& messages, double temperature) override;

private:
    std::vector<CallRecord> records_;
    mutable std::mutex mutex_;
};

std::vector<CallRecord> load_session(const std::string& path);
void append_session_record(const std::string& path, const CallRecord& record);

} // namespace roe
