#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace trapdoc {

struct StubEchoWithMarker {
    std::string marker;
};
struct StubFixedResponse {
    std::string text;
};
struct StubFailAlways {};

using LlmStub = std::variant<StubEchoWithMarker, StubFixedResponse, StubFailAlways>;

struct LlmConfig {
    std::string endpoint_url;
    std::string model_name;
    std::string api_key_env = "TRAPDOC_LLM_API_KEY";
    double temperature = 1.0;
    int max_output_tokens = 2048;
    double timeout_seconds = 60.0;
    int retries = 2;
    double backoff_base_seconds = 1.0;
    std::optional<LlmStub> stub;  // takes precedence over the endpoint
};

struct ChatMessage {
    std::string role;  // "system" or "user"
    std::string content;
};

// Chat completion call. Stub mode never touches the network. Endpoint mode
// POSTs the usual chat-completions JSON with bearer auth and retries
// transport errors and 429/5xx with exponential backoff.
std::string complete(const std::vector<ChatMessage>& messages, const LlmConfig& config);

}  // namespace trapdoc
